use clap::Parser;
use framekit::{render, run, Cli};

fn main() {
    let cli = Cli::parse();
    let (code, text) = render(&cli, run(&cli));
    if code == 2 {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    std::process::exit(code);
}
