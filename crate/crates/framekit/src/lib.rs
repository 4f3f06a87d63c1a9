//! `framekit` command-line front end.
//!
//! Each subcommand loads JSON input, runs one module operation and returns a
//! [`Report`]. Exit status: 0 when every check passes, 1 on a certified failure
//! (a check failed or a hypothesis is violated), 2 on I/O or validation errors.

pub mod cmd;
mod io;
pub mod report;

pub use report::{Check, CheckKind, Report};

use clap::{Parser, Subcommand};
use std::fmt;

#[derive(Debug, Parser)]
#[command(name = "framekit", version, about = "Finite frames, dilations and almost-identity commutators")]
pub struct Cli {
    /// Tolerance override for the numeric checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Exact rational arithmetic (vsdilate only).
    #[arg(long, global = true)]
    pub rational: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frames in finite-dimensional Hilbert spaces.
    Hframe(cmd::hframe::Args),
    /// p-approximate Schauder frames.
    Pasf(cmd::pasf::Args),
    /// Semi-inner-product identities for p-ASFs on l^p.
    Sip(cmd::sip::Args),
    /// Lipschitz frames on sampled metric spaces.
    Metric(cmd::metric::Args),
    /// Lipschitz multipliers.
    Multiplier(cmd::multiplier::Args),
    /// Weak operator-valued frames.
    Ovf(cmd::ovf::Args),
    /// Dilations of linear maps on vector spaces.
    Vsdilate(cmd::vsdilate::Args),
    /// Cuntz words and commutators close to the identity.
    Cuntz(cmd::cuntz::Args),
}

/// Global settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub tol: Option<f64>,
    pub seed: u64,
    pub rational: bool,
}

impl Ctx {
    /// The override if given, else the command's default.
    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Errors that stop a command before a report is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad input, unreadable file or malformed JSON.
    Input(String),
    /// A hypothesis of the requested construction fails on this input.
    Hypothesis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Hypothesis(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<linops::LinopsError> for CliError {
    fn from(e: linops::LinopsError) -> Self {
        match e {
            linops::LinopsError::NotInvertible { .. } => CliError::Hypothesis(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<hframe::HframeError> for CliError {
    fn from(e: hframe::HframeError) -> Self {
        use hframe::HframeError as E;
        match e {
            E::NotAFrame { .. } | E::HypothesisViolated(_) | E::DependentInput(_) => CliError::Hypothesis(e.to_string()),
            E::Linops(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<pasf::PasfError> for CliError {
    fn from(e: pasf::PasfError) -> Self {
        use pasf::PasfError as E;
        match e {
            E::NotInvertible | E::NotADual | E::HypothesisViolated(_) => CliError::Hypothesis(e.to_string()),
            E::Linops(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<sip::SipError> for CliError {
    fn from(e: sip::SipError) -> Self {
        use sip::SipError as E;
        match e {
            E::NotInvertible | E::NotParseval(_) => CliError::Hypothesis(e.to_string()),
            E::Linops(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<metricframe::MetricError> for CliError {
    fn from(e: metricframe::MetricError) -> Self {
        match e {
            metricframe::MetricError::HypothesisViolated(_) => CliError::Hypothesis(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<multiplier::MultiplierError> for CliError {
    fn from(e: multiplier::MultiplierError) -> Self {
        use multiplier::MultiplierError as E;
        match e {
            E::Metric(m) => m.into(),
            E::Linops(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ovf::OvfError> for CliError {
    fn from(e: ovf::OvfError) -> Self {
        use ovf::OvfError as E;
        match e {
            E::NotInvertible | E::HypothesisViolated(_) => CliError::Hypothesis(e.to_string()),
            E::Linops(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<vsdilate::VsError> for CliError {
    fn from(e: vsdilate::VsError) -> Self {
        use vsdilate::VsError as E;
        match e {
            E::NotInvertible(_) | E::HypothesisViolated(_) => CliError::Hypothesis(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<cuntz::CuntzError> for CliError {
    fn from(e: cuntz::CuntzError) -> Self {
        match e {
            cuntz::CuntzError::NotConverged(_) => CliError::Hypothesis(e.to_string()),
            cuntz::CuntzError::Linops(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Report> {
    let ctx = Ctx { tol: cli.tol, seed: cli.seed, rational: cli.rational };
    if let Some(t) = ctx.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Input(format!("--tol must be positive and finite, got {t}")));
        }
    }
    if ctx.rational && !matches!(cli.command, Command::Vsdilate(_)) {
        return Err(CliError::Input("--rational applies to vsdilate only".into()));
    }
    match &cli.command {
        Command::Hframe(a) => cmd::hframe::run(a, &ctx),
        Command::Pasf(a) => cmd::pasf::run(a, &ctx),
        Command::Sip(a) => cmd::sip::run(a, &ctx),
        Command::Metric(a) => cmd::metric::run(a, &ctx),
        Command::Multiplier(a) => cmd::multiplier::run(a, &ctx),
        Command::Ovf(a) => cmd::ovf::run(a, &ctx),
        Command::Vsdilate(a) => cmd::vsdilate::run(a, &ctx),
        Command::Cuntz(a) => cmd::cuntz::run(a, &ctx),
    }
}

/// Renders the outcome and returns the exit status.
pub fn render(cli: &Cli, outcome: Result<Report>) -> (i32, String) {
    match outcome {
        Ok(r) => {
            let code = if r.passed() { 0 } else { 1 };
            (code, if cli.json { r.to_json() + "\n" } else { r.to_text() })
        }
        Err(e) => (e.exit_code(), format!("{e}\n")),
    }
}
