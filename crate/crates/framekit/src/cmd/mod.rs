//! One module per subcommand.

pub mod cuntz;
pub mod hframe;
pub mod metric;
pub mod multiplier;
pub mod ovf;
pub mod pasf;
pub mod sip;
pub mod vsdilate;

use linops::Vector;

/// `0`, `e_k` (1-based) or the coordinate list.
pub fn describe_vector(v: &Vector) -> String {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i].norm() > 1e-12).collect();
    match nz.as_slice() {
        [] => "0".into(),
        [k] if (v[*k] - linops::re(1.0)).norm() <= 1e-12 => format!("e{}", k + 1),
        _ => {
            let parts: Vec<String> = v
                .iter()
                .map(|z| {
                    if z.im.abs() <= 1e-12 {
                        crate::report::num(z.re)
                    } else {
                        let sign = if z.im < 0.0 { '-' } else { '+' };
                        format!("{}{sign}{}i", crate::report::num(z.re), crate::report::num(z.im.abs()))
                    }
                })
                .collect();
            format!("({})", parts.join(", "))
        }
    }
}
