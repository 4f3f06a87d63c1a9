use crate::{LipschitzFamily, MetricError, MetricSample, Result};
use std::str::FromStr;

/// Infinite 1-frames on intervals of the line, truncated to `m` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedFamily {
    /// `f_0 = 1`, `f_n(x) = (log x)^n / n!` on `[a, ∞)`, `a ≥ 1`.
    Log(f64),
    /// `f_n(x) = (1 − 1/x)^n` on `[1/(1−a), 1/(1−b)]`, `0 ≤ a < b < 1`.
    Rational(f64, f64),
}

impl NamedFamily {
    /// Interval on which the family is defined.
    pub fn domain(&self) -> (f64, f64) {
        match *self {
            NamedFamily::Log(a) => (a, f64::INFINITY),
            NamedFamily::Rational(a, b) => (1.0 / (1.0 - a), 1.0 / (1.0 - b)),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            NamedFamily::Log(a) if a.is_finite() && a >= 1.0 => Ok(()),
            NamedFamily::Log(a) => Err(MetricError::InvalidInput(format!("log family needs a >= 1, got {a}"))),
            NamedFamily::Rational(a, b) if 0.0 <= a && a < b && b < 1.0 => Ok(()),
            NamedFamily::Rational(a, b) => Err(MetricError::InvalidInput(format!(
                "rational family needs 0 <= a < b < 1, got ({a}, {b})"
            ))),
        }
    }
}

impl FromStr for NamedFamily {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || MetricError::InvalidInput(format!("unknown family {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args: Vec<f64> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let fam = match (name.trim(), args.as_slice()) {
            ("log", [a]) => NamedFamily::Log(*a),
            ("rational", [a, b]) => NamedFamily::Rational(*a, *b),
            _ => return Err(bad()),
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// `Σ_{j ≥ k} L^j / j!` for `L ≥ 0`, bounded above.
fn exp_tail(l: f64, k: usize) -> f64 {
    let mut term = 1.0;
    for j in 1..=k {
        term *= l / j as f64;
    }
    let mut sum = 0.0;
    let mut j = k;
    loop {
        sum += term;
        let ratio = l / (j + 1) as f64;
        if ratio <= 0.5 && term * ratio <= 1e-17 * sum {
            // remaining terms are dominated by a geometric series with this ratio
            let next = term * ratio;
            sum += next / (1.0 - ratio);
            break;
        }
        term *= ratio;
        j += 1;
    }
    sum * (1.0 + 1e-12)
}

/// Value table of the first `m` terms with certified tail bounds.
///
/// Both families are increasing in `x` term by term, so the dropped tail
/// `Σ_{n≥m}|Δf_n|` equals the increment of the tail sum and is bounded by the
/// Lipschitz number of that sum.
pub fn make_named_family(fam: NamedFamily, s: &MetricSample, m: usize) -> Result<LipschitzFamily> {
    fam.validate()?;
    if m == 0 {
        return Err(MetricError::InvalidInput("need at least one term".into()));
    }
    let xs = s.coordinates()?;
    let (lo, hi) = fam.domain();
    let slack = 1e-12 * lo.abs().max(1.0);
    if let Some(x) = xs.iter().find(|&&x| !(x >= lo - slack && x <= hi + slack * hi.max(1.0))) {
        return Err(MetricError::OutOfDomain(format!("{x}")));
    }
    let xmin = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let xmax = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut values = vec![vec![0.0; xs.len()]; m];
    let (remainder, value_remainder) = match fam {
        NamedFamily::Log(_) => {
            for (j, &x) in xs.iter().enumerate() {
                let l = x.max(1.0).ln();
                let mut t = 1.0;
                for (n, row) in values.iter_mut().enumerate() {
                    if n > 0 {
                        t *= l / n as f64;
                    }
                    row[j] = t;
                }
            }
            let l = xmax.max(1.0).ln();
            // d/dx Σ_{n≥m} (log x)^n/n! = Σ_{k≥m−1} (log x)^k/k! / x
            (exp_tail(l, m - 1) / xmin.max(1.0), exp_tail(l, m))
        }
        NamedFamily::Rational(..) => {
            for (j, &x) in xs.iter().enumerate() {
                let t = 1.0 - 1.0 / x;
                let mut v = 1.0;
                for row in values.iter_mut() {
                    row[j] = v;
                    v *= t;
                }
            }
            let b = (1.0 - 1.0 / xmax).max(0.0);
            let tmin = (1.0 - 1.0 / xmin).max(0.0);
            let mf = m as f64;
            // Σ_{n≥m} n b^{n−1} times dt/dx = (1 − t)^2
            let deriv = (mf * b.powi(m as i32 - 1) * (1.0 - b) + b.powi(m as i32)) / (1.0 - b).powi(2);
            let lip = deriv * (1.0 - tmin).powi(2);
            (lip * (1.0 + 1e-12), b.powi(m as i32) / (1.0 - b) * (1.0 + 1e-12))
        }
    };
    Ok(LipschitzFamily { values, remainder, value_remainder })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!("log(1)".parse::<NamedFamily>().unwrap(), NamedFamily::Log(1.0));
        assert_eq!("rational(0.5, 0.75)".parse::<NamedFamily>().unwrap(), NamedFamily::Rational(0.5, 0.75));
        assert!("rational(2,3)".parse::<NamedFamily>().is_err());
        assert!("log(0.5)".parse::<NamedFamily>().is_err());
        assert!("sin(1)".parse::<NamedFamily>().is_err());
    }

    #[test]
    fn exp_tail_matches_direct_sum() {
        // Σ_{j≥0} = e^L
        assert!((exp_tail(2.0, 0) - 2f64.exp()).abs() < 1e-10);
        let direct: f64 = (5..60).map(|j| 3f64.powi(j) / (1..=j).map(f64::from).product::<f64>()).sum();
        let t = exp_tail(3.0, 5);
        assert!(t >= direct && t <= direct * (1.0 + 1e-10));
    }
}
