use metricframe::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn random_line(seed: u64, n: usize, lo: f64, hi: f64) -> MetricSample {
    let mut r = rng(seed);
    let mut xs: Vec<f64> = (0..n).map(|_| r.random_range(lo..hi)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    MetricSample::line(&xs, Some(0)).unwrap()
}

fn random_family(seed: u64, m: usize, n: usize) -> LipschitzFamily {
    let mut r = rng(seed);
    LipschitzFamily::new((0..m).map(|_| (0..n).map(|_| r.random_range(-1.0..1.0)).collect()).collect()).unwrap()
}

#[test]
fn log_family_is_isometric_on_samples() {
    let s = MetricSample::interval(1.0, 20.0, 200).unwrap();
    let f = make_named_family("log(1)".parse().unwrap(), &s, 40).unwrap();
    assert!(f.remainder < 1e-8);
    let b = metric_frame_bounds(&s, &f, 1.0).unwrap();
    assert!((b.a - 1.0).abs() < 1e-6 && (b.b - 1.0).abs() < 1e-6, "{b:?}");
    // every pair: Σ|Δf_n| = |x − y| within the remainder
    let xs = s.coordinates().unwrap();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let sum: f64 = f.values.iter().map(|r| (r[i] - r[j]).abs()).sum();
            let d = (xs[i] - xs[j]).abs();
            assert!(sum <= d * (1.0 + 1e-12) && sum >= d * (1.0 - f.remainder) - 1e-12 * d);
        }
    }
}

#[test]
fn log_remainder_matches_ratio_test_oracle() {
    let s = MetricSample::interval(1.0, 10.0, 20).unwrap();
    let f = make_named_family(NamedFamily::Log(1.0), &s, 30).unwrap();
    // ratio test: Σ_{k≥29} L^k/k! ≤ L^29/29! · 1/(1 − L/30)
    let l = 10f64.ln();
    let first: f64 = (1..=29).map(|k| l / k as f64).product();
    let oracle = first / (1.0 - l / 30.0);
    assert!(f.remainder <= oracle && f.remainder < 1e-8);
}

#[test]
fn rational_family_is_isometric() {
    // parameters (1/2, 2/3) give the interval [2, 3]
    let fam: NamedFamily = "rational(0.5,0.6666666666666666)".parse().unwrap();
    let (lo, hi) = fam.domain();
    assert!((lo - 2.0).abs() < 1e-15 && (hi - 3.0).abs() < 1e-12);
    let s = MetricSample::interval(2.0, 2.999_999, 60).unwrap();
    let f = make_named_family(fam, &s, 120).unwrap();
    assert!(f.remainder < 1e-15);
    let b = metric_frame_bounds(&s, &f, 1.0).unwrap();
    assert!((b.a - 1.0).abs() < 1e-9 && (b.b - 1.0).abs() < 1e-9, "{b:?}");
}

#[test]
fn rational_rejects_out_of_domain() {
    let fam = NamedFamily::Rational(0.5, 0.6);
    let s = MetricSample::interval(2.0, 4.0, 5).unwrap();
    assert!(matches!(make_named_family(fam, &s, 10), Err(MetricError::OutOfDomain(_))));
    let s = MetricSample::interval(0.5, 2.0, 5).unwrap();
    assert!(matches!(make_named_family(NamedFamily::Log(1.0), &s, 10), Err(MetricError::OutOfDomain(_))));
}

#[test]
fn single_term_is_not_a_frame() {
    let s = MetricSample::interval(1.0, 5.0, 10).unwrap();
    let f = make_named_family(NamedFamily::Log(1.0), &s, 1).unwrap();
    let b = metric_frame_bounds(&s, &f, 1.0).unwrap();
    assert_eq!(b.a, 0.0);
    assert!(!b.is_frame());
}

#[test]
fn linear_frame_ratios_are_sandwiched() {
    // points of R^2 with the euclidean metric and a linear family f_n(x) = <x, u_n>
    let mut r = rng(3);
    let pts: Vec<[f64; 2]> = (0..25).map(|_| [r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)]).collect();
    let dist = pts.iter().map(|a| pts.iter().map(|b| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()).collect()).collect();
    let s = MetricSample::new((0..25).map(|i| format!("p{i}")).collect(), dist, None).unwrap();
    let u: Vec<[f64; 2]> = (0..4).map(|_| [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]).collect();
    let values = u.iter().map(|un| pts.iter().map(|x| x[0] * un[0] + x[1] * un[1]).collect()).collect();
    let f = LipschitzFamily::new(values).unwrap();
    let b = metric_frame_bounds(&s, &f, 2.0).unwrap();
    let a_mat = linops::from_real_rows(&u.iter().map(|v| &v[..]).collect::<Vec<_>>());
    let sv = linops::singular_values(&a_mat);
    assert!(b.a >= sv[1] * (1.0 - 1e-12) && b.b <= sv[0] * (1.0 + 1e-12));
}

#[test]
fn lipschitz_number_cases() {
    let s = MetricSample::interval(0.0, 1.0, 11).unwrap();
    assert_eq!(lipschitz_number(&s, &[3.0; 11]).unwrap(), 0.0);
    let xs = s.coordinates().unwrap();
    assert!((lipschitz_number(&s, &xs).unwrap() - 1.0).abs() < 1e-12);
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let mut brute = 0.0f64;
    for i in 0..11 {
        for j in 0..11 {
            if i != j {
                brute = brute.max((sq[i] - sq[j]).abs() / (xs[i] - xs[j]).abs());
            }
        }
    }
    assert!((lipschitz_number(&s, &sq).unwrap() - brute).abs() < 1e-14);
    // the largest slope is at the right end: (1 − 0.81)/0.1
    assert!((brute - 1.9).abs() < 1e-12);
}

#[test]
fn combine_cases() {
    let s = random_line(4, 30, 0.0, 3.0);
    let f = random_family(5, 6, s.len());
    let zero = LipschitzFamily::new(vec![vec![0.0; s.len()]; 6]).unwrap();
    let bf = metric_frame_bounds(&s, &f, 2.0).unwrap();

    let r = combine(&s, &f, Some(&zero), 1.0, CombineMode::Add, 2.0).unwrap();
    assert_eq!(r.predicted, (bf.a, bf.b));
    assert_eq!((r.measured.a, r.measured.b), (bf.a, bf.b));

    let r = combine(&s, &f, None, 2.0, CombineMode::Scale, 2.0).unwrap();
    assert!((r.predicted.0 - 2.0 * bf.a).abs() < 1e-15 && (r.measured.b - 2.0 * bf.b).abs() < 1e-12 * bf.b);
    assert!(r.contained);

    let g = random_family(6, 6, s.len());
    let dg = metric_frame_bounds(&s, &g, 2.0).unwrap().b;
    let lam = 0.5 * bf.a / dg;
    let r = combine(&s, &f, Some(&g), -lam, CombineMode::Add, 2.0).unwrap();
    assert!(r.contained);
    assert!(matches!(
        combine(&s, &f, Some(&g), 2.0 * bf.a / dg, CombineMode::Add, 2.0),
        Err(MetricError::HypothesisViolated(_))
    ));
}

#[test]
fn perturb_identical_families() {
    let s = random_line(7, 20, 0.0, 1.0);
    let f = random_family(8, 5, s.len());
    let r = perturb_certificate(&s, &f, &f, 0.0, 0.0, 0.0, 1.5).unwrap();
    assert!(r.hypothesis_holds && r.contained);
    assert_eq!(r.predicted, (r.measured.a, r.measured.b));
}

#[test]
fn perturb_small_noise_via_lipschitz_numbers() {
    let s = MetricSample::interval(1.0, 8.0, 40).unwrap();
    let f = make_named_family(NamedFamily::Log(1.0), &s, 30).unwrap();
    let mut r = rng(9);
    let xs = s.coordinates().unwrap();
    // g_n = f_n + ε_n sin(x): Lip(f_n − g_n) ≤ |ε_n|
    let g = LipschitzFamily::new(
        f.values
            .iter()
            .map(|row| {
                let e = r.random_range(-0.01..0.01);
                row.iter().zip(&xs).map(|(v, x)| v + e * x.sin()).collect()
            })
            .collect(),
    )
    .unwrap();
    let rep = lipschitz_perturbation(&s, &f, &g, 1.0).unwrap();
    assert!(rep.applies && rep.contained, "{rep:?}");
    let cert = perturb_certificate(&s, &f, &g, 0.0, 0.0, rep.r, 1.0).unwrap();
    assert!(cert.hypothesis_holds && cert.contained);
}

#[test]
fn perturb_adversarial_pair_fails_hypothesis() {
    let s = MetricSample::interval(0.0, 1.0, 5).unwrap();
    let f = LipschitzFamily::new(vec![s.coordinates().unwrap()]).unwrap();
    // g = −f: ‖Δ(f − g)‖ = 2|Δx| while the right side with α = β = 0.1, γ = 0.5 is 0.7|Δx|
    let g = f.scaled(-1.0);
    let r = perturb_certificate(&s, &f, &g, 0.1, 0.1, 0.5, 2.0).unwrap();
    assert!(!r.hypothesis_holds);
    assert!((r.worst_excess - 1.3).abs() < 1e-12);
    assert!(perturb_certificate(&s, &f, &g, 0.5, 0.0, 0.6, 2.0).is_err());
}

#[test]
fn log_reconstruction() {
    let s = MetricSample::interval(1.0, 20.0, 100).unwrap();
    let f = make_named_family(NamedFamily::Log(1.0), &s, 40).unwrap();
    let r = reconstruction_check(&s, &f, log_reconstructor, 1.0).unwrap();
    assert!(r.max_deviation <= f.value_remainder + 1e-12 * 20.0, "{r:?}");
    assert!(r.reconstructor_lip <= 1.0 + 1e-12);
    let bad = reconstruction_check(&s, &f, |a| log_reconstructor(a) + 0.1, 1.0).unwrap();
    assert!(bad.max_deviation > 0.09);
}

#[test]
fn identity_frame_linear_reconstructor() {
    let s = MetricSample::interval(-1.0, 1.0, 9).unwrap();
    let f = LipschitzFamily::new(vec![s.coordinates().unwrap()]).unwrap();
    let r = reconstruction_check(&s, &f, |a| a[0], 1.0).unwrap();
    assert_eq!(r.max_deviation, 0.0);
}

#[test]
fn stability_cases() {
    assert_eq!(stability_bounds(2.0, 1.0, 0.0, 0.0).unwrap(), (1.0, 2.0));
    let (a, b) = stability_bounds(2.0, 1.0, 0.1, 0.05).unwrap();
    assert!((a - 0.75).abs() < 1e-15 && (b - 2.25).abs() < 1e-15);
    assert!(matches!(stability_bounds(2.0, 1.0, 0.5, 0.1), Err(MetricError::HypothesisViolated(_))));
}

#[test]
fn json_shapes() {
    let s: MetricSample = serde_json::from_str(r#"{"points":["a","b"],"dist":[[0,1],[1,0]],"base":0}"#).unwrap();
    s.validate().unwrap();
    let f: LipschitzFamily = serde_json::from_str(r#"{"values":[[0,2]],"remainder":0.0}"#).unwrap();
    assert_eq!(metric_frame_bounds(&s, &f, 1.0).unwrap().b, 2.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_multiplies_bounds(seed in any::<u64>(), lam in 0.1f64..5.0, p in 1.0f64..4.0) {
        let s = random_line(seed, 12, -1.0, 1.0);
        let f = random_family(seed ^ 3, 4, s.len());
        let b = metric_frame_bounds(&s, &f, p).unwrap();
        let bs = metric_frame_bounds(&s, &f.scaled(lam), p).unwrap();
        prop_assert!((bs.a - lam * b.a).abs() <= 1e-12 * lam * b.b);
        prop_assert!((bs.b - lam * b.b).abs() <= 1e-12 * lam * b.b);
    }

    #[test]
    fn perturbation_envelope_when_hypothesis_holds(seed in any::<u64>(), frac in 0.0f64..0.95, p in 1.0f64..3.0) {
        let s = random_line(seed, 10, 0.0, 2.0);
        let f = random_family(seed ^ 5, 4, s.len());
        let h = random_family(seed ^ 7, 4, s.len());
        let bf = metric_frame_bounds(&s, &f, p).unwrap();
        let lh = metric_frame_bounds(&s, &h, p).unwrap().b;
        let eps = frac * bf.a / lh;
        let g = f.add(&h, eps).unwrap();
        let gamma = eps * lh;
        let r = perturb_certificate(&s, &f, &g, 0.0, 0.0, gamma, p).unwrap();
        prop_assert!(r.hypothesis_holds);
        prop_assert!(r.contained);
    }

    #[test]
    fn add_mode_containment(seed in any::<u64>(), frac in -0.95f64..0.95) {
        let s = random_line(seed, 10, 0.0, 2.0);
        let f = random_family(seed ^ 11, 5, s.len());
        let g = random_family(seed ^ 13, 5, s.len());
        let bf = metric_frame_bounds(&s, &f, 2.0).unwrap();
        let dg = metric_frame_bounds(&s, &g, 2.0).unwrap().b;
        prop_assume!(bf.a > 0.0 && frac != 0.0);
        let r = combine(&s, &f, Some(&g), frac * bf.a / dg, CombineMode::Add, 2.0).unwrap();
        prop_assert!(r.contained);
    }
}
