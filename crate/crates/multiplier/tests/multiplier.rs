use linops::{random_matrix, random_vector, re, seeded_rng, Matrix, Rng64, C64};
use metricframe::{LipschitzFamily, MetricSample};
use multiplier::*;
use proptest::prelude::*;

/// Pointed sample on the line with base 0 at the first point.
fn sample(rng: &mut Rng64, n: usize) -> MetricSample {
    let v = random_vector(rng, n);
    let mut xs: Vec<f64> = v.iter().map(|z| z.re * 3.0).collect();
    xs[0] = 0.0;
    MetricSample::line(&xs, Some(0)).unwrap()
}

/// Family vanishing at the base point: `f_n(x) = g_n(x) − g_n(0)` for smooth `g_n`.
fn family(s: &MetricSample, m: usize, seed: u64) -> LipschitzFamily {
    let xs = s.coordinates().unwrap();
    let mut rng = seeded_rng(seed);
    let coef = random_matrix(&mut rng, m, 3);
    let g = |n: usize, x: f64| coef[(n, 0)].re * x.sin() + coef[(n, 1)].re * (0.5 * x).cos() + coef[(n, 2)].re * x;
    let values = (0..m).map(|n| xs.iter().map(|&x| g(n, x) - g(n, 0.0)).collect()).collect();
    LipschitzFamily::new(values).unwrap()
}

fn random_multiplier(seed: u64, npts: usize, m: usize, d: usize, p: f64) -> Multiplier {
    let mut rng = seeded_rng(seed);
    let s = sample(&mut rng, npts);
    let f = family(&s, m, seed ^ 0xabc);
    let symbol: Vec<C64> = random_vector(&mut rng, m).iter().copied().collect();
    let tau = random_matrix(&mut rng, d, m);
    Multiplier::new(s, f, symbol, tau, p).unwrap()
}

#[test]
fn zero_symbol_and_base_point() {
    let m = random_multiplier(1, 8, 4, 3, 2.0);
    let z = m.with_symbol(vec![re(0.0); 4]).unwrap();
    for j in 0..8 {
        assert_eq!(z.apply(j).unwrap().norm(), 0.0);
    }
    assert_eq!(m.apply(0).unwrap().norm(), 0.0);
    assert!(matches!(m.apply(8), Err(MultiplierError::UnknownPoint(8))));
}

#[test]
fn apply_matches_two_loop_oracle() {
    let m = random_multiplier(2, 10, 5, 3, 1.5);
    for j in 0..10 {
        let mut oracle = vec![C64::new(0.0, 0.0); 3];
        for n in 0..5 {
            for (i, o) in oracle.iter_mut().enumerate() {
                *o += m.symbol()[n] * m.family().values[n][j] * m.tau()[(i, n)];
            }
        }
        let v = m.apply(j).unwrap();
        for i in 0..3 {
            assert!((v[i] - oracle[i]).norm() <= 1e-14);
        }
    }
}

#[test]
fn rejects_unpointed_family() {
    let mut rng = seeded_rng(3);
    let s = sample(&mut rng, 5);
    let f = LipschitzFamily::new(vec![vec![1.0; 5]]).unwrap();
    assert!(matches!(
        Multiplier::new(s, f, vec![re(1.0)], Matrix::identity(2, 1), 2.0),
        Err(MultiplierError::InvalidInput(_))
    ));
}

#[test]
fn rank_one_multiplier() {
    let base = random_multiplier(4, 9, 3, 2, 2.0);
    let m = base.with_symbol(vec![re(1.0), re(0.0), re(0.0)]).unwrap();
    let tau1 = m.tau().column(0).norm();
    let lip1 = metricframe::lipschitz_number(m.sample(), &m.family().values[0]).unwrap();
    let c = lip_bound_check(&m).unwrap();
    assert!((c.measured - tau1 * lip1).abs() <= 1e-12 * c.measured.max(1.0));
    assert!(c.holds);
}

#[test]
fn doubling_symbol_doubles_both_numbers() {
    let m = random_multiplier(5, 9, 4, 3, 3.0);
    let c1 = lip_bound_check(&m).unwrap();
    let m2 = m.with_symbol(m.symbol().iter().map(|z| z * 2.0).collect()).unwrap();
    let c2 = lip_bound_check(&m2).unwrap();
    assert!((c2.measured - 2.0 * c1.measured).abs() <= 1e-12 * c2.measured);
    assert!((c2.bound - 2.0 * c1.bound).abs() <= 1e-12 * c2.bound);
}

#[test]
fn measured_constants_at_p2() {
    let m = random_multiplier(6, 7, 4, 3, 2.0);
    let (d, src) = m.d();
    assert_eq!(src, ConstantSource::Measured);
    assert!(d.is_exact());
    let sv = linops::singular_values(m.tau());
    assert!((d.hi - sv[0]).abs() <= 1e-12 * sv[0]);
    let (b, _) = m.b();
    assert_eq!(b, metricframe::metric_frame_bounds(m.sample(), m.family(), 2.0).unwrap().b);
}

#[test]
fn zero_tail() {
    let m = random_multiplier(7, 8, 6, 2, 2.0);
    let mut sym = m.symbol().to_vec();
    for z in sym.iter_mut().skip(3) {
        *z = re(0.0);
    }
    let m = m.with_symbol(sym).unwrap();
    let t = tail_decay(&m, 3).unwrap();
    assert_eq!((t.measured, t.bound), (0.0, 0.0));
    assert!(tail_decay(&m, 6).is_err());
}

#[test]
fn harmonic_symbol_tail() {
    let m = random_multiplier(8, 10, 8, 3, 1.5);
    let m = m.with_symbol((1..=8).map(|n| re(1.0 / n as f64)).collect()).unwrap();
    let cut = 4;
    let t = tail_decay(&m, cut).unwrap();
    let (b, _) = m.b();
    let expect = b * m.d().0.hi / (cut + 1) as f64;
    assert!((t.bound - expect).abs() <= 1e-12 * expect);
    assert!(t.holds);
}

#[test]
fn geometric_symbol_tail_curve() {
    let m = random_multiplier(9, 10, 8, 3, 2.0);
    let m = m.with_symbol((0..8).map(|n| re(0.1f64.powi(n))).collect()).unwrap();
    let curve: Vec<BoundCheck> = (0..8).map(|c| tail_decay(&m, c).unwrap()).collect();
    for w in curve.windows(2) {
        assert!(w[1].bound <= w[0].bound);
        assert!(w[1].measured <= w[0].measured);
    }
    assert!(curve.iter().all(|c| c.holds));
}

#[test]
fn continuity_cases() {
    let m = random_multiplier(10, 9, 5, 3, 2.0);
    assert_eq!(continuity(&m, &Variant::Symbol(m.symbol().to_vec())).unwrap().measured, 0.0);
    assert_eq!(continuity(&m, &Variant::Vectors(m.tau().clone())).unwrap().measured, 0.0);
    let eps = 1e-3;
    let mut s2 = m.symbol().to_vec();
    s2[0] += eps;
    let c = continuity(&m, &Variant::Symbol(s2)).unwrap();
    assert!((c.bound - m.b().0 * m.d().0.hi * eps).abs() <= 1e-12);
    assert!(c.holds);
    let noise = random_matrix(&mut seeded_rng(11), 3, 5) * re(1e-3);
    assert!(continuity(&m, &Variant::Vectors(m.tau() + noise)).unwrap().holds);
    assert!(continuity(&m, &Variant::Vectors(Matrix::zeros(2, 5))).is_err());
}

#[test]
fn linear_in_symbol_exactly() {
    // dyadic data so that every sum is exact
    let s = MetricSample::line(&[0.0, 1.0, 2.0, 3.0], Some(0)).unwrap();
    let f = LipschitzFamily::new(vec![vec![0.0, 0.5, 1.0, 1.5], vec![0.0, -1.0, 0.25, 2.0]]).unwrap();
    let tau = linops::from_real_rows(&[&[1.0, 0.5], &[-2.0, 0.25]]);
    let l = vec![re(0.5), re(-1.25)];
    let mu = vec![re(2.0), re(0.75)];
    let sum: Vec<C64> = l.iter().zip(&mu).map(|(a, b)| a + b).collect();
    let ml = Multiplier::new(s, f, l, tau, 2.0).unwrap();
    let mm = ml.with_symbol(mu).unwrap();
    let ms = ml.with_symbol(sum).unwrap();
    for j in 0..4 {
        assert_eq!(ms.apply(j).unwrap(), ml.apply(j).unwrap() + mm.apply(j).unwrap());
    }
}

#[test]
fn json_roundtrip_supplied_constants() {
    let m = random_multiplier(12, 5, 2, 2, 2.0);
    let j = MultiplierJson {
        p: 2.0,
        sample: m.sample().clone(),
        family: m.family().clone(),
        symbol: m.symbol().iter().map(|z| z.re).collect(),
        symbol_im: Some(m.symbol().iter().map(|z| z.im).collect()),
        tau: linops::MatrixJson::from_matrix(m.tau()),
        out_norm: None,
        b: Some(3.0),
        d: None,
    };
    let text = serde_json::to_string(&j).unwrap();
    let back: MultiplierJson = serde_json::from_str(&text).unwrap();
    let m2 = back.to_multiplier().unwrap();
    assert_eq!(m2.b(), (3.0, ConstantSource::Supplied));
    assert_eq!(m2.symbol(), m.symbol());
}

fn arb_p() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0), 1.0f64..5.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theorem_bounds_hold(seed in any::<u64>(), p in arb_p(), out in prop_oneof![Just(2.0), Just(1.0), 1.0f64..4.0], cut in 0usize..5) {
        let base = random_multiplier(seed, 8, 5, 3, p);
        let m = Multiplier::with_options(
            base.sample().clone(), base.family().clone(), base.symbol().to_vec(), base.tau().clone(), p, out, None, None,
        ).unwrap();
        prop_assert!(lip_bound_check(&m).unwrap().holds);
        prop_assert!(tail_decay(&m, cut).unwrap().holds);
        let mut rng = seeded_rng(seed ^ 9);
        let s2: Vec<C64> = m.symbol().iter().zip(random_vector(&mut rng, 5).iter()).map(|(a, b)| a + b * 0.1).collect();
        prop_assert!(continuity(&m, &Variant::Symbol(s2)).unwrap().holds);
        let t2 = m.tau() + random_matrix(&mut rng, 3, 5) * re(0.1);
        prop_assert!(continuity(&m, &Variant::Vectors(t2)).unwrap().holds);
    }

    #[test]
    fn distinct_symbols_give_distinct_multipliers(seed in any::<u64>(), k in 0usize..4, delta in 1e-6f64..1.0) {
        // τ = standard basis is a q-Riesz family; the f_n are nonzero on the sample
        let base = random_multiplier(seed, 8, 4, 4, 2.0);
        prop_assume!(base.family().values.iter().all(|r| r.iter().any(|v| v.abs() > 1e-6)));
        let m = Multiplier::new(base.sample().clone(), base.family().clone(), base.symbol().to_vec(), Matrix::identity(4, 4), 2.0).unwrap();
        let mut s2 = m.symbol().to_vec();
        s2[k] += delta;
        let m2 = m.with_symbol(s2).unwrap();
        let gap = (0..8).map(|j| (m.apply(j).unwrap() - m2.apply(j).unwrap()).norm()).fold(0.0, f64::max);
        prop_assert!(gap > 1e-12);
    }
}
