use linops::*;
use proptest::prelude::*;
use sip::*;

fn random_pair(seed: u64, p: f64, d: usize, m: usize) -> SipPasf {
    let mut rng = seeded_rng(seed);
    loop {
        let omega = random_matrix(&mut rng, d, m);
        let tau = random_matrix(&mut rng, d, m);
        if let Ok(pf) = SipPasf::new(p, omega, tau) {
            if inverse(&pf.frame_operator()).is_ok() {
                return pf;
            }
        }
    }
}

fn random_parseval(seed: u64, p: f64, d: usize, m: usize) -> SipPasf {
    let mut rng = seeded_rng(seed);
    loop {
        let omega = random_matrix(&mut rng, d, m);
        let tau = random_matrix(&mut rng, d, m);
        if let Ok(pf) = SipPasf::parseval_from_seed(p, omega, tau) {
            return pf;
        }
    }
}

fn random_subset(rng: &mut Rng64, m: usize) -> Vec<usize> {
    use rand::Rng;
    (0..m).filter(|_| rng.random_bool(0.5)).collect()
}

#[test]
fn self_product_is_squared_norm() {
    let mut rng = seeded_rng(1);
    for p in [1.2, 1.5, 2.0, 3.0, 7.0] {
        let c = SipContext::new(p).unwrap();
        for _ in 0..50 {
            let x = random_vector(&mut rng, 5);
            let v = c.sip(&x, &x);
            let n = vec_pnorm(x.as_slice(), p).unwrap();
            assert!((v.re - n * n).abs() <= 1e-12 * n * n && v.im.abs() <= 1e-12 * n * n);
        }
    }
}

#[test]
fn reduces_to_inner_product_at_p2() {
    let mut rng = seeded_rng(2);
    let c = SipContext::new(2.0).unwrap();
    for _ in 0..50 {
        let (x, y) = (random_vector(&mut rng, 4), random_vector(&mut rng, 4));
        let oracle: C64 = (0..4).map(|i| x[i] * y[i].conj()).sum();
        assert!((c.sip(&x, &y) - oracle).norm() <= 1e-14);
    }
}

#[test]
fn zero_coordinates_contribute_nothing_for_small_p() {
    let c = SipContext::new(1.3).unwrap();
    let x = Vector::from_vec(vec![re(1.0), re(5.0), re(2.0)]);
    let y = Vector::from_vec(vec![re(2.0), re(0.0), re(-1.0)]);
    // hand oracle: (1·2·2^{-0.7} + 2·(−1)·1) / ‖y‖^{-0.7}
    let ny = (2f64.powf(1.3) + 1.0).powf(1.0 / 1.3);
    let expect = (2.0 * 2f64.powf(-0.7) - 2.0) / ny.powf(-0.7);
    assert!((c.sip(&x, &y).re - expect).abs() < 1e-13);
}

#[test]
fn partial_operator_edges() {
    let pf = random_pair(3, 1.5, 3, 6);
    assert_eq!(pf.partial_operator(&[]).unwrap(), Matrix::zeros(3, 3));
    let all: Vec<usize> = (0..6).collect();
    assert!(approx_eq(&pf.partial_operator(&all).unwrap(), &pf.frame_operator(), 1e-14));
    assert!(pf.partial_operator(&[6]).is_err());
}

#[test]
fn partial_operator_is_linear_in_x() {
    let pf = random_pair(4, 3.0, 3, 5);
    let mut rng = seeded_rng(5);
    let sm = pf.partial_operator(&[0, 2, 3]).unwrap();
    let x = random_vector(&mut rng, 3);
    let direct: Vector = [0, 2, 3]
        .iter()
        .map(|&n| pf.tau_n(n) * pf.ctx().sip(&x, &pf.omega_n(n)))
        .fold(Vector::zeros(3), |a, b| a + b);
    assert!((&sm * &x - direct).norm() < 1e-12);
}

#[test]
fn general_identity_empty_subset() {
    let pf = random_pair(6, 1.5, 3, 5);
    let x = random_vector(&mut seeded_rng(7), 3);
    assert!(general_identity_residual(&pf, &[], &x).unwrap() < 1e-10);
}

#[test]
fn general_identity_on_random_data() {
    let mut rng = seeded_rng(8);
    for (i, p) in [1.5, 3.0, 4.5].into_iter().enumerate() {
        for s in 0..20 {
            let pf = random_pair(100 * i as u64 + s, p, 3, 6);
            let m = random_subset(&mut rng, 6);
            let x = random_vector(&mut rng, 3);
            let r = general_identity_residual(&pf, &m, &x).unwrap();
            assert!(r <= 1e-8, "p={p} r={r}");
        }
    }
}

#[test]
fn general_identity_rejects_singular() {
    let omega = Matrix::from_fn(2, 2, |i, _| re(if i == 0 { 1.0 } else { 0.0 }));
    let pf = SipPasf::new(2.0, omega.clone(), omega).unwrap();
    assert!(matches!(
        general_identity_residual(&pf, &[0], &basis_vector(2, 0)),
        Err(SipError::NotInvertible)
    ));
}

#[test]
fn agrees_with_hilbert_frames_at_p2() {
    let mut rng = seeded_rng(9);
    for s in 0..20 {
        let fr = hframe::parsevalize(&hframe::HilbertFrame::new(random_matrix(&mut rng, 3, 7)).unwrap()).unwrap();
        let t = fr.synthesis().clone();
        let pf = SipPasf::new(2.0, t.clone(), t).unwrap();
        let m = random_subset(&mut rng, 7);
        let x = random_vector(&mut rng, 3);
        let h = hframe::frame_identity_residuals(&fr, &m, &x, hframe::IdentityMode::Parseval).unwrap();
        let (gl, _) = general_identity_sides(&pf, &m, &x).unwrap();
        let (ms, _) = pf.split(&m).unwrap();
        let coeff = fr.analysis() * &x;
        let energy: f64 = ms.iter().map(|&n| coeff[n].norm_sqr()).sum();
        let sm = fr.partial_operator(&ms) * &x;
        let dual = hframe::canonical_dual(&fr).unwrap();
        let hl = energy - (dual.analysis() * &sm).norm_squared();
        assert!((gl.re - hl).abs() <= 1e-10 && gl.im.abs() <= 1e-10, "seed {s}");
        let pr = parseval_identity_residual(&pf, &m, &x).unwrap();
        assert!((pr - h.parseval_residual.unwrap()).abs() <= 1e-10);
        let lb = lower_bound_check(&pf, &m, &x).unwrap();
        assert!((lb.value - h.lower_bound_value.unwrap()).abs() <= 1e-10);
        assert!(lb.condition_holds && lb.passes);
    }
}

#[test]
fn parseval_identity_cases() {
    let pf = random_parseval(10, 1.5, 3, 6);
    assert!(pf.is_parseval());
    let mut rng = seeded_rng(11);
    let x = random_vector(&mut rng, 3);
    let all: Vec<usize> = (0..6).collect();
    assert!(parseval_identity_residual(&pf, &all, &x).unwrap() <= 1e-10);
    for _ in 0..20 {
        let m = random_subset(&mut rng, 6);
        assert!(parseval_identity_residual(&pf, &m, &x).unwrap() <= 1e-8);
    }
    let np = random_pair(12, 1.5, 3, 6);
    assert!(matches!(parseval_identity_residual(&np, &[0], &x), Err(SipError::NotParseval(_))));
}

#[test]
fn lower_bound_empty_subset_p2() {
    let pf = random_parseval(13, 2.0, 3, 5);
    let x = random_vector(&mut seeded_rng(14), 3);
    let r = lower_bound_check(&pf, &[], &x).unwrap();
    assert!((r.value - x.norm_squared()).abs() < 1e-10);
    assert!(r.passes && r.condition_holds);
}

#[test]
fn lower_bound_p3_where_condition_holds() {
    let mut rng = seeded_rng(15);
    let mut held = 0;
    for s in 0..30 {
        let pf = random_parseval(200 + s, 3.0, 3, 6);
        let m = random_subset(&mut rng, 6);
        let x = random_vector(&mut rng, 3);
        let r = lower_bound_check(&pf, &m, &x).unwrap();
        assert!(r.passes);
        if r.condition_holds {
            held += 1;
            assert!(r.value >= r.threshold - 1e-9);
        }
    }
    assert!(held > 0);
}

#[test]
fn operator_identity_cases() {
    let pf = random_parseval(16, 1.5, 3, 6);
    assert!(operator_identity_residual(&pf, &[]).unwrap() <= 1e-9);
    assert!(operator_identity_residual(&pf, &[1, 4]).unwrap() <= 1e-9);
    let q = random_parseval(17, 2.0, 4, 7);
    assert!(operator_identity_residual(&q, &[0, 2, 5]).unwrap() <= 1e-10);
}

#[test]
fn complementary_square_lemma() {
    let mut rng = seeded_rng(18);
    let u = random_matrix(&mut rng, 4, 4);
    let v = Matrix::identity(4, 4) - &u;
    assert!(complementary_square_residual(&u, &v).unwrap() <= 1e-12);
    assert!(complementary_square_residual(&u, &u).is_err());
}

#[test]
fn json_roundtrip() {
    let pf = random_pair(19, 1.5, 2, 3);
    let j = SipJson::from_pair(&pf);
    assert_eq!(j.to_pair().unwrap(), pf);
}

fn arb_p() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.5), Just(2.0), Just(3.0), 1.1f64..6.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sip_axioms(seed in any::<u64>(), p in arb_p(), d in 1usize..6, lr in -3.0f64..3.0, li in -3.0f64..3.0) {
        let c = SipContext::new(p).unwrap();
        let mut rng = seeded_rng(seed);
        let (x, y, z) = (random_vector(&mut rng, d), random_vector(&mut rng, d), random_vector(&mut rng, d));
        let l = C64::new(lr, li);
        let scale = (1.0 + c.norm(&x)) * (1.0 + c.norm(&y)) * (1.0 + c.norm(&z)) * (1.0 + l.norm());
        let nx = c.norm(&x);
        prop_assert!((c.sip(&x, &x) - re(nx * nx)).norm() <= 1e-10 * scale);
        prop_assert!((c.sip(&(&x * l), &y) - l * c.sip(&x, &y)).norm() <= 1e-10 * scale);
        prop_assert!((c.sip(&x, &(&y * l)) - l.conj() * c.sip(&x, &y)).norm() <= 1e-10 * scale);
        prop_assert!((c.sip(&(&x + &z), &y) - c.sip(&x, &y) - c.sip(&z, &y)).norm() <= 1e-10 * scale);
        let cs = c.sip(&x, &y).norm_sqr();
        prop_assert!(cs <= c.sip(&x, &x).re * c.sip(&y, &y).re * (1.0 + 1e-10) + 1e-10);
        prop_assert!(c.sip(&x, &x).re > 0.0);
    }

    #[test]
    fn complement_sum_is_full_operator(seed in any::<u64>(), p in arb_p(), mask in 0u32..64) {
        let pf = random_pair(seed, p, 3, 6);
        let m: Vec<usize> = (0..6).filter(|n| mask >> n & 1 == 1).collect();
        let (ms, mc) = pf.split(&m).unwrap();
        let sum = pf.partial_operator(&ms).unwrap() + pf.partial_operator(&mc).unwrap();
        prop_assert!(approx_eq(&sum, &pf.frame_operator(), 1e-14));
    }

    #[test]
    fn identities_hold_on_generated_instances(seed in any::<u64>(), p in arb_p(), d in 1usize..5, extra in 0usize..4, mask in any::<u32>()) {
        let m_len = d + extra;
        let pf = random_parseval(seed, p, d, m_len);
        let m: Vec<usize> = (0..m_len).filter(|n| mask >> n & 1 == 1).collect();
        let x = random_vector(&mut seeded_rng(seed ^ 0x55), d);
        prop_assert!(general_identity_residual(&pf, &m, &x).unwrap() <= 1e-8);
        prop_assert!(parseval_identity_residual(&pf, &m, &x).unwrap() <= 1e-8);
        prop_assert!(lower_bound_check(&pf, &m, &x).unwrap().passes);
    }
}
