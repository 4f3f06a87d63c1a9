use linops::*;
use ovf::*;
use proptest::prelude::*;

fn random_pair(seed: u64, m: usize, r: usize, d: usize) -> OvfPair {
    let mut rng = seeded_rng(seed);
    loop {
        let u = random_matrix(&mut rng, m * r, d);
        let v = random_matrix(&mut rng, m * r, d);
        if let Ok(p) = from_factors(r, u, v) {
            return p;
        }
    }
}

/// Orthonormal columns spanning a random `k`-dimensional subspace of `K^n`.
fn random_isometry(rng: &mut Rng64, n: usize, k: usize) -> Matrix {
    range_basis(&random_matrix(rng, n, k))
}

/// Parseval pair with equal ranges: `Ψ_n = A_n(S_A⁻¹)*`, `S_A = θ_A*θ_A`.
fn parseval_matched(seed: u64, m: usize, r: usize, d: usize) -> OvfPair {
    let mut rng = seeded_rng(seed);
    let ta = random_matrix(&mut rng, m * r, d);
    let sa = ta.adjoint() * &ta;
    let psi = &ta * inverse(&sa).unwrap().adjoint();
    OvfPair::from_stacked(r, ta, psi).unwrap()
}

/// Two Parseval pairs `(A, A)` and `(B, B)` with `θ_A*θ_B = 0`.
fn orthogonal_parseval_pairs(seed: u64, m: usize, r: usize, d: usize) -> (OvfPair, OvfPair) {
    let mut rng = seeded_rng(seed);
    let w = random_isometry(&mut rng, m * r, 2 * d);
    let a = w.columns(0, d).into_owned();
    let b = w.columns(d, d).into_owned();
    (
        OvfPair::from_stacked(r, a.clone(), a).unwrap(),
        OvfPair::from_stacked(r, b.clone(), b).unwrap(),
    )
}

fn random_invertible(rng: &mut Rng64, n: usize) -> Matrix {
    random_matrix(rng, n, n) + Matrix::identity(n, n) * re(2.5)
}

/// Frame operator by explicit entry loops over the blocks.
fn oracle_frame_operator(p: &OvfPair) -> Matrix {
    let (m, r, d) = (p.len(), p.block(), p.dim());
    let mut s = Matrix::zeros(d, d);
    for n in 0..m {
        let (a, psi) = (p.a(n), p.psi(n));
        for i in 0..d {
            for j in 0..d {
                for k in 0..r {
                    s[(i, j)] += psi[(k, i)].conj() * a[(k, j)];
                }
            }
        }
    }
    s
}

#[test]
fn single_bounded_below_operator() {
    let a = from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0]]);
    let p = OvfPair::new(std::slice::from_ref(&a), std::slice::from_ref(&a)).unwrap();
    let c = check(&p);
    assert!(c.is_ovf && c.factorable);
    let sv = singular_values(&a);
    assert!((c.b - sv[0] * sv[0]).abs() < 1e-12);
    assert!((c.a - sv[1] * sv[1]).abs() < 1e-12);
}

#[test]
fn parseval_fusion_rows() {
    let mut rng = seeded_rng(11);
    let u = random_isometry(&mut rng, 4 * 2, 3);
    let p = OvfPair::from_stacked(2, u.clone(), u).unwrap();
    assert!(p.is_parseval());
    let c = check(&p);
    assert!((c.a - 1.0).abs() < 1e-10 && (c.b - 1.0).abs() < 1e-10);
}

#[test]
fn random_blocks_match_oracle() {
    for seed in 0..5 {
        let p = random_pair(seed, 4, 2, 3);
        let s = oracle_frame_operator(&p);
        assert!(approx_eq(&p.frame_operator(), &s, 1e-12));
        assert!(approx_eq(&p.frame_operator_blockwise(), &s, 1e-12));
        let sv = singular_values(&s);
        let c = check(&p);
        assert!((c.b - sv[0]).abs() < 1e-9 * sv[0]);
        assert!((c.a - sv[2]).abs() < 1e-9 * sv[0]);
    }
}

#[test]
fn singular_frame_operator_is_not_ovf() {
    let a = from_real_rows(&[&[1.0, 0.0]]);
    let p = OvfPair::new(std::slice::from_ref(&a), std::slice::from_ref(&a)).unwrap();
    let c = check(&p);
    assert!(!c.is_ovf);
    assert_eq!(c.a, 0.0);
}

#[test]
fn from_factors_cases() {
    let mut rng = seeded_rng(5);
    let u = random_isometry(&mut rng, 6, 3);
    assert!(from_factors(2, u.clone(), u).unwrap().is_parseval());

    let u = random_matrix(&mut rng, 6, 3);
    let v = random_matrix(&mut rng, 6, 3);
    let p = from_factors(3, u.clone(), v.clone()).unwrap();
    assert!(approx_eq(&p.frame_operator(), &(v.adjoint() * &u), 1e-14));
    assert_eq!(p.a(1), u.rows(3, 3).into_owned());

    let mut low = random_matrix(&mut rng, 6, 3);
    let col = low.column(0).into_owned();
    low.set_column(2, &col);
    assert_eq!(from_factors(2, low.clone(), low), Err(OvfError::NotInvertible));
}

#[test]
fn canonical_dual_properties() {
    let mut rng = seeded_rng(8);
    let u = random_isometry(&mut rng, 6, 3);
    let par = OvfPair::from_stacked(2, u.clone(), u).unwrap();
    let dp = canonical_dual(&par).unwrap();
    assert!(approx_eq(dp.theta_a(), par.theta_a(), 1e-10));

    let p = random_pair(9, 5, 2, 3);
    let dd = canonical_dual(&canonical_dual(&p).unwrap()).unwrap();
    assert!(approx_eq(dd.theta_a(), p.theta_a(), 1e-10));
    assert!(approx_eq(dd.theta_psi(), p.theta_psi(), 1e-10));

    let c = check(&p);
    let cd = check(&canonical_dual(&p).unwrap());
    assert!((cd.a - 1.0 / c.b).abs() < 1e-9 * cd.b);
    assert!((cd.b - 1.0 / c.a).abs() < 1e-9 * cd.b);
}

#[test]
fn duality_and_orthogonality() {
    let p = random_pair(21, 4, 2, 3);
    let dual = canonical_dual(&p).unwrap();
    assert!(duality_check(&p, &dual).unwrap());
    assert!(!duality_check(&p, &p).unwrap());

    // complementary block supports: A lives on blocks 0..2, B on blocks 2..4
    let mut rng = seeded_rng(22);
    let mut ta = random_matrix(&mut rng, 8, 3);
    let mut tb = random_matrix(&mut rng, 8, 3);
    ta.rows_mut(4, 4).fill(re(0.0));
    tb.rows_mut(0, 4).fill(re(0.0));
    let pa = OvfPair::from_stacked(2, ta.clone(), ta).unwrap();
    let pb = OvfPair::from_stacked(2, tb.clone(), tb).unwrap();
    assert!(orthogonality_check(&pa, &pb).unwrap());
    assert!(!orthogonality_check(&p, &dual).unwrap());

    let q = random_pair(23, 3, 2, 3);
    assert!(matches!(duality_check(&p, &q), Err(OvfError::ShapeMismatch(_))));
}

#[test]
fn similarity_recovery() {
    let p = random_pair(31, 4, 2, 3);
    let s = similarity(&p, &p).unwrap().unwrap();
    assert!(approx_eq(&s.r_ab, &Matrix::identity(3, 3), 1e-9));
    assert!(approx_eq(&s.r_psi_phi, &Matrix::identity(3, 3), 1e-9));

    let mut rng = seeded_rng(32);
    let r1 = random_invertible(&mut rng, 3);
    let r2 = random_invertible(&mut rng, 3);
    let q = OvfPair::from_stacked(2, p.theta_a() * &r1, p.theta_psi() * &r2).unwrap();
    let s = similarity(&p, &q).unwrap().unwrap();
    assert!(approx_eq(&s.r_ab, &r1, 1e-8));
    assert!(approx_eq(&s.r_psi_phi, &r2, 1e-8));

    let si = p.frame_operator_inverse().unwrap();
    let s = similarity(&p, &canonical_dual(&p).unwrap()).unwrap().unwrap();
    assert!(approx_eq(&s.r_ab, &si, 1e-8));
    assert!(approx_eq(&s.r_psi_phi, &si.adjoint(), 1e-8));

    let other = random_pair(33, 4, 2, 3);
    assert!(similarity(&p, &other).unwrap().is_none());
}

#[test]
fn parseval_similarity_criterion() {
    let mut rng = seeded_rng(34);
    let u = random_isometry(&mut rng, 8, 3);
    let p = OvfPair::from_stacked(2, u.clone(), u.clone()).unwrap();
    let r = random_invertible(&mut rng, 3);
    let q = OvfPair::from_stacked(2, &u * &r, &u * inverse(&r).unwrap().adjoint()).unwrap();
    assert!(q.is_parseval());
    assert!(similarity(&p, &q).unwrap().unwrap().parseval_residual() < 1e-9);
    let q2 = OvfPair::from_stacked(2, &u * &r, u.clone()).unwrap();
    assert!(!q2.is_parseval());
    assert!(similarity(&p, &q2).unwrap().unwrap().parseval_residual() > 1e-3);
}

#[test]
fn classification() {
    let p = random_pair(41, 3, 2, 6);
    assert_eq!(classify(&p).unwrap(), Classification { riesz: true, orthonormal: false });

    let blocks: Vec<Matrix> = (0..3).map(|n| block_embedding(3, 2, n).adjoint()).collect();
    let p = OvfPair::new(&blocks, &blocks).unwrap();
    assert_eq!(classify(&p).unwrap(), Classification { riesz: true, orthonormal: true });

    let p = random_pair(42, 4, 2, 3);
    assert!(!classify(&p).unwrap().riesz);
}

#[test]
fn dilation_of_orthonormal_is_trivial() {
    let blocks: Vec<Matrix> = (0..3).map(|n| block_embedding(3, 2, n).adjoint()).collect();
    let p = OvfPair::new(&blocks, &blocks).unwrap();
    let dil = dilate(&p).unwrap();
    assert_eq!(dil.complement.ncols(), 0);
    assert_eq!(dil.pair.dim(), 6);
}

#[test]
fn dilation_of_matched_parseval_pair() {
    for seed in 0..4 {
        let p = parseval_matched(50 + seed, 4, 2, 3);
        assert!(p.is_parseval());
        let dil = dilate(&p).unwrap();
        assert_eq!(dil.pair.dim(), 8);
        let c = classify(&dil.pair).unwrap();
        assert!(c.orthonormal, "seed {seed}");
        assert!(dil.restriction_residual < 1e-12);
        for n in 0..p.len() {
            assert!(approx_eq(&(dil.pair.a(n) * &dil.embedding), &p.a(n), 1e-12));
            assert!(approx_eq(&(dil.pair.psi(n) * &dil.embedding), &p.psi(n), 1e-12));
        }
    }
}

#[test]
fn dilation_preconditions() {
    let p = random_pair(60, 4, 2, 3);
    assert!(matches!(dilate(&p), Err(OvfError::HypothesisViolated(m)) if m.contains("not_parseval: true")));

    // Parseval, but θ_Ψ leaves θ_A(H)
    let base = parseval_matched(61, 4, 2, 3);
    let q = complement_basis(&range_basis(base.theta_a()));
    let k = q.columns(0, 3).into_owned();
    let bent = OvfPair::from_stacked(2, base.theta_a().clone(), base.theta_psi() + k).unwrap();
    assert!(bent.is_parseval());
    match dilate(&bent) {
        Err(OvfError::HypothesisViolated(m)) => {
            assert!(m.contains("ranges_differ: true"));
            assert!(m.contains("not_parseval: false"));
        }
        other => panic!("expected violation, got {other:?}"),
    }
}

#[test]
fn interpolation_cases() {
    let (p, q) = orthogonal_parseval_pairs(70, 4, 2, 3);
    assert!(orthogonality_check(&p, &q).unwrap());
    let mut rng = seeded_rng(71);
    let c = random_invertible(&mut rng, 3);
    let e = inverse(&c).unwrap().adjoint();
    let z = Matrix::zeros(3, 3);
    assert!(interpolate(&p, &q, &c, &z, &e, &z).unwrap().is_parseval());

    let (cc, dd) = (C64::new(0.6, 0.3), C64::new(-0.2, 1.1));
    let ee = C64::new(0.5, 0.0);
    // c̄e + d̄f = 1
    let ff = (C64::new(1.0, 0.0) - cc.conj() * ee) / dd.conj();
    assert!(interpolate_scalars(&p, &q, cc, dd, ee, ff).unwrap().is_parseval());

    let c = random_matrix(&mut rng, 3, 3);
    let d = random_invertible(&mut rng, 3);
    let e = random_matrix(&mut rng, 3, 3);
    let f = inverse(&d.adjoint()).unwrap() * (Matrix::identity(3, 3) - c.adjoint() * &e);
    let s = interpolate(&p, &q, &c, &d, &e, &f).unwrap().frame_operator();
    assert!(approx_eq(&s, &Matrix::identity(3, 3), 1e-8));

    let r = random_pair(72, 4, 2, 3);
    let id = Matrix::identity(3, 3);
    match interpolate(&r, &q, &id, &z, &id, &z) {
        Err(OvfError::HypothesisViolated(m)) => assert!(m.contains("first_not_parseval: true")),
        other => panic!("expected violation, got {other:?}"),
    }
}

#[test]
fn direct_sum_frame_operator() {
    let mut rng = seeded_rng(80);
    let ta = random_matrix(&mut rng, 8, 2);
    let tb = random_matrix(&mut rng, 8, 2);
    let mut ta = ta;
    let mut tb = tb;
    ta.rows_mut(4, 4).fill(re(0.0));
    tb.rows_mut(0, 4).fill(re(0.0));
    let p = OvfPair::from_stacked(2, ta.clone(), ta * re(2.0)).unwrap();
    let q = OvfPair::from_stacked(2, tb.clone(), tb).unwrap();
    let ds = direct_sum(&p, &q).unwrap();
    assert_eq!(ds.dim(), 4);
    assert!(approx_eq(&ds.frame_operator(), &direct_sum_expected(&p, &q), 1e-12));
    assert!(check(&ds).is_ovf);

    let (p, q) = orthogonal_parseval_pairs(81, 4, 2, 3);
    assert!(direct_sum(&p, &q).unwrap().is_parseval());
    let r = random_pair(82, 4, 2, 3);
    assert!(matches!(direct_sum(&r, &q), Err(OvfError::HypothesisViolated(_))));
}

fn rotation(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    from_real_rows(&[&[c, -s], &[s, c]])
}

#[test]
fn trivial_group() {
    let g = FiniteGroup::cyclic(1).unwrap();
    let a = from_real_rows(&[&[1.0, 2.0]]);
    let out = group_generated(&g, &[Matrix::identity(2, 2)], &a, &a).unwrap();
    assert_eq!(out.pair.len(), 1);
    assert_eq!(out.pair.a(0), a);
    assert_eq!(out.gc1_residual, 0.0);
}

#[test]
fn cyclic_rotation_group() {
    let g = FiniteGroup::cyclic(4).unwrap();
    let rep: Vec<Matrix> = (0..4).map(|k| rotation(k as f64 * std::f64::consts::FRAC_PI_2)).collect();
    let mut rng = seeded_rng(90);
    let a = random_matrix(&mut rng, 1, 2);
    let out = group_generated(&g, &rep, &a, &a).unwrap();
    assert!(out.commutant_residual <= 1e-10);
    assert!(out.gc1_residual <= 1e-10);
    // direct commutation oracle
    let s = out.pair.frame_operator();
    for u in &rep {
        assert!(max_abs(&(&s * u - u * &s)) <= 1e-10);
    }
    assert!(check(&out.pair).is_ovf);

    let mut blocks = out.pair.a_blocks();
    blocks[2][(0, 0)] += re(0.1);
    let bent = OvfPair::new(&blocks, &out.pair.psi_blocks()).unwrap();
    assert!(gc1_residual(&g, &bent).unwrap() > 1e-3);
}

#[test]
fn representation_is_validated() {
    let g = FiniteGroup::cyclic(4).unwrap();
    let rep: Vec<Matrix> = (0..4).map(|k| rotation(k as f64 * 0.3)).collect();
    let a = from_real_rows(&[&[1.0, 0.0]]);
    assert!(matches!(group_generated(&g, &rep, &a, &a), Err(OvfError::InvalidInput(_))));
    assert!(FiniteGroup::new(vec![vec![0, 1], vec![0, 1]]).is_err());
}

#[test]
fn perturb_identity_and_small() {
    let p = random_pair(100, 5, 2, 3);
    let rep = perturb_certificate(&p, p.theta_a(), OvfPerturbMode::Quadratic).unwrap();
    assert!(rep.valid);
    assert_eq!(rep.condition, 0.0);
    let (lo, hi) = rep.predicted.unwrap();
    let sai = spectral_norm(&p.frame_operator_inverse().unwrap().adjoint());
    assert!((lo - 1.0 / sai).abs() < 1e-12);
    assert!((hi - spectral_norm(p.theta_a()) * spectral_norm(p.theta_psi())).abs() < 1e-12);
    assert_eq!(rep.contained, Some(true));

    let mut rng = seeded_rng(101);
    let e = random_matrix(&mut rng, 10, 3);
    let b = p.theta_a() + &e * re(0.2 / spectral_norm(&e) / 10.0);
    let rep = perturb_certificate(&p, &b, OvfPerturbMode::Quadratic).unwrap();
    assert!(rep.valid, "condition {}", rep.condition);
    assert!(rep.measured.is_ovf);
    assert_eq!(rep.contained, Some(true));

    let b = p.theta_a() + &e * re(10.0);
    let rep = perturb_certificate(&p, &b, OvfPerturbMode::Quadratic).unwrap();
    assert!(!rep.valid && rep.condition >= 1.0);
    assert!(rep.predicted.is_none());
}

#[test]
fn perturb_triple_mode() {
    let p = random_pair(110, 5, 2, 3);
    let mut rng = seeded_rng(111);
    let e = random_matrix(&mut rng, 10, 3);
    let b = p.theta_a() + &e * re(0.02 / spectral_norm(&e));
    // γ = (Σ‖A_n − B_n‖²)^{1/2} satisfies the prefix inequality by Cauchy–Schwarz
    let gamma: f64 = (0..5)
        .map(|n| spectral_norm(&(p.a(n) - b.rows(2 * n, 2).into_owned())).powi(2))
        .sum::<f64>()
        .sqrt();
    let rep = perturb_certificate(&p, &b, OvfPerturbMode::triple(0.0, 0.0, gamma, 7)).unwrap();
    assert!(rep.valid && rep.falsification_only);
    assert_eq!(rep.contained, Some(true));

    let rep = perturb_certificate(&p, &b, OvfPerturbMode::triple(0.0, 0.0, gamma * 1e-3, 7)).unwrap();
    assert!(!rep.valid);
    assert!(rep.worst_excess.unwrap() > 0.0);

    assert!(matches!(
        perturb_certificate(&p, &b, OvfPerturbMode::triple(0.0, 1.5, 0.0, 7)),
        Err(OvfError::HypothesisViolated(_))
    ));
}

#[test]
fn scalar_blocks_agree_with_hilbert_frames() {
    let mut rng = seeded_rng(120);
    let t = random_matrix(&mut rng, 3, 6);
    let frame = hframe::HilbertFrame::new(t.clone()).unwrap();
    let p = OvfPair::from_stacked(1, t.adjoint(), t.adjoint()).unwrap();
    assert!(approx_eq(&p.frame_operator(), &frame.frame_operator(), 1e-12));
    let fb = hframe::frame_bounds(&frame);
    let c = check(&p);
    assert!((c.a - fb.a).abs() < 1e-9 && (c.b - fb.b).abs() < 1e-9);
    let hd = hframe::canonical_dual(&frame).unwrap();
    let od = canonical_dual(&p).unwrap();
    assert!(approx_eq(od.theta_a(), &hd.synthesis().adjoint(), 1e-10));
    assert_eq!(classify(&p).unwrap().riesz, hframe::riesz_basis_check(&frame));
}

#[test]
fn json_roundtrip() {
    let p = random_pair(130, 3, 2, 2);
    let text = serde_json::to_string(&OvfJson::from_pair(&p)).unwrap();
    assert!(text.contains("\"Psi\""));
    let back: OvfJson = serde_json::from_str(&text).unwrap();
    let back = back.to_pair().unwrap();
    assert!(approx_eq(back.theta_a(), p.theta_a(), 1e-15) && approx_eq(back.theta_psi(), p.theta_psi(), 1e-15));
    let bad = r#"{"d":2,"r":1,"A":[{"rows":1,"cols":3,"re":[[1,2,3]]}],"Psi":[{"rows":1,"cols":3,"re":[[1,2,3]]}]}"#;
    let bad: OvfJson = serde_json::from_str(bad).unwrap();
    assert!(bad.to_pair().is_err());
}

/// Coefficients `y` and `z` with `θ_A*y = θ_Ψ*z`.
fn representations(p: &OvfPair, seed: u64) -> (Vector, Vector) {
    let mut rng = seeded_rng(seed);
    let mr = p.theta_a().nrows();
    let y = random_vector(&mut rng, mr);
    let h = p.theta_a().adjoint() * &y;
    let proj = p.projection().unwrap();
    let w = random_vector(&mut rng, mr);
    // θ_Ψ*(I − P) = 0, so adding (I − P)w keeps the represented vector
    let z = p.theta_a() * p.frame_operator_inverse().unwrap() * &h + (Matrix::identity(mr, mr) - proj) * w;
    (y, z)
}

#[test]
fn best_approximation_identity() {
    let p = random_pair(140, 5, 2, 3);
    let (y, z) = representations(&p, 141);
    let (lhs, rhs) = best_approximation_sides(&p, &y, &z).unwrap();
    assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
    let w = random_vector(&mut seeded_rng(142), 10);
    assert!(best_approximation_sides(&p, &y, &w).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prop_dual_involution(seed in 0u64..10_000, m in 2usize..5, r in 1usize..3, d in 1usize..4) {
        prop_assume!(m * r >= d);
        let p = random_pair(seed, m, r, d);
        let dd = canonical_dual(&canonical_dual(&p).unwrap()).unwrap();
        let scale = 1.0 + max_abs(p.theta_a()).max(max_abs(p.theta_psi()));
        prop_assert!(max_abs(&(dd.theta_a() - p.theta_a())) < 1e-7 * scale);
        prop_assert!(max_abs(&(dd.theta_psi() - p.theta_psi())) < 1e-7 * scale);
    }

    #[test]
    fn prop_blockwise_equals_stacked(seed in 0u64..10_000, m in 1usize..6, r in 1usize..4, d in 1usize..4) {
        let mut rng = seeded_rng(seed);
        let p = OvfPair::from_stacked(r, random_matrix(&mut rng, m * r, d), random_matrix(&mut rng, m * r, d)).unwrap();
        prop_assert!(approx_eq(&p.frame_operator(), &p.frame_operator_blockwise(), 1e-12));
    }

    #[test]
    fn prop_best_approximation(seed in 0u64..10_000, m in 2usize..5, r in 1usize..3, d in 1usize..4) {
        prop_assume!(m * r >= d);
        let p = random_pair(seed, m, r, d);
        let (y, z) = representations(&p, seed + 1);
        let (lhs, rhs) = best_approximation_sides(&p, &y, &z).unwrap();
        let scale = 1.0 + y.norm() * z.norm() + lhs.norm();
        prop_assert!((lhs - rhs).norm() < 1e-8 * scale);
    }

    #[test]
    fn prop_dilation_is_orthonormal(seed in 0u64..10_000, m in 2usize..5, r in 1usize..3, d in 1usize..4) {
        prop_assume!(m * r >= d);
        let p = parseval_matched(seed, m, r, d);
        prop_assume!(p.is_parseval());
        let dil = dilate(&p).unwrap();
        prop_assert_eq!(dil.pair.dim(), m * r);
        prop_assert!(classify(&dil.pair).unwrap().orthonormal);
        prop_assert!(dil.restriction_residual < 1e-10);
    }

    #[test]
    fn prop_similarity_recovers_multipliers(seed in 0u64..10_000, m in 2usize..5, d in 1usize..4) {
        let p = random_pair(seed, m, 2, d);
        let mut rng = seeded_rng(seed ^ 0xabcd);
        let r1 = random_invertible(&mut rng, d);
        let r2 = random_invertible(&mut rng, d);
        let q = OvfPair::from_stacked(2, p.theta_a() * &r1, p.theta_psi() * &r2).unwrap();
        let s = similarity(&p, &q).unwrap().unwrap();
        prop_assert!(approx_eq(&s.r_ab, &r1, 1e-6));
        prop_assert!(approx_eq(&s.r_psi_phi, &r2, 1e-6));
    }
}
