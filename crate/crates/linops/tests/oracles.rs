use linops::*;
use proptest::prelude::*;

#[test]
fn pnorm_matches_direct_loop() {
    let x = [re(1.0), re(-2.0), re(2.0)];
    let mut acc = 0.0;
    for v in [1.0f64, -2.0, 2.0] {
        acc += v.abs().powi(3);
    }
    let oracle = acc.cbrt();
    assert!((vec_pnorm(&x, 3.0).unwrap() - oracle).abs() < 1e-14);
}

#[test]
fn identity_norm_is_one_for_all_p() {
    let i3 = Matrix::identity(3, 3);
    for p in [1.0, 1.3, 2.0, 2.5, 7.0, P_INF] {
        let n = opnorm_interval(&i3, p).unwrap();
        assert!((n.lo - 1.0).abs() < 1e-12 && (n.hi - 1.0).abs() < 1e-12, "p={p}: {n:?}");
    }
}

#[test]
fn diagonal_two_norm() {
    let a = from_real_rows(&[&[2.0, 0.0], &[0.0, 3.0]]);
    let n = opnorm_interval(&a, 2.0).unwrap();
    assert!((n.lo - 3.0).abs() < 1e-12 && n.is_exact());
}

fn grid_max(a: &Matrix, p: f64, steps: usize) -> f64 {
    // hyperspherical angles over the real unit sphere of R^4
    let mut best: f64 = 0.0;
    let pi = std::f64::consts::PI;
    for i in 0..=steps {
        let t1 = pi * i as f64 / steps as f64;
        for j in 0..=steps {
            let t2 = pi * j as f64 / steps as f64;
            for k in 0..2 * steps {
                let t3 = pi * k as f64 / steps as f64;
                let x = real_vector(&[
                    t1.cos(),
                    t1.sin() * t2.cos(),
                    t1.sin() * t2.sin() * t3.cos(),
                    t1.sin() * t2.sin() * t3.sin(),
                ]);
                let r = pnorm((a * &x).iter(), p) / pnorm(x.iter(), p);
                best = best.max(r);
            }
        }
    }
    best
}

#[test]
fn general_p_interval_contains_grid_maximum() {
    let mut rng = seeded_rng(7);
    for _ in 0..3 {
        let a = random_real_matrix(&mut rng, 4, 4);
        let n = opnorm_interval(&a, 1.5).unwrap();
        let g = grid_max(&a, 1.5, 40);
        assert!(g <= n.hi * (1.0 + 1e-12), "grid {g} above hi {}", n.hi);
        assert!(n.lo >= g * (1.0 - 1e-3), "ascent {} far below grid {g}", n.lo);
    }
}

#[test]
fn inverse_residual_random() {
    let mut rng = seeded_rng(11);
    let a = random_matrix(&mut rng, 6, 6) + Matrix::identity(6, 6) * re(3.0);
    let b = inverse(&a).unwrap();
    assert!(identity_residual(&(&a * &b)) <= 1e-10);
    assert!(identity_residual(&(&b * &a)) <= 1e-10);
}

#[test]
fn inverse_trivial() {
    let i = Matrix::identity(4, 4);
    assert!(approx_eq(&inverse(&i).unwrap(), &i, 0.0));
}

#[test]
fn tight_frame_operator_extremes() {
    let s = Matrix::identity(2, 2) * re(1.5);
    let (lo, hi) = hermitian_extremes(&s).unwrap();
    assert!((lo - 1.5).abs() < 1e-14 && (hi - 1.5).abs() < 1e-14);
}

/// Real roots of the characteristic cubic of a 3×3 real symmetric matrix.
fn cubic_eigs(a: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [e3, 3.0 * q - e1 - e3, e1]
}

#[test]
fn hermitian_extremes_match_cubic_roots() {
    let mut rng = seeded_rng(3);
    for _ in 0..20 {
        let m = random_real_matrix(&mut rng, 3, 3);
        let s = m.adjoint() * &m;
        let arr = [0, 1, 2].map(|i| [0, 1, 2].map(|j| s[(i, j)].re));
        let roots = cubic_eigs(arr);
        let (lo, hi) = hermitian_extremes(&s).unwrap();
        assert!((lo - roots[0]).abs() < 1e-9 && (hi - roots[2]).abs() < 1e-9);
    }
}

#[test]
fn json_roundtrip() {
    let a = Matrix::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64 - 1.0));
    let text = serde_json::to_string(&MatrixJson::from_matrix(&a)).unwrap();
    let back: MatrixJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_matrix().unwrap(), a);
    let bad: MatrixJson = serde_json::from_str(r#"{"rows":2,"cols":2,"re":[[1,2]]}"#).unwrap();
    assert!(bad.to_matrix().is_err());
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..5, any::<u64>()).prop_map(|(r, c, s)| {
        let mut rng = seeded_rng(s);
        random_matrix(&mut rng, r, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_is_ordered(a in small_matrix(), p in prop_oneof![Just(1.0), Just(2.0), Just(P_INF), 1.01f64..6.0]) {
        let n = opnorm_interval(&a, p).unwrap();
        prop_assert!(n.lo <= n.hi);
        if p == 1.0 || p == 2.0 || p.is_infinite() {
            prop_assert!(n.is_exact());
        }
    }

    #[test]
    fn upper_bound_submultiplicative(s in any::<u64>(), p in 1.01f64..6.0) {
        let mut rng = seeded_rng(s);
        let a = random_matrix(&mut rng, 3, 4);
        let b = random_matrix(&mut rng, 4, 3);
        let ab = opnorm_interval(&(&a * &b), p).unwrap();
        let (na, nb) = (opnorm_interval(&a, p).unwrap(), opnorm_interval(&b, p).unwrap());
        prop_assert!(ab.hi <= na.hi * nb.hi * (1.0 + 1e-12));
    }

    #[test]
    fn inverse_residual_for_moderate_condition(s in any::<u64>(), log_cond in 0.0f64..6.0) {
        let mut rng = seeded_rng(s);
        let q1 = range_basis(&random_matrix(&mut rng, 5, 5));
        let q2 = range_basis(&random_matrix(&mut rng, 5, 5));
        prop_assume!(q1.ncols() == 5 && q2.ncols() == 5);
        let d = Matrix::from_diagonal(&Vector::from_fn(5, |i, _| re(10f64.powf(-log_cond * i as f64 / 4.0))));
        let a = &q1 * d * q2.adjoint();
        let b = inverse(&a).unwrap();
        prop_assert!(identity_residual(&(&a * &b)) <= 1e-9);
    }

    #[test]
    fn mixed_interval_ordered(s in any::<u64>(), r in 1.0f64..5.0, t in 1.0f64..5.0) {
        let mut rng = seeded_rng(s);
        let a = random_matrix(&mut rng, 4, 3);
        let n = opnorm_interval_pq(&a, r, t).unwrap();
        prop_assert!(n.lo <= n.hi * (1.0 + 1e-12));
        // any test vector gives a valid lower bound
        let x = random_vector(&mut rng, 3);
        let ratio = pnorm((&a * &x).iter(), t) / pnorm(x.iter(), r);
        prop_assert!(ratio <= n.hi * (1.0 + 1e-9));
    }

    #[test]
    fn pinv_and_range_on_rank_deficient(s in any::<u64>(), n in 2usize..7, k in 0usize..7) {
        let k = k.min(n);
        let mut rng = seeded_rng(s);
        let a = random_matrix(&mut rng, n, k) * random_matrix(&mut rng, k, n);
        let ap = pinv(&a);
        prop_assert!(approx_eq(&(&a * &ap * &a), &a, 1e-9));
        let b = range_basis(&a);
        prop_assert_eq!(b.ncols(), rank(&a));
        prop_assert!(approx_eq(&(&b * b.adjoint() * &a), &a, 1e-9));
        let sv = singular_values(&a);
        let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((sv.iter().map(|x| x * x).sum::<f64>() - fro).abs() <= 1e-9 * fro.max(1.0));
    }
}
