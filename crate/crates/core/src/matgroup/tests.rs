use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use super::*;

fn desc(name: &str) -> Arc<GroupDescriptor> {
    Arc::new(GroupDescriptor::parse(name).unwrap())
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn haar_su2_is_special_unitary() {
    let g = desc("SU(2)");
    let x = haar_sample(&g, 0);
    let u = &x.factors()[0];
    assert!(linalg::unitarity_residual(u) <= 1e-12);
    assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
}

#[test]
fn haar_is_deterministic_per_seed() {
    let g = desc("G_{2,3}");
    let a = haar_sample(&g, 42);
    let b = haar_sample(&g, 42);
    assert_eq!(a.to_wire(), b.to_wire());
    assert_ne!(a.to_wire(), haar_sample(&g, 43).to_wire());
}

#[test]
fn haar_su2_trace_moments_match_weyl_quadrature() {
    // Class functions on SU(2) integrate against (2/pi) sin^2(theta) on [0, pi],
    // where the eigenvalues are exp(+-i theta) and the trace is 2 cos(theta).
    let density = |t: f64| 2.0 / PI * t.sin().powi(2);
    let total = simpson(density, 0.0, PI, 2000);
    let mean = simpson(|t| 2.0 * t.cos() * density(t), 0.0, PI, 2000);
    let second = simpson(|t| (2.0 * t.cos()).powi(2) * density(t), 0.0, PI, 2000);
    assert!((total - 1.0).abs() < 1e-12);

    let g = desc("SU(2)");
    let mut rng = rng_from_seed(7);
    let n = 10_000;
    let traces: Vec<f64> = (0..n).map(|_| haar_sample_with(&g, &mut rng).factors()[0].trace().re).collect();
    let m1 = traces.iter().sum::<f64>() / n as f64;
    let m2 = traces.iter().map(|t| t * t).sum::<f64>() / n as f64;
    assert!((m1 - mean).abs() < 0.05, "mean trace {m1} vs {mean}");
    assert!((m2 - second).abs() < 0.05, "second moment {m2} vs {second}");
}

#[test]
fn log_of_identity_is_zero() {
    let g = desc("G_{2,3}");
    let a = group_log(&GroupElement::identity(&g)).unwrap();
    assert!(a.norm() < 1e-15);
}

#[test]
fn log_of_diag_i() {
    let g = desc("SU(2)");
    let x = GroupElement::from_parts(&g, vec![], vec![linalg::diag_phases(&[PI / 2.0, -PI / 2.0])]).unwrap();
    let a = group_log(&x).unwrap();
    let expected = linalg::diag_phases(&[0.0, 0.0]).map(|_| Complex64::new(0.0, 0.0));
    let mut expected = expected;
    expected[(0, 0)] = Complex64::new(0.0, PI / 2.0);
    expected[(1, 1)] = Complex64::new(0.0, -PI / 2.0);
    assert!(linalg::frobenius_diff(&a.factors[0], &expected) < 1e-14);
}

#[test]
fn log_rejects_branch_cut() {
    let g = desc("SU(2)");
    let x = GroupElement::from_parts(&g, vec![], vec![linalg::scalar(2, Complex64::new(-1.0, 0.0))]).unwrap();
    assert!(matches!(group_log(&x), Err(Error::BranchCut { factor: 0, .. })));
    let t = desc("T^1");
    let y = GroupElement::from_parts(&t, vec![PI], vec![]).unwrap();
    assert!(matches!(group_log(&y), Err(Error::BranchCut { .. })));
}

#[test]
fn log_stays_traceless_when_principal_phases_wrap() {
    let g = desc("SU(3)");
    let x = GroupElement::from_parts(&g, vec![], vec![linalg::diag_phases(&[0.9 * PI, 0.9 * PI, -1.8 * PI])]).unwrap();
    let a = group_log(&x).unwrap();
    assert!(a.factors[0].trace().norm() < 1e-12);
    let back = group_exp(&g, &a);
    assert!(lift_distance(&back, &x).unwrap() < 1e-12);
}

#[test]
fn exp_log_roundtrip_on_haar_samples() {
    for name in ["SU(2)", "SU(3)", "SU(4)", "G_{2,3}", "U(2)"] {
        let g = desc(name);
        let mut rng = rng_from_seed(11);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let x = haar_sample_with(&g, &mut rng);
            let a = match group_log(&x) {
                Ok(a) => a,
                Err(Error::BranchCut { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            for m in &a.factors {
                assert!(m.trace().norm() < 1e-10);
                assert!(linalg::frobenius_diff(m, &(-m.adjoint())) < 1e-12);
            }
            worst = worst.max(lift_distance(&group_exp(&g, &a), &x).unwrap());
        }
        assert!(worst <= 1e-10, "{name}: roundtrip residual {worst:e}");
    }
}

#[test]
fn exp_basics() {
    let g = desc("SU(2)");
    let id = group_exp(&g, &LieAlgebraElement::zero(&g));
    assert!(lift_distance(&id, &GroupElement::identity(&g)).unwrap() < 1e-15);

    let mut a = LieAlgebraElement::zero(&g);
    a.factors[0][(0, 0)] = Complex64::new(0.0, PI);
    a.factors[0][(1, 1)] = Complex64::new(0.0, -PI);
    let minus = group_exp(&g, &a);
    assert!(linalg::frobenius_diff(&minus.factors()[0], &linalg::scalar(2, Complex64::new(-1.0, 0.0))) < 1e-14);

    let mut rng = rng_from_seed(3);
    for _ in 0..100 {
        let a = LieAlgebraElement::random(&g, 2.0, &mut rng);
        let prod = group_exp(&g, &a).mul(&group_exp(&g, &a.scale(-1.0))).unwrap();
        assert!(lift_distance(&prod, &GroupElement::identity(&g)).unwrap() < 1e-12);
        assert!(group_exp(&g, &a).unitarity_residual() < 1e-12);
    }
}

#[test]
fn distance_fixtures() {
    let g = desc("SU(2)");
    let x = haar_sample(&g, 1);
    assert_eq!(distance(&x, &x).unwrap(), 0.0);
    let id = GroupElement::identity(&g);
    let minus = GroupElement::from_parts(&g, vec![], vec![linalg::scalar(2, Complex64::new(-1.0, 0.0))]).unwrap();
    assert!((distance(&id, &minus).unwrap() - 2.0 * SQRT_2).abs() < 1e-14);
    let other = desc("SU(3)");
    assert_eq!(distance(&x, &GroupElement::identity(&other)), Err(Error::DescriptorMismatch));
}

#[test]
fn distance_is_bi_invariant_and_a_metric() {
    for name in ["SU(2)", "SU(3)", "U(2)", "G_{3,2}"] {
        let g = desc(name);
        let mut rng = rng_from_seed(5);
        for _ in 0..1000 {
            let x = haar_sample_with(&g, &mut rng);
            let y = haar_sample_with(&g, &mut rng);
            let z = haar_sample_with(&g, &mut rng);
            let dxy = distance(&x, &y).unwrap();
            let dyz = distance(&y, &z).unwrap();
            let dxz = distance(&x, &z).unwrap();
            assert!(dxz <= dxy + dyz + 1e-12);
            assert!((dxy - distance(&y, &x).unwrap()).abs() < 1e-12);
            let left = distance(&z.mul(&x).unwrap(), &z.mul(&y).unwrap()).unwrap();
            let right = distance(&x.mul(&z).unwrap(), &y.mul(&z).unwrap()).unwrap();
            assert!((left - dxy).abs() < 1e-12 && (right - dxy).abs() < 1e-12);
        }
    }
}

#[test]
fn coset_distance_ignores_central_factor() {
    let g = desc("G_{3,2}");
    let x = haar_sample(&g, 9);
    let kx = GroupElement::central(&g, 1).mul(&x).unwrap();
    assert!(lift_distance(&x, &kx).unwrap() > 1.0);
    assert!(distance(&x, &kx).unwrap() < 1e-14);
}

#[test]
fn from_parts_validates() {
    let g = desc("SU(2)");
    let not_special = linalg::diag_phases(&[0.1, 0.1]);
    assert!(matches!(GroupElement::from_parts(&g, vec![], vec![not_special]), Err(Error::InvalidElement(_))));
    assert!(GroupElement::from_parts(&g, vec![0.0], vec![linalg::identity(2)]).is_err());
}

#[test]
fn element_json_roundtrip() {
    let g = desc("U(2)");
    let x = haar_sample(&g, 17);
    let s = serde_json::to_string(&x.to_wire()).unwrap();
    let back = GroupElement::from_wire(&g, &serde_json::from_str(&s).unwrap()).unwrap();
    assert_eq!(back.to_wire(), x.to_wire());
}

#[test]
fn geodesic_midpoint_is_equidistant() {
    let g = desc("SU(3)");
    let mut rng = rng_from_seed(21);
    for _ in 0..50 {
        let x = haar_sample_with(&g, &mut rng);
        let y = x.mul(&group_exp(&g, &LieAlgebraElement::random(&g, 0.4, &mut rng))).unwrap();
        let m = geodesic_point(&x, &y, 0.5).unwrap();
        let (a, b) = (distance(&x, &m).unwrap(), distance(&m, &y).unwrap());
        assert!((a - b).abs() < 1e-12);
        let e = lift_distance(&geodesic_point(&x, &y, 1.0).unwrap(), &y).unwrap();
        assert!(e < 1e-12, "endpoint error {e:e}");
    }
}
