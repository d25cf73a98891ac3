use std::collections::BTreeMap;

use super::*;
use crate::ambient::AmbientSpace;
use crate::sampling::{combination, random_orthogonal, seeded};

fn flat2() -> AmbientSpace {
    AmbientSpace::flat(2).unwrap()
}

fn builtin(a: &AmbientSpace, name: &str, params: &[(&str, f64)]) -> Immersion {
    let p: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    Immersion::builtin(a, name, &p).unwrap()
}

fn at(s: &Immersion, u: &[f64]) -> Result<PointGeometry<f64>> {
    PointGeometry::at(s, u)
}

fn unit(geom: &PointGeometry<f64>, v: Vec<f64>) -> Vec<f64> {
    let n = geom.ambient_metric.norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

#[test]
fn slant_plane_basics() {
    let theta: f64 = 0.5;
    let s = builtin(&flat2(), "SLANT", &[("theta", theta)]);
    let geom = at(&s, &[0.2, -0.4]).unwrap();
    assert!(geom.induced.matrix().sub(&Mat::identity(2)).max_abs() < 1e-15);
    assert_eq!(geom.frame.tangent[0], vec![1.0, 0.0, 0.0, 0.0]);
    assert!((geom.frame.tangent[1][1] - theta.cos()).abs() < 1e-15);
    assert_eq!(geom.frame.normal.len(), 2);
    let ext = &geom.extrinsic;
    assert!(ext.omega_norm_sq < 1e-24 && ext.h_norm < 1e-12);
    assert!((ext.t_norm_sq - 2.0 * theta.cos().powi(2)).abs() < 1e-12);
    assert!(geom.curvature.riemann.max_abs() < 1e-12);
}

#[test]
fn lagrangian_normals_are_j_of_tangents() {
    let s = builtin(&flat2(), "LAGR2", &[]);
    let geom = at(&s, &[0.1, 0.3]).unwrap();
    for e in &geom.frame.tangent {
        let je = geom.apply_j(e);
        // Je lies in the normal span.
        let t = geom.tangent_part(&je);
        assert!(geom.ambient_metric.norm(&t) < 1e-9);
    }
}

#[test]
fn sphere_closed_forms() {
    for r in [1.0f64, 2.0] {
        let s = builtin(&flat2(), "SPH3", &[("r", r)]);
        let u: [f64; 3] = [0.3, -0.2, 1.0];
        let geom = at(&s, &u).unwrap();
        let ext = &geom.extrinsic;
        assert!((ext.h_norm - 1.0 / r).abs() < 1e-9);
        assert!((ext.omega_norm_sq - 3.0 / (r * r)).abs() < 1e-9);
        // det = r⁶ cos⁴u cos²v
        let det = geom.induced.determinant();
        let expect = r.powi(6) * u[0].cos().powi(4) * u[1].cos().powi(2);
        assert!((det - expect).abs() < 1e-10 * expect);
        for a in 0..3 {
            for b in (a + 1)..3 {
                let k = geom.sectional(&geom.frame.tangent[a], &geom.frame.tangent[b]).unwrap();
                assert!((k - 1.0 / (r * r)).abs() < 1e-6, "{k}");
            }
        }
        assert!((geom.rho() - 3.0 / (r * r)).abs() < 1e-6);
        // outward radial normal
        let x = &geom.jet.x;
        let nu = &geom.frame.normal;
        let radial: Vec<f64> = x.iter().map(|v| v / r).collect();
        let overlap: f64 = nu.iter().map(|v| geom.g(v, &radial).powi(2)).sum();
        assert!((overlap - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sphere_is_a_cr_hypersurface() {
    // A real hypersurface of C²: the tangent space contains the complex line
    // orthogonal to Jν, so ‖T‖² = 2.
    let s = builtin(&flat2(), "SPH3", &[("r", 1.0)]);
    let geom = at(&s, &[0.3, -0.2, 1.0]).unwrap();
    assert!((geom.extrinsic.t_norm_sq - 2.0).abs() < 1e-12);
}

#[test]
fn crw_metric_and_structure() {
    let s = builtin(&flat2(), "CRW", &[]);
    let geom = at(&s, &[1.0, 0.0, 0.7]).unwrap();
    assert!(geom.induced.matrix().sub(&Mat::identity(3)).max_abs() < 1e-15);
    let geom = at(&s, &[1.2, -0.5, 0.7]).unwrap();
    let z2: f64 = 1.2 * 1.2 + 0.25;
    assert!((geom.induced.matrix()[(2, 2)] - z2).abs() < 1e-14);
    assert!((geom.extrinsic.omega_norm_sq - 2.0 / z2).abs() < 1e-12);
}

#[test]
fn complex_line() {
    let s = builtin(&flat2(), "CLINE", &[]);
    let geom = at(&s, &[0.3, 0.1]).unwrap();
    assert!((geom.extrinsic.t_norm_sq - 2.0).abs() < 1e-15);
    assert!(geom.extrinsic.f_vectors.iter().all(|f| f.iter().all(|v| v.abs() < 1e-15)));

    let fs2 = AmbientSpace::fubini_study(2).unwrap();
    let s = builtin(&fs2, "CLINE", &[]);
    let geom = at(&s, &[0.3, -0.6]).unwrap();
    let e = &geom.frame.tangent;
    assert!((geom.sectional(&e[0], &e[1]).unwrap() - 4.0).abs() < 1e-5);
    assert!((geom.rho() - 4.0).abs() < 1e-5);
    assert!(geom.extrinsic.omega_norm_sq < 1e-18);
}

#[test]
fn extrinsic_invariants_and_weingarten() {
    let fs2 = AmbientSpace::fubini_study(2).unwrap();
    let fixtures = [
        builtin(&flat2(), "SPH3", &[("r", 1.0)]),
        builtin(&flat2(), "CRW", &[]),
        builtin(&flat2(), "SLANT", &[("theta", 0.7)]),
        Immersion::from_expressions(&fs2, &["u", "v"], &["u", "v*v", "sin(u*v)", "0.3*v"], &[-1.0; 2], &[1.0; 2]).unwrap(),
    ];
    let mut rng = seeded(3);
    for s in &fixtures {
        for _ in 0..3 {
            let u = s.random_point(&mut rng);
            let geom = at(s, &u).unwrap();
            let ext = &geom.extrinsic;
            assert!(ext.omega_asymmetry() < 1e-8);
            assert!(ext.t_antisymmetry() < 1e-9);
            assert!(ext.t_norm_sq >= -1e-8 && ext.t_norm_sq <= geom.n() as f64 + 1e-8);
            assert!(geom.frame.orthonormality_residual(&geom.ambient_metric) < 1e-8);
            assert!(geom.weingarten_residual() < 1e-9, "{}", geom.weingarten_residual());
        }
    }
}

#[test]
fn frame_invariants_survive_rotation() {
    let s = builtin(&flat2(), "CRW", &[]);
    let geom = at(&s, &[1.3, 0.4, 0.5]).unwrap();
    let mut rng = seeded(8);
    let q = random_orthogonal(&mut rng, 3);
    let rotated = geom.frame.rotated(&q);
    let ext = geom.extrinsic_for(&rotated);
    assert!((ext.h_norm - geom.extrinsic.h_norm).abs() < 1e-12);
    assert!((ext.omega_norm_sq - geom.extrinsic.omega_norm_sq).abs() < 1e-12);
    assert!((ext.t_norm_sq - geom.extrinsic.t_norm_sq).abs() < 1e-12);
    assert!((geom.rho_over(&rotated.tangent) - geom.rho()).abs() < 1e-7);
}

#[test]
fn gauss_on_sphere_and_printed_sign() {
    let s = builtin(&flat2(), "SPH3", &[("r", 1.0)]);
    let geom = at(&s, &[0.2, 0.1, -0.4]).unwrap();
    let e = &geom.frame.tangent;
    assert!(gauss_residual(&geom, &e[0], &e[1], &e[1], &e[0]).unwrap() < 1e-6);
    // With the ω terms carrying the opposite sign the identity is off by 2.
    let flipped = geom.ambient_curvature.r(&e[0], &e[1], &e[1], &e[0]) - geom.intrinsic_r(&e[0], &e[1], &e[1], &e[0])
        - geom.g(&geom.omega(&e[0], &e[0]), &geom.omega(&e[1], &e[1]))
        + geom.g(&geom.omega(&e[0], &e[1]), &geom.omega(&e[1], &e[0]));
    assert!((flipped.abs() - 2.0).abs() < 1e-6);
}

#[test]
fn gauss_and_codazzi_random_tuples() {
    let fs2 = AmbientSpace::fubini_study(2).unwrap();
    let ch2 = AmbientSpace::complex_hyperbolic(2).unwrap();
    let fixtures = [
        builtin(&flat2(), "CRW", &[]),
        builtin(&fs2, "CLINE", &[]),
        builtin(&ch2, "SPH3", &[("r", 0.5)]),
        Immersion::from_expressions(&fs2, &["u", "v", "w"], &["u", "v", "w", "0.5*u^2+v^2-0.7*w^2+u*w"], &[-0.5; 3], &[0.5; 3])
            .unwrap(),
    ];
    let mut rng = seeded(21);
    for s in &fixtures {
        let u = s.random_point(&mut rng);
        let geom = at(s, &u).unwrap();
        let cod = CodazziDefect::at(s, &geom).unwrap();
        for _ in 0..5 {
            let v: Vec<Vec<f64>> = (0..4).map(|_| unit(&geom, combination(&mut rng, &geom.frame.tangent))).collect();
            let gr = gauss_residual(&geom, &v[0], &v[1], &v[2], &v[3]).unwrap();
            assert!(gr < 1e-5, "{} gauss {gr}", s.name());
            let cr = cod.residual(&geom, &v[0], &v[1], &v[2]).unwrap();
            assert!(cr < 1e-5, "{} codazzi {cr}", s.name());
        }
    }
}

#[test]
fn non_tangent_input_rejected() {
    let s = builtin(&flat2(), "SLANT", &[("theta", 0.3)]);
    let x = [1.0, 0.0, 0.0, 0.0];
    let bad = [0.0, 0.0, 0.0, 1.0];
    assert!(matches!(
        gauss_residual_at(&s, &[0.0, 0.0], &x, &bad, &x, &x),
        Err(Error::NotTangent { .. })
    ));
}

#[test]
fn classification() {
    let mut rng = seeded(1);
    let a = flat2();
    let pts = |s: &Immersion, rng: &mut crate::sampling::SampleRng| (0..3).map(|_| s.random_point(rng)).collect::<Vec<_>>();
    for theta in [0.3, 0.7, 1.2] {
        let s = builtin(&a, "SLANT", &[("theta", theta)]);
        let c = classify(&s, &pts(&s, &mut rng), 8, 1e-6, &mut rng).unwrap();
        match c.class {
            Class::Slant { theta: t } => assert!((t - theta).abs() < 1e-6),
            other => panic!("{other}"),
        }
    }
    let s = builtin(&a, "LAGR2", &[]);
    assert_eq!(classify(&s, &pts(&s, &mut rng), 8, 1e-6, &mut rng).unwrap().class, Class::AntiInvariant);
    let s = builtin(&a, "CLINE", &[]);
    assert_eq!(classify(&s, &pts(&s, &mut rng), 8, 1e-6, &mut rng).unwrap().class, Class::Invariant);
    let s = builtin(&a, "CRW", &[]);
    assert_eq!(classify(&s, &pts(&s, &mut rng), 8, 1e-6, &mut rng).unwrap().class, Class::Cr { p: 1, q: 1 });
    let s = Immersion::from_expressions(&a, &["u", "v"], &["u", "v", "u*v", "u^2"], &[-1.0; 2], &[1.0; 2]).unwrap();
    assert_eq!(classify(&s, &pts(&s, &mut rng), 8, 1e-6, &mut rng).unwrap().class, Class::Generic);
}

#[test]
fn rank_deficiency_detected() {
    let s = Immersion::from_expressions(&flat2(), &["u", "v"], &["u", "u", "0", "0"], &[-1.0; 2], &[1.0; 2]).unwrap();
    assert!(matches!(at(&s, &[0.1, 0.2]), Err(Error::RankDeficient { .. })));
}
