//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Expected values come from closed forms evaluated here (space-form
//! curvature, round spheres, the CR-warped fixture's log|z|), never from the
//! code under test.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use rand::Rng;

use kaehler_core::ambient::{AmbientKind, AmbientSpace};
use kaehler_core::bochner::{bochner_residual, calibration_residual, cr_orthogonal_pair, identity_w33, symmetry_audit};
use kaehler_core::chen::{
    chen_lemma, chen_terms_in, coefficient_identity_residual, equality_form, proof_audit, thm1_margin_at, RicciSource,
};
use kaehler_core::crwarp::{lemma2_check_at, pq_tensors, split_distributions, thm3_margin_at, warp_data, warping_check, SPLIT_TOL};
use kaehler_core::sampling::{ball_point, combination, random_orthogonal, seeded, SampleRng};
use kaehler_core::submanifold::{classify, gauss_residual, Class, CodazziDefect, Immersion, Plane, PointGeometry};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn builtin(a: &AmbientSpace, name: &str, params: &[(&str, f64)]) -> Immersion {
    let p: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    Immersion::builtin(a, name, &p).unwrap()
}

fn flat2() -> AmbientSpace {
    AmbientSpace::flat(2).unwrap()
}

fn fs2() -> AmbientSpace {
    AmbientSpace::fubini_study(2).unwrap()
}

fn all_ambients() -> Vec<AmbientSpace> {
    AmbientKind::ALL
        .iter()
        .flat_map(|&k| [2, 3].map(|m| AmbientSpace::new(k, m).unwrap()))
        .collect()
}

fn random_points(a: &AmbientSpace, count: usize, rng: &mut SampleRng) -> Vec<Vec<f64>> {
    (0..count).map(|_| ball_point(rng, a.dim(), a.sampling_radius())).collect()
}

fn unit_tangent(g: &PointGeometry<f64>, rng: &mut SampleRng) -> Vec<f64> {
    let v = combination(rng, &g.frame.tangent);
    let n = g.ambient_metric.norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

fn c1_kaehler_audit() -> Outcome {
    let mut rng = seeded(101);
    let (mut j2, mut nj, mut sym) = (0.0f64, 0.0f64, 0.0f64);
    for a in all_ambients() {
        for p in random_points(&a, 20, &mut rng) {
            let r = a.kaehler_residuals(&p).unwrap();
            j2 = j2.max(r.j_squared);
            nj = nj.max(r.nabla_j);
            sym = sym
                .max(r.antisym_first_pair)
                .max(r.antisym_second_pair)
                .max(r.pair_swap)
                .max(r.first_bianchi);
        }
    }
    (
        j2 <= 1e-12 && nj <= 1e-6 && sym <= 1e-6,
        format!("J²+I {j2:.1e}, ∇J {nj:.1e}, symmetries/Bianchi {sym:.1e}"),
    )
}

fn c2_space_form_curvature() -> Outcome {
    // Holomorphic sectional curvature 4c gives Ric = 2(m+1)c·g, tau = 4m(m+1)c.
    let mut rng = seeded(102);
    let (mut ric, mut tau, mut hol) = (0.0f64, 0.0f64, 0.0f64);
    for kind in [AmbientKind::FubiniStudy, AmbientKind::ComplexHyperbolic] {
        let a = AmbientSpace::new(kind, 2).unwrap();
        let c = if kind == AmbientKind::FubiniStudy { 1.0 } else { -1.0 };
        for p in random_points(&a, 20, &mut rng) {
            let cd = a.curvature_at(&p).unwrap();
            ric = ric.max(cd.ricci.sub(&cd.metric.matrix().scale(6.0 * c)).max_abs());
            tau = tau.max((cd.tau - 24.0 * c).abs());
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let jx = a.complex_structure::<f64>().matvec(&x);
            hol = hol.max((cd.sectional(&x, &jx) - 4.0 * c).abs());
        }
    }
    (
        ric <= 1e-4 && tau <= 1e-3 && hol <= 1e-4,
        format!("‖Ric − 6cg‖ {ric:.1e}, |tau − 24c| {tau:.1e}, |K_hol − 4c| {hol:.1e}"),
    )
}

fn c3_bochner_reconstruction() -> Outcome {
    let mut rng = seeded(103);
    let mut worst = 0.0f64;
    let ambients = [
        AmbientSpace::flat(2).unwrap(),
        AmbientSpace::fubini_study(2).unwrap(),
        AmbientSpace::complex_hyperbolic(2).unwrap(),
        AmbientSpace::fubini_study(3).unwrap(),
        AmbientSpace::complex_hyperbolic(3).unwrap(),
    ];
    for a in &ambients {
        for p in random_points(a, 20, &mut rng) {
            worst = worst.max(bochner_residual(a, &p).unwrap());
        }
    }
    // Among d ∈ {m+1, m, 2m} only d = m reconstructs the curvature.
    let mut calibrated = true;
    let mut detail = Vec::new();
    for kind in [AmbientKind::FubiniStudy, AmbientKind::ComplexHyperbolic] {
        for m in [2usize, 3] {
            let a = AmbientSpace::new(kind, m).unwrap();
            let p = random_points(&a, 1, &mut rng).remove(0);
            let pass: Vec<usize> = [m + 1, m, 2 * m]
                .into_iter()
                .filter(|&d| calibration_residual(&a, &p, d).unwrap() <= 1e-5)
                .collect();
            calibrated &= pass == [m];
            detail.push(format!("{}:{pass:?}", a.label()));
        }
    }
    (
        worst <= 1e-5 && calibrated,
        format!("worst residual {worst:.1e}; calibrating d {}", detail.join(" ")),
    )
}

fn c4_symmetries() -> Outcome {
    let mut rng = seeded(104);
    let mut worst = 0.0f64;
    for a in all_ambients() {
        for p in random_points(&a, 20, &mut rng) {
            worst = worst.max(symmetry_audit(&a, &p, 1e-9).unwrap().worst_residual());
        }
    }
    (worst <= 1e-9, format!("worst L/M symmetry residual {worst:.1e}"))
}

fn gauss_codazzi_suite() -> Vec<Immersion> {
    vec![
        builtin(&flat2(), "SPH3", &[("r", 1.0)]),
        builtin(&flat2(), "SLANT", &[("theta", 0.7)]),
        builtin(&flat2(), "LAGR2", &[]),
        builtin(&flat2(), "CRW", &[]),
        builtin(&fs2(), "CLINE", &[]),
    ]
}

fn c5_gauss_codazzi() -> Outcome {
    let mut rng = seeded(105);
    let (mut gauss, mut codazzi) = (0.0f64, 0.0f64);
    for s in gauss_codazzi_suite() {
        for _ in 0..10 {
            let g = PointGeometry::at(&s, &s.random_point(&mut rng)).unwrap();
            let defect = CodazziDefect::at(&s, &g).unwrap();
            for _ in 0..10 {
                let v: Vec<Vec<f64>> = (0..4).map(|_| unit_tangent(&g, &mut rng)).collect();
                gauss = gauss.max(gauss_residual(&g, &v[0], &v[1], &v[2], &v[3]).unwrap());
                codazzi = codazzi.max(defect.residual(&g, &v[0], &v[1], &v[2]).unwrap());
            }
        }
    }
    (
        gauss <= 1e-4 && codazzi <= 1e-3,
        format!("Gauss {gauss:.1e}, Codazzi {codazzi:.1e}"),
    )
}

fn c6_round_sphere() -> Outcome {
    let mut rng = seeded(106);
    let mut ok = true;
    let mut errs = [0.0f64; 4];
    for r in [1.0f64, 2.0] {
        let s = builtin(&flat2(), "SPH3", &[("r", r)]);
        for _ in 0..10 {
            let g = PointGeometry::at(&s, &s.random_point(&mut rng)).unwrap();
            let e = [
                (g.extrinsic.h_norm - 1.0 / r).abs(),
                (g.extrinsic.omega_norm_sq - 3.0 / (r * r)).abs(),
                (0..3)
                    .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
                    .map(|(a, b)| (g.sectional(&g.frame.tangent[a], &g.frame.tangent[b]).unwrap() - 1.0 / (r * r)).abs())
                    .fold(0.0, f64::max),
                (g.rho() - 3.0 / (r * r)).abs(),
            ];
            for (w, v) in errs.iter_mut().zip(e) {
                *w = w.max(v);
            }
        }
    }
    for (w, tol) in errs.iter().zip([1e-6, 1e-5, 1e-4, 1e-3]) {
        ok &= *w <= tol;
    }
    (
        ok,
        format!("|‖H‖−1/r| {:.1e}, |‖ω‖²−3/r²| {:.1e}, |K−1/r²| {:.1e}, |ρ−3/r²| {:.1e}", errs[0], errs[1], errs[2], errs[3]),
    )
}

fn c7_slant() -> Outcome {
    let mut rng = seeded(107);
    let mut ok = true;
    let mut detail = Vec::new();
    for theta in [0.3f64, 0.7, 1.2] {
        let s = builtin(&flat2(), "SLANT", &[("theta", theta)]);
        let pts: Vec<_> = (0..5).map(|_| s.random_point(&mut rng)).collect();
        let c = classify(&s, &pts, 8, 1e-6, &mut rng).unwrap();
        let angle_ok = matches!(c.class, Class::Slant { theta: t } if (t - theta).abs() <= 1e-6);
        let t_err = pts
            .iter()
            .map(|u| (PointGeometry::at(&s, u).unwrap().extrinsic.t_norm_sq - 2.0 * theta.cos().powi(2)).abs())
            .fold(0.0, f64::max);
        ok &= angle_ok && t_err <= 1e-8;
        detail.push(format!("θ={theta}: {} ‖T‖² err {t_err:.1e}", c.class));
    }
    let inv = builtin(&flat2(), "CLINE", &[]);
    let anti = builtin(&flat2(), "LAGR2", &[]);
    for (s, want) in [(&inv, Class::Invariant), (&anti, Class::AntiInvariant)] {
        let pts: Vec<_> = (0..5).map(|_| s.random_point(&mut rng)).collect();
        let got = classify(s, &pts, 8, 1e-6, &mut rng).unwrap().class;
        ok &= got == want;
        detail.push(format!("{}: {got}", s.name()));
    }
    (ok, detail.join("; "))
}

fn c8_lemma() -> Outcome {
    let mut rng = seeded(108);
    let (mut min_slack, mut bad) = (f64::INFINITY, 0usize);
    let (mut eq_seen, mut neq_seen) = (0usize, 0usize);
    for k in 0..1000 {
        let n = rng.gen_range(2..=8usize);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        if k % 2 == 1 {
            let s = x[0] + x[1];
            x[2..].iter_mut().for_each(|v| *v = s);
        }
        let nf = n as f64;
        let sum: f64 = x.iter().sum();
        let b = sum * sum / (nf - 1.0) - x.iter().map(|v| v * v).sum::<f64>();
        let r = chen_lemma(&x, b).unwrap();
        min_slack = min_slack.min(r.slack);
        let pattern = x[2..].iter().all(|&v| (x[0] + x[1] - v).abs() <= 1e-6);
        if pattern {
            eq_seen += 1;
        } else {
            neq_seen += 1;
        }
        if r.equality != pattern || (r.slack.abs() <= 1e-12) != pattern {
            bad += 1;
        }
    }
    (
        min_slack >= -1e-12 && bad == 0 && eq_seen > 0 && neq_seen > 0,
        format!("min slack {min_slack:.1e}, equality mismatches {bad}, equality/strict instances {eq_seen}/{neq_seen}"),
    )
}

fn c9_theorem1() -> Outcome {
    let mut ok = true;
    let mut ident = 0.0f64;
    for n in 2..=12 {
        for t in [0.0, 0.5, 1.0, n as f64 / 2.0, n as f64] {
            ident = ident.max(coefficient_identity_residual::<f64>(n, t));
        }
    }
    ok &= ident <= 1e-12;

    let e01 = Plane::<f64>::Frame(0, 1);
    let geodesic = [
        builtin(&flat2(), "SLANT", &[("theta", 0.3)]),
        builtin(&flat2(), "SLANT", &[("theta", 0.7)]),
        builtin(&flat2(), "SLANT", &[("theta", 1.2)]),
        builtin(&flat2(), "LAGR2", &[]),
        builtin(&flat2(), "CLINE", &[]),
        builtin(&flat2(), "CRPROD", &[]),
    ];
    let mut rng = seeded(109);
    let (mut margin0, mut eq_ok) = (0.0f64, true);
    for s in &geodesic {
        for _ in 0..5 {
            let u = s.random_point(&mut rng);
            let (m, _) = thm1_margin_at(s, &u, &e01, RicciSource::Ambient).unwrap();
            margin0 = margin0.max(m.abs());
            eq_ok &= equality_form(&PointGeometry::at(s, &u).unwrap(), 1e-8).unwrap().pass;
        }
    }
    ok &= margin0 <= 1e-8 && eq_ok;

    let sph = builtin(&flat2(), "SPH3", &[("r", 1.0)]);
    let sph_fails = (0..5).all(|_| {
        let u = sph.random_point(&mut rng);
        !equality_form(&PointGeometry::at(&sph, &u).unwrap(), 1e-6).unwrap().pass
    });
    ok &= sph_fails;

    let graph = Immersion::from_expressions(
        &fs2(),
        &["u", "v", "w"],
        &["u", "v*cos(w)", "w", "0.3*u*v+sin(w)"],
        &[-0.4; 3],
        &[0.4; 3],
    )
    .unwrap();
    let curved = [sph.clone(), builtin(&flat2(), "CRW", &[]), graph.clone()];
    let mut invariance = 0.0f64;
    for s in &curved {
        for _ in 0..5 {
            let g = PointGeometry::at(s, &s.random_point(&mut rng)).unwrap();
            let (x, y) = (&g.frame.tangent[0], &g.frame.tangent[1]);
            for src in [RicciSource::Ambient, RicciSource::Intrinsic] {
                let base = chen_terms_in(&g, &g.frame, x, y, src).unwrap().margin;
                for _ in 0..3 {
                    let rot = g.frame.rotated(&random_orthogonal(&mut rng, g.n()));
                    invariance = invariance.max((chen_terms_in(&g, &rot, x, y, src).unwrap().margin - base).abs());
                }
            }
        }
    }
    ok &= invariance <= 1e-7;

    let mut p13 = 0.0f64;
    let everything: Vec<&Immersion> = geodesic.iter().chain(&curved).collect();
    let cline_fs2 = builtin(&fs2(), "CLINE", &[]);
    for s in everything.into_iter().chain([&cline_fs2]) {
        for _ in 0..5 {
            let g = PointGeometry::at(s, &s.random_point(&mut rng)).unwrap();
            p13 = p13.max(proof_audit(&g, 1e-10).unwrap().get("p13").unwrap().abs());
        }
    }
    ok &= p13 <= 1e-10;
    (
        ok,
        format!(
            "identity {ident:.1e}; geodesic margins {margin0:.1e}, equality form {eq_ok}; sphere rejected {sph_fails}; frame invariance {invariance:.1e}; p13 {p13:.1e}"
        ),
    )
}

fn c10_cr_warped() -> Outcome {
    let s = builtin(&flat2(), "CRW", &[]);
    let (mut split_res, mut pq_ok, mut w8, mut xlog, mut l2) = (0.0f64, true, 0.0f64, 0.0f64, 0.0f64);
    let mut pq_max = 0.0f64;
    for u in s.grid(&[5, 5, 5]) {
        let g = PointGeometry::at(&s, &u).unwrap();
        let split = split_distributions(&g, SPLIT_TOL).unwrap();
        pq_ok &= (split.p, split.q) == (1, 1);
        split_res = split_res.max(split.worst_residual());
        w8 = w8.max(warping_check(&s, &g, 1e-6).unwrap().worst_residual());
        // X(log f) against the gradient (u, v)/|z|² of log|z|.
        let z2 = u[0] * u[0] + u[1] * u[1];
        let wd = warp_data(&s, &g, &split).unwrap();
        for (x, got) in split.d_frame.iter().zip(&wd.x_log_f) {
            let c = g.chart_components(x);
            let want = (c[0] * u[0] + c[1] * u[1]) / z2;
            xlog = xlog.max((got - want).abs());
        }
        l2 = l2.max(lemma2_check_at(&s, &u, 1e-6).unwrap().worst_residual());
        for x in split.d_frame.iter().chain(&split.dperp_frame) {
            for y in split.d_frame.iter().chain(&split.dperp_frame) {
                let (p, q) = pq_tensors(&g, x, y).unwrap();
                pq_max = pq_max.max(g.ambient_metric.norm(&p)).max(g.ambient_metric.norm(&q));
            }
        }
    }
    let at1 = thm3_margin_at(&s, &[1.0, 0.0, 0.5]).unwrap();
    let at2 = thm3_margin_at(&s, &[2.0, 0.0, 0.5]).unwrap();
    let rhs1 = at1.p_norm_sq + at1.q_grad_sq;
    let closed = (at1.omega_norm_sq - 2.0).abs() <= 1e-5
        && (rhs1 - 1.0).abs() <= 1e-6
        && (at1.margin - 1.0).abs() <= 1e-5
        && (at2.margin - 0.25).abs() <= 1e-5;
    (
        pq_ok && split_res <= 1e-8 && w8 <= 1e-6 && xlog <= 1e-6 && l2 <= 1e-6 && closed && pq_max <= 1e-8,
        format!(
            "(p,q)=(1,1) {pq_ok}, split {split_res:.1e}, w8 {w8:.1e}, X(log f) {xlog:.1e}, lemma2 {l2:.1e}, z=1: ‖ω‖² {:.6} rhs {:.6} margin {:.6}, z=2 margin {:.6}, P/Q {pq_max:.1e}",
            at1.omega_norm_sq, rhs1, at1.margin, at2.margin
        ),
    )
}

fn c11_w33() -> Outcome {
    let mut rng = seeded(111);
    let (mut worst, mut value_err) = (0.0f64, 0.0f64);
    for a in [fs2(), AmbientSpace::complex_hyperbolic(2).unwrap()] {
        for p in random_points(&a, 20, &mut rng) {
            let (x, z) = cr_orthogonal_pair(&a, &p, &mut rng).unwrap();
            let id = identity_w33(&a, &p, &x, &z).unwrap();
            worst = worst.max(id.residual);
            if a.kind() == AmbientKind::FubiniStudy {
                // Constant holomorphic curvature 4: R(X,JX,Z,JZ) = −2 for such pairs.
                value_err = value_err.max((id.lhs + 2.0).abs());
            }
        }
    }
    (
        worst <= 1e-5 && value_err <= 1e-4,
        format!("residual {worst:.1e}, |FS2 value + 2| {value_err:.1e}"),
    )
}

fn strip_timestamp(json: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(json).unwrap();
    v.as_object_mut().unwrap().remove("generated_at");
    v
}

fn c12_cli() -> Outcome {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let run = |name: &str, jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_kaehler-verify"))
            .env_remove("KAEHLER_VERIFY_OUT_DIR")
            .args(["verify", configs.join(name).to_str().unwrap(), "--format", "json", "--seed", "17", "--jobs", jobs])
            .output()
            .unwrap()
    };
    let a = run("graph_fs2.toml", "1");
    let b = run("graph_fs2.toml", "4");
    let same = strip_timestamp(&a.stdout) == strip_timestamp(&b.stdout);
    let pass_code = a.status.code();
    let fail = run("sphere_failing.toml", "2");
    let failed = strip_timestamp(&fail.stdout)["summary"]["failed"].as_u64().unwrap();
    let ok = same && pass_code == Some(0) && fail.status.code() == Some(1) && failed > 0;
    (
        ok,
        format!(
            "identical JSON {same}; passing config exit {pass_code:?}; failing config exit {:?} with {failed} failed",
            fail.status.code()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Kaehler audit", c1_kaehler_audit),
        ("space-form curvature", c2_space_form_curvature),
        ("Bochner reconstruction and calibration", c3_bochner_reconstruction),
        ("L/M symmetries", c4_symmetries),
        ("Gauss and Codazzi", c5_gauss_codazzi),
        ("round-sphere closed forms", c6_round_sphere),
        ("slant identities", c7_slant),
        ("quadratic lemma", c8_lemma),
        ("inequality machinery", c9_theorem1),
        ("CR-warped fixture", c10_cr_warped),
        ("holomorphic pair identity", c11_w33),
        ("CLI determinism and exit codes", c12_cli),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        failed += usize::from(!ok);
        println!("[{}] {:>2}. {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
