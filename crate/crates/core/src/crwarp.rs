//! CR-warped products `N_T ×_f N_⊥`: the split `TW = D ⊕ D⊥`,
//! `T⊥W = JD⊥ ⊕ ν`, the warping law `∇_X Z = X(log f)Z`, the tangential and
//! normal parts `P`, `Q` of `∇̄J`, and the bound
//! `‖ω‖² ≥ ‖P_{D⊥}D‖² + q‖grad_D log f‖²`.
//!
//! Vector fields are extended off a point by constant chart components, so
//! the warping checks assume a chart adapted to the product (base variables
//! spanning `D`, fiber variables spanning `D⊥`), as the builtins are.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::scalar::Real;
use crate::submanifold::{Immersion, PointGeometry};
use crate::tensorlab::{symmetric_eigen, Mat};

/// Eigenvalue tolerance used to sort `TᵀT` into `D` and `D⊥`.
pub const SPLIT_TOL: f64 = 1e-6;

/// `D`, `D⊥`, `JD⊥` and `ν` frames at a point, as ambient vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSplit {
    pub p: usize,
    pub q: usize,
    pub d_frame: Vec<Vec<f64>>,
    pub dperp_frame: Vec<Vec<f64>>,
    pub jdperp_frame: Vec<Vec<f64>>,
    pub nu_frame: Vec<Vec<f64>>,
    /// Eigenvalues of `TᵀT`, descending.
    pub spectrum: Vec<f64>,
    /// `max ‖JX − proj_D JX‖` over the `D` frame.
    pub j_invariance: f64,
    /// `max ‖(JZ)ᵀ‖` over the `D⊥` frame.
    pub jdperp_normality: f64,
    pub notes: Vec<String>,
}

impl DistributionSplit {
    pub fn worst_residual(&self) -> f64 {
        self.j_invariance.max(self.jdperp_normality)
    }
}

fn sub_proj(geom: &PointGeometry<f64>, v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = geom.g(q, &w);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
    }
    w
}

/// Greedy Gram–Schmidt of `candidates` keeping the first `k` with a
/// component of relative size above `1e-8`.
fn greedy_basis(geom: &PointGeometry<f64>, candidates: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in candidates {
        if out.len() == k {
            break;
        }
        let w = sub_proj(geom, v, &out);
        let norm = geom.ambient_metric.norm(&w);
        if norm > 1e-8 * geom.ambient_metric.norm(v).max(1e-300) {
            out.push(w.iter().map(|a| a / norm).collect());
        }
    }
    out
}

fn frame_vector(geom: &PointGeometry<f64>, c: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; geom.ambient_dim()];
    for (e, &ca) in geom.frame.tangent.iter().zip(c) {
        v.iter_mut().zip(e).for_each(|(o, x)| *o += ca * x);
    }
    v
}

fn norm(geom: &PointGeometry<f64>, v: &[f64]) -> f64 {
    geom.ambient_metric.norm(v)
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Splits the tangent space by the spectrum of `TᵀT`: eigenvalue 1 spans
/// `D`, eigenvalue 0 spans `D⊥`. Frames are the tangent frame projected onto
/// each eigenspace and orthonormalized in frame order.
pub fn split_distributions(geom: &PointGeometry<f64>, tol: f64) -> Result<DistributionSplit> {
    let n = geom.n();
    let t = &geom.extrinsic.t_matrix;
    let (spectrum, vecs) = symmetric_eigen(&t.transpose().matmul(t));
    let ones: Vec<usize> = (0..n).filter(|&k| (spectrum[k] - 1.0).abs() <= tol).collect();
    let zeros: Vec<usize> = (0..n).filter(|&k| spectrum[k].abs() <= tol).collect();
    if ones.len() + zeros.len() != n {
        return Err(Error::NotCr { spectrum });
    }
    let projected = |idx: &[usize]| -> Vec<Vec<f64>> {
        (0..n)
            .map(|a| {
                let c: Vec<f64> = (0..n)
                    .map(|b| idx.iter().map(|&k| vecs[k][a] * vecs[k][b]).sum())
                    .collect();
                frame_vector(geom, &c)
            })
            .collect()
    };
    let d_frame = greedy_basis(geom, &projected(&ones), ones.len());
    let dperp_frame = greedy_basis(geom, &projected(&zeros), zeros.len());
    let (p2, q) = (d_frame.len(), dperp_frame.len());
    let mut notes = Vec::new();
    if p2 % 2 == 1 {
        notes.push(format!("D has odd dimension {p2}; it cannot be J-invariant"));
    }
    if q == 0 {
        notes.push("degenerate CR structure: D⊥ = 0 (invariant submanifold)".into());
    }
    if p2 == 0 {
        notes.push("degenerate CR structure: D = 0 (anti-invariant submanifold)".into());
    }
    let j_invariance = d_frame
        .iter()
        .map(|x| {
            let jx = geom.apply_j(x);
            norm(geom, &sub_proj(geom, &jx, &d_frame))
        })
        .fold(0.0, f64::max);
    let jz: Vec<Vec<f64>> = dperp_frame.iter().map(|z| geom.apply_j(z)).collect();
    let jdperp_normality = jz
        .iter()
        .map(|v| norm(geom, &geom.tangent_part(v)))
        .fold(0.0, f64::max);
    let jdperp_frame = greedy_basis(geom, &jz.iter().map(|v| geom.normal_part(v)).collect::<Vec<_>>(), q);
    let rest: Vec<Vec<f64>> = geom
        .frame
        .normal
        .iter()
        .map(|v| sub_proj(geom, v, &jdperp_frame))
        .collect();
    let nu_frame = greedy_basis(geom, &rest, geom.frame.normal.len().saturating_sub(jdperp_frame.len()));
    Ok(DistributionSplit {
        p: p2 / 2,
        q,
        d_frame,
        dperp_frame,
        jdperp_frame,
        nu_frame,
        spectrum,
        j_invariance,
        jdperp_normality,
        notes,
    })
}

pub fn split_distributions_at(s: &Immersion, u: &[f64]) -> Result<DistributionSplit> {
    split_distributions(&PointGeometry::at(s, u)?, SPLIT_TOL)
}

pub fn split_report(split: &DistributionSplit, tol: f64) -> CheckReport {
    let mut rep = CheckReport::new("crwarp.split");
    rep.residual("j_invariance_of_d", split.j_invariance, tol)
        .residual("j_dperp_normal", split.jdperp_normality, tol)
        .value("p", split.p as f64)
        .value("q", split.q as f64);
    for note in &split.notes {
        rep.note(note.clone());
    }
    rep
}

/// `(∇̄_X J)Y = P_X Y + Q_X Y`, split into tangent and normal parts.
pub fn pq_tensors<T: Real>(geom: &PointGeometry<T>, x: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    geom.require_tangent(x)?;
    geom.require_tangent(y)?;
    let v = geom.nabla_j(x, y);
    Ok((geom.tangent_part(&v), geom.normal_part(&v)))
}

pub fn pq_tensors_at(s: &Immersion, u: &[f64], x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    pq_tensors(&PointGeometry::at(s, u)?, x, y)
}

/// `∇_X Y` for tangent `X`, `Y` with `Y` extended by constant chart
/// components, as an ambient vector.
pub fn connection<T: Real>(geom: &PointGeometry<T>, x: &[T], y: &[T]) -> Vec<T> {
    let cx = geom.chart_components(x);
    let cy = geom.chart_components(y);
    geom.push_forward(&geom.gamma.contract(&cx, &cy))
}

/// Warping data at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpData {
    /// `f(u)` when the immersion carries warping metadata.
    pub f: Option<f64>,
    /// `X(log f)` per `D` frame vector, from `g(∇_X Z, Z)/g(Z,Z)` averaged over
    /// the `D⊥` frame.
    pub x_log_f: Vec<f64>,
    /// `X(log f)` from the analytic gradient of `f`.
    pub x_log_f_analytic: Option<Vec<f64>>,
    /// `grad_D(log f)` as an ambient vector.
    pub grad_d: Vec<f64>,
    pub grad_d_norm: f64,
    /// `Σ_X ∇²(log f)(X,X)` over the `D` frame, when `f` is known.
    pub laplacian_d: Option<f64>,
    /// `Σ_{X,Z} ‖P_Z X‖²`.
    pub p_norm_sq: f64,
    /// `ω(X,Z)` projected to `ν` and to `JD⊥`, per `(X, Z)` pair.
    pub omega_nu: Vec<Vec<Vec<f64>>>,
    pub omega_jdperp: Vec<Vec<Vec<f64>>>,
}

fn project(geom: &PointGeometry<f64>, v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for q in basis {
        let c = geom.g(q, v);
        out.iter_mut().zip(q).for_each(|(o, b)| *o += c * b);
    }
    out
}

fn log_f_hessian(s: &Immersion, u: &[f64]) -> Option<Result<Mat<f64>>> {
    let n = u.len();
    let grad_log = |p: &[f64]| -> Result<Vec<f64>> {
        let (f, g) = s.warping(p).expect("warp metadata checked by caller")?;
        Ok(g.iter().map(|v| v / f).collect())
    };
    s.warp()?;
    Some((|| {
        let mut h = Mat::zeros(n, n);
        for k in 0..n {
            let step = f64::fd_step(u[k]);
            let mut plus = u.to_vec();
            let mut minus = u.to_vec();
            plus[k] += step;
            minus[k] -= step;
            let (gp, gm) = (grad_log(&plus)?, grad_log(&minus)?);
            for i in 0..n {
                h[(k, i)] = (gp[i] - gm[i]) / (2.0 * step);
            }
        }
        Ok(Mat::from_fn(n, n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)])))
    })())
}

pub fn warp_data(s: &Immersion, geom: &PointGeometry<f64>, split: &DistributionSplit) -> Result<WarpData> {
    let x_log_f: Vec<f64> = split
        .d_frame
        .iter()
        .map(|x| {
            let q = split.dperp_frame.len().max(1) as f64;
            split
                .dperp_frame
                .iter()
                .map(|z| geom.g(&connection(geom, x, z), z) / geom.g(z, z))
                .sum::<f64>()
                / q
        })
        .collect();
    let mut grad_d = vec![0.0; geom.ambient_dim()];
    for (x, &c) in split.d_frame.iter().zip(&x_log_f) {
        grad_d.iter_mut().zip(x).for_each(|(o, v)| *o += c * v);
    }
    let grad_d_norm = norm(geom, &grad_d);
    let (f, x_log_f_analytic, laplacian_d) = match s.warping(&geom.u) {
        None => (None, None, None),
        Some(w) => {
            let (f, g) = w?;
            let dlog: Vec<f64> = g.iter().map(|v| v / f).collect();
            let along = |x: &[f64]| -> f64 {
                let c = geom.chart_components(x);
                c.iter().zip(&dlog).map(|(a, b)| a * b).sum()
            };
            let analytic = split.d_frame.iter().map(|x| along(x)).collect();
            let h = log_f_hessian(s, &geom.u).expect("warp present")?;
            let lap = split
                .d_frame
                .iter()
                .map(|x| {
                    let c = geom.chart_components(x);
                    let gamma_xx = geom.gamma.contract(&c, &c);
                    h.bilinear(&c, &c) - gamma_xx.iter().zip(&dlog).map(|(a, b)| a * b).sum::<f64>()
                })
                .sum();
            (Some(f), Some(analytic), Some(lap))
        }
    };
    let mut p_norm_sq = 0.0;
    for z in &split.dperp_frame {
        for x in &split.d_frame {
            let (p, _) = pq_tensors(geom, z, x)?;
            p_norm_sq += geom.g(&p, &p);
        }
    }
    let pairs = |basis: &[Vec<f64>]| -> Vec<Vec<Vec<f64>>> {
        split
            .d_frame
            .iter()
            .map(|x| {
                split
                    .dperp_frame
                    .iter()
                    .map(|z| project(geom, &geom.omega(x, z), basis))
                    .collect()
            })
            .collect()
    };
    Ok(WarpData {
        f,
        x_log_f,
        x_log_f_analytic,
        grad_d,
        grad_d_norm,
        laplacian_d,
        p_norm_sq,
        omega_nu: pairs(&split.nu_frame),
        omega_jdperp: pairs(&split.jdperp_frame),
    })
}

fn require_q(split: &DistributionSplit) -> Result<()> {
    if split.q == 0 {
        return Err(Error::Precondition {
            what: "needs a nonzero totally real distribution D⊥ (q ≥ 1)".into(),
            measured: 0.0,
        });
    }
    Ok(())
}

/// Warping law residuals `‖∇_X Z − X(log f)Z‖` over the `D` and `D⊥`
/// frames, with the extracted `X(log f)` compared to the analytic one when
/// the immersion carries a warping function.
pub fn warping_check(s: &Immersion, geom: &PointGeometry<f64>, tol: f64) -> Result<CheckReport> {
    let split = split_distributions(geom, SPLIT_TOL)?;
    require_q(&split)?;
    let wd = warp_data(s, geom, &split)?;
    let mut rep = CheckReport::new("crwarp.w8");
    let mut worst: f64 = 0.0;
    for (i, x) in split.d_frame.iter().enumerate() {
        for z in &split.dperp_frame {
            let lam = geom.g(&connection(geom, x, z), z) / geom.g(z, z);
            let r = diff(&connection(geom, x, z), &z.iter().map(|v| lam * v).collect::<Vec<_>>());
            worst = worst.max(norm(geom, &r));
        }
        rep.value(format!("x_log_f.{i}"), wd.x_log_f[i]);
    }
    rep.residual("warping_law", worst, tol);
    if let Some(an) = &wd.x_log_f_analytic {
        let gap = an.iter().zip(&wd.x_log_f).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        rep.residual("analytic_gradient", gap, tol);
    }
    rep.value("grad_d_norm", wd.grad_d_norm);
    Ok(rep)
}

pub fn warping_check_at(s: &Immersion, u: &[f64], tol: f64) -> Result<CheckReport> {
    warping_check(s, &PointGeometry::at(s, u)?, tol)
}

fn in_span(geom: &PointGeometry<f64>, v: &[f64], basis: &[Vec<f64>], what: &str) -> Result<()> {
    let r = norm(geom, &sub_proj(geom, v, basis));
    if r > 1e-8 * norm(geom, v).max(1.0) {
        return Err(Error::Precondition {
            what: format!("vector must lie in {what}"),
            measured: r,
        });
    }
    Ok(())
}

fn require_unit(geom: &PointGeometry<f64>, v: &[f64], what: &str) -> Result<()> {
    let r = (geom.g(v, v) - 1.0).abs();
    if r > 1e-8 {
        return Err(Error::Precondition {
            what: format!("{what} must be a unit vector"),
            measured: r,
        });
    }
    Ok(())
}

/// Residuals of the three CR-warped identities for unit `X ∈ D`,
/// `Z, W ∈ D⊥`:
/// * `ω_{JD⊥}(JX,Z) = J P_Z JX + X(log f) JZ`,
/// * `g(P_Z JX, W) = g(Q_Z X, JW)`,
/// * `g(ω(JX,Z), Jω(X,Z)) − ‖ω_ν(X,Z)‖² = g(Q_Z X, Jω_ν(X,Z))`.
pub fn lemma2_check(
    geom: &PointGeometry<f64>,
    split: &DistributionSplit,
    x: &[f64],
    z: &[f64],
    w: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    require_q(split)?;
    for (v, what) in [(x, "X"), (z, "Z"), (w, "W")] {
        require_unit(geom, v, what)?;
    }
    in_span(geom, x, &split.d_frame, "D")?;
    in_span(geom, z, &split.dperp_frame, "D⊥")?;
    in_span(geom, w, &split.dperp_frame, "D⊥")?;
    let jx = geom.apply_j(x);
    let jz = geom.apply_j(z);
    let x_log_f = geom.g(&connection(geom, x, z), z);
    let omega_jx_z = geom.omega(&jx, z);
    let omega_x_z = geom.omega(x, z);

    let (p_z_jx, _) = pq_tensors(geom, z, &jx)?;
    let lhs1 = project(geom, &omega_jx_z, &split.jdperp_frame);
    let rhs1: Vec<f64> = geom
        .apply_j(&p_z_jx)
        .iter()
        .zip(&jz)
        .map(|(a, b)| a + x_log_f * b)
        .collect();
    let r1 = norm(geom, &diff(&lhs1, &rhs1));

    let (_, q_z_x) = pq_tensors(geom, z, x)?;
    let r2 = (geom.g(&p_z_jx, w) - geom.g(&q_z_x, &geom.apply_j(w))).abs();

    let omega_nu = project(geom, &omega_x_z, &split.nu_frame);
    let lhs3 = geom.g(&omega_jx_z, &geom.apply_j(&omega_x_z)) - geom.g(&omega_nu, &omega_nu);
    let rhs3 = geom.g(&q_z_x, &geom.apply_j(&omega_nu));
    let r3 = (lhs3 - rhs3).abs();

    let mut rep = CheckReport::new("crwarp.lemma2");
    rep.residual("jdperp_component", r1, tol)
        .residual("p_q_duality", r2, tol)
        .residual("nu_component", r3, tol)
        .value("x_log_f", x_log_f);
    Ok(rep)
}

/// Runs the identities on the first `D` and `D⊥` frame vectors, and on the
/// last `D⊥` vector for `W`.
pub fn lemma2_check_at(s: &Immersion, u: &[f64], tol: f64) -> Result<CheckReport> {
    let geom = PointGeometry::at(s, u)?;
    let split = split_distributions(&geom, SPLIT_TOL)?;
    require_q(&split)?;
    if split.p == 0 {
        return Err(Error::Precondition {
            what: "needs a nonzero holomorphic distribution D (p ≥ 1)".into(),
            measured: 0.0,
        });
    }
    let (x, z, w) = (
        &split.d_frame[0],
        &split.dperp_frame[0],
        split.dperp_frame.last().expect("q ≥ 1"),
    );
    lemma2_check(&geom, &split, x, z, w, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm3Margin {
    pub omega_norm_sq: f64,
    pub p_norm_sq: f64,
    pub q_grad_sq: f64,
    pub margin: f64,
    /// `max ‖P_Z X − proj_D P_Z X‖`, the hypothesis `P_{D⊥}D ⊂ D`.
    pub p_in_d_residual: f64,
}

/// `‖ω‖² − ‖P_{D⊥}D‖² − q‖grad_D log f‖²`.
pub fn thm3_margin(s: &Immersion, geom: &PointGeometry<f64>) -> Result<Thm3Margin> {
    let split = split_distributions(geom, SPLIT_TOL)?;
    require_q(&split)?;
    let wd = warp_data(s, geom, &split)?;
    let mut p_in_d: f64 = 0.0;
    for z in &split.dperp_frame {
        for x in &split.d_frame {
            let (p, _) = pq_tensors(geom, z, x)?;
            p_in_d = p_in_d.max(norm(geom, &sub_proj(geom, &p, &split.d_frame)));
        }
    }
    let omega_norm_sq = geom.extrinsic.omega_norm_sq;
    let q_grad_sq = split.q as f64 * wd.grad_d_norm * wd.grad_d_norm;
    Ok(Thm3Margin {
        omega_norm_sq,
        p_norm_sq: wd.p_norm_sq,
        q_grad_sq,
        margin: omega_norm_sq - wd.p_norm_sq - q_grad_sq,
        p_in_d_residual: p_in_d,
    })
}

pub fn thm3_margin_at(s: &Immersion, u: &[f64]) -> Result<Thm3Margin> {
    thm3_margin(s, &PointGeometry::at(s, u)?)
}

/// Scalar curvatures of the distributions and of the mixed planes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionScalars {
    pub rho_d: f64,
    /// Zero when `q ≤ 1`: no plane fits in `D⊥`.
    pub rho_dperp: f64,
    /// `Σ K(X∧Z)` over `X ∈ D`, `Z ∈ D⊥` frames.
    pub rho_mixed: f64,
    pub rho: f64,
}

pub fn distribution_scalars(geom: &PointGeometry<f64>, split: &DistributionSplit) -> DistributionScalars {
    let mut rho_mixed = 0.0;
    for x in &split.d_frame {
        for z in &split.dperp_frame {
            rho_mixed += geom.intrinsic_r(x, z, z, x);
        }
    }
    DistributionScalars {
        rho_d: geom.rho_over(&split.d_frame),
        rho_dperp: geom.rho_over(&split.dperp_frame),
        rho_mixed,
        rho: geom.rho(),
    }
}

pub fn distribution_scalars_at(s: &Immersion, u: &[f64]) -> Result<DistributionScalars> {
    let geom = PointGeometry::at(s, u)?;
    let split = split_distributions(&geom, SPLIT_TOL)?;
    Ok(distribution_scalars(&geom, &split))
}

pub const THM4_NOTE: &str =
    "static report only: compactness and the shape-operator hypothesis are not verified; the integral argument is out of scope";

/// Dimension conditions `n+1 ≤ pq` and `2(n+1) ≤ q²` with sampled sign
/// statistics of `ρ` and `‖grad_D log f‖`.
pub fn thm4_dichotomy_report(s: &Immersion, points: &[Vec<f64>]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("crwarp.thm4_report");
    rep.note(THM4_NOTE);
    let mut dims: Option<(usize, usize)> = None;
    let mut rhos = Vec::new();
    let mut grads = Vec::new();
    for u in points {
        let geom = PointGeometry::at(s, u)?;
        let split = split_distributions(&geom, SPLIT_TOL)?;
        match dims {
            None => dims = Some((split.p, split.q)),
            Some(d) if d != (split.p, split.q) => {
                rep.note(format!("(p, q) changes across the sample: {d:?} then {:?}", (split.p, split.q)));
                rep.flag("constant_pq", false);
                return Ok(rep);
            }
            _ => {}
        }
        rhos.push(geom.rho());
        if split.q > 0 {
            grads.push(warp_data(s, &geom, &split)?.grad_d_norm);
        }
    }
    let n = s.dim();
    let (p, q) = dims.unwrap_or((0, 0));
    rep.value("n", n as f64).value("p", p as f64).value("q", q as f64);
    rep.flag("constant_pq", true);
    if p == 0 || q == 0 {
        rep.flag("applicable", false);
        rep.note(format!("inapplicable: p = {p}, q = {q}"));
        return Ok(rep);
    }
    rep.flag("applicable", true);
    rep.flag("n_plus_1_le_pq", n < p * q);
    rep.flag("two_n_plus_2_le_q_sq", 2 * (n + 1) <= q * q);
    let count = rhos.len().max(1) as f64;
    rep.value("rho_min", rhos.iter().copied().fold(f64::INFINITY, f64::min));
    rep.value("rho_max", rhos.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    rep.value("rho_nonpositive_fraction", rhos.iter().filter(|&&r| r <= 0.0).count() as f64 / count);
    rep.value("grad_d_log_f_max", grads.iter().copied().fold(0.0, f64::max));
    Ok(rep)
}
