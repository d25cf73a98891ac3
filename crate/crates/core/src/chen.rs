//! Chen-type inequalities for submanifolds of Bochner–Kaehler ambients.
//!
//! Everything here reports margins (`LHS − RHS`) and never clamps them: a
//! negative margin is a measurement, not an error.
//!
//! Conventions: `ρ` on the right-hand sides is the intrinsic
//! `Σ_{i<j} K(eᵢ∧eⱼ)`, and the Ricci correction term is the double sum
//! `Σᵢⱼ Ric(eᵢ,Jeⱼ) g(eᵢ,Jeⱼ)` over the tangent frame, with ambient Ricci by
//! default and intrinsic Ricci (applied to the tangential part `Teⱼ`) on
//! request. Both values are always computed.

use serde::{Deserialize, Serialize};

use crate::ambient::CurvatureData;
use crate::bochner::lm_from_curvature;
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::scalar::Real;
use crate::submanifold::{AdaptedFrame, Class, Immersion, Plane, PointGeometry};
use crate::tensorlab::{symmetric_eigen, Mat};

/// Note attached to every `n = 2` result.
pub const DEGENERATE_NOTE: &str = "degenerate: π = T_xW, coefficient (n−2) vanishes";

/// Whose Ricci tensor enters the correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RicciSource {
    #[default]
    Ambient,
    Intrinsic,
}

impl std::str::FromStr for RicciSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ambient" => Ok(RicciSource::Ambient),
            "intrinsic" => Ok(RicciSource::Intrinsic),
            _ => Err(Error::Unsupported(format!("unknown Ricci source `{s}`"))),
        }
    }
}

fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

/// `(5n²+31n+26+3t)/(2(2n+2)(2n+4))` with `t = ‖T‖²`.
pub fn coefficient<T: Real>(n: usize, t_norm_sq: T) -> T {
    let nf: T = lit(n as f64);
    let num = lit::<T>(5.0) * nf * nf + lit::<T>(31.0) * nf + lit(26.0) + lit::<T>(3.0) * t_norm_sq;
    num / denominator(n)
}

/// `2(2n+2)(2n+4)`.
fn denominator<T: Real>(n: usize) -> T {
    let nf: T = lit(n as f64);
    lit::<T>(2.0) * (lit::<T>(2.0) * nf + lit(2.0)) * (lit::<T>(2.0) * nf + lit(4.0))
}

/// `2 − (6n²+2n−8−6t)/(2(2n+2)(2n+4))`, the factor of `ρ` in `ε`.
pub fn epsilon_coefficient<T: Real>(n: usize, t_norm_sq: T) -> T {
    let nf: T = lit(n as f64);
    let num = lit::<T>(6.0) * nf * nf + lit::<T>(2.0) * nf - lit(8.0) - lit::<T>(6.0) * t_norm_sq;
    lit::<T>(2.0) - num / denominator(n)
}

/// `(4n+3)/((2n+2)(2n+4))`.
pub fn plane_coefficient<T: Real>(n: usize) -> T {
    let nf: T = lit(n as f64);
    (lit::<T>(4.0) * nf + lit(3.0)) / ((lit::<T>(2.0) * nf + lit(2.0)) * (lit::<T>(2.0) * nf + lit(4.0)))
}

/// `|coefficient − (plane_coefficient + epsilon_coefficient/2)|`.
pub fn coefficient_identity_residual<T: Real>(n: usize, t_norm_sq: T) -> T {
    (coefficient(n, t_norm_sq) - plane_coefficient::<T>(n) - epsilon_coefficient(n, t_norm_sq) / lit(2.0)).abs()
}

/// `n²(n−2)/(2(n−1))`, the factor of `‖H‖²`.
pub fn h_coefficient<T: Real>(n: usize) -> T {
    let nf: T = lit(n as f64);
    nf * nf * (nf - lit(2.0)) / (lit::<T>(2.0) * (nf - lit(1.0)))
}

/// `6/(2(2n+4))`, the factor of the Ricci correction.
pub fn ric_coefficient<T: Real>(n: usize) -> T {
    lit::<T>(6.0) / (lit::<T>(2.0) * (lit::<T>(2.0) * lit::<T>(n as f64) + lit(4.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaOutcome {
    pub holds: bool,
    /// `2x₁x₂ − b`.
    pub slack: f64,
    /// `x₁+x₂ = x₃ = … = xₙ` within `1e−9`.
    pub equality: bool,
}

/// The quadratic lemma: if `(Σxᵢ)² = (n−1)(Σxᵢ² + b)` then `2x₁x₂ ≥ b`.
pub fn chen_lemma(x: &[f64], b: f64) -> Result<LemmaOutcome> {
    let n = x.len();
    if n < 2 {
        return Err(Error::Unsupported(format!("lemma needs n ≥ 2 numbers, got {n}")));
    }
    let sum: f64 = x.iter().sum();
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let lhs = sum * sum;
    let rhs = (n as f64 - 1.0) * (sq + b);
    if (lhs - rhs).abs() > 1e-9 * lhs.abs().max(rhs.abs()).max(1.0) {
        return Err(Error::LemmaHypothesis { lhs, rhs });
    }
    let slack = 2.0 * x[0] * x[1] - b;
    let s12 = x[0] + x[1];
    Ok(LemmaOutcome {
        holds: slack >= -1e-12,
        slack,
        equality: x[2..].iter().all(|&v| (s12 - v).abs() <= 1e-9),
    })
}

/// Every ingredient of the main inequality at one point and plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChenTerms<T> {
    pub n: usize,
    pub k_pi: T,
    pub rho: T,
    pub h_norm_sq: T,
    pub omega_norm_sq: T,
    pub t_norm_sq: T,
    pub ric_term_ambient: T,
    pub ric_term_intrinsic: T,
    pub ric_source: RicciSource,
    pub coefficient: T,
    pub epsilon: T,
    pub margin: T,
    pub degenerate: bool,
}

impl<T: Real> ChenTerms<T> {
    /// The Ricci correction selected by `ric_source`.
    pub fn ric_term(&self) -> T {
        match self.ric_source {
            RicciSource::Ambient => self.ric_term_ambient,
            RicciSource::Intrinsic => self.ric_term_intrinsic,
        }
    }

    /// Margin recomputed from the stored components.
    pub fn assembled_margin(&self) -> T {
        self.k_pi - self.coefficient * self.rho
            + h_coefficient::<T>(self.n) * self.h_norm_sq
            + ric_coefficient::<T>(self.n) * self.ric_term()
    }
}

/// `(Σᵢⱼ R̄ic(eᵢ,Jeⱼ)g(eᵢ,Jeⱼ), Σᵢⱼ Ric(eᵢ,Teⱼ)g(eᵢ,Jeⱼ))`.
pub fn ric_terms<T: Real>(geom: &PointGeometry<T>, frame: &AdaptedFrame<T>) -> (T, T) {
    let n = frame.tangent.len();
    let je: Vec<Vec<T>> = frame.tangent.iter().map(|e| geom.apply_j(e)).collect();
    let t = Mat::from_fn(n, n, |a, b| geom.g(&je[a], &frame.tangent[b]));
    let te: Vec<Vec<T>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|c| (0..n).map(|b| t[(j, b)] * frame.coeffs[(b, c)]).sum())
                .collect()
        })
        .collect();
    let (mut amb, mut int) = (T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            let gij = t[(j, i)];
            amb += geom.ambient_curvature.ricci_form(&frame.tangent[i], &je[j]) * gij;
            int += geom.curvature.ricci_form(frame.coeffs.row(i), &te[j]) * gij;
        }
    }
    (amb, int)
}

/// `Σᵢⱼ R̄ic(eᵢ,Jeⱼ)` without the metric factor.
fn ambient_ric_sum<T: Real>(geom: &PointGeometry<T>, frame: &AdaptedFrame<T>) -> T {
    let mut s = T::zero();
    for ei in &frame.tangent {
        for ej in &frame.tangent {
            s += geom.ambient_curvature.ricci_form(ei, &geom.apply_j(ej));
        }
    }
    s
}

fn require_chen_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition {
            what: "Chen inequalities need n ≥ 2".into(),
            measured: n as f64,
        });
    }
    Ok(())
}

/// Terms in an explicit orthonormal adapted `frame`, plane spanned by the
/// tangent vectors `x`, `y`.
pub fn chen_terms_in<T: Real>(
    geom: &PointGeometry<T>,
    frame: &AdaptedFrame<T>,
    x: &[T],
    y: &[T],
    source: RicciSource,
) -> Result<ChenTerms<T>> {
    let n = frame.tangent.len();
    require_chen_dim(n)?;
    let res = frame.orthonormality_residual(&geom.ambient_metric);
    if res > lit(1e-8) {
        return Err(Error::Precondition {
            what: "frame must be orthonormal".into(),
            measured: res.as_f64(),
        });
    }
    geom.require_tangent(x)?;
    geom.require_tangent(y)?;
    let k_pi = geom.sectional(x, y)?;
    let ext = geom.extrinsic_for(frame);
    let rho = geom.rho_over(&frame.tangent);
    let (ric_term_ambient, ric_term_intrinsic) = ric_terms(geom, frame);
    let ric = match source {
        RicciSource::Ambient => ric_term_ambient,
        RicciSource::Intrinsic => ric_term_intrinsic,
    };
    let coefficient = coefficient(n, ext.t_norm_sq);
    let nf: T = lit(n as f64);
    let epsilon = epsilon_coefficient(n, ext.t_norm_sq) * rho
        - nf * nf * (nf - lit(2.0)) / (nf - lit(1.0)) * ext.h_norm_sq
        - lit::<T>(6.0) / (lit::<T>(2.0) * nf + lit(4.0)) * ric;
    let mut terms = ChenTerms {
        n,
        k_pi,
        rho,
        h_norm_sq: ext.h_norm_sq,
        omega_norm_sq: ext.omega_norm_sq,
        t_norm_sq: ext.t_norm_sq,
        ric_term_ambient,
        ric_term_intrinsic,
        ric_source: source,
        coefficient,
        epsilon,
        margin: T::zero(),
        degenerate: n == 2,
    };
    terms.margin = terms.assembled_margin();
    Ok(terms)
}

pub fn chen_terms<T: Real>(geom: &PointGeometry<T>, plane: &Plane<T>, source: RicciSource) -> Result<ChenTerms<T>> {
    let (x, y) = plane.vectors(geom)?;
    chen_terms_in(geom, &geom.frame, &x, &y, source)
}

pub fn chen_terms_at<T: Real>(s: &Immersion, u: &[T], plane: &Plane<T>, source: RicciSource) -> Result<ChenTerms<T>> {
    chen_terms(&PointGeometry::at(s, u)?, plane, source)
}

pub fn thm1_margin_at<T: Real>(
    s: &Immersion,
    u: &[T],
    plane: &Plane<T>,
    source: RicciSource,
) -> Result<(T, ChenTerms<T>)> {
    let terms = chen_terms_at(s, u, plane, source)?;
    Ok((terms.margin, terms))
}

/// Sum conventions compared by the proof audit for the Bochner step.
pub const P5_CONVENTIONS: [&str; 2] = ["double_sum", "diagonal_sum"];
/// Forms compared for the plane-curvature step.
pub const P17_CONVENTIONS: [&str; 2] = ["intrinsic_rho", "ambient_l"];

/// Numerical audit of the derivation of the main inequality, with the
/// adapted frame at `u` and the plane `(e₁, e₂)`.
///
/// * Scalar-curvature step: `2ρ` against
///   `2(n−1)ΣL(eᵢ,eᵢ) + 6ΣL(eᵢ,Jeⱼ)g(eᵢ,Jeⱼ) + n²‖H‖² − ‖ω‖²` with the
///   double-index term summed over all `i, j` or only over `i = j`.
/// * Mean-curvature identity `n²‖H‖² = (n−1)(ε + ‖ω‖²)` with `ε` from its
///   defining relation; this one is algebraic and gated at `tol_identity`.
/// * Plane step: `K(π)` against `(4n+3)/((2n+2)(2n+4))ρ + g(ω₁₁,ω₂₂) − ‖ω₁₂‖²`
///   and against the unsubstituted `L(e₁,e₁) + L(e₂,e₂) + …`.
pub fn proof_audit(geom: &PointGeometry<f64>, tol_identity: f64) -> Result<CheckReport> {
    let n = geom.n();
    require_chen_dim(n)?;
    let nf = n as f64;
    let frame = &geom.frame;
    let ext = &geom.extrinsic;
    let e = &frame.tangent;
    let bt = lm_from_curvature(&geom.ambient, &geom.jet.x, &geom.ambient_curvature, geom.ambient.m());
    let rho = geom.rho();
    let mut rep = CheckReport::new("chen.proof_audit");

    let l_trace: f64 = e.iter().map(|ei| bt.l_form(ei, ei)).sum();
    let mut l_double = 0.0;
    let mut l_diag = 0.0;
    for (i, ei) in e.iter().enumerate() {
        for (j, ej) in e.iter().enumerate() {
            let jej = geom.apply_j(ej);
            let v = bt.l_form(ei, &jej) * geom.g(ei, &jej);
            l_double += v;
            if i == j {
                l_diag += v;
            }
        }
    }
    let base = 2.0 * (nf - 1.0) * l_trace + nf * nf * ext.h_norm_sq - ext.omega_norm_sq;
    let p5 = [(2.0 * rho - base - 6.0 * l_double).abs(), (2.0 * rho - base - 6.0 * l_diag).abs()];
    for (name, r) in P5_CONVENTIONS.iter().zip(p5) {
        rep.value(format!("p5.{name}"), r);
    }
    rep.value("p5.best", argmin(&p5) as f64);

    let h_c = nf * nf * (nf - 2.0) / (nf - 1.0);
    let eps_def = nf * nf * ext.h_norm_sq - ext.omega_norm_sq - h_c * ext.h_norm_sq;
    let p13 = nf * nf * ext.h_norm_sq - (nf - 1.0) * (eps_def + ext.omega_norm_sq);
    rep.residual("p13", p13, tol_identity);
    let (amb, _) = ric_terms(geom, frame);
    let eps_chain = epsilon_coefficient(n, ext.t_norm_sq) * rho - h_c * ext.h_norm_sq - 6.0 / (2.0 * nf + 4.0) * amb;
    rep.value("epsilon.chain", eps_chain);
    rep.value("epsilon.definition", eps_def);
    rep.value("epsilon.gap", eps_chain - eps_def);

    let k = geom.sectional(&e[0], &e[1])?;
    let w11 = &ext.omega_vectors[0][0];
    let w22 = &ext.omega_vectors[1][1];
    let w12 = &ext.omega_vectors[0][1];
    let extr = geom.g(w11, w22) - geom.g(w12, w12);
    let p17 = [
        (k - plane_coefficient::<f64>(n) * rho - extr).abs(),
        (k - bt.l_form(&e[0], &e[0]) - bt.l_form(&e[1], &e[1]) - extr).abs(),
    ];
    for (name, r) in P17_CONVENTIONS.iter().zip(p17) {
        rep.value(format!("p17.{name}"), r);
    }
    rep.value("p17.best", argmin(&p17) as f64);
    if n == 2 {
        rep.note(DEGENERATE_NOTE);
    }
    Ok(rep)
}

pub fn proof_audit_at(s: &Immersion, u: &[f64], tol_identity: f64) -> Result<CheckReport> {
    proof_audit(&PointGeometry::at(s, u)?, tol_identity)
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &x)| if x < bv { (i, x) } else { (bi, bv) })
        .0
}

/// Best fit of the equality-case shape-operator pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityForm {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    /// Indices of the eigenvectors of `B_{n+1}` used as `e₁`, `e₂`.
    pub pair: (usize, usize),
    /// `|α + β − ξ|`.
    pub sum_residual: f64,
    /// Off-pattern residual of `B_{n+1}`, then of each remaining `B_r`.
    pub residuals: Vec<f64>,
    pub pass: bool,
}

impl EqualityForm {
    pub fn worst(&self) -> f64 {
        self.residuals.iter().fold(self.sum_residual, |m, &r| m.max(r))
    }
}

fn orthonormal_normals(geom: &PointGeometry<f64>, first: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![first.to_vec()];
    for v in &geom.frame.normal {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = geom.g(q, &w);
                w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let norm = geom.ambient_metric.norm(&w);
        if norm > 1e-8 && out.len() < geom.frame.normal.len() {
            out.push(w.iter().map(|a| a / norm).collect());
        }
    }
    out
}

fn fit_pattern(shapes: &[Mat<f64>], tol: f64) -> EqualityForm {
    let n = shapes[0].rows();
    let (vals, vecs) = symmetric_eigen(&shapes[0]);
    let mut best: Option<EqualityForm> = None;
    for a in 0..n {
        for b in (a + 1)..n {
            let order: Vec<usize> = [a, b].into_iter().chain((0..n).filter(|&k| k != a && k != b)).collect();
            let q = Mat::from_fn(n, n, |r, c| vecs[order[r]][c]);
            let rot: Vec<Mat<f64>> = shapes.iter().map(|s| q.matmul(s).matmul(&q.transpose())).collect();
            let b0 = &rot[0];
            let (alpha, beta) = (vals[a], vals[b]);
            let xi = if n > 2 {
                (2..n).map(|k| b0[(k, k)]).sum::<f64>() / (n - 2) as f64
            } else {
                alpha + beta
            };
            let mut first = 0.0f64;
            for r in 0..n {
                for c in 0..n {
                    let target = match (r == c, r) {
                        (true, 0) => alpha,
                        (true, 1) => beta,
                        (true, _) => xi,
                        _ => 0.0,
                    };
                    first = first.max((b0[(r, c)] - target).abs());
                }
            }
            let mut residuals = vec![first];
            for br in &rot[1..] {
                let mut worst = (br[(0, 0)] + br[(1, 1)]).abs();
                for r in 0..n {
                    for c in 0..n {
                        if r >= 2 || c >= 2 {
                            worst = worst.max(br[(r, c)].abs());
                        }
                    }
                }
                residuals.push(worst);
            }
            let cand = EqualityForm {
                alpha,
                beta,
                xi,
                pair: (a, b),
                sum_residual: (alpha + beta - xi).abs(),
                residuals,
                pass: false,
            };
            if best.as_ref().is_none_or(|bf| cand.worst() < bf.worst()) {
                best = Some(cand);
            }
        }
    }
    let mut best = best.expect("n ≥ 2 gives at least one pair");
    best.pass = best.worst() <= tol;
    best
}

/// Searches for a frame in which the shape operators take the equality-case
/// form: `B_{n+1} = diag(α, β, ξ, …, ξ)` with `α + β = ξ`, and every other
/// `B_r` traceless and supported on the `(e₁, e₂)` block.
///
/// `e_{n+1}` is `H/‖H‖` when `H ≠ 0`; otherwise each normal frame vector is
/// tried. Tangent frames are the pairs of eigenvectors of `B_{n+1}`.
pub fn equality_form(geom: &PointGeometry<f64>, tol: f64) -> Result<EqualityForm> {
    let n = geom.n();
    require_chen_dim(n)?;
    let ext = &geom.extrinsic;
    let scale = ext.omega_norm_sq.sqrt().max(1.0);
    let candidates: Vec<Vec<f64>> = if ext.h_norm > 1e-10 * scale {
        vec![ext.mean_curvature.iter().map(|v| v / ext.h_norm).collect()]
    } else {
        geom.frame.normal.clone()
    };
    let mut best: Option<EqualityForm> = None;
    for nu in candidates {
        let normals = orthonormal_normals(geom, &nu);
        let shapes: Vec<Mat<f64>> = normals
            .iter()
            .map(|v| Mat::from_fn(n, n, |a, b| geom.g(&ext.omega_vectors[a][b], v)))
            .collect();
        let fit = fit_pattern(&shapes, tol);
        if best.as_ref().is_none_or(|b| fit.worst() < b.worst()) {
            best = Some(fit);
        }
    }
    Ok(best.expect("the normal space is nonempty"))
}

pub fn equality_form_detect(s: &Immersion, u: &[f64], tol: f64) -> Result<EqualityForm> {
    equality_form(&PointGeometry::at(s, u)?, tol)
}

/// Slant-specialized margin as printed, next to the main margin with
/// `‖T‖² = n cos²θ` substituted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlantMargin {
    pub theta: f64,
    /// Coefficient `3cos²θ` and correction `cosθ·Σᵢⱼ R̄ic(eᵢ,Jeⱼ)`.
    pub printed: f64,
    /// Main margin with `‖T‖²` replaced by `n cos²θ`.
    pub substituted: f64,
    pub discrepancy: f64,
    pub terms: ChenTerms<f64>,
}

pub fn thm2_margin(geom: &PointGeometry<f64>, plane: &Plane<f64>, class: &Class) -> Result<SlantMargin> {
    let theta = class.slant_angle().ok_or_else(|| Error::NotSlant { class: class.to_string() })?;
    let terms = chen_terms(geom, plane, RicciSource::Ambient)?;
    let n = terms.n;
    let c2 = theta.cos().powi(2);
    let tail = h_coefficient::<f64>(n) * terms.h_norm_sq;
    let printed = terms.k_pi - coefficient(n, c2) * terms.rho
        + tail
        + ric_coefficient::<f64>(n) * theta.cos() * ambient_ric_sum(geom, &geom.frame);
    let substituted =
        terms.k_pi - coefficient(n, n as f64 * c2) * terms.rho + tail + ric_coefficient::<f64>(n) * terms.ric_term_ambient;
    Ok(SlantMargin {
        theta,
        printed,
        substituted,
        discrepancy: printed - substituted,
        terms,
    })
}

pub fn thm2_margin_at(s: &Immersion, u: &[f64], plane: &Plane<f64>, class: &Class) -> Result<SlantMargin> {
    thm2_margin(&PointGeometry::at(s, u)?, plane, class)
}

/// The four specializations of the main inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corollary {
    Einstein,
    SlantEinstein,
    Invariant,
    AntiInvariant,
}

impl Corollary {
    pub const ALL: [Corollary; 4] = [
        Corollary::Einstein,
        Corollary::SlantEinstein,
        Corollary::Invariant,
        Corollary::AntiInvariant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Corollary::Einstein => "einstein",
            Corollary::SlantEinstein => "slant_einstein",
            Corollary::Invariant => "invariant",
            Corollary::AntiInvariant => "anti_invariant",
        }
    }
}

/// `λ = tr(g⁻¹Ric)/dim` and `‖Ric − λg‖∞`.
pub fn einstein_fit<T: Real>(curv: &CurvatureData<T>) -> (T, T) {
    let dim = curv.dim();
    let ginv = curv.metric.inverse();
    let lambda = ginv.matmul(&curv.ricci).trace() / lit(dim as f64);
    let resid = curv.ricci.sub(&curv.metric.matrix().scale(lambda)).max_abs();
    (lambda, resid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryMargin {
    pub which: Corollary,
    pub margin: f64,
    pub lambda: Option<f64>,
    pub einstein_residual: Option<f64>,
    pub terms: ChenTerms<f64>,
}

/// Margin of one corollary's right-hand side. Einstein variants fit `λ` on
/// `einstein_of` (ambient by default) and require the fit residual to be at
/// most `einstein_tol`; the others require a matching classification.
pub fn corollary_margin(
    geom: &PointGeometry<f64>,
    plane: &Plane<f64>,
    which: Corollary,
    class: &Class,
    einstein_of: RicciSource,
    einstein_tol: f64,
) -> Result<CorollaryMargin> {
    let terms = chen_terms(geom, plane, RicciSource::Ambient)?;
    let n = terms.n;
    let einstein = || {
        let curv = match einstein_of {
            RicciSource::Ambient => &geom.ambient_curvature,
            RicciSource::Intrinsic => &geom.curvature,
        };
        let (lambda, resid) = einstein_fit(curv);
        if resid > einstein_tol {
            return Err(Error::Precondition {
                what: "Einstein condition Ric = λg".into(),
                measured: resid,
            });
        }
        Ok((lambda, resid))
    };
    let slant = || class.slant_angle().ok_or_else(|| Error::NotSlant { class: class.to_string() });
    let needs = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition {
                what: format!("submanifold must be {what}, classified as {class}"),
                measured: 0.0,
            })
        }
    };
    let h = h_coefficient::<f64>(n) * terms.h_norm_sq;
    let rc = ric_coefficient::<f64>(n);
    let (t, last, lambda, resid) = match which {
        Corollary::Einstein => {
            let (l, r) = einstein()?;
            (terms.t_norm_sq, rc * l * terms.t_norm_sq, Some(l), Some(r))
        }
        Corollary::SlantEinstein => {
            let c2 = slant()?.cos().powi(2);
            let (l, r) = einstein()?;
            (c2, rc * l * c2, Some(l), Some(r))
        }
        Corollary::Invariant => {
            needs(matches!(class, Class::Invariant), "invariant")?;
            (1.0, rc * ambient_ric_sum(geom, &geom.frame), None, None)
        }
        Corollary::AntiInvariant => {
            needs(matches!(class, Class::AntiInvariant), "anti-invariant")?;
            (0.0, 0.0, None, None)
        }
    };
    let margin = terms.k_pi - coefficient(n, t) * terms.rho + h + last;
    Ok(CorollaryMargin {
        which,
        margin,
        lambda,
        einstein_residual: resid,
        terms,
    })
}

pub fn corollary_margin_at(
    s: &Immersion,
    u: &[f64],
    plane: &Plane<f64>,
    which: Corollary,
    class: &Class,
) -> Result<CorollaryMargin> {
    corollary_margin(&PointGeometry::at(s, u)?, plane, which, class, RicciSource::Ambient, 1e-6)
}
