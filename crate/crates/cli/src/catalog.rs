//! The check catalog: names, what each evaluates, default tolerances.

use serde::{Deserialize, Serialize};

/// Where a check is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// At every sample point, on the ambient space (image point if a chart is given).
    Ambient,
    /// Once, at the first ambient sample point.
    AmbientOnce,
    /// At every chart point of the immersion.
    Point,
    /// Once, over the whole chart sample.
    Sample,
    /// Needs no geometry; uses the seed only.
    Standalone,
}

impl Scope {
    pub fn label(self) -> &'static str {
        match self {
            Scope::Ambient => "ambient",
            Scope::AmbientOnce => "ambient-once",
            Scope::Point => "point",
            Scope::Sample => "sample",
            Scope::Standalone => "standalone",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckInfo {
    pub name: &'static str,
    pub scope: Scope,
    pub default_tol: f64,
    pub summary: &'static str,
}

const fn check(name: &'static str, scope: Scope, default_tol: f64, summary: &'static str) -> CheckInfo {
    CheckInfo {
        name,
        scope,
        default_tol,
        summary,
    }
}

/// Sorted by name.
pub const CATALOG: &[CheckInfo] = &[
    check(
        "ambient.kaehler",
        Scope::Ambient,
        1e-6,
        "J² = −I and J-compatibility (to 1e−12), ∇J = 0, Riemann symmetries, first Bianchi, J-invariance of R",
    ),
    check(
        "bochner.calibration",
        Scope::AmbientOnce,
        1e-5,
        "reconstruction residual for every dimension parameter d = 1..2m in the L denominators; gates d = m",
    ),
    check(
        "bochner.residual",
        Scope::Ambient,
        1e-5,
        "‖R − R̃‖∞ with R̃ rebuilt from the L and M tensors of the Ricci form",
    ),
    check(
        "bochner.symmetries",
        Scope::Ambient,
        1e-9,
        "L symmetric, L J-invariant, L(JY,Z) skew, M antisymmetric",
    ),
    check(
        "bochner.w33",
        Scope::Ambient,
        1e-5,
        "R(X,JX,Z,JZ) against −2M(X,JX)g(Z,Z) − 2M(Z,JZ)g(X,X) for a random unit pair with Z ⊥ X, JX",
    ),
    check(
        "chen.cor1",
        Scope::Point,
        1e-8,
        "inequality margin with the Ricci term replaced by λ‖T‖² on an Einstein ambient",
    ),
    check(
        "chen.cor2",
        Scope::Point,
        1e-8,
        "slant submanifold of an Einstein ambient: margin with ‖T‖² = n cos²θ and λ",
    ),
    check("chen.cor3", Scope::Point, 1e-8, "invariant submanifold: margin of the reduced inequality"),
    check("chen.cor4", Scope::Point, 1e-8, "anti-invariant submanifold: margin of the reduced inequality"),
    check(
        "chen.equality_form",
        Scope::Point,
        1e-6,
        "searches for a frame putting the shape operators in the equality pattern (α, β, α+β)",
    ),
    check(
        "chen.lemma1",
        Scope::Standalone,
        1e-12,
        "quadratic lemma on generated instances: slack 2x₁x₂ − b ≥ 0, equality exactly when x₁+x₂ = x₃ = … = xₙ",
    ),
    check(
        "chen.proof_audit",
        Scope::Point,
        1e-10,
        "re-evaluates the intermediate identities of the inequality's derivation, reporting both index conventions",
    ),
    check(
        "chen.thm1",
        Scope::Point,
        1e-8,
        "margin K(π) − c(n,‖T‖²)ρ + h(n)‖H‖² + r(n)·Σ Ric(eᵢ,Jeⱼ)g(eᵢ,Jeⱼ) ≥ 0 on the configured plane",
    ),
    check(
        "chen.thm2",
        Scope::Point,
        1e-8,
        "slant form of the inequality, as printed and with ‖T‖² = n cos²θ substituted; discrepancy reported",
    ),
    check(
        "crwarp.lemma2",
        Scope::Point,
        1e-6,
        "CR-warped identities relating ∇J, the P and Q tensors and X(log f)",
    ),
    check(
        "crwarp.split",
        Scope::Point,
        1e-8,
        "splits the tangent space into D and D⊥ from the spectrum of TᵀT; J-invariance and normality residuals",
    ),
    check(
        "crwarp.thm3",
        Scope::Point,
        1e-8,
        "margin ‖ω‖² − ‖P_{D⊥}D‖² − q‖grad_D log f‖² ≥ 0 on a CR-warped product",
    ),
    check(
        "crwarp.thm4_report",
        Scope::Sample,
        0.0,
        "dimension inequalities and sampled sign statistics of ρ and ‖∇_D log f‖; hypotheses not verified",
    ),
    check(
        "crwarp.w8",
        Scope::Point,
        1e-6,
        "warping law ∇_X Z = X(log f) Z, compared with the gradient of log f",
    ),
    check(
        "submanifold.classify",
        Scope::Sample,
        1e-6,
        "classifies as invariant, anti-invariant, slant, CR or generic from T and F on random tangents",
    ),
    check(
        "submanifold.codazzi",
        Scope::Point,
        1e-3,
        "normal part of R̄(X,Y)Z against (∇̃_X ω)(Y,Z) − (∇̃_Y ω)(X,Z) on random tangent triples",
    ),
    check(
        "submanifold.gauss",
        Scope::Point,
        1e-4,
        "R − R̄ against the ω terms on random tangent 4-tuples",
    ),
    check(
        "submanifold.invariants",
        Scope::Point,
        1e-8,
        "‖H‖, ‖ω‖², ‖T‖², ρ and plane curvature; ω symmetry and T antisymmetry residuals",
    ),
];

pub fn lookup(name: &str) -> Option<&'static CheckInfo> {
    CATALOG.iter().find(|c| c.name == name)
}
