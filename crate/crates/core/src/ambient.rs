//! Kaehler model spaces: flat `Cᵐ`, the Fubini–Study metric on `CPᵐ` in an
//! affine chart, and the Bergman-type metric on the unit ball model of
//! `CHᵐ`. All three have constant holomorphic sectional curvature `4c`.
//!
//! Chart coordinates are real: `zⱼ = x₂ⱼ + i·x₂ⱼ₊₁`. The complex structure is
//! the constant matrix with `J ∂x₂ⱼ = ∂x₂ⱼ₊₁`.
//!
//! Curvature convention: `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]` and
//! `R(X,Y,Z,W) = g(R(X,Y)Z, W)`, so `K(X,Y) = R(X,Y,Y,X)/|X∧Y|²` and the unit
//! round sphere has `K = +1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::scalar::{Dual, Real};
use crate::tensorlab::{Christoffel, Mat, MetricMatrix, RiemannSymmetry, Tensor4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientKind {
    Flat,
    FubiniStudy,
    ComplexHyperbolic,
}

impl AmbientKind {
    pub const ALL: [AmbientKind; 3] = [
        AmbientKind::Flat,
        AmbientKind::FubiniStudy,
        AmbientKind::ComplexHyperbolic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AmbientKind::Flat => "flat",
            AmbientKind::FubiniStudy => "fubini_study",
            AmbientKind::ComplexHyperbolic => "complex_hyperbolic",
        }
    }

    /// Sign `c` of the holomorphic sectional curvature `4c`.
    pub fn curvature_sign(self) -> i8 {
        match self {
            AmbientKind::Flat => 0,
            AmbientKind::FubiniStudy => 1,
            AmbientKind::ComplexHyperbolic => -1,
        }
    }
}

impl fmt::Display for AmbientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AmbientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AmbientKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown ambient kind `{s}`")))
    }
}

/// A complex space form of complex dimension `m ≥ 2` in a single chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientSpace {
    kind: AmbientKind,
    m: usize,
}

impl AmbientSpace {
    pub fn new(kind: AmbientKind, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidDimension(m));
        }
        Ok(AmbientSpace { kind, m })
    }

    pub fn flat(m: usize) -> Result<Self> {
        Self::new(AmbientKind::Flat, m)
    }

    pub fn fubini_study(m: usize) -> Result<Self> {
        Self::new(AmbientKind::FubiniStudy, m)
    }

    pub fn complex_hyperbolic(m: usize) -> Result<Self> {
        Self::new(AmbientKind::ComplexHyperbolic, m)
    }

    pub fn kind(&self) -> AmbientKind {
        self.kind
    }

    /// Complex dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Real dimension `2m`.
    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn curvature_sign(&self) -> i8 {
        self.kind.curvature_sign()
    }

    /// Short label such as `FS2` or `CH3`.
    pub fn label(&self) -> String {
        let prefix = match self.kind {
            AmbientKind::Flat => "FLAT",
            AmbientKind::FubiniStudy => "FS",
            AmbientKind::ComplexHyperbolic => "CH",
        };
        format!("{prefix}{}", self.m)
    }

    /// Radius of the ball used for random sampling (strictly inside the chart).
    pub fn sampling_radius(&self) -> f64 {
        match self.kind {
            AmbientKind::Flat | AmbientKind::FubiniStudy => 2.0,
            AmbientKind::ComplexHyperbolic => 0.8,
        }
    }

    pub fn check_point<T: Real>(&self, p: &[T]) -> Result<()> {
        let outside = |reason: String| Error::OutsideChart {
            point: p.iter().map(|x| x.as_f64()).collect(),
            reason,
        };
        if p.len() != self.dim() {
            return Err(outside(format!("expected {} coordinates", self.dim())));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(outside("non-finite coordinate".into()));
        }
        if self.kind == AmbientKind::ComplexHyperbolic {
            let r2: f64 = p.iter().map(|x| x.as_f64() * x.as_f64()).sum();
            if r2 >= 1.0 {
                return Err(outside(format!("|z|² = {r2} is not below 1")));
            }
        }
        Ok(())
    }

    /// Closed-form metric components, row-major `2m×2m`, evaluated in any
    /// scalar type so that dual numbers yield exact derivatives.
    pub fn metric_components<S: crate::scalar::Scalar>(&self, x: &[S]) -> Vec<S> {
        let m = self.m;
        let d = 2 * m;
        let zero = S::zero();
        let one = S::one();
        let mut g = vec![zero; d * d];
        if self.kind == AmbientKind::Flat {
            for i in 0..d {
                g[i * d + i] = one;
            }
            return g;
        }
        let mut r2 = zero;
        for &xi in x {
            r2 = r2 + xi * xi;
        }
        // FS: h = (s·δ − z̄ⱼzₖ)/s², s = 1+|z|²;  CH: h = (s·δ + z̄ⱼzₖ)/s², s = 1−|z|².
        let (s, sign) = match self.kind {
            AmbientKind::FubiniStudy => (one + r2, -one),
            _ => (one - r2, one),
        };
        let s2 = s * s;
        for j in 0..m {
            let (aj, bj) = (x[2 * j], x[2 * j + 1]);
            for k in 0..m {
                let (ak, bk) = (x[2 * k], x[2 * k + 1]);
                let delta = if j == k { s } else { zero };
                let re = (delta + sign * (aj * ak + bj * bk)) / s2;
                let im = sign * (aj * bk - bj * ak) / s2;
                g[(2 * j) * d + 2 * k] = re;
                g[(2 * j + 1) * d + 2 * k + 1] = re;
                g[(2 * j) * d + 2 * k + 1] = im;
                g[(2 * j + 1) * d + 2 * k] = -im;
            }
        }
        g
    }

    pub fn metric_at<T: Real>(&self, p: &[T]) -> Result<MetricMatrix<T>> {
        self.check_point(p)?;
        let d = self.dim();
        let g = self.metric_components(p);
        Ok(MetricMatrix::new(Mat::from_fn(d, d, |i, j| g[i * d + j]))?)
    }

    /// The constant chart complex structure.
    pub fn complex_structure<T: Real>(&self) -> Mat<T> {
        standard_complex_structure(self.m)
    }

    pub fn complex_structure_at<T: Real>(&self, p: &[T]) -> Result<Mat<T>> {
        self.check_point(p)?;
        Ok(self.complex_structure())
    }

    /// `∂ₖ g` for every coordinate `k`, by forward-mode differentiation of
    /// the closed-form components.
    pub fn metric_derivatives<T: Real>(&self, p: &[T]) -> Result<Vec<Mat<T>>> {
        self.check_point(p)?;
        let d = self.dim();
        Ok((0..d)
            .map(|k| {
                let x: Vec<Dual<T>> = p
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if i == k { Dual::variable(v) } else { Dual::constant(v) })
                    .collect();
                let g = self.metric_components(&x);
                Mat::from_fn(d, d, |i, j| g[i * d + j].eps)
            })
            .collect())
    }

    pub fn christoffel_at<T: Real>(&self, p: &[T]) -> Result<Christoffel<T>> {
        let g = self.metric_at(p)?;
        let dg = self.metric_derivatives(p)?;
        Ok(levi_civita(&g, &dg))
    }

    /// `∂ᵢ∂ₖ g` for every coordinate pair, by nested dual numbers.
    pub fn metric_second_derivatives<T: Real>(&self, p: &[T]) -> Result<Vec<Vec<Mat<T>>>> {
        self.check_point(p)?;
        let d = self.dim();
        let seed = |on: bool| if on { T::one() } else { T::zero() };
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|k| {
                        let x: Vec<Dual<Dual<T>>> = p
                            .iter()
                            .enumerate()
                            .map(|(c, &v)| Dual::new(Dual::new(v, seed(c == k)), Dual::constant(seed(c == i))))
                            .collect();
                        let g = self.metric_components(&x);
                        Mat::from_fn(d, d, |a, b| g[a * d + b].eps.eps)
                    })
                    .collect()
            })
            .collect())
    }

    /// Curvature from exact first and second derivatives of the closed-form metric.
    pub fn curvature_at<T: Real>(&self, p: &[T]) -> Result<CurvatureData<T>> {
        let metric = self.metric_at(p)?;
        let d = self.dim();
        if self.kind == AmbientKind::Flat {
            let gamma = Christoffel::zeros(d);
            let dgamma = vec![Christoffel::zeros(d); d];
            return Ok(CurvatureData::assemble(metric, &gamma, &dgamma));
        }
        let dg = self.metric_derivatives(p)?;
        let ddg = self.metric_second_derivatives(p)?;
        let gamma = levi_civita(&metric, &dg);
        let ginv = metric.inverse();
        let half = T::lit(0.5);
        let mut dgamma = Vec::with_capacity(d);
        for i in 0..d {
            // ∂ᵢ g⁻¹ = −g⁻¹ (∂ᵢ g) g⁻¹
            let dginv = ginv.matmul(&dg[i]).matmul(&ginv).scale(-T::one());
            let h = &ddg[i];
            let mut out = Christoffel::zeros(d);
            for a in 0..d {
                for b in a..d {
                    let first: Vec<T> = (0..d).map(|m| half * (dg[a][(m, b)] + dg[b][(m, a)] - dg[m][(a, b)])).collect();
                    let dfirst: Vec<T> = (0..d).map(|m| half * (h[a][(m, b)] + h[b][(m, a)] - h[m][(a, b)])).collect();
                    for l in 0..d {
                        let mut s = T::zero();
                        for m in 0..d {
                            s += dginv[(l, m)] * first[m] + ginv[(l, m)] * dfirst[m];
                        }
                        out.set(l, a, b, s);
                        out.set(l, b, a, s);
                    }
                }
            }
            dgamma.push(out);
        }
        Ok(CurvatureData::assemble(metric, &gamma, &dgamma))
    }

    /// Residuals of the Kaehler structure and of the curvature symmetries at
    /// each sample point, reported as maxima over the sample.
    pub fn kaehler_audit(&self, points: &[Vec<f64>], tol: f64) -> Result<CheckReport> {
        let mut worst = KaehlerResiduals::default();
        for p in points {
            worst = worst.max(&self.kaehler_residuals(p)?);
        }
        let mut report = CheckReport::new("ambient.kaehler");
        report
            .residual("j_squared", worst.j_squared, tol)
            .residual("j_compatibility", worst.j_compat, tol)
            .residual("nabla_j", worst.nabla_j, tol)
            .residual("antisym_first_pair", worst.antisym_first_pair, tol)
            .residual("antisym_second_pair", worst.antisym_second_pair, tol)
            .residual("pair_swap", worst.pair_swap, tol)
            .residual("first_bianchi", worst.first_bianchi, tol)
            .residual("j_invariance_of_r", worst.j_invariance_r, tol)
            .value("points", points.len() as f64);
        Ok(report)
    }

    pub fn kaehler_residuals(&self, p: &[f64]) -> Result<KaehlerResiduals> {
        let d = self.dim();
        let g = self.metric_at(p)?;
        let j: Mat<f64> = self.complex_structure();
        let jj = j.matmul(&j);
        let j_squared = jj.sub(&Mat::identity(d).scale(-1.0)).max_abs();
        let jtgj = j.transpose().matmul(g.matrix()).matmul(&j);
        let j_compat = jtgj.sub(g.matrix()).max_abs();
        let gamma = self.christoffel_at(p)?;
        let nabla_j = covariant_derivative_of_j(&gamma, &j);
        let curv = self.curvature_at(p)?;
        let sym = RiemannSymmetry::of(&curv.riemann);
        let r = &curv.riemann;
        let mut j_invariance_r: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        // R(J∂a, J∂b, ∂c, ∂e) with J∂a = Σ J[x][a] ∂x.
                        let mut s = 0.0;
                        for x in 0..d {
                            if j[(x, a)] == 0.0 {
                                continue;
                            }
                            for y in 0..d {
                                s += j[(x, a)] * j[(y, b)] * r.get(x, y, c, e);
                            }
                        }
                        j_invariance_r = j_invariance_r.max((s - r.get(a, b, c, e)).abs());
                    }
                }
            }
        }
        Ok(KaehlerResiduals {
            j_squared,
            j_compat,
            nabla_j,
            antisym_first_pair: sym.antisym_first_pair,
            antisym_second_pair: sym.antisym_second_pair,
            pair_swap: sym.pair_swap,
            first_bianchi: sym.first_bianchi,
            j_invariance_r,
        })
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(m={})", self.kind, self.m)
    }
}

/// Block-diagonal `[[0,−1],[1,0]]` structure on `ℝ²ᵐ`.
pub fn standard_complex_structure<T: Real>(m: usize) -> Mat<T> {
    let d = 2 * m;
    let mut j = Mat::zeros(d, d);
    for k in 0..m {
        j[(2 * k + 1, 2 * k)] = T::one();
        j[(2 * k, 2 * k + 1)] = -T::one();
    }
    j
}

/// Levi-Civita symbols from a metric and its coordinate derivatives.
pub fn levi_civita<T: Real>(g: &MetricMatrix<T>, dg: &[Mat<T>]) -> Christoffel<T> {
    let d = g.dim();
    let ginv = g.inverse();
    let mut gamma = Christoffel::zeros(d);
    // first kind: [ij, m] = ½(∂ᵢg_mj + ∂ⱼg_mi − ∂_m g_ij)
    let mut first = vec![T::zero(); d * d * d];
    for i in 0..d {
        for j in i..d {
            for m in 0..d {
                let v = (dg[i][(m, j)] + dg[j][(m, i)] - dg[m][(i, j)]) * T::lit(0.5);
                first[(i * d + j) * d + m] = v;
                first[(j * d + i) * d + m] = v;
            }
        }
    }
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let mut s = T::zero();
                for m in 0..d {
                    s += ginv[(k, m)] * first[(i * d + j) * d + m];
                }
                gamma.set(k, i, j, s);
                gamma.set(k, j, i, s);
            }
        }
    }
    gamma
}

/// `max |(∇ₖJ)ᵃ_b|` for a constant chart `J`.
pub fn covariant_derivative_of_j<T: Real>(gamma: &Christoffel<T>, j: &Mat<T>) -> T {
    let d = gamma.dim();
    let mut worst = T::zero();
    for k in 0..d {
        for a in 0..d {
            for b in 0..d {
                let mut s = T::zero();
                for c in 0..d {
                    s += gamma.get(a, k, c) * j[(c, b)] - j[(a, c)] * gamma.get(c, k, b);
                }
                worst = worst.max(s.abs());
            }
        }
    }
    worst
}

/// Worst-case Kaehler and curvature-symmetry residuals at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KaehlerResiduals {
    pub j_squared: f64,
    pub j_compat: f64,
    pub nabla_j: f64,
    pub antisym_first_pair: f64,
    pub antisym_second_pair: f64,
    pub pair_swap: f64,
    pub first_bianchi: f64,
    pub j_invariance_r: f64,
}

impl KaehlerResiduals {
    fn max(&self, o: &Self) -> Self {
        KaehlerResiduals {
            j_squared: self.j_squared.max(o.j_squared),
            j_compat: self.j_compat.max(o.j_compat),
            nabla_j: self.nabla_j.max(o.nabla_j),
            antisym_first_pair: self.antisym_first_pair.max(o.antisym_first_pair),
            antisym_second_pair: self.antisym_second_pair.max(o.antisym_second_pair),
            pair_swap: self.pair_swap.max(o.pair_swap),
            first_bianchi: self.first_bianchi.max(o.first_bianchi),
            j_invariance_r: self.j_invariance_r.max(o.j_invariance_r),
        }
    }
}

/// Curvature of a metric at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData<T> {
    pub metric: MetricMatrix<T>,
    /// `endo[i,j,k,l]` is the `∂l` component of `R(∂i,∂j)∂k`.
    pub endo: Tensor4<T>,
    /// Lowered tensor `R(∂i,∂j,∂k,∂l) = g(R(∂i,∂j)∂k, ∂l)`.
    pub riemann: Tensor4<T>,
    pub ricci: Mat<T>,
    /// Trace scalar curvature `gⁱʲRicᵢⱼ`.
    pub tau: T,
    /// `tau/2`, the sum of sectional curvatures over `i<j` in an orthonormal frame.
    pub rho_half: T,
}

impl<T: Real> CurvatureData<T> {
    /// Assemble from Γ and its coordinate derivatives `dgamma[i] = ∂ᵢΓ`.
    pub fn assemble(metric: MetricMatrix<T>, gamma: &Christoffel<T>, dgamma: &[Christoffel<T>]) -> Self {
        let d = metric.dim();
        let mut endo = Tensor4::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut v = dgamma[i].get(l, j, k) - dgamma[j].get(l, i, k);
                        for m in 0..d {
                            v += gamma.get(l, i, m) * gamma.get(m, j, k) - gamma.get(l, j, m) * gamma.get(m, i, k);
                        }
                        endo.set(i, j, k, l, v);
                    }
                }
            }
        }
        let g = metric.matrix();
        let riemann = Tensor4::from_fn(d, |i, j, k, l| {
            let mut s = T::zero();
            for m in 0..d {
                s += endo.get(i, j, k, m) * g[(m, l)];
            }
            s
        });
        let ricci = Mat::from_fn(d, d, |j, k| {
            let mut s = T::zero();
            for i in 0..d {
                s += endo.get(i, j, k, i);
            }
            s
        });
        let ginv = metric.inverse();
        let mut tau = T::zero();
        for i in 0..d {
            for j in 0..d {
                tau += ginv[(i, j)] * ricci[(i, j)];
            }
        }
        CurvatureData {
            metric,
            endo,
            riemann,
            ricci,
            tau,
            rho_half: tau * T::lit(0.5),
        }
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// `R(X,Y,Z,W)`.
    pub fn r(&self, x: &[T], y: &[T], z: &[T], w: &[T]) -> T {
        self.riemann.eval(x, y, z, w)
    }

    /// `R(X,Y)Z` as a vector.
    pub fn apply(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        self.endo.apply3(x, y, z)
    }

    pub fn ricci_form(&self, x: &[T], y: &[T]) -> T {
        self.ricci.bilinear(x, y)
    }

    /// Sectional curvature of the plane spanned by `x`, `y`.
    pub fn sectional(&self, x: &[T], y: &[T]) -> T {
        let g = &self.metric;
        let area = g.inner(x, x) * g.inner(y, y) - g.inner(x, y).powi(2);
        self.r(x, y, y, x) / area
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{ball_point, gaussian, seeded};

    #[test]
    fn rejects_low_dimension() {
        assert_eq!(AmbientSpace::flat(1), Err(Error::InvalidDimension(1)));
        assert!(AmbientSpace::complex_hyperbolic(3).is_ok());
    }

    #[test]
    fn flat_metric_is_identity() {
        let a = AmbientSpace::flat(2).unwrap();
        let g = a.metric_at(&[0.3, -2.0, 5.0, 1.0]).unwrap();
        assert_eq!(*g.matrix(), Mat::identity(4));
        let c = a.curvature_at(&[0.3, -2.0, 5.0, 1.0]).unwrap();
        assert_eq!(c.riemann.max_abs(), 0.0);
        assert_eq!(c.tau, 0.0);
    }

    #[test]
    fn fubini_study_at_origin() {
        let a = AmbientSpace::fubini_study(2).unwrap();
        let origin = [0.0; 4];
        assert!(a.metric_at(&origin).unwrap().matrix().sub(&Mat::identity(4)).max_abs() < 1e-15);
        assert!(a.christoffel_at(&origin).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn fubini_study_determinant() {
        // det = (1+|z|²)^(−2(m+1)); at |z|² = 1 and m = 2 this is 2⁻⁶.
        let a = AmbientSpace::fubini_study(2).unwrap();
        let s = 0.5_f64.sqrt();
        for p in [[1.0, 0.0, 0.0, 0.0], [0.0, s, -s, 0.0], [0.5, 0.5, 0.5, -0.5]] {
            let det = a.metric_at(&p).unwrap().determinant();
            assert!((det - 2f64.powi(-6)).abs() < 1e-14, "{det}");
        }
    }

    #[test]
    fn complex_hyperbolic_domain() {
        let a = AmbientSpace::complex_hyperbolic(2).unwrap();
        assert!(matches!(
            a.metric_at(&[1.0, 0.0, 0.0, 0.0]),
            Err(Error::OutsideChart { .. })
        ));
        assert!(a.metric_at(&[0.5, 0.5, 0.5, 0.0]).is_ok());
    }

    #[test]
    fn j_squares_to_minus_identity() {
        for kind in AmbientKind::ALL {
            let a = AmbientSpace::new(kind, 3).unwrap();
            let j: Mat<f64> = a.complex_structure_at(&[0.1; 6]).unwrap();
            assert_eq!(j.matmul(&j), Mat::identity(6).scale(-1.0));
        }
        let j: Mat<f64> = standard_complex_structure(2);
        assert_eq!(j.matvec(&[1.0, 2.0, 3.0, 4.0]), vec![-2.0, 1.0, -4.0, 3.0]);
    }

    #[test]
    fn christoffel_symmetric() {
        let a = AmbientSpace::fubini_study(2).unwrap();
        let mut rng = seeded(11);
        for _ in 0..10 {
            let p = ball_point(&mut rng, 4, 2.0);
            assert!(a.christoffel_at(&p).unwrap().lower_asymmetry() <= 1e-12);
        }
    }

    #[test]
    fn space_form_ricci_and_holomorphic_curvature() {
        // Ric = 2(m+1)c·g, tau = 4m(m+1)c, K(X,JX) = 4c.
        let mut rng = seeded(5);
        for kind in [AmbientKind::FubiniStudy, AmbientKind::ComplexHyperbolic] {
            let a = AmbientSpace::new(kind, 2).unwrap();
            let c = kind.curvature_sign() as f64;
            for _ in 0..5 {
                let p = ball_point(&mut rng, 4, a.sampling_radius());
                let cd = a.curvature_at(&p).unwrap();
                let expect = cd.metric.matrix().scale(6.0 * c);
                assert!(cd.ricci.sub(&expect).max_abs() <= 1e-4);
                assert!((cd.tau - 24.0 * c).abs() <= 1e-3);
                assert_eq!(cd.tau, 2.0 * cd.rho_half);
                let x = gaussian(&mut rng, 4);
                let jx = a.complex_structure::<f64>().matvec(&x);
                assert!((cd.sectional(&x, &jx) - 4.0 * c).abs() <= 1e-4);
            }
        }
    }

    #[test]
    fn audit_bounds() {
        let mut rng = seeded(2);
        for kind in AmbientKind::ALL {
            let a = AmbientSpace::new(kind, 2).unwrap();
            let pts: Vec<_> = (0..4).map(|_| ball_point(&mut rng, 4, a.sampling_radius())).collect();
            let tol = if kind == AmbientKind::Flat { 1e-12 } else { 1e-6 };
            let rep = a.kaehler_audit(&pts, tol).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn single_precision_metric() {
        let a = AmbientSpace::fubini_study(2).unwrap();
        let g = a.metric_at(&[0.5f32, 0.1, -0.2, 0.3]).unwrap();
        let g64 = a.metric_at(&[0.5f64, 0.1, -0.2, 0.3]).unwrap();
        assert!((g.determinant() as f64 - g64.determinant()).abs() < 1e-5);
    }
}
