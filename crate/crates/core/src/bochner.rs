//! The `L`/`M` tensors of a Kaehler metric and the curvature tensor they
//! determine when the Bochner tensor vanishes.
//!
//! With `d` the complex dimension of the ambient,
//!
//! ```text
//! L = Ric/(2d+4) − tau·g/(2(2d+2)(2d+4)),    M(Y,Z) = −L(Y,JZ)
//! ```
//!
//! and a Bochner-flat curvature tensor is
//!
//! ```text
//! R(X,Y,Z,W) = L(Y,Z)g(X,W) − L(X,Z)g(Y,W) + L(X,W)g(Y,Z) − L(Y,W)g(X,Z)
//!            + M(Y,Z)g(JX,W) − M(X,Z)g(JY,W) + M(X,W)g(JY,Z) − M(Y,W)g(JX,Z)
//!            − 2M(X,Y)g(JZ,W) − 2M(Z,W)g(JX,Y).
//! ```

use rand::Rng;

use crate::ambient::{AmbientSpace, CurvatureData};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::sampling::gaussian;
use crate::scalar::Real;
use crate::tensorlab::{Mat, MetricMatrix, Tensor4};

/// `L` and `M` at a chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct BochnerTensors<T> {
    pub ambient: AmbientSpace,
    pub point: Vec<T>,
    /// Complex dimension used in the denominators.
    pub dim_param: usize,
    pub l: Mat<T>,
    pub m: Mat<T>,
    pub metric: MetricMatrix<T>,
    pub j: Mat<T>,
}

impl<T: Real> BochnerTensors<T> {
    pub fn l_form(&self, y: &[T], z: &[T]) -> T {
        self.l.bilinear(y, z)
    }

    pub fn m_form(&self, y: &[T], z: &[T]) -> T {
        self.m.bilinear(y, z)
    }

    /// Curvature tensor assembled from `L` and `M`.
    pub fn reconstruct(&self) -> Tensor4<T> {
        let g = self.metric.matrix();
        // jg[a][d] = g(J∂a, ∂d)
        let jg = self.j.transpose().matmul(g);
        let (l, m) = (&self.l, &self.m);
        let two = T::lit(2.0);
        Tensor4::from_fn(g.rows(), |a, b, c, d| {
            l[(b, c)] * g[(a, d)] - l[(a, c)] * g[(b, d)] + l[(a, d)] * g[(b, c)] - l[(b, d)] * g[(a, c)]
                + m[(b, c)] * jg[(a, d)]
                - m[(a, c)] * jg[(b, d)]
                + m[(a, d)] * jg[(b, c)]
                - m[(b, d)] * jg[(a, c)]
                - two * m[(a, b)] * jg[(c, d)]
                - two * m[(c, d)] * jg[(a, b)]
        })
    }

    /// Residuals of the algebraic identities `L` and `M` must satisfy.
    pub fn symmetry_residuals(&self) -> SymmetryResiduals<T> {
        let (l, j) = (&self.l, &self.j);
        let jt = j.transpose();
        SymmetryResiduals {
            l_symmetry: l.sub(&l.transpose()).max_abs(),
            l_j_invariance: jt.matmul(l).matmul(j).sub(l).max_abs(),
            l_skew: {
                // L(Y,JZ) + L(JY,Z) has matrix LJ + JᵀL.
                let lj = l.matmul(j);
                let jtl = jt.matmul(l);
                Mat::from_fn(l.rows(), l.cols(), |a, b| lj[(a, b)] + jtl[(a, b)]).max_abs()
            },
            m_antisymmetry: Mat::from_fn(self.m.rows(), self.m.cols(), |a, b| self.m[(a, b)] + self.m[(b, a)]).max_abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryResiduals<T> {
    pub l_symmetry: T,
    pub l_j_invariance: T,
    pub l_skew: T,
    pub m_antisymmetry: T,
}

/// `L`, `M` from curvature data with an explicit dimension parameter `d`.
pub fn lm_from_curvature<T: Real>(
    ambient: &AmbientSpace,
    point: &[T],
    curv: &CurvatureData<T>,
    d: usize,
) -> BochnerTensors<T> {
    let j: Mat<T> = ambient.complex_structure();
    let g = curv.metric.matrix();
    let d_t = T::lit(d as f64);
    let two = T::lit(2.0);
    let a = two * d_t + T::lit(4.0);
    let b = two * (two * d_t + two) * a;
    let l = Mat::from_fn(g.rows(), g.cols(), |x, y| curv.ricci[(x, y)] / a - curv.tau * g[(x, y)] / b);
    let lj = l.matmul(&j);
    let m = lj.scale(-T::one());
    BochnerTensors {
        ambient: *ambient,
        point: point.to_vec(),
        dim_param: d,
        l,
        m,
        metric: curv.metric.clone(),
        j,
    }
}

pub fn lm_tensors_at<T: Real>(a: &AmbientSpace, p: &[T]) -> Result<BochnerTensors<T>> {
    let curv = a.curvature_at(p)?;
    Ok(lm_from_curvature(a, p, &curv, a.m()))
}

pub fn reconstruct_curvature<T: Real>(a: &AmbientSpace, p: &[T]) -> Result<Tensor4<T>> {
    Ok(lm_tensors_at(a, p)?.reconstruct())
}

/// `‖R − R̃‖∞` with `R` from the metric and `R̃` from `L`/`M`.
pub fn bochner_residual<T: Real>(a: &AmbientSpace, p: &[T]) -> Result<T> {
    calibration_residual(a, p, a.m())
}

/// Same residual with an arbitrary dimension parameter in the `L` denominators.
pub fn calibration_residual<T: Real>(a: &AmbientSpace, p: &[T], d: usize) -> Result<T> {
    let curv = a.curvature_at(p)?;
    let bt = lm_from_curvature(a, p, &curv, d);
    Ok(curv.riemann.max_abs_diff(&bt.reconstruct()))
}

pub fn symmetry_audit<T: Real>(a: &AmbientSpace, p: &[T], tol: f64) -> Result<CheckReport> {
    let r = lm_tensors_at(a, p)?.symmetry_residuals();
    let mut report = CheckReport::new("bochner.symmetries");
    report
        .residual("l_symmetry", r.l_symmetry.as_f64(), tol)
        .residual("l_j_invariance", r.l_j_invariance.as_f64(), tol)
        .residual("l_skew", r.l_skew.as_f64(), tol)
        .residual("m_antisymmetry", r.m_antisymmetry.as_f64(), tol);
    Ok(report)
}

/// Both sides of `R(X,JX,Z,JZ) = −2M(X,JX)g(Z,Z) − 2M(Z,JZ)g(X,X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolomorphicPairIdentity<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

/// Checks the identity for unit `X`, `Z` with `g(X,Z) = g(X,JZ) = 0`.
pub fn identity_w33<T: Real>(a: &AmbientSpace, p: &[T], x: &[T], z: &[T]) -> Result<HolomorphicPairIdentity<T>> {
    let curv = a.curvature_at(p)?;
    let bt = lm_from_curvature(a, p, &curv, a.m());
    let g = &curv.metric;
    let jx = bt.j.matvec(x);
    let jz = bt.j.matvec(z);
    let pre = T::lit(1e-8);
    let checks = [
        ("g(X,X) = 1", g.inner(x, x) - T::one()),
        ("g(Z,Z) = 1", g.inner(z, z) - T::one()),
        ("g(X,Z) = 0", g.inner(x, z)),
        ("g(X,JZ) = 0", g.inner(x, &jz)),
    ];
    for (what, v) in checks {
        if v.abs() > pre {
            return Err(Error::Precondition {
                what: what.into(),
                measured: v.as_f64(),
            });
        }
    }
    let lhs = curv.r(x, &jx, z, &jz);
    let two = T::lit(2.0);
    let rhs = -two * bt.m_form(x, &jx) * g.inner(z, z) - two * bt.m_form(z, &jz) * g.inner(x, x);
    Ok(HolomorphicPairIdentity {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Random unit `X`, `Z` at `p` with `Z` orthogonal to `X` and `JX`.
pub fn cr_orthogonal_pair<R: Rng + ?Sized>(a: &AmbientSpace, p: &[f64], rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = a.metric_at(p)?;
    let j: Mat<f64> = a.complex_structure();
    let d = a.dim();
    let mut x = gaussian(rng, d);
    let nx = g.norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let jx = j.matvec(&x);
    let mut z = gaussian(rng, d);
    for _ in 0..2 {
        for b in [&x, &jx] {
            let c = g.inner(b, &z);
            z.iter_mut().zip(b.iter()).for_each(|(zi, bi)| *zi -= c * bi);
        }
    }
    let nz = g.norm(&z);
    z.iter_mut().for_each(|v| *v /= nz);
    Ok((x, z))
}
