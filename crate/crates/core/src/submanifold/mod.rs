//! Geometry of immersed submanifolds: induced metric, adapted frames,
//! second fundamental form, the `T`/`F` split of `J`, intrinsic curvature,
//! slant classification and the Gauss and Codazzi equations.
//!
//! Sign conventions follow [`crate::ambient`]. With them the Gauss equation
//! reads `R(X,Y,Z,W) = R̄(X,Y,Z,W) + g(ω(X,W),ω(Y,Z)) − g(ω(X,Z),ω(Y,W))`,
//! and Codazzi reads `(R̄(X,Y)Z)⊥ = (∇̃_X ω)(Y,Z) − (∇̃_Y ω)(X,Z)`.

mod classify;
mod immersion;
mod point;

pub use classify::{classify, classify_at, Class, Classification};
pub use immersion::{make_immersion, BuiltinInfo, Immersion, ImmersionSpec, Jet, WarpMeta, BUILTINS};
pub use point::{coordinate_omega_at, intrinsic_christoffel_at, AdaptedFrame, ExtrinsicData, PointGeometry};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensorlab::{Mat, MetricMatrix};

pub fn induced_metric_at<T: Real>(s: &Immersion, u: &[T]) -> Result<MetricMatrix<T>> {
    Ok(PointGeometry::at(s, u)?.induced)
}

pub fn adapted_frame_at<T: Real>(s: &Immersion, u: &[T]) -> Result<AdaptedFrame<T>> {
    Ok(PointGeometry::at(s, u)?.frame)
}

/// Extrinsic data at `u` in the given frame (which must be adapted at `u`).
pub fn extrinsic_data_at<T: Real>(s: &Immersion, u: &[T], frame: &AdaptedFrame<T>) -> Result<ExtrinsicData<T>> {
    let geom = PointGeometry::at(s, u)?;
    let res = frame.orthonormality_residual(&geom.ambient_metric);
    if res > T::lit(1e-8) {
        return Err(Error::Precondition {
            what: "frame must be orthonormal".into(),
            measured: res.as_f64(),
        });
    }
    for e in &frame.tangent {
        geom.require_tangent(e)?;
    }
    Ok(geom.extrinsic_for(frame))
}

/// A plane section of the tangent space.
#[derive(Debug, Clone, PartialEq)]
pub enum Plane<T> {
    /// Spanned by two vectors of the adapted frame.
    Frame(usize, usize),
    /// Spanned by two tangent ambient vectors.
    Vectors(Vec<T>, Vec<T>),
}

impl<T: Real> Plane<T> {
    /// The two spanning ambient vectors.
    pub fn vectors(&self, geom: &PointGeometry<T>) -> Result<(Vec<T>, Vec<T>)> {
        match self {
            Plane::Frame(a, b) => {
                let n = geom.n();
                if *a >= n || *b >= n || a == b {
                    return Err(Error::Precondition {
                        what: format!("frame plane ({a},{b}) needs distinct indices below {n}"),
                        measured: 0.0,
                    });
                }
                Ok((geom.frame.tangent[*a].clone(), geom.frame.tangent[*b].clone()))
            }
            Plane::Vectors(x, y) => {
                geom.require_tangent(x)?;
                geom.require_tangent(y)?;
                Ok((x.clone(), y.clone()))
            }
        }
    }

    /// Orthonormal basis `(e₁, e₂)` of the plane, Gram–Schmidt in order.
    pub fn orthonormal(&self, geom: &PointGeometry<T>) -> Result<(Vec<T>, Vec<T>)> {
        let (x, y) = self.vectors(geom)?;
        let q = crate::tensorlab::gram_schmidt(&[x, y], &geom.ambient_metric).map_err(|_| Error::Precondition {
            what: "plane vectors must be independent".into(),
            measured: 0.0,
        })?;
        Ok((q[0].clone(), q[1].clone()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicCurvature<T> {
    pub k_plane: T,
    /// Intrinsic Ricci tensor in chart coordinates.
    pub ricci: Mat<T>,
    /// `Σ_{i<j} K(eᵢ∧eⱼ)`.
    pub rho: T,
}

pub fn intrinsic_curvature_at<T: Real>(s: &Immersion, u: &[T], plane: &Plane<T>) -> Result<IntrinsicCurvature<T>> {
    let geom = PointGeometry::at(s, u)?;
    let (x, y) = plane.vectors(&geom)?;
    Ok(IntrinsicCurvature {
        k_plane: geom.sectional(&x, &y)?,
        ricci: geom.curvature.ricci.clone(),
        rho: geom.rho(),
    })
}

/// `|R̄(X,Y,Z,W) − R(X,Y,Z,W) + g(ω(X,W),ω(Y,Z)) − g(ω(X,Z),ω(Y,W))|`.
pub fn gauss_residual<T: Real>(geom: &PointGeometry<T>, x: &[T], y: &[T], z: &[T], w: &[T]) -> Result<T> {
    for v in [x, y, z, w] {
        geom.require_tangent(v)?;
    }
    let rbar = geom.ambient_curvature.r(x, y, z, w);
    let r = geom.intrinsic_r(x, y, z, w);
    let xw_yz = geom.g(&geom.omega(x, w), &geom.omega(y, z));
    let xz_yw = geom.g(&geom.omega(x, z), &geom.omega(y, w));
    Ok((rbar - r + xw_yz - xz_yw).abs())
}

pub fn gauss_residual_at<T: Real>(s: &Immersion, u: &[T], x: &[T], y: &[T], z: &[T], w: &[T]) -> Result<T> {
    gauss_residual(&PointGeometry::at(s, u)?, x, y, z, w)
}

/// Codazzi defect `C(∂ₖ,∂ᵢ,∂ⱼ) = (R̄(∂ₖ,∂ᵢ)∂ⱼ)⊥ − (∇̃_k ω)ᵢⱼ + (∇̃ᵢ ω)ₖⱼ` in
/// chart coordinates. Derivatives of `ω` are central differences along
/// coordinate lines.
#[derive(Debug, Clone)]
pub struct CodazziDefect<T> {
    defect: Vec<Vec<Vec<Vec<T>>>>,
}

impl<T: Real> CodazziDefect<T> {
    pub fn at(s: &Immersion, geom: &PointGeometry<T>) -> Result<Self> {
        let n = geom.n();
        let u = &geom.u;
        let w = &geom.omega_coord;
        // nabla[k][i][j] = (∇̃ₖω)ᵢⱼ
        let mut nabla = vec![vec![vec![Vec::new(); n]; n]; n];
        for k in 0..n {
            let h = T::fd_step(u[k]);
            let mut plus = u.clone();
            let mut minus = u.clone();
            plus[k] += h;
            minus[k] -= h;
            let wp = coordinate_omega_at(s, &plus)?;
            let wm = coordinate_omega_at(s, &minus)?;
            for i in 0..n {
                for j in 0..n {
                    let dk: Vec<T> = wp[i][j].iter().zip(&wm[i][j]).map(|(&a, &b)| (a - b) / (h + h)).collect();
                    let corr = geom.ambient_gamma.contract(&geom.jet.d1[k], &w[i][j]);
                    let raw: Vec<T> = dk.iter().zip(&corr).map(|(&a, &b)| a + b).collect();
                    let mut v = geom.normal_part(&raw);
                    for l in 0..n {
                        let (gi, gj) = (geom.gamma.get(l, k, i), geom.gamma.get(l, k, j));
                        for (c, vc) in v.iter_mut().enumerate() {
                            *vc -= gi * w[l][j][c] + gj * w[i][l][c];
                        }
                    }
                    nabla[k][i][j] = v;
                }
            }
        }
        let d1 = &geom.jet.d1;
        let defect = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let rbar = geom.normal_part(&geom.ambient_curvature.apply(&d1[k], &d1[i], &d1[j]));
                                rbar.iter()
                                    .zip(&nabla[k][i][j])
                                    .zip(&nabla[i][k][j])
                                    .map(|((&r, &a), &b)| r - a + b)
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(CodazziDefect { defect })
    }

    /// Norm of the defect on tangent ambient vectors `X`, `Y`, `Z`.
    pub fn residual(&self, geom: &PointGeometry<T>, x: &[T], y: &[T], z: &[T]) -> Result<T> {
        for v in [x, y, z] {
            geom.require_tangent(v)?;
        }
        let (cx, cy, cz) = (geom.chart_components(x), geom.chart_components(y), geom.chart_components(z));
        let n = geom.n();
        let mut out = vec![T::zero(); geom.ambient_dim()];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let w = cx[k] * cy[i] * cz[j];
                    for (o, &v) in out.iter_mut().zip(&self.defect[k][i][j]) {
                        *o += w * v;
                    }
                }
            }
        }
        Ok(geom.ambient_metric.norm(&out))
    }
}

pub fn codazzi_residual_at<T: Real>(s: &Immersion, u: &[T], x: &[T], y: &[T], z: &[T]) -> Result<T> {
    let geom = PointGeometry::at(s, u)?;
    CodazziDefect::at(s, &geom)?.residual(&geom, x, y, z)
}

#[cfg(test)]
mod tests;
