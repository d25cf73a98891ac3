use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sampling::gaussian;
use crate::tensorlab::symmetric_eigen;

use super::immersion::Immersion;
use super::point::PointGeometry;

/// How `J` acts on the tangent spaces of a submanifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum Class {
    Invariant,
    AntiInvariant,
    Slant { theta: f64 },
    Cr { p: usize, q: usize },
    Generic,
}

impl Class {
    /// Slant angle, with invariant and anti-invariant as the end cases.
    pub fn slant_angle(&self) -> Option<f64> {
        match self {
            Class::Invariant => Some(0.0),
            Class::AntiInvariant => Some(FRAC_PI_2),
            Class::Slant { theta } => Some(*theta),
            _ => None,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Invariant => f.write_str("invariant"),
            Class::AntiInvariant => f.write_str("anti_invariant"),
            Class::Slant { theta } => write!(f, "slant({theta})"),
            Class::Cr { p, q } => write!(f, "CR(p={p},q={q})"),
            Class::Generic => f.write_str("generic"),
        }
    }
}

/// Classification with the statistics it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: Class,
    pub theta_mean: f64,
    pub theta_std: f64,
    pub max_tx: f64,
    pub max_fx: f64,
    /// Eigenvalues of `TᵀT` at the first point, descending.
    pub spectrum: Vec<f64>,
    pub samples: usize,
}

/// Counts of `TᵀT` eigenvalues near 1 and near 0, if every eigenvalue is
/// within `tol` of one of them.
pub fn cr_counts(geom: &PointGeometry<f64>, tol: f64) -> (Vec<f64>, Option<(usize, usize)>) {
    let t = &geom.extrinsic.t_matrix;
    let (vals, _) = symmetric_eigen(&t.transpose().matmul(t));
    let ones = vals.iter().filter(|&&v| (v - 1.0).abs() <= tol).count();
    let zeros = vals.iter().filter(|&&v| v.abs() <= tol).count();
    let counts = (ones + zeros == vals.len()).then_some((ones, zeros));
    (vals, counts)
}

/// Classify from precomputed geometries, `k ≥ 8` random unit tangents each.
pub fn classify_at<R: Rng + ?Sized>(geoms: &[PointGeometry<f64>], k: usize, tol: f64, rng: &mut R) -> Classification {
    let k = k.max(8);
    let mut thetas = Vec::with_capacity(geoms.len() * k);
    let (mut max_tx, mut max_fx) = (0.0f64, 0.0f64);
    let mut cr: Option<Option<(usize, usize)>> = None;
    let mut spectrum = Vec::new();
    for geom in geoms {
        let ext = &geom.extrinsic;
        let n = geom.n();
        for _ in 0..k {
            let mut c = gaussian(rng, n);
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            c.iter_mut().for_each(|v| *v /= norm);
            // TX has frame components Σₐ cₐ T[a][b]; FX = Σₐ cₐ Feₐ.
            let tx: f64 = (0..n)
                .map(|b| (0..n).map(|a| c[a] * ext.t_matrix[(a, b)]).sum::<f64>().powi(2))
                .sum::<f64>()
                .sqrt();
            let mut fx = vec![0.0; geom.ambient_dim()];
            for (a, f) in ext.f_vectors.iter().enumerate() {
                for (o, &v) in fx.iter_mut().zip(f) {
                    *o += c[a] * v;
                }
            }
            let fx = geom.ambient_metric.norm(&fx);
            max_tx = max_tx.max(tx);
            max_fx = max_fx.max(fx);
            thetas.push(tx.min(1.0).acos());
        }
        let (vals, counts) = cr_counts(geom, tol);
        if spectrum.is_empty() {
            spectrum = vals;
        }
        cr = Some(match cr {
            None => counts,
            Some(prev) if prev == counts => counts,
            Some(_) => None,
        });
    }
    let count = thetas.len().max(1) as f64;
    let theta_mean = thetas.iter().sum::<f64>() / count;
    let theta_std = (thetas.iter().map(|t| (t - theta_mean).powi(2)).sum::<f64>() / count).sqrt();
    let class = if max_fx <= tol {
        Class::Invariant
    } else if max_tx <= tol {
        Class::AntiInvariant
    } else if theta_std <= tol && theta_mean > 0.0 && theta_mean < FRAC_PI_2 {
        Class::Slant { theta: theta_mean }
    } else if let Some(Some((ones, zeros))) = cr {
        if ones % 2 == 0 && ones > 0 && zeros > 0 {
            Class::Cr { p: ones / 2, q: zeros }
        } else {
            Class::Generic
        }
    } else {
        Class::Generic
    };
    Classification {
        class,
        theta_mean,
        theta_std,
        max_tx,
        max_fx,
        spectrum,
        samples: thetas.len(),
    }
}

pub fn classify<R: Rng + ?Sized>(
    s: &Immersion,
    points: &[Vec<f64>],
    k: usize,
    tol: f64,
    rng: &mut R,
) -> Result<Classification> {
    let geoms = points
        .iter()
        .map(|u| PointGeometry::at(s, u))
        .collect::<Result<Vec<_>>>()?;
    Ok(classify_at(&geoms, k, tol, rng))
}
