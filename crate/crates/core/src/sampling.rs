//! Seeded random sampling of chart points, vectors and frame rotations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Real;
use crate::tensorlab::{gram_schmidt, Mat, MetricMatrix};

pub type SampleRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard Gaussian vector.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point in the closed Euclidean ball of the given radius.
pub fn ball_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let v = gaussian(rng, dim);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let r = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
        return v.into_iter().map(|x| x * r / norm).collect();
    }
}

/// Uniform point in the box `lo..hi` (componentwise).
pub fn box_point<R: Rng + ?Sized>(rng: &mut R, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    lo.iter()
        .zip(hi)
        .map(|(&a, &b)| if a < b { rng.gen_range(a..b) } else { a })
        .collect()
}

/// Haar-ish random orthogonal `n×n` matrix (Gram–Schmidt of Gaussian
/// columns); columns are returned as rows of the result for convenience.
pub fn random_orthogonal<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat<T> {
    let id = MetricMatrix::<T>::identity(n);
    loop {
        let cols: Vec<Vec<T>> = (0..n)
            .map(|_| gaussian(rng, n).into_iter().map(T::lit).collect())
            .collect();
        if let Ok(q) = gram_schmidt(&cols, &id) {
            return Mat::from_rows(&q);
        }
    }
}

/// Random combination `Σ cᵢ vᵢ` with Gaussian coefficients.
pub fn combination<T: Real, R: Rng + ?Sized>(rng: &mut R, vs: &[Vec<T>]) -> Vec<T> {
    let dim = vs.first().map_or(0, Vec::len);
    let mut out = vec![T::zero(); dim];
    for v in vs {
        let c = T::lit(rng.sample(StandardNormal));
        for (o, &x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_points_stay_inside() {
        let mut rng = seeded(7);
        for _ in 0..200 {
            let p = ball_point(&mut rng, 6, 0.8);
            assert!(p.iter().map(|x| x * x).sum::<f64>() <= 0.64 + 1e-12);
        }
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut rng = seeded(1);
        let q: Mat<f64> = random_orthogonal(&mut rng, 5);
        let qqt = q.matmul(&q.transpose());
        assert!(qqt.sub(&Mat::identity(5)).max_abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = ball_point(&mut seeded(3), 4, 2.0);
        let b = ball_point(&mut seeded(3), 4, 2.0);
        assert_eq!(a, b);
    }
}
