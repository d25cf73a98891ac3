//! Small dense linear algebra: metric-aware Gram–Schmidt, orthogonal
//! complements, SPD solves and a Jacobi eigensolver. Dimensions here are at
//! most `2m ≤ 16`, so everything is plain row-major `Vec` storage.

use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::scalar::Real;

/// Relative pivot tolerance shared by every frame builder.
pub const PIVOT_TOL: f64 = 1e-10;

/// Pivot tolerance in `T`, never below what `T` can resolve.
pub fn pivot_tol<T: Real>() -> T {
    T::lit(PIVOT_TOL).max(T::epsilon() * T::lit(100.0))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("vectors are linearly dependent: vector {index} has no component outside the span of its predecessors")]
    RankDeficient { index: usize },
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("matrix is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },
    #[error("input basis is not orthonormal (Gram residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Mat<T>) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `aᵀ M b`.
    pub fn bilinear(&self, a: &[T], b: &[T]) -> T {
        let mb = self.matvec(b);
        dot(a, &mb)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scaled<T: Real>(alpha: T, x: &[T]) -> Vec<T> {
    x.iter().map(|&v| alpha * v).collect()
}

pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

pub fn unit_vector<T: Real>(dim: usize, k: usize) -> Vec<T> {
    let mut e = vec![T::zero(); dim];
    e[k] = T::one();
    e
}

/// Symmetric positive-definite matrix, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix<T> {
    mat: Mat<T>,
    chol: Mat<T>,
}

impl<T: Real> MetricMatrix<T> {
    /// Validates symmetry (relative residual ≤ 1e-12) and positive
    /// definiteness; the stored matrix is exactly symmetrized.
    pub fn new(mat: Mat<T>) -> Result<Self, LinalgError> {
        if mat.rows() != mat.cols() {
            return Err(LinalgError::DimensionMismatch {
                expected: mat.rows(),
                found: mat.cols(),
            });
        }
        let scale = mat.max_abs().max(T::one());
        let asym = mat.asymmetry();
        let sym_tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        if asym > sym_tol * scale {
            return Err(LinalgError::NotSymmetric {
                residual: asym.as_f64(),
            });
        }
        let n = mat.rows();
        let sym = Mat::from_fn(n, n, |i, j| (mat[(i, j)] + mat[(j, i)]) * T::lit(0.5));
        let chol = cholesky(&sym)?;
        Ok(MetricMatrix { mat: sym, chol })
    }

    pub fn identity(n: usize) -> Self {
        MetricMatrix {
            mat: Mat::identity(n),
            chol: Mat::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn inner(&self, a: &[T], b: &[T]) -> T {
        self.mat.bilinear(a, b)
    }

    pub fn norm(&self, a: &[T]) -> T {
        self.inner(a, a).max(T::zero()).sqrt()
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        cholesky_solve(&self.chol, b)
    }

    pub fn inverse(&self) -> Mat<T> {
        let n = self.dim();
        let cols: Vec<Vec<T>> = (0..n).map(|j| self.solve(&unit_vector(n, j))).collect();
        Mat::from_fn(n, n, |i, j| cols[j][i])
    }

    pub fn determinant(&self) -> T {
        let d: T = (0..self.dim()).map(|i| self.chol[(i, i)]).fold(T::one(), |p, x| p * x);
        d * d
    }

    /// Gram matrix `[g(vᵢ, vⱼ)]` of a list of vectors.
    pub fn gram(&self, vs: &[Vec<T>]) -> Mat<T> {
        Mat::from_fn(vs.len(), vs.len(), |i, j| self.inner(&vs[i], &vs[j]))
    }
}

/// Lower-triangular Cholesky factor.
fn cholesky<T: Real>(a: &Mat<T>) -> Result<Mat<T>, LinalgError> {
    let n = a.rows();
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > T::zero()) {
            return Err(LinalgError::NotPositiveDefinite {
                pivot: j,
                value: d.as_f64(),
            });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

fn cholesky_solve<T: Real>(l: &Mat<T>, b: &[T]) -> Vec<T> {
    let n = l.rows();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[(i, k)] * y[k];
            y[i] -= t;
        }
        y[i] = y[i] / l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = l[(k, i)] * y[k];
            y[i] -= t;
        }
        y[i] = y[i] / l[(i, i)];
    }
    y
}

/// Solve `A x = b` for symmetric positive-definite `A`.
pub fn solve_spd<T: Real>(a: &MetricMatrix<T>, b: &[T]) -> Result<Vec<T>, LinalgError> {
    if b.len() != a.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim(),
            found: b.len(),
        });
    }
    Ok(a.solve(b))
}

/// Remove from `v` its `g`-projection onto each (orthonormal) vector of `basis`.
fn project_out<T: Real>(v: &mut [T], basis: &[Vec<T>], g: &MetricMatrix<T>) {
    for q in basis {
        let c = g.inner(q, v);
        axpy(-c, q, v);
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
pub fn gram_schmidt<T: Real>(
    vectors: &[Vec<T>],
    g: &MetricMatrix<T>,
) -> Result<Vec<Vec<T>>, LinalgError> {
    let tol = pivot_tol::<T>();
    let mut out: Vec<Vec<T>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != g.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: g.dim(),
                found: v.len(),
            });
        }
        let original = g.norm(v);
        let mut w = v.clone();
        project_out(&mut w, &out, g);
        project_out(&mut w, &out, g);
        let norm = g.norm(&w);
        if !(norm > tol * original) || original == T::zero() {
            return Err(LinalgError::RankDeficient { index });
        }
        out.push(scaled(T::one() / norm, &w));
    }
    Ok(out)
}

/// Max entry of `|Gram - I|`.
pub fn orthonormality_residual<T: Real>(vs: &[Vec<T>], g: &MetricMatrix<T>) -> T {
    let gram = g.gram(vs);
    gram.sub(&Mat::identity(vs.len())).max_abs()
}

/// Completes an orthonormal list to a full orthonormal basis of the ambient
/// space. Candidates are the standard basis vectors, taken greedily by
/// largest remaining component (ties by index), so output is deterministic.
pub fn orthonormal_complement<T: Real>(
    basis: &[Vec<T>],
    g: &MetricMatrix<T>,
) -> Result<Vec<Vec<T>>, LinalgError> {
    let d = g.dim();
    let residual = orthonormality_residual(basis, g);
    if residual > T::lit(1e-8) {
        return Err(LinalgError::NotOrthonormal {
            residual: residual.as_f64(),
        });
    }
    let mut span: Vec<Vec<T>> = basis.to_vec();
    let mut out = Vec::new();
    let mut used = vec![false; d];
    while span.len() < d {
        let mut best: Option<(usize, Vec<T>, T)> = None;
        for k in (0..d).filter(|&k| !used[k]) {
            let mut w = unit_vector(d, k);
            project_out(&mut w, &span, g);
            project_out(&mut w, &span, g);
            let n = g.norm(&w);
            if best.as_ref().is_none_or(|(_, _, bn)| n > *bn) {
                best = Some((k, w, n));
            }
        }
        let (k, w, n) = best.expect("a candidate remains while the span is incomplete");
        if !(n > pivot_tol::<T>()) {
            return Err(LinalgError::RankDeficient { index: k });
        }
        used[k] = true;
        let q = scaled(T::one() / n, &w);
        span.push(q.clone());
        out.push(q);
    }
    Ok(out)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in descending order with matching unit eigenvectors.
pub fn symmetric_eigen<T: Real>(m: &Mat<T>) -> (Vec<T>, Vec<Vec<T>>) {
    let n = m.rows();
    let mut a = Mat::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)]) * T::lit(0.5));
    let mut v = Mat::<T>::identity(n);
    let scale = a.max_abs().max(T::min_positive_value());
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= T::epsilon() * scale * T::lit(0.01) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .partial_cmp(&a[(i, i)])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = order.iter().map(|&i| v.column(i)).collect();
    (values, vectors)
}

/// Connection coefficients `Γᵏᵢⱼ`, stored `[k][i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> Christoffel<T> {
    pub fn zeros(dim: usize) -> Self {
        Christoffel {
            dim,
            data: vec![T::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> T {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, k: usize, i: usize, j: usize, v: T) {
        self.data[(k * self.dim + i) * self.dim + j] = v;
    }

    /// `Γ(X, Y)ᵏ = Γᵏᵢⱼ Xⁱ Yʲ`.
    pub fn contract(&self, x: &[T], y: &[T]) -> Vec<T> {
        let d = self.dim;
        (0..d)
            .map(|k| {
                let mut s = T::zero();
                for i in 0..d {
                    if x[i] == T::zero() {
                        continue;
                    }
                    for j in 0..d {
                        s += self.get(k, i, j) * x[i] * y[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn lower_asymmetry(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for k in 0..d {
            for i in 0..d {
                for j in 0..i {
                    worst = worst.max((self.get(k, i, j) - self.get(k, j, i)).abs());
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.data)
    }
}

/// Dense rank-4 array over a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> Tensor4<T> {
    pub fn zeros(dim: usize) -> Self {
        Tensor4 {
            dim,
            data: vec![T::zero(); dim * dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        data.push(f(a, b, c, d));
                    }
                }
            }
        }
        Tensor4 { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> T {
        self.data[self.offset(a, b, c, d)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: T) {
        let o = self.offset(a, b, c, d);
        self.data[o] = v;
    }

    /// Full contraction with four vectors.
    pub fn eval(&self, x: &[T], y: &[T], z: &[T], w: &[T]) -> T {
        let n = self.dim;
        let mut s = T::zero();
        for a in 0..n {
            if x[a] == T::zero() {
                continue;
            }
            for b in 0..n {
                let xy = x[a] * y[b];
                if xy == T::zero() {
                    continue;
                }
                for c in 0..n {
                    let xyz = xy * z[c];
                    if xyz == T::zero() {
                        continue;
                    }
                    for d in 0..n {
                        s += xyz * w[d] * self.get(a, b, c, d);
                    }
                }
            }
        }
        s
    }

    /// Contraction of the first three slots, leaving the last free.
    pub fn apply3(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        let n = self.dim;
        let mut out = vec![T::zero(); n];
        for a in 0..n {
            for b in 0..n {
                let xy = x[a] * y[b];
                if xy == T::zero() {
                    continue;
                }
                for c in 0..n {
                    let xyz = xy * z[c];
                    if xyz == T::zero() {
                        continue;
                    }
                    for (d, o) in out.iter_mut().enumerate() {
                        *o += xyz * self.get(a, b, c, d);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Tensor4<T>) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.data)
    }
}

/// Worst violations of the algebraic curvature-tensor symmetries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSymmetry<T> {
    pub antisym_first_pair: T,
    pub antisym_second_pair: T,
    pub pair_swap: T,
    pub first_bianchi: T,
}

impl<T: Real> RiemannSymmetry<T> {
    pub fn of(r: &Tensor4<T>) -> Self {
        let n = r.dim();
        let mut s = RiemannSymmetry {
            antisym_first_pair: T::zero(),
            antisym_second_pair: T::zero(),
            pair_swap: T::zero(),
            first_bianchi: T::zero(),
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = r.get(a, b, c, d);
                        s.antisym_first_pair = s.antisym_first_pair.max((v + r.get(b, a, c, d)).abs());
                        s.antisym_second_pair = s.antisym_second_pair.max((v + r.get(a, b, d, c)).abs());
                        s.pair_swap = s.pair_swap.max((v - r.get(c, d, a, b)).abs());
                        let bianchi = v + r.get(b, c, a, d) + r.get(c, a, b, d);
                        s.first_bianchi = s.first_bianchi.max(bianchi.abs());
                    }
                }
            }
        }
        s
    }

    pub fn worst(&self) -> T {
        self.antisym_first_pair
            .max(self.antisym_second_pair)
            .max(self.pair_swap)
            .max(self.first_bianchi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn gram_schmidt_identity_cases() {
        let g = MetricMatrix::<f64>::identity(2);
        let out = gram_schmidt(&[vec![1.0, 0.0], vec![0.0, 1.0]], &g).unwrap();
        assert_eq!(out, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let out = gram_schmidt(&[vec![2.0, 0.0], vec![0.0, 3.0]], &g).unwrap();
        assert_eq!(out, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn gram_schmidt_hand_oracle() {
        // (1,1) → (1,1)/√2; (0,1) − ½(1,1) = (−½,½) → (−1,1)/√2.
        let g = MetricMatrix::<f64>::identity(2);
        let out = gram_schmidt(&[vec![1.0, 1.0], vec![0.0, 1.0]], &g).unwrap();
        let r = 0.5_f64.sqrt();
        assert!(close(&out[0], &[r, r], 1e-15));
        assert!(close(&out[1], &[-r, r], 1e-15));
    }

    #[test]
    fn gram_schmidt_rank_error_names_index() {
        let g = MetricMatrix::<f64>::identity(3);
        let err = gram_schmidt(
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]],
            &g,
        )
        .unwrap_err();
        assert_eq!(err, LinalgError::RankDeficient { index: 2 });
    }

    #[test]
    fn complement_cases() {
        let g = MetricMatrix::<f64>::identity(4);
        let c = orthonormal_complement(&[vec![1.0, 0.0, 0.0, 0.0]], &g).unwrap();
        assert_eq!(c.len(), 3);
        for v in &c {
            assert_eq!(v[0], 0.0);
        }
        let full: Vec<Vec<f64>> = (0..4).map(|k| unit_vector(4, k)).collect();
        assert!(orthonormal_complement(&full, &g).unwrap().is_empty());

        let r = 0.5_f64.sqrt();
        let b = vec![vec![r, r, 0.0, 0.0]];
        let c = orthonormal_complement(&b, &g).unwrap();
        assert_eq!(c.len(), 3);
        for v in &c {
            assert!(dot(v, &b[0]).abs() < 1e-12);
        }
        let mut all = b.clone();
        all.extend(c);
        assert!(orthonormality_residual(&all, &g) < 1e-12);
    }

    #[test]
    fn complement_rejects_non_orthonormal_input() {
        let g = MetricMatrix::<f64>::identity(3);
        let err = orthonormal_complement(&[vec![2.0, 0.0, 0.0]], &g).unwrap_err();
        assert!(matches!(err, LinalgError::NotOrthonormal { .. }));
    }

    #[test]
    fn spd_solves() {
        let id = MetricMatrix::<f64>::identity(3);
        assert_eq!(solve_spd(&id, &[1.0, -2.0, 3.0]).unwrap(), vec![1.0, -2.0, 3.0]);
        let d = MetricMatrix::new(Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]])).unwrap();
        assert!(close(&solve_spd(&d, &[2.0, 4.0]).unwrap(), &[1.0, 1.0], 1e-15));
        let a = MetricMatrix::new(Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]])).unwrap();
        let x = solve_spd(&a, &[3.0, 3.0]).unwrap();
        assert!(close(&x, &[1.0, 1.0], 1e-15));
    }

    #[test]
    fn metric_validation() {
        let err = MetricMatrix::new(Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]])).unwrap_err();
        assert!(matches!(err, LinalgError::NotPositiveDefinite { pivot: 1, .. }));
        let err = MetricMatrix::new(Mat::from_rows(&[vec![1.0, 0.1], vec![0.0, 1.0]])).unwrap_err();
        assert!(matches!(err, LinalgError::NotSymmetric { .. }));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = MetricMatrix::new(Mat::from_rows(&[vec![2.0_f64, 1.0], vec![1.0, 2.0]])).unwrap();
        assert!((a.determinant() - 3.0).abs() < 1e-14);
        let inv = a.inverse();
        let prod = a.matrix().matmul(&inv);
        assert!(prod.sub(&Mat::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn jacobi_eigen() {
        let m = Mat::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ]);
        let (vals, vecs) = symmetric_eigen(&m);
        assert!(close(&vals, &[5.0, 3.0, 1.0], 1e-13));
        for (l, v) in vals.iter().zip(&vecs) {
            let mv = m.matvec(v);
            assert!(close(&mv, &scaled(*l, v), 1e-13));
        }
    }

    #[test]
    fn works_in_single_precision() {
        let g = MetricMatrix::<f32>::identity(2);
        let out = gram_schmidt(&[vec![3.0f32, 4.0], vec![0.0, 1.0]], &g).unwrap();
        assert!((out[0][0] - 0.6).abs() < 1e-6);
        assert!(orthonormality_residual(&out, &g) < 1e-6);
    }
}
