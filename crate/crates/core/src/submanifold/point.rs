use crate::ambient::{levi_civita, AmbientSpace, CurvatureData};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensorlab::{gram_schmidt, orthonormal_complement, orthonormality_residual, Christoffel, Mat, MetricMatrix};

use super::immersion::{Immersion, Jet};

/// Orthonormal tangent frame `e₁..eₙ` and normal frame `eₙ₊₁..e₂ₘ`, as
/// ambient coordinate vectors at `φ(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame<T> {
    pub point: Vec<T>,
    pub tangent: Vec<Vec<T>>,
    pub normal: Vec<Vec<T>>,
    /// `eₐ = Σⱼ coeffs[a][j] ∂ⱼφ`.
    pub coeffs: Mat<T>,
}

impl<T: Real> AdaptedFrame<T> {
    /// Tangent and normal vectors in one list.
    pub fn full(&self) -> Vec<Vec<T>> {
        self.tangent.iter().chain(&self.normal).cloned().collect()
    }

    pub fn orthonormality_residual(&self, g: &MetricMatrix<T>) -> T {
        orthonormality_residual(&self.full(), g)
    }

    /// Tangent frame mixed by an orthogonal `n×n` matrix: `e'ₐ = Σ_b q[a][b] e_b`.
    pub fn rotated(&self, q: &Mat<T>) -> Self {
        let n = self.tangent.len();
        let dim = self.point.len();
        let tangent = (0..n)
            .map(|a| {
                (0..dim)
                    .map(|c| (0..n).map(|b| q[(a, b)] * self.tangent[b][c]).sum())
                    .collect()
            })
            .collect();
        AdaptedFrame {
            point: self.point.clone(),
            tangent,
            normal: self.normal.clone(),
            coeffs: q.matmul(&self.coeffs),
        }
    }
}

/// Second fundamental form and the tangential/normal split of `J` in a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrinsicData<T> {
    /// `omega[r][(a,b)] = g(ω(eₐ,e_b), e_{n+r})`; also the shape operator of
    /// the `r`-th normal in the tangent frame.
    pub omega: Vec<Mat<T>>,
    /// `ω(eₐ,e_b)` as ambient vectors.
    pub omega_vectors: Vec<Vec<Vec<T>>>,
    pub mean_curvature: Vec<T>,
    pub h_norm: T,
    pub h_norm_sq: T,
    pub omega_norm_sq: T,
    /// `t_matrix[(a,b)] = g(Jeₐ, e_b)`.
    pub t_matrix: Mat<T>,
    pub t_norm_sq: T,
    /// Normal parts `Feₐ`.
    pub f_vectors: Vec<Vec<T>>,
}

impl<T: Real> ExtrinsicData<T> {
    pub fn shape_operator(&self, r: usize) -> &Mat<T> {
        &self.omega[r]
    }

    pub fn omega_asymmetry(&self) -> T {
        self.omega.iter().fold(T::zero(), |m, b| m.max(b.asymmetry()))
    }

    /// `max |T + Tᵀ|`.
    pub fn t_antisymmetry(&self) -> T {
        let t = &self.t_matrix;
        let n = t.rows();
        Mat::from_fn(n, n, |a, b| t[(a, b)] + t[(b, a)]).max_abs()
    }
}

/// Everything computed at one chart point of an immersion.
#[derive(Debug, Clone)]
pub struct PointGeometry<T> {
    pub ambient: AmbientSpace,
    pub u: Vec<T>,
    pub jet: Jet<T>,
    pub ambient_metric: MetricMatrix<T>,
    pub ambient_gamma: Christoffel<T>,
    pub ambient_curvature: CurvatureData<T>,
    pub j: Mat<T>,
    pub induced: MetricMatrix<T>,
    pub induced_derivatives: Vec<Mat<T>>,
    pub gamma: Christoffel<T>,
    pub curvature: CurvatureData<T>,
    /// `P⊥ = I − Φ g⁻¹ Φᵀ G`, acting on ambient coordinate vectors.
    pub normal_projector: Mat<T>,
    /// Coordinate second fundamental form `ω(∂ᵢ,∂ⱼ)`.
    pub omega_coord: Vec<Vec<Vec<T>>>,
    pub frame: AdaptedFrame<T>,
    pub extrinsic: ExtrinsicData<T>,
}

/// Ambient metric, induced metric, and derivatives of the induced metric.
type MetricJet<T> = (MetricMatrix<T>, MetricMatrix<T>, Vec<Mat<T>>);

/// Induced metric and its first derivatives from a jet.
fn metric_jet<T: Real>(s: &Immersion, jet: &Jet<T>) -> Result<MetricJet<T>> {
    let a = s.ambient();
    let g = a.metric_at(&jet.x)?;
    let dg_amb = a.metric_derivatives(&jet.x)?;
    let n = jet.d1.len();
    let raw = Mat::from_fn(n, n, |i, j| g.inner(&jet.d1[i], &jet.d1[j]));
    let induced = MetricMatrix::new(raw).map_err(|_| Error::RankDeficient {
        point: jet.x.iter().map(|v| v.as_f64()).collect(),
    })?;
    let dgs = (0..n)
        .map(|k| {
            Mat::from_fn(n, n, |i, j| {
                let mut v = g.inner(&jet.d2[k][i], &jet.d1[j]) + g.inner(&jet.d1[i], &jet.d2[k][j]);
                for (l, dgl) in dg_amb.iter().enumerate() {
                    let c = jet.d1[k][l];
                    if c != T::zero() {
                        v += c * dgl.bilinear(&jet.d1[i], &jet.d1[j]);
                    }
                }
                v
            })
        })
        .collect();
    Ok((g, induced, dgs))
}

/// Rank check: smallest/largest singular value of the Jacobian (in the
/// ambient metric) must exceed `1e-8`.
fn check_rank<T: Real>(u: &[T], induced: &MetricMatrix<T>) -> Result<()> {
    let (vals, _) = crate::tensorlab::symmetric_eigen(induced.matrix());
    let max = vals.first().copied().unwrap_or(T::zero());
    let min = vals.last().copied().unwrap_or(T::zero());
    if !(min > T::zero()) || (min / max).sqrt() < T::lit(1e-8) {
        return Err(Error::RankDeficient {
            point: u.iter().map(|v| v.as_f64()).collect(),
        });
    }
    Ok(())
}

/// Levi-Civita connection of the induced metric at `u`.
pub fn intrinsic_christoffel_at<T: Real>(s: &Immersion, u: &[T]) -> Result<Christoffel<T>> {
    let jet = s.jet(u)?;
    let (_, induced, dg) = metric_jet(s, &jet)?;
    Ok(levi_civita(&induced, &dg))
}

fn normal_projector<T: Real>(jet: &Jet<T>, g: &MetricMatrix<T>, induced: &MetricMatrix<T>) -> Mat<T> {
    let d = jet.x.len();
    let n = jet.d1.len();
    let ginv = induced.inverse();
    let gphi: Vec<Vec<T>> = jet.d1.iter().map(|v| g.matrix().matvec(v)).collect();
    Mat::from_fn(d, d, |p, q| {
        let mut s = if p == q { T::one() } else { T::zero() };
        for i in 0..n {
            for j in 0..n {
                s -= jet.d1[i][p] * ginv[(i, j)] * gphi[j][q];
            }
        }
        s
    })
}

fn coordinate_omega<T: Real>(jet: &Jet<T>, gamma: &Christoffel<T>, proj: &Mat<T>) -> Vec<Vec<Vec<T>>> {
    let n = jet.d1.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let corr = gamma.contract(&jet.d1[i], &jet.d1[j]);
                    let v: Vec<T> = jet.d2[i][j].iter().zip(&corr).map(|(&a, &b)| a + b).collect();
                    proj.matvec(&v)
                })
                .collect()
        })
        .collect()
}

/// Coordinate second fundamental form at `u` (frame independent).
pub fn coordinate_omega_at<T: Real>(s: &Immersion, u: &[T]) -> Result<Vec<Vec<Vec<T>>>> {
    let jet = s.jet(u)?;
    let (g, induced, _) = metric_jet(s, &jet)?;
    let gamma = s.ambient().christoffel_at(&jet.x)?;
    let proj = normal_projector(&jet, &g, &induced);
    Ok(coordinate_omega(&jet, &gamma, &proj))
}

fn deterministic_sign<T: Real>(v: &mut [T]) {
    let tiny = T::lit(1e-9);
    if let Some(first) = v.iter().find(|x| x.abs() > tiny) {
        if *first < T::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

impl<T: Real> PointGeometry<T> {
    pub fn at(s: &Immersion, u: &[T]) -> Result<Self> {
        let jet = s.jet(u)?;
        let (g, induced, induced_derivatives) = metric_jet(s, &jet)?;
        check_rank(u, &induced)?;
        let a = s.ambient();
        let ambient_gamma = a.christoffel_at(&jet.x)?;
        let ambient_curvature = a.curvature_at(&jet.x)?;
        let j = a.complex_structure();
        let gamma = levi_civita(&induced, &induced_derivatives);
        let curvature = intrinsic_curvature(s, u, induced.clone(), &gamma)?;
        let normal_projector = normal_projector(&jet, &g, &induced);
        let omega_coord = coordinate_omega(&jet, &ambient_gamma, &normal_projector);
        let frame = build_frame(&jet, &g, &induced)?;
        let mut geom = PointGeometry {
            ambient: *a,
            u: u.to_vec(),
            jet,
            ambient_metric: g,
            ambient_gamma,
            ambient_curvature,
            j,
            induced,
            induced_derivatives,
            gamma,
            curvature,
            normal_projector,
            omega_coord,
            extrinsic: placeholder_extrinsic(),
            frame,
        };
        geom.extrinsic = geom.extrinsic_for(&geom.frame);
        Ok(geom)
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.jet.x.len()
    }

    pub fn g(&self, x: &[T], y: &[T]) -> T {
        self.ambient_metric.inner(x, y)
    }

    pub fn apply_j(&self, v: &[T]) -> Vec<T> {
        self.j.matvec(v)
    }

    /// Normal component of an ambient vector.
    pub fn normal_part(&self, v: &[T]) -> Vec<T> {
        self.normal_projector.matvec(v)
    }

    /// Tangential component of an ambient vector.
    pub fn tangent_part(&self, v: &[T]) -> Vec<T> {
        let p = self.normal_part(v);
        v.iter().zip(&p).map(|(&a, &b)| a - b).collect()
    }

    /// Chart components `c` of a tangent vector `v = Σ cⱼ ∂ⱼφ`.
    pub fn chart_components(&self, v: &[T]) -> Vec<T> {
        let rhs: Vec<T> = self.jet.d1.iter().map(|dj| self.g(v, dj)).collect();
        self.induced.solve(&rhs)
    }

    /// Ambient vector of chart components `c`.
    pub fn push_forward(&self, c: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.ambient_dim()];
        for (ci, di) in c.iter().zip(&self.jet.d1) {
            for (o, &x) in out.iter_mut().zip(di) {
                *o += *ci * x;
            }
        }
        out
    }

    /// `Err` unless `v` is tangent within `1e-8·max(1,|v|)`.
    pub fn require_tangent(&self, v: &[T]) -> Result<()> {
        let nrm = self.ambient_metric.norm(&self.normal_part(v));
        let scale = self.ambient_metric.norm(v).max(T::one());
        if nrm > T::lit(1e-8) * scale {
            return Err(Error::NotTangent { residual: nrm.as_f64() });
        }
        Ok(())
    }

    /// `ω(X,Y)` for tangent ambient vectors.
    pub fn omega(&self, x: &[T], y: &[T]) -> Vec<T> {
        let cx = self.chart_components(x);
        let cy = self.chart_components(y);
        self.omega_chart(&cx, &cy)
    }

    /// `ω` on chart components.
    pub fn omega_chart(&self, cx: &[T], cy: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.ambient_dim()];
        for (i, &a) in cx.iter().enumerate() {
            for (j, &b) in cy.iter().enumerate() {
                let w = a * b;
                if w == T::zero() {
                    continue;
                }
                for (o, &v) in out.iter_mut().zip(&self.omega_coord[i][j]) {
                    *o += w * v;
                }
            }
        }
        out
    }

    /// Intrinsic `R(X,Y,Z,W)` for tangent ambient vectors.
    pub fn intrinsic_r(&self, x: &[T], y: &[T], z: &[T], w: &[T]) -> T {
        self.curvature.r(
            &self.chart_components(x),
            &self.chart_components(y),
            &self.chart_components(z),
            &self.chart_components(w),
        )
    }

    /// Intrinsic sectional curvature of the plane spanned by tangent `x`, `y`.
    pub fn sectional(&self, x: &[T], y: &[T]) -> Result<T> {
        let (cx, cy) = (self.chart_components(x), self.chart_components(y));
        let g = &self.induced;
        let area = g.inner(&cx, &cx) * g.inner(&cy, &cy) - g.inner(&cx, &cy).powi(2);
        let scale = g.inner(&cx, &cx) * g.inner(&cy, &cy);
        if !(area > T::lit(1e-12) * scale) {
            return Err(Error::Precondition {
                what: "plane vectors must be independent".into(),
                measured: area.as_f64(),
            });
        }
        Ok(self.curvature.r(&cx, &cy, &cy, &cx) / area)
    }

    /// `Σ_{a<b} K(eₐ∧e_b)` over the adapted frame.
    pub fn rho(&self) -> T {
        self.rho_over(&self.frame.tangent)
    }

    /// `Σ_{a<b} K(vₐ∧v_b)` over orthonormal tangent vectors.
    pub fn rho_over(&self, vs: &[Vec<T>]) -> T {
        let mut s = T::zero();
        for a in 0..vs.len() {
            for b in (a + 1)..vs.len() {
                s += self.intrinsic_r(&vs[a], &vs[b], &vs[b], &vs[a]);
            }
        }
        s
    }

    /// Extrinsic data in an arbitrary orthonormal adapted frame.
    pub fn extrinsic_for(&self, frame: &AdaptedFrame<T>) -> ExtrinsicData<T> {
        let n = frame.tangent.len();
        let nn = frame.normal.len();
        let omega_vectors: Vec<Vec<Vec<T>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| self.omega_chart(frame.coeffs.row(a), frame.coeffs.row(b)))
                    .collect()
            })
            .collect();
        let omega: Vec<Mat<T>> = (0..nn)
            .map(|r| Mat::from_fn(n, n, |a, b| self.g(&omega_vectors[a][b], &frame.normal[r])))
            .collect();
        let mut mean = vec![T::zero(); self.ambient_dim()];
        for (a, row) in omega_vectors.iter().enumerate() {
            for (m, &v) in mean.iter_mut().zip(&row[a]) {
                *m += v;
            }
        }
        let inv_n = T::one() / T::lit(n as f64);
        mean.iter_mut().for_each(|m| *m *= inv_n);
        let h_norm_sq = self.g(&mean, &mean);
        let omega_norm_sq = omega.iter().map(|b| b.as_slice().iter().map(|&v| v * v).sum::<T>()).sum();
        let je: Vec<Vec<T>> = frame.tangent.iter().map(|e| self.apply_j(e)).collect();
        let t_matrix = Mat::from_fn(n, n, |a, b| self.g(&je[a], &frame.tangent[b]));
        let t_norm_sq = t_matrix.as_slice().iter().map(|&v| v * v).sum();
        let f_vectors = (0..n)
            .map(|a| {
                let mut f = je[a].clone();
                for b in 0..n {
                    let c = t_matrix[(a, b)];
                    for (fi, &e) in f.iter_mut().zip(&frame.tangent[b]) {
                        *fi -= c * e;
                    }
                }
                f
            })
            .collect();
        ExtrinsicData {
            omega,
            omega_vectors,
            mean_curvature: mean,
            h_norm: h_norm_sq.max(T::zero()).sqrt(),
            h_norm_sq,
            omega_norm_sq,
            t_matrix,
            t_norm_sq,
            f_vectors,
        }
    }

    /// `(∇̄_X J)Y = Γ̄(X,JY) − JΓ̄(X,Y)` for a constant chart `J`.
    pub fn nabla_j(&self, x: &[T], y: &[T]) -> Vec<T> {
        let jy = self.apply_j(y);
        let a = self.ambient_gamma.contract(x, &jy);
        let b = self.apply_j(&self.ambient_gamma.contract(x, y));
        a.iter().zip(&b).map(|(&p, &q)| p - q).collect()
    }

    /// Largest `|g(ω(eₐ,e_b),V) − g(B_V eₐ, e_b)|` over frame pairs and the
    /// normal frame, with `B_V X = −(∇̄_X V)ᵀ` computed from the derivative of
    /// the normal projector (extension `V(u') = P⊥(u')V`).
    pub fn weingarten_residual(&self) -> T {
        let n = self.n();
        let d = self.ambient_dim();
        let g = self.ambient_metric.matrix();
        let ginv = self.induced.inverse();
        // Φ g⁻¹ Φᵀ G = P_T;  ∂ₖP_T by the product rule.
        let phi = Mat::from_fn(d, n, |p, i| self.jet.d1[i][p]);
        let dphi = |k: usize| Mat::from_fn(d, n, |p, i| self.jet.d2[k][i][p]);
        let dg_amb = self.ambient_metric_derivatives();
        let mut worst = T::zero();
        for k in 0..n {
            let dgk = {
                let mut m = Mat::zeros(d, d);
                for (l, dgl) in dg_amb.iter().enumerate() {
                    let c = self.jet.d1[k][l];
                    for p in 0..d {
                        for q in 0..d {
                            m[(p, q)] += c * dgl[(p, q)];
                        }
                    }
                }
                m
            };
            let dginv = ginv.matmul(&self.induced_derivatives[k]).matmul(&ginv).scale(-T::one());
            let dk = dphi(k);
            let t1 = dk.matmul(&ginv).matmul(&phi.transpose()).matmul(g);
            let t2 = phi.matmul(&dginv).matmul(&phi.transpose()).matmul(g);
            let t3 = phi.matmul(&ginv).matmul(&dk.transpose()).matmul(g);
            let t4 = phi.matmul(&ginv).matmul(&phi.transpose()).matmul(&dgk);
            let dpt = Mat::from_fn(d, d, |p, q| t1[(p, q)] + t2[(p, q)] + t3[(p, q)] + t4[(p, q)]);
            for v in &self.frame.normal {
                // ∂ₖ(P⊥V) = −(∂ₖP_T)V
                let dv: Vec<T> = dpt.matvec(v).into_iter().map(|x| -x).collect();
                let corr = self.ambient_gamma.contract(&self.jet.d1[k], v);
                let nabla: Vec<T> = dv.iter().zip(&corr).map(|(&a, &b)| a + b).collect();
                let bv: Vec<T> = self.tangent_part(&nabla).into_iter().map(|x| -x).collect();
                for i in 0..n {
                    let lhs = self.g(&self.omega_coord[i][k], v);
                    let rhs = self.g(&bv, &self.jet.d1[i]);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }

    fn ambient_metric_derivatives(&self) -> Vec<Mat<T>> {
        // Rebuilt from Γ̄: ∂ₗg_pq = g_rq Γ̄ʳ_lp + g_pr Γ̄ʳ_lq.
        let d = self.ambient_dim();
        let g = self.ambient_metric.matrix();
        (0..d)
            .map(|l| {
                Mat::from_fn(d, d, |p, q| {
                    let mut s = T::zero();
                    for r in 0..d {
                        s += g[(r, q)] * self.ambient_gamma.get(r, l, p) + g[(p, r)] * self.ambient_gamma.get(r, l, q);
                    }
                    s
                })
            })
            .collect()
    }
}

fn placeholder_extrinsic<T: Real>() -> ExtrinsicData<T> {
    ExtrinsicData {
        omega: Vec::new(),
        omega_vectors: Vec::new(),
        mean_curvature: Vec::new(),
        h_norm: T::zero(),
        h_norm_sq: T::zero(),
        omega_norm_sq: T::zero(),
        t_matrix: Mat::zeros(0, 0),
        t_norm_sq: T::zero(),
        f_vectors: Vec::new(),
    }
}

fn build_frame<T: Real>(jet: &Jet<T>, g: &MetricMatrix<T>, induced: &MetricMatrix<T>) -> Result<AdaptedFrame<T>> {
    let n = jet.d1.len();
    let tangent = gram_schmidt(&jet.d1, g)?;
    let mut normal = orthonormal_complement(&tangent, g)?;
    normal.iter_mut().for_each(|v| deterministic_sign(v));
    let rows: Vec<Vec<T>> = tangent
        .iter()
        .map(|e| {
            let rhs: Vec<T> = jet.d1.iter().map(|dj| g.inner(e, dj)).collect();
            induced.solve(&rhs)
        })
        .collect();
    let coeffs = Mat::from_fn(n, n, |a, j| rows[a][j]);
    Ok(AdaptedFrame {
        point: jet.x.clone(),
        tangent,
        normal,
        coeffs,
    })
}

/// Intrinsic curvature at `u` from central differences of the analytic
/// intrinsic Christoffel symbols.
fn intrinsic_curvature<T: Real>(
    s: &Immersion,
    u: &[T],
    induced: MetricMatrix<T>,
    gamma: &Christoffel<T>,
) -> Result<CurvatureData<T>> {
    let n = u.len();
    let mut dgamma = Vec::with_capacity(n);
    for i in 0..n {
        let h = T::fd_step(u[i]);
        let mut plus = u.to_vec();
        let mut minus = u.to_vec();
        plus[i] += h;
        minus[i] -= h;
        let gp = intrinsic_christoffel_at(s, &plus)?;
        let gm = intrinsic_christoffel_at(s, &minus)?;
        let mut out = Christoffel::zeros(n);
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    out.set(l, a, b, (gp.get(l, a, b) - gm.get(l, a, b)) / (h + h));
                }
            }
        }
        dgamma.push(out);
    }
    Ok(CurvatureData::assemble(induced, gamma, &dgamma))
}
