use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientKind, AmbientSpace};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::sampling::box_point;
use crate::scalar::{Dual, Real};

/// Warped-product metadata: which chart variables span the base and the
/// fiber, and the warping function as an expression in the base variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpMeta {
    pub base: Vec<usize>,
    pub fiber: Vec<usize>,
    pub warping: String,
}

/// How to build an immersion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImmersionSpec {
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Expressions {
        variables: Vec<String>,
        components: Vec<String>,
        lo: Vec<f64>,
        hi: Vec<f64>,
        #[serde(default)]
        warp: Option<WarpMeta>,
    },
}

/// One builtin fixture with its parameter schema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuiltinInfo {
    pub name: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub summary: &'static str,
}

pub const BUILTINS: &[BuiltinInfo] = &[
    BuiltinInfo {
        name: "SPH3",
        params: &[("r", 1.0)],
        summary: "round 3-sphere of radius r in C², chart (u,v,w), m = 2",
    },
    BuiltinInfo {
        name: "SLANT",
        params: &[("theta", 0.7)],
        summary: "plane spanned by (1,0,0,0) and (0,cos θ,sin θ,0), slant angle θ, m = 2",
    },
    BuiltinInfo {
        name: "LAGR2",
        params: &[],
        summary: "Lagrangian plane, SLANT with θ = π/2, m = 2",
    },
    BuiltinInfo {
        name: "CRW",
        params: &[],
        summary: "CR-warped product (z cos t, z sin t), z = u+iv, warping f = |z|, m = 2",
    },
    BuiltinInfo {
        name: "CRPROD",
        params: &[],
        summary: "CR product (u, v, 0, t) with constant warping f = 1, m = 2",
    },
    BuiltinInfo {
        name: "CLINE",
        params: &[],
        summary: "complex line z₁ = u+iv, other coordinates 0, any m",
    },
];

/// A parametrized submanifold `φ: U ⊂ ℝⁿ → chart of the ambient`.
#[derive(Debug, Clone, PartialEq)]
pub struct Immersion {
    ambient: AmbientSpace,
    name: String,
    variables: Vec<String>,
    sources: Vec<String>,
    components: Vec<Expr>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    warp: Option<(WarpMeta, Expr)>,
}

/// Value, first and second derivatives of `φ` at a chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    pub x: Vec<T>,
    /// `d1[i] = ∂ᵢφ`.
    pub d1: Vec<Vec<T>>,
    /// `d2[i][j] = ∂ᵢ∂ⱼφ`.
    pub d2: Vec<Vec<Vec<T>>>,
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

impl Immersion {
    pub fn from_spec(ambient: &AmbientSpace, spec: &ImmersionSpec) -> Result<Self> {
        match spec {
            ImmersionSpec::Builtin { name, params } => Self::builtin(ambient, name, params),
            ImmersionSpec::Expressions {
                variables,
                components,
                lo,
                hi,
                warp,
            } => {
                let mut imm = Self::from_expressions(ambient, variables, components, lo, hi)?;
                if let Some(w) = warp {
                    imm = imm.with_warp(w.clone())?;
                }
                Ok(imm)
            }
        }
    }

    pub fn from_expressions<V: AsRef<str>, C: AsRef<str>>(
        ambient: &AmbientSpace,
        variables: &[V],
        components: &[C],
        lo: &[f64],
        hi: &[f64],
    ) -> Result<Self> {
        if components.len() != ambient.dim() {
            return Err(Error::ComponentCount {
                expected: ambient.dim(),
                found: components.len(),
            });
        }
        let n = variables.len();
        if n == 0 || n >= ambient.dim() {
            return Err(Error::Unsupported(format!(
                "submanifold dimension {n} must lie in 1..{}",
                ambient.dim()
            )));
        }
        if lo.len() != n || hi.len() != n || lo.iter().zip(hi).any(|(a, b)| a > b) {
            return Err(Error::Unsupported("chart box must give lo ≤ hi for every variable".into()));
        }
        let variables: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
        let sources: Vec<String> = components.iter().map(|c| c.as_ref().to_string()).collect();
        let components = sources.iter().map(|s| parse(s)).collect::<std::result::Result<Vec<_>, _>>()?;
        for e in &components {
            if let Some(v) = e.variables().into_iter().find(|v| !variables.contains(v)) {
                return Err(Error::Unsupported(format!("component uses unknown variable `{v}`")));
            }
        }
        Ok(Immersion {
            ambient: *ambient,
            name: "expressions".into(),
            variables,
            sources,
            components,
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            warp: None,
        })
    }

    pub fn with_warp(mut self, meta: WarpMeta) -> Result<Self> {
        let n = self.dim();
        let all: Vec<usize> = meta.base.iter().chain(&meta.fiber).copied().collect();
        if all.iter().any(|&i| i >= n) {
            return Err(Error::Unsupported("warp metadata references a missing variable".into()));
        }
        let f = parse(&meta.warping)?;
        self.warp = Some((meta, f));
        Ok(self)
    }

    fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn builtin(ambient: &AmbientSpace, name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let info = BUILTINS
            .iter()
            .find(|b| b.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
        if let Some(k) = params.keys().find(|k| !info.params.iter().any(|(p, _)| p == k)) {
            return Err(Error::BuiltinMismatch {
                builtin: info.name.into(),
                requirement: format!("no parameter `{k}`"),
            });
        }
        let param = |key: &str| {
            params
                .get(key)
                .copied()
                .or_else(|| info.params.iter().find(|(p, _)| *p == key).map(|(_, d)| *d))
                .unwrap_or(f64::NAN)
        };
        let needs_m2 = || {
            if ambient.m() != 2 {
                Err(Error::BuiltinMismatch {
                    builtin: info.name.into(),
                    requirement: "an ambient of complex dimension 2".into(),
                })
            } else {
                Ok(())
            }
        };
        let imm = match info.name {
            "SPH3" => {
                needs_m2()?;
                let r = param("r");
                if !(r > 0.0) {
                    return Err(Error::BuiltinMismatch {
                        builtin: "SPH3".into(),
                        requirement: "radius r > 0".into(),
                    });
                }
                let r = num(r);
                let comps = [
                    format!("{r}*cos(u)*cos(v)*cos(w)"),
                    format!("{r}*cos(u)*cos(v)*sin(w)"),
                    format!("{r}*cos(u)*sin(v)"),
                    format!("{r}*sin(u)"),
                ];
                Self::from_expressions(ambient, &["u", "v", "w"], &comps, &[-1.0, -1.0, -3.0], &[1.0, 1.0, 3.0])?
            }
            "SLANT" | "LAGR2" => {
                needs_m2()?;
                let theta = if info.name == "LAGR2" { FRAC_PI_2 } else { param("theta") };
                let comps = if info.name == "LAGR2" {
                    ["u".to_string(), "0".into(), "v".into(), "0".into()]
                } else {
                    [
                        "u".to_string(),
                        format!("{}*v", num(theta.cos())),
                        format!("{}*v", num(theta.sin())),
                        "0".into(),
                    ]
                };
                Self::from_expressions(ambient, &["u", "v"], &comps, &[-1.0, -1.0], &[1.0, 1.0])?
            }
            "CRW" => {
                needs_m2()?;
                let comps = ["u*cos(t)", "v*cos(t)", "u*sin(t)", "v*sin(t)"];
                Self::from_expressions(ambient, &["u", "v", "t"], &comps, &[0.5, -1.5, 0.2], &[2.5, 1.5, 1.2])?.with_warp(
                    WarpMeta {
                        base: vec![0, 1],
                        fiber: vec![2],
                        warping: "sqrt(u^2+v^2)".into(),
                    },
                )?
            }
            "CRPROD" => {
                needs_m2()?;
                let comps = ["u", "v", "0", "t"];
                Self::from_expressions(ambient, &["u", "v", "t"], &comps, &[-1.0, -1.0, -1.0], &[1.0, 1.0, 1.0])?
                    .with_warp(WarpMeta {
                        base: vec![0, 1],
                        fiber: vec![2],
                        warping: "1".into(),
                    })?
            }
            "CLINE" => {
                let mut comps = vec!["u".to_string(), "v".to_string()];
                comps.resize(ambient.dim(), "0".to_string());
                let (lo, hi) = match ambient.kind() {
                    AmbientKind::ComplexHyperbolic => (-0.5, 0.5),
                    _ => (-1.0, 1.0),
                };
                Self::from_expressions(ambient, &["u", "v"], &comps, &[lo, lo], &[hi, hi])?
            }
            _ => unreachable!("builtin table and constructor are in sync"),
        };
        Ok(imm.named(info.name))
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Intrinsic dimension `n`.
    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn component_sources(&self) -> &[String] {
        &self.sources
    }

    pub fn chart_box(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    pub fn warp(&self) -> Option<&WarpMeta> {
        self.warp.as_ref().map(|(m, _)| m)
    }

    /// Uniform random point of the chart box.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        box_point(rng, &self.lo, &self.hi)
    }

    /// Tensor grid with `counts[i]` evenly spaced values per variable
    /// (endpoints included; a count of 1 takes the midpoint).
    pub fn grid(&self, counts: &[usize]) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|i| {
                let k = counts.get(i).copied().unwrap_or(1).max(1);
                let (a, b) = (self.lo[i], self.hi[i]);
                if k == 1 {
                    vec![0.5 * (a + b)]
                } else {
                    (0..k).map(|s| a + (b - a) * s as f64 / (k - 1) as f64).collect()
                }
            })
            .collect();
        let mut out = vec![Vec::new()];
        for axis in &axes {
            out = out
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    fn check_arity<T>(&self, u: &[T]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::Unsupported(format!(
                "chart point has {} coordinates, expected {}",
                u.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `φ(u)`.
    pub fn map<T: Real>(&self, u: &[T]) -> Result<Vec<T>> {
        self.check_arity(u)?;
        let x = self
            .components
            .iter()
            .map(|e| e.eval_slice(&self.variables, u))
            .collect::<std::result::Result<Vec<T>, _>>()?;
        self.ambient.check_point(&x)?;
        Ok(x)
    }

    /// Exact first and second derivatives via nested dual numbers.
    pub fn jet<T: Real>(&self, u: &[T]) -> Result<Jet<T>> {
        let x = self.map(u)?;
        let n = self.dim();
        let d = self.ambient.dim();
        let mut d1 = vec![vec![T::zero(); d]; n];
        let mut d2 = vec![vec![vec![T::zero(); d]; n]; n];
        for a in 0..n {
            for b in a..n {
                let args: Vec<Dual<Dual<T>>> = u
                    .iter()
                    .enumerate()
                    .map(|(v, &uv)| {
                        let inner = Dual::new(uv, if v == b { T::one() } else { T::zero() });
                        let outer = Dual::new(if v == a { T::one() } else { T::zero() }, T::zero());
                        Dual::new(inner, outer)
                    })
                    .collect();
                for (c, e) in self.components.iter().enumerate() {
                    let r: Dual<Dual<T>> = e.eval_slice(&self.variables, &args)?;
                    if a == b {
                        d1[a][c] = r.re.eps;
                    }
                    d2[a][b][c] = r.eps.eps;
                    d2[b][a][c] = r.eps.eps;
                }
            }
        }
        Ok(Jet { x, d1, d2 })
    }

    /// Warping function and its gradient in the chart variables.
    pub fn warping<T: Real>(&self, u: &[T]) -> Option<Result<(T, Vec<T>)>> {
        let (_, f) = self.warp.as_ref()?;
        Some((|| {
            self.check_arity(u)?;
            let value: T = f.eval_slice(&self.variables, u)?;
            let grad = (0..self.dim())
                .map(|k| {
                    let args: Vec<Dual<T>> = u
                        .iter()
                        .enumerate()
                        .map(|(v, &x)| if v == k { Dual::variable(x) } else { Dual::constant(x) })
                        .collect();
                    f.eval_slice(&self.variables, &args).map(|r: Dual<T>| r.eps)
                })
                .collect::<std::result::Result<Vec<T>, _>>()?;
            Ok((value, grad))
        })())
    }
}

/// Builds an immersion from a spec.
pub fn make_immersion(ambient: &AmbientSpace, spec: &ImmersionSpec) -> Result<Immersion> {
    Immersion::from_spec(ambient, spec)
}
