//! Check orchestration over a sample set.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use kaehler_core::bochner::{bochner_residual, calibration_residual, cr_orthogonal_pair, identity_w33, symmetry_audit};
use kaehler_core::chen::{
    chen_lemma, chen_terms, coefficient_identity_residual, corollary_margin, equality_form, proof_audit, thm2_margin,
    Corollary, RicciSource, DEGENERATE_NOTE,
};
use kaehler_core::crwarp::{
    lemma2_check_at, split_distributions, split_report, thm3_margin, thm4_dichotomy_report, warping_check, SPLIT_TOL,
};
use kaehler_core::sampling::{ball_point, combination, seeded, SampleRng};
use kaehler_core::submanifold::{classify_at, gauss_residual, Class, CodazziDefect, Immersion, Plane, PointGeometry};
use kaehler_core::{AmbientSpace, CheckEntry, CheckReport};

use crate::catalog::{self, CheckInfo, Scope};
use crate::config::{RhoConvention, RunConfig, SampleMode};
use crate::error::{ConfigError, ConfigResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance used for the entries that must hold exactly up to roundoff.
const EXACT_TOL: f64 = 1e-12;

/// Settings that override the config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tol_scale: f64,
    pub jobs: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: None,
            tol_scale: 1.0,
            jobs: None,
        }
    }
}

/// One check evaluated at one point (or once, for sample-level checks).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_index: Option<usize>,
    #[serde(default)]
    pub point: Vec<f64>,
    pub inputs_digest: String,
    pub tolerance: f64,
    pub entries: Vec<CheckEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

impl Record {
    /// Largest `|value|` over residual entries.
    pub fn worst_residual(&self) -> f64 {
        let rep = CheckReport {
            name: self.check.clone(),
            entries: self.entries.clone(),
            notes: Vec::new(),
        };
        rep.worst_residual()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Worst residual per check name.
    pub worst_residual: BTreeMap<String, f64>,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        let mut worst = BTreeMap::new();
        for r in records {
            let w = worst.entry(r.check.clone()).or_insert(0.0f64);
            *w = w.max(r.worst_residual());
        }
        Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            worst_residual: worst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    /// Wall-clock time of the run; the only nondeterministic field.
    pub generated_at: String,
    pub seed: u64,
    pub tol_scale: f64,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.failed != 0)
    }
}

/// Shared, read-only state for one run.
struct Ctx {
    cfg: RunConfig,
    ambient: AmbientSpace,
    immersion: Option<Immersion>,
    points: Vec<Vec<f64>>,
    seed: u64,
    tol_scale: f64,
    class: Option<std::result::Result<Class, String>>,
}

/// Deterministic sub-seed from the run seed and a label.
fn derive_seed(seed: u64, label: &str, index: Option<usize>) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.map_or(u64::MAX, |i| i as u64).to_le_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("digest has 32 bytes"))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run_config(cfg: &RunConfig, opts: RunOptions) -> ConfigResult<RunReport> {
    cfg.validate()?;
    if !(opts.tol_scale > 0.0 && opts.tol_scale.is_finite()) {
        return Err(ConfigError::Invalid(format!("tolerance scale must be positive, got {}", opts.tol_scale)));
    }
    let seed = opts.seed.or(cfg.sample.seed).unwrap_or(0);
    let ambient = cfg.ambient_space()?;
    let immersion = match &cfg.immersion {
        Some(sec) => Some(Immersion::from_spec(&ambient, &sec.spec()?)?),
        None => None,
    };
    let points = sample_points(cfg, &ambient, immersion.as_ref(), seed)?;
    let mut ctx = Ctx {
        cfg: cfg.clone(),
        ambient,
        immersion,
        points,
        seed,
        tol_scale: opts.tol_scale,
        class: None,
    };
    if cfg.checks.names.iter().any(|n| n == "chen.thm2" || n.starts_with("chen.cor")) {
        ctx.class = Some(sample_class(&ctx));
    }

    let mut jobs: Vec<(&'static CheckInfo, Option<usize>)> = Vec::new();
    let mut names: Vec<&String> = cfg.checks.names.iter().collect();
    names.sort();
    names.dedup();
    for name in names {
        let info = catalog::lookup(name).ok_or_else(|| ConfigError::UnknownCheck(name.clone()))?;
        match info.scope {
            Scope::Ambient | Scope::Point => jobs.extend((0..ctx.points.len()).map(|i| (info, Some(i)))),
            Scope::AmbientOnce | Scope::Sample | Scope::Standalone => jobs.push((info, None)),
        }
    }

    let work = || jobs.par_iter().map(|&(info, idx)| evaluate(&ctx, info, idx)).collect::<Vec<_>>();
    let mut records = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| ConfigError::Invalid(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    records.sort_by(|a, b| (&a.check, a.point_index).cmp(&(&b.check, b.point_index)));
    let summary = Summary::of(&records);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        generated_at: timestamp(),
        seed,
        tol_scale: opts.tol_scale,
        config: cfg.clone(),
        records,
        summary,
    })
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    format!("unix:{secs}")
}

fn sample_points(cfg: &RunConfig, a: &AmbientSpace, s: Option<&Immersion>, seed: u64) -> ConfigResult<Vec<Vec<f64>>> {
    let mut rng = seeded(derive_seed(seed, "sample", None));
    match (cfg.sample.mode, s) {
        (SampleMode::Grid, Some(s)) => {
            if cfg.sample.grid.len() != s.dim() {
                return Err(ConfigError::Invalid(format!(
                    "sample.grid has {} entries, the chart has {} variables",
                    cfg.sample.grid.len(),
                    s.dim()
                )));
            }
            Ok(s.grid(&cfg.sample.grid))
        }
        (SampleMode::Random, Some(s)) => Ok((0..cfg.sample.count).map(|_| s.random_point(&mut rng)).collect()),
        (SampleMode::Random, None) => Ok((0..cfg.sample.count)
            .map(|_| ball_point(&mut rng, a.dim(), a.sampling_radius()))
            .collect()),
        (SampleMode::Grid, None) => Err(ConfigError::Invalid("grid sampling needs an [immersion] chart".into())),
    }
}

fn sample_class(ctx: &Ctx) -> std::result::Result<Class, String> {
    let s = ctx.immersion.as_ref().ok_or("no immersion")?;
    let geoms = ctx
        .points
        .iter()
        .map(|u| PointGeometry::at(s, u))
        .collect::<kaehler_core::Result<Vec<_>>>()
        .map_err(|e| format!("classification failed: {e}"))?;
    let mut rng = seeded(derive_seed(ctx.seed, "classify", None));
    Ok(classify_at(&geoms, 8, 1e-6, &mut rng).class)
}

fn tolerance(ctx: &Ctx, info: &CheckInfo) -> f64 {
    ctx.cfg.checks.tolerances.get(info.name).copied().unwrap_or(info.default_tol) * ctx.tol_scale
}

fn evaluate(ctx: &Ctx, info: &CheckInfo, idx: Option<usize>) -> Record {
    let tol = tolerance(ctx, info);
    let point = idx.map(|i| ctx.points[i].clone()).unwrap_or_default();
    let mut rng = seeded(derive_seed(ctx.seed, info.name, idx));
    let digest = {
        let mut h = Sha256::new();
        h.update(ctx.ambient.label().as_bytes());
        h.update(serde_json::to_vec(&ctx.cfg.immersion).unwrap_or_default());
        h.update(info.name.as_bytes());
        for x in &point {
            h.update(x.to_bits().to_le_bytes());
        }
        h.update(tol.to_bits().to_le_bytes());
        h.update(ctx.seed.to_le_bytes());
        hex(&h.finalize())
    };
    let outcome = dispatch(ctx, info, idx, tol, &mut rng);
    let (entries, notes, error) = match outcome {
        Ok(rep) => (rep.entries, rep.notes, None),
        Err(e) => (Vec::new(), Vec::new(), Some(e)),
    };
    let mut record = Record {
        check: info.name.to_string(),
        point_index: idx,
        point,
        inputs_digest: digest,
        tolerance: tol,
        entries,
        notes,
        error,
        pass: false,
    };
    sanitize(&mut record);
    record.pass = record.error.is_none() && record.entries.iter().all(|e| e.pass);
    record
}

/// JSON has no NaN or infinity; such values fail their entry.
fn sanitize(r: &mut Record) {
    for e in &mut r.entries {
        if !e.value.is_finite() {
            r.notes.push(format!("non-finite value {} for `{}`", e.value, e.label));
            e.value = 0.0;
            e.pass = false;
        }
    }
}

type Outcome = std::result::Result<CheckReport, String>;

fn dispatch(ctx: &Ctx, info: &CheckInfo, idx: Option<usize>, tol: f64, rng: &mut SampleRng) -> Outcome {
    let e = |err: kaehler_core::Error| err.to_string();
    match info.scope {
        Scope::Ambient => {
            let p = ambient_point(ctx, idx.expect("ambient checks run per point"))?;
            ambient_check(ctx, info.name, &p, tol, rng).map_err(e)
        }
        Scope::AmbientOnce => {
            let p = ambient_point(ctx, 0)?;
            let mut rep = CheckReport::new(info.name);
            let m = ctx.ambient.m();
            for d in 1..=2 * m {
                let r = calibration_residual(&ctx.ambient, &p, d).map_err(e)?;
                if d == m {
                    rep.residual(format!("d{d}"), r, tol);
                } else {
                    rep.value(format!("d{d}"), r);
                }
            }
            Ok(rep)
        }
        Scope::Point => {
            let s = ctx.immersion.as_ref().ok_or("no immersion")?;
            let u = &ctx.points[idx.expect("point checks run per point")];
            let geom = PointGeometry::at(s, u).map_err(e)?;
            point_check(ctx, info.name, s, &geom, tol, rng).map_err(e)
        }
        Scope::Sample => {
            let s = ctx.immersion.as_ref().ok_or("no immersion")?;
            match info.name {
                "crwarp.thm4_report" => thm4_dichotomy_report(s, &ctx.points).map_err(e),
                "submanifold.classify" => {
                    let geoms = ctx
                        .points
                        .iter()
                        .map(|u| PointGeometry::at(s, u))
                        .collect::<kaehler_core::Result<Vec<_>>>()
                        .map_err(e)?;
                    let c = classify_at(&geoms, 8, tol, rng);
                    let mut rep = CheckReport::new(info.name);
                    rep.value("theta_mean", c.theta_mean)
                        .value("theta_std", c.theta_std)
                        .value("max_tx", c.max_tx)
                        .value("max_fx", c.max_fx)
                        .value("samples", c.samples as f64);
                    if let Some(t) = c.class.slant_angle() {
                        rep.value("slant_angle", t);
                    }
                    for (i, v) in c.spectrum.iter().enumerate() {
                        rep.value(format!("spectrum.{i}"), *v);
                    }
                    rep.note(format!("class: {}", c.class));
                    Ok(rep)
                }
                other => Err(format!("no evaluator for `{other}`")),
            }
        }
        Scope::Standalone => lemma_instances(ctx.cfg.checks.lemma_instances, tol, rng),
    }
}

fn ambient_point(ctx: &Ctx, idx: usize) -> std::result::Result<Vec<f64>, String> {
    let u = ctx.points.get(idx).ok_or("the sample is empty")?;
    match &ctx.immersion {
        Some(s) => s.map(u).map_err(|e| e.to_string()),
        None => Ok(u.clone()),
    }
}

fn ambient_check(ctx: &Ctx, name: &str, p: &[f64], tol: f64, rng: &mut SampleRng) -> kaehler_core::Result<CheckReport> {
    let a = &ctx.ambient;
    let mut rep = CheckReport::new(name);
    match name {
        "ambient.kaehler" => {
            let r = a.kaehler_residuals(p)?;
            let exact = EXACT_TOL * ctx.tol_scale;
            rep.residual("j_squared", r.j_squared, exact)
                .residual("j_compatibility", r.j_compat, exact)
                .residual("nabla_j", r.nabla_j, tol)
                .residual("antisym_first_pair", r.antisym_first_pair, tol)
                .residual("antisym_second_pair", r.antisym_second_pair, tol)
                .residual("pair_swap", r.pair_swap, tol)
                .residual("first_bianchi", r.first_bianchi, tol)
                .residual("j_invariance_of_r", r.j_invariance_r, tol);
        }
        "bochner.residual" => {
            rep.residual("residual", bochner_residual(a, p)?, tol);
        }
        "bochner.symmetries" => rep = symmetry_audit(a, p, tol)?,
        "bochner.w33" => {
            let (x, z) = cr_orthogonal_pair(a, p, rng)?;
            let id = identity_w33(a, p, &x, &z)?;
            rep.residual("residual", id.residual, tol).value("lhs", id.lhs).value("rhs", id.rhs);
        }
        other => return Err(kaehler_core::Error::Unsupported(format!("no evaluator for `{other}`"))),
    }
    Ok(rep)
}

fn unit_tangent(geom: &PointGeometry<f64>, rng: &mut SampleRng) -> Vec<f64> {
    loop {
        let v = combination(rng, &geom.frame.tangent);
        let n = geom.ambient_metric.norm(&v);
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn point_check(
    ctx: &Ctx,
    name: &str,
    s: &Immersion,
    geom: &PointGeometry<f64>,
    tol: f64,
    rng: &mut SampleRng,
) -> kaehler_core::Result<CheckReport> {
    let [pa, pb] = ctx.cfg.checks.plane;
    let plane = Plane::Frame(pa, pb);
    let src = ctx.cfg.conventions.ric_term;
    let class = || -> kaehler_core::Result<Class> {
        match &ctx.class {
            Some(Ok(c)) => Ok(*c),
            Some(Err(msg)) => Err(kaehler_core::Error::Unsupported(msg.clone())),
            None => Err(kaehler_core::Error::Unsupported("class not computed".into())),
        }
    };
    let mut rep = CheckReport::new(name);
    match name {
        "submanifold.gauss" => {
            let mut worst = 0.0f64;
            for _ in 0..ctx.cfg.checks.tuples {
                let v: Vec<Vec<f64>> = (0..4).map(|_| unit_tangent(geom, rng)).collect();
                worst = worst.max(gauss_residual(geom, &v[0], &v[1], &v[2], &v[3])?);
            }
            rep.residual("residual", worst, tol).value("tuples", ctx.cfg.checks.tuples as f64);
        }
        "submanifold.codazzi" => {
            let defect = CodazziDefect::at(s, geom)?;
            let mut worst = 0.0f64;
            for _ in 0..ctx.cfg.checks.tuples {
                let v: Vec<Vec<f64>> = (0..3).map(|_| unit_tangent(geom, rng)).collect();
                worst = worst.max(defect.residual(geom, &v[0], &v[1], &v[2])?);
            }
            rep.residual("residual", worst, tol).value("triples", ctx.cfg.checks.tuples as f64);
        }
        "submanifold.invariants" => {
            let ext = &geom.extrinsic;
            let rho = match ctx.cfg.conventions.rho {
                RhoConvention::HalfTrace => geom.rho(),
                RhoConvention::Trace => 2.0 * geom.rho(),
            };
            let (x, y) = plane.orthonormal(geom)?;
            rep.value("h_norm", ext.h_norm)
                .value("omega_norm_sq", ext.omega_norm_sq)
                .value("t_norm_sq", ext.t_norm_sq)
                .value("rho", rho)
                .value("k_plane", geom.sectional(&x, &y)?)
                .residual("omega_asymmetry", ext.omega_asymmetry(), tol)
                .residual("t_antisymmetry", ext.t_antisymmetry(), tol)
                .residual("frame_orthonormality", geom.frame.orthonormality_residual(&geom.ambient_metric), tol);
        }
        "chen.thm1" => {
            let t = chen_terms(geom, &plane, src)?;
            rep.margin("margin", t.margin, tol)
                .value("k_pi", t.k_pi)
                .value("rho", t.rho)
                .value("h_norm_sq", t.h_norm_sq)
                .value("t_norm_sq", t.t_norm_sq)
                .value("coefficient", t.coefficient)
                .value("ric_term", t.ric_term())
                .residual(
                    "coefficient_identity",
                    coefficient_identity_residual(t.n, t.t_norm_sq),
                    EXACT_TOL * ctx.tol_scale,
                );
            if t.degenerate {
                rep.note(DEGENERATE_NOTE);
            }
        }
        "chen.thm2" => {
            let m = thm2_margin(geom, &plane, &class()?)?;
            rep.margin("printed", m.printed, tol)
                .value("substituted", m.substituted)
                .value("discrepancy", m.discrepancy)
                .value("theta", m.theta);
        }
        "chen.cor1" | "chen.cor2" | "chen.cor3" | "chen.cor4" => {
            let which = match name {
                "chen.cor1" => Corollary::Einstein,
                "chen.cor2" => Corollary::SlantEinstein,
                "chen.cor3" => Corollary::Invariant,
                _ => Corollary::AntiInvariant,
            };
            let c = corollary_margin(geom, &plane, which, &class()?, RicciSource::Ambient, 1e-6)?;
            rep.margin("margin", c.margin, tol);
            if let Some(l) = c.lambda {
                rep.value("lambda", l);
            }
            if let Some(r) = c.einstein_residual {
                rep.value("einstein_residual", r);
            }
            rep.note(format!("form: {}", which.name()));
        }
        "chen.proof_audit" => rep = proof_audit(geom, tol)?,
        "chen.equality_form" => {
            let f = equality_form(geom, tol)?;
            rep.value("alpha", f.alpha)
                .value("beta", f.beta)
                .value("xi", f.xi)
                .residual("sum_residual", f.sum_residual, tol);
            for (i, r) in f.residuals.iter().enumerate() {
                rep.residual(format!("pattern.{i}"), *r, tol);
            }
        }
        "crwarp.split" => rep = split_report(&split_distributions(geom, SPLIT_TOL)?, tol),
        "crwarp.w8" => rep = warping_check(s, geom, tol)?,
        "crwarp.lemma2" => rep = lemma2_check_at(s, &geom.u, tol)?,
        "crwarp.thm3" => {
            let m = thm3_margin(s, geom)?;
            rep.margin("margin", m.margin, tol)
                .value("omega_norm_sq", m.omega_norm_sq)
                .value("p_norm_sq", m.p_norm_sq)
                .value("q_grad_sq", m.q_grad_sq)
                .value("p_in_d_residual", m.p_in_d_residual);
        }
        other => return Err(kaehler_core::Error::Unsupported(format!("no evaluator for `{other}`"))),
    }
    Ok(rep)
}

/// Generated lemma instances: odd-numbered ones satisfy the equality
/// pattern, even-numbered ones are generic.
fn lemma_instances(count: usize, tol: f64, rng: &mut SampleRng) -> Outcome {
    let mut min_slack = f64::INFINITY;
    let (mut mismatches, mut eq_instances) = (0usize, 0usize);
    for k in 0..count {
        let n = rng.gen_range(2..=8usize);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        if k % 2 == 1 {
            let s = x[0] + x[1];
            x[2..].iter_mut().for_each(|v| *v = s);
        }
        let nf = n as f64;
        let sum: f64 = x.iter().sum();
        let b = sum * sum / (nf - 1.0) - x.iter().map(|v| v * v).sum::<f64>();
        let r = chen_lemma(&x, b).map_err(|e| e.to_string())?;
        min_slack = min_slack.min(r.slack);
        let pattern = x[2..].iter().all(|&v| (x[0] + x[1] - v).abs() <= 1e-6);
        eq_instances += usize::from(pattern);
        if pattern != (r.slack <= tol) {
            mismatches += 1;
        }
    }
    let mut rep = CheckReport::new("chen.lemma1");
    if count > 0 {
        rep.margin("min_slack", min_slack, tol);
    }
    rep.residual("equality_mismatches", mismatches as f64, 0.0)
        .value("instances", count as f64)
        .value("equality_instances", eq_instances as f64);
    Ok(rep)
}
