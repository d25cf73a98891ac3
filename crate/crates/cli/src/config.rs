//! Run configuration, read from TOML.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use kaehler_core::chen::RicciSource;
use kaehler_core::submanifold::{ImmersionSpec, WarpMeta};
use kaehler_core::{AmbientKind, AmbientSpace};

use crate::catalog::{self, Scope};
use crate::error::{ConfigError, ConfigResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ambient: AmbientSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub immersion: Option<ImmersionSection>,
    #[serde(default)]
    pub sample: SampleSection,
    #[serde(default)]
    pub checks: ChecksSection,
    #[serde(default)]
    pub conventions: Conventions,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSection {
    /// `flat`, `fubini_study` or `complex_hyperbolic`.
    pub kind: String,
    pub m: usize,
}

/// Either `builtin` (+ `params`) or an expression immersion.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImmersionSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lo: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warp: Option<WarpMeta>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    Grid,
    #[default]
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    #[serde(default)]
    pub mode: SampleMode,
    /// Points per chart variable in grid mode.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<usize>,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_count() -> usize {
    10
}

impl Default for SampleSection {
    fn default() -> Self {
        SampleSection {
            mode: SampleMode::Random,
            grid: Vec::new(),
            count: default_count(),
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksSection {
    #[serde(default)]
    pub names: Vec<String>,
    /// Per-check tolerance overrides.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Frame indices of the plane used by the Chen-type checks.
    #[serde(default = "default_plane")]
    pub plane: [usize; 2],
    /// Random tangent 4-tuples per point for the Gauss check.
    #[serde(default = "default_tuples")]
    pub tuples: usize,
    /// Generated instances for the quadratic lemma check.
    #[serde(default = "default_lemma_instances")]
    pub lemma_instances: usize,
}

fn default_plane() -> [usize; 2] {
    [0, 1]
}

fn default_tuples() -> usize {
    10
}

fn default_lemma_instances() -> usize {
    1000
}

impl Default for ChecksSection {
    fn default() -> Self {
        ChecksSection {
            names: Vec::new(),
            tolerances: BTreeMap::new(),
            plane: default_plane(),
            tuples: default_tuples(),
            lemma_instances: default_lemma_instances(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoConvention {
    /// `Σ_{i<j} K(eᵢ∧eⱼ)`.
    #[default]
    HalfTrace,
    /// Full trace of the Ricci tensor.
    Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conventions {
    #[serde(default)]
    pub ric_term: RicciSource,
    #[serde(default)]
    pub rho: RhoConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> ConfigResult<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> ConfigResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml(&text).map_err(|e| match e {
            ConfigError::Parse(msg) => ConfigError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> ConfigResult<()> {
        for name in self.checks.names.iter().chain(self.checks.tolerances.keys()) {
            if catalog::lookup(name).is_none() {
                return Err(ConfigError::UnknownCheck(name.clone()));
            }
        }
        for (name, &tol) in &self.checks.tolerances {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(ConfigError::Invalid(format!("tolerance for `{name}` must be positive, got {tol}")));
            }
        }
        self.ambient_space()?;
        if self.sample.mode == SampleMode::Random && self.sample.seed.is_none() {
            return Err(ConfigError::Invalid("sample.seed is required when sample.mode = \"random\"".into()));
        }
        let needs_chart = self
            .checks
            .names
            .iter()
            .any(|n| catalog::lookup(n).is_some_and(|c| matches!(c.scope, Scope::Point | Scope::Sample)));
        match &self.immersion {
            Some(imm) => {
                imm.spec()?;
            }
            None if needs_chart => {
                return Err(ConfigError::Invalid("the requested checks need an [immersion] section".into()));
            }
            None if self.sample.mode == SampleMode::Grid => {
                return Err(ConfigError::Invalid("grid sampling needs an [immersion] chart".into()));
            }
            None => {}
        }
        Ok(())
    }

    pub fn ambient_space(&self) -> ConfigResult<AmbientSpace> {
        let kind: AmbientKind = self.ambient.kind.parse().map_err(|e: kaehler_core::Error| ConfigError::Invalid(e.to_string()))?;
        AmbientSpace::new(kind, self.ambient.m).map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

impl ImmersionSection {
    pub fn spec(&self) -> ConfigResult<ImmersionSpec> {
        let has_expr = !self.components.is_empty() || !self.variables.is_empty();
        match (&self.builtin, has_expr) {
            (Some(name), false) => Ok(ImmersionSpec::Builtin {
                name: name.clone(),
                params: self.params.clone(),
            }),
            (None, true) => Ok(ImmersionSpec::Expressions {
                variables: self.variables.clone(),
                components: self.components.clone(),
                lo: self.lo.clone(),
                hi: self.hi.clone(),
                warp: self.warp.clone(),
            }),
            (Some(_), true) => Err(ConfigError::Invalid("immersion has both `builtin` and expression components".into())),
            (None, false) => Err(ConfigError::Invalid("immersion needs `builtin` or `variables` + `components`".into())),
        }
    }
}
