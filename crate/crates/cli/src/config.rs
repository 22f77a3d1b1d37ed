use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fixtree::excursion::BaseProfile;
use fixtree::fractal::DimensionConfig;
use fixtree::lamination::LaminationModel;
use fixtree::presets::Preset;
use fixtree::structural::{build_structural_tree, DecompositionSpec, ScalingLaw, StructuralTree};

/// Run configuration. Every table rejects unknown keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub preset: Option<String>,
    pub tree: Option<TreeConfig>,
    pub law: Option<ScalingLaw>,
    /// Mean height; defaults to the preset's constant, else 1.
    pub c: Option<f64>,
    /// Use this index instead of solving for it.
    pub alpha: Option<f64>,
    pub seed: u64,
    pub replicas: u64,
    pub jobs: Option<usize>,
    pub solver: SolverSection,
    pub excursion: ExcursionSection,
    pub dimension: DimensionConfig,
    pub timechange: TimeChangeSection,
    pub heights: HeightsSection,
    pub lamination: LaminationSection,
    pub chain: ChainSection,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            preset: None,
            tree: None,
            law: None,
            c: None,
            alpha: None,
            seed: 1,
            replicas: 20,
            jobs: None,
            solver: SolverSection::default(),
            excursion: ExcursionSection::default(),
            dimension: DimensionConfig::default(),
            timechange: TimeChangeSection::default(),
            heights: HeightsSection::default(),
            lamination: LaminationSection::default(),
            chain: ChainSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeConfig {
    /// `ϖ_2, …, ϖ_K`.
    pub parents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub tol: f64,
    /// Points of the `F(a)` curve on `(0, 1)`.
    pub curve_points: usize,
    /// Monte Carlo samples per curve point for laws without moments.
    pub curve_samples: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection { tol: 1e-12, curve_points: 49, curve_samples: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExcursionSection {
    pub depth: usize,
    pub m: usize,
    pub base: BaseProfile,
    /// Also write the binary dump here.
    pub dump: Option<PathBuf>,
}

impl Default for ExcursionSection {
    fn default() -> Self {
        ExcursionSection { depth: 10, m: 1 << 14, base: BaseProfile::Semicircle, dump: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeChangeSection {
    pub depth: usize,
    pub m: usize,
}

impl Default for TimeChangeSection {
    fn default() -> Self {
        TimeChangeSection { depth: 8, m: 1024 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeightsSection {
    pub samples: u64,
    /// Truncation depth of the perpetuity.
    pub depth: usize,
    pub grid_depth: usize,
    pub grid_m: usize,
}

impl Default for HeightsSection {
    fn default() -> Self {
        HeightsSection { samples: 2000, depth: 12, grid_depth: 12, grid_m: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaminationSection {
    pub model: LaminationModel,
    pub k: usize,
    pub first: u64,
    pub last: u64,
    pub per_decade: usize,
    pub n_eval: usize,
    pub fit_from: u64,
}

impl Default for LaminationSection {
    fn default() -> Self {
        LaminationSection {
            model: LaminationModel::Recursive,
            k: 2,
            first: 100,
            last: 100_000,
            per_decade: 4,
            n_eval: 2000,
            fit_from: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainSection {
    pub steps: usize,
}

impl Default for ChainSection {
    fn default() -> Self {
        ChainSection { steps: 10_000 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Model(#[from] fixtree::Error),
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::Field { path: "<document>".into(), message: e.message().into() })?;
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError::Field { path, message: inner.message().to_string() }
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn preset(&self) -> Result<Option<Preset>, ConfigError> {
        self.preset
            .as_deref()
            .map(|p| p.parse::<Preset>())
            .transpose()
            .map_err(|e| ConfigError::Field { path: "preset".into(), message: e.to_string() })
    }

    /// Explicit `tree` and `law` win over `preset`.
    pub fn spec(&self) -> Result<DecompositionSpec, ConfigError> {
        let preset = self.preset()?;
        match (&self.tree, &self.law, preset) {
            (Some(t), Some(l), _) => {
                let tree = build_structural_tree(&t.parents)
                    .map_err(|e| ConfigError::Field { path: "tree.parents".into(), message: e.to_string() })?;
                l.validate(tree.k()).map_err(|e| ConfigError::Field { path: "law".into(), message: e.to_string() })?;
                self.finish(tree, l.clone(), self.c.unwrap_or(1.0))
            }
            (None, None, Some(p)) => self.finish(p.tree(), p.law(), self.c.unwrap_or(p.mean_height())),
            (Some(_), None, _) => Err(ConfigError::Field { path: "law".into(), message: "missing; required with `tree`".into() }),
            (None, Some(_), _) => Err(ConfigError::Field { path: "tree".into(), message: "missing; required with `law`".into() }),
            (None, None, None) => {
                Err(ConfigError::Field { path: "preset".into(), message: "give a preset or both `tree` and `law`".into() })
            }
        }
    }

    fn finish(&self, tree: StructuralTree, law: ScalingLaw, c: f64) -> Result<DecompositionSpec, ConfigError> {
        Ok(match self.alpha {
            Some(a) => DecompositionSpec::with_alpha(tree, law, a, c)
                .map_err(|e| ConfigError::Field { path: "alpha".into(), message: e.to_string() })?,
            None => DecompositionSpec::new(tree, law, c)?,
        })
    }

    /// SHA-256 of the canonical JSON form, first 16 hex digits.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn hash_u64(&self) -> u64 {
        u64::from_str_radix(&self.hash(), 16).expect("hex digest")
    }
}
