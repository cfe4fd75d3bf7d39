use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::baselines::{EtcConfig, SimplifiedConfig};
use crate::env::{self, generate_cs_instance, generate_hard_instance, generate_rcs_instance, Instance, NoiseModel, RowDistribution};
use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;
use crate::lattice_rcs::RcsConfig;

pub const ALGORITHMS: [&str; 5] = ["lattice", "lattice-rcs", "ucb", "etc", "simplified-lattice"];

fn standard_gaussian() -> RowDistribution {
    RowDistribution::Gaussian { mean: 0.0, std: 1.0 }
}

fn no_noise() -> NoiseModel {
    NoiseModel::none()
}

/// How the shared instance of an experiment is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    Cs {
        users: usize,
        arms: usize,
        clusters: usize,
        #[serde(default = "standard_gaussian")]
        rows: RowDistribution,
        #[serde(default = "no_noise")]
        noise: NoiseModel,
        seed: u64,
    },
    Rcs {
        users: usize,
        arms: usize,
        clusters: usize,
        nu: f64,
        #[serde(default = "standard_gaussian")]
        rows: RowDistribution,
        #[serde(default = "no_noise")]
        noise: NoiseModel,
        seed: u64,
    },
    Hard {
        users: usize,
        arms: usize,
        clusters: usize,
        epsilon: f64,
        optimal_arms: Vec<usize>,
        seed: u64,
    },
    /// An instance file in the plain-text format of [`crate::env::io`].
    File { path: PathBuf },
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance> {
        match self {
            InstanceSpec::Cs { users, arms, clusters, rows, noise, seed } => {
                Ok(generate_cs_instance(*users, *arms, *clusters, *rows, *seed)?.with_noise(*noise))
            }
            InstanceSpec::Rcs { users, arms, clusters, nu, rows, noise, seed } => {
                Ok(generate_rcs_instance(*users, *arms, *clusters, *nu, *rows, *seed)?.with_noise(*noise))
            }
            InstanceSpec::Hard { users, arms, clusters, epsilon, optimal_arms, seed } => {
                generate_hard_instance(*users, *arms, *clusters, *epsilon, optimal_arms, *seed)
            }
            InstanceSpec::File { path } => {
                let file = std::fs::File::open(path)?;
                env::io::read_instance(std::io::BufReader::new(file))
            }
        }
    }

    /// Seed used for diagnostics of the instance.
    pub fn seed(&self) -> u64 {
        match self {
            InstanceSpec::Cs { seed, .. } | InstanceSpec::Rcs { seed, .. } | InstanceSpec::Hard { seed, .. } => *seed,
            InstanceSpec::File { .. } => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UcbConfig {
    pub sigma: f64,
}

impl Default for UcbConfig {
    fn default() -> Self {
        UcbConfig { sigma: 1.0 }
    }
}

/// A registered algorithm with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Lattice(LatticeConfig),
    LatticeRcs(RcsConfig),
    Ucb(UcbConfig),
    Etc(EtcConfig),
    SimplifiedLattice(SimplifiedConfig),
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Lattice(_) => "lattice",
            Algorithm::LatticeRcs(_) => "lattice-rcs",
            Algorithm::Ucb(_) => "ucb",
            Algorithm::Etc(_) => "etc",
            Algorithm::SimplifiedLattice(_) => "simplified-lattice",
        }
    }

    fn params(&self) -> Result<toml::Table> {
        let value = match self {
            Algorithm::Lattice(c) => toml::Table::try_from(c),
            Algorithm::LatticeRcs(c) => toml::Table::try_from(c),
            Algorithm::Ucb(c) => toml::Table::try_from(c),
            Algorithm::Etc(c) => toml::Table::try_from(c),
            Algorithm::SimplifiedLattice(c) => toml::Table::try_from(c),
        };
        value.map_err(|e| Error::config("params", e.to_string()))
    }

    pub fn validate(&self, horizon: u64) -> Result<()> {
        match self {
            Algorithm::Lattice(c) => c.validate(),
            Algorithm::LatticeRcs(c) => c.validate(),
            Algorithm::Ucb(c) if !(c.sigma >= 0.0) => Err(Error::config("sigma", "must be nonnegative")),
            Algorithm::Ucb(_) => Ok(()),
            Algorithm::Etc(c) if !(c.explore_fraction > 0.0 && c.explore_fraction < 1.0) => {
                Err(Error::config("explore_fraction", "must lie in (0, 1)"))
            }
            Algorithm::Etc(c) if c.clusters == 0 => Err(Error::config("clusters", "must be at least 1")),
            Algorithm::Etc(_) => Ok(()),
            Algorithm::SimplifiedLattice(c) => c.validate(horizon),
        }
    }
}

/// One entry of the algorithm list. Parameters stay an untyped table until
/// [`AlgorithmEntry::algorithm`] resolves them against the registry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmEntry {
    pub name: String,
    /// Name used in reports; defaults to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub params: toml::Table,
}

fn typed<T: DeserializeOwned>(params: &toml::Table) -> Result<T> {
    T::deserialize(toml::Value::Table(params.clone())).map_err(|e| Error::config("params", e.message().to_string()))
}

impl AlgorithmEntry {
    pub fn new(algorithm: &Algorithm) -> Self {
        AlgorithmEntry {
            name: algorithm.name().to_string(),
            label: None,
            params: algorithm.params().expect("algorithm configs serialize"),
        }
    }

    pub fn labelled(algorithm: &Algorithm, label: impl Into<String>) -> Self {
        AlgorithmEntry {
            label: Some(label.into()),
            ..Self::new(algorithm)
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }

    pub fn algorithm(&self) -> Result<Algorithm> {
        Ok(match self.name.as_str() {
            "lattice" => Algorithm::Lattice(typed(&self.params)?),
            "lattice-rcs" => Algorithm::LatticeRcs(typed(&self.params)?),
            "ucb" => Algorithm::Ucb(typed(&self.params)?),
            "etc" => Algorithm::Etc(typed(&self.params)?),
            "simplified-lattice" => Algorithm::SimplifiedLattice(typed(&self.params)?),
            other => return Err(Error::UnknownAlgorithm(other.to_string())),
        })
    }
}

/// Horizons of a regret-scaling study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub horizons: Vec<u64>,
}

fn default_name() -> String {
    "experiment".to_string()
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn default_checkpoints() -> usize {
    100
}

/// A complete experiment, read from and written to TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub horizon: u64,
    /// Interaction seeds; one run per (algorithm, seed).
    pub seeds: Vec<u64>,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    /// Write an assumption report next to the results.
    #[serde(default)]
    pub check: bool,
    /// Write every round to regret.csv instead of the checkpoints only.
    #[serde(default)]
    pub full_history: bool,
    /// Number of log-spaced checkpoints (the horizon is always added).
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    pub instance: InstanceSpec,
    pub algorithms: Vec<AlgorithmEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingSpec>,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSpec, algorithms: &[Algorithm], horizon: u64, seeds: Vec<u64>) -> Self {
        ExperimentConfig {
            name: default_name(),
            horizon,
            seeds,
            out_dir: default_out(),
            check: false,
            full_history: false,
            checkpoints: default_checkpoints(),
            instance,
            algorithms: algorithms.iter().map(AlgorithmEntry::new).collect(),
            scaling: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start.min(text.len())].lines().count().max(1));
            Error::parse(line, e.message().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("experiment config serializes")
    }

    /// Checks every field and resolves every algorithm. Errors name the
    /// offending field, e.g. `algorithms[1].params.rho`.
    pub fn validate(&self) -> Result<Vec<Algorithm>> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "at least one seed is required"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "at least one algorithm is required"));
        }
        if let Some(s) = &self.scaling {
            if s.horizons.is_empty() || s.horizons.contains(&0) {
                return Err(Error::config("scaling.horizons", "need at least one positive horizon"));
            }
        }
        let mut labels = Vec::new();
        let mut out = Vec::new();
        for (i, entry) in self.algorithms.iter().enumerate() {
            let scoped = |e: Error| match e {
                Error::InvalidConfig { field, message } => {
                    Error::config(format!("algorithms[{i}].{}", prefixed(&field)), message)
                }
                other => other,
            };
            let alg = entry.algorithm().map_err(scoped)?;
            alg.validate(self.horizon).map_err(scoped)?;
            let label = entry.label();
            if label.is_empty() || label.contains([',', '"', '\n']) {
                return Err(Error::config(format!("algorithms[{i}].label"), "must be nonempty without commas or quotes"));
            }
            if labels.contains(&label) {
                return Err(Error::config(format!("algorithms[{i}].label"), format!("duplicate label `{label}`")));
            }
            labels.push(label);
            out.push(alg);
        }
        Ok(out)
    }
}

fn prefixed(field: &str) -> String {
    if field == "params" {
        field.to_string()
    } else {
        format!("params.{field}")
    }
}
