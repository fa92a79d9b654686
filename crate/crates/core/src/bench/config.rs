use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::avoidance::SearchMode;
use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::fpcore::PrimeField;

fn default_primes() -> Vec<u64> {
    vec![11, 101, 499]
}

fn default_instances() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_primes")]
    pub primes: Vec<u64>,
    /// Random instances per suite and prime in `verify`.
    #[serde(default = "default_instances")]
    pub instances: usize,
    /// Worker threads; all available cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            primes: default_primes(),
            instances: default_instances(),
            threads: None,
            output: None,
            experiments: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    /// Largest avoiding sets next to the catalog thresholds.
    AvoidCatalog {
        families: Vec<FamilyKind>,
        /// Exhaustive for `p <= 31`, randomized otherwise, when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<SearchMode>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        budget: Option<u64>,
    },
    ParitySweep {
        qs: Vec<u64>,
    },
    CollinearSweep {
        sizes: Vec<usize>,
        #[serde(default = "one")]
        instances: usize,
    },
    NonAveragingSweep {
        orders: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<SearchMode>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        budget: Option<u64>,
    },
    MixedEnergySweep {
        set_size: usize,
        x_size: usize,
        #[serde(default = "one")]
        instances: usize,
    },
    SpectrumEnergySweep {
        /// `|A| / p`.
        density: f64,
        epsilons: Vec<f64>,
        #[serde(default = "one")]
        instances: usize,
    },
}

fn one() -> usize {
    1
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::AvoidCatalog { .. } => "avoid-catalog",
            Experiment::ParitySweep { .. } => "parity-sweep",
            Experiment::CollinearSweep { .. } => "collinear-sweep",
            Experiment::NonAveragingSweep { .. } => "non-averaging-sweep",
            Experiment::MixedEnergySweep { .. } => "mixed-energy-sweep",
            Experiment::SpectrumEnergySweep { .. } => "spectrum-energy-sweep",
        }
    }
}

impl ExperimentConfig {
    /// Reads TOML or JSON, chosen by extension (TOML otherwise).
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::Config("prime list is empty".into()));
        }
        for &p in &self.primes {
            PrimeField::new(p).map_err(|_| Error::Config(format!("{p} is not an odd prime")))?;
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        for e in &self.experiments {
            if let Experiment::SpectrumEnergySweep { density, epsilons, .. } = e {
                if !(*density > 0.0 && *density <= 1.0) {
                    return Err(Error::Config(format!("density {density} outside (0, 1]")));
                }
                if let Some(eps) = epsilons.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
                    return Err(Error::Config(format!("epsilon {eps} outside (0, 1]")));
                }
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> Vec<PrimeField> {
        self.primes.iter().map(|&p| PrimeField::new(p).expect("validated")).collect()
    }
}
