//! Experiment configuration (JSON). The schema is described in
//! `docs/config.md`.

use std::fs;
use std::path::{Path, PathBuf};

use rehypo_core::cascade::{AttackMode, UniformVarModel};
use rehypo_core::rng::child_seed;
use rehypo_core::sweep::{SweepAxis, UniformModel};
use rehypo_core::topology::Topology;
use rehypo_core::varhoard::NormalShock;
use rehypo_core::{load_edge_list, BankParams, RehypoNetwork, VarConfig};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Single network, used by `solve` and `gen`.
    pub topology: Option<TopologyConfig>,
    /// Network families, used by `sweep` and `cascade`.
    #[serde(default)]
    pub families: Vec<TopologyConfig>,
    pub model: ModelConfig,
    pub shock: Option<ShockConfig>,
    #[serde(default)]
    pub density_grid: Vec<f64>,
    #[serde(default)]
    pub axis: AxisConfig,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    pub output: Option<PathBuf>,
}

fn default_samples() -> usize {
    100
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisConfig {
    #[default]
    Density,
    Parameter,
}

impl From<AxisConfig> for SweepAxis {
    fn from(a: AxisConfig) -> Self {
        match a {
            AxisConfig::Density => SweepAxis::Density,
            AxisConfig::Parameter => SweepAxis::Parameter,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologyConfig {
    KRegular {
        n: usize,
        k: Option<usize>,
    },
    Random {
        n: usize,
        p: Option<f64>,
    },
    CorePeriphery {
        n: usize,
        n_core: usize,
        p_core: Option<f64>,
        #[serde(default = "default_k_per")]
        k_per: usize,
    },
    EdgeList {
        path: PathBuf,
    },
}

fn default_k_per() -> usize {
    1
}

impl TopologyConfig {
    pub fn family(&self) -> Result<Topology, CliError> {
        Ok(match *self {
            TopologyConfig::KRegular { n, .. } => Topology::KRegular { n },
            TopologyConfig::Random { n, .. } => Topology::Random { n },
            TopologyConfig::CorePeriphery {
                n, n_core, k_per, ..
            } => Topology::CorePeriphery { n, n_core, k_per },
            TopologyConfig::EdgeList { .. } => {
                return Err(CliError::Config(
                    "an edge_list topology is a single network, not a family to sweep".into(),
                ))
            }
        })
    }

    /// The concrete network described by this entry.
    pub fn build(&self, seed: u64) -> Result<RehypoNetwork, CliError> {
        let missing = |what: &str| CliError::Config(format!("topology needs `{what}` here"));
        match self {
            TopologyConfig::EdgeList { path } => {
                load_edge_list(path).map_err(|e| CliError::Config(e.to_string()))
            }
            TopologyConfig::KRegular { k, .. } => {
                let k = k.ok_or_else(|| missing("k"))?;
                Ok(self.family()?.sample(k as f64, seed)?)
            }
            TopologyConfig::Random { p, .. } => {
                let p = p.ok_or_else(|| missing("p"))?;
                Ok(self.family()?.sample(p, seed)?)
            }
            TopologyConfig::CorePeriphery { p_core, .. } => {
                let p = p_core.ok_or_else(|| missing("p_core"))?;
                Ok(self.family()?.sample(p, seed)?)
            }
        }
    }
}

/// A per-bank quantity given once for all banks or bank by bank.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PerBank {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl PerBank {
    pub fn expand(&self, n: usize, name: &str) -> Result<Vec<f64>, CliError> {
        match self {
            PerBank::Scalar(v) => Ok(vec![*v; n]),
            PerBank::Vector(v) if v.len() == n => Ok(v.clone()),
            PerBank::Vector(v) => Err(CliError::Config(format!(
                "`{name}` has {} entries for {n} banks",
                v.len()
            ))),
        }
    }

    pub fn scalar(&self, name: &str) -> Result<f64, CliError> {
        match self {
            PerBank::Scalar(v) => Ok(*v),
            PerBank::Vector(_) => Err(CliError::Config(format!(
                "`{name}` must be a single number for sweeps"
            ))),
        }
    }
}

fn default_h() -> f64 {
    0.1
}

fn default_theta() -> PerBank {
    PerBank::Scalar(0.9)
}

fn default_a0() -> PerBank {
    PerBank::Scalar(100.0)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    FixedTheta {
        #[serde(default = "default_h")]
        h: f64,
        #[serde(default = "default_theta")]
        theta: PerBank,
        #[serde(default = "default_a0")]
        a0: PerBank,
    },
    Var {
        #[serde(default = "default_h")]
        h: f64,
        #[serde(default = "default_a0")]
        a0: PerBank,
        c0: Option<PerBank>,
        mu: Option<PerBank>,
        sigma: Option<PerBank>,
        c: Option<PerBank>,
    },
}

impl ModelConfig {
    pub fn bank_params(&self, n: usize) -> Result<BankParams, CliError> {
        match self {
            ModelConfig::FixedTheta { h, theta, a0 } => Ok(BankParams::new(
                a0.expand(n, "a0")?,
                theta.expand(n, "theta")?,
                *h,
            )?),
            ModelConfig::Var { .. } => Err(CliError::Config(
                "this command needs a fixed_theta model".into(),
            )),
        }
    }

    /// Proprietary collateral and VaR parameters for `n` banks.
    pub fn var_config(&self, n: usize) -> Result<(Vec<f64>, VarConfig), CliError> {
        let ModelConfig::Var {
            h,
            a0,
            c0,
            mu,
            sigma,
            c,
        } = self
        else {
            return Err(CliError::Config("this command needs a var model".into()));
        };
        let a0 = a0.expand(n, "a0")?;
        let cfg = match (c0, mu, sigma, c) {
            (Some(c0), None, None, None) => VarConfig::from_offsets(*h, c0.expand(n, "c0")?)?,
            (None, Some(mu), Some(sigma), Some(c)) => {
                let (mu, sigma, c) = (
                    mu.expand(n, "mu")?,
                    sigma.expand(n, "sigma")?,
                    c.expand(n, "c")?,
                );
                let shocks = (0..n)
                    .map(|i| NormalShock {
                        mu: mu[i],
                        sigma: sigma[i],
                        c: c[i],
                    })
                    .collect();
                VarConfig::from_normal(*h, shocks).map_err(|e| CliError::Config(e.to_string()))?
            }
            _ => {
                return Err(CliError::Config(
                    "var model needs either `c0` or all of `mu`, `sigma`, `c`".into(),
                ))
            }
        };
        Ok((a0, cfg))
    }

    pub fn uniform(&self) -> Result<UniformModel, CliError> {
        match self {
            ModelConfig::FixedTheta { h, theta, a0 } => Ok(UniformModel {
                a0: a0.scalar("a0")?,
                theta: theta.scalar("theta")?,
                h: *h,
            }),
            ModelConfig::Var { .. } => {
                Err(CliError::Config("sweep needs a fixed_theta model".into()))
            }
        }
    }

    pub fn uniform_var(&self) -> Result<UniformVarModel, CliError> {
        let ModelConfig::Var { h, a0, .. } = self else {
            return Err(CliError::Config("cascade needs a var model".into()));
        };
        let (_, cfg) = self.var_config(1)?;
        Ok(UniformVarModel {
            a0: a0.scalar("a0")?,
            h: *h,
            c0: cfg.offsets[0],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConfig {
    Random,
    Targeted,
}

fn default_fraction() -> f64 {
    0.2
}

fn default_magnitude() -> f64 {
    0.5
}

fn default_modes() -> Vec<ModeConfig> {
    vec![ModeConfig::Random, ModeConfig::Targeted]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockConfig {
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    #[serde(default = "default_magnitude")]
    pub magnitude: f64,
    #[serde(default = "default_modes")]
    pub modes: Vec<ModeConfig>,
}

impl ModeConfig {
    /// Random attacks draw their shocked sets from a stream separate from
    /// the one used for networks.
    pub fn attack(self, seed: u64) -> AttackMode {
        match self {
            ModeConfig::Random => AttackMode::Random {
                seed: child_seed(seed, &[1]),
            },
            ModeConfig::Targeted => AttackMode::Targeted,
        }
    }
}

/// Command-line overrides of top-level fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub samples: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        if let Some(seed) = overrides.seed {
            cfg.seed = seed;
        }
        if let Some(samples) = overrides.samples {
            cfg.samples = samples;
        }
        if let Some(out) = &overrides.out {
            cfg.output = Some(out.clone());
        }
        if cfg.samples == 0 {
            return Err(CliError::Config("`samples` must be at least 1".into()));
        }
        Ok(cfg)
    }

    /// Edge-list paths are relative to the config file; the output path is
    /// relative to the working directory.
    fn resolve_paths(&mut self, base: &Path) {
        let fix = |t: &mut TopologyConfig| {
            if let TopologyConfig::EdgeList { path } = t {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        self.topology.iter_mut().for_each(fix);
        self.families.iter_mut().for_each(fix);
    }

    pub fn single_topology(&self) -> Result<&TopologyConfig, CliError> {
        self.topology
            .as_ref()
            .ok_or_else(|| CliError::Config("missing `topology`".into()))
    }

    /// Families to sweep: `families`, or `topology` alone.
    pub fn sweep_families(&self) -> Result<Vec<Topology>, CliError> {
        let list: Vec<&TopologyConfig> = if self.families.is_empty() {
            self.topology.iter().collect()
        } else {
            self.families.iter().collect()
        };
        if list.is_empty() {
            return Err(CliError::Config("missing `families`".into()));
        }
        list.into_iter().map(TopologyConfig::family).collect()
    }

    pub fn grid(&self) -> Result<&[f64], CliError> {
        if self.density_grid.is_empty() {
            return Err(CliError::Config("`density_grid` must not be empty".into()));
        }
        Ok(&self.density_grid)
    }
}
