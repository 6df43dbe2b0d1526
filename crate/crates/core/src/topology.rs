//! Network families indexed by overall density `|E| / (n(n-1))`, the
//! common x-axis of the density sweeps.

use serde::Serialize;

use crate::collateral::{
    expected_multiplier_core_periphery, expected_multiplier_random, multiplier_upper_bound,
};
use crate::error::{Error, Result};
use crate::network::{
    gen_closed_k_regular, gen_core_periphery, gen_random_directed, RehypoNetwork,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    KRegular {
        n: usize,
    },
    Random {
        n: usize,
    },
    CorePeriphery {
        n: usize,
        n_core: usize,
        k_per: usize,
    },
}

impl Topology {
    pub fn n(&self) -> usize {
        match *self {
            Topology::KRegular { n }
            | Topology::Random { n }
            | Topology::CorePeriphery { n, .. } => n,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Topology::KRegular { .. } => "k_regular".into(),
            Topology::Random { .. } => "random".into(),
            Topology::CorePeriphery { n_core, k_per, .. } => {
                format!("core_periphery:n_core={n_core}:k_per={k_per}")
            }
        }
    }

    /// Whether sampling involves randomness.
    pub fn is_random(&self) -> bool {
        !matches!(self, Topology::KRegular { .. })
    }

    /// Generator parameter giving overall density `d`: `k` for k-regular
    /// (nearest integer), `p` for random graphs, `p_core` for
    /// core–periphery.
    ///
    /// Core–periphery graphs have `(n - n_core) k_per` periphery edges, so
    /// `p_core = (d n(n-1) - (n - n_core) k_per) / (n_core(n_core-1))`.
    /// Densities outside what the family can produce are errors.
    pub fn parameter_for_density(&self, d: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::InvalidProbability(d));
        }
        match *self {
            Topology::KRegular { n } => {
                let k = (d * (n as f64 - 1.0)).round() as usize;
                if k == 0 || k > n.saturating_sub(1) {
                    return Err(Error::InvalidDegree { n, k });
                }
                Ok(k as f64)
            }
            Topology::Random { .. } => Ok(d),
            Topology::CorePeriphery { n, n_core, k_per } => {
                if n_core < 2 {
                    return Err(Error::InvalidCoreSize(format!(
                        "density mapping needs n_core >= 2, got {n_core}"
                    )));
                }
                let pairs = (n * (n - 1)) as f64;
                let periphery = ((n - n_core) * k_per) as f64;
                let core_pairs = (n_core * (n_core - 1)) as f64;
                let p_core = (d * pairs - periphery) / core_pairs;
                // allow round-off at the ends of the reachable range
                let p_core = if p_core.abs() < 1e-12 {
                    0.0
                } else if (p_core - 1.0).abs() < 1e-12 {
                    1.0
                } else {
                    p_core
                };
                if !(0.0..=1.0).contains(&p_core) {
                    return Err(Error::InvalidProbability(p_core));
                }
                Ok(p_core)
            }
        }
    }

    /// Expected overall density for a generator parameter.
    pub fn density_for_parameter(&self, param: f64) -> f64 {
        match *self {
            Topology::KRegular { n } => param / (n as f64 - 1.0),
            Topology::Random { .. } => param,
            Topology::CorePeriphery { n, n_core, k_per } => {
                let core = param * (n_core * (n_core - 1)) as f64;
                (core + ((n - n_core) * k_per) as f64) / (n * (n - 1)) as f64
            }
        }
    }

    /// Draw a network at generator parameter `param`.
    pub fn sample(&self, param: f64, seed: u64) -> Result<RehypoNetwork> {
        match *self {
            Topology::KRegular { n } => {
                if param.fract() != 0.0 || param < 0.0 {
                    return Err(Error::Domain(format!(
                        "degree must be an integer, got {param}"
                    )));
                }
                gen_closed_k_regular(n, param as usize)
            }
            Topology::Random { n } => gen_random_directed(n, param, seed),
            Topology::CorePeriphery { n, n_core, k_per } => {
                gen_core_periphery(n, n_core, param, k_per, seed)
            }
        }
    }

    /// Mean-field E[m] at generator parameter `param` with homogeneous
    /// `h`, `theta`. Every closed k-regular graph sits at the upper bound.
    pub fn expected_multiplier(&self, param: f64, h: f64, theta: f64) -> f64 {
        match *self {
            Topology::KRegular { .. } => multiplier_upper_bound(h, theta),
            Topology::Random { n } => expected_multiplier_random(n, param, h, theta),
            Topology::CorePeriphery { n_core, .. } => {
                expected_multiplier_core_periphery(n_core, param, h, theta)
            }
        }
    }
}
