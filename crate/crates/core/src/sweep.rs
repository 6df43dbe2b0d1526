//! Monte Carlo sweeps of the fixed-θ multiplier over a topology family.

use rayon::prelude::*;
use serde::Serialize;

use crate::collateral::{equilibrium, BankParams};
use crate::error::Result;
use crate::network::density;
use crate::rng::child_seed;
use crate::stats::summarize;
use crate::topology::Topology;

/// What the grid values mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Overall density, mapped to a generator parameter per family.
    Density,
    /// The generator parameter itself (`k`, `p` or `p_core`).
    Parameter,
}

/// Homogeneous fixed-θ model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformModel {
    pub a0: f64,
    pub theta: f64,
    pub h: f64,
}

impl UniformModel {
    pub fn params(&self, n: usize) -> Result<BankParams> {
        BankParams::homogeneous(n, self.a0, self.theta, self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// The family cannot produce this grid value.
    Unreachable,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub topology: String,
    pub grid: f64,
    pub param: Option<f64>,
    /// Mean realised density.
    pub density: Option<f64>,
    pub samples: usize,
    /// Samples with no pledging bank (m undefined).
    pub undefined: usize,
    pub mean_s_out: Option<f64>,
    pub mean_m: Option<f64>,
    pub stderr_m: Option<f64>,
    pub expected_m: Option<f64>,
    pub status: RowStatus,
}

struct Sample {
    density: f64,
    s_out: f64,
    m: Option<f64>,
}

/// Sample `samples` networks per grid value and average S^out and m.
/// Deterministic families are solved once per grid value.
pub fn multiplier_sweep(
    topology: &Topology,
    axis: SweepAxis,
    grid: &[f64],
    model: &UniformModel,
    samples: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let params = model.params(topology.n())?;
    let samples = if topology.is_random() {
        samples.max(1)
    } else {
        1
    };
    let mut rows = Vec::with_capacity(grid.len());
    for (gi, &x) in grid.iter().enumerate() {
        let param = match axis {
            SweepAxis::Parameter => Ok(x),
            SweepAxis::Density => topology.parameter_for_density(x),
        };
        let param = match param {
            Ok(p) => p,
            Err(_) => {
                rows.push(SweepRow {
                    topology: topology.label(),
                    grid: x,
                    param: None,
                    density: None,
                    samples: 0,
                    undefined: 0,
                    mean_s_out: None,
                    mean_m: None,
                    stderr_m: None,
                    expected_m: None,
                    status: RowStatus::Unreachable,
                });
                continue;
            }
        };
        let results: Vec<Result<Sample>> = (0..samples)
            .into_par_iter()
            .map(|si| {
                let net = topology.sample(param, child_seed(seed, &[gi as u64, si as u64]))?;
                let eq = equilibrium(&net, &params)?;
                Ok(Sample {
                    density: density(&net),
                    s_out: eq.s_out,
                    m: eq.multiplier,
                })
            })
            .collect();
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        let dens: Vec<f64> = results.iter().map(|s| s.density).collect();
        let s_out: Vec<f64> = results.iter().map(|s| s.s_out).collect();
        let m: Vec<f64> = results.iter().filter_map(|s| s.m).collect();
        let m_summary = summarize(&m);
        rows.push(SweepRow {
            topology: topology.label(),
            grid: x,
            param: Some(param),
            density: summarize(&dens).mean,
            samples,
            undefined: samples - m.len(),
            mean_s_out: summarize(&s_out).mean,
            mean_m: m_summary.mean,
            stderr_m: m_summary.stderr,
            expected_m: Some(topology.expected_multiplier(param, model.h, model.theta)),
            status: RowStatus::Ok,
        });
    }
    Ok(rows)
}
