//! Hoarding cascades after local uncertainty shocks.
//!
//! A shock raises the offsets of a set of banks, `c¹_i = c⁰_i (1 + c̃⁰)`.
//! Shocked banks hoard more, their lenders receive less and hoard more of
//! a smaller box, and so on around the network. Since the VaR equilibrium
//! is unique, the end state of that process is obtained by re-solving the
//! equilibrium with `C¹` in place of `C⁰`.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{density, pagerank, CentralityVector, RehypoNetwork, DEFAULT_DAMPING};
use crate::rng::{child_seed, rng_from_seed};
use crate::stats::summarize;
use crate::sweep::{RowStatus, SweepAxis};
use crate::topology::Topology;
use crate::varhoard::{var_equilibrium, VarConfig, VarEquilibrium};

/// Convergence tolerance used for the PageRank of targeted attacks.
pub const PAGERANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AttackMode {
    /// Shocked banks drawn uniformly without replacement.
    Random { seed: u64 },
    /// The banks with the highest PageRank.
    Targeted,
}

impl AttackMode {
    pub fn label(&self) -> &'static str {
        match self {
            AttackMode::Random { .. } => "random",
            AttackMode::Targeted => "targeted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockSpec {
    /// Fraction of banks hit, in [0, 1].
    pub fraction: f64,
    /// Relative increase c̃⁰ of the offsets, ≥ 0.
    pub magnitude: f64,
    pub mode: AttackMode,
}

impl ShockSpec {
    fn check(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::Domain(format!(
                "shock fraction must lie in [0, 1], got {}",
                self.fraction
            )));
        }
        if !(self.magnitude >= 0.0 && self.magnitude.is_finite()) {
            return Err(Error::Domain(format!(
                "shock magnitude must be >= 0, got {}",
                self.magnitude
            )));
        }
        Ok(())
    }

    /// `ceil(f n)`, with a small allowance so that e.g. `0.2 * 50` is 10.
    pub fn shocked_count(&self, n: usize) -> usize {
        ((self.fraction * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
    }
}

/// Shocked offsets and the (sorted) shocked banks.
pub fn apply_shock(
    c0: &[f64],
    spec: &ShockSpec,
    centrality: Option<&CentralityVector>,
) -> Result<(Vec<f64>, Vec<usize>)> {
    spec.check()?;
    let n = c0.len();
    let count = spec.shocked_count(n);
    let mut shocked = match spec.mode {
        AttackMode::Random { seed } => {
            let mut rng = rng_from_seed(seed);
            sample(&mut rng, n, count).into_vec()
        }
        AttackMode::Targeted => {
            let c = centrality.ok_or(Error::MissingCentrality)?;
            if c.scores.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.scores.len(),
                });
            }
            c.ranking().into_iter().take(count).collect()
        }
    };
    shocked.sort_unstable();
    let mut c1 = c0.to_vec();
    for &i in &shocked {
        c1[i] = c0[i] * (1.0 + spec.magnitude);
    }
    Ok((c1, shocked))
}

#[derive(Debug, Clone, Serialize)]
pub struct CascadeOutcome {
    pub pre: VarEquilibrium,
    pub post: VarEquilibrium,
    /// Post-shock S^out over pre-shock S^out (1 when nothing was pledged).
    pub s_out_ratio: f64,
    /// Pre minus post A^C per bank.
    pub a_c_loss: Vec<f64>,
    pub shocked: Vec<usize>,
}

pub fn run_cascade(
    net: &RehypoNetwork,
    a0: &[f64],
    cfg: &VarConfig,
    spec: &ShockSpec,
) -> Result<CascadeOutcome> {
    let pre = var_equilibrium(net, a0, cfg)?;
    let centrality = match spec.mode {
        AttackMode::Targeted => Some(pagerank(net, DEFAULT_DAMPING, PAGERANK_TOL)?),
        AttackMode::Random { .. } => None,
    };
    let (c1, shocked) = apply_shock(&cfg.offsets, spec, centrality.as_ref())?;
    let post = var_equilibrium(net, a0, &cfg.with_offsets(c1))?;
    let s_out_ratio = if pre.s_out > 0.0 {
        post.s_out / pre.s_out
    } else {
        1.0
    };
    let a_c_loss = pre.a_c.iter().zip(&post.a_c).map(|(a, b)| a - b).collect();
    Ok(CascadeOutcome {
        pre,
        post,
        s_out_ratio,
        a_c_loss,
        shocked,
    })
}

/// Homogeneous VaR model for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformVarModel {
    pub a0: f64,
    pub h: f64,
    /// Offset c⁰ shared by all banks.
    pub c0: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CascadeRow {
    pub topology: String,
    pub mode: &'static str,
    pub grid: f64,
    pub param: Option<f64>,
    /// Mean realised density over all sampled networks.
    pub density: Option<f64>,
    pub samples: usize,
    /// Samples with an infeasible pre- or post-shock equilibrium, excluded
    /// from the means.
    pub infeasible: usize,
    /// Pre-shock S^out / S⁰.
    pub mean_pre_ratio: Option<f64>,
    pub stderr_pre_ratio: Option<f64>,
    /// Post-shock S^out / pre-shock S^out.
    pub mean_post_pre: Option<f64>,
    pub stderr_post_pre: Option<f64>,
    pub status: RowStatus,
}

impl CascadeRow {
    /// Mean fraction of outgoing collateral lost, `1 - mean_post_pre`.
    pub fn mean_loss(&self) -> Option<f64> {
        self.mean_post_pre.map(|r| 1.0 - r)
    }
}

/// Realised density and, when feasible, (pre S^out/S⁰, post/pre S^out).
type Sample = (f64, Option<(f64, f64)>);

/// Run `samples` cascades per grid value.
///
/// Network `s` at grid index `g` is drawn with `child_seed(seed, [g, s])`
/// whatever the attack mode, so random and targeted runs with the same
/// `seed` hit the same graphs. A random attack's shocked set uses
/// `child_seed(mode seed, [g, s])`.
pub fn density_sweep_experiment(
    topology: &Topology,
    axis: SweepAxis,
    grid: &[f64],
    model: &UniformVarModel,
    spec: &ShockSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<CascadeRow>> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    spec.check()?;
    let n = topology.n();
    let a0 = vec![model.a0; n];
    let cfg = VarConfig::from_offsets(model.h, vec![model.c0; n])?;
    let mut rows = Vec::with_capacity(grid.len());
    for (gi, &x) in grid.iter().enumerate() {
        let param = match axis {
            SweepAxis::Parameter => Ok(x),
            SweepAxis::Density => topology.parameter_for_density(x),
        };
        let Ok(param) = param else {
            rows.push(CascadeRow {
                topology: topology.label(),
                mode: spec.mode.label(),
                grid: x,
                param: None,
                density: None,
                samples: 0,
                infeasible: 0,
                mean_pre_ratio: None,
                stderr_pre_ratio: None,
                mean_post_pre: None,
                stderr_post_pre: None,
                status: RowStatus::Unreachable,
            });
            continue;
        };
        let results: Vec<Result<Sample>> = (0..samples)
            .into_par_iter()
            .map(|si| {
                let path = [gi as u64, si as u64];
                let net = topology.sample(param, child_seed(seed, &path))?;
                let mode = match spec.mode {
                    AttackMode::Random { seed: s } => AttackMode::Random {
                        seed: child_seed(s, &path),
                    },
                    AttackMode::Targeted => AttackMode::Targeted,
                };
                let sample_spec = ShockSpec { mode, ..*spec };
                match run_cascade(&net, &a0, &cfg, &sample_spec) {
                    Ok(out) => Ok((density(&net), Some((out.pre.ratio_to_s0, out.s_out_ratio)))),
                    Err(Error::InfeasibleHoarding { .. }) => Ok((density(&net), None)),
                    Err(e) => Err(e),
                }
            })
            .collect();
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        let dens: Vec<f64> = results.iter().map(|r| r.0).collect();
        let ok: Vec<(f64, f64)> = results.iter().filter_map(|r| r.1).collect();
        let pre = summarize(&ok.iter().map(|r| r.0).collect::<Vec<_>>());
        let post = summarize(&ok.iter().map(|r| r.1).collect::<Vec<_>>());
        rows.push(CascadeRow {
            topology: topology.label(),
            mode: spec.mode.label(),
            grid: x,
            param: Some(param),
            density: summarize(&dens).mean,
            samples,
            infeasible: samples - ok.len(),
            mean_pre_ratio: pre.mean,
            stderr_pre_ratio: pre.stderr,
            mean_post_pre: post.mean,
            stderr_post_pre: post.stderr,
            status: RowStatus::Ok,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::network_from_edges;

    fn spec(fraction: f64, magnitude: f64, mode: AttackMode) -> ShockSpec {
        ShockSpec {
            fraction,
            magnitude,
            mode,
        }
    }

    #[test]
    fn zero_magnitude_is_identity() {
        let c0 = vec![1.0; 10];
        let (c1, shocked) =
            apply_shock(&c0, &spec(0.5, 0.0, AttackMode::Random { seed: 3 }), None).unwrap();
        assert_eq!(c1, c0);
        assert_eq!(shocked.len(), 5);
    }

    #[test]
    fn shocked_count_is_ceiling() {
        let s = spec(0.2, 0.5, AttackMode::Random { seed: 0 });
        assert_eq!(s.shocked_count(50), 10);
        assert_eq!(s.shocked_count(7), 2);
        assert_eq!(spec(0.0, 0.5, AttackMode::Targeted).shocked_count(50), 0);
        assert_eq!(spec(1.0, 0.5, AttackMode::Targeted).shocked_count(50), 50);
    }

    #[test]
    fn random_shock_values() {
        let (c1, shocked) = apply_shock(
            &[1.0; 50],
            &spec(0.2, 0.5, AttackMode::Random { seed: 9 }),
            None,
        )
        .unwrap();
        assert_eq!(shocked.len(), 10);
        for (i, v) in c1.iter().enumerate() {
            let expect = if shocked.contains(&i) { 1.5 } else { 1.0 };
            assert_eq!(*v, expect);
        }
    }

    #[test]
    fn targeted_needs_centrality() {
        assert!(matches!(
            apply_shock(&[1.0; 3], &spec(0.5, 0.5, AttackMode::Targeted), None),
            Err(Error::MissingCentrality)
        ));
    }

    #[test]
    fn targeted_picks_top_ranked_with_low_index_ties() {
        let c = CentralityVector {
            scores: vec![0.1, 0.3, 0.3, 0.2, 0.1],
            damping: 0.85,
            residual: 0.0,
            iterations: 1,
        };
        let (_, shocked) =
            apply_shock(&[1.0; 5], &spec(0.4, 0.5, AttackMode::Targeted), Some(&c)).unwrap();
        assert_eq!(shocked, vec![1, 2]);
        let (_, shocked) =
            apply_shock(&[1.0; 5], &spec(0.6, 0.5, AttackMode::Targeted), Some(&c)).unwrap();
        assert_eq!(shocked, vec![1, 2, 3]);
    }

    #[test]
    fn two_bank_chain_cascade() {
        let net = network_from_edges(2, &[(0, 1)]).unwrap();
        let cfg = VarConfig::from_offsets(0.1, vec![1.0, 1.0]).unwrap();
        // bank 1 is a sink, so PageRank targets it first; hit bank 0 by
        // shocking everyone and comparing with the hand solution
        let c = CentralityVector {
            scores: vec![0.9, 0.1],
            damping: 0.85,
            residual: 0.0,
            iterations: 1,
        };
        let (c1, shocked) = apply_shock(
            &cfg.offsets,
            &spec(0.5, 0.5, AttackMode::Targeted),
            Some(&c),
        )
        .unwrap();
        assert_eq!(shocked, vec![0]);
        let pre = var_equilibrium(&net, &[100.0; 2], &cfg).unwrap();
        let post = var_equilibrium(&net, &[100.0; 2], &cfg.with_offsets(c1)).unwrap();
        assert!((post.a_c[1] - 188.5).abs() < 1e-12);
        let ratio = post.s_out / pre.s_out;
        assert!((ratio - (100.0 - 1.5 / 0.9) / (100.0 - 1.0 / 0.9)).abs() < 1e-12);
    }

    #[test]
    fn shocking_a_sink_changes_nothing() {
        let net = network_from_edges(2, &[(0, 1)]).unwrap();
        let cfg = VarConfig::from_offsets(0.1, vec![1.0, 1.0]).unwrap();
        // PageRank puts the sink first
        let out = run_cascade(
            &net,
            &[100.0; 2],
            &cfg,
            &spec(0.5, 0.5, AttackMode::Targeted),
        )
        .unwrap();
        assert_eq!(out.shocked, vec![1]);
        assert_eq!(out.s_out_ratio, 1.0);
        assert!(out.a_c_loss.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn sweep_is_deterministic() {
        let t = Topology::Random { n: 20 };
        let model = UniformVarModel {
            a0: 100.0,
            h: 0.1,
            c0: 1.0,
        };
        let s = spec(0.2, 0.5, AttackMode::Random { seed: 5 });
        let a = density_sweep_experiment(&t, SweepAxis::Density, &[0.2], &model, &s, 4, 1).unwrap();
        let b = density_sweep_experiment(&t, SweepAxis::Density, &[0.2], &model, &s, 4, 1).unwrap();
        assert_eq!(a[0].mean_post_pre, b[0].mean_post_pre);
        assert!(a[0].mean_post_pre.unwrap() <= 1.0);
    }
}
