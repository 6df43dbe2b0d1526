use std::fmt::Write as _;

use rehypo_core::cascade::{density_sweep_experiment, CascadeRow, ShockSpec};
use rehypo_core::network::write_edge_list;
use rehypo_core::rng::child_seed;
use rehypo_core::sweep::{multiplier_sweep, RowStatus, SweepRow};
use rehypo_core::{equilibrium, var_equilibrium};
use serde::Serialize;

use crate::config::{ExperimentConfig, ModelConfig};
use crate::error::CliError;

pub const SWEEP_COLUMNS: &[&str] = &[
    "topology",
    "grid",
    "param",
    "density",
    "samples",
    "undefined",
    "mean_s_out",
    "mean_m",
    "stderr_m",
    "expected_m",
    "status",
];

pub const CASCADE_COLUMNS: &[&str] = &[
    "topology",
    "mode",
    "grid",
    "param",
    "density",
    "samples",
    "infeasible",
    "mean_pre_ratio",
    "stderr_pre_ratio",
    "mean_post_pre",
    "stderr_post_pre",
    "mean_loss",
    "status",
];

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn status(s: RowStatus) -> &'static str {
    match s {
        RowStatus::Ok => "ok",
        RowStatus::Unreachable => "unreachable",
    }
}

fn csv(columns: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn sweep_cells(r: &SweepRow) -> Vec<String> {
    vec![
        r.topology.clone(),
        r.grid.to_string(),
        cell(r.param),
        cell(r.density),
        r.samples.to_string(),
        r.undefined.to_string(),
        cell(r.mean_s_out),
        cell(r.mean_m),
        cell(r.stderr_m),
        cell(r.expected_m),
        status(r.status).into(),
    ]
}

fn cascade_cells(r: &CascadeRow) -> Vec<String> {
    vec![
        r.topology.clone(),
        r.mode.into(),
        r.grid.to_string(),
        cell(r.param),
        cell(r.density),
        r.samples.to_string(),
        r.infeasible.to_string(),
        cell(r.mean_pre_ratio),
        cell(r.stderr_pre_ratio),
        cell(r.mean_post_pre),
        cell(r.stderr_post_pre),
        cell(r.mean_loss()),
        status(r.status).into(),
    ]
}

#[derive(Serialize)]
struct FixedBank {
    bank: usize,
    a_c_out: f64,
    a_c_rm: f64,
    a_c: f64,
}

#[derive(Serialize)]
struct FixedReport {
    model: &'static str,
    n: usize,
    edges: usize,
    banks: Vec<FixedBank>,
    s_out: f64,
    s0_out: f64,
    s0: f64,
    multiplier: Option<f64>,
    ratio_to_s0: f64,
}

#[derive(Serialize)]
struct VarBank {
    bank: usize,
    c0: f64,
    a_c: f64,
    theta_star: Option<f64>,
    a_c_out: f64,
}

#[derive(Serialize)]
struct VarReport {
    model: &'static str,
    n: usize,
    edges: usize,
    banks: Vec<VarBank>,
    s_out: f64,
    s0_out: f64,
    s0: f64,
    multiplier: Option<f64>,
    ratio_to_s0: f64,
    feasible: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

pub fn solve(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let net = cfg.single_topology()?.build(cfg.seed)?;
    let n = net.n();
    match &cfg.model {
        ModelConfig::FixedTheta { .. } => {
            let eq = equilibrium(&net, &cfg.model.bank_params(n)?)?;
            Ok(json(&FixedReport {
                model: "fixed_theta",
                n,
                edges: net.edge_count(),
                banks: (0..n)
                    .map(|i| FixedBank {
                        bank: i,
                        a_c_out: eq.a_c_out[i],
                        a_c_rm: eq.a_c_rm[i],
                        a_c: eq.a_c[i],
                    })
                    .collect(),
                s_out: eq.s_out,
                s0_out: eq.s0_out,
                s0: eq.s0,
                multiplier: eq.multiplier,
                ratio_to_s0: eq.ratio_to_s0,
            }))
        }
        ModelConfig::Var { .. } => {
            let (a0, var) = cfg.model.var_config(n)?;
            let eq = var_equilibrium(&net, &a0, &var)?;
            Ok(json(&VarReport {
                model: "var",
                n,
                edges: net.edge_count(),
                banks: (0..n)
                    .map(|i| VarBank {
                        bank: i,
                        c0: var.offsets[i],
                        a_c: eq.a_c[i],
                        theta_star: eq.theta_star[i],
                        a_c_out: eq.a_c_out[i],
                    })
                    .collect(),
                s_out: eq.s_out,
                s0_out: eq.s0_out,
                s0: eq.s0,
                multiplier: eq.multiplier,
                ratio_to_s0: eq.ratio_to_s0,
                feasible: eq.feasible,
            }))
        }
    }
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let model = cfg.model.uniform()?;
    let grid = cfg.grid()?;
    let mut rows = Vec::new();
    for (fi, family) in cfg.sweep_families()?.iter().enumerate() {
        let seed = child_seed(cfg.seed, &[fi as u64]);
        rows.extend(multiplier_sweep(
            family,
            cfg.axis.into(),
            grid,
            &model,
            cfg.samples,
            seed,
        )?);
    }
    Ok(csv(SWEEP_COLUMNS, rows.iter().map(sweep_cells)))
}

pub fn cascade(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let model = cfg.model.uniform_var()?;
    let shock = cfg
        .shock
        .as_ref()
        .ok_or_else(|| CliError::Config("cascade needs a `shock` section".into()))?;
    if shock.modes.is_empty() {
        return Err(CliError::Config("`shock.modes` must not be empty".into()));
    }
    let grid = cfg.grid()?;
    let mut rows = Vec::new();
    for (fi, family) in cfg.sweep_families()?.iter().enumerate() {
        // one network seed per family, shared by all attack modes
        let seed = child_seed(cfg.seed, &[fi as u64]);
        for mode in &shock.modes {
            let spec = ShockSpec {
                fraction: shock.fraction,
                magnitude: shock.magnitude,
                mode: mode.attack(seed),
            };
            rows.extend(density_sweep_experiment(
                family,
                cfg.axis.into(),
                grid,
                &model,
                &spec,
                cfg.samples,
                seed,
            )?);
        }
    }
    Ok(csv(CASCADE_COLUMNS, rows.iter().map(cascade_cells)))
}

pub fn gen(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let net = cfg.single_topology()?.build(cfg.seed)?;
    let mut out = String::new();
    let _ = writeln!(out, "# seed={}", cfg.seed);
    out.push_str(&write_edge_list(&net));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undefined_cells_are_dashes() {
        assert_eq!(cell(None), "-");
        assert_eq!(cell(Some(0.5)), "0.5");
    }

    #[test]
    fn csv_layout() {
        let s = csv(&["a", "b"], vec![vec!["1".into(), "-".into()]].into_iter());
        assert_eq!(s, "a,b\n1,-\n");
    }
}
