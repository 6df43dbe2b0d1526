//! Hoarding rates set by a Value-at-Risk rule.
//!
//! A pledging bank `j` keeps enough collateral that its net liquidity
//! `(1-h)(1-θ_j)A^C_j - ε_j`, with `ε_j ~ N(μ_j, σ_j²)`, is negative with
//! probability exactly `1 - c_j`. That pins `(1-h)(1-θ_j)A^C_j` to the
//! uncertainty offset `c⁰_j` (the c_j-quantile of ε_j), and the box
//! equation becomes linear in `A^C`:
//!
//! ```text
//! (I - (1-h) S) A^C = A⁰ - S c⁰
//! ```
//!
//! which has a unique solution for `0 < h < 1`. It is an equilibrium when
//! every pledging bank ends up with `A^C_j ≥ c⁰_j / (1-h)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{share_matrix, RehypoNetwork};
use crate::numerics::{argerf, erfc, inf_norm, lu_solve};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalShock {
    pub mu: f64,
    pub sigma: f64,
    /// VaR confidence level, in (0, 1).
    pub c: f64,
}

impl NormalShock {
    pub fn offset(&self) -> Result<f64> {
        uncertainty_offset(self.mu, self.sigma, self.c)
    }
}

/// `c⁰ = σ√2·argerf(2c-1) + μ`, the `c`-quantile of N(μ, σ²).
pub fn uncertainty_offset(mu: f64, sigma: f64, c: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!(
            "VaR level must lie in (0, 1), got {c}"
        )));
    }
    Ok(sigma * std::f64::consts::SQRT_2 * argerf(2.0 * c - 1.0)? + mu)
}

/// Probability that bank `j`'s net liquidity turns negative when it
/// pledges a fraction `theta` of a box worth `a_c`.
pub fn default_probability(a_c: f64, theta: f64, shock: &NormalShock, h: f64) -> Result<f64> {
    if !(shock.sigma > 0.0) {
        return Err(Error::Domain(format!(
            "sigma must be positive, got {}",
            shock.sigma
        )));
    }
    let buffer = (1.0 - h) * (1.0 - theta) * a_c;
    let z = (buffer - shock.mu) / (shock.sigma * std::f64::consts::SQRT_2);
    Ok(0.5 * erfc(z))
}

/// θ* = 1 - c⁰ / ((1-h) A^C): the largest pledged fraction that keeps
/// the default probability at `1 - c`.
pub fn optimal_theta(a_c: f64, c0: f64, h: f64) -> f64 {
    1.0 - c0 / ((1.0 - h) * a_c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarConfig {
    pub h: f64,
    /// c⁰ per bank.
    pub offsets: Vec<f64>,
    /// The (μ, σ, c) each offset came from, when known.
    pub shocks: Option<Vec<NormalShock>>,
}

impl VarConfig {
    pub fn from_offsets(h: f64, offsets: Vec<f64>) -> Result<Self> {
        if let Some(bad) = offsets.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("offset must be finite, got {bad}")));
        }
        Ok(VarConfig {
            h,
            offsets,
            shocks: None,
        })
    }

    pub fn from_normal(h: f64, shocks: Vec<NormalShock>) -> Result<Self> {
        let offsets = shocks
            .iter()
            .map(NormalShock::offset)
            .collect::<Result<_>>()?;
        Ok(VarConfig {
            h,
            offsets,
            shocks: Some(shocks),
        })
    }

    pub fn n(&self) -> usize {
        self.offsets.len()
    }

    /// Same parameters with different offsets (the shock distributions no
    /// longer match, so they are dropped).
    pub fn with_offsets(&self, offsets: Vec<f64>) -> Self {
        VarConfig {
            h: self.h,
            offsets,
            shocks: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VarEquilibrium {
    pub a_c: Vec<f64>,
    /// θ*_j for banks with lenders; `None` for sinks.
    pub theta_star: Vec<Option<f64>>,
    /// δ_j (A^C_j - c⁰_j/(1-h)).
    pub a_c_out: Vec<f64>,
    pub s_out: f64,
    pub s0: f64,
    /// S^out / S⁰.
    pub ratio_to_s0: f64,
    /// Σ δ_j θ*_j A⁰_j.
    pub s0_out: f64,
    pub multiplier: Option<f64>,
    /// ∞-norm residual of `X = A⁰ + W̃(X) X` at the solution.
    pub fixed_point_residual: f64,
    pub feasible: bool,
    /// Pledging banks with θ*_j outside [0, 1].
    pub infeasible_banks: Vec<usize>,
}

fn check_inputs(net: &RehypoNetwork, a0: &[f64], cfg: &VarConfig) -> Result<()> {
    for len in [a0.len(), cfg.n()] {
        if len != net.n() {
            return Err(Error::DimensionMismatch {
                expected: net.n(),
                got: len,
            });
        }
    }
    if !(cfg.h > 0.0 && cfg.h < 1.0) {
        return Err(Error::Domain(format!(
            "VaR equilibrium needs 0 < h < 1, got {}",
            cfg.h
        )));
    }
    Ok(())
}

/// `X - A⁰ - W̃(X) X` with `w̃_{i<-j} = ((1-h)X_j - c⁰_j) / (X_j k_out_j)`.
pub fn fixed_point_map(net: &RehypoNetwork, a0: &[f64], cfg: &VarConfig, x: &[f64]) -> Vec<f64> {
    let mut out = a0.to_vec();
    for j in 0..net.n() {
        let k = net.k_out(j);
        if k == 0 {
            continue;
        }
        let w = ((1.0 - cfg.h) * x[j] - cfg.offsets[j]) / (x[j] * k as f64);
        for &i in net.lenders(j) {
            out[i] += w * x[j];
        }
    }
    out
}

/// Solve the linear VaR system and report feasibility without failing on it.
pub fn solve_var_system(
    net: &RehypoNetwork,
    a0: &[f64],
    cfg: &VarConfig,
) -> Result<VarEquilibrium> {
    check_inputs(net, a0, cfg)?;
    let h = cfg.h;
    let s = share_matrix(net);
    let lhs = s.matrix().scaled(1.0 - h).identity_minus();
    let sc = s.apply(&cfg.offsets);
    let rhs: Vec<f64> = a0.iter().zip(&sc).map(|(a, v)| a - v).collect();
    let a_c = lu_solve(&lhs, &rhs)?.solution;

    let n = net.n();
    let mut theta_star = vec![None; n];
    let mut a_c_out = vec![0.0; n];
    let mut infeasible = Vec::new();
    for j in (0..n).filter(|&j| net.is_pledging(j)) {
        let c0 = cfg.offsets[j];
        let theta = optimal_theta(a_c[j], c0, h);
        if !(0.0..=1.0).contains(&theta) {
            infeasible.push(j);
        }
        theta_star[j] = Some(theta);
        a_c_out[j] = a_c[j] - c0 / (1.0 - h);
    }

    let mapped = fixed_point_map(net, a0, cfg, &a_c);
    let fixed_point_residual = mapped
        .iter()
        .zip(&a_c)
        .fold(0.0_f64, |r, (m, x)| r.max((m - x).abs()));

    let s_out: f64 = a_c_out.iter().sum();
    let s0: f64 = a0.iter().sum();
    let s0_out: f64 = theta_star
        .iter()
        .zip(a0)
        .filter_map(|(t, a)| t.map(|t| t * a))
        .sum();
    Ok(VarEquilibrium {
        ratio_to_s0: if s0 > 0.0 { s_out / s0 } else { 0.0 },
        multiplier: (s0_out > 0.0).then(|| s_out / s0_out),
        feasible: infeasible.is_empty(),
        infeasible_banks: infeasible,
        a_c,
        theta_star,
        a_c_out,
        s_out,
        s0,
        s0_out,
        fixed_point_residual,
    })
}

/// Unique VaR hoarding equilibrium; infeasibility is an error listing the
/// offending banks.
pub fn var_equilibrium(net: &RehypoNetwork, a0: &[f64], cfg: &VarConfig) -> Result<VarEquilibrium> {
    let eq = solve_var_system(net, a0, cfg)?;
    if !eq.feasible {
        return Err(Error::InfeasibleHoarding {
            banks: eq.infeasible_banks,
        });
    }
    let bound = 1e-9 * inf_norm(&eq.a_c).max(1.0);
    if eq.fixed_point_residual > bound {
        return Err(Error::IllConditioned {
            residual: eq.fixed_point_residual,
            bound,
        });
    }
    Ok(eq)
}

/// Picard iteration of `X ← A⁰ + W̃(X) X` from `start`: the round-by-round
/// picture of banks revising their hoarding in response to each other.
/// Stops once a sweep moves no entry by more than `tol · max(1, ‖X‖∞)`.
/// Returns the limit and the number of sweeps.
pub fn picard_equilibrium(
    net: &RehypoNetwork,
    a0: &[f64],
    cfg: &VarConfig,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize)> {
    check_inputs(net, a0, cfg)?;
    if start.len() != net.n() {
        return Err(Error::DimensionMismatch {
            expected: net.n(),
            got: start.len(),
        });
    }
    let mut x = start.to_vec();
    let mut diff = f64::INFINITY;
    for it in 1..=max_iter {
        let next = fixed_point_map(net, a0, cfg, &x);
        diff = next
            .iter()
            .zip(&x)
            .fold(0.0_f64, |r, (a, b)| r.max((a - b).abs()));
        x = next;
        if diff <= tol * inf_norm(&x).max(1.0) {
            return Ok((x, it));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: diff,
    })
}
