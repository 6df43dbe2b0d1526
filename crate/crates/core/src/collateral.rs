//! Collateral flows with fixed hoarding rates.
//!
//! Bank `i` keeps a fraction `1 - θ_i` of its box and pledges `θ_i` (only
//! if it has lenders), spread evenly over its lenders; a lender can
//! re-pledge only the `(1 - h)` part left after the haircut. Outgoing
//! collateral obeys `A^{C,out} = A^{0,out} + (1-h) M A^{C,out}` with
//! `m_{i<-j} = δ_i θ_i / k_out_j` on edges `j → i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{share_matrix, RehypoNetwork};
use crate::numerics::{inf_norm, lu_solve, Matrix, DIRECT_RESIDUAL};

#[derive(Debug, Clone, PartialEq)]
pub struct BankParams {
    pub a0: Vec<f64>,
    pub theta: Vec<f64>,
    pub h: f64,
}

impl BankParams {
    pub fn new(a0: Vec<f64>, theta: Vec<f64>, h: f64) -> Result<Self> {
        if a0.len() != theta.len() {
            return Err(Error::DimensionMismatch {
                expected: a0.len(),
                got: theta.len(),
            });
        }
        if let Some(bad) = a0.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!(
                "proprietary collateral must be >= 0, got {bad}"
            )));
        }
        if let Some(bad) = theta.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::Domain(format!(
                "theta must lie in [0, 1], got {bad}"
            )));
        }
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::Domain(format!(
                "haircut must lie in [0, 1], got {h}"
            )));
        }
        Ok(BankParams { a0, theta, h })
    }

    pub fn homogeneous(n: usize, a0: f64, theta: f64, h: f64) -> Result<Self> {
        Self::new(vec![a0; n], vec![theta; n], h)
    }

    pub fn n(&self) -> usize {
        self.a0.len()
    }

    fn check(&self, net: &RehypoNetwork) -> Result<()> {
        if self.n() != net.n() {
            return Err(Error::DimensionMismatch {
                expected: net.n(),
                got: self.n(),
            });
        }
        Ok(())
    }

    /// A^{0,out}_i = δ_i θ_i A⁰_i.
    pub fn proprietary_outflow(&self, net: &RehypoNetwork) -> Vec<f64> {
        (0..self.n())
            .map(|i| f64::from(net.delta(i)) * self.theta[i] * self.a0[i])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowMatrix(Matrix);

impl FlowMatrix {
    pub fn get(&self, lender: usize, pledger: usize) -> f64 {
        self.0[(lender, pledger)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

pub fn flow_matrix(net: &RehypoNetwork, params: &BankParams) -> Result<FlowMatrix> {
    params.check(net)?;
    let s = share_matrix(net);
    let n = net.n();
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        for &i in net.lenders(j) {
            m[(i, j)] = f64::from(net.delta(i)) * params.theta[i] * s.get(i, j);
        }
    }
    Ok(FlowMatrix(m))
}

/// Cumulative outgoing collateral after each of `steps` rounds of re-use:
/// element `t-1` holds A^{C,out}_t.
pub fn step_dynamics(
    net: &RehypoNetwork,
    params: &BankParams,
    steps: usize,
) -> Result<Vec<Vec<f64>>> {
    let k = flow_matrix(net, params)?.0.scaled(1.0 - params.h);
    let base = params.proprietary_outflow(net);
    let mut traj = Vec::with_capacity(steps);
    let mut x = base.clone();
    for _ in 0..steps {
        let kx = k.mul_vec(&x);
        let next = base.iter().zip(&kx).map(|(b, v)| b + v).collect();
        traj.push(std::mem::replace(&mut x, next));
    }
    Ok(traj)
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowEquilibrium {
    pub a_c_out: Vec<f64>,
    pub a_c_rm: Vec<f64>,
    pub a_c: Vec<f64>,
    pub s_out: f64,
    pub s0_out: f64,
    pub s0: f64,
    /// S^out / S^{0,out}; `None` when nothing proprietary is pledged.
    pub multiplier: Option<f64>,
    /// S^out / S⁰.
    pub ratio_to_s0: f64,
    /// ∞-norm residual of the outgoing-collateral fixed point.
    pub residual: f64,
}

pub fn equilibrium(net: &RehypoNetwork, params: &BankParams) -> Result<FlowEquilibrium> {
    let m = flow_matrix(net, params)?;
    let k = m.0.scaled(1.0 - params.h);
    let a0_out = params.proprietary_outflow(net);
    let a_c_out = lu_solve(&k.identity_minus(), &a0_out)?.solution;

    let kx = k.mul_vec(&a_c_out);
    let residual = a0_out
        .iter()
        .zip(&kx)
        .zip(&a_c_out)
        .fold(0.0_f64, |r, ((b, v), x)| r.max((b + v - x).abs()));
    let bound = DIRECT_RESIDUAL * inf_norm(&a0_out).max(1.0);
    if residual > bound {
        return Err(Error::IllConditioned { residual, bound });
    }

    // A^C_i = A⁰_i + (1-h) Σ_j s_{i<-j} A^{C,out}_j
    let inflow = share_matrix(net).apply(&a_c_out);
    let a_c: Vec<f64> = params
        .a0
        .iter()
        .zip(&inflow)
        .map(|(a, f)| a + (1.0 - params.h) * f)
        .collect();
    let a_c_rm = a_c.iter().zip(&a_c_out).map(|(c, o)| c - o).collect();

    let s_out: f64 = a_c_out.iter().sum();
    let s0_out: f64 = a0_out.iter().sum();
    let s0: f64 = params.a0.iter().sum();
    Ok(FlowEquilibrium {
        multiplier: (s0_out > 0.0).then(|| s_out / s0_out),
        ratio_to_s0: if s0 > 0.0 { s_out / s0 } else { 0.0 },
        a_c_out,
        a_c_rm,
        a_c,
        s_out,
        s0_out,
        s0,
        residual,
    })
}

/// Upper limit 1/(1-(1-h)θ), reached whenever every bank pledges.
pub fn multiplier_upper_bound(h: f64, theta: f64) -> f64 {
    1.0 / (1.0 - (1.0 - h) * theta)
}

/// Mean-field E[m] for a directed random graph of density `p`.
pub fn expected_multiplier_random(n: usize, p: f64, h: f64, theta: f64) -> f64 {
    let pledging = 1.0 - (1.0 - p).powi(n as i32 - 1);
    1.0 / (1.0 - pledging * (1.0 - h) * theta)
}

/// Mean-field E[m] for a core–periphery graph; depends only on the core.
pub fn expected_multiplier_core_periphery(n_core: usize, p_core: f64, h: f64, theta: f64) -> f64 {
    expected_multiplier_random(n_core, p_core, h, theta)
}

/// Core density above which the core–periphery mean-field multiplier
/// exceeds that of a random graph with density `p`.
pub fn pth_threshold(n: usize, n_core: usize, p: f64) -> Result<f64> {
    if n_core < 2 || n < 2 {
        return Err(Error::InvalidCoreSize(format!(
            "threshold needs n_core >= 2, got {n_core}"
        )));
    }
    let exponent = (n - 1) as f64 / (n_core - 1) as f64;
    Ok(1.0 - (1.0 - p).powf(exponent))
}
