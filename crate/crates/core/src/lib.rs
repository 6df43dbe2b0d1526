//! Collateral rehypothecation networks.
//!
//! Banks pledge collateral along directed edges (pledger → lender). Each
//! bank hoards a fraction of the collateral in its box and re-pledges the
//! haircutted remainder, spread evenly over its lenders. This crate
//! computes the resulting equilibrium flows for fixed hoarding rates
//! ([`collateral`]) and for hoarding rates set by a Value-at-Risk rule
//! ([`varhoard`]), and measures how local uncertainty shocks cascade
//! through the VaR equilibrium ([`cascade`]).
//!
//! Supporting pieces: network construction, generators and PageRank
//! ([`network`]), dense solvers and the error function ([`numerics`]),
//! density-indexed topology families and Monte Carlo sweeps
//! ([`topology`], [`sweep`]).

pub mod cascade;
pub mod collateral;
pub mod error;
pub mod network;
pub mod numerics;
pub mod rng;
pub mod stats;
pub mod sweep;
pub mod topology;
pub mod varhoard;

pub use cascade::{
    apply_shock, density_sweep_experiment, run_cascade, AttackMode, CascadeOutcome, CascadeRow,
    ShockSpec,
};
pub use collateral::{
    equilibrium, expected_multiplier_core_periphery, expected_multiplier_random, flow_matrix,
    pth_threshold, step_dynamics, BankParams, FlowEquilibrium, FlowMatrix,
};
pub use error::{Error, Result};
pub use network::{
    density, gen_closed_k_regular, gen_core_periphery, gen_random_directed, load_edge_list,
    network_from_edges, pagerank, save_edge_list, share_matrix, CentralityVector, RehypoNetwork,
    ShareMatrix,
};
pub use numerics::{argerf, erf, lu_solve, neumann_solve, Matrix, SolveReport};
pub use topology::Topology;
pub use varhoard::{
    default_probability, uncertainty_offset, var_equilibrium, NormalShock, VarConfig,
    VarEquilibrium,
};
