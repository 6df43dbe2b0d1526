use serde::Serialize;

use super::RehypoNetwork;
use crate::error::{Error, Result};

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const MAX_PAGERANK_ITER: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct CentralityVector {
    pub scores: Vec<f64>,
    pub damping: f64,
    /// L1 distance between the last two iterates.
    pub residual: f64,
    pub iterations: usize,
}

impl CentralityVector {
    /// Bank indices by decreasing score; ties go to the lower index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.scores.len()).collect();
        idx.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        idx
    }
}

/// PageRank by power iteration, with rank flowing along collateral
/// (pledger → lender), so banks that collect collateral score highest.
/// Banks without lenders spread their rank uniformly.
pub fn pagerank(net: &RehypoNetwork, damping: f64, tol: f64) -> Result<CentralityVector> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::Domain(format!(
            "damping must lie in (0, 1), got {damping}"
        )));
    }
    let n = net.n();
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut diff = f64::INFINITY;
    for it in 1..=MAX_PAGERANK_ITER {
        let dangling: f64 = (0..n)
            .filter(|&j| !net.is_pledging(j))
            .map(|j| rank[j])
            .sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        next.iter_mut().for_each(|v| *v = base);
        for (j, &r) in rank.iter().enumerate() {
            let lenders = net.lenders(j);
            if lenders.is_empty() {
                continue;
            }
            let share = damping * r / lenders.len() as f64;
            for &i in lenders {
                next[i] += share;
            }
        }
        diff = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if diff <= tol {
            let total: f64 = rank.iter().sum();
            rank.iter_mut().for_each(|v| *v /= total);
            return Ok(CentralityVector {
                scores: rank,
                damping,
                residual: diff,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_PAGERANK_ITER,
        residual: diff,
    })
}
