//! Directed rehypothecation networks.
//!
//! An edge `(j, i)` means bank `j` pledged collateral to lender `i`, so
//! collateral flows `j → i`. Out-degree counts a bank's lenders and
//! in-degree its borrowers.

mod generate;
mod io;
mod pagerank;

use std::collections::BTreeSet;

pub use generate::{gen_closed_k_regular, gen_core_periphery, gen_random_directed};
pub use io::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list};
pub use pagerank::{pagerank, CentralityVector, DEFAULT_DAMPING, MAX_PAGERANK_ITER};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RehypoNetwork {
    n: usize,
    /// Sorted `(pledger, lender)` pairs.
    edges: Vec<(usize, usize)>,
    lenders: Vec<Vec<usize>>,
    borrowers: Vec<Vec<usize>>,
}

impl RehypoNetwork {
    /// Validate an edge list and build the network.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        let mut set = BTreeSet::new();
        for (j, i) in edges {
            for idx in [j, i] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if j == i {
                return Err(Error::SelfLoop(j));
            }
            if !set.insert((j, i)) {
                return Err(Error::DuplicateEdge {
                    pledger: j,
                    lender: i,
                });
            }
        }
        Ok(Self::from_sorted_unique(n, set.into_iter().collect()))
    }

    /// Generators produce edges that are valid by construction.
    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut lenders = vec![Vec::new(); n];
        let mut borrowers = vec![Vec::new(); n];
        for &(j, i) in &edges {
            lenders[j].push(i);
            borrowers[i].push(j);
        }
        for b in &mut borrowers {
            b.sort_unstable();
        }
        RehypoNetwork {
            n,
            edges,
            lenders,
            borrowers,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, pledger: usize, lender: usize) -> bool {
        self.edges.binary_search(&(pledger, lender)).is_ok()
    }

    /// Banks `i` receiving collateral from `j` (L_j).
    pub fn lenders(&self, j: usize) -> &[usize] {
        &self.lenders[j]
    }

    /// Banks `j` pledging collateral to `i` (B_i).
    pub fn borrowers(&self, i: usize) -> &[usize] {
        &self.borrowers[i]
    }

    pub fn k_out(&self, j: usize) -> usize {
        self.lenders[j].len()
    }

    pub fn k_in(&self, i: usize) -> usize {
        self.borrowers[i].len()
    }

    pub fn k_out_all(&self) -> Vec<usize> {
        self.lenders.iter().map(Vec::len).collect()
    }

    pub fn k_in_all(&self) -> Vec<usize> {
        self.borrowers.iter().map(Vec::len).collect()
    }

    /// δ_i: 1 if bank `i` pledges to at least one lender.
    pub fn delta(&self, i: usize) -> u8 {
        u8::from(!self.lenders[i].is_empty())
    }

    pub fn delta_all(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.delta(i)).collect()
    }

    pub fn is_pledging(&self, i: usize) -> bool {
        !self.lenders[i].is_empty()
    }

    /// Relabel banks: bank `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        Self::from_edges(self.n, self.edges.iter().map(|&(j, i)| (perm[j], perm[i])))
    }

    /// A copy with extra edges; existing ones and self-loops are rejected.
    pub fn with_added_edges(&self, extra: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(
            self.n,
            self.edges.iter().copied().chain(extra.iter().copied()),
        )
    }
}

pub fn network_from_edges(n: usize, edges: &[(usize, usize)]) -> Result<RehypoNetwork> {
    RehypoNetwork::from_edges(n, edges.iter().copied())
}

/// |E| / (n(n-1)); zero for a single bank.
pub fn density(net: &RehypoNetwork) -> f64 {
    let n = net.n();
    if n < 2 {
        return 0.0;
    }
    net.edge_count() as f64 / (n * (n - 1)) as f64
}

/// Column-stochastic share matrix: `s[(i, j)]` is the share of bank `j`'s
/// outgoing collateral that lands in lender `i`'s box.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareMatrix(Matrix);

impl ShareMatrix {
    pub fn get(&self, lender: usize, pledger: usize) -> f64 {
        self.0[(lender, pledger)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    /// `S x`, the collateral each bank receives when bank `j` sends `x_j`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.0.mul_vec(x)
    }
}

pub fn share_matrix(net: &RehypoNetwork) -> ShareMatrix {
    let n = net.n();
    let mut s = Matrix::zeros(n, n);
    for j in 0..n {
        let k = net.k_out(j);
        if k == 0 {
            continue;
        }
        let share = 1.0 / k as f64;
        for &i in net.lenders(j) {
            s[(i, j)] = share;
        }
    }
    ShareMatrix(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_degrees() {
        let net = network_from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(net.k_out_all(), vec![1, 1, 0]);
        assert_eq!(net.k_in_all(), vec![0, 1, 1]);
        assert_eq!(net.delta_all(), vec![1, 1, 0]);
    }

    #[test]
    fn cycle_degrees() {
        let net = network_from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(net.k_out_all(), vec![1, 1, 1]);
        assert_eq!(net.delta_all(), vec![1, 1, 1]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            network_from_edges(2, &[(0, 0)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            network_from_edges(2, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge {
                pledger: 0,
                lender: 1
            })
        ));
        assert!(matches!(
            network_from_edges(2, &[(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        ));
        assert!(matches!(
            network_from_edges(0, &[]),
            Err(Error::EmptyNetwork)
        ));
    }

    #[test]
    fn cycle_shares() {
        let net = network_from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let s = share_matrix(&net);
        assert_eq!(s.get(1, 0), 1.0);
        assert_eq!(s.get(2, 1), 1.0);
        assert_eq!(s.get(0, 2), 1.0);
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(s.get(2, 0), 0.0);
    }

    #[test]
    fn star_shares() {
        let net = network_from_edges(3, &[(0, 1), (2, 1)]).unwrap();
        let s = share_matrix(&net);
        assert_eq!(s.get(1, 0), 1.0);
        assert_eq!(s.get(1, 2), 1.0);
        assert_eq!(s.matrix().column_sum(1), 0.0);
    }

    #[test]
    fn split_shares() {
        // node 2 pledges to lenders 3 and 0
        let net = network_from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let s = share_matrix(&net);
        assert_eq!(s.get(3, 2), 0.5);
        assert_eq!(s.get(0, 2), 0.5);
    }

    #[test]
    fn density_examples() {
        let cycle = network_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(density(&cycle), 0.25);
        let complete = gen_closed_k_regular(5, 4).unwrap();
        assert_eq!(density(&complete), 1.0);
    }
}
