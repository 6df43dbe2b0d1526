use rand::seq::index::sample;
use rand::Rng as _;

use super::RehypoNetwork;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Circulant digraph with offsets `1..=k`: bank `i` pledges to
/// `i+1, …, i+k (mod n)`. Contains the spanning n-cycle.
pub fn gen_closed_k_regular(n: usize, k: usize) -> Result<RehypoNetwork> {
    if n < 2 || k == 0 || k > n - 1 {
        return Err(Error::InvalidDegree { n, k });
    }
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (1..=k).map(move |o| (i, (i + o) % n)))
        .collect();
    edges.sort_unstable();
    Ok(RehypoNetwork::from_sorted_unique(n, edges))
}

/// Each ordered pair `(j, i)`, `j != i`, is an edge with probability `p`.
/// Pairs are visited in lexicographic order, one uniform draw each.
pub fn gen_random_directed(n: usize, p: f64, seed: u64) -> Result<RehypoNetwork> {
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    check_probability(p)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if i != j && rng.random::<f64>() < p {
                edges.push((j, i));
            }
        }
    }
    Ok(RehypoNetwork::from_sorted_unique(n, edges))
}

/// Core banks are `0..n_core`, periphery banks `n_core..n`.
///
/// Core–core ordered pairs are drawn with probability `p_core`; every
/// periphery bank then pledges to `k_per` distinct core banks chosen
/// uniformly. Periphery banks never receive collateral.
pub fn gen_core_periphery(
    n: usize,
    n_core: usize,
    p_core: f64,
    k_per: usize,
    seed: u64,
) -> Result<RehypoNetwork> {
    if n_core == 0 || n_core >= n {
        return Err(Error::InvalidCoreSize(format!(
            "need 1 <= n_core < n, got n_core={n_core}, n={n}"
        )));
    }
    if k_per == 0 || k_per > n_core {
        return Err(Error::InvalidCoreSize(format!(
            "need 1 <= k_per <= n_core, got k_per={k_per}, n_core={n_core}"
        )));
    }
    check_probability(p_core)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for j in 0..n_core {
        for i in 0..n_core {
            if i != j && rng.random::<f64>() < p_core {
                edges.push((j, i));
            }
        }
    }
    for j in n_core..n {
        let mut targets = sample(&mut rng, n_core, k_per).into_vec();
        targets.sort_unstable();
        edges.extend(targets.into_iter().map(|i| (j, i)));
    }
    Ok(RehypoNetwork::from_sorted_unique(n, edges))
}
