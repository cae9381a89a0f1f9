use std::time::Instant;

use super::{classify, Best, SearchSpace, VerifyReport};
use crate::bounds::rho0_closed;
use crate::error::{check_range, Result};
use crate::linalg::{sym_eigen_max, DenseMatrix};
use crate::par::Exec;
use crate::staircase::SimpleGraph;

/// Largest order run by default (`2^21` labeled graphs).
pub const BRUTE_DEFAULT_MAX: usize = 7;
/// Largest order accepted with the opt-in flag (`2^28` graphs, hours).
pub const BRUTE_OPT_IN_MAX: usize = 8;

const CHUNKS: u64 = 256;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    // graph6 order: column by column through the upper triangle
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

fn graph_of(n: usize, pairs: &[(usize, usize)], mask: u64) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    SimpleGraph::from_edges(n, &edges).expect("edges are in range")
}

fn rho_of(n: usize, pairs: &[(usize, usize)], mask: u64, buf: &mut [f64]) -> Result<f64> {
    buf.iter_mut().for_each(|x| *x = 0.0);
    for (b, &(i, j)) in pairs.iter().enumerate() {
        if mask >> b & 1 == 1 {
            buf[i * n + j] = 1.0;
            buf[j * n + i] = 1.0;
        }
    }
    sym_eigen_max(&DenseMatrix::from_row_major(n, buf.to_vec())?)
}

/// Maximum of `rho(G) + rho(complement of G)` over all labeled graphs of
/// order `3 <= n <= 7`.
pub fn verify_bruteforce(n: usize, exec: Exec) -> Result<VerifyReport> {
    verify_bruteforce_with(n, exec, false)
}

/// As [`verify_bruteforce`]; `allow_large` admits `n = 8`.
pub fn verify_bruteforce_with(n: usize, exec: Exec, allow_large: bool) -> Result<VerifyReport> {
    let cap = if allow_large {
        BRUTE_OPT_IN_MAX
    } else {
        BRUTE_DEFAULT_MAX
    };
    check_range("n", n, 3, cap)?;
    let start = Instant::now();
    let pairs = pairs(n);
    let e = pairs.len();
    let full = (1u64 << e) - 1;
    // each mask below `half` stands for itself and its complement
    let half = 1u64 << (e - 1);
    let chunks = CHUNKS.min(half);
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (half * c / chunks, half * (c + 1) / chunks))
        .collect();
    let parts = exec.map(bounds, |(lo, hi)| -> Result<Best<u64>> {
        let mut best = Best::new();
        let mut buf = vec![0.0; n * n];
        for mask in lo..hi {
            let v = rho_of(n, &pairs, mask, &mut buf)? + rho_of(n, &pairs, full ^ mask, &mut buf)?;
            best.offer(mask, v);
            best.offer(full ^ mask, v);
        }
        Ok(best)
    });
    let mut best = Best::new();
    for p in parts {
        best = best.merge(p?);
    }
    let graphs = best.hits.iter().map(|&(m, _)| graph_of(n, &pairs, m));
    let (arg_max, counterexamples, gap) = classify(n, best.value, graphs)?;
    Ok(VerifyReport {
        n,
        search_space: SearchSpace::AllGraphs,
        max_value: best.value,
        arg_max,
        rho0_expected: rho0_closed(n)?,
        gap,
        counterexamples,
        instances_checked: 1u64 << e,
        all_graphs_max: None,
        elapsed: start.elapsed().as_secs_f64(),
    })
}
