use std::time::Instant;

use super::{classify, verify_bruteforce, Best, SearchSpace, VerifyReport, GAP_TOL};
use crate::bounds::rho0_closed;
use crate::error::Result;
use crate::linalg::sym_eigen_max;
use crate::par::Exec;
use crate::staircase::{prefixes, Class, ProfileIter, SimpleGraph};

/// Orders up to which [`verify_staircase`] also runs the brute force.
pub const STAIRCASE_CROSS_CHECK_MAX: usize = 7;

const MIN_CHUNKS: usize = 64;

/// Splits the enumeration of `class` at order `n` into prefix chunks, runs
/// `f` on each chunk's stream and returns the results in stream order.
pub fn sweep_sym<R, F>(class: Class, n: usize, exec: Exec, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(ProfileIter) -> R + Sync + Send,
{
    let mut depth = 1;
    let mut heads = prefixes(class, n, depth)?;
    while heads.len() < MIN_CHUNKS && depth < n {
        depth += 1;
        heads = prefixes(class, n, depth)?;
    }
    Ok(exec.map(heads, |p| {
        f(ProfileIter::with_prefix(class, n, p).expect("prefix of a valid order"))
    }))
}

/// Maximum of `rho(A) + rho(Abar)` over the symmetric staircase class,
/// `3 <= n <= 24`.
pub fn verify_staircase(n: usize, exec: Exec) -> Result<VerifyReport> {
    let start = Instant::now();
    let parts = sweep_sym(Class::SstarSym, n, exec, |it| -> Result<(Best<Vec<usize>>, u64)> {
        let mut best = Best::new();
        let mut count = 0;
        for a in it {
            let abar = a.reflect_complement()?;
            let v = sym_eigen_max(&a.to_dense())? + sym_eigen_max(&abar.to_dense())?;
            best.offer(a.mu().to_vec(), v);
            count += 1;
        }
        Ok((best, count))
    })?;
    let mut best = Best::new();
    let mut instances = 0;
    for p in parts {
        let (b, c) = p?;
        best = best.merge(b);
        instances += c;
    }
    let graphs = best
        .hits
        .iter()
        .map(|(mu, _)| {
            let a = crate::staircase::StaircaseMatrix::from_profile(mu)?;
            SimpleGraph::from_staircase(&a)
        })
        .collect::<Result<Vec<_>>>()?;
    let (arg_max, mut counterexamples, gap) = classify(n, best.value, graphs)?;
    let mut all_graphs_max = None;
    if n <= STAIRCASE_CROSS_CHECK_MAX {
        let all = verify_bruteforce(n, exec)?.max_value;
        if (all - best.value).abs() > GAP_TOL {
            counterexamples.push(format!(
                "staircase maximum {:.12} differs from the all-graphs maximum {all:.12}",
                best.value
            ));
        }
        all_graphs_max = Some(all);
    }
    Ok(VerifyReport {
        n,
        search_space: SearchSpace::StaircaseSym,
        max_value: best.value,
        arg_max,
        rho0_expected: rho0_closed(n)?,
        gap,
        counterexamples,
        instances_checked: instances,
        all_graphs_max,
        elapsed: start.elapsed().as_secs_f64(),
    })
}
