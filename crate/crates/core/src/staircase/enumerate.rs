//! Depth-first enumeration of canonical profiles in lexicographically
//! decreasing order.

use serde::{Deserialize, Serialize};

use super::StaircaseMatrix;
use crate::error::{check_range, Result};

pub const SSTAR_SYM_MAX_ORDER: usize = 24;
pub const SSTAR_MAX_ORDER: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    /// All of `S*(n)`.
    Sstar,
    /// The symmetric members of `S*(n)`.
    SstarSym,
}

impl Class {
    fn check(self, n: usize) -> Result<()> {
        match self {
            Class::Sstar => check_range("n", n, 3, SSTAR_MAX_ORDER),
            Class::SstarSym => check_range("n", n, 3, SSTAR_SYM_MAX_ORDER),
        }
    }
}

/// Admissible values for row `r` (0-indexed) given the rows above it,
/// largest first.
fn candidates(class: Class, n: usize, prefix: &[usize]) -> Vec<usize> {
    let r = prefix.len();
    let row = r + 1;
    let prev = if r == 0 { n } else { prefix[r - 1] };
    let mut out: Vec<usize> = match class {
        Class::SstarSym => {
            // columns left of the diagonal are fixed by symmetry
            let lambda = prefix.iter().filter(|&&m| m >= row).count();
            if lambda + 1 < row {
                vec![lambda]
            } else {
                let mut v: Vec<usize> = (row + 1..=prev.min(n)).rev().collect();
                v.push(row - 1);
                v
            }
        }
        Class::Sstar => {
            if r > 0 && prev == r {
                // the row above reaches its own diagonal slot, so this row
                // must reach column `row - 1` as well
                vec![r]
            } else {
                (0..=prev).rev().filter(|&m| !(m == n && row == n)).collect()
            }
        }
    };
    out.retain(|&m| {
        m <= prev
            && (row != 1 || m >= 2)
            && (row != 2 || m >= 1)
            && (row + 1 != n || m < n)
            && (row != n || m + 2 <= n)
    });
    out
}

/// Lazy stream of staircase matrices extending a fixed profile prefix.
#[derive(Clone, Debug)]
pub struct ProfileIter {
    class: Class,
    n: usize,
    base: usize,
    mu: Vec<usize>,
    stack: Vec<Vec<usize>>,
    started: bool,
}

impl ProfileIter {
    pub fn new(class: Class, n: usize) -> Result<Self> {
        Self::with_prefix(class, n, Vec::new())
    }

    /// Only profiles starting with `prefix` are produced.
    pub fn with_prefix(class: Class, n: usize, prefix: Vec<usize>) -> Result<Self> {
        class.check(n)?;
        check_range("prefix length", prefix.len(), 0, n)?;
        Ok(ProfileIter {
            class,
            n,
            base: prefix.len(),
            mu: prefix,
            stack: Vec::new(),
            started: false,
        })
    }
}

impl Iterator for ProfileIter {
    type Item = StaircaseMatrix;

    fn next(&mut self) -> Option<StaircaseMatrix> {
        if !self.started {
            self.started = true;
            let admissible = (0..self.base)
                .all(|r| candidates(self.class, self.n, &self.mu[..r]).contains(&self.mu[r]));
            if !admissible {
                return None;
            }
            if self.base == self.n {
                return Some(StaircaseMatrix { mu: self.mu.clone() });
            }
            let c = candidates(self.class, self.n, &self.mu);
            self.stack.push(c.into_iter().rev().collect());
        }
        loop {
            let top = self.stack.last_mut()?;
            let Some(m) = top.pop() else {
                self.stack.pop();
                continue;
            };
            let row = self.base + self.stack.len() - 1;
            self.mu.truncate(row);
            self.mu.push(m);
            if self.mu.len() == self.n {
                return Some(StaircaseMatrix { mu: self.mu.clone() });
            }
            let c = candidates(self.class, self.n, &self.mu);
            self.stack.push(c.into_iter().rev().collect());
        }
    }
}

/// Symmetric members of `S*(n)`, `3 <= n <= 24`.
pub fn enumerate_sstar_sym(n: usize) -> Result<ProfileIter> {
    ProfileIter::new(Class::SstarSym, n)
}

/// All members of `S*(n)`, `3 <= n <= 16`.
pub fn enumerate_sstar(n: usize) -> Result<ProfileIter> {
    ProfileIter::new(Class::Sstar, n)
}

/// Every admissible prefix of the given length, in enumeration order.
/// Iterating [`ProfileIter::with_prefix`] over them and concatenating the
/// results reproduces the full stream.
pub fn prefixes(class: Class, n: usize, depth: usize) -> Result<Vec<Vec<usize>>> {
    class.check(n)?;
    let depth = depth.min(n);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    collect_prefixes(class, n, depth, &mut cur, &mut out);
    Ok(out)
}

fn collect_prefixes(
    class: Class,
    n: usize,
    depth: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == depth {
        out.push(cur.clone());
        return;
    }
    for m in candidates(class, n, cur) {
        cur.push(m);
        collect_prefixes(class, n, depth, cur, out);
        cur.pop();
    }
}

/// Size of `S*_s(n)`: the threshold graphs on `n` vertices other than the
/// complete and the empty graph.
pub fn count_sstar_sym(n: usize) -> u64 {
    if n < 2 {
        0
    } else {
        (1u64 << (n - 1)) - 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_symmetric_classes() {
        let v: Vec<_> = enumerate_sstar_sym(3).unwrap().map(|a| a.mu().to_vec()).collect();
        assert_eq!(v, vec![vec![3, 1, 1], vec![2, 1, 0]]);
        for n in 3..=12 {
            let all: Vec<_> = enumerate_sstar_sym(n).unwrap().collect();
            assert_eq!(all.len() as u64, count_sstar_sym(n), "n = {n}");
            assert!(all.iter().all(|a| a.membership().in_sstar_sym));
            assert!(all.windows(2).all(|w| w[0].mu() > w[1].mu()));
        }
    }

    #[test]
    fn nonsymmetric_stream_is_sorted_and_valid() {
        let all: Vec<_> = enumerate_sstar(6).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0].mu() > w[1].mu()));
        assert!(all.iter().all(|a| a.in_sstar()));
        let six_vertex = StaircaseMatrix::from_profile(&[6, 4, 3, 3, 2, 1]).unwrap();
        assert!(all.contains(&six_vertex));
    }

    #[test]
    fn prefix_split_reproduces_stream() {
        for class in [Class::Sstar, Class::SstarSym] {
            let full: Vec<_> = ProfileIter::new(class, 7).unwrap().collect();
            let mut joined = Vec::new();
            for p in prefixes(class, 7, 3).unwrap() {
                joined.extend(ProfileIter::with_prefix(class, 7, p).unwrap());
            }
            assert_eq!(full, joined);
        }
    }

    #[test]
    fn order_caps() {
        assert!(enumerate_sstar_sym(2).is_err());
        assert!(enumerate_sstar_sym(25).is_err());
        assert!(enumerate_sstar(17).is_err());
    }
}
