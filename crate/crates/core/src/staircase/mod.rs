//! Staircase (0,1)-matrices encoded by their row profile.
//!
//! Row `i` (1-indexed) of the matrix with profile `mu` has a one in column
//! `j` exactly when `j <= mu[i]` and `j != i`. Profiles are stored in a
//! canonical form: when a row could be described by two profile values
//! (`i - 1` and `i` both give ones in columns `1..i`), the smaller one is
//! used unless monotonicity forces the larger.

mod enumerate;
mod graph;

pub use enumerate::{
    count_sstar_sym, enumerate_sstar, enumerate_sstar_sym, prefixes, Class,
    ProfileIter, SSTAR_MAX_ORDER, SSTAR_SYM_MAX_ORDER,
};
pub use graph::{parse_edge_list, parse_graph6, parse_profile_json, SimpleGraph};

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ProfileJson", into = "ProfileJson")]
pub struct StaircaseMatrix {
    mu: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    n: usize,
    mu: Vec<usize>,
}

impl TryFrom<ProfileJson> for StaircaseMatrix {
    type Error = Error;
    fn try_from(p: ProfileJson) -> Result<Self> {
        if p.mu.len() != p.n {
            return Err(contract(format!(
                "profile has {} entries but n = {}",
                p.mu.len(),
                p.n
            )));
        }
        StaircaseMatrix::from_profile(&p.mu)
    }
}

impl From<StaircaseMatrix> for ProfileJson {
    fn from(a: StaircaseMatrix) -> Self {
        ProfileJson {
            n: a.n(),
            mu: a.mu,
        }
    }
}

/// Class flags of a staircase matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub in_s: bool,
    pub in_sstar: bool,
    pub in_sstar_sym: bool,
}

/// Parameters of `A` and of its reflected complement, plus
/// `T = (c - cbar)^2 + 2(c - cbar)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSix {
    pub c: i64,
    pub v: i64,
    pub s: i64,
    pub cbar: i64,
    pub vbar: i64,
    pub sbar: i64,
    #[serde(rename = "T")]
    pub t: i64,
}

impl ParamSix {
    pub fn new(c: i64, v: i64, s: i64, cbar: i64, vbar: i64, sbar: i64) -> Self {
        let d = c - cbar;
        ParamSix {
            c,
            v,
            s,
            cbar,
            vbar,
            sbar,
            t: d * d + 2 * d,
        }
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.c, self.v, self.s)
    }

    pub fn bar_triple(&self) -> (i64, i64, i64) {
        (self.cbar, self.vbar, self.sbar)
    }

    /// Parameters of the reflected complement: the two triples swapped.
    pub fn swapped(&self) -> Self {
        Self::new(self.cbar, self.vbar, self.sbar, self.c, self.v, self.s)
    }
}

impl StaircaseMatrix {
    /// Validates a nonincreasing profile with entries in `[0, n]` and stores
    /// its canonical form.
    pub fn from_profile(mu: &[usize]) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(contract("empty profile"));
        }
        for (i, &m) in mu.iter().enumerate() {
            if m > n {
                return Err(Error::Profile {
                    index: i,
                    message: format!("entry {m} exceeds n = {n}"),
                });
            }
            if i > 0 && m > mu[i - 1] {
                return Err(Error::Profile {
                    index: i,
                    message: format!("entry {m} is larger than the previous entry {}", mu[i - 1]),
                });
            }
        }
        let widths: Vec<usize> = mu
            .iter()
            .enumerate()
            .map(|(i, &m)| if m == i + 1 { i } else { m })
            .collect();
        Self::from_widths(&widths)
    }

    /// Builds the matrix whose row `i` has its last one in column
    /// `widths[i]` (1-indexed, 0 for an empty row) and ones in every earlier
    /// off-diagonal column.
    pub fn from_widths(widths: &[usize]) -> Result<Self> {
        let n = widths.len();
        if n == 0 {
            return Err(contract("empty width vector"));
        }
        let mut mu = vec![0; n];
        for i in (0..n).rev() {
            let row = i + 1;
            let w = widths[i];
            if w > n || w == row {
                return Err(Error::Profile {
                    index: i,
                    message: format!("width {w} is not a valid last column for row {row}"),
                });
            }
            let below = if i + 1 < n { mu[i + 1] } else { 0 };
            mu[i] = if below <= w {
                w
            } else if w + 1 == row && below == row {
                row
            } else {
                return Err(Error::Profile {
                    index: i,
                    message: format!(
                        "row {row} ends at column {w} but the row below reaches column {below}"
                    ),
                });
            };
        }
        Ok(StaircaseMatrix { mu })
    }

    /// Reads a 0/1 matrix with zero diagonal whose ones form a staircase.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        let n = m.order();
        let mut widths = vec![0; n];
        for (i, w) in widths.iter_mut().enumerate() {
            let row = m.row(i);
            if row[i] != 0.0 {
                return Err(Error::Profile {
                    index: i,
                    message: "nonzero diagonal entry".into(),
                });
            }
            if let Some(j) = row.iter().position(|&x| x != 0.0 && x != 1.0) {
                return Err(Error::Profile {
                    index: i,
                    message: format!("entry in column {} is not 0 or 1", j + 1),
                });
            }
            *w = row.iter().rposition(|&x| x == 1.0).map_or(0, |j| j + 1);
            if (0..*w).any(|j| j != i && row[j] != 1.0) {
                return Err(Error::Profile {
                    index: i,
                    message: "ones in this row are not left-justified".into(),
                });
            }
        }
        Self::from_widths(&widths)
    }

    /// `K_q` joined with `N_{n-q}`, clique first.
    pub fn split_graph(n: usize, q: usize) -> Result<Self> {
        if q > n {
            return Err(contract(format!("clique size {q} exceeds n = {n}")));
        }
        let mu: Vec<usize> = (0..n).map(|i| if i < q { n } else { q }).collect();
        Self::from_profile(&mu)
    }

    /// `K_t` plus `n - t` isolated vertices.
    pub fn clique_plus_isolated(n: usize, t: usize) -> Result<Self> {
        if t > n {
            return Err(contract(format!("clique size {t} exceeds n = {n}")));
        }
        let mu: Vec<usize> = (0..n).map(|i| if i < t { t } else { 0 }).collect();
        Self::from_profile(&mu)
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Canonical profile.
    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    /// Last one in each row (1-indexed column, 0 for an empty row).
    pub fn widths(&self) -> Vec<usize> {
        self.mu
            .iter()
            .enumerate()
            .map(|(i, &m)| if m == i + 1 { i } else { m })
            .collect()
    }

    /// Entry `a_ij` with 0-indexed `i`, `j`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> bool {
        i != j && j < self.mu[i]
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n(), |i, j| if self.entry(i, j) { 1.0 } else { 0.0 })
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.mu
            .iter()
            .enumerate()
            .map(|(i, &m)| if m > i { m - 1 } else { m })
            .collect()
    }

    pub fn ones(&self) -> usize {
        self.row_sums().iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    pub fn in_sstar(&self) -> bool {
        let n = self.n();
        n >= 2 && self.mu[0] >= 2 && self.mu[1] >= 1 && self.mu[n - 2] < n && self.mu[n - 1] + 2 <= n
    }

    pub fn membership(&self) -> Membership {
        let in_sstar = self.in_sstar();
        Membership {
            in_s: true,
            in_sstar,
            in_sstar_sym: in_sstar && self.is_symmetric(),
        }
    }

    fn require_sstar(&self, what: &str) -> Result<()> {
        if self.in_sstar() {
            Ok(())
        } else {
            Err(contract(format!(
                "{what} needs a matrix in the class S*(n); profile {:?} is not",
                self.mu
            )))
        }
    }

    /// Complement reflected through the anti-diagonal:
    /// `abar_ij = 1 - a_{n-j+1, n-i+1}` off the diagonal.
    pub fn reflect_complement(&self) -> Result<Self> {
        self.require_sstar("reflect_complement")?;
        Ok(self.reflect_unchecked())
    }

    pub(crate) fn reflect_unchecked(&self) -> Self {
        let n = self.n();
        // row i of the reflection has ones in columns j <= #{p : mu_p <= n - i}
        let mu: Vec<usize> = (1..=n)
            .map(|i| self.mu.iter().filter(|&&m| m <= n - i).count())
            .collect();
        Self::from_profile(&mu).expect("reflection of a staircase is a staircase")
    }

    /// `(c, v, s)`.
    pub fn params(&self) -> Result<(i64, i64, i64)> {
        self.require_sstar("params")?;
        Ok(self.params_unchecked())
    }

    pub(crate) fn params_unchecked(&self) -> (i64, i64, i64) {
        let r = self.row_sums();
        let n = self.n();
        let mut c = 0usize;
        let mut acc = 0usize;
        let mut prefix = vec![0usize; n + 1];
        for i in 1..=n {
            acc += r[i - 1];
            prefix[i] = acc;
            if acc > i * (i - 1) {
                c = i;
            }
        }
        let v = if c < n { r[c] } else { 0 };
        let s = prefix[c] as i64 - (c * c.saturating_sub(1)) as i64;
        (c as i64, v as i64, s)
    }

    pub fn full_params(&self) -> Result<ParamSix> {
        self.require_sstar("full_params")?;
        let (c, v, s) = self.params_unchecked();
        let (cb, vb, sb) = self.reflect_unchecked().params_unchecked();
        Ok(ParamSix::new(c, v, s, cb, vb, sb))
    }

    /// Copy with entry `(i, j)` (0-indexed) set to `value`, if the result is
    /// still a staircase.
    pub fn with_entry(&self, i: usize, j: usize, value: bool) -> Result<Self> {
        let n = self.n();
        if i >= n || j >= n || i == j {
            return Err(contract(format!("cell ({}, {}) is not off-diagonal", i + 1, j + 1)));
        }
        let mut d = self.to_dense();
        d[(i, j)] = if value { 1.0 } else { 0.0 };
        Self::from_dense(&d)
    }
}

impl std::fmt::Debug for StaircaseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Staircase{:?}", self.mu)
    }
}
