use serde::{Deserialize, Serialize};

use super::certificate::final_case_instance;
use crate::error::{contract, Result};
use crate::linalg::{is_rooted, quotient, rho_r, spectral_radius_nonneg, sym_eigen_max, DenseMatrix, Partition};
use crate::staircase::{enumerate_sstar, enumerate_sstar_sym, ParamSix, StaircaseMatrix};

/// Slack allowed in `rho(Abar) <= rho_r(M3)` and in the quotient identity.
pub const ROOTED_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootedReport {
    pub mu: Vec<usize>,
    pub params: ParamSix,
    /// Built from the row sums of `Abar`, order `cbar + 1`.
    pub m3: DenseMatrix,
    /// Smallest rootedness constant of `m3`.
    pub rooted_d: Option<f64>,
    /// Failed block inequalities, one entry per `(a, b)` block.
    pub hypothesis_violations: Vec<String>,
    pub rho_bar: f64,
    pub rho_r_m3: f64,
    /// Quotient of `m3` transposed by `{1..vbar}, {vbar+1..cbar}, {cbar+1}`,
    /// transposed back.
    pub reduced: Option<DenseMatrix>,
    pub rho_r_reduced: Option<f64>,
    /// Parameters have the shape `(3k+2, 2k+1, 2k+1)`, `v = k+1`, `vbar = k`.
    pub final_case_shape: bool,
    /// In that shape, whether `reduced` equals the closed-form `M2`.
    pub matches_m2: Option<bool>,
    /// `(lhs, rhs)` of `sum_{i <= vbar} (r_i(Abar) - cbar + 1) = sbar - a`.
    pub prefix_identity: (i64, i64),
    pub passed: bool,
}

/// Whether `p` has the shape of the last case at order `n`.
pub fn is_final_case_shape(n: usize, p: &ParamSix) -> bool {
    if n % 3 != 2 {
        return false;
    }
    let k = (n / 3) as i64;
    p.c == 2 * k + 1 && p.cbar == 2 * k + 1 && p.v == k + 1 && p.vbar == k
}

fn perron(a: &StaircaseMatrix) -> Result<f64> {
    let d = a.to_dense();
    if a.is_symmetric() {
        sym_eigen_max(&d)
    } else {
        spectral_radius_nonneg(&d)
    }
}

/// Bounds `rho(Abar)` through the rooted matrix `M3` for the partition of
/// `Abar` into its first `cbar` rows as singletons and the rest, then
/// reduces `M3` by an equitable partition of its transpose.
pub fn rooted_bound_check(a: &StaircaseMatrix) -> Result<RootedReport> {
    let n = a.n();
    let p = a.full_params()?;
    let abar = a.reflect_complement()?;
    let cb = p.cbar as usize;
    let vb = p.vbar as usize;
    if cb + 1 > n || vb == 0 || vb >= cb {
        return Err(contract(format!(
            "rooted_bound_check needs 0 < vbar < cbar < n, got vbar = {vb}, cbar = {cb}"
        )));
    }
    let r = abar.row_sums();
    let l = cb + 1;
    let m3 = DenseMatrix::from_fn(l, |i, j| {
        if i < cb && j < cb {
            if i == j {
                0.0
            } else {
                1.0
            }
        } else if i == cb {
            if j < vb {
                1.0
            } else {
                0.0
            }
        } else {
            // i < cb, j = cb
            r[i] as f64 - cb as f64 + 1.0
        }
    });

    // blocks {1}, ..., {cbar}, {cbar+1, ..., n}
    let block = |b: usize| -> Vec<usize> {
        if b < cb {
            vec![b]
        } else {
            (cb..n).collect()
        }
    };
    let mut violations = Vec::new();
    for ai in 0..l {
        let rows = block(ai);
        for b in 0..l - 1 {
            let cols = block(b);
            let worst = rows
                .iter()
                .map(|&i| cols.iter().filter(|&&j| abar.entry(i, j)).count())
                .max()
                .unwrap_or(0) as f64;
            if worst > m3[(ai, b)] {
                violations.push(format!(
                    "block ({}, {}): row sum {worst} exceeds {}",
                    ai + 1,
                    b + 1,
                    m3[(ai, b)]
                ));
            }
        }
        let worst = rows.iter().map(|&i| r[i]).max().unwrap_or(0) as f64;
        let cap: f64 = m3.row(ai).iter().sum();
        if worst > cap {
            violations.push(format!(
                "block ({}, *): row sum {worst} exceeds {cap}",
                ai + 1
            ));
        }
    }
    let rooted_d = is_rooted(&m3);
    let rho_bar = perron(&abar)?;
    let rho_r_m3 = rho_r(&m3)?;

    let pi2 = Partition::new(l, vec![(0..vb).collect(), (vb..cb).collect(), vec![cb]])?;
    let reduced = quotient(&m3.transpose(), &pi2)?.map(|q| q.transpose());
    let rho_r_reduced = reduced.as_ref().map(rho_r).transpose()?;

    let a_sum: i64 = (vb..cb).map(|i| r[i] as i64 - cb as i64 + 1).sum();
    let lhs: i64 = (0..vb).map(|i| r[i] as i64 - cb as i64 + 1).sum();
    let prefix_identity = (lhs, p.sbar - a_sum);

    let final_case_shape = is_final_case_shape(n, &p);
    let matches_m2 = match (&reduced, final_case_shape) {
        (Some(q), true) => {
            let m2 = final_case_instance((n / 3) as i64, p.s, a_sum)?.m2;
            Some(q == &m2)
        }
        _ => None,
    };

    let passed = violations.is_empty()
        && rooted_d.is_some()
        && rho_bar <= rho_r_m3 + ROOTED_TOL
        && rho_r_reduced.is_some_and(|x| (x - rho_r_m3).abs() <= ROOTED_TOL)
        && lhs == prefix_identity.1
        && matches_m2 != Some(false);
    Ok(RootedReport {
        mu: a.mu().to_vec(),
        params: p,
        m3,
        rooted_d,
        hypothesis_violations: violations,
        rho_bar,
        rho_r_m3,
        reduced,
        rho_r_reduced,
        final_case_shape,
        matches_m2,
        prefix_identity,
        passed,
    })
}

/// First member of `S*(3k+2)` with the last-case parameter shape, taking a
/// symmetric one when the symmetric class has any.
pub fn rooted_synthetic(k: usize) -> Result<Option<StaircaseMatrix>> {
    let n = 3 * k + 2;
    let shaped = |a: &StaircaseMatrix| {
        a.full_params()
            .map(|p| is_final_case_shape(n, &p))
            .unwrap_or(false)
    };
    if let Some(a) = enumerate_sstar_sym(n)?.find(shaped) {
        return Ok(Some(a));
    }
    Ok(enumerate_sstar(n)?.find(shaped))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_final_case_instance() {
        let a = rooted_synthetic(1).unwrap().unwrap();
        assert!(a.is_symmetric());
        let rep = rooted_bound_check(&a).unwrap();
        assert!(rep.final_case_shape);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.matches_m2, Some(true));
        assert!(rep.rho_bar <= rep.rho_r_m3 + 1e-8);
    }
}
