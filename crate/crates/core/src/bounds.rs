//! Closed-form bounds and target values: the row-sum bounds `phi_ell`, the
//! parameter bound `phi`, the quartic `g`, the extremal value `rho0` and the
//! complete-split-graph spectra.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, contract, Result};
use crate::linalg::{
    largest_real_root, rho_r, spectral_radius_nonneg, sym_eigen_max, DenseMatrix, Polynomial,
};
use crate::staircase::{ParamSix, StaircaseMatrix};

/// Tolerance used to decide numerically that `rho(A) = phi(A)`.
pub const EQUALITY_TOL: f64 = 1e-8;
/// Tolerance for the arg-max scan over `q` in [`rho0`].
pub const BEST_Q_TOL: f64 = 1e-9;

/// `phi_ell` from a nonincreasing row-sum vector; `ell` is 1-indexed.
pub fn phi_ell_from_row_sums(r: &[f64], ell: usize) -> Result<f64> {
    check_range("ell", ell, 1, r.len())?;
    if let Some(i) = r.windows(2).position(|w| w[1] > w[0]) {
        return Err(contract(format!(
            "row sums must be nonincreasing; r[{}] = {} < r[{}] = {}",
            i + 1,
            r[i],
            i + 2,
            r[i + 1]
        )));
    }
    let rl = r[ell - 1];
    let excess: f64 = r[..ell - 1].iter().map(|ri| ri - rl).sum();
    Ok(0.5 * (rl - 1.0 + ((rl + 1.0) * (rl + 1.0) + 4.0 * excess).sqrt()))
}

fn sorted_row_sums(a: &StaircaseMatrix) -> Vec<f64> {
    let mut r: Vec<f64> = a.row_sums().into_iter().map(|x| x as f64).collect();
    r.sort_by(|x, y| y.partial_cmp(x).unwrap());
    r
}

/// `phi_ell(A)` with the row sums of `A` sorted nonincreasingly first. A
/// nonsymmetric staircase can have a row sum one larger than the row above.
pub fn phi_ell(a: &StaircaseMatrix, ell: usize) -> Result<f64> {
    phi_ell_from_row_sums(&sorted_row_sums(a), ell)
}

/// `phi_ell(A)` for every `ell` in `1..=n`.
pub fn phi_ell_all(a: &StaircaseMatrix) -> Vec<f64> {
    let r = sorted_row_sums(a);
    (1..=r.len())
        .map(|l| phi_ell_from_row_sums(&r, l).expect("sorted input"))
        .collect()
}

/// `(v - 1 + sqrt((2c - v - 1)^2 + 4s)) / 2`.
pub fn phi_from_params(c: i64, v: i64, s: i64) -> f64 {
    let e = (2 * c - v - 1) * (2 * c - v - 1) + 4 * s;
    0.5 * ((v - 1) as f64 + (e as f64).sqrt())
}

pub fn phi(a: &StaircaseMatrix) -> Result<f64> {
    let (c, v, s) = a.params()?;
    Ok(phi_from_params(c, v, s))
}

/// The two 2x2 matrices realizing `phi`: `[[c-1, s], [1, v-c]]` and
/// `[[2c-1, s], [1, v]]`, the second shifted by `c`.
pub fn realization_matrices(c: i64, v: i64, s: i64) -> (DenseMatrix, DenseMatrix) {
    let (c, v, s) = (c as f64, v as f64, s as f64);
    let m = DenseMatrix::from_rows(&[[c - 1.0, s], [1.0, v - c]]).unwrap();
    let shifted = DenseMatrix::from_rows(&[[2.0 * c - 1.0, s], [1.0, v]]).unwrap();
    (m, shifted)
}

/// `phi(A)` as the largest real eigenvalue of `[[c-1, s], [1, v-c]]`.
pub fn phi_via_2x2(a: &StaircaseMatrix) -> Result<f64> {
    let (c, v, s) = a.params()?;
    rho_r(&realization_matrices(c, v, s).0)
}

/// Same value through the nonnegative form `rho([[2c-1, s], [1, v]]) - c`.
pub fn phi_via_2x2_shifted(a: &StaircaseMatrix) -> Result<f64> {
    let (c, v, s) = a.params()?;
    Ok(spectral_radius_nonneg(&realization_matrices(c, v, s).1)? - c as f64)
}

/// Structural forms for which `rho(A) = phi(A)` on symmetric staircases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum EqualityWitness {
    /// `K_{r1+1} + N_{n-r1-1}`.
    Clique { clique: usize, isolated: usize },
    /// `(K_{t-1} v N_{r1+2-t}) + N_{n-r1-1}` with `2 <= t <= c+1`.
    SplitJoin {
        t: usize,
        clique: usize,
        independent: usize,
        isolated: usize,
    },
}

/// Matches `A` against the two equality forms. Structural only; see
/// [`equality_numeric`] for the eigenvalue side.
pub fn equality_case(a: &StaircaseMatrix) -> Result<Option<EqualityWitness>> {
    if !a.membership().in_sstar_sym {
        return Err(contract(
            "equality_case is only characterized for symmetric members of S*(n)",
        ));
    }
    let n = a.n();
    let r1 = a.row_sums()[0];
    if r1 + 1 > n {
        return Ok(None);
    }
    let isolated = n - r1 - 1;
    if *a == StaircaseMatrix::clique_plus_isolated(n, r1 + 1)? {
        return Ok(Some(EqualityWitness::Clique {
            clique: r1 + 1,
            isolated,
        }));
    }
    let (c, _, _) = a.params()?;
    for t in 2..=(c as usize + 1) {
        if t > r1 + 1 {
            break;
        }
        let clique = t - 1;
        let independent = r1 + 2 - t;
        let mu: Vec<usize> = (0..n)
            .map(|i| {
                if i < clique {
                    r1 + 1
                } else if i < r1 + 1 {
                    clique
                } else {
                    0
                }
            })
            .collect();
        if *a == StaircaseMatrix::from_profile(&mu)? {
            return Ok(Some(EqualityWitness::SplitJoin {
                t,
                clique,
                independent,
                isolated,
            }));
        }
    }
    Ok(None)
}

/// Whether `|rho(A) - phi(A)| <= 1e-8`.
pub fn equality_numeric(a: &StaircaseMatrix) -> Result<bool> {
    let rho = sym_eigen_max(&a.to_dense())?;
    Ok((rho - phi(a)?).abs() <= EQUALITY_TOL)
}

/// `E = (2c - v - 1)^2 + 4s`, `F = (2cbar - vbar - 1)^2 + 4sbar`.
pub fn ef_terms(p: &ParamSix) -> (f64, f64) {
    let (e, f) = ef_terms_exact(p);
    (e as f64, f as f64)
}

pub(crate) fn ef_terms_exact(p: &ParamSix) -> (i64, i64) {
    let e = (2 * p.c - p.v - 1).pow(2) + 4 * p.s;
    let f = (2 * p.cbar - p.vbar - 1).pow(2) + 4 * p.sbar;
    (e, f)
}

/// `g(x) = y^2 (y^2 - 2(E+F)) + (E-F)^2` with `y = 2x - v - vbar + 2`,
/// expanded. `phi(A) + phi(Abar)` is a root.
pub fn g_quartic(p: &ParamSix) -> Polynomial {
    let (e, f) = ef_terms_exact(p);
    let y = Polynomial::new(vec![(2 - p.v - p.vbar) as f64, 2.0]);
    let y2 = y.mul(&y);
    y2.mul(&y2)
        .sub(&y2.scale(2.0 * (e + f) as f64))
        .add(&Polynomial::constant(((e - f) * (e - f)) as f64))
}

/// Closed form for the extremal value together with its derived data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rho0Breakdown {
    pub n: usize,
    pub k: usize,
    pub k_n: u8,
    pub rho0: f64,
    /// `rho0 - (4n - 5) / 3`.
    pub u_n: f64,
    /// Monic quadratic with `rho0` as its larger root.
    pub f: Polynomial,
    pub best_q: Vec<usize>,
}

/// Piecewise closed form by residue class of `n` mod 3.
pub fn rho0_closed(n: usize) -> Result<f64> {
    check_range("n", n, 3, usize::MAX)?;
    let k = (n / 3) as f64;
    Ok(match n % 3 {
        0 => 0.5 * (5.0 * k - 3.0 + (9.0 * k * k - 2.0 * k + 1.0).sqrt()),
        1 => 0.5 * (5.0 * k - 1.0 + (9.0 * k * k + 2.0 * k + 1.0).sqrt()),
        _ => 4.0 * k + 1.0,
    })
}

/// The single-expression form with the constant `k_n`.
pub fn rho0_single_formula(n: usize) -> Result<f64> {
    check_range("n", n, 3, usize::MAX)?;
    let nf = n as f64;
    let fl = (n / 3) as f64;
    let k_n = if n % 3 == 2 { 0.0 } else { 1.0 };
    let inner = (2.0 * nf - 1.0) / 3.0 + fl;
    Ok(0.5 * (2.0 * nf - 3.0 - fl + (inner * inner + 8.0 * k_n / 9.0).sqrt()))
}

/// `f(x)` for the residue class of `n`.
pub fn rho0_quadratic(n: usize) -> Result<Polynomial> {
    check_range("n", n, 3, usize::MAX)?;
    let k = (n / 3) as f64;
    let (b, c) = match n % 3 {
        0 => (5.0 * k - 3.0, 4.0 * k * k - 7.0 * k + 2.0),
        1 => (5.0 * k - 1.0, 4.0 * k * k - 3.0 * k),
        _ => (5.0 * k + 1.0, 4.0 * k * k + k),
    };
    Ok(Polynomial::new(vec![c, -b, 1.0]))
}

/// Strict bounds `(lo, hi)` on `u_n` for `n = 3k` and `n = 3k+1`; `None`
/// for `n = 3k+2` where `u_n = 0`.
pub fn u_n_bounds(n: usize) -> Option<(f64, f64)> {
    let k = (n / 3) as f64;
    match n % 3 {
        0 => Some((4.0 / (54.0 * k - 3.0), 2.0 / (27.0 * k - 3.0))),
        1 => Some((4.0 / (54.0 * k + 9.0), 2.0 / (27.0 * k + 3.0))),
        _ => None,
    }
}

/// Values of `q` maximizing `rho + rho_bar` over complete split graphs
/// `K_q v N_{n-q}`, found by scanning.
pub fn best_split_q(n: usize) -> Result<Vec<usize>> {
    check_range("n", n, 3, usize::MAX)?;
    let sums: Vec<f64> = (1..=n - 2)
        .map(|q| split_rho(n, q).map(|(r, rb)| r + rb))
        .collect::<Result<_>>()?;
    let best = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((1..=n - 2)
        .filter(|q| best - sums[q - 1] <= BEST_Q_TOL)
        .collect())
}

/// `q` values predicted to maximize: `floor(n/3)`, plus `ceil(n/3)` when
/// `n = 2 (mod 3)`.
pub fn predicted_best_q(n: usize) -> Vec<usize> {
    if n % 3 == 2 {
        vec![n / 3, n / 3 + 1]
    } else {
        vec![n / 3]
    }
}

pub fn rho0(n: usize) -> Result<Rho0Breakdown> {
    let rho0 = rho0_closed(n)?;
    Ok(Rho0Breakdown {
        n,
        k: n / 3,
        k_n: u8::from(n % 3 != 2),
        rho0,
        u_n: rho0 - (4.0 * n as f64 - 5.0) / 3.0,
        f: rho0_quadratic(n)?,
        best_q: best_split_q(n)?,
    })
}

/// Largest root of `f`, an independent route to `rho0`.
pub fn rho0_from_quadratic(n: usize) -> Result<f64> {
    let f = rho0_quadratic(n)?;
    largest_real_root(&f, 0.0, 2.0 * n as f64).ok_or(crate::Error::NoRealEigenvalue)
}

/// `(rho, rho_bar)` of `K_q v N_{n-q}`.
pub fn split_rho(n: usize, q: usize) -> Result<(f64, f64)> {
    check_range("q", q, 1, n.saturating_sub(2).max(1))?;
    if n < 3 {
        return Err(contract(format!("split_rho needs n >= 3, got {n}")));
    }
    let (nf, qf) = (n as f64, q as f64);
    let rho = 0.5 * (qf - 1.0 + ((qf - 1.0).powi(2) + 4.0 * qf * (nf - qf)).sqrt());
    Ok((rho, nf - qf - 1.0))
}

/// `ceil(rho(K_q v N_{n-q}))`, computed in integers.
pub fn split_ceil_rho(n: usize, q: usize) -> i64 {
    let (n, q) = (n as i64, q as i64);
    // rho is the positive root of x^2 - (q-1)x - q(n-q)
    let mut c = 0;
    while c * c - (q - 1) * c - q * (n - q) < 0 {
        c += 1;
    }
    c
}

/// Right-hand side of the `s + sbar` bound, times four, as an integer.
pub fn s_sum_bound_times4(p: &ParamSix, n: usize) -> i64 {
    let n = n as i64;
    let sum = p.c + p.cbar;
    let diff = p.c - p.cbar;
    -3 * sum * sum + 4 * (n + 1) * sum - diff * diff - 4 * p.v - 4 * p.cbar
}

/// Upper bound on `s + sbar` when `c + cbar >= n`, and whether it is
/// attained.
pub fn s_sum_bound(p: &ParamSix, n: usize) -> Result<(f64, bool)> {
    if p.c + p.cbar < n as i64 {
        return Err(contract(format!(
            "s_sum_bound needs c + cbar >= n, got {} + {} < {n}",
            p.c, p.cbar
        )));
    }
    let b4 = s_sum_bound_times4(p, n);
    Ok((b4 as f64 / 4.0, 4 * (p.s + p.sbar) == b4))
}

/// `3(c + cbar) < 4n + 1`.
pub fn global_cap_holds(p: &ParamSix, n: usize) -> bool {
    3 * (p.c + p.cbar) < 4 * n as i64 + 1
}

/// Closed form of `E + F` under `v = n - cbar`, `vbar = n - c - 1` and
/// equality in the `s + sbar` bound.
pub fn e_plus_f_closed(n: usize, c: i64, cbar: i64) -> f64 {
    let n = n as f64;
    let sum = (c + cbar) as f64;
    let diff = (c - cbar) as f64;
    1.5 * sum * sum - (2.0 * n - 1.0) * sum + 2.0 * n * n - 2.0 * n + 1.0
        - 0.5 * diff * diff
        - diff
}

/// Every bound for one staircase matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub rho: f64,
    pub rho_bar: f64,
    pub phi: f64,
    pub phi_bar: f64,
    pub phi_ell: Vec<f64>,
    pub equality_case: Option<EqualityWitness>,
    pub params: ParamSix,
}

fn perron(a: &StaircaseMatrix) -> Result<f64> {
    let d = a.to_dense();
    if a.is_symmetric() {
        sym_eigen_max(&d)
    } else {
        spectral_radius_nonneg(&d)
    }
}

pub fn bound_report(a: &StaircaseMatrix) -> Result<BoundReport> {
    let params = a.full_params()?;
    let abar = a.reflect_complement()?;
    let equality_case = if a.is_symmetric() {
        equality_case(a)?
    } else {
        None
    };
    Ok(BoundReport {
        rho: perron(a)?,
        rho_bar: perron(&abar)?,
        phi: phi_from_params(params.c, params.v, params.s),
        phi_bar: phi_from_params(params.cbar, params.vbar, params.sbar),
        phi_ell: phi_ell_all(a),
        equality_case,
        params,
    })
}
