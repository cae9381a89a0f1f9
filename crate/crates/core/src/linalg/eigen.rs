//! Eigenvalue kernels backed by nalgebra: the symmetric solver for
//! symmetric matrices and a real Schur form for the Perron value of
//! nonnegative ones.

use nalgebra::{DMatrix, Schur};

use super::{rho_r, DenseMatrix, CHAR_POLY_MAX_ORDER};
use crate::error::{contract, Result};

const SYM_TOL: f64 = 1e-12;
/// The Schur iteration stalls on a few 0/1 matrices; those fall back to the
/// characteristic polynomial.
const SCHUR_EPS: f64 = 1e-13;
const SCHUR_MAX_ITERS: usize = 2_000;

fn check_symmetric(a: &DenseMatrix) -> Result<()> {
    let n = a.order();
    for i in 0..n {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > SYM_TOL {
                return Err(contract(format!(
                    "matrix is not symmetric at ({i}, {j}): {} vs {}",
                    a[(i, j)],
                    a[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

fn to_nalgebra(a: &DenseMatrix) -> DMatrix<f64> {
    let n = a.order();
    DMatrix::from_row_slice(n, n, a.as_slice())
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    check_symmetric(a)?;
    if a.order() == 0 {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = to_nalgebra(a).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(ev)
}

/// Largest eigenvalue of a symmetric matrix.
pub fn sym_eigen_max(a: &DenseMatrix) -> Result<f64> {
    Ok(sym_eigenvalues(a)?.last().copied().unwrap_or(0.0))
}

/// Perron value of a nonnegative matrix: the largest eigenvalue when the
/// matrix is symmetric, otherwise the largest modulus over the eigenvalues of
/// its real Schur form.
pub fn spectral_radius_nonneg(a: &DenseMatrix) -> Result<f64> {
    if let Some(pos) = a.as_slice().iter().position(|&x| x < 0.0) {
        let n = a.order();
        return Err(contract(format!(
            "negative entry at ({}, {})",
            pos / n,
            pos % n
        )));
    }
    if a.order() == 0 {
        return Ok(0.0);
    }
    if a.is_symmetric(SYM_TOL) {
        return sym_eigen_max(a);
    }
    match Schur::try_new(to_nalgebra(a), SCHUR_EPS, SCHUR_MAX_ITERS) {
        Some(schur) => Ok(schur
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)),
        // the Perron value is the largest real root
        None if a.order() <= CHAR_POLY_MAX_ORDER => rho_r(a),
        None => Err(contract("real Schur form did not converge")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_join_n(q: usize, n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, |i, j| {
            if i != j && (i < q || j < q) {
                1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn zero_and_complete() {
        assert_eq!(sym_eigen_max(&DenseMatrix::zeros(3)).unwrap(), 0.0);
        let k4 = DenseMatrix::from_fn(4, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!((sym_eigen_max(&k4).unwrap() - 3.0).abs() < 1e-12);
        let ev = sym_eigenvalues(&k4).unwrap();
        for e in &ev[..3] {
            assert!((e + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn split_graph_value() {
        let want = (1.0 + 33f64.sqrt()) / 2.0;
        let a = k_join_n(2, 6);
        assert!((sym_eigen_max(&a).unwrap() - want).abs() < 1e-10);
        assert!((spectral_radius_nonneg(&a).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        let asym = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(sym_eigen_max(&asym).is_err());
        let neg = DenseMatrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]]).unwrap();
        assert!(spectral_radius_nonneg(&neg).is_err());
    }

    #[test]
    fn perron_of_identity_and_cycle() {
        assert!((spectral_radius_nonneg(&DenseMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-12);
        let c4 = DenseMatrix::from_fn(4, |i, j| {
            if (i + 1) % 4 == j || (j + 1) % 4 == i {
                1.0
            } else {
                0.0
            }
        });
        assert!((spectral_radius_nonneg(&c4).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn perron_of_reducible_matrix() {
        // two components of different radius plus an isolated vertex
        let mut a = DenseMatrix::zeros(6);
        for (i, j) in [(0, 1), (1, 2), (0, 2), (3, 4)] {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        assert!((spectral_radius_nonneg(&a).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn perron_of_nonsymmetric_2x2() {
        // [[7, 1], [1, 2]]: eigenvalues (9 +- sqrt(29)) / 2
        let m = DenseMatrix::from_rows(&[[7.0, 1.0], [1.0, 2.0]]).unwrap();
        let want = (9.0 + 29f64.sqrt()) / 2.0;
        assert!((spectral_radius_nonneg(&m).unwrap() - want).abs() < 1e-10);
        let m = DenseMatrix::from_rows(&[[0.0, 4.0], [1.0, 0.0]]).unwrap();
        assert!((spectral_radius_nonneg(&m).unwrap() - 2.0).abs() < 1e-10);
    }
}
