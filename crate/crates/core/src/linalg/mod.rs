//! Small dense numerical kernels.

mod dense;
mod eigen;
mod poly;

pub use dense::DenseMatrix;
pub use eigen::{spectral_radius_nonneg, sym_eigen_max, sym_eigenvalues};
pub use poly::{
    char_poly, largest_real_root, real_roots, root_bound, Polynomial, SturmChain,
    CHAR_POLY_MAX_ORDER,
};

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};

/// Row sums inside a block must agree to this tolerance for the partition to
/// count as equitable.
pub const EQUITABLE_TOL: f64 = 1e-9;

/// Ordered partition of `0..n` into nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(contract(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(contract(format!("index {i} in block {b} exceeds order {n}")));
                }
                if seen[i] {
                    return Err(contract(format!("index {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(contract(format!("index {i} is not covered")));
        }
        Ok(Partition { blocks })
    }

    /// Partition into consecutive runs of the given lengths.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let n = sizes.iter().sum();
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&len| {
                let b = (start..start + len).collect();
                start += len;
                b
            })
            .collect();
        Self::new(n, blocks)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn order(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// Quotient matrix of `m` under `p` when the partition is equitable.
pub fn quotient(m: &DenseMatrix, p: &Partition) -> Result<Option<DenseMatrix>> {
    if p.order() != m.order() {
        return Err(contract(format!(
            "partition covers {} indices, matrix has order {}",
            p.order(),
            m.order()
        )));
    }
    let k = p.len();
    let mut q = DenseMatrix::zeros(k);
    for (s, bs) in p.blocks().iter().enumerate() {
        for (t, bt) in p.blocks().iter().enumerate() {
            let sums: Vec<f64> = bs
                .iter()
                .map(|&i| bt.iter().map(|&j| m[(i, j)]).sum())
                .collect();
            let first = sums[0];
            if sums.iter().any(|x| (x - first).abs() > EQUITABLE_TOL) {
                return Ok(None);
            }
            q[(s, t)] = first;
        }
    }
    Ok(Some(q))
}

/// `A (x) I_m + I_n (x) B`.
pub fn kron_sum(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = a.order();
    let m = b.order();
    DenseMatrix::from_fn(n * m, |r, c| {
        let (i, p) = (r / m, r % m);
        let (j, q) = (c / m, c % m);
        let mut v = 0.0;
        if p == q {
            v += a[(i, j)];
        }
        if i == j {
            v += b[(p, q)];
        }
        v
    })
}

/// Smallest constant `d` witnessing that `m` is rooted, if any.
///
/// With `l` the last index: `d*[a==b] + m[a][b] >= m[l][b] >= 0` for every
/// row `a` and every column `b < l`, every row sum at least the last one, and
/// `r_l + d >= 0`.
pub fn is_rooted(m: &DenseMatrix) -> Option<f64> {
    let n = m.order();
    if n == 0 {
        return None;
    }
    let l = n - 1;
    let r = m.row_sums();
    if r.iter().any(|&ra| ra < r[l]) {
        return None;
    }
    let mut d = -r[l];
    for b in 0..l {
        if m[(l, b)] < 0.0 {
            return None;
        }
        for a in 0..n {
            if a == b {
                d = d.max(m[(l, b)] - m[(a, b)]);
            } else if m[(a, b)] < m[(l, b)] {
                return None;
            }
        }
    }
    Some(d)
}

/// `sqrt(e) + sqrt(total - e)` for `0 <= e <= total`. Increasing in `e` up
/// to `total / 2`.
pub fn sqrt_split_sum(e: f64, total: f64) -> Result<f64> {
    if !(0.0 <= e && e <= total) {
        return Err(contract(format!("sqrt_split_sum needs 0 <= e <= total, got e = {e}, total = {total}")));
    }
    Ok(e.sqrt() + (total - e).sqrt())
}

/// Largest real eigenvalue.
pub fn rho_r(m: &DenseMatrix) -> Result<f64> {
    let p = char_poly(m)?;
    let bound = m.norm_inf() + 1.0;
    largest_real_root(&p, -bound, bound).ok_or(Error::NoRealEigenvalue)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_of_complete_graph() {
        let k4 = DenseMatrix::from_fn(4, |i, j| if i == j { 0.0 } else { 1.0 });
        let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let q = quotient(&k4, &p).unwrap().unwrap();
        assert_eq!(q.as_slice(), &[1.0, 2.0, 2.0, 1.0]);
    }

    #[test]
    fn quotient_of_path() {
        let p3 = DenseMatrix::from_rows(&[[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
            .unwrap();
        let p = Partition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let q = quotient(&p3, &p).unwrap().unwrap();
        assert_eq!(q.as_slice(), &[0.0, 1.0, 2.0, 0.0]);
        // not equitable
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(quotient(&p3, &p).unwrap(), None);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0], vec![1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![]]).is_err());
        assert_eq!(Partition::from_sizes(&[2, 1]).unwrap().blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn kron_sum_small_cases() {
        let b = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let one = DenseMatrix::from_rows(&[[1.0]]).unwrap();
        assert_eq!(kron_sum(&one, &b), b.add_scaled_identity(1.0));
        let s = kron_sum(&DenseMatrix::diag(&[1.0, 2.0]), &DenseMatrix::diag(&[10.0, 20.0]));
        let diag: Vec<f64> = (0..4).map(|i| s[(i, i)]).collect();
        assert_eq!(diag, vec![11.0, 21.0, 12.0, 22.0]);
        assert_eq!(s.norm_frobenius(), diag.iter().map(|x| x * x).sum::<f64>().sqrt());
    }

    #[test]
    fn rooted_witnesses() {
        let m = DenseMatrix::from_rows(&[[0.0, 1.0], [5.0, 0.0]]).unwrap();
        assert_eq!(is_rooted(&m), None);
        // [[c-1, s], [1, v-c]] for (c, v, s) = (4, 2, 1); d = c also works
        let m = DenseMatrix::from_rows(&[[3.0, 1.0], [1.0, -2.0]]).unwrap();
        assert_eq!(is_rooted(&m), Some(1.0));
    }

    #[test]
    fn rho_r_cases() {
        assert!((rho_r(&DenseMatrix::diag(&[1.0, 5.0, -2.0])).unwrap() - 5.0).abs() < 1e-10);
        let rot = DenseMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(rho_r(&rot), Err(Error::NoRealEigenvalue));
        let m = DenseMatrix::from_rows(&[[3.0, 1.0], [1.0, -2.0]]).unwrap();
        let want = (1.0 + 29f64.sqrt()) / 2.0;
        assert!((rho_r(&m).unwrap() - want).abs() < 1e-10);
    }
}
