use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::csv_err;
use crate::error::{check_range, Error, Result};
use crate::linalg::{char_poly, kron_sum, real_roots, root_bound, DenseMatrix, Polynomial};
use crate::par::Exec;

/// Strict inequalities must clear this margin.
pub const STRICT_MARGIN: f64 = 1e-9;
/// Margins below this are counted as thin.
pub const THIN_MARGIN: f64 = 1e-6;

/// One point `(k, s, a)` of the last case of the proof, with the matrices
/// whose largest real eigenvalues bound `rho(A)` and `rho(Abar)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalCaseInstance {
    pub k: i64,
    pub s: i64,
    pub a: i64,
    /// `[[2k, s], [1, -k]]`.
    pub m1: DenseMatrix,
    pub m2: DenseMatrix,
    /// `M1 (x) I3 + I2 (x) M2`.
    pub m: DenseMatrix,
    /// `det(x I3 - M2)` in closed form.
    pub h: Polynomial,
    /// `det((4k + 1) I6 - M)`, exact.
    pub det_at_4k1: i128,
}

fn m1_rows(k: i64, s: i64) -> [[i64; 2]; 2] {
    [[2 * k, s], [1, -k]]
}

fn m2_rows(k: i64, s: i64, a: i64) -> [[i64; 3]; 3] {
    [[k - 1, k, 3 * k + 1 - s - a], [k + 1, k, a], [1, 0, 0]]
}

fn to_dense<const N: usize>(rows: &[[i64; N]; N]) -> DenseMatrix {
    DenseMatrix::from_fn(N, |i, j| rows[i][j] as f64)
}

/// `h(x) = x^3 - (2k-1)x^2 + (s + a - 5k - 1)x - k(2a + s - 3k - 1)`,
/// coefficients ascending.
fn h_coeffs(k: i64, s: i64, a: i64) -> [i64; 4] {
    [-k * (2 * a + s - 3 * k - 1), s + a - 5 * k - 1, -(2 * k - 1), 1]
}

fn h_at(k: i64, s: i64, a: i64, x: i64) -> i128 {
    h_coeffs(k, s, a)
        .iter()
        .rev()
        .fold(0i128, |acc, &c| acc * x as i128 + c as i128)
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for p in 0..n {
        if m[p][p] == 0 {
            match (p + 1..n).find(|&r| m[r][p] != 0) {
                Some(r) => {
                    m.swap(p, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in p + 1..n {
            for j in p + 1..n {
                m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) / prev;
            }
            m[i][p] = 0;
        }
        prev = m[p][p];
    }
    sign * m[n - 1][n - 1]
}

fn kron_sum_int(m1: &[[i64; 2]; 2], m2: &[[i64; 3]; 3]) -> Vec<Vec<i128>> {
    let mut m = vec![vec![0i128; 6]; 6];
    for i in 0..2 {
        for p in 0..3 {
            for j in 0..2 {
                for q in 0..3 {
                    let mut v = 0i128;
                    if p == q {
                        v += m1[i][j] as i128;
                    }
                    if i == j {
                        v += m2[p][q] as i128;
                    }
                    m[i * 3 + p][j * 3 + q] = v;
                }
            }
        }
    }
    m
}

pub fn final_case_instance(k: i64, s: i64, a: i64) -> Result<FinalCaseInstance> {
    if k < 1 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 1,
            max: i64::MAX,
        });
    }
    let r1 = m1_rows(k, s);
    let r2 = m2_rows(k, s, a);
    let m1 = to_dense(&r1);
    let m2 = to_dense(&r2);
    let m = kron_sum(&m1, &m2);
    let x = (4 * k + 1) as i128;
    let shifted: Vec<Vec<i128>> = kron_sum_int(&r1, &r2)
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, v)| if i == j { x - v } else { -v })
                .collect()
        })
        .collect();
    Ok(FinalCaseInstance {
        k,
        s,
        a,
        m1,
        m2,
        m,
        h: Polynomial::new(h_coeffs(k, s, a).iter().map(|&c| c as f64).collect()),
        det_at_4k1: bareiss_det(shifted),
    })
}

/// Outcome of the four assertion groups on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub k: i64,
    pub s: i64,
    pub a: i64,
    /// `det((4k+1) I6 - M) > 0`, exact, and matched by the floating-point
    /// characteristic polynomial.
    pub det_positive: bool,
    /// `h(0) > 0`, `h(2k) < 0`, `h(2k+1) > 0`, and `h` is the
    /// characteristic polynomial of `M2`.
    pub h_signs: bool,
    /// `rho_r(M1) <= 2k + 1` and `beta3 < 0 < beta2 < 2k < beta1 < 2k + 1`.
    pub interleaving: bool,
    /// `max(alpha1 + beta2, beta1 + alpha2) < 4k + 1` and
    /// `rho_r(M) = alpha1 + beta1 < 4k + 1`.
    pub bound: bool,
    /// Smallest margin among the strict real-valued inequalities.
    pub margin: f64,
}

impl InstanceCheck {
    pub fn passed(&self) -> bool {
        self.det_positive && self.h_signs && self.interleaving && self.bound
    }
}

fn check_instance(k: i64, s: i64, a: i64) -> Result<InstanceCheck> {
    let inst = final_case_instance(k, s, a)?;
    let x = (4 * k + 1) as f64;

    let p6 = char_poly(&inst.m)?;
    let det_float = p6.eval(x);
    let det_exact = inst.det_at_4k1 as f64;
    let det_positive = inst.det_at_4k1 > 0
        && (det_float - det_exact).abs() <= 1e-9 * det_exact.abs().max(1.0);

    let p3 = char_poly(&inst.m2)?;
    let same_h = p3.degree() == 3
        && p3
            .coeffs()
            .iter()
            .zip(inst.h.coeffs())
            .all(|(u, v)| (u - v).abs() <= 1e-9 * v.abs().max(1.0));
    let h_signs =
        same_h && h_at(k, s, a, 0) > 0 && h_at(k, s, a, 2 * k) < 0 && h_at(k, s, a, 2 * k + 1) > 0;

    let kf = k as f64;
    let disc = 9.0 * kf * kf + 4.0 * s as f64;
    let alpha1 = 0.5 * (kf + disc.sqrt());
    let alpha2 = 0.5 * (kf - disc.sqrt());
    let rb = root_bound(&inst.h);
    let betas = real_roots(&inst.h, -rb, rb);
    let mut margins = vec![2.0 * kf + 1.0 - alpha1];
    let interleaving = if let [b3, b2, b1] = betas[..] {
        margins.extend([-b3, b2, 2.0 * kf - b2, b1 - 2.0 * kf, 2.0 * kf + 1.0 - b1]);
        let second = (alpha1 + b2).max(b1 + alpha2);
        margins.push(x - second);
        margins.push(x - (alpha1 + b1));
        true
    } else {
        false
    };
    let margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let interleaving = interleaving && margins[..6].iter().all(|&m| m > STRICT_MARGIN)
        && alpha1 <= 2.0 * kf + 1.0;
    let bound = betas.len() == 3 && margins[6..].iter().all(|&m| m > STRICT_MARGIN);
    Ok(InstanceCheck {
        k,
        s,
        a,
        det_positive,
        h_signs,
        interleaving,
        bound,
        margin,
    })
}

/// Per-`k` tally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub k: i64,
    pub instances: u64,
    /// `3k (k(k-1) + 1)`.
    pub expected_instances: u64,
    pub det_failures: u64,
    pub h_failures: u64,
    pub interleaving_failures: u64,
    pub bound_failures: u64,
    pub min_margin: f64,
    pub thin: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub k_max: i64,
    pub rows: Vec<CertificateRow>,
    /// Failing instances as `(k, s, a)`, with the failed groups.
    pub failures: Vec<String>,
    pub instances_checked: u64,
    pub passed: bool,
    pub elapsed: f64,
}

/// Runs every `(k, s, a)` with `1 <= k <= k_max`, `1 <= s <= 3k` and
/// `-k(k-1) <= a <= 0`.
pub fn final_case_certificate(k_max: i64, exec: Exec) -> Result<CertificateReport> {
    check_range("k_max", k_max.max(0) as usize, 1, 200)?;
    let start = Instant::now();
    let jobs: Vec<(i64, i64)> = (1..=k_max)
        .flat_map(|k| (1..=3 * k).map(move |s| (k, s)))
        .collect();
    let parts = exec.map(jobs, |(k, s)| -> Result<Vec<InstanceCheck>> {
        (-k * (k - 1)..=0).map(|a| check_instance(k, s, a)).collect()
    });
    let mut rows: Vec<CertificateRow> = (1..=k_max)
        .map(|k| CertificateRow {
            k,
            instances: 0,
            expected_instances: (3 * k * (k * (k - 1) + 1)) as u64,
            det_failures: 0,
            h_failures: 0,
            interleaving_failures: 0,
            bound_failures: 0,
            min_margin: f64::INFINITY,
            thin: 0,
        })
        .collect();
    let mut failures = Vec::new();
    for part in parts {
        for c in part? {
            let row = &mut rows[c.k as usize - 1];
            row.instances += 1;
            row.det_failures += u64::from(!c.det_positive);
            row.h_failures += u64::from(!c.h_signs);
            row.interleaving_failures += u64::from(!c.interleaving);
            row.bound_failures += u64::from(!c.bound);
            row.min_margin = row.min_margin.min(c.margin);
            row.thin += u64::from(c.margin < THIN_MARGIN);
            if !c.passed() {
                failures.push(format!(
                    "(k, s, a) = ({}, {}, {}): det {} h {} roots {} bound {}",
                    c.k, c.s, c.a, c.det_positive, c.h_signs, c.interleaving, c.bound
                ));
            }
        }
    }
    let instances_checked = rows.iter().map(|r| r.instances).sum();
    let passed = failures.is_empty() && rows.iter().all(|r| r.instances == r.expected_instances);
    Ok(CertificateReport {
        k_max,
        rows,
        failures,
        instances_checked,
        passed,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

impl CertificateReport {
    /// One CSV row per `k`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Output(e.to_string()))
    }
}
