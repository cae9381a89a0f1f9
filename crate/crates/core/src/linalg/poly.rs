//! Real polynomials, characteristic polynomials and Sturm-sequence root
//! isolation.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::DenseMatrix;
use crate::error::{check_range, Result};

/// Largest matrix order accepted by [`char_poly`].
pub const CHAR_POLY_MAX_ORDER: usize = 16;

/// Coefficients whose magnitude falls below this are treated as exact zeros
/// while building Sturm chains.
const PRUNE_ABS: f64 = 1e-300;
/// Relative size (against the magnitude of the operands of a polynomial
/// division) below which a remainder coefficient is treated as rounding noise.
const PRUNE_REL: f64 = 1e-11;
/// Target width of the final bisection bracket, scaled by `max(1, |x|)`.
const ROOT_WIDTH: f64 = 1e-12;
/// Roots closer than this (relative) are one multiple root split by
/// rounding in the Sturm chain.
const ROOT_MERGE: f64 = 1e-6;

/// Dense real polynomial, coefficients in ascending degree.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `x - root`
    pub fn linear_root(root: f64) -> Self {
        Self::new(vec![-root, 1.0])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(1.0), |acc, &r| acc.mul(&Self::linear_root(r)))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(0.0)
                        + other.coeffs.get(i).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Long division. Returns `(quotient, remainder, magnitude)` where
    /// `magnitude` bounds the size of the terms that were cancelled, which
    /// callers use to decide which remainder coefficients are noise.
    fn div_rem_with_scale(&self, divisor: &Polynomial) -> (Polynomial, Polynomial, f64) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        if self.degree() < dd {
            return (Self::zero(), self.clone(), self.max_abs());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
            rem[k + dd] = 0.0;
        }
        rem.truncate(dd.max(1));
        let q = Self::new(quot);
        let magnitude = self.max_abs() + q.max_abs() * divisor.max_abs();
        (q, Self::new(rem), magnitude)
    }

    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let (q, r, _) = self.div_rem_with_scale(divisor);
        (q, r)
    }

    /// Builds the Sturm chain `p, p', -rem(p, p'), ...`. Every member is
    /// rescaled by a positive constant, which leaves sign counts unchanged.
    pub fn sturm_chain(&self) -> SturmChain {
        let mut chain = Vec::new();
        let p0 = normalize(self);
        if p0.is_zero() {
            return SturmChain {
                chain: vec![p0.clone()],
                simple: p0,
            };
        }
        let p1 = normalize(&p0.derivative());
        chain.push(p0.clone());
        if p1.is_zero() {
            return SturmChain { chain, simple: p0 };
        }
        chain.push(p1);
        loop {
            let k = chain.len();
            let (_, rem, magnitude) = chain[k - 2].div_rem_with_scale(&chain[k - 1]);
            let cutoff = (PRUNE_REL * magnitude).max(PRUNE_ABS);
            let pruned = Polynomial::new(
                rem.coeffs
                    .iter()
                    .map(|&c| if c.abs() <= cutoff { 0.0 } else { c })
                    .collect(),
            );
            if pruned.is_zero() {
                break;
            }
            chain.push(normalize(&pruned).scale(-1.0));
            if chain.last().unwrap().degree() == 0 {
                break;
            }
        }
        let last = chain.last().unwrap().clone();
        if last.degree() > 0 {
            // every member vanishes at a repeated root; dividing by the gcd
            // keeps the sign counts valid there
            chain = chain.iter().map(|q| normalize(&q.div_rem(&last).0)).collect();
        }
        let simple = chain[0].clone();
        SturmChain { chain, simple }
    }
}

/// Rescales by a power of two so the largest coefficient lies in
/// `[0.5, 1)`. Power-of-two scaling is exact.
fn normalize(p: &Polynomial) -> Polynomial {
    let m = p.max_abs();
    if m == 0.0 {
        return Polynomial::zero();
    }
    let e = m.log2().floor() as i32 + 1;
    p.scale(2f64.powi(-e))
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A Sturm chain; counts distinct real roots of its first member on
/// half-open intervals.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<Polynomial>,
    /// First member with repeated roots removed.
    simple: Polynomial,
}

impl SturmChain {
    pub fn sign_changes(&self, x: f64) -> usize {
        let mut changes = 0;
        let mut prev = 0.0f64;
        for p in &self.chain {
            let v = p.eval(x);
            if v == 0.0 {
                continue;
            }
            if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                changes += 1;
            }
            prev = v;
        }
        changes
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: f64, b: f64) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    fn simple(&self) -> &Polynomial {
        &self.simple
    }
}

fn width_ok(a: f64, b: f64) -> bool {
    b - a <= ROOT_WIDTH * 1f64.max(a.abs()).max(b.abs())
}

/// Narrows `(a, b]`, known to contain exactly one distinct root, to the
/// target width.
fn refine_single(sc: &SturmChain, mut a: f64, mut b: f64) -> f64 {
    let p = sc.simple();
    for _ in 0..400 {
        if width_ok(a, b) {
            break;
        }
        let pb = p.eval(b);
        if pb == 0.0 {
            return b;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let pa = p.eval(a);
        if pa != 0.0 && pa.signum() != pb.signum() {
            // odd multiplicity: plain sign bisection is the most precise
            let pm = p.eval(m);
            if pm == 0.0 {
                return m;
            }
            if pm.signum() == pb.signum() {
                b = m;
            } else {
                a = m;
            }
        } else if sc.count(a, m) >= 1 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// Widens `[lo, hi]` slightly so that roots sitting on an end point are not
/// lost to rounding in the sign counts.
fn widen(lo: f64, hi: f64) -> (f64, f64) {
    (
        lo - ROOT_WIDTH * 1f64.max(lo.abs()),
        hi + ROOT_WIDTH * 1f64.max(hi.abs()),
    )
}

/// Largest real root of `p` inside `[lo, hi]`, or `None` when there is none.
pub fn largest_real_root(p: &Polynomial, lo: f64, hi: f64) -> Option<f64> {
    assert!(lo < hi, "largest_real_root needs lo < hi");
    if p.degree() == 0 {
        return None;
    }
    let sc = p.sturm_chain();
    let (mut a, mut b) = widen(lo, hi);
    if sc.count(a, b) == 0 {
        return None;
    }
    // invariant: (a, b] holds at least one root and (b, hi] holds none
    for _ in 0..400 {
        if sc.count(a, b) == 1 || width_ok(a, b) {
            break;
        }
        let m = 0.5 * (a + b);
        if sc.count(m, b) >= 1 {
            a = m;
        } else {
            b = m;
        }
    }
    Some(refine_single(&sc, a, b).clamp(lo, hi))
}

/// All distinct real roots of `p` in `[lo, hi]`, ascending.
pub fn real_roots(p: &Polynomial, lo: f64, hi: f64) -> Vec<f64> {
    assert!(lo < hi, "real_roots needs lo < hi");
    if p.degree() == 0 {
        return Vec::new();
    }
    let sc = p.sturm_chain();
    let mut out = Vec::new();
    let mut stack = vec![widen(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let k = sc.count(a, b);
        if k == 0 {
            continue;
        }
        if k == 1 {
            out.push(refine_single(&sc, a, b).clamp(lo, hi));
            continue;
        }
        if width_ok(a, b) {
            out.push((0.5 * (a + b)).clamp(lo, hi));
            continue;
        }
        let m = 0.5 * (a + b);
        stack.push((a, m));
        stack.push((m, b));
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| (*x - *y).abs() <= ROOT_MERGE * 1f64.max(x.abs()));
    out
}

/// Cauchy bound on the modulus of every root.
pub fn root_bound(p: &Polynomial) -> f64 {
    let lead = p.leading().abs();
    if p.degree() == 0 || lead == 0.0 {
        return 1.0;
    }
    1.0 + p.coeffs[..p.degree()]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs() / lead))
}

/// Characteristic polynomial `det(xI - M)` by the Faddeev-LeVerrier
/// recurrence. Monic, degree `n`.
pub fn char_poly(m: &DenseMatrix) -> Result<Polynomial> {
    let n = m.order();
    check_range("matrix order", n, 0, CHAR_POLY_MAX_ORDER)?;
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut acc = DenseMatrix::zeros(n);
    for k in 1..=n {
        acc = m.mul(&acc).add_scaled_identity(c[n - k + 1]);
        let am = m.mul(&acc);
        c[n - k] = -am.trace() / k as f64;
    }
    Ok(Polynomial::new(c))
}
