use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::rooted::{is_final_case_shape, rooted_bound_check};
use super::sweep::sweep_sym;
use crate::bounds::{
    e_plus_f_closed, ef_terms_exact, equality_case, g_quartic, global_cap_holds, phi_ell_from_row_sums,
    phi_from_params, rho0_closed, s_sum_bound_times4, split_ceil_rho, EQUALITY_TOL,
};
use crate::error::{check_range, Result};
use crate::linalg::{root_bound, spectral_radius_nonneg, sym_eigen_max};
use crate::par::Exec;
use crate::staircase::{Class, ParamSix, StaircaseMatrix};
use crate::transforms::{
    is_excluded_pair, lemma33, lemma34, lemma35_run, normalize_chain, ChainRegime, Lemma35End,
    CHAIN_TOL,
};
use crate::Error;

/// Largest `n_max` accepted by [`lemma_suite`].
pub const SUITE_MAX_ORDER: usize = 14;
/// The full class `S*(n)` is swept up to this order.
pub const SUITE_FULL_CLASS_MAX: usize = 12;
/// Perron roots of nonsymmetric members are computed up to this order.
pub const SUITE_NONSYM_RHO_MAX: usize = 8;

/// Slack for `rho <= bound` style comparisons.
const SOUND_TOL: f64 = 1e-8;
/// Hypotheses of the form `rho + rho_bar >= rho0` are read with this slack,
/// and strict inequalities between Perron values must clear it.
const HYP_TOL: f64 = 1e-9;

type Triple = (i64, i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub name: String,
    pub passed: bool,
    pub instances: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub n_max: usize,
    pub results: Vec<LemmaResult>,
    pub elapsed: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&LemmaResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

/// Every property checked, in report order.
const NAMES: &[&str] = &[
    "thm2_3_soundness",
    "lemma3_1_i_bound",
    "lemma3_1_i_equality",
    "lemma3_1_ii",
    "lemma3_1_iii",
    "prop3_2_phi",
    "prop3_2_rho_literal",
    "lemma3_3",
    "lemma3_4",
    "lemma3_5_literal",
    "lemma3_5_floor",
    "lemma4_1",
    "lemma5_1",
    "eq5_2",
    "cor5_3",
    "prop5_4",
    "prop6_1",
    "lemma6_2",
    "lemma6_3",
    "prop6_4",
    "prop6_5",
    "eq7_1_chain",
    "thm2_5_rooted",
];

fn idx(name: &str) -> usize {
    NAMES.iter().position(|&n| n == name).expect("known check")
}

#[derive(Clone, Debug, Default)]
struct Tally {
    instances: u64,
    failures: u64,
    first_failure: Option<String>,
}

#[derive(Clone, Debug)]
struct Tallies(Vec<Tally>);

impl Tallies {
    fn new() -> Self {
        Tallies(vec![Tally::default(); NAMES.len()])
    }

    fn check(&mut self, name: &str, ok: bool, what: impl FnOnce() -> String) {
        let t = &mut self.0[idx(name)];
        t.instances += 1;
        if !ok {
            t.failures += 1;
            if t.first_failure.is_none() {
                t.first_failure = Some(what());
            }
        }
    }

    fn merge(&mut self, other: Tallies) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            a.instances += b.instances;
            a.failures += b.failures;
            if a.first_failure.is_none() {
                a.first_failure = b.first_failure;
            }
        }
    }
}

fn phi_pair(p: &ParamSix) -> (f64, f64) {
    (
        phi_from_params(p.c, p.v, p.s),
        phi_from_params(p.cbar, p.vbar, p.sbar),
    )
}

fn desc(a: &StaircaseMatrix, p: &ParamSix) -> String {
    format!(
        "mu = {:?}, (c, v, s, cbar, vbar, sbar) = ({}, {}, {}, {}, {}, {})",
        a.mu(),
        p.c,
        p.v,
        p.s,
        p.cbar,
        p.vbar,
        p.sbar
    )
}

fn perron(a: &StaircaseMatrix) -> Result<f64> {
    let d = a.to_dense();
    if a.is_symmetric() {
        sym_eigen_max(&d)
    } else {
        spectral_radius_nonneg(&d)
    }
}

/// Whether `x` is a root of the quartic up to rounding in its terms.
fn quartic_vanishes(p: &ParamSix, x: f64) -> bool {
    let (e, f) = ef_terms_exact(p);
    let y = 2.0 * x - (p.v + p.vbar) as f64 + 2.0;
    let scale = y.powi(4) + 2.0 * (e + f) as f64 * y * y + ((e - f) as f64).powi(2);
    g_quartic(p).eval(x).abs() <= 1e-9 * scale.max(1.0)
}

/// Whether `p` meets `c + cbar >= (4n - 5)/3`, `v = n - cbar`,
/// `vbar = n - c - 1`.
fn normalized_shape(n: usize, p: &ParamSix) -> bool {
    let n = n as i64;
    3 * (p.c + p.cbar) >= 4 * n - 5 && p.v == n - p.cbar && p.vbar == n - p.c - 1
}

/// Checks on the quartic for parameters in normalized shape.
fn quartic_checks(t: &mut Tallies, n: usize, p: &ParamSix, what: &dyn Fn() -> String) {
    let x0 = (4.0 * n as f64 - 5.0) / 3.0;
    let (e, f) = ef_terms_exact(p);
    // 2(E + F) against twice the closed form, in integers
    let sum = p.c + p.cbar;
    let diff = p.c - p.cbar;
    let ni = n as i64;
    let twice_closed = 3 * sum * sum - 2 * (2 * ni - 1) * sum + 2 * (2 * ni * ni - 2 * ni + 1)
        - diff * diff
        - 2 * diff;
    let y0 = 2.0 * x0 - (p.v + p.vbar) as f64 + 2.0;
    let closed_ok = 2 * (e + f) == twice_closed
        && (e_plus_f_closed(n, p.c, p.cbar) - (e + f) as f64).abs() < 1e-9;
    t.check("lemma6_3", closed_ok && y0 * y0 - (e + f) as f64 > 0.0, || {
        format!("{}: E + F = {}, closed form {}", what(), e + f, twice_closed as f64 / 2.0)
    });

    let dg = g_quartic(p).derivative();
    let hi = root_bound(&dg).max(x0 + 1.0);
    let increasing = dg.eval(x0) > 0.0 && dg.sturm_chain().count(x0, hi) == 0;
    t.check("prop6_4", increasing, || format!("{}: g' has a root above {x0}", what()));
}

fn check_prop6_5(t: &mut Tallies, n: usize, p: &ParamSix, rho0: f64, what: &dyn Fn() -> String) {
    let k = (n / 3) as i64;
    let ni = n as i64;
    if is_excluded_pair(n, p.c + p.cbar)
        || (n % 3 == 2 && p.c == 2 * k + 1 && p.cbar == 2 * k + 1)
    {
        return;
    }
    let g = g_quartic(p);
    let zero = quartic_vanishes(p, rho0);
    let nonneg = g.eval(rho0) >= 0.0 || zero;
    let equality_shape = (ni == 3 * k && p.c == 2 * k - 1 && p.cbar == 2 * k)
        || (ni == 3 * k + 1 && p.c == 2 * k && p.cbar == 2 * k);
    t.check("prop6_5", nonneg && zero == equality_shape, || {
        format!("{}: g(rho0) = {:e}", what(), g.eval(rho0))
    });
}

/// Checks on one symmetric member.
fn check_symmetric(t: &mut Tallies, a: &StaircaseMatrix, rho0: f64) -> Result<()> {
    let n = a.n();
    let ni = n as i64;
    let p = a.full_params()?;
    let abar = a.reflect_complement()?;
    let rho = sym_eigen_max(&a.to_dense())?;
    let rho_bar = sym_eigen_max(&abar.to_dense())?;
    let (phi, phi_bar) = phi_pair(&p);
    let what = || desc(a, &p);

    for (m, r) in [(a, rho), (&abar, rho_bar)] {
        let mut sums: Vec<f64> = m.row_sums().iter().map(|&x| x as f64).collect();
        sums.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let worst = (1..=n)
            .map(|l| phi_ell_from_row_sums(&sums, l))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        t.check("thm2_3_soundness", r <= worst + SOUND_TOL, || {
            format!("{}: rho = {r} > min phi_l = {worst}", desc(m, &m.full_params().unwrap()))
        });
    }

    t.check("lemma3_1_i_bound", rho <= phi + SOUND_TOL && rho_bar <= phi_bar + SOUND_TOL, || {
        format!("{}: rho {rho} phi {phi} rho_bar {rho_bar} phi_bar {phi_bar}", what())
    });
    for (m, r, ph) in [(a, rho, phi), (&abar, rho_bar, phi_bar)] {
        let numeric = (r - ph).abs() <= EQUALITY_TOL;
        let structural = equality_case(m)?.is_some();
        t.check("lemma3_1_i_equality", numeric == structural, || {
            format!("mu = {:?}: numeric {numeric}, structural {structural}", m.mu())
        });
    }

    // equality forces a complete split graph
    if (rho + rho_bar - phi - phi_bar).abs() <= EQUALITY_TOL {
        let split_q = (1..=n - 2).find(|&q| {
            StaircaseMatrix::split_graph(n, q)
                .map(|g| &g == a || g == abar)
                .unwrap_or(false)
        });
        let ok = match split_q {
            Some(q) => {
                let mut want = [ni - q as i64 - 1, split_ceil_rho(n, q)];
                let mut got = [p.c, p.cbar];
                want.sort_unstable();
                got.sort_unstable();
                want == got
            }
            None => false,
        };
        t.check("lemma4_1", ok, || format!("{}: split q = {split_q:?}", what()));
    }

    t.check("eq5_2", global_cap_holds(&p, n), what);

    let sum = p.c + p.cbar;
    if sum as f64 >= rho0 {
        let f = 4 * ni / 3;
        t.check("cor5_3", sum >= ni && (sum == f || sum == f - 1), what);
    }

    // excluded sums force a clique plus isolated vertices
    if rho + rho_bar >= rho0 - HYP_TOL && p.v >= ni - p.cbar && is_excluded_pair(n, sum) {
        let k = n / 3;
        let ok = [2 * k + 2, 2 * k + 1].iter().any(|&t| {
            StaircaseMatrix::clique_plus_isolated(n, t)
                .map(|g| &g == a)
                .unwrap_or(false)
        });
        t.check("prop5_4", ok, what);
    }

    // the normalizing chain, and the quartic on its end point
    if sum >= ni && !is_excluded_pair(n, sum) {
        let rep = normalize_chain(a)?;
        let last = *rep.params.last().unwrap();
        let shape_ok = match rep.regime {
            ChainRegime::Normalized => last.v == ni - last.cbar && last.vbar == ni - last.c - 1,
            ChainRegime::SmallBarRegime => {
                let s = rep.phi_sums.last().unwrap();
                t.check("prop6_1", *s < rho0 - CHAIN_TOL, || {
                    format!("{}: phi(A1) + phi(A1bar) = {s} >= rho0 = {rho0}", what())
                });
                true
            }
        };
        t.check("eq7_1_chain", rep.chain_holds && shape_ok, || {
            format!("{}: sums {:?}, rho_sum {}", what(), rep.phi_sums, rep.rho_sum)
        });
        if rep.regime == ChainRegime::Normalized && rep.rho_sum >= rho0 - HYP_TOL {
            let end = rep.stages.last().unwrap();
            let wd = || desc(end, &last);
            check_prop6_5(t, n, &last, rho0, &wd);
        }
    }

    if is_final_case_shape(n, &p) {
        let r = rooted_bound_check(a)?;
        t.check("thm2_5_rooted", r.passed, || format!("{}: {r:?}", what()));
    }
    Ok(())
}

/// Checks on one member of the full class (symmetric or not).
fn check_full_class(t: &mut Tallies, a: &StaircaseMatrix, rho0: f64) -> Result<()> {
    let n = a.n();
    let ni = n as i64;
    let p = a.full_params()?;
    let (phi, phi_bar) = phi_pair(&p);
    let what = || desc(a, &p);

    for (c, v, s, ph) in [(p.c, p.v, p.s, phi), (p.cbar, p.vbar, p.sbar, phi_bar)] {
        t.check("lemma3_1_ii", v <= c && 0 < s && s <= 2 * c - v, what);
        let at_cap = s + v == 2 * c;
        t.check(
            "lemma3_1_iii",
            ((c - 1) as f64) < ph
                && if at_cap {
                    (ph - c as f64).abs() <= 1e-12
                } else {
                    ph < c as f64
                },
            what,
        );
    }

    if n <= SUITE_NONSYM_RHO_MAX && !a.is_symmetric() {
        let rho = perron(a)?;
        let mut sums: Vec<f64> = a.row_sums().iter().map(|&x| x as f64).collect();
        sums.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let worst = (1..=n)
            .map(|l| phi_ell_from_row_sums(&sums, l))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        t.check("thm2_3_soundness", rho <= worst + SOUND_TOL, || {
            format!("{}: rho = {rho} > min phi_l = {worst}", what())
        });
        t.check("lemma3_1_i_bound", rho <= phi + SOUND_TOL, || {
            format!("{}: rho = {rho} > phi = {phi}", what())
        });
    }

    if p.c + p.cbar >= ni {
        let b4 = s_sum_bound_times4(&p, n);
        let lhs = 4 * (p.s + p.sbar);
        let tight = p.vbar != ni - p.c - 1 || lhs == b4;
        t.check("lemma5_1", lhs <= b4 && tight, || {
            format!("{}: 4(s + sbar) = {lhs}, bound {b4}", what())
        });
    }

    if !is_excluded_pair(n, p.c + p.cbar)
        && 2 * p.cbar - p.sbar < ni - p.c - 1
        && p.vbar == 2 * p.cbar - p.sbar
    {
        t.check("prop6_1", phi + phi_bar < rho0 - CHAIN_TOL, || {
            format!("{}: phi + phi_bar = {}", what(), phi + phi_bar)
        });
    }

    t.check("lemma6_2", quartic_vanishes(&p, phi + phi_bar), what);

    if normalized_shape(n, &p) {
        quartic_checks(t, n, &p, &what);
        if phi + phi_bar >= rho0 - HYP_TOL {
            let rho_sum = perron(a)? + perron(&a.reflect_complement()?)?;
            if rho_sum >= rho0 - HYP_TOL {
                check_prop6_5(t, n, &p, rho0, &what);
            }
        }
    }

    check_transforms(t, a, &p)?;
    Ok(())
}

fn check_transforms(t: &mut Tallies, a: &StaircaseMatrix, p: &ParamSix) -> Result<()> {
    let n = a.n() as i64;
    let what = || desc(a, p);
    let phis = |q: &ParamSix| phi_pair(q);
    let (phi, phi_bar) = phis(p);

    if a.is_symmetric()
        && p.c + p.cbar >= n
        && p.vbar < (2 * p.cbar - p.sbar).min(n - p.c - 1)
    {
        let ok = match lemma33(a) {
            Ok((_, tr)) => {
                let q = tr.after;
                let (f, fb) = phis(&q);
                q.triple() == p.triple()
                    && q.cbar == p.cbar
                    && q.vbar == (2 * q.cbar - q.sbar).min(n - q.c - 1)
                    && q.sbar >= p.sbar
                    && f == phi
                    && fb > phi_bar + CHAIN_TOL
            }
            Err(_) => false,
        };
        t.check("lemma3_3", ok, what);
    }

    if p.vbar == n - p.c - 1 {
        for target in (n - p.cbar).max(0)..p.v {
            let ok = match lemma34(a, target) {
                Ok((_, tr)) => {
                    let q = tr.after;
                    let (f, fb) = phis(&q);
                    let equal = (f - phi).abs() <= CHAIN_TOL;
                    q.c == p.c
                        && q.v == target
                        && q.s + q.v == p.s + p.v
                        && q.bar_triple() == p.bar_triple()
                        && f >= phi - CHAIN_TOL
                        && equal == (p.v + p.s == 2 * p.c)
                        && fb == phi_bar
                }
                Err(_) => false,
            };
            t.check("lemma3_4", ok, || format!("{}, v' = {target}", what()));
        }
    }

    if n - p.cbar < p.v && p.vbar == 2 * p.cbar - p.sbar {
        match lemma35_run(a) {
            Ok((_, tr, end)) => {
                let q = tr.after;
                let (f, fb) = phis(&q);
                let common = q.c == p.c
                    && q.s + q.v >= p.s + p.v
                    && q.bar_triple() == p.bar_triple()
                    && f >= phi - CHAIN_TOL
                    && fb >= phi_bar - CHAIN_TOL;
                let literal = q.v == (2 * q.c - q.s).max(n - q.cbar);
                t.check("lemma3_5_literal", common && literal, || {
                    format!("{}: ends at {q:?} ({end:?})", what())
                });
                let relaxed = match end {
                    Lemma35End::Balanced => q.v == 2 * q.c - q.s,
                    Lemma35End::Floor => q.v == n - q.cbar && q.v < 2 * q.c - q.s,
                };
                t.check("lemma3_5_floor", common && relaxed, || {
                    format!("{}: ends at {q:?} ({end:?})", what())
                });
            }
            Err(Error::Stalled { detail, .. }) => {
                t.check("lemma3_5_literal", false, || format!("{}: {detail}", what()));
                t.check("lemma3_5_floor", false, || format!("{}: {detail}", what()));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Monotonicity over one order: for symmetric `A` and any `A1` in `S*(n)`
/// with `c1 = c`, `v1 > v`, `s1 >= s`, compares `phi` and, up to
/// [`SUITE_NONSYM_RHO_MAX`], the Perron roots.
fn check_prop3_2(t: &mut Tallies, n: usize, exec: Exec) -> Result<()> {
    type Item = (StaircaseMatrix, ParamSix, f64);
    let with_rho = n <= SUITE_NONSYM_RHO_MAX;
    let parts = sweep_sym(Class::Sstar, n, exec, |it| -> Result<(BTreeSet<Triple>, BTreeSet<Triple>, Vec<Item>)> {
        let (mut triples, mut sym, mut kept) = (BTreeSet::new(), BTreeSet::new(), Vec::new());
        for a in it {
            let p = a.full_params()?;
            triples.insert(p.triple());
            if a.is_symmetric() {
                sym.insert(p.triple());
            }
            if with_rho {
                let r = perron(&a)?;
                kept.push((a, p, r));
            }
        }
        Ok((triples, sym, kept))
    })?;
    let (mut triples, mut sym_triples, mut all) = (BTreeSet::new(), BTreeSet::new(), Vec::new());
    for p in parts {
        let (t, s, k) = p?;
        triples.extend(t);
        sym_triples.extend(s);
        all.extend(k);
    }
    // phi depends only on (c, v, s); compare distinct triples
    for &(c, v, s) in &sym_triples {
        for &(c1, v1, s1) in &triples {
            if c1 == c && v1 > v && s1 >= s {
                let ok = phi_from_params(c, v, s) < phi_from_params(c1, v1, s1);
                t.check("prop3_2_phi", ok, || {
                    format!("n = {n}: (c, v, s) = ({c}, {v}, {s}) vs ({c1}, {v1}, {s1})")
                });
            }
        }
    }
    if with_rho {
        for (a, p, r) in all.iter().filter(|x| x.0.is_symmetric()) {
            for (a1, p1, r1) in &all {
                if p1.c == p.c && p1.v > p.v && p1.s >= p.s {
                    t.check("prop3_2_rho_literal", r1 - r > HYP_TOL, || {
                        format!(
                            "rho({:?}) = {r} is not below rho({:?}) = {r1}",
                            a.mu(),
                            a1.mu()
                        )
                    });
                }
            }
        }
    }
    Ok(())
}

/// Runs every per-lemma property on the symmetric class for
/// `3 <= n <= n_max` and on the full class up to
/// [`SUITE_FULL_CLASS_MAX`].
pub fn lemma_suite(n_max: usize, exec: Exec) -> Result<SuiteReport> {
    check_range("n_max", n_max, 3, SUITE_MAX_ORDER)?;
    let start = Instant::now();
    let mut total = Tallies::new();
    for n in 3..=n_max {
        let rho0 = rho0_closed(n)?;
        let parts = sweep_sym(Class::SstarSym, n, exec, |it| -> Result<Tallies> {
            let mut t = Tallies::new();
            for a in it {
                check_symmetric(&mut t, &a, rho0)?;
            }
            Ok(t)
        })?;
        for p in parts {
            total.merge(p?);
        }
        if n <= SUITE_FULL_CLASS_MAX {
            let parts = sweep_sym(Class::Sstar, n, exec, |it| -> Result<Tallies> {
                let mut t = Tallies::new();
                for a in it {
                    check_full_class(&mut t, &a, rho0)?;
                }
                Ok(t)
            })?;
            for p in parts {
                total.merge(p?);
            }
            check_prop3_2(&mut total, n, exec)?;
        }
    }
    let results = NAMES
        .iter()
        .zip(total.0)
        .map(|(name, t)| LemmaResult {
            name: name.to_string(),
            passed: t.failures == 0,
            instances: t.instances,
            failures: t.failures,
            first_failure: t.first_failure,
        })
        .collect();
    Ok(SuiteReport {
        n_max,
        results,
        elapsed: start.elapsed().as_secs_f64(),
    })
}
