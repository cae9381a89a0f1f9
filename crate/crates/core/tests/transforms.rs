use std::sync::OnceLock;

use ng_spectral::bounds::rho0_closed;
use ng_spectral::linalg::sym_eigen_max;
use ng_spectral::staircase::{enumerate_sstar, enumerate_sstar_sym};
use ng_spectral::transforms::{
    is_excluded_pair, lemma33, lemma34, lemma35_run, normalize_chain, ChainRegime, Lemma35End,
    TransformTrace,
};
use ng_spectral::{Error, StaircaseMatrix};
use proptest::prelude::*;

/// `phi` recomputed from the row sums alone.
fn phi_oracle(a: &StaircaseMatrix) -> f64 {
    let d = a.to_dense();
    let n = a.n();
    let r: Vec<f64> = (0..n).map(|i| d.row(i).iter().sum()).collect();
    let mut prefix = 0.0;
    let mut c = 0;
    for i in 1..=n {
        prefix += r[i - 1];
        if prefix > (i * (i - 1)) as f64 {
            c = i;
        }
    }
    let cf = c as f64;
    let s: f64 = r[..c].iter().sum::<f64>() - cf * (cf - 1.0);
    let v = r[c];
    0.5 * ((v - 1.0) + ((2.0 * cf - v - 1.0).powi(2) + 4.0 * s).sqrt())
}

fn phi_bar_oracle(a: &StaircaseMatrix) -> f64 {
    phi_oracle(&a.reflect_complement().unwrap())
}

/// Replays the trace on `a` and checks that it lands on `b`.
fn replay(a: &StaircaseMatrix, t: &TransformTrace, b: &StaircaseMatrix) -> bool {
    let mut cur = a.clone();
    for e in &t.moved_cells {
        if u8::from(cur.entry(e.row - 1, e.col - 1)) != e.old {
            return false;
        }
        cur = cur.with_entry(e.row - 1, e.col - 1, e.new == 1).unwrap();
        if !cur.in_sstar() {
            return false;
        }
    }
    &cur == b
}

fn class(n: usize) -> &'static [StaircaseMatrix] {
    static ALL: [OnceLock<Vec<StaircaseMatrix>>; 11] = [const { OnceLock::new() }; 11];
    ALL[n].get_or_init(|| enumerate_sstar(n).unwrap().collect())
}

fn sym_class(n: usize) -> &'static [StaircaseMatrix] {
    static ALL: [OnceLock<Vec<StaircaseMatrix>>; 13] = [const { OnceLock::new() }; 13];
    ALL[n].get_or_init(|| enumerate_sstar_sym(n).unwrap().collect())
}

#[test]
fn reducible_example_from_outside() {
    let a = StaircaseMatrix::from_profile(&[5, 4, 4, 4, 4, 0]).unwrap();
    let p = a.full_params().unwrap();
    assert_eq!(p.triple(), (4, 4, 1));
    let (b, t) = lemma34(&a, 3).unwrap();
    assert_eq!(t.after.triple(), (4, 3, 2));
    assert_eq!(t.after.bar_triple(), p.bar_triple());
    assert!(replay(&a, &t, &b));
    assert!(phi_oracle(&b) > phi_oracle(&a));
}

#[test]
fn every_qualifying_symmetric_member_runs_the_first_rewrite() {
    let mut runs = 0;
    for n in 4..=10 {
        for a in sym_class(n) {
            let p = a.full_params().unwrap();
            let ni = n as i64;
            let target = (2 * p.cbar - p.sbar).min(ni - p.c - 1);
            let res = lemma33(a);
            if p.c + p.cbar < ni || p.vbar >= target {
                assert!(matches!(res, Err(Error::Precondition { .. })));
                continue;
            }
            let (b, t) = res.unwrap();
            runs += 1;
            assert_eq!(t.after.triple(), p.triple());
            assert_eq!(t.after.cbar, p.cbar);
            assert_eq!(t.after.vbar, target);
            assert!(replay(a, &t, &b));
            assert!(phi_bar_oracle(&b) >= phi_bar_oracle(a) - 1e-12, "{:?}", a.mu());
        }
    }
    assert!(runs > 0);
}

#[test]
fn column_rewrite_ends_balanced_or_on_the_floor() {
    let (mut balanced, mut floor) = (0, 0);
    for n in 4..=8 {
        for a in class(n) {
            let p = a.full_params().unwrap();
            let ni = n as i64;
            if !(ni - p.cbar < p.v && p.vbar == 2 * p.cbar - p.sbar) {
                continue;
            }
            let (b, t, end) = lemma35_run(a).unwrap();
            let q = t.after;
            assert!(replay(a, &t, &b));
            assert_eq!(q.c, p.c);
            assert_eq!(q.bar_triple(), p.bar_triple());
            assert!(phi_oracle(&b) >= phi_oracle(a) - 1e-12);
            match end {
                Lemma35End::Balanced => {
                    balanced += 1;
                    assert_eq!(q.v, 2 * q.c - q.s);
                }
                Lemma35End::Floor => {
                    floor += 1;
                    assert_eq!(q.v, ni - q.cbar);
                }
            }
        }
    }
    assert!(balanced > 0 && floor > 0);
}

#[test]
fn chain_bounds_the_symmetric_class() {
    for n in 4..=12 {
        let rho0 = rho0_closed(n).unwrap();
        for a in sym_class(n) {
            let p = a.full_params().unwrap();
            let c_sum = p.c + p.cbar;
            if c_sum < n as i64 || is_excluded_pair(n, c_sum) {
                assert!(normalize_chain(a).is_err());
                continue;
            }
            let r = normalize_chain(a).unwrap();
            assert!(r.chain_holds, "{:?}", a.mu());
            assert!(r.rho_sum <= rho0 + 1e-9);
            let last = r.params.last().unwrap();
            let ni = n as i64;
            if r.regime == ChainRegime::Normalized {
                assert_eq!(last.v, ni - last.cbar);
                assert_eq!(last.vbar, ni - last.c - 1);
            }
            let rho = |m: &StaircaseMatrix| sym_eigen_max(&m.to_dense()).unwrap();
            let start = &r.stages[0];
            assert!((rho(start) + rho(&start.reflect_complement().unwrap()) - r.rho_sum).abs() < 1e-9);
            for (st, ph) in r.stages.iter().zip(&r.phi_sums) {
                assert!((phi_oracle(st) + phi_bar_oracle(st) - ph).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn lowering_v_runs_on_the_order_eight_class() {
    let mut ok = 0;
    for a in class(8) {
        let p = a.full_params().unwrap();
        if p.vbar == 8 - p.c - 1 && p.v > 8 - p.cbar {
            let (_, t) = lemma34(a, 8 - p.cbar).unwrap();
            assert_eq!(t.after.s + t.after.v, p.s + p.v);
            ok += 1;
        }
    }
    assert!(ok > 0);
}

fn pick(n_lo: usize, n_hi: usize) -> impl Strategy<Value = StaircaseMatrix> {
    (n_lo..=n_hi, any::<prop::sample::Index>()).prop_map(|(n, idx)| {
        let all = class(n);
        all[idx.index(all.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lowering_v_conserves_s_plus_v(a in pick(5, 10), step in 1i64..4) {
        let n = a.n() as i64;
        let p = a.full_params().unwrap();
        let target = p.v - step;
        let res = lemma34(&a, target);
        if p.vbar != n - p.c - 1 || target < n - p.cbar {
            prop_assert!(matches!(res, Err(Error::Precondition { .. })), "expected a precondition error");
            return Ok(());
        }
        match res {
            Ok((b, t)) => {
                let q = t.after;
                prop_assert_eq!(q.c, p.c);
                prop_assert_eq!(q.v, target);
                prop_assert_eq!(q.s + q.v, p.s + p.v);
                prop_assert_eq!(q.bar_triple(), p.bar_triple());
                prop_assert_eq!(t.moved_cells.len() as i64, 2 * step);
                prop_assert!(replay(&a, &t, &b));
                prop_assert!(phi_oracle(&b) >= phi_oracle(&a) - 1e-12);
            }
            Err(e) => prop_assert!(matches!(e, Error::Stalled { .. }), "{e}"),
        }
    }

    #[test]
    fn rewrites_reject_inputs_outside_the_class(n in 4usize..9) {
        let k = StaircaseMatrix::from_profile(&vec![n; n]).unwrap();
        prop_assert!(lemma34(&k, 1).is_err());
        prop_assert!(lemma35_run(&k).is_err());
        prop_assert!(normalize_chain(&k).is_err());
    }
}
