use std::collections::BTreeSet;

use ng_spectral::par::Exec;
use ng_spectral::staircase::enumerate_sstar_sym;
use ng_spectral::verifier::{
    conjectured_families, final_case_certificate, final_case_instance, rooted_bound_check,
    rooted_synthetic, verify_bruteforce, verify_staircase, CertificateReport, VerifyReport,
};
use ng_spectral::linalg::char_poly;
use proptest::prelude::*;

/// Best `rho(K_q v N_{n-q}) + rho(K_{n-q} + N_q)` over `q`, from the 2x2
/// quotient of the join and the clique degree.
fn split_oracle(n: usize) -> (f64, Vec<usize>) {
    let vals: Vec<(usize, f64)> = (1..n - 1)
        .map(|q| {
            let (qf, pf) = (q as f64, (n - q) as f64);
            let join = 0.5 * ((qf - 1.0) + ((qf - 1.0).powi(2) + 4.0 * qf * pf).sqrt());
            (q, join + pf - 1.0)
        })
        .collect();
    let best = vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let qs = vals.iter().filter(|v| best - v.1 < 1e-9).map(|v| v.0).collect();
    (best, qs)
}

fn labels(r: &VerifyReport) -> BTreeSet<String> {
    r.arg_max.iter().map(|m| m.label.clone()).collect()
}

fn without_time(mut r: VerifyReport) -> VerifyReport {
    r.elapsed = 0.0;
    r
}

#[test]
fn staircase_sweep_matches_the_split_oracle() {
    for n in 3..=14 {
        let r = verify_staircase(n, Exec::Parallel).unwrap();
        let (best, qs) = split_oracle(n);
        assert!(r.passed(), "n = {n}: {:?}", r.counterexamples);
        assert!((r.max_value - best).abs() < 1e-9, "n = {n}");
        assert!(r.gap.abs() < 1e-9);
        assert_eq!(r.instances_checked, (1u64 << (n - 1)) - 2);
        assert!(!labels(&r).contains("unexpected"));
        // one join and one disjoint union per best q
        assert_eq!(r.arg_max.len(), 2 * qs.len(), "n = {n}");
    }
}

#[test]
fn order_eight_has_two_extremal_pairs() {
    let r = verify_staircase(8, Exec::Sequential).unwrap();
    assert!((r.max_value - 9.0).abs() < 1e-12);
    let want: BTreeSet<String> = ["K_2 v N_6", "K_6 + N_2", "K_3 v N_5", "K_5 + N_3"]
        .map(String::from)
        .into();
    assert_eq!(labels(&r), want);
    let fam: BTreeSet<String> = conjectured_families(8).unwrap().into_iter().map(|f| f.0).collect();
    assert_eq!(fam, want);
}

#[test]
fn brute_force_agrees_with_the_staircase_sweep() {
    for n in 3..=6 {
        let b = verify_bruteforce(n, Exec::Parallel).unwrap();
        let s = verify_staircase(n, Exec::Parallel).unwrap();
        assert!(b.passed(), "n = {n}: {:?}", b.counterexamples);
        assert!((b.max_value - s.max_value).abs() < 1e-9);
        assert_eq!(b.instances_checked, 1u64 << (n * (n - 1) / 2));
        assert_eq!(labels(&b), labels(&s));
        assert_eq!(s.all_graphs_max.map(|m| (m - b.max_value).abs() < 1e-9), Some(true));
    }
    // both families at n = 5
    let fam = conjectured_families(5).unwrap();
    assert_eq!(fam.len(), 4);
    assert_eq!(labels(&verify_bruteforce(5, Exec::Sequential).unwrap()).len(), 4);
}

#[test]
fn execution_mode_does_not_change_reports() {
    for n in [6, 10, 12] {
        let a = without_time(verify_staircase(n, Exec::Sequential).unwrap());
        let b = without_time(verify_staircase(n, Exec::Parallel).unwrap());
        assert_eq!(a, b);
    }
    let a = without_time(verify_bruteforce(5, Exec::Sequential).unwrap());
    let b = without_time(verify_bruteforce(5, Exec::Parallel).unwrap());
    assert_eq!(a, b);
    let strip = |mut c: CertificateReport| {
        c.elapsed = 0.0;
        c
    };
    assert_eq!(
        strip(final_case_certificate(4, Exec::Sequential).unwrap()),
        strip(final_case_certificate(4, Exec::Parallel).unwrap())
    );
}

#[test]
fn certificate_counts_and_passes() {
    let r = final_case_certificate(5, Exec::Parallel).unwrap();
    assert!(r.passed, "{:?}", r.failures);
    let mut total = 0;
    for (row, k) in r.rows.iter().zip(1i64..) {
        let mut count = 0u64;
        for _s in 1..=3 * k {
            for _a in -k * (k - 1)..=0 {
                count += 1;
            }
        }
        assert_eq!(row.instances, count);
        assert_eq!(row.expected_instances, count);
        assert!(row.min_margin > 0.0);
        total += count;
    }
    assert_eq!(r.rows[4].instances, 15 * 21);
    assert_eq!(r.instances_checked, total);
}

#[test]
fn certificate_rejects_bad_k() {
    assert!(final_case_certificate(0, Exec::Sequential).is_err());
    assert!(final_case_instance(0, 1, 0).is_err());
}

#[test]
fn rooted_reduction_reproduces_the_closed_form() {
    for k in 1..=3 {
        let a = rooted_synthetic(k).unwrap().expect("a member with the shape exists");
        let rep = rooted_bound_check(&a).unwrap();
        assert!(rep.final_case_shape);
        assert_eq!(rep.matches_m2, Some(true), "k = {k}");
        assert!(rep.passed, "{rep:?}");
        assert!(rep.rho_bar <= rep.rho_r_m3 + 1e-8);
        let (lhs, rhs) = rep.prefix_identity;
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn rooted_check_holds_on_the_symmetric_class() {
    for n in 4..=9 {
        for a in enumerate_sstar_sym(n).unwrap() {
            let p = a.full_params().unwrap();
            if !(0 < p.vbar && p.vbar < p.cbar) {
                assert!(rooted_bound_check(&a).is_err());
                continue;
            }
            let rep = rooted_bound_check(&a).unwrap();
            assert!(rep.passed, "{:?}: {:?}", a.mu(), rep.hypothesis_violations);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn h_is_the_characteristic_polynomial_of_m2(k in 1i64..12, s0 in 0i64..1000, a0 in 0i64..1000) {
        let s = 1 + s0 % (3 * k);
        let a = -(a0 % (k * (k - 1) + 1));
        let inst = final_case_instance(k, s, a).unwrap();
        let m = &inst.m2;
        // trace, sum of principal 2x2 minors, determinant
        let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
        let minor = |i: usize, j: usize| m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
        let e2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
        let det = m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
            - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
            + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]);
        let want = [-det, e2, -tr, 1.0];
        prop_assert_eq!(inst.h.coeffs(), &want[..]);
        let cp = char_poly(m).unwrap();
        for (x, y) in cp.coeffs().iter().zip(want) {
            prop_assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0));
        }
    }

    #[test]
    fn exact_determinant_matches_the_kronecker_spectrum(k in 1i64..8, s0 in 0i64..100, a0 in 0i64..100) {
        let s = 1 + s0 % (3 * k);
        let a = -(a0 % (k * (k - 1) + 1));
        let inst = final_case_instance(k, s, a).unwrap();
        let x = (4 * k + 1) as f64;
        let got = char_poly(&inst.m).unwrap().eval(x);
        let want = inst.det_at_4k1 as f64;
        prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0), "{got} vs {want}");
        prop_assert!(inst.det_at_4k1 > 0);
    }
}
