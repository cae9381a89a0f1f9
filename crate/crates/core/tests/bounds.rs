use ng_spectral::bounds::{
    best_split_q, bound_report, e_plus_f_closed, ef_terms, equality_case, g_quartic, phi,
    phi_ell, phi_from_params, phi_via_2x2, phi_via_2x2_shifted, predicted_best_q, rho0,
    rho0_closed, s_sum_bound, split_ceil_rho, split_rho,
};
use ng_spectral::linalg::sym_eigen_max;
use ng_spectral::staircase::{enumerate_sstar, enumerate_sstar_sym};
use ng_spectral::{DenseMatrix, ParamSix, StaircaseMatrix};
use proptest::prelude::*;

fn six_vertex() -> StaircaseMatrix {
    StaircaseMatrix::from_profile(&[6, 4, 3, 3, 2, 1]).unwrap()
}

/// Larger eigenvalue of `[[a, b], [c, d]]` with real spectrum.
fn top_eigen_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let tr = a + d;
    let det = a * d - b * c;
    0.5 * (tr + (tr * tr - 4.0 * det).sqrt())
}

#[test]
fn six_vertex_values() {
    let a = six_vertex();
    assert_eq!(a.row_sums(), vec![5, 3, 2, 3, 2, 1]);
    assert_eq!(a.full_params().unwrap(), ParamSix::new(4, 2, 1, 4, 1, 1));
    assert_eq!(a.full_params().unwrap().t, 0);
    let want = (1.0 + 29f64.sqrt()) / 2.0;
    assert!((phi(&a).unwrap() - want).abs() < 1e-12);

    // swap a_61 = 1 and a_53 = 0
    let mut d = a.to_dense();
    d[(5, 0)] = 0.0;
    d[(4, 2)] = 1.0;
    let a1 = StaircaseMatrix::from_dense(&d).unwrap();
    assert!(a1.in_sstar());
    assert_eq!(a1.params().unwrap(), (4, 3, 1));
    let want1 = (2.0 + 20f64.sqrt()) / 2.0;
    assert!((phi(&a1).unwrap() - want1).abs() < 1e-12);
    assert!(want1 > want);
}

#[test]
fn realization_of_phi() {
    // (c, v, s) = (4, 2, 1)
    let phi = phi_from_params(4, 2, 1);
    assert!((top_eigen_2x2(3.0, 1.0, 1.0, -2.0) - phi).abs() < 1e-12);
    assert!((top_eigen_2x2(7.0, 1.0, 1.0, 2.0) - (phi + 4.0)).abs() < 1e-12);
    assert!((phi_via_2x2(&six_vertex()).unwrap() - phi).abs() < 1e-10);
    assert!((phi_via_2x2_shifted(&six_vertex()).unwrap() - phi).abs() < 1e-10);
}

#[test]
fn clique_plus_isolated_parameters() {
    for n in 4..=9 {
        for t in 2..n {
            let a = StaircaseMatrix::clique_plus_isolated(n, t).unwrap();
            let k = t as i64 - 1;
            assert_eq!(a.params().unwrap(), (k, k, k), "n = {n}, t = {t}");
        }
    }
}

#[test]
fn split_graph_parameters() {
    for n in 4..=12 {
        for q in 1..=n - 2 {
            let a = StaircaseMatrix::split_graph(n, q).unwrap();
            let p = a.full_params().unwrap();
            let m = (n - q - 1) as i64;
            assert_eq!(p.bar_triple(), (m, m, m), "n = {n}, q = {q}");
            // the clique side from the closed form of rho
            let (r, rb) = split_rho(n, q).unwrap();
            assert_eq!(p.c, split_ceil_rho(n, q));
            assert_eq!(p.c, r.ceil() as i64);
            assert_eq!(rb, m as f64);
        }
    }
}

#[test]
fn split_graph_closed_form() {
    let want = (1.0 + 33f64.sqrt()) / 2.0;
    assert!((split_rho(6, 2).unwrap().0 - want).abs() < 1e-12);
    let a = StaircaseMatrix::split_graph(6, 2).unwrap();
    assert!((sym_eigen_max(&a.to_dense()).unwrap() - want).abs() < 1e-10);
}

#[test]
fn extremal_value_examples() {
    let r = rho0(8).unwrap();
    assert_eq!(r.rho0, 9.0);
    assert_eq!(r.best_q, vec![2, 3]);
    assert!((rho0_closed(6).unwrap() - (7.0 + 33f64.sqrt()) / 2.0).abs() < 1e-12);
    // the scan over split graphs agrees with the predicted q for every n
    for n in 3..=60 {
        assert_eq!(best_split_q(n).unwrap(), predicted_best_q(n), "n = {n}");
        let (r, rb) = split_rho(n, predicted_best_q(n)[0]).unwrap();
        assert!((r + rb - rho0_closed(n).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn quartic_fixture_with_equality() {
    for k in 2..=5i64 {
        let n = 3 * k;
        let p = ParamSix::new(2 * k - 1, k, 3 * k - 2, 2 * k, k, k);
        let (e, f) = ef_terms(&p);
        assert_eq!(e, ((3 * k - 3).pow(2) + 4 * (3 * k - 2)) as f64);
        assert_eq!(f, ((3 * k - 1).pow(2) + 4 * k) as f64);
        let g = g_quartic(&p).eval(rho0_closed(n as usize).unwrap());
        assert!(g.abs() < 1e-6, "k = {k}: g(rho0) = {g}");
    }
}

#[test]
fn quartic_is_positive_in_the_unbalanced_case() {
    // n = 7, c = 4, cbar = 5, v = n - cbar, vbar = n - c - 1
    let rho0 = rho0_closed(7).unwrap();
    let mut found = 0;
    for a in enumerate_sstar(7).unwrap() {
        let p = a.full_params().unwrap();
        if (p.c, p.cbar, p.v, p.vbar) == (4, 5, 2, 2) {
            found += 1;
            assert!(g_quartic(&p).eval(rho0) > 0.0, "{:?}", a.mu());
        }
    }
    assert!(found > 0);
}

#[test]
fn e_plus_f_closed_examples() {
    // (n, c, cbar) = (3k, 2k - 1, 2k), T = -1
    let k = 2.0;
    assert_eq!(e_plus_f_closed(6, 3, 4), 18.0 * k * k - 8.0 * k + 1.5 + 0.5);
    // (n, c, cbar) = (3k + 2, 2k, 2k + 2), T = 0
    assert_eq!(e_plus_f_closed(8, 4, 6), 18.0 * k * k + 18.0 * k + 5.0);
}

#[test]
fn s_sum_bound_is_tight_on_the_boundary() {
    let mut tight = 0;
    for n in 5..=8 {
        for a in enumerate_sstar(n).unwrap() {
            let p = a.full_params().unwrap();
            if p.c + p.cbar < n as i64 {
                assert!(s_sum_bound(&p, n).is_err());
                continue;
            }
            let (bound, is_tight) = s_sum_bound(&p, n).unwrap();
            assert!((p.s + p.sbar) as f64 <= bound);
            if p.vbar == n as i64 - p.c - 1 {
                assert!(is_tight, "{:?}", a.mu());
                tight += 1;
            }
        }
    }
    assert!(tight > 0);
}

#[test]
fn equality_forms_attain_the_bound() {
    let n = 9;
    let mut seen = 0;
    for a in enumerate_sstar_sym(n).unwrap() {
        if let Some(w) = equality_case(&a).unwrap() {
            seen += 1;
            let rho = sym_eigen_max(&a.to_dense()).unwrap();
            assert!((rho - phi(&a).unwrap()).abs() < 1e-8, "{w:?}");
        }
    }
    assert!(seen > 0);
    assert!(equality_case(&six_vertex()).is_err());
}

#[test]
fn report_collects_every_bound() {
    let a = StaircaseMatrix::split_graph(7, 2).unwrap();
    let r = bound_report(&a).unwrap();
    assert_eq!(r.phi_ell.len(), 7);
    assert!(r.rho <= r.phi + 1e-8);
    assert!(r.rho_bar <= r.phi_bar + 1e-8);
    for (l, x) in r.phi_ell.iter().enumerate() {
        assert_eq!(*x, phi_ell(&a, l + 1).unwrap());
        assert!(r.rho <= x + 1e-8);
    }
}

fn member(max_n: usize) -> impl Strategy<Value = StaircaseMatrix> {
    (4..=max_n, any::<prop::sample::Index>()).prop_map(|(n, idx)| {
        let all: Vec<StaircaseMatrix> = enumerate_sstar(n).unwrap().collect();
        all[idx.index(all.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn phi_matches_the_two_by_two_oracle(a in member(8)) {
        let (c, v, s) = a.params().unwrap();
        let (cf, vf, sf) = (c as f64, v as f64, s as f64);
        let want = top_eigen_2x2(cf - 1.0, sf, 1.0, vf - cf);
        let got = phi(&a).unwrap();
        prop_assert!((got - want).abs() <= 1e-10, "{got} vs {want}");
        prop_assert!((top_eigen_2x2(2.0 * cf - 1.0, sf, 1.0, vf) - cf - want).abs() <= 1e-10);
        prop_assert!((phi_via_2x2(&a).unwrap() - want).abs() <= 1e-8);
        prop_assert!((phi_via_2x2_shifted(&a).unwrap() - want).abs() <= 1e-8);
        // pinching
        prop_assert!(cf - 1.0 < got && got <= cf + 1e-12);
        prop_assert_eq!((got - cf).abs() <= 1e-12, s + v == 2 * c);
    }

    #[test]
    fn bound_holds_on_random_members(a in member(9)) {
        let d: DenseMatrix = a.to_dense();
        let r = bound_report(&a).unwrap();
        prop_assert!(r.rho <= r.phi + 1e-8);
        let min_ell = r.phi_ell.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(r.rho <= min_ell + 1e-8);
        if a.is_symmetric() {
            prop_assert!((sym_eigen_max(&d).unwrap() - r.rho).abs() <= 1e-10);
        }
    }
}

#[test]
fn phi_is_the_bound_at_c_plus_one() {
    // equal when the row sums are already sorted; otherwise the two are
    // different bounds
    let mut differ = 0;
    for n in 4..=8 {
        for a in enumerate_sstar(n).unwrap() {
            let c = a.params().unwrap().0 as usize;
            let r = a.row_sums();
            let (p, pl) = (phi(&a).unwrap(), phi_ell(&a, c + 1).unwrap());
            if r.windows(2).all(|w| w[0] >= w[1]) {
                assert!((p - pl).abs() < 1e-12, "{:?}", a.mu());
            } else if (p - pl).abs() > 1e-12 {
                differ += 1;
            }
        }
    }
    assert!(differ > 0);
}
