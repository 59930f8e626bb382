mod common;

use common::{exact_ln_g, rng};
use f5lab::analysis::Constants;
use f5lab::bounds::{chernoff_c, check_claim, claim_p, ln_binom, ln_g, s_grid, ClaimId};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn ln_g_matches_exact_evaluation() {
    let mut r = rng(2024);
    let mut checked = 0;
    while checked < 100 {
        let n: u64 = r.gen_range(2..=12);
        let s = r.gen_range(1..=n);
        let rr = r.gen_range(0..=(n * n).min(6));
        let i = r.gen_range(0..=s);
        let den: u64 = r.gen_range(2..=10);
        let num = r.gen_range(1..=den);
        let (exact_ln, g) = exact_ln_g(n, num, den, s, rr, i);
        if g > 1e15 {
            continue;
        }
        let got = ln_g(n as f64, num as f64 / den as f64, s as f64, rr as f64, i as f64).unwrap();
        let rel = (got.exp() - g).abs() / g;
        assert!(rel <= 1e-6, "n={n} p={num}/{den} s={s} r={rr} i={i}: {got} vs {exact_ln}");
        checked += 1;
    }
}

#[test]
fn chernoff_hand_values() {
    assert!((chernoff_c(1.0).unwrap() - 0.3863).abs() < 1e-3);
    assert!((chernoff_c(0.5).unwrap() - 0.1082).abs() < 1e-3);
    assert!(chernoff_c(0.0).is_err());
}

#[test]
fn ln_binom_small_values() {
    assert!((ln_binom(10.0, 3.0).unwrap() - 120f64.ln()).abs() < 1e-12);
    assert!((ln_binom(52.0, 5.0).unwrap() - 2_598_960f64.ln()).abs() < 1e-10);
    assert_eq!(ln_binom(7.0, 0.0).unwrap(), 0.0);
    assert!(ln_binom(3.0, 4.0).is_err());
}

#[test]
fn claim_grids_are_within_range() {
    let consts = Constants::default();
    for claim in ClaimId::ALL {
        for n in [1e6, 1e9, 1e12] {
            let grid = s_grid(claim, n, &consts, 32);
            assert!(!grid.is_empty());
            let reports = check_claim(claim, n, 1e4, &consts, &grid);
            assert_eq!(reports.len(), grid.len());
            for rep in reports.iter().filter(|r| !r.is_degenerate()) {
                let margin = rep.margin.unwrap();
                assert!((margin - rep.ln_g.unwrap() - 5.0 * n.ln()).abs() < 1e-6 * margin.abs().max(1.0));
                assert_eq!(rep.holds, margin < 0.0);
            }
        }
    }
}

proptest! {
    #[test]
    fn chernoff_below_quadratic(eps in 1e-6f64..10.0) {
        let c = chernoff_c(eps).unwrap();
        prop_assert!(c > 0.0);
        prop_assert!(c <= eps * eps / 2.0);
    }

    #[test]
    fn ln_g_grows_with_n(n in 10.0f64..1e6, s in 1.0f64..10.0, r in 0.0f64..50.0, frac in 0.0f64..1.0) {
        let i = frac * s;
        let a = ln_g(n, 0.5, s, r, i).unwrap();
        let b = ln_g(n * 2.0, 0.5, s, r, i).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn ln_binom_symmetric(a in 1.0f64..1e9, frac in 0.0f64..1.0) {
        let b = (a * frac).floor();
        let x = ln_binom(a, b).unwrap();
        let y = ln_binom(a, a - b).unwrap();
        prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
    }

    #[test]
    fn claim_p_formula(n in 10.0f64..1e12, c in 1.0f64..1e4) {
        prop_assert!((claim_p(n, c) - c * n.ln().sqrt() / n).abs() <= 1e-12 * claim_p(n, c));
    }
}
