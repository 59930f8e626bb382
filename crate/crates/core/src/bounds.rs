//! Log-domain evaluation of the union-bound function
//! `g(p, s, r, i) = n·C(n,s)·C(n²,r)·(p·C(s,i)·p^i)^r`, the Chernoff
//! constant, the five claims over a grid of `s`, and the constant system.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analysis::Constants;
use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x + 1) − (x ln x − x + ½ ln 2πx)` for `x ≥ 10`.
fn stirling_tail(x: f64) -> f64 {
    let x2 = x * x;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x
}

/// `ln Γ(x + 1)` for real `x ≥ 0`.
fn ln_factorial(x: f64) -> f64 {
    if x >= 10.0 {
        x * x.ln() - x + HALF_LN_2PI + 0.5 * x.ln() + stirling_tail(x)
    } else {
        let shifted = ln_factorial(x + 10.0);
        (1..=10).fold(shifted, |acc, j| acc - (x + j as f64).ln())
    }
}

/// `ln C(a, b)` for real `0 ≤ b ≤ a`, through log-Gamma.
///
/// The two large factorials are combined analytically, so the result keeps
/// full relative precision when `b` is tiny next to `a` (as for `C(n², r)`).
pub fn ln_binom(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || b < 0.0 || b > a {
        return Err(Error::Domain(format!("ln_binom needs 0 <= b <= a, got ({a}, {b})")));
    }
    let small = b.min(a - b);
    if small == 0.0 {
        return Ok(0.0);
    }
    let large = a - small;
    if large < 10.0 {
        return Ok(ln_factorial(a) - ln_factorial(small) - ln_factorial(large));
    }
    // ln Γ(a+1) − ln Γ(large+1) with large = a − small
    let q = (-small / a).ln_1p();
    let head = small * a.ln() - small - large * q - 0.5 * q;
    Ok(head + stirling_tail(a) - stirling_tail(large) - ln_factorial(small))
}

/// The elementary bound `ln C(a, b) ≤ b ln(e a / b)`.
pub fn ln_binom_upper(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || b < 0.0 || b > a {
        return Err(Error::Domain(format!("ln_binom_upper needs 0 <= b <= a, got ({a}, {b})")));
    }
    Ok(if b == 0.0 { 0.0 } else { b * (a / b).ln() + b })
}

/// `ln g(p, s, r, i)` for real parameters.
pub fn ln_g(n: f64, p: f64, s: f64, r: f64, i: f64) -> Result<f64> {
    let domain = n >= 1.0
        && p > 0.0
        && p <= 1.0
        && (1.0..=n).contains(&s)
        && (0.0..=n * n).contains(&r)
        && (0.0..=s).contains(&i);
    if !domain {
        return Err(Error::Domain(format!(
            "ln_g outside its domain: n={n}, p={p}, s={s}, r={r}, i={i}"
        )));
    }
    let lp = p.ln();
    let per_pair = if r == 0.0 { 0.0 } else { r * (lp + ln_binom(s, i)? + i * lp) };
    Ok(n.ln() + ln_binom(n, s)? + ln_binom(n * n, r)? + per_pair)
}

/// `min{−ln(e^ε (1+ε)^{−(1+ε)}), ε²/2}`.
pub fn chernoff_c(eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("chernoff_c needs eps > 0, got {eps}")));
    }
    let first = (1.0 + eps) * eps.ln_1p() - eps;
    Ok(first.min(eps * eps / 2.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    A171,
    A172,
    Apn,
    A161,
    A162,
}

impl ClaimId {
    pub const ALL: [ClaimId; 5] = [ClaimId::A171, ClaimId::A172, ClaimId::Apn, ClaimId::A161, ClaimId::A162];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::A171 => "A171",
            ClaimId::A172 => "A172",
            ClaimId::Apn => "Apn",
            ClaimId::A161 => "A161",
            ClaimId::A162 => "A162",
        }
    }

    /// The stated range of `s`: `(lower, upper, lower_open)`.
    pub fn s_range(self, n: f64, consts: &Constants) -> (f64, f64, bool) {
        let sl = n.ln().sqrt();
        match self {
            ClaimId::A171 => (1.0, consts.eps1 * n / sl, false),
            ClaimId::A172 => (consts.eps1 * n / sl, consts.eps1 * n, true),
            ClaimId::Apn => (1.0, n, false),
            ClaimId::A161 => (1.0, consts.eps3 * n / sl, false),
            ClaimId::A162 => (1.0, consts.eps3 * n, false),
        }
    }

    /// `(r, i)` substituted at `s`.
    pub fn params(self, n: f64, p: f64, s: f64, consts: &Constants) -> (f64, f64) {
        let (ln, sl) = (n.ln(), n.ln().sqrt());
        match self {
            ClaimId::A171 => (p * n * s / sl, p * n * ln.ln() / (500.0 * sl)),
            ClaimId::A172 => (p * n * s / 500.0, 3.0 * consts.eps1 * p * n),
            ClaimId::Apn => (p * n * n / ln, 3.0 * p * n),
            ClaimId::A161 => (consts.eps2 * p * n * n / 2.0, 3.0 * consts.eps3 * p * n / sl),
            ClaimId::A162 => (consts.eps2 * p * n * n / 2.0, 3.0 * consts.eps3 * p * n),
        }
    }
}

/// `C · √(ln n) / n`.
pub fn claim_p(n: f64, big_c: f64) -> f64 {
    big_c * n.ln().sqrt() / n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFlag {
    /// `r` evaluates to zero: the product is empty.
    RZero,
    /// `i > s`: `g = 0` and `ln_g` is absent.
    IAboveS,
    /// `s` lies outside the claim's range (the range may be empty).
    OutOfRange,
    /// `p` exceeds 1 or some other argument leaves the domain of `ln_g`.
    Domain,
}

impl BoundFlag {
    fn name(self) -> &'static str {
        match self {
            BoundFlag::RZero => "r_zero",
            BoundFlag::IAboveS => "i_above_s",
            BoundFlag::OutOfRange => "out_of_range",
            BoundFlag::Domain => "domain",
        }
    }
}

/// One grid point of one claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub claim_id: ClaimId,
    pub n: f64,
    pub big_c: f64,
    pub s: f64,
    pub r: f64,
    pub i: f64,
    /// Absent when the point leaves the domain of `ln_g`.
    pub ln_g: Option<f64>,
    /// `ln_g + 5 ln n`.
    pub margin: Option<f64>,
    /// `margin < 0`, or `i > s` where `C(s, i) = 0` makes `g` vanish.
    pub holds: bool,
    pub flags: Vec<BoundFlag>,
}

impl BoundReport {
    pub fn is_degenerate(&self) -> bool {
        !self.flags.is_empty()
    }
}

/// `points` log-spaced integers across the claim's range, deduplicated. An
/// empty range yields the single point `s = 1`, which the report flags.
pub fn s_grid(claim: ClaimId, n: f64, consts: &Constants, points: usize) -> Vec<f64> {
    let (lo, hi, open) = claim.s_range(n, consts);
    let first = if open { lo.floor() + 1.0 } else { lo.ceil().max(1.0) };
    let last = hi.floor();
    if last < first || points == 0 {
        return vec![1.0];
    }
    let mut out: Vec<f64> = (0..points)
        .map(|k| {
            let t = if points == 1 { 0.0 } else { k as f64 / (points - 1) as f64 };
            (first.ln() + t * (last.ln() - first.ln())).exp().round().clamp(first, last)
        })
        .collect();
    out.dedup();
    out
}

pub fn check_claim(claim: ClaimId, n: f64, big_c: f64, consts: &Constants, s_grid: &[f64]) -> Vec<BoundReport> {
    let p = claim_p(n, big_c);
    let (lo, hi, open) = claim.s_range(n, consts);
    s_grid
        .iter()
        .map(|&s| {
            let (r, i) = claim.params(n, p, s, consts);
            let mut flags = Vec::new();
            let in_range = if open { s > lo && s <= hi } else { s >= lo && s <= hi };
            if !in_range {
                flags.push(BoundFlag::OutOfRange);
            }
            if r == 0.0 {
                flags.push(BoundFlag::RZero);
            }
            if i > s {
                flags.push(BoundFlag::IAboveS);
            }
            let ln_g = match ln_g(n, p, s, r, i) {
                Ok(v) => Some(v),
                Err(_) => {
                    if !flags.contains(&BoundFlag::IAboveS) {
                        flags.push(BoundFlag::Domain);
                    }
                    None
                }
            };
            let margin = ln_g.map(|v| v + 5.0 * n.ln());
            BoundReport {
                claim_id: claim,
                n,
                big_c,
                s,
                r,
                i,
                ln_g,
                margin,
                holds: flags.contains(&BoundFlag::IAboveS) || margin.is_some_and(|m| m < 0.0),
                flags,
            }
        })
        .collect()
}

pub const DEFAULT_NS: [f64; 3] = [1e6, 1e9, 1e12];
pub const DEFAULT_BIG_C: f64 = 1e4;
pub const DEFAULT_S_POINTS: usize = 32;
pub const C_LADDER: [f64; 4] = [10.0, 100.0, 1000.0, 10_000.0];

/// Every claim over the default grid at one `C`.
pub fn check_grid(ns: &[f64], big_c: f64, consts: &Constants, points: usize) -> Vec<BoundReport> {
    let mut out = Vec::new();
    for claim in ClaimId::ALL {
        for &n in ns {
            out.extend(check_claim(claim, n, big_c, consts, &s_grid(claim, n, consts, points)));
        }
    }
    out
}

/// Smallest `C` of `ladder` at which every non-degenerate point of the claim
/// holds over `ns`; `None` when no rung passes.
pub fn smallest_passing_c(claim: ClaimId, ns: &[f64], ladder: &[f64], consts: &Constants, points: usize) -> Option<f64> {
    ladder.iter().copied().find(|&c| {
        ns.iter().all(|&n| {
            check_claim(claim, n, c, consts, &s_grid(claim, n, consts, points))
                .iter()
                .all(|rep| rep.is_degenerate() || rep.holds)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The five constraints on `(δ, ε₁, ε₂, ε₃)`. The two-sided chain on `ε₃`
/// counts as one constraint.
pub fn check_constants(c: &Constants) -> Vec<ConstraintCheck> {
    let ge = |id: &str, lhs: f64, rhs: f64| ConstraintCheck {
        id: id.into(),
        lhs,
        rhs,
        holds: lhs >= rhs,
    };
    let lower = 100.0 * c.delta / c.eps1;
    vec![
        ge("inv_72_eps1", 1.0 / (72.0 * c.eps1), 30.0),
        ge("inv_40_eps2", (1.0 / 20.0) * (1.0 / (2.0 * c.eps2)), 10.0),
        ge("tenth_minus_eps2", 0.1 - c.eps2, 1.0 / 20.0),
        ConstraintCheck {
            id: "eps3_window".into(),
            lhs: c.eps3,
            rhs: lower,
            holds: lower <= c.eps3 && c.eps3 <= c.eps1,
        },
        ge("eps1_eps2_over_eps3", (0.25 * c.eps1 * c.eps2) / (3.0 * c.eps3), 20.0),
    ]
}

pub const CSV_HEADER: [&str; 10] = ["claim_id", "n", "C", "s", "r", "i", "ln_g", "margin", "holds", "flags"];

fn opt_num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Writes claim rows, then one row per constant constraint with
/// `claim_id = constants`, the constraint id in `flags`, its left side in
/// `ln_g` and its right side in `margin`.
pub fn write_csv<W: Write>(out: W, reports: &[BoundReport], constants: &[ConstraintCheck]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        let flags: Vec<&str> = r.flags.iter().map(|f| f.name()).collect();
        w.write_record([
            r.claim_id.name().to_string(),
            format!("{:e}", r.n),
            format!("{:e}", r.big_c),
            format!("{:e}", r.s),
            format!("{:e}", r.r),
            format!("{:e}", r.i),
            opt_num(r.ln_g),
            opt_num(r.margin),
            r.holds.to_string(),
            flags.join(";"),
        ])?;
    }
    for c in constants {
        w.write_record([
            "constants".to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            format!("{:e}", c.lhs),
            format!("{:e}", c.rhs),
            c.holds.to_string(),
            c.id.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn binomial_examples() {
        assert!(close(ln_binom(10.0, 2.0).unwrap(), 45f64.ln(), 1e-12));
        assert_eq!(ln_binom(7.5, 0.0).unwrap(), 0.0);
        assert!(close(ln_binom(52.0, 5.0).unwrap(), 2_598_960f64.ln(), 1e-12));
        assert!(ln_binom(3.0, 4.0).is_err());
        assert!(ln_binom(3.0, -1.0).is_err());
    }

    #[test]
    fn binomial_against_integers() {
        for a in 0..=20u64 {
            let mut c = 1u64;
            for b in 0..=a {
                if b > 0 {
                    c = c * (a - b + 1) / b;
                }
                let got = ln_binom(a as f64, b as f64).unwrap();
                assert!((got - (c as f64).ln()).abs() <= 1e-9 * (c as f64).ln().max(1.0), "C({a},{b})");
            }
        }
    }

    #[test]
    fn binomial_huge_top() {
        // ln C(a, 1) = ln a even where a ± 1 is not representable
        assert!(close(ln_binom(1e24, 1.0).unwrap(), 1e24f64.ln(), 1e-12));
        // ln C(a, b) ≈ b ln(a/b) + b − ½ ln(2πb) for b ≪ a
        let (a, b) = (1e24f64, 1e13f64);
        let approx = b * (a / b).ln() + b - 0.5 * (2.0 * std::f64::consts::PI * b).ln() - b * b / (2.0 * a);
        assert!(close(ln_binom(a, b).unwrap(), approx, 1e-12));
        assert!(ln_binom(a, b).unwrap() <= ln_binom_upper(a, b).unwrap());
    }

    #[test]
    fn g_examples() {
        assert!(close(ln_g(10.0, 0.5, 2.0, 1.0, 2.0).unwrap(), 5625f64.ln(), 1e-12));
        let base = 10f64.ln() + ln_binom(10.0, 3.0).unwrap();
        assert!(close(ln_g(10.0, 0.3, 3.0, 0.0, 1.0).unwrap(), base, 1e-12));
        assert!(ln_g(10.0, 0.5, 2.0, 1.0, 3.0).is_err());
        assert!(ln_g(10.0, 0.0, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn chernoff_values() {
        assert!((chernoff_c(1.0).unwrap() - 0.3863).abs() < 1e-3);
        assert!((chernoff_c(0.5).unwrap() - 0.1082).abs() < 1e-3);
        let tiny = chernoff_c(1e-3).unwrap();
        assert!(tiny > 0.0 && (tiny - 5e-7).abs() < 1e-8);
        assert!(chernoff_c(0.0).is_err());
    }

    #[test]
    fn default_constants_pass() {
        let checks = check_constants(&Constants::default());
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
        let bad = Constants {
            eps1: 1.0,
            ..Constants::default()
        };
        assert!(!check_constants(&bad)[0].holds);
        let bad = Constants {
            eps3: 1.0,
            ..Constants::default()
        };
        assert!(!check_constants(&bad)[3].holds);
    }

    #[test]
    fn claim_spot_checks() {
        let c = Constants::default();
        let pn = check_claim(ClaimId::Apn, 1e9, 1e4, &c, &[1e9]);
        assert!(pn[0].holds && pn[0].flags.is_empty());
        let a = check_claim(ClaimId::A171, 1e9, 1e4, &c, &[1.0]);
        assert!(a[0].holds && a[0].flags == vec![BoundFlag::IAboveS] && a[0].ln_g.is_none());
        let b = check_claim(ClaimId::A171, 1e9, 1e4, &c, &[1000.0]);
        assert!(b[0].holds && b[0].flags.is_empty());
        let zero = check_claim(ClaimId::A161, 1e9, 0.0, &c, &[1.0]);
        assert!(zero[0].flags.contains(&BoundFlag::RZero) || zero[0].flags.contains(&BoundFlag::Domain));
        assert!(!zero[0].holds);
    }

    #[test]
    fn grid_shape() {
        let c = Constants::default();
        let g = s_grid(ClaimId::Apn, 1e6, &c, 32);
        assert!(g.len() > 24 && g.len() <= 32);
        assert_eq!(g[0], 1.0);
        assert_eq!(*g.last().unwrap(), 1e6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s_grid(ClaimId::A161, 1e6, &c, 32), vec![1.0]);
    }
}
