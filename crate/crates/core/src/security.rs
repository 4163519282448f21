//! Decoding radii, workfactor estimates, key sizes and countermeasure checks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The four decoding radii for a code of length `n` correcting `t` errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusReport {
    pub t: u64,
    pub generic_johnson: f64,
    pub bernstein: f64,
    pub tau2: f64,
    /// `ceil(tau2) - 1`, the largest weight strictly below the binary Johnson radius.
    pub ld_errors: u64,
}

pub fn radii(n: u64, t: u64) -> Result<RadiusReport> {
    if n == 0 || 4 * t + 2 > n {
        return Err(Error::Domain { n, t });
    }
    let nf = n as f64;
    let tf = t as f64;
    let generic_johnson = nf * (1.0 - (1.0 - 2.0 * tf / nf).sqrt());
    let bernstein = nf * (1.0 - (1.0 - (2.0 * tf + 2.0) / nf).sqrt());
    let tau2 = nf / 2.0 * (1.0 - (1.0 - (4.0 * tf + 2.0) / nf).sqrt());
    Ok(RadiusReport {
        t,
        generic_johnson,
        bernstein,
        tau2,
        ld_errors: tau2.ceil() as u64 - 1,
    })
}

/// `log2 C(n, k)` for real arguments via log-gamma; `-inf` outside `0 <= k <= n`.
pub fn log2_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    (libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0))
        / std::f64::consts::LN_2
}

/// Finiasz-Sendrier style decoding lower bound, in bits.
///
/// For every split `p` in `0..=w/2` the window `l` solves
/// `l = log2 C((k+l)/2, p)` by fixed-point iteration, and the cost is
/// `log2(2l * C(n,w) / (C(n-k-l, w-2p) * C((k+l)/2, p)))`. At `p = 0` the
/// window is empty and the `2l` factor is dropped, leaving the plain
/// information-set term. The result is the minimum over `p`.
pub fn fs_workfactor(n: u64, k: u64, w: u64) -> Result<f64> {
    fs_scan(n, k, w, f64::NEG_INFINITY)
}

/// Whether `fs_workfactor(n, k, w) >= target`, stopping at the first split
/// whose cost falls below `target`.
pub fn workfactor_at_least(n: u64, k: u64, w: u64, target: f64) -> Result<bool> {
    Ok(fs_scan(n, k, w, target)? >= target)
}

/// Minimum split cost, abandoning the scan once a cost below `floor` is seen.
fn fs_scan(n: u64, k: u64, w: u64, floor: f64) -> Result<f64> {
    if k == 0 || k >= n || w == 0 || w >= n - k {
        return Err(Error::Parameter(format!(
            "workfactor needs 0 < k < n and 0 < w < n - k (n={n}, k={k}, w={w})"
        )));
    }
    let (nf, kf, wf) = (n as f64, k as f64, w as f64);
    let total = log2_binomial(nf, wf);
    let mut best = f64::INFINITY;
    for p in 0..=w / 2 {
        let pf = p as f64;
        let mut l = 0.0f64;
        if p > 0 {
            for _ in 0..1000 {
                let next = log2_binomial((kf + l) / 2.0, pf).max(0.0);
                let done = (next - l).abs() < 0.01;
                l = next;
                if done {
                    break;
                }
            }
        }
        let rest = wf - 2.0 * pf;
        if nf - kf - l < rest {
            continue;
        }
        let window = if l > 0.0 { (2.0 * l).log2() } else { 0.0 };
        let cost = window + total
            - log2_binomial(nf - kf - l, rest)
            - log2_binomial((kf + l) / 2.0, pf);
        best = best.min(cost);
        if best < floor {
            break;
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Parameter(format!("no admissible split for n={n}, k={k}, w={w}")))
    }
}

/// Plain information-set iteration count `log2(C(n,w) / C(n-k,w))`; an
/// upper bound on [`fs_workfactor`].
pub fn prange_workfactor(n: u64, k: u64, w: u64) -> f64 {
    log2_binomial(n as f64, w as f64) - log2_binomial((n - k) as f64, w as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Generic,
    Dyadic,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Generic => "generic",
            Variant::Dyadic => "dyadic",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Variant::Generic),
            "dyadic" => Ok(Variant::Dyadic),
            _ => Err(Error::Parameter(format!("unknown variant {s:?}"))),
        }
    }
}

/// Public key size in bits: `m*k*r` for generic keys, `m*k` for dyadic ones.
pub fn keysize(variant: Variant, m: u64, k: u64, r: u64) -> u64 {
    match variant {
        Variant::Generic => m * k * r,
        Variant::Dyadic => m * k,
    }
}

/// Key size from the redundancy actually present: `(n-k)*k` for generic
/// keys and `(n-k)*k/r` for dyadic ones. Agrees with [`keysize`] whenever
/// `n - k = m*r`.
pub fn redundancy_keysize(variant: Variant, n: u64, k: u64, r: u64) -> u64 {
    match variant {
        Variant::Generic => (n - k) * k,
        Variant::Dyadic => (n - k) * k / r,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Countermeasures {
    /// `r(r+1) > n`.
    pub cm1: bool,
    /// `m >= 16`.
    pub cm2: bool,
}

pub fn check_countermeasures(m: u64, n: u64, r: u64) -> Countermeasures {
    Countermeasures {
        cm1: r * (r + 1) > n,
        cm2: m >= 16,
    }
}

/// `100 (ud - ld) / ud` in hundredths of a percent, rounded half away from zero.
pub fn gain_centi(ud_keysize: u64, ld_keysize: u64) -> i64 {
    assert!(ud_keysize > 0);
    let (ud, ld) = (ud_keysize as i128, ld_keysize as i128);
    let num = 10_000 * (ud - ld);
    let q = (2 * num.abs() + ud) / (2 * ud);
    (if num < 0 { -q } else { q }) as i64
}

pub fn gain(ud_keysize: u64, ld_keysize: u64) -> f64 {
    gain_centi(ud_keysize, ld_keysize) as f64 / 100.0
}

/// `a / b` rounded half up to one decimal, in tenths.
pub fn ratio_deci(a: u64, b: u64) -> u64 {
    (20 * a + b) / (2 * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn radius_examples() {
        assert_eq!(radii(1876, 40).unwrap().ld_errors, 41);
        assert_eq!(radii(1728, 64).unwrap().ld_errors, 67);
        assert_eq!(radii(19456, 1024).unwrap().ld_errors, 1085);
        assert_eq!(radii(64, 6).unwrap().ld_errors, 7);
        assert_eq!(radii(32, 4).unwrap().ld_errors, 5);
        assert_eq!(radii(17, 4), Err(Error::Domain { n: 17, t: 4 }));
    }

    #[test]
    fn tau2_tends_to_half() {
        for n in [1002u64, 5002, 19998, 20000] {
            let t = (n - 2) / 4;
            let r = radii(n, t).unwrap();
            assert!((r.tau2 / n as f64 / 0.5 - 1.0).abs() < 0.01, "{n}");
        }
        // Exactly on the boundary the square root vanishes.
        let r = radii(18, 4).unwrap();
        assert_eq!(r.tau2, 9.0);
        let small = radii(64, 0).unwrap();
        assert!(small.bernstein > small.tau2);
    }

    #[test]
    fn binomial_against_exact() {
        // Exact integer binomials by Pascal's rule.
        let mut row = vec![1u128];
        for n in 1..=60u32 {
            let mut next = vec![1u128; n as usize + 1];
            for k in 1..n as usize {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
            for (k, &c) in row.iter().enumerate() {
                let exact = (c as f64).log2();
                assert!((log2_binomial(n as f64, k as f64) - exact).abs() < 1e-9);
            }
        }
        assert_eq!(log2_binomial(5.0, 6.0), f64::NEG_INFINITY);
    }

    #[test]
    fn keysize_examples() {
        assert_eq!(keysize(Variant::Generic, 11, 1431, 42), 661_122);
        assert_eq!(keysize(Variant::Dyadic, 11, 1024, 64), 11_264);
        assert_eq!(keysize(Variant::Dyadic, 16, 2560, 512), 40_960);
        assert_eq!(redundancy_keysize(Variant::Generic, 2868, 2196, 58), 1_475_712);
        assert_eq!(redundancy_keysize(Variant::Dyadic, 2816, 1280, 128), 15_360);
    }

    #[test]
    fn countermeasure_examples() {
        assert!(check_countermeasures(11, 1792, 64).cm1);
        assert!(!check_countermeasures(11, 1893, 42).cm1);
        assert!(check_countermeasures(16, 5120, 256).cm2);
        assert!(!check_countermeasures(15, 5120, 256).cm2);
    }

    #[test]
    fn gain_examples() {
        assert_eq!(gain(661_122, 631_840), 4.43);
        assert_eq!(gain(16_896, 13_312), 21.21);
        assert_eq!(gain(77, 77), 0.0);
        // 1/8 = 12.5% exactly; 1/800 = 0.125% rounds up to 0.13.
        assert_eq!(gain_centi(800, 799), 13);
        assert_eq!(gain_centi(800, 801), -13);
        assert_eq!(ratio_deci(13_312, 2048), 65);
        assert_eq!(ratio_deci(29_952, 7680), 39);
    }

    #[test]
    fn workfactor_domain() {
        assert!(fs_workfactor(100, 0, 5).is_err());
        assert!(fs_workfactor(100, 50, 50).is_err());
        assert!(fs_workfactor(100, 50, 0).is_err());
        let wf = fs_workfactor(1893, 1431, 42).unwrap();
        assert!(wf <= prange_workfactor(1893, 1431, 42) + 1e-9);
    }

    proptest! {
        #[test]
        fn radius_ordering(n in 64u64..20_000, frac in 0.0f64..1.0) {
            let t = (((n - 2) / 4) as f64 * frac) as u64;
            let r = radii(n, t).unwrap();
            let eps = 1e-9 * n as f64;
            prop_assert!(t as f64 <= r.generic_johnson + eps);
            prop_assert!(r.generic_johnson <= r.bernstein + eps);
            prop_assert!(r.generic_johnson <= r.tau2 + eps);
            // Bernstein's radius starts one error above t while tau2 starts
            // half an error above it; tau2 only overtakes once t ~ sqrt(n).
            if (t as f64) >= (n as f64).sqrt() {
                prop_assert!(r.bernstein <= r.tau2 + eps);
            }
        }

        #[test]
        fn workfactor_monotone_in_w(n in 200u64..3000, kfrac in 0.3f64..0.9, w0 in 2u64..40) {
            let k = (n as f64 * kfrac) as u64;
            prop_assume!(w0 + 1 < n - k);
            let a = fs_workfactor(n, k, w0).unwrap();
            let b = fs_workfactor(n, k, w0 + 1).unwrap();
            prop_assert!(b >= a - 1e-9, "n={} k={} w={} {} {}", n, k, w0, a, b);
        }

        #[test]
        fn threshold_predicate_agrees(n in 200u64..3000, kfrac in 0.3f64..0.9, w in 2u64..60, target in 10.0f64..200.0) {
            let k = (n as f64 * kfrac) as u64;
            prop_assume!(w < n - k);
            let exact = fs_workfactor(n, k, w).unwrap();
            prop_assert_eq!(workfactor_at_least(n, k, w, target).unwrap(), exact >= target);
        }
    }
}
