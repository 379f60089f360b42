//! Closed-form upper bounds and reference values.
//!
//! Integer bounds are exact big integers. Real-valued quantities are `f64`
//! and reported to six significant digits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::zp::{gcd, is_prime, power_residues, residue_count_formula, Prime};

/// `(p - t + 1)^n`, the largest possible size of a set whose nonzero
/// differences all avoid `K^n` when `|K| = t`.
pub fn thm2_bound(p: Prime, t: u64, n: u32) -> Result<BigUint> {
    if t == 0 || t > p.get() as u64 {
        return Err(Error::TOutOfRange { t, p: p.get() });
    }
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(BigUint::from(p.get() as u64 - t + 1).pow(n))
}

/// `((p-1)(d-1)/d + 1)^n` with `d = gcd(k, p-1)`; the bound specialised to
/// `K = Q(k)`.
pub fn cor3_bound(p: Prime, k: u64, n: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::ExponentTooSmall(k));
    }
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let pm1 = p.get() as u64 - 1;
    let d = gcd(k, pm1);
    // (p-1) is divisible by d, so this is exact.
    let inner = pm1 / d * (d - 1) + 1;
    Ok(BigUint::from(inner).pow(n))
}

/// Sum of the base-`q` digits of `k`.
pub fn digit_sum(mut k: u64, q: u64) -> u64 {
    assert!(q >= 2, "base must be at least 2");
    let mut s = 0;
    while k > 0 {
        s += k % q;
        k /= q;
    }
    s
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= q {
        if q.is_multiple_of(f) {
            let mut r = q;
            while r.is_multiple_of(f) {
                r /= f;
            }
            return r == 1;
        }
        f += 1;
    }
    is_prime(q)
}

/// Logarithm used inside Green's constant `c(k, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    /// `log_q(q) = 1`.
    Q,
}

impl LogBase {
    fn log(self, q: f64) -> f64 {
        match self {
            LogBase::Natural => q.ln(),
            LogBase::Two => q.log2(),
            LogBase::Q => 1.0,
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Natural => "natural",
            LogBase::Two => "two",
            LogBase::Q => "q",
        })
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "natural" | "e" | "ln" => Ok(LogBase::Natural),
            "two" | "2" => Ok(LogBase::Two),
            "q" => Ok(LogBase::Q),
            other => Err(format!("unknown log base '{other}' (natural | two | q)")),
        }
    }
}

/// `c(k, q) = 1 / (2 k^2 D_q(k)^2 log q)`.
pub fn green_constant(q: u64, k: u64, log_base: LogBase) -> Result<f64> {
    if !is_prime_power(q) {
        return Err(Error::NotPrimePower(q));
    }
    if k < 2 {
        return Err(Error::ExponentTooSmall(k));
    }
    let d = digit_sum(k, q) as f64;
    let k = k as f64;
    Ok(1.0 / (2.0 * k * k * d * d * log_base.log(q as f64)))
}

/// `2 q^{(1 - c(k, q)) n}`.
pub fn green_threshold(q: u64, k: u64, n: u32, log_base: LogBase) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let c = green_constant(q, k, log_base)?;
    Ok(2.0 * (q as f64).powf((1.0 - c) * n as f64))
}

/// `sqrt(p) - 1`. A comparison value for the Paley clique number that is
/// known to hold only for infinitely many primes, so it is never a bound on a
/// particular `p`.
pub fn paley_reference(p: Prime) -> Result<f64> {
    if p.get() % 4 != 1 {
        return Err(Error::NotOneModFour(p.get()));
    }
    Ok((p.get() as f64).sqrt() - 1.0)
}

pub const PALEY_REFERENCE_NOTE: &str =
    "non-binding: sqrt(p)-1 is known to bound the clique number only for infinitely many primes";

/// Rounds to six significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(5 - mag);
    (x * scale).round() / scale
}

fn big_as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn opt_big_as_string<S: Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreenComparison {
    pub q: u64,
    pub log_base: LogBase,
    pub digit_sum: u64,
    pub c: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaleyReference {
    pub value: f64,
    pub note: &'static str,
}

/// How the forbidden set is specified when asking for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxSpec {
    /// Only `t = |K|` is known.
    Size(u64),
    /// `K = Q(k)`.
    Exponent(u64),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    /// Include Green's threshold with this log convention (needs `k`, `n = 1`).
    pub green: Option<LogBase>,
    /// Include `sqrt(p) - 1` (needs `n = 1`, `k = 2`, `p ≡ 1 mod 4`).
    pub paley: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: u32,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub t: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(serialize_with = "big_as_string")]
    pub thm2: BigUint,
    #[serde(
        serialize_with = "opt_big_as_string",
        skip_serializing_if = "Option::is_none"
    )]
    pub cor3: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub green_threshold: Option<GreenComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paley_reference: Option<PaleyReference>,
}

impl BoundReport {
    pub fn compute(p: Prime, n: u32, spec: BoxSpec, opts: ReportOptions) -> Result<Self> {
        let (k, t, d) = match spec {
            BoxSpec::Size(t) => (None, t, None),
            BoxSpec::Exponent(k) => {
                let t = power_residues(p, k)?.t() as u64;
                debug_assert_eq!(t, residue_count_formula(p, k));
                (Some(k), t, Some(gcd(k, p.get() as u64 - 1)))
            }
        };
        let thm2 = thm2_bound(p, t, n)?;
        let cor3 = k.map(|k| cor3_bound(p, k, n)).transpose()?;

        let mut green = None;
        if let Some(log_base) = opts.green {
            let k = k.ok_or(Error::MissingExponent)?;
            if n != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    actual: n as usize,
                });
            }
            let q = p.get() as u64;
            green = Some(GreenComparison {
                q,
                log_base,
                digit_sum: digit_sum(k, q),
                c: round_sig(green_constant(q, k, log_base)?),
                threshold: round_sig(green_threshold(q, k, 1, log_base)?),
            });
        }

        let mut paley_ref = None;
        if opts.paley {
            paley_ref = Some(PaleyReference {
                value: round_sig(paley_reference(p)?),
                note: PALEY_REFERENCE_NOTE,
            });
        }

        Ok(BoundReport {
            p: p.get(),
            n,
            k,
            t,
            d,
            thm2,
            cor3,
            green_threshold: green,
            paley_reference: paley_ref,
        })
    }
}

/// `max_size / bound` as a float, for display.
pub fn ratio(size: u64, bound: &BigUint) -> f64 {
    let b: f64 = bound.to_string().parse().unwrap_or(f64::INFINITY);
    size as f64 / b
}

/// `true` when `size <= bound`.
pub fn within(size: u64, bound: &BigUint) -> bool {
    BigUint::from(size) <= *bound
}
