//! The exponential, logarithm and binomial p-th root series.
//!
//! Every series is summed only inside its strict convergence domain, and
//! summation stops once a proven lower bound on all remaining term valuations
//! reaches the precision target. Observed smallness of a term is never used as
//! a stopping criterion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{digit_sum, factorial_valuation, int_valuation};
use crate::element::{Element, EXACT};
use crate::error::{Error, Result};
use crate::valuation::Valuation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Exp,
    Log,
    #[serde(rename = "binom")]
    BinomialPthRoot,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 3] = [SeriesKind::Exp, SeriesKind::Log, SeriesKind::BinomialPthRoot];

    /// The strict lower bound on the argument's valuation.
    ///
    /// For `Log` the argument is `x - 1`.
    pub fn threshold(self, p: u32) -> Rational64 {
        let p = p as i64;
        match self {
            SeriesKind::Exp => Rational64::new(1, p - 1),
            SeriesKind::Log => Rational64::from_integer(0),
            SeriesKind::BinomialPthRoot => Rational64::new(p, p - 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Exp => "exp",
            SeriesKind::Log => "log",
            SeriesKind::BinomialPthRoot => "binom",
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exp" => Ok(SeriesKind::Exp),
            "log" => Ok(SeriesKind::Log),
            "binom" | "root" | "binomial" => Ok(SeriesKind::BinomialPthRoot),
            other => Err(Error::Parse(format!("unknown series kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Converges,
    Diverges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub verdict: Verdict,
    #[serde(with = "rational_str")]
    pub threshold: Rational64,
    pub strict: bool,
}

impl ConvergenceVerdict {
    pub fn converges(&self) -> bool {
        self.verdict == Verdict::Converges
    }
}

pub mod rational_str {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::valuation::format_rational(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        crate::valuation::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Decides convergence from the argument's valuation alone.
pub fn classify(kind: SeriesKind, p: u32, v: Valuation) -> ConvergenceVerdict {
    let threshold = kind.threshold(p);
    let verdict = if v.exceeds(threshold) {
        Verdict::Converges
    } else {
        Verdict::Diverges
    };
    ConvergenceVerdict {
        verdict,
        threshold,
        strict: true,
    }
}

/// Exact valuation of the `k`-th term (`k >= 1`) for an argument of valuation `v`.
pub fn term_valuation(kind: SeriesKind, p: u32, k: u64, v: Valuation) -> Valuation {
    assert!(k >= 1, "terms are indexed from 1");
    let Some(v) = v.finite() else {
        return Valuation::Infinite;
    };
    let kr = Rational64::from_integer(k as i64);
    let p64 = p as u64;
    let r = match kind {
        SeriesKind::Exp => kr * v - factorial_valuation(p64, k),
        SeriesKind::Log => kr * v - Rational64::from_integer(int_valuation(p64, k) as i64),
        SeriesKind::BinomialPthRoot => {
            kr * (v - kind.threshold(p))
                + Rational64::new(digit_sum(p64, k) as i64, p as i64 - 1)
        }
    };
    Valuation::Finite(r)
}

/// Term valuations for `k = 1..=n`.
pub fn term_trace(kind: SeriesKind, p: u32, v: Valuation, n: u64) -> Vec<Valuation> {
    (1..=n).map(|k| term_valuation(kind, p, k, v)).collect()
}

fn domain_error(kind: SeriesKind, p: u32, v: Valuation) -> Error {
    Error::Domain {
        series: kind.name(),
        valuation: v,
        threshold: Valuation::Finite(kind.threshold(p)),
    }
}

/// Smallest `k` with `k·margin + offset >= target`, for `margin > 0`.
fn linear_cutoff(margin: Rational64, offset: Rational64, target: Rational64) -> u64 {
    let k = ((target - offset) / margin).ceil().to_integer();
    k.max(1) as u64
}

/// `exp(x) = Σ x^k / k!` for `v(x) > 1/(p-1)`.
pub fn padic_exp(x: &Element) -> Result<Element> {
    let tower = x.tower();
    let p = tower.p();
    let v = x.valuation();
    if !classify(SeriesKind::Exp, p, v).converges() {
        return Err(domain_error(SeriesKind::Exp, p, v));
    }
    let target_pi = x.prec_pi();
    let one = Element::int_with_prec(tower, 1, target_pi);
    let Some(v) = v.finite() else {
        return Ok(one);
    };
    let target = x.abs_prec();
    let margin = v - tower.exp_threshold();
    // v(x^k/k!) >= k·v - (k-1)/(p-1) = k·margin + 1/(p-1)
    let stop = linear_cutoff(margin, tower.exp_threshold(), target);
    let mut sum = one;
    let mut term = Element::int_with_prec(tower, 1, EXACT);
    for k in 1..stop {
        term = (&term * x).div_int(k as i64);
        sum = &sum + &term;
    }
    Ok(sum.truncate_pi(target_pi))
}

/// Whether every `k > big_k` satisfies `k·v - floor(log_p k) >= target`.
fn log_tail_ok(big_k: u64, p: u32, v: Rational64, target: Rational64) -> bool {
    let (a, b) = (*v.numer() as i128, *v.denom() as i128);
    let (c, d) = (*target.numer() as i128, *target.denom() as i128);
    let p = p as i128;
    let start = big_k as i128 + 1;
    let mut j: i128 = 0;
    let mut pj: i128 = 1;
    while pj * p <= start {
        pj *= p;
        j += 1;
    }
    loop {
        let k0 = start.max(pj);
        // k0·v - j >= target  <=>  (k0·a - j·b)·d >= c·b
        if (k0 * a - j * b) * d < c * b {
            return false;
        }
        let settled = pj >= start && (pj * a - j * b) * d >= c * b && pj * (p - 1) * a >= b;
        if settled {
            return true;
        }
        pj *= p;
        j += 1;
    }
}

/// `log(x) = Σ (-1)^(k+1) (x-1)^k / k` for `v(x - 1) > 0`.
pub fn padic_log(x: &Element) -> Result<Element> {
    let tower = x.tower();
    let p = tower.p();
    let y = x.minus_one();
    let v = y.valuation();
    if !classify(SeriesKind::Log, p, v).converges() {
        return Err(domain_error(SeriesKind::Log, p, v));
    }
    let target_pi = y.prec_pi();
    let Some(v) = v.finite() else {
        return Ok(Element::zero_with_prec(tower, target_pi));
    };
    let target = y.abs_prec();
    let mut big_k = 0;
    while !log_tail_ok(big_k, p, v, target) {
        big_k += 1;
    }
    let mut sum = Element::zero_with_prec(tower, target_pi);
    let mut power = Element::int_with_prec(tower, 1, EXACT);
    for k in 1..=big_k {
        power = &power * &y;
        let term = power.div_int(if k % 2 == 1 { k as i64 } else { -(k as i64) });
        sum = &sum + &term;
    }
    Ok(sum.truncate_pi(target_pi))
}

/// `(1 + x)^(1/p) = Σ binom(1/p, k) x^k` for `v(x) > p/(p-1)`.
///
/// Returns the unique p-th root `z` of `1 + x` with `v(z - 1) > 1/(p-1)`.
pub fn pth_root_binomial(x: &Element) -> Result<Element> {
    let tower = x.tower();
    let p = tower.p();
    let kind = SeriesKind::BinomialPthRoot;
    let v = x.valuation();
    if !classify(kind, p, v).converges() {
        return Err(domain_error(kind, p, v));
    }
    let target_pi = x.prec_pi();
    let one = Element::int_with_prec(tower, 1, target_pi);
    let Some(v) = v.finite() else {
        return Ok(one);
    };
    // v(binom(1/p,k) x^k) >= k·(v - p/(p-1)) + 1/(p-1)
    let stop = linear_cutoff(v - kind.threshold(p), tower.exp_threshold(), x.abs_prec());
    let pb = p as i64;
    let mut sum = one;
    let mut term = Element::int_with_prec(tower, 1, EXACT);
    for k in 1..stop as i64 {
        // binom(1/p,k) = binom(1/p,k-1) · (1 - p(k-1)) / (p·k)
        term = (&term * x).mul_int(&BigInt::from(1 - pb * (k - 1))).div_int(pb * k);
        sum = &sum + &term;
    }
    Ok(sum.truncate_pi(target_pi))
}

/// First stage of the extension of `exp` beyond its disc:
/// `y ↦ ×p ↦ exp ↦ (1 + ·)^(1/p)`.
///
/// Fails with [`Error::RootDomain`] whenever `exp(p·y) - 1` leaves the binomial
/// domain instead of picking one of the `p` possible roots.
pub fn exp_extended_stage1(y: &Element) -> Result<Element> {
    let tower = y.tower();
    let p = tower.p();
    let py = y.mul_int(&BigInt::from(p));
    let outer = padic_exp(&py)?;
    let inner = outer.minus_one();
    let kind = SeriesKind::BinomialPthRoot;
    let v = inner.valuation();
    if !classify(kind, p, v).converges() {
        return Err(Error::RootDomain {
            valuation: v,
            threshold: Valuation::Finite(kind.threshold(p)),
        });
    }
    pth_root_binomial(&inner)
}

/// Stage `n` of the extended exponential: stage 0 is `exp`, stage `n` takes the
/// binomial p-th root of stage `n-1` evaluated at `p·y`.
pub fn exp_extended(y: &Element, stage: u32) -> Result<Element> {
    if stage == 0 {
        return padic_exp(y);
    }
    let p = y.tower().p();
    let prev = exp_extended(&y.mul_int(&BigInt::from(p)), stage - 1)?;
    let inner = prev.minus_one();
    let kind = SeriesKind::BinomialPthRoot;
    let v = inner.valuation();
    if !classify(kind, p, v).converges() {
        return Err(Error::RootDomain {
            valuation: v,
            threshold: Valuation::Finite(kind.threshold(p)),
        });
    }
    pth_root_binomial(&inner)
}
