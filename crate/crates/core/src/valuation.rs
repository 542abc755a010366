//! Exact valuations `v(x)` with `|x| = p^{-v(x)}`.
//!
//! Finite values are rationals whose denominator divides the ramification
//! index of the tower they came from. `Infinite` stands for "zero at the
//! working precision" and is maximal.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rational64),
    Infinite,
}

impl Valuation {
    pub const ZERO: Valuation = Valuation::Finite(Rational64::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        Valuation::Finite(Rational64::new(numer, denom))
    }

    pub fn integer(n: i64) -> Self {
        Valuation::Finite(Rational64::from_integer(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<Rational64> {
        match self {
            Valuation::Finite(r) => Some(*r),
            Valuation::Infinite => None,
        }
    }

    /// Strict lower bound test. `Infinite` satisfies every strict bound.
    pub fn exceeds(&self, bound: Rational64) -> bool {
        match self {
            Valuation::Finite(r) => *r > bound,
            Valuation::Infinite => true,
        }
    }

    /// Non-strict lower bound test, i.e. divisibility by `p^bound`.
    pub fn at_least(&self, bound: Rational64) -> bool {
        match self {
            Valuation::Finite(r) => *r >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl From<Rational64> for Valuation {
    fn from(r: Rational64) -> Self {
        Valuation::Finite(r)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add<Rational64> for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Rational64) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a + rhs),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl Sub<Rational64> for Valuation {
    type Output = Valuation;

    fn sub(self, rhs: Rational64) -> Valuation {
        self + (-rhs)
    }
}

/// Formats a rational as `m/d`, always with an explicit denominator.
pub fn format_rational(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `m/d` or a bare integer `m`.
pub fn parse_rational(s: &str) -> Result<Rational64, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => f.write_str(&format_rational(*r)),
            Valuation::Infinite => f.write_str("INFINITE"),
        }
    }
}

impl FromStr for Valuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.trim().eq_ignore_ascii_case("infinite") {
            Ok(Valuation::Infinite)
        } else {
            parse_rational(s).map(Valuation::Finite)
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
