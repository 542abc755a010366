//! The working field `K = Q_p(π)` with `π^e = u·p`.

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the Eisenstein tower `Q_p(π)`, `π^e = u·p`.
///
/// `prec` is the working absolute precision measured in valuation units:
/// freshly constructed elements are known modulo `p^prec = π^(e·prec)`.
///
/// Two towers are equal when they define the same field; the working precision
/// is a construction default and does not take part in comparisons.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tower {
    p: u32,
    e: u32,
    u: i64,
    prec: u32,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        (self.p, self.e, self.u) == (other.p, other.e, other.u)
    }
}

impl Eq for Tower {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Tower {
    pub fn new(p: u32, e: u32, u: i64, prec: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidTower(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidTower("ramification index must be >= 1".into()));
        }
        if u.gcd(&(p as i64)) != 1 {
            return Err(Error::InvalidTower(format!("u = {u} is not a unit mod {p}")));
        }
        if prec == 0 {
            return Err(Error::InvalidTower("precision must be >= 1".into()));
        }
        Ok(Tower { p, e, u, prec })
    }

    /// The unramified base field `Q_p` (π = p).
    pub fn base(p: u32, prec: u32) -> Result<Self> {
        Tower::new(p, 1, 1, prec)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same field, different working precision.
    pub fn with_prec(&self, prec: u32) -> Result<Self> {
        Tower::new(self.p, self.e, self.u, prec)
    }

    /// Working precision in π-adic digits.
    pub(crate) fn prec_pi(&self) -> i64 {
        self.prec as i64 * self.e as i64
    }

    /// `1/(p-1)`: the exponential's radius, as a valuation.
    pub fn exp_threshold(&self) -> Rational64 {
        Rational64::new(1, self.p as i64 - 1)
    }

    /// Valuation of the uniformizer, `1/e`.
    pub fn pi_valuation(&self) -> Rational64 {
        Rational64::new(1, self.e as i64)
    }
}
