//! Finite-precision elements of `K = Q_p(π)`, `π^e = u·p`.
//!
//! An element is stored as `p^(-shift) · Σ_{i<e} num[i]·π^i` with integer
//! `num[i]`, together with an absolute precision `prec` counted in π-adic
//! digits: the element is known modulo `π^prec`. Because the layers `num[i]·π^i`
//! have pairwise distinct valuations modulo 1, the valuation of a nonzero
//! element is exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::tower::Tower;
use crate::valuation::Valuation;

#[derive(Debug, Clone)]
pub struct Element {
    tower: Tower,
    num: Vec<BigInt>,
    shift: u32,
    prec: i64,
}

/// Precision used for constants that are exact; large but far from overflow.
pub(crate) const EXACT: i64 = i64::MAX / 8;

/// Beyond this many p-adic digits, layers are left unreduced.
const HUGE_DIGITS: i64 = 1 << 20;

pub(crate) fn p_pow(p: u32, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// `v_p(n)` for nonzero `n`.
pub(crate) fn big_valuation(n: &BigInt, p: u32) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Inverse of a unit modulo `p^k`.
pub(crate) fn unit_inverse_mod(a: &BigInt, p: u32, k: u32) -> BigInt {
    let m = p_pow(p, k.max(1));
    let a = a.mod_floor(&m);
    a.modinv(&m).expect("argument is not a p-adic unit")
}

impl Element {
    pub(crate) fn from_raw(tower: Tower, num: Vec<BigInt>, shift: u32, prec: i64) -> Self {
        debug_assert_eq!(num.len(), tower.e() as usize);
        let mut x = Element {
            tower,
            num,
            shift,
            prec,
        };
        x.normalize();
        x
    }

    pub fn zero(tower: Tower) -> Self {
        Self::zero_with_prec(tower, tower.prec_pi())
    }

    /// Zero known modulo `π^prec_pi`.
    pub fn zero_with_prec(tower: Tower, prec_pi: i64) -> Self {
        Element {
            tower,
            num: vec![BigInt::zero(); tower.e() as usize],
            shift: 0,
            prec: prec_pi,
        }
    }

    pub fn one(tower: Tower) -> Self {
        Self::from_int(tower, 1)
    }

    pub fn from_int(tower: Tower, n: i64) -> Self {
        Self::from_bigint(tower, BigInt::from(n))
    }

    pub fn from_bigint(tower: Tower, n: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); tower.e() as usize];
        num[0] = n;
        Self::from_raw(tower, num, 0, tower.prec_pi())
    }

    /// The rational `numer/denom` at working precision.
    pub fn from_ratio(tower: Tower, numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_big_ratio(tower, &BigInt::from(numer), &BigInt::from(denom))
    }

    pub(crate) fn from_big_ratio(tower: Tower, numer: &BigInt, denom: &BigInt) -> Self {
        if numer.is_zero() {
            return Self::zero(tower);
        }
        let p = tower.p();
        let vn = big_valuation(numer, p);
        let vd = big_valuation(denom, p);
        let un = numer / p_pow(p, vn);
        let ud = denom / p_pow(p, vd);
        let v = vn as i64 - vd as i64;
        let digits = (tower.prec() as i64 - v).max(1) as u32 + 1;
        let s = (un * unit_inverse_mod(&ud, p, digits)).mod_floor(&p_pow(p, digits));
        Self::from_coeffs(tower, &[(s, v)], Rational64::from_integer(tower.prec() as i64))
            .expect("constant in range")
    }

    /// Builds `Σ s_i·p^(v_i)·π^i` known modulo valuation `prec`.
    ///
    /// `prec` must have denominator dividing `e`.
    pub fn from_coeffs(tower: Tower, coeffs: &[(BigInt, i64)], prec: Rational64) -> Result<Self> {
        let e = tower.e() as usize;
        if coeffs.len() > e {
            return Err(Error::Parse(format!(
                "{} coefficients given but e = {e}",
                coeffs.len()
            )));
        }
        let scaled = prec * Rational64::from_integer(e as i64);
        if !scaled.is_integer() {
            return Err(Error::Parse(format!(
                "precision {prec} is not a multiple of 1/{e}"
            )));
        }
        let shift = coeffs
            .iter()
            .filter(|(s, _)| !s.is_zero())
            .map(|&(_, v)| (-v).max(0))
            .max()
            .unwrap_or(0) as u32;
        let mut num = vec![BigInt::zero(); e];
        for (i, (s, v)) in coeffs.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            num[i] = s * p_pow(tower.p(), (v + shift as i64) as u32);
        }
        Ok(Self::from_raw(tower, num, shift, scaled.to_integer()))
    }

    /// The uniformizer `π` (for `e = 1` this is `u·p`).
    pub fn uniformizer(tower: Tower) -> Self {
        Self::one(tower).mul_pi_pow(1)
    }

    pub fn tower(&self) -> Tower {
        self.tower
    }

    fn e(&self) -> i64 {
        self.tower.e() as i64
    }

    /// Reduces every layer modulo the precision and strips common factors of `p`
    /// from the denominator.
    fn normalize(&mut self) {
        let e = self.e();
        let p = self.tower.p();
        for (i, n) in self.num.iter_mut().enumerate() {
            let k = Integer::div_ceil(&(self.prec - i as i64), &e) + self.shift as i64;
            if k <= 0 {
                n.set_zero();
            } else if k > HUGE_DIGITS && (n.bits() as i64) < k {
                // exact constant: the representative is already below p^k in size
            } else {
                *n = n.mod_floor(&p_pow(p, k as u32));
            }
        }
        let pb = BigInt::from(p);
        while self.shift > 0 && self.num.iter().all(|n| n.is_multiple_of(&pb)) {
            for n in self.num.iter_mut() {
                *n /= &pb;
            }
            self.shift -= 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Valuation in π-adic digits, `None` when zero at precision.
    pub(crate) fn pi_val(&self) -> Option<i64> {
        let e = self.e();
        self.num
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(|(i, n)| e * (big_valuation(n, self.tower.p()) as i64 - self.shift as i64) + i as i64)
            .min()
    }

    pub fn valuation(&self) -> Valuation {
        match self.pi_val() {
            Some(m) => Valuation::new(m, self.e()),
            None => Valuation::Infinite,
        }
    }

    /// Absolute precision: the element is known modulo elements of this valuation.
    pub fn abs_prec(&self) -> Rational64 {
        Rational64::new(self.prec, self.e())
    }

    pub(crate) fn prec_pi(&self) -> i64 {
        self.prec
    }

    /// Proven lower bound on the valuation: `min(valuation, abs_prec)`.
    pub fn certified_valuation(&self) -> Rational64 {
        match self.valuation() {
            Valuation::Finite(v) => v.min(self.abs_prec()),
            Valuation::Infinite => self.abs_prec(),
        }
    }

    fn eff_pi_val(&self) -> i64 {
        self.pi_val().map_or(self.prec, |v| v.min(self.prec))
    }

    /// Lowers the absolute precision to `prec` (never raises it).
    pub fn truncate(&self, prec: Rational64) -> Self {
        let pi = (prec * Rational64::from_integer(self.e())).floor().to_integer();
        self.truncate_pi(pi)
    }

    pub(crate) fn truncate_pi(&self, prec_pi: i64) -> Self {
        let mut x = self.clone();
        x.prec = x.prec.min(prec_pi);
        x.normalize();
        x
    }

    /// The integer `n` known modulo `π^prec_pi`.
    pub(crate) fn int_with_prec(tower: Tower, n: i64, prec_pi: i64) -> Self {
        let mut num = vec![BigInt::zero(); tower.e() as usize];
        num[0] = BigInt::from(n);
        Self::from_raw(tower, num, 0, prec_pi)
    }

    /// Coefficients of `π^i` as `(s, v)` with `s` prime to `p` (or `(0, 0)`).
    pub fn coeffs(&self) -> Vec<(BigInt, i64)> {
        let p = self.tower.p();
        self.num
            .iter()
            .map(|n| {
                if n.is_zero() {
                    (BigInt::zero(), 0)
                } else {
                    let v = big_valuation(n, p);
                    (n / p_pow(p, v), v as i64 - self.shift as i64)
                }
            })
            .collect()
    }

    fn check_tower(&self, other: &Element) -> Result<()> {
        if self.tower == other.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.check_tower(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.check_tower(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Element) -> Result<Element> {
        self.check_tower(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Element) -> Element {
        let p = self.tower.p();
        let shift = self.shift.max(other.shift);
        let sa = p_pow(p, shift - self.shift);
        let sb = p_pow(p, shift - other.shift);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &sa + b * &sb)
            .collect();
        Element::from_raw(self.tower, num, shift, self.prec.min(other.prec))
    }

    fn neg_ref(&self) -> Element {
        let num = self.num.iter().map(|n| -n).collect();
        Element::from_raw(self.tower, num, self.shift, self.prec)
    }

    fn mul_unchecked(&self, other: &Element) -> Element {
        let e = self.e() as usize;
        let prec = (self.prec + other.eff_pi_val()).min(other.prec + self.eff_pi_val());
        let mut full = vec![BigInt::zero(); 2 * e - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                full[i + j] += a * b;
            }
        }
        // π^e = u·p
        let up = BigInt::from(self.tower.u()) * BigInt::from(self.tower.p());
        for k in (e..2 * e - 1).rev() {
            let hi = std::mem::take(&mut full[k]);
            full[k - e] += hi * &up;
        }
        full.truncate(e);
        Element::from_raw(self.tower, full, self.shift + other.shift, prec)
    }

    /// Exact multiplication by a nonzero integer.
    pub fn mul_int(&self, n: &BigInt) -> Element {
        assert!(!n.is_zero(), "multiplication by zero integer");
        let gain = big_valuation(n, self.tower.p()) as i64 * self.e();
        let num = self.num.iter().map(|a| a * n).collect();
        Element::from_raw(self.tower, num, self.shift, self.prec + gain)
    }

    /// Multiplication by the inverse of an integer prime to `p`.
    fn mul_unit_inverse(&self, unit: &BigInt) -> Element {
        let k = (Integer::div_ceil(&self.prec, &self.e()) + self.shift as i64 + 1).max(1) as u32;
        let inv = unit_inverse_mod(unit, self.tower.p(), k);
        let num = self.num.iter().map(|a| a * &inv).collect();
        Element::from_raw(self.tower, num, self.shift, self.prec)
    }

    /// Exact division by `p^k`.
    pub fn div_p_pow(&self, k: u32) -> Element {
        Element::from_raw(
            self.tower,
            self.num.clone(),
            self.shift + k,
            self.prec - k as i64 * self.e(),
        )
    }

    /// Exact division by a nonzero integer.
    pub fn div_int(&self, n: i64) -> Element {
        assert!(n != 0, "division by zero");
        let n = BigInt::from(n);
        let v = big_valuation(&n, self.tower.p());
        let unit = &n / p_pow(self.tower.p(), v);
        self.mul_unit_inverse(&unit).div_p_pow(v)
    }

    /// Multiplication by `π^k` for any integer `k`; precision moves by `k`.
    pub fn mul_pi_pow(&self, k: i64) -> Element {
        let e = self.e();
        let (q, r) = if k >= 0 {
            (k / e, k % e)
        } else {
            let q = Integer::div_ceil(&-k, &e);
            (-q, q * e + k)
        };
        // π^r
        let up = BigInt::from(self.tower.u()) * BigInt::from(self.tower.p());
        let mut num = vec![BigInt::zero(); e as usize];
        for (i, a) in self.num.iter().enumerate() {
            let j = i + r as usize;
            if j < e as usize {
                num[j] += a;
            } else {
                num[j - e as usize] += a * &up;
            }
        }
        let mut x = Element::from_raw(self.tower, num, self.shift, self.prec + r);
        // (u·p)^q
        if q > 0 {
            let f = num_traits::pow(up, q as usize);
            x = x.mul_int(&f);
            x.prec = self.prec + k;
            x.normalize();
        } else if q < 0 {
            let uq = num_traits::pow(BigInt::from(self.tower.u()), (-q) as usize);
            x = x.mul_unit_inverse(&uq).div_p_pow((-q) as u32);
        }
        x
    }

    pub fn pow(&self, mut n: u64) -> Element {
        let mut base = self.clone();
        let mut acc: Option<Element> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul_unchecked(&base),
                    None => base.clone(),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc.unwrap_or_else(|| Element::int_with_prec(self.tower, 1, EXACT))
    }

    /// Multiplicative inverse with relative precision preserved.
    pub fn inv(&self) -> Result<Element> {
        let m = self
            .pi_val()
            .ok_or(Error::ZeroAtPrecision(Valuation::Finite(self.abs_prec())))?;
        let w = self.mul_pi_pow(-m);
        debug_assert_eq!(w.shift, 0);
        let pw = w.prec;
        let p = self.tower.p();
        let a0 = w.num[0].mod_floor(&BigInt::from(p));
        let mut y0 = vec![BigInt::zero(); self.e() as usize];
        y0[0] = unit_inverse_mod(&a0, p, 1);
        let mut y = Element::from_raw(self.tower, y0, 0, pw);
        let one = Element::int_with_prec(self.tower, 1, pw);
        loop {
            let r = one.add_unchecked(&w.mul_unchecked(&y).neg_ref());
            if r.is_zero() {
                break;
            }
            y = y.mul_unchecked(&one.add_unchecked(&r));
        }
        Ok(y.mul_pi_pow(-m))
    }

    pub fn checked_div(&self, other: &Element) -> Result<Element> {
        self.check_tower(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// `self == other` modulo the joint precision.
    pub fn eq_at_prec(&self, other: &Element) -> bool {
        self.tower == other.tower && self.add_unchecked(&other.neg_ref()).is_zero()
    }

    /// Certified valuation of `self - other`.
    pub fn residual(&self, other: &Element) -> Result<Rational64> {
        Ok(self.checked_sub(other)?.certified_valuation())
    }

    /// `self - 1`.
    pub fn minus_one(&self) -> Element {
        self.add_unchecked(&Element::int_with_prec(self.tower, -1, self.prec))
    }

    /// `1 + self`.
    pub fn one_plus(&self) -> Element {
        self.add_unchecked(&Element::int_with_prec(self.tower, 1, self.prec))
    }
}

impl Add<&Element> for &Element {
    type Output = Element;

    /// Panics on tower mismatch; use [`Element::checked_add`] to handle it.
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("tower mismatch")
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.checked_sub(rhs).expect("tower mismatch")
    }
}

impl Mul<&Element> for &Element {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        self.checked_mul(rhs).expect("tower mismatch")
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.neg_ref()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.tower.p();
        let mut first = true;
        for (i, (s, v)) in self.coeffs().iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if s.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            write!(f, "{}*{p}^{v}", if first { s.clone() } else { s.abs() })?;
            if i > 0 {
                write!(f, "*pi^{i}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(p^{})", crate::valuation::format_rational(self.abs_prec()))
    }
}
