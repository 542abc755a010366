//! Text and JSON formats for elements and restricted series.
//!
//! Element literal:
//! `{"p": 3, "e": 2, "u": 1, "prec": "20/2", "coeffs": ["2*3^0", "1*3^-1"]}`
//! where coefficient `i` multiplies `π^i`. The precision is written with
//! denominator exactly `e`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::tower::Tower;
use crate::valuation::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementLiteral {
    pub p: u32,
    pub e: u32,
    pub u: i64,
    pub prec: String,
    pub coeffs: Vec<String>,
}

impl ElementLiteral {
    pub fn tower(&self, working_prec: Option<u32>) -> Result<Tower> {
        let prec = parse_rational(&self.prec)?;
        let n = working_prec.unwrap_or_else(|| prec.ceil().to_integer().max(1) as u32);
        Tower::new(self.p, self.e, self.u, n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("literal serializes")
    }
}

impl From<&Element> for ElementLiteral {
    fn from(x: &Element) -> Self {
        let tw = x.tower();
        let p = tw.p();
        let prec = x.abs_prec() * Rational64::from_integer(tw.e() as i64);
        ElementLiteral {
            p,
            e: tw.e(),
            u: tw.u(),
            prec: format!("{}/{}", prec.to_integer(), tw.e()),
            coeffs: x
                .coeffs()
                .into_iter()
                .map(|(s, v)| format!("{s}*{p}^{v}"))
                .collect(),
        }
    }
}

/// Parses `s*P^v` (or a bare integer `s`) with `P` required to equal `p`.
pub fn parse_coeff(text: &str, p: u32) -> Result<(BigInt, i64)> {
    let bad = || Error::Parse(format!("bad coefficient {text:?}, expected s*{p}^v"));
    let t = text.trim();
    match t.split_once('*') {
        None => Ok((t.parse::<BigInt>().map_err(|_| bad())?, 0)),
        Some((s, pv)) => {
            let s: BigInt = s.trim().parse().map_err(|_| bad())?;
            let (base, v) = pv.trim().split_once('^').ok_or_else(bad)?;
            if base.trim().parse::<u32>().map_err(|_| bad())? != p {
                return Err(bad());
            }
            let v: i64 = v.trim().parse().map_err(|_| bad())?;
            Ok((s, v))
        }
    }
}

impl Element {
    /// Reads an element literal. The tower's working precision defaults to the
    /// ceiling of the literal's precision.
    pub fn from_literal(lit: &ElementLiteral) -> Result<Element> {
        let tower = lit.tower(None)?;
        Self::from_literal_in(lit, tower)
    }

    /// Reads an element literal that must live in `tower`.
    pub fn from_literal_in(lit: &ElementLiteral, tower: Tower) -> Result<Element> {
        if lit.tower(Some(tower.prec()))? != tower {
            return Err(Error::TowerMismatch);
        }
        let prec = parse_rational(&lit.prec)?;
        let coeffs = lit
            .coeffs
            .iter()
            .map(|c| parse_coeff(c, tower.p()))
            .collect::<Result<Vec<_>>>()?;
        Element::from_coeffs(tower, &coeffs, prec)
    }

    pub fn to_literal(&self) -> ElementLiteral {
        ElementLiteral::from(self)
    }

    /// Parses either a JSON element literal or an expression such as
    /// `5*5^0`, `-1*2^0`, `3*3^-1 + 2*pi^3` or `pi^2 - 1`.
    ///
    /// Expressions are read in `tower` at its working precision.
    pub fn parse(text: &str, tower: Tower) -> Result<Element> {
        let t = text.trim();
        if t.starts_with('{') {
            let lit: ElementLiteral =
                serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            return Element::from_literal_in(&lit, tower);
        }
        parse_expr(t, tower)
    }
}

fn split_terms(text: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for c in text.chars() {
        if c.is_whitespace() {
            continue;
        }
        let separator = (c == '+' || c == '-') && prev.is_some_and(|q| q != '^' && q != '*');
        if separator {
            out.push((negative, std::mem::take(&mut cur)));
            negative = c == '-';
        } else if (c == '+' || c == '-') && prev.is_none() {
            negative = c == '-';
        } else {
            cur.push(c);
        }
        prev = Some(c);
    }
    out.push((negative, cur));
    out
}

fn parse_expr(text: &str, tower: Tower) -> Result<Element> {
    let bad = |m: &str| Error::Parse(format!("{m} in {text:?}"));
    if text.is_empty() {
        return Err(bad("empty expression"));
    }
    let prec = Rational64::from_integer(tower.prec() as i64);
    let mut acc = Element::zero(tower);
    for (negative, term) in split_terms(text) {
        if term.is_empty() {
            return Err(bad("empty term"));
        }
        let mut s = BigInt::from(1);
        let mut v: i64 = 0;
        let mut pi_exp: i64 = 0;
        for factor in term.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, x)) => (b, x.parse::<i64>().map_err(|_| bad("bad exponent"))?),
                None => (factor, 1),
            };
            if base == "pi" {
                pi_exp += exp;
            } else if factor.contains('^') {
                if base.parse::<u32>().ok() != Some(tower.p()) {
                    return Err(bad("power base must be p or pi"));
                }
                v += exp;
            } else {
                s *= base.parse::<BigInt>().map_err(|_| bad("bad integer"))?;
            }
        }
        if negative {
            s = -s;
        }
        if s.is_zero() {
            continue;
        }
        let term = Element::from_coeffs(tower, &[(s, v)], prec + Rational64::new(-pi_exp.min(0) + 1, 1))?
            .mul_pi_pow(pi_exp)
            .truncate(prec);
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLiteral {
    pub exp: Vec<u32>,
    pub coeff: ElementLiteral,
}

/// `{"nvars": n, "terms": [{"exp": [...], "coeff": <element literal>}, ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesLiteral {
    pub nvars: usize,
    pub terms: Vec<TermLiteral>,
}

/// `{"z": [...], "theta": [...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub z: Vec<ElementLiteral>,
    pub theta: Vec<ElementLiteral>,
}

/// `{"rho": [...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub rho: Vec<ElementLiteral>,
}

pub fn literals(xs: &[Element]) -> Vec<ElementLiteral> {
    xs.iter().map(ElementLiteral::from).collect()
}

pub fn elements(lits: &[ElementLiteral], tower: Tower) -> Result<Vec<Element>> {
    lits.iter().map(|l| Element::from_literal_in(l, tower)).collect()
}

/// Canonical residue of the `π^0` coefficient of an element with nonnegative
/// valuation, modulo `p^n`.
pub fn residue_mod(x: &Element, n: u32) -> BigInt {
    let (s, v) = x.coeffs()[0].clone();
    let m = num_traits::pow(BigInt::from(x.tower().p()), n as usize);
    if s.is_zero() || v >= n as i64 {
        return BigInt::zero();
    }
    assert!(v >= 0, "negative valuation");
    (s * num_traits::pow(BigInt::from(x.tower().p()), v as usize)).mod_floor(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::Valuation;

    #[test]
    fn literal_format_is_exact() {
        let tw = Tower::new(3, 2, 1, 5).unwrap();
        let x = Element::parse("2 + 3^-1*pi", tw).unwrap();
        let json = x.to_literal().to_json();
        assert_eq!(
            json,
            r#"{"p":3,"e":2,"u":1,"prec":"10/2","coeffs":["2*3^0","1*3^-1"]}"#
        );
        let back = Element::parse(&json, tw).unwrap();
        assert!(back.eq_at_prec(&x));
        assert_eq!(back.abs_prec(), x.abs_prec());
    }

    #[test]
    fn expressions() {
        let tw = Tower::base(5, 10).unwrap();
        assert!(Element::parse("5*5^0", tw).unwrap().eq_at_prec(&Element::from_int(tw, 5)));
        assert!(Element::parse("-1*5^0", tw).unwrap().eq_at_prec(&Element::from_int(tw, -1)));
        assert!(Element::parse("1*5^2 - 2", tw).unwrap().eq_at_prec(&Element::from_int(tw, 23)));
        assert_eq!(Element::parse("5^-2", tw).unwrap().valuation(), Valuation::integer(-2));
        let tw = Tower::new(3, 2, -1, 6).unwrap();
        let x = Element::parse("pi^2", tw).unwrap();
        assert!(x.eq_at_prec(&Element::from_int(tw, -3)));
        assert_eq!(Element::parse("pi^-1", tw).unwrap().valuation(), Valuation::new(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        let tw = Tower::base(5, 10).unwrap();
        for bad in ["", "5*7^1", "x", "1 + ", "3^a"] {
            assert!(Element::parse(bad, tw).is_err(), "{bad:?}");
        }
        let lit = ElementLiteral {
            p: 3,
            e: 1,
            u: 1,
            prec: "5/1".into(),
            coeffs: vec!["1*3^0".into()],
        };
        assert_eq!(Element::from_literal_in(&lit, tw).unwrap_err(), Error::TowerMismatch);
        assert!(parse_coeff("1*5^0", 3).is_err());
    }

    #[test]
    fn residues() {
        let tw = Tower::base(5, 3).unwrap();
        assert_eq!(residue_mod(&Element::from_int(tw, 81 + 125), 3), BigInt::from(81));
        assert_eq!(residue_mod(&Element::from_int(tw, 25), 2), BigInt::from(0));
    }
}
