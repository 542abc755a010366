//! Restricted power series with finite support, the Gauss norm, sampled
//! sup-seminorms and Weierstrass domain membership.

use std::collections::BTreeMap;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::literal::{ElementLiteral, SeriesLiteral, TermLiteral};
use crate::tower::Tower;
use crate::valuation::Valuation;

pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables over `K`, viewed inside the Tate algebra.
///
/// No stored coefficient is zero at its precision.
#[derive(Debug, Clone)]
pub struct RestrictedSeries {
    tower: Tower,
    nvars: usize,
    terms: BTreeMap<Exponent, Element>,
}

impl RestrictedSeries {
    pub fn zero(tower: Tower, nvars: usize) -> Self {
        RestrictedSeries {
            tower,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(tower: Tower, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Element)>,
    {
        let mut f = Self::zero(tower, nvars);
        for (exp, c) in terms {
            f.add_term(exp, c)?;
        }
        Ok(f)
    }

    pub fn monomial(exp: Exponent, coeff: Element) -> Self {
        let nvars = exp.len();
        Self::from_terms(coeff.tower(), nvars, [(exp, coeff)]).expect("single term is well formed")
    }

    fn add_term(&mut self, exp: Exponent, c: Element) -> Result<()> {
        if exp.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "exponent of length {} in a series in {} variables",
                exp.len(),
                self.nvars
            )));
        }
        if c.tower() != self.tower {
            return Err(Error::TowerMismatch);
        }
        let sum = match self.terms.remove(&exp) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exp, sum);
        }
        Ok(())
    }

    pub fn tower(&self) -> Tower {
        self.tower
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Element)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation form of `max |c_ν|`.
    pub fn gauss_norm(&self) -> Valuation {
        self.terms
            .values()
            .map(Element::valuation)
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    fn check_shape(&self, other: &RestrictedSeries) -> Result<()> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::ShapeMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &RestrictedSeries) -> Result<RestrictedSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.add_term(exp.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &RestrictedSeries) -> Result<RestrictedSeries> {
        self.check_shape(other)?;
        let mut acc: BTreeMap<Exponent, Element> = BTreeMap::new();
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let exp: Exponent = ea.iter().zip(eb).map(|(i, j)| i + j).collect();
                let prod = a * b;
                acc.entry(exp)
                    .and_modify(|c| *c = &*c + &prod)
                    .or_insert(prod);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(RestrictedSeries {
            tower: self.tower,
            nvars: self.nvars,
            terms: acc,
        })
    }

    fn check_point(&self, point: &[Element]) -> Result<()> {
        if point.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "point of dimension {} for a series in {} variables",
                point.len(),
                self.nvars
            )));
        }
        check_ball(point, self.tower)
    }

    /// Value at a point of the closed unit polydisc.
    pub fn evaluate(&self, point: &[Element]) -> Result<Element> {
        self.check_point(point)?;
        let mut acc = Element::zero(self.tower);
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(exp) {
                if k > 0 {
                    term = &term * &x.pow(k as u64);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `min_x v(f(x))` over the given points; never below [`Self::gauss_norm`].
    pub fn sup_sample(&self, points: &[Vec<Element>]) -> Result<Valuation> {
        let mut best = Valuation::Infinite;
        for pt in points {
            best = best.min(self.evaluate(pt)?.valuation());
        }
        Ok(best)
    }

    pub fn to_literal(&self) -> SeriesLiteral {
        SeriesLiteral {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(exp, c)| TermLiteral {
                    exp: exp.clone(),
                    coeff: ElementLiteral::from(c),
                })
                .collect(),
        }
    }

    pub fn from_literal(lit: &SeriesLiteral, tower: Tower) -> Result<Self> {
        let terms = lit
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), Element::from_literal_in(&t.coeff, tower)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(tower, lit.nvars, terms)
    }
}

fn check_ball(point: &[Element], tower: Tower) -> Result<()> {
    for (index, x) in point.iter().enumerate() {
        if x.tower() != tower {
            return Err(Error::TowerMismatch);
        }
        let v = x.valuation();
        if v < Valuation::ZERO {
            return Err(Error::OutOfBall { index, valuation: v });
        }
    }
    Ok(())
}

/// Whether `point` lies in the Weierstrass domain `{|f_i(x)| <= 1 for all i}`.
pub fn weierstrass_member(point: &[Element], fs: &[RestrictedSeries]) -> Result<bool> {
    if let Some(x) = point.first() {
        check_ball(point, x.tower())?;
    }
    for f in fs {
        if f.evaluate(point)?.valuation() < Valuation::ZERO {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All points with coordinates in `{0, 1, ..., p-1, p, 1+p}`, up to `limit` points.
pub fn default_sample_points(tower: Tower, nvars: usize, limit: usize) -> Vec<Vec<Element>> {
    let p = tower.p() as i64;
    let mut coords: Vec<i64> = (0..p).collect();
    coords.extend([p, 1 + p]);
    let mut points = vec![Vec::new()];
    for _ in 0..nvars {
        let mut next = Vec::new();
        'outer: for pt in &points {
            for &c in &coords {
                if next.len() >= limit {
                    break 'outer;
                }
                let mut q: Vec<i64> = pt.clone();
                q.push(c);
                next.push(q);
            }
        }
        points = next;
    }
    points
        .into_iter()
        .map(|pt| pt.into_iter().map(|c| Element::from_int(tower, c)).collect())
        .collect()
}
