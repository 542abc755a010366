//! The rank-one small correspondence at the level of points.
//!
//! A pair `(z, θ)` of a Picard log coordinate and a Higgs field maps to the
//! character `ρ = exp(M · (z ⊕ θ))`, where `M = [ l | J ]` and `J` stacks the
//! identity over the lifting matrix `B`. The inverse takes `log ρ` and solves
//! the block system.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::literal::ElementLiteral;
use crate::series::{padic_exp, padic_log, rational_str};
use crate::tower::Tower;
use crate::valuation::{format_rational, parse_rational, Valuation};

/// Logarithm coordinates `z ∈ K^g` of a point near the identity of `Pic⁰`.
#[derive(Debug, Clone)]
pub struct PicLogPoint(pub Vec<Element>);

/// A small Higgs field `θ ∈ K^g`.
#[derive(Debug, Clone)]
pub struct HiggsDatum(pub Vec<Element>);

/// Values `ρ(γ_i)` of a character on `2g` fixed generators.
#[derive(Debug, Clone)]
pub struct SmallCharacter(pub Vec<Element>);

#[derive(Debug, Clone)]
pub struct CorrespondenceConfig {
    pub tower: Tower,
    pub g: usize,
    /// `2g × g`: the Lie map feeding `z` into the character coordinates.
    pub l_matrix: Matrix,
    /// `g × g`: the lifting-dependent second component of the Higgs embedding.
    pub b_matrix: Matrix,
    pub alpha: Rational64,
    pub beta: Rational64,
}

/// Result of [`CorrespondenceConfig::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub det_valuation: Valuation,
    #[serde(with = "rational_str")]
    pub alpha: Rational64,
    #[serde(with = "rational_str")]
    pub two_beta: Rational64,
    /// Whether `2β = α + 1/(p-1)`.
    pub beta_relation: bool,
}

/// `β` from `2β = α + 1/(p-1)`.
pub fn auto_beta(p: u32, alpha: Rational64) -> Rational64 {
    (alpha + Rational64::new(1, p as i64 - 1)) / 2
}

impl CorrespondenceConfig {
    /// `l = [0; I]`, `B = 0`, `α = ⌊1/(p-1)⌋ + 1` and the default `β`.
    pub fn default_for(tower: Tower, g: usize) -> Self {
        let alpha = Rational64::from_integer(if tower.p() == 2 { 2 } else { 1 });
        let l = Matrix::zeros(tower, g, g)
            .vconcat(&Matrix::identity(tower, g))
            .expect("matching widths");
        CorrespondenceConfig {
            tower,
            g,
            l_matrix: l,
            b_matrix: Matrix::zeros(tower, g, g),
            alpha,
            beta: auto_beta(tower.p(), alpha),
        }
    }

    pub fn two_beta(&self) -> Rational64 {
        self.beta * 2
    }

    /// `M = [ l | [I; B] ]`.
    pub fn block_matrix(&self) -> Result<Matrix> {
        let j = Matrix::identity(self.tower, self.g).vconcat(&self.b_matrix)?;
        self.l_matrix.hconcat(&j)
    }

    pub fn validate(&self) -> Result<Certificate> {
        let g = self.g;
        if g == 0 {
            return Err(Error::ShapeMismatch("genus must be positive".into()));
        }
        if (self.l_matrix.rows(), self.l_matrix.cols()) != (2 * g, g) {
            return Err(Error::ShapeMismatch(format!("l_matrix must be {}x{g}", 2 * g)));
        }
        if (self.b_matrix.rows(), self.b_matrix.cols()) != (g, g) {
            return Err(Error::ShapeMismatch(format!("B_matrix must be {g}x{g}")));
        }
        let radius = self.tower.exp_threshold();
        if self.alpha <= radius {
            return Err(Error::SmallnessViolation(format!(
                "alpha = {} must exceed 1/(p-1) = {}",
                format_rational(self.alpha),
                format_rational(radius)
            )));
        }
        if self.two_beta() <= radius {
            return Err(Error::SmallnessViolation(format!(
                "2*beta = {} must exceed 1/(p-1) = {}",
                format_rational(self.two_beta()),
                format_rational(radius)
            )));
        }
        let det_valuation = self.block_matrix()?.determinant_valuation()?;
        Ok(Certificate {
            det_valuation,
            alpha: self.alpha,
            two_beta: self.two_beta(),
            beta_relation: self.beta == auto_beta(self.tower.p(), self.alpha),
        })
    }

    pub fn is_small_higgs(&self, theta: &HiggsDatum) -> bool {
        theta.0.iter().all(|t| t.valuation().at_least(self.alpha))
    }

    pub fn is_small_character(&self, rho: &SmallCharacter) -> bool {
        let bound = self.two_beta();
        rho.0.iter().all(|r| r.minus_one().valuation().at_least(bound))
    }

    fn check_len(&self, xs: &[Element], n: usize, what: &str) -> Result<()> {
        if xs.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{what} has {} entries, expected {n}",
                xs.len()
            )));
        }
        if xs.iter().any(|x| x.tower() != self.tower) {
            return Err(Error::TowerMismatch);
        }
        Ok(())
    }

    fn require_small_higgs(&self, theta: &HiggsDatum) -> Result<()> {
        self.check_len(&theta.0, self.g, "theta")?;
        if !self.is_small_higgs(theta) {
            return Err(Error::SmallnessViolation(format!(
                "theta has valuation below alpha = {}",
                format_rational(self.alpha)
            )));
        }
        Ok(())
    }

    /// `θ ↦ (θ, B·θ)`.
    pub fn beta_map(&self, theta: &HiggsDatum) -> Result<Vec<Element>> {
        self.check_len(&theta.0, self.g, "theta")?;
        let mut out = theta.0.clone();
        out.extend(self.b_matrix.mul_vec(&theta.0)?);
        Ok(out)
    }

    pub fn higgs_to_character(&self, theta: &HiggsDatum) -> Result<Vec<Element>> {
        self.require_small_higgs(theta)?;
        self.beta_map(theta)?.iter().map(padic_exp).collect()
    }

    pub fn pic_to_character(&self, z: &PicLogPoint) -> Result<Vec<Element>> {
        self.check_len(&z.0, self.g, "z")?;
        self.l_matrix.mul_vec(&z.0)?.iter().map(padic_exp).collect()
    }

    /// `M · (z ⊕ θ)`, the Lie-algebra vector whose exponential is the character.
    pub fn lie_vector(&self, z: &PicLogPoint, theta: &HiggsDatum) -> Result<Vec<Element>> {
        self.check_len(&z.0, self.g, "z")?;
        self.check_len(&theta.0, self.g, "theta")?;
        let mut v = z.0.clone();
        v.extend(theta.0.iter().cloned());
        self.block_matrix()?.mul_vec(&v)
    }

    /// `(z, θ) ↦ ρ` with `ρ_i = exp(l·z)_i · exp(β(θ))_i`.
    ///
    /// A result that misses the `2β` threshold is reported as
    /// [`Error::SmallnessViolation`].
    pub fn forward(&self, z: &PicLogPoint, theta: &HiggsDatum) -> Result<SmallCharacter> {
        let a = self.pic_to_character(z)?;
        let b = self.higgs_to_character(theta)?;
        let rho = SmallCharacter(a.iter().zip(&b).map(|(x, y)| x * y).collect());
        if !self.is_small_character(&rho) {
            return Err(Error::SmallnessViolation(format!(
                "image character is not congruent to 1 mod p^{}",
                format_rational(self.two_beta())
            )));
        }
        Ok(rho)
    }

    /// `ρ ↦ (z, θ)` by solving `M · (z ⊕ θ) = log ρ`.
    pub fn inverse(&self, rho: &SmallCharacter) -> Result<(PicLogPoint, HiggsDatum)> {
        self.check_len(&rho.0, 2 * self.g, "rho")?;
        if !self.is_small_character(rho) {
            return Err(Error::SmallnessViolation(format!(
                "rho is not congruent to 1 mod p^{}",
                format_rational(self.two_beta())
            )));
        }
        let logs = rho.0.iter().map(padic_log).collect::<Result<Vec<_>>>()?;
        let mut x = self.block_matrix()?.solve(&logs)?;
        let theta = HiggsDatum(x.split_off(self.g));
        let z = PicLogPoint(x);
        self.require_small_higgs(&theta)?;
        let radius = self.tower.exp_threshold();
        for w in self.l_matrix.mul_vec(&z.0)? {
            if !w.valuation().exceeds(radius) {
                return Err(Error::Domain {
                    series: "exp",
                    valuation: w.valuation(),
                    threshold: Valuation::Finite(radius),
                });
            }
        }
        Ok((z, theta))
    }

    /// Parses the `key = value` configuration format.
    ///
    /// Keys: `p`, `e`, `u`, `prec`, `g`, `alpha`, `beta` (rational or `auto`),
    /// `l_matrix`, `B_matrix`. Matrices are JSON arrays, row-major, whose entries
    /// are element literals or expression strings. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_prec(text, None)
    }

    /// [`parse`](Self::parse) with the working precision overridden.
    pub fn parse_with_prec(text: &str, prec_override: Option<u32>) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let int = |k: &str, default: Option<i64>| -> Result<i64> {
            match get(k) {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::Parse(format!("{k}: not an integer: {v:?}"))),
                None => default.ok_or_else(|| Error::Parse(format!("missing key {k}"))),
            }
        };
        let p = int("p", None)?;
        let e = int("e", Some(1))?;
        let u = int("u", Some(1))?;
        let prec = match prec_override {
            Some(n) => n as i64,
            None => int("prec", Some(20))?,
        };
        let g = int("g", Some(1))?;
        if p <= 0 || e <= 0 || prec <= 0 || g <= 0 {
            return Err(Error::Parse("p, e, prec and g must be positive".into()));
        }
        let tower = Tower::new(p as u32, e as u32, u, prec as u32)?;
        let g = g as usize;
        let mut cfg = Self::default_for(tower, g);
        if let Some(a) = get("alpha") {
            cfg.alpha = parse_rational(a)?;
        }
        cfg.beta = match get("beta") {
            None | Some("auto") => auto_beta(tower.p(), cfg.alpha),
            Some(b) => parse_rational(b)?,
        };
        if let Some(m) = get("l_matrix") {
            cfg.l_matrix = Matrix::from_row_major(2 * g, g, parse_entries(m, tower)?)?;
        }
        if let Some(m) = get("B_matrix") {
            cfg.b_matrix = Matrix::from_row_major(g, g, parse_entries(m, tower)?)?;
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let t = self.tower;
        let lits = |m: &Matrix| {
            let v: Vec<ElementLiteral> = m.row_major().iter().map(ElementLiteral::from).collect();
            serde_json::to_string(&v).expect("literals serialize")
        };
        format!(
            "p = {}\ne = {}\nu = {}\nprec = {}\ng = {}\nalpha = {}\nbeta = {}\nl_matrix = {}\nB_matrix = {}\n",
            t.p(),
            t.e(),
            t.u(),
            t.prec(),
            self.g,
            format_rational(self.alpha),
            format_rational(self.beta),
            lits(&self.l_matrix),
            lits(&self.b_matrix),
        )
    }
}

fn parse_entries(text: &str, tower: Tower) -> Result<Vec<Element>> {
    let values: Vec<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    values
        .into_iter()
        .map(|v| match v {
            serde_json::Value::String(s) => Element::parse(&s, tower),
            serde_json::Value::Number(n) => Element::parse(&n.to_string(), tower),
            obj @ serde_json::Value::Object(_) => {
                let lit: ElementLiteral =
                    serde_json::from_value(obj).map_err(|e| Error::Parse(e.to_string()))?;
                Element::from_literal_in(&lit, tower)
            }
            other => Err(Error::Parse(format!("bad matrix entry {other}"))),
        })
        .collect()
}
