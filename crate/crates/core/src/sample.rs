//! Seeded random elements, series and correspondence configurations.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::Element;
use crate::linalg::Matrix;
use crate::simpson::CorrespondenceConfig;
use crate::tate::RestrictedSeries;
use crate::tower::Tower;

/// A generator determined by `seed` and a label, so that independent checks
/// draw independent streams regardless of execution order.
pub fn labelled_rng(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// Smallest `π`-exponent `d` with `d/e ≥ bound` (or `> bound` when `strict`).
pub fn min_pi_index(tower: Tower, bound: Rational64, strict: bool) -> i64 {
    let scaled = bound * Rational64::from_integer(tower.e() as i64);
    let d = scaled.ceil().to_integer();
    if strict && scaled.is_integer() {
        d + 1
    } else {
        d
    }
}

/// `Σ d_j π^j` with random digits `d_j ∈ [0, p)` for `lead ≤ j < e·N` and
/// `d_lead ≠ 0`, so the valuation is exactly `lead/e`.
pub fn element_with_pi_valuation<R: Rng>(rng: &mut R, tower: Tower, lead: i64) -> Element {
    let e = tower.e() as i64;
    let p = tower.p();
    let top = tower.prec() as i64 * e;
    let base = lead.max(0);
    let mut num = vec![BigInt::zero(); e as usize];
    // π^(i + q·e) = π^i · (u·p)^q
    let up = BigInt::from(tower.u()) * BigInt::from(p);
    for j in base..top.max(base + 1) {
        let d = if j == base { rng.gen_range(1..p) } else { rng.gen_range(0..p) };
        if d == 0 {
            continue;
        }
        let (q, i) = ((j / e) as usize, (j % e) as usize);
        num[i] += BigInt::from(d) * num_traits::pow(up.clone(), q);
    }
    let coeffs: Vec<(BigInt, i64)> = num.into_iter().map(|c| (c, 0)).collect();
    let prec = Rational64::from_integer(tower.prec() as i64);
    let x = Element::from_coeffs(tower, &coeffs, prec).expect("e coefficients");
    if lead < 0 {
        x.mul_pi_pow(lead).truncate(prec)
    } else {
        x
    }
}

/// A random element with valuation at least `bound` (strictly above when
/// `strict`), exceeding the minimum by up to `spread` steps of `1/e`.
pub fn element_above<R: Rng>(
    rng: &mut R,
    tower: Tower,
    bound: Rational64,
    strict: bool,
    spread: i64,
) -> Element {
    let lead = min_pi_index(tower, bound, strict) + rng.gen_range(0..=spread);
    element_with_pi_valuation(rng, tower, lead)
}

/// Like [`element_with_pi_valuation`] with the leading exponent drawn from `leads`.
pub fn element_with_lead_in<R: Rng>(
    rng: &mut R,
    tower: Tower,
    leads: std::ops::RangeInclusive<i64>,
) -> Element {
    let lead = rng.gen_range(leads);
    element_with_pi_valuation(rng, tower, lead)
}

pub fn unit<R: Rng>(rng: &mut R, tower: Tower) -> Element {
    element_with_pi_valuation(rng, tower, 0)
}

/// A random polynomial with up to `max_terms` terms, exponents below
/// `max_degree` and coefficient valuations in `[0, max_val]`.
pub fn series<R: Rng>(
    rng: &mut R,
    tower: Tower,
    nvars: usize,
    max_terms: usize,
    max_degree: u32,
    max_val: i64,
) -> RestrictedSeries {
    let n = rng.gen_range(1..=max_terms);
    let e = tower.e() as i64;
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let exp: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..max_degree)).collect();
            let c = element_with_lead_in(rng, tower, 0..=max_val * e);
            (exp, c)
        })
        .collect();
    RestrictedSeries::from_terms(tower, nvars, terms).expect("well-formed terms")
}

fn integral_matrix<R: Rng>(rng: &mut R, tower: Tower, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| {
            if rng.gen_bool(0.25) {
                Element::zero(tower)
            } else {
                element_with_lead_in(rng, tower, 0..=tower.e() as i64)
            }
        })
        .collect();
    Matrix::from_row_major(rows, cols, data).expect("sized data")
}

/// A random configuration with integral `l` and `B` and a unit determinant,
/// so that `M` and `M⁻¹` both preserve valuation bounds.
pub fn config<R: Rng>(rng: &mut R, tower: Tower, g: usize) -> CorrespondenceConfig {
    let mut cfg = CorrespondenceConfig::default_for(tower, g);
    loop {
        cfg.l_matrix = integral_matrix(rng, tower, 2 * g, g);
        cfg.b_matrix = integral_matrix(rng, tower, g, g);
        if let Ok(cert) = cfg.validate() {
            if cert.det_valuation == crate::Valuation::ZERO {
                return cfg;
            }
        }
    }
}
