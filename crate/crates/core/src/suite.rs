//! The property suite: every structural law of the library, checked on seeded
//! random samples across a matrix of towers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{binom_inv_p_valuation, factorial_valuation};
use crate::element::Element;
use crate::error::Error;
use crate::sample;
use crate::series::{
    classify, exp_extended_stage1, padic_exp, padic_log, pth_root_binomial, term_valuation,
    SeriesKind,
};
use crate::simpson::{CorrespondenceConfig, HiggsDatum, PicLogPoint, SmallCharacter};
use crate::tate::{default_sample_points, RestrictedSeries};
use crate::tower::Tower;
use crate::valuation::Valuation;

/// `(p, e, u)` for the series and field checks.
pub const TOWERS: [(u32, u32, i64); 5] = [(2, 1, 1), (3, 1, 1), (3, 2, 1), (5, 1, 1), (3, 5, 1)];

/// `(p, e, u)` for the correspondence checks.
pub const CORRESPONDENCE_TOWERS: [(u32, u32, i64); 4] = [(2, 1, 1), (3, 1, 1), (3, 2, 1), (5, 1, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random samples per tower.
    pub samples: usize,
    pub prec: u32,
    /// Harness self-test: widens the isometry check to the closed boundary,
    /// where the law fails.
    pub break_isometry: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 1,
            samples: 20,
            prec: 20,
            break_isometry: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub passed: bool,
    pub checks: BTreeMap<String, CheckReport>,
}

type Outcome = std::result::Result<usize, String>;
type Check = fn(&Ctx) -> Outcome;

struct Ctx {
    opts: SuiteOptions,
    name: &'static str,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        sample::labelled_rng(self.opts.seed, self.name)
    }

    fn tower(&self, (p, e, u): (u32, u32, i64)) -> Tower {
        Tower::new(p, e, u, self.opts.prec).expect("valid tower")
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

const CHECKS: &[(&str, Check)] = &[
    ("binomial_coefficient_valuation", binomial_coefficient_valuation),
    ("character_group_law", character_group_law),
    ("classifier_oracle_agreement", classifier_oracle_agreement),
    ("correspondence_round_trip", correspondence_round_trip),
    ("exp_homomorphism", exp_homomorphism),
    ("exp_log_round_trip", exp_log_round_trip),
    ("factorization_consistency", factorization_consistency),
    ("gauss_multiplicativity", gauss_multiplicativity),
    ("gauss_triangle", gauss_triangle),
    ("inverse_round_trip", inverse_round_trip),
    ("legendre_factorial", legendre_factorial),
    ("linear_solve_exactness", linear_solve_exactness),
    ("log_isometry", log_isometry),
    ("monomial_attainment", monomial_attainment),
    ("root_identity", root_identity),
    ("seminorm_bound", seminorm_bound),
    ("smallness_transport", smallness_transport),
    ("stage1_consistency", stage1_consistency),
    ("stage1_obstruction", stage1_obstruction),
    ("torsion_kills_log", torsion_kills_log),
    ("ultrametric", ultrametric),
    ("valuation_multiplicativity", valuation_multiplicativity),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every check, one thread per check.
pub fn run(opts: SuiteOptions) -> SuiteReport {
    let results: Vec<(String, CheckReport)> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .map(|&(name, f)| {
                s.spawn(move || {
                    let outcome = f(&Ctx { opts, name });
                    (name.to_string(), report(outcome))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    });
    let checks: BTreeMap<_, _> = results.into_iter().collect();
    SuiteReport {
        options: opts,
        passed: checks.values().all(|c| c.passed),
        checks,
    }
}

/// Runs the checks one after another on the current thread.
pub fn run_sequential(opts: SuiteOptions) -> SuiteReport {
    let checks: BTreeMap<_, _> = CHECKS
        .iter()
        .map(|&(name, f)| (name.to_string(), report(f(&Ctx { opts, name }))))
        .collect();
    SuiteReport {
        options: opts,
        passed: checks.values().all(|c| c.passed),
        checks,
    }
}

fn report(outcome: Outcome) -> CheckReport {
    match outcome {
        Ok(cases) => CheckReport {
            passed: true,
            cases,
            counterexample: None,
        },
        Err(msg) => CheckReport {
            passed: false,
            cases: 0,
            counterexample: Some(msg),
        },
    }
}

// field arithmetic

fn ultrametric(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in [(2, 1, 1), (3, 2, 1), (5, 3, 1), (3, 5, 1)] {
        let tw = cx.tower(shape);
        for _ in 0..cx.opts.samples {
            let x = sample::element_with_lead_in(&mut rng, tw, -3..=7);
            let y = if rng.gen_bool(0.3) {
                // force cancellation of the leading digit
                let w = sample::element_with_lead_in(&mut rng, tw, 0..=7);
                &w - &x
            } else {
                sample::element_with_lead_in(&mut rng, tw, -3..=7)
            };
            let (vx, vy, vs) = (x.valuation(), y.valuation(), (&x + &y).valuation());
            ensure(vs >= vx.min(vy), || format!("v({x} + {y}) = {vs}"))?;
            if vx != vy {
                ensure(vs == vx.min(vy), || format!("v({x} + {y}) = {vs} != min"))?;
            }
            n += 1;
        }
    }
    Ok(n)
}

fn valuation_multiplicativity(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in TOWERS {
        let tw = cx.tower(shape);
        for _ in 0..cx.opts.samples {
            let x = sample::element_with_lead_in(&mut rng, tw, -4..=5);
            let y = sample::element_with_lead_in(&mut rng, tw, -4..=5);
            let v = (&x * &y).valuation();
            ensure(v == x.valuation() + y.valuation(), || format!("v({x} * {y}) = {v}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn inverse_round_trip(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in TOWERS {
        let tw = cx.tower(shape);
        for _ in 0..cx.opts.samples {
            let x = sample::unit(&mut rng, tw);
            let y = x.inv().map_err(fail("inv"))?;
            ensure((&x * &y).eq_at_prec(&Element::one(tw)), || format!("{x} * {y} != 1"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn legendre_factorial(_: &Ctx) -> Outcome {
    let mut n = 0;
    for p in [2u64, 3, 5, 7] {
        for k in 0..=2000u64 {
            let mut sum = 0;
            let mut q = p;
            while q <= k {
                sum += k / q;
                q *= p;
            }
            let got = factorial_valuation(p, k);
            ensure(got == Rational64::from_integer(sum as i64), || {
                format!("p={p} k={k}: {got} vs {sum}")
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn big_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

fn binomial_coefficient_valuation(_: &Ctx) -> Outcome {
    let mut n = 0;
    for p in [2u64, 3, 5] {
        let a = BigRational::new(BigInt::one(), BigInt::from(p));
        let mut c = BigRational::one();
        for k in 0..=200u64 {
            if k > 0 {
                c = c * (&a - BigRational::from_integer(BigInt::from(k - 1)))
                    / BigRational::from_integer(BigInt::from(k));
            }
            let v = big_valuation(c.numer(), p) - big_valuation(c.denom(), p);
            let got = binom_inv_p_valuation(p, k);
            ensure(got == Rational64::from_integer(v), || format!("p={p} k={k}: {got} vs {v}"))?;
            n += 1;
        }
    }
    Ok(n)
}

// power series

/// Convergence read off the term valuations at `k = p^j`: the increments over
/// the last steps up to `j = 12` must be positive.
pub fn tail_oracle(kind: SeriesKind, p: u32, v: Rational64) -> bool {
    let at = |j: u32| term_valuation(kind, p, (p as u64).pow(j), Valuation::Finite(v));
    (10..=12).all(|j| at(j) > at(j - 1))
}

fn classifier_oracle_agreement(_: &Ctx) -> Outcome {
    let mut n = 0;
    for kind in SeriesKind::ALL {
        for p in [2u32, 3, 5] {
            for e in [1i64, 2, 3, 5] {
                for m in -2 * e..=4 * e {
                    let v = Rational64::new(m, e);
                    let got = classify(kind, p, Valuation::Finite(v)).converges();
                    let want = tail_oracle(kind, p, v);
                    ensure(got == want, || format!("{kind} p={p} v={v}: {got} vs {want}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn round_trip_bound(tw: Tower) -> Rational64 {
    tw.exp_threshold() + Rational64::new(1, 10)
}

fn exp_homomorphism(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in TOWERS {
        let tw = cx.tower(shape);
        for _ in 0..cx.opts.samples {
            let x = sample::element_above(&mut rng, tw, tw.exp_threshold(), true, 4);
            let y = sample::element_above(&mut rng, tw, tw.exp_threshold(), true, 4);
            let lhs = padic_exp(&(&x + &y)).map_err(fail("exp(x+y)"))?;
            let rhs = &padic_exp(&x).map_err(fail("exp(x)"))? * &padic_exp(&y).map_err(fail("exp(y)"))?;
            ensure(lhs.eq_at_prec(&rhs), || format!("x={x} y={y}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn exp_log_round_trip(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in TOWERS {
        let tw = cx.tower(shape);
        for _ in 0..cx.opts.samples {
            let x = sample::element_above(&mut rng, tw, round_trip_bound(tw), false, 4);
            let back = padic_log(&padic_exp(&x).map_err(fail("exp"))?).map_err(fail("log"))?;
            ensure(back.eq_at_prec(&x), || format!("log(exp({x})) = {back}"))?;
            let y = sample::element_above(&mut rng, tw, round_trip_bound(tw), false, 4);
            let back = padic_exp(&padic_log(&y.one_plus()).map_err(fail("log"))?).map_err(fail("exp"))?;
            ensure(back.eq_at_prec(&y.one_plus()), || format!("exp(log(1 + {y})) = {back}"))?;
            n += 2;
        }
    }
    Ok(n)
}

fn log_isometry(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in TOWERS {
        let tw = cx.tower(shape);
        let strict = !cx.opts.break_isometry;
        let mut ys = Vec::new();
        if !strict && tw.p() == 2 && tw.e() == 1 {
            ys.push(Element::from_int(tw, -2));
        }
        for _ in 0..cx.opts.samples {
            ys.push(sample::element_above(&mut rng, tw, tw.exp_threshold(), strict, 4));
        }
        for y in ys {
            let l = padic_log(&y.one_plus()).map_err(fail("log"))?;
            ensure(l.valuation() == y.valuation(), || {
                format!("v(log(1 + {y})) = {} but v(y) = {}", l.valuation(), y.valuation())
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn root_identity(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in TOWERS {
        let tw = cx.tower(shape);
        let bound = SeriesKind::BinomialPthRoot.threshold(tw.p());
        for _ in 0..cx.opts.samples {
            let x = sample::element_above(&mut rng, tw, bound, true, 4);
            let r = pth_root_binomial(&x).map_err(fail("root"))?;
            let back = r.pow(tw.p() as u64);
            ensure(back.eq_at_prec(&x.one_plus()), || format!("root(1 + {x})^p = {back}"))?;
            n += 1;
        }
        let edge = sample::element_above(&mut rng, tw, bound, false, 0);
        if edge.valuation() == Valuation::Finite(bound) {
            ensure(matches!(pth_root_binomial(&edge), Err(Error::Domain { .. })), || {
                format!("boundary input {edge} accepted")
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn stage1_consistency(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in TOWERS {
        let tw = cx.tower(shape);
        for _ in 0..cx.opts.samples {
            let y = sample::element_above(&mut rng, tw, tw.exp_threshold(), true, 4);
            let a = exp_extended_stage1(&y).map_err(fail("stage 1"))?;
            let b = padic_exp(&y).map_err(fail("exp"))?;
            ensure(a.eq_at_prec(&b), || format!("y={y}: {a} vs {b}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn stage1_obstruction(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let tw = cx.tower((3, 5, 1));
    let mut n = 0;
    for lead in 0..=8 {
        for _ in 0..cx.opts.samples.div_ceil(4) {
            let y = sample::element_with_pi_valuation(&mut rng, tw, lead);
            let expect_ok = y.valuation().exceeds(Rational64::new(1, 2));
            match exp_extended_stage1(&y) {
                Ok(r) if expect_ok => {
                    let back = r.pow(3);
                    let target = padic_exp(&y.mul_int(&BigInt::from(3))).map_err(fail("exp(3y)"))?;
                    ensure(back.eq_at_prec(&target), || format!("cube of stage 1 at {y}"))?;
                }
                Err(Error::RootDomain { .. }) if !expect_ok => {}
                other => return Err(format!("y={y} (v={}): {other:?}", y.valuation())),
            }
            n += 1;
        }
    }
    Ok(n)
}

fn torsion_kills_log(_: &Ctx) -> Outcome {
    let tw = Tower::base(2, 60).expect("valid tower");
    let l = padic_log(&Element::from_int(tw, -1)).map_err(fail("log(-1)"))?;
    ensure(l.certified_valuation() >= Rational64::from_integer(55), || {
        format!("log(-1) = {l}")
    })?;
    Ok(1)
}

// restricted series

const GAUSS_PRIMES: [u32; 3] = [2, 3, 5];

fn random_series(rng: &mut ChaCha8Rng, tw: Tower) -> RestrictedSeries {
    let nvars = rng.gen_range(1..=2);
    sample::series(rng, tw, nvars, 4, 4, 3)
}

fn gauss_multiplicativity(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for p in GAUSS_PRIMES {
        let tw = Tower::base(p, cx.opts.prec).expect("valid tower");
        for _ in 0..cx.opts.samples {
            let nvars = rng.gen_range(1..=2);
            let f = sample::series(&mut rng, tw, nvars, 4, 4, 3);
            let g = sample::series(&mut rng, tw, nvars, 4, 4, 3);
            let fg = f.mul(&g).map_err(fail("mul"))?;
            ensure(fg.gauss_norm() == f.gauss_norm() + g.gauss_norm(), || {
                format!("{:?} * {:?}", f.to_literal(), g.to_literal())
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn seminorm_bound(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for p in GAUSS_PRIMES {
        let tw = Tower::base(p, cx.opts.prec).expect("valid tower");
        for _ in 0..cx.opts.samples {
            let f = random_series(&mut rng, tw);
            let norm = f.gauss_norm();
            let mut points = default_sample_points(tw, f.nvars(), 64);
            points.push((0..f.nvars()).map(|_| sample::element_above(&mut rng, tw, Rational64::zero(), false, 3)).collect());
            for pt in points {
                let v = f.evaluate(&pt).map_err(fail("evaluate"))?.valuation();
                ensure(v >= norm, || format!("{:?} at a point: {v} < {norm}", f.to_literal()))?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn monomial_attainment(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for p in GAUSS_PRIMES {
        let tw = Tower::base(p, cx.opts.prec).expect("valid tower");
        for _ in 0..cx.opts.samples {
            let nvars = rng.gen_range(1..=3);
            let exp: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..6)).collect();
            let f = RestrictedSeries::monomial(exp, sample::unit(&mut rng, tw));
            let mut points = default_sample_points(tw, nvars, 16);
            points.push(vec![Element::one(tw); nvars]);
            let sup = f.sup_sample(&points).map_err(fail("sup"))?;
            ensure(sup == f.gauss_norm(), || format!("{:?}: sup {sup}", f.to_literal()))?;
            n += 1;
        }
    }
    Ok(n)
}

fn gauss_triangle(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for p in GAUSS_PRIMES {
        let tw = Tower::base(p, cx.opts.prec).expect("valid tower");
        for _ in 0..cx.opts.samples {
            let f = sample::series(&mut rng, tw, 1, 4, 4, 3);
            let g = sample::series(&mut rng, tw, 1, 4, 4, 3);
            let s = f.add(&g).map_err(fail("add"))?;
            ensure(s.gauss_norm() >= f.gauss_norm().min(g.gauss_norm()), || {
                format!("{:?} + {:?}", f.to_literal(), g.to_literal())
            })?;
            n += 1;
        }
    }
    Ok(n)
}

// correspondence

/// The default configuration followed by `random` seeded random ones.
fn configs(rng: &mut ChaCha8Rng, tw: Tower, random: usize) -> Vec<CorrespondenceConfig> {
    let mut out = vec![CorrespondenceConfig::default_for(tw, 1)];
    for i in 0..random {
        out.push(sample::config(rng, tw, 1 + i % 2));
    }
    out
}

fn small_vector(rng: &mut ChaCha8Rng, cfg: &CorrespondenceConfig, len: usize) -> Vec<Element> {
    (0..len)
        .map(|_| sample::element_above(rng, cfg.tower, cfg.two_beta(), false, 4))
        .collect()
}

fn small_pair(rng: &mut ChaCha8Rng, cfg: &CorrespondenceConfig) -> (PicLogPoint, HiggsDatum) {
    (
        PicLogPoint(small_vector(rng, cfg, cfg.g)),
        HiggsDatum(small_vector(rng, cfg, cfg.g)),
    )
}

fn all_eq(a: &[Element], b: &[Element]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.eq_at_prec(y))
}

fn show(xs: &[Element]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn correspondence_round_trip(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in CORRESPONDENCE_TOWERS {
        let tw = cx.tower(shape);
        let cfgs = configs(&mut rng, tw, 2);
        for _ in 0..cx.opts.samples {
            for cfg in &cfgs {
                let (z, theta) = small_pair(&mut rng, cfg);
                let rho = cfg.forward(&z, &theta).map_err(fail("forward"))?;
                let (z2, t2) = cfg.inverse(&rho).map_err(fail("inverse"))?;
                ensure(all_eq(&z.0, &z2.0) && all_eq(&theta.0, &t2.0), || {
                    format!("z={} theta={}", show(&z.0), show(&theta.0))
                })?;
                let rho = SmallCharacter(
                    small_vector(&mut rng, cfg, 2 * cfg.g).iter().map(Element::one_plus).collect(),
                );
                let (z, theta) = cfg.inverse(&rho).map_err(fail("inverse"))?;
                let back = cfg.forward(&z, &theta).map_err(fail("forward"))?;
                ensure(all_eq(&rho.0, &back.0), || format!("rho={}", show(&rho.0)))?;
                n += 2;
            }
        }
    }
    Ok(n)
}

fn factorization_consistency(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in CORRESPONDENCE_TOWERS {
        let tw = cx.tower(shape);
        let cfgs = configs(&mut rng, tw, 2);
        for _ in 0..cx.opts.samples {
            for cfg in &cfgs {
                let (z, theta) = small_pair(&mut rng, cfg);
                let rho = cfg.forward(&z, &theta).map_err(fail("forward"))?;
                let a = cfg.pic_to_character(&z).map_err(fail("pic"))?;
                let b = cfg.higgs_to_character(&theta).map_err(fail("higgs"))?;
                let prod: Vec<Element> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
                let direct = cfg
                    .lie_vector(&z, &theta)
                    .map_err(fail("lie"))?
                    .iter()
                    .map(padic_exp)
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(fail("exp"))?;
                ensure(all_eq(&rho.0, &prod) && all_eq(&rho.0, &direct), || {
                    format!("z={} theta={}", show(&z.0), show(&theta.0))
                })?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn character_group_law(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in CORRESPONDENCE_TOWERS {
        let tw = cx.tower(shape);
        let cfgs = configs(&mut rng, tw, 2);
        for _ in 0..cx.opts.samples {
            for cfg in &cfgs {
                let (z1, t1) = small_pair(&mut rng, cfg);
                let (z2, t2) = small_pair(&mut rng, cfg);
                let sum = |a: &[Element], b: &[Element]| -> Vec<Element> {
                    a.iter().zip(b).map(|(x, y)| x + y).collect()
                };
                let lhs = cfg
                    .forward(&PicLogPoint(sum(&z1.0, &z2.0)), &HiggsDatum(sum(&t1.0, &t2.0)))
                    .map_err(fail("forward"))?;
                let r1 = cfg.forward(&z1, &t1).map_err(fail("forward"))?;
                let r2 = cfg.forward(&z2, &t2).map_err(fail("forward"))?;
                let rhs: Vec<Element> = r1.0.iter().zip(&r2.0).map(|(x, y)| x * y).collect();
                ensure(all_eq(&lhs.0, &rhs), || {
                    format!("z1={} t1={} z2={} t2={}", show(&z1.0), show(&t1.0), show(&z2.0), show(&t2.0))
                })?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn smallness_transport(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in CORRESPONDENCE_TOWERS {
        let tw = cx.tower(shape);
        let cfg = CorrespondenceConfig::default_for(tw, 1);
        let e = tw.e() as i64;
        let lo = sample::min_pi_index(tw, cfg.alpha, false);
        let hi = sample::min_pi_index(tw, cfg.two_beta(), false);
        for _ in 0..cx.opts.samples {
            let (z, theta) = small_pair(&mut rng, &cfg);
            let rho = cfg.forward(&z, &theta).map_err(fail("forward"))?;
            ensure(cfg.is_small_character(&rho), || format!("rho={}", show(&rho.0)))?;
            let lead = rng.gen_range(lo..hi);
            let theta = HiggsDatum(vec![sample::element_with_pi_valuation(&mut rng, tw, lead)]);
            ensure(cfg.is_small_higgs(&theta), || format!("theta={} not small", show(&theta.0)))?;
            let zero = PicLogPoint(vec![Element::zero(tw)]);
            ensure(
                matches!(cfg.forward(&zero, &theta), Err(Error::SmallnessViolation(_))),
                || format!("theta={} with valuation {}/{e} was not reported", show(&theta.0), lead),
            )?;
            n += 2;
        }
    }
    Ok(n)
}

fn linear_solve_exactness(cx: &Ctx) -> Outcome {
    let mut rng = cx.rng();
    let mut n = 0;
    for shape in CORRESPONDENCE_TOWERS {
        let tw = cx.tower(shape);
        let cfgs = configs(&mut rng, tw, 2);
        for _ in 0..cx.opts.samples {
            for cfg in &cfgs {
                let rho = SmallCharacter(
                    small_vector(&mut rng, cfg, 2 * cfg.g).iter().map(Element::one_plus).collect(),
                );
                let (z, theta) = cfg.inverse(&rho).map_err(fail("inverse"))?;
                let mv = cfg.lie_vector(&z, &theta).map_err(fail("lie"))?;
                let logs = rho
                    .0
                    .iter()
                    .map(padic_log)
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(fail("log"))?;
                for (a, b) in mv.iter().zip(&logs) {
                    let r = a.residual(b).map_err(fail("residual"))?;
                    ensure(r >= a.abs_prec().min(b.abs_prec()), || format!("rho={}", show(&rho.0)))?;
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let opts = SuiteOptions {
            samples: 3,
            prec: 12,
            ..SuiteOptions::default()
        };
        let report = run(opts);
        let failures: Vec<_> = report.checks.iter().filter(|(_, c)| !c.passed).collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.checks.len() >= 12);
    }

    #[test]
    fn broken_isometry_is_caught() {
        let opts = SuiteOptions {
            samples: 3,
            prec: 12,
            break_isometry: true,
            ..SuiteOptions::default()
        };
        let report = run(opts);
        assert!(!report.passed);
        let iso = &report.checks["log_isometry"];
        assert!(!iso.passed && iso.counterexample.is_some());
    }

    #[test]
    fn threaded_and_sequential_agree() {
        let opts = SuiteOptions {
            samples: 2,
            prec: 10,
            ..SuiteOptions::default()
        };
        let a = serde_json::to_string(&run(opts)).unwrap();
        let b = serde_json::to_string(&run_sequential(opts)).unwrap();
        assert_eq!(a, b);
    }
}
