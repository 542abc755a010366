//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use padic_core::combinatorics::factorial_valuation;
use padic_core::sample::{self, labelled_rng};
use padic_core::series::{
    classify, exp_extended_stage1, padic_exp, padic_log, pth_root_binomial, term_valuation,
    SeriesKind,
};
use padic_core::simpson::{CorrespondenceConfig, HiggsDatum, PicLogPoint, SmallCharacter};
use padic_core::suite::{self, SuiteOptions};
use padic_core::tate::default_sample_points;
use padic_core::{Element, Error, Tower, Valuation};

const N: u32 = 40;
const SEED: u64 = 20240601;
const TOWERS: [(u32, u32, i64); 5] = [(2, 1, 1), (3, 1, 1), (3, 2, 1), (5, 1, 1), (3, 5, 1)];
const CORRESPONDENCE_TOWERS: [(u32, u32, i64); 4] = [(2, 1, 1), (3, 1, 1), (3, 2, 1), (5, 1, 1)];

type Outcome = Result<String, String>;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn tower(shape: (u32, u32, i64), prec: u32) -> Tower {
    Tower::new(shape.0, shape.1, shape.2, prec).unwrap()
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn residual_at_least(a: &Element, b: &Element, bound: i64, what: impl FnOnce() -> String) -> Result<Rational64, String> {
    let res = a.residual(b).map_err(|e| e.to_string())?;
    need(res >= Rational64::from_integer(bound), || format!("{} residual {res} < {bound}", what()))?;
    Ok(res)
}

fn c1_legendre() -> Outcome {
    let mut cases = 0;
    for p in [2u64, 3, 5, 7] {
        for k in 1..=2000u64 {
            let mut brute = 0u64;
            let mut q = p;
            while q <= k {
                brute += k / q;
                q *= p;
            }
            let got = factorial_valuation(p, k);
            need(got == Rational64::from_integer(brute as i64), || format!("p={p} k={k}: {got} != {brute}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, 0 failures"))
}

/// Term valuation at `k = p^j` from closed forms: `S_p(p^j) = 1`,
/// `v(p^j!) = (p^j - 1)/(p - 1)`, `v(p^j) = j`.
fn oracle_term(kind: SeriesKind, p: i64, j: u32, v: Rational64) -> Rational64 {
    let k = p.pow(j);
    let kr = Rational64::from_integer(k);
    match kind {
        SeriesKind::Exp => kr * v - r(k - 1, p - 1),
        SeriesKind::Log => kr * v - Rational64::from_integer(j as i64),
        SeriesKind::BinomialPthRoot => kr * (v - r(p, p - 1)) + r(1, p - 1),
    }
}

fn tends_upward(kind: SeriesKind, p: i64, v: Rational64) -> bool {
    (10..=12).all(|j| oracle_term(kind, p, j, v) > oracle_term(kind, p, j - 1, v))
}

fn c2_boundary_table() -> Outcome {
    let mut rows = 0;
    for p in [2u32, 3, 5] {
        let pi = p as i64;
        let mut vs: Vec<Rational64> = (-20..=40).map(|m| r(m, 10)).collect();
        vs.extend([r(1, pi - 1), r(pi, pi - 1)]);
        for kind in SeriesKind::ALL {
            for &v in &vs {
                for j in 0..=12 {
                    let lib = term_valuation(kind, p, (p as u64).pow(j), Valuation::Finite(v));
                    need(lib == Valuation::Finite(oracle_term(kind, pi, j, v)), || {
                        format!("{kind} p={p} v={v} j={j}: term valuation {lib}")
                    })?;
                }
                let got = classify(kind, p, Valuation::Finite(v)).converges();
                need(got == tends_upward(kind, pi, v), || format!("{kind} p={p} v={v}: classify says {got}"))?;
                rows += 1;
            }
        }
        for (kind, v) in [(SeriesKind::Exp, r(1, pi - 1)), (SeriesKind::BinomialPthRoot, r(pi, pi - 1))] {
            need(!classify(kind, p, Valuation::Finite(v)).converges(), || {
                format!("{kind} p={p} boundary v={v} must read DIVERGES")
            })?;
        }
    }
    Ok(format!("{rows} rows agree, boundary rows DIVERGE"))
}

fn strictly_above_exp(rng: &mut ChaCha8Rng, tw: Tower) -> Element {
    sample::element_above(rng, tw, tw.exp_threshold(), true, 6)
}

fn c3_round_trips() -> Outcome {
    let mut worst = Rational64::from_integer(i64::MAX / 4);
    for shape in TOWERS {
        let tw = tower(shape, N);
        let mut rng = labelled_rng(SEED, &format!("c3 {shape:?}"));
        let bound = tw.exp_threshold() + r(1, 10);
        for _ in 0..100 {
            let x = sample::element_above(&mut rng, tw, bound, false, 6);
            let back = padic_log(&padic_exp(&x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            worst = worst.min(residual_at_least(&back, &x, N as i64 - 6, || format!("log(exp({x}))"))?);
            let y = sample::element_above(&mut rng, tw, bound, false, 6).one_plus();
            let back = padic_exp(&padic_log(&y).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            worst = worst.min(residual_at_least(&back, &y, N as i64 - 6, || format!("exp(log({y}))"))?);
        }
    }
    Ok(format!("1000 round trips, min residual {worst}"))
}

fn c4_homomorphism() -> Outcome {
    let mut worst = Rational64::from_integer(i64::MAX / 4);
    for shape in TOWERS {
        let tw = tower(shape, N);
        let mut rng = labelled_rng(SEED, &format!("c4 {shape:?}"));
        for _ in 0..100 {
            let x = strictly_above_exp(&mut rng, tw);
            let y = strictly_above_exp(&mut rng, tw);
            let lhs = padic_exp(&(&x + &y)).map_err(|e| e.to_string())?;
            let rhs = &padic_exp(&x).map_err(|e| e.to_string())? * &padic_exp(&y).map_err(|e| e.to_string())?;
            worst = worst.min(residual_at_least(&lhs, &rhs, N as i64 - 6, || format!("x={x} y={y}"))?);
        }
    }
    Ok(format!("500 pairs, min residual {worst}"))
}

fn c5_isometry() -> Outcome {
    for shape in TOWERS {
        let tw = tower(shape, N);
        let mut rng = labelled_rng(SEED, &format!("c5 {shape:?}"));
        for _ in 0..100 {
            let y = strictly_above_exp(&mut rng, tw);
            let l = padic_log(&y.one_plus()).map_err(|e| e.to_string())?;
            need(l.valuation() == y.valuation(), || format!("v(log(1 + {y})) = {}", l.valuation()))?;
        }
    }
    let tw = Tower::base(2, 60).unwrap();
    let minus_one = Element::from_int(tw, -1);
    let l = padic_log(&minus_one).map_err(|e| e.to_string())?;
    let res = residual_at_least(&l, &Element::zero(tw), 54, || "log(-1) at p=2".into())?;
    // v(-1 - 1) = 1 = 1/(p-1), yet log(-1) vanishes
    need(minus_one.minus_one().valuation() == Valuation::integer(1), || "v(-2) != 1".into())?;
    Ok(format!("500 exact valuations; log(-1) residual {res} at N=60"))
}

fn c6_root() -> Outcome {
    let mut worst = Rational64::from_integer(i64::MAX / 4);
    for shape in TOWERS {
        let tw = tower(shape, N);
        let mut rng = labelled_rng(SEED, &format!("c6 {shape:?}"));
        let bound = SeriesKind::BinomialPthRoot.threshold(tw.p());
        for _ in 0..100 {
            let x = sample::element_above(&mut rng, tw, bound, true, 6);
            let root = pth_root_binomial(&x).map_err(|e| e.to_string())?;
            worst = worst.min(residual_at_least(&root.pow(tw.p() as u64), &x.one_plus(), N as i64 - 6, || {
                format!("root(1 + {x})^p")
            })?);
        }
    }
    let mut edges = 0;
    for shape in [(2, 1, 1), (3, 2, 1), (5, 4, 1), (3, 2, -1)] {
        let tw = tower(shape, N);
        let mut rng = labelled_rng(SEED, &format!("c6 edge {shape:?}"));
        let bound = SeriesKind::BinomialPthRoot.threshold(tw.p());
        for _ in 0..10 {
            let x = sample::element_above(&mut rng, tw, bound, false, 0);
            need(x.valuation() == Valuation::Finite(bound), || "sampler missed the boundary".into())?;
            need(matches!(pth_root_binomial(&x), Err(Error::Domain { .. })), || format!("{x} accepted"))?;
            edges += 1;
        }
    }
    Ok(format!("500 roots, min residual {worst}; {edges} boundary inputs rejected"))
}

fn c7_obstruction() -> Outcome {
    let tw = tower((3, 5, 1), N);
    let mut rng = labelled_rng(SEED, "c7");
    let three = BigInt::from(3);
    let mut worst = Rational64::from_integer(i64::MAX / 4);
    for lead in 0..=10 {
        let v = r(lead, 5);
        let should_succeed = v + 1 > r(3, 2);
        for _ in 0..5 {
            let y = sample::element_with_pi_valuation(&mut rng, tw, lead);
            match exp_extended_stage1(&y) {
                Ok(root) if should_succeed => {
                    let target = padic_exp(&y.mul_int(&three)).map_err(|e| e.to_string())?;
                    worst = worst.min(residual_at_least(&root.pow(3), &target, N as i64 - 6, || {
                        format!("cube at v={v}")
                    })?);
                }
                Err(Error::RootDomain { .. }) if !should_succeed => {}
                other => return Err(format!("v={v}: unexpected {other:?}")),
            }
        }
    }
    let y = sample::element_with_pi_valuation(&mut rng, tw, 2);
    need(matches!(exp_extended_stage1(&y), Err(Error::RootDomain { .. })), || "v=2/5 not rejected".into())?;
    let y = sample::element_with_pi_valuation(&mut rng, tw, 3);
    need(exp_extended_stage1(&y).is_ok(), || "v=3/5 rejected".into())?;
    Ok(format!("split at v(y) + 1 > 3/2 over 55 inputs, min cube residual {worst}"))
}

fn c8_gauss() -> Outcome {
    let mut points_checked = 0;
    for p in [2u32, 3, 5] {
        let tw = Tower::base(p, 20).unwrap();
        let mut rng = labelled_rng(SEED, &format!("c8 {p}"));
        for _ in 0..200 {
            let nvars = rng.gen_range(1..=3);
            let f = sample::series(&mut rng, tw, nvars, 5, 5, 4);
            let g = sample::series(&mut rng, tw, nvars, 5, 5, 4);
            let min_val = |s: &padic_core::tate::RestrictedSeries| {
                s.terms().map(|(_, c)| c.valuation()).min().unwrap_or(Valuation::Infinite)
            };
            let fg = f.mul(&g).map_err(|e| e.to_string())?;
            need(fg.gauss_norm() == min_val(&f) + min_val(&g), || {
                format!("{:?} * {:?}", f.to_literal(), g.to_literal())
            })?;
            let norm = fg.gauss_norm();
            for pt in default_sample_points(tw, nvars, 40) {
                let v = fg.evaluate(&pt).map_err(|e| e.to_string())?.valuation();
                need(v >= norm, || format!("sampled valuation {v} below Gauss valuation {norm}"))?;
                points_checked += 1;
            }
        }
    }
    Ok(format!("600 products exact, {points_checked} sampled points bounded"))
}

fn small(rng: &mut ChaCha8Rng, cfg: &CorrespondenceConfig, n: usize) -> Vec<Element> {
    (0..n).map(|_| sample::element_above(rng, cfg.tower, cfg.two_beta(), false, 6)).collect()
}

fn check_flags(cfg: &CorrespondenceConfig, theta: &[Element], rho: &[Element]) -> Result<(), String> {
    let alpha = Valuation::Finite(cfg.alpha);
    let two_beta = Valuation::Finite(cfg.two_beta());
    let higgs = theta.iter().all(|t| t.valuation() >= alpha);
    let chr = rho.iter().all(|x| x.minus_one().valuation() >= two_beta);
    need(cfg.is_small_higgs(&HiggsDatum(theta.to_vec())) == higgs, || "higgs flag".into())?;
    need(cfg.is_small_character(&SmallCharacter(rho.to_vec())) == chr, || "character flag".into())?;
    need(higgs && chr, || "sample outside the small locus".into())
}

fn c9_correspondence() -> Outcome {
    let bound = N as i64 - 8;
    let mut worst = Rational64::from_integer(i64::MAX / 4);
    let mut cases = 0;
    for shape in CORRESPONDENCE_TOWERS {
        let tw = tower(shape, N);
        let mut rng = labelled_rng(SEED, &format!("c9 {shape:?}"));
        let default = CorrespondenceConfig::default_for(tw, 1);
        need(default.alpha + r(1, shape.0 as i64 - 1) == default.two_beta(), || "beta relation".into())?;
        let mut runs = vec![(default, 100)];
        for i in 0..20 {
            runs.push((sample::config(&mut rng, tw, 1 + i % 2), 100));
        }
        for (cfg, count) in &runs {
            cfg.validate().map_err(|e| e.to_string())?;
            for _ in 0..*count {
                let z = small(&mut rng, cfg, cfg.g);
                let theta = small(&mut rng, cfg, cfg.g);
                let rho = cfg
                    .forward(&PicLogPoint(z.clone()), &HiggsDatum(theta.clone()))
                    .map_err(|e| e.to_string())?;
                check_flags(cfg, &theta, &rho.0)?;
                let (z2, t2) = cfg.inverse(&rho).map_err(|e| e.to_string())?;
                for (a, b) in z2.0.iter().chain(&t2.0).zip(z.iter().chain(&theta)) {
                    worst = worst.min(residual_at_least(a, b, bound, || "inverse(forward)".into())?);
                }
                let rho: Vec<Element> = small(&mut rng, cfg, 2 * cfg.g).iter().map(Element::one_plus).collect();
                let (z, theta) = cfg.inverse(&SmallCharacter(rho.clone())).map_err(|e| e.to_string())?;
                check_flags(cfg, &theta.0, &rho)?;
                let back = cfg.forward(&z, &theta).map_err(|e| e.to_string())?;
                for (a, b) in back.0.iter().zip(&rho) {
                    worst = worst.min(residual_at_least(a, b, bound, || "forward(inverse)".into())?);
                }
                cases += 2;
            }
        }
    }
    Ok(format!("{cases} round trips over 84 configurations, min residual {worst}"))
}

fn c10_determinism() -> Outcome {
    let opts = SuiteOptions {
        seed: 1,
        ..SuiteOptions::default()
    };
    let a = serde_json::to_string_pretty(&suite::run(opts)).unwrap();
    let b = serde_json::to_string_pretty(&suite::run(opts)).unwrap();
    need(a == b, || "reports differ".into())?;
    let report = suite::run(opts);
    need(report.passed, || format!("suite failed: {a}"))?;
    Ok(format!("{} bytes identical across runs, {} checks", a.len(), report.checks.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 legendre agreement", c1_legendre),
        ("2 convergence boundary table", c2_boundary_table),
        ("3 exp/log round trips", c3_round_trips),
        ("4 homomorphism law", c4_homomorphism),
        ("5 isometry and log(-1)", c5_isometry),
        ("6 binomial root round trip", c6_root),
        ("7 stage-one obstruction", c7_obstruction),
        ("8 gauss multiplicativity", c8_gauss),
        ("9 correspondence round trip", c9_correspondence),
        ("10 determinism", c10_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
