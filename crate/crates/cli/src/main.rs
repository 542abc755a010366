use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use padic_core::literal::{
    elements, literals, CharacterRecord, ElementLiteral, PairRecord, SeriesLiteral,
};
use padic_core::series::{
    classify, exp_extended, padic_exp, padic_log, pth_root_binomial, term_trace, SeriesKind,
};
use padic_core::simpson::{CorrespondenceConfig, HiggsDatum, PicLogPoint, SmallCharacter};
use padic_core::suite::{self, SuiteOptions};
use padic_core::tate::{default_sample_points, weierstrass_member, RestrictedSeries};
use padic_core::valuation::{format_rational, parse_rational};
use padic_core::{Element, Error, Tower, Valuation};

const DEFAULT_PREC: u32 = 20;

#[derive(Parser)]
#[command(name = "padic", version, about = "p-adic series, Gauss norms and the rank-one small correspondence")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Residue characteristic.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Ramification index of the tower.
    #[arg(long, global = true)]
    e: Option<u32>,
    /// Unit in the Eisenstein relation pi^e = u*p.
    #[arg(long, global = true)]
    u: Option<i64>,
    /// Working precision, in valuation units.
    #[arg(long, global = true)]
    prec: Option<u32>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Correspondence configuration file (key = value).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a series at an element.
    Eval {
        kind: EvalKind,
        /// Element literal (JSON or expression such as "5*5^0").
        #[arg(allow_hyphen_values = true)]
        element: String,
        /// Number of extension stages for `stage1`.
        #[arg(long, default_value_t = 1)]
        stages: u32,
    },
    /// Convergence verdict from a valuation.
    Classify {
        kind: SeriesKind,
        /// Valuation as a rational string.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Gauss valuation and sampled sup-seminorm of a series.
    Gauss {
        /// Series literal, or a path to a file containing one.
        series: String,
        /// Maximum number of sample points.
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// Membership of a point in the Weierstrass domain of some series.
    Weierstrass {
        /// JSON `{"point": [...], "series": [...]}`, or a path to it.
        input: String,
    },
    /// The rank-one small correspondence.
    Simpson {
        verb: SimpsonVerb,
        /// JSON record `{"z", "theta"}` or `{"rho"}`, or a path to it.
        #[arg(long)]
        input: String,
    },
    /// Re-verify every structural property on seeded samples.
    LemmaSuite {
        /// Random samples per tower.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        break_isometry: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalKind {
    Exp,
    Log,
    Root,
    Stage1,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimpsonVerb {
    Forward,
    Inverse,
    Roundtrip,
}

#[derive(Serialize)]
struct TowerEcho {
    p: u32,
    e: u32,
    u: i64,
    prec: u32,
}

impl From<Tower> for TowerEcho {
    fn from(t: Tower) -> Self {
        TowerEcho {
            p: t.p(),
            e: t.e(),
            u: t.u(),
            prec: t.prec(),
        }
    }
}

#[derive(Serialize)]
struct ErrorEcho {
    kind: &'static str,
    message: String,
    exit_code: u8,
}

/// Deterministic output of every command.
#[derive(Serialize, Default)]
struct RunReport {
    command: Vec<String>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tower: Option<TowerEcho>,
    inputs: BTreeMap<String, Value>,
    outputs: BTreeMap<String, Value>,
    certificates: BTreeMap<String, Value>,
    checks: BTreeMap<String, bool>,
    thresholds: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorEcho>,
}

/// A command failure with its exit status.
enum Failure {
    Lib(Error),
    /// A property check failed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Domain { .. } | Error::RootDomain { .. } | Error::OutOfBall { .. } | Error::ZeroAtPrecision(_) => 3,
        Error::InvalidTower(_)
        | Error::TowerMismatch
        | Error::ShapeMismatch(_)
        | Error::SingularConfig
        | Error::SmallnessViolation(_) => 4,
    }
}

fn val(v: Valuation) -> Value {
    Value::String(v.to_string())
}

fn rat(r: num_rational::Rational64) -> Value {
    Value::String(format_rational(r))
}

fn lit(x: &Element) -> Value {
    serde_json::to_value(x.to_literal()).expect("literal serializes")
}

fn lits(xs: &[Element]) -> Value {
    serde_json::to_value(literals(xs)).expect("literals serialize")
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Inline JSON, or the contents of the named file.
fn inline_or_file(arg: &str) -> Result<String, Error> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

impl Cli {
    fn tower(&self) -> Result<Tower, Error> {
        let p = self
            .p
            .ok_or_else(|| Error::Parse("--p is required unless the input carries its tower".into()))?;
        Tower::new(
            p,
            self.e.unwrap_or(1),
            self.u.unwrap_or(1),
            self.prec.unwrap_or(DEFAULT_PREC),
        )
    }

    /// The tower of a JSON literal, with `--prec` overriding its precision.
    fn tower_of(&self, l: &ElementLiteral) -> Result<Tower, Error> {
        let tw = l.tower(self.prec)?;
        if self.p.is_some_and(|p| p != tw.p()) || self.e.is_some_and(|e| e != tw.e()) || self.u.is_some_and(|u| u != tw.u()) {
            return Err(Error::TowerMismatch);
        }
        Ok(tw)
    }

    fn element(&self, text: &str) -> Result<Element, Error> {
        if text.trim_start().starts_with('{') {
            let l: ElementLiteral = parse_json(text, "element literal")?;
            let tw = self.tower_of(&l)?;
            return Element::from_literal_in(&l, tw);
        }
        Element::parse(text, self.tower()?)
    }

    fn correspondence(&self) -> Result<CorrespondenceConfig, Error> {
        match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                CorrespondenceConfig::parse_with_prec(&text, self.prec)
            }
            None => Ok(CorrespondenceConfig::default_for(self.tower()?, 1)),
        }
    }
}

fn eval(cli: &Cli, kind: EvalKind, text: &str, stages: u32, rep: &mut RunReport) -> Result<(), Failure> {
    let x = cli.element(text)?;
    let tw = x.tower();
    rep.tower = Some(tw.into());
    rep.inputs.insert("element".into(), lit(&x));
    rep.inputs.insert("valuation".into(), val(x.valuation()));
    // stage 1 succeeds exactly on the exponential's disc
    let (name, threshold, arg_val) = match kind {
        EvalKind::Exp => ("exp", Some(SeriesKind::Exp.threshold(tw.p())), x.valuation()),
        EvalKind::Log => ("log", Some(SeriesKind::Log.threshold(tw.p())), x.minus_one().valuation()),
        EvalKind::Root => ("root", Some(SeriesKind::BinomialPthRoot.threshold(tw.p())), x.valuation()),
        EvalKind::Stage1 => ("stage1", (stages == 1).then(|| tw.exp_threshold()), x.valuation()),
    };
    rep.inputs.insert("series".into(), Value::String(name.into()));
    if let Some(t) = threshold {
        rep.thresholds.insert(format!("{name} domain: valuation >"), format_rational(t));
        rep.checks.insert("in_domain".into(), arg_val.exceeds(t));
    }
    let y = match kind {
        EvalKind::Exp => padic_exp(&x)?,
        EvalKind::Log => padic_log(&x)?,
        EvalKind::Root => pth_root_binomial(&x)?,
        EvalKind::Stage1 => {
            rep.inputs.insert("stages".into(), json!(stages));
            exp_extended(&x, stages)?
        }
    };
    rep.outputs.insert("value".into(), lit(&y));
    rep.outputs.insert("valuation".into(), val(y.valuation()));
    rep.certificates.insert("absolute_precision".into(), rat(y.abs_prec()));
    rep.certificates.insert("certified_valuation".into(), rat(y.certified_valuation()));
    Ok(())
}

fn classify_cmd(cli: &Cli, kind: SeriesKind, v: &str, rep: &mut RunReport) -> Result<(), Failure> {
    let p = cli.p.ok_or_else(|| Error::Parse("--p is required".into()))?;
    let tw = Tower::new(p, cli.e.unwrap_or(1), cli.u.unwrap_or(1), cli.prec.unwrap_or(DEFAULT_PREC))?;
    let v = parse_rational(v)?;
    if let Some(e) = cli.e {
        if (v * e as i64).denom() != &1 {
            return Err(Error::Parse(format!("valuation {v} is not a multiple of 1/{e}")).into());
        }
    }
    rep.tower = Some(tw.into());
    rep.inputs.insert("series".into(), Value::String(kind.name().into()));
    rep.inputs.insert("valuation".into(), rat(v));
    let verdict = classify(kind, p, Valuation::Finite(v));
    rep.thresholds.insert(format!("{} domain: valuation >", kind.name()), format_rational(verdict.threshold));
    rep.outputs.insert("verdict".into(), serde_json::to_value(verdict.verdict).expect("verdict"));
    rep.outputs.insert(
        "term_valuations".into(),
        Value::Array(term_trace(kind, p, Valuation::Finite(v), 20).into_iter().map(val).collect()),
    );
    rep.certificates.insert("strict".into(), json!(verdict.strict));
    Ok(())
}

fn read_series(cli: &Cli, lit: &SeriesLiteral) -> Result<RestrictedSeries, Error> {
    let first = lit
        .terms
        .first()
        .ok_or_else(|| Error::Parse("series needs at least one term to fix its tower".into()))?;
    RestrictedSeries::from_literal(lit, cli.tower_of(&first.coeff)?)
}

fn gauss(cli: &Cli, arg: &str, points: usize, rep: &mut RunReport) -> Result<(), Failure> {
    let sl: SeriesLiteral = parse_json(&inline_or_file(arg)?, "series literal")?;
    let f = read_series(cli, &sl)?;
    rep.tower = Some(f.tower().into());
    rep.inputs.insert("series".into(), serde_json::to_value(&sl).expect("series"));
    let norm = f.gauss_norm();
    let pts = default_sample_points(f.tower(), f.nvars(), points);
    let sup = f.sup_sample(&pts)?;
    rep.outputs.insert("gauss_valuation".into(), val(norm));
    rep.outputs.insert("sampled_min_valuation".into(), val(sup));
    rep.certificates.insert("sample_points".into(), json!(pts.len()));
    rep.checks.insert("sampled_bound_holds".into(), sup >= norm);
    Ok(())
}

#[derive(Deserialize)]
struct WeierstrassInput {
    point: Vec<ElementLiteral>,
    series: Vec<SeriesLiteral>,
}

fn weierstrass(cli: &Cli, arg: &str, rep: &mut RunReport) -> Result<(), Failure> {
    let input: WeierstrassInput = parse_json(&inline_or_file(arg)?, "weierstrass input")?;
    let first = input
        .point
        .first()
        .ok_or_else(|| Error::Parse("point must have at least one coordinate".into()))?;
    let tw = cli.tower_of(first)?;
    let point = elements(&input.point, tw)?;
    let fs = input
        .series
        .iter()
        .map(|s| RestrictedSeries::from_literal(s, tw))
        .collect::<Result<Vec<_>, _>>()?;
    rep.tower = Some(tw.into());
    rep.inputs.insert("point".into(), lits(&point));
    let values = fs.iter().map(|f| f.evaluate(&point)).collect::<Result<Vec<_>, _>>()?;
    let member = weierstrass_member(&point, &fs)?;
    rep.outputs.insert("values".into(), lits(&values));
    rep.outputs.insert(
        "valuations".into(),
        Value::Array(values.iter().map(|v| val(v.valuation())).collect()),
    );
    rep.outputs.insert("member".into(), json!(member));
    rep.thresholds.insert("membership: valuation >=".into(), "0/1".into());
    Ok(())
}

/// Minimum over componentwise differences: the raw valuation and the
/// precision-certified one.
fn residual(a: &[Element], b: &[Element]) -> Result<(Valuation, num_rational::Rational64), Error> {
    let mut raw = Valuation::Infinite;
    let mut cert: Option<num_rational::Rational64> = None;
    for (x, y) in a.iter().zip(b) {
        let d = x.checked_sub(y)?;
        raw = raw.min(d.valuation());
        let c = d.certified_valuation();
        cert = Some(cert.map_or(c, |m| m.min(c)));
    }
    Ok((raw, cert.unwrap_or_else(|| num_rational::Rational64::from_integer(0))))
}

fn simpson(cli: &Cli, verb: SimpsonVerb, arg: &str, rep: &mut RunReport) -> Result<(), Failure> {
    let cfg = cli.correspondence()?;
    let tw = cfg.tower;
    rep.tower = Some(tw.into());
    let cert = cfg.validate()?;
    rep.certificates.insert("config".into(), serde_json::to_value(&cert).expect("certificate"));
    rep.thresholds.insert("alpha".into(), format_rational(cfg.alpha));
    rep.thresholds.insert("2*beta".into(), format_rational(cfg.two_beta()));
    rep.thresholds.insert("exp domain: valuation >".into(), format_rational(tw.exp_threshold()));
    let text = inline_or_file(arg)?;
    let record: Value = parse_json(&text, "input record")?;
    let is_pair = record.get("z").is_some() || record.get("theta").is_some();
    let as_pair = || -> Result<(PicLogPoint, HiggsDatum), Error> {
        let r: PairRecord = parse_json(&text, "pair record")?;
        Ok((PicLogPoint(elements(&r.z, tw)?), HiggsDatum(elements(&r.theta, tw)?)))
    };
    let as_rho = || -> Result<SmallCharacter, Error> {
        let r: CharacterRecord = parse_json(&text, "character record")?;
        Ok(SmallCharacter(elements(&r.rho, tw)?))
    };
    match verb {
        SimpsonVerb::Forward => {
            let (z, theta) = as_pair()?;
            rep.inputs.insert("z".into(), lits(&z.0));
            rep.inputs.insert("theta".into(), lits(&theta.0));
            rep.checks.insert("theta_small".into(), cfg.is_small_higgs(&theta));
            let rho = cfg.forward(&z, &theta)?;
            rep.checks.insert("rho_small".into(), cfg.is_small_character(&rho));
            rep.outputs.insert("rho".into(), lits(&rho.0));
        }
        SimpsonVerb::Inverse => {
            let rho = as_rho()?;
            rep.inputs.insert("rho".into(), lits(&rho.0));
            rep.checks.insert("rho_small".into(), cfg.is_small_character(&rho));
            let (z, theta) = cfg.inverse(&rho)?;
            rep.checks.insert("theta_small".into(), cfg.is_small_higgs(&theta));
            rep.outputs.insert("z".into(), lits(&z.0));
            rep.outputs.insert("theta".into(), lits(&theta.0));
        }
        SimpsonVerb::Roundtrip if is_pair => {
            let (z, theta) = as_pair()?;
            rep.inputs.insert("z".into(), lits(&z.0));
            rep.inputs.insert("theta".into(), lits(&theta.0));
            let rho = cfg.forward(&z, &theta)?;
            let (z2, t2) = cfg.inverse(&rho)?;
            rep.outputs.insert("rho".into(), lits(&rho.0));
            rep.outputs.insert("z".into(), lits(&z2.0));
            rep.outputs.insert("theta".into(), lits(&t2.0));
            let mut before = z.0.clone();
            before.extend(theta.0.iter().cloned());
            let mut after = z2.0;
            after.extend(t2.0);
            record_residual(rep, &before, &after)?;
        }
        SimpsonVerb::Roundtrip => {
            let rho = as_rho()?;
            rep.inputs.insert("rho".into(), lits(&rho.0));
            let (z, theta) = cfg.inverse(&rho)?;
            let back = cfg.forward(&z, &theta)?;
            rep.outputs.insert("z".into(), lits(&z.0));
            rep.outputs.insert("theta".into(), lits(&theta.0));
            rep.outputs.insert("rho".into(), lits(&back.0));
            record_residual(rep, &rho.0, &back.0)?;
        }
    }
    Ok(())
}

fn record_residual(rep: &mut RunReport, a: &[Element], b: &[Element]) -> Result<(), Error> {
    let (raw, cert) = residual(a, b)?;
    rep.outputs.insert("residual_valuation".into(), val(raw));
    rep.certificates.insert("residual_certified".into(), rat(cert));
    Ok(())
}

fn lemma_suite(cli: &Cli, samples: usize, break_isometry: bool, rep: &mut RunReport) -> Result<(), Failure> {
    let opts = SuiteOptions {
        seed: cli.seed,
        samples,
        prec: cli.prec.unwrap_or(DEFAULT_PREC),
        break_isometry,
    };
    rep.inputs.insert("options".into(), serde_json::to_value(opts).expect("options"));
    let report = suite::run(opts);
    for (name, check) in &report.checks {
        rep.checks.insert(name.clone(), check.passed);
    }
    rep.outputs.insert("suite".into(), serde_json::to_value(&report).expect("report"));
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: &Cli, rep: &mut RunReport) -> Result<(), Failure> {
    match &cli.command {
        Command::Eval { kind, element, stages } => eval(cli, *kind, element, *stages, rep),
        Command::Classify { kind, v } => classify_cmd(cli, *kind, v, rep),
        Command::Gauss { series, points } => gauss(cli, series, *points, rep),
        Command::Weierstrass { input } => weierstrass(cli, input, rep),
        Command::Simpson { verb, input } => simpson(cli, *verb, input, rep),
        Command::LemmaSuite { samples, break_isometry } => lemma_suite(cli, *samples, *break_isometry, rep),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rep = RunReport {
        command: std::env::args().skip(1).collect(),
        seed: cli.seed,
        ..RunReport::default()
    };
    let code = match run(&cli, &mut rep) {
        Ok(()) => 0,
        Err(Failure::Check) => {
            eprintln!("error: property check failed");
            1
        }
        Err(Failure::Lib(e)) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            rep.error = Some(ErrorEcho {
                kind: e.kind(),
                message: e.to_string(),
                exit_code: code,
            });
            code
        }
    };
    let text = serde_json::to_string_pretty(&rep).expect("report serializes");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
