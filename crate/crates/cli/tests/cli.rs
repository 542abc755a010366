use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn padic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("padic-cli-{}-{name}", std::process::id()))
}

/// `s*p^v` with `v >= 0` reduced modulo `m`.
fn coeff_mod(c: &str, m: u128) -> u128 {
    let (s, pv) = c.split_once('*').unwrap();
    let (p, v) = pv.split_once('^').unwrap();
    let s: i128 = s.parse().unwrap();
    let p: i128 = p.parse().unwrap();
    let v: u32 = v.parse().unwrap();
    (s * p.pow(v)).rem_euclid(m as i128) as u128
}

fn literal(p: u32, prec: u32, coeff: &str) -> String {
    format!(r#"{{"p":{p},"e":1,"u":1,"prec":"{prec}/1","coeffs":["{coeff}"]}}"#)
}

#[test]
fn eval_exp_of_five() {
    let out = padic(&["eval", "exp", "--p", "5", "--prec", "10", "5*5^0"]);
    assert!(out.status.success());
    let r = report(&out);
    let c = r["outputs"]["value"]["coeffs"][0].as_str().unwrap();
    // 1 + 5 + 25/2 + 125/6 ≡ 81 mod 125
    assert_eq!(coeff_mod(c, 125), 81);
    assert_eq!(r["certificates"]["absolute_precision"], "10/1");
    assert_eq!(r["thresholds"]["exp domain: valuation >"], "1/4");
}

#[test]
fn eval_log_of_minus_one() {
    let out = padic(&["eval", "log", "--p", "2", "--prec", "60", "-1*2^0"]);
    assert!(out.status.success());
    let r = report(&out);
    let cert = r["certificates"]["certified_valuation"].as_str().unwrap();
    let (n, d) = cert.split_once('/').unwrap();
    assert!(n.parse::<i64>().unwrap() >= 55 * d.parse::<i64>().unwrap());
}

#[test]
fn eval_accepts_json_literals() {
    let out = padic(&["eval", "root", &literal(3, 10, "1*3^2")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["tower"]["p"], 3);
}

#[test]
fn eval_domain_error_exits_3() {
    let out = padic(&["eval", "exp", "--p", "2", "2*2^0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["error"]["kind"], "DomainError");
    let out = padic(&["eval", "stage1", "--p", "3", "--e", "5", "--prec", "10", "pi^2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["error"]["kind"], "RootDomainError");
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(padic(&["eval", "exp", "--p", "5", "5*7^1"]).status.code(), Some(2));
    assert_eq!(padic(&["eval", "exp", "5*5^0"]).status.code(), Some(2));
    assert_eq!(padic(&["classify", "exp", "--p", "3", "--v", "x"]).status.code(), Some(2));
    assert_eq!(padic(&["eval", "sqrt", "--p", "3", "1"]).status.code(), Some(2));
}

#[test]
fn classify_examples() {
    for (kind, p, v, verdict) in [
        ("binom", "3", "3/2", "DIVERGES"),
        ("binom", "3", "8/5", "CONVERGES"),
        ("exp", "3", "1", "CONVERGES"),
        ("exp", "2", "1", "DIVERGES"),
        ("log", "7", "1/7", "CONVERGES"),
        ("log", "7", "-1/7", "DIVERGES"),
    ] {
        let out = padic(&["classify", kind, "--p", p, "--v", v]);
        assert!(out.status.success());
        let r = report(&out);
        assert_eq!(r["outputs"]["verdict"], verdict, "{kind} {p} {v}");
        assert_eq!(r["outputs"]["term_valuations"].as_array().unwrap().len(), 20);
    }
    let r = report(&padic(&["classify", "binom", "--p", "3", "--v", "2"]));
    // k = 2: 2·(2 - 3/2) + 2/2
    assert_eq!(r["outputs"]["term_valuations"][1], "2/1");
    assert_eq!(r["thresholds"]["binom domain: valuation >"], "3/2");
}

#[test]
fn gauss_and_weierstrass() {
    let one = literal(2, 20, "1*2^0");
    let minus = literal(2, 20, "-1*2^0");
    let f = format!(r#"{{"nvars":1,"terms":[{{"exp":[2],"coeff":{one}}},{{"exp":[1],"coeff":{minus}}}]}}"#);
    let r = report(&padic(&["gauss", &f]));
    assert_eq!(r["outputs"]["gauss_valuation"], "0/1");
    assert_eq!(r["checks"]["sampled_bound_holds"], true);

    let half = literal(2, 20, "1*2^-1");
    let g = format!(r#"{{"nvars":1,"terms":[{{"exp":[1],"coeff":{half}}}]}}"#);
    let inside = format!(r#"{{"point":[{}],"series":[{g}]}}"#, literal(2, 20, "1*2^1"));
    assert_eq!(report(&padic(&["weierstrass", &inside]))["outputs"]["member"], true);
    let outside = format!(r#"{{"point":[{one}],"series":[{g}]}}"#);
    assert_eq!(report(&padic(&["weierstrass", &outside]))["outputs"]["member"], false);
    let off_ball = format!(r#"{{"point":[{half}],"series":[{g}]}}"#);
    assert_eq!(padic(&["weierstrass", &off_ball]).status.code(), Some(3));
}

#[test]
fn simpson_forward_example() {
    let out = padic(&[
        "simpson",
        "forward",
        "--config",
        &data("p5_default.cfg"),
        "--input",
        &data("p5_pair.json"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let rho = r["outputs"]["rho"].as_array().unwrap();
    // 1 + 25 + 625/2 ≡ 26 mod 5^4
    assert_eq!(coeff_mod(rho[0]["coeffs"][0].as_str().unwrap(), 625), 26);
    assert_eq!(rho[1]["coeffs"][0], "1*5^0");
    assert_eq!(r["certificates"]["config"]["det_valuation"], "0/1");
}

#[test]
fn simpson_roundtrip_of_zero() {
    let zero = literal(5, 20, "0*5^0");
    let input = format!(r#"{{"z":[{zero}],"theta":[{zero}]}}"#);
    let out = padic(&["simpson", "roundtrip", "--p", "5", "--input", &input]);
    assert!(out.status.success());
    assert_eq!(report(&out)["outputs"]["residual_valuation"], "INFINITE");

    let rho = format!(r#"{{"rho":[{},{}]}}"#, literal(5, 20, "26*5^0"), literal(5, 20, "1*5^0"));
    let out = padic(&["simpson", "roundtrip", "--p", "5", "--input", &rho]);
    assert!(out.status.success());
    let cert = report(&out)["certificates"]["residual_certified"].as_str().unwrap().to_string();
    assert!(cert.split_once('/').unwrap().0.parse::<i64>().unwrap() >= 12);
}

#[test]
fn simpson_validation_errors_exit_4() {
    let rho = format!(r#"{{"rho":[{},{}]}}"#, literal(5, 20, "6*5^0"), literal(5, 20, "1*5^0"));
    let out = padic(&["simpson", "inverse", "--p", "5", "--input", &rho]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(report(&out)["error"]["kind"], "SmallnessViolation");

    let cfg = temp_path("singular.cfg");
    std::fs::write(&cfg, "p = 5\nl_matrix = [\"0\", \"0\"]\n").unwrap();
    let zero = literal(5, 20, "0*5^0");
    let input = format!(r#"{{"z":[{zero}],"theta":[{zero}]}}"#);
    let out = padic(&["simpson", "forward", "--config", cfg.to_str().unwrap(), "--input", &input]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(report(&out)["error"]["kind"], "SingularConfig");
    std::fs::remove_file(cfg).ok();
}

#[test]
fn lemma_suite_is_deterministic() {
    let path = temp_path("suite.json");
    let args = ["lemma-suite", "--seed", "1", "--samples", "5", "--json", path.to_str().unwrap()];
    let a = padic(&args);
    let b = padic(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let r = report(&a);
    assert!(r["checks"].as_object().unwrap().len() >= 12);
    assert!(r["checks"].as_object().unwrap().values().all(|v| v == true));
    assert_eq!(r["seed"], 1);
    std::fs::remove_file(path).ok();
}

#[test]
fn lemma_suite_fault_injection() {
    let out = padic(&["lemma-suite", "--samples", "3", "--break-isometry"]);
    assert!(!out.status.success());
    let r = report(&out);
    assert_eq!(r["checks"]["log_isometry"], false);
    assert!(r["outputs"]["suite"]["checks"]["log_isometry"]["counterexample"].is_string());
}
