use serde_json::Value;

use padic_demo::{boundary_table, evaluate, term_curve};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn term_curve_matches_closed_form() {
    let r = parse(term_curve("binom", 3, "2", 5));
    assert_eq!(r["verdict"], "CONVERGES");
    // k·(v - 3/2) + S_3(k)/2
    let want = ["1/1", "2/1", "2/1", "3/1", "4/1"];
    for (t, w) in r["terms"].as_array().unwrap().iter().zip(want) {
        assert_eq!(t["valuation"], w);
    }
    assert_eq!(parse(term_curve("exp", 2, "1", 3))["verdict"], "DIVERGES");
}

#[test]
fn table_rows_and_boundaries() {
    let r = parse(boundary_table(3, 2));
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let row = |v: &str| rows.iter().find(|x| x["v"] == v).unwrap().clone();
    assert_eq!(row("1/2")["exp"], "DIVERGES");
    assert_eq!(row("1/1")["exp"], "CONVERGES");
    assert_eq!(row("3/2")["binom"], "DIVERGES");
    assert_eq!(row("2/1")["binom"], "CONVERGES");
    assert_eq!(row("1/2")["log"], "CONVERGES");
    assert_eq!(row("0/1")["log"], "DIVERGES");
}

#[test]
fn evaluate_reports_values_and_errors() {
    let r = parse(evaluate("exp", 5, 1, 1, 3, "5"));
    assert_eq!(r["value"]["coeffs"][0], "81*5^0");
    let r = parse(evaluate("exp", 2, 1, 1, 10, "2"));
    assert_eq!(r["error"]["kind"], "DomainError");
    let r = parse(evaluate("stage1", 3, 5, 1, 10, "pi^2"));
    assert_eq!(r["error"]["kind"], "RootDomainError");
    assert_eq!(parse(evaluate("exp", 4, 1, 1, 10, "2"))["error"]["kind"], "InvalidTower");
    assert_eq!(parse(evaluate("cosh", 5, 1, 1, 10, "5"))["error"]["kind"], "ParseError");
    assert!(parse(term_curve("exp", 1001, "1", 3))["error"].is_object());
}
