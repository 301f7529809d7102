use std::process::Command;

use proptest::prelude::*;

use wittlab::fields::{parse_element, parse_tower, ValuationSpec};
use wittlab::forms::{Certificate, PfisterSum, Status};
use wittlab::scenarios::{
    enumerate_cases, parse, parse_form, parse_involution, run_example1, run_example1_control,
    run_example2, K0Choice, Report, WittRelation,
};
use wittlab::Error;

fn all_reports() -> Vec<Report> {
    vec![
        run_example1(K0Choice::Qb).unwrap(),
        run_example1(K0Choice::Lbc).unwrap(),
        run_example1_control().unwrap(),
        run_example2().unwrap(),
    ]
}

#[test]
fn reports_are_deterministic() {
    let a: Vec<String> = all_reports().iter().map(Report::to_json).collect();
    let b: Vec<String> = all_reports().iter().map(Report::to_json).collect();
    assert_eq!(a, b);
}

#[test]
fn refutations_are_accounted_for() {
    for r in all_reports() {
        for s in &r.steps {
            if s.verdict.status != Status::Refuted {
                continue;
            }
            let certified = !matches!(s.verdict.certificate, Certificate::None);
            let cited = s.verdict.obligations.iter().all(|o| o.citation.is_some());
            assert!(certified, "{}: {} has no certificate", r.scenario, s.op);
            assert!(cited, "{}: {} has an uncited obligation", r.scenario, s.op);
        }
        // every open obligation in a refutation is one of the declared assumptions' citations
        for a in &r.assumptions {
            assert!(!a.citation.is_empty());
        }
    }
}

#[test]
fn report_schema() {
    let r = run_example1(K0Choice::Qb).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["scenario"], "example1");
    assert_eq!(v["final"], "Refuted modulo [STW Rem. 5.4]");
    let steps = v["steps"].as_array().unwrap();
    let ops: Vec<&str> = steps.iter().map(|s| s["op"].as_str().unwrap()).collect();
    assert_eq!(
        ops,
        ["conic_identities", "is_split", "iso_generic", "iso_base"]
    );
    for s in steps {
        assert!(s["inputs"].is_array());
        assert!(s["verdict"]["status"].is_string());
        assert!(s["verdict"]["certificate"].is_object());
        for o in s["verdict"]["obligations"].as_array().unwrap() {
            assert!(o["statement"].is_string());
            assert!(o.get("citation").is_some());
        }
    }
}

#[test]
fn second_example_relation_cases() {
    let k = parse_tower("Q.rat(b).laurent(a).laurent(t).laurent(u)").unwrap();
    let e = |s: &str| parse_element(s, &k).unwrap();
    let f = |s: &str| parse_form(s, &k).unwrap();
    let phi = f("pf(b+1) + t*pf(b+4) + u*pf((b+1)*(b+4))");
    let phi2 = f("pf(b+1) + 2*t*pf(b+4) + ((2-b)/(b+4))*u*pf((b+1)*(b+4))");
    let rel = WittRelation {
        fixed: phi2.times_pfister(&e("a")).unwrap(),
        scaled: phi.times_pfister(&e("a")).unwrap(),
        slots: vec![e("a"), e("b")],
        substitution: Some(e("a")),
    };
    let chain: Vec<ValuationSpec> = ["u", "t", "a"]
        .iter()
        .map(|v| ValuationSpec::new(v))
        .collect();
    let cases = enumerate_cases(&rel, &chain).unwrap();
    assert_eq!(cases.len(), 4);
    let all: Vec<String> = cases.iter().flat_map(|c| c.statements()).collect();
    assert!(all.contains(&"b+1 ∈ k₀(√b)^{×2}".to_string()), "{all:?}");
    assert!(all.contains(&"b+4 ∈ k₀(√b)^{×2}".to_string()), "{all:?}");
}

#[test]
fn parser_examples() {
    let k = parse_tower("Q.rat(b).rat(c).laurent(a).laurent(t)").unwrap();
    let p = parse_form("pf(a,b+1) + t*pf(a,b+c^2)", &k).unwrap();
    let e = |s: &str| parse_element(s, &k).unwrap();
    let want = PfisterSum::term(&k.one(), &[e("a"), e("b+1")])
        .unwrap()
        .add(&PfisterSum::term(&e("t"), &[e("a"), e("b+c^2")]).unwrap())
        .unwrap();
    assert_eq!(p, want);
    assert_eq!(parse_form("<1>", &k).unwrap().to_string(), "<1>");
    assert!(matches!(parse_form("pf()", &k), Err(Error::Syntax { .. })));
    assert!(matches!(
        parse_form("<1,q>", &k),
        Err(Error::UnknownSymbol(_))
    ));
}

// ---- parser roundtrip -------------------------------------------------------

const ELEMS: [&str; 8] = [
    "1",
    "-3",
    "b+1",
    "2*t",
    "(b+1)/(b+4)",
    "c^2+b",
    "a*t",
    "-b/2",
];

fn term_text() -> impl Strategy<Value = String> {
    (
        0usize..8,
        prop::collection::vec(0usize..8, 0..3),
        prop::bool::ANY,
    )
        .prop_map(|(sc, slots, diag)| {
            let slot_text: Vec<&str> = slots.iter().map(|&i| ELEMS[i]).collect();
            if slots.is_empty() || diag {
                format!("<{},{}>", ELEMS[sc], ELEMS[(sc + 3) % 8])
            } else {
                format!("({})*pf({})", ELEMS[sc], slot_text.join(","))
            }
        })
}

fn expr_text() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::collection::vec(term_text(), 1..4).prop_map(|ts| ts.join(" + ")),
        (0usize..8, 0usize..8).prop_map(|(i, j)| format!(
            "({})*({}) - {}",
            ELEMS[i],
            ELEMS[j],
            ELEMS[(i + j) % 8]
        )),
        term_text().prop_map(|t| format!("inv(quat(a,b), rho=a, phi={t})")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn print_parse_print(s in expr_text()) {
        let k = parse_tower("Q.rat(b).rat(c).laurent(a).laurent(t)").unwrap();
        let once = parse(&s, &k).unwrap().to_string();
        let twice = parse(&once, &k).unwrap().to_string();
        prop_assert_eq!(&once, &twice);
        if s.starts_with("inv(") {
            prop_assert_eq!(parse_involution(&once, &k).unwrap(), parse_involution(&s, &k).unwrap());
        }
    }
}

// ---- the command line -------------------------------------------------------

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wittlab"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn cli_scenarios_and_json() {
    let dir = std::env::temp_dir().join(format!("wittlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ex1.json");
    let (code, out, _) = cli(&[
        "scenario",
        "example1",
        "--k0",
        "Qb",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("final: Refuted modulo [STW Rem. 5.4]"));
    let json = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        json.trim_end(),
        run_example1(K0Choice::Qb).unwrap().to_json()
    );
    let (code, out, _) = cli(&["scenario", "example2"]);
    assert_eq!(code, 0);
    assert!(out.contains("b+1 ∈ k₀(√b)^{×2}"));
    let (code, out, _) = cli(&["scenario", "example1", "--control"]);
    assert_eq!(code, 0);
    assert!(out.contains("final: Proved with nu = 1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cli_eval_and_check() {
    let (code, out, _) = cli(&["eval", "--field", "Q.rat(b).rat(a).conic(a,b)", "Y^2"]);
    assert_eq!((code, out.trim()), (0, "(b*a+X^2)/a"));
    let (code, out, _) = cli(&[
        "eval",
        "--field",
        "Q.rat(b).laurent(a).laurent(t)",
        "pf(a,b+1) + t*pf(a,b+4)",
    ]);
    assert_eq!((code, out.trim()), (0, "pf(a,b+1) + t*pf(a,b+4)"));
    let (code, out, _) = cli(&[
        "check",
        "--field",
        "F(3)",
        "--op",
        "is_isotropic",
        "--args",
        "<1,1>",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"Refuted\""));
    let (code, out, _) = cli(&[
        "check",
        "--field",
        "F(7)",
        "--op",
        "square_class",
        "--args",
        "2",
    ]);
    assert_eq!((code, out.trim()), (0, "1"));
    let (code, out, _) = cli(&[
        "check",
        "--field",
        "Q.rat(b).laurent(a)",
        "--op",
        "valuation",
        "--args",
        "b*a^-3",
        "a",
    ]);
    assert_eq!((code, out.trim()), (0, "-3"));
}

#[test]
fn cli_errors_and_open_obligations() {
    let (code, _, err) = cli(&["eval", "--field", "Q", "1+"]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));
    let (code, _, _) = cli(&["check", "--field", "Q", "--op", "nope", "--args", "1"]);
    assert_eq!(code, 1);
    let (code, _, _) = cli(&["scenario", "example1", "--k0", "Zz"]);
    assert_eq!(code, 1);
    // an iso_base question with no residue structure to exploit stays open
    let (code, out, _) = cli(&[
        "check",
        "--field",
        "Q.rat(b).laurent(a)",
        "--op",
        "iso_base",
        "--args",
        "inv(quat(a,b), rho=a, phi=<1>)",
        "inv(quat(a,b), rho=a, phi=<b>)",
    ]);
    assert_eq!(code, 2, "{out}");
}
