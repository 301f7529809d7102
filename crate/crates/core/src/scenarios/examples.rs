//! The two worked examples as executable pipelines.
//!
//! Example 1: over `k = k₀((a))((t))`, `Q = (a,b)`,
//! `φ = ⟨⟨b+1⟩⟩ ⊥ ⟨t⟩⟨⟨b+c²⟩⟩` and `φ′ = ⟨⟨b+1⟩⟩ ⊥ ⟨ct⟩⟨⟨b+c²⟩⟩`.
//! Example 2 adds `⟨u⟩⟨⟨(b+1)(b+c²)⟩⟩` (resp. `⟨c′u⟩…`) over `k((u))`.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fields::squares::is_square;
use crate::fields::{parse_tower, Element, Tower};
use crate::forms::{Certificate, PfisterSum, Status, Verdict};
use crate::hermitian::{
    e1_invariant, e2_trivial, is_split, iso_base_analysis, iso_generic, CvpAssumption,
    InvolutionPresentation, QuaternionAlgebra,
};

use super::report::{Assumption, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K0Choice {
    /// `k₀ = ℚ(b)`, `c = 2`.
    Qb,
    /// `k₀ = ℚ(b,c)` with `c` an indeterminate.
    Lbc,
}

impl K0Choice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Qb" => Ok(K0Choice::Qb),
            "lbc" => Ok(K0Choice::Lbc),
            _ => Err(Error::InvalidArgument(format!(
                "unknown k0 choice `{s}` (Qb or lbc)"
            ))),
        }
    }
}

struct Setup {
    k0: Tower,
    k: Tower,
    /// `c` in `k₀`.
    c: Element,
    cvp: Option<CvpAssumption>,
}

fn setup(choice: K0Choice, control: bool) -> Result<Setup> {
    let (k0, c, cite) = match choice {
        K0Choice::Qb => {
            let k0 = parse_tower("Q.rat(b)")?;
            let c = if control { k0.one() } else { k0.int(2) };
            (k0, c, "[STW Rem. 5.4]")
        }
        K0Choice::Lbc => {
            let k0 = parse_tower("Q.rat(b).rat(c)")?;
            let c = if control {
                k0.one()
            } else {
                Element::var(&k0, "c")?
            };
            (k0, c, "[STW Rem. 5.10]")
        }
    };
    let k = k0.laurent("a")?.laurent("t")?;
    let cvp = if control {
        None
    } else {
        Some(CvpAssumption::new(&Element::var(&k0, "b")?, &c, cite)?)
    };
    Ok(Setup { k0, k, c, cvp })
}

fn up(e: &Element, t: &Tower) -> Result<Element> {
    crate::fields::embed(e, t)
}

fn var(t: &Tower, n: &str) -> Element {
    Element::var(t, n).expect("variable of the scenario tower")
}

/// `X² − a(Y+m)² + a(b+m²) = −2amY` over the conic field, exactly.
fn conic_identity(fq: &Tower, m: &Element) -> Result<(bool, String)> {
    let (x, y, a, b) = (var(fq, "X"), var(fq, "Y"), var(fq, "a"), var(fq, "b"));
    let m = up(m, fq)?;
    let lhs = &(&x.square() - &(&a * &(&y + &m).square())) + &(&a * &(&b + &m.square()));
    let rhs = &(&(&fq.int(-2) * &a) * &m) * &y;
    let ok = (&lhs - &rhs).is_zero();
    Ok((ok, format!("X^2-a*(Y+{m})^2+a*(b+{}) = {rhs}", m.square())))
}

fn identities_step(report: &mut Report, k: &Tower, c: &Element) -> Result<()> {
    let fq = k.conic(&var(k, "a"), &var(k, "b"))?;
    let mut steps = Vec::new();
    let mut ok = true;
    for m in [fq.one(), up(c, &fq)?] {
        let (good, text) = conic_identity(&fq, &m)?;
        ok &= good;
        steps.push(format!(
            "{text}: {}",
            if good {
                "exact zero difference"
            } else {
                "FAILS"
            }
        ));
    }
    let v = if ok {
        Verdict::proved(Certificate::Chain { steps })
    } else {
        Verdict::refuted(Certificate::Chain { steps })
    };
    report.push("conic_identities", vec![format!("{fq}")], v);
    Ok(())
}

fn presentations(
    k: &Tower,
    phi: &PfisterSum,
    phi2: &PfisterSum,
) -> Result<(
    QuaternionAlgebra,
    InvolutionPresentation,
    InvolutionPresentation,
)> {
    let q = QuaternionAlgebra::new(&var(k, "a"), &var(k, "b"))?;
    let s = InvolutionPresentation::new(&q, &var(k, "a"), phi)?;
    let s2 = InvolutionPresentation::new(&q, &var(k, "a"), phi2)?;
    Ok((q, s, s2))
}

fn generic_and_base(
    report: &mut Report,
    q: &QuaternionAlgebra,
    s: &InvolutionPresentation,
    s2: &InvolutionPresentation,
    cvp: &Option<CvpAssumption>,
) -> Result<()> {
    report.push("is_split", vec![q.to_string()], is_split(q)?);
    let fq = q.conic_field()?;
    let lambda = &(&fq.int(-2) * &var(&fq, "a")) * &var(&fq, "Y");
    let g = iso_generic(s, s2, &lambda, &fq)?;
    let g_ok = g.is_proved();
    report.push(
        "iso_generic",
        vec![s.to_string(), s2.to_string(), format!("lambda = {lambda}")],
        g,
    );
    if g_ok {
        report.claims.push(format!(
            "sigma_F(Q) ≅ sigma'_F(Q): Proved with lambda = {lambda}"
        ));
    }
    let assumptions: Vec<CvpAssumption> = cvp.iter().cloned().collect();
    for a in &assumptions {
        report.assumptions.push(Assumption {
            statement: a.statement(),
            citation: a.citation.clone(),
        });
    }
    let base = iso_base_analysis(s, s2, &assumptions)?;
    let v = base.verdict.clone();
    report.push(
        "iso_base",
        vec![s.to_string(), s2.to_string()],
        base.verdict,
    );
    report.final_status = match v.status {
        Status::Refuted => {
            let cites: Vec<String> = assumptions.iter().map(|a| a.citation.clone()).collect();
            report
                .claims
                .push(format!("sigma ≇ sigma' assuming {}", cites.join(", ")));
            format!("Refuted modulo {}", cites.join(", "))
        }
        Status::Proved => {
            let nu = match &v.certificate {
                Certificate::Scalar { value, .. } => value.clone(),
                _ => "?".into(),
            };
            report.claims.push(format!("sigma ≅ sigma' with nu = {nu}"));
            format!("Proved with nu = {nu}")
        }
        Status::Reduced => format!("Reduced: {} obligations open", v.obligations.len()),
    };
    Ok(())
}

fn example1_forms(k: &Tower, c: &Element) -> Result<(PfisterSum, PfisterSum)> {
    let b = var(k, "b");
    let t = var(k, "t");
    let c = up(c, k)?;
    let x1 = &b + &k.one();
    let x2 = &b + &c.square();
    let one = PfisterSum::term(&k.one(), &[x1])?;
    let phi = one.add(&PfisterSum::term(&t, std::slice::from_ref(&x2))?)?;
    let phi2 = one.add(&PfisterSum::term(&(&c * &t), &[x2])?)?;
    Ok((phi, phi2))
}

pub fn run_example1(choice: K0Choice) -> Result<Report> {
    timed(|| example1(choice, false))
}

/// Example 1 with `c = 1`, so that `φ′ = φ`.
pub fn run_example1_control() -> Result<Report> {
    timed(|| example1(K0Choice::Qb, true))
}

pub fn run_example2() -> Result<Report> {
    timed(example2)
}

fn timed(f: impl FnOnce() -> Result<Report>) -> Result<Report> {
    let start = Instant::now();
    let mut r = f()?;
    r.elapsed = Some(start.elapsed());
    Ok(r)
}

fn example1(choice: K0Choice, control: bool) -> Result<Report> {
    let st = setup(choice, control)?;
    let name = if control {
        "example1-control"
    } else {
        "example1"
    };
    let mut report = Report::new(name, &st.k.to_string());
    identities_step(&mut report, &st.k, &st.c)?;
    let (phi, phi2) = example1_forms(&st.k, &st.c)?;
    let (q, s, s2) = presentations(&st.k, &phi, &phi2)?;
    generic_and_base(&mut report, &q, &s, &s2, &st.cvp)?;
    Ok(report)
}

fn trivial_class_verdict(what: &str, items: &[(String, bool)]) -> Verdict {
    let steps: Vec<String> = items
        .iter()
        .map(|(n, t)| format!("{what}({n}) {}", if *t { "trivial" } else { "nontrivial" }))
        .collect();
    if items.iter().all(|(_, t)| *t) {
        Verdict::proved(Certificate::Chain { steps })
    } else {
        Verdict::refuted(Certificate::Invariants {
            detail: steps.join("; "),
        })
    }
}

fn combine_e2(items: &[(String, Verdict)]) -> Verdict {
    if items.iter().all(|(_, v)| v.is_proved()) {
        return Verdict::proved(Certificate::Chain {
            steps: items
                .iter()
                .map(|(n, v)| {
                    format!(
                        "e2({n}) trivial: {}",
                        serde_json::to_string(&v.certificate).unwrap_or_default()
                    )
                })
                .collect(),
        });
    }
    if let Some((n, v)) = items.iter().find(|(_, v)| v.is_refuted()) {
        return Verdict::refuted(Certificate::Chain {
            steps: vec![format!(
                "e2({n}) nontrivial modulo the algebra: {}",
                serde_json::to_string(&v.certificate).unwrap_or_default()
            )],
        });
    }
    Verdict::reduced(
        items
            .iter()
            .flat_map(|(_, v)| v.obligations.clone())
            .collect(),
    )
}

fn example2() -> Result<Report> {
    let st = setup(K0Choice::Qb, false)?;
    let k0 = &st.k0;
    let b0 = var(k0, "b");
    let c0 = st.c.clone();
    let x1 = &b0 + &k0.one();
    let x2 = &b0 + &c0.square();
    let p0 = &x1 * &x2;
    let c_prime = &k0.one() - &(&x1 * &c0).div(&x2)?;
    let k1 = st.k.laurent("u")?;
    let mut report = Report::new("example2", &k1.to_string());

    // c' ≠ 0, and c' = 0 would force c to be a square
    let c_sq = is_square(&c0)?;
    let nonzero = !c_prime.is_zero();
    let steps = vec![
        format!("c' = 1-(b+1)*{c0}/({x2}) = {c_prime}"),
        format!("c' = 0 would give <<a,{p0}>> = <<a,{c0}>> hyperbolic, so {c0} ∈ k₀^{{×2}}"),
        format!("{c0} ∈ k₀^{{×2}}: {c_sq}"),
    ];
    let v = if nonzero && !c_sq {
        Verdict::proved(Certificate::Chain { steps })
    } else {
        Verdict::refuted(Certificate::Chain { steps })
    };
    report.push("c_prime_nonzero", vec![c_prime.to_string()], v);

    identities_step(&mut report, &st.k, &st.c)?;

    // summed identity over F(Q): <<a,(b+1)(b+c^2)>> represents -2aYc'
    let fq = st.k.conic(&var(&st.k, "a"), &var(&st.k, "b"))?;
    let (x, y, a) = (var(&fq, "X"), var(&fq, "Y"), var(&fq, "a"));
    let (x1f, x2f, cf, cpf) = (
        up(&x1, &fq)?,
        up(&x2, &fq)?,
        up(&c0, &fq)?,
        up(&c_prime, &fq)?,
    );
    let e1_lhs = &x.square() - &(&a * &(&y + &fq.one()).square());
    let e1_rhs = &(&(&fq.int(-2) * &a) * &y) - &(&a * &x1f);
    let inner = &x.div(&x2f)?.square() - &(&a * &(&y + &cf).div(&x2f)?.square());
    let e2_lhs = &(-&(&x1f * &x2f)) * &inner;
    let e2_rhs = &(-&x1f) * &(&(&(&fq.int(-2) * &a) * &(&cf * &y)).div(&x2f)? - &a);
    let target = &(&(&fq.int(-2) * &a) * &y) * &cpf;
    let pf = crate::forms::pfister(&fq, &[a.clone(), &x1f * &x2f])?;
    let vec = [
        x.clone(),
        &y + &fq.one(),
        x.div(&x2f)?,
        (&y + &cf).div(&x2f)?,
    ];
    let checks = [
        (
            "X^2-a*(Y+1)^2 = -2*a*Y-a*(b+1)",
            (&e1_lhs - &e1_rhs).is_zero(),
        ),
        (
            "-(b+1)(b+c^2)((X/(b+c^2))^2-a((Y+c)/(b+c^2))^2) = -(b+1)(-2acY/(b+c^2)-a)",
            (&e2_lhs - &e2_rhs).is_zero(),
        ),
        (
            "sum of right-hand sides = -2*a*Y*c'",
            (&(&e1_rhs + &e2_rhs) - &target).is_zero(),
        ),
        (
            "value of <<a,(b+1)(b+c^2)>> at (X,Y+1,X/(b+c^2),(Y+c)/(b+c^2)) = -2*a*Y*c'",
            (&pf.eval(&vec) - &target).is_zero(),
        ),
    ];
    let steps: Vec<String> = checks
        .iter()
        .map(|(s, ok)| format!("{s}: {}", if *ok { "exact" } else { "FAILS" }))
        .collect();
    let v = if checks.iter().all(|(_, ok)| *ok) {
        Verdict::proved(Certificate::Chain { steps })
    } else {
        Verdict::refuted(Certificate::Chain { steps })
    };
    report.push("summed_identity", vec![format!("{target}")], v);

    let (t, u) = (var(&k1, "t"), var(&k1, "u"));
    let c1 = up(&c0, &k1)?;
    let (y1, y2, p) = (up(&x1, &k1)?, up(&x2, &k1)?, up(&p0, &k1)?);
    let one = PfisterSum::term(&k1.one(), &[y1])?;
    let psi = one
        .add(&PfisterSum::term(&t, std::slice::from_ref(&y2))?)?
        .add(&PfisterSum::term(&u, std::slice::from_ref(&p))?)?;
    let psi2 = one
        .add(&PfisterSum::term(&(&c1 * &t), &[y2])?)?
        .add(&PfisterSum::term(&(&up(&c_prime, &k1)? * &u), &[p])?)?;
    let (q, s, s2) = presentations(&k1, &psi, &psi2)?;

    generic_and_base(&mut report, &q, &s, &s2, &st.cvp)?;
    let e1s = [
        ("tau".to_string(), e1_invariant(&s)?.is_trivial()),
        ("tau'".to_string(), e1_invariant(&s2)?.is_trivial()),
    ];
    report.push(
        "e1_invariant",
        vec![s.to_string(), s2.to_string()],
        trivial_class_verdict("e1", &e1s),
    );
    let e2s = [
        ("tau".to_string(), e2_trivial(&s)?),
        ("tau'".to_string(), e2_trivial(&s2)?),
    ];
    report.push(
        "e2_invariant",
        vec![s.to_string(), s2.to_string()],
        combine_e2(&e2s),
    );

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obligations(r: &Report, op: &str) -> Vec<String> {
        r.step(op)
            .unwrap()
            .verdict
            .obligations
            .iter()
            .map(|o| o.statement.clone())
            .collect()
    }

    #[test]
    fn example1_qb() {
        let r = run_example1(K0Choice::Qb).unwrap();
        assert_eq!(r.final_status, "Refuted modulo [STW Rem. 5.4]");
        assert!(r.step("iso_generic").unwrap().verdict.is_proved());
        assert!(r
            .claims
            .iter()
            .any(|c| c == "sigma ≇ sigma' assuming [STW Rem. 5.4]"));
        let obs = obligations(&r, "iso_base");
        assert_eq!(
            &obs[1..],
            [
                "nu0 ∈ D_{k₀(√b)}(<<b+1>>)",
                "2*nu0 ∈ D_{k₀(√b)}(<<b+4>>)",
                "b+1 ≡ b+4 mod k₀(√b)^{×2}"
            ]
        );
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn example1_with_c_indeterminate() {
        let r = run_example1(K0Choice::Lbc).unwrap();
        assert_eq!(r.final_status, "Refuted modulo [STW Rem. 5.10]");
        assert!(r.step("iso_generic").unwrap().verdict.is_proved());
        let obs = obligations(&r, "iso_base");
        assert!(
            obs.contains(&"b+1 ≡ c^2+b mod k₀(√b)^{×2}".to_string()),
            "{obs:?}"
        );
    }

    #[test]
    fn control_run_gives_nu_one() {
        let r = run_example1_control().unwrap();
        assert_eq!(r.final_status, "Proved with nu = 1");
        assert!(r.assumptions.is_empty());
    }

    #[test]
    fn example2_cosets_and_invariants() {
        let r = run_example2().unwrap();
        assert_eq!(r.final_status, "Refuted modulo [STW Rem. 5.4]");
        for op in [
            "c_prime_nonzero",
            "conic_identities",
            "summed_identity",
            "iso_generic",
            "e1_invariant",
            "e2_invariant",
        ] {
            assert!(r.step(op).unwrap().verdict.is_proved(), "{op}");
        }
        let base = &r.step("iso_base").unwrap().verdict;
        let Certificate::Cases { cases } = &base.certificate else {
            panic!()
        };
        assert_eq!(cases.len(), 4);
        assert!(cases.iter().all(|c| c.discharged_by.is_some()));
        let obs = obligations(&r, "iso_base");
        assert!(obs.contains(&"b+1 ∈ k₀(√b)^{×2}".to_string()));
        assert!(obs.contains(&"b+4 ∈ k₀(√b)^{×2}".to_string()));
    }
}
