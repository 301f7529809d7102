//! Square-class case enumeration for Witt relations `A − ⟨ν⟩B ∈ ⟨⟨slots⟩⟩W(k)`
//! over an iterated Laurent field `k = k₀((x₁))…((xₙ))`.
//!
//! The unknown `ν` is written `m·ν₀` with `m` a product of Laurent variables
//! and `ν₀` a symbol adjoined to `k₀`. Residues are taken layer by layer
//! until the relation lives over `k₀`, where it is turned into conditions
//! over `L = k₀(√β)` for the remaining slot `β`.
//!
//! `ν₀` is an unknown constant, not an indeterminate: only positive square
//! tests (exact square roots) are applied to elements involving it.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::poly::gcd;
use crate::fields::squares::class_rep_or_self;
use crate::fields::{embed, is_square, residue_unit, square_class, Element, Tower, ValuationSpec};
use crate::forms::pfister::split_slots;
use crate::forms::PfisterSum;

pub const NU0: &str = "nu0";

/// `fixed − ⟨ν⟩·scaled ∈ ⟨⟨slots⟩⟩W(k)` with `ν` unknown.
#[derive(Clone, Debug)]
pub struct WittRelation {
    pub fixed: PfisterSum,
    pub scaled: PfisterSum,
    pub slots: Vec<Element>,
    /// `d` such that `ν ↦ −dν` preserves the relation; cosets with odd
    /// exponent in `d` are then skipped. Must be a Laurent variable to be used.
    pub substitution: Option<Element>,
}

impl WittRelation {
    pub fn tower(&self) -> &Tower {
        &self.fixed.tower
    }
}

/// A condition over `k₀` produced at the bottom of the residue cascade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    /// `x ∈ L^{×2}`.
    Square { x: Element, beta: Element },
    /// `x ≡ y mod L^{×2}`.
    SameClass {
        x: Element,
        y: Element,
        beta: Element,
    },
    /// `value ∈ D_L(⟨⟨x⟩⟩)`.
    Represented {
        value: Element,
        x: Element,
        beta: Element,
    },
    /// Anything else, stated as a membership or hyperbolicity condition.
    Generic { statement: String },
}

fn field_name(beta: &Element) -> String {
    let s = beta.to_string();
    if s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        format!("k₀(√{s})")
    } else {
        format!("k₀(√({s}))")
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Square { x, beta } => write!(f, "{x} ∈ {}^{{×2}}", field_name(beta)),
            Leaf::SameClass { x, y, beta } => {
                write!(f, "{x} ≡ {y} mod {}^{{×2}}", field_name(beta))
            }
            Leaf::Represented { value, x, beta } => {
                write!(f, "{value} ∈ D_{{{}}}(<<{x}>>)", field_name(beta))
            }
            Leaf::Generic { statement } => write!(f, "{statement}"),
        }
    }
}

impl Leaf {
    /// The element that must be a square in `L`, for the two class conditions.
    pub fn square_target(&self) -> Option<Element> {
        match self {
            Leaf::Square { x, .. } => Some(x.clone()),
            Leaf::SameClass { x, y, .. } => Some(x * y),
            _ => None,
        }
    }

    fn dedupe_key(&self) -> String {
        match self.square_target() {
            Some(z) => format!("sq:{}", class_rep_or_self(&z)),
            None => self.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    /// `m` with `ν = m·ν₀`.
    pub coset: Element,
    pub label: String,
    /// Relations left over `k₀(ν₀)` after all residues.
    pub residual: Vec<(PfisterSum, Vec<Element>)>,
    pub leaves: Vec<Leaf>,
}

impl CaseResult {
    pub fn statements(&self) -> Vec<String> {
        self.leaves.iter().map(Leaf::to_string).collect()
    }
}

fn involves_nu0(e: &Element) -> bool {
    e.tower.var_index(NU0).is_some_and(|i| e.involves_var(i))
}

/// Tower with `ν₀` adjoined directly below the Laurent run.
pub fn case_tower(k: &Tower) -> Result<Tower> {
    if k.var_index(NU0).is_some() {
        return Err(Error::InvalidTower(format!("{NU0} already in {k}")));
    }
    k.adjoin_below_laurent(NU0)
}

fn coset_label(m: &Element) -> String {
    if m.is_one() {
        NU0.to_string()
    } else {
        format!("{m}*{NU0}")
    }
}

fn laurent_var_of(e: &Element, chain: &[String]) -> Option<String> {
    chain
        .iter()
        .find(|t| Element::var(&e.tower, t).is_ok_and(|v| &v == e))
        .cloned()
}

/// Enumerate `ν = m·ν₀` over the Laurent coset frame and reduce each case.
/// `chain` must list the Laurent layers outermost first.
pub fn enumerate_cases(rel: &WittRelation, chain: &[ValuationSpec]) -> Result<Vec<CaseResult>> {
    let k = rel.tower();
    rel.scaled.tower.check_same(k)?;
    let own: Vec<String> = k.laurent_chain();
    let given: Vec<String> = chain.iter().map(|v| v.var.clone()).collect();
    if own != given {
        return Err(Error::NotLaurentLayer(format!(
            "chain {given:?} does not match {own:?}"
        )));
    }
    if k.has_buried_laurent() {
        return Err(Error::UnsupportedTower(format!(
            "{k} has Laurent layers below other layers"
        )));
    }
    let kk = case_tower(k)?;
    let nu0 = Element::var(&kk, NU0)?;
    let fixed = rel.fixed.embed(&kk)?;
    let scaled = rel.scaled.embed(&kk)?;
    let slots: Vec<Element> = rel
        .slots
        .iter()
        .map(|s| embed(s, &kk))
        .collect::<Result<_>>()?;
    let skip = match &rel.substitution {
        Some(d) => laurent_var_of(d, &own),
        None => None,
    };
    let mut out = Vec::new();
    for m in crate::fields::squares::laurent_cosets(&kk) {
        if let Some(d) = &skip {
            if crate::fields::valuation(&m, &ValuationSpec::new(d))?.rem_euclid(2) == 1 {
                continue;
            }
        }
        let nu = &m * &nu0;
        let theta = fixed.add(&scaled.scale(&-&nu)?)?;
        let mut residual = Vec::new();
        let mut leaves = Vec::new();
        reduce(&theta, &slots, &mut residual, &mut leaves)?;
        let mut seen = HashSet::new();
        leaves.retain(|l| seen.insert(l.dedupe_key()));
        out.push(CaseResult {
            coset: m.clone(),
            label: coset_label(&m),
            residual,
            leaves,
        });
    }
    Ok(out)
}

fn structural(theta: &PfisterSum, slots: &[Element]) -> Result<bool> {
    for t in &theta.terms {
        for x in slots {
            let mut hit = false;
            for y in &t.slots {
                if is_square(&x.div(y)?)? {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn reduce(
    theta: &PfisterSum,
    slots: &[Element],
    residual: &mut Vec<(PfisterSum, Vec<Element>)>,
    leaves: &mut Vec<Leaf>,
) -> Result<()> {
    let Some(t) = theta.tower.top_laurent().map(str::to_string) else {
        residual.push((theta.clone(), slots.to_vec()));
        let th = theta.simplify()?;
        if th.is_empty() || structural(&th, slots)? {
            return Ok(());
        }
        leaves.push(classify(&th, slots)?);
        return Ok(());
    };
    let th = theta.simplify()?;
    if th.is_empty() || structural(&th, slots)? {
        return Ok(());
    }
    let v = ValuationSpec::new(&t);
    let (d1, d2) = th.residues(&v)?;
    let (units, odd) = split_slots(slots, &v)?;
    match odd {
        None => {
            reduce(&d1, &units, residual, leaves)?;
            reduce(&d2, &units, residual, leaves)?;
        }
        Some(alpha) => {
            reduce(&d1, &units, residual, leaves)?;
            let abar = residue_unit(&alpha, &v)?;
            let rel = d2.add(&d1.scale(&abar)?)?.simplify()?;
            if !rel.is_empty() {
                leaves.push(Leaf::Generic {
                    statement: format!("{rel} = 0 in W({})", rel.tower),
                });
            }
        }
    }
    Ok(())
}

/// Cancel common polynomial factors of two square-class representatives.
fn coprime_pair(x: &Element, y: &Element) -> Result<(Element, Element)> {
    let cx = class_rep_or_self(x);
    let cy = class_rep_or_self(y);
    let (Some(rx), Some(ry)) = (cx.repr.as_rf(), cy.repr.as_rf()) else {
        return Ok((cx, cy));
    };
    if !rx.is_polynomial() || !ry.is_polynomial() {
        return Ok((cx, cy));
    }
    let g = gcd(&rx.num, &ry.num);
    if g.is_one() {
        return Ok((cx, cy));
    }
    let ge = Element::from_rf(&cx.tower, crate::fields::ratfunc::RatFunc::from_poly(g));
    Ok((cx.div(&ge)?, cy.div(&ge)?))
}

fn classify(th: &PfisterSum, slots: &[Element]) -> Result<Leaf> {
    let generic = || Leaf::Generic {
        statement: {
            let s: Vec<String> = slots.iter().map(|x| x.to_string()).collect();
            format!("{th} ∈ pf({})·W(k₀)", s.join(","))
        },
    };
    if slots.len() != 1 {
        return Ok(generic());
    }
    let beta = slots[0].clone();
    let terms = &th.terms;
    match (
        terms.len(),
        terms
            .iter()
            .map(|t| t.fold())
            .collect::<Vec<_>>()
            .as_slice(),
    ) {
        (1, [1]) => Ok(Leaf::Square {
            x: class_rep_or_self(&terms[0].slots[0]),
            beta,
        }),
        (1, [2]) => {
            let s = &terms[0].slots;
            let (value, x) = if involves_nu0(&s[1]) && !involves_nu0(&s[0]) {
                (s[1].clone(), s[0].clone())
            } else {
                (s[0].clone(), s[1].clone())
            };
            Ok(Leaf::Represented { value, x, beta })
        }
        (2, [1, 1]) => {
            let (x, y) = (&terms[0].slots[0], &terms[1].slots[0]);
            let (p, q) = (&terms[0].scale, &terms[1].scale);
            if is_square(&x.div(y)?)? {
                let value = class_rep_or_self(&-&(p * q));
                return Ok(Leaf::Represented {
                    value,
                    x: class_rep_or_self(x),
                    beta,
                });
            }
            let (x, y) = coprime_pair(x, y)?;
            if is_square(&x)? {
                return Ok(Leaf::Square { x: y, beta });
            }
            if is_square(&y)? {
                return Ok(Leaf::Square { x, beta });
            }
            Ok(Leaf::SameClass { x, y, beta })
        }
        _ => Ok(generic()),
    }
}

/// Whether two `ν₀`-free elements of `k₀` agree modulo `k₀^{×2}`; exact roots only.
pub fn same_class_k0(x: &Element, y: &Element) -> Result<bool> {
    if involves_nu0(x) || involves_nu0(y) {
        return is_square(&x.div(y)?);
    }
    Ok(square_class(x)?.rep == square_class(y)?.rep || is_square(&x.div(y)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower};

    fn ex1(c: &str) -> WittRelation {
        let k = parse_tower("Q.rat(b).laurent(a).laurent(t)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let x1 = e("b+1");
        let x2 = parse_element(&format!("b+({c})^2"), &k).unwrap();
        let phi = PfisterSum::term(&k.one(), std::slice::from_ref(&x1))
            .unwrap()
            .add(&PfisterSum::term(&e("t"), std::slice::from_ref(&x2)).unwrap())
            .unwrap();
        let ct = parse_element(&format!("({c})*t"), &k).unwrap();
        let phi2 = PfisterSum::term(&k.one(), &[x1])
            .unwrap()
            .add(&PfisterSum::term(&ct, &[x2]).unwrap())
            .unwrap();
        WittRelation {
            fixed: phi2.times_pfister(&e("a")).unwrap(),
            scaled: phi.times_pfister(&e("a")).unwrap(),
            slots: vec![e("a"), e("b")],
            substitution: Some(e("a")),
        }
    }

    #[test]
    fn two_case_families() {
        let rel = ex1("2");
        let chain = [ValuationSpec::new("t"), ValuationSpec::new("a")];
        let cases = enumerate_cases(&rel, &chain).unwrap();
        let labels: Vec<&str> = cases.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["nu0", "t*nu0"]);
        assert_eq!(
            cases[0].statements(),
            ["nu0 ∈ D_{k₀(√b)}(<<b+1>>)", "2*nu0 ∈ D_{k₀(√b)}(<<b+4>>)"]
        );
        assert_eq!(cases[1].statements(), ["b+1 ≡ b+4 mod k₀(√b)^{×2}"]);
    }

    #[test]
    fn bad_chain_rejected() {
        let rel = ex1("2");
        let chain = [ValuationSpec::new("a"), ValuationSpec::new("t")];
        assert!(enumerate_cases(&rel, &chain).is_err());
    }

    #[test]
    fn base_relation_is_single_case() {
        let k = parse_tower("Q.rat(b)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let rel = WittRelation {
            fixed: PfisterSum::term(&k.one(), &[e("b+1")]).unwrap(),
            scaled: PfisterSum::term(&k.one(), &[e("b+1")]).unwrap(),
            slots: vec![e("b")],
            substitution: None,
        };
        let cases = enumerate_cases(&rel, &[]).unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].residual.len(), 1);
        assert_eq!(cases[0].residual[0].0.terms.len(), 2);
        assert_eq!(cases[0].statements(), ["nu0 ∈ D_{k₀(√b)}(<<b+1>>)"]);
    }
}
