//! Text syntax for forms, involutions and generic sums.
//!
//! ```text
//! form  := prod ('+' prod)*
//! prod  := scaled ('x' scaled)*          tensor product
//! scaled:= scalar '*' scaled | atom
//! atom  := '<' e (',' e)* '>' | 'pf(' e (',' e)* ')' | '(' form ')'
//! inv   := 'inv(quat(' e ',' e ')' ',' 'rho=' e ',' 'phi=' form ')'
//! gsum  := 'gsum(' inv ',' inv ',' ident ')'
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::expr::{Cursor, Tok};
use crate::fields::{Element, Tower};
use crate::forms::{PfisterSum, PfisterTerm};
use crate::hermitian::{
    generic_sum, GenericSum, InvolutionPresentation, QuaternionAlgebra, SkewHermitianForm,
};

#[derive(Clone, Debug)]
pub enum Parsed {
    Element(Element),
    Form(PfisterSum),
    Involution(InvolutionPresentation),
    GenericSum(GenericSum),
}

impl fmt::Display for Parsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parsed::Element(e) => write!(f, "{e}"),
            Parsed::Form(s) => write!(f, "{s}"),
            Parsed::Involution(s) => write!(f, "{s}"),
            Parsed::GenericSum(g) => write!(f, "{}", g.result),
        }
    }
}

fn form_start(c: &Cursor) -> bool {
    c.is_sym('<') || (c.is_ident("pf") && c.peek_at(1) == Some(&Tok::Sym('(')))
}

fn elements(c: &mut Cursor, f: &Tower, close: char) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    if c.is_sym(close) {
        return Ok(out);
    }
    loop {
        out.push(c.expr(f)?);
        if !c.eat_sym(',') {
            break;
        }
    }
    Ok(out)
}

fn form(c: &mut Cursor, f: &Tower) -> Result<PfisterSum> {
    let mut acc = prod(c, f)?;
    while c.eat_sym('+') {
        acc = acc.add(&prod(c, f)?)?;
    }
    Ok(acc)
}

fn tensor(x: &PfisterSum, y: &PfisterSum) -> Result<PfisterSum> {
    let mut terms = Vec::new();
    for s in &x.terms {
        for t in &y.terms {
            let mut slots = s.slots.clone();
            slots.extend(t.slots.iter().cloned());
            terms.push(PfisterTerm {
                scale: &s.scale * &t.scale,
                slots,
            });
        }
    }
    Ok(PfisterSum {
        tower: x.tower.clone(),
        terms,
    })
}

fn prod(c: &mut Cursor, f: &Tower) -> Result<PfisterSum> {
    let mut acc = scaled(c, f)?;
    while c.is_ident("x") {
        c.i += 1;
        acc = tensor(&acc, &scaled(c, f)?)?;
    }
    Ok(acc)
}

/// `'(' form ')'` when the parenthesis opens a form, without consuming otherwise.
fn paren_form(c: &mut Cursor, f: &Tower) -> Option<PfisterSum> {
    if !c.is_sym('(') {
        return None;
    }
    let mut k = c.clone();
    k.i += 1;
    if !form_start(&k) && !k.is_sym('(') {
        return None;
    }
    let r = form(&mut k, f).ok()?;
    if !k.eat_sym(')') {
        return None;
    }
    *c = k;
    Some(r)
}

fn scaled(c: &mut Cursor, f: &Tower) -> Result<PfisterSum> {
    if form_start(c) {
        return atom(c, f);
    }
    if let Some(p) = paren_form(c, f) {
        return Ok(p);
    }
    // scalar prefix: factors joined by '*' or '/' up to the form
    let mut s = c.unary(f)?;
    loop {
        if c.eat_sym('/') {
            let d = c.unary(f)?;
            s = s.div(&d)?;
            continue;
        }
        if !c.eat_sym('*') {
            return c.err("expected `*` before a form");
        }
        if form_start(c) || c.is_sym('(') && paren_form(&mut c.clone(), f).is_some() {
            let inner = scaled(c, f)?;
            return inner.scale(&s);
        }
        s = &s * &c.unary(f)?;
    }
}

fn atom(c: &mut Cursor, f: &Tower) -> Result<PfisterSum> {
    if c.eat_sym('<') {
        let pos = c.pos();
        let es = elements(c, f, '>')?;
        c.expect_sym('>')?;
        if es.is_empty() {
            return Err(Error::Syntax {
                pos,
                msg: "empty diagonal form".into(),
            });
        }
        if es.iter().any(Element::is_zero) {
            return Err(Error::ZeroElement);
        }
        return Ok(PfisterSum {
            tower: f.clone(),
            terms: es
                .into_iter()
                .map(|e| PfisterTerm {
                    scale: e,
                    slots: vec![],
                })
                .collect(),
        });
    }
    if c.is_ident("pf") {
        c.i += 1;
        c.expect_sym('(')?;
        let pos = c.pos();
        let es = elements(c, f, ')')?;
        c.expect_sym(')')?;
        if es.is_empty() {
            return Err(Error::Syntax {
                pos,
                msg: "pf() needs at least one slot".into(),
            });
        }
        return PfisterSum::term(&f.one(), &es);
    }
    if let Some(p) = paren_form(c, f) {
        return Ok(p);
    }
    c.err("expected a form")
}

fn keyword(c: &mut Cursor, k: &str) -> Result<()> {
    if c.is_ident(k) {
        c.i += 1;
        Ok(())
    } else {
        c.err(format!("expected `{k}`"))
    }
}

fn involution(c: &mut Cursor, f: &Tower) -> Result<InvolutionPresentation> {
    keyword(c, "inv")?;
    c.expect_sym('(')?;
    keyword(c, "quat")?;
    c.expect_sym('(')?;
    let a = c.expr(f)?;
    c.expect_sym(',')?;
    let b = c.expr(f)?;
    c.expect_sym(')')?;
    c.expect_sym(',')?;
    keyword(c, "rho")?;
    c.expect_sym('=')?;
    let rho = c.expr(f)?;
    c.expect_sym(',')?;
    keyword(c, "phi")?;
    c.expect_sym('=')?;
    let phi = form(c, f)?;
    c.expect_sym(')')?;
    InvolutionPresentation::new(&QuaternionAlgebra::new(&a, &b)?, &rho, &phi)
}

/// `⟨iα₁,…⟩` from a presentation whose `φ` is read as a diagonal form.
pub fn skew_form(s: &InvolutionPresentation) -> Result<SkewHermitianForm> {
    SkewHermitianForm::new(&s.algebra, &s.rho_disc, s.phi.entries.clone())
}

fn gsum(c: &mut Cursor, f: &Tower) -> Result<GenericSum> {
    keyword(c, "gsum")?;
    c.expect_sym('(')?;
    let h1 = involution(c, f)?;
    c.expect_sym(',')?;
    let h2 = involution(c, f)?;
    c.expect_sym(',')?;
    let t = c.ident()?;
    c.expect_sym(')')?;
    generic_sum(&skew_form(&h1)?, &skew_form(&h2)?, &t)
}

pub fn parse_form(s: &str, f: &Tower) -> Result<PfisterSum> {
    let mut c = Cursor::new(s)?;
    let r = form(&mut c, f)?;
    c.expect_end()?;
    Ok(r)
}

pub fn parse_involution(s: &str, f: &Tower) -> Result<InvolutionPresentation> {
    let mut c = Cursor::new(s)?;
    let r = involution(&mut c, f)?;
    c.expect_end()?;
    Ok(r)
}

/// Element, form, involution or generic sum, by the shape of the input.
pub fn parse(s: &str, f: &Tower) -> Result<Parsed> {
    let mut c = Cursor::new(s)?;
    if c.is_ident("inv") && c.peek_at(1) == Some(&Tok::Sym('(')) {
        let r = involution(&mut c, f)?;
        c.expect_end()?;
        return Ok(Parsed::Involution(r));
    }
    if c.is_ident("gsum") && c.peek_at(1) == Some(&Tok::Sym('(')) {
        let r = gsum(&mut c, f)?;
        c.expect_end()?;
        return Ok(Parsed::GenericSum(r));
    }
    let formish = c
        .toks
        .iter()
        .any(|t| t.tok == Tok::Sym('<') || t.tok == Tok::Ident("pf".into()));
    if formish {
        return parse_form(s, f).map(Parsed::Form);
    }
    crate::fields::parse_element(s, f).map(Parsed::Element)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::parse_tower;

    #[test]
    fn forms() {
        let k = parse_tower("Q.rat(b).rat(c).laurent(a).laurent(t)").unwrap();
        let p = parse_form("pf(a,b+1) + t*pf(a,b+c^2)", &k).unwrap();
        assert_eq!(p.to_string(), "pf(a,b+1) + t*pf(a,c^2+b)");
        assert_eq!(p.dim(), 8);
        assert_eq!(parse_form("<1>", &k).unwrap().to_string(), "<1>");
        assert!(matches!(parse_form("pf()", &k), Err(Error::Syntax { .. })));
        let q = parse_form("(b+1)*(pf(a) + <1,2>) x pf(t)", &k).unwrap();
        assert_eq!(q.to_string(), "(b+1)*pf(a,t) + (b+1)*pf(t) + (2*b+2)*pf(t)");
        assert!(matches!(
            parse_form("<1,z>", &k),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(parse_form("2*", &k).is_err());
    }

    #[test]
    fn involutions_roundtrip() {
        let k = parse_tower("Q.rat(b).laurent(a).laurent(t)").unwrap();
        let s = "inv(quat(a,b), rho=a, phi=pf(b+1) + 2*t*pf(b+4))";
        let i = parse_involution(s, &k).unwrap();
        assert_eq!(
            i.to_string(),
            "inv(quat(a,b), rho=a, phi=pf(b+1) + 2*t*pf(b+4))"
        );
        assert_eq!(parse_involution(&i.to_string(), &k).unwrap(), i);
        let g = parse(
            "gsum(inv(quat(a,b), rho=a, phi=<1>), inv(quat(a,b), rho=a, phi=<b>), u)",
            &k,
        )
        .unwrap();
        assert_eq!(g.to_string(), "<i*1,i*b*u>");
    }
}
