//! Text syntax for towers and elements: lexer, recursive-descent parser, printer.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::Scalar;
use super::tower::{Element, FieldDesc, Repr, Tower};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub fn lex(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Num(s[st..i].parse().unwrap()),
                pos: st,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s[st..i].to_string()),
                pos: st,
            });
        } else if "+-*/^(),.<>=".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                pos: i,
            });
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Token cursor shared by the element, form and involution parsers.
#[derive(Clone)]
pub struct Cursor {
    pub toks: Vec<Token>,
    pub i: usize,
    pub end: usize,
}

impl Cursor {
    pub fn new(s: &str) -> Result<Self> {
        let toks = lex(s)?;
        Ok(Cursor {
            toks,
            i: 0,
            end: s.len(),
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.i + k).map(|t| &t.tok)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.end)
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    pub fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    pub fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.i += 1;
                Ok(n)
            }
            _ => self.err("expected integer"),
        }
    }

    pub fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    /// Sum of terms.
    pub fn expr(&mut self, f: &Tower) -> Result<Element> {
        let mut acc = self.term(f)?;
        loop {
            if self.eat_sym('+') {
                acc = &acc + &self.term(f)?;
            } else if self.eat_sym('-') {
                acc = &acc - &self.term(f)?;
            } else {
                return Ok(acc);
            }
        }
    }

    pub fn term(&mut self, f: &Tower) -> Result<Element> {
        let mut acc = self.unary(f)?;
        loop {
            if self.eat_sym('*') {
                acc = &acc * &self.unary(f)?;
            } else if self.eat_sym('/') {
                let d = self.unary(f)?;
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    pub fn unary(&mut self, f: &Tower) -> Result<Element> {
        if self.eat_sym('-') {
            return Ok(-&self.unary(f)?);
        }
        self.power(f)
    }

    fn power(&mut self, f: &Tower) -> Result<Element> {
        let base = self.atom(f)?;
        if self.eat_sym('^') {
            let paren = self.eat_sym('(');
            let neg = self.eat_sym('-');
            let e = self.int()?;
            if paren {
                self.expect_sym(')')?;
            }
            let e: i64 = i64::try_from(e).or_else(|_| self.err("exponent too large"))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self, f: &Tower) -> Result<Element> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(f.scalar(Scalar::from_bigint(&n, f.p)))
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let e = self.expr(f)?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Some(Tok::Ident(s)) if s == "sqrt" && self.peek_at(1) == Some(&Tok::Sym('(')) => {
                self.i += 2;
                let d = self.expr(f)?;
                self.expect_sym(')')?;
                sqrt_generator(f, &d)
            }
            Some(Tok::Ident(s)) => {
                self.i += 1;
                Element::var(f, &s)
            }
            _ => self.err("expected an element"),
        }
    }
}

/// The generator whose square is `d`.
fn sqrt_generator(f: &Tower, d: &Element) -> Result<Element> {
    for (i, g) in f.gens.iter().enumerate() {
        if g.square == d.repr {
            return Ok(Element::new(
                f,
                Repr::mono(1 << i, RatFunc::one(f.p, f.nvars())),
            ));
        }
    }
    Err(Error::UnknownSymbol(format!("sqrt({d})")))
}

pub fn parse_element(s: &str, f: &Tower) -> Result<Element> {
    let mut c = Cursor::new(s)?;
    let e = c.expr(f)?;
    c.expect_end()?;
    Ok(e)
}

pub fn parse_tower(s: &str) -> Result<Tower> {
    let mut c = Cursor::new(s)?;
    let name = c.ident()?;
    let mut t = match name.as_str() {
        "Q" => FieldDesc::rationals(),
        "F" => {
            c.expect_sym('(')?;
            let p = c.int()?;
            c.expect_sym(')')?;
            let p: u64 = u64::try_from(p).or_else(|_| c.err("bad prime"))?;
            FieldDesc::finite(p)?
        }
        _ => {
            return Err(Error::Syntax {
                pos: 0,
                msg: "tower must start with Q or F(p)".into(),
            })
        }
    };
    while c.eat_sym('.') {
        let layer = c.ident()?;
        c.expect_sym('(')?;
        t = match layer.as_str() {
            "rat" => t.rat(&c.ident()?)?,
            "laurent" => t.laurent(&c.ident()?)?,
            "sqrt" => {
                let d = c.expr(&t)?;
                t.sqrt(&d)?
            }
            "conic" => {
                let a = c.expr(&t)?;
                c.expect_sym(',')?;
                let b = c.expr(&t)?;
                t.conic(&a, &b)?
            }
            other => return c.err(format!("unknown layer `{other}`")),
        };
        c.expect_sym(')')?;
    }
    c.expect_end()?;
    Ok(t)
}

fn mono_string(e: &[u32], vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &d) in e.iter().enumerate() {
        match d {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], d)),
        }
    }
    parts.join("*")
}

pub fn poly_string(p: &Poly, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (m, c) in p.terms.iter().rev() {
        let neg = c.is_negative_display();
        let abs = c.abs_display();
        let ms = mono_string(&m.0, vars);
        let body = if ms.is_empty() {
            abs.to_string()
        } else if abs.is_one() {
            ms
        } else {
            format!("{abs}*{ms}")
        };
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        s.push_str(&body);
    }
    s
}

fn is_single_factor(p: &Poly) -> bool {
    p.terms.len() == 1 && {
        let (m, c) = p.terms.iter().next().unwrap();
        c.is_one() && m.0.iter().filter(|d| **d > 0).count() <= 1
    }
}

pub fn ratfunc_string(r: &RatFunc, vars: &[String]) -> String {
    let n = poly_string(&r.num, vars);
    if r.den.is_one() {
        return n;
    }
    let d = poly_string(&r.den, vars);
    let n = if r.num.terms.len() > 1 {
        format!("({n})")
    } else {
        n
    };
    let d = if is_single_factor(&r.den) {
        d
    } else {
        format!("({d})")
    };
    format!("{n}/{d}")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.repr.is_zero() {
            return write!(f, "0");
        }
        let vars = &self.tower.vars;
        let mut out = String::new();
        for (m, rf) in &self.repr.terms {
            let cs = ratfunc_string(rf, vars);
            let piece = if *m == 0 {
                cs
            } else {
                let gens: Vec<&str> = (0..32)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| self.tower.gens[i].name.as_str())
                    .collect();
                let g = gens.join("*");
                if rf.is_one() {
                    g
                } else if rf.neg().is_one() {
                    format!("-{g}")
                } else if rf.den.is_one() && rf.num.terms.len() == 1 {
                    format!("{cs}*{g}")
                } else {
                    format!("({cs})*{g}")
                }
            };
            if !out.is_empty() && !piece.starts_with('-') {
                out.push('+');
            }
            out.push_str(&piece);
        }
        write!(f, "{out}")
    }
}

/// Exact rational constant, handy in tests and scenarios.
pub fn rational(n: i64, d: i64) -> Scalar {
    Scalar::Rat(BigRational::new(n.into(), d.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower() -> Tower {
        parse_tower("Q.rat(a).rat(b).conic(a,b)").unwrap()
    }

    #[test]
    fn normalizes_conic_norm() {
        let f = tower();
        let e = parse_element("X^2-a*Y^2", &f).unwrap();
        assert_eq!(e, parse_element("-a*b", &f).unwrap());
        let y2 = parse_element("Y^2", &f).unwrap();
        assert_eq!(y2, parse_element("(X^2+a*b)/a", &f).unwrap());
    }

    #[test]
    fn print_parse_roundtrip() {
        let f = tower();
        for s in [
            "c",
            "b+1",
            "(X^2+a*b)/a",
            "-2*a*Y",
            "1/2*b-3",
            "(b+1)/(a*b)*X+(a/b)*Y",
        ] {
            let Ok(e) = parse_element(s, &f) else {
                continue;
            };
            let printed = e.to_string();
            assert_eq!(parse_element(&printed, &f).unwrap(), e, "{s} -> {printed}");
        }
        let g = parse_tower("Q.rat(b).rat(c)").unwrap();
        assert_eq!(parse_element("b+c^2", &g).unwrap().to_string(), "c^2+b");
    }

    #[test]
    fn tower_display_roundtrip() {
        let t = parse_tower("Q.rat(b).sqrt(b+1).laurent(t)").unwrap();
        assert_eq!(t.to_string(), "Q.rat(b).sqrt(b+1).laurent(t)");
        assert_eq!(*parse_tower(&t.to_string()).unwrap(), *t);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let f = tower();
        match parse_element("a+*b", &f) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_element("zz", &f),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_element("1/(a-a)", &f),
            Err(Error::DivisionByZero)
        ));
    }
}
