//! Discriminant, Hasse and Clifford invariants, and classes in the 2-torsion
//! of the Brauer group as sums of quaternion symbols.
//!
//! Clifford invariant convention (Lam, Ch. V, 3.20), with `d = d±(q)` the
//! signed discriminant and `s(q) = Σ_{i<j} (aᵢ,aⱼ)` the Hasse invariant:
//!
//! | n mod 8 | c(q)              |
//! |---------|-------------------|
//! | 1, 2    | s                 |
//! | 3, 4    | s + (−1,−d)       |
//! | 5, 6    | s + (−1,−1)       |
//! | 7, 0    | s + (−1,d)        |
//!
//! With this table `c(⟨⟨a,b⟩⟩) = (a,b)` and `c(⟨1,−1⟩) = 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::form::QuadraticForm;
use super::isotropy::finite_zero;
use super::rational::{hilbert_int, places, Place};
use super::verdict::{Certificate, Verdict};
use crate::error::Result;
use crate::fields::poly::{gcd, Poly};
use crate::fields::squares::{factor_int, is_square, scalar_class};
use crate::fields::{
    residue_unit, square_class, valuation, Element, Layer, Scalar, SquareClass, Tower,
    ValuationSpec,
};

/// Coarse classification of a tower for the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerKind {
    /// 𝔽_p or a quadratic extension of it.
    Finite,
    Rationals,
    /// Rational-function layers over a prime field.
    FunctionField,
    /// Top layer is Laurent.
    Laurent,
    Other,
}

pub fn tower_kind(f: &Tower) -> TowerKind {
    if f.top_laurent().is_some() {
        return TowerKind::Laurent;
    }
    if f.nvars() == 0 {
        return if f.p > 0 {
            TowerKind::Finite
        } else if f.gens.is_empty() {
            TowerKind::Rationals
        } else {
            TowerKind::Other
        };
    }
    if f.gens.is_empty() && f.layers.iter().all(|l| !matches!(l, Layer::Laurent(_))) {
        return TowerKind::FunctionField;
    }
    TowerKind::Other
}

/// Whether a negative square test is sound in this tower: the rational
/// model of a non-top Laurent layer can miss squares of the completion.
pub fn negative_tests_sound(f: &Tower) -> bool {
    match f.top_laurent() {
        Some(_) => negative_tests_sound(f.parent.as_ref().unwrap()),
        None => !f.has_buried_laurent(),
    }
}

/// `Some(true)` for a square, `Some(false)` for a certified non-square.
pub fn square_status(e: &Element) -> Result<Option<bool>> {
    if is_square(e)? {
        Ok(Some(true))
    } else if negative_tests_sound(&e.tower) {
        Ok(Some(false))
    } else {
        Ok(None)
    }
}

/// `(−1)^{n(n−1)/2} · det`.
pub fn signed_discriminant(f: &QuadraticForm) -> Element {
    let n = f.dim();
    let d = f.determinant();
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -&d
    } else {
        d
    }
}

pub fn discriminant(f: &QuadraticForm) -> Result<SquareClass> {
    square_class(&signed_discriminant(f))
}

/// A sum of quaternion symbols `(x,y)` in the 2-torsion of the Brauer group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerClass {
    pub tower: Tower,
    pub symbols: Vec<(Element, Element)>,
}

impl BrauerClass {
    pub fn zero(tower: &Tower) -> Self {
        BrauerClass {
            tower: tower.clone(),
            symbols: vec![],
        }
    }

    pub fn symbol(x: &Element, y: &Element) -> Self {
        BrauerClass {
            tower: x.tower.clone(),
            symbols: vec![(x.clone(), y.clone())],
        }
    }

    pub fn add(&self, o: &BrauerClass) -> BrauerClass {
        let mut s = self.symbols.clone();
        s.extend(o.symbols.iter().cloned());
        BrauerClass {
            tower: self.tower.clone(),
            symbols: s,
        }
    }

    /// Drop symbols that are trivial for elementary reasons:
    /// a square entry, or `(x, −x·square)`.
    pub fn simplify(&self) -> Result<BrauerClass> {
        let mut out = Vec::new();
        for (x, y) in &self.symbols {
            if is_square(x)? || is_square(y)? || is_square(&-&(x * y))? {
                continue;
            }
            out.push((x.clone(), y.clone()));
        }
        Ok(BrauerClass {
            tower: self.tower.clone(),
            symbols: out,
        })
    }

    /// Proved: the class is trivial. Refuted: nontrivial, with an obstruction.
    pub fn triviality(&self) -> Result<Verdict> {
        let s = self.simplify()?;
        if s.symbols.is_empty() {
            return Ok(Verdict::proved(Certificate::Chain {
                steps: vec!["every symbol has a square entry or is of the form (x,-x)".into()],
            }));
        }
        match tower_kind(&s.tower) {
            TowerKind::Finite => s.finite_trivial(),
            TowerKind::Rationals => s.rational_triviality(),
            TowerKind::Laurent => s.laurent_triviality(),
            TowerKind::FunctionField => s.function_field_triviality(),
            TowerKind::Other => Ok(Verdict::reduced_one(format!("{s} = 0 in Br({})", s.tower))),
        }
    }

    pub fn is_trivial(&self) -> Result<Option<bool>> {
        let v = self.triviality()?;
        Ok(match v.status {
            super::verdict::Status::Proved => Some(true),
            super::verdict::Status::Refuted => Some(false),
            super::verdict::Status::Reduced => None,
        })
    }

    fn finite_trivial(&self) -> Result<Verdict> {
        let mut steps = Vec::new();
        for (x, y) in &self.symbols {
            let f = QuadraticForm::new(&self.tower, vec![self.tower.one(), -x, -y])?;
            let v = finite_zero(&f).expect("ternary forms over finite fields are isotropic");
            let coords: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            steps.push(format!(
                "({x},{y}) = 0: {f} vanishes at ({})",
                coords.join(",")
            ));
        }
        Ok(Verdict::proved(Certificate::Chain { steps }))
    }

    fn rational_pairs(&self) -> Result<Vec<(BigInt, BigInt)>> {
        let mut out = Vec::new();
        for (x, y) in &self.symbols {
            let xr = x.as_scalar().unwrap();
            let yr = y.as_scalar().unwrap();
            let (xr, yr) = (xr.as_rational().unwrap(), yr.as_rational().unwrap());
            out.push((xr.numer() * xr.denom(), yr.numer() * yr.denom()));
        }
        Ok(out)
    }

    fn rational_triviality(&self) -> Result<Verdict> {
        let pairs = self.rational_pairs()?;
        match rational_obstruction(&pairs)? {
            None => Ok(Verdict::proved(Certificate::Invariants {
                detail: "all local invariants trivial".into(),
            })),
            Some(pl) => Ok(Verdict::refuted(Certificate::LocalObstruction {
                place: pl.to_string(),
                detail: format!("{self} has nontrivial local invariant"),
            })),
        }
    }

    fn laurent_triviality(&self) -> Result<Verdict> {
        let t = self.tower.top_laurent().unwrap().to_string();
        let v = ValuationSpec::new(&t);
        let res = self.tower.parent.clone().unwrap();
        let mut r = res.one();
        let mut rest = BrauerClass::zero(&res);
        for (x, y) in &self.symbols {
            let (al, be) = (valuation(x, &v)?, valuation(y, &v)?);
            let (u, w) = (residue_unit(x, &v)?, residue_unit(y, &v)?);
            if al.rem_euclid(2) == 1 {
                r = &r * &w;
            }
            if be.rem_euclid(2) == 1 {
                r = &r * &u;
            }
            if (al * be).rem_euclid(2) == 1 {
                r = -&r;
            }
            rest.symbols.push((u, w));
        }
        if !is_square(&r)? {
            return Ok(Verdict::refuted(Certificate::Residue {
                variable: t,
                detail: format!("residue {r} is not a square"),
            }));
        }
        let inner = rest.triviality()?;
        Ok(match inner.status {
            super::verdict::Status::Proved => Verdict::proved(Certificate::Chain {
                steps: vec![format!(
                    "{t}-adic residue is a square; unramified part trivial"
                )],
            }),
            super::verdict::Status::Refuted => Verdict::refuted(Certificate::Residue {
                variable: t,
                detail: format!("unramified part {rest} nontrivial"),
            }),
            super::verdict::Status::Reduced => inner,
        })
    }

    fn function_field_triviality(&self) -> Result<Verdict> {
        let mut elems = Vec::new();
        for (x, y) in &self.symbols {
            elems.push(x.clone());
            elems.push(y.clone());
        }
        if let Some(atoms) = Atoms::decompose(&self.tower, &elems)? {
            let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
            let mut toggle = |i: usize, j: usize| {
                let k = (i.min(j), i.max(j));
                if !pairs.remove(&k) {
                    pairs.insert(k);
                }
            };
            for (idx, _) in self.symbols.iter().enumerate() {
                let ex = &atoms.exps[2 * idx];
                let ey = &atoms.exps[2 * idx + 1];
                for &i in ex {
                    for &j in ey {
                        if i == j && i < atoms.polys.len() {
                            for &k in &atoms.minus_one {
                                toggle(i, k);
                            }
                        } else {
                            toggle(i, j);
                        }
                    }
                }
            }
            let poly_pairs = pairs.iter().any(|(i, _)| *i < atoms.polys.len());
            if !poly_pairs {
                let consts: Vec<(BigInt, BigInt)> = pairs
                    .iter()
                    .map(|(i, j)| (atoms.constant_value(*i), atoms.constant_value(*j)))
                    .collect();
                if self.tower.p > 0 || consts.is_empty() {
                    return Ok(Verdict::proved(Certificate::Chain {
                        steps: vec![
                            "bilinear normalization over a coprime base leaves no symbol".into(),
                        ],
                    }));
                }
                return Ok(match rational_obstruction(&consts)? {
                    None => Verdict::proved(Certificate::Chain {
                        steps: vec!["bilinear normalization leaves constant symbols with trivial local invariants".into()],
                    }),
                    Some(pl) => Verdict::refuted(Certificate::LocalObstruction {
                        place: pl.to_string(),
                        detail: "constant part of the class is nontrivial over Q".into(),
                    }),
                });
            }
        }
        if self.tower.p == 0 {
            if let Some(cert) = self.specialization_obstruction()? {
                return Ok(Verdict::refuted(cert));
            }
        }
        Ok(Verdict::reduced_one(format!(
            "{self} = 0 in Br({})",
            self.tower
        )))
    }

    /// Specialize all variables to integers where every entry is a unit; a
    /// nontrivial specialized class shows the class itself is nontrivial.
    fn specialization_obstruction(&self) -> Result<Option<Certificate>> {
        let n = self.tower.nvars();
        let candidates: Vec<i64> = vec![1, 2, 3, -1, 5, 7, -3, 11, 4, -2, 13, 6];
        for trial in 0..40usize {
            let point: Vec<i64> = (0..n)
                .map(|i| candidates[(trial * (i + 1) + i * 5 + trial / 3) % candidates.len()])
                .collect();
            let Some(pairs) = self.specialize(&point) else {
                continue;
            };
            if let Some(pl) = rational_obstruction(&pairs)? {
                let pt = self
                    .tower
                    .vars
                    .iter()
                    .zip(&point)
                    .map(|(v, x)| (v.clone(), x.to_string()))
                    .collect();
                return Ok(Some(Certificate::Specialization {
                    point: pt,
                    detail: format!("specialized class nontrivial at {pl}"),
                }));
            }
        }
        Ok(None)
    }

    fn specialize(&self, point: &[i64]) -> Option<Vec<(BigInt, BigInt)>> {
        let ev = |e: &Element| -> Option<BigInt> {
            let rf = e.repr.as_rf()?;
            let mut num = rf.num.clone();
            let mut den = rf.den.clone();
            for (i, &x) in point.iter().enumerate() {
                num = num.eval_var(i, &Scalar::from_i64(x, 0));
                den = den.eval_var(i, &Scalar::from_i64(x, 0));
            }
            let n = num.constant_value();
            let d = den.constant_value();
            if n.is_zero() || d.is_zero() {
                return None;
            }
            let q = n.div(&d);
            let r = q.as_rational()?;
            Some(r.numer() * r.denom())
        };
        let mut out = Vec::new();
        for (x, y) in &self.symbols {
            out.push((ev(x)?, ev(y)?));
        }
        Some(out)
    }
}

/// First place where `Σ (x_i, y_i)` has a nontrivial local invariant.
pub fn rational_obstruction(pairs: &[(BigInt, BigInt)]) -> Result<Option<Place>> {
    let mut all = Vec::new();
    for (x, y) in pairs {
        all.push(x.clone());
        all.push(y.clone());
    }
    for pl in places(&all)? {
        let prod: i32 = pairs
            .iter()
            .map(|(x, y)| hilbert_int(x, y, &pl) as i32)
            .product();
        if prod != 1 {
            return Ok(Some(pl));
        }
    }
    Ok(None)
}

/// Exponent vectors (mod 2) of elements over a coprime base of polynomials
/// together with constant atoms (−1 and primes over ℚ, a non-residue over 𝔽_p).
struct Atoms {
    polys: Vec<Poly>,
    consts: Vec<BigInt>,
    exps: Vec<BTreeSet<usize>>,
    minus_one: Vec<usize>,
}

impl Atoms {
    fn constant_value(&self, i: usize) -> BigInt {
        self.consts[i - self.polys.len()].clone()
    }

    fn decompose(tower: &Tower, elems: &[Element]) -> Result<Option<Atoms>> {
        let mut base: Vec<Poly> = Vec::new();
        for e in elems {
            let Some(rf) = e.repr.as_rf() else {
                return Ok(None);
            };
            for p in [&rf.num, &rf.den] {
                let mut work = vec![p.monic().1];
                while let Some(q) = work.pop() {
                    if q.is_constant() {
                        continue;
                    }
                    let mut split = false;
                    for i in 0..base.len() {
                        let g = gcd(&q, &base[i]);
                        if !g.is_one() {
                            let b = base.remove(i);
                            work.push(b.exact_div(&g).unwrap());
                            work.push(q.exact_div(&g).unwrap());
                            work.push(g);
                            split = true;
                            break;
                        }
                    }
                    if !split {
                        base.push(q);
                    }
                }
            }
        }
        let np = base.len();
        let mut consts: Vec<BigInt> = Vec::new();
        let mut const_index: BTreeMap<BigInt, usize> = BTreeMap::new();
        let mut atom_of = |c: BigInt, consts: &mut Vec<BigInt>| -> usize {
            *const_index.entry(c.clone()).or_insert_with(|| {
                consts.push(c);
                np + consts.len() - 1
            })
        };
        let const_exps = |c: &Scalar,
                          consts: &mut Vec<BigInt>,
                          atom_of: &mut dyn FnMut(BigInt, &mut Vec<BigInt>) -> usize|
         -> Result<BTreeSet<usize>> {
            let mut s = BTreeSet::new();
            let cls = scalar_class(c)?;
            match &cls {
                Scalar::Rat(r) => {
                    let n = r.numer().clone();
                    if n.is_negative() {
                        s.insert(atom_of(BigInt::from(-1), consts));
                    }
                    for (p, k) in factor_int(&n)? {
                        if k % 2 == 1 {
                            s.insert(atom_of(p, consts));
                        }
                    }
                }
                Scalar::Mod(v, _) => {
                    if *v != 1 {
                        s.insert(atom_of(BigInt::from(*v), consts));
                    }
                }
            }
            Ok(s)
        };
        let mut exps = Vec::new();
        for e in elems {
            let rf = e.repr.as_rf().unwrap();
            let mut set = BTreeSet::new();
            let mut lc = Scalar::one(tower.p);
            for (p, sign) in [(&rf.num, 1), (&rf.den, -1)] {
                let mut rem = p.clone();
                for (i, b) in base.iter().enumerate() {
                    let mut k = 0;
                    while let Some(q) = rem.exact_div(b) {
                        if rem.is_constant() {
                            break;
                        }
                        rem = q;
                        k += 1;
                    }
                    if k % 2 == 1 && !set.remove(&i) {
                        set.insert(i);
                    }
                }
                let c = rem.constant_value();
                lc = if sign == 1 { lc.mul(&c) } else { lc.div(&c) };
            }
            for i in const_exps(&lc, &mut consts, &mut atom_of)? {
                if !set.remove(&i) {
                    set.insert(i);
                }
            }
            exps.push(set);
        }
        let m1 = Scalar::from_i64(-1, tower.p);
        let minus_one: Vec<usize> = const_exps(&m1, &mut consts, &mut atom_of)?
            .into_iter()
            .collect();
        Ok(Some(Atoms {
            polys: base,
            consts,
            exps,
            minus_one,
        }))
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn hasse_invariant(f: &QuadraticForm) -> BrauerClass {
    let mut s = BrauerClass::zero(&f.tower);
    for i in 0..f.dim() {
        for j in (i + 1)..f.dim() {
            s.symbols.push((f.entries[i].clone(), f.entries[j].clone()));
        }
    }
    s
}

pub fn clifford_invariant(f: &QuadraticForm) -> BrauerClass {
    let s = hasse_invariant(f);
    let t = &f.tower;
    let d = signed_discriminant(f);
    let m1 = t.int(-1);
    let extra = match f.dim() % 8 {
        1 | 2 => None,
        3 | 4 => Some((m1.clone(), -&d)),
        5 | 6 => Some((m1.clone(), m1.clone())),
        _ => Some((m1.clone(), d)),
    };
    match extra {
        Some((x, y)) => s.add(&BrauerClass::symbol(&x, &y)),
        None => s,
    }
}

/// `true` if `x` is a unit (nonzero constant) of the prime field.
pub fn is_prime_constant(e: &Element) -> bool {
    e.as_scalar().is_some_and(|s| !s.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower};
    use crate::forms::form::pfister;

    #[test]
    fn clifford_of_pfister_is_symbol() {
        let q = parse_tower("Q").unwrap();
        for (a, b) in [(2, 3), (-1, -1), (3, 5), (-2, 7), (6, 10)] {
            let p = pfister(&q, &[q.int(a), q.int(b)]).unwrap();
            let diff = clifford_invariant(&p).add(&BrauerClass::symbol(&q.int(a), &q.int(b)));
            assert_eq!(diff.is_trivial().unwrap(), Some(true), "({a},{b})");
        }
        let h = QuadraticForm::diag(&q, &[1, -1]).unwrap();
        assert_eq!(clifford_invariant(&h).is_trivial().unwrap(), Some(true));
    }

    #[test]
    fn laurent_brauer() {
        let k = parse_tower("Q.rat(b).laurent(t)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let c = BrauerClass::symbol(&e("t"), &e("b"));
        assert_eq!(c.is_trivial().unwrap(), Some(false));
        let c = BrauerClass::symbol(&e("t"), &e("b^2"));
        assert_eq!(c.is_trivial().unwrap(), Some(true));
        let c = BrauerClass::symbol(&e("t"), &e("-t"));
        assert_eq!(c.is_trivial().unwrap(), Some(true));
    }

    #[test]
    fn function_field_brauer() {
        let k = parse_tower("Q.rat(b)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        // (b, b) + (b, -1) = 0
        let c = BrauerClass::symbol(&e("b"), &e("b")).add(&BrauerClass::symbol(&e("b"), &e("-1")));
        assert_eq!(c.is_trivial().unwrap(), Some(true));
        // (-1,-1) is nontrivial over Q(b)
        let c = BrauerClass::symbol(&e("-1"), &e("-1"));
        assert_eq!(c.is_trivial().unwrap(), Some(false));
        // (b, 3) is nontrivial: specialize b = 2 gives (2,3) ramified at 3
        let c = BrauerClass::symbol(&e("b"), &e("3"));
        assert_eq!(c.is_trivial().unwrap(), Some(false));
        // (b(b+1), b+1) + (b, b+1) = (b+1, -1), nontrivial at b = 2
        let c = BrauerClass::symbol(&e("b*(b+1)"), &e("b+1"))
            .add(&BrauerClass::symbol(&e("b"), &e("b+1")));
        assert_eq!(c.is_trivial().unwrap(), Some(false));
        let c = c.add(&BrauerClass::symbol(&e("b+1"), &e("-1")));
        assert_eq!(c.is_trivial().unwrap(), Some(true));
    }
}
