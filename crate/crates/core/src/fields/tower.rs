//! Field towers and their elements.
//!
//! Every element is stored flat: a map from a set of algebraic generators
//! (bit mask) to a rational function in all transcendental variables of the
//! tower. Generator `i` squares to an element involving only generators
//! below `i`, so each generator appears with exponent at most one.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::{is_prime, Characteristic, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Repr {
    pub terms: BTreeMap<u32, RatFunc>,
}

impl Repr {
    pub fn zero() -> Self {
        Repr {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_rf(rf: RatFunc) -> Self {
        Repr::mono(0, rf)
    }

    pub fn mono(mask: u32, rf: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !rf.is_zero() {
            terms.insert(mask, rf);
        }
        Repr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational-function part when no generator occurs.
    pub fn as_rf(&self) -> Option<&RatFunc> {
        match self.terms.len() {
            1 => self.terms.get(&0),
            _ => None,
        }
    }

    pub fn top_bit(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter(|m| **m != 0)
            .map(|m| 31 - m.leading_zeros())
            .max()
    }

    pub fn add(&self, o: &Repr) -> Repr {
        let mut out = self.clone();
        for (m, f) in &o.terms {
            let s = match out.terms.get(m) {
                Some(g) => g.add(f),
                None => f.clone(),
            };
            if s.is_zero() {
                out.terms.remove(m);
            } else {
                out.terms.insert(*m, s);
            }
        }
        out
    }

    pub fn neg(&self) -> Repr {
        Repr {
            terms: self.terms.iter().map(|(m, f)| (*m, f.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Repr) -> Repr {
        self.add(&o.neg())
    }

    pub fn scale_rf(&self, rf: &RatFunc) -> Repr {
        if rf.is_zero() {
            return Repr::zero();
        }
        Repr {
            terms: self.terms.iter().map(|(m, f)| (*m, f.mul(rf))).collect(),
        }
    }

    pub fn remap(&self, map: &[Option<usize>], n: usize, gen_map: &[u32]) -> Repr {
        let mut out = Repr::zero();
        for (m, f) in &self.terms {
            let mut nm = 0u32;
            for (i, bit) in gen_map.iter().enumerate() {
                if m & (1 << i) != 0 {
                    nm |= bit;
                }
            }
            out = out.add(&Repr::mono(nm, f.remap(map, n)));
        }
        out
    }

    fn pad(&self, from: usize, to: usize, ngens: usize) -> Repr {
        let map: Vec<Option<usize>> = (0..from).map(Some).collect();
        let gens: Vec<u32> = (0..ngens).map(|i| 1u32 << i).collect();
        self.remap(&map, to, &gens)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Layer {
    Rationals,
    Finite(u64),
    Rat(String),
    /// Adjoins a square root of an element of the field below.
    Sqrt(Repr),
    Laurent(String),
    /// Function field of the conic `X² − aY² + ab = 0`.
    Conic(Repr, Repr),
}

#[derive(Clone, Debug)]
pub struct Gen {
    pub name: String,
    pub square: Repr,
}

#[derive(Debug)]
pub struct FieldDesc {
    pub layers: Vec<Layer>,
    pub p: Characteristic,
    pub vars: Vec<String>,
    /// Index into `layers` for each variable.
    pub var_layer: Vec<usize>,
    pub gens: Vec<Gen>,
    pub parent: Option<Arc<FieldDesc>>,
}

impl PartialEq for FieldDesc {
    fn eq(&self, o: &Self) -> bool {
        self.layers == o.layers
    }
}

impl Eq for FieldDesc {}

impl Hash for FieldDesc {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.layers.hash(h)
    }
}

pub type Tower = Arc<FieldDesc>;

const RESERVED: &[&str] = &[
    "sqrt", "pf", "inv", "quat", "gsum", "rho", "phi", "x", "Q", "F",
];

impl FieldDesc {
    pub fn rationals() -> Tower {
        Arc::new(FieldDesc {
            layers: vec![Layer::Rationals],
            p: 0,
            vars: vec![],
            var_layer: vec![],
            gens: vec![],
            parent: None,
        })
    }

    pub fn finite(p: u64) -> Result<Tower> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidTower(format!("F({p}) needs an odd prime")));
        }
        Ok(Arc::new(FieldDesc {
            layers: vec![Layer::Finite(p)],
            p,
            vars: vec![],
            var_layer: vec![],
            gens: vec![],
            parent: None,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn top(&self) -> &Layer {
        self.layers.last().unwrap()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        let ok_ident = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok_ident || RESERVED.contains(&name) {
            return Err(Error::InvalidTower(format!("bad variable name `{name}`")));
        }
        if self.var_index(name).is_some() || self.gen_index(name).is_some() {
            return Err(Error::InvalidTower(format!(
                "variable `{name}` already present"
            )));
        }
        Ok(())
    }

    fn with_var(self: &Arc<Self>, name: &str, layer: Layer) -> Result<FieldDesc> {
        self.check_fresh(name)?;
        let n = self.nvars();
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        let mut var_layer = self.var_layer.clone();
        var_layer.push(self.layers.len());
        let gens = self
            .gens
            .iter()
            .map(|g| Gen {
                name: g.name.clone(),
                square: g.square.pad(n, n + 1, self.gens.len()),
            })
            .collect();
        let mut layers = self.layers.clone();
        layers.push(layer);
        Ok(FieldDesc {
            layers,
            p: self.p,
            vars,
            var_layer,
            gens,
            parent: Some(self.clone()),
        })
    }

    /// Purely transcendental extension `k(var)`.
    pub fn rat(self: &Arc<Self>, var: &str) -> Result<Tower> {
        Ok(Arc::new(self.with_var(var, Layer::Rat(var.to_string()))?))
    }

    /// Laurent layer `k((var))`.
    pub fn laurent(self: &Arc<Self>, var: &str) -> Result<Tower> {
        Ok(Arc::new(
            self.with_var(var, Layer::Laurent(var.to_string()))?,
        ))
    }

    /// Quadratic extension by a square root of the non-square `d`.
    pub fn sqrt(self: &Arc<Self>, d: &Element) -> Result<Tower> {
        self.check_same(&d.tower)?;
        if d.is_zero() {
            return Err(Error::InvalidTower("sqrt(0)".into()));
        }
        if self.gens.len() >= 30 {
            return Err(Error::InvalidTower("too many generators".into()));
        }
        if super::squares::is_square(d)? {
            return Err(Error::InvalidTower(format!("{d} is a square")));
        }
        let name = format!("sqrt({d})");
        let mut gens = self.gens.clone();
        gens.push(Gen {
            name,
            square: d.repr.clone(),
        });
        let mut layers = self.layers.clone();
        layers.push(Layer::Sqrt(d.repr.clone()));
        Ok(Arc::new(FieldDesc {
            layers,
            p: self.p,
            vars: self.vars.clone(),
            var_layer: self.var_layer.clone(),
            gens,
            parent: Some(self.clone()),
        }))
    }

    /// Function field of the conic of the quaternion algebra `(a, b)`:
    /// adjoins `X` and `Y` with `X² − aY² + ab = 0`.
    pub fn conic(self: &Arc<Self>, a: &Element, b: &Element) -> Result<Tower> {
        self.check_same(&a.tower)?;
        self.check_same(&b.tower)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidTower("conic with zero slot".into()));
        }
        self.check_fresh("Y")?;
        let mid = Arc::new(self.with_var("X", Layer::Rat("X".into()))?);
        let a2 = embed(a, &mid)?;
        let b2 = embed(b, &mid)?;
        let x = Element::var(&mid, "X")?;
        let d = (&(&x * &x) + &(&a2 * &b2)).div(&a2)?;
        let mut out = Arc::try_unwrap(mid).unwrap_or_else(|m| FieldDesc::clone_desc(&m));
        out.gens.push(Gen {
            name: "Y".into(),
            square: d.repr,
        });
        out.layers.pop();
        out.layers
            .push(Layer::Conic(a.repr.clone(), b.repr.clone()));
        out.parent = Some(self.clone());
        Ok(Arc::new(out))
    }

    /// `(a, b)` of a top conic layer, as elements of this field.
    pub fn conic_params(self: &Arc<Self>) -> Option<(Element, Element)> {
        let Layer::Conic(a, b) = self.top() else {
            return None;
        };
        let base = self.parent.as_ref()?;
        let a = embed(&Element::new(base, a.clone()), self).ok()?;
        let b = embed(&Element::new(base, b.clone()), self).ok()?;
        Some((a, b))
    }

    fn clone_desc(d: &FieldDesc) -> FieldDesc {
        FieldDesc {
            layers: d.layers.clone(),
            p: d.p,
            vars: d.vars.clone(),
            var_layer: d.var_layer.clone(),
            gens: d.gens.clone(),
            parent: d.parent.clone(),
        }
    }

    pub fn check_same(&self, o: &FieldDesc) -> Result<()> {
        if std::ptr::eq(self, o) || self == o {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Name of the top layer's variable when it is a Laurent layer.
    pub fn top_laurent(&self) -> Option<&str> {
        match self.top() {
            Layer::Laurent(v) => Some(v),
            _ => None,
        }
    }

    /// Names of the maximal run of Laurent layers at the top, outermost first.
    pub fn laurent_chain(&self) -> Vec<String> {
        self.layers
            .iter()
            .rev()
            .map_while(|l| match l {
                Layer::Laurent(v) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }

    /// The tower below the top Laurent run.
    pub fn laurent_base(self: &Arc<Self>) -> Tower {
        let mut t = self.clone();
        while t.top_laurent().is_some() {
            t = t.parent.clone().unwrap();
        }
        t
    }

    /// True when some Laurent layer sits below a non-Laurent layer.
    pub fn has_buried_laurent(&self) -> bool {
        let chain = self.laurent_chain().len();
        self.layers[..self.layers.len() - chain]
            .iter()
            .any(|l| matches!(l, Layer::Laurent(_)))
    }

    /// Rebuild the tower with an extra transcendental variable inserted
    /// directly below the top Laurent run.
    pub fn adjoin_below_laurent(self: &Arc<Self>, var: &str) -> Result<Tower> {
        let chain = self.laurent_chain();
        let mut t = self.laurent_base().rat(var)?;
        for v in chain.iter().rev() {
            t = t.laurent(v)?;
        }
        Ok(t)
    }

    pub fn zero(self: &Arc<Self>) -> Element {
        Element {
            tower: self.clone(),
            repr: Repr::zero(),
        }
    }

    pub fn one(self: &Arc<Self>) -> Element {
        self.int(1)
    }

    pub fn int(self: &Arc<Self>, v: i64) -> Element {
        self.scalar(Scalar::from_i64(v, self.p))
    }

    pub fn scalar(self: &Arc<Self>, s: Scalar) -> Element {
        Element {
            tower: self.clone(),
            repr: Repr::from_rf(RatFunc::constant(s, self.nvars())),
        }
    }

    fn repr_mul(&self, x: &Repr, y: &Repr) -> Repr {
        let mut out = Repr::zero();
        for (s, f) in &x.terms {
            for (t, g) in &y.terms {
                let mut term = Repr::mono(s ^ t, f.mul(g));
                let common = s & t;
                for i in 0..32 {
                    if common & (1 << i) != 0 {
                        term = self.repr_mul(&term, &self.gens[i].square);
                    }
                }
                out = out.add(&term);
            }
        }
        out
    }

    fn repr_inv(&self, x: &Repr) -> Option<Repr> {
        if x.is_zero() {
            return None;
        }
        let Some(top) = x.top_bit() else {
            return Some(Repr::from_rf(x.terms[&0].inv()?));
        };
        let bit = 1u32 << top;
        let conj = Repr {
            terms: x
                .terms
                .iter()
                .map(|(m, f)| (*m, if m & bit != 0 { f.neg() } else { f.clone() }))
                .collect(),
        };
        let norm = self.repr_mul(x, &conj);
        debug_assert!(norm.terms.keys().all(|m| m & bit == 0));
        let ni = self.repr_inv(&norm)?;
        Some(self.repr_mul(&conj, &ni))
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(parent) = &self.parent {
            write!(f, "{parent}")?;
            let show = |r: &Repr| {
                Element {
                    tower: parent.clone(),
                    repr: r.clone(),
                }
                .to_string()
            };
            match self.top() {
                Layer::Rat(v) => write!(f, ".rat({v})"),
                Layer::Laurent(v) => write!(f, ".laurent({v})"),
                Layer::Sqrt(d) => write!(f, ".sqrt({})", show(d)),
                Layer::Conic(a, b) => write!(f, ".conic({},{})", show(a), show(b)),
                _ => unreachable!(),
            }
        } else {
            match self.top() {
                Layer::Rationals => write!(f, "Q"),
                Layer::Finite(p) => write!(f, "F({p})"),
                _ => unreachable!(),
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Element {
    pub tower: Tower,
    pub repr: Repr,
}

impl PartialEq for Element {
    fn eq(&self, o: &Self) -> bool {
        self.repr == o.repr && self.tower.check_same(&o.tower).is_ok()
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.repr.hash(h)
    }
}

impl Element {
    pub fn new(tower: &Tower, repr: Repr) -> Self {
        Element {
            tower: tower.clone(),
            repr,
        }
    }

    pub fn from_rf(tower: &Tower, rf: RatFunc) -> Self {
        Element::new(tower, Repr::from_rf(rf))
    }

    /// A transcendental variable or a named generator.
    pub fn var(tower: &Tower, name: &str) -> Result<Self> {
        if let Some(i) = tower.var_index(name) {
            let p = Poly::var(i, tower.p, tower.nvars());
            return Ok(Element::from_rf(tower, RatFunc::from_poly(p)));
        }
        if let Some(i) = tower.gen_index(name) {
            return Ok(Element::new(
                tower,
                Repr::mono(1 << i, RatFunc::one(tower.p, tower.nvars())),
            ));
        }
        Err(Error::UnknownSymbol(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.repr.as_rf().is_some_and(RatFunc::is_one)
    }

    pub fn char(&self) -> Characteristic {
        self.tower.p
    }

    /// Prime-field value when the element is constant.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero(self.tower.p));
        }
        self.repr.as_rf().and_then(RatFunc::constant_value)
    }

    pub fn inv(&self) -> Result<Element> {
        let r = self
            .tower
            .repr_inv(&self.repr)
            .ok_or(Error::DivisionByZero)?;
        Ok(Element::new(&self.tower, r))
    }

    pub fn div(&self, o: &Element) -> Result<Element> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Element> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.tower.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn square(&self) -> Element {
        self * self
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        Element::new(
            &self.tower,
            self.repr
                .scale_rf(&RatFunc::constant(s.clone(), self.tower.nvars())),
        )
    }

    /// Split along generator `i`: `self = p + q·g_i`.
    pub fn split_gen(&self, i: usize) -> (Element, Element) {
        let bit = 1u32 << i;
        let mut p = Repr::zero();
        let mut q = Repr::zero();
        for (m, f) in &self.repr.terms {
            if m & bit != 0 {
                q = q.add(&Repr::mono(m ^ bit, f.clone()));
            } else {
                p = p.add(&Repr::mono(*m, f.clone()));
            }
        }
        (Element::new(&self.tower, p), Element::new(&self.tower, q))
    }

    pub fn involves_var(&self, v: usize) -> bool {
        self.repr.terms.values().any(|f| f.involves(v))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        assert!(self.tower.check_same(&o.tower).is_ok(), "field mismatch");
        Element::new(&self.tower, self.repr.add(&o.repr))
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        assert!(self.tower.check_same(&o.tower).is_ok(), "field mismatch");
        Element::new(&self.tower, self.repr.sub(&o.repr))
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        assert!(self.tower.check_same(&o.tower).is_ok(), "field mismatch");
        Element::new(&self.tower, self.tower.repr_mul(&self.repr, &o.repr))
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::new(&self.tower, self.repr.neg())
    }
}

/// Map an element into another tower, matching variables and generators by name.
pub fn embed(e: &Element, target: &Tower) -> Result<Element> {
    if e.tower.check_same(target).is_ok() {
        return Ok(Element::new(target, e.repr.clone()));
    }
    if e.tower.p != target.p {
        return Err(Error::FieldMismatch);
    }
    let mut map = Vec::new();
    for (i, v) in e.tower.vars.iter().enumerate() {
        match target.var_index(v) {
            Some(j) => map.push(Some(j)),
            None if !e.involves_var(i) => map.push(None),
            None => return Err(Error::UnknownSymbol(v.clone())),
        }
    }
    let mut gen_map = Vec::new();
    for (i, g) in e.tower.gens.iter().enumerate() {
        let used = e.repr.terms.keys().any(|m| m & (1 << i) != 0);
        match target.gen_index(&g.name) {
            Some(j) => gen_map.push(1u32 << j),
            None if !used => gen_map.push(0),
            None => return Err(Error::UnknownSymbol(g.name.clone())),
        }
    }
    Ok(Element::new(
        target,
        e.repr.remap(&map, target.nvars(), &gen_map),
    ))
}
