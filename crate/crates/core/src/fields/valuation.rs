//! Discrete valuations attached to Laurent layers, and residue maps.

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::Scalar;
use super::tower::{Element, Layer, Repr, Tower};
use crate::error::{Error, Result};

/// The valuation whose uniformizer is the variable of a Laurent layer.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ValuationSpec {
    pub var: String,
}

impl ValuationSpec {
    pub fn new(var: &str) -> Self {
        ValuationSpec {
            var: var.to_string(),
        }
    }

    /// Variable index; checks that the variable belongs to a Laurent layer.
    pub fn index(&self, f: &Tower) -> Result<usize> {
        let j = f
            .var_index(&self.var)
            .ok_or_else(|| Error::UnknownSymbol(self.var.clone()))?;
        match &f.layers[f.var_layer[j]] {
            Layer::Laurent(_) => Ok(j),
            _ => Err(Error::NotLaurentLayer(self.var.clone())),
        }
    }
}

fn ord(p: &Poly, j: usize) -> i64 {
    p.min_degree_in(j) as i64
}

fn rf_valuation(f: &RatFunc, j: usize) -> i64 {
    ord(&f.num, j) - ord(&f.den, j)
}

/// Number of generators present below layer index `layer`.
fn gens_below(f: &Tower, layer: usize) -> usize {
    f.layers[..layer]
        .iter()
        .filter(|l| matches!(l, Layer::Sqrt(_) | Layer::Conic(_, _)))
        .count()
}

pub fn valuation(e: &Element, v: &ValuationSpec) -> Result<i64> {
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    let j = v.index(&e.tower)?;
    let allowed = gens_below(&e.tower, e.tower.var_layer[j]);
    if e.repr.terms.keys().any(|m| (m >> allowed) != 0) {
        return Err(Error::UnsupportedTower(format!(
            "generator above the {}-adic layer",
            v.var
        )));
    }
    Ok(e.repr
        .terms
        .values()
        .map(|f| rf_valuation(f, j))
        .min()
        .unwrap())
}

/// Image of `e·t^(−v(e))` in the residue field; the Laurent layer must be on top.
pub fn residue_unit(e: &Element, v: &ValuationSpec) -> Result<Element> {
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    let f = &e.tower;
    if f.top_laurent() != Some(v.var.as_str()) {
        return Err(Error::NotLaurentLayer(v.var.clone()));
    }
    let j = f.nvars() - 1;
    let val = valuation(e, v)?;
    let parent = f.parent.clone().unwrap();
    let zero = Scalar::zero(f.p);
    let map: Vec<Option<usize>> = (0..f.nvars())
        .map(|i| if i < j { Some(i) } else { None })
        .collect();
    let mut out = Repr::zero();
    for (m, rf) in &e.repr.terms {
        if rf_valuation(rf, j) != val {
            continue;
        }
        let n = rf
            .num
            .shift_down(j, ord(&rf.num, j) as u32)
            .eval_var(j, &zero);
        let d = rf
            .den
            .shift_down(j, ord(&rf.den, j) as u32)
            .eval_var(j, &zero);
        let r = RatFunc::new(n, d).remap(&map, j);
        out = out.add(&Repr::mono(*m, r));
    }
    Ok(Element::new(&parent, out))
}

/// The uniformizer `t` raised to `k`, as an element of `f`.
pub fn uniformizer_power(f: &Tower, v: &ValuationSpec, k: i64) -> Result<Element> {
    Element::var(f, &v.var)?.pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::expr::{parse_element, parse_tower};

    #[test]
    fn valuation_examples() {
        let f = parse_tower("Q.rat(b).laurent(a).laurent(t)").unwrap();
        let t = ValuationSpec::new("t");
        let e = |s: &str| parse_element(s, &f).unwrap();
        assert_eq!(valuation(&e("t^2*(b+1)"), &t).unwrap(), 2);
        assert_eq!(valuation(&e("a/t"), &t).unwrap(), -1);
        assert_eq!(valuation(&e("t+t^2"), &t).unwrap(), 1);
        let r = residue_unit(&e("t^2*(b+1)"), &t).unwrap();
        assert_eq!(r.to_string(), "b+1");
        assert_eq!(residue_unit(&e("3"), &t).unwrap().to_string(), "3");
        assert!(matches!(
            residue_unit(&e("a"), &ValuationSpec::new("a")),
            Err(Error::NotLaurentLayer(_))
        ));
        assert!(matches!(
            valuation(&e("b"), &ValuationSpec::new("b")),
            Err(Error::NotLaurentLayer(_))
        ));
    }
}
