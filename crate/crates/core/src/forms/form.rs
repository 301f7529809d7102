//! Diagonal quadratic forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{embed, Element, Tower};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    pub tower: Tower,
    pub entries: Vec<Element>,
}

impl QuadraticForm {
    pub fn new(tower: &Tower, entries: Vec<Element>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty form".into()));
        }
        for e in &entries {
            tower.check_same(&e.tower)?;
            if e.is_zero() {
                return Err(Error::ZeroElement);
            }
        }
        Ok(QuadraticForm {
            tower: tower.clone(),
            entries,
        })
    }

    pub fn diag(tower: &Tower, ints: &[i64]) -> Result<Self> {
        QuadraticForm::new(tower, ints.iter().map(|&v| tower.int(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `m` hyperbolic planes.
    pub fn hyperbolic(tower: &Tower, m: usize) -> Result<Self> {
        let mut e = Vec::new();
        for _ in 0..m {
            e.push(tower.one());
            e.push(tower.int(-1));
        }
        QuadraticForm::new(tower, e)
    }

    pub fn negate(&self) -> QuadraticForm {
        QuadraticForm {
            tower: self.tower.clone(),
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    /// Value at a vector.
    pub fn eval(&self, v: &[Element]) -> Element {
        let mut acc = self.tower.zero();
        for (a, x) in self.entries.iter().zip(v) {
            acc = &acc + &(a * &x.square());
        }
        acc
    }

    /// Polar bilinear form `B(x,y) = Σ a_i x_i y_i`.
    pub fn bilinear(&self, x: &[Element], y: &[Element]) -> Element {
        let mut acc = self.tower.zero();
        for ((a, u), w) in self.entries.iter().zip(x).zip(y) {
            acc = &acc + &(a * &(u * w));
        }
        acc
    }

    pub fn embed(&self, target: &Tower) -> Result<QuadraticForm> {
        let e = self
            .entries
            .iter()
            .map(|x| embed(x, target))
            .collect::<Result<Vec<_>>>()?;
        QuadraticForm::new(target, e)
    }

    pub fn determinant(&self) -> Element {
        let mut d = self.tower.one();
        for e in &self.entries {
            d = &d * e;
        }
        d
    }
}

pub fn orth_sum(f: &QuadraticForm, g: &QuadraticForm) -> Result<QuadraticForm> {
    f.tower.check_same(&g.tower)?;
    let mut e = f.entries.clone();
    e.extend(g.entries.iter().cloned());
    QuadraticForm::new(&f.tower, e)
}

pub fn scale(s: &Element, f: &QuadraticForm) -> Result<QuadraticForm> {
    if s.is_zero() {
        return Err(Error::ZeroScalar);
    }
    f.tower.check_same(&s.tower)?;
    QuadraticForm::new(&f.tower, f.entries.iter().map(|e| s * e).collect())
}

pub fn tensor(f: &QuadraticForm, g: &QuadraticForm) -> Result<QuadraticForm> {
    f.tower.check_same(&g.tower)?;
    let mut e = Vec::new();
    for x in &f.entries {
        for y in &g.entries {
            e.push(x * y);
        }
    }
    QuadraticForm::new(&f.tower, e)
}

/// `⟨⟨a₁,…,aₙ⟩⟩ = ⟨1,−a₁⟩ ⊗ ⋯ ⊗ ⟨1,−aₙ⟩`.
pub fn pfister(tower: &Tower, slots: &[Element]) -> Result<QuadraticForm> {
    let mut f = QuadraticForm::new(tower, vec![tower.one()])?;
    for a in slots {
        if a.is_zero() {
            return Err(Error::ZeroSlot);
        }
        tower.check_same(&a.tower)?;
        f = tensor(&QuadraticForm::new(tower, vec![tower.one(), -a])?, &f)?;
    }
    Ok(f)
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower};

    #[test]
    fn pfister_expansion() {
        let k = parse_tower("Q.rat(a).rat(b)").unwrap();
        let a = parse_element("a", &k).unwrap();
        let b = parse_element("b", &k).unwrap();
        assert_eq!(pfister(&k, std::slice::from_ref(&a)).unwrap().to_string(), "<1,-a>");
        assert_eq!(pfister(&k, &[a, b]).unwrap().to_string(), "<1,-a,-b,a*b>");
        assert!(matches!(pfister(&k, &[k.zero()]), Err(Error::ZeroSlot)));
    }

    #[test]
    fn sums_and_scaling() {
        let k = parse_tower("Q.rat(a)").unwrap();
        let one = QuadraticForm::diag(&k, &[1]).unwrap();
        let g = QuadraticForm::new(&k, vec![parse_element("-a", &k).unwrap()]).unwrap();
        assert_eq!(orth_sum(&one, &g).unwrap().to_string(), "<1,-a>");
        assert_eq!(tensor(&one, &g).unwrap(), g);
        assert_eq!(scale(&k.one(), &g).unwrap(), g);
        assert!(matches!(scale(&k.zero(), &g), Err(Error::ZeroScalar)));
    }
}
