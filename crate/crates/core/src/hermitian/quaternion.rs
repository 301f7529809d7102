//! Quaternion algebras `(a,b)` and their splitting.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{embed, Element, Tower};
use crate::forms::{is_isotropic, pfister, Certificate, QuadraticForm, Status, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub tower: Tower,
    pub a: Element,
    pub b: Element,
}

impl QuaternionAlgebra {
    pub fn new(a: &Element, b: &Element) -> Result<Self> {
        a.tower.check_same(&b.tower)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroSlot);
        }
        Ok(QuaternionAlgebra {
            tower: a.tower.clone(),
            a: a.clone(),
            b: b.clone(),
        })
    }

    pub fn norm_form(&self) -> Result<QuadraticForm> {
        pfister(&self.tower, &[self.a.clone(), self.b.clone()])
    }

    /// The pure part `⟨−a,−b,ab⟩` completed by `⟨1⟩`: `⟨1,−a,−b⟩`.
    pub fn conic_form(&self) -> Result<QuadraticForm> {
        QuadraticForm::new(&self.tower, vec![self.tower.one(), -&self.a, -&self.b])
    }

    pub fn embed(&self, target: &Tower) -> Result<QuaternionAlgebra> {
        QuaternionAlgebra::new(&embed(&self.a, target)?, &embed(&self.b, target)?)
    }

    /// Function field of the associated conic.
    pub fn conic_field(&self) -> Result<Tower> {
        self.tower.conic(&self.a, &self.b)
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quat({},{})", self.a, self.b)
    }
}

/// Proved: split. Refuted: division algebra.
pub fn is_split(q: &QuaternionAlgebra) -> Result<Verdict> {
    let f = q.conic_form()?;
    let r = is_isotropic(&f)?;
    Ok(match r.status {
        Status::Proved => r,
        Status::Refuted => Verdict::refuted(match r.certificate {
            Certificate::None => Certificate::Chain {
                steps: vec![format!("{f} is anisotropic")],
            },
            c => c,
        }),
        Status::Reduced => r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower};

    #[test]
    fn splitting() {
        let k = parse_tower("Q.rat(b)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        assert!(is_split(&QuaternionAlgebra::new(&e("1"), &e("b")).unwrap())
            .unwrap()
            .is_proved());
        let f5 = parse_tower("F(5)").unwrap();
        let q = QuaternionAlgebra::new(&f5.int(2), &f5.int(3)).unwrap();
        assert!(is_split(&q).unwrap().is_proved());
        let k = parse_tower("Q.rat(b).laurent(a).laurent(t)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        assert!(is_split(&QuaternionAlgebra::new(&e("a"), &e("b")).unwrap())
            .unwrap()
            .is_refuted());
    }
}
