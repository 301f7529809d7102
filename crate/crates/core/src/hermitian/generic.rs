//! Generic sums `h = ĥ₁ ⊥ ⟨t⟩ĥ₂` over `k((t))` and their residues.

use super::involution::{adjoint_presentation, transfer_form, SkewHermitianForm};
use crate::error::{Error, Result};
use crate::fields::{embed, Element, Tower};
use crate::forms::kernel::is_hyperbolic;
use crate::forms::{
    scale, witt_decompose, Obligation, PfisterSum, QuadraticForm, ResiduePair, Status,
};

#[derive(Clone, Debug)]
pub struct GenericSum {
    pub h1: SkewHermitianForm,
    pub h2: SkewHermitianForm,
    pub variable: String,
    pub result: SkewHermitianForm,
}

impl GenericSum {
    pub fn base(&self) -> &Tower {
        &self.h1.algebra.tower
    }
}

pub fn generic_sum(h1: &SkewHermitianForm, h2: &SkewHermitianForm, t: &str) -> Result<GenericSum> {
    if h1.algebra != h2.algebra || h1.pure_square != h2.pure_square {
        return Err(Error::FieldMismatch);
    }
    let ext = h1.algebra.tower.laurent(t)?;
    let tv = Element::var(&ext, t)?;
    let mut coeffs = Vec::new();
    for c in &h1.coefficients {
        coeffs.push(embed(c, &ext)?);
    }
    for c in &h2.coefficients {
        coeffs.push(&tv * &embed(c, &ext)?);
    }
    let result = SkewHermitianForm::new(
        &h1.algebra.embed(&ext)?,
        &embed(&h1.pure_square, &ext)?,
        coeffs,
    )?;
    Ok(GenericSum {
        h1: h1.clone(),
        h2: h2.clone(),
        variable: t.to_string(),
        result,
    })
}

#[derive(Clone, Debug)]
pub struct GenericResidues {
    /// Transfer-side classes of `h₁` and of `⟨ū⟩h₂` (or `h₂` when `e = 1`).
    pub pair: ResiduePair,
    /// Both residue classes are certified non-hyperbolic.
    pub ramified: bool,
    pub obligations: Vec<Obligation>,
}

/// Residues of `Ad(h)` over an extension `K/k((t))` with odd ramification
/// index `e`, where `t ≡ uπ` for a uniformizer `π` and a unit `u` whose
/// residue `ū` stays symbolic.
pub fn generic_sum_residues(g: &GenericSum, e: i64) -> Result<GenericResidues> {
    if e < 1 {
        return Err(Error::InvalidArgument(format!("ramification index {e}")));
    }
    if e % 2 == 0 {
        return Err(Error::EvenRamification(e));
    }
    let q1 = transfer_form(&adjoint_presentation(&g.h1)?)?;
    let q2 = transfer_form(&adjoint_presentation(&g.h2)?)?;
    let second: QuadraticForm = if e == 1 {
        q2.clone()
    } else {
        let k = g.base().adjoin_below_laurent("ubar")?;
        let ubar = Element::var(&k, "ubar")?;
        scale(&ubar, &q2.embed(&k)?)?
    };
    let pair = ResiduePair {
        first: witt_decompose(&q1)?,
        second: witt_decompose(&second)?,
    };
    let v1 = is_hyperbolic(&PfisterSum::from_form(&q1))?;
    let v2 = is_hyperbolic(&PfisterSum::from_form(&q2))?;
    let ramified = v1.status == Status::Refuted && v2.status == Status::Refuted;
    let mut obligations = Vec::new();
    if ramified {
        obligations.push(Obligation::new(format!(
            "v(G) ⊆ 2Γ: h1 = {} and h2 = {} not similar",
            g.h1, g.h2
        )));
    }
    Ok(GenericResidues {
        pair,
        ramified,
        obligations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower, ValuationSpec};
    use crate::forms::springer_residues;
    use crate::hermitian::quaternion::QuaternionAlgebra;

    #[test]
    fn concatenation_and_residues() {
        let k = parse_tower("F(5).laurent(a)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let q = QuaternionAlgebra::new(&e("a"), &e("2")).unwrap();
        let h1 = SkewHermitianForm::new(&q, &e("a"), vec![e("1"), e("2")]).unwrap();
        let h2 = SkewHermitianForm::new(&q, &e("a"), vec![e("1"), e("2")]).unwrap();
        let g = generic_sum(&h1, &h2, "t").unwrap();
        assert_eq!(g.result.rank(), 4);
        assert_eq!(g.result.to_string(), "<i*1,i*2,i*t,i*2*t>");
        let tr = transfer_form(&adjoint_presentation(&g.result).unwrap()).unwrap();
        let rp = springer_residues(&tr, &ValuationSpec::new("t")).unwrap();
        let r = generic_sum_residues(&g, 1).unwrap();
        assert_eq!(rp.first.witt_index, r.pair.first.witt_index);
        assert_eq!(rp.second.witt_index, r.pair.second.witt_index);
        assert!(r.ramified);
        assert_eq!(r.obligations.len(), 1);
        assert!(matches!(
            generic_sum_residues(&g, 2),
            Err(Error::EvenRamification(2))
        ));
        let r3 = generic_sum_residues(&g, 3).unwrap();
        assert!(r3.pair.second.tower.var_index("ubar").is_some());
    }

    #[test]
    fn hyperbolic_residue_is_not_ramified() {
        let k = parse_tower("F(5).laurent(a)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let q = QuaternionAlgebra::new(&e("a"), &e("2")).unwrap();
        // <1,-1> transfers to a hyperbolic form
        let h1 = SkewHermitianForm::new(&q, &e("a"), vec![e("1"), e("-1")]).unwrap();
        let h2 = SkewHermitianForm::new(&q, &e("a"), vec![e("1")]).unwrap();
        let g = generic_sum(&h1, &h2, "t").unwrap();
        let r = generic_sum_residues(&g, 1).unwrap();
        assert!(!r.ramified);
        assert!(r.pair.first.is_zero());
    }
}
