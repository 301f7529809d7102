//! Skew-hermitian forms over `(Q, canonical involution)` and the involutions
//! `σ = ρ ⊗ ad(φ)` they define, with transfer to quadratic forms.
//!
//! Over the conic function field `F(Q)` the involution `σ` is adjoint to
//! `⟨⟨d⟩⟩φ`, where `d` is the discriminant of `ρ`.

use std::fmt;

use super::quaternion::QuaternionAlgebra;
use crate::error::{Error, Result};
use crate::fields::{embed, Element, SquareClass, Tower};
use crate::forms::invariants::BrauerClass;
use crate::forms::represent::represents;
use crate::forms::{
    clifford_invariant, discriminant, is_isometric, scale, Certificate, PfisterSum, QuadraticForm,
    Status, Verdict,
};

/// `⟨iα₁,…,iα_r⟩` with `i² = pure_square`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewHermitianForm {
    pub algebra: QuaternionAlgebra,
    pub pure_square: Element,
    pub coefficients: Vec<Element>,
}

impl SkewHermitianForm {
    pub fn new(
        algebra: &QuaternionAlgebra,
        pure_square: &Element,
        coefficients: Vec<Element>,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument("empty skew-hermitian form".into()));
        }
        if pure_square.is_zero() || coefficients.iter().any(Element::is_zero) {
            return Err(Error::ZeroElement);
        }
        for c in &coefficients {
            algebra.tower.check_same(&c.tower)?;
        }
        Ok(SkewHermitianForm {
            algebra: algebra.clone(),
            pure_square: pure_square.clone(),
            coefficients,
        })
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }
}

impl fmt::Display for SkewHermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coefficients.iter().map(|x| format!("i*{x}")).collect();
        write!(f, "<{}>", c.join(","))
    }
}

/// `(Q, ρ) ⊗ Ad(φ)` with `ρ` of discriminant `rho_disc`. `blocks` keeps
/// the Pfister-sum shape of `φ` when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionPresentation {
    pub algebra: QuaternionAlgebra,
    pub rho_disc: Element,
    pub phi: QuadraticForm,
    pub blocks: PfisterSum,
}

impl InvolutionPresentation {
    pub fn new(
        algebra: &QuaternionAlgebra,
        rho_disc: &Element,
        blocks: &PfisterSum,
    ) -> Result<Self> {
        algebra.tower.check_same(&blocks.tower)?;
        algebra.tower.check_same(&rho_disc.tower)?;
        let phi = blocks
            .to_form()?
            .ok_or_else(|| Error::InvalidArgument("phi must be nonempty".into()))?;
        Ok(InvolutionPresentation {
            algebra: algebra.clone(),
            rho_disc: rho_disc.clone(),
            phi,
            blocks: blocks.clone(),
        })
    }

    pub fn from_form(
        algebra: &QuaternionAlgebra,
        rho_disc: &Element,
        phi: &QuadraticForm,
    ) -> Result<Self> {
        InvolutionPresentation::new(algebra, rho_disc, &PfisterSum::from_form(phi))
    }

    pub fn tower(&self) -> &Tower {
        &self.algebra.tower
    }

    /// Degree of `M_r(Q)`.
    pub fn degree(&self) -> usize {
        2 * self.phi.dim()
    }

    pub fn embed(&self, target: &Tower) -> Result<InvolutionPresentation> {
        InvolutionPresentation::new(
            &self.algebra.embed(target)?,
            &embed(&self.rho_disc, target)?,
            &self.blocks.embed(target)?,
        )
    }

    /// `⟨⟨d⟩⟩φ` as a sum of Pfister terms.
    pub fn transfer_blocks(&self) -> Result<PfisterSum> {
        self.blocks.times_pfister(&self.rho_disc)
    }
}

impl fmt::Display for InvolutionPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "inv({}, rho={}, phi={})",
            self.algebra, self.rho_disc, self.blocks
        )
    }
}

pub fn adjoint_presentation(h: &SkewHermitianForm) -> Result<InvolutionPresentation> {
    let phi = QuadraticForm::new(&h.algebra.tower, h.coefficients.clone())?;
    InvolutionPresentation::from_form(&h.algebra, &h.pure_square, &phi)
}

/// `⟨⟨d⟩⟩ ⊗ φ` over the base field.
pub fn transfer_form(s: &InvolutionPresentation) -> Result<QuadraticForm> {
    Ok(s.transfer_blocks()?.to_form()?.unwrap())
}

fn check_conic(s: &InvolutionPresentation, fq: &Tower) -> Result<()> {
    let (a, b) = fq
        .conic_params()
        .ok_or_else(|| Error::ConicMismatch("not a conic field".into()))?;
    let base = fq.parent.as_ref().unwrap();
    if base.as_ref() != s.tower().as_ref() {
        return Err(Error::ConicMismatch(format!(
            "conic over {base}, algebra over {}",
            s.tower()
        )));
    }
    if a != embed(&s.algebra.a, fq)? || b != embed(&s.algebra.b, fq)? {
        return Err(Error::ConicMismatch(format!(
            "conic of ({a},{b}) for {}",
            s.algebra
        )));
    }
    Ok(())
}

/// `⟨⟨d⟩⟩φ` extended to the conic function field `fq` of the algebra.
pub fn morita_transfer(s: &InvolutionPresentation, fq: &Tower) -> Result<QuadraticForm> {
    check_conic(s, fq)?;
    transfer_form(s)?.embed(fq)
}

pub fn e1_invariant(s: &InvolutionPresentation) -> Result<SquareClass> {
    discriminant(&transfer_form(s)?)
}

/// Clifford class of `⟨⟨d⟩⟩φ`; meaningful modulo the class of the algebra.
pub fn e2_invariant(s: &InvolutionPresentation) -> Result<BrauerClass> {
    Ok(clifford_invariant(&transfer_form(s)?))
}

/// Whether `e₂` vanishes modulo `[(a,b)]`: Proved when `c` or `c + (a,b)` is trivial.
pub fn e2_trivial(s: &InvolutionPresentation) -> Result<Verdict> {
    let c = e2_invariant(s)?;
    let c0 = c.triviality()?;
    if c0.is_proved() {
        return Ok(c0);
    }
    let ab = BrauerClass::symbol(&s.algebra.a, &s.algebra.b);
    let c1 = c.add(&ab).triviality()?;
    if c1.is_proved() {
        return Ok(Verdict::proved(Certificate::Chain {
            steps: vec![format!(
                "{c} + ({},{}) is trivial",
                s.algebra.a, s.algebra.b
            )],
        }));
    }
    if c0.is_refuted() && c1.is_refuted() {
        return Ok(Verdict::refuted(Certificate::Chain {
            steps: vec![
                format!(
                    "{c} nontrivial: {}",
                    serde_json::to_string(&c0.certificate).unwrap_or_default()
                ),
                format!(
                    "{c} + ({},{}) nontrivial: {}",
                    s.algebra.a,
                    s.algebra.b,
                    serde_json::to_string(&c1.certificate).unwrap_or_default()
                ),
            ],
        }));
    }
    Ok(Verdict::reduced([c0.obligations, c1.obligations].concat()))
}

fn slot_key(slots: &[Element]) -> Vec<String> {
    let mut k: Vec<String> = slots.iter().map(|s| s.to_string()).collect();
    k.sort();
    k
}

/// `⟨⟨d⟩⟩φ′ ≃ ⟨λ⟩⟨⟨d⟩⟩φ` over the conic function field `fq`. Blocks with
/// equal slots are matched and `λs/s′` is certified as a represented value
/// of the block's Pfister form, which is a similarity factor by roundness.
pub fn iso_generic(
    s: &InvolutionPresentation,
    s2: &InvolutionPresentation,
    lambda: &Element,
    fq: &Tower,
) -> Result<Verdict> {
    if s.algebra != s2.algebra || s.rho_disc != s2.rho_disc {
        return Err(Error::FieldMismatch);
    }
    check_conic(s, fq)?;
    fq.check_same(&lambda.tower)?;
    if lambda.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let d = embed(&s.rho_disc, fq)?;
    let b1 = s.blocks.embed(fq)?;
    let b2 = s2.blocks.embed(fq)?;
    let mut steps = Vec::new();
    let mut used = vec![false; b2.terms.len()];
    let mut matched = b1.terms.len() == b2.terms.len();
    for t in &b1.terms {
        if !matched {
            break;
        }
        let key = slot_key(&t.slots);
        let Some(j) =
            (0..b2.terms.len()).find(|&j| !used[j] && slot_key(&b2.terms[j].slots) == key)
        else {
            matched = false;
            break;
        };
        used[j] = true;
        let t2 = &b2.terms[j];
        let mut slots = vec![d.clone()];
        slots.extend(t.slots.iter().cloned());
        let pi = crate::forms::pfister(fq, &slots)?;
        let mu = (lambda * &t.scale).div(&t2.scale)?;
        let r = represents(&pi, &mu)?;
        if r.status != Status::Proved {
            matched = false;
            break;
        }
        let how = match &r.certificate {
            Certificate::Vector { coords, .. } => format!("at ({})", coords.join(",")),
            c => serde_json::to_string(c).unwrap_or_default(),
        };
        steps.push(format!(
            "{mu} ∈ D({pi}) {how}; hence <{}>{pi} ≃ <{lambda}><{}>{pi}",
            t2.scale, t.scale
        ));
    }
    if matched {
        steps.push(format!(
            "summing blocks: <<{d}>>phi' ≃ <{lambda}><<{d}>>phi over {fq}"
        ));
        return Ok(Verdict::proved(Certificate::Scalar {
            name: "lambda".into(),
            value: lambda.to_string(),
            steps,
        }));
    }
    let f1 = morita_transfer(s, fq)?;
    let f2 = morita_transfer(s2, fq)?;
    is_isometric(&f2, &scale(lambda, &f1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower};

    #[test]
    fn presentation_and_transfer() {
        let k = parse_tower("Q.rat(b).laurent(a)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let q = QuaternionAlgebra::new(&e("a"), &e("b")).unwrap();
        let h = SkewHermitianForm::new(&q, &e("a"), vec![e("1"), e("b+1")]).unwrap();
        let s = adjoint_presentation(&h).unwrap();
        assert_eq!(s.phi.to_string(), "<1,b+1>");
        assert_eq!(s.degree(), 4);
        let fq = q.conic_field().unwrap();
        let t = morita_transfer(&s, &fq).unwrap();
        assert_eq!(t.dim(), 4);
        let other = QuaternionAlgebra::new(&e("a"), &e("b+1"))
            .unwrap()
            .conic_field()
            .unwrap();
        assert!(matches!(
            morita_transfer(&s, &other),
            Err(Error::ConicMismatch(_))
        ));
    }
}
