//! Membership in Pfister ideals `⟨⟨x₁,…,xₙ⟩⟩·W(k)`.
//!
//! The kernel of `W(k) → W(k(C))` for the conic `C` of `(a,b)` is
//! `⟨⟨a,b⟩⟩·W(k)`, so conic kernel membership is the 2-slot case.
//!
//! At a Laurent layer with unit slots `π`, `θ ∈ πW(K)` iff both residues lie
//! in `π̄W(k)`. With one odd slot `α` and the rest `π′`, the condition is
//! `∂₁θ ∈ π̄′W(k)` and `∂₂θ = ⟨−ᾱ⟩∂₁θ`.

use super::form::QuadraticForm;
use super::invariants::negative_tests_sound;
use super::invariants::{clifford_invariant, signed_discriminant, square_status, BrauerClass};
use super::pfister::{split_slots, PfisterSum};
use super::verdict::{Certificate, Status, Verdict};
use super::witt::witt_decompose;
use crate::error::{Error, Result};
use crate::fields::{embed, is_square, residue_unit, Element, ValuationSpec};

fn slots_text(slots: &[Element]) -> String {
    let s: Vec<String> = slots.iter().map(|x| x.to_string()).collect();
    format!("pf({})", s.join(","))
}

fn membership_statement(theta: &PfisterSum, slots: &[Element]) -> String {
    format!("{theta} ∈ {}·W({})", slots_text(slots), theta.tower)
}

/// `θ = 0` in the Witt group.
pub fn is_hyperbolic(theta: &PfisterSum) -> Result<Verdict> {
    let s = theta.simplify()?;
    if s.is_empty() {
        return Ok(Verdict::proved(Certificate::Chain {
            steps: vec![format!("{theta} cancels to 0")],
        }));
    }
    if s.dim() % 2 == 1 {
        return Ok(Verdict::refuted(Certificate::Invariants {
            detail: "odd dimension".into(),
        }));
    }
    let f = s.to_form()?.unwrap();
    match witt_decompose(&f) {
        Ok(w) if w.is_zero() => Ok(Verdict::proved(Certificate::Chain {
            steps: w.provenance,
        })),
        Ok(w) if negative_tests_sound(&f.tower) => Ok(Verdict::refuted(Certificate::Chain {
            steps: [
                w.provenance.clone(),
                vec![format!("anisotropic kernel {w}")],
            ]
            .concat(),
        })),
        Ok(_) | Err(Error::UnsupportedTower(_)) => {
            Ok(Verdict::reduced_one(format!("{s} = 0 in W({})", s.tower)))
        }
        Err(e) => Err(e),
    }
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

fn combine(parts: Vec<Verdict>, proved: Certificate, what: &str) -> Verdict {
    if let Some(r) = parts.iter().find(|v| v.is_refuted()) {
        return Verdict::refuted(Certificate::Chain {
            steps: vec![format!(
                "{what}: {}",
                serde_json::to_string(&r.certificate).unwrap_or_default()
            )],
        });
    }
    if parts.iter().all(Verdict::is_proved) {
        return Verdict::proved(proved);
    }
    Verdict::reduced(parts.into_iter().flat_map(|v| v.obligations).collect())
}

/// Invariant obstructions: dimension parity, discriminant, Clifford class.
fn invariant_obstruction(theta: &PfisterSum, slots: &[Element]) -> Result<Option<Verdict>> {
    if slots.is_empty() {
        return Ok(None);
    }
    if theta.dim() % 2 == 1 {
        return Ok(Some(Verdict::refuted(Certificate::Invariants {
            detail: format!("{theta} has odd dimension"),
        })));
    }
    let Some(f) = theta.to_form()? else {
        return Ok(None);
    };
    let d = signed_discriminant(&f);
    let ok_disc = if slots.len() == 1 {
        let r = square_status(&d)?;
        let s = square_status(&d.div(&slots[0])?)?;
        match (r, s) {
            (Some(false), Some(false)) => Some(false),
            (Some(true), _) | (_, Some(true)) => Some(true),
            _ => None,
        }
    } else {
        square_status(&d)?
    };
    if ok_disc == Some(false) {
        return Ok(Some(Verdict::refuted(Certificate::Invariants {
            detail: format!("discriminant {d} outside the ideal's classes"),
        })));
    }
    if slots.len() == 2 && ok_disc == Some(true) {
        let c = clifford_invariant(&f);
        let ab = BrauerClass::symbol(&slots[0], &slots[1]);
        let c0 = c.triviality()?;
        let c1 = c.add(&ab).triviality()?;
        if c0.is_refuted() && c1.is_refuted() {
            return Ok(Some(Verdict::refuted(Certificate::Invariants {
                detail: format!(
                    "Clifford invariant of {theta} is neither 0 nor ({},{})",
                    slots[0], slots[1]
                ),
            })));
        }
    }
    Ok(None)
}

pub fn ideal_membership(theta: &PfisterSum, slots: &[Element]) -> Result<Verdict> {
    for x in slots {
        theta.tower.check_same(&x.tower)?;
        if x.is_zero() {
            return Err(Error::ZeroSlot);
        }
    }
    let th = theta.simplify()?;
    if th.is_empty() || slots.is_empty() {
        return Ok(Verdict::proved(Certificate::Chain {
            steps: vec![format!("{theta} simplifies to {th}")],
        }));
    }
    let mut live = Vec::new();
    for x in slots {
        if !is_square(x)? {
            live.push(x.clone());
        }
    }
    if live.len() < slots.len() {
        // a square slot makes the ideal zero
        return is_hyperbolic(&th);
    }
    if structural(&th, slots)? {
        return Ok(Verdict::proved(Certificate::Chain {
            steps: vec![format!(
                "every term of {th} is a multiple of {}",
                slots_text(slots)
            )],
        }));
    }
    if let Some(v) = invariant_obstruction(&th, slots)? {
        return Ok(v);
    }
    if let Some(t) = th.tower.top_laurent() {
        return laurent_membership(&th, slots, t.to_string());
    }
    if slots.len() == 1 {
        if let Ok(l) = th.tower.sqrt(&slots[0]) {
            let r = is_hyperbolic(&th.embed(&l)?)?;
            return Ok(match r.status {
                Status::Reduced => Verdict::reduced_one(membership_statement(&th, slots)),
                _ => r,
            });
        }
    }
    Ok(Verdict::reduced_one(membership_statement(&th, slots)))
}

fn laurent_membership(theta: &PfisterSum, slots: &[Element], t: String) -> Result<Verdict> {
    let v = ValuationSpec::new(&t);
    let (d1, d2) = theta.residues(&v)?;
    let (units, odd) = split_slots(slots, &v)?;
    let cert = Certificate::Residue {
        variable: t.clone(),
        detail: "both residue conditions hold".into(),
    };
    match odd {
        None => {
            let parts = vec![
                ideal_membership(&d1, &units)?,
                ideal_membership(&d2, &units)?,
            ];
            Ok(combine(parts, cert, &format!("residue at {t}")))
        }
        Some(alpha) => {
            let abar = residue_unit(&alpha, &v)?;
            let first = ideal_membership(&d1, &units)?;
            let rel = d2.add(&d1.scale(&abar)?)?;
            let second = is_hyperbolic(&rel)?;
            Ok(combine(
                vec![first, second],
                cert,
                &format!("residue at {t}"),
            ))
        }
    }
}

/// Positive-only membership test: cancellation, structural multiples and
/// the residue criteria down the Laurent chain. `None` means "not shown".
pub fn membership_by_residues(
    theta: &PfisterSum,
    slots: &[Element],
) -> Result<Option<Vec<String>>> {
    let th = theta.simplify()?;
    if th.is_empty() {
        return Ok(Some(vec![format!("{theta} cancels over {}", theta.tower)]));
    }
    if structural(&th, slots)? {
        return Ok(Some(vec![format!(
            "every term of {th} is a multiple of {}",
            slots_text(slots)
        )]));
    }
    let Some(t) = th.tower.top_laurent().map(str::to_string) else {
        return Ok(None);
    };
    let v = ValuationSpec::new(&t);
    let (d1, d2) = th.residues(&v)?;
    let (units, odd) = split_slots(slots, &v)?;
    let mut s2 = Vec::new();
    match odd {
        None => match membership_by_residues(&d2, &units)? {
            Some(s) => s2 = s,
            None => return Ok(None),
        },
        Some(alpha) => {
            let rel = d2.add(&d1.scale(&residue_unit(&alpha, &v)?)?)?.simplify()?;
            if !rel.is_empty() {
                return Ok(None);
            }
        }
    }
    let Some(mut s1) = membership_by_residues(&d1, &units)? else {
        return Ok(None);
    };
    s1.extend(s2);
    s1.push(format!("both residue conditions at {t} hold"));
    Ok(Some(s1))
}

/// `θ ∈ ⟨⟨a,b⟩⟩W(k)`, the kernel of extension to the conic function field.
pub fn conic_kernel_membership(theta: &QuadraticForm, a: &Element, b: &Element) -> Result<Verdict> {
    theta.tower.check_same(&a.tower)?;
    theta.tower.check_same(&b.tower)?;
    ideal_membership(&PfisterSum::from_form(theta), &[a.clone(), b.clone()])
}

/// Embed a membership question into a larger tower.
pub fn embed_slots(slots: &[Element], target: &crate::fields::Tower) -> Result<Vec<Element>> {
    slots.iter().map(|s| embed(s, target)).collect()
}
