//! Sums of scaled Pfister forms `Σ ⟨sᵢ⟩⟨⟨slotsᵢ⟩⟩` as Witt-class expressions.
//!
//! A diagonal form is the sum of its entries as 0-fold terms. Residues of a
//! term at a Laurent layer are computed after rewriting
//! `⟨⟨x,y⟩⟩ ≅ ⟨⟨x,−xy⟩⟩` so that at most one slot has odd valuation.

use std::fmt;

use super::form::{pfister, QuadraticForm};
use crate::error::{Error, Result};
use crate::fields::squares::{class_rep_or_self, is_square, tower_supports_classes};
use crate::fields::{embed, residue_unit, valuation, Element, Tower, ValuationSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PfisterTerm {
    pub scale: Element,
    pub slots: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PfisterSum {
    pub tower: Tower,
    pub terms: Vec<PfisterTerm>,
}

fn subsets_products(tower: &Tower, slots: &[Element]) -> Vec<Element> {
    let mut out = vec![tower.one()];
    for x in slots {
        let mx = -x;
        let more: Vec<Element> = out.iter().map(|p| p * &mx).collect();
        out.extend(more);
    }
    out
}

impl PfisterTerm {
    pub fn fold(&self) -> usize {
        self.slots.len()
    }

    /// Slots sorted by printed form, for multiset comparison.
    fn slot_key(&self) -> Vec<String> {
        let mut k: Vec<String> = self.slots.iter().map(|s| s.to_string()).collect();
        k.sort();
        k
    }

    pub fn to_form(&self) -> Result<QuadraticForm> {
        let p = pfister(&self.scale.tower, &self.slots)?;
        super::form::scale(&self.scale, &p)
    }
}

impl PfisterSum {
    pub fn zero(tower: &Tower) -> Self {
        PfisterSum {
            tower: tower.clone(),
            terms: vec![],
        }
    }

    pub fn term(scale: &Element, slots: &[Element]) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if slots.iter().any(Element::is_zero) {
            return Err(Error::ZeroSlot);
        }
        for s in slots {
            scale.tower.check_same(&s.tower)?;
        }
        Ok(PfisterSum {
            tower: scale.tower.clone(),
            terms: vec![PfisterTerm {
                scale: scale.clone(),
                slots: slots.to_vec(),
            }],
        })
    }

    pub fn from_form(f: &QuadraticForm) -> Self {
        PfisterSum {
            tower: f.tower.clone(),
            terms: f
                .entries
                .iter()
                .map(|e| PfisterTerm {
                    scale: e.clone(),
                    slots: vec![],
                })
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.terms.iter().map(|t| 1usize << t.fold()).sum()
    }

    /// Expanded diagonal form; `None` for the empty sum.
    pub fn to_form(&self) -> Result<Option<QuadraticForm>> {
        let mut entries = Vec::new();
        for t in &self.terms {
            entries.extend(t.to_form()?.entries);
        }
        if entries.is_empty() {
            Ok(None)
        } else {
            Ok(Some(QuadraticForm::new(&self.tower, entries)?))
        }
    }

    pub fn add(&self, o: &PfisterSum) -> Result<PfisterSum> {
        self.tower.check_same(&o.tower)?;
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(PfisterSum {
            tower: self.tower.clone(),
            terms,
        })
    }

    pub fn scale(&self, s: &Element) -> Result<PfisterSum> {
        if s.is_zero() {
            return Err(Error::ZeroScalar);
        }
        self.tower.check_same(&s.tower)?;
        Ok(PfisterSum {
            tower: self.tower.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| PfisterTerm {
                    scale: s * &t.scale,
                    slots: t.slots.clone(),
                })
                .collect(),
        })
    }

    pub fn neg(&self) -> PfisterSum {
        self.scale(&self.tower.int(-1)).unwrap()
    }

    /// Multiply by the 1-fold Pfister form `⟨⟨x⟩⟩`.
    pub fn times_pfister(&self, x: &Element) -> Result<PfisterSum> {
        if x.is_zero() {
            return Err(Error::ZeroSlot);
        }
        Ok(PfisterSum {
            tower: self.tower.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut slots = vec![x.clone()];
                    slots.extend(t.slots.iter().cloned());
                    PfisterTerm {
                        scale: t.scale.clone(),
                        slots,
                    }
                })
                .collect(),
        })
    }

    pub fn embed(&self, target: &Tower) -> Result<PfisterSum> {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push(PfisterTerm {
                scale: embed(&t.scale, target)?,
                slots: t
                    .slots
                    .iter()
                    .map(|s| embed(s, target))
                    .collect::<Result<_>>()?,
            });
        }
        Ok(PfisterSum {
            tower: target.clone(),
            terms,
        })
    }

    /// Structural simplification preserving the Witt class: canonical square
    /// classes, removal of terms with a square slot, and cancellation of
    /// `⟨s⟩π ⊥ ⟨s′⟩π` when `−s′/s` is a represented value of `π`.
    pub fn simplify(&self) -> Result<PfisterSum> {
        let canon = tower_supports_classes(&self.tower);
        let mut terms: Vec<PfisterTerm> = Vec::new();
        'outer: for t in &self.terms {
            let mut slots = Vec::new();
            for s in &t.slots {
                if is_square(s)? {
                    continue 'outer;
                }
                slots.push(if canon {
                    class_rep_or_self(s)
                } else {
                    s.clone()
                });
            }
            let scale = if canon {
                class_rep_or_self(&t.scale)
            } else {
                t.scale.clone()
            };
            terms.push(PfisterTerm { scale, slots });
        }
        let mut alive = vec![true; terms.len()];
        for i in 0..terms.len() {
            if !alive[i] {
                continue;
            }
            let ki = terms[i].slot_key();
            for j in (i + 1)..terms.len() {
                if !alive[j] || terms[j].slot_key() != ki {
                    continue;
                }
                let ratio = (-&terms[j].scale).div(&terms[i].scale)?;
                let mut hit = false;
                for d in subsets_products(&self.tower, &terms[i].slots) {
                    if is_square(&ratio.div(&d)?)? {
                        hit = true;
                        break;
                    }
                }
                if hit {
                    alive[i] = false;
                    alive[j] = false;
                    break;
                }
            }
        }
        let terms = terms
            .into_iter()
            .zip(alive)
            .filter(|(_, a)| *a)
            .map(|(t, _)| t)
            .collect();
        Ok(PfisterSum {
            tower: self.tower.clone(),
            terms,
        })
    }

    /// First and second residue forms at the top Laurent layer `v`, as sums
    /// over the residue field.
    pub fn residues(&self, v: &ValuationSpec) -> Result<(PfisterSum, PfisterSum)> {
        let res_tower = self
            .tower
            .parent
            .clone()
            .filter(|_| self.tower.top_laurent() == Some(v.var.as_str()))
            .ok_or_else(|| Error::NotLaurentLayer(v.var.clone()))?;
        let mut first = PfisterSum::zero(&res_tower);
        let mut second = PfisterSum::zero(&res_tower);
        for t in &self.terms {
            let (units, odd) = split_slots(&t.slots, v)?;
            let vs = valuation(&t.scale, v)?;
            let s_bar = residue_unit(&t.scale, v)?;
            let mut push = |parity: i64, scale: Element| {
                let term = PfisterTerm {
                    scale,
                    slots: units.clone(),
                };
                if parity.rem_euclid(2) == 0 {
                    first.terms.push(term);
                } else {
                    second.terms.push(term);
                }
            };
            push(vs, s_bar.clone());
            if let Some(x) = odd {
                let sx = &t.scale * &x;
                push(valuation(&sx, v)?, -&residue_unit(&sx, v)?);
            }
        }
        Ok((first, second))
    }
}

/// Rewrite slots so that at most one has odd valuation; returns the residue
/// units of the even slots and the odd slot itself (in the valued field).
pub fn split_slots(
    slots: &[Element],
    v: &ValuationSpec,
) -> Result<(Vec<Element>, Option<Element>)> {
    let mut odd: Option<Element> = None;
    let mut units = Vec::new();
    for s in slots {
        let k = valuation(s, v)?;
        if k.rem_euclid(2) == 1 {
            match &odd {
                None => {
                    odd = Some(s.clone());
                }
                Some(x) => {
                    let y = -&(x * s);
                    units.push(residue_unit(&y, v)?);
                }
            }
        } else {
            units.push(residue_unit(s, v)?);
        }
    }
    Ok((units, odd))
}

fn scalar_text(e: &Element) -> String {
    let s = e.to_string();
    let simple = s
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || "_*^".contains(c));
    if simple {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for PfisterTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slots.is_empty() {
            return write!(f, "<{}>", self.scale);
        }
        let slots: Vec<String> = self.slots.iter().map(|s| s.to_string()).collect();
        if self.scale.is_one() {
            write!(f, "pf({})", slots.join(","))
        } else {
            write!(f, "{}*pf({})", scalar_text(&self.scale), slots.join(","))
        }
    }
}

impl fmt::Display for PfisterSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // consecutive 0-fold terms print as one diagonal form
        let mut parts: Vec<String> = Vec::new();
        let mut diag: Vec<String> = Vec::new();
        for t in &self.terms {
            if t.slots.is_empty() {
                diag.push(t.scale.to_string());
                continue;
            }
            if !diag.is_empty() {
                parts.push(format!("<{}>", diag.join(",")));
                diag.clear();
            }
            parts.push(t.to_string());
        }
        if !diag.is_empty() {
            parts.push(format!("<{}>", diag.join(",")));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower};

    #[test]
    fn residues_of_generic_sum_shape() {
        let k = parse_tower("Q.rat(b).laurent(t)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let phi = PfisterSum::term(&k.one(), &[e("b+1")])
            .unwrap()
            .add(&PfisterSum::term(&e("t"), &[e("b+2")]).unwrap())
            .unwrap();
        let (r1, r2) = phi.residues(&ValuationSpec::new("t")).unwrap();
        assert_eq!(r1.to_string(), "pf(b+1)");
        assert_eq!(r2.to_string(), "pf(b+2)");
    }

    #[test]
    fn odd_slot_splits_term() {
        let k = parse_tower("Q.rat(b).laurent(a)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let term = PfisterSum::term(&e("3"), &[e("a"), e("b")]).unwrap();
        let (r1, r2) = term.residues(&ValuationSpec::new("a")).unwrap();
        assert_eq!(r1.to_string(), "3*pf(b)");
        assert_eq!(r2.to_string(), "(-3)*pf(b)");
    }

    #[test]
    fn cancellation() {
        let k = parse_tower("Q.rat(b)").unwrap();
        let e = |s: &str| parse_element(s, &k).unwrap();
        let s = PfisterSum::term(&e("2"), &[e("b")])
            .unwrap()
            .add(&PfisterSum::term(&e("2*b"), &[e("b")]).unwrap())
            .unwrap();
        assert!(s.simplify().unwrap().is_empty());
    }
}
