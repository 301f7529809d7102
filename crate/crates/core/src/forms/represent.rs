//! Represented values and similarity factors.
//!
//! Over the function field of the conic `X² − aY² + ab = 0` the 2-fold
//! Pfister form `⟨⟨a,x⟩⟩ = ⟨1,−a,−x,ax⟩` has the explicit values
//!
//! * `−2amY` at `(X, Y+m, 0, 1)` when `x − b = m²`;
//! * `−2aY(m₁ − m₂x₁/x₂)` at `(X, Y+m₁, X/x₂, (Y+m₂)/x₂)` when
//!   `x = x₁x₂` and `xᵢ − b = mᵢ²`.

use super::form::{pfister, scale, QuadraticForm};
use super::isotropy::is_isotropic;
use super::verdict::{Certificate, Status, Verdict};
use super::witt::is_isometric;
use crate::error::{Error, Result};
use crate::fields::squares::sqrt_exact;
use crate::fields::{Element, Tower};

fn vector_cert(v: &[Element], value: &Element) -> Certificate {
    Certificate::Vector {
        coords: v.iter().map(|x| x.to_string()).collect(),
        value: value.to_string(),
    }
}

/// `r·v` with `r² = e/f(v)`, if that ratio is an exact square.
fn rescale_to(f: &QuadraticForm, v: &[Element], e: &Element) -> Result<Option<Vec<Element>>> {
    let val = f.eval(v);
    if val.is_zero() {
        return Ok(None);
    }
    let Some(r) = sqrt_exact(&e.div(&val)?) else {
        return Ok(None);
    };
    let w: Vec<Element> = v.iter().map(|x| &r * x).collect();
    debug_assert_eq!(&f.eval(&w), e);
    Ok(Some(w))
}

/// Positions of `(1, −a, −x, ax)` in `f` and the slot `x`, if `f` is
/// `⟨⟨a,x⟩⟩` or `⟨⟨x,a⟩⟩` for the conic parameter `a`.
fn conic_pfister_shape(f: &QuadraticForm, a: &Element) -> Result<Option<([usize; 4], Element)>> {
    if f.dim() != 4 || !f.entries[0].is_one() {
        return Ok(None);
    }
    let ma = -a;
    for (ia, ix) in [(1usize, 2usize), (2, 1)] {
        if f.entries[ia] != ma {
            continue;
        }
        let x = -&f.entries[ix];
        let slots = if ia == 1 {
            vec![a.clone(), x.clone()]
        } else {
            vec![x.clone(), a.clone()]
        };
        if pfister(&f.tower, &slots)? == *f {
            return Ok(Some(([0, ia, ix, 3], x)));
        }
    }
    Ok(None)
}

fn place(tower: &Tower, pos: [usize; 4], c: [Element; 4]) -> Vec<Element> {
    let mut v = vec![tower.zero(); 4];
    for (p, x) in pos.iter().zip(c) {
        v[*p] = x;
    }
    v
}

/// Candidates `m` with `b + m²` tried as factors of a slot.
fn m_candidates(tower: &Tower) -> Vec<Element> {
    let mut out = Vec::new();
    for k in 1..=5 {
        out.push(tower.int(k));
        out.push(tower.int(-k));
    }
    if let Some(base) = tower.parent.as_ref() {
        for v in &base.vars {
            if let Ok(x) = Element::var(tower, v) {
                out.push(x.clone());
                out.push(-&x);
            }
        }
    }
    out
}

/// Explicit vectors of `⟨⟨a,x⟩⟩` over the conic function field, with their values.
pub fn conic_vectors(f: &QuadraticForm) -> Result<Vec<(Vec<Element>, Element)>> {
    let t = &f.tower;
    let Some((a, b)) = t.conic_params() else {
        return Ok(vec![]);
    };
    let Some((pos, x)) = conic_pfister_shape(f, &a)? else {
        return Ok(vec![]);
    };
    let xv = Element::var(t, "X")?;
    let yv = Element::var(t, "Y")?;
    let mut out = Vec::new();
    if let Some(m) = sqrt_exact(&(&x - &b)) {
        for m in [m.clone(), -&m] {
            let v = place(t, pos, [xv.clone(), &yv + &m, t.zero(), t.one()]);
            out.push((v.clone(), f.eval(&v)));
        }
    }
    for m1 in m_candidates(t) {
        let x1 = &b + &m1.square();
        let x2 = x.div(&x1)?;
        let Some(m2) = sqrt_exact(&(&x2 - &b)) else {
            continue;
        };
        if x2.is_one() {
            continue;
        }
        let ix2 = x2.inv()?;
        for m2 in [m2.clone(), -&m2] {
            let v = place(
                t,
                pos,
                [xv.clone(), &yv + &m1, &xv * &ix2, &(&yv + &m2) * &ix2],
            );
            let val = f.eval(&v);
            if !val.is_zero() {
                out.push((v, val));
            }
        }
    }
    Ok(out)
}

pub fn represents(f: &QuadraticForm, e: &Element) -> Result<Verdict> {
    represents_with(f, e, &[])
}

/// As `represents`, trying the given vectors first.
pub fn represents_with(f: &QuadraticForm, e: &Element, hints: &[Vec<Element>]) -> Result<Verdict> {
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    f.tower.check_same(&e.tower)?;
    let t = &f.tower;
    let n = f.dim();
    for i in 0..n {
        let mut v = vec![t.zero(); n];
        v[i] = t.one();
        if let Some(w) = rescale_to(f, &v, e)? {
            return Ok(Verdict::proved(vector_cert(&w, e)));
        }
    }
    for h in hints {
        if let Some(w) = rescale_to(f, h, e)? {
            return Ok(Verdict::proved(vector_cert(&w, e)));
        }
    }
    for (v, _) in conic_vectors(f)? {
        if let Some(w) = rescale_to(f, &v, e)? {
            return Ok(Verdict::proved(vector_cert(&w, e)));
        }
    }
    let iso = is_isotropic(f)?;
    if let Certificate::Vector { coords, .. } = &iso.certificate {
        let v = parse_vec(t, coords)?;
        let k = (0..n).find(|&i| !v[i].is_zero()).unwrap();
        let mut w = vec![t.zero(); n];
        w[k] = t.one();
        // f(αv + w) = 2αB(v,w) + f(w)
        let alpha = (e - &f.eval(&w)).div(&(&t.int(2) * &f.bilinear(&v, &w)))?;
        let x: Vec<Element> = v.iter().zip(&w).map(|(a, b)| &(&alpha * a) + b).collect();
        debug_assert_eq!(&f.eval(&x), e);
        return Ok(Verdict::proved(vector_cert(&x, e)));
    }
    let mut ext = f.entries.clone();
    ext.push(-e);
    let g = QuadraticForm::new(t, ext)?;
    let r = is_isotropic(&g)?;
    match (&r.status, &r.certificate) {
        (Status::Proved, Certificate::Vector { coords, .. }) => {
            let v = parse_vec(t, coords)?;
            let z = v[n].clone();
            if !z.is_zero() {
                let iz = z.inv()?;
                let x: Vec<Element> = v[..n].iter().map(|c| c * &iz).collect();
                return Ok(Verdict::proved(vector_cert(&x, e)));
            }
            Ok(Verdict::proved(Certificate::Chain {
                steps: vec![format!("{f} is isotropic, hence universal")],
            }))
        }
        (Status::Proved, c) => Ok(Verdict::proved(c.clone())),
        (Status::Refuted, c) => Ok(Verdict::refuted(c.clone())),
        (Status::Reduced, _) => Ok(Verdict::reduced_one(format!("{e} in D({f}) over {t}"))),
    }
}

fn parse_vec(t: &Tower, coords: &[String]) -> Result<Vec<Element>> {
    coords
        .iter()
        .map(|c| crate::fields::parse_element(c, t))
        .collect()
}

/// `(s, slots)` with `f = ⟨s⟩⟨⟨slots⟩⟩` entrywise, if `f` has that shape.
pub fn as_scaled_pfister(f: &QuadraticForm) -> Result<Option<(Element, Vec<Element>)>> {
    let n = f.dim();
    if !n.is_power_of_two() {
        return Ok(None);
    }
    let s = f.entries[0].clone();
    let mut slots = Vec::new();
    let mut k = 1;
    while k < n {
        slots.push((-&f.entries[k]).div(&s)?);
        k <<= 1;
    }
    let p = scale(&s, &pfister(&f.tower, &slots)?)?;
    Ok((p == *f).then_some((s, slots)))
}

/// `⟨µ⟩f ≃ f`. For `f = ⟨s⟩π` with `π` Pfister, `G(f) = G(π) = D(π)`.
pub fn similarity_factor_check(f: &QuadraticForm, mu: &Element) -> Result<Verdict> {
    if mu.is_zero() {
        return Err(Error::ZeroScalar);
    }
    if sqrt_exact(mu).is_some() {
        return Ok(Verdict::proved(Certificate::Chain {
            steps: vec![format!("{mu} is a square")],
        }));
    }
    if let Some((s, slots)) = as_scaled_pfister(f)? {
        let pi = pfister(&f.tower, &slots)?;
        let r = represents(&pi, mu)?;
        return Ok(match r.status {
            Status::Proved => Verdict::proved(Certificate::Scalar {
                name: "mu".into(),
                value: mu.to_string(),
                steps: vec![
                    format!("{f} = <{s}>{pi}"),
                    format!("{mu} in D({pi}): {}", cert_text(&r.certificate)),
                    "Pfister forms are round, and G(<s>pi) = G(pi)".into(),
                ],
            }),
            Status::Refuted => Verdict::refuted(Certificate::Chain {
                steps: vec![
                    format!("{mu} not in D({pi}): {}", cert_text(&r.certificate)),
                    "an anisotropic Pfister form has G = D".into(),
                ],
            }),
            Status::Reduced => r,
        });
    }
    is_isometric(&scale(mu, f)?, f)
}

/// Rewriting rule: a form similar to the Pfister form `π` that represents 1
/// is isometric to `π`. Similarity is taken as an input assumption.
pub fn similar_pfister_rule(
    f: &QuadraticForm,
    slots: &[Element],
    assume_similar: bool,
) -> Result<Verdict> {
    if !assume_similar {
        return Err(Error::InvalidArgument(
            "rule requires the form to be similar to a Pfister form".into(),
        ));
    }
    let pi = pfister(&f.tower, slots)?;
    if f.dim() != pi.dim() {
        return Err(Error::InvalidArgument(
            "dimension differs from the Pfister form".into(),
        ));
    }
    let r = represents(f, &f.tower.one())?;
    Ok(match r.status {
        Status::Proved => Verdict::proved(Certificate::Chain {
            steps: vec![
                format!("{f} similar to {pi} (assumed)"),
                format!("{f} represents 1: {}", cert_text(&r.certificate)),
                format!("hence {f} isometric to {pi}"),
            ],
        }),
        _ => r,
    })
}

fn cert_text(c: &Certificate) -> String {
    match c {
        Certificate::Vector { coords, value } => format!("value {value} at ({})", coords.join(",")),
        other => serde_json::to_string(other).unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_tower};

    fn conic_field() -> Tower {
        parse_tower("Q.rat(b).rat(c).rat(a).conic(a,b)").unwrap()
    }

    #[test]
    fn lemma_one_values() {
        let t = conic_field();
        let e = |s: &str| parse_element(s, &t).unwrap();
        let pi = pfister(&t, &[e("a"), e("b+1")]).unwrap();
        let v = represents(&pi, &e("-2*a*Y")).unwrap();
        assert!(v.is_proved());
        let pi = pfister(&t, &[e("a"), e("b+c^2")]).unwrap();
        let v = represents(&pi, &e("-2*a*Y*c")).unwrap();
        let Certificate::Vector { coords, .. } = &v.certificate else {
            panic!()
        };
        let w: Vec<Element> = coords.iter().map(|c| e(c)).collect();
        assert_eq!(pi.eval(&w), e("-2*a*Y*c"));
    }

    #[test]
    fn lemma_two_value() {
        let t = conic_field();
        let e = |s: &str| parse_element(s, &t).unwrap();
        let pi = pfister(&t, &[e("a"), e("(b+1)*(b+c^2)")]).unwrap();
        let cp = e("1-(b+1)*c/(b+c^2)");
        let v = represents(&pi, &(&e("-2*a*Y") * &cp)).unwrap();
        assert!(v.is_proved());
    }

    #[test]
    fn similarity_factors() {
        let t = conic_field();
        let e = |s: &str| parse_element(s, &t).unwrap();
        let pi = pfister(&t, &[e("a"), e("b+1")]).unwrap();
        assert!(similarity_factor_check(&pi, &e("-2*a*Y"))
            .unwrap()
            .is_proved());
        assert!(similarity_factor_check(&pi, &t.one()).unwrap().is_proved());
        let cpi = scale(&e("c"), &pfister(&t, &[e("a"), e("b+c^2")]).unwrap()).unwrap();
        assert!(similarity_factor_check(&cpi, &e("-2*a*Y*c"))
            .unwrap()
            .is_proved());
        assert!(!similarity_factor_check(&cpi, &e("-2*a*Y"))
            .unwrap()
            .is_refuted());
    }

    #[test]
    fn trivial_and_rational() {
        let q = parse_tower("Q").unwrap();
        let one = QuadraticForm::diag(&q, &[1]).unwrap();
        assert!(represents(&one, &q.one()).unwrap().is_proved());
        let f = QuadraticForm::diag(&q, &[1, 1]).unwrap();
        assert!(represents(&f, &q.int(5)).unwrap().is_proved());
        assert!(represents(&f, &q.int(3)).unwrap().is_refuted());
        assert!(represents(&f, &q.int(-1)).unwrap().is_refuted());
    }
}
