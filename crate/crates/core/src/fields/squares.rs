//! Square roots, square tests and canonical square classes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{gcd, Poly};
use super::ratfunc::RatFunc;
use super::scalar::{least_nonresidue, Scalar};
use super::tower::{embed, Element, Layer, Tower};
use super::valuation::{residue_unit, valuation, ValuationSpec};
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 100_000;

fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `|n|` (n ≠ 0).
pub fn factor_int(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > m {
            break;
        }
        let mut k = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            k += 1;
        }
        if k > 0 {
            out.push((bd, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    if is_probable_prime(&m) {
        out.push((m, 1));
        return Ok(out);
    }
    let r = m.sqrt();
    if &r * &r == m && is_probable_prime(&r) {
        out.push((r, 2));
        return Ok(out);
    }
    Err(Error::UnsupportedTower(format!("cannot factor {m}")))
}

/// Square-free part of a nonzero integer, sign kept.
pub fn squarefree_int(n: &BigInt) -> Result<BigInt> {
    let mut out = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (p, k) in factor_int(n)? {
        if k % 2 == 1 {
            out *= p;
        }
    }
    Ok(out)
}

/// Canonical square-class representative of a nonzero prime-field scalar.
pub fn scalar_class(c: &Scalar) -> Result<Scalar> {
    match c {
        Scalar::Rat(r) => {
            let n = r.numer() * r.denom();
            Ok(Scalar::from_bigint(&squarefree_int(&n)?, 0))
        }
        Scalar::Mod(_, p) => {
            if c.sqrt().is_some() {
                Ok(Scalar::one(*p))
            } else {
                Ok(Scalar::from_i64(least_nonresidue(*p) as i64, *p))
            }
        }
    }
}

/// Exact square root of a polynomial, if it is a square.
pub fn poly_sqrt(f: &Poly) -> Option<Poly> {
    if f.is_zero() {
        return Some(f.clone());
    }
    let (lm, lc) = f.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    if lm.0.iter().any(|e| e % 2 == 1) {
        return None;
    }
    let rm = super::poly::Mono(lm.0.iter().map(|e| e / 2).collect());
    let rc = lc.sqrt()?;
    let mut root = Poly::monomial(rm.clone(), rc.clone());
    let two_lead = Poly::monomial(rm, rc.add(&rc));
    let mut last = root.leading().unwrap().0.clone();
    loop {
        let rem = f.sub(&root.mul(&root));
        if rem.is_zero() {
            return Some(root);
        }
        let (m, c) = rem.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let tl = two_lead.leading().unwrap();
        if !tl.0.divides(&m) {
            return None;
        }
        let nm = m.div(tl.0);
        if nm >= last {
            return None;
        }
        let nc = c.div(tl.1);
        last = nm.clone();
        root = root.add(&Poly::monomial(nm, nc));
    }
}

pub fn ratfunc_sqrt(r: &RatFunc) -> Option<RatFunc> {
    let n = poly_sqrt(&r.num)?;
    let d = poly_sqrt(&r.den)?;
    Some(RatFunc::new(n, d))
}

fn sqrt_level(e: &Element, level: usize) -> Option<Element> {
    if e.is_zero() {
        return Some(e.clone());
    }
    let f = &e.tower;
    if level == 0 {
        let rf = e.repr.as_rf()?;
        return Some(Element::from_rf(f, ratfunc_sqrt(rf)?));
    }
    let gi = level - 1;
    let g = Element::var(f, &f.gens[gi].name).ok()?;
    let d = Element::new(f, f.gens[gi].square.clone());
    let (p, q) = e.split_gen(gi);
    if q.is_zero() {
        if let Some(r) = sqrt_level(&p, gi) {
            return Some(r);
        }
        let s = sqrt_level(&p.div(&d).ok()?, gi)?;
        return Some(&s * &g);
    }
    let norm = &p.square() - &(&d * &q.square());
    let n = sqrt_level(&norm, gi)?;
    let half = f.scalar(Scalar::from_i64(2, f.p).inv());
    for cand in [&p + &n, &p - &n] {
        let r2 = &cand * &half;
        if let Some(r) = sqrt_level(&r2, gi) {
            if r.is_zero() {
                continue;
            }
            let s = q.div(&(&r + &r)).ok()?;
            return Some(&r + &(&s * &g));
        }
    }
    None
}

/// Square root inside the tower's rational-function model.
///
/// Laurent layers are treated as plain rational-function layers here; use
/// [`is_square`] for the complete-field notion.
pub fn sqrt_exact(e: &Element) -> Option<Element> {
    let r = sqrt_level(e, e.tower.gens.len())?;
    debug_assert_eq!(&r.square(), e);
    Some(r)
}

/// Square test; over a top Laurent layer this uses valuation parity and the
/// residue, as in the complete field.
pub fn is_square(e: &Element) -> Result<bool> {
    if e.is_zero() {
        return Ok(true);
    }
    if let Some(t) = e.tower.top_laurent() {
        let v = ValuationSpec::new(t);
        if valuation(e, &v)? % 2 != 0 {
            return Ok(false);
        }
        return is_square(&residue_unit(e, &v)?);
    }
    Ok(sqrt_exact(e).is_some())
}

/// True when `e/f` is a square.
pub fn same_class(e: &Element, f: &Element) -> Result<bool> {
    is_square(&e.div(f)?)
}

/// Product of the factors of odd multiplicity in a monic polynomial.
pub fn odd_part(m: &Poly) -> Result<Poly> {
    let nv = m.nvars;
    let mut ps = vec![m.clone()];
    while !ps.last().unwrap().is_constant() {
        let p = ps.last().unwrap();
        let mut g = p.clone();
        let mut any = false;
        for v in 0..nv {
            let d = p.derivative(v);
            if !d.is_zero() {
                any = true;
                g = gcd(&g, &d);
            }
        }
        if !any {
            return Err(Error::UnsupportedTower("inseparable polynomial".into()));
        }
        ps.push(g);
    }
    let rs: Vec<Poly> = ps
        .windows(2)
        .map(|w| w[0].exact_div(&w[1]).unwrap())
        .collect();
    let mut odd = Poly::one(m.p, nv);
    let mut check = Poly::one(m.p, nv);
    for (i, r) in rs.iter().enumerate() {
        let next = rs.get(i + 1).cloned().unwrap_or_else(|| Poly::one(m.p, nv));
        let fm = r
            .exact_div(&next)
            .ok_or_else(|| Error::UnsupportedTower("square-free decomposition".into()))?;
        let mult = i as u32 + 1;
        if mult % 2 == 1 {
            odd = odd.mul(&fm);
        }
        check = check.mul(&fm.pow(mult));
    }
    if check != m.monic().1 {
        return Err(Error::UnsupportedTower("square-free decomposition".into()));
    }
    Ok(odd)
}

/// Canonical representative over a tower made only of rational-function layers.
fn base_class(e: &Element) -> Result<Element> {
    let f = &e.tower;
    if !f.gens.is_empty() || f.layers.iter().any(|l| matches!(l, Layer::Laurent(_))) {
        return Err(Error::UnsupportedTower(format!("square classes over {f}")));
    }
    let rf = e.repr.as_rf().unwrap();
    let prod = rf.num.mul(&rf.den);
    let (lc, monic) = prod.monic();
    let c = scalar_class(&lc)?;
    let odd = odd_part(&monic)?.scale(&c);
    Ok(Element::from_rf(f, RatFunc::from_poly(odd)))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SquareClass {
    /// Canonical representative.
    pub rep: Element,
    /// Class in the field below the top Laurent run.
    pub base: Element,
    /// Parities of the Laurent exponents, innermost layer first.
    pub exponents: Vec<(String, u8)>,
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        self.rep.is_one()
    }

    pub fn mul(&self, o: &SquareClass) -> Result<SquareClass> {
        square_class(&(&self.rep * &o.rep))
    }
}

pub fn square_class(e: &Element) -> Result<SquareClass> {
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut cur = e.clone();
    let mut bits = Vec::new();
    while let Some(t) = cur.tower.top_laurent().map(str::to_string) {
        let v = ValuationSpec::new(&t);
        let k = valuation(&cur, &v)?.rem_euclid(2) as u8;
        bits.push((t, k));
        cur = residue_unit(&cur, &v)?;
    }
    bits.reverse();
    let base = base_class(&cur)?;
    let mut rep = embed(&base, &e.tower)?;
    for (t, k) in &bits {
        if *k == 1 {
            rep = &rep * &Element::var(&e.tower, t)?;
        }
    }
    Ok(SquareClass {
        rep,
        base,
        exponents: bits,
    })
}

/// Representatives of the square classes generated by Laurent exponents:
/// all products of subsets of the Laurent variables of `f`.
pub fn laurent_cosets(f: &Tower) -> Vec<Element> {
    let chain: Vec<String> = f.laurent_chain().into_iter().rev().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << chain.len()) {
        let mut e = f.one();
        for (i, t) in chain.iter().enumerate() {
            if mask & (1 << i) != 0 {
                e = &e * &Element::var(f, t).unwrap();
            }
        }
        out.push(e);
    }
    out
}

/// Integer value of a rational scalar, when integral and small.
pub fn small_int(s: &Scalar) -> Option<i64> {
    let r = s.as_rational()?;
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Square-class representative over a tower whose layers support it,
/// falling back to the element itself.
pub fn class_rep_or_self(e: &Element) -> Element {
    square_class(e).map(|c| c.rep).unwrap_or_else(|_| e.clone())
}

pub fn tower_supports_classes(f: &Tower) -> bool {
    !f.has_buried_laurent() && f.laurent_base().gens.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::expr::{parse_element, parse_tower};

    #[test]
    fn square_class_examples() {
        let f = parse_tower("Q.laurent(t)").unwrap();
        let c = square_class(&parse_element("4*t^3", &f).unwrap()).unwrap();
        assert_eq!(c.rep.to_string(), "t");
        assert_eq!(c.exponents, vec![("t".to_string(), 1)]);

        let g = parse_tower("Q.rat(nu0).laurent(a).laurent(t)").unwrap();
        let c = square_class(&parse_element("9*a*t*nu0", &g).unwrap()).unwrap();
        assert_eq!(c.base.to_string(), "nu0");
        assert_eq!(
            c.exponents,
            vec![("a".to_string(), 1), ("t".to_string(), 1)]
        );

        let f7 = parse_tower("F(7)").unwrap();
        assert!(square_class(&f7.int(2)).unwrap().is_trivial());
        assert!(!square_class(&f7.int(3)).unwrap().is_trivial());
    }

    #[test]
    fn function_field_classes() {
        let f = parse_tower("Q.rat(b).rat(c)").unwrap();
        let e = parse_element("-12*(b+1)^3*(c^2+b)^2/(b*c^2)", &f).unwrap();
        let c = square_class(&e).unwrap();
        assert_eq!(c.rep, parse_element("-3*(b+1)*b", &f).unwrap());
    }

    #[test]
    fn sqrt_through_generators() {
        let f = parse_tower("Q.rat(b).sqrt(b)").unwrap();
        let e = parse_element("b+1+2*sqrt(b)", &f).unwrap();
        let r = sqrt_exact(&e).unwrap();
        assert_eq!(r.square(), e);
        assert!(is_square(&parse_element("b", &f).unwrap()).unwrap());
        assert!(!is_square(&parse_element("b+1", &f).unwrap()).unwrap());
    }

    #[test]
    fn laurent_square_test() {
        let f = parse_tower("Q.laurent(t)").unwrap();
        assert!(is_square(&parse_element("1+t", &f).unwrap()).unwrap());
        assert!(!is_square(&parse_element("t*(1+t)", &f).unwrap()).unwrap());
        assert!(!is_square(&parse_element("2+t", &f).unwrap()).unwrap());
    }

    #[test]
    fn integer_parts() {
        assert_eq!(
            squarefree_int(&BigInt::from(-72)).unwrap(),
            BigInt::from(-2)
        );
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_003u64) * BigInt::from(6);
        assert_eq!(squarefree_int(&big).unwrap(), BigInt::from(6));
    }
}
