//! Arithmetic of forms over ℚ: Hilbert symbols, local isotropy, and exact
//! search for isotropic vectors.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::fields::squares::{factor_int, squarefree_int};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    Inf,
    P(BigInt),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Inf => write!(f, "inf"),
            Place::P(p) => write!(f, "{p}"),
        }
    }
}

/// Square-free integer in the square class of a nonzero rational.
pub fn sqfree(r: &BigRational) -> Result<BigInt> {
    squarefree_int(&(r.numer() * r.denom()))
}

fn split_p(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut k = 0;
    let mut m = n.clone();
    while (&m % p).is_zero() {
        m /= p;
        k += 1;
    }
    (k, m)
}

fn legendre_big(u: &BigInt, p: &BigInt) -> i8 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn mod8(n: &BigInt) -> u32 {
    n.mod_floor(&BigInt::from(8)).to_u32().unwrap()
}

/// Hilbert symbol `(a,b)_v` of nonzero integers.
pub fn hilbert_int(a: &BigInt, b: &BigInt, place: &Place) -> i8 {
    match place {
        Place::Inf => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::P(p) if p == &BigInt::from(2) => {
            let (al, u) = split_p(a, p);
            let (be, v) = split_p(b, p);
            let eps = |x: &BigInt| u32::from(mod8(x) % 4 == 3);
            let omega = |x: &BigInt| {
                let m = mod8(x);
                if m == 3 || m == 5 {
                    1
                } else {
                    0
                }
            };
            let e = eps(&u) * eps(&v) + al * omega(&v) + be * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::P(p) => {
            let (al, u) = split_p(a, p);
            let (be, v) = split_p(b, p);
            let epsp = ((p - 1u32) / 2u32).is_odd();
            let mut s: i8 = if epsp && (al * be) % 2 == 1 { -1 } else { 1 };
            if be % 2 == 1 {
                s *= legendre_big(&u, p);
            }
            if al % 2 == 1 {
                s *= legendre_big(&v, p);
            }
            s
        }
    }
}

pub fn hilbert(a: &BigRational, b: &BigRational, place: &Place) -> i8 {
    hilbert_int(&(a.numer() * a.denom()), &(b.numer() * b.denom()), place)
}

/// ∞, 2, and every prime dividing some entry.
pub fn places(entries: &[BigInt]) -> Result<Vec<Place>> {
    let mut ps: BTreeSet<BigInt> = BTreeSet::new();
    ps.insert(BigInt::from(2));
    for e in entries {
        for (p, _) in factor_int(e)? {
            ps.insert(p);
        }
    }
    let mut out = vec![Place::Inf];
    out.extend(ps.into_iter().map(Place::P));
    Ok(out)
}

/// Is the nonzero integer `d` a square in the completion at `place`?
pub fn is_local_square(d: &BigInt, place: &Place) -> bool {
    match place {
        Place::Inf => d.is_positive(),
        Place::P(p) => {
            let (k, u) = split_p(d, p);
            if k % 2 == 1 {
                return false;
            }
            if p == &BigInt::from(2) {
                mod8(&u) == 1
            } else {
                legendre_big(&u, p) == 1
            }
        }
    }
}

pub fn hasse(a: &[BigInt], place: &Place) -> i8 {
    let mut s = 1;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            s *= hilbert_int(&a[i], &a[j], place);
        }
    }
    s
}

/// Local isotropy of a diagonal form with square-free integer entries.
pub fn locally_isotropic(a: &[BigInt], place: &Place) -> bool {
    let n = a.len();
    let d: BigInt = a.iter().product();
    let m1 = BigInt::from(-1);
    match n {
        0 | 1 => false,
        2 => is_local_square(&-d, place),
        3 => hilbert_int(&m1, &-d, place) == hasse(a, place),
        4 => !is_local_square(&d, place) || hasse(a, place) == hilbert_int(&m1, &m1, place),
        _ => match place {
            Place::Inf => a.iter().any(|x| x.is_positive()) && a.iter().any(|x| x.is_negative()),
            _ => true,
        },
    }
}

/// First place where the form is anisotropic, or `None` if isotropic everywhere.
pub fn local_obstruction(a: &[BigInt]) -> Result<Option<Place>> {
    if a.len() == 2 {
        let d = -(&a[0] * &a[1]);
        if d.is_negative() || isqrt_exact(&d).is_none() {
            for pl in places(a)? {
                if !locally_isotropic(a, &pl) {
                    return Ok(Some(pl));
                }
            }
            // −d is a non-square that is a local square at these places; pick
            // a prime where it is not.
            return Ok(Some(Place::P(nonsquare_prime(&d))));
        }
        return Ok(None);
    }
    for pl in places(a)? {
        if !locally_isotropic(a, &pl) {
            return Ok(Some(pl));
        }
    }
    Ok(None)
}

fn nonsquare_prime(d: &BigInt) -> BigInt {
    let mut p = BigInt::from(3);
    loop {
        if crate::fields::scalar::is_prime(p.to_u64().unwrap())
            && !(d % &p).is_zero()
            && legendre_big(d, &p) == -1
        {
            return p;
        }
        p += 2;
    }
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Zero of `a x² + b y² + c z²` (square-free, pairwise coprime, locally
/// isotropic), found by a search within Holzer's bounds.
fn ternary_normalized(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<[BigInt; 3]> {
    let bx = (b * c).abs().sqrt() + 1u32;
    let by = (a * c).abs().sqrt() + 1u32;
    let bx = bx.to_i64()?;
    let by = by.to_i64()?;
    if bx.saturating_mul(by) > 50_000_000 {
        return None;
    }
    for x in 0..=bx {
        for y in 0..=by {
            if x == 0 && y == 0 {
                continue;
            }
            let (xb, yb) = (BigInt::from(x), BigInt::from(y));
            let num = -(a * &xb * &xb + b * &yb * &yb);
            if (&num % c).is_zero() {
                if let Some(z) = isqrt_exact(&(num / c)) {
                    return Some([xb, yb, z]);
                }
            }
        }
    }
    None
}

/// Zero of a ternary form with nonzero rational entries, as rationals.
pub fn ternary_zero(e: &[BigRational; 3]) -> Result<Option<[BigRational; 3]>> {
    // entries[i]·x_i² with x_i = mult[i]·X_i; track multipliers while
    // normalizing to square-free pairwise coprime integers.
    let mut mult = [BigRational::one(), BigRational::one(), BigRational::one()];
    let mut a: [BigInt; 3] = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for i in 0..3 {
        let n = e[i].numer() * e[i].denom();
        let s = squarefree_int(&n)?;
        // e_i = s·r², so x_i = X_i / r.
        let r2 = BigRational::from_integer(s.clone()) / &e[i];
        let r2 = r2.recip();
        let rn = isqrt_exact(r2.numer()).unwrap();
        let rd = isqrt_exact(r2.denom()).unwrap();
        mult[i] = BigRational::new(rd, rn);
        a[i] = s;
    }
    if locally_obstructed(&a)? {
        return Ok(None);
    }
    loop {
        let mut changed = false;
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let g = a[i].gcd(&a[j]);
            if g > BigInt::one() {
                let k = 3 - i - j;
                // g·form: (a_i/g)(g x_i)² + (a_j/g)(g x_j)² + g a_k x_k²
                a[i] = &a[i] / &g;
                a[j] = &a[j] / &g;
                mult[i] = &mult[i] / BigRational::from_integer(g.clone());
                mult[j] = &mult[j] / BigRational::from_integer(g.clone());
                let t = &a[k] * &g;
                let s = squarefree_int(&t)?;
                let r = isqrt_exact(&(&t / &s)).unwrap();
                a[k] = s;
                mult[k] = &mult[k] / BigRational::from_integer(r);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let z = match ternary_normalized(&a[0], &a[1], &a[2]) {
        Some(z) => z,
        None => return Ok(None),
    };
    Ok(Some([
        &mult[0] * BigRational::from_integer(z[0].clone()),
        &mult[1] * BigRational::from_integer(z[1].clone()),
        &mult[2] * BigRational::from_integer(z[2].clone()),
    ]))
}

fn locally_obstructed(a: &[BigInt]) -> Result<bool> {
    Ok(local_obstruction(a)?.is_some())
}

pub fn eval(entries: &[BigRational], v: &[BigRational]) -> BigRational {
    entries.iter().zip(v).map(|(a, x)| a * x * x).sum()
}

/// A nonzero isotropic vector of a locally isotropic form, if the search finds one.
pub fn isotropic_vector(entries: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    let n = entries.len();
    let zero = BigRational::zero();
    // hyperbolic pair
    for i in 0..n {
        for j in (i + 1)..n {
            let q = -(&entries[j] / &entries[i]);
            if let (Some(rn), Some(rd)) = (isqrt_exact(q.numer()), isqrt_exact(q.denom())) {
                let mut v = vec![zero.clone(); n];
                v[i] = BigRational::new(rn, rd);
                v[j] = BigRational::one();
                return Ok(Some(v));
            }
        }
    }
    if n < 3 {
        return Ok(None);
    }
    let sq: Vec<BigInt> = entries.iter().map(sqfree).collect::<Result<_>>()?;
    if local_obstruction(&sq)?.is_some() {
        return Ok(None);
    }
    if n == 3 {
        let e = [entries[0].clone(), entries[1].clone(), entries[2].clone()];
        return Ok(ternary_zero(&e)?.map(|z| z.to_vec()));
    }
    // isotropic ternary subform
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let s = [sq[i].clone(), sq[j].clone(), sq[k].clone()];
                if local_obstruction(&s)?.is_none() {
                    let e = [entries[i].clone(), entries[j].clone(), entries[k].clone()];
                    if let Some(z) = ternary_zero(&e)? {
                        let mut v = vec![zero.clone(); n];
                        v[i] = z[0].clone();
                        v[j] = z[1].clone();
                        v[k] = z[2].clone();
                        return Ok(Some(v));
                    }
                }
            }
        }
    }
    // split ⟨e0,e1⟩ ⊥ rest: find t represented by the first and −t by the rest
    let head = [entries[0].clone(), entries[1].clone()];
    let rest: Vec<BigRational> = entries[2..].to_vec();
    for m in 1..20_000i64 {
        for t in [m, -m] {
            let tb = BigInt::from(t);
            if squarefree_int(&tb)? != tb {
                continue;
            }
            let tr = BigRational::from_integer(tb.clone());
            let h = [sq[0].clone(), sq[1].clone(), -tb.clone()];
            if local_obstruction(&h)?.is_some() {
                continue;
            }
            let mut r: Vec<BigInt> = sq[2..].to_vec();
            r.push(tb.clone());
            if local_obstruction(&r)?.is_some() {
                continue;
            }
            let Some(z1) = ternary_zero(&[head[0].clone(), head[1].clone(), -tr.clone()])? else {
                continue;
            };
            let mut re = rest.clone();
            re.push(tr.clone());
            let Some(z2) = isotropic_vector(&re)? else {
                continue;
            };
            let last = z2.last().unwrap().clone();
            if z1[2].is_zero() || last.is_zero() {
                continue;
            }
            let mut v = vec![&z1[0] * &last, &z1[1] * &last];
            for x in &z2[..z2.len() - 1] {
                v.push(x * &z1[2]);
            }
            debug_assert!(eval(entries, &v).is_zero());
            return Ok(Some(v));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn hilbert_symbol_values() {
        let b = |v: i64| BigInt::from(v);
        let two = Place::P(b(2));
        assert_eq!(hilbert_int(&b(-1), &b(-1), &Place::Inf), -1);
        assert_eq!(hilbert_int(&b(-1), &b(-1), &two), -1);
        assert_eq!(hilbert_int(&b(2), &b(3), &Place::P(b(3))), -1);
        assert_eq!(hilbert_int(&b(2), &b(5), &Place::P(b(5))), -1);
        assert_eq!(hilbert_int(&b(2), &b(7), &Place::P(b(7))), 1);
        // product formula on a few pairs
        for (x, y) in [(3, 5), (-2, 7), (6, -15), (-1, 3)] {
            let (x, y) = (b(x), b(y));
            let prod: i32 = places(&[x.clone(), y.clone()])
                .unwrap()
                .iter()
                .map(|p| hilbert_int(&x, &y, p) as i32)
                .product();
            assert_eq!(prod, 1);
        }
    }

    #[test]
    fn ternary_zeros() {
        let e = [q(1), q(1), q(-2)];
        let z = ternary_zero(&e).unwrap().unwrap();
        assert!(eval(&e, &z).is_zero());
        let e = [q(3), q(5), q(-2)];
        assert!(eval(&e, &ternary_zero(&e).unwrap().unwrap()).is_zero());
        assert!(ternary_zero(&[q(1), q(1), q(1)]).unwrap().is_none());
        assert!(ternary_zero(&[q(1), q(1), q(-3)]).unwrap().is_none());
    }

    #[test]
    fn quaternary_vector() {
        let e = [q(1), q(1), q(-3), q(-6)];
        let v = isotropic_vector(&e).unwrap();
        if let Some(v) = v {
            assert!(eval(&e, &v).is_zero());
        }
        let e = [q(1), q(2), q(-7), q(-13)];
        let v = isotropic_vector(&e).unwrap().unwrap();
        assert!(eval(&e, &v).is_zero());
    }
}
