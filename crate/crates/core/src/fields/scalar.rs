//! Prime-field scalars: exact rationals or residues modulo an odd prime.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Characteristic of a prime field; `0` stands for the rationals.
pub type Characteristic = u64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    /// `(value, p)` with `0 <= value < p`.
    Mod(u64, u64),
}

impl Scalar {
    pub fn zero(p: Characteristic) -> Self {
        if p == 0 {
            Scalar::Rat(BigRational::zero())
        } else {
            Scalar::Mod(0, p)
        }
    }

    pub fn one(p: Characteristic) -> Self {
        Self::from_i64(1, p)
    }

    pub fn from_i64(v: i64, p: Characteristic) -> Self {
        if p == 0 {
            Scalar::Rat(BigRational::from_integer(BigInt::from(v)))
        } else {
            Scalar::Mod(v.rem_euclid(p as i64) as u64, p)
        }
    }

    pub fn from_bigint(v: &BigInt, p: Characteristic) -> Self {
        if p == 0 {
            Scalar::Rat(BigRational::from_integer(v.clone()))
        } else {
            let m = v.mod_floor(&BigInt::from(p));
            Scalar::Mod(m.to_u64().unwrap(), p)
        }
    }

    pub fn from_rational(r: &BigRational, p: Characteristic) -> Option<Self> {
        if p == 0 {
            return Some(Scalar::Rat(r.clone()));
        }
        let n = Self::from_bigint(r.numer(), p);
        let d = Self::from_bigint(r.denom(), p);
        if d.is_zero() {
            None
        } else {
            Some(n.div(&d))
        }
    }

    pub fn characteristic(&self) -> Characteristic {
        match self {
            Scalar::Rat(_) => 0,
            Scalar::Mod(_, p) => *p,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => Scalar::Mod((a + b) % p, *p),
            _ => panic!("scalar characteristic mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod(a, p) => Scalar::Mod((p - a) % p, *p),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod(a, p), Scalar::Mod(b, _)) => {
                Scalar::Mod(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => panic!("scalar characteristic mismatch"),
        }
    }

    /// Multiplicative inverse; panics on zero (callers check first).
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero scalar");
        match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod(a, p) => Scalar::Mod(mod_pow(*a, p - 2, *p), *p),
        }
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.characteristic());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact square root inside the prime field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            Scalar::Mod(a, p) => mod_sqrt(*a, *p).map(|s| Scalar::Mod(s, *p)),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Canonical total order (used for deterministic output only).
    pub fn cmp_canonical(&self, o: &Scalar) -> Ordering {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Mod(a, _), Scalar::Mod(b, _)) => a.cmp(b),
            _ => Ordering::Equal,
        }
    }

    /// True when the printed form should carry a leading minus sign.
    pub fn is_negative_display(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Mod(_, _) => false,
        }
    }

    pub fn abs_display(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.abs()),
            m => m.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Legendre symbol for an odd prime `p`: 0, 1 or -1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root modulo an odd prime (Tonelli–Shanks); smallest root returned.
pub fn mod_sqrt(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulm(b, b);
        }
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r.min(p - r))
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&z| legendre(z, p) == -1)
        .expect("odd prime has non-residues")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 17, 101] {
            for a in 0..p {
                let brute = (0..p).find(|x| x * x % p == a);
                assert_eq!(mod_sqrt(a, p).is_some(), brute.is_some(), "p={p} a={a}");
                if let Some(r) = mod_sqrt(a, p) {
                    assert_eq!(r * r % p, a);
                }
            }
        }
    }

    #[test]
    fn rational_sqrt() {
        let q = Scalar::Rat(BigRational::new(9.into(), 4.into()));
        assert_eq!(
            q.sqrt(),
            Some(Scalar::Rat(BigRational::new(3.into(), 2.into())))
        );
        assert_eq!(Scalar::from_i64(2, 0).sqrt(), None);
        assert_eq!(Scalar::from_i64(-4, 0).sqrt(), None);
    }

    #[test]
    fn modular_inverse() {
        let a = Scalar::from_i64(3, 7);
        assert!(a.mul(&a.inv()).is_one());
    }
}
