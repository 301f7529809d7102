//! Reduced quotients of multivariate polynomials.

use super::poly::{gcd, Poly};
use super::scalar::{Characteristic, Scalar};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero(num.p, num.nvars);
        }
        let g = gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = d.leading_coeff();
        if !lc.is_one() {
            let li = lc.inv();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.p, p.nvars);
        RatFunc { num: p, den: one }
    }

    pub fn zero(p: Characteristic, nvars: usize) -> Self {
        RatFunc {
            num: Poly::zero(p, nvars),
            den: Poly::one(p, nvars),
        }
    }

    pub fn one(p: Characteristic, nvars: usize) -> Self {
        RatFunc::from_poly(Poly::one(p, nvars))
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        RatFunc::from_poly(Poly::constant(c, nvars))
    }

    pub fn char(&self) -> Characteristic {
        self.num.p
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(self.num.constant_value())
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.char(), self.nvars());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        // both sides are reduced, so only cross factors can cancel
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let q = |a: &Poly, g: &Poly| {
            if g.is_one() {
                a.clone()
            } else {
                a.exact_div(g).expect("gcd divides")
            }
        };
        let num = q(&self.num, &g1).mul(&q(&o.num, &g2));
        let den = q(&o.den, &g1).mul(&q(&self.den, &g2));
        let lc = den.leading_coeff();
        let li = lc.inv();
        RatFunc {
            num: num.scale(&li),
            den: den.scale(&li),
        }
    }

    pub fn scale(&self, s: &Scalar) -> RatFunc {
        if s.is_zero() {
            return RatFunc::zero(self.char(), self.nvars());
        }
        RatFunc {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Inverse; `None` on zero.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: i64) -> Option<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Some(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Substitute a scalar for variable `v`; `None` if the denominator vanishes.
    pub fn eval_var(&self, v: usize, s: &Scalar) -> Option<RatFunc> {
        let d = self.den.eval_var(v, s);
        if d.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.num.eval_var(v, s), d))
    }

    pub fn remap(&self, map: &[Option<usize>], n: usize) -> RatFunc {
        RatFunc::new(self.num.remap(map, n), self.den.remap(map, n))
    }

    pub fn involves(&self, v: usize) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let n = 2;
        let x = Poly::var(0, 0, n);
        let y = Poly::var(1, 0, n);
        let num = x.mul(&x).sub(&y.mul(&y)).scale(&Scalar::from_i64(3, 0));
        let den = x.add(&y).scale(&Scalar::from_i64(6, 0));
        let r = RatFunc::new(num, den);
        assert!(r.den.is_one());
        assert_eq!(r.num, x.sub(&y).scale(&Scalar::from_i64(2, 0).inv()));
    }

    #[test]
    fn add_and_invert() {
        let n = 1;
        let x = RatFunc::from_poly(Poly::var(0, 0, n));
        let one = RatFunc::one(0, n);
        let s = x.inv().unwrap().add(&one);
        let back = s.mul(&x).sub(&x);
        assert!(back.is_one());
    }
}
