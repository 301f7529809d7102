//! Sparse multivariate polynomials over a prime field.
//!
//! Monomials are ordered graded-lexicographically, the first variable being
//! the most significant one; the leading term is the largest monomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::scalar::{Characteristic, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    pub p: Characteristic,
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero(p: Characteristic, nvars: usize) -> Self {
        Poly {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let p = c.characteristic();
        let mut out = Poly::zero(p, nvars);
        if !c.is_zero() {
            out.terms.insert(Mono::one(nvars), c);
        }
        out
    }

    pub fn one(p: Characteristic, nvars: usize) -> Self {
        Poly::constant(Scalar::one(p), nvars)
    }

    pub fn from_i64(v: i64, p: Characteristic, nvars: usize) -> Self {
        Poly::constant(Scalar::from_i64(v, p), nvars)
    }

    pub fn var(i: usize, p: Characteristic, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(Mono(e), Scalar::one(p))
    }

    pub fn monomial(m: Mono, c: Scalar) -> Self {
        let nvars = m.0.len();
        let mut out = Poly::zero(c.characteristic(), nvars);
        if !c.is_zero() {
            out.terms.insert(m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_one()
    }

    pub fn constant_value(&self) -> Scalar {
        self.terms
            .get(&Mono::one(self.nvars))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.p))
    }

    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| Scalar::zero(self.p))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.p, self.nvars);
        }
        Poly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(s)))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, s: &Scalar) -> Poly {
        Poly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.mul(s)))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.p, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.p, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).min().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Coefficients with respect to variable `v`, as polynomials in which `v` is absent.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.0[v];
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out.entry(d)
                .or_insert_with(|| Poly::zero(self.p, self.nvars))
                .add_term(m2, c.clone());
        }
        out
    }

    fn lc_in(&self, v: usize) -> Poly {
        let d = self.degree_in(v);
        self.coeffs_in(v)
            .remove(&d)
            .unwrap_or_else(|| Poly::zero(self.p, self.nvars))
    }

    /// Partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.p, self.nvars);
        for (m, c) in &self.terms {
            let d = m.0[v];
            if d == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[v] -= 1;
            out.add_term(m2, c.mul(&Scalar::from_i64(d as i64, self.p)));
        }
        out
    }

    /// Substitute the scalar `s` for variable `v`.
    pub fn eval_var(&self, v: usize, s: &Scalar) -> Poly {
        let mut out = Poly::zero(self.p, self.nvars);
        for (m, c) in &self.terms {
            let d = m.0[v];
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out.add_term(m2, c.mul(&s.pow(d)));
        }
        out
    }

    /// Divide every monomial by `v^k` (caller guarantees divisibility).
    pub fn shift_down(&self, v: usize, k: u32) -> Poly {
        Poly {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.0[v] -= k;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    /// Re-index variables: `map[i]` is the new index of old variable `i`.
    /// Variables mapped to `None` must not occur.
    pub fn remap(&self, map: &[Option<usize>], new_nvars: usize) -> Poly {
        let mut out = Poly::zero(self.p, new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_nvars];
            for (i, &d) in m.0.iter().enumerate() {
                if d > 0 {
                    let j = map[i].expect("remapped variable occurs in polynomial");
                    e[j] += d;
                }
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    /// Make the leading coefficient one; returns `(lc, monic)`.
    pub fn monic(&self) -> (Scalar, Poly) {
        if self.is_zero() {
            return (Scalar::zero(self.p), self.clone());
        }
        let lc = self.leading_coeff();
        (lc.clone(), self.scale(&lc.inv()))
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dinv = dc.inv();
        let mut q = Poly::zero(self.p, self.nvars);
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let tm = rm.div(&dm);
            let tc = rc.mul(&dinv);
            q.add_term(tm.clone(), tc.clone());
            r = r.sub(&d.mul_term(&tm, &tc));
        }
        Some(q)
    }

    fn highest_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.involves(v))
    }

    /// Content with respect to `v`: monic gcd of the coefficients in `v`.
    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero(self.p, self.nvars);
        for c in self.coeffs_in(v).values() {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.exact_div(&c).expect("content divides").monic().1
    }

    /// Pseudo-remainder of `self` by `b` with respect to `v`.
    fn prem_in(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lcb = b.lc_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lcr = r.lc_in(v);
            let mut shift = vec![0; self.nvars];
            shift[v] = dr - db;
            let sub = lcr.mul(b).mul_term(&Mono(shift), &Scalar::one(self.p));
            r = r.mul(&lcb).sub(&sub);
        }
        r
    }
}

/// gcd when one side is a single term: the common power product.
fn monomial_gcd(f: &Poly, g: &Poly) -> Poly {
    let exps = (0..f.nvars)
        .map(|v| f.min_degree_in(v).min(g.min_degree_in(v)))
        .collect();
    Poly::monomial(Mono(exps), Scalar::one(f.p))
}

/// True when the gcd of `f` and `g` certainly has degree 0 in `v`.
///
/// The other variables are specialized at points keeping both leading
/// coefficients in `v` alive; a common factor of positive `v`-degree would
/// survive as a common factor of the images.
fn coprime_image(f: &Poly, g: &Poly, v: usize) -> bool {
    let others: Vec<usize> = (0..f.nvars)
        .filter(|&w| w != v && (f.involves(w) || g.involves(w)))
        .collect();
    if others.is_empty() {
        return false;
    }
    let (df, dg) = (f.degree_in(v), g.degree_in(v));
    for attempt in 0..3i64 {
        let (mut fi, mut gi) = (f.clone(), g.clone());
        for &w in &others {
            let s = Scalar::from_i64(3 + 7 * attempt + 2 * w as i64, f.p);
            fi = fi.eval_var(w, &s);
            gi = gi.eval_var(w, &s);
        }
        if fi.degree_in(v) != df || gi.degree_in(v) != dg {
            continue;
        }
        return gcd(&fi, &gi).is_constant();
    }
    false
}

/// Monic greatest common divisor of two polynomials (zero only if both are zero).
pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return g.monic().1;
    }
    if g.is_zero() {
        return f.monic().1;
    }
    if f.is_constant() || g.is_constant() {
        return Poly::one(f.p, f.nvars);
    }
    if f.terms.len() == 1 || g.terms.len() == 1 {
        return monomial_gcd(f, g);
    }
    let n = f.nvars;
    let (mf, mg): (Vec<u32>, Vec<u32>) = (0..n)
        .map(|w| (f.min_degree_in(w), g.min_degree_in(w)))
        .unzip();
    if mf.iter().chain(&mg).any(|&e| e > 0) {
        let one = Scalar::one(f.p);
        let fr = f
            .exact_div(&Poly::monomial(Mono(mf.clone()), one.clone()))
            .unwrap();
        let gr = g
            .exact_div(&Poly::monomial(Mono(mg.clone()), one.clone()))
            .unwrap();
        let m = Poly::monomial(
            Mono(mf.iter().zip(&mg).map(|(a, b)| *a.min(b)).collect()),
            one,
        );
        return m.mul(&gcd(&fr, &gr));
    }
    // a variable present on one side only cannot occur in the gcd
    for w in (0..n).rev() {
        match (f.involves(w), g.involves(w)) {
            (true, false) => return gcd(&f.content_in(w), g),
            (false, true) => return gcd(f, &g.content_in(w)),
            _ => {}
        }
    }
    for w in (0..n).rev().filter(|&w| f.involves(w)) {
        if coprime_image(f, g, w) {
            return gcd(&f.content_in(w), &g.content_in(w));
        }
    }
    let v = f.highest_var().unwrap();
    let cf = f.content_in(v);
    let cg = g.content_in(v);
    let c = gcd(&cf, &cg);
    let mut a = f.exact_div(&cf).unwrap();
    let mut b = g.exact_div(&cg).unwrap();
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = a.prem_in(&b, v);
        if r.is_zero() {
            break;
        }
        if !r.involves(v) {
            return c;
        }
        a = b;
        b = r.primitive_in(v);
    }
    let h = b.primitive_in(v);
    c.mul(&h).monic().1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize, n: usize) -> Poly {
        Poly::var(i, 0, n)
    }
    fn k(c: i64, n: usize) -> Poly {
        Poly::from_i64(c, 0, n)
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let n = 3;
        let (x, y, z) = (v(0, n), v(1, n), v(2, n));
        let common = x.mul(&y).add(&z.pow(2)).add(&k(3, n));
        let f = common.mul(&x.add(&k(1, n))).mul(&y.sub(&z));
        let g = common.mul(&x.sub(&y)).mul(&z.add(&k(2, n)));
        assert_eq!(gcd(&f, &g), common.monic().1);
    }

    #[test]
    fn gcd_with_monomial_content() {
        let n = 3;
        let (x, y, z) = (v(0, n), v(1, n), v(2, n));
        let common = x.mul(&z).sub(&y.pow(3));
        let f = common.mul(&x.pow(2)).mul(&z).mul(&y.add(&k(5, n)));
        let g = common.mul(&x).mul(&z.pow(3)).mul(&x.add(&y).add(&z));
        assert_eq!(gcd(&f, &g), common.mul(&x).mul(&z).monic().1);
        assert_eq!(gcd(&x.pow(2).mul(&y), &x.mul(&z).add(&x)), x);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let n = 2;
        let f = v(0, n).pow(2).add(&k(1, n));
        let g = v(1, n).sub(&v(0, n));
        assert!(gcd(&f, &g).is_one());
    }

    #[test]
    fn gcd_mod_p() {
        let n = 2;
        let x = Poly::var(0, 5, n);
        let y = Poly::var(1, 5, n);
        let one = Poly::one(5, n);
        let f = x.add(&one).pow(2).mul(&y);
        let g = x.add(&one).mul(&y.add(&one));
        assert_eq!(gcd(&f, &g), x.add(&one));
    }

    #[test]
    fn exact_division_detects_nondivisibility() {
        let n = 2;
        let f = v(0, n).pow(2).sub(&v(1, n).pow(2));
        let d = v(0, n).add(&v(1, n));
        assert_eq!(f.exact_div(&d), Some(v(0, n).sub(&v(1, n))));
        assert_eq!(f.exact_div(&v(0, n)), None);
    }
}
