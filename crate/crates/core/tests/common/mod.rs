//! Independent oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use wittlab::fields::{residue_unit, valuation, Element, FieldDesc, Tower, ValuationSpec};
use wittlab::forms::{is_isotropic, BrauerClass, Certificate, QuadraticForm, Status};

// ---- finite field oracles -------------------------------------------------

pub fn is_sq_mod(x: i64, p: i64) -> bool {
    let x = x.rem_euclid(p);
    x == 0 || (1..p).any(|y| y * y % p == x)
}

/// Every vector of `F_p^n` (including zero).
pub fn vectors(n: usize, p: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (0..p).map(move |c| [v.clone(), vec![c]].concat()))
            .collect();
    }
    out
}

pub fn value(entries: &[i64], v: &[i64], p: i64) -> i64 {
    entries
        .iter()
        .zip(v)
        .map(|(a, x)| a * x * x)
        .sum::<i64>()
        .rem_euclid(p)
}

pub fn fp_isotropic(entries: &[i64], p: i64) -> bool {
    vectors(entries.len(), p)
        .iter()
        .any(|v| v.iter().any(|&x| x != 0) && value(entries, v, p) == 0)
}

pub fn fp_values(entries: &[i64], p: i64) -> BTreeSet<i64> {
    vectors(entries.len(), p)
        .iter()
        .map(|v| value(entries, v, p))
        .filter(|&x| x != 0)
        .collect()
}

/// Dimension of the anisotropic part over `F_p`: forms are classified by
/// dimension and discriminant.
pub fn fp_aniso_dim(entries: &[i64], p: i64) -> usize {
    let n = entries.len();
    if n % 2 == 1 {
        return 1;
    }
    let sign = if (n / 2) % 2 == 1 { -1 } else { 1 };
    let d = sign * entries.iter().product::<i64>();
    if is_sq_mod(d, p) {
        0
    } else {
        2
    }
}

pub fn fp(p: i64) -> Tower {
    FieldDesc::finite(p as u64).unwrap()
}

pub fn form(t: &Tower, entries: &[i64]) -> QuadraticForm {
    QuadraticForm::diag(t, entries).unwrap()
}

pub fn scalar_mod(e: &Element, p: i64) -> i64 {
    e.as_scalar()
        .unwrap()
        .to_string()
        .parse::<i64>()
        .unwrap()
        .rem_euclid(p)
}

// ---- tame symbols over F_p((t)) -------------------------------------------

/// `(unit mod p, t-exponent)` of a monomial element of `F_p((t))`.
pub fn split(e: &Element, p: i64) -> (i64, i64) {
    let v = ValuationSpec::new("t");
    let n = valuation(e, &v).unwrap();
    (scalar_mod(&residue_unit(e, &v).unwrap(), p), n)
}

/// A class in `Br(F_p((t)))[2]` is determined by the product of tame symbols.
pub fn tame_trivial(c: &BrauerClass, p: i64) -> bool {
    let mut acc = 1i64;
    for (x, y) in &c.symbols {
        let ((u1, e1), (u2, e2)) = (split(x, p), split(y, p));
        // (-1)^{e1 e2} u1^{e2} / u2^{e1}, read modulo squares
        let mut s = if (e1 * e2).rem_euclid(2) == 1 {
            p - 1
        } else {
            1
        };
        if e2.rem_euclid(2) == 1 {
            s = s * u1 % p;
        }
        if e1.rem_euclid(2) == 1 {
            s = s * u2 % p;
        }
        acc = acc * s % p;
    }
    is_sq_mod(acc, p)
}

pub fn mono(t: &Tower, u: i64, e: i64) -> Element {
    &t.int(u) * &Element::var(t, "t").unwrap().pow(e).unwrap()
}

// ---- the rational oracle --------------------------------------------------

pub fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == n)
}

/// A nonzero vector with coordinates in `[-bound, bound]` on which the diagonal form vanishes.
pub fn ternary_search(e: &[i64], bound: i64) -> Option<Vec<i64>> {
    search(e, bound)
}

pub fn search(e: &[i64], bound: i64) -> Option<Vec<i64>> {
    let m = e.len() - 1;
    let last = e[m];
    let side = 2 * bound + 1;
    for idx in 0..side.pow(m as u32) {
        let mut r = idx;
        let prefix: Vec<i64> = (0..m)
            .map(|_| {
                let c = r % side - bound;
                r /= side;
                c
            })
            .collect();
        let s: i64 = e[..m].iter().zip(&prefix).map(|(a, x)| a * x * x).sum();
        // last·y² = -s
        if (-s) % last != 0 {
            continue;
        }
        if let Some(y) = isqrt(-s / last) {
            if y <= bound && (y != 0 || prefix.iter().any(|&x| x != 0)) {
                return Some([prefix, vec![y]].concat());
            }
        }
    }
    None
}

pub fn rational_cross_check(entries: &[i64]) {
    let q = FieldDesc::rationals();
    let f = form(&q, entries);
    let v = is_isotropic(&f).unwrap();
    match v.status {
        Status::Proved => {
            let Certificate::Vector { coords, .. } = &v.certificate else {
                panic!("{entries:?}: no witness")
            };
            let xs: Vec<BigRational> = coords
                .iter()
                .map(|c| BigRational::from_str(c).unwrap())
                .collect();
            assert!(xs.iter().any(|x| *x != BigRational::from_integer(0.into())));
            let val: BigRational = entries
                .iter()
                .zip(&xs)
                .map(|(a, x)| BigRational::from_integer(BigInt::from(*a)) * x * x)
                .sum();
            assert_eq!(val, BigRational::from_integer(0.into()), "{entries:?}");
        }
        Status::Refuted => {
            assert!(
                matches!(
                    v.certificate,
                    Certificate::RealDefinite { .. } | Certificate::LocalObstruction { .. }
                ),
                "{entries:?}: {:?}",
                v.certificate
            );
            assert!(
                search(entries, 50).is_none(),
                "{entries:?} has a small zero"
            );
        }
        Status::Reduced => panic!("{entries:?}: undecided over Q"),
    }
}
