//! Witt decomposition, isometry, and Springer residues.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::form::{orth_sum, QuadraticForm};
use super::invariants::{
    negative_tests_sound, signed_discriminant, square_status, tower_kind, TowerKind,
};
use super::isotropy::{is_isotropic, springer_split};
use super::rational::{hasse, places, sqfree};
use super::verdict::{Certificate, Obligation, Status, Verdict};
use crate::error::{Error, Result};
use crate::fields::{embed, is_square, Element, Tower, ValuationSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittClass {
    pub tower: Tower,
    pub anisotropic_kernel: Option<QuadraticForm>,
    pub witt_index: usize,
    pub provenance: Vec<String>,
}

impl WittClass {
    pub fn zero(tower: &Tower) -> Self {
        WittClass {
            tower: tower.clone(),
            anisotropic_kernel: None,
            witt_index: 0,
            provenance: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.anisotropic_kernel.is_none()
    }

    pub fn kernel_entries(&self) -> Vec<Element> {
        self.anisotropic_kernel
            .as_ref()
            .map(|k| k.entries.clone())
            .unwrap_or_default()
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.anisotropic_kernel {
            None => write!(f, "0"),
            Some(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePair {
    pub first: WittClass,
    pub second: WittClass,
}

/// Diagonalize a nondegenerate symmetric Gram matrix by symmetric elimination.
pub fn diagonalize(mut g: Vec<Vec<Element>>) -> Result<Vec<Element>> {
    let n = g.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let piv = (k..n).find(|&i| !g[i][i].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !g[i][j].is_zero())
                else {
                    return Err(Error::InvalidArgument("degenerate Gram matrix".into()));
                };
                // basis vector i := e_i + e_j
                for m in 0..n {
                    let add = g[j][m].clone();
                    g[i][m] = &g[i][m] + &add;
                }
                for m in 0..n {
                    let add = g[m][j].clone();
                    g[m][i] = &g[m][i] + &add;
                }
                i
            }
        };
        g.swap(k, piv);
        for row in g.iter_mut() {
            row.swap(k, piv);
        }
        let p = g[k][k].clone();
        for m in (k + 1)..n {
            if g[m][k].is_zero() {
                continue;
            }
            let c = g[m][k].div(&p)?;
            for l in k..n {
                let v = &g[m][l] - &(&c * &g[k][l]);
                g[m][l] = v;
            }
            for l in k..n {
                let v = &g[l][m] - &(&c * &g[l][k]);
                g[l][m] = v;
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Orthogonal complement of the hyperbolic plane spanned by an isotropic
/// `v` and the basis vector `e_k` (`v_k ≠ 0`), diagonalized.
fn split_by_vector(entries: &[Element], v: &[Element]) -> Result<Vec<Element>> {
    let n = entries.len();
    let k = (0..n).find(|&i| !v[i].is_zero()).unwrap();
    let drop = (0..n).find(|&i| i != k && !v[i].is_zero()).unwrap();
    let idx: Vec<usize> = (0..n).filter(|&i| i != k && i != drop).collect();
    if idx.is_empty() {
        return Ok(vec![]);
    }
    let d = &entries[k] * &v[k].square();
    let w: Vec<Element> = idx.iter().map(|&i| &entries[i] * &v[i]).collect();
    let mut g = vec![vec![entries[0].tower.zero(); idx.len()]; idx.len()];
    for (r, &i) in idx.iter().enumerate() {
        for c in 0..idx.len() {
            let mut x = (&w[r] * &w[c]).div(&d)?;
            if r == c {
                x = &x + &entries[i];
            }
            g[r][c] = x;
        }
    }
    diagonalize(g)
}

fn first_square_pair(entries: &[Element]) -> Result<Option<(usize, usize)>> {
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            if is_square(&(-&entries[j]).div(&entries[i])?)? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

fn class_from_entries(tower: &Tower, entries: Vec<Element>) -> Result<WittClass> {
    if entries.is_empty() {
        Ok(WittClass::zero(tower))
    } else {
        witt_decompose(&QuadraticForm::new(tower, entries)?)
    }
}

/// Split off hyperbolic planes until the remaining form is certified anisotropic.
pub fn witt_decompose(f: &QuadraticForm) -> Result<WittClass> {
    let tower = f.tower.clone();
    let mut cur = f.entries.clone();
    let mut index = 0;
    let mut prov = Vec::new();
    loop {
        if cur.is_empty() {
            return Ok(WittClass {
                tower,
                anisotropic_kernel: None,
                witt_index: index,
                provenance: prov,
            });
        }
        if let Some((i, j)) = first_square_pair(&cur)? {
            prov.push(format!("split <{},{}>", cur[i], cur[j]));
            cur.remove(j);
            cur.remove(i);
            index += 1;
            continue;
        }
        if tower.top_laurent().is_some() {
            return laurent_decompose(&QuadraticForm::new(&tower, cur)?, index, prov);
        }
        let g = QuadraticForm::new(&tower, cur.clone())?;
        let r = is_isotropic(&g)?;
        match (&r.status, &r.certificate) {
            (Status::Refuted, _) => {
                prov.push(format!(
                    "anisotropic: {}",
                    certificate_summary(&r.certificate)
                ));
                return Ok(WittClass {
                    tower,
                    anisotropic_kernel: Some(g),
                    witt_index: index,
                    provenance: prov,
                });
            }
            (Status::Proved, Certificate::Vector { coords, .. }) => {
                let v = coords
                    .iter()
                    .map(|c| crate::fields::parse_element(c, &tower))
                    .collect::<Result<Vec<_>>>()?;
                prov.push(format!("split hyperbolic plane at ({})", coords.join(",")));
                cur = split_by_vector(&cur, &v)?;
                index += 1;
            }
            _ => {
                return Err(Error::UnsupportedTower(format!(
                    "cannot decide isotropy of {g} over {tower}"
                )));
            }
        }
    }
}

fn laurent_decompose(f: &QuadraticForm, index: usize, mut prov: Vec<String>) -> Result<WittClass> {
    let t = f.tower.top_laurent().unwrap().to_string();
    let pair = springer_residues(f, &ValuationSpec::new(&t))?;
    let lifted = lift_pair(&f.tower, &pair, &t)?;
    prov.push(format!(
        "residues at {t}: ({}, {})",
        pair.first, pair.second
    ));
    let kdim = lifted.as_ref().map_or(0, |k| k.dim());
    Ok(WittClass {
        tower: f.tower.clone(),
        anisotropic_kernel: lifted,
        witt_index: index + (f.dim() - kdim) / 2,
        provenance: prov,
    })
}

/// `lift(first) ⊥ t·lift(second)`; anisotropic when both parts are.
pub fn lift_pair(tower: &Tower, pair: &ResiduePair, t: &str) -> Result<Option<QuadraticForm>> {
    let tv = Element::var(tower, t)?;
    let mut e = Vec::new();
    for x in pair.first.kernel_entries() {
        e.push(embed(&x, tower)?);
    }
    for x in pair.second.kernel_entries() {
        e.push(&embed(&x, tower)? * &tv);
    }
    Ok(if e.is_empty() {
        None
    } else {
        Some(QuadraticForm::new(tower, e)?)
    })
}

pub fn springer_residues(f: &QuadraticForm, v: &ValuationSpec) -> Result<ResiduePair> {
    if f.tower.top_laurent() != Some(v.var.as_str()) {
        return Err(Error::NotLaurentLayer(v.var.clone()));
    }
    let res = f.tower.parent.clone().unwrap();
    let [even, odd] = springer_split(f)?;
    Ok(ResiduePair {
        first: class_from_entries(&res, even.into_iter().map(|(_, u, _)| u).collect())?,
        second: class_from_entries(&res, odd.into_iter().map(|(_, u, _)| u).collect())?,
    })
}

fn certificate_summary(c: &Certificate) -> String {
    match c {
        Certificate::LocalObstruction { place, .. } => format!("local obstruction at {place}"),
        Certificate::Exhaustive { field, .. } => format!("exhaustive search over {field}"),
        Certificate::Residue { variable, .. } => format!("residue forms at {variable}"),
        Certificate::Specialization { point, .. } => {
            let p: Vec<String> = point.iter().map(|(a, b)| format!("{a}={b}")).collect();
            format!("specialization at {}", p.join(","))
        }
        Certificate::Invariants { detail } => detail.clone(),
        _ => "certified".into(),
    }
}

fn rationals_of(f: &QuadraticForm) -> Result<Vec<BigInt>> {
    f.entries
        .iter()
        .map(|e| sqfree(e.as_scalar().unwrap().as_rational().unwrap()))
        .collect()
}

fn rational_isometry(f: &QuadraticForm, g: &QuadraticForm) -> Result<Verdict> {
    let (a, b) = (rationals_of(f)?, rationals_of(g)?);
    let pos = |v: &[BigInt]| v.iter().filter(|x| x.is_positive()).count();
    if pos(&a) != pos(&b) {
        return Ok(Verdict::refuted(Certificate::Invariants {
            detail: format!(
                "signatures differ: {} vs {} positive entries",
                pos(&a),
                pos(&b)
            ),
        }));
    }
    let mut all = a.clone();
    all.extend(b.iter().cloned());
    for pl in places(&all)? {
        if hasse(&a, &pl) != hasse(&b, &pl) {
            return Ok(Verdict::refuted(Certificate::LocalObstruction {
                place: pl.to_string(),
                detail: "Hasse invariants differ".into(),
            }));
        }
    }
    Ok(Verdict::proved(Certificate::Invariants {
        detail: "same dimension, discriminant, signature and Hasse invariants".into(),
    }))
}

/// Greedy matching of entries up to square factors.
fn match_up_to_squares(f: &QuadraticForm, g: &QuadraticForm) -> Result<bool> {
    let mut used = vec![false; g.dim()];
    for x in &f.entries {
        let mut found = false;
        for (j, y) in g.entries.iter().enumerate() {
            if !used[j] && is_square(&x.div(y)?)? {
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_isometric(f: &QuadraticForm, g: &QuadraticForm) -> Result<Verdict> {
    f.tower.check_same(&g.tower)?;
    if f.dim() != g.dim() {
        return Ok(Verdict::refuted(Certificate::Invariants {
            detail: format!("dimensions differ: {} vs {}", f.dim(), g.dim()),
        }));
    }
    if match_up_to_squares(f, g)? {
        return Ok(Verdict::proved(Certificate::Chain {
            steps: vec!["entries agree up to a permutation and square factors".into()],
        }));
    }
    let dq = signed_discriminant(f).div(&signed_discriminant(g))?;
    match square_status(&dq)? {
        Some(false) => {
            return Ok(Verdict::refuted(Certificate::Invariants {
                detail: format!("discriminants differ by the non-square {dq}"),
            }))
        }
        Some(true) if tower_kind(&f.tower) == TowerKind::Finite => {
            return Ok(Verdict::proved(Certificate::Invariants {
                detail: "same dimension and discriminant over a finite field".into(),
            }))
        }
        _ => {}
    }
    if tower_kind(&f.tower) == TowerKind::Rationals {
        return rational_isometry(f, g);
    }
    match witt_decompose(&orth_sum(f, &g.negate())?) {
        Ok(w) if w.is_zero() => Ok(Verdict::proved(Certificate::Chain {
            steps: w.provenance,
        })),
        Ok(w) if negative_tests_sound(&f.tower) => Ok(Verdict::refuted(Certificate::Chain {
            steps: [
                w.provenance.clone(),
                vec![format!("f - g has anisotropic kernel {w}")],
            ]
            .concat(),
        })),
        Ok(w) => Ok(Verdict::reduced(vec![Obligation::new(format!(
            "{w} is hyperbolic over {}",
            f.tower
        ))])),
        Err(Error::UnsupportedTower(_)) => Ok(Verdict::reduced(vec![Obligation::new(format!(
            "{f} isometric to {g} over {}",
            f.tower
        ))])),
        Err(e) => Err(e),
    }
}
