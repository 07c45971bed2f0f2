//! Blowing down a line `L`: `E_{n-1} ⊂ E_n` (or `E₇ × A₁ ⊂ E₈`).

use std::collections::BTreeMap;

use serde::Serialize;

use super::{adjoint_weights, negated, tensor, zeros, Component, Decomposition, SubalgebraSpec};
use crate::census::{enumerate_classes, enumerate_lines, enumerate_roots, enumerate_rulings, ClassQuery};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::{RootSystem, DEFAULT_ORBIT_CAP};

/// Classes of `X_{n-1}` (or `P¹×P¹`) carried into `L^⊥ ⊂ Pic(X_n)`.
struct Downstairs {
    surface: String,
    embedding: String,
    lines: Vec<DivisorClass>,
    rulings: Vec<DivisorClass>,
    roots: Vec<DivisorClass>,
    canonical: DivisorClass,
}

/// Identifies `Pic(X_{n-1})` with `L^⊥` by `c ↦ w(c, 0)`, where `w` is a Weyl
/// element taking `L_n` to `L`. When `L` is not in the orbit of `L_n` (only the
/// line `H - L₁ - L₂` on `X₂`), the blow-down is `P¹×P¹` and its classes are
/// found directly inside `L^⊥` with canonical class `K - L`.
fn downstairs(p: &PicardLattice, l: &DivisorClass) -> Result<Downstairs> {
    let n = p.n();
    let sys = RootSystem::build(p)?;
    let last = p.exceptional(n);
    if let Some(word) = sys.weyl_word(&last, l, DEFAULT_ORBIT_CAP)? {
        let q = PicardLattice::new(n - 1)?;
        let phi = |c: &DivisorClass| sys.apply_word(&word, &c.extend());
        let map = |v: Vec<DivisorClass>| v.iter().map(phi).collect::<Vec<_>>();
        let canonical = phi(&q.canonical_class());
        debug_assert_eq!(canonical, p.canonical_class() - *l);
        return Ok(Downstairs {
            surface: format!("X{}", n - 1),
            embedding: format!("c ↦ w(c, 0) with w a product of {} simple reflections", word.len()),
            lines: map(enumerate_lines(&q)),
            rulings: map(enumerate_rulings(&q)),
            roots: map(enumerate_roots(&q)),
            canonical,
        });
    }
    let k = p.canonical_class() - *l;
    // On L^⊥ the pairings with K and with K - L agree.
    let find = |s: i64, kk: i64| enumerate_classes(p, &ClassQuery::new(s, kk).with_dot(*l, 0));
    Ok(Downstairs {
        surface: "P1×P1".into(),
        embedding: "classes of L^⊥ with canonical class K - L".into(),
        lines: find(-1, -1)?,
        rulings: find(0, -2)?,
        roots: find(-2, 0)?,
        canonical: k,
    })
}

/// Both branching identities for a fixed line, with the intersection profile.
#[derive(Clone, Debug, Serialize)]
pub struct FixedLineReport {
    pub n: usize,
    pub line: DivisorClass,
    pub downstairs: String,
    pub embedding: String,
    /// Number of lines `l` with each value of `l·L`.
    pub profile: BTreeMap<i64, usize>,
    pub adjoint: Decomposition,
    pub lines: Decomposition,
}

impl FixedLineReport {
    pub fn verified(&self) -> bool {
        self.adjoint.verified && self.lines.verified
    }
}

pub fn decompose_fixed_line(p: &PicardLattice, l: &DivisorClass) -> Result<FixedLineReport> {
    let n = p.n();
    if !(2..=8).contains(&n) {
        return Err(Error::Unsupported { n, lo: 2, hi: 8 });
    }
    SubalgebraSpec::FixedLine { line: *l }.validate(p)?;
    let d = downstairs(p, l)?;
    let k = p.canonical_class();
    let zero = p.zero();
    let mut profile = BTreeMap::new();
    for m in enumerate_lines(p) {
        *profile.entry(m.dot(l)).or_insert(0) += 1;
    }

    let mut le_down = d.roots.clone();
    le_down.extend(zeros(p, n - 1));
    let a1 = vec![zero, *l + k, -*l - k];

    let adjoint = if n <= 7 {
        Decomposition::new(
            format!("fixed-line/adjoint/n{n}"),
            "LE_n = π*LE_{n-1} + O + π*L_{n-1}⊗O(-L) + π*L*_{n-1}⊗O(L)",
            format!("LE{n}"),
            adjoint_weights(p),
            vec![
                Component::new("π*LE_{n-1}", le_down, zero),
                Component::new("O", vec![zero], zero),
                Component::new("π*L_{n-1}⊗O(-L)", d.lines.clone(), -*l),
                Component::new("π*L*_{n-1}⊗O(L)", negated(&d.lines), *l),
            ],
        )
    } else {
        Decomposition::new(
            "fixed-line/adjoint/n8",
            "LE_8 = π*LE_7 + LA_1 + π*L_7⊗O(-L)⊗Λ_1, Λ_1 = O + O(L+K)",
            "LE8",
            adjoint_weights(p),
            vec![
                Component::new("π*LE_7", le_down, zero),
                Component::new("LA_1", a1.clone(), zero),
                Component::new("π*L_7⊗O(-L)⊗Λ_1", tensor(&d.lines, &[zero, *l + k]), -*l),
            ],
        )
    };

    let lines = match n {
        2..=6 => Decomposition::new(
            format!("fixed-line/lines/n{n}"),
            "L_n = π*L_{n-1} + π*R_{n-1}⊗O(-L) + O(L)",
            format!("L{n}"),
            enumerate_lines(p),
            vec![
                Component::new("π*L_{n-1}", d.lines.clone(), zero),
                Component::new("π*R_{n-1}⊗O(-L)", d.rulings.clone(), -*l),
                Component::new("O(L)", vec![*l], zero),
            ],
        ),
        7 => Decomposition::new(
            "fixed-line/lines/n7",
            "L_7 = π*L_6 + π*R_6⊗O(-L) + O(L) + O(-K-L)",
            "L7",
            enumerate_lines(p),
            vec![
                Component::new("π*L_6", d.lines.clone(), zero),
                Component::new("π*R_6⊗O(-L)", d.rulings.clone(), -*l),
                Component::new("O(L)", vec![*l], zero),
                Component::new("O(-K-L)", vec![-k - *l], zero),
            ],
        ),
        _ => {
            // R₇ = LE₇ ⊗ O(-K₇): rulings of X₇ and seven copies of -K₇.
            let mut r7 = d.rulings.clone();
            r7.extend(vec![-d.canonical; 7]);
            let mut l8: Vec<DivisorClass> = adjoint_weights(p).into_iter().map(|w| w - k).collect();
            l8.sort();
            Decomposition::new(
                "fixed-line/lines/n8",
                "L_8 = π*L_7⊗Λ*_1 + π*R_7⊗O(-L) + A_1⊗O(-K)",
                "L8",
                l8,
                vec![
                    Component::new("π*L_7⊗Λ*_1", tensor(&d.lines, &[zero, -*l - k]), zero),
                    Component::new("π*R_7⊗O(-L)", r7, -*l),
                    Component::new("A_1⊗O(-K)", a1, -k),
                ],
            )
        }
    };

    Ok(FixedLineReport { n, line: *l, downstairs: d.surface, embedding: d.embedding, profile, adjoint, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_line_up_to_seven() {
        for n in 2..=7 {
            let p = PicardLattice::new(n).unwrap();
            for l in enumerate_lines(&p) {
                let r = decompose_fixed_line(&p, &l).unwrap();
                assert!(r.adjoint.verified, "n={n} {l} {:?}", r.adjoint.counterexample);
                assert!(r.lines.verified, "n={n} {l} {:?}", r.lines.counterexample);
            }
        }
    }

    #[test]
    fn block_sizes() {
        let p = PicardLattice::new(6).unwrap();
        let r = decompose_fixed_line(&p, &p.exceptional(6)).unwrap();
        assert_eq!(r.lines.block_sizes(), vec![16, 10, 1]);
        assert_eq!(r.profile, BTreeMap::from([(-1, 1), (0, 16), (1, 10)]));
        let p = PicardLattice::new(7).unwrap();
        let r = decompose_fixed_line(&p, &p.exceptional(3)).unwrap();
        assert_eq!(r.lines.block_sizes(), vec![27, 27, 1, 1]);
        assert_eq!(r.adjoint.block_sizes(), vec![78, 1, 27, 27]);
    }

    #[test]
    fn e8_over_e7() {
        let p = PicardLattice::new(8).unwrap();
        let l = p.hyperplane() - p.exceptional(1) - p.exceptional(2);
        let r = decompose_fixed_line(&p, &l).unwrap();
        assert!(r.verified());
        assert_eq!(r.adjoint.block_sizes(), vec![133, 3, 112]);
        assert_eq!(r.lines.block_sizes(), vec![112, 133, 3]);
    }

    #[test]
    fn quadric_blowdown_on_x2() {
        let p = PicardLattice::new(2).unwrap();
        let l = p.hyperplane() - p.exceptional(1) - p.exceptional(2);
        let r = decompose_fixed_line(&p, &l).unwrap();
        assert_eq!(r.downstairs, "P1×P1");
        assert!(r.verified());
        assert_eq!(r.lines.block_sizes(), vec![0, 2, 1]);
        assert_eq!(r.adjoint.block_sizes(), vec![3, 1, 0, 0]);
        let r = decompose_fixed_line(&p, &p.exceptional(1)).unwrap();
        assert_eq!(r.downstairs, "X1");
        assert!(r.verified());
    }

    #[test]
    fn wrong_class_rejected() {
        let p = PicardLattice::new(5).unwrap();
        assert!(decompose_fixed_line(&p, &p.hyperplane()).is_err());
    }
}
