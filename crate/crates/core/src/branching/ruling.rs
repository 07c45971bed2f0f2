//! A ruling `R` reduces `E_n` to `D_{n-1}` (to `D₆ × A₁` when `n = 7`).

use std::collections::HashSet;

use serde::Serialize;

use super::{
    adjoint_weights, exterior_power, expected_d_type, lines_with, negated, roots_with, subalgebra_type, tensor, zeros,
    Component, Decomposition, SubalgebraSpec,
};
use crate::census::{enumerate_lines, enumerate_rulings, singular_fibers};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::CartanType;

/// The weight sets attached to a ruling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RulingSets {
    pub ruling: DivisorClass,
    /// Fiber components, `C² = -1, C·K = -1, C·R = 0`.
    pub w: Vec<DivisorClass>,
    /// Line sections, `S² = -1, S·K = -1, S·R = 1`.
    pub s_plus: Vec<DivisorClass>,
    /// Ruling sections, `T² = -2, T·K = 0, T·R = 1`.
    pub s_minus: Vec<DivisorClass>,
    /// Roots of `LD_{n-1}`, `D·R = 0`.
    pub d_roots: Vec<DivisorClass>,
}

impl RulingSets {
    pub fn new(p: &PicardLattice, r: &DivisorClass) -> Result<Self> {
        SubalgebraSpec::FixedRuling { ruling: *r }.validate(p)?;
        Ok(Self {
            ruling: *r,
            w: lines_with(p, r, 0),
            s_plus: lines_with(p, r, 1),
            s_minus: roots_with(p, r, 1),
            d_roots: roots_with(p, r, 0),
        })
    }

    /// Weights of `LD_{n-1}`.
    pub fn d_weights(&self, p: &PicardLattice) -> Vec<DivisorClass> {
        let mut v = self.d_roots.clone();
        v.extend(zeros(p, p.n() - 1));
        v
    }
}

/// Clifford multiplication `S⁺ ⊗ W* → S⁻` and `S⁻ ⊗ W → S⁺` at class level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CliffordReport {
    /// Pairs `(S, C)` with `S·C = 0`; each must give `S - C ∈ S⁻`.
    pub plus_pairs: usize,
    /// Pairs `(T, C)` with `T·C = 1`; each must give `T + C ∈ S⁺`.
    pub minus_pairs: usize,
    pub violations: Vec<(DivisorClass, DivisorClass)>,
    /// Every spinor weight is reached from the other side.
    pub surjective: bool,
}

pub fn clifford_check(p: &PicardLattice, r: &DivisorClass) -> Result<CliffordReport> {
    let sets = RulingSets::new(p, r)?;
    Ok(clifford(&sets))
}

fn clifford(sets: &RulingSets) -> CliffordReport {
    let sp: HashSet<_> = sets.s_plus.iter().copied().collect();
    let sm: HashSet<_> = sets.s_minus.iter().copied().collect();
    let mut rep = CliffordReport::default();
    let (mut hit_minus, mut hit_plus) = (HashSet::new(), HashSet::new());
    for c in &sets.w {
        for s in &sets.s_plus {
            if s.dot(c) == 0 {
                rep.plus_pairs += 1;
                let t = *s - *c;
                if sm.contains(&t) {
                    hit_minus.insert(t);
                } else {
                    rep.violations.push((*s, *c));
                }
            }
        }
        for t in &sets.s_minus {
            if t.dot(c) == 1 {
                rep.minus_pairs += 1;
                let s = *t + *c;
                if sp.contains(&s) {
                    hit_plus.insert(s);
                } else {
                    rep.violations.push((*t, *c));
                }
            }
        }
    }
    rep.surjective = hit_minus.len() == sm.len() && hit_plus.len() == sp.len();
    rep
}

/// Everything checked for one ruling.
#[derive(Clone, Debug, Serialize)]
pub struct FixedRulingReport {
    pub n: usize,
    pub sets: RulingSets,
    pub fiber_pairs: usize,
    pub clifford: CliffordReport,
    pub d_type: CartanType,
    pub d_type_expected: CartanType,
    /// Class-level duality bijections between spinor sets.
    pub dualities: Vec<Decomposition>,
    pub decompositions: Vec<Decomposition>,
}

impl FixedRulingReport {
    pub fn sizes_ok(&self) -> bool {
        let n = self.n;
        let half = 1usize << (n - 2);
        self.sets.w.len() == 2 * n - 2 && self.sets.s_plus.len() == half && self.sets.s_minus.len() == half
    }

    pub fn verified(&self) -> bool {
        self.sizes_ok()
            && self.fiber_pairs == self.n - 1
            && self.clifford.violations.is_empty()
            && self.d_type == self.d_type_expected
            && self.dualities.iter().all(|d| d.verified)
            && self.decompositions.iter().all(|d| d.verified)
    }
}

fn dualities(p: &PicardLattice, s: &RulingSets) -> Vec<Decomposition> {
    let n = p.n() as i64;
    let (k, r) = (p.canonical_class(), s.ruling);
    let m = n / 2;
    if n % 2 == 0 {
        vec![Decomposition::new(
            format!("duality/even/n{n}"),
            "(S⁺)*⊗O((m-4)R - K) ≅ S⁻, n = 2m",
            "S-",
            s.s_minus.clone(),
            vec![Component::new("(S⁺)*", negated(&s.s_plus), (m - 4) * r - k)],
        )]
    } else {
        vec![
            Decomposition::new(
                format!("duality/odd-plus/n{n}"),
                "(S⁺)*⊗O((m-3)R - K) ≅ S⁺, n = 2m+1",
                "S+",
                s.s_plus.clone(),
                vec![Component::new("(S⁺)*", negated(&s.s_plus), (m - 3) * r - k)],
            ),
            Decomposition::new(
                format!("duality/odd-minus/n{n}"),
                "(S⁻)*⊗O((m-4)R - K) ≅ S⁻, n = 2m+1",
                "S-",
                s.s_minus.clone(),
                vec![Component::new("(S⁻)*", negated(&s.s_minus), (m - 4) * r - k)],
            ),
        ]
    }
}

fn lines_identity(p: &PicardLattice, s: &RulingSets) -> Option<Decomposition> {
    let n = p.n();
    let (k, r, z) = (p.canonical_class(), s.ruling, p.zero());
    let target = enumerate_lines(p);
    let w = Component::new("W", s.w.clone(), z);
    let sp = Component::new("S⁺", s.s_plus.clone(), z);
    match n {
        0..=5 => Some(Decomposition::new(format!("fixed-ruling/lines/n{n}"), "L_n = W_{n-1} + S⁺", format!("L{n}"), target, vec![w, sp])),
        6 => Some(Decomposition::new(
            "fixed-ruling/lines/n6",
            "L_6 = W_5 + S⁺ + O(-K-R)",
            "L6",
            target,
            vec![w, sp, Component::new("O(-K-R)", vec![-k - r], z)],
        )),
        7 => Some(Decomposition::new(
            "fixed-ruling/lines/n7",
            "L_7 = W_6⊗Λ_1 + S⁺, Λ_1 = O + O(-R-K)",
            "L7",
            target,
            vec![Component::new("W⊗Λ_1", tensor(&s.w, &[z, -r - k]), z), sp],
        )),
        _ => None,
    }
}

fn rulings_identity(p: &PicardLattice, s: &RulingSets) -> Option<Decomposition> {
    let n = p.n();
    let (k, r, z) = (p.canonical_class(), s.ruling, p.zero());
    let mut target = enumerate_rulings(p);
    let mut comps = Vec::new();
    let statement = match n {
        0..=4 => "R_n = O(R)(O + S⁻)",
        5 => "R_5 = O(R)(O + S⁻ + O(-K-2R))",
        6 => "R_6 = O(R)(O + S⁻ + W_5⊗O(-K-2R))",
        7 => "R_7 = O(R)(S²Λ_1 + S⁻⊗Λ_1 + Λ²W_6⊗O(-K-2R))",
        _ => return None,
    };
    if n <= 6 {
        comps.push(Component::new("O", vec![z], r));
        comps.push(Component::new("S⁻", s.s_minus.clone(), r));
    }
    match n {
        5 => comps.push(Component::new("O(-K-2R)", vec![z], r - k - 2 * r)),
        6 => comps.push(Component::new("W⊗O(-K-2R)", s.w.clone(), r - k - 2 * r)),
        7 => {
            // R₇ = LE₇ ⊗ O(-K) carries seven copies of -K.
            target.extend(vec![-k; 7]);
            let lam = [z, -r - k];
            comps.push(Component::new("S²Λ_1", vec![z, -r - k, -2 * r - 2 * k], r));
            comps.push(Component::new("S⁻⊗Λ_1", tensor(&s.s_minus, &lam), r));
            comps.push(Component::new("Λ²W⊗O(-K-2R)", exterior_power(&s.w, 2, n), r - k - 2 * r));
        }
        _ => {}
    }
    Some(Decomposition::new(format!("fixed-ruling/rulings/n{n}"), statement, format!("R{n}"), target, comps))
}

fn adjoint_identities(p: &PicardLattice, s: &RulingSets) -> Vec<Decomposition> {
    let n = p.n();
    let (k, r, z) = (p.canonical_class(), s.ruling, p.zero());
    let m = (n / 2) as i64;
    let ld = Component::new("LD_{n-1}", s.d_weights(p), z);
    let mut out = Vec::new();
    if n <= 6 {
        out.push(Decomposition::new(
            format!("fixed-ruling/adjoint-dual/n{n}"),
            "LE_n = LD_{n-1} + O + S⁻ + (S⁻)*",
            format!("LE{n}"),
            adjoint_weights(p),
            vec![
                ld.clone(),
                Component::new("O", vec![z], z),
                Component::new("S⁻", s.s_minus.clone(), z),
                Component::new("(S⁻)*", negated(&s.s_minus), z),
            ],
        ));
        let last = if n % 2 == 1 {
            Component::new("S⁻⊗O((4-m)R+K)", s.s_minus.clone(), (4 - m) * r + k)
        } else {
            Component::new("S⁺⊗O((4-m)R+K)", s.s_plus.clone(), (4 - m) * r + k)
        };
        out.push(Decomposition::new(
            format!("fixed-ruling/adjoint/n{n}"),
            if n % 2 == 1 { "LE_n = LD_{n-1} + O + S⁻ + S⁻⊗O((4-m)R+K), n = 2m+1" } else { "LE_n = LD_{n-1} + O + S⁻ + S⁺⊗O((4-m)R+K), n = 2m" },
            format!("LE{n}"),
            adjoint_weights(p),
            vec![ld, Component::new("O", vec![z], z), Component::new("S⁻", s.s_minus.clone(), z), last],
        ));
    } else if n == 7 {
        out.push(Decomposition::new(
            "fixed-ruling/adjoint/n7",
            "LE_7 = LD_6 + LA_1 + S⁻⊗Λ_1⊗O(R+K)",
            "LE7",
            adjoint_weights(p),
            vec![
                ld,
                Component::new("LA_1", vec![z, r + k, -r - k], z),
                Component::new("S⁻⊗Λ_1⊗O(R+K)", tensor(&s.s_minus, &[z, -r - k]), r + k),
            ],
        ));
    }
    out
}

pub fn decompose_fixed_ruling(p: &PicardLattice, r: &DivisorClass) -> Result<FixedRulingReport> {
    let n = p.n();
    if !(2..=8).contains(&n) {
        return Err(Error::Unsupported { n, lo: 2, hi: 8 });
    }
    let sets = RulingSets::new(p, r)?;
    let fiber_pairs = singular_fibers(p, r)?.pairs.len();
    let clifford = clifford(&sets);
    let d_type = subalgebra_type(&sets.d_roots, n - 1)?;
    let mut decompositions = Vec::new();
    decompositions.extend(lines_identity(p, &sets));
    decompositions.extend(rulings_identity(p, &sets));
    decompositions.extend(adjoint_identities(p, &sets));
    Ok(FixedRulingReport {
        n,
        dualities: dualities(p, &sets),
        d_type_expected: expected_d_type(n - 1),
        d_type,
        fiber_pairs,
        clifford,
        decompositions,
        sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_ruling_up_to_seven() {
        for n in 2..=7 {
            let p = PicardLattice::new(n).unwrap();
            for r in enumerate_rulings(&p) {
                let rep = decompose_fixed_ruling(&p, &r).unwrap();
                for d in rep.decompositions.iter().chain(&rep.dualities) {
                    assert!(d.verified, "n={n} R={r} {}: {:?}", d.id, d.counterexample);
                }
                assert!(rep.verified(), "n={n} R={r}: {:?} vs {:?}", rep.d_type, rep.d_type_expected);
                assert!(rep.clifford.surjective || n == 2);
            }
        }
    }

    #[test]
    fn sizes_on_x5_and_x7() {
        let p = PicardLattice::new(5).unwrap();
        let r = p.hyperplane() - p.exceptional(1);
        let rep = decompose_fixed_ruling(&p, &r).unwrap();
        assert_eq!((rep.sets.w.len(), rep.sets.s_plus.len(), rep.sets.s_minus.len()), (8, 8, 8));
        let p = PicardLattice::new(7).unwrap();
        let r = p.hyperplane() - p.exceptional(1);
        let rep = decompose_fixed_ruling(&p, &r).unwrap();
        let le = rep.decompositions.iter().find(|d| d.id == "fixed-ruling/adjoint/n7").unwrap();
        assert_eq!(le.block_sizes(), vec![66, 3, 64]);
        assert_eq!(rep.d_type.to_string(), "D6");
    }

    #[test]
    fn e8_ruling_sets() {
        let p = PicardLattice::new(8).unwrap();
        let r = p.hyperplane() - p.exceptional(8);
        let rep = decompose_fixed_ruling(&p, &r).unwrap();
        assert!(rep.verified());
        assert_eq!(rep.fiber_pairs, 7);
        assert!(rep.decompositions.is_empty());
    }
}
