//! Reductions of `E_n` to subalgebras singled out by a line, a ruling, a
//! section or a parity, each checked as an exact identity of weight multisets.

mod degeneration;
mod line;
mod parity;
mod ruling;
mod section;
mod small;

pub use degeneration::{degeneration_counts, DegenerationCase, DegenerationReport};
pub use line::{decompose_fixed_line, FixedLineReport};
pub use parity::{decompose_parity_d8, e7_centralizer, CentralizerReport, ParityReport};
pub use ruling::{clifford_check, decompose_fixed_ruling, CliffordReport, FixedRulingReport, RulingSets};
pub use section::{decompose_section, SectionKind, SectionReport};
pub use small::{small_n_checks, SmallNReport};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::census::{enumerate_lines, enumerate_roots};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::{base_of, classify, CartanType, SimpleType};

/// The geometric datum defining a reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum SubalgebraSpec {
    FixedLine { line: DivisorClass },
    FixedRuling { ruling: DivisorClass },
    RulingLineSection { ruling: DivisorClass, section: DivisorClass },
    RulingRulingSection { ruling: DivisorClass, section: DivisorClass },
    Parity { reference: DivisorClass },
    A1Pair { first: DivisorClass, second: DivisorClass },
}

impl SubalgebraSpec {
    pub fn validate(&self, p: &PicardLattice) -> Result<()> {
        let bad = |d: &DivisorClass, reason: &str| Err(Error::InvalidClass { class: d.to_json(), reason: reason.into() });
        match self {
            Self::FixedLine { line } => {
                p.check(line)?;
                if !p.is_line(line) {
                    return bad(line, "not a line (needs D² = -1, D·K = -1)");
                }
            }
            Self::FixedRuling { ruling } => {
                p.check(ruling)?;
                if !p.is_ruling(ruling) {
                    return bad(ruling, "not a ruling (needs R² = 0, R·K = -2)");
                }
            }
            Self::RulingLineSection { ruling, section } => {
                Self::FixedRuling { ruling: *ruling }.validate(p)?;
                p.check(section)?;
                if !p.is_line(section) || section.dot(ruling) != 1 {
                    return bad(section, "not a line section (needs S² = -1, S·K = -1, S·R = 1)");
                }
            }
            Self::RulingRulingSection { ruling, section } => {
                Self::FixedRuling { ruling: *ruling }.validate(p)?;
                p.check(section)?;
                if !p.is_root(section) || section.dot(ruling) != 1 {
                    return bad(section, "not a ruling section (needs T² = -2, T·K = 0, T·R = 1)");
                }
            }
            Self::Parity { reference } => {
                p.check(reference)?;
                if reference.self_intersection() != 1 || reference.dot(&p.canonical_class()) != -3 {
                    return bad(reference, "not a degree class (needs H² = 1, H·K = -3)");
                }
            }
            Self::A1Pair { first, second } => {
                p.check(first)?;
                p.check(second)?;
                if !p.is_line(first) || !p.is_line(second) || first.dot(second) != 0 {
                    return bad(second, "needs two disjoint lines");
                }
            }
        }
        Ok(())
    }
}

/// A summand: weights, all shifted by `twist`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: String,
    pub weights: Vec<DivisorClass>,
    pub twist: DivisorClass,
}

impl Component {
    pub fn new(label: impl Into<String>, weights: Vec<DivisorClass>, twist: DivisorClass) -> Self {
        Self { label: label.into(), weights, twist }
    }

    pub fn untwisted(label: impl Into<String>, weights: Vec<DivisorClass>, rank: usize) -> Self {
        Self::new(label, weights, DivisorClass::zero(rank))
    }

    pub fn shifted(&self) -> impl Iterator<Item = DivisorClass> + '_ {
        self.weights.iter().map(|w| *w + self.twist)
    }
}

/// A class whose multiplicities on the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultisetDiff {
    pub class: DivisorClass,
    pub lhs: usize,
    pub rhs: usize,
}

/// An asserted identity `target = ⊕ components`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub id: String,
    pub statement: String,
    pub target_label: String,
    pub target: Vec<DivisorClass>,
    pub components: Vec<Component>,
    pub verified: bool,
    pub counterexample: Option<MultisetDiff>,
}

impl Decomposition {
    pub fn new(
        id: impl Into<String>,
        statement: impl Into<String>,
        target_label: impl Into<String>,
        target: Vec<DivisorClass>,
        components: Vec<Component>,
    ) -> Self {
        let rhs: Vec<DivisorClass> = components.iter().flat_map(|c| c.shifted()).collect();
        let counterexample = multiset_diff(&target, &rhs);
        Self {
            id: id.into(),
            statement: statement.into(),
            target_label: target_label.into(),
            target,
            components,
            verified: counterexample.is_none(),
            counterexample,
        }
    }

    pub fn lhs_size(&self) -> usize {
        self.target.len()
    }

    pub fn rhs_size(&self) -> usize {
        self.components.iter().map(|c| c.weights.len()).sum()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.weights.len()).collect()
    }
}

/// First class (in canonical order) with different multiplicities, if any.
pub fn multiset_diff(lhs: &[DivisorClass], rhs: &[DivisorClass]) -> Option<MultisetDiff> {
    let mut count: BTreeMap<DivisorClass, (usize, usize)> = BTreeMap::new();
    for c in lhs {
        count.entry(*c).or_default().0 += 1;
    }
    for c in rhs {
        count.entry(*c).or_default().1 += 1;
    }
    count.into_iter().find(|(_, (a, b))| a != b).map(|(class, (lhs, rhs))| MultisetDiff { class, lhs, rhs })
}

/// Weights of the adjoint representation: roots and `n` zeros.
pub(crate) fn adjoint_weights(p: &PicardLattice) -> Vec<DivisorClass> {
    let mut v = enumerate_roots(p);
    v.extend(std::iter::repeat(p.zero()).take(p.n()));
    v
}

pub(crate) fn lines_with(p: &PicardLattice, c: &DivisorClass, v: i64) -> Vec<DivisorClass> {
    enumerate_lines(p).into_iter().filter(|l| l.dot(c) == v).collect()
}

pub(crate) fn roots_with(p: &PicardLattice, c: &DivisorClass, v: i64) -> Vec<DivisorClass> {
    enumerate_roots(p).into_iter().filter(|d| d.dot(c) == v).collect()
}

/// Weights of `Λᵏ` of a module with distinct weights `set`.
pub(crate) fn exterior_power(set: &[DivisorClass], k: usize, rank: usize) -> Vec<DivisorClass> {
    fn go(set: &[DivisorClass], k: usize, acc: DivisorClass, out: &mut Vec<DivisorClass>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in 0..set.len().saturating_sub(k - 1) {
            go(&set[i + 1..], k - 1, acc + set[i], out);
        }
    }
    let mut out = Vec::new();
    go(set, k, DivisorClass::zero(rank), &mut out);
    out
}

pub(crate) fn tensor(a: &[DivisorClass], b: &[DivisorClass]) -> Vec<DivisorClass> {
    a.iter().flat_map(|x| b.iter().map(move |y| *x + *y)).collect()
}

pub(crate) fn negated(a: &[DivisorClass]) -> Vec<DivisorClass> {
    a.iter().map(|x| -*x).collect()
}

pub(crate) fn zeros(p: &PicardLattice, k: usize) -> Vec<DivisorClass> {
    vec![p.zero(); k]
}

/// Dynkin type of the subalgebra spanned by `roots` and a Cartan of rank `cartan`.
pub fn subalgebra_type(roots: &[DivisorClass], cartan: usize) -> Result<CartanType> {
    let mut t = classify(&base_of(roots))?;
    t.abelian = cartan.saturating_sub(t.rank());
    Ok(t)
}

/// `D_k` with its low-rank coincidences.
pub fn expected_d_type(k: usize) -> CartanType {
    match k {
        0 => CartanType::new(vec![], 0),
        1 => CartanType::new(vec![], 1),
        2 => CartanType::new(vec![SimpleType::A(1), SimpleType::A(1)], 0),
        3 => CartanType::new(vec![SimpleType::A(3)], 0),
        k => CartanType::new(vec![SimpleType::D(k)], 0),
    }
}

pub fn expected_a_type(k: usize) -> CartanType {
    match k {
        0 => CartanType::new(vec![], 0),
        k => CartanType::new(vec![SimpleType::A(k)], 0),
    }
}

/// Root vectors of `roots` span a subalgebra together with the Cartan:
/// every bracket of two of them has root support inside `roots`.
pub fn bracket_closure(alg: &LieAlgebra, roots: &[DivisorClass]) -> Result<bool> {
    let set: std::collections::HashSet<_> = roots.iter().copied().collect();
    let vecs = roots.iter().map(|d| alg.root_vector(d)).collect::<Result<Vec<_>>>()?;
    for (i, x) in vecs.iter().enumerate() {
        for y in &vecs[i + 1..] {
            if !alg.weights_of(&alg.bracket(x, y)?).iter().all(|w| set.contains(w)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_power_counts() {
        let p = PicardLattice::new(5).unwrap();
        let set: Vec<_> = (1..=5).map(|i| p.exceptional(i)).collect();
        for k in 0..=6 {
            let e = exterior_power(&set, k, 5);
            let binom = [1, 5, 10, 10, 5, 1, 0][k];
            assert_eq!(e.len(), binom, "k = {k}");
        }
        let top = exterior_power(&set, 5, 5);
        assert_eq!(top, vec![set.iter().fold(p.zero(), |a, b| a + *b)]);
    }

    #[test]
    fn diff_detects_multiplicity() {
        let p = PicardLattice::new(2).unwrap();
        let (a, b) = (p.exceptional(1), p.exceptional(2));
        assert!(multiset_diff(&[a, b, a], &[a, a, b]).is_none());
        let d = multiset_diff(&[a, b, a], &[a, b, b]).unwrap();
        assert_eq!((d.class, d.lhs, d.rhs), (a, 2, 1));
    }

    #[test]
    fn spec_validation() {
        let p = PicardLattice::new(4).unwrap();
        let r = p.hyperplane() - p.exceptional(1);
        assert!(SubalgebraSpec::FixedRuling { ruling: r }.validate(&p).is_ok());
        assert!(SubalgebraSpec::FixedLine { line: r }.validate(&p).is_err());
        let s = p.exceptional(1);
        assert!(SubalgebraSpec::RulingLineSection { ruling: r, section: s }.validate(&p).is_ok());
        assert!(SubalgebraSpec::RulingLineSection { ruling: r, section: p.exceptional(2) }.validate(&p).is_err());
        let t = p.exceptional(1) - p.exceptional(2);
        assert!(SubalgebraSpec::RulingRulingSection { ruling: r, section: t }.validate(&p).is_ok());
        assert!(SubalgebraSpec::A1Pair { first: p.exceptional(1), second: p.exceptional(2) }.validate(&p).is_ok());
        assert!(SubalgebraSpec::Parity { reference: p.hyperplane() }.validate(&p).is_ok());
    }

    #[test]
    fn reductions_close_under_bracket() {
        let p = PicardLattice::new(7).unwrap();
        let alg = LieAlgebra::new(&p).unwrap();
        let r = p.hyperplane() - p.exceptional(1);
        let sets = RulingSets::new(&p, &r).unwrap();
        assert!(bracket_closure(&alg, &sets.d_roots).unwrap());
        let a: Vec<_> = sets.d_roots.iter().copied().filter(|d| d.dot(&sets.s_plus[0]) == 0).collect();
        assert!(bracket_closure(&alg, &a).unwrap());
        let l = p.exceptional(7);
        let e6 = roots_with(&p, &l, 0);
        assert!(bracket_closure(&alg, &e6).unwrap());
        // The off-diagonal blocks bracket into the Levi part.
        let mut off = roots_with(&p, &l, 1);
        off.extend(roots_with(&p, &l, -1));
        assert!(!bracket_closure(&alg, &off).unwrap());

        let p = PicardLattice::new(8).unwrap();
        let alg = LieAlgebra::new(&p).unwrap();
        let c = e7_centralizer(&p, &p.exceptional(1), &p.exceptional(2)).unwrap();
        assert!(bracket_closure(&alg, &c.roots).unwrap());
        let h = p.hyperplane();
        let even: Vec<_> = enumerate_roots(&p).into_iter().filter(|d| d.dot(&h) % 2 == 0).collect();
        assert!(bracket_closure(&alg, &even).unwrap());
    }
}
