//! `D₈ ⊂ E₈` from eight disjoint lines, and the `E₇` centralizing an `A₁`.

use serde::Serialize;

use super::{adjoint_weights, exterior_power, expected_d_type, subalgebra_type, zeros, Component, Decomposition, SubalgebraSpec};
use crate::census::{enumerate_lines, enumerate_roots};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::{CartanType, SimpleType};

/// A candidate rank-16 module `W₈` whose `Λ²`, twisted, should be `LD₈`.
#[derive(Clone, Debug, Serialize)]
pub struct W8Check {
    pub description: String,
    pub classes: Vec<DivisorClass>,
    /// Target of the quadratic form: every matched pair sums to it.
    pub form_target: DivisorClass,
    pub is_matching: bool,
    pub wedge: Decomposition,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityReport {
    pub degree_class: DivisorClass,
    pub even_roots: usize,
    pub odd_roots: usize,
    pub s_plus: usize,
    pub d_type: CartanType,
    pub d_type_expected: CartanType,
    /// `D + l` is a line of even degree iff `D·l = 1`, for `D` even, `l ∈ S⁺`.
    pub spinor_action_closed: bool,
    pub decompositions: Vec<Decomposition>,
    /// `W₈ = ⊕ O(Lᵢ) + O(-Lᵢ-K-H)` with `Λ²W₈⊗O(K+H)`.
    pub w8_as_written: W8Check,
    /// `W₈ = ⊕ O(Lᵢ) + O(Lᵢ')` with `Lᵢ' = K+H-Lᵢ` and `Λ²W₈⊗O(-K-H)`.
    pub w8_corrected: W8Check,
}

impl ParityReport {
    /// Everything except the `W₈` variant as written, which fails.
    pub fn verified(&self) -> bool {
        self.even_roots == 112
            && self.odd_roots == 128
            && self.s_plus == 128
            && self.d_type == self.d_type_expected
            && self.spinor_action_closed
            && self.decompositions.iter().all(|d| d.verified)
            && self.w8_corrected.is_matching
            && self.w8_corrected.wedge.verified
    }
}

fn w8_check(p: &PicardLattice, lines: &[DivisorClass], partner: DivisorClass, form_target: DivisorClass, twist: DivisorClass, description: &str) -> W8Check {
    let mut classes: Vec<DivisorClass> = lines.to_vec();
    classes.extend(lines.iter().map(|l| partner - *l));
    let is_matching = lines.iter().all(|l| classes.iter().filter(|c| **c + *l == form_target).count() == 1);
    let d_roots: Vec<DivisorClass> = {
        let h = degree_class(p, lines).expect("validated");
        enumerate_roots(p).into_iter().filter(|d| d.dot(&h) % 2 == 0).collect()
    };
    let mut ld = d_roots;
    ld.extend(zeros(p, 8));
    W8Check {
        description: description.into(),
        form_target,
        is_matching,
        wedge: Decomposition::new(
            "parity/w8-wedge",
            format!("LD_8 = Λ²W_8⊗O({})", twist.pretty()),
            "LD8",
            ld,
            vec![Component::new("Λ²W_8", exterior_power(&classes, 2, 8), twist)],
        ),
        classes,
    }
}

/// `H` with `K = -3H + ΣLᵢ`.
fn degree_class(p: &PicardLattice, lines: &[DivisorClass]) -> Result<DivisorClass> {
    let sum = lines.iter().fold(p.zero(), |a, l| a + *l) - p.canonical_class();
    let c = sum.coeffs();
    if c.iter().any(|x| x % 3 != 0) {
        return Err(Error::InvalidClass { class: sum.to_json(), reason: "ΣLᵢ - K is not divisible by 3".into() });
    }
    let third: Vec<i64> = c.iter().map(|x| x / 3).collect();
    p.class(&third)
}

/// `lines` must be eight pairwise disjoint lines on `X₈`.
pub fn decompose_parity_d8(p: &PicardLattice, lines: &[DivisorClass]) -> Result<ParityReport> {
    if p.n() != 8 {
        return Err(Error::Unsupported { n: p.n(), lo: 8, hi: 8 });
    }
    if lines.len() != 8 {
        return Err(Error::InvalidClass { class: format!("{} classes", lines.len()), reason: "need eight lines".into() });
    }
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            SubalgebraSpec::A1Pair { first: *a, second: *b }.validate(p)?;
        }
    }
    let h = degree_class(p, lines)?;
    SubalgebraSpec::Parity { reference: h }.validate(p)?;
    let k = p.canonical_class();
    let z = p.zero();
    let roots = enumerate_roots(p);
    let (even, odd): (Vec<_>, Vec<_>) = roots.iter().copied().partition(|d| d.dot(&h) % 2 == 0);
    let s_plus: Vec<DivisorClass> = enumerate_lines(p).into_iter().filter(|l| l.dot(&h) % 2 == 0).collect();
    let d_type = subalgebra_type(&even, 8)?;

    let line_set: std::collections::HashSet<_> = s_plus.iter().copied().collect();
    let spinor_action_closed =
        even.iter().all(|d| s_plus.iter().all(|l| line_set.contains(&(*d + *l)) == (d.dot(l) == 1)));

    let mut ld = even.clone();
    ld.extend(zeros(p, 8));
    let mut l8: Vec<DivisorClass> = adjoint_weights(p).into_iter().map(|w| w - k).collect();
    l8.sort();
    let decompositions = vec![
        Decomposition::new(
            "parity/roots",
            "roots = {D·H even} + {D·H odd}",
            "roots",
            roots.clone(),
            vec![Component::new("D·H even", even.clone(), z), Component::new("D·H odd", odd.clone(), z)],
        ),
        Decomposition::new(
            "parity/adjoint",
            "LE_8 = LD_8 + S⁺⊗O(K)",
            "LE8",
            adjoint_weights(p),
            vec![Component::new("LD_8", ld.clone(), z), Component::new("S⁺⊗O(K)", s_plus.clone(), k)],
        ),
        Decomposition::new(
            "parity/lines",
            "L_8 = LD_8⊗O(-K) + S⁺",
            "L8",
            l8,
            vec![Component::new("LD_8⊗O(-K)", ld, -k), Component::new("S⁺", s_plus.clone(), z)],
        ),
    ];

    Ok(ParityReport {
        degree_class: h,
        even_roots: even.len(),
        odd_roots: odd.len(),
        s_plus: s_plus.len(),
        d_type,
        d_type_expected: expected_d_type(8),
        spinor_action_closed,
        decompositions,
        w8_as_written: w8_check(p, lines, -k - h, -k - h, k + h, "Lᵢ and -Lᵢ-K-H, form into O(-K-H), LD_8 = Λ²W_8⊗O(K+H)"),
        w8_corrected: w8_check(p, lines, k + h, k + h, -k - h, "Lᵢ and K+H-Lᵢ, form into O(K+H), LD_8 = Λ²W_8⊗O(-K-H)"),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizerReport {
    pub a1_root: DivisorClass,
    pub roots: Vec<DivisorClass>,
    pub cartan_type: CartanType,
    pub is_e7: bool,
    /// Every centralizer root pairs to zero with `±(L₁ - L₂)`.
    pub orthogonal: bool,
}

/// Roots of `E₈` orthogonal to `L₁ - L₂` for disjoint lines `L₁, L₂`.
pub fn e7_centralizer(p: &PicardLattice, l1: &DivisorClass, l2: &DivisorClass) -> Result<CentralizerReport> {
    if p.n() != 8 {
        return Err(Error::Unsupported { n: p.n(), lo: 8, hi: 8 });
    }
    SubalgebraSpec::A1Pair { first: *l1, second: *l2 }.validate(p)?;
    let a = *l1 - *l2;
    let roots: Vec<DivisorClass> = enumerate_roots(p).into_iter().filter(|d| d.dot(&a) == 0 && *d != a && *d != -a).collect();
    let cartan_type = subalgebra_type(&roots, 7)?;
    let is_e7 = roots.len() == 126 && cartan_type == CartanType::new(vec![SimpleType::E(7)], 0);
    let orthogonal = roots.iter().all(|d| d.dot(&a) == 0 && d.dot(&-a) == 0);
    Ok(CentralizerReport { a1_root: a, roots, cartan_type, is_e7, orthogonal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard(p: &PicardLattice) -> Vec<DivisorClass> {
        (1..=8).map(|i| p.exceptional(i)).collect()
    }

    #[test]
    fn parity_split() {
        let p = PicardLattice::new(8).unwrap();
        let rep = decompose_parity_d8(&p, &standard(&p)).unwrap();
        assert_eq!(rep.degree_class, p.hyperplane());
        assert!(rep.verified(), "{:?}", rep.decompositions.iter().map(|d| &d.counterexample).collect::<Vec<_>>());
        assert_eq!(rep.decompositions[1].block_sizes(), vec![120, 128]);
        assert!(rep.w8_as_written.is_matching);
        assert!(!rep.w8_as_written.wedge.verified);
    }

    #[test]
    fn other_blowdown() {
        let p = PicardLattice::new(8).unwrap();
        let h = p.hyperplane();
        let e = |i| p.exceptional(i);
        let mut lines = vec![h - e(1) - e(2), h - e(1) - e(3), h - e(2) - e(3)];
        lines.extend((4..=8).map(e));
        let rep = decompose_parity_d8(&p, &lines).unwrap();
        assert_eq!(rep.degree_class, 2 * h - e(1) - e(2) - e(3));
        assert!(rep.verified());
    }

    #[test]
    fn rejects_meeting_lines() {
        let p = PicardLattice::new(8).unwrap();
        let mut lines = standard(&p);
        lines[7] = p.hyperplane() - p.exceptional(1) - p.exceptional(2);
        assert!(decompose_parity_d8(&p, &lines).is_err());
    }

    #[test]
    fn centralizer() {
        let p = PicardLattice::new(8).unwrap();
        let rep = e7_centralizer(&p, &p.exceptional(1), &p.exceptional(2)).unwrap();
        assert!(rep.is_e7 && rep.orthogonal);
        assert!(e7_centralizer(&p, &p.exceptional(1), &(p.hyperplane() - p.exceptional(1) - p.exceptional(2))).is_err());
    }
}
