//! A section of a ruling reduces `D_{n-1}` further to `A_{n-2}`.

use serde::Serialize;

use super::ruling::RulingSets;
use super::{exterior_power, expected_a_type, negated, subalgebra_type, zeros, Component, Decomposition, SubalgebraSpec};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::CartanType;

/// Which spinor set the section comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionKind {
    /// A line section `S ∈ S⁺`.
    Line,
    /// A ruling section `T ∈ S⁻`.
    Ruling,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    pub n: usize,
    pub ruling: DivisorClass,
    pub section: DivisorClass,
    pub kind: SectionKind,
    /// Fiber components meeting the section once.
    pub lambda: Vec<DivisorClass>,
    pub det_expected: DivisorClass,
    pub det_actual: DivisorClass,
    pub a_type: CartanType,
    pub a_type_expected: CartanType,
    pub decompositions: Vec<Decomposition>,
}

impl SectionReport {
    pub fn det_ok(&self) -> bool {
        self.det_expected == self.det_actual
    }

    pub fn verified(&self) -> bool {
        self.lambda.len() == self.n - 1
            && self.det_ok()
            && self.a_type == self.a_type_expected
            && self.decompositions.iter().all(|d| d.verified)
    }
}

/// `⊕_l Λ^{odd/even}` summands with their twists.
fn spinor_sum(lambda: &[DivisorClass], rank: usize, terms: &[(usize, DivisorClass)], label: &str) -> Vec<Component> {
    terms
        .iter()
        .map(|&(k, twist)| Component::new(format!("Λ^{k}⊗{label}"), exterior_power(lambda, k, rank), twist))
        .collect()
}

pub fn decompose_section(p: &PicardLattice, r: &DivisorClass, x: &DivisorClass, kind: SectionKind) -> Result<SectionReport> {
    let n = p.n();
    if !(3..=8).contains(&n) {
        return Err(Error::Unsupported { n, lo: 3, hi: 8 });
    }
    match kind {
        SectionKind::Line => SubalgebraSpec::RulingLineSection { ruling: *r, section: *x },
        SectionKind::Ruling => SubalgebraSpec::RulingRulingSection { ruling: *r, section: *x },
    }
    .validate(p)?;
    let sets = RulingSets::new(p, r)?;
    let (k, z) = (p.canonical_class(), p.zero());
    let ni = n as i64;
    let lambda: Vec<DivisorClass> = sets.w.iter().copied().filter(|c| c.dot(x) == 1).collect();
    let det_actual = lambda.iter().fold(z, |a, c| a + *c);
    let a_roots: Vec<DivisorClass> = sets.d_roots.iter().copied().filter(|d| d.dot(x) == 0).collect();
    let a_type = subalgebra_type(&a_roots, n - 2)?;
    let mut la = a_roots.clone();
    la.extend(zeros(p, n - 2));

    let (tag, det_expected, w_shift) = match kind {
        SectionKind::Line => ("S", -k - 2 * *x + (ni - 4) * *r, k + 2 * *x + (5 - ni) * *r),
        SectionKind::Ruling => ("T", -k - 2 * *x + (ni - 5) * *r, k + 2 * *x + (6 - ni) * *r),
    };
    let id = |what: &str| format!("section-{}/{what}/n{n}", tag.to_lowercase());
    let lam2 = exterior_power(&lambda, 2, n);

    let mut decompositions = vec![
        Decomposition::new(
            id("d"),
            "LD_{n-1} = LA_{n-2} + O + Λ²⊗O(-R) + (Λ²)*⊗O(R)",
            format!("LD{}", n - 1),
            sets.d_weights(p),
            vec![
                Component::new("LA_{n-2}", la, z),
                Component::new("O", vec![z], z),
                Component::new("Λ²⊗O(-R)", lam2.clone(), -*r),
                Component::new("(Λ²)*⊗O(R)", negated(&lam2), *r),
            ],
        ),
        Decomposition::new(
            id("w-dual"),
            "W_{n-1} = Λ + Λ*⊗O(R)",
            format!("W{}", n - 1),
            sets.w.clone(),
            vec![Component::new("Λ", lambda.clone(), z), Component::new("Λ*⊗O(R)", negated(&lambda), *r)],
        ),
        Decomposition::new(
            id("w-top"),
            match kind {
                SectionKind::Line => "W_{n-1} = Λ + Λ^{n-2}⊗O(K+2S+(5-n)R)",
                SectionKind::Ruling => "W_{n-1} = Λ + Λ^{n-2}⊗O(K+2T+(6-n)R)",
            },
            format!("W{}", n - 1),
            sets.w.clone(),
            vec![Component::new("Λ", lambda.clone(), z), Component::new("Λ^{n-2}", exterior_power(&lambda, n - 2, n), w_shift)],
        ),
    ];

    let lsteps = |lo: usize, hi: usize| lo as i64..=hi as i64;
    let (plus_terms, minus_terms): (Vec<(usize, DivisorClass)>, Vec<(usize, DivisorClass)>) = match kind {
        SectionKind::Line => (
            lsteps(0, (n - 1) / 2).map(|l| (2 * l as usize, *x - l * *r)).collect(),
            lsteps(1, n / 2).map(|l| (2 * l as usize - 1, *x - l * *r)).collect(),
        ),
        SectionKind::Ruling => (
            lsteps(1, n / 2).map(|l| (2 * l as usize - 1, *x - (l - 1) * *r)).collect(),
            lsteps(0, (n - 1) / 2).map(|l| (2 * l as usize, *x - l * *r)).collect(),
        ),
    };
    let twist_label = |l: &str| format!("O({tag}-{l}R)");
    decompositions.push(Decomposition::new(
        id("s-plus"),
        match kind {
            SectionKind::Line => "S⁺ = ⊕_{l=0}^{[(n-1)/2]} Λ^{2l}⊗O(S-lR)",
            SectionKind::Ruling => "S⁺ = ⊕_{l=1}^{[n/2]} Λ^{2l-1}⊗O(T-(l-1)R)",
        },
        "S+",
        sets.s_plus.clone(),
        spinor_sum(&lambda, n, &plus_terms, &twist_label("l")),
    ));
    decompositions.push(Decomposition::new(
        id("s-minus"),
        match kind {
            SectionKind::Line => "S⁻ = ⊕_{l=1}^{[n/2]} Λ^{2l-1}⊗O(S-lR)",
            SectionKind::Ruling => "S⁻ = ⊕_{l=0}^{[(n-1)/2]} Λ^{2l}⊗O(T-lR)",
        },
        "S-",
        sets.s_minus.clone(),
        spinor_sum(&lambda, n, &minus_terms, &twist_label("l")),
    ));

    Ok(SectionReport {
        n,
        ruling: *r,
        section: *x,
        kind,
        lambda,
        det_expected,
        det_actual,
        a_type,
        a_type_expected: expected_a_type(n - 2),
        decompositions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_rulings;

    #[test]
    fn all_sections_up_to_six() {
        for n in 3..=6 {
            let p = PicardLattice::new(n).unwrap();
            for r in enumerate_rulings(&p) {
                let sets = RulingSets::new(&p, &r).unwrap();
                for (xs, kind) in [(&sets.s_plus, SectionKind::Line), (&sets.s_minus, SectionKind::Ruling)] {
                    for x in xs {
                        let rep = decompose_section(&p, &r, x, kind).unwrap();
                        for d in &rep.decompositions {
                            assert!(d.verified, "n={n} R={r} X={x} {}: {:?}", d.id, d.counterexample);
                        }
                        assert!(rep.verified(), "n={n} R={r} X={x} {kind:?}: det {} vs {}", rep.det_actual, rep.det_expected);
                    }
                }
            }
        }
    }

    #[test]
    fn x4_example() {
        let p = PicardLattice::new(4).unwrap();
        let r = p.hyperplane() - p.exceptional(1);
        let s = p.exceptional(1);
        let rep = decompose_section(&p, &r, &s, SectionKind::Line).unwrap();
        let mut expect: Vec<_> = (2..=4).map(|i| p.hyperplane() - p.exceptional(1) - p.exceptional(i)).collect();
        expect.sort();
        assert_eq!(rep.lambda, expect);
        assert!(rep.verified());
    }

    #[test]
    fn e8_representative() {
        let p = PicardLattice::new(8).unwrap();
        let r = p.hyperplane() - p.exceptional(1);
        let sets = RulingSets::new(&p, &r).unwrap();
        let rep = decompose_section(&p, &r, &sets.s_plus[0], SectionKind::Line).unwrap();
        assert!(rep.verified());
        let rep = decompose_section(&p, &r, &sets.s_minus[0], SectionKind::Ruling).unwrap();
        assert!(rep.verified());
    }
}
