//! Coincidences at `n = 2, 3, 4`.

use serde::Serialize;

use super::{adjoint_weights, exterior_power, negated, tensor, zeros, Component, Decomposition};
use crate::census::{enumerate_lines, enumerate_roots, enumerate_rulings};
use crate::error::Result;
use crate::picard::PicardLattice;

#[derive(Clone, Debug, Serialize)]
pub struct SmallNReport {
    pub decompositions: Vec<Decomposition>,
}

impl SmallNReport {
    pub fn verified(&self) -> bool {
        self.decompositions.iter().all(|d| d.verified)
    }

    pub fn get(&self, id: &str) -> Option<&Decomposition> {
        self.decompositions.iter().find(|d| d.id == id)
    }
}

pub fn small_n_checks() -> Result<SmallNReport> {
    let mut out = Vec::new();

    // X₂: the line meeting both others splits off.
    let p = PicardLattice::new(2)?;
    let z = p.zero();
    let lines = enumerate_lines(&p);
    let l3 = *lines.iter().find(|l| lines.iter().filter(|m| m.dot(l) == 1).count() == 2).expect("X2 has a line meeting the other two");
    let others: Vec<_> = lines.iter().copied().filter(|l| *l != l3).collect();
    out.push(Decomposition::new(
        "small/x2-lines",
        "L_2 = R_2⊗O(-l₃) + O(l₃)",
        "L2",
        lines.clone(),
        vec![Component::new("R_2⊗O(-l₃)", enumerate_rulings(&p), -l3), Component::new("O(l₃)", vec![l3], z)],
    ));
    let d = others[0] - others[1];
    out.push(Decomposition::new(
        "small/x2-adjoint",
        "LE_2 = LA_1 + O",
        "LE2",
        adjoint_weights(&p),
        vec![Component::new("LA_1", vec![z, d, -d], z), Component::new("O", vec![z], z)],
    ));

    // X₃: sl(3) × sl(2) and the two tensor factorizations.
    let p = PicardLattice::new(3)?;
    let z = p.zero();
    let e: Vec<_> = (1..=3).map(|i| p.exceptional(i)).collect();
    let h = p.hyperplane();
    let c = h - e[0] - e[1] - e[2];
    let w3 = e.clone();
    let w3p: Vec<_> = (0..3).map(|i| h - e[(i + 1) % 3] - e[(i + 2) % 3]).collect();
    let w2 = vec![z, c];
    out.push(Decomposition::new("small/x3-w3", "L_3 = W_3⊗W_2", "L3", enumerate_lines(&p), vec![Component::new("W_3⊗W_2", tensor(&w3, &w2), z)]));
    out.push(Decomposition::new(
        "small/x3-w3-prime",
        "L_3 = W'_3⊗W*_2",
        "L3",
        enumerate_lines(&p),
        vec![Component::new("W'_3⊗W*_2", tensor(&w3p, &negated(&w2)), z)],
    ));
    let mut a3 = zeros(&p, 2);
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                a3.push(e[i] - e[j]);
            }
        }
    }
    out.push(Decomposition::new(
        "small/x3-adjoint",
        "LE_3 = A_3 + A_2",
        "LE3",
        adjoint_weights(&p),
        vec![Component::new("sl(3)", a3, z), Component::new("sl(2)", vec![z, c, -c], z)],
    ));

    // X₄: LE₄ = End₀(R₄) and Λ³R₄ = L₄⊗O(-K).
    let p = PicardLattice::new(4)?;
    let z = p.zero();
    let k = p.canonical_class();
    let rulings = enumerate_rulings(&p);
    let diffs: Vec<_> = rulings.iter().flat_map(|a| rulings.iter().filter(move |b| *b != a).map(move |b| *a - *b)).collect();
    out.push(Decomposition::new(
        "small/x4-roots",
        "roots = {Rᵢ - Rⱼ : i ≠ j}",
        "roots",
        enumerate_roots(&p),
        vec![Component::new("Rᵢ - Rⱼ", diffs.clone(), z)],
    ));
    out.push(Decomposition::new(
        "small/x4-end0",
        "LE_4 = End_0(R_4)",
        "LE4",
        adjoint_weights(&p),
        vec![Component::new("O^4", zeros(&p, 4), z), Component::new("Rᵢ - Rⱼ", diffs, z)],
    ));
    out.push(Decomposition::new(
        "small/x4-wedge3",
        "Λ³R_4 = L_4⊗O(-K)",
        "L4⊗O(-K)",
        enumerate_lines(&p).into_iter().map(|l| l - k).collect(),
        vec![Component::new("Λ³R_4", exterior_power(&rulings, 3, 4), z)],
    ));

    Ok(SmallNReport { decompositions: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_small_identities() {
        let rep = small_n_checks().unwrap();
        for d in &rep.decompositions {
            assert!(d.verified, "{}: {:?}", d.id, d.counterexample);
        }
        assert_eq!(rep.get("small/x2-lines").unwrap().block_sizes(), vec![2, 1]);
        assert_eq!(rep.get("small/x3-w3").unwrap().lhs_size(), 6);
        assert_eq!(rep.get("small/x4-end0").unwrap().block_sizes(), vec![4, 20]);
    }
}
