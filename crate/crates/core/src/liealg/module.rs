//! Weight modules: minuscule modules acted on through the sign cocycle, and
//! twisted copies of the adjoint module.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::algebra::{Element, LieAlgebra};
use crate::census::{enumerate_lines, enumerate_rulings};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionKind {
    /// `x_D v_w = ε(D, w - w₀) v_{w+D}` whenever `w + D` is a weight.
    Minuscule,
    /// `LE_n ⊗ O(twist)`: weights are roots shifted by the twist, plus a
    /// zero-weight block of rank `n` sitting at the twist itself.
    AdjointTwist,
}

#[derive(Clone, Debug)]
pub struct WeightModule {
    name: String,
    lattice: PicardLattice,
    kind: ActionKind,
    weights: Vec<DivisorClass>,
    cartan_mult: usize,
    twist: DivisorClass,
    index: HashMap<DivisorClass, usize>,
    base: DivisorClass,
    masks: Vec<u32>,
}

/// A vector of a [`WeightModule`]: weight coordinates and, for adjoint-type
/// modules, a zero-block component in `K⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleVector {
    pub weights: BTreeMap<usize, i64>,
    pub zero: DivisorClass,
}

impl ModuleVector {
    pub fn zero(n: usize) -> Self {
        Self { weights: BTreeMap::new(), zero: DivisorClass::zero(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty() && self.zero.is_zero()
    }

    pub fn add(&mut self, i: usize, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.weights.entry(i).or_insert(0);
        *e += c;
        if *e == 0 {
            self.weights.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleVector, c: i64) {
        self.zero += c * other.zero;
        for (&i, &v) in &other.weights {
            self.add(i, c * v);
        }
    }

    /// Coefficient of the `i`-th weight vector.
    pub fn coeff(&self, i: usize) -> i64 {
        self.weights.get(&i).copied().unwrap_or(0)
    }
}

impl WeightModule {
    /// A module whose weights all have the same canonical degree, acted on
    /// by the minuscule rule relative to the first weight.
    pub fn minuscule(name: &str, lattice: &PicardLattice, weights: &[DivisorClass], alg: &LieAlgebra) -> Result<Self> {
        let mut weights = weights.to_vec();
        weights.sort();
        weights.dedup();
        let k = lattice.canonical_class();
        let base = *weights
            .first()
            .ok_or_else(|| Error::InvalidClass { class: name.into(), reason: "empty weight set".into() })?;
        let mut masks = Vec::with_capacity(weights.len());
        for w in &weights {
            lattice.check(w)?;
            if w.dot(&k) != base.dot(&k) {
                return Err(Error::InvalidClass { class: w.to_json(), reason: format!("canonical degree differs within {name}") });
            }
            masks.push(alg.cocycle().parity_mask(&(*w - base))?);
        }
        let index = weights.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        Ok(Self {
            name: name.into(),
            lattice: *lattice,
            kind: ActionKind::Minuscule,
            weights,
            cartan_mult: 0,
            twist: lattice.zero(),
            index,
            base,
            masks,
        })
    }

    /// `LE_n ⊗ O(twist)`; weight order follows the root order.
    pub fn adjoint_twist(name: &str, alg: &LieAlgebra, twist: &DivisorClass) -> Result<Self> {
        let lattice = *alg.lattice();
        lattice.check(twist)?;
        let weights: Vec<DivisorClass> = alg.roots().iter().map(|r| *r + *twist).collect();
        let index = weights.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        Ok(Self {
            name: name.into(),
            lattice,
            kind: ActionKind::AdjointTwist,
            cartan_mult: lattice.n(),
            twist: *twist,
            base: *twist,
            masks: Vec::new(),
            index,
            weights,
        })
    }

    pub fn adjoint(alg: &LieAlgebra) -> Result<Self> {
        Self::adjoint_twist(&format!("LE{}", alg.n()), alg, &alg.lattice().zero())
    }

    /// `L_n`: lines, minuscule for `n ≤ 7`; for `n = 8`, `LE₈ ⊗ O(-K)`.
    pub fn lines(alg: &LieAlgebra) -> Result<Self> {
        let p = alg.lattice();
        let name = format!("L{}", p.n());
        match p.n() {
            1..=7 => Self::minuscule(&name, p, &enumerate_lines(p), alg),
            8 => Self::adjoint_twist(&name, alg, &-p.canonical_class()),
            n => Err(Error::Unsupported { n, lo: 1, hi: 8 }),
        }
    }

    /// `R_n`: rulings, minuscule for `n ≤ 6`; for `n = 7`, `LE₇ ⊗ O(-K)`.
    pub fn rulings(alg: &LieAlgebra) -> Result<Self> {
        let p = alg.lattice();
        let name = format!("R{}", p.n());
        match p.n() {
            1..=6 => Self::minuscule(&name, p, &enumerate_rulings(p), alg),
            7 => Self::adjoint_twist(&name, alg, &-p.canonical_class()),
            n => Err(Error::Unsupported { n, lo: 1, hi: 7 }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    /// Distinct weights of the non-zero-block part, in basis order.
    pub fn weights(&self) -> &[DivisorClass] {
        &self.weights
    }

    pub fn cartan_mult(&self) -> usize {
        self.cartan_mult
    }

    /// Weight carried by the zero block.
    pub fn twist(&self) -> DivisorClass {
        self.twist
    }

    pub fn dim(&self) -> usize {
        self.weights.len() + self.cartan_mult
    }

    /// All weights with multiplicity, sorted.
    pub fn full_weights(&self) -> Vec<DivisorClass> {
        let mut v = self.weights.clone();
        v.extend(std::iter::repeat(self.twist).take(self.cartan_mult));
        v.sort();
        v
    }

    pub fn index_of(&self, w: &DivisorClass) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn basis_vector(&self, i: usize) -> ModuleVector {
        let mut v = ModuleVector::zero(self.lattice.n());
        v.add(i, 1);
        v
    }

    /// Basis: weight vectors, then the zero block along the `K⊥` basis.
    pub fn basis(&self) -> Vec<ModuleVector> {
        let mut v: Vec<_> = (0..self.weights.len()).map(|i| self.basis_vector(i)).collect();
        if self.cartan_mult > 0 {
            for h in self.lattice.kperp_basis() {
                let mut z = ModuleVector::zero(self.lattice.n());
                z.zero = h;
                v.push(z);
            }
        }
        v
    }

    fn check(&self, alg: &LieAlgebra, v: &ModuleVector) -> Result<()> {
        if alg.n() != self.lattice.n()
            || v.zero.rank() != self.lattice.n()
            || v.weights.keys().next_back().is_some_and(|&i| i >= self.weights.len())
            || (self.cartan_mult == 0 && !v.zero.is_zero())
        {
            return Err(Error::Mismatch);
        }
        Ok(())
    }

    /// Sign attached to `x_D` acting on the `i`-th weight vector.
    pub(crate) fn sign(&self, alg: &LieAlgebra, root: usize, i: usize) -> i64 {
        alg.cocycle().eps_masks(alg.root_mask(root), self.masks[i])
    }

    /// Reference weight `w₀` of the minuscule rule.
    pub fn base(&self) -> DivisorClass {
        self.base
    }

    /// For adjoint-type modules, the algebra element with the same coordinates.
    pub fn to_element(&self, alg: &LieAlgebra, v: &ModuleVector) -> Result<Element> {
        if self.kind != ActionKind::AdjointTwist {
            return Err(Error::Mismatch);
        }
        self.check(alg, v)?;
        Ok(self.element_of(alg, v))
    }

    /// Inverse of [`Self::to_element`].
    pub fn from_element(&self, alg: &LieAlgebra, e: &Element) -> Result<ModuleVector> {
        if self.kind != ActionKind::AdjointTwist {
            return Err(Error::Mismatch);
        }
        alg.check(e)?;
        Ok(self.vector_of(alg, e))
    }

    fn element_of(&self, alg: &LieAlgebra, v: &ModuleVector) -> Element {
        let mut e = Element { cartan: v.zero, roots: BTreeMap::new() };
        for (&i, &c) in &v.weights {
            e.add_root(alg.root_index(&(self.weights[i] - self.twist)).expect("twisted root"), c);
        }
        e
    }

    fn vector_of(&self, alg: &LieAlgebra, e: &Element) -> ModuleVector {
        let mut v = ModuleVector::zero(self.lattice.n());
        v.zero = e.cartan;
        for (&j, &c) in &e.roots {
            v.add(self.index[&(alg.roots()[j] + self.twist)], c);
        }
        v
    }

    /// `x · v`.
    pub fn act(&self, alg: &LieAlgebra, x: &Element, v: &ModuleVector) -> Result<ModuleVector> {
        alg.check(x)?;
        self.check(alg, v)?;
        Ok(self.act_unchecked(alg, x, v))
    }

    pub(crate) fn act_unchecked(&self, alg: &LieAlgebra, x: &Element, v: &ModuleVector) -> ModuleVector {
        match self.kind {
            ActionKind::AdjointTwist => {
                let e = self.element_of(alg, v);
                self.vector_of(alg, &alg.bracket_unchecked(x, &e))
            }
            ActionKind::Minuscule => {
                let mut out = ModuleVector::zero(self.lattice.n());
                for (&i, &c) in &v.weights {
                    out.add(i, x.cartan.dot(&self.weights[i]) * c);
                }
                for (&j, &a) in &x.roots {
                    let d = alg.roots()[j];
                    for (&i, &c) in &v.weights {
                        if let Some(&t) = self.index.get(&(self.weights[i] + d)) {
                            out.add(t, a * c * self.sign(alg, j, i));
                        }
                    }
                }
                out
            }
        }
    }

    /// `[x,y]·v - x·(y·v) + y·(x·v)`; zero for a module.
    pub fn module_defect(&self, alg: &LieAlgebra, x: &Element, y: &Element, v: &ModuleVector) -> Result<ModuleVector> {
        alg.check(x)?;
        alg.check(y)?;
        self.check(alg, v)?;
        let mut out = self.act_unchecked(alg, &alg.bracket_unchecked(x, y), v);
        out.add_scaled(&self.act_unchecked(alg, x, &self.act_unchecked(alg, y, v)), -1);
        out.add_scaled(&self.act_unchecked(alg, y, &self.act_unchecked(alg, x, v)), 1);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> LieAlgebra {
        LieAlgebra::new(&PicardLattice::new(n).unwrap()).unwrap()
    }

    fn assert_module(a: &LieAlgebra, m: &WeightModule, step: usize) {
        let basis = a.basis();
        let vs = m.basis();
        for x in basis.iter().step_by(step) {
            for y in &basis {
                for v in &vs {
                    assert!(m.module_defect(a, x, y, v).unwrap().is_zero(), "{} fails", m.name());
                }
            }
        }
    }

    #[test]
    fn lines_and_rulings_are_modules() {
        for n in 2..=5 {
            let a = alg(n);
            assert_module(&a, &WeightModule::lines(&a).unwrap(), 1);
            assert_module(&a, &WeightModule::rulings(&a).unwrap(), 1);
        }
    }

    #[test]
    fn cartan_acts_diagonally() {
        let a = alg(6);
        let m = WeightModule::lines(&a).unwrap();
        let h = a.cartan(&a.roots()[3]).unwrap();
        for (i, w) in m.weights().iter().enumerate() {
            let r = m.act(&a, &h, &m.basis_vector(i)).unwrap();
            let mut e = ModuleVector::zero(6);
            e.add(i, w.dot(&a.roots()[3]));
            assert_eq!(r, e);
        }
    }

    #[test]
    fn twisted_adjoints_match_census() {
        let a7 = alg(7);
        let r7 = WeightModule::rulings(&a7).unwrap();
        assert_eq!(r7.weights().len(), 126);
        assert_eq!(r7.dim(), 133);
        let mut rul = crate::census::enumerate_rulings(a7.lattice());
        rul.sort();
        let mut w = r7.weights().to_vec();
        w.sort();
        assert_eq!(w, rul);
        let a8 = alg(8);
        let l8 = WeightModule::lines(&a8).unwrap();
        assert_eq!(l8.dim(), 248);
        let mut w = l8.weights().to_vec();
        w.sort();
        assert_eq!(w, enumerate_lines(a8.lattice()));
    }

    #[test]
    fn root_action_into_zero_block_on_r7() {
        let a = alg(7);
        let m = WeightModule::rulings(&a).unwrap();
        let k = a.lattice().canonical_class();
        for (j, d) in a.roots().iter().enumerate().step_by(9) {
            let x = a.basis_root(j);
            for (i, r) in m.weights().iter().enumerate() {
                let out = m.act(&a, &x, &m.basis_vector(i)).unwrap();
                assert_eq!(!out.zero.is_zero(), *d + *r == -k);
            }
        }
    }

    #[test]
    fn mismatched_vector_rejected() {
        let a = alg(5);
        let m = WeightModule::lines(&a).unwrap();
        let mut v = ModuleVector::zero(5);
        v.add(99, 1);
        assert!(m.act(&a, &a.basis_root(0), &v).is_err());
    }
}
