//! The algebra `LE_n = K⊥ ⊕ ⊕_D C·x_D` with integer structure constants.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::cocycle::SignCocycle;
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::RootSystem;

/// An element `h + Σ c_D x_D`; `h` is stored as a class in `K⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub cartan: DivisorClass,
    /// Root index to coefficient, zero coefficients never stored.
    pub roots: BTreeMap<usize, i64>,
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Self { cartan: DivisorClass::zero(n), roots: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.cartan.is_zero() && self.roots.is_empty()
    }

    pub fn add_root(&mut self, i: usize, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.roots.entry(i).or_insert(0);
        *e += c;
        if *e == 0 {
            self.roots.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: i64) {
        self.cartan += c * other.cartan;
        for (&i, &v) in &other.roots {
            self.add_root(i, c * v);
        }
    }

    pub fn scaled(&self, c: i64) -> Element {
        let mut e = Element::zero(self.cartan.rank());
        e.add_scaled(self, c);
        e
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(rhs, 1);
        e
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(rhs, -1);
        e
    }
}

/// `LE_n` for `n ≤ 8`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    system: RootSystem,
    cocycle: SignCocycle,
    index: HashMap<DivisorClass, usize>,
    neg: Vec<usize>,
    masks: Vec<u32>,
    /// For `Dᵢ·Dⱼ = 1`: index of `Dᵢ + Dⱼ` and `ε(Dᵢ, Dⱼ)`.
    table: Vec<Vec<Option<(u16, i8)>>>,
}

impl LieAlgebra {
    pub fn new(lattice: &PicardLattice) -> Result<Self> {
        let system = RootSystem::build(lattice)?;
        let cocycle = SignCocycle::new(lattice)?;
        let roots = system.roots();
        let index: HashMap<_, _> = roots.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let neg = roots.iter().map(|r| index[&-*r]).collect();
        let masks: Vec<u32> = roots.iter().map(|r| cocycle.parity_mask(r)).collect::<Result<_>>()?;
        let table = (0..roots.len())
            .map(|i| {
                (0..roots.len())
                    .map(|j| {
                        if roots[i].dot(&roots[j]) != 1 {
                            return None;
                        }
                        let k = *index.get(&(roots[i] + roots[j]))?;
                        Some((k as u16, cocycle.eps_masks(masks[i], masks[j]) as i8))
                    })
                    .collect()
            })
            .collect();
        Ok(Self { system, cocycle, index, neg, masks, table })
    }

    pub fn n(&self) -> usize {
        self.system.lattice().n()
    }

    pub fn lattice(&self) -> &PicardLattice {
        self.system.lattice()
    }

    pub fn system(&self) -> &RootSystem {
        &self.system
    }

    pub fn cocycle(&self) -> &SignCocycle {
        &self.cocycle
    }

    pub fn roots(&self) -> &[DivisorClass] {
        self.system.roots()
    }

    pub fn root_index(&self, d: &DivisorClass) -> Option<usize> {
        self.index.get(d).copied()
    }

    pub fn negative(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub(crate) fn root_mask(&self, i: usize) -> u32 {
        self.masks[i]
    }

    pub fn dim(&self) -> usize {
        self.n() + self.roots().len()
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.n())
    }

    pub fn root_vector(&self, d: &DivisorClass) -> Result<Element> {
        let i = self
            .root_index(d)
            .ok_or_else(|| Error::InvalidClass { class: d.to_json(), reason: "not a root".into() })?;
        Ok(self.basis_root(i))
    }

    pub fn basis_root(&self, i: usize) -> Element {
        let mut e = self.zero();
        e.add_root(i, 1);
        e
    }

    /// The Cartan element `h`, which must lie in `K⊥`.
    pub fn cartan(&self, h: &DivisorClass) -> Result<Element> {
        self.lattice().check(h)?;
        if h.dot(&self.lattice().canonical_class()) != 0 {
            return Err(Error::InvalidClass { class: h.to_json(), reason: "Cartan elements lie in K⊥".into() });
        }
        Ok(Element { cartan: *h, roots: BTreeMap::new() })
    }

    /// Cartan basis followed by root vectors in root order.
    pub fn basis(&self) -> Vec<Element> {
        let mut v: Vec<Element> = self.lattice().kperp_basis().iter().map(|h| self.cartan(h).expect("basis in K⊥")).collect();
        v.extend((0..self.roots().len()).map(|i| self.basis_root(i)));
        v
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if x.rank() != self.n() || x.roots.keys().next_back().is_some_and(|&i| i >= self.roots().len()) {
            return Err(Error::Mismatch);
        }
        Ok(())
    }

    /// `[x, y]`.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        let roots = self.roots();
        let mut out = self.zero();
        for (&j, &b) in &y.roots {
            out.add_root(j, x.cartan.dot(&roots[j]) * b);
        }
        for (&i, &a) in &x.roots {
            out.add_root(i, -y.cartan.dot(&roots[i]) * a);
            for (&j, &b) in &y.roots {
                if j == self.neg[i] {
                    out.cartan += (a * b) * roots[i];
                } else if let Some((k, s)) = self.table[i][j] {
                    out.add_root(k as usize, a * b * s as i64);
                }
            }
        }
        out
    }

    /// `[[x,y],z] + [[y,z],x] + [[z,x],y]`.
    pub fn jacobiator(&self, x: &Element, y: &Element, z: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        self.check(z)?;
        let mut out = self.bracket_unchecked(&self.bracket_unchecked(x, y), z);
        out.add_scaled(&self.bracket_unchecked(&self.bracket_unchecked(y, z), x), 1);
        out.add_scaled(&self.bracket_unchecked(&self.bracket_unchecked(z, x), y), 1);
        Ok(out)
    }

    /// Invariant form with `κ(h, h') = -h·h'` and `κ(x_D, x_{-D}) = -1`.
    pub fn killing_form(&self, x: &Element, y: &Element) -> Result<i64> {
        self.check(x)?;
        self.check(y)?;
        let mut s = -x.cartan.dot(&y.cartan);
        for (&i, &a) in &x.roots {
            if let Some(&b) = y.roots.get(&self.neg[i]) {
                s -= a * b;
            }
        }
        Ok(s)
    }

    /// Roots carrying a nonzero coefficient in `x`.
    pub fn weights_of(&self, x: &Element) -> Vec<DivisorClass> {
        x.roots.keys().map(|&i| self.roots()[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> LieAlgebra {
        LieAlgebra::new(&PicardLattice::new(n).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        let dims = [0, 1, 4, 11, 24, 45, 78, 133, 248];
        for n in 0..=8 {
            assert_eq!(alg(n).dim(), dims[n], "n={n}");
        }
    }

    #[test]
    fn jacobi_exhaustive_e4() {
        let a = alg(4);
        let b = a.basis();
        for x in &b {
            for y in &b {
                for z in &b {
                    assert!(a.jacobiator(x, y, z).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn antisymmetry_and_sl2_relations() {
        let a = alg(6);
        let b = a.basis();
        for x in b.iter().step_by(5) {
            for y in &b {
                let s = &a.bracket(x, y).unwrap() + &a.bracket(y, x).unwrap();
                assert!(s.is_zero());
            }
        }
        for (i, d) in a.roots().iter().enumerate() {
            let e = a.basis_root(i);
            let f = a.basis_root(a.negative(i));
            let h = a.bracket(&e, &f).unwrap();
            assert_eq!(h, a.cartan(d).unwrap());
            assert_eq!(a.bracket(&h, &e).unwrap(), e.scaled(-2));
        }
    }

    #[test]
    fn killing_form_is_invariant() {
        let a = alg(5);
        let b = a.basis();
        for x in &b {
            for y in &b {
                let xy = a.bracket(x, y).unwrap();
                for z in &b {
                    let lhs = a.killing_form(&xy, z).unwrap();
                    let rhs = a.killing_form(x, &a.bracket(y, z).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn mixed_operands_rejected() {
        let a = alg(5);
        let b = alg(6);
        let x = a.basis_root(0);
        let y = b.basis_root(0);
        assert!(matches!(a.bracket(&x, &y), Err(Error::Mismatch)));
        assert!(a.cartan(&a.lattice().hyperplane()).is_err());
    }
}
