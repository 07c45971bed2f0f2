//! `LE₈ = LD₈ ⊕ S⁺ ⊗ O(K)`, with `LD₈` spanned by the Cartan part and the
//! roots of even degree, and `S⁺` the lines of even degree.

use std::collections::HashSet;

use super::algebra::{Element, LieAlgebra};
use super::forms::{InvariantForm, MomentMap};
use super::module::{ModuleVector, WeightModule};
use crate::census::enumerate_lines;
use crate::error::{Error, Result};
use crate::picard::DivisorClass;

/// An element `a + u` with `a ∈ LD₈` and `u ∈ S⁺ ⊗ O(K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitElement {
    pub d8: Element,
    pub spin: ModuleVector,
}

impl SplitElement {
    pub fn is_zero(&self) -> bool {
        self.d8.is_zero() && self.spin.is_zero()
    }

    pub fn add_scaled(&mut self, other: &SplitElement, c: i64) {
        self.d8.add_scaled(&other.d8, c);
        self.spin.add_scaled(&other.spin, c);
    }
}

/// The bracket `[a+u, b+v] = [a,b] + γ(u,v) + a·v - b·u`.
pub struct E8ViaD8<'a> {
    alg: &'a LieAlgebra,
    even: Vec<usize>,
    spin: WeightModule,
    pairing: InvariantForm,
}

impl<'a> E8ViaD8<'a> {
    pub fn new(alg: &'a LieAlgebra) -> Result<Self> {
        if alg.n() != 8 {
            return Err(Error::Unsupported { n: alg.n(), lo: 8, hi: 8 });
        }
        let p = alg.lattice();
        let h = p.hyperplane();
        let even: Vec<usize> = (0..alg.roots().len()).filter(|&i| alg.roots()[i].dot(&h) % 2 == 0).collect();
        let spin_weights: Vec<DivisorClass> = enumerate_lines(p).into_iter().filter(|l| l.dot(&h) % 2 == 0).collect();
        let spin = WeightModule::minuscule("S+", p, &spin_weights, alg)?;
        let target = -2 * p.canonical_class();
        let pairing = InvariantForm::by_propagation("S+ pairing", alg, &spin, 2, &target, Some(&even))?;
        Ok(Self { alg, even, spin, pairing })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.alg
    }

    /// Root indices of `LD₈`.
    pub fn even_roots(&self) -> &[usize] {
        &self.even
    }

    pub fn spin_module(&self) -> &WeightModule {
        &self.spin
    }

    /// The invariant scalar pairing on `S⁺`.
    pub fn pairing(&self) -> &InvariantForm {
        &self.pairing
    }

    pub fn dim(&self) -> usize {
        8 + self.even.len() + self.spin.dim()
    }

    fn gamma(&self) -> MomentMap<'_> {
        MomentMap::restricted(self.alg, &self.spin, &self.pairing, Some(&self.even)).expect("bilinear minuscule pairing")
    }

    /// Scalar pairing and `LD₈`-valued product of two spinors.
    pub fn spin_products(&self, u: &ModuleVector, v: &ModuleVector) -> (i64, Element) {
        (self.pairing.eval(&[u, v]), self.gamma().apply(u, v))
    }

    fn check(&self, x: &SplitElement) -> Result<()> {
        self.alg.check(&x.d8)?;
        if x.d8.roots.keys().any(|i| self.even.binary_search(i).is_err())
            || !x.spin.zero.is_zero()
            || x.spin.weights.keys().next_back().is_some_and(|&i| i >= self.spin.weights().len())
        {
            return Err(Error::Mismatch);
        }
        Ok(())
    }

    pub fn bracket(&self, x: &SplitElement, y: &SplitElement) -> Result<SplitElement> {
        self.check(x)?;
        self.check(y)?;
        let mut d8 = self.alg.bracket_unchecked(&x.d8, &y.d8);
        d8.add_scaled(&self.gamma().apply(&x.spin, &y.spin), 1);
        let mut spin = self.spin.act_unchecked(self.alg, &x.d8, &y.spin);
        spin.add_scaled(&self.spin.act_unchecked(self.alg, &y.d8, &x.spin), -1);
        Ok(SplitElement { d8, spin })
    }

    pub fn jacobiator(&self, x: &SplitElement, y: &SplitElement, z: &SplitElement) -> Result<SplitElement> {
        let mut out = self.bracket(&self.bracket(x, y)?, z)?;
        out.add_scaled(&self.bracket(&self.bracket(y, z)?, x)?, 1);
        out.add_scaled(&self.bracket(&self.bracket(z, x)?, y)?, 1);
        Ok(out)
    }

    /// Cartan basis, even root vectors, then spinor weight vectors.
    pub fn basis(&self) -> Vec<SplitElement> {
        let zero_spin = ModuleVector::zero(8);
        let mut v: Vec<SplitElement> = self
            .alg
            .lattice()
            .kperp_basis()
            .iter()
            .map(|h| SplitElement { d8: self.alg.cartan(h).expect("K⊥"), spin: zero_spin.clone() })
            .collect();
        v.extend(self.even.iter().map(|&i| SplitElement { d8: self.alg.basis_root(i), spin: zero_spin.clone() }));
        v.extend((0..self.spin.weights().len()).map(|i| SplitElement { d8: self.alg.zero(), spin: self.spin.basis_vector(i) }));
        v
    }

    /// Weights of the basis root spaces: even roots and `l + K` for `l ∈ S⁺`.
    pub fn root_set(&self) -> Vec<DivisorClass> {
        let k = self.alg.lattice().canonical_class();
        let mut v: Vec<DivisorClass> = self.even.iter().map(|&i| self.alg.roots()[i]).collect();
        v.extend(self.spin.weights().iter().map(|l| *l + k));
        v.sort();
        v
    }

    /// True when every root-space weight is an eigenvalue of the Cartan action.
    pub fn cartan_acts_by_weights(&self) -> bool {
        let k = self.alg.lattice().canonical_class();
        let basis = self.basis();
        let roots: HashSet<DivisorClass> = self.root_set().into_iter().collect();
        self.alg.lattice().kperp_basis().iter().all(|h| {
            let hx = SplitElement { d8: self.alg.cartan(h).expect("K⊥"), spin: ModuleVector::zero(8) };
            basis[8..].iter().all(|b| {
                let w = match b.d8.roots.keys().next() {
                    Some(&i) => self.alg.roots()[i],
                    None => self.spin.weights()[*b.spin.weights.keys().next().expect("spin basis")] + k,
                };
                let mut expect = b.clone();
                expect.d8 = expect.d8.scaled(h.dot(&w));
                expect.spin = {
                    let mut s = ModuleVector::zero(8);
                    s.add_scaled(&b.spin, h.dot(&w));
                    s
                };
                roots.contains(&w) && self.bracket(&hx, b).map(|r| r == expect).unwrap_or(false)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;
    use crate::picard::PicardLattice;
    use rand::{Rng, SeedableRng};

    fn e8() -> LieAlgebra {
        LieAlgebra::new(&PicardLattice::new(8).unwrap()).unwrap()
    }

    #[test]
    fn sizes_and_roots() {
        let a = e8();
        let s = E8ViaD8::new(&a).unwrap();
        assert_eq!(s.even_roots().len(), 112);
        assert_eq!(s.spin_module().weights().len(), 128);
        assert_eq!(s.dim(), 248);
        assert_eq!(s.root_set(), a.roots().to_vec());
        assert!(s.cartan_acts_by_weights());
    }

    #[test]
    fn spin_pairing() {
        let a = e8();
        let s = E8ViaD8::new(&a).unwrap();
        let g = s.pairing().gram(128);
        assert!(g.iter().all(|r| r.iter().filter(|&&x| x != 0).count() == 1));
        assert_eq!(determinant(&g).abs(), 1);
        assert!(s.pairing().is_symmetric_with_sign(1));
        let k = a.lattice().canonical_class();
        for (t, _) in s.pairing().entries() {
            let (l, m) = (s.spin_module().weights()[t[0]], s.spin_module().weights()[t[1]]);
            assert_eq!(l + m, -2 * k);
            assert_eq!(l.dot(&m), 3);
        }
    }

    #[test]
    fn gamma_is_antisymmetric_and_supported_on_meeting_twice() {
        let a = e8();
        let s = E8ViaD8::new(&a).unwrap();
        let m = s.spin_module();
        let k = a.lattice().canonical_class();
        for x in 0..128 {
            for y in 0..128 {
                let (bx, by) = (m.basis_vector(x), m.basis_vector(y));
                let (_, g) = s.spin_products(&bx, &by);
                let (_, h) = s.spin_products(&by, &bx);
                assert!((&g + &h).is_zero());
                let (l, l2) = (m.weights()[x], m.weights()[y]);
                let root = a.root_index(&(l + l2 + 2 * k));
                assert_eq!(g.roots.keys().copied().collect::<Vec<_>>(), if l.dot(&l2) == 2 { vec![root.unwrap()] } else { vec![] });
            }
        }
    }

    #[test]
    fn sampled_jacobi_by_block() {
        let a = e8();
        let s = E8ViaD8::new(&a).unwrap();
        let basis = s.basis();
        let (d, sp): (Vec<_>, Vec<_>) = (0..basis.len()).partition(|&i| i < 120);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for pattern in 0..4 {
            for _ in 0..2000 {
                let pick = |rng: &mut rand_chacha::ChaCha8Rng, spin: bool| {
                    let pool = if spin { &sp } else { &d };
                    &basis[pool[rng.gen_range(0..pool.len())]]
                };
                let x = pick(&mut rng, pattern >= 3);
                let y = pick(&mut rng, pattern >= 2);
                let z = pick(&mut rng, pattern >= 1);
                assert!(s.jacobiator(x, y, z).unwrap().is_zero(), "pattern {pattern}");
            }
        }
    }
}
