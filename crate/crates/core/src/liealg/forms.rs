//! Invariant multilinear forms on minuscule modules and the equivariant
//! products `c_n : L_n ⊗ L_n → R_n`.
//!
//! Bilinear and trilinear forms are found by propagating the invariance
//! equations from one normalized coefficient. The quartic on `L₇` is the
//! symmetrization of `(u,v,w,z) ↦ q₇(c₇(u,v)·w, z)`.

use std::collections::{BTreeMap, HashMap};

use super::algebra::{Element, LieAlgebra};
use super::module::{ActionKind, ModuleVector, WeightModule};
use crate::error::{Error, Result};
use crate::picard::DivisorClass;

type Key = Vec<u16>;

/// Solves sparse homogeneous integer equations by forward substitution,
/// fixing free unknowns to 1 in key order. Every equation is checked at the end.
fn propagate(equations: &[Vec<(Key, i64)>]) -> Result<HashMap<Key, i64>> {
    let mut all: Vec<Key> = equations.iter().flatten().map(|(k, _)| k.clone()).collect();
    all.sort();
    all.dedup();
    let mut known: HashMap<Key, i64> = HashMap::new();
    let mut by_key: HashMap<&Key, Vec<usize>> = HashMap::new();
    for (e, eq) in equations.iter().enumerate() {
        for (k, _) in eq {
            by_key.entry(k).or_default().push(e);
        }
    }
    for seed in &all {
        if known.contains_key(seed) {
            continue;
        }
        known.insert(seed.clone(), 1);
        let mut stack = vec![seed.clone()];
        while let Some(k) = stack.pop() {
            for &e in by_key.get(&k).map(|v| v.as_slice()).unwrap_or(&[]) {
                let eq = &equations[e];
                let mut unknown = None;
                let mut count = 0;
                let mut sum = 0;
                for (key, c) in eq {
                    match known.get(key) {
                        Some(v) => sum += c * v,
                        None => {
                            count += 1;
                            unknown = Some((key, *c));
                        }
                    }
                }
                if count == 1 {
                    let (key, c) = unknown.expect("one unknown");
                    if sum % c != 0 {
                        return Err(Error::Internal("non-integral propagated coefficient".into()));
                    }
                    known.insert(key.clone(), -sum / c);
                    stack.push(key.clone());
                }
            }
        }
    }
    for eq in equations {
        let s: i64 = eq.iter().map(|(k, c)| c * known[k]).sum();
        if s != 0 {
            return Err(Error::Internal("invariance equations are inconsistent".into()));
        }
    }
    known.retain(|_, v| *v != 0);
    Ok(known)
}

/// Root indices acting on a module: all roots, or a chosen subset.
fn acting(alg: &LieAlgebra, roots: Option<&[usize]>) -> Vec<usize> {
    roots.map(|r| r.to_vec()).unwrap_or_else(|| (0..alg.roots().len()).collect())
}

/// A multilinear form on a minuscule module, stored on ordered weight tuples.
#[derive(Clone, Debug)]
pub struct InvariantForm {
    name: String,
    arity: usize,
    target: DivisorClass,
    values: HashMap<Key, i64>,
}

impl InvariantForm {
    /// The invariant `arity`-linear form whose support has weight sum `target`,
    /// for the action of `roots` (all roots when `None`).
    pub fn by_propagation(
        name: &str,
        alg: &LieAlgebra,
        m: &WeightModule,
        arity: usize,
        target: &DivisorClass,
        roots: Option<&[usize]>,
    ) -> Result<Self> {
        if m.kind() != ActionKind::Minuscule || !(2..=3).contains(&arity) {
            return Err(Error::Mismatch);
        }
        let w = m.weights();
        let mut equations = Vec::new();
        for j in acting(alg, roots) {
            let d = alg.roots()[j];
            let rest = *target - d;
            let mut tuples: Vec<Key> = Vec::new();
            if arity == 2 {
                for a in 0..w.len() {
                    if let Some(b) = m.index_of(&(rest - w[a])) {
                        tuples.push(vec![a as u16, b as u16]);
                    }
                }
            } else {
                for a in 0..w.len() {
                    for b in 0..w.len() {
                        if let Some(c) = m.index_of(&(rest - w[a] - w[b])) {
                            tuples.push(vec![a as u16, b as u16, c as u16]);
                        }
                    }
                }
            }
            for t in tuples {
                let mut eq = Vec::new();
                for s in 0..arity {
                    let i = t[s] as usize;
                    if let Some(to) = m.index_of(&(w[i] + d)) {
                        let mut k = t.clone();
                        k[s] = to as u16;
                        eq.push((k, m.sign(alg, j, i)));
                    }
                }
                if !eq.is_empty() {
                    equations.push(eq);
                }
            }
        }
        let values = propagate(&equations)?;
        Ok(Self { name: name.into(), arity, target: *target, values })
    }

    /// The form on `R₅` pairing `R` with `-K-R`.
    pub fn q5(alg: &LieAlgebra) -> Result<Self> {
        need(alg, 5)?;
        let m = WeightModule::rulings(alg)?;
        Self::by_propagation("q5", alg, &m, 2, &-alg.lattice().canonical_class(), None)
    }

    /// The trilinear form on `L₆` supported on triangles.
    pub fn c6(alg: &LieAlgebra) -> Result<Self> {
        need(alg, 6)?;
        let m = WeightModule::lines(alg)?;
        Self::by_propagation("c6", alg, &m, 3, &-alg.lattice().canonical_class(), None)
    }

    /// The form on `L₇` pairing each line with `-K-l`.
    pub fn q7(alg: &LieAlgebra) -> Result<Self> {
        need(alg, 7)?;
        let m = WeightModule::lines(alg)?;
        Self::by_propagation("q7", alg, &m, 2, &-alg.lattice().canonical_class(), None)
    }

    /// The symmetric quartic on `L₇`, normalized to coprime integer values.
    pub fn f7(alg: &LieAlgebra) -> Result<Self> {
        need(alg, 7)?;
        let m = WeightModule::lines(alg)?;
        let q7 = Self::q7(alg)?;
        let prod = MomentMap::new(alg, &m, &q7)?;
        let w = m.weights();
        let target = -2 * alg.lattice().canonical_class();
        let mut sets: Vec<[u16; 4]> = Vec::new();
        for a in 0..w.len() {
            for b in a..w.len() {
                for c in b..w.len() {
                    if let Some(d) = m.index_of(&(target - w[a] - w[b] - w[c])) {
                        if d >= c {
                            sets.push([a as u16, b as u16, c as u16, d as u16]);
                        }
                    }
                }
            }
        }
        let mut raw = Vec::with_capacity(sets.len());
        for s in &sets {
            let mut total = 0;
            for p in permutations4() {
                let t = [s[p[0]] as usize, s[p[1]] as usize, s[p[2]] as usize, s[p[3]] as usize];
                let x = prod.apply_basis(t[0], t[1]);
                let v = m.act_unchecked(alg, &x, &m.basis_vector(t[2]));
                total += q7.eval(&[&v, &m.basis_vector(t[3])]);
            }
            raw.push(total);
        }
        let g = raw.iter().fold(0i64, |g, &v| gcd(g, v));
        if g == 0 {
            return Err(Error::Internal("symmetrized quartic vanishes".into()));
        }
        let sign = raw.iter().find(|&&v| v != 0).map_or(1, |v| v.signum());
        let mut values = HashMap::new();
        for (s, v) in sets.iter().zip(raw) {
            if v == 0 {
                continue;
            }
            for p in permutations4() {
                values.insert(vec![s[p[0]], s[p[1]], s[p[2]], s[p[3]]], sign * v / g);
            }
        }
        Ok(Self { name: "f7".into(), arity: 4, target, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Weight sum of every supporting tuple.
    pub fn target(&self) -> DivisorClass {
        self.target
    }

    /// Value on basis vectors with the given weight indices.
    pub fn value(&self, idx: &[usize]) -> i64 {
        let k: Key = idx.iter().map(|&i| i as u16).collect();
        self.values.get(&k).copied().unwrap_or(0)
    }

    /// Ordered supporting tuples with their values, sorted.
    pub fn entries(&self) -> Vec<(Vec<usize>, i64)> {
        let mut v: Vec<_> = self.values.iter().map(|(k, &c)| (k.iter().map(|&i| i as usize).collect(), c)).collect();
        v.sort();
        v
    }

    /// Distinct supporting multisets, each sorted.
    pub fn support_sets(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self
            .values
            .keys()
            .map(|k| {
                let mut s: Vec<usize> = k.iter().map(|&i| i as usize).collect();
                s.sort();
                s
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Multilinear evaluation on weight coordinates.
    pub fn eval(&self, vs: &[&ModuleVector]) -> i64 {
        assert_eq!(vs.len(), self.arity);
        let mut total = 0;
        for (k, &c) in &self.values {
            let mut p = c;
            for (s, v) in vs.iter().enumerate() {
                p *= v.coeff(k[s] as usize);
                if p == 0 {
                    break;
                }
            }
            total += p;
        }
        total
    }

    /// Gram matrix of a bilinear form over `dim` weights.
    pub fn gram(&self, dim: usize) -> Vec<Vec<i64>> {
        (0..dim).map(|i| (0..dim).map(|j| self.value(&[i, j])).collect()).collect()
    }

    /// `Σₛ F(…, x_D·v_s, …)` on basis vectors `idx`, for a root index `j`.
    pub fn invariance_defect(&self, alg: &LieAlgebra, m: &WeightModule, j: usize, idx: &[usize]) -> i64 {
        let d = alg.roots()[j];
        let mut total = 0;
        for s in 0..idx.len() {
            if let Some(to) = m.index_of(&(m.weights()[idx[s]] + d)) {
                let mut t = idx.to_vec();
                t[s] = to;
                total += m.sign(alg, j, idx[s]) * self.value(&t);
            }
        }
        total
    }

    /// True when swapping any two slots multiplies every value by `sign`.
    pub fn is_symmetric_with_sign(&self, sign: i64) -> bool {
        self.values.iter().all(|(k, &v)| {
            (0..self.arity).all(|a| {
                (a + 1..self.arity).all(|b| {
                    let mut t = k.clone();
                    t.swap(a, b);
                    self.values.get(&t).copied().unwrap_or(0) == sign * v
                })
            })
        })
    }
}

fn need(alg: &LieAlgebra, n: usize) -> Result<()> {
    if alg.n() == n {
        Ok(())
    } else {
        Err(Error::Unsupported { n: alg.n(), lo: n, hi: n })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn permutations4() -> impl Iterator<Item = [usize; 4]> {
    (0..24).map(|mut c| {
        let mut pool = vec![0, 1, 2, 3];
        let mut out = [0; 4];
        for (i, f) in [6, 2, 1, 1].iter().enumerate() {
            out[i] = pool.remove(c / f);
            c %= f;
        }
        out
    })
}

/// The equivariant map `u ⊗ v ↦ Σ_X ω(X·u, v) X*` into the adjoint module,
/// scaled by `K²` so that it is integral. `X*` is the dual basis for the
/// invariant form of [`LieAlgebra::killing_form`].
pub struct MomentMap<'a> {
    alg: &'a LieAlgebra,
    module: &'a WeightModule,
    omega: &'a InvariantForm,
    roots: Vec<usize>,
    scale: i64,
}

impl<'a> MomentMap<'a> {
    pub fn new(alg: &'a LieAlgebra, module: &'a WeightModule, omega: &'a InvariantForm) -> Result<Self> {
        Self::restricted(alg, module, omega, None)
    }

    /// Moment map for the subalgebra spanned by the Cartan part and `roots`.
    pub fn restricted(alg: &'a LieAlgebra, module: &'a WeightModule, omega: &'a InvariantForm, roots: Option<&[usize]>) -> Result<Self> {
        if omega.arity != 2 || module.kind() != ActionKind::Minuscule {
            return Err(Error::Mismatch);
        }
        let k = alg.lattice().canonical_class();
        let mut roots = acting(alg, roots);
        roots.sort();
        Ok(Self { alg, module, omega, roots, scale: k.dot(&k) })
    }

    /// Scale factor applied to the literal moment map.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Image of the pair of basis vectors `(v_a, v_b)`.
    pub fn apply_basis(&self, a: usize, b: usize) -> Element {
        let alg = self.alg;
        let m = self.module;
        let w = m.weights();
        let k = alg.lattice().canonical_class();
        let mut e = alg.zero();
        let wab = self.omega.value(&[a, b]);
        if wab != 0 {
            // Σᵢ (bᵢ·w) bⁱ = -π(w), with π the projection to K⊥
            let proj = self.scale * w[a] - w[a].dot(&k) * k;
            e.cartan -= wab * proj;
        }
        let target = self.omega.target - w[a] - w[b];
        // x_D v_a pairs with v_b only when D = target
        if let Some(j) = alg.root_index(&target) {
            if self.roots.binary_search(&j).is_ok() {
                if let Some(t) = m.index_of(&(w[a] + target)) {
                    let c = m.sign(alg, j, a) * self.omega.value(&[t, b]);
                    e.add_root(alg.negative(j), -self.scale * c);
                }
            }
        }
        e
    }

    pub fn apply(&self, u: &ModuleVector, v: &ModuleVector) -> Element {
        let mut e = self.alg.zero();
        for (&a, &x) in &u.weights {
            for (&b, &y) in &v.weights {
                e.add_scaled(&self.apply_basis(a, b), x * y);
            }
        }
        e
    }
}

/// An equivariant bilinear map `M ⊗ M → N` between minuscule modules,
/// `v_a ⊗ v_b ↦ c(a,b) v_{w_a + w_b}`.
#[derive(Clone, Debug)]
pub struct WeightProduct {
    values: BTreeMap<(usize, usize), i64>,
}

impl WeightProduct {
    /// Solves the equivariance equations from one normalized coefficient.
    pub fn by_propagation(alg: &LieAlgebra, src: &WeightModule, dst: &WeightModule) -> Result<Self> {
        if src.kind() != ActionKind::Minuscule || dst.kind() != ActionKind::Minuscule {
            return Err(Error::Mismatch);
        }
        let w = src.weights();
        let key = |a: usize, b: usize| vec![a as u16, b as u16];
        let mut equations = Vec::new();
        for (j, d) in alg.roots().iter().enumerate() {
            for a in 0..w.len() {
                for b in 0..w.len() {
                    if dst.index_of(&(w[a] + w[b] + *d)).is_none() {
                        continue;
                    }
                    let mut eq = Vec::new();
                    if let Some(o) = dst.index_of(&(w[a] + w[b])) {
                        eq.push((key(a, b), dst.sign(alg, j, o)));
                    }
                    if let Some(a2) = src.index_of(&(w[a] + *d)) {
                        if dst.index_of(&(w[a2] + w[b])).is_some() {
                            eq.push((key(a2, b), -src.sign(alg, j, a)));
                        }
                    }
                    if let Some(b2) = src.index_of(&(w[b] + *d)) {
                        if dst.index_of(&(w[a] + w[b2])).is_some() {
                            eq.push((key(a, b2), -src.sign(alg, j, b)));
                        }
                    }
                    if !eq.is_empty() {
                        equations.push(eq);
                    }
                }
            }
        }
        let sol = propagate(&equations)?;
        let values = sol.into_iter().map(|(k, v)| ((k[0] as usize, k[1] as usize), v)).collect();
        Ok(Self { values })
    }

    pub fn value(&self, a: usize, b: usize) -> i64 {
        self.values.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&(usize, usize), &i64)> {
        self.values.iter()
    }

    pub fn apply(&self, src: &WeightModule, dst: &WeightModule, u: &ModuleVector, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero(src.lattice().n());
        for (&a, &x) in &u.weights {
            for (&b, &y) in &v.weights {
                let c = self.value(a, b);
                if c != 0 {
                    let o = dst.index_of(&(src.weights()[a] + src.weights()[b])).expect("supported product");
                    out.add(o, c * x * y);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;
    use crate::picard::PicardLattice;

    fn alg(n: usize) -> LieAlgebra {
        LieAlgebra::new(&PicardLattice::new(n).unwrap()).unwrap()
    }

    fn perfect_matching(g: &[Vec<i64>]) -> bool {
        g.iter().all(|r| r.iter().filter(|&&x| x != 0).count() == 1 && r.iter().all(|&x| x.abs() <= 1))
    }

    fn exhaustive_invariance(a: &LieAlgebra, m: &WeightModule, f: &InvariantForm) {
        let w = m.weights();
        for j in 0..a.roots().len() {
            let rest = f.target() - a.roots()[j];
            for x in 0..w.len() {
                if f.arity() == 2 {
                    if let Some(y) = m.index_of(&(rest - w[x])) {
                        assert_eq!(f.invariance_defect(a, m, j, &[x, y]), 0);
                    }
                } else {
                    for y in 0..w.len() {
                        if let Some(z) = m.index_of(&(rest - w[x] - w[y])) {
                            assert_eq!(f.invariance_defect(a, m, j, &[x, y, z]), 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn q5_pairs_dual_rulings() {
        let a = alg(5);
        let m = WeightModule::rulings(&a).unwrap();
        let q = InvariantForm::q5(&a).unwrap();
        let g = q.gram(10);
        assert!(perfect_matching(&g));
        assert_eq!(determinant(&g).abs(), 1);
        assert!(q.is_symmetric_with_sign(1));
        let k = a.lattice().canonical_class();
        for (t, _) in q.entries() {
            assert_eq!(m.weights()[t[0]] + m.weights()[t[1]], -k);
            assert_eq!(m.weights()[t[0]].dot(&m.weights()[t[1]]), 2);
        }
        exhaustive_invariance(&a, &m, &q);
    }

    #[test]
    fn c6_lives_on_triangles() {
        let a = alg(6);
        let m = WeightModule::lines(&a).unwrap();
        let c = InvariantForm::c6(&a).unwrap();
        let sets = c.support_sets();
        assert_eq!(sets.len(), 45);
        let w = m.weights();
        for s in &sets {
            assert!(w[s[0]].dot(&w[s[1]]) == 1 && w[s[1]].dot(&w[s[2]]) == 1 && w[s[0]].dot(&w[s[2]]) == 1);
        }
        assert!(c.entries().iter().all(|(_, v)| v.abs() == 1));
        assert!(c.is_symmetric_with_sign(1));
        exhaustive_invariance(&a, &m, &c);
    }

    #[test]
    fn q7_is_a_symplectic_matching() {
        let a = alg(7);
        let m = WeightModule::lines(&a).unwrap();
        let q = InvariantForm::q7(&a).unwrap();
        let g = q.gram(56);
        assert!(perfect_matching(&g));
        assert_eq!(determinant(&g), 1);
        assert!(q.is_symmetric_with_sign(-1));
        assert!(!q.is_symmetric_with_sign(1));
        for (t, _) in q.entries() {
            assert_eq!(m.weights()[t[0]].dot(&m.weights()[t[1]]), 2);
        }
        exhaustive_invariance(&a, &m, &q);
    }

    #[test]
    fn moment_map_is_equivariant() {
        let a = alg(7);
        let m = WeightModule::lines(&a).unwrap();
        let q = InvariantForm::q7(&a).unwrap();
        let mu = MomentMap::new(&a, &m, &q).unwrap();
        let basis = a.basis();
        for x in basis.iter().step_by(11) {
            for u in 0..56 {
                for v in (0..56).step_by(3) {
                    let (bu, bv) = (m.basis_vector(u), m.basis_vector(v));
                    let lhs = a.bracket(x, &mu.apply_basis(u, v)).unwrap();
                    let mut rhs = mu.apply(&m.act(&a, x, &bu).unwrap(), &bv);
                    rhs.add_scaled(&mu.apply(&bu, &m.act(&a, x, &bv).unwrap()), 1);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn f7_support_and_symmetry() {
        let a = alg(7);
        let m = WeightModule::lines(&a).unwrap();
        let f = InvariantForm::f7(&a).unwrap();
        assert!(f.is_symmetric_with_sign(1));
        let w = m.weights();
        let k = a.lattice().canonical_class();
        for s in f.support_sets() {
            let sum = w[s[0]] + w[s[1]] + w[s[2]] + w[s[3]];
            assert_eq!(sum, -2 * k);
        }
        let f_vals: std::collections::BTreeSet<i64> = f.entries().iter().map(|(_, v)| v.abs()).collect();
        assert_eq!(f_vals.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn f7_invariance_exhaustive() {
        let a = alg(7);
        let m = WeightModule::lines(&a).unwrap();
        let f = InvariantForm::f7(&a).unwrap();
        let w = m.weights();
        let mut checked = 0;
        for j in 0..a.roots().len() {
            let rest = f.target() - a.roots()[j];
            for x in 0..56 {
                for y in x..56 {
                    for z in y..56 {
                        if let Some(t) = m.index_of(&(rest - w[x] - w[y] - w[z])) {
                            assert_eq!(f.invariance_defect(&a, &m, j, &[x, y, z, t]), 0);
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 10_000);
    }

    #[test]
    fn products_into_rulings_are_equivariant() {
        for n in 2..=6 {
            let a = alg(n);
            let l = WeightModule::lines(&a).unwrap();
            let r = WeightModule::rulings(&a).unwrap();
            let c = WeightProduct::by_propagation(&a, &l, &r).unwrap();
            for (&(x, y), _) in c.support() {
                assert_eq!(l.weights()[x].dot(&l.weights()[y]), 1);
            }
            let basis = a.basis();
            for e in &basis {
                for x in 0..l.weights().len() {
                    for y in 0..l.weights().len() {
                        let (bx, by) = (l.basis_vector(x), l.basis_vector(y));
                        let lhs = r.act(&a, e, &c.apply(&l, &r, &bx, &by)).unwrap();
                        let mut rhs = c.apply(&l, &r, &l.act(&a, e, &bx).unwrap(), &by);
                        rhs.add_scaled(&c.apply(&l, &r, &bx, &l.act(&a, e, &by).unwrap()), 1);
                        assert_eq!(lhs, rhs, "n={n}");
                    }
                }
            }
            let pairs = l.weights().iter().enumerate().flat_map(|(i, u)| l.weights().iter().enumerate().filter(move |(_, v)| u.dot(v) == 1).map(move |(j, _)| (i, j))).count();
            assert_eq!(c.support().count(), pairs, "n={n}");
        }
    }
}
