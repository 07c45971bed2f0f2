//! Root systems inside `K⊥`: bases, Cartan matrices, Dynkin types and
//! Weyl group actions.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::census::enumerate_roots;
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};

/// Default cap on orbit sizes.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    lattice: PicardLattice,
    roots: Vec<DivisorClass>,
    simple_roots: Vec<DivisorClass>,
}

impl RootSystem {
    /// The `E_n` system with the standard base `H-L₁-L₂-L₃, L₁-L₂, …`.
    pub fn build(lattice: &PicardLattice) -> Result<Self> {
        let n = lattice.n();
        if n > 8 {
            return Err(Error::Unsupported { n, lo: 0, hi: 8 });
        }
        let roots = enumerate_roots(lattice);
        let mut simple = Vec::new();
        if n >= 3 {
            simple.push(lattice.hyperplane() - lattice.exceptional(1) - lattice.exceptional(2) - lattice.exceptional(3));
        }
        for i in 1..n {
            simple.push(lattice.exceptional(i) - lattice.exceptional(i + 1));
        }
        Ok(Self { lattice: *lattice, roots, simple_roots: simple })
    }

    /// A root subsystem given by its full root set; the base is read off
    /// from lexicographic positivity.
    pub fn from_roots(lattice: &PicardLattice, roots: &[DivisorClass]) -> Result<Self> {
        for r in roots {
            if !lattice.is_root(r) {
                return Err(Error::InvalidClass { class: r.to_json(), reason: "not a root".into() });
            }
        }
        let mut roots = roots.to_vec();
        roots.sort();
        roots.dedup();
        let set: HashSet<_> = roots.iter().copied().collect();
        if roots.iter().any(|r| !set.contains(&-*r)) {
            return Err(Error::InvalidClass { class: "root set".into(), reason: "not closed under negation".into() });
        }
        let simple = base_of(&roots);
        Ok(Self { lattice: *lattice, roots, simple_roots: simple })
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    pub fn roots(&self) -> &[DivisorClass] {
        &self.roots
    }

    pub fn simple_roots(&self) -> &[DivisorClass] {
        &self.simple_roots
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn cartan_matrix(&self) -> CartanMatrix {
        CartanMatrix::of(&self.simple_roots)
    }

    pub fn cartan_type(&self) -> Result<CartanType> {
        let mut t = classify(&self.simple_roots)?;
        t.abelian = self.lattice.n().saturating_sub(self.rank());
        Ok(t)
    }

    /// Orbit of `seed` under the simple reflections, sorted.
    pub fn weyl_orbit(&self, seed: &DivisorClass, cap: usize) -> Result<Vec<DivisorClass>> {
        self.lattice.check(seed)?;
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(*seed);
        queue.push_back(*seed);
        while let Some(d) = queue.pop_front() {
            for a in &self.simple_roots {
                let e = reflect_unchecked(&d, a);
                if seen.insert(e) {
                    if seen.len() > cap {
                        return Err(Error::Truncated { what: "Weyl orbit".into(), budget: cap });
                    }
                    queue.push_back(e);
                }
            }
        }
        let mut v: Vec<_> = seen.into_iter().collect();
        v.sort();
        Ok(v)
    }

    /// Indices of simple roots whose reflections, applied left to right,
    /// carry `from` to `to`.
    pub fn weyl_word(&self, from: &DivisorClass, to: &DivisorClass, cap: usize) -> Result<Option<Vec<usize>>> {
        self.lattice.check(from)?;
        self.lattice.check(to)?;
        let mut parent: HashMap<DivisorClass, Option<(DivisorClass, usize)>> = HashMap::new();
        parent.insert(*from, None);
        let mut queue = VecDeque::from([*from]);
        while let Some(d) = queue.pop_front() {
            if d == *to {
                let mut word = Vec::new();
                let mut cur = d;
                while let Some((prev, i)) = parent[&cur] {
                    word.push(i);
                    cur = prev;
                }
                word.reverse();
                return Ok(Some(word));
            }
            for (i, a) in self.simple_roots.iter().enumerate() {
                let e = reflect_unchecked(&d, a);
                if !parent.contains_key(&e) {
                    if parent.len() >= cap {
                        return Err(Error::Truncated { what: "Weyl word search".into(), budget: cap });
                    }
                    parent.insert(e, Some((d, i)));
                    queue.push_back(e);
                }
            }
        }
        Ok(None)
    }

    /// Applies the reflections of `word` in order.
    pub fn apply_word(&self, word: &[usize], d: &DivisorClass) -> DivisorClass {
        word.iter().fold(*d, |acc, &i| reflect_unchecked(&acc, &self.simple_roots[i]))
    }

    /// Order of the group generated by simple reflections, by closure of
    /// their permutation action on the roots (`n ≤ 6`).
    pub fn weyl_group_order(&self) -> Result<u64> {
        let n = self.lattice.n();
        if n > 6 {
            return Err(Error::Unsupported { n, lo: 0, hi: 6 });
        }
        let index: HashMap<_, _> = self.roots.iter().enumerate().map(|(i, r)| (*r, i as u8)).collect();
        let gens: Vec<Vec<u8>> = self
            .simple_roots
            .iter()
            .map(|a| self.roots.iter().map(|r| index[&reflect_unchecked(r, a)]).collect())
            .collect();
        let id: Vec<u8> = (0..self.roots.len() as u8).collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let h: Vec<u8> = g.iter().map(|&x| s[x as usize]).collect();
                if !seen.contains(&h) {
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(seen.len() as u64)
    }
}

/// Simple roots of a root set, for the lexicographic order on coefficients.
pub fn base_of(roots: &[DivisorClass]) -> Vec<DivisorClass> {
    let zero = match roots.first() {
        Some(r) => DivisorClass::zero(r.rank()),
        None => return Vec::new(),
    };
    let positive: Vec<_> = roots.iter().copied().filter(|r| *r > zero).collect();
    let pos_set: HashSet<_> = positive.iter().copied().collect();
    let mut simple: Vec<_> = positive
        .iter()
        .copied()
        .filter(|a| !positive.iter().any(|b| pos_set.contains(&(*a - *b))))
        .collect();
    simple.sort();
    simple
}

#[inline]
fn reflect_unchecked(d: &DivisorClass, root: &DivisorClass) -> DivisorClass {
    *d + d.dot(root) * *root
}

/// Reflection in a norm `-2` class: `D ↦ D + (D·α)α`.
pub fn reflect(d: &DivisorClass, root: &DivisorClass) -> Result<DivisorClass> {
    d.intersect(root)?;
    if root.self_intersection() != -2 {
        return Err(Error::InvalidClass { class: root.to_json(), reason: "reflection needs α² = -2".into() });
    }
    Ok(reflect_unchecked(d, root))
}

/// `A_ij = 2` on the diagonal and `-(αᵢ·αⱼ)` off it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn of(simple: &[DivisorClass]) -> Self {
        let entries = simple
            .iter()
            .enumerate()
            .map(|(i, a)| simple.iter().enumerate().map(|(j, b)| if i == j { 2 } else { -a.dot(b) }).collect())
            .collect();
        Self { entries }
    }

    pub fn is_simply_laced(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = self.entries[i][j];
                v == self.entries[j][i] && if i == j { v == 2 } else { v == 0 || v == -1 }
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SimpleType {
    E(usize),
    D(usize),
    A(usize),
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::A(k) => write!(f, "A{k}"),
            SimpleType::D(k) => write!(f, "D{k}"),
            SimpleType::E(k) => write!(f, "E{k}"),
        }
    }
}

/// A product of simple types with an abelian factor `u(1)^abelian`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub components: Vec<SimpleType>,
    pub abelian: usize,
}

impl CartanType {
    pub fn new(mut components: Vec<SimpleType>, abelian: usize) -> Self {
        components.sort_by(|a, b| {
            let key = |t: &SimpleType| match *t {
                SimpleType::E(k) => (0, std::cmp::Reverse(k)),
                SimpleType::D(k) => (1, std::cmp::Reverse(k)),
                SimpleType::A(k) => (2, std::cmp::Reverse(k)),
            };
            key(a).cmp(&key(b))
        });
        Self { components, abelian }
    }

    /// Semisimple rank.
    pub fn rank(&self) -> usize {
        self.components
            .iter()
            .map(|t| match *t {
                SimpleType::A(k) | SimpleType::D(k) | SimpleType::E(k) => k,
            })
            .sum()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        match self.abelian {
            0 => {}
            1 => parts.push("u(1)".into()),
            k => parts.push(format!("u(1)^{k}")),
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        f.write_str(&parts.join("×"))
    }
}

/// The type `E_n` takes at each `n ≤ 8`, written with its low-rank coincidences.
pub fn expected_en_type(n: usize) -> CartanType {
    use SimpleType::*;
    match n {
        0 => CartanType::new(vec![], 0),
        1 => CartanType::new(vec![], 1),
        2 => CartanType::new(vec![A(1)], 1),
        3 => CartanType::new(vec![A(2), A(1)], 0),
        4 => CartanType::new(vec![A(4)], 0),
        5 => CartanType::new(vec![D(5)], 0),
        k => CartanType::new(vec![E(k)], 0),
    }
}

/// Dynkin type of a simply-laced base, by component shapes.
pub fn classify(simple: &[DivisorClass]) -> Result<CartanType> {
    let m = simple.len();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            match simple[i].dot(&simple[j]) {
                0 => {}
                1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                }
                v => {
                    return Err(Error::InvalidClass {
                        class: format!("{} · {}", simple[i], simple[j]),
                        reason: format!("pairing {v} is not that of a base"),
                    })
                }
            }
        }
    }
    let mut seen = vec![false; m];
    let mut comps = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &t in &adj[comp[i]] {
                if !seen[t] {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            i += 1;
        }
        comps.push(component_type(&comp, &adj)?);
    }
    Ok(CartanType::new(comps, 0))
}

fn component_type(comp: &[usize], adj: &[Vec<usize>]) -> Result<SimpleType> {
    let k = comp.len();
    let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    let bad = || Error::InvalidClass { class: format!("{k}-node component"), reason: "not a finite simply-laced type".into() };
    if edges + 1 != k {
        return Err(bad());
    }
    let forks: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
    match forks.as_slice() {
        [] => Ok(SimpleType::A(k)),
        [c] if adj[*c].len() == 3 => {
            let mut arms: Vec<usize> = adj[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort();
            match arms.as_slice() {
                [1, 1, r] => Ok(SimpleType::D(r + 3)),
                [1, 2, 2] => Ok(SimpleType::E(6)),
                [1, 2, 3] => Ok(SimpleType::E(7)),
                [1, 2, 4] => Ok(SimpleType::E(8)),
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}
