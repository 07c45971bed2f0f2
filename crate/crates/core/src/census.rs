//! Enumeration of divisor classes by self-intersection and canonical degree,
//! and the configuration searches built on it.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};

/// Default node budget for cycle searches.
pub const DEFAULT_SEARCH_BUDGET: usize = 50_000_000;

/// Numerical conditions on a class `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassQuery {
    /// Required `D·D`.
    pub self_int: i64,
    /// Required `D·K`.
    pub k_int: i64,
    /// Pairs `(C, v)` requiring `D·C = v`.
    #[serde(default)]
    pub linear_constraints: Vec<(DivisorClass, i64)>,
    /// `(C, p)` requiring `D·C ≡ p (mod 2)`.
    #[serde(default)]
    pub parity_constraint: Option<(DivisorClass, u8)>,
    /// Cap on `|a|`; only needed when `n ≥ 9`.
    #[serde(default)]
    pub degree_bound: Option<i64>,
}

impl ClassQuery {
    pub fn new(self_int: i64, k_int: i64) -> Self {
        Self { self_int, k_int, linear_constraints: Vec::new(), parity_constraint: None, degree_bound: None }
    }

    pub fn lines() -> Self {
        Self::new(-1, -1)
    }

    pub fn rulings() -> Self {
        Self::new(0, -2)
    }

    pub fn roots() -> Self {
        Self::new(-2, 0)
    }

    pub fn with_dot(mut self, c: DivisorClass, v: i64) -> Self {
        self.linear_constraints.push((c, v));
        self
    }

    pub fn with_parity(mut self, c: DivisorClass, p: u8) -> Self {
        self.parity_constraint = Some((c, p % 2));
        self
    }

    pub fn with_degree_bound(mut self, b: i64) -> Self {
        self.degree_bound = Some(b);
        self
    }

    fn accepts(&self, d: &DivisorClass) -> bool {
        self.linear_constraints.iter().all(|(c, v)| d.dot(c) == *v)
            && self.parity_constraint.as_ref().map_or(true, |(c, p)| d.dot(c).rem_euclid(2) == *p as i64)
    }
}

fn isqrt(x: i128) -> i128 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Integer interval of `a` allowed by Cauchy–Schwarz, `None` if unbounded.
fn degree_range(n: i64, s: i64, k: i64) -> Option<(i64, i64)> {
    if n == 0 {
        return if k % 3 == 0 { Some((-k / 3, -k / 3)) } else { Some((1, 0)) };
    }
    let c2 = (9 - n) as i128;
    if c2 <= 0 {
        return None;
    }
    let (k, s, n) = (k as i128, s as i128, n as i128);
    let disc = 36 * k * k - 4 * c2 * (k * k + n * s);
    if disc < 0 {
        return Some((1, 0));
    }
    let r = isqrt(disc) + 1;
    let lo = (-6 * k - r).div_euclid(2 * c2) - 1;
    let hi = (-6 * k + r).div_euclid(2 * c2) + 1;
    Some((lo as i64, hi as i64))
}

struct Descent<'a> {
    n: usize,
    query: &'a ClassQuery,
    buf: Vec<i64>,
    out: Vec<DivisorClass>,
}

impl Descent<'_> {
    fn run(&mut self, i: usize, t: i64, q: i64) {
        let m = (self.n + 1 - i) as i64;
        if m == 0 {
            if t == 0 && q == 0 {
                let d = DivisorClass::new(&self.buf).expect("rank within bounds");
                if self.query.accepts(&d) {
                    self.out.push(d);
                }
            }
            return;
        }
        if q < 0 || (t as i128) * (t as i128) > (m as i128) * (q as i128) || (q - t).rem_euclid(2) != 0 {
            return;
        }
        if m == 1 {
            if t * t == q {
                self.buf[i] = t;
                self.run(i + 1, 0, 0);
            }
            return;
        }
        // (t-b)² ≤ (m-1)(q-b²)  ⇔  b ∈ [(t - √Δ)/m, (t + √Δ)/m], Δ = (m-1)(mq - t²)
        let delta = (m as i128 - 1) * (m as i128 * q as i128 - (t as i128) * (t as i128));
        let r = isqrt(delta) + 1;
        let lo = ((t as i128 - r).div_euclid(m as i128)) as i64;
        let hi = ((t as i128 + r).div_euclid(m as i128)) as i64 + 1;
        for b in lo..=hi {
            let rest_t = t - b;
            let rest_q = q - b * b;
            if rest_q < 0 || (rest_t as i128) * (rest_t as i128) > ((m - 1) as i128) * (rest_q as i128) {
                continue;
            }
            self.buf[i] = b;
            self.run(i + 1, rest_t, rest_q);
        }
    }
}

/// All classes satisfying `query`, in lexicographic order of `(a, b₁, …, bₙ)`.
pub fn enumerate_classes(lattice: &PicardLattice, query: &ClassQuery) -> Result<Vec<DivisorClass>> {
    for (c, _) in &query.linear_constraints {
        lattice.check(c)?;
    }
    if let Some((c, _)) = &query.parity_constraint {
        lattice.check(c)?;
    }
    if (query.self_int + query.k_int).rem_euclid(2) != 0 {
        return Ok(Vec::new());
    }
    let n = lattice.n();
    let (mut lo, mut hi) = match (degree_range(n as i64, query.self_int, query.k_int), query.degree_bound) {
        (Some(r), _) => r,
        (None, Some(b)) => (-b, b),
        (None, None) => {
            return Err(Error::Unbounded(format!(
                "K² = {} ≤ 0 for n = {n}; supply a degree bound",
                9 - n as i64
            )))
        }
    };
    if let Some(b) = query.degree_bound {
        lo = lo.max(-b);
        hi = hi.min(b);
    }
    let mut st = Descent { n, query, buf: vec![0; n + 1], out: Vec::new() };
    for a in lo..=hi {
        let q = a * a - query.self_int;
        let t = query.k_int + 3 * a;
        st.buf[0] = a;
        if n == 0 {
            if t == 0 && q == 0 {
                st.run(1, 0, 0);
            }
            continue;
        }
        st.run(1, t, q);
    }
    let mut out = st.out;
    out.sort();
    out.dedup();
    Ok(out)
}

fn expect_bounded(r: Result<Vec<DivisorClass>>, lattice: &PicardLattice) -> Vec<DivisorClass> {
    r.unwrap_or_else(|e| panic!("enumeration at n = {} must be bounded: {e}", lattice.n()))
}

/// Classes with `D² = -1`, `D·K = -1` (`n ≤ 8`).
pub fn enumerate_lines(lattice: &PicardLattice) -> Vec<DivisorClass> {
    expect_bounded(enumerate_classes(lattice, &ClassQuery::lines()), lattice)
}

/// Classes with `D² = 0`, `D·K = -2` (`n ≤ 8`).
pub fn enumerate_rulings(lattice: &PicardLattice) -> Vec<DivisorClass> {
    expect_bounded(enumerate_classes(lattice, &ClassQuery::rulings()), lattice)
}

/// Classes with `D² = -2`, `D·K = 0` (`n ≤ 8`).
pub fn enumerate_roots(lattice: &PicardLattice) -> Vec<DivisorClass> {
    expect_bounded(enumerate_classes(lattice, &ClassQuery::roots()), lattice)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingKind {
    Bitangent,
    TriplePoint,
    SingularFiber,
    RulingDual,
}

/// A perfect matching on a set of classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub kind: PairingKind,
    pub pairs: Vec<(DivisorClass, DivisorClass)>,
}

impl Pairing {
    fn from_involution(kind: PairingKind, set: &[DivisorClass], f: impl Fn(&DivisorClass) -> DivisorClass) -> Result<Self> {
        let members: HashSet<_> = set.iter().copied().collect();
        let mut pairs = Vec::new();
        for c in set {
            let d = f(c);
            if !members.contains(&d) || f(&d) != *c || d == *c {
                return Err(Error::Internal(format!("{kind:?} partner of {c} is {d}, not a distinct member")));
            }
            if c < &d {
                pairs.push((*c, d));
            }
        }
        pairs.sort();
        Ok(Self { kind, pairs })
    }

    /// All classes appearing in some pair.
    pub fn support(&self) -> Vec<DivisorClass> {
        let mut v: Vec<_> = self.pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
        v.sort();
        v
    }

    pub fn is_perfect_matching(&self) -> bool {
        let s = self.support();
        s.windows(2).all(|w| w[0] != w[1])
    }

    pub fn partner(&self, c: &DivisorClass) -> Option<DivisorClass> {
        self.pairs.iter().find_map(|(a, b)| if a == c { Some(*b) } else if b == c { Some(*a) } else { None })
    }
}

/// Reducible fibers `{C, R - C}` of the conic bundle with fiber class `R`.
pub fn singular_fibers(lattice: &PicardLattice, r: &DivisorClass) -> Result<Pairing> {
    lattice.check(r)?;
    if !lattice.is_ruling(r) {
        return Err(Error::InvalidClass { class: r.to_json(), reason: "not a ruling (needs R² = 0, R·K = -2)".into() });
    }
    let comps = enumerate_classes(lattice, &ClassQuery::lines().with_dot(*r, 0))?;
    let p = Pairing::from_involution(PairingKind::SingularFiber, &comps, |c| *r - *c)?;
    Ok(p)
}

/// Involutions on lines or rulings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvolutionRule {
    /// `l ↦ -K - l` on `X₇`.
    Bitangent,
    /// `l ↦ -2K - l` on `X₈`.
    TriplePoint,
    /// `R ↦ -K - R` on rulings of `X₅`.
    RulingDual,
}

pub fn involution_pairs(lattice: &PicardLattice, rule: InvolutionRule) -> Result<Pairing> {
    let k = lattice.canonical_class();
    let need = |m: usize| {
        if lattice.n() == m {
            Ok(())
        } else {
            Err(Error::Unsupported { n: lattice.n(), lo: m, hi: m })
        }
    };
    match rule {
        InvolutionRule::Bitangent => {
            need(7)?;
            Pairing::from_involution(PairingKind::Bitangent, &enumerate_lines(lattice), |l| -k - *l)
        }
        InvolutionRule::TriplePoint => {
            need(8)?;
            Pairing::from_involution(PairingKind::TriplePoint, &enumerate_lines(lattice), |l| -2 * k - *l)
        }
        InvolutionRule::RulingDual => {
            need(5)?;
            Pairing::from_involution(PairingKind::RulingDual, &enumerate_rulings(lattice), |r| -k - *r)
        }
    }
}

/// Matrix of pairwise intersection numbers.
pub fn intersection_matrix(classes: &[DivisorClass]) -> Vec<Vec<i64>> {
    classes.iter().map(|a| classes.iter().map(|b| a.dot(b)).collect()).collect()
}

/// Cycles of `d` lines: consecutive lines meet once, the rest are disjoint.
/// For `d = 2` the two lines meet twice. Each cycle is listed from its
/// smallest line, in the direction of the smaller neighbour.
pub fn find_dgons(lattice: &PicardLattice, d: usize, budget: usize) -> Result<Vec<Vec<DivisorClass>>> {
    if !(2..=8).contains(&d) {
        return Err(Error::Unsupported { n: d, lo: 2, hi: 8 });
    }
    if lattice.n() > 8 {
        return Err(Error::Unsupported { n: lattice.n(), lo: 0, hi: 8 });
    }
    let lines = enumerate_lines(lattice);
    let m = intersection_matrix(&lines);
    let count = lines.len();
    let mut out = Vec::new();
    if d == 2 {
        for i in 0..count {
            for j in i + 1..count {
                if m[i][j] == 2 {
                    out.push(vec![lines[i], lines[j]]);
                }
            }
        }
        return Ok(out);
    }
    let adj: Vec<Vec<usize>> = (0..count).map(|i| (0..count).filter(|&j| m[i][j] == 1).collect()).collect();
    let mut steps = 0usize;
    let mut path = Vec::with_capacity(d);
    #[allow(clippy::too_many_arguments)]
    fn extend(
        path: &mut Vec<usize>,
        d: usize,
        m: &[Vec<i64>],
        adj: &[Vec<usize>],
        steps: &mut usize,
        budget: usize,
        found: &mut Vec<Vec<usize>>,
    ) -> bool {
        *steps += 1;
        if *steps > budget {
            return false;
        }
        let start = path[0];
        let last = *path.last().expect("non-empty path");
        if path.len() == d {
            if m[last][start] == 1 && path[1] < path[d - 1] {
                found.push(path.clone());
            }
            return true;
        }
        for &next in &adj[last] {
            if next <= start || path.contains(&next) {
                continue;
            }
            let k = path.len();
            // all earlier non-neighbours must be disjoint; the start may close the cycle only at the end
            let ok = path[..k - 1].iter().enumerate().all(|(pos, &p)| {
                if pos == 0 && k == d - 1 {
                    true
                } else {
                    m[p][next] == 0
                }
            });
            if !ok {
                continue;
            }
            path.push(next);
            let fine = extend(path, d, m, adj, steps, budget, found);
            path.pop();
            if !fine {
                return false;
            }
        }
        true
    }
    let mut found = Vec::new();
    for s in 0..count {
        path.clear();
        path.push(s);
        if !extend(&mut path, d, &m, &adj, &mut steps, budget, &mut found) {
            return Err(Error::Truncated { what: format!("{d}-gon search on X_{}", lattice.n()), budget });
        }
    }
    out.extend(found.into_iter().map(|c| c.into_iter().map(|i| lines[i]).collect()));
    Ok(out)
}

/// Number of unordered pairs of lines meeting once whose sum is `R`, for each ruling.
pub fn ruling_line_pairs(lattice: &PicardLattice) -> HashMap<DivisorClass, usize> {
    let lines = enumerate_lines(lattice);
    let mut count: HashMap<DivisorClass, usize> = enumerate_rulings(lattice).into_iter().map(|r| (r, 0)).collect();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].dot(&lines[j]) == 1 {
                if let Some(c) = count.get_mut(&(lines[i] + lines[j])) {
                    *c += 1;
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(n: usize) -> PicardLattice {
        PicardLattice::new(n).unwrap()
    }

    /// Exhaustive scan over a coefficient box.
    fn naive(n: usize, q: &ClassQuery, bound: i64) -> Vec<DivisorClass> {
        let p = lat(n);
        let k = p.canonical_class();
        let mut out = Vec::new();
        let mut c = vec![-bound; n + 1];
        loop {
            let d = DivisorClass::new(&c).unwrap();
            if d.dot(&d) == q.self_int && d.dot(&k) == q.k_int && q.accepts(&d) {
                out.push(d);
            }
            let mut i = n;
            loop {
                if c[i] < bound {
                    c[i] += 1;
                    break;
                }
                c[i] = -bound;
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
            }
        }
    }

    #[test]
    fn agrees_with_box_scan_for_small_n() {
        let queries = [ClassQuery::lines(), ClassQuery::rulings(), ClassQuery::roots(), ClassQuery::new(1, -3), ClassQuery::new(-1, 1)];
        for n in 0..=4 {
            let bound = if n <= 3 { 12 } else { 8 };
            for q in &queries {
                assert_eq!(enumerate_classes(&lat(n), q).unwrap(), naive(n, q, bound), "n={n} q={q:?}");
            }
        }
    }

    #[test]
    fn line_ruling_root_counts() {
        let lines = [1, 3, 6, 10, 16, 27, 56, 240];
        let rulings = [1, 2, 3, 5, 10, 27, 126];
        let roots = [0, 2, 8, 20, 40, 72, 126, 240];
        for n in 1..=8 {
            assert_eq!(enumerate_lines(&lat(n)).len(), lines[n - 1], "lines n={n}");
            assert_eq!(enumerate_roots(&lat(n)).len(), roots[n - 1], "roots n={n}");
            if n <= 7 {
                assert_eq!(enumerate_rulings(&lat(n)).len(), rulings[n - 1], "rulings n={n}");
            }
        }
    }

    #[test]
    fn roots_are_line_differences() {
        for n in 2..=7 {
            let p = lat(n);
            let lines = enumerate_lines(&p);
            let mut diffs: Vec<_> = lines
                .iter()
                .flat_map(|a| lines.iter().map(move |b| *a - *b))
                .filter(|d| p.is_root(d))
                .collect();
            diffs.sort();
            diffs.dedup();
            assert_eq!(diffs, enumerate_roots(&p), "n={n}");
        }
    }

    #[test]
    fn parity_odd_queries_are_empty() {
        assert!(enumerate_classes(&lat(6), &ClassQuery::new(-1, 0)).unwrap().is_empty());
    }

    #[test]
    fn high_rank_needs_degree_bound() {
        let p = lat(9);
        assert!(matches!(enumerate_classes(&p, &ClassQuery::lines()), Err(Error::Unbounded(_))));
        let some = enumerate_classes(&p, &ClassQuery::lines().with_degree_bound(3)).unwrap();
        assert!(some.iter().all(|d| p.is_line(d) && d.degree().abs() <= 3));
        assert!(some.len() > 240);
    }

    #[test]
    fn fibers_of_pencil_through_a_point() {
        let p = lat(4);
        let r = p.hyperplane() - p.exceptional(1);
        let f = singular_fibers(&p, &r).unwrap();
        assert_eq!(f.pairs.len(), 3);
        for i in 2..=4 {
            let li = p.exceptional(i);
            assert_eq!(f.partner(&li), Some(r - li));
        }
        assert!(singular_fibers(&p, &p.hyperplane()).is_err());
    }

    #[test]
    fn fibers_count_is_n_minus_one() {
        for n in 2..=8 {
            let p = lat(n);
            for r in enumerate_classes(&p, &ClassQuery::rulings()).unwrap().iter().take(40) {
                let f = singular_fibers(&p, r).unwrap();
                assert_eq!(f.pairs.len(), n - 1);
                assert!(f.is_perfect_matching());
            }
        }
    }

    /// Triangles by brute force over all triples.
    fn triangles_naive(n: usize) -> usize {
        let lines = enumerate_lines(&lat(n));
        let mut c = 0;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                for k in j + 1..lines.len() {
                    if lines[i].dot(&lines[j]) == 1 && lines[j].dot(&lines[k]) == 1 && lines[i].dot(&lines[k]) == 1 {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn triangles() {
        let p = lat(6);
        let t = find_dgons(&p, 3, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(t.len(), 45);
        assert_eq!(t.len(), triangles_naive(6));
        let mk = -p.canonical_class();
        assert!(t.iter().all(|c| c[0] + c[1] + c[2] == mk));
        assert!(find_dgons(&lat(5), 3, DEFAULT_SEARCH_BUDGET).unwrap().is_empty());
        assert_eq!(find_dgons(&lat(7), 3, DEFAULT_SEARCH_BUDGET).unwrap().len(), triangles_naive(7));
    }

    #[test]
    fn dgon_budget_is_reported() {
        assert!(matches!(find_dgons(&lat(7), 5, 10), Err(Error::Truncated { .. })));
    }

    #[test]
    fn two_gons_on_x7() {
        let p = lat(7);
        let g = find_dgons(&p, 2, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(g.len(), 28);
        assert!(find_dgons(&lat(6), 2, DEFAULT_SEARCH_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn involutions() {
        let b = involution_pairs(&lat(7), InvolutionRule::Bitangent).unwrap();
        assert_eq!(b.pairs.len(), 28);
        assert!(b.pairs.iter().all(|(x, y)| x.dot(y) == 2));
        let t = involution_pairs(&lat(8), InvolutionRule::TriplePoint).unwrap();
        assert_eq!(t.pairs.len(), 120);
        assert!(t.pairs.iter().all(|(x, y)| x.dot(y) == 3));
        let r = involution_pairs(&lat(5), InvolutionRule::RulingDual).unwrap();
        assert_eq!(r.pairs.len(), 5);
        assert!(r.pairs.iter().all(|(x, y)| x.dot(y) == 2));
        assert!(involution_pairs(&lat(6), InvolutionRule::Bitangent).is_err());
    }

    #[test]
    fn each_ruling_splits_n_minus_one_ways() {
        for n in 2..=7 {
            let c = ruling_line_pairs(&lat(n));
            assert!(c.values().all(|&v| v == n - 1), "n={n}");
        }
    }

    #[test]
    fn line_ruling_bounds() {
        for n in 2..=6 {
            let p = lat(n);
            let lines = enumerate_lines(&p);
            let rulings = enumerate_rulings(&p);
            let roots = enumerate_roots(&p);
            for r in &rulings {
                let vals: Vec<i64> = lines.iter().map(|l| l.dot(r)).collect();
                if n <= 5 {
                    assert!(vals.iter().all(|&v| (0..=1).contains(&v)));
                } else {
                    assert_eq!(vals.iter().filter(|&&v| v == 2).count(), 1);
                    let l = lines.iter().find(|l| l.dot(r) == 2).unwrap();
                    assert_eq!(*l, -p.canonical_class() - *r);
                }
                assert!(roots.iter().all(|d| d.dot(r).abs() <= 1));
                if n <= 4 {
                    assert!(rulings.iter().filter(|s| *s != r).all(|s| s.dot(r) == 1));
                }
            }
        }
    }
}
