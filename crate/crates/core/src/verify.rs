//! The verification suites: every identity, count and sum rule, collected
//! into flat records with a deterministic order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::branching::{
    bracket_closure, decompose_fixed_line, decompose_fixed_ruling, decompose_parity_d8, decompose_section, degeneration_counts,
    e7_centralizer, expected_a_type, expected_d_type, small_n_checks, subalgebra_type, Decomposition, DegenerationCase,
    RulingSets, SectionKind,
};
use crate::census::{enumerate_lines, enumerate_roots, enumerate_rulings, find_dgons, involution_pairs, InvolutionRule, DEFAULT_SEARCH_BUDGET};
use crate::error::{Error, Result};
use crate::liealg::{E8ViaD8, InvariantForm, LieAlgebra, WeightModule};
use crate::linalg::determinant;
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::{expected_en_type, RootSystem, DEFAULT_ORBIT_CAP};

pub const VERSION: &str = concat!("enlattice ", env!("CARGO_PKG_VERSION"));

const SEED: u64 = 0x5eed_e8;

/// Search and sampling limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Node budget for d-gon searches.
    pub dgon: usize,
    /// Sampled triples for Jacobi checks on `n = 7, 8`.
    pub samples: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { dgon: DEFAULT_SEARCH_BUDGET, samples: 100_000 }
    }
}

impl Budget {
    /// Parses `N` (both limits) or `dgon=N,samples=M`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse { field: "ENLATTICE_BUDGET".into(), reason: reason.into() };
        let num = |v: &str| v.trim().parse::<usize>().map_err(|e| bad(&e.to_string()));
        if !s.contains('=') {
            let v = num(s)?;
            return Ok(Self { dgon: v, samples: v });
        }
        let mut b = Self::default();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k.trim() {
                "dgon" => b.dgon = num(v)?,
                "samples" => b.samples = num(v)?,
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        Ok(b)
    }

    /// `ENLATTICE_BUDGET` if set, else the defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var("ENLATTICE_BUDGET") {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// One checked identity, possibly aggregated over many cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    /// What is being asserted.
    #[serde(rename = "paper_ref")]
    pub reference: String,
    pub scope: String,
    pub cases: usize,
    pub lhs_size: usize,
    pub rhs_size: usize,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Set when the statement as written is known to be wrong; the record
    /// then does not count as a failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erratum: Option<String>,
}

impl IdentityRecord {
    pub fn is_failure(&self) -> bool {
        !self.verified && self.erratum.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub version: String,
    pub input: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    pub records: Vec<IdentityRecord>,
}

impl Report {
    pub fn new(suite: impl Into<String>, input: BTreeMap<String, String>, records: Vec<IdentityRecord>) -> Self {
        Self { suite: suite.into(), version: VERSION.into(), input, timing_ms: None, records }
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityRecord> {
        self.records.iter().filter(|r| r.is_failure())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn get(&self, id: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Census,
    Dimensions,
    Algebra,
    Forms,
    Pairings,
    Dgons,
    Weyl,
    FixedLine,
    FixedRuling,
    Sections,
    Parity,
    Closure,
    Degenerations,
    SmallN,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Self::Census,
        Self::Dimensions,
        Self::Algebra,
        Self::Forms,
        Self::Pairings,
        Self::Dgons,
        Self::Weyl,
        Self::FixedLine,
        Self::FixedRuling,
        Self::Sections,
        Self::Parity,
        Self::Closure,
        Self::Degenerations,
        Self::SmallN,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Census => "census",
            Self::Dimensions => "dimensions",
            Self::Algebra => "algebra",
            Self::Forms => "forms",
            Self::Pairings => "pairings",
            Self::Dgons => "dgons",
            Self::Weyl => "weyl",
            Self::FixedLine => "fixed-line",
            Self::FixedRuling => "fixed-ruling",
            Self::Sections => "sections",
            Self::Parity => "parity",
            Self::Closure => "closure",
            Self::Degenerations => "degenerations",
            Self::SmallN => "small-n",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse { field: "suite".into(), reason: format!("unknown suite {s:?}") })
    }
}

/// Records keyed by id, aggregated over cases in first-seen order.
#[derive(Default)]
struct Collector {
    records: Vec<IdentityRecord>,
    index: HashMap<String, usize>,
}

impl Collector {
    #[allow(clippy::too_many_arguments)]
    fn check(&mut self, id: &str, reference: &str, scope: &str, lhs: usize, rhs: usize, ok: bool, why: impl FnOnce() -> String) {
        match self.index.get(id) {
            Some(&i) => {
                let r = &mut self.records[i];
                r.cases += 1;
                if !ok && r.verified {
                    r.verified = false;
                    r.counterexample = Some(why());
                }
            }
            None => {
                self.index.insert(id.into(), self.records.len());
                self.records.push(IdentityRecord {
                    id: id.into(),
                    reference: reference.into(),
                    scope: scope.into(),
                    cases: 1,
                    lhs_size: lhs,
                    rhs_size: rhs,
                    verified: ok,
                    counterexample: if ok { None } else { Some(why()) },
                    erratum: None,
                });
            }
        }
    }

    fn count(&mut self, id: &str, reference: &str, got: usize, expected: usize) {
        self.check(id, reference, "exhaustive", got, expected, got == expected, || format!("found {got}, expected {expected}"));
    }

    fn decomposition(&mut self, d: &Decomposition, scope: &str, context: impl fmt::Display) {
        self.check(&d.id, &d.statement, scope, d.lhs_size(), d.rhs_size(), d.verified, || match &d.counterexample {
            Some(c) => format!("{context}: class {} has multiplicity {} on the left, {} on the right", c.class, c.lhs, c.rhs),
            None => format!("{context}: mismatch"),
        });
    }

    fn erratum(&mut self, id: &str, note: &str) {
        if let Some(&i) = self.index.get(id) {
            if !self.records[i].verified {
                self.records[i].erratum = Some(note.into());
            }
        }
    }
}

const LINES: [usize; 8] = [1, 3, 6, 10, 16, 27, 56, 240];
const RULINGS: [usize; 8] = [1, 2, 3, 5, 10, 27, 126, 2160];
const DIMS: [usize; 8] = [1, 4, 11, 24, 45, 78, 133, 248];

pub fn run_suite(suite: Suite, n_max: usize, budget: Budget) -> Result<Vec<IdentityRecord>> {
    if !(1..=8).contains(&n_max) {
        return Err(Error::Unsupported { n: n_max, lo: 1, hi: 8 });
    }
    let mut c = Collector::default();
    match suite {
        Suite::Census => census(&mut c, n_max),
        Suite::Dimensions => dimensions(&mut c, n_max)?,
        Suite::Algebra => algebra(&mut c, n_max, budget)?,
        Suite::Forms => forms(&mut c, n_max, budget)?,
        Suite::Pairings => pairings(&mut c, n_max)?,
        Suite::Dgons => dgons(&mut c, n_max, budget)?,
        Suite::Weyl => weyl(&mut c, n_max)?,
        Suite::FixedLine => fixed_line(&mut c, n_max)?,
        Suite::FixedRuling => fixed_ruling(&mut c, n_max)?,
        Suite::Sections => sections(&mut c, n_max)?,
        Suite::Parity => parity(&mut c, n_max)?,
        Suite::Closure => closure(&mut c, n_max)?,
        Suite::Degenerations => degenerations(&mut c, n_max)?,
        Suite::SmallN => small(&mut c, n_max)?,
    }
    Ok(c.records)
}

/// Runs `suites` in parallel and concatenates their records in the given order.
pub fn run_suites(suites: &[Suite], n_max: usize, budget: Budget) -> Result<Vec<IdentityRecord>> {
    let results: Vec<Result<Vec<IdentityRecord>>> = std::thread::scope(|s| {
        let handles: Vec<_> = suites.iter().map(|&suite| s.spawn(move || run_suite(suite, n_max, budget))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("suite panicked".into())))).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

pub fn run_all(n_max: usize, budget: Budget) -> Result<Report> {
    let records = run_suites(&Suite::ALL, n_max, budget)?;
    let mut input = BTreeMap::new();
    input.insert("suite".into(), "all".into());
    input.insert("n_max".into(), n_max.to_string());
    input.insert("dgon_budget".into(), budget.dgon.to_string());
    input.insert("samples".into(), budget.samples.to_string());
    Ok(Report::new("all", input, records))
}

fn lattice(n: usize) -> Result<PicardLattice> {
    PicardLattice::new(n)
}

fn census(c: &mut Collector, n_max: usize) {
    for n in 1..=n_max {
        let p = PicardLattice::new(n).expect("1..=8");
        c.count(&format!("census/lines/n{n}"), "number of lines on X_n", enumerate_lines(&p).len(), LINES[n - 1]);
        c.count(&format!("census/rulings/n{n}"), "number of rulings on X_n", enumerate_rulings(&p).len(), RULINGS[n - 1]);
    }
}

fn dimensions(c: &mut Collector, n_max: usize) -> Result<()> {
    for n in 1..=n_max {
        let p = lattice(n)?;
        let roots = enumerate_roots(&p).len();
        c.count(&format!("dimensions/en/n{n}"), "dim E_n = n + #roots", n + roots, DIMS[n - 1]);
        if n >= 2 {
            let alg = LieAlgebra::new(&p)?;
            c.count(&format!("dimensions/algebra/n{n}"), "dimension of the constructed algebra", alg.dim(), DIMS[n - 1]);
            let t = RootSystem::build(&p)?.cartan_type()?;
            let ok = t == expected_en_type(n);
            c.check(&format!("dimensions/type/n{n}"), "root system of X_n has type E_n", "exhaustive", roots, roots, ok, || format!("type {t}"));
        }
    }
    if n_max >= 7 {
        let p = lattice(7)?;
        let alg = LieAlgebra::new(&p)?;
        c.count("dimensions/r7", "dim R_7 = 133", WeightModule::rulings(&alg)?.dim(), 133);
    }
    if n_max >= 8 {
        let p = lattice(8)?;
        let alg = LieAlgebra::new(&p)?;
        c.count("dimensions/l8", "dim L_8 = 248", WeightModule::lines(&alg)?.dim(), 248);
    }
    Ok(())
}

/// The checks behind the `algebra` command, for one `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraCheck {
    Jacobi,
    ModuleAxiom,
    Forms,
}

pub fn algebra_checks(n: usize, check: AlgebraCheck, budget: Budget) -> Result<Vec<IdentityRecord>> {
    if !(2..=8).contains(&n) {
        return Err(Error::Unsupported { n, lo: 2, hi: 8 });
    }
    let mut c = Collector::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    match check {
        AlgebraCheck::Jacobi => jacobi(&mut c, n, budget, &mut rng)?,
        AlgebraCheck::ModuleAxiom => module_axiom(&mut c, n, budget, &mut rng)?,
        AlgebraCheck::Forms => forms_at(&mut c, n, budget, &mut rng)?,
    }
    Ok(c.records)
}

fn algebra(c: &mut Collector, n_max: usize, budget: Budget) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 2..=n_max {
        jacobi(c, n, budget, &mut rng)?;
        module_axiom(c, n, budget, &mut rng)?;
    }
    Ok(())
}

fn jacobi(c: &mut Collector, n: usize, budget: Budget, rng: &mut ChaCha8Rng) -> Result<()> {
    let p = lattice(n)?;
    let alg = LieAlgebra::new(&p)?;
    let id = format!("algebra/jacobi/n{n}");
    let reference = "Jacobi identity for the root-space bracket";
    let basis = alg.basis();
    if n <= 6 {
        let roots: Vec<_> = alg.roots().iter().map(|d| alg.root_vector(d)).collect::<Result<_>>()?;
        let m = roots.len();
        let mut bad = None;
        let mut count = 0;
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    count += 1;
                    if bad.is_none() && !alg.jacobiator(&roots[i], &roots[j], &roots[k])?.is_zero() {
                        bad = Some((alg.roots()[i], alg.roots()[j], alg.roots()[k]));
                    }
                }
            }
        }
        c.check(&id, reference, "exhaustive over root triples", count, count, bad.is_none(), || {
            let (a, b, d) = bad.expect("failure");
            format!("x_{a}, x_{b}, x_{d}")
        });
        let mut anti = true;
        for x in &basis {
            for y in &basis {
                let mut s = alg.bracket(x, y)?;
                s.add_scaled(&alg.bracket(y, x)?, 1);
                anti &= s.is_zero();
            }
        }
        c.check(&format!("algebra/antisymmetry/n{n}"), "[x,y] = -[y,x]", "exhaustive over basis pairs", basis.len(), basis.len(), anti, || "asymmetric bracket".into());
    } else {
        let mut bad = None;
        for _ in 0..budget.samples {
            let (i, j, k) = (rng.gen_range(0..basis.len()), rng.gen_range(0..basis.len()), rng.gen_range(0..basis.len()));
            if !alg.jacobiator(&basis[i], &basis[j], &basis[k])?.is_zero() {
                bad = Some((i, j, k));
                break;
            }
        }
        c.check(&id, reference, &format!("sampled {} basis triples", budget.samples), budget.samples, budget.samples, bad.is_none(), || {
            format!("basis triple {:?}", bad.expect("failure"))
        });
    }

    if n == 8 {
        e8_via_d8(c, &alg, budget, rng)?;
    }
    Ok(())
}

fn module_axiom(c: &mut Collector, n: usize, budget: Budget, rng: &mut ChaCha8Rng) -> Result<()> {
    let alg = LieAlgebra::new(&lattice(n)?)?;
    let basis = alg.basis();
    let mut modules = vec![WeightModule::lines(&alg)?];
    if n <= 7 {
        modules.push(WeightModule::rulings(&alg)?);
    }
    for m in &modules {
        let id = format!("algebra/module/{}", m.name());
        let reference = "module axiom [x,y]·v = x·(y·v) - y·(x·v)";
        let vs = m.basis();
        let mut bad = None;
        let scope;
        if n <= 6 {
            scope = "exhaustive over basis".to_string();
            'outer: for (i, x) in basis.iter().enumerate() {
                for (j, y) in basis.iter().enumerate().skip(i + 1) {
                    for (k, v) in vs.iter().enumerate() {
                        if !m.module_defect(&alg, x, y, v)?.is_zero() {
                            bad = Some((i, j, k));
                            break 'outer;
                        }
                    }
                }
            }
        } else {
            let samples = (budget.samples / 10).max(1);
            scope = format!("sampled {samples} triples");
            for _ in 0..samples {
                let (i, j, k) = (rng.gen_range(0..basis.len()), rng.gen_range(0..basis.len()), rng.gen_range(0..vs.len()));
                if !m.module_defect(&alg, &basis[i], &basis[j], &vs[k])?.is_zero() {
                    bad = Some((i, j, k));
                    break;
                }
            }
        }
        c.check(&id, reference, &scope, m.dim(), m.dim(), bad.is_none(), || format!("basis (x, y, v) = {:?}", bad.expect("failure")));
    }
    Ok(())
}

fn e8_via_d8(c: &mut Collector, alg: &LieAlgebra, budget: Budget, rng: &mut ChaCha8Rng) -> Result<()> {
    let p = alg.lattice();
    let e8 = E8ViaD8::new(alg)?;
    let split = e8.basis();
    let mut bad = None;
    for _ in 0..budget.samples {
        let (i, j, k) = (rng.gen_range(0..split.len()), rng.gen_range(0..split.len()), rng.gen_range(0..split.len()));
        if !e8.jacobiator(&split[i], &split[j], &split[k])?.is_zero() {
            bad = Some((i, j, k));
            break;
        }
    }
    c.check(
        "algebra/e8-via-d8/jacobi",
        "Jacobi identity for LD_8 + S⁺⊗O(K) with the spinor bracket",
        &format!("sampled {} basis triples", budget.samples),
        budget.samples,
        budget.samples,
        bad.is_none(),
        || format!("basis triple {:?}", bad.expect("failure")),
    );
    let mut got = e8.root_set();
    got.sort();
    let want = enumerate_roots(p);
    c.check("algebra/e8-via-d8/roots", "root set of LD_8 + S⁺⊗O(K) is all 240 roots", "exhaustive", got.len(), want.len(), got == want, || {
        "root sets differ".into()
    });
    c.check("algebra/e8-via-d8/cartan", "Cartan acts on every basis vector by its weight", "exhaustive", e8.dim(), 248, e8.cartan_acts_by_weights(), || {
        "Cartan eigenvalue mismatch".into()
    });
    Ok(())
}

fn is_matching(g: &[Vec<i64>]) -> bool {
    g.iter().all(|r| r.iter().filter(|&&x| x != 0).count() == 1 && r.iter().all(|&x| x.abs() <= 1))
}

/// Checks `Σ F(…, x_D v, …) = 0` on tuples of total weight `target - D`.
/// All such tuples when `samples` is `None`, otherwise that many random ones.
fn invariance(c: &mut Collector, id: &str, alg: &LieAlgebra, m: &WeightModule, f: &InvariantForm, samples: Option<(usize, &mut ChaCha8Rng)>) {
    let w = m.weights();
    let roots = alg.roots();
    let arity = f.arity();
    // Completes `head` to a tuple of the right weight and returns its defect.
    let defect = |j: usize, head: &[usize]| -> Option<(Vec<usize>, i64)> {
        let rest = head.iter().fold(f.target() - roots[j], |a, &i| a - w[i]);
        m.index_of(&rest).map(|last| {
            let mut t = head.to_vec();
            t.push(last);
            let d = f.invariance_defect(alg, m, j, &t);
            (t, d)
        })
    };
    let mut bad: Option<(usize, Vec<usize>)> = None;
    let mut checked = 0;
    let scope = match samples {
        None => {
            let total = w.len().pow(arity as u32 - 1);
            'outer: for j in 0..roots.len() {
                for code in 0..total {
                    let head: Vec<usize> = (0..arity - 1).map(|s| code / w.len().pow(s as u32) % w.len()).collect();
                    if let Some((t, d)) = defect(j, &head) {
                        checked += 1;
                        if d != 0 {
                            bad = Some((j, t));
                            break 'outer;
                        }
                    }
                }
            }
            "exhaustive".to_string()
        }
        Some((count, rng)) => {
            let mut tries = 0;
            while checked < count && tries < count * 1000 {
                tries += 1;
                let j = rng.gen_range(0..roots.len());
                let head: Vec<usize> = (0..arity - 1).map(|_| rng.gen_range(0..w.len())).collect();
                if let Some((t, d)) = defect(j, &head) {
                    checked += 1;
                    if d != 0 {
                        bad = Some((j, t));
                        break;
                    }
                }
            }
            format!("sampled {count} weight-compatible tuples")
        }
    };
    c.check(id, &format!("invariance of {} under every root vector", f.name()), &scope, checked, checked, bad.is_none(), || {
        let (j, t) = bad.clone().expect("failure");
        format!("root {} on weight indices {t:?}", roots[j])
    });
}

fn forms(c: &mut Collector, n_max: usize, budget: Budget) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for n in 5..=n_max.min(7) {
        forms_at(c, n, budget, &mut rng)?;
    }
    Ok(())
}

/// `q₅`, `c₆`, or `q₇` and `f₇`; nothing for other `n`.
fn forms_at(c: &mut Collector, n: usize, budget: Budget, rng: &mut ChaCha8Rng) -> Result<()> {
    if n == 5 {
        let alg = LieAlgebra::new(&lattice(5)?)?;
        let m = WeightModule::rulings(&alg)?;
        let q = InvariantForm::q5(&alg)?;
        let g = q.gram(m.dim());
        let det = determinant(&g);
        let ok = is_matching(&g) && det.abs() == 1 && q.is_symmetric_with_sign(1);
        c.check("forms/q5/gram", "q_5 on R_5 is a symmetric perfect matching of unit determinant", "exhaustive", m.dim(), q.entries().len(), ok, || {
            format!("det {det}")
        });
        invariance(c, "forms/q5/invariance", &alg, &m, &q, None);
    }
    if n == 6 {
        let p = lattice(6)?;
        let alg = LieAlgebra::new(&p)?;
        let m = WeightModule::lines(&alg)?;
        let f = InvariantForm::c6(&alg)?;
        let sets = f.support_sets();
        let w = m.weights();
        let triangles = sets.iter().all(|s| w[s[0]].dot(&w[s[1]]) == 1 && w[s[1]].dot(&w[s[2]]) == 1 && w[s[0]].dot(&w[s[2]]) == 1);
        let census_triangles = find_dgons(&p, 3, DEFAULT_SEARCH_BUDGET)?.len();
        c.check(
            "forms/c6/support",
            "c_6 is supported on the 45 triangles of lines",
            "exhaustive",
            sets.len(),
            census_triangles,
            triangles && sets.len() == 45 && census_triangles == 45 && f.is_symmetric_with_sign(1),
            || format!("{} support sets, {census_triangles} triangles", sets.len()),
        );
        invariance(c, "forms/c6/invariance", &alg, &m, &f, None);
    }
    if n == 7 {
        let p = lattice(7)?;
        let alg = LieAlgebra::new(&p)?;
        let m = WeightModule::lines(&alg)?;
        let q = InvariantForm::q7(&alg)?;
        let g = q.gram(m.dim());
        let det = determinant(&g);
        let ok = is_matching(&g) && det == 1 && q.is_symmetric_with_sign(-1);
        c.check("forms/q7/gram", "q_7 on L_7 is an antisymmetric perfect matching l ↔ -K-l of unit determinant", "exhaustive", m.dim(), q.entries().len(), ok, || {
            format!("det {det}")
        });
        invariance(c, "forms/q7/invariance", &alg, &m, &q, None);

        let f = InvariantForm::f7(&alg)?;
        let w = m.weights();
        let k = p.canonical_class();
        let (mut distinct, mut two_pairs, mut repeated, mut other) = (0, 0, 0, 0);
        let mut values_ok = true;
        for s in f.support_sets() {
            let v = f.value(&s).abs();
            let l: Vec<DivisorClass> = s.iter().map(|&i| w[i]).collect();
            let all_distinct = s.windows(2).all(|x| x[0] != x[1]);
            let meet_once = (0..4).all(|a| (a + 1..4).all(|b| l[a].dot(&l[b]) == 1));
            let pairs = |a: usize, b: usize, x: usize, y: usize| l[a] + l[b] == -k && l[x] + l[y] == -k;
            if all_distinct && meet_once {
                distinct += 1;
                values_ok &= v == 2;
            } else if all_distinct && (pairs(0, 1, 2, 3) || pairs(0, 2, 1, 3) || pairs(0, 3, 1, 2)) {
                two_pairs += 1;
                values_ok &= v == 1;
            } else if s[0] == s[1] && s[2] == s[3] && s[1] != s[2] && l[0] + l[2] == -k {
                repeated += 1;
                values_ok &= v == 2;
            } else {
                other += 1;
            }
        }
        let total = distinct + two_pairs + repeated + other;
        c.check(
            "forms/f7/support",
            "f_7 support: four pairwise meeting lines (value ±2), two bitangent pairs (±1), or a repeated pair {l,l,-K-l,-K-l} (±2)",
            "exhaustive",
            total,
            630 + 378 + 28,
            other == 0 && values_ok && distinct == 630 && two_pairs == 378 && repeated == 28 && f.is_symmetric_with_sign(1),
            || format!("pairwise meeting {distinct}, two pairs {two_pairs}, repeated {repeated}, other {other}, values ok {values_ok}"),
        );
        let samples = (budget.samples / 10).max(10_000);
        invariance(c, "forms/f7/invariance", &alg, &m, &f, Some((samples, rng)));
    }
    Ok(())
}

fn pairings(c: &mut Collector, n_max: usize) -> Result<()> {
    let cases: [(usize, InvolutionRule, &str, usize, i64, i64); 3] = [
        (5, InvolutionRule::RulingDual, "rulings of X_5 pair as R + R' = -K", 5, 2, 1),
        (7, InvolutionRule::Bitangent, "lines of X_7 pair as l + l' = -K with l·l' = 2", 28, 2, 1),
        (8, InvolutionRule::TriplePoint, "lines of X_8 pair as l + l' = -2K with l·l' = 3", 120, 3, 2),
    ];
    for (n, rule, reference, expected, dot, mult) in cases {
        if n > n_max {
            continue;
        }
        let p = lattice(n)?;
        let k = p.canonical_class();
        let pr = involution_pairs(&p, rule)?;
        let ok = pr.is_perfect_matching() && pr.pairs.iter().all(|(a, b)| a.dot(b) == dot && *a + *b == -mult * k);
        let name = match rule {
            InvolutionRule::RulingDual => "ruling-dual",
            InvolutionRule::Bitangent => "bitangent",
            InvolutionRule::TriplePoint => "triple-point",
        };
        c.check(&format!("pairings/{name}/n{n}"), reference, "exhaustive", pr.pairs.len(), expected, ok && pr.pairs.len() == expected, || {
            format!("{} pairs", pr.pairs.len())
        });
    }
    Ok(())
}

fn dgons(c: &mut Collector, n_max: usize, budget: Budget) -> Result<()> {
    for d in 2..=4usize {
        for n in 1..=n_max.min(9 - d) {
            let p = lattice(n)?;
            let found = find_dgons(&p, d, budget.dgon)?;
            let k = p.canonical_class();
            if n < 9 - d {
                c.count(&format!("dgon/d{d}/n{n}"), "no d-gon of lines when n < 9 - d", found.len(), 0);
            } else {
                let anti = found.iter().all(|g| g.iter().fold(p.zero(), |a, l| a + *l) == -k);
                c.check(&format!("dgon/d{d}/n{n}"), "every d-gon sums to -K when n = 9 - d", "exhaustive", found.len(), found.len(), anti && !found.is_empty(), || {
                    format!("{} d-gons, anticanonical: {anti}", found.len())
                });
            }
        }
    }
    Ok(())
}

fn weyl(c: &mut Collector, n_max: usize) -> Result<()> {
    for n in 1..=n_max {
        let p = lattice(n)?;
        let sys = RootSystem::build(&p)?;
        let lines = enumerate_lines(&p);
        let orbit = sys.weyl_orbit(&lines[0], DEFAULT_ORBIT_CAP)?;
        let id = format!("weyl/line-orbit/n{n}");
        c.check(&id, "lines form a single Weyl orbit", "exhaustive", orbit.len(), lines.len(), orbit == lines, || {
            format!("orbit of {} has {} of {} lines", lines[0], orbit.len(), lines.len())
        });
        if n == 2 {
            c.erratum(&id, "on X_2 the line meeting the other two is fixed by the Weyl group of A_1; lines form orbits of sizes 2 and 1");
        }
    }
    for (n, order) in [(4usize, 120u64), (5, 1920), (6, 51840)] {
        if n <= n_max {
            let got = RootSystem::build(&lattice(n)?)?.weyl_group_order()?;
            c.check(&format!("weyl/order/n{n}"), "order of the Weyl group by generation", "exhaustive", got as usize, order as usize, got == order, || {
                format!("generated {got} elements")
            });
        }
    }
    Ok(())
}

fn fixed_line(c: &mut Collector, n_max: usize) -> Result<()> {
    for n in 2..=n_max {
        let p = lattice(n)?;
        for l in enumerate_lines(&p) {
            let rep = decompose_fixed_line(&p, &l)?;
            c.decomposition(&rep.adjoint, "all lines", format!("L = {l}"));
            c.decomposition(&rep.lines, "all lines", format!("L = {l}"));
        }
    }
    Ok(())
}

fn fixed_ruling(c: &mut Collector, n_max: usize) -> Result<()> {
    for n in 2..=n_max {
        let p = lattice(n)?;
        let half = 1usize << (n - 2);
        for r in enumerate_rulings(&p) {
            let rep = decompose_fixed_ruling(&p, &r)?;
            let ctx = format!("R = {r}");
            let s = &rep.sets;
            c.check(
                &format!("fixed-ruling/sizes/n{n}"),
                "|W| = 2n-2, |S⁺| = |S⁻| = 2^(n-2)",
                "all rulings",
                s.w.len() + s.s_plus.len() + s.s_minus.len(),
                2 * n - 2 + 2 * half,
                rep.sizes_ok(),
                || format!("{ctx}: |W| = {}, |S⁺| = {}, |S⁻| = {}", s.w.len(), s.s_plus.len(), s.s_minus.len()),
            );
            c.check(&format!("fixed-ruling/fibers/n{n}"), "n-1 singular fibers", "all rulings", rep.fiber_pairs, n - 1, rep.fiber_pairs == n - 1, || {
                format!("{ctx}: {} singular fibers", rep.fiber_pairs)
            });
            let cl = &rep.clifford;
            c.check(
                &format!("fixed-ruling/clifford/n{n}"),
                "S·C = 0 ⇒ S - C ∈ S⁻ and T·C = 1 ⇒ T + C ∈ S⁺",
                "all rulings",
                cl.plus_pairs,
                cl.minus_pairs,
                cl.violations.is_empty(),
                || format!("{ctx}: violation {:?}", cl.violations[0]),
            );
            c.check(&format!("fixed-ruling/d-type/n{n}"), "roots with D·R = 0 form D_{n-1}", "all rulings", s.d_roots.len(), s.d_roots.len(), rep.d_type == rep.d_type_expected, || {
                format!("{ctx}: type {} instead of {}", rep.d_type, rep.d_type_expected)
            });
            for d in rep.dualities.iter().chain(&rep.decompositions) {
                c.decomposition(d, "all rulings", &ctx);
            }
        }
    }
    Ok(())
}

fn sections(c: &mut Collector, n_max: usize) -> Result<()> {
    for n in 3..=n_max {
        let p = lattice(n)?;
        let (rulings, scope) = if n <= 7 {
            (enumerate_rulings(&p), "all rulings and sections")
        } else {
            (vec![p.hyperplane() - p.exceptional(1)], "all sections of R = H - L1")
        };
        for r in rulings {
            let sets = RulingSets::new(&p, &r)?;
            for (xs, kind, tag) in [(&sets.s_plus, SectionKind::Line, "s"), (&sets.s_minus, SectionKind::Ruling, "t")] {
                for x in xs {
                    let rep = decompose_section(&p, &r, x, kind)?;
                    let ctx = format!("R = {r}, section {x}");
                    c.check(&format!("section-{tag}/lambda/n{n}"), "Λ has n-1 classes", scope, rep.lambda.len(), n - 1, rep.lambda.len() == n - 1, || {
                        format!("{ctx}: |Λ| = {}", rep.lambda.len())
                    });
                    let det_ref = match kind {
                        SectionKind::Line => "det Λ = -K - 2S + (n-4)R",
                        SectionKind::Ruling => "det Λ = -K - 2T + (n-5)R",
                    };
                    c.check(&format!("section-{tag}/det/n{n}"), det_ref, scope, n - 1, n - 1, rep.det_ok(), || {
                        format!("{ctx}: det {} vs {}", rep.det_actual, rep.det_expected)
                    });
                    c.check(&format!("section-{tag}/a-type/n{n}"), "roots with D·R = D·X = 0 form A_{n-2}", scope, 0, 0, rep.a_type == rep.a_type_expected, || {
                        format!("{ctx}: type {}", rep.a_type)
                    });
                    for d in &rep.decompositions {
                        c.decomposition(d, scope, &ctx);
                    }
                }
            }
        }
    }
    Ok(())
}

fn parity(c: &mut Collector, n_max: usize) -> Result<()> {
    if n_max < 8 {
        return Ok(());
    }
    let p = lattice(8)?;
    let lines: Vec<DivisorClass> = (1..=8).map(|i| p.exceptional(i)).collect();
    let rep = decompose_parity_d8(&p, &lines)?;
    c.count("parity/even-roots", "roots with D·H even", rep.even_roots, 112);
    c.count("parity/s-plus", "lines with l·H even", rep.s_plus, 128);
    c.check("parity/d-type", "even roots form D_8", "exhaustive", rep.even_roots, rep.even_roots, rep.d_type == rep.d_type_expected, || format!("type {}", rep.d_type));
    c.check("parity/spinor-action", "D + l ∈ S⁺ iff D·l = 1 for D even, l ∈ S⁺", "exhaustive", rep.even_roots, rep.s_plus, rep.spinor_action_closed, || {
        "closure fails".into()
    });
    for d in &rep.decompositions {
        c.decomposition(d, "exhaustive", "standard blow-down");
    }
    for (w, id) in [(&rep.w8_corrected, "parity/w8-wedge"), (&rep.w8_as_written, "parity/w8-wedge-as-written")] {
        let d = &w.wedge;
        c.check(id, &w.description, "exhaustive", d.lhs_size(), d.rhs_size(), w.is_matching && d.verified, || match &d.counterexample {
            Some(x) => format!("class {} has multiplicity {} in LD_8, {} in the wedge", x.class, x.lhs, x.rhs),
            None => "pairing is not a matching".into(),
        });
    }
    c.erratum(
        "parity/w8-wedge-as-written",
        "with partners -Lᵢ-K-H the wedge contains classes of square -10; the partners K+H-Lᵢ and twist O(-K-H) are correct",
    );
    let cent = e7_centralizer(&p, &p.exceptional(1), &p.exceptional(2))?;
    c.check("parity/e7-centralizer", "roots orthogonal to L1 - L2 form E_7", "exhaustive", cent.roots.len(), 126, cent.is_e7 && cent.orthogonal, || {
        format!("{} roots of type {}", cent.roots.len(), cent.cartan_type)
    });
    Ok(())
}

fn closure(c: &mut Collector, n_max: usize) -> Result<()> {
    for n in 3..=n_max {
        let p = lattice(n)?;
        let alg = LieAlgebra::new(&p)?;
        let r = p.hyperplane() - p.exceptional(1);
        let sets = RulingSets::new(&p, &r)?;
        let closed = bracket_closure(&alg, &sets.d_roots)?;
        let t = subalgebra_type(&sets.d_roots, n - 1)?;
        c.check(&format!("closure/ld/n{n}"), "LD_{n-1} closes under the bracket and has type D_{n-1}", "R = H - L1", sets.d_roots.len(), sets.d_roots.len(), closed && t == expected_d_type(n - 1), || {
            format!("closed {closed}, type {t}")
        });
        let s = sets.s_plus[0];
        let a: Vec<DivisorClass> = sets.d_roots.iter().copied().filter(|d| d.dot(&s) == 0).collect();
        let closed = bracket_closure(&alg, &a)?;
        let t = subalgebra_type(&a, n - 2)?;
        c.check(&format!("closure/la/n{n}"), "LA_{n-2} closes under the bracket and has type A_{n-2}", "R = H - L1 with one section", a.len(), a.len(), closed && t == expected_a_type(n - 2), || {
            format!("closed {closed}, type {t}")
        });
    }
    Ok(())
}

fn degenerations(c: &mut Collector, n_max: usize) -> Result<()> {
    for case in DegenerationCase::ALL {
        let n = match case {
            DegenerationCase::X5TwoQuadrics => 5,
            DegenerationCase::X6ThreePlanes | DegenerationCase::X6PlaneQuadric => 6,
            DegenerationCase::X7DoublePlane => 7,
        };
        if n > n_max {
            continue;
        }
        let rep = degeneration_counts(case)?;
        let name = case.name();
        for (i, x) in rep.counts.iter().enumerate() {
            c.check(&format!("degeneration/{name}/count{i}"), &x.name, rep.scope, x.total(), x.expected, x.holds(), || format!("blocks {:?}", x.blocks));
        }
        for (i, x) in rep.rep_dims.iter().enumerate() {
            c.check(&format!("degeneration/{name}/dim{i}"), &x.name, rep.scope, x.total(), x.expected, x.holds(), || format!("blocks {:?}", x.blocks));
        }
        for (i, x) in rep.support.iter().enumerate() {
            c.check(&format!("degeneration/{name}/support{i}"), &x.name, rep.scope, x.count, x.expected, x.holds, || format!("{} selected", x.count));
        }
    }
    Ok(())
}

fn small(c: &mut Collector, n_max: usize) -> Result<()> {
    let rep = small_n_checks()?;
    for d in &rep.decompositions {
        let n: usize = d.id.trim_start_matches("small/x").chars().next().and_then(|ch| ch.to_digit(10)).unwrap_or(0) as usize;
        if n <= n_max {
            c.decomposition(d, "exhaustive", "standard basis");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_parsing() {
        assert_eq!(Budget::parse("500").unwrap(), Budget { dgon: 500, samples: 500 });
        let b = Budget::parse("samples=10").unwrap();
        assert_eq!(b.samples, 10);
        assert_eq!(b.dgon, DEFAULT_SEARCH_BUDGET);
        assert!(Budget::parse("depth=3").is_err());
        assert!(Budget::parse("x").is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_run_passes_and_is_stable() {
        let b = Budget { dgon: DEFAULT_SEARCH_BUDGET, samples: 200 };
        let a = run_all(5, b).unwrap();
        for r in &a.records {
            assert!(!r.is_failure(), "{r:?}");
        }
        let weyl2 = a.get("weyl/line-orbit/n2").unwrap();
        assert!(!weyl2.verified && weyl2.erratum.is_some());
        let again = run_all(5, b).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&again).unwrap());
        let back: Report = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn failures_are_aggregated() {
        let mut c = Collector::default();
        c.check("x", "r", "s", 1, 1, true, || unreachable!());
        c.check("x", "r", "s", 1, 1, false, || "second".into());
        c.check("x", "r", "s", 1, 1, false, || "third".into());
        assert_eq!(c.records.len(), 1);
        assert_eq!(c.records[0].cases, 3);
        assert_eq!(c.records[0].counterexample.as_deref(), Some("second"));
        c.erratum("x", "known");
        assert!(!c.records[0].is_failure());
    }
}
