//! Acceptance criteria, one PASS/FAIL line each. Tolerances are exact: every
//! comparison is an integer or multiset equality. Time limits are stated per
//! criterion where one applies.
//!
//! Exits non-zero on any failure not listed in `KNOWN_FAILURES`; with
//! `ACCEPTANCE_STRICT=1` every failure is fatal.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use enlattice::branching::{decompose_fixed_line, degeneration_counts, small_n_checks, DegenerationCase};
use enlattice::census::{enumerate_lines, enumerate_roots, enumerate_rulings};
use enlattice::liealg::{LieAlgebra, WeightModule};
use enlattice::rootsys::{RootSystem, DEFAULT_ORBIT_CAP};
use enlattice::verify::{algebra_checks, run_suite, AlgebraCheck, Budget, IdentityRecord, Suite};
use enlattice::PicardLattice;

/// Criteria that fail for a documented mathematical reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    11,
    "on X_2 the Weyl group is that of A_1, generated by the reflection in L1 - L2; \
     it swaps L1 and L2 and fixes H - L1 - L2, so the three lines form orbits of sizes 2 and 1",
)];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn lattice(n: usize) -> PicardLattice {
    PicardLattice::new(n).expect("n ≤ 8")
}

fn budget() -> Budget {
    Budget { samples: 100_000, ..Budget::default() }
}

/// All records of a suite verified, ignoring errata: the criteria are
/// checked as stated.
fn suite_ok(suite: Suite, n_max: usize) -> Outcome {
    match run_suite(suite, n_max, budget()) {
        Ok(records) => records_ok(&records),
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn records_ok(records: &[IdentityRecord]) -> Outcome {
    let bad: Vec<String> =
        records.iter().filter(|r| !r.verified).map(|r| format!("{}: {}", r.id, r.counterexample.as_deref().unwrap_or("?"))).collect();
    let cases: usize = records.iter().map(|r| r.cases).sum();
    if bad.is_empty() {
        outcome(true, format!("{} identities over {cases} cases", records.len()))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn c1() -> Outcome {
    let lines: Vec<usize> = (1..=8).map(|n| enumerate_lines(&lattice(n)).len()).collect();
    let rulings: Vec<usize> = (1..=7).map(|n| enumerate_rulings(&lattice(n)).len()).collect();
    let ok = lines == [1, 3, 6, 10, 16, 27, 56, 240] && rulings == [1, 2, 3, 5, 10, 27, 126];
    outcome(ok, format!("lines {lines:?}, rulings {rulings:?}"))
}

fn c2() -> Outcome {
    let dims: Vec<usize> = (1..=8).map(|n| n + enumerate_roots(&lattice(n)).len()).collect();
    let built: Vec<usize> = (2..=8).map(|n| LieAlgebra::new(&lattice(n)).map(|a| a.dim()).unwrap_or(0)).collect();
    let a7 = LieAlgebra::new(&lattice(7)).expect("E7");
    let a8 = LieAlgebra::new(&lattice(8)).expect("E8");
    let r7 = WeightModule::rulings(&a7).map(|m| m.dim()).unwrap_or(0);
    let l8 = WeightModule::lines(&a8).map(|m| m.dim()).unwrap_or(0);
    let ok = dims == [1, 4, 11, 24, 45, 78, 133, 248] && built == dims[1..] && r7 == 133 && l8 == 248;
    outcome(ok, format!("dim E_n {dims:?}, dim R_7 = {r7}, dim L_8 = {l8}"))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let mut records = Vec::new();
    for n in 2..=6 {
        match algebra_checks(n, AlgebraCheck::Jacobi, budget()) {
            Ok(r) => records.extend(r),
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
    }
    let exhaustive = start.elapsed();
    for n in 7..=8 {
        match algebra_checks(n, AlgebraCheck::Jacobi, budget()) {
            Ok(r) => records.extend(r),
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
    }
    let sampled_enough = ["algebra/jacobi/n7", "algebra/jacobi/n8", "algebra/e8-via-d8/jacobi"]
        .iter()
        .all(|id| records.iter().any(|r| r.id == *id && r.lhs_size >= 100_000));
    let roots = records.iter().any(|r| r.id == "algebra/e8-via-d8/roots" && r.verified && r.lhs_size == 240);
    let mut o = records_ok(&records);
    o.ok &= sampled_enough && roots && exhaustive < Duration::from_secs(60);
    o.detail = format!("{}; exhaustive n ≤ 6 in {:.2} s (limit 60 s)", o.detail, exhaustive.as_secs_f64());
    o
}

fn c4() -> Outcome {
    let mut o = suite_ok(Suite::FixedLine, 8);
    let blocks = |n: usize, adjoint: bool| {
        let p = lattice(n);
        let l = p.exceptional(n);
        decompose_fixed_line(&p, &l).map(|r| if adjoint { r.adjoint.block_sizes() } else { r.lines.block_sizes() }).unwrap_or_default()
    };
    let (b6, b7, b8) = (blocks(6, false), blocks(7, false), blocks(8, true));
    o.ok &= b6 == [16, 10, 1] && b7 == [27, 27, 1, 1] && b8 == [133, 3, 112];
    o.detail = format!("{}; 27 = {b6:?}, 56 = {b7:?}, 248 = {b8:?}", o.detail);
    o
}

fn c10() -> Outcome {
    let mut o = suite_ok(Suite::Degenerations, 7);
    let shape = |case: DegenerationCase| degeneration_counts(case).map(|r| r.counts[0].blocks.clone()).unwrap_or_default();
    let x5 = degeneration_counts(DegenerationCase::X5TwoQuadrics).ok();
    let r5 = x5.as_ref().map(|r| r.counts[1].blocks.clone()).unwrap_or_default();
    let (l5, t6, q6, l7) = (
        shape(DegenerationCase::X5TwoQuadrics),
        shape(DegenerationCase::X6ThreePlanes),
        shape(DegenerationCase::X6PlaneQuadric),
        shape(DegenerationCase::X7DoublePlane),
    );
    o.ok &= l5 == [8, 8] && r5 == [6, 4] && t6 == [9, 9, 9] && q6 == [15, 12] && l7 == [28, 28];
    o.detail = format!("{}; 16 = {l5:?}, 10 = {r5:?}, 27 = {t6:?}, 27 = {q6:?}, 56 = {l7:?}", o.detail);
    o
}

fn c11() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 1..=8 {
        let p = lattice(n);
        let lines = enumerate_lines(&p);
        let orbit = RootSystem::build(&p).and_then(|s| s.weyl_orbit(&lines[0], DEFAULT_ORBIT_CAP)).map(|o| o.len()).unwrap_or(0);
        if orbit != lines.len() {
            ok = false;
            notes.push(format!("n={n}: orbit of {} has {orbit} of {} lines", lines[0].pretty(), lines.len()));
        }
    }
    let mut orders = Vec::new();
    for n in 4..=6 {
        let start = Instant::now();
        let order = RootSystem::build(&lattice(n)).and_then(|s| s.weyl_group_order()).unwrap_or(0);
        let t = start.elapsed();
        if n == 6 && t >= Duration::from_secs(120) {
            ok = false;
            notes.push(format!("|W(E6)| took {:.1} s (limit 120 s)", t.as_secs_f64()));
        }
        orders.push(order);
    }
    ok &= orders == [120, 1920, 51840];
    notes.insert(0, format!("|W| = {orders:?}"));
    outcome(ok, notes.join("; "))
}

fn c12() -> Outcome {
    let mut o = suite_ok(Suite::SmallN, 4);
    let sizes = small_n_checks().map(|r| {
        let get = |id: &str| r.get(id).map(|d| d.block_sizes()).unwrap_or_default();
        (get("small/x3-w3"), get("small/x3-w3-prime"), get("small/x4-end0"), get("small/x2-lines"))
    });
    match sizes {
        Ok((w3, w3p, end0, x2)) => {
            o.ok &= w3 == [6] && w3p == [6] && end0 == [4, 20] && x2 == [2, 1];
            o.detail = format!("{}; X3 {w3:?}/{w3p:?}, X4 End0 {end0:?}, X2 {x2:?}", o.detail);
        }
        Err(e) => o = outcome(false, e.to_string()),
    }
    o
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").map_or(false, |v| v == "1");
    let criteria: Vec<(usize, &str, Option<Duration>, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "census tables", Some(Duration::from_secs(5)), Box::new(c1)),
        (2, "dimension accounting", None, Box::new(c2)),
        (3, "Jacobi identity (exhaustive n ≤ 6, sampled n = 7, 8, E8 via D8)", None, Box::new(c3)),
        (4, "fixed-line decompositions, all lines, 2 ≤ n ≤ 8", None, Box::new(c4)),
        (5, "fixed-ruling reductions, all rulings, 2 ≤ n ≤ 8", None, Box::new(|| suite_ok(Suite::FixedRuling, 8))),
        (6, "section reductions, 3 ≤ n ≤ 8", None, Box::new(|| suite_ok(Suite::Sections, 8))),
        (7, "invariant forms q5, c6, q7, f7", None, Box::new(|| suite_ok(Suite::Forms, 7))),
        (8, "bitangent, triple-point and dual-ruling pairings", None, Box::new(|| suite_ok(Suite::Pairings, 8))),
        (9, "d-gons for d = 2, 3, 4", None, Box::new(|| suite_ok(Suite::Dgons, 7))),
        (10, "degeneration counts and support rules", None, Box::new(c10)),
        (11, "Weyl orbits of lines and Weyl group orders", None, Box::new(c11)),
        (12, "small-n coincidences", None, Box::new(c12)),
    ];
    let mut fatal = 0;
    for (i, name, limit, f) in criteria {
        let start = Instant::now();
        let mut o = f();
        let t = start.elapsed();
        if let Some(l) = limit {
            if t >= l {
                o.ok = false;
                o.detail = format!("{}; over the {} s limit", o.detail, l.as_secs());
            }
        }
        let tag = if o.ok { "PASS" } else { "FAIL" };
        let limit_note = limit.map(|l| format!(", limit {} s", l.as_secs())).unwrap_or_default();
        println!("{tag} {i:>2} {name} [exact{limit_note}] ({:.2} s): {}", t.as_secs_f64(), o.detail);
        if !o.ok {
            match KNOWN_FAILURES.iter().find(|(k, _)| *k == i) {
                Some((_, why)) => {
                    println!("        known failure: {why}");
                    if strict {
                        fatal += 1;
                    }
                }
                None => fatal += 1,
            }
        }
    }
    if fatal > 0 {
        println!("{fatal} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
