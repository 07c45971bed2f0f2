//! Plain-text tables.

use serde_json::Value;

use enlattice::branching::{Decomposition, DegenerationReport};
use enlattice::graph::Graph;
use enlattice::verify::Report;
use enlattice::DivisorClass;

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn classes(cs: &[DivisorClass]) {
    println!("{:<5} {:<32} class", "#", "coefficients");
    for (i, c) in cs.iter().enumerate() {
        println!("{:<5} {:<32} {}", i, c.to_json(), c.pretty());
    }
}

pub fn matrix(rows: &[Vec<i64>]) {
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>3}")).collect();
        println!("{}", cells.join(""));
    }
}

pub fn fields(v: &Value) {
    if let Value::Object(map) = v {
        for (k, x) in map {
            println!("{k:<12} {x}");
        }
    }
}

pub fn decompositions(ds: &[&Decomposition]) {
    println!("{:<32} {:>5} {:>5}  {:<5} blocks", "identity", "lhs", "rhs", "");
    for d in ds {
        let blocks: Vec<String> = d.components.iter().map(|c| format!("{}:{}", c.label, c.weights.len())).collect();
        println!("{:<32} {:>5} {:>5}  {:<5} {}", d.id, d.lhs_size(), d.rhs_size(), status(d.verified), blocks.join(" + "));
        if let Some(c) = &d.counterexample {
            println!("    counterexample: {} occurs {} times on the left, {} on the right", c.class, c.lhs, c.rhs);
        }
    }
}

pub fn report(r: &Report) {
    println!("{} ({})", r.suite, r.version);
    println!("{:<44} {:>6} {:>7} {:>7}  {:<7} scope", "identity", "cases", "lhs", "rhs", "");
    for x in &r.records {
        let s = match (x.verified, &x.erratum) {
            (true, _) => "ok",
            (false, Some(_)) => "erratum",
            (false, None) => "FAIL",
        };
        println!("{:<44} {:>6} {:>7} {:>7}  {:<7} {}", x.id, x.cases, x.lhs_size, x.rhs_size, s, x.scope);
        if let Some(c) = &x.counterexample {
            println!("    counterexample: {c}");
        }
        if let Some(e) = &x.erratum {
            println!("    erratum: {e}");
        }
    }
    if let Some(t) = r.timing_ms {
        println!("time: {t} ms");
    }
    let failed = r.failures().count();
    println!("{} identities, {} failed", r.records.len(), failed);
}

pub fn degeneration(r: &DegenerationReport) {
    println!("{} [{}]", r.case.name(), r.scope);
    for c in r.counts.iter().chain(&r.rep_dims) {
        let blocks: Vec<String> = c.blocks.iter().map(|b| b.to_string()).collect();
        println!("  {:<5} {} = {} ({})", status(c.holds()), c.expected, blocks.join(" + "), c.name);
    }
    for s in &r.support {
        println!("  {:<5} {} of {} ({})", status(s.holds), s.count, s.expected, s.name);
    }
}

pub fn graph(g: &Graph) {
    println!("{} on X_{}: {} nodes, {} edges", g.kind.name(), g.n, g.nodes.len(), g.edges.len());
    for e in &g.edges {
        println!("{:<32} {:<32} {}", g.nodes[e.source].to_json(), g.nodes[e.target].to_json(), e.weight);
    }
}
