//! `enlattice`: enumeration, branching, verification and export.

mod table;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use enlattice::branching::{
    decompose_fixed_line, decompose_fixed_ruling, decompose_parity_d8, decompose_section, degeneration_counts, e7_centralizer,
    small_n_checks, Decomposition, DegenerationCase, SectionKind,
};
use enlattice::census::{enumerate_classes, ClassQuery};
use enlattice::graph::{Graph, GraphKind};
use enlattice::rootsys::{RootSystem, DEFAULT_ORBIT_CAP};
use enlattice::verify::{algebra_checks, run_suites, AlgebraCheck, Budget, IdentityRecord, Report, Suite};
use enlattice::{DivisorClass, Error, PicardLattice};

#[derive(Parser)]
#[command(name = "enlattice", version, about = "Lines, rulings and roots on del Pezzo surfaces and the E_n algebras they span")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate classes with given D·D, D·K and linear constraints.
    Enum(EnumArgs),
    /// Root system data: Cartan matrix, roots, Weyl orbits.
    Rootsys(RootsysArgs),
    /// Bracket, module and invariant-form checks for one algebra.
    Algebra(AlgebraArgs),
    /// Decompose under the subalgebra fixed by a line, ruling, section or parity.
    Branch(BranchArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Export an incidence graph.
    Export(ExportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lines,
    Rulings,
    Roots,
    Custom,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Required D·D for `--kind custom`.
    #[arg(long, allow_hyphen_values = true)]
    self_int: Option<i64>,
    /// Required D·K for `--kind custom`.
    #[arg(long, allow_hyphen_values = true)]
    k_int: Option<i64>,
    /// `CLASS=V`, requiring D·CLASS = V; repeatable.
    #[arg(long = "dot-with", value_parser = parse_dot_with)]
    dot_with: Vec<(DivisorClass, i64)>,
    /// Bound on the H-coefficient, needed for n ≥ 9.
    #[arg(long)]
    degree_bound: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Show {
    Cartan,
    Roots,
    Simple,
    Orbit,
    Type,
    WeylOrder,
}

#[derive(Args)]
struct RootsysArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "cartan")]
    show: Show,
    /// Seed class for `--show orbit`.
    #[arg(long, value_parser = parse_class)]
    seed: Option<DivisorClass>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Jacobi,
    ModuleAxiom,
    Forms,
}

#[derive(Args)]
struct AlgebraArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    check: Check,
    /// Sampled triples for n = 7, 8; overrides ENLATTICE_BUDGET.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fix {
    Line,
    Ruling,
    Parity,
    A1Pair,
    Degeneration,
    Small,
}

#[derive(Args)]
struct BranchArgs {
    /// Number of blown-up points (ignored for `degeneration` and `small`).
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, value_enum)]
    fix: Fix,
    /// The fixed line (`line`), or the first line (`a1-pair`).
    #[arg(long, value_parser = parse_class)]
    l: Option<DivisorClass>,
    /// The second line for `a1-pair`.
    #[arg(long, value_parser = parse_class)]
    m: Option<DivisorClass>,
    /// The fixed ruling.
    #[arg(long, value_parser = parse_class)]
    r: Option<DivisorClass>,
    /// A section of the ruling: a line (S·S = -1) or a root (T·T = -2).
    #[arg(long, value_parser = parse_class)]
    s: Option<DivisorClass>,
    /// Eight disjoint lines as a JSON array of classes, for `parity`.
    #[arg(long, value_parser = parse_classes)]
    lines: Option<Vec<DivisorClass>>,
    /// Degeneration case for `degeneration`.
    #[arg(long = "case", value_enum)]
    case: Option<Case>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    X5TwoQuadrics,
    X6ThreePlanes,
    X6PlaneQuadric,
    X7DoublePlane,
}

impl From<Case> for DegenerationCase {
    fn from(c: Case) -> Self {
        match c {
            Case::X5TwoQuadrics => DegenerationCase::X5TwoQuadrics,
            Case::X6ThreePlanes => DegenerationCase::X6ThreePlanes,
            Case::X6PlaneQuadric => DegenerationCase::X6PlaneQuadric,
            Case::X7DoublePlane => DegenerationCase::X7DoublePlane,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// `all` or one suite name.
    #[arg(default_value = "all", value_parser = parse_target)]
    target: Target,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone)]
enum Target {
    All,
    One(Suite),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kinds {
    LineIncidence,
    BitangentPairs,
    SingularFibers,
    Dynkin,
}

impl From<Kinds> for GraphKind {
    fn from(k: Kinds) -> Self {
        match k {
            Kinds::LineIncidence => GraphKind::LineIncidence,
            Kinds::BitangentPairs => GraphKind::BitangentPairs,
            Kinds::SingularFibers => GraphKind::SingularFibers,
            Kinds::Dynkin => GraphKind::Dynkin,
        }
    }
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    graph: Kinds,
    /// Ruling for `singular-fibers` (default H - L1).
    #[arg(long, value_parser = parse_class)]
    r: Option<DivisorClass>,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
}

fn parse_class(s: &str) -> Result<DivisorClass, String> {
    DivisorClass::from_json(s).map_err(|e| e.to_string())
}

fn parse_classes(s: &str) -> Result<Vec<DivisorClass>, String> {
    serde_json::from_str(s).map_err(|e| format!("expected a JSON array of classes: {e}"))
}

fn parse_dot_with(s: &str) -> Result<(DivisorClass, i64), String> {
    let (c, v) = s.rsplit_once('=').ok_or("expected CLASS=V")?;
    let v = v.trim().parse::<i64>().map_err(|e| format!("value after '=': {e}"))?;
    Ok((parse_class(c)?, v))
}

fn parse_target(s: &str) -> Result<Target, String> {
    if s == "all" {
        return Ok(Target::All);
    }
    s.parse::<Suite>().map(Target::One).map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected all or one of {}", names.join(", "))
    })
}

/// Failure modes, mapped to exit codes.
enum Failure {
    /// Exit 2: bad input.
    Usage(String),
    /// Exit 1: a check failed or an internal error occurred.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidClass { .. } | Error::Unbounded(_) | Error::RankMismatch(..) | Error::Unsupported { .. } | Error::RankOutOfRange(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enum(a) => run_enum(a),
        Command::Rootsys(a) => run_rootsys(a),
        Command::Algebra(a) => run_algebra(a),
        Command::Branch(a) => run_branch(a),
        Command::Verify(a) => run_verify(a),
        Command::Export(a) => run_export(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn lattice(n: usize) -> Result<PicardLattice, Failure> {
    Ok(PicardLattice::new(n)?)
}

/// Checks that a class given on the command line lives in `Pic(X_n)`.
fn in_lattice(p: &PicardLattice, c: &DivisorClass, flag: &str) -> Result<DivisorClass, Failure> {
    p.check(c).map_err(|e| Failure::Usage(format!("{flag}: {e}")))?;
    Ok(*c)
}

fn required(c: Option<DivisorClass>, flag: &str) -> Result<DivisorClass, Failure> {
    c.ok_or_else(|| Failure::Usage(format!("{flag} is required here")))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn no_dot(f: Format) -> Result<(), Failure> {
    if f == Format::Dot {
        return Err(Failure::Usage("--format dot is only available for export".into()));
    }
    Ok(())
}

fn run_enum(a: EnumArgs) -> Outcome {
    no_dot(a.format)?;
    let p = lattice(a.n)?;
    let mut q = match a.kind {
        Kind::Lines => ClassQuery::lines(),
        Kind::Rulings => ClassQuery::rulings(),
        Kind::Roots => ClassQuery::roots(),
        Kind::Custom => match (a.self_int, a.k_int) {
            (Some(s), Some(k)) => ClassQuery::new(s, k),
            _ => return Err(Failure::Usage("--kind custom needs --self-int and --k-int".into())),
        },
    };
    for (c, v) in &a.dot_with {
        q = q.with_dot(in_lattice(&p, c, "--dot-with")?, *v);
    }
    if let Some(b) = a.degree_bound {
        q = q.with_degree_bound(b);
    }
    let classes = enumerate_classes(&p, &q)?;
    match a.format {
        Format::Json => print_json(&json!({ "n": a.n, "query": q, "count": classes.len(), "classes": classes })),
        _ => table::classes(&classes),
    }
    Ok(true)
}

fn run_rootsys(a: RootsysArgs) -> Outcome {
    no_dot(a.format)?;
    let p = lattice(a.n)?;
    let sys = RootSystem::build(&p)?;
    let value: Value = match a.show {
        Show::Cartan => json!({ "n": a.n, "cartan": sys.cartan_matrix().entries }),
        Show::Roots => json!({ "n": a.n, "count": sys.roots().len(), "roots": sys.roots() }),
        Show::Simple => json!({ "n": a.n, "simple_roots": sys.simple_roots() }),
        Show::Type => json!({ "n": a.n, "type": sys.cartan_type()?.to_string() }),
        Show::WeylOrder => json!({ "n": a.n, "weyl_order": sys.weyl_group_order()? }),
        Show::Orbit => {
            let seed = in_lattice(&p, &required(a.seed, "--seed")?, "--seed")?;
            let orbit = sys.weyl_orbit(&seed, DEFAULT_ORBIT_CAP)?;
            json!({ "n": a.n, "seed": seed, "count": orbit.len(), "orbit": orbit })
        }
    };
    match a.format {
        Format::Json => print_json(&value),
        _ => match a.show {
            Show::Cartan => table::matrix(&sys.cartan_matrix().entries),
            Show::Roots => table::classes(sys.roots()),
            Show::Simple => table::classes(sys.simple_roots()),
            Show::Orbit => table::classes(&serde_json::from_value::<Vec<DivisorClass>>(value["orbit"].clone()).expect("orbit")),
            _ => table::fields(&value),
        },
    }
    Ok(true)
}

fn budget() -> Result<Budget, Failure> {
    Ok(Budget::from_env()?)
}

fn run_algebra(a: AlgebraArgs) -> Outcome {
    no_dot(a.format)?;
    let mut b = budget()?;
    if let Some(s) = a.samples {
        b.samples = s;
    }
    let check = match a.check {
        Check::Jacobi => AlgebraCheck::Jacobi,
        Check::ModuleAxiom => AlgebraCheck::ModuleAxiom,
        Check::Forms => AlgebraCheck::Forms,
    };
    let records = algebra_checks(a.n, check, b)?;
    let mut input = BTreeMap::new();
    input.insert("n".into(), a.n.to_string());
    input.insert("samples".into(), b.samples.to_string());
    let report = Report::new(format!("algebra/{}", check_name(a.check)), input, records);
    emit_report(&report, a.format)
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Jacobi => "jacobi",
        Check::ModuleAxiom => "module-axiom",
        Check::Forms => "forms",
    }
}

fn emit_report(report: &Report, format: Format) -> Outcome {
    match format {
        Format::Json => print_json(report),
        _ => table::report(report),
    }
    for f in report.failures() {
        eprintln!("FAILED {}: {}", f.id, f.counterexample.as_deref().unwrap_or("no counterexample recorded"));
    }
    Ok(report.passed())
}

fn emit_decompositions(value: Value, decs: &[&Decomposition], extra_ok: bool, format: Format) -> Outcome {
    match format {
        Format::Json => print_json(&value),
        _ => table::decompositions(decs),
    }
    for d in decs.iter().filter(|d| !d.verified) {
        if let Some(c) = &d.counterexample {
            eprintln!("FAILED {}: class {} has multiplicity {} on the left, {} on the right", d.id, c.class, c.lhs, c.rhs);
        }
    }
    Ok(extra_ok && decs.iter().all(|d| d.verified))
}

fn run_branch(a: BranchArgs) -> Outcome {
    no_dot(a.format)?;
    match a.fix {
        Fix::Line => {
            let p = lattice(a.n)?;
            let l = in_lattice(&p, &required(a.l, "--l")?, "--l")?;
            let rep = decompose_fixed_line(&p, &l)?;
            emit_decompositions(serde_json::to_value(&rep).expect("report"), &[&rep.adjoint, &rep.lines], true, a.format)
        }
        Fix::Ruling => {
            let p = lattice(a.n)?;
            let r = in_lattice(&p, &required(a.r, "--r")?, "--r")?;
            match a.s {
                None => {
                    let rep = decompose_fixed_ruling(&p, &r)?;
                    let decs: Vec<&Decomposition> = rep.dualities.iter().chain(&rep.decompositions).collect();
                    let ok = rep.sizes_ok() && rep.fiber_pairs == a.n - 1 && rep.clifford.violations.is_empty() && rep.d_type == rep.d_type_expected;
                    emit_decompositions(serde_json::to_value(&rep).expect("report"), &decs, ok, a.format)
                }
                Some(s) => {
                    let s = in_lattice(&p, &s, "--s")?;
                    let kind = match s.self_intersection() {
                        -1 => SectionKind::Line,
                        -2 => SectionKind::Ruling,
                        _ => return Err(Failure::Usage("--s must be a line (S·S = -1) or a root (T·T = -2)".into())),
                    };
                    let rep = decompose_section(&p, &r, &s, kind)?;
                    let decs: Vec<&Decomposition> = rep.decompositions.iter().collect();
                    let ok = rep.det_ok() && rep.lambda.len() == a.n - 1 && rep.a_type == rep.a_type_expected;
                    emit_decompositions(serde_json::to_value(&rep).expect("report"), &decs, ok, a.format)
                }
            }
        }
        Fix::Parity => {
            let p = lattice(8)?;
            let lines = match a.lines {
                Some(ls) => ls.iter().map(|c| in_lattice(&p, c, "--lines")).collect::<Result<Vec<_>, _>>()?,
                None => (1..=8).map(|i| p.exceptional(i)).collect(),
            };
            let rep = decompose_parity_d8(&p, &lines)?;
            let decs: Vec<&Decomposition> = rep.decompositions.iter().chain([&rep.w8_corrected.wedge]).collect();
            if a.format != Format::Json {
                println!("W_8 as written ({}): {}", rep.w8_as_written.description, if rep.w8_as_written.wedge.verified { "holds" } else { "fails" });
            }
            emit_decompositions(serde_json::to_value(&rep).expect("report"), &decs, rep.verified(), a.format)
        }
        Fix::A1Pair => {
            let p = lattice(8)?;
            let l = in_lattice(&p, &required(a.l, "--l")?, "--l")?;
            let m = in_lattice(&p, &required(a.m, "--m")?, "--m")?;
            let rep = e7_centralizer(&p, &l, &m)?;
            let value = json!({ "a1_root": rep.a1_root, "roots": rep.roots.len(), "type": rep.cartan_type.to_string(), "is_e7": rep.is_e7, "orthogonal": rep.orthogonal });
            match a.format {
                Format::Json => print_json(&value),
                _ => table::fields(&value),
            }
            Ok(rep.is_e7 && rep.orthogonal)
        }
        Fix::Degeneration => {
            let case = a.case.ok_or_else(|| Failure::Usage("--case is required for --fix degeneration".into()))?;
            let rep = degeneration_counts(case.into())?;
            match a.format {
                Format::Json => print_json(&rep),
                _ => table::degeneration(&rep),
            }
            Ok(rep.verified())
        }
        Fix::Small => {
            let rep = small_n_checks()?;
            let decs: Vec<&Decomposition> = rep.decompositions.iter().collect();
            emit_decompositions(serde_json::to_value(&rep).expect("report"), &decs, true, a.format)
        }
    }
}

fn run_verify(a: VerifyArgs) -> Outcome {
    no_dot(a.format)?;
    let b = budget()?;
    let suites: Vec<Suite> = match &a.target {
        Target::All => Suite::ALL.to_vec(),
        Target::One(s) => vec![*s],
    };
    let start = Instant::now();
    let records: Vec<IdentityRecord> = run_suites(&suites, a.n_max, b)?;
    let name = match &a.target {
        Target::All => "all".to_string(),
        Target::One(s) => s.name().to_string(),
    };
    let mut input = BTreeMap::new();
    input.insert("suite".into(), name.clone());
    input.insert("n_max".into(), a.n_max.to_string());
    input.insert("dgon_budget".into(), b.dgon.to_string());
    input.insert("samples".into(), b.samples.to_string());
    let mut report = Report::new(name, input, records);
    if a.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    emit_report(&report, a.format)
}

fn run_export(a: ExportArgs) -> Outcome {
    let p = lattice(a.n)?;
    let r = match a.r {
        Some(r) => Some(in_lattice(&p, &r, "--r")?),
        None => None,
    };
    let g = Graph::build(a.graph.into(), &p, r.as_ref())?;
    match a.format {
        Format::Dot => print!("{}", g.to_dot()),
        Format::Json => println!("{}", g.to_json()),
        Format::Table => table::graph(&g),
    }
    Ok(true)
}
