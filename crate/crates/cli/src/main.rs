use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use strata_core::canonical::{automorphism_count, extended_automorphism_count, CanonicalForm};
use strata_core::checks::check_strata;
use strata_core::enumerate::enumerate_strata_unbounded;
use strata_core::io::{describe, graphs_dot, poset_dot, GraphDocument};
use strata_core::nerve::betti_euler_characteristic;
use strata_core::oracle::{brute_force_key, codim_profile, enumerate_bottom_up};
use strata_core::strata::{isotropy_rank, Cover};
use strata_core::{
    dimension_report, enumerate_strata, AmbientType, ChartDims, Homology, OrderComplex, StableGraph, Strata,
    StrataPoset,
};

/// Largest `3g - 3 + n` the brute-force oracle runs on without `--force`.
const ORACLE_MAX_DIMENSION: u32 = 5;

#[derive(Parser)]
#[command(name = "strata", version, about = "Boundary strata of moduli of stable curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TypeArgs {
    /// Arithmetic genus g.
    #[arg(long)]
    genus: u32,
    /// Number of marked points n.
    #[arg(long)]
    legs: u32,
    /// Skip the size guard rail.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List every stratum, sorted by codimension and canonical key.
    Enumerate {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value_t = EnumerateFormat::Json)]
        format: EnumerateFormat,
    },
    /// The degeneration poset, as JSON or as a DOT Hasse diagram.
    Poset {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        dot: bool,
    },
    /// Fenchel-Nielsen chart dimensions for every stratum.
    Dims {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value_t = DimsFormat::Table)]
        format: DimsFormat,
    },
    /// Integral homology of the order complex of the poset.
    Homology {
        #[command(flatten)]
        ty: TypeArgs,
        /// Drop the smooth stratum and use only the boundary.
        #[arg(long)]
        boundary_only: bool,
    },
    /// Run every invariant suite.
    Check {
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Compare the engine with the brute-force enumerator.
    Oracle {
        #[command(flatten)]
        ty: TypeArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateFormat {
    Json,
    Dot,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum DimsFormat {
    Table,
    Json,
}

enum Failure {
    Usage(String),
    Check,
}

type Outcome = Result<String, (String, Failure)>;

fn usage(message: impl ToString) -> (String, Failure) {
    (String::new(), Failure::Usage(message.to_string()))
}

impl TypeArgs {
    fn ambient(&self) -> Result<AmbientType, (String, Failure)> {
        AmbientType::new(self.genus, self.legs).map_err(usage)
    }

    fn strata(&self) -> Result<Strata, (String, Failure)> {
        let ty = self.ambient()?;
        if self.force {
            Ok(enumerate_strata_unbounded(ty))
        } else {
            enumerate_strata(ty).map_err(usage)
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct StratumRow {
    index: usize,
    codim: usize,
    key: CanonicalForm,
    automorphisms: u64,
    extended_automorphisms: u64,
    graph: GraphDocument,
}

#[derive(Serialize)]
struct EnumerateOutput {
    genus: u32,
    legs: u32,
    count: usize,
    profile: Vec<usize>,
    strata: Vec<StratumRow>,
}

fn enumerate(ty: TypeArgs, format: EnumerateFormat) -> Outcome {
    let strata = ty.strata()?;
    Ok(match format {
        EnumerateFormat::Json => to_json(&EnumerateOutput {
            genus: ty.genus,
            legs: ty.legs,
            count: strata.len(),
            profile: strata.profile(),
            strata: strata
                .iter()
                .enumerate()
                .map(|(index, s)| StratumRow {
                    index,
                    codim: s.codim(),
                    key: s.key.clone(),
                    automorphisms: automorphism_count(&s.graph),
                    extended_automorphisms: extended_automorphism_count(&s.graph),
                    graph: GraphDocument::from_graph(&s.graph),
                })
                .collect(),
        }),
        EnumerateFormat::Dot => graphs_dot(strata.iter().map(|s| (s.codim(), &s.graph))),
        EnumerateFormat::Table => {
            let mut out = format!("{:>5}  {:>5}  {:>5}  graph\n", "index", "codim", "aut");
            for (i, s) in strata.iter().enumerate() {
                writeln!(
                    out,
                    "{i:>5}  {:>5}  {:>5}  {}",
                    s.codim(),
                    automorphism_count(&s.graph),
                    describe(&s.graph)
                )
                .unwrap();
            }
            out
        }
    })
}

#[derive(Serialize)]
struct PosetNode {
    index: usize,
    codim: usize,
    key: CanonicalForm,
    isotropy_rank: usize,
    automorphisms: u64,
    graph: String,
}

#[derive(Serialize)]
struct PosetOutput<'a> {
    genus: u32,
    legs: u32,
    nodes: Vec<PosetNode>,
    covers: &'a [Cover],
    minimal: Vec<usize>,
    maximal: Vec<usize>,
}

fn poset(ty: TypeArgs, dot: bool) -> Outcome {
    let poset = StrataPoset::from_strata(&ty.strata()?);
    if dot {
        return Ok(poset_dot(&poset));
    }
    Ok(to_json(&PosetOutput {
        genus: ty.genus,
        legs: ty.legs,
        nodes: poset
            .nodes
            .iter()
            .enumerate()
            .map(|(index, s)| PosetNode {
                index,
                codim: s.codim(),
                key: s.key.clone(),
                isotropy_rank: isotropy_rank(&s.graph),
                automorphisms: automorphism_count(&s.graph),
                graph: describe(&s.graph),
            })
            .collect(),
        covers: &poset.covers,
        minimal: poset.minimal_elements(),
        maximal: poset.maximal_elements(),
    }))
}

fn dims(ty: TypeArgs, format: DimsFormat) -> Outcome {
    let strata = ty.strata()?;
    let report = dimension_report(&strata).map_err(usage)?;
    let out = match format {
        DimsFormat::Json => to_json(&report),
        DimsFormat::Table => {
            let mut out = format!(
                "{:>5}  {:>4}  {:>5}  {:>5}  {:>5}  {:>6}  {:>4}  graph\n",
                "codim", "cuts", "nodes", "pants", "dim_C", "dim_R", "ok"
            );
            for (row, s) in report.rows.iter().zip(strata.iter()) {
                let ChartDims {
                    cut_system_size,
                    node_count,
                    pants_count,
                    stratum_dim_complex,
                    chart_dim_real,
                } = row.dims;
                writeln!(
                    out,
                    "{:>5}  {cut_system_size:>4}  {node_count:>5}  {pants_count:>5}  \
                     {stratum_dim_complex:>5}  {chart_dim_real:>6}  {:>4}  {}",
                    row.codim,
                    if row.failures.is_empty() { "yes" } else { "NO" },
                    describe(&s.graph)
                )
                .unwrap();
            }
            out
        }
    };
    if report.passed() {
        Ok(out)
    } else {
        Err((out, Failure::Check))
    }
}

#[derive(Serialize)]
struct HomologyOutput {
    genus: u32,
    legs: u32,
    complex: &'static str,
    simplex_counts: Vec<usize>,
    euler_characteristic: i64,
    betti_euler_characteristic: i64,
    boundary_squares_to_zero: bool,
    homology: Vec<Homology>,
}

fn homology(ty: TypeArgs, boundary_only: bool) -> Outcome {
    let poset = StrataPoset::from_strata(&ty.strata()?);
    let complex =
        if boundary_only { OrderComplex::of_boundary(&poset) } else { OrderComplex::of_poset(&poset) };
    let chains = complex.boundary_matrices();
    let homology = chains.homology();
    Ok(to_json(&HomologyOutput {
        genus: ty.genus,
        legs: ty.legs,
        complex: if boundary_only { "boundary" } else { "full" },
        simplex_counts: complex.counts(),
        euler_characteristic: complex.euler_characteristic(),
        betti_euler_characteristic: betti_euler_characteristic(&homology),
        boundary_squares_to_zero: chains.squares_to_zero(),
        homology,
    }))
}

fn check(ty: TypeArgs) -> Outcome {
    let report = check_strata(&ty.strata()?);
    let mut out = String::new();
    for item in &report.items {
        let mark = if item.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{mark}  {}  ({})", item.name, item.detail).unwrap();
    }
    let failed = report.items.iter().filter(|i| !i.passed).count();
    writeln!(
        out,
        "type ({}, {}): {} of {} suites passed",
        ty.genus,
        ty.legs,
        report.items.len() - failed,
        report.items.len()
    )
    .unwrap();
    if failed == 0 {
        Ok(out)
    } else {
        Err((out, Failure::Check))
    }
}

fn oracle(ty: TypeArgs) -> Outcome {
    let ambient = ty.ambient()?;
    if ambient.dimension() > ORACLE_MAX_DIMENSION && !ty.force {
        return Err(usage(format!(
            "type {ambient} has 3g - 3 + n = {} > {ORACLE_MAX_DIMENSION}; \
             the brute-force oracle is factorial in graph size (pass --force to override)",
            ambient.dimension()
        )));
    }
    let strata = ty.strata()?;
    let brute = enumerate_bottom_up(ambient);
    let key = |codim: usize, g: &StableGraph| (codim, brute_force_key(g));
    let engine: BTreeSet<_> = strata.iter().map(|s| key(s.codim(), &s.graph)).collect();
    let oracle: BTreeSet<_> = brute.iter().map(|(c, g)| key(*c, g)).collect();

    let mut out = String::new();
    writeln!(out, "engine: {} strata, profile {:?}", strata.len(), strata.profile()).unwrap();
    writeln!(out, "oracle: {} strata, profile {:?}", brute.len(), codim_profile(&brute)).unwrap();
    let mut diffs = 0;
    for (label, graphs, other) in [
        ("missing from engine", &brute, &engine),
        ("missing from oracle", &strata.iter().map(|s| (s.codim(), s.graph.clone())).collect(), &oracle),
    ] {
        for (c, g) in graphs.iter() {
            if !other.contains(&key(*c, g)) {
                diffs += 1;
                writeln!(out, "{label}: codim {c}  {}", describe(g)).unwrap();
            }
        }
    }
    if strata.len() != engine.len() || brute.len() != oracle.len() {
        diffs += 1;
        writeln!(out, "duplicate classes in a listing").unwrap();
    }
    writeln!(out, "{diffs} differences").unwrap();
    if diffs == 0 {
        Ok(out)
    } else {
        Err((out, Failure::Check))
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("STRATA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("STRATA_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    // A closed pipe downstream is not an error for us.
    let _ = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Enumerate { ty, format } => enumerate(ty, format),
        Command::Poset { ty, dot } => poset(ty, dot),
        Command::Dims { ty, format } => dims(ty, format),
        Command::Homology { ty, boundary_only } => homology(ty, boundary_only),
        Command::Check { ty } => check(ty),
        Command::Oracle { ty } => oracle(ty),
    };
    match outcome {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err((text, Failure::Check)) => {
            emit(&text);
            ExitCode::from(1)
        }
        Err((_, Failure::Usage(message))) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
