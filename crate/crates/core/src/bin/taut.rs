//! `taut`: Hurwitz numbers, ELSV checks, top strata and chain degenerations
//! from the command line. Every run prints one JSON document
//! `{"result": ..., "manifest": ...}` (or CSV rows followed by the manifest
//! as a `#` comment line).
//!
//! Exit codes: 0 success, 1 internal error or failed verification, 2 budget
//! exceeded, 3 invalid domain, 4 rank-deficient grid.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use taut_core::chain::{self, ChainLayout, Engine, StrataOptions};
use taut_core::elsv::{self, HodgeCache, Interpolation};
use taut_core::graphs::{self, StableGraph};
use taut_core::hurwitz::{self, DEFAULT_BUDGET};
use taut_core::manifest::RunManifest;
use taut_core::parallel;
use taut_core::symmetric::{is_stable, parse_alpha, HurwitzProblem};
use taut_core::{scalar, Error, Result};

#[derive(Parser)]
#[command(
    name = "taut",
    version,
    about = "Exact Hurwitz numbers, ELSV and top strata of stable curves"
)]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum number of transposition sequences an exhaustive search may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Neither read nor write the Hodge table cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count connected covers of P^1 with one arbitrary and r simple branch points.
    Hurwitz(HurwitzArgs),
    /// Interpolate the Hodge integrals of (g, n) and check both forms of ELSV.
    ElsvVerify(ElsvArgs),
    /// Trivalent stable graphs of (g, n).
    Graphs(GraphArgs),
    /// Push every cover onto a chain of rational curves and collect the strata.
    Degenerate(DegenerateArgs),
}

#[derive(Args)]
struct HurwitzArgs {
    #[arg(long)]
    genus: u32,
    /// Ramification profile over infinity, e.g. `3,1,1`.
    #[arg(long, value_parser = parse_profile)]
    alpha: Profile,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    method: Method,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Method {
    Brute,
    Fast,
    Both,
}

#[derive(Args)]
struct ElsvArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    n: usize,
    /// Use the grid with parts up to this bound instead of growing one.
    #[arg(long)]
    max_part: Option<u32>,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    n: usize,
    #[arg(value_enum)]
    action: GraphAction,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphAction {
    Enumerate,
    Connectivity,
}

#[derive(Args)]
struct DegenerateArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long, value_parser = parse_profile)]
    alpha: Profile,
    #[arg(long, value_enum, default_value_t = ChainLayout::Forward)]
    layout: ChainLayout,
    #[arg(long, value_enum, default_value_t = Engine::Traced)]
    engine: Engine,
    /// Degenerate only the factorizations of one element of the class.
    #[arg(long)]
    reduced: bool,
}

/// Comma-separated positive parts.
#[derive(Clone)]
struct Profile(Vec<u32>);

fn parse_profile(s: &str) -> std::result::Result<Profile, String> {
    parse_alpha(s).map(Profile).map_err(|e| e.to_string())
}

/// What a command produced: its JSON, CSV rows, and whether every check it
/// performed passed.
struct Outcome {
    result: Value,
    csv: Vec<Vec<String>>,
    verified: bool,
    notes: Value,
}

fn run_hurwitz(args: &HurwitzArgs, budget: u128) -> Result<Outcome> {
    let problem = HurwitzProblem::new(args.genus, args.alpha.0.clone())?;
    let fast = || hurwitz::hurwitz_fast(&problem);
    let brute = || hurwitz::hurwitz_brute_with(&problem, budget);
    let (value, verdict) = match args.method {
        Method::Fast => (fast(), None),
        Method::Brute => (brute()?, None),
        Method::Both => {
            let b = brute()?;
            let f = fast();
            let equal = b == f;
            (b, Some(equal))
        }
    };
    let mut result = serde_json::to_value(&value)?;
    if let Some(equal) = verdict {
        result["equal"] = json!(equal);
    }
    let mut header = vec!["g", "alpha", "d", "n", "r", "tuple_count", "h", "h_labeled"];
    let mut row = vec![
        value.problem.genus.to_string(),
        alpha_string(&value.problem.alpha),
        value.problem.d().to_string(),
        value.problem.n().to_string(),
        value.problem.r().to_string(),
        value.tuple_count.to_string(),
        scalar::format(&value.h),
        scalar::format(&value.h_labeled),
    ];
    if let Some(equal) = verdict {
        header.push("equal");
        row.push(equal.to_string());
    }
    Ok(Outcome {
        result,
        csv: vec![header.into_iter().map(String::from).collect(), row],
        verified: verdict.unwrap_or(true),
        notes: Value::Null,
    })
}

fn alpha_string(alpha: &[u32]) -> String {
    alpha
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn interpolate(args: &ElsvArgs, use_cache: bool) -> Result<(Interpolation, Value)> {
    let (g, n) = (args.genus, args.n);
    let fresh = || match args.max_part {
        Some(d) => elsv::interpolate_on_grid(g, n, d),
        None => elsv::auto_interpolate(g, n, &[]),
    };
    if !use_cache {
        return Ok((fresh()?, json!({"cache": "disabled"})));
    }
    let path = elsv::default_cache_path();
    let mut cache = HodgeCache::open(&path)?;
    if let Some(table) = cache.get(g, n).cloned() {
        let checked = match args.max_part {
            Some(d) => elsv::check_on_grid(g, n, d, &table),
            None => elsv::auto_check(g, n, &table),
        };
        // a stale or damaged entry is recomputed, never trusted
        if let Ok(interp) = checked {
            return Ok((interp, json!({"cache": "hit", "path": path})));
        }
    }
    let interp = fresh()?;
    cache.store(g, n, interp.table.clone())?;
    Ok((interp, json!({"cache": "stored", "path": path})))
}

fn run_elsv(args: &ElsvArgs, use_cache: bool) -> Result<Outcome> {
    let (g, n) = (args.genus, args.n);
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let (interp, notes) = interpolate(args, use_cache)?;
    let mut reports = Vec::new();
    let mut counter = hurwitz::FactorizationCounter::new();
    for alpha in interp.solving_points.iter().chain(&interp.held_out_points) {
        let value = counter.hurwitz(&HurwitzProblem::new(g, alpha.clone())?);
        reports.extend(elsv::verify_elsv_value(&value, &interp.table)?);
    }
    let verified = reports.iter().all(|r| r.equal);
    let mut csv = vec![vec!["g", "n", "a", "k", "value"]
        .into_iter()
        .map(String::from)
        .collect()];
    for (key, value) in &interp.table.entries {
        csv.push(vec![
            key.g.to_string(),
            key.n.to_string(),
            alpha_string(&key.a),
            key.k.to_string(),
            scalar::format(value),
        ]);
    }
    Ok(Outcome {
        result: json!({
            "g": g,
            "n": n,
            "max_part": interp.max_part,
            "table": interp.table,
            "solving_points": interp.solving_points,
            "held_out_points": interp.held_out_points,
            "reports": reports,
            "all_equal": verified,
        }),
        csv,
        verified,
        notes,
    })
}

fn graph_rows(graphs: &[(String, &StableGraph)]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["hash".to_string(), "graph".to_string()]];
    for (hash, g) in graphs {
        rows.push(vec![
            hash.clone(),
            serde_json::to_string(g).expect("graphs serialize"),
        ]);
    }
    rows
}

fn run_graphs(args: &GraphArgs) -> Result<Outcome> {
    let (g, n) = (args.genus, args.n);
    match args.action {
        GraphAction::Enumerate => {
            let strata = graphs::enumerate_top_strata(g, n)?;
            let entries: Vec<(String, &StableGraph)> = strata
                .iter()
                .map(|s| (s.canonical_code().hash(), s))
                .collect();
            Ok(Outcome {
                result: json!({
                    "g": g,
                    "n": n,
                    "count": strata.len(),
                    "graphs": entries.iter().map(|(h, s)| json!({"hash": h, "graph": s})).collect::<Vec<_>>(),
                }),
                csv: graph_rows(&entries),
                verified: true,
                notes: Value::Null,
            })
        }
        GraphAction::Connectivity => {
            let cert = graphs::connectivity_certificate(g, n)?;
            graphs::verify_certificate(&cert)?;
            let sizes: Vec<usize> = cert.components.iter().map(Vec::len).collect();
            let mut csv = vec![vec!["component".to_string(), "size".to_string()]];
            for (i, s) in sizes.iter().enumerate() {
                csv.push(vec![i.to_string(), s.to_string()]);
            }
            Ok(Outcome {
                result: json!({
                    "g": g,
                    "n": n,
                    "component_count": cert.components.len(),
                    "component_sizes": sizes,
                    "connected": cert.connected(),
                    "certificate": cert,
                }),
                csv,
                verified: true,
                notes: Value::Null,
            })
        }
    }
}

fn run_degenerate(args: &DegenerateArgs, budget: u128) -> Result<Outcome> {
    let problem = HurwitzProblem::new(args.genus, args.alpha.0.clone())?;
    if !problem.is_stable() {
        return Err(Error::Unstable {
            g: problem.genus,
            n: problem.n(),
        });
    }
    let opts = StrataOptions {
        budget,
        layout: args.layout,
        engine: args.engine,
    };
    let hist = if args.reduced {
        chain::hurwitz_to_strata_reduced(&problem, opts)?
    } else {
        chain::hurwitz_to_strata(&problem, opts)?
    };
    let result = serde_json::to_value(&hist)?;
    let mut csv = vec![vec!["hash", "graph", "weight"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()];
    for s in result["strata"].as_array().into_iter().flatten() {
        csv.push(vec![
            s["hash"].as_str().unwrap_or_default().to_string(),
            s["graph"].to_string(),
            s["weight"].as_str().unwrap_or_default().to_string(),
        ]);
    }
    Ok(Outcome {
        result,
        csv,
        verified: hist.matches(),
        notes: Value::Null,
    })
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Hurwitz(_) => "hurwitz",
        Command::ElsvVerify(_) => "elsv-verify",
        Command::Graphs(_) => "graphs",
        Command::Degenerate(_) => "degenerate",
    }
}

fn parameters(cli: &Cli) -> Value {
    match &cli.command {
        Command::Hurwitz(a) => {
            json!({"genus": a.genus, "alpha": a.alpha.0, "method": value_name(a.method)})
        }
        Command::ElsvVerify(a) => {
            json!({"genus": a.genus, "n": a.n, "max_part": a.max_part, "cache": !cli.no_cache})
        }
        Command::Graphs(a) => json!({"genus": a.genus, "n": a.n, "action": match a.action {
            GraphAction::Enumerate => "enumerate",
            GraphAction::Connectivity => "connectivity",
        }}),
        Command::Degenerate(a) => json!({
            "genus": a.genus,
            "alpha": a.alpha.0,
            "layout": a.layout,
            "engine": a.engine,
            "reduced": a.reduced,
        }),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Hurwitz(a) => run_hurwitz(a, cli.budget),
        Command::ElsvVerify(a) => run_elsv(a, !cli.no_cache),
        Command::Graphs(a) => run_graphs(a),
        Command::Degenerate(a) => run_degenerate(a, cli.budget),
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code()});
    match e {
        Error::InsufficientGrid { .. } => v["advice"] = json!("raise --max-part"),
        Error::BudgetExceeded { size, budget } => {
            v["search_size"] = json!(size.to_string());
            v["budget"] = json!(budget.to_string());
        }
        _ => {}
    }
    v
}

fn write_csv(out: &mut impl Write, rows: &[Vec<String>]) -> std::io::Result<()> {
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| {
                if c.contains([',', '"', '\n']) {
                    format!("\"{}\"", c.replace('"', "\"\""))
                } else {
                    c.clone()
                }
            })
            .collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let threads = cli.threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let outcome = parallel::with_threads(threads, || dispatch(&cli)).and_then(|r| r);
    let (result, csv, code, notes) = match outcome {
        Ok(o) => {
            let code = if o.verified { 0 } else { 1 };
            (o.result, Some(o.csv), code, o.notes)
        }
        Err(e) => {
            eprintln!("taut: {e}");
            (
                json!({"error": error_json(&e)}),
                None,
                e.exit_code(),
                Value::Null,
            )
        }
    };
    let mut manifest = RunManifest::new(
        command_name(&cli.command),
        parameters(&cli),
        threads,
        cli.budget,
        started,
        &result,
    );
    manifest.notes = notes;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let written = match (cli.format, csv) {
        (Format::Csv, Some(rows)) => write_csv(&mut out, &rows).and_then(|_| {
            writeln!(
                out,
                "# manifest {}",
                serde_json::to_string(&manifest).expect("manifest serializes")
            )
        }),
        _ => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&json!({"result": result, "manifest": manifest}))
                .expect("json")
        ),
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
