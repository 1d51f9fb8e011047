//! Command-line front door: generators, invariants, bound evaluators,
//! Finner/Janson comparisons, inequality verification, and Monte Carlo
//! simulation, with JSON or CSV output for offline analysis.
//!
//! Exit codes: 0 success, 1 usage/parse error, 2 enumeration cap exceeded,
//! 3 inequality violated (verify only).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};

use depbounds::bounds::{self, BoundReport};
use depbounds::cycle_graph;
use depbounds::graph::DependencyGraph;
use depbounds::hypergraph::{
    clique_hypergraph, degree_hypergraph, path_hypergraph, triangle_hypergraph, Hypergraph,
};
use depbounds::invariants::{self, FractionalWeighting, InvariantError};
use depbounds::mc::{self, McEstimate};
use depbounds::oracle::{self, OracleError};
use depbounds::probability::VertexProbabilities;
use depbounds::rational::{format_rational, parse_rational, pow_u32, to_f64};

#[derive(Debug)]
enum AppError {
    Usage(String),
    Cap(String),
    Violation(String),
}

type Result<T> = std::result::Result<T, AppError>;

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Cap(_) => 2,
            AppError::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Cap(m) | AppError::Violation(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn from_invariant(e: InvariantError) -> AppError {
    match e {
        InvariantError::CapExceeded { .. } | InvariantError::FoldCapExceeded { .. } => {
            AppError::Cap(e.to_string())
        }
        other => AppError::Usage(other.to_string()),
    }
}

fn from_oracle(e: OracleError) -> AppError {
    match e {
        OracleError::CapExceeded { .. } => AppError::Cap(e.to_string()),
        OracleError::Invariant(inner) => from_invariant(inner),
        other => AppError::Usage(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "depbounds",
    version,
    about = "Fractional graph invariants and tail/correlation bounds for dependent random variables"
)]
struct Cli {
    /// Output format for tabular results
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write output to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a hypergraph as canonical JSON
    Gen(GenArgs),
    /// Compute an exact fractional invariant with its certificate
    Invariant(InvariantArgs),
    /// Evaluate a closed-form bound
    Bound(BoundArgs),
    /// Compare Finner and Janson bounds across a p-grid
    Compare(CompareArgs),
    /// Verify an inequality against exact enumeration
    Verify(VerifyArgs),
    /// Seeded Monte Carlo estimation
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Triangles,
    Paths,
    Degrees,
    Cycle,
    Cliques,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// What to generate
    #[arg(value_enum)]
    kind: GenKind,
    /// Number of underlying graph vertices
    #[arg(long)]
    n: usize,
    /// Path length or clique size
    #[arg(long)]
    k: Option<usize>,
    /// First path endpoint (graph vertex index)
    #[arg(long, default_value_t = 0)]
    u: usize,
    /// Second path endpoint (graph vertex index)
    #[arg(long, default_value_t = 1)]
    v: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InvariantKind {
    #[value(name = "nu-star")]
    NuStar,
    #[value(name = "chi-star")]
    ChiStar,
    #[value(name = "chi-b")]
    ChiB,
}

#[derive(Args, Debug)]
struct InvariantArgs {
    #[arg(value_enum)]
    which: InvariantKind,
    /// Hypergraph JSON (nu-star) or graph JSON (chi-star, chi-b)
    #[arg(long)]
    input: PathBuf,
    /// Fold count for chi-b
    #[arg(long)]
    b: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundName {
    Finner,
    #[value(name = "chernoff-kl")]
    ChernoffKl,
    Bennett,
    Janson,
    #[value(name = "janson-triangle")]
    JansonTriangle,
    Ramon,
    Path,
    Degree,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(value_enum)]
    name: BoundName,
    /// Hypergraph JSON input (finner)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Uniform vertex probability
    #[arg(long)]
    p: Option<String>,
    /// Override the optimal matching with a uniform weight (finner)
    #[arg(long)]
    phi_uniform: Option<String>,
    /// Number of graph vertices
    #[arg(long)]
    n: Option<u64>,
    /// Path length
    #[arg(long)]
    k: Option<u64>,
    /// Target degree
    #[arg(long)]
    d: Option<u64>,
    /// Number of variables |V| (chernoff-kl)
    #[arg(long)]
    nv: Option<u64>,
    /// Mean rate q (chernoff-kl) or uniform mean (janson)
    #[arg(long)]
    q: Option<f64>,
    /// Excess over the mean
    #[arg(long)]
    eps: Option<f64>,
    /// Fractional chromatic number, as a rational like 5/2
    #[arg(long)]
    chi_star: Option<String>,
    /// Variance sum S (bennett)
    #[arg(long = "S")]
    s: Option<f64>,
    /// Threshold t (bennett)
    #[arg(long)]
    t: Option<f64>,
    /// Comma-separated means (janson)
    #[arg(long)]
    qv: Option<String>,
    /// Number of variables (janson, with --q)
    #[arg(long)]
    m: Option<u64>,
    /// Pairwise-product sum Δ (janson)
    #[arg(long)]
    delta: Option<f64>,
    /// Total matching weight Φ (ramon)
    #[arg(long)]
    phi: Option<f64>,
    /// Edge count (ramon degree-regular form)
    #[arg(long)]
    edges: Option<u64>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Application to compare (only `triangles`)
    app: String,
    #[arg(long)]
    n: u64,
    /// Grid as start:stop:step, inclusive of both ends when step divides
    #[arg(long)]
    p_grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Finner,
    Holder,
    Example1,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Hypergraph JSON file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generate the instance instead of reading a file
    #[arg(long, value_enum)]
    gen: Option<GenKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    which: VerifyKind,
    #[command(flatten)]
    source: SourceArgs,
    /// Uniform vertex probability
    #[arg(long, default_value = "1/2")]
    p: String,
    /// Fold count for holder
    #[arg(long)]
    b: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimulateKind {
    Independence,
    Tail,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(value_enum)]
    which: SimulateKind,
    #[command(flatten)]
    source: SourceArgs,
    /// Uniform vertex probability
    #[arg(long, default_value = "1/2")]
    p: String,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Excess ε for the tail threshold t = Φ(mean + ε)
    #[arg(long)]
    eps: Option<f64>,
    /// Explicit tail threshold, overriding --eps
    #[arg(long)]
    t: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    init_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn init_threads() {
    if let Ok(raw) = std::env::var("DEPBOUNDS_THREADS") {
        if let Ok(threads) = raw.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let out = Output::new(cli.out, cli.format);
    match cli.command {
        Command::Gen(args) => cmd_gen(args, out),
        Command::Invariant(args) => cmd_invariant(args, out),
        Command::Bound(args) => cmd_bound(args, out),
        Command::Compare(args) => cmd_compare(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Simulate(args) => cmd_simulate(args, out),
    }
}

struct Output {
    path: Option<PathBuf>,
    format: Format,
}

impl Output {
    fn new(path: Option<PathBuf>, format: Format) -> Self {
        Output { path, format }
    }

    fn write_text(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(p) => {
                fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.write_all(b"\n"))
                    .map_err(|e| usage(format!("cannot write stdout: {e}")))
            }
        }
    }

    /// JSON: `{"config": ..., "result": ...}`. CSV: a `# config` comment
    /// line, a header row, then data rows.
    fn write_result(&self, config: Value, result: TableOrValue) -> Result<()> {
        match self.format {
            Format::Json => {
                let doc = json!({ "config": config, "result": result.into_json() });
                self.write_text(&serde_json::to_string_pretty(&doc).expect("json"))
            }
            Format::Csv => {
                let mut text = String::new();
                writeln!(text, "# config: {config}").unwrap();
                let (header, rows, annotations) = result.into_table();
                for a in annotations {
                    writeln!(text, "# {a}").unwrap();
                }
                writeln!(text, "{}", header.join(",")).unwrap();
                for row in rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    writeln!(text, "{}", cells.join(",")).unwrap();
                }
                self.write_text(text.trim_end())
            }
        }
    }
}

fn csv_cell(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}

/// Result payload that renders as a JSON value or as a CSV table.
enum TableOrValue {
    Value(Value),
    Table {
        header: Vec<&'static str>,
        rows: Vec<Vec<String>>,
        annotations: Vec<String>,
        json: Value,
    },
}

impl TableOrValue {
    fn into_json(self) -> Value {
        match self {
            TableOrValue::Value(v) => v,
            TableOrValue::Table { json, .. } => json,
        }
    }

    fn into_table(self) -> (Vec<&'static str>, Vec<Vec<String>>, Vec<String>) {
        match self {
            TableOrValue::Value(v) => (vec!["result"], vec![vec![v.to_string()]], Vec::new()),
            TableOrValue::Table {
                header,
                rows,
                annotations,
                ..
            } => (header, rows, annotations),
        }
    }
}

const BOUND_CSV_HEADER: [&str; 8] = [
    "bound_name",
    "n",
    "p",
    "t",
    "eps",
    "value",
    "log_value",
    "certificate_id",
];

fn bound_csv_row(r: &BoundReport) -> Vec<String> {
    let get = |k: &str| r.params.get(k).cloned().unwrap_or_default();
    vec![
        r.name.clone(),
        get("n"),
        get("p"),
        get("t"),
        get("eps"),
        format!("{}", r.value),
        format!("{}", r.log_value),
        r.certificate.clone().unwrap_or_default(),
    ]
}

fn bound_json(r: &BoundReport) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), r.name.clone().into());
    obj.insert("value".into(), r.value.into());
    obj.insert("log_value".into(), r.log_value.into());
    obj.insert(
        "params".into(),
        Value::Object(
            r.params
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
        ),
    );
    if let Some(c) = &r.certificate {
        obj.insert("certificate_id".into(), c.clone().into());
    }
    Value::Object(obj)
}

fn reports_payload(reports: Vec<BoundReport>) -> TableOrValue {
    let rows = reports.iter().map(bound_csv_row).collect();
    let json = Value::Array(reports.iter().map(bound_json).collect());
    TableOrValue::Table {
        header: BOUND_CSV_HEADER.to_vec(),
        rows,
        annotations: Vec::new(),
        json,
    }
}

fn parse_prob(text: &str) -> Result<BigRational> {
    let p = parse_rational(text).map_err(usage)?;
    if !depbounds::rational::is_strictly_between_zero_and_one(&p) {
        return Err(usage(format!("p = {text} must lie strictly in (0,1)")));
    }
    Ok(p)
}

fn generate(kind: GenKind, n: usize, k: Option<usize>, u: usize, v: usize) -> Result<Hypergraph> {
    let need_k = || k.ok_or_else(|| usage("--k is required for this generator"));
    let h = match kind {
        GenKind::Triangles => triangle_hypergraph(n).map_err(|e| usage(e.to_string()))?,
        GenKind::Cliques => clique_hypergraph(n, need_k()?).map_err(|e| usage(e.to_string()))?,
        GenKind::Paths => path_hypergraph(n, need_k()?, u, v).map_err(|e| usage(e.to_string()))?,
        GenKind::Degrees => degree_hypergraph(n).map_err(|e| usage(e.to_string()))?,
        GenKind::Cycle => cycle_graph(n)
            .map_err(|e| usage(e.to_string()))?
            .to_hypergraph(),
    };
    Ok(h)
}

fn load_source(src: &SourceArgs) -> Result<(Hypergraph, Value)> {
    match (&src.input, src.gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let h = Hypergraph::from_json(&text).map_err(|e| usage(e.to_string()))?;
            if !h.is_valid() {
                let msgs: Vec<String> = h.validate().iter().map(|v| v.to_string()).collect();
                return Err(usage(format!("invalid hypergraph: {}", msgs.join("; "))));
            }
            Ok((h, json!({ "input": path.display().to_string() })))
        }
        (None, Some(kind)) => {
            let n = src.n.ok_or_else(|| usage("--n is required with --gen"))?;
            let h = generate(kind, n, src.k, src.u.unwrap_or(0), src.v.unwrap_or(1))?;
            Ok((
                h,
                json!({
                    "gen": format!("{kind:?}").to_lowercase(),
                    "n": n, "k": src.k, "u": src.u, "v": src.v,
                }),
            ))
        }
        _ => Err(usage("exactly one of --input or --gen is required")),
    }
}

fn cmd_gen(args: GenArgs, out: Output) -> Result<()> {
    let h = generate(args.kind, args.n, args.k, args.u, args.v)?;
    let config = json!({
        "subcommand": "gen",
        "kind": format!("{:?}", args.kind).to_lowercase(),
        "n": args.n, "k": args.k, "u": args.u, "v": args.v,
    });
    eprintln!("# config: {config}");
    // bare canonical JSON so the file round-trips through --input
    out.write_text(&h.to_json())
}

fn cmd_invariant(args: InvariantArgs, out: Output) -> Result<()> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.input.display())))?;
    let config = json!({
        "subcommand": "invariant",
        "which": format!("{:?}", args.which),
        "input": args.input.display().to_string(),
        "b": args.b,
    });
    let result = match args.which {
        InvariantKind::NuStar => {
            let h = Hypergraph::from_json(&text).map_err(|e| usage(e.to_string()))?;
            let (_, phi) = invariants::fractional_matching_number(&h).map_err(from_invariant)?;
            phi.to_json(&h)
        }
        InvariantKind::ChiStar => {
            let g = DependencyGraph::from_json(&text).map_err(|e| usage(e.to_string()))?;
            let (_, cert) = invariants::fractional_chromatic_number(&g).map_err(from_invariant)?;
            cert.to_json(g.labels())
        }
        InvariantKind::ChiB => {
            let g = DependencyGraph::from_json(&text).map_err(|e| usage(e.to_string()))?;
            let b = args.b.ok_or_else(|| usage("--b is required for chi-b"))?;
            let (_, cert) = invariants::b_fold_chromatic_number(&g, b).map_err(from_invariant)?;
            cert.to_json(g.labels())
        }
    };
    out.write_result(config, TableOrValue::Value(result))
}

fn cmd_bound(args: BoundArgs, out: Output) -> Result<()> {
    let need = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| usage(format!("--{name} is required for this bound")))
    };
    let need_u = |name: &str, v: Option<u64>| {
        v.ok_or_else(|| usage(format!("--{name} is required for this bound")))
    };
    let chi_star = |v: &Option<String>| -> Result<BigRational> {
        match v {
            Some(s) => parse_rational(s).map_err(usage),
            None => Ok(BigRational::one()),
        }
    };
    let mut config = json!({
        "subcommand": "bound",
        "name": format!("{:?}", args.name),
    });

    let reports: Vec<BoundReport> = match args.name {
        BoundName::Finner => {
            let p_text = args
                .p
                .clone()
                .ok_or_else(|| usage("--p is required for finner"))?;
            let input = args
                .input
                .clone()
                .ok_or_else(|| usage("--input is required for finner"))?;
            let text = fs::read_to_string(&input)
                .map_err(|e| usage(format!("cannot read {}: {e}", input.display())))?;
            let h = Hypergraph::from_json(&text).map_err(|e| usage(e.to_string()))?;
            let p_rat = parse_prob(&p_text)?;
            let p = VertexProbabilities::uniform(&h, &p_rat).map_err(|e| usage(e.to_string()))?;
            let phi = match &args.phi_uniform {
                Some(w) => {
                    FractionalWeighting::uniform(h.edge_count(), parse_rational(w).map_err(usage)?)
                }
                None => {
                    invariants::fractional_matching_number(&h)
                        .map_err(from_invariant)?
                        .1
                }
            };
            config["input"] = json!(input.display().to_string());
            config["p"] = json!(p_text);
            vec![bounds::finner_independence_bound(&h, &p, &phi)
                .map_err(|e| usage(e.to_string()))?]
        }
        BoundName::ChernoffKl => {
            let cs = chi_star(&args.chi_star)?;
            let b = bounds::chernoff_kl_bound(
                need_u("nv", args.nv)?,
                need("q", args.q)?,
                need("eps", args.eps)?,
                &cs,
            )
            .map_err(|e| usage(e.to_string()))?;
            vec![b.hoeffding, b.sharp]
        }
        BoundName::Bennett => {
            let cs = chi_star(&args.chi_star)?;
            let b = bounds::bennett_bound(need("S", args.s)?, need("t", args.t)?, &cs)
                .map_err(|e| usage(e.to_string()))?;
            vec![b.bound, b.janson_comparison]
        }
        BoundName::Janson => {
            let qv: Vec<f64> = match (&args.qv, args.q, args.m) {
                (Some(list), _, _) => list
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| usage(format!("bad --qv entry: {e}")))?,
                (None, Some(q), Some(m)) => vec![q; m as usize],
                _ => return Err(usage("janson needs --qv or both --q and --m")),
            };
            vec![bounds::janson_bound(&qv, need("delta", args.delta)?)
                .map_err(|e| usage(e.to_string()))?]
        }
        BoundName::JansonTriangle => {
            vec![bounds::janson_triangle_bound(
                need_u("n", args.n)?,
                need("p", args.p.as_deref().map(parse_f64).transpose()?)?,
            )
            .map_err(|e| usage(e.to_string()))?]
        }
        BoundName::Ramon => {
            let p = need("p", args.p.as_deref().map(parse_f64).transpose()?)?;
            let eps = need("eps", args.eps)?;
            match (args.phi, args.edges, args.d) {
                (Some(phi), _, _) => vec![bounds::ramon_concentration_bound(phi, p, eps)
                    .map_err(|e| usage(e.to_string()))?],
                (None, Some(m), Some(d)) => {
                    vec![bounds::ramon_degree_regular_bound(m, d, p, eps)
                        .map_err(|e| usage(e.to_string()))?]
                }
                _ => return Err(usage("ramon needs --phi or both --edges and --d")),
            }
        }
        BoundName::Path => {
            vec![bounds::path_absence_bound(
                need_u("n", args.n)?,
                need_u("k", args.k)?,
                need("p", args.p.as_deref().map(parse_f64).transpose()?)?,
            )
            .map_err(|e| usage(e.to_string()))?]
        }
        BoundName::Degree => {
            vec![bounds::degree_absence_bound(
                need_u("n", args.n)?,
                need_u("d", args.d)?,
                need("p", args.p.as_deref().map(parse_f64).transpose()?)?,
            )
            .map_err(|e| usage(e.to_string()))?]
        }
    };
    out.write_result(config, reports_payload(reports))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|e| usage(format!("bad number `{s}`: {e}")))
}

fn parse_grid(raw: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(usage("grid must be start:stop:step"));
    }
    let start = parse_f64(parts[0])?;
    let stop = parse_f64(parts[1])?;
    let step = parse_f64(parts[2])?;
    if step <= 0.0 {
        return Err(usage("grid step must be positive"));
    }
    let mut grid = Vec::new();
    let mut i = 0u64;
    loop {
        let p = start + step * i as f64;
        if p > stop + step * 1e-9 {
            break;
        }
        grid.push(p.min(stop));
        i += 1;
    }
    if grid.is_empty() {
        return Err(usage("grid is empty"));
    }
    Ok(grid)
}

fn cmd_compare(args: CompareArgs, out: Output) -> Result<()> {
    if args.app != "triangles" {
        return Err(usage(format!(
            "unknown comparison `{}`; only `triangles` is supported",
            args.app
        )));
    }
    let grid = match &args.p_grid {
        Some(raw) => parse_grid(raw)?,
        None => bounds::default_p_grid(),
    };
    let cmp = bounds::compare_triangle_bounds(args.n, &grid).map_err(|e| usage(e.to_string()))?;
    let config = json!({
        "subcommand": "compare",
        "app": "triangles",
        "n": args.n,
        "p_grid": args.p_grid,
        "grid_points": grid.len(),
    });
    let rows: Vec<Vec<String>> = cmp
        .rows
        .iter()
        .map(|r| {
            vec![
                format!("{}", r.p),
                format!("{}", r.finner),
                format!("{}", r.janson),
                r.winner.to_string(),
            ]
        })
        .collect();
    let json_rows: Vec<Value> = cmp
        .rows
        .iter()
        .map(|r| {
            json!({
                "p": r.p,
                "finner": r.finner,
                "janson": r.janson,
                "finner_log": r.finner_log,
                "janson_log": r.janson_log,
                "winner": r.winner.to_string(),
            })
        })
        .collect();
    let crossovers: Vec<String> = cmp.crossovers.iter().map(|p| format!("{p}")).collect();
    out.write_result(
        config,
        TableOrValue::Table {
            header: vec!["p", "finner", "janson", "winner"],
            rows,
            annotations: vec![format!("crossovers: [{}]", crossovers.join(", "))],
            json: json!({ "rows": json_rows, "crossovers": cmp.crossovers }),
        },
    )
}

fn cmd_verify(args: VerifyArgs, out: Output) -> Result<()> {
    match args.which {
        VerifyKind::Finner => verify_finner(args, out),
        VerifyKind::Holder => verify_holder(args, out),
        VerifyKind::Example1 => verify_example1(args, out),
    }
}

fn verify_finner(args: VerifyArgs, out: Output) -> Result<()> {
    let (h, source) = load_source(&args.source)?;
    let p_rat = parse_prob(&args.p)?;
    let p = VertexProbabilities::uniform(&h, &p_rat).map_err(|e| usage(e.to_string()))?;
    let (nu, phi) = invariants::fractional_matching_number(&h).map_err(from_invariant)?;
    let check = oracle::verify_finner(&h, &p, &phi).map_err(from_oracle)?;
    let config = json!({
        "subcommand": "verify", "which": "finner", "source": source, "p": args.p,
    });
    let result = json!({
        "lhs": check.lhs,
        "rhs": check.rhs,
        "holds": check.holds,
        "exact": check.exact,
        "tolerance": check.tolerance,
        "nu_star": format_rational(&nu),
    });
    out.write_result(config, TableOrValue::Value(result))?;
    if check.holds {
        Ok(())
    } else {
        Err(AppError::Violation(format!(
            "finner inequality violated: lhs {} > rhs {}",
            check.lhs, check.rhs
        )))
    }
}

fn verify_holder(args: VerifyArgs, out: Output) -> Result<()> {
    let (h, source) = load_source(&args.source)?;
    let b = args.b.ok_or_else(|| usage("--b is required for holder"))?;
    let p_rat = parse_prob(&args.p)?;
    let p = VertexProbabilities::uniform(&h, &p_rat).map_err(|e| usage(e.to_string()))?;
    let d = oracle::edge_indicator_distribution(&h, &p).map_err(from_oracle)?;
    let g = h.dependency_graph().map_err(|e| usage(e.to_string()))?;
    let check = oracle::verify_product_inequality(&d, &g, b).map_err(from_oracle)?;
    let config = json!({
        "subcommand": "verify", "which": "holder", "source": source,
        "p": args.p, "b": b,
    });
    let result = json!({
        "lhs": check.lhs,
        "rhs": check.rhs,
        "holds": check.holds,
        "exact": check.exact,
        "chi_b": check.chi_b,
        "b": check.fold,
    });
    out.write_result(config, TableOrValue::Value(result))?;
    if check.holds {
        Ok(())
    } else {
        Err(AppError::Violation(format!(
            "holder inequality violated: lhs {} > rhs {}",
            check.lhs, check.rhs
        )))
    }
}

fn verify_example1(args: VerifyArgs, out: Output) -> Result<()> {
    let p = parse_prob(&args.p)?;
    // mass sums to 1 exactly, or the constructor refuses
    let d = oracle::c5_distribution(&p).map_err(from_oracle)?;
    let g = cycle_graph(5).map_err(|e| usage(e.to_string()))?;

    let marginals_ok = (0..5).all(|j| d.marginal_mean(j) == p);
    let dep = oracle::check_dependency_graph(&d, &g, oracle::DEPENDENCY_SUBSET_CAP)
        .map_err(from_oracle)?;
    let all_ones = d.product_moment();
    // strict comparison (p²+p³)/2 > p^{5/2} decided exactly by squaring
    let strict = pow_u32(&all_ones, 2) > pow_u32(&p, 5);

    let holds = marginals_ok && dep.holds() && strict;
    let config = json!({ "subcommand": "verify", "which": "example1", "p": args.p });
    let result = json!({
        "mass": "1",
        "marginals_equal_p": marginals_ok,
        "dependency_graph_holds": dep.holds(),
        "dependency_check_exhaustive": dep.exhaustive,
        "p_all_ones": format_rational(&all_ones),
        "p_all_ones_value": to_f64(&all_ones),
        "finner_ceiling": to_f64(&p).powf(2.5),
        "exceeds_hypergraph_ceiling": strict,
        "holds": holds,
    });
    out.write_result(config, TableOrValue::Value(result))?;
    if holds {
        Ok(())
    } else {
        Err(AppError::Violation(
            "example1 reproduction failed one of its checks".into(),
        ))
    }
}

fn estimate_payload(name: &str, est: &McEstimate, extra: &[(&str, String)]) -> TableOrValue {
    let mut row = vec![
        name.to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        format!("{}", est.estimate),
        format!(
            "{}",
            if est.estimate > 0.0 {
                est.estimate.ln()
            } else {
                f64::NEG_INFINITY
            }
        ),
        format!("seed={};samples={}", est.seed, est.samples),
    ];
    for (k, v) in extra {
        match *k {
            "n" => row[1] = v.clone(),
            "p" => row[2] = v.clone(),
            "t" => row[3] = v.clone(),
            "eps" => row[4] = v.clone(),
            _ => {}
        }
    }
    let json = json!({
        "name": name,
        "estimate": est.estimate,
        "successes": est.successes,
        "samples": est.samples,
        "seed": est.seed,
        "stream": est.stream,
        "half_width": est.half_width,
        "extra": extra.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect::<Map<_, _>>(),
    });
    TableOrValue::Table {
        header: BOUND_CSV_HEADER.to_vec(),
        rows: vec![row],
        annotations: Vec::new(),
        json,
    }
}

fn cmd_simulate(args: SimulateArgs, out: Output) -> Result<()> {
    let (h, source) = load_source(&args.source)?;
    let p_rat = parse_prob(&args.p)?;
    let p = VertexProbabilities::uniform(&h, &p_rat).map_err(|e| usage(e.to_string()))?;
    let config = json!({
        "subcommand": "simulate",
        "which": format!("{:?}", args.which).to_lowercase(),
        "source": source,
        "p": args.p,
        "samples": args.samples,
        "seed": args.seed,
        "eps": args.eps,
        "t": args.t,
    });
    match args.which {
        SimulateKind::Independence => {
            let est = mc::mc_independence(&h, &p, args.samples, args.seed)
                .map_err(|e| usage(e.to_string()))?;
            let extra = vec![("n", h.vertex_count().to_string()), ("p", args.p.clone())];
            out.write_result(config, estimate_payload("mc_independence", &est, &extra))
        }
        SimulateKind::Tail => {
            let (nu, phi) = invariants::fractional_matching_number(&h).map_err(from_invariant)?;
            let t = match (args.t, args.eps) {
                (Some(t), _) => t,
                (None, Some(eps)) => {
                    // t = Φ(mean + ε) with mean = (1/|E|)Σ_e Π_{v∈e} p_v
                    let mean: f64 = h
                        .edges()
                        .iter()
                        .map(|e| e.iter().map(|&v| to_f64(p.get(v))).product::<f64>())
                        .sum::<f64>()
                        / h.edge_count().max(1) as f64;
                    to_f64(&nu) * (mean + eps)
                }
                (None, None) => return Err(usage("tail needs --eps or --t")),
            };
            let est = mc::mc_tail(&h, &p, &phi, t, args.samples, args.seed)
                .map_err(|e| usage(e.to_string()))?;
            let extra = vec![
                ("n", h.vertex_count().to_string()),
                ("p", args.p.clone()),
                ("t", t.to_string()),
                ("eps", args.eps.map(|e| e.to_string()).unwrap_or_default()),
            ];
            out.write_result(config, estimate_payload("mc_tail", &est, &extra))
        }
    }
}
