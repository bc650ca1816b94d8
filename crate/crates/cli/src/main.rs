//! `kcolor`: command-line front end for the k-coloring transfer-matrix library.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use kcolor::coloring::{
    brute_force_count, count_liftable_torus, vertex_configs, vertex_count, Boundary, CountTarget, DEFAULT_SEARCH_BUDGET,
};
use kcolor::eigen::{lambda_max, power_iteration, PowerOptions};
use kcolor::extrapolation::{fit_inverse_poly, gnuplot_data, parse_csv, DEFAULT_DEGREE};
use kcolor::row::{config_count, decode};
use kcolor::series::{
    eulerian_cycle_contribution, non_eulerian_triple_brute_force, ratio_to_f64, w_estimate, MAX_DENSE_K,
};
use kcolor::trace::{cylinder_count, open_lattice_count, per_site, strip_count};
use kcolor::transfer::{build_b_recursive, TransferMatrix, DEFAULT_DENSE_BUDGET};
use kcolor::Error;

/// Default cap on the length of vectors handled by the matrix-free eigensolver.
const DEFAULT_VECTOR_BUDGET: u64 = 1 << 24;

#[derive(Parser, Debug)]
#[command(
    name = "kcolor",
    version,
    about = "Exact counts and transfer-matrix estimates for k-colorings of the square lattice"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Omit the timestamp and timing fields so JSON output is reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Run every redundant computation path and fail on disagreement.
    #[arg(long, global = true)]
    verify: bool,
    /// Largest matrix dimension materialized densely.
    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_BUDGET)]
    memory_budget: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Largest eigenvalue of the row transfer matrix over a range of widths.
    Eigen {
        #[arg(long)]
        k: u32,
        /// Width or inclusive range, e.g. `10` or `1..10`.
        #[arg(long, value_parser = parse_range)]
        p: (usize, usize),
        /// Longest vector the matrix-free solver may allocate.
        #[arg(long, default_value_t = DEFAULT_VECTOR_BUDGET)]
        vector_budget: u64,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iterations: u64,
    },
    /// Exact count on a finite m × p lattice.
    Count {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_boundary, default_value = "cylinder")]
        boundary: Boundary,
        #[arg(long, value_parser = parse_target, default_value = "edge-states")]
        what: CountTarget,
        /// Largest search space the exhaustive counter will explore.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        search_budget: u128,
    },
    /// Series estimate of the per-site entropy.
    Series {
        #[arg(long)]
        k: u32,
    },
    /// Fit a width sequence to a polynomial in 1/p and report the limit.
    Fit {
        /// CSV with header `p,value`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: usize,
        /// Also write gnuplot data (points and fitted curve) here.
        #[arg(long)]
        gnuplot: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// List vertex or row configurations.
    Enumerate {
        #[arg(value_enum)]
        what: Enumerable,
        #[arg(long)]
        k: u32,
        /// Row width (rows only).
        #[arg(long)]
        p: Option<usize>,
    },
    /// Export a dense transfer matrix.
    Matrix {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: usize,
        /// Component `A_n`; omit for the full `B`.
        #[arg(long)]
        n: Option<u32>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Enumerable {
    Vertices,
    Rows,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad range start {lo:?}: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad range end {hi:?}: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("range {s:?} must satisfy 1 <= start <= end"));
    }
    Ok((lo, hi))
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target(s: &str) -> Result<CountTarget, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::SearchBudgetExceeded { .. } => 3,
            Error::NonConvergence { .. } => 4,
            Error::UnsupportedK(_) | Error::InvalidEdgeState { .. } | Error::InvalidParameter(_) | Error::Parse(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn mismatch(what: &str, detail: String) -> Failure {
    Failure { code: 1, message: format!("verification failed: {what}: {detail}") }
}

/// Rendered output plus an optional trailing failure (partial results).
struct Report {
    text: String,
    failure: Option<Failure>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, failure: None }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|report| {
        match &cli.global.output {
            Some(path) => std::fs::write(path, &report.text)?,
            None => print!("{}", report.text),
        }
        Ok(report.failure)
    });
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(f)) | Err(f) => {
            eprintln!("kcolor: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Eigen { k, p, vector_budget, tolerance, max_iterations } => {
            let opts = PowerOptions { tolerance: *tolerance, max_iterations: *max_iterations };
            cmd_eigen(g, *k, *p, *vector_budget, opts)
        }
        Command::Count { m, p, k, boundary, what, search_budget } => {
            let req = CountRequest { m: *m, p: *p, k: *k, boundary: *boundary, what: *what };
            cmd_count(g, req, *search_budget).map(Report::ok)
        }
        Command::Series { k } => cmd_series(g, *k).map(Report::ok),
        Command::Fit { input, degree, gnuplot, samples } => {
            cmd_fit(g, input, *degree, gnuplot.as_ref(), *samples).map(Report::ok)
        }
        Command::Enumerate { what, k, p } => cmd_enumerate(g, *what, *k, *p).map(Report::ok),
        Command::Matrix { k, p, n } => cmd_matrix(g, *k, *p, *n).map(Report::ok),
    }
}

/// Top-level JSON envelope; the timestamp is the only nondeterministic field.
fn envelope(g: &Global, command: &str, body: Value) -> String {
    let mut obj = json!({ "command": command });
    if !g.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        obj["generated_at"] = json!(secs);
    }
    if let (Value::Object(dst), Value::Object(src)) = (&mut obj, body) {
        dst.extend(src);
    }
    let mut text = serde_json::to_string_pretty(&obj).expect("json values serialize");
    text.push('\n');
    text
}

fn cmd_eigen(
    g: &Global,
    k: u32,
    (lo, hi): (usize, usize),
    vector_budget: u64,
    opts: PowerOptions,
) -> Result<Report, Failure> {
    let mut rows = Vec::new();
    let mut failure = None;
    for p in lo..=hi {
        let dim = config_count(p, k)?;
        if dim > vector_budget {
            failure = Some(Failure::from(Error::BudgetExceeded { dim, budget: vector_budget }));
            break;
        }
        let result = match lambda_max(k, p, opts) {
            Ok(r) => r,
            Err(e @ Error::NonConvergence { .. }) if !rows.is_empty() => {
                failure = Some(e.into());
                break;
            }
            Err(e) => return Err(e.into()),
        };
        if g.verify && dim <= g.memory_budget {
            let b = build_b_recursive(k, p, g.memory_budget)?.to_f64();
            let (dense, _, _) = power_iteration(|v| b.matvec(v), b.dim(), opts)?;
            if (dense - result.lambda_max).abs() > 1e-9 * dense {
                return Err(mismatch(
                    "eigenvalue",
                    format!("p = {p}: dense {dense} vs implicit {}", result.lambda_max),
                ));
            }
        }
        rows.push(result);
    }
    if let Some(f) = &mut failure {
        f.message = format!("stopped early, partial results shown: {}", f.message);
    }

    let text = match g.format {
        Format::Json => envelope(g, "eigen", json!({ "k": k, "results": rows })),
        Format::Csv => {
            let mut s = String::from("p,lambda_max,per_site,iterations,residual\n");
            for r in &rows {
                writeln!(s, "{},{},{},{},{:e}", r.p, r.lambda_max, r.per_site_estimate, r.iterations, r.residual)
                    .unwrap();
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:>4}  {:>22}  {:>10}\n", "p", "lambda_max", "per_site");
            for r in &rows {
                writeln!(s, "{:>4}  {:>22.12}  {:>10.5}", r.p, r.lambda_max, r.per_site_estimate).unwrap();
            }
            s
        }
    };
    Ok(Report { text, failure })
}

/// Every computation path that applies to a count request, cheapest first.
fn count_paths(req: &CountRequest, g: &Global) -> Vec<&'static str> {
    let CountRequest { m, p, k, boundary, what } = *req;
    let dense_ok = config_count(p, k).map(|d| d <= g.memory_budget).unwrap_or(false);
    let mut paths = Vec::new();
    match (what, boundary) {
        (CountTarget::EdgeStates, Boundary::Cylinder) => {
            if k == 3 && (2..=4).contains(&m) {
                paths.push("closed-form");
            }
            if dense_ok {
                paths.push("dense-trace");
            }
        }
        (CountTarget::EdgeStates, Boundary::Open) => {
            if dense_ok {
                paths.push("transfer-sum");
            }
        }
        (CountTarget::Colorings, Boundary::Torus) => paths.push("liftable-edge-states"),
        _ => {}
    }
    paths.push("brute-force");
    paths
}

fn count_by(path: &str, req: &CountRequest, budget: u128, g: &Global) -> kcolor::Result<BigUint> {
    let CountRequest { m, p, k, boundary, what } = *req;
    match path {
        "closed-form" => strip_count(m, p),
        "dense-trace" => cylinder_count(k, m, p, g.memory_budget),
        "transfer-sum" => open_lattice_count(k, m, p),
        "liftable-edge-states" => Ok(count_liftable_torus(m as usize, p, k, budget)? * k),
        _ => brute_force_count(m as usize, p, k, boundary, what, budget),
    }
}

#[derive(Debug, Clone, Copy)]
struct CountRequest {
    m: u32,
    p: usize,
    k: u32,
    boundary: Boundary,
    what: CountTarget,
}

fn cmd_count(g: &Global, req: CountRequest, budget: u128) -> Result<String, Failure> {
    if req.m == 0 || req.p == 0 {
        return Err(Error::InvalidParameter("count needs m, p >= 1".into()).into());
    }
    let paths = count_paths(&req, g);
    let start = Instant::now();
    let (method, count) = if g.verify {
        let mut results: Vec<(&str, BigUint)> = Vec::new();
        for path in &paths {
            match count_by(path, &req, budget, g) {
                Ok(c) => results.push((path, c)),
                // Brute force is the fallback of last resort; skipping it is fine when another path answered.
                Err(Error::SearchBudgetExceeded { .. }) if !results.is_empty() => {}
                Err(e) => return Err(e.into()),
            }
        }
        let (first, value) = results[0].clone();
        if let Some((other, v)) = results.iter().find(|(_, v)| *v != value) {
            return Err(mismatch("count", format!("{first} gives {value}, {other} gives {v}")));
        }
        (results.iter().map(|r| r.0).collect::<Vec<_>>().join("+"), value)
    } else {
        (paths[0].to_string(), count_by(paths[0], &req, budget, g)?)
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    // Sites per lattice: faces for colorings, vertices for edge states.
    let sites = match (req.what, req.boundary) {
        (CountTarget::EdgeStates, Boundary::Open) => u64::from(req.m - 1) * req.p as u64,
        _ => u64::from(req.m) * req.p as u64,
    };
    let site_value = per_site(&count, sites);

    Ok(match g.format {
        Format::Json => {
            let mut body = json!({
                "m": req.m, "p": req.p, "k": req.k,
                "boundary": req.boundary, "what": req.what,
                "count": count.to_string(), "per_site": site_value, "method": method,
            });
            if !g.no_timestamp {
                body["elapsed_ms"] = json!(elapsed_ms);
            }
            envelope(g, "count", body)
        }
        Format::Csv => format!(
            "m,p,k,boundary,what,count,per_site,method\n{},{},{},{},{},{},{},{}\n",
            req.m, req.p, req.k, req.boundary, req.what, count, site_value, method
        ),
        Format::Table => format!("{count}\n"),
    })
}

fn cmd_series(g: &Global, k: u32) -> Result<String, Failure> {
    let est = w_estimate(k)?;
    if g.verify {
        // Each cycle contribution cross-checks its trace against matrix powers internally.
        for n in 3..=6 {
            eulerian_cycle_contribution(k, n)?;
        }
        if k <= MAX_DENSE_K {
            let brute = non_eulerian_triple_brute_force(k, [1, 1, k - 2])?;
            if brute != est.non_eulerian_triple {
                return Err(mismatch(
                    "non-Eulerian triple",
                    format!("closed form {} vs brute force {brute}", est.non_eulerian_triple),
                ));
            }
        }
    }
    Ok(match g.format {
        Format::Json => envelope(g, "series", serde_json::to_value(&est).expect("serializable")),
        Format::Csv => format!(
            "k,M_k,pauling,estimate_exact,estimate,non_eulerian_triple\n{},{},{},{},{},{}\n",
            est.k, est.m_k, est.pauling, est.estimate_exact, est.estimate, est.non_eulerian_triple
        ),
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "k                    {}", est.k).unwrap();
            writeln!(s, "M_k                  {}", est.m_k).unwrap();
            writeln!(s, "pauling              {} = {}", est.pauling, ratio_to_f64(&est.pauling)).unwrap();
            for c in &est.corrections {
                writeln!(s, "cycle n={}           {} = {:e}", c.n, c.value, ratio_to_f64(&c.value)).unwrap();
            }
            writeln!(s, "estimate             {} = {}", est.estimate_exact, est.estimate).unwrap();
            writeln!(s, "non-Eulerian triple  {}", est.non_eulerian_triple).unwrap();
            s
        }
    })
}

fn cmd_fit(
    g: &Global,
    input: &PathBuf,
    degree: usize,
    gnuplot: Option<&PathBuf>,
    samples: usize,
) -> Result<String, Failure> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", input.display()) })?;
    let data = parse_csv(&text)?;
    let fit = fit_inverse_poly(&data, degree)?;
    if let Some(path) = gnuplot {
        std::fs::write(path, gnuplot_data(&fit, samples))?;
    }
    Ok(match g.format {
        Format::Json => envelope(
            g,
            "fit",
            json!({
                "degree": fit.degree, "limit": fit.limit(), "coefficients": fit.coefficients,
                "residual_rms": fit.residual_rms, "condition_number": fit.condition_number, "points": fit.data.len(),
            }),
        ),
        Format::Csv => {
            let mut s = String::from("i,coefficient\n");
            for (i, c) in fit.coefficients.iter().enumerate() {
                writeln!(s, "{i},{c}").unwrap();
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "a0 = {:.8}", fit.limit()).unwrap();
            for (i, c) in fit.coefficients.iter().enumerate().skip(1) {
                writeln!(s, "a{i} = {c:.8}").unwrap();
            }
            writeln!(s, "rms residual = {:e}, condition = {:e}", fit.residual_rms, fit.condition_number).unwrap();
            s
        }
    })
}

fn cmd_enumerate(g: &Global, what: Enumerable, k: u32, p: Option<usize>) -> Result<String, Failure> {
    let rows: Vec<(u64, Vec<u32>)> = match what {
        Enumerable::Vertices => {
            vertex_count(k)?;
            vertex_configs(k)?.into_iter().zip(0u64..).map(|(v, i)| (i, v.states.to_vec())).collect()
        }
        Enumerable::Rows => {
            let p = p.ok_or_else(|| Failure { code: 2, message: "enumerate rows needs --p".into() })?;
            let n = config_count(p, k)?;
            if n > g.memory_budget {
                return Err(Error::BudgetExceeded { dim: n, budget: g.memory_budget }.into());
            }
            (0..n).map(|i| Ok((i, decode(i, p, k)?))).collect::<kcolor::Result<_>>()?
        }
    };
    let label = match what {
        Enumerable::Vertices => "up,right,down,left",
        Enumerable::Rows => "states",
    };
    Ok(match g.format {
        Format::Json => {
            let items: Vec<Value> = rows.iter().map(|(i, s)| json!({ "index": i, "states": s })).collect();
            envelope(
                g,
                "enumerate",
                json!({ "k": k, "what": format!("{what:?}").to_lowercase(), "count": rows.len(), "items": items }),
            )
        }
        Format::Csv | Format::Table => {
            let sep = if g.format == Format::Csv { "," } else { " " };
            let mut s = format!(
                "index{sep}{}\n",
                if g.format == Format::Csv { label.to_string() } else { label.replace(',', " ") }
            );
            for (i, states) in &rows {
                let cols: Vec<String> = states.iter().map(u32::to_string).collect();
                writeln!(s, "{i}{sep}{}", cols.join(sep)).unwrap();
            }
            s
        }
    })
}

fn cmd_matrix(g: &Global, k: u32, p: usize, n: Option<u32>) -> Result<String, Failure> {
    let matrix = match n {
        Some(n) => TransferMatrix::component(k, n, p, g.memory_budget)?,
        None => TransferMatrix::full(k, p, g.memory_budget)?,
    };
    let dense = matrix.dense().expect("built densely");
    Ok(match g.format {
        Format::Json => envelope(g, "matrix", serde_json::to_value(matrix.export()).expect("serializable")),
        Format::Csv | Format::Table => dense.to_csv(),
    })
}
