use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lcdgraph::analytic::{
    beta_mixture, connect_probability, connect_probability_exact, example1_rate, example1_thresholds, example2_rate,
    example2_thresholds, example3_rate, pair_isolation_bound, pair_probability_bound, x_m1, x_m2, z_sigma,
    IsolationBoundParams,
};
use lcdgraph::graph::{read_graph, read_process, write_graph, write_process, GraphHeader};
use lcdgraph::harness::{run_experiment, workers_from_env, ExperimentConfig};
use lcdgraph::maxtree::{forest_m1, influence, prefix_maxtree_present, spanning_recursive_exists};
use lcdgraph::oracle::{exact_distribution, Statistic};
use lcdgraph::stats::{degree_report, is_connected, loop_count, parallel_pair_count};
use lcdgraph::{generate, rng, Error, GenMethod, MultiGraph, Result};

#[derive(Parser)]
#[command(name = "lcdgraph", version, about = "Random pairing preferential attachment graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and write it as an edge list.
    Gen(GenArgs),
    /// Loops, parallel pairs, connectivity and the degree report of a graph file.
    Stats(StatsArgs),
    /// Maximal recursive tree diagnostics of a graph file.
    Maxtree(MaxtreeArgs),
    /// Evaluate the closed-form bounds and thresholds.
    Bounds(BoundsArgs),
    /// Exact law of a statistic by enumerating all pairings.
    Oracle(OracleArgs),
    /// Run a Monte Carlo experiment from a JSON config.
    Mc(McArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// exp, uniform, matching or seq.
    #[arg(long, default_value = "exp")]
    method: String,
    #[arg(long)]
    seed: u64,
    /// Attachment offset of the G_{1,delta} process (method seq, m = 1).
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the exponential increments (method exp).
    #[arg(long)]
    process_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Increments written by `gen --process-out`; enables the degree report.
    #[arg(long)]
    process: Option<PathBuf>,
    /// Prefix exponent of the degree report.
    #[arg(long, default_value_t = 0.3)]
    a: f64,
    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,
}

#[derive(Args)]
struct MaxtreeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Report |U(root)| and |U(root)|/n.
    #[arg(long)]
    root: Option<usize>,
    /// Report whether a maximal recursive tree lies inside [mu].
    #[arg(long)]
    mu: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(subcommand)]
    which: Bounds,
    /// Print tabular results as CSV instead of JSON.
    #[arg(long, value_enum, global = true)]
    table: Option<TableFormat>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
}

#[derive(Subcommand)]
enum Bounds {
    /// J_{m,1}, J_{m,2} of two equal sets; thresholds when --beta is omitted.
    Example1 {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, value_delimiter = ',')]
        beta: Vec<f64>,
    },
    /// K_{m,1}, K_{m,2} of vertex expansion; thresholds when --x is omitted.
    Example2 {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
    },
    /// Set against complement: rates at --x, and x_{m,1}, x_{m,2}.
    Example3 {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
    },
    /// Isolation bound for a pair of sets of sizes mu and nu.
    Pairbound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        mu: u64,
        #[arg(long)]
        nu: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long)]
        r: Option<u64>,
    },
    /// Probability that a spanning recursive tree exists.
    Connect {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Also print the exact rational value.
        #[arg(long)]
        exact: bool,
    },
    /// The degree-cap constant z(sigma).
    Zsigma {
        #[arg(long)]
        sigma: f64,
    },
    /// Beta mixture limit of the scaled max-tree of root r.
    Mixture {
        #[arg(long)]
        r: u32,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        /// Points at which to evaluate pdf and cdf.
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        /// Number of moments to print.
        #[arg(long, default_value_t = 4)]
        moments: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleFormat {
    Json,
    Text,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long)]
    statistic: String,
    /// Prefix size for prefix_maxtree.
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: OracleFormat,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to LCDGRAPH_WORKERS, then to all cores.
    #[arg(long)]
    workers: Option<usize>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn print_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        writeln!(out, "{}", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))?;
    }
    Ok(())
}

fn rate_table(header: [&str; 3], rows: Vec<Vec<f64>>, table: Option<TableFormat>) -> Result<()> {
    match table {
        Some(TableFormat::Csv) => print_csv(&header, &rows),
        None => print_json(&Value::Array(
            rows.iter().map(|r| json!({ header[0]: r[0], header[1]: r[1], header[2]: r[2] })).collect(),
        )),
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let method: GenMethod = a.method.parse()?;
    if a.process_out.is_some() && method != GenMethod::Exponential {
        return Err(Error::UnsupportedMethod(format!("--process-out needs method exp, got {method}")));
    }
    let sample = generate(method, a.n, a.m, a.delta, &mut rng::stream(a.seed))?;
    let header = GraphHeader { n: a.n, m: a.m, method: method.to_string(), seed: a.seed };
    match &a.out {
        Some(p) => write_graph(create(p)?, &header, &sample.graph)?,
        None => write_graph(io::stdout().lock(), &header, &sample.graph)?,
    }
    if let (Some(p), Some(process)) = (&a.process_out, &sample.process) {
        write_process(create(p)?, process)?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<(GraphHeader, MultiGraph)> {
    read_graph(open(path)?)
}

fn stats(a: StatsArgs) -> Result<()> {
    let (header, g) = load(&a.input)?;
    let process = a.process.as_deref().map(|p| read_process(open(p)?)).transpose()?;
    let degrees = match &process {
        Some(p) => Some(degree_report(&g, Some(p), a.a)?),
        None => None,
    };
    let fields: Vec<(&str, String)> = [
        ("n", g.n().to_string()),
        ("m", g.m().to_string()),
        ("method", header.method.clone()),
        ("seed", header.seed.to_string()),
        ("loops", loop_count(&g).to_string()),
        ("parallel_pairs", parallel_pair_count(&g).to_string()),
        ("connected", is_connected(&g).to_string()),
        ("spanning_recursive", spanning_recursive_exists(&g).to_string()),
        ("max_degree", g.degrees().iter().max().unwrap().to_string()),
    ]
    .into_iter()
    .chain(degrees.iter().flat_map(|d| {
        [("j_n", d.j_n.to_string()), ("l1", d.l1.to_string()), ("min_prefix_degree", d.min_prefix_degree.to_string())]
    }))
    .collect();
    match a.report {
        ReportFormat::Csv => {
            let mut out = io::stdout().lock();
            writeln!(out, "{}", fields.iter().map(|f| f.0).collect::<Vec<_>>().join(","))?;
            writeln!(out, "{}", fields.iter().map(|f| f.1.as_str()).collect::<Vec<_>>().join(","))?;
        }
        ReportFormat::Json => {
            let mut v = json!({
                "n": g.n(),
                "m": g.m(),
                "method": header.method,
                "seed": header.seed,
                "loops": loop_count(&g),
                "parallel_pairs": parallel_pair_count(&g),
                "connected": is_connected(&g),
                "spanning_recursive": spanning_recursive_exists(&g),
                "max_degree": g.degrees().iter().max(),
            });
            if let Some(d) = degrees {
                v["degree_report"] = serde_json::to_value(d)?;
            }
            print_json(&v)?;
        }
    }
    Ok(())
}

fn maxtree(a: MaxtreeArgs) -> Result<()> {
    let (_, g) = load(&a.input)?;
    let mut v = json!({ "n": g.n(), "m": g.m(), "spanning_recursive": spanning_recursive_exists(&g) });
    if g.m() == 1 {
        let f = forest_m1(&g)?;
        v["forest"] = json!({ "roots": f.roots, "sizes": f.sizes, "largest": f.largest() });
    }
    if let Some(r) = a.root {
        let size = influence(&g, r)?;
        v["root"] = json!({ "root": r, "size": size, "scaled": size as f64 / g.n() as f64 });
    }
    if let Some(mu) = a.mu {
        v["prefix_maxtree"] = json!({ "mu": mu, "present": prefix_maxtree_present(&g, mu) });
    }
    print_json(&v)
}

fn bounds(a: BoundsArgs) -> Result<()> {
    let table = a.table;
    match a.which {
        Bounds::Example1 { m, eps, c, beta } => {
            if beta.is_empty() {
                return print_json(&serde_json::to_value(example1_thresholds(m, eps, c)?)?);
            }
            let rows = beta
                .iter()
                .map(|&b| example1_rate(m, b, eps, c).map(|(j1, j2)| vec![b, j1, j2]))
                .collect::<Result<_>>()?;
            rate_table(["beta", "j1", "j2"], rows, table)
        }
        Bounds::Example2 { m, rho, eps, c, x } => {
            if x.is_empty() {
                return print_json(&serde_json::to_value(example2_thresholds(m, rho, eps, c)?)?);
            }
            let rows = x
                .iter()
                .map(|&x| example2_rate(m, rho, x, eps, c).map(|(k1, k2)| vec![x, k1, k2]))
                .collect::<Result<_>>()?;
            rate_table(["x", "k1", "k2"], rows, table)
        }
        Bounds::Example3 { m, gamma, eps, c, x } => {
            if x.is_empty() {
                return print_json(&json!({
                    "x_m1": x_m1(m, gamma, eps, c)?,
                    "x_m2": x_m2(m, gamma, eps)?,
                }));
            }
            let rows = x
                .iter()
                .map(|&x| example3_rate(m, gamma, x, eps, c).map(|(k1, k2)| vec![x, k1, k2]))
                .collect::<Result<_>>()?;
            rate_table(["x", "k1", "k2"], rows, table)
        }
        Bounds::Pairbound { n, m, mu, nu, eps, delta, c, r } => {
            let p = IsolationBoundParams { n, m, mu, nu, eps, delta, c, r };
            let pair = pair_probability_bound(&p)?;
            let union = pair_isolation_bound(&p)?;
            print_json(&json!({
                "pair": { "ln": pair.ln, "value": pair.value() },
                "union": { "ln": union.ln, "value": union.value() },
            }))
        }
        Bounds::Connect { n, m, exact } => {
            let mut v = json!({ "n": n, "m": m, "probability": connect_probability(n, m)? });
            if exact {
                v["exact"] = json!(connect_probability_exact(n, m)?.to_string());
            }
            print_json(&v)
        }
        Bounds::Zsigma { sigma } => print_json(&json!({ "sigma": sigma, "z": z_sigma(sigma)? })),
        Bounds::Mixture { r, delta, x, moments } => {
            let mix = beta_mixture(r, delta)?;
            if let Some(TableFormat::Csv) = table {
                let rows: Vec<Vec<f64>> = x.iter().map(|&x| vec![x, mix.pdf(x), mix.cdf(x)]).collect();
                return print_csv(&["x", "pdf", "cdf"], &rows);
            }
            print_json(&json!({
                "r": r,
                "delta": delta,
                "components": mix.components.iter().map(|c| json!({
                    "weight": c.weight, "alpha": c.alpha, "beta": c.beta
                })).collect::<Vec<_>>(),
                "moments": (1..=moments).map(|l| mix.moment(l)).collect::<Vec<_>>(),
                "points": x.iter().map(|&x| json!({ "x": x, "pdf": mix.pdf(x), "cdf": mix.cdf(x) })).collect::<Vec<_>>(),
            }))
        }
    }
}

fn oracle(a: OracleArgs) -> Result<()> {
    let stat = Statistic::from_name(&a.statistic, a.mu)?;
    let d = exact_distribution(a.n, a.m, stat)?;
    match a.format {
        OracleFormat::Json => print_json(&serde_json::to_value(d.summary())?),
        OracleFormat::Text => {
            let mut out = io::stdout().lock();
            writeln!(out, "# {} n={} m={} total={}", stat, a.n, a.m, d.total)?;
            for e in d.summary().entries {
                writeln!(out, "{}\t{}\t{}", e.value, e.probability, e.p)?;
            }
            Ok(())
        }
    }
}

/// Returns whether every declared test passed.
fn mc(a: McArgs) -> Result<bool> {
    let cfg = ExperimentConfig::from_path(&a.config)?;
    let workers = match a.workers {
        Some(k) => Some(k),
        None => workers_from_env()?,
    };
    let report = run_experiment(&cfg, workers)?;
    std::fs::create_dir_all(&a.out)?;
    let json_name = cfg.output.json.clone().unwrap_or_else(|| format!("{}.json", cfg.name));
    let csv_name = cfg.output.csv.clone().unwrap_or_else(|| format!("{}.csv", cfg.name));
    let mut json_out = create(&a.out.join(json_name))?;
    writeln!(json_out, "{}", report.to_json()?)?;
    json_out.flush()?;
    report.write_csv(create(&a.out.join(csv_name))?)?;
    for t in &report.tests {
        let label = t.cell.as_deref().or(t.group.as_deref()).unwrap_or("-");
        eprintln!("{} {} [{}] {}", if t.pass { "PASS" } else { "FAIL" }, t.test, label, t.detail);
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a).map(|_| true),
        Command::Stats(a) => stats(a).map(|_| true),
        Command::Maxtree(a) => maxtree(a).map(|_| true),
        Command::Bounds(a) => bounds(a).map(|_| true),
        Command::Oracle(a) => oracle(a).map(|_| true),
        Command::Mc(a) => mc(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
