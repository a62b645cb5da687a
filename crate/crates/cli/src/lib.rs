//! Command implementations behind the `ghcut` binary.
//!
//! Every command writes its deterministic output to the given writer and
//! leaves timing to the caller, so two runs with the same arguments and
//! seed print byte-identical text.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ghcut_core::io::{self, Format};
use ghcut_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "ghcut", version, about = "Minimum cuts, isolating cuts and Gomory-Hu trees")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// File format for graphs and trees, and the report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Dimacs)]
    pub format: FormatArg,
    /// Write recursion statistics as JSON to this path.
    #[arg(long, global = true)]
    pub stats: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dimacs,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dimacs => Format::Dimacs,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    ErdosRenyi,
    Clique,
    PlantedCut,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random connected graph.
    Gen {
        #[arg(long, value_enum, default_value_t = KindArg::ErdosRenyi)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        /// Edge probability for erdos-renyi.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        /// Planted cut value for planted-cut.
        #[arg(long, default_value_t = 3)]
        value: u64,
        #[arg(long, default_value_t = 1)]
        wmin: u64,
        #[arg(long, default_value_t = 10)]
        wmax: u64,
        /// Also write a random spanning tree rooted at `--tree-source`.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        tree_source: usize,
    },
    /// Exact max-flow value and the minimal source side.
    Maxflow { graph: PathBuf, s: usize, t: usize },
    /// Minimum isolating cuts for groups such as "0,1;4;7,8".
    Isolate {
        graph: PathBuf,
        #[arg(long)]
        groups: String,
    },
    /// Guided single-source minimum cuts for the terminals of a tree.
    TreeMincuts(MincutArgs),
    /// As tree-mincuts, for a tree whose source is a leaf.
    LeafMincuts(MincutArgs),
    /// Decide which upper-bound estimates of λ(s, t) are tight.
    Sstcv {
        graph: PathBuf,
        /// Guide tree files; each must contain the source and all terminals.
        #[arg(long = "tree", required = true)]
        trees: Vec<PathBuf>,
        #[arg(long)]
        source: usize,
        /// Estimates such as "3:7,5:4" (terminal:value).
        #[arg(long)]
        estimates: String,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 3.0)]
        reps_coeff: f64,
    },
    /// Gomory-Hu tree by Gusfield's method.
    Ghtree {
        graph: PathBuf,
        /// Check every pair against max-flow; exit code 1 on a counterexample.
        #[arg(long)]
        verify: bool,
    },
    /// Exhaustive ground truth for small graphs (JSON output).
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Recursion-size sweep over graph sizes.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Number of seeded runs per size, starting at `--seed`.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long, default_value_t = 3.0)]
        reps_coeff: f64,
        /// Expected vertex degree of the generated graphs.
        #[arg(long, default_value_t = 6.0)]
        degree: f64,
    },
}

#[derive(Debug, Args)]
pub struct MincutArgs {
    pub graph: PathBuf,
    pub tree: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value_t = 3.0)]
    pub reps_coeff: f64,
    /// Report a witness cut for every value.
    #[arg(long)]
    pub witnesses: bool,
}

#[derive(Debug, Subcommand)]
pub enum OracleQuery {
    Lambda { graph: PathBuf, s: usize, t: usize },
    LambdaTk {
        graph: PathBuf,
        tree: PathBuf,
        t: usize,
        #[arg(long)]
        k: usize,
    },
    EtaTk {
        graph: PathBuf,
        tree: PathBuf,
        t: usize,
        #[arg(long)]
        k: usize,
    },
    Isolating {
        graph: PathBuf,
        #[arg(long)]
        groups: String,
    },
}

/// Machine-readable result of one command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<RecursionStats>,
}

/// What a command produced: the report, its plain-text rendering, and
/// whether a verification found a counterexample.
pub struct Outcome {
    pub report: RunReport,
    pub text: String,
    pub failed: bool,
}

pub fn parse_groups(spec: &str) -> Result<Vec<Vec<usize>>> {
    spec.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|v| v.trim().parse::<usize>().with_context(|| format!("bad vertex {v:?} in groups")))
                .collect()
        })
        .collect()
}

pub fn parse_estimates(spec: &str) -> Result<BTreeMap<usize, u64>> {
    spec.split(',')
        .map(|pair| {
            let (t, v) = pair.split_once(':').with_context(|| format!("expected terminal:value, got {pair:?}"))?;
            Ok((t.trim().parse()?, v.trim().parse()?))
        })
        .collect()
}

fn load_graph(path: &Path, format: Format) -> Result<Graph> {
    io::load_graph(path, format).with_context(|| format!("reading graph {}", path.display()))
}

fn load_tree(path: &Path, format: Format) -> Result<SteinerTree> {
    io::load_tree(path, format).with_context(|| format!("reading tree {}", path.display()))
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs one parsed command. `echo` is the command line to record.
pub fn execute(cli: &Cli, echo: &str) -> Result<Outcome> {
    let format: Format = cli.format.into();
    let seed = cli.seed;
    let mut text = format!("c seed {seed}\n");
    let mut stats = None;
    let mut failed = false;
    let result = match &cli.command {
        Command::Gen { kind, n, p, value, wmin, wmax, tree, tree_source } => {
            let kind = match kind {
                KindArg::ErdosRenyi => GraphKind::ErdosRenyi { p: *p },
                KindArg::Clique => GraphKind::Clique,
                KindArg::PlantedCut => GraphKind::PlantedCut { value: *value },
            };
            let g = generate(kind, *n, seed, (*wmin, *wmax))?;
            text = io::write_graph(&g, format)?;
            if let Some(path) = tree {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let t = random_spanning_tree(&g, *tree_source, &mut rng)?;
                std::fs::write(path, io::write_tree(&t, format)?)?;
            }
            json!({ "n": g.n(), "m": g.m(), "edges": g.edges() })
        }
        Command::Maxflow { graph, s, t } => {
            let g = load_graph(graph, format)?;
            let f = max_flow(&g, *s, *t)?;
            let side = f.source_side(g.n());
            text += &format!("value {}\nsource-side {}\n", f.value, join(&side));
            json!({ "value": f.value, "source_side": side })
        }
        Command::Isolate { graph, groups } => {
            let g = load_graph(graph, format)?;
            let groups = parse_groups(groups)?;
            let r = isolating_cuts(&g, &groups)?;
            let mut rows = Vec::new();
            for c in &r.cuts {
                text += &format!("group {} value {} size {}\n", c.group, c.value, c.side.len());
                rows.push(json!({ "group": c.group, "value": c.value, "size": c.side.len(), "side": c.side }));
            }
            Value::Array(rows)
        }
        Command::TreeMincuts(args) | Command::LeafMincuts(args) => {
            let leaf = matches!(cli.command, Command::LeafMincuts(_));
            let g = load_graph(&args.graph, format)?;
            let tree = load_tree(&args.tree, format)?;
            let cfg = Config { reps_coeff: args.reps_coeff, track_witnesses: args.witnesses, ..Config::default() };
            let mut mu = MuTable::for_tree(&tree);
            let mut st = RecursionStats::new();
            if leaf {
                leaf_mincuts(&g, &tree, args.k, &mut mu, seed, &mut st, &cfg)?;
            } else {
                tree_mincuts(&g, &tree, args.k, &mut mu, seed, &mut st, &cfg)?;
            }
            text += &format!("c source {} k {} reps {}\n", tree.source(), args.k, cfg.repetitions(g.n()));
            for (t, e) in mu.iter() {
                text += &format!("mu {t} {}", e.value);
                if let Some(w) = &e.witness {
                    text += &format!(" side {}", join(&w.side));
                }
                text.push('\n');
            }
            stats = Some(st);
            serde_json::to_value(&mu)?
        }
        Command::Sstcv { graph, trees, source, estimates, k, reps_coeff } => {
            let g = load_graph(graph, format)?;
            let trees = trees.iter().map(|p| load_tree(p, format)).collect::<Result<Vec<_>>>()?;
            let estimates = parse_estimates(estimates)?;
            let mut terminals: Vec<usize> = estimates.keys().copied().collect();
            terminals.push(*source);
            let cfg = Config { reps_coeff: *reps_coeff, ..Config::default() };
            let verdicts = sstcv_verify(&g, &terminals, *source, &estimates, &trees, *k, seed, &cfg)?;
            for (t, v) in &verdicts {
                let word = match v {
                    Verdict::Tight => "tight",
                    Verdict::Loose => "loose",
                };
                text += &format!("{t} {word}\n");
            }
            serde_json::to_value(&verdicts)?
        }
        Command::Ghtree { graph, verify } => {
            let g = load_graph(graph, format)?;
            let t = build_gusfield(&g)?;
            text += &io::write_gh_tree(&t, Format::Dimacs)?;
            let mut out = json!({ "tree": t });
            if *verify {
                match verify_gh(&g, &t)? {
                    None => text += "c verify ok\n",
                    Some(c) => {
                        failed = true;
                        text += &format!("c counterexample {} {} tree {} true {}\n", c.a, c.b, c.tree_value, c.true_value);
                    }
                }
                out["verified"] = json!(!failed);
            }
            out
        }
        Command::Oracle { query } => {
            let value = match query {
                OracleQuery::Lambda { graph, s, t } => {
                    serde_json::to_value(brute_lambda(&load_graph(graph, format)?, *s, *t)?)?
                }
                OracleQuery::LambdaTk { graph, tree, t, k } => {
                    let g = load_graph(graph, format)?;
                    serde_json::to_value(brute_lambda_tk(&g, &load_tree(tree, format)?, *t, *k)?)?
                }
                OracleQuery::EtaTk { graph, tree, t, k } => {
                    let g = load_graph(graph, format)?;
                    serde_json::to_value(brute_eta_tk(&g, &load_tree(tree, format)?, *t, *k)?)?
                }
                OracleQuery::Isolating { graph, groups } => {
                    let g = load_graph(graph, format)?;
                    serde_json::to_value(brute_isolating(&g, &parse_groups(groups)?)?)?
                }
            };
            text = serde_json::to_string_pretty(&value)? + "\n";
            value
        }
        Command::Bench { sizes, k, runs, reps_coeff, degree } => {
            let seeds: Vec<u64> = (seed..seed + runs).collect();
            let table = bench_recursion(sizes, *k, &seeds, *reps_coeff, *degree)?;
            text += &table.render();
            serde_json::to_value(&table)?
        }
    };
    if let (Some(path), Some(st)) = (&cli.stats, &stats) {
        std::fs::write(path, serde_json::to_string_pretty(st)? + "\n")
            .with_context(|| format!("writing stats {}", path.display()))?;
    }
    let report = RunReport { command: echo.to_string(), seed, result, stats };
    if cli.format == FormatArg::Json && !matches!(cli.command, Command::Oracle { .. }) {
        text = serde_json::to_string_pretty(&report)? + "\n";
    }
    Ok(Outcome { report, text, failed })
}

/// Parses `args` (program name first), runs the command and prints its
/// output. Returns the process exit code.
pub fn main_with(args: Vec<String>, out: &mut impl Write) -> Result<i32> {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}")?;
            return Ok(0);
        }
        Err(e) => anyhow::bail!(e.to_string()),
    };
    let echo = args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let outcome = execute(&cli, &echo)?;
    out.write_all(outcome.text.as_bytes())?;
    Ok(if outcome.failed { 1 } else { 0 })
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub calls: u64,
    pub sum_n: u64,
    pub sum_m: u64,
    /// `Σn / ((n − 1) · log^{3k} n · log t)`.
    pub ratio_n: f64,
    /// `Σm / (m · log^{3k} n · log t)`.
    pub ratio_m: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTable {
    pub k: u32,
    pub reps_coeff: f64,
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of ln(ratio_n) against ln(n), over per-size means.
    pub slope_n: f64,
    pub slope_m: f64,
}

impl BenchTable {
    pub fn render(&self) -> String {
        let mut s = format!("c k {} reps-coeff {}\n", self.k, self.reps_coeff);
        s += "c n m seed calls sum_n sum_m ratio_n ratio_m\n";
        for r in &self.rows {
            s += &format!(
                "row {} {} {} {} {} {} {:.6e} {:.6e}\n",
                r.n, r.m, r.seed, r.calls, r.sum_n, r.sum_m, r.ratio_n, r.ratio_m
            );
        }
        s += &format!("slope ratio_n {:.4}\nslope ratio_m {:.4}\n", self.slope_n, self.slope_m);
        s
    }
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let len = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    cov / var
}

/// For each size and seed: a sparse random graph, a random spanning tree
/// rooted at 0, and one `tree_mincuts` run whose recursion sizes are
/// normalized by the predicted bound. Logarithms are base 2.
pub fn bench_recursion(sizes: &[usize], k: u32, seeds: &[u64], reps_coeff: f64, degree: f64) -> Result<BenchTable> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        bail!("sizes must be strictly increasing");
    }
    if seeds.is_empty() {
        bail!("need at least one seed");
    }
    let cfg = Config { reps_coeff, ..Config::default() };
    let mut rows = Vec::new();
    let mut means_n = Vec::new();
    let mut means_m = Vec::new();
    for &n in sizes {
        let (mut acc_n, mut acc_m) = (0.0, 0.0);
        for &seed in seeds {
            let gseed = derive_seed(seed, Phase::Bench, n);
            let p = (degree / n as f64).min(1.0);
            let g = generate(GraphKind::ErdosRenyi { p }, n, gseed, (1, 10))?;
            let mut rng = ChaCha8Rng::seed_from_u64(gseed);
            let tree = random_spanning_tree(&g, 0, &mut rng)?;
            let mut mu = MuTable::new(0);
            let mut stats = RecursionStats::new();
            tree_mincuts(&g, &tree, k, &mut mu, gseed, &mut stats, &cfg)?;
            let total = stats.total();
            let log_n = (n as f64).log2();
            let scale = log_n.powi(3 * k as i32) * (tree.len() as f64).log2();
            let ratio_n = total.vertices as f64 / ((n - 1) as f64 * scale);
            let ratio_m = total.edges as f64 / (g.m() as f64 * scale);
            acc_n += ratio_n;
            acc_m += ratio_m;
            rows.push(BenchRow {
                n,
                m: g.m(),
                seed,
                calls: total.calls,
                sum_n: total.vertices,
                sum_m: total.edges,
                ratio_n,
                ratio_m,
            });
        }
        let runs = seeds.len() as f64;
        means_n.push((n as f64, acc_n / runs));
        means_m.push((n as f64, acc_m / runs));
    }
    Ok(BenchTable {
        k,
        reps_coeff,
        rows,
        slope_n: log_log_slope(&means_n),
        slope_m: log_log_slope(&means_m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_and_estimate_syntax() {
        assert_eq!(parse_groups("0,1;4;7,8").unwrap(), vec![vec![0, 1], vec![4], vec![7, 8]]);
        assert!(parse_groups("0,;1").is_err());
        assert_eq!(parse_estimates("3:7, 5:4").unwrap(), BTreeMap::from([(3, 7), (5, 4)]));
        assert!(parse_estimates("3=7").is_err());
    }

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [64.0, 128.0, 256.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(0.5))).collect();
        assert!((log_log_slope(&pts) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn bench_with_k_zero_counts_the_top_call() {
        let t = bench_recursion(&[16], 0, &[1], 3.0, 4.0).unwrap();
        assert_eq!(t.rows[0].calls, 1);
        assert_eq!(t.rows[0].sum_n, 16);
    }

    #[test]
    fn bench_is_reproducible() {
        let a = bench_recursion(&[16, 32], 1, &[4], 3.0, 4.0).unwrap();
        let b = bench_recursion(&[16, 32], 1, &[4], 3.0, 4.0).unwrap();
        assert_eq!(a.render(), b.render());
        assert!(bench_recursion(&[32, 16], 1, &[4], 3.0, 4.0).is_err());
    }
}
