use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use netband::graph::{greedy_square_coloring, neighborhood_partition, InterferenceGraph};
use netband::harness::{
    emit_results, emit_sweep, graph_gate, run_experiment, sweep_n, AggregateResult,
    ExperimentConfig, GraphSpec,
};
use netband::instances::{
    random_instance, star_hard_instance, theorem2_base_instance, theorem2_confusing_instance,
};
use netband::oracle::{DEFAULT_BUDGET, DEFAULT_RESTARTS};
use netband::{BanditInstance, OracleMode};

#[derive(Parser)]
#[command(
    name = "netband",
    version,
    about = "Bandit experiments under network interference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON config.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Reuse run 0's instance in every run.
        #[arg(long)]
        fixed_instance: bool,
    },
    /// Run the config once per unit count with horizon 10·k^N.
    SweepN {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Comma-separated unit counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n_values: Vec<usize>,
    },
    /// Print structural statistics of a graph.
    GraphInfo {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Write an instance as JSON.
    GenInstance {
        #[command(subcommand)]
        generator: Generator,
        /// Output file; stdout if absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Output directory; overrides the config's `output_dir`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    oracle: Option<OracleChoice>,
    /// Assignment budget for the exact oracle.
    #[arg(long)]
    oracle_budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleChoice {
    Exact,
    Local,
    Auto,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Graph JSON file (`{"n": .., "edges": [[i, j], ..]}`).
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Random connected graph, `N:MAX_DEGREE`.
    #[arg(long, value_name = "N:D")]
    bounded_degree: Option<String>,
    /// Clique clusters joined by `R` edges per pair, `S1,S2,..:R`.
    #[arg(long, value_name = "SIZES:R")]
    clique_sparse: Option<String>,
    #[arg(long, value_name = "N")]
    complete: Option<usize>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Generator {
    /// Uniform [0, 1] means.
    Random {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        noise_sd: f64,
    },
    /// Reward only when a whole neighborhood plays arm 0.
    Theorem2Base {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 1.0)]
        epsilon_scale: f64,
    },
    /// A base instance with a second, better assignment avoiding arm 0.
    Theorem2Confusing {
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        a_prime: Vec<usize>,
    },
    /// Star whose centre has one better configuration.
    Star {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        gap: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_pair<'a>(text: &'a str, what: &str) -> Result<(&'a str, &'a str)> {
    text.split_once(':')
        .with_context(|| format!("{what} must look like A:B, got {text:?}"))
}

impl GraphSource {
    fn spec(&self) -> Result<GraphSpec> {
        if let Some(path) = &self.graph {
            return Ok(GraphSpec::File { path: path.clone() });
        }
        if let Some(text) = &self.bounded_degree {
            let (n, d) = parse_pair(text, "--bounded-degree")?;
            return Ok(GraphSpec::BoundedDegree {
                n_units: n.parse()?,
                max_degree: d.parse()?,
            });
        }
        if let Some(text) = &self.clique_sparse {
            let (sizes, r) = parse_pair(text, "--clique-sparse")?;
            let cluster_sizes = sizes.split(',').map(str::parse).collect::<Result<_, _>>()?;
            return Ok(GraphSpec::CliqueSparse {
                cluster_sizes,
                cross_edges: r.parse()?,
            });
        }
        if let Some(n_units) = self.complete {
            return Ok(GraphSpec::Complete { n_units });
        }
        bail!("no graph given")
    }

    fn build(&self, seed: u64) -> Result<InterferenceGraph> {
        Ok(self.spec()?.build(seed)?)
    }
}

fn load_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    if let Some(w) = args.workers {
        cfg.workers = Some(w);
    }
    let budget = args.oracle_budget.unwrap_or(match cfg.oracle {
        OracleMode::Exact { budget } | OracleMode::Auto { budget, .. } => budget,
        OracleMode::LocalSearch { .. } => DEFAULT_BUDGET,
    });
    let restarts = match cfg.oracle {
        OracleMode::LocalSearch { restarts } | OracleMode::Auto { restarts, .. } => restarts,
        OracleMode::Exact { .. } => DEFAULT_RESTARTS,
    };
    cfg.oracle = match args.oracle {
        Some(OracleChoice::Exact) => OracleMode::Exact { budget },
        Some(OracleChoice::Local) => OracleMode::LocalSearch { restarts },
        Some(OracleChoice::Auto) => OracleMode::Auto { budget, restarts },
        None => match cfg.oracle {
            OracleMode::Exact { .. } => OracleMode::Exact { budget },
            OracleMode::Auto { .. } => OracleMode::Auto { budget, restarts },
            local => local,
        },
    };
    if let Some(out) = &args.out {
        cfg.output_dir = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output_dir(cfg: &ExperimentConfig) -> Result<&Path> {
    cfg.output_dir
        .as_deref()
        .context("no output directory: pass --out or set output_dir in the config")
}

fn print_summary(res: &AggregateResult) {
    println!(
        "{:<16} {:>6} {:>14} {:>10}",
        "algorithm", "runs", "final regret", "stderr"
    );
    for s in &res.summaries {
        println!(
            "{:<16} {:>6} {:>14.3} {:>10.3}",
            s.algorithm, s.n_runs, s.final_mean, s.final_stderr
        );
    }
    for skip in &res.skipped {
        println!(
            "skipped {} in run {}: {}",
            skip.algorithm, skip.run, skip.reason
        );
    }
}

fn write_instance(inst: &BanditInstance, out: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(inst)? + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            exp,
            fixed_instance,
        } => {
            let mut cfg = load_config(&exp)?;
            cfg.fixed_instance |= fixed_instance;
            let dir = output_dir(&cfg)?.to_path_buf();
            let res = run_experiment(&cfg)?;
            emit_results(&res, &dir)?;
            print_summary(&res);
            println!("results written to {}", dir.display());
        }
        Command::SweepN { exp, n_values } => {
            let cfg = load_config(&exp)?;
            let dir = output_dir(&cfg)?.to_path_buf();
            let results = sweep_n(&cfg, &n_values)?;
            let table = emit_sweep(&results, &dir)?;
            for (n, res) in &results {
                println!("N = {n}, T = {}", res.config.horizon);
                print_summary(res);
            }
            println!("sweep table written to {}", table.display());
        }
        Command::GraphInfo { graph, k } => {
            let g = graph.build(0)?;
            let stats = graph_gate(&g, k)?;
            let partition = neighborhood_partition(&g);
            let coloring = greedy_square_coloring(&g);
            println!("units (N): {}", stats.n_units);
            println!("edges: {}", stats.n_edges);
            println!("max degree (Δ): {}", stats.max_degree);
            println!("classes (M): {}", stats.n_classes);
            for (j, class) in partition.classes().iter().enumerate() {
                println!(
                    "  P{}: {:?} (degree {})",
                    j + 1,
                    class,
                    partition.common_degree(j)
                );
            }
            println!("greedy square colors (L): {}", stats.n_colors);
            for (l, class) in coloring.classes().iter().enumerate() {
                println!("  S{}: {:?}", l + 1, class);
            }
            match stats.warmup_rounds {
                Some(t0) => println!("initialization rounds (T0) for k = {k}: {t0}"),
                None => println!("initialization rounds (T0) for k = {k}: overflow"),
            }
        }
        Command::GenInstance { generator, out } => {
            let inst = match generator {
                Generator::Random { graph, k, noise_sd } => {
                    random_instance(&graph.source.build(graph.seed)?, k, graph.seed)?
                        .with_noise_sd(noise_sd)?
                }
                Generator::Theorem2Base {
                    graph,
                    k,
                    horizon,
                    epsilon_scale,
                } => theorem2_base_instance(
                    &graph.source.build(graph.seed)?,
                    k,
                    horizon,
                    epsilon_scale,
                )?,
                Generator::Theorem2Confusing { base, a_prime } => {
                    let text = std::fs::read_to_string(&base)
                        .with_context(|| format!("reading {}", base.display()))?;
                    let base: BanditInstance = serde_json::from_str(&text)?;
                    theorem2_confusing_instance(&base, &a_prime)?
                }
                Generator::Star {
                    degree,
                    k,
                    gap,
                    seed,
                } => star_hard_instance(degree, k, gap, seed)?,
            };
            write_instance(&inst, out.as_deref())?;
        }
    }
    Ok(())
}
