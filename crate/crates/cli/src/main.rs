//! `hpfold`: fold HP sequences, run the benchmark protocol, or enumerate
//! short chains exhaustively.
//!
//! Scores and move sequences go to stdout and are reproducible from
//! `--seed`; timings and playout counts go to stderr.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hpfold_core::baselines::{GbfsParams, MoveCoding, NrpaParams, UctParams};
use hpfold_core::bench::report::{emit_report, Report, ReportFormat};
use hpfold_core::bench::{self, fixed_budget_runs, restart_runs, Problem, RunRecord, MOLECULES};
use hpfold_core::enumerate::enumerate;
use hpfold_core::lattice::{moves_to_string, parse_sequence_file, ChainState};
use hpfold_core::{
    Algorithm, Budget, Dimension, HpSequence, LnmcsParams, NmcsParams, PlayoutParams, RewardScheme, RngStream,
    ThresholdPolicy,
};

#[derive(Parser)]
#[command(name = "hpfold", version, about = "Monte Carlo search for HP-model lattice protein folding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search one or more sequences.
    Run(RunArgs),
    /// Run the built-in 48-mer benchmark.
    Bench(BenchArgs),
    /// Exhaustively enumerate a short chain.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

impl Toggle {
    fn on(self) -> bool {
        self == Toggle::On
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoName {
    Playout,
    Nmcs,
    Lnmcs,
    Nrpa,
    Gnrpa,
    Gbfs,
    Uct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Threshold {
    Max,
    Mean,
    Median,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Coding {
    Ply,
    LastK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Protocol {
    /// Restart on timeout until the target score is reached.
    Restart,
    /// One budgeted run each, no restarts.
    Fixed,
}

#[derive(Args, Clone, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "lnmcs")]
    algo: AlgoName,
    /// Nesting level (NMCS, LNMCS, NRPA, GNRPA).
    #[arg(long, default_value_t = 3)]
    level: u32,
    /// Playout softmax bias.
    #[arg(long, default_value_t = 20.0)]
    bias: f64,
    /// Guidance penalty per H-P adjacency in playouts.
    #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
    hp_penalty: f64,
    /// LNMCS playouts per child estimate.
    #[arg(long, default_value_t = 20)]
    eval_playouts: u32,
    /// LNMCS pruning ratio.
    #[arg(long, default_value_t = 0.9)]
    ratio: f64,
    #[arg(long, value_enum, default_value = "max")]
    threshold: Threshold,
    /// Discard evaluation playout sequences, as in the bare pseudocode.
    #[arg(long, value_enum, default_value = "off")]
    faithful_eval: Toggle,
    /// Estimate all siblings before any prune decision.
    #[arg(long, value_enum, default_value = "off")]
    two_pass: Toggle,
    /// NRPA iterations per level.
    #[arg(long, default_value_t = 100)]
    iterations: u32,
    /// NRPA learning rate.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "ply")]
    code: Coding,
    /// History length for `--code last-k`.
    #[arg(long, default_value_t = 3)]
    code_k: usize,
    /// UCT exploration constant.
    #[arg(long, default_value_t = 0.4)]
    exploration: f64,
    /// UCT tree size bound in nodes.
    #[arg(long, default_value_t = 1 << 24)]
    uct_max_nodes: usize,
    /// Greedy BFS playouts per child.
    #[arg(long, default_value_t = 1)]
    evals_per_node: u32,
    #[arg(long, default_value_t = 1_000_000)]
    frontier_cap: usize,
    /// Lattice symmetry reduction of the opening moves.
    #[arg(long, value_enum, default_value = "on")]
    symmetry: Toggle,
    /// Wall-clock budget per search launch.
    #[arg(long)]
    timeout_secs: Option<f64>,
    /// Playout budget per search launch.
    #[arg(long)]
    max_playouts: Option<u64>,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write the best conformation in `index kind x y [z]` form.
    #[arg(long)]
    dump_best: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// HP string, or `@path` to a sequence file.
    #[arg(long)]
    seq: String,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    /// Score counted as success in the statistics.
    #[arg(long)]
    target: Option<u32>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Molecule id 1..10, or `all`.
    #[arg(long, default_value = "all")]
    molecule: String,
    #[arg(long, value_enum, default_value = "restart")]
    protocol: Protocol,
    #[arg(long, default_value_t = bench::DEFAULT_RESTART_CAP)]
    restart_cap: u32,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    seq: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: u8,
    #[arg(long, value_enum, default_value = "on")]
    symmetry: Toggle,
}

impl SearchArgs {
    fn validate(&self) -> Result<()> {
        if !self.bias.is_finite() {
            bail!("--bias must be finite");
        }
        if !self.ratio.is_finite() {
            bail!("--ratio must be finite");
        }
        if self.eval_playouts == 0 {
            bail!("--eval-playouts must be at least 1");
        }
        if self.evals_per_node == 0 {
            bail!("--evals-per-node must be at least 1");
        }
        if self.runs == 0 {
            bail!("--runs must be at least 1");
        }
        if self.exploration < 0.0 {
            bail!("--exploration must be non-negative");
        }
        if let Some(t) = self.timeout_secs {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--timeout-secs must be positive");
            }
        }
        if matches!(self.algo, AlgoName::Lnmcs) && self.level == 0 {
            bail!("lnmcs needs --level >= 1");
        }
        Ok(())
    }

    fn budget(&self) -> Budget {
        Budget {
            timeout: self.timeout_secs.map(std::time::Duration::from_secs_f64),
            max_playouts: self.max_playouts,
        }
    }

    fn algorithm(&self) -> Algorithm {
        let playout = PlayoutParams {
            bias: self.bias,
            reward: RewardScheme {
                hp_penalty: self.hp_penalty,
                ..RewardScheme::GUIDANCE
            },
        };
        let nrpa = NrpaParams {
            level: self.level,
            iterations: self.iterations,
            alpha: self.alpha,
            bias: 0.0,
            reward: playout.reward,
            coding: match self.code {
                Coding::Ply => MoveCoding::Ply,
                Coding::LastK => MoveCoding::LastK(self.code_k),
            },
        };
        match self.algo {
            AlgoName::Playout => Algorithm::Playout(playout),
            AlgoName::Nmcs => Algorithm::Nmcs(NmcsParams {
                level: self.level,
                playout,
            }),
            AlgoName::Lnmcs => Algorithm::Lnmcs(LnmcsParams {
                level: self.level,
                eval_playouts: self.eval_playouts,
                ratio: self.ratio,
                playout,
                threshold: match self.threshold {
                    Threshold::Max => ThresholdPolicy::Max,
                    Threshold::Mean => ThresholdPolicy::Mean,
                    Threshold::Median => ThresholdPolicy::Median,
                },
                retain_eval_best: !self.faithful_eval.on(),
                two_pass: self.two_pass.on(),
            }),
            AlgoName::Nrpa => Algorithm::Nrpa(nrpa),
            AlgoName::Gnrpa => Algorithm::Gnrpa(NrpaParams { bias: self.bias, ..nrpa }),
            AlgoName::Gbfs => Algorithm::Gbfs(GbfsParams {
                evals_per_node: self.evals_per_node,
                playout,
                frontier_cap: self.frontier_cap,
                max_expansions: None,
            }),
            AlgoName::Uct => Algorithm::Uct(UctParams {
                exploration: self.exploration,
                playout,
                max_iterations: None,
                max_nodes: self.uct_max_nodes,
            }),
        }
    }

    fn report_format(&self) -> ReportFormat {
        match self.format {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

fn load_sequences(arg: &str) -> Result<Vec<HpSequence>> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let seqs = parse_sequence_file(&text)?;
        if seqs.is_empty() {
            bail!("{path} contains no sequences");
        }
        Ok(seqs)
    } else {
        Ok(vec![HpSequence::parse(arg)?])
    }
}

struct Batch {
    problem: Problem,
    label: String,
    records: Vec<RunRecord>,
    report: Report,
}

fn run_batch(problem: Problem, label: String, search: &SearchArgs, protocol: Protocol, restart_cap: u32) -> Result<Batch> {
    let algorithm = search.algorithm();
    let budget = search.budget();
    let master = RngStream::new(search.seed);
    let (records, stats) = match protocol {
        Protocol::Fixed => fixed_budget_runs(&problem, &algorithm, budget, search.runs, &master)?,
        Protocol::Restart => restart_runs(&problem, &algorithm, budget, restart_cap, search.runs, &master)?,
    };
    for (i, r) in records.iter().enumerate() {
        r.verify(problem.sequence.clone(), problem.dim)?;
        println!(
            "molecule {label} run {i} seed {} restarts {} score {} success {} moves {}",
            r.seed,
            r.restarts,
            r.best_score,
            r.success,
            moves_to_string(&r.best_moves)
        );
        eprintln!(
            "molecule {label} run {i}: {:.3}s over {} launch(es), {} playouts",
            r.total_wall_time,
            r.restarts + 1,
            r.playout_count
        );
    }
    let report = Report {
        molecule: label.clone(),
        sequence: problem.sequence.to_string(),
        dim: problem.dim,
        algorithm,
        budget,
        restart_cap: match protocol {
            Protocol::Fixed => 0,
            Protocol::Restart => restart_cap,
        },
        master_seed: search.seed,
        seeds: records.iter().map(|r| r.seed).collect(),
        stats,
        runs: records.clone(),
    };
    Ok(Batch {
        problem,
        label,
        records,
        report,
    })
}

fn finish(batches: &[Batch], search: &SearchArgs) -> Result<()> {
    for b in batches {
        let s = &b.report.stats;
        let hist: Vec<String> = s.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        println!(
            "summary molecule {} algo {} runs {} successes {} histogram {}",
            b.label,
            b.report.algorithm.id(),
            s.run_count,
            s.success_count,
            hist.join(",")
        );
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
        eprintln!(
            "summary molecule {}: mean {} min, iqr {} min (successful runs), mean {:.3} min (all runs)",
            b.label,
            fmt(s.mean_time_min),
            fmt(s.iqr_min),
            s.mean_time_all_min
        );
    }
    if let Some(out) = &search.out {
        let reports: Vec<Report> = batches.iter().map(|b| b.report.clone()).collect();
        emit_report(&reports, search.report_format(), out).with_context(|| format!("writing {}", out.display()))?;
    }
    if let Some(path) = &search.dump_best {
        let best = batches
            .iter()
            .flat_map(|b| b.records.iter().map(move |r| (b, r)))
            .max_by(|x, y| x.1.best_score.cmp(&y.1.best_score).then(y.0.label.cmp(&x.0.label)))
            .expect("at least one run");
        let state = ChainState::replay(best.0.problem.sequence.clone(), best.0.problem.dim, false, &best.1.best_moves)?;
        fs::write(path, state.conformation().to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    args.search.validate()?;
    let dim = Dimension::try_from(args.dim)?;
    let seqs = load_sequences(&args.seq)?;
    let multiple = seqs.len() > 1;
    let mut batches = Vec::new();
    for (i, seq) in seqs.into_iter().enumerate() {
        let label = if multiple { format!("seq{}", i + 1) } else { "seq".to_string() };
        let problem = Problem {
            symmetry: args.search.symmetry.on(),
            target: args.target,
            ..Problem::custom(Arc::new(seq), dim)
        };
        batches.push(run_batch(problem, label, &args.search, Protocol::Fixed, 0)?);
    }
    finish(&batches, &args.search)
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    args.search.validate()?;
    let ids: Vec<usize> = if args.molecule == "all" {
        MOLECULES.iter().map(|m| m.id).collect()
    } else {
        vec![args
            .molecule
            .parse()
            .with_context(|| format!("--molecule expects 1..10 or all, got {:?}", args.molecule))?]
    };
    if args.protocol == Protocol::Restart && args.search.budget() == Budget::unlimited() {
        bail!("the restart protocol needs --timeout-secs or --max-playouts");
    }
    let mut batches = Vec::new();
    for id in ids {
        let m = bench::molecule(id)?;
        let problem = Problem {
            symmetry: args.search.symmetry.on(),
            ..Problem::benchmark(&m)
        };
        batches.push(run_batch(problem, id.to_string(), &args.search, args.protocol, args.restart_cap)?);
    }
    finish(&batches, &args.search)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<()> {
    let dim = Dimension::try_from(args.dim)?;
    let seq = HpSequence::parse(&args.seq)?;
    let e = enumerate(&seq, dim, args.symmetry.on())?;
    println!(
        "optimum {} terminal_optimum {} conformations {} trapped {} moves {}",
        e.complete_optimum.map_or("-".to_string(), |c| c.to_string()),
        e.terminal_optimum,
        e.complete_count,
        e.trapped_count,
        moves_to_string(&e.optimal_moves)
    );
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Run(a) => cmd_run(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
