//! Benchmark protocol: timed restarts until the best known score is reached,
//! fixed-budget batches, and their aggregate statistics.
//!
//! Seeds are derived hierarchically. A master stream yields one stream per
//! run (`master.split(run)`), and each run yields one stream per restart
//! (`run.split(restart)`), so any single run or restart can be reproduced
//! in isolation.

pub mod molecules;
pub mod report;
pub mod stats;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algo::Algorithm;
use crate::error::{Error, Result};
use crate::lattice::{ChainState, Dimension, HpSequence, Move};
use crate::rng::RngStream;
use crate::search::{Budget, SearchOutcome};

pub use molecules::{molecule, BenchmarkMolecule, MOLECULES};
pub use report::{emit_report, Report, ReportFormat};
pub use stats::{aggregate, interquartile_range, quantile, AggregateStats};

pub const DEFAULT_RESTART_CAP: u32 = 100;

/// One benchmark run (possibly spanning several restarts).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Benchmark molecule id, or 0 for a user-supplied sequence.
    pub molecule: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub restarts: u32,
    /// Seconds spent inside search calls, summed over restarts.
    pub total_wall_time: f64,
    pub best_score: i64,
    #[serde(with = "crate::lattice::move_string")]
    pub best_moves: Vec<Move>,
    pub playout_count: u64,
    pub success: bool,
}

impl RunRecord {
    /// Checks that `best_moves` replays legally to `best_score`.
    pub fn verify(&self, seq: Arc<HpSequence>, dim: Dimension) -> Result<()> {
        let end = ChainState::replay(seq, dim, false, &self.best_moves)?;
        if end.contacts() as i64 != self.best_score {
            return Err(Error::InvalidParameter(format!(
                "recorded score {} but moves replay to {}",
                self.best_score,
                end.contacts()
            )));
        }
        Ok(())
    }
}

/// What a run is trying to solve.
#[derive(Clone, Debug)]
pub struct Problem {
    pub molecule: usize,
    pub sequence: Arc<HpSequence>,
    pub dim: Dimension,
    pub symmetry: bool,
    /// Score that counts as solved; `None` means any result succeeds.
    pub target: Option<u32>,
}

impl Problem {
    pub fn benchmark(m: &BenchmarkMolecule) -> Self {
        Problem {
            molecule: m.id,
            sequence: m.hp_sequence(),
            dim: Dimension::Three,
            symmetry: true,
            target: Some(m.target_score),
        }
    }

    pub fn custom(sequence: Arc<HpSequence>, dim: Dimension) -> Self {
        Problem {
            molecule: 0,
            sequence,
            dim,
            symmetry: true,
            target: None,
        }
    }

    pub fn root(&self) -> ChainState {
        ChainState::new(self.sequence.clone(), self.dim, self.symmetry)
    }

    fn reached(&self, score: f64) -> bool {
        self.target.is_none_or(|t| score >= t as f64)
    }
}

/// Restart loop over an arbitrary launcher. `launch(restart)` runs one
/// budgeted search; the loop stops on reaching the target or after
/// `restart_cap` restarts.
pub fn restart_until<F>(problem: &Problem, algorithm: &Algorithm, seed: u64, restart_cap: u32, mut launch: F) -> RunRecord
where
    F: FnMut(u32) -> SearchOutcome,
{
    let mut restarts = 0;
    let mut total = 0.0;
    let mut playouts = 0;
    let mut best: Option<SearchOutcome> = None;
    loop {
        let out = launch(restarts);
        total += out.elapsed_secs;
        playouts += out.playouts;
        let solved = problem.reached(out.best.score);
        if best.as_ref().is_none_or(|b| out.best.score > b.best.score) {
            best = Some(out);
        }
        if solved || restarts >= restart_cap {
            break;
        }
        restarts += 1;
    }
    let best = best.expect("at least one launch").best;
    RunRecord {
        molecule: problem.molecule,
        algorithm: algorithm.clone(),
        seed,
        restarts,
        total_wall_time: total,
        best_score: best.score as i64,
        best_moves: best.moves,
        playout_count: playouts,
        success: problem.reached(best.score),
    }
}

/// Relaunches `algorithm` with fresh per-restart streams until the target
/// is reached or the cap is hit.
pub fn run_until_target(
    problem: &Problem,
    algorithm: &Algorithm,
    budget: Budget,
    restart_cap: u32,
    rng: &RngStream,
) -> RunRecord {
    let root = problem.root();
    restart_until(problem, algorithm, rng.seed(), restart_cap, |restart| {
        let mut stream = rng.split(restart as u64);
        algorithm.run(&root, budget, &mut stream)
    })
}

/// `n_runs` independent single-budget runs (no restarts).
pub fn fixed_budget_runs(
    problem: &Problem,
    algorithm: &Algorithm,
    budget: Budget,
    n_runs: usize,
    master: &RngStream,
) -> Result<(Vec<RunRecord>, AggregateStats)> {
    let records: Vec<RunRecord> = (0..n_runs)
        .map(|i| run_until_target(problem, algorithm, budget, 0, &master.split(i as u64)))
        .collect();
    let stats = aggregate(&records)?;
    Ok((records, stats))
}

/// `n_runs` independent restart-protocol runs.
pub fn restart_runs(
    problem: &Problem,
    algorithm: &Algorithm,
    budget: Budget,
    restart_cap: u32,
    n_runs: usize,
    master: &RngStream,
) -> Result<(Vec<RunRecord>, AggregateStats)> {
    let records: Vec<RunRecord> = (0..n_runs)
        .map(|i| run_until_target(problem, algorithm, budget, restart_cap, &master.split(i as u64)))
        .collect();
    let stats = aggregate(&records)?;
    Ok((records, stats))
}
