//! Lazy Nested Monte Carlo Search.
//!
//! Like NMCS, but every child is first estimated by the mean score of a few
//! playouts. The estimate updates a per-depth threshold table and, when it
//! falls below `ratio * threshold(depth)`, the child gets a single playout
//! instead of a full lower-level search.
//!
//! The default mode decides each child against the table as it stands when
//! that child is reached, so early children are judged against thresholds
//! that have not yet seen their siblings. [`LnmcsParams::two_pass`] instead
//! estimates every sibling before making any prune decision.
//!
//! Evaluation playouts draw from their own RNG stream, split from the run's
//! stream, so the recursive search consumes randomness exactly as NMCS does.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::lattice::{ChainState, Move};
use crate::playout::{PlayoutParams, ScoredSequence};
use crate::rng::RngStream;
use crate::search::{offer, SearchContext};

/// Sub-stream index used for evaluation playouts.
const EVAL_STREAM: u64 = 0xE7A1;

pub const DEFAULT_MEDIAN_WINDOW: usize = 255;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdPolicy {
    /// Running maximum of estimates.
    Max,
    /// Running arithmetic mean of estimates.
    Mean,
    /// Median of the most recent estimates.
    Median,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LnmcsParams {
    pub level: u32,
    pub eval_playouts: u32,
    pub ratio: f64,
    pub playout: PlayoutParams,
    pub threshold: ThresholdPolicy,
    /// Fold the best evaluation playout into best-sequence tracking.
    pub retain_eval_best: bool,
    /// Estimate all siblings before any prune decision.
    pub two_pass: bool,
}

impl Default for LnmcsParams {
    fn default() -> Self {
        LnmcsParams {
            level: 5,
            eval_playouts: 20,
            ratio: 0.9,
            playout: PlayoutParams::default(),
            threshold: ThresholdPolicy::Max,
            retain_eval_best: true,
            two_pass: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Entry {
    Max(f64),
    Mean { mean: f64, count: u64 },
    Median(VecDeque<f64>),
}

impl Entry {
    fn fresh(policy: ThresholdPolicy) -> Entry {
        match policy {
            ThresholdPolicy::Max => Entry::Max(0.0),
            ThresholdPolicy::Mean => Entry::Mean { mean: 0.0, count: 0 },
            ThresholdPolicy::Median => Entry::Median(VecDeque::new()),
        }
    }
}

/// Per-depth pruning thresholds, indexed by moves played. Grows lazily;
/// fresh entries read as 0.0.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdTable {
    policy: ThresholdPolicy,
    window: usize,
    entries: Vec<Entry>,
}

impl ThresholdTable {
    pub fn new(policy: ThresholdPolicy) -> Self {
        ThresholdTable::with_window(policy, DEFAULT_MEDIAN_WINDOW)
    }

    /// `window` bounds how many recent estimates the median policy keeps.
    pub fn with_window(policy: ThresholdPolicy, window: usize) -> Self {
        ThresholdTable {
            policy,
            window: window.max(1),
            entries: Vec::new(),
        }
    }

    pub fn policy(&self) -> ThresholdPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn ensure(&mut self, depth: usize) {
        while self.entries.len() <= depth {
            self.entries.push(Entry::fresh(self.policy));
        }
    }

    pub fn threshold(&self, depth: usize) -> f64 {
        match self.entries.get(depth) {
            None => 0.0,
            Some(Entry::Max(v)) => *v,
            Some(Entry::Mean { mean, .. }) => *mean,
            Some(Entry::Median(window)) => median(window),
        }
    }

    /// Folds `estimate` into the entry at `depth`, creating it if needed.
    pub fn update(&mut self, depth: usize, estimate: f64) {
        self.ensure(depth);
        let window = self.window;
        match &mut self.entries[depth] {
            Entry::Max(v) => {
                if *v < estimate {
                    *v = estimate;
                }
            }
            Entry::Mean { mean, count } => {
                *count += 1;
                *mean += (estimate - *mean) / *count as f64;
            }
            Entry::Median(recent) => {
                if recent.len() == window {
                    recent.pop_front();
                }
                recent.push_back(estimate);
            }
        }
    }
}

fn median(values: &VecDeque<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted: Vec<f64> = values.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Mean of `p` playout scores plus the best of those playouts.
#[derive(Clone, Debug, PartialEq)]
pub struct ChildEstimate {
    pub estimate: f64,
    pub best_seen: ScoredSequence,
}

pub fn evaluate_child(
    child: &ChainState,
    eval_playouts: u32,
    playout: &PlayoutParams,
    rng: &mut RngStream,
    ctx: &mut SearchContext,
) -> ChildEstimate {
    let p = eval_playouts.max(1);
    let mut sum = 0.0;
    let mut best_seen = ScoredSequence::worst();
    for _ in 0..p {
        let r = ctx.playout(child, playout, rng);
        sum += r.score;
        if r.score > best_seen.score {
            best_seen = r;
        }
    }
    ChildEstimate {
        estimate: sum / p as f64,
        best_seen,
    }
}

/// Runs one LNMCS invocation with a private threshold table.
pub fn lnmcs(state: &ChainState, params: &LnmcsParams, rng: &mut RngStream, ctx: &mut SearchContext) -> ScoredSequence {
    let mut table = ThresholdTable::new(params.threshold);
    lnmcs_with_table(state, params, &mut table, rng, ctx)
}

/// Runs LNMCS against a caller-owned table, shared by every recursion level.
pub fn lnmcs_with_table(
    state: &ChainState,
    params: &LnmcsParams,
    table: &mut ThresholdTable,
    rng: &mut RngStream,
    ctx: &mut SearchContext,
) -> ScoredSequence {
    let mut eval_rng = rng.split(EVAL_STREAM);
    let mut run = Lazy {
        params,
        table,
        rng,
        eval_rng: &mut eval_rng,
        ctx,
    };
    run.search(state, params.level)
}

struct Lazy<'a> {
    params: &'a LnmcsParams,
    table: &'a mut ThresholdTable,
    rng: &'a mut RngStream,
    eval_rng: &'a mut RngStream,
    ctx: &'a mut SearchContext,
}

impl Lazy<'_> {
    fn estimate(&mut self, child: &ChainState) -> ChildEstimate {
        evaluate_child(child, self.params.eval_playouts, &self.params.playout, self.eval_rng, self.ctx)
    }

    /// Handles one child after its estimate is known and the table updated.
    #[allow(clippy::too_many_arguments)]
    fn expand(
        &mut self,
        best: &mut ScoredSequence,
        ply: usize,
        depth: usize,
        m: Move,
        child: &ChainState,
        est: ChildEstimate,
        level: u32,
    ) {
        if self.params.retain_eval_best {
            offer(best, ply, m, est.best_seen.score, &est.best_seen.moves);
        }
        let pruned = est.estimate < self.params.ratio * self.table.threshold(depth);
        let sub_level = if pruned { 0 } else { level - 1 };
        self.ctx.record(depth, m, sub_level);
        let r = self.search(child, sub_level);
        offer(best, ply, m, r.score, &r.moves);
    }

    fn search(&mut self, state: &ChainState, level: u32) -> ScoredSequence {
        if level == 0 {
            return self.ctx.playout(state, &self.params.playout, self.rng);
        }
        let mut best = ScoredSequence::worst();
        let mut current = state.clone();
        let mut ply = 0;
        'grow: loop {
            let legal = current.legal_moves();
            if legal.is_empty() {
                break;
            }
            let depth = current.moves_played();
            if self.params.two_pass {
                let mut pending = Vec::with_capacity(legal.len());
                for &m in &legal {
                    let child = current.child(m);
                    let est = self.estimate(&child);
                    self.table.update(depth, est.estimate);
                    pending.push((m, child, est));
                }
                for (m, child, est) in pending {
                    self.expand(&mut best, ply, depth, m, &child, est, level);
                    if self.ctx.exhausted() {
                        break 'grow;
                    }
                }
            } else {
                for &m in &legal {
                    let child = current.child(m);
                    let est = self.estimate(&child);
                    self.table.update(depth, est.estimate);
                    self.expand(&mut best, ply, depth, m, &child, est, level);
                    if self.ctx.exhausted() {
                        break 'grow;
                    }
                }
            }
            let next = best.moves[ply];
            ply += 1;
            current.apply_unchecked(next);
        }
        if best.score == f64::NEG_INFINITY {
            return ScoredSequence::new(state.score(), Vec::new());
        }
        best
    }
}
