//! Budgets, playout accounting and call-site tracing shared by all searches.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::lattice::{ChainState, Move};
use crate::playout::{playout, PlayoutParams, ScoredSequence};
use crate::rng::RngStream;

/// Stop conditions for a search. An empty budget never stops early.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub timeout: Option<Duration>,
    pub max_playouts: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn playouts(n: u64) -> Self {
        Budget {
            timeout: None,
            max_playouts: Some(n),
        }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget {
            timeout: Some(Duration::from_secs_f64(secs)),
            max_playouts: None,
        }
    }
}

/// A recursive call made by a nested search: at a parent with `depth` moves
/// played, the child reached by `mv` was searched at `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallSite {
    pub depth: usize,
    pub mv: Move,
    pub level: u32,
}

/// Per-run bookkeeping: budget checks, playout counts and an optional trace.
#[derive(Debug)]
pub struct SearchContext {
    budget: Budget,
    start: Instant,
    playouts: u64,
    stopped: bool,
    trace: Option<Vec<CallSite>>,
}

impl SearchContext {
    pub fn new(budget: Budget) -> Self {
        SearchContext {
            budget,
            start: Instant::now(),
            playouts: 0,
            stopped: false,
            trace: None,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn playouts(&self) -> u64 {
        self.playouts
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn trace(&self) -> Option<&[CallSite]> {
        self.trace.as_deref()
    }

    pub fn take_trace(&mut self) -> Option<Vec<CallSite>> {
        self.trace.take()
    }

    pub(crate) fn record(&mut self, depth: usize, mv: Move, level: u32) {
        if let Some(t) = self.trace.as_mut() {
            t.push(CallSite { depth, mv, level });
        }
    }

    pub fn count_playouts(&mut self, n: u64) {
        self.playouts += n;
    }

    /// Counted playout.
    pub fn playout(&mut self, state: &ChainState, params: &PlayoutParams, rng: &mut RngStream) -> ScoredSequence {
        self.playouts += 1;
        playout(state, params, rng)
    }

    /// True once any budget limit has been hit. Sticky.
    pub fn exhausted(&mut self) -> bool {
        if self.stopped {
            return true;
        }
        let over_playouts = self.budget.max_playouts.is_some_and(|max| self.playouts >= max);
        let over_time = self.budget.timeout.is_some_and(|t| self.start.elapsed() >= t);
        self.stopped = over_playouts || over_time;
        self.stopped
    }
}

/// Result of one complete search invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: ScoredSequence,
    pub playouts: u64,
    pub elapsed_secs: f64,
}

/// Records `mv + suffix` as the best sequence from `ply` when `score` ties
/// or beats the current best. `best.moves[..ply]` is the prefix already
/// played.
#[inline]
pub(crate) fn offer(best: &mut ScoredSequence, ply: usize, mv: Move, score: f64, suffix: &[Move]) -> bool {
    if score >= best.score {
        best.score = score;
        best.moves.truncate(ply);
        best.moves.push(mv);
        best.moves.extend_from_slice(suffix);
        true
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn playout_budget_is_sticky() {
        let mut ctx = SearchContext::new(Budget::playouts(2));
        assert!(!ctx.exhausted());
        ctx.count_playouts(2);
        assert!(ctx.exhausted());
        assert!(ctx.exhausted());
    }

    #[test]
    fn unlimited_never_stops() {
        let mut ctx = SearchContext::new(Budget::unlimited());
        ctx.count_playouts(1 << 40);
        assert!(!ctx.exhausted());
    }

    #[test]
    fn zero_timeout_stops_immediately() {
        let mut ctx = SearchContext::new(Budget::seconds(0.0));
        assert!(ctx.exhausted());
    }

    #[test]
    fn offer_overwrites_suffix_on_ties() {
        let mut best = ScoredSequence::new(3.0, vec![Move::PosX, Move::PosY, Move::NegX]);
        assert!(offer(&mut best, 1, Move::PosX, 3.0, &[Move::PosZ]));
        assert_eq!(best.moves, vec![Move::PosX, Move::PosX, Move::PosZ]);
        assert!(!offer(&mut best, 1, Move::NegY, 2.0, &[]));
        assert_eq!(best.score, 3.0);
    }
}
