//! Nested Monte Carlo Search.
//!
//! At level `l > 0`, every legal child of the current state is searched at
//! level `l - 1`; the best sequence seen so far (ties go to the most recent
//! child) decides the next move, and the search advances one ply at a time
//! until the chain is terminal. Level 0 is a biased-growth playout.

use serde::{Deserialize, Serialize};

use crate::lattice::ChainState;
use crate::playout::{PlayoutParams, ScoredSequence};
use crate::rng::RngStream;
use crate::search::{offer, SearchContext};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NmcsParams {
    pub level: u32,
    pub playout: PlayoutParams,
}

impl Default for NmcsParams {
    fn default() -> Self {
        NmcsParams {
            level: 5,
            playout: PlayoutParams::default(),
        }
    }
}

/// Runs NMCS from `state`. When the context's budget runs out the search
/// unwinds and returns the best complete sequence found so far.
pub fn nmcs(state: &ChainState, params: &NmcsParams, rng: &mut RngStream, ctx: &mut SearchContext) -> ScoredSequence {
    search(state, params.level, &params.playout, rng, ctx)
}

fn search(
    state: &ChainState,
    level: u32,
    playout: &PlayoutParams,
    rng: &mut RngStream,
    ctx: &mut SearchContext,
) -> ScoredSequence {
    if level == 0 {
        return ctx.playout(state, playout, rng);
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
        for &m in &legal {
            let child = current.child(m);
            ctx.record(depth, m, level - 1);
            let r = search(&child, level - 1, playout, rng, ctx);
            offer(&mut best, ply, m, r.score, &r.moves);
            if ctx.exhausted() {
                break 'grow;
            }
        }
        let next = best.moves[ply];
        ply += 1;
        current.apply_unchecked(next);
    }
    if best.score == f64::NEG_INFINITY {
        // Terminal on entry.
        return ScoredSequence::new(state.score(), Vec::new());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{initial_state, Dimension, HpSequence};
    use crate::playout::playout;
    use crate::search::Budget;
    use std::sync::Arc;

    fn root(s: &str, dim: Dimension) -> ChainState {
        initial_state(Arc::new(HpSequence::parse(s).unwrap()), dim)
    }

    #[test]
    fn level_zero_is_a_playout() {
        let s = root("HPHPPHHPHPPHPHHPPHPH", Dimension::Three);
        let params = NmcsParams { level: 0, playout: PlayoutParams::default() };
        for seed in 0..20 {
            let mut ctx = SearchContext::new(Budget::unlimited());
            let a = nmcs(&s, &params, &mut RngStream::new(seed), &mut ctx);
            let b = playout(&s, &params.playout, &mut RngStream::new(seed));
            assert_eq!(a, b);
            assert_eq!(ctx.playouts(), 1);
        }
    }

    #[test]
    fn terminal_root() {
        let s = root("H", Dimension::Two);
        let params = NmcsParams { level: 3, playout: PlayoutParams::default() };
        let r = nmcs(&s, &params, &mut RngStream::new(0), &mut SearchContext::new(Budget::unlimited()));
        assert_eq!(r, ScoredSequence::new(0.0, vec![]));
    }

    #[test]
    fn result_replays_to_score() {
        let s = root("HPHPPHHPHPPHPHHPPHPH", Dimension::Two);
        let params = NmcsParams { level: 2, playout: PlayoutParams::default() };
        for seed in 0..5 {
            let mut ctx = SearchContext::new(Budget::unlimited());
            let r = nmcs(&s, &params, &mut RngStream::new(seed), &mut ctx);
            let end = ChainState::replay(s.shared_sequence(), s.dim(), true, &r.moves).unwrap();
            assert!(end.is_terminal());
            assert_eq!(end.score(), r.score);
        }
    }

    #[test]
    fn higher_level_not_worse_on_average() {
        let s = root("HPHPPHHPHPPHPHHPPHPH", Dimension::Two);
        let mean = |level| {
            let params = NmcsParams { level, playout: PlayoutParams::default() };
            (0..10)
                .map(|seed| {
                    let mut ctx = SearchContext::new(Budget::unlimited());
                    nmcs(&s, &params, &mut RngStream::new(seed), &mut ctx).score
                })
                .sum::<f64>()
        };
        assert!(mean(2) >= mean(0));
    }

    #[test]
    fn budget_interrupts_with_complete_sequence() {
        let s = root("HPHPPHHPHPPHPHHPPHPHHPHPPHHPHPPHPHHPPHPH", Dimension::Three);
        let params = NmcsParams { level: 4, playout: PlayoutParams::default() };
        let mut ctx = SearchContext::new(Budget::playouts(500));
        let r = nmcs(&s, &params, &mut RngStream::new(2), &mut ctx);
        assert!(ctx.playouts() < 700);
        let end = ChainState::replay(s.shared_sequence(), s.dim(), true, &r.moves).unwrap();
        assert!(end.is_terminal());
        assert_eq!(end.score(), r.score);
    }

    #[test]
    fn trace_records_every_child_at_level_one() {
        let s = root("HPPH", Dimension::Two);
        let params = NmcsParams { level: 1, playout: PlayoutParams::default() };
        let mut ctx = SearchContext::new(Budget::unlimited()).with_trace();
        nmcs(&s, &params, &mut RngStream::new(0), &mut ctx);
        let trace = ctx.trace().unwrap();
        // Symmetry fixes ply 0 to +x, ply 1 offers {+x, +y}, ply 2 then has 3 or 2 children.
        assert_eq!(trace[0].depth, 0);
        assert_eq!(trace[1].depth, 1);
        assert_eq!(trace[2].depth, 1);
        assert!(trace.iter().all(|c| c.level == 0));
        assert_eq!(ctx.playouts() as usize, trace.len());
    }
}
