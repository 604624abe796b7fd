//! Greedy best-first search with playout evaluation.
//!
//! The frontier is ordered by evaluation, highest first, ties broken by
//! insertion order. Popping a node evaluates each of its children by the mean
//! of a few playouts and pushes the non-terminal ones. Nodes store their move
//! prefix and are replayed on expansion.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::lattice::{ChainState, Move};
use crate::playout::{PlayoutParams, ScoredSequence};
use crate::rng::RngStream;
use crate::search::SearchContext;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GbfsParams {
    pub evals_per_node: u32,
    pub playout: PlayoutParams,
    /// Frontier size bound; the worst node is evicted past it.
    pub frontier_cap: usize,
    pub max_expansions: Option<u64>,
}

impl Default for GbfsParams {
    fn default() -> Self {
        GbfsParams {
            evals_per_node: 1,
            playout: PlayoutParams::default(),
            frontier_cap: 1_000_000,
            max_expansions: None,
        }
    }
}

type FrontierKey = (OrderedFloat<f64>, Reverse<u64>);

/// Max-ordered frontier with FIFO tie-breaking and worst-node eviction.
#[derive(Debug, Default)]
pub struct Frontier {
    nodes: BTreeMap<FrontierKey, Vec<Move>>,
    next_id: u64,
    cap: usize,
}

impl Frontier {
    pub fn new(cap: usize) -> Self {
        Frontier {
            nodes: BTreeMap::new(),
            next_id: 0,
            cap: cap.max(1),
        }
    }

    pub fn push(&mut self, eval: f64, moves: Vec<Move>) {
        self.nodes.insert((OrderedFloat(eval), Reverse(self.next_id)), moves);
        self.next_id += 1;
        if self.nodes.len() > self.cap {
            self.nodes.pop_first();
        }
    }

    pub fn pop(&mut self) -> Option<(f64, Vec<Move>)> {
        self.nodes.pop_last().map(|((e, _), m)| (e.0, m))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn greedy_bfs(root: &ChainState, params: &GbfsParams, rng: &mut RngStream, ctx: &mut SearchContext) -> ScoredSequence {
    if root.is_terminal() {
        return ScoredSequence::new(root.score(), Vec::new());
    }
    let mut best = ScoredSequence::worst();
    let mut frontier = Frontier::new(params.frontier_cap);
    frontier.push(0.0, Vec::new());
    let mut expansions = 0u64;
    let evals = params.evals_per_node.max(1);

    while let Some((_, prefix)) = frontier.pop() {
        if params.max_expansions.is_some_and(|m| expansions >= m) {
            break;
        }
        expansions += 1;
        let mut node = root.clone();
        for &m in &prefix {
            node.apply_unchecked(m);
        }
        for m in node.legal_moves() {
            let child = node.child(m);
            let mut path = prefix.clone();
            path.push(m);
            if child.is_terminal() {
                if child.score() > best.score {
                    best = ScoredSequence::new(child.score(), path);
                }
                continue;
            }
            let mut sum = 0.0;
            for _ in 0..evals {
                let r = ctx.playout(&child, &params.playout, rng);
                sum += r.score;
                if r.score > best.score {
                    let mut moves = path.clone();
                    moves.extend(r.moves);
                    best = ScoredSequence::new(r.score, moves);
                }
            }
            frontier.push(sum / evals as f64, path);
        }
        if ctx.exhausted() {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{initial_state, Dimension, HpSequence};
    use crate::search::Budget;
    use std::sync::Arc;

    #[test]
    fn frontier_orders_by_eval_then_insertion() {
        let mut f = Frontier::new(10);
        f.push(1.0, vec![Move::PosX]);
        f.push(3.0, vec![Move::PosY]);
        f.push(3.0, vec![Move::NegY]);
        f.push(2.0, vec![Move::NegX]);
        assert_eq!(f.pop().unwrap().1, vec![Move::PosY]);
        assert_eq!(f.pop().unwrap().1, vec![Move::NegY]);
        assert_eq!(f.pop().unwrap().1, vec![Move::NegX]);
        assert_eq!(f.pop().unwrap().1, vec![Move::PosX]);
        assert!(f.pop().is_none());
    }

    #[test]
    fn frontier_evicts_worst() {
        let mut f = Frontier::new(2);
        f.push(5.0, vec![Move::PosX]);
        f.push(1.0, vec![Move::NegX]);
        f.push(3.0, vec![Move::PosY]);
        assert_eq!(f.len(), 2);
        assert_eq!(f.pop().unwrap().0, 5.0);
        assert_eq!(f.pop().unwrap().0, 3.0);
    }

    #[test]
    fn single_residue() {
        let s = initial_state(Arc::new(HpSequence::parse("H").unwrap()), Dimension::Three);
        let r = greedy_bfs(&s, &GbfsParams::default(), &mut RngStream::new(0), &mut SearchContext::new(Budget::unlimited()));
        assert_eq!(r, ScoredSequence::new(0.0, vec![]));
    }

    #[test]
    fn result_replays() {
        let s = initial_state(Arc::new(HpSequence::parse("HPHPPHHPHPPHPHHPPHPH").unwrap()), Dimension::Three);
        let mut ctx = SearchContext::new(Budget::playouts(2_000));
        let r = greedy_bfs(&s, &GbfsParams::default(), &mut RngStream::new(3), &mut ctx);
        let end = ChainState::replay(s.shared_sequence(), s.dim(), true, &r.moves).unwrap();
        assert_eq!(end.score(), r.score);
        assert!(end.is_terminal());
    }
}
