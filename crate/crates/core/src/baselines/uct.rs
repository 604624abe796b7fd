//! Single-player UCT.
//!
//! Rewards are raw contact counts divided by the best score seen so far, so
//! the UCB1 exploitation term stays in `[0, 1]`.

use std::num::NonZeroU32;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::lattice::{ChainState, Move};
use crate::playout::{PlayoutParams, ScoredSequence};
use crate::rng::RngStream;
use crate::search::SearchContext;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UctParams {
    pub exploration: f64,
    pub playout: PlayoutParams,
    pub max_iterations: Option<u64>,
    /// Tree size bound. Once reached, iterations still descend and back up
    /// but leaves are no longer expanded.
    pub max_nodes: usize,
}

impl Default for UctParams {
    fn default() -> Self {
        UctParams {
            exploration: 0.4,
            playout: PlayoutParams::default(),
            max_iterations: None,
            max_nodes: 1 << 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UctEdge {
    pub mv: Move,
    node: Option<NonZeroU32>,
}

impl UctEdge {
    /// Index of the child node, once expanded.
    pub fn node(&self) -> Option<usize> {
        self.node.map(|n| n.get() as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UctNode {
    pub visits: u64,
    /// Sum of every playout score backed up through this node.
    pub total: f64,
    /// Iterations that ended here (expansion playout, terminal revisit, or
    /// a playout from an unexpanded leaf once the tree is full).
    pub own_visits: u64,
    /// Every terminal below this node has been reached.
    pub solved: bool,
    pub children: ArrayVec<UctEdge, 6>,
}

impl UctNode {
    fn new(state: &ChainState) -> Self {
        let children: ArrayVec<UctEdge, 6> = state
            .legal_moves()
            .into_iter()
            .map(|mv| UctEdge { mv, node: None })
            .collect();
        UctNode {
            visits: 0,
            total: 0.0,
            own_visits: 0,
            solved: children.is_empty(),
            children,
        }
    }
}

pub struct UctTree {
    root: ChainState,
    params: UctParams,
    nodes: Vec<UctNode>,
    best: ScoredSequence,
    max_score: f64,
}

impl UctTree {
    pub fn new(root: &ChainState, params: UctParams) -> Self {
        UctTree {
            root: root.clone(),
            params,
            nodes: vec![UctNode::new(root)],
            best: ScoredSequence::worst(),
            max_score: 0.0,
        }
    }

    pub fn nodes(&self) -> &[UctNode] {
        &self.nodes
    }

    pub fn best(&self) -> &ScoredSequence {
        &self.best
    }

    pub fn is_solved(&self) -> bool {
        self.nodes[0].solved
    }

    fn select(&self, node: usize) -> usize {
        let parent = &self.nodes[node];
        let log_n = (parent.visits.max(1) as f64).ln();
        let norm = if self.max_score > 0.0 { self.max_score } else { 1.0 };
        let mut best_i = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (i, e) in parent.children.iter().enumerate() {
            let child = &self.nodes[e.node().expect("fully expanded")];
            if child.solved {
                continue;
            }
            let n = child.visits as f64;
            let v = child.total / n / norm + self.params.exploration * (log_n / n).sqrt();
            if v > best_v {
                best_v = v;
                best_i = i;
            }
        }
        best_i
    }

    /// One select / expand / playout / backpropagate cycle.
    pub fn iterate(&mut self, rng: &mut RngStream, ctx: &mut SearchContext) {
        let mut state = self.root.clone();
        let mut path = vec![0usize];
        let mut moves = Vec::new();
        let mut node = 0;
        let (value, tail) = loop {
            if self.nodes[node].children.is_empty() {
                break (state.score(), Vec::new());
            }
            let unexpanded = self.nodes[node].children.iter().position(|e| e.node.is_none());
            if let Some(i) = unexpanded {
                if self.nodes.len() >= self.params.max_nodes.min(u32::MAX as usize) {
                    let r = ctx.playout(&state, &self.params.playout, rng);
                    break (r.score, r.moves);
                }
                let mv = self.nodes[node].children[i].mv;
                state.apply_unchecked(mv);
                moves.push(mv);
                let id = self.nodes.len();
                self.nodes.push(UctNode::new(&state));
                self.nodes[node].children[i].node = NonZeroU32::new(id as u32);
                path.push(id);
                let r = ctx.playout(&state, &self.params.playout, rng);
                break (r.score, r.moves);
            }
            let i = self.select(node);
            let edge = &self.nodes[node].children[i];
            state.apply_unchecked(edge.mv);
            moves.push(edge.mv);
            node = edge.node().expect("fully expanded");
            path.push(node);
        };
        let leaf = *path.last().expect("path starts at root");
        self.nodes[leaf].own_visits += 1;
        for &n in path.iter().rev() {
            self.nodes[n].visits += 1;
            self.nodes[n].total += value;
            let solved = {
                let node = &self.nodes[n];
                node.children
                    .iter()
                    .all(|e| e.node().is_some_and(|c| self.nodes[c].solved))
            };
            self.nodes[n].solved = solved;
        }
        if value > self.max_score {
            self.max_score = value;
        }
        if value > self.best.score {
            moves.extend(tail);
            self.best = ScoredSequence::new(value, moves);
        }
    }
}

/// Runs UCT until the budget (or `max_iterations`) is spent or the whole
/// tree has been enumerated. At least one iteration always runs.
pub fn uct(root: &ChainState, params: &UctParams, rng: &mut RngStream, ctx: &mut SearchContext) -> ScoredSequence {
    let mut tree = UctTree::new(root, *params);
    let mut iterations = 0u64;
    loop {
        tree.iterate(rng, ctx);
        iterations += 1;
        if tree.is_solved() || ctx.exhausted() || params.max_iterations.is_some_and(|m| iterations >= m) {
            break;
        }
    }
    tree.best
}
