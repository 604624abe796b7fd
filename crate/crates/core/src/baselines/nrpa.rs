//! Nested Rollout Policy Adaptation, plain and with a playout prior (GNRPA).
//!
//! The policy maps a [`MoveCode`] to a log-space weight. Level-0 rollouts
//! sample moves with probability proportional to `exp(w(code) + beta(m))`,
//! where `beta(m) = bias * immediate_gain(m)` for GNRPA and zero for NRPA.
//! After each iteration the policy is shifted toward the best sequence.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::lattice::{ChainState, Move, RewardScheme};
use crate::playout::{sample_index, softmax_weights, ScoredSequence};
use crate::rng::RngStream;
use crate::search::SearchContext;

/// How a move is keyed in the policy table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveCoding {
    /// Number of residues already placed, plus direction.
    Ply,
    /// The last `k` directions played, plus direction.
    LastK(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoveCode {
    pub context: u64,
    pub direction: Move,
}

impl MoveCoding {
    pub fn code(self, state: &ChainState, m: Move) -> MoveCode {
        let context = match self {
            MoveCoding::Ply => state.placed().len() as u64,
            MoveCoding::LastK(k) => {
                // Tag with the history length so short prefixes stay distinct.
                let history = state.last_moves(k);
                history
                    .iter()
                    .fold(history.len() as u64, |acc, mv| (acc << 3) | mv.index() as u64)
            }
        };
        MoveCode { context, direction: m }
    }
}

/// Log-space move preferences; unknown codes read as 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Policy {
    weights: HashMap<MoveCode, f64>,
}

impl Policy {
    pub fn weight(&self, code: &MoveCode) -> f64 {
        self.weights.get(code).copied().unwrap_or(0.0)
    }

    fn add(&mut self, code: MoveCode, delta: f64) {
        *self.weights.entry(code).or_insert(0.0) += delta;
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NrpaParams {
    pub level: u32,
    pub iterations: u32,
    pub alpha: f64,
    /// Prior strength. Zero gives plain NRPA.
    pub bias: f64,
    pub reward: RewardScheme,
    pub coding: MoveCoding,
}

impl Default for NrpaParams {
    fn default() -> Self {
        NrpaParams {
            level: 3,
            iterations: 100,
            alpha: 1.0,
            bias: 0.0,
            reward: RewardScheme::GUIDANCE,
            coding: MoveCoding::Ply,
        }
    }
}

impl NrpaParams {
    pub fn gnrpa(bias: f64) -> Self {
        NrpaParams {
            bias,
            ..NrpaParams::default()
        }
    }

    fn logits(&self, state: &ChainState, legal: &[Move], policy: &Policy, out: &mut Vec<f64>) {
        out.clear();
        for &m in legal {
            let mut l = policy.weight(&self.coding.code(state, m));
            if self.bias != 0.0 {
                l += self.bias * state.gain_unchecked(m, &self.reward);
            }
            out.push(l);
        }
    }
}

/// Policy-guided rollout from `root`.
pub fn rollout(
    root: &ChainState,
    params: &NrpaParams,
    policy: &Policy,
    rng: &mut RngStream,
    ctx: &mut SearchContext,
) -> ScoredSequence {
    ctx.count_playouts(1);
    let mut s = root.clone();
    let mut moves = Vec::new();
    let mut logits = Vec::with_capacity(6);
    loop {
        let legal = s.legal_moves();
        if legal.is_empty() {
            break;
        }
        let m = if legal.len() == 1 {
            legal[0]
        } else {
            params.logits(&s, &legal, policy, &mut logits);
            legal[sample_index(&logits, rng)]
        };
        s.apply_unchecked(m);
        moves.push(m);
    }
    ScoredSequence::new(s.score(), moves)
}

/// Gradient step on the log-likelihood of `sequence` under the policy.
pub fn adapt(root: &ChainState, params: &NrpaParams, policy: &Policy, sequence: &[Move]) -> Policy {
    let mut next = policy.clone();
    let mut s = root.clone();
    let mut logits = Vec::with_capacity(6);
    for &played in sequence {
        let legal = s.legal_moves();
        params.logits(&s, &legal, policy, &mut logits);
        let probs = softmax_weights(&logits);
        for (&m, p) in legal.iter().zip(probs) {
            next.add(params.coding.code(&s, m), -params.alpha * p);
        }
        next.add(params.coding.code(&s, played), params.alpha);
        s.apply_unchecked(played);
    }
    next
}

fn level_search(
    root: &ChainState,
    params: &NrpaParams,
    level: u32,
    mut policy: Policy,
    rng: &mut RngStream,
    ctx: &mut SearchContext,
) -> ScoredSequence {
    if level == 0 {
        return rollout(root, params, &policy, rng, ctx);
    }
    let mut best = ScoredSequence::worst();
    for _ in 0..params.iterations.max(1) {
        let r = level_search(root, params, level - 1, policy.clone(), rng, ctx);
        if r.score >= best.score {
            best = r;
        }
        if ctx.exhausted() {
            break;
        }
        policy = adapt(root, params, &policy, &best.moves);
    }
    best
}

/// NRPA or GNRPA (depending on `params.bias`) from `root`.
pub fn nrpa(root: &ChainState, params: &NrpaParams, rng: &mut RngStream, ctx: &mut SearchContext) -> ScoredSequence {
    level_search(root, params, params.level, Policy::default(), rng, ctx)
}

/// GNRPA with an explicit prior strength.
pub fn gnrpa(
    root: &ChainState,
    params: &NrpaParams,
    bias: f64,
    rng: &mut RngStream,
    ctx: &mut SearchContext,
) -> ScoredSequence {
    let p = NrpaParams { bias, ..*params };
    nrpa(root, &p, rng, ctx)
}
