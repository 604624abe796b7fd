//! Biased-growth playouts.
//!
//! A playout grows the chain to a terminal state, sampling each move from a
//! softmax over the bias-weighted immediate gains of the legal moves. Gains
//! use the guidance [`RewardScheme`]; the returned score is always the plain
//! H–H contact count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ChainState, Move, RewardScheme};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayoutParams {
    /// Softmax inverse temperature. Zero gives uniform sampling.
    pub bias: f64,
    pub reward: RewardScheme,
}

impl PlayoutParams {
    pub fn biased(bias: f64) -> Self {
        PlayoutParams {
            bias,
            reward: RewardScheme::GUIDANCE,
        }
    }

    pub fn uniform() -> Self {
        PlayoutParams::biased(0.0)
    }
}

impl Default for PlayoutParams {
    fn default() -> Self {
        PlayoutParams::biased(20.0)
    }
}

/// A score together with the move sequence that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredSequence {
    pub score: f64,
    #[serde(with = "crate::lattice::move_string")]
    pub moves: Vec<Move>,
}

impl ScoredSequence {
    pub fn new(score: f64, moves: Vec<Move>) -> Self {
        ScoredSequence { score, moves }
    }

    /// Sentinel used before anything has been recorded.
    pub fn worst() -> Self {
        ScoredSequence {
            score: f64::NEG_INFINITY,
            moves: Vec::new(),
        }
    }
}

/// Softmax probabilities, stabilised by subtracting the maximum logit.
pub fn softmax_weights(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

#[inline]
pub(crate) fn sample_index(logits: &[f64], rng: &mut RngStream) -> usize {
    debug_assert!(!logits.is_empty());
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logits.iter().map(|&l| (l - max).exp()).sum();
    let mut target = rng.next_f64() * sum;
    for (i, &l) in logits.iter().enumerate() {
        target -= (l - max).exp();
        if target < 0.0 {
            return i;
        }
    }
    logits.len() - 1
}

/// Samples one item with probability `exp(w_i) / sum_j exp(w_j)`.
/// `weighted_gains` must already include the bias factor.
pub fn softmax_choice<T: Copy>(items: &[T], weighted_gains: &[f64], rng: &mut RngStream) -> Result<T> {
    if items.is_empty() {
        return Err(Error::EmptyChoice);
    }
    if items.len() != weighted_gains.len() {
        return Err(Error::LengthMismatch {
            moves: items.len(),
            gains: weighted_gains.len(),
        });
    }
    Ok(items[sample_index(weighted_gains, rng)])
}

/// Runs one playout from `state`. A terminal input returns its own score
/// and an empty sequence.
pub fn playout(state: &ChainState, params: &PlayoutParams, rng: &mut RngStream) -> ScoredSequence {
    let mut s = state.clone();
    let mut moves = Vec::with_capacity(s.sequence().len() - s.placed().len());
    let mut logits = [0.0f64; 6];
    loop {
        let legal = s.legal_moves();
        if legal.is_empty() {
            break;
        }
        let m = if legal.len() == 1 {
            legal[0]
        } else {
            for (l, &m) in logits.iter_mut().zip(&legal) {
                *l = s.gain_unchecked(m, &params.reward) * params.bias;
            }
            legal[sample_index(&logits[..legal.len()], rng)]
        };
        s.apply_unchecked(m);
        moves.push(m);
    }
    ScoredSequence::new(s.score(), moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{initial_state, ChainState, Dimension, HpSequence};
    use std::sync::Arc;

    fn state(s: &str, dim: Dimension) -> ChainState {
        initial_state(Arc::new(HpSequence::parse(s).unwrap()), dim)
    }

    #[test]
    fn weights_sum_to_one() {
        for logits in [vec![0.0, 0.0, 0.0], vec![60.0, 0.0, -4.0], vec![1e3, 1e3 - 1.0]] {
            let w = softmax_weights(&logits);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|p| p.is_finite()));
        }
        let w = softmax_weights(&[0.0, 0.0, 0.0]);
        assert!(w.iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn shift_invariant_weights() {
        let a = softmax_weights(&[2.0, 0.5, -1.0]);
        let b = softmax_weights(&[102.0, 100.5, 99.0]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn choice_contract() {
        let mut rng = RngStream::new(0);
        assert_eq!(softmax_choice::<u8>(&[], &[], &mut rng), Err(Error::EmptyChoice));
        assert!(matches!(
            softmax_choice(&[1, 2], &[0.0], &mut rng),
            Err(Error::LengthMismatch { .. })
        ));
        assert_eq!(softmax_choice(&[7], &[-1e9], &mut rng), Ok(7));
    }

    #[test]
    fn terminal_input_returns_immediately() {
        let s = state("H", Dimension::Two);
        let mut rng = RngStream::new(1);
        let r = playout(&s, &PlayoutParams::default(), &mut rng);
        assert_eq!(r, ScoredSequence::new(0.0, vec![]));
    }

    #[test]
    fn playout_replays_to_score() {
        let s = state("HPHPPHHPHPPHPHHPPHPH", Dimension::Three);
        let mut rng = RngStream::new(5);
        for _ in 0..200 {
            let r = playout(&s, &PlayoutParams::default(), &mut rng);
            let end = ChainState::replay(s.shared_sequence(), s.dim(), true, &r.moves).unwrap();
            assert!(end.is_terminal());
            assert_eq!(end.score(), r.score);
        }
    }

    #[test]
    fn playout_is_deterministic() {
        let s = state("HPHPPHHPHPPHPHHPPHPH", Dimension::Two);
        let a = playout(&s, &PlayoutParams::default(), &mut RngStream::new(11));
        let b = playout(&s, &PlayoutParams::default(), &mut RngStream::new(11));
        assert_eq!(a, b);
    }

    #[test]
    fn bias_raises_mean_score() {
        let s = ChainState::new(Arc::new(HpSequence::parse("HPPH").unwrap()), Dimension::Two, false);
        let mean = |bias: f64, seed: u64| {
            let mut rng = RngStream::new(seed);
            let p = PlayoutParams::biased(bias);
            (0..10_000).map(|_| playout(&s, &p, &mut rng).score).sum::<f64>() / 10_000.0
        };
        let uniform = mean(0.0, 3);
        let biased = mean(20.0, 4);
        // Uniform: 4*3*3 walks, 8 of which close the square -> 2/9.
        assert!((uniform - 2.0 / 9.0).abs() < 0.02, "uniform mean {uniform}");
        // Biased: every turn at step two is followed by the contact move.
        assert!((biased - 2.0 / 3.0).abs() < 0.02, "biased mean {biased}");
        assert!(biased > uniform);
    }
}
