//! Monte Carlo search for minimum-energy foldings of HP-model lattice
//! proteins.
//!
//! Chains are grown residue by residue on the square (2D) or cubic (3D)
//! lattice. The crate provides biased-growth playouts, Nested Monte Carlo
//! Search, Lazy NMCS with per-depth pruning thresholds, four comparison
//! searches (NRPA, GNRPA, greedy best-first, UCT), an exhaustive enumerator
//! for short chains, and a benchmark harness over ten 48-mer molecules.
//!
//! Scores are contact counts: the number of non-consecutive H–H pairs on
//! adjacent lattice cells. Energy is the negated score.

pub mod algo;
pub mod baselines;
pub mod bench;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod lnmcs;
pub mod nmcs;
pub mod playout;
pub mod rng;
pub mod search;

pub use algo::Algorithm;
pub use error::{Error, Result};
pub use lattice::{initial_state, ChainState, Dimension, HpSequence, Move, Point, Residue, RewardScheme};
pub use lnmcs::{lnmcs, LnmcsParams, ThresholdPolicy, ThresholdTable};
pub use nmcs::{nmcs, NmcsParams};
pub use playout::{playout, softmax_choice, PlayoutParams, ScoredSequence};
pub use rng::RngStream;
pub use search::{Budget, SearchContext, SearchOutcome};
