//! Comparison searches over the same chain-growth problem.

pub mod gbfs;
pub mod nrpa;
pub mod uct;

pub use gbfs::{greedy_bfs, Frontier, GbfsParams};
pub use nrpa::{adapt, gnrpa, nrpa, rollout, MoveCode, MoveCoding, NrpaParams, Policy};
pub use uct::{uct, UctEdge, UctNode, UctParams, UctTree};
