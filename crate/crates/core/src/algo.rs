//! Uniform entry point over every search in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::baselines::{gnrpa, greedy_bfs, nrpa, uct, GbfsParams, NrpaParams, UctParams};
use crate::lattice::ChainState;
use crate::lnmcs::{lnmcs, LnmcsParams};
use crate::nmcs::{nmcs, NmcsParams};
use crate::playout::PlayoutParams;
use crate::rng::RngStream;
use crate::search::{Budget, SearchContext, SearchOutcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "lowercase")]
pub enum Algorithm {
    /// A single biased-growth playout.
    Playout(PlayoutParams),
    Nmcs(NmcsParams),
    Lnmcs(LnmcsParams),
    Nrpa(NrpaParams),
    Gnrpa(NrpaParams),
    Gbfs(GbfsParams),
    Uct(UctParams),
}

impl Algorithm {
    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::Playout(_) => "playout",
            Algorithm::Nmcs(_) => "nmcs",
            Algorithm::Lnmcs(_) => "lnmcs",
            Algorithm::Nrpa(_) => "nrpa",
            Algorithm::Gnrpa(_) => "gnrpa",
            Algorithm::Gbfs(_) => "gbfs",
            Algorithm::Uct(_) => "uct",
        }
    }

    /// Runs the search against an existing context.
    pub fn search(&self, root: &ChainState, rng: &mut RngStream, ctx: &mut SearchContext) -> crate::playout::ScoredSequence {
        match self {
            Algorithm::Playout(p) => ctx.playout(root, p, rng),
            Algorithm::Nmcs(p) => nmcs(root, p, rng, ctx),
            Algorithm::Lnmcs(p) => lnmcs(root, p, rng, ctx),
            Algorithm::Nrpa(p) => nrpa(root, &NrpaParams { bias: 0.0, ..*p }, rng, ctx),
            Algorithm::Gnrpa(p) => gnrpa(root, p, p.bias, rng, ctx),
            Algorithm::Gbfs(p) => greedy_bfs(root, p, rng, ctx),
            Algorithm::Uct(p) => uct(root, p, rng, ctx),
        }
    }

    /// Runs one budgeted search with a fresh context.
    pub fn run(&self, root: &ChainState, budget: Budget, rng: &mut RngStream) -> SearchOutcome {
        let mut ctx = SearchContext::new(budget);
        let best = self.search(root, rng, &mut ctx);
        SearchOutcome {
            best,
            playouts: ctx.playouts(),
            elapsed_secs: ctx.elapsed().as_secs_f64(),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{initial_state, Dimension, HpSequence};
    use std::sync::Arc;

    #[test]
    fn every_algorithm_returns_a_replayable_result() {
        let root = initial_state(Arc::new(HpSequence::parse("HPHPPHHPHPPHPHHPPHPH").unwrap()), Dimension::Three);
        let algos = [
            Algorithm::Playout(PlayoutParams::default()),
            Algorithm::Nmcs(NmcsParams { level: 2, ..NmcsParams::default() }),
            Algorithm::Lnmcs(LnmcsParams { level: 2, eval_playouts: 3, ..LnmcsParams::default() }),
            Algorithm::Nrpa(NrpaParams { level: 2, iterations: 10, ..NrpaParams::default() }),
            Algorithm::Gnrpa(NrpaParams { level: 2, iterations: 10, ..NrpaParams::gnrpa(20.0) }),
            Algorithm::Gbfs(GbfsParams::default()),
            Algorithm::Uct(UctParams::default()),
        ];
        for a in &algos {
            let out = a.run(&root, Budget::playouts(2_000), &mut RngStream::new(1));
            let end = ChainState::replay(root.shared_sequence(), root.dim(), true, &out.best.moves).unwrap();
            assert_eq!(end.score(), out.best.score, "{a}");
            assert!(end.is_terminal(), "{a}");
            assert!(out.playouts >= 1);
        }
    }

    #[test]
    fn json_tagging() {
        let a = Algorithm::Nmcs(NmcsParams::default());
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.starts_with("{\"algo\":\"nmcs\""));
        let back: Algorithm = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }
}
