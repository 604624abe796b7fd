//! Exhaustive enumeration as ground truth for the searches.

use std::sync::Arc;

use hpfold_core::baselines::{GbfsParams, NrpaParams, UctParams};
use hpfold_core::enumerate::{enumerate, max_len};
use hpfold_core::{
    Algorithm, Budget, ChainState, Dimension, HpSequence, LnmcsParams, NmcsParams, PlayoutParams, RngStream,
    ThresholdPolicy,
};

fn random_sequence(rng: &mut RngStream, n: usize) -> HpSequence {
    let s: String = (0..n).map(|_| if rng.below(2) == 0 { 'H' } else { 'P' }).collect();
    HpSequence::parse(&s).unwrap()
}

fn algorithms() -> Vec<Algorithm> {
    vec![
        Algorithm::Playout(PlayoutParams::default()),
        Algorithm::Nmcs(NmcsParams { level: 2, ..NmcsParams::default() }),
        Algorithm::Lnmcs(LnmcsParams { level: 2, ..LnmcsParams::default() }),
        Algorithm::Lnmcs(LnmcsParams {
            level: 2,
            threshold: ThresholdPolicy::Median,
            two_pass: true,
            ..LnmcsParams::default()
        }),
        Algorithm::Nrpa(NrpaParams { level: 2, iterations: 20, ..NrpaParams::default() }),
        Algorithm::Gnrpa(NrpaParams { level: 2, iterations: 20, ..NrpaParams::gnrpa(20.0) }),
        Algorithm::Gbfs(GbfsParams::default()),
        Algorithm::Uct(UctParams::default()),
    ]
}

#[test]
fn no_search_beats_the_enumerated_optimum() {
    let mut rng = RngStream::new(0x0AC1E);
    for case in 0..8 {
        let (dim, n) = if case % 2 == 0 { (Dimension::Two, 6 + case) } else { (Dimension::Three, 5 + case / 2) };
        let seq = Arc::new(random_sequence(&mut rng, n));
        let oracle = enumerate(&seq, dim, false).unwrap();
        for symmetry in [false, true] {
            let root = ChainState::new(seq.clone(), dim, symmetry);
            for algo in algorithms() {
                let out = algo.run(&root, Budget::playouts(3_000), &mut rng.split(case as u64));
                let end = ChainState::replay(seq.clone(), dim, false, &out.best.moves).unwrap();
                assert_eq!(end.score(), out.best.score, "{algo} on {seq}");
                assert!(end.is_terminal(), "{algo} returned a non-terminal state on {seq}");
                assert!(
                    out.best.score <= oracle.terminal_optimum as f64,
                    "{algo} scored {} above the optimum {} on {seq}",
                    out.best.score,
                    oracle.terminal_optimum
                );
            }
        }
    }
}

#[test]
fn nmcs_level_two_finds_small_2d_optima() {
    let mut rng = RngStream::new(77);
    let params = NmcsParams { level: 2, ..NmcsParams::default() };
    for n in [6, 8, 10] {
        let seq = Arc::new(random_sequence(&mut rng, n));
        let best = enumerate(&seq, Dimension::Two, false).unwrap().terminal_optimum as f64;
        let root = ChainState::new(seq.clone(), Dimension::Two, false);
        let hits = (0..20)
            .filter(|&s| {
                let out = Algorithm::Nmcs(params).run(&root, Budget::unlimited(), &mut RngStream::new(s));
                out.best.score == best
            })
            .count();
        assert!(hits >= 19, "{hits}/20 optimal on {seq}");
    }
}

#[test]
fn symmetry_reduction_keeps_optimum() {
    let mut rng = RngStream::new(3);
    for (dim, n) in [(Dimension::Two, 11), (Dimension::Three, 8)] {
        let seq = random_sequence(&mut rng, n);
        let full = enumerate(&seq, dim, false).unwrap();
        let reduced = enumerate(&seq, dim, true).unwrap();
        assert_eq!(full.complete_optimum, reduced.complete_optimum);
        assert_eq!(full.terminal_optimum, reduced.terminal_optimum);
        assert!(reduced.complete_count < full.complete_count);
    }
}

#[test]
fn enumeration_refuses_long_chains() {
    for dim in [Dimension::Two, Dimension::Three] {
        let seq = HpSequence::parse(&"H".repeat(max_len(dim) + 1)).unwrap();
        assert!(enumerate(&seq, dim, true).is_err());
    }
}
