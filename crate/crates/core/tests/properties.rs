use std::collections::HashSet;
use std::sync::Arc;

use hpfold_core::lattice::{moves_to_string, parse_moves, Conformation};
use hpfold_core::playout::softmax_weights;
use hpfold_core::{ChainState, Dimension, HpSequence, Move, Point, Residue};
use proptest::prelude::*;

fn hp_string(min: usize, max: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('H'), Just('P')], min..=max).prop_map(|v| v.into_iter().collect())
}

fn dim_strategy() -> impl Strategy<Value = Dimension> {
    prop_oneof![Just(Dimension::Two), Just(Dimension::Three)]
}

/// Grows a chain by picking `choices[i] % legal.len()` at each step.
fn grow(seq: &str, dim: Dimension, symmetry: bool, choices: &[u8]) -> ChainState {
    let mut s = ChainState::new(Arc::new(HpSequence::parse(seq).unwrap()), dim, symmetry);
    for &c in choices {
        let legal = s.legal_moves();
        if legal.is_empty() {
            break;
        }
        s.apply(legal[c as usize % legal.len()]).unwrap();
    }
    s
}

fn recount(seq: &HpSequence, points: &[Point]) -> u32 {
    let mut c = 0;
    for i in 0..points.len() {
        for j in i + 2..points.len() {
            let d = (points[i].x - points[j].x).abs() + (points[i].y - points[j].y).abs() + (points[i].z - points[j].z).abs();
            if d == 1 && seq.get(i) == Residue::H && seq.get(j) == Residue::H {
                c += 1;
            }
        }
    }
    c
}

/// Signed axis permutation applied to a move.
fn transform(m: Move, perm: [usize; 3], signs: [i32; 3]) -> Move {
    let (dx, dy, dz) = m.offset();
    let v = [dx, dy, dz];
    let mut out = [0; 3];
    for axis in 0..3 {
        out[perm[axis]] = v[axis] * signs[axis];
    }
    Move::from_offset(out[0], out[1], out[2]).unwrap()
}

fn isometry(dim: Dimension) -> impl Strategy<Value = ([usize; 3], [i32; 3])> {
    let perms: Vec<[usize; 3]> = match dim {
        Dimension::Two => vec![[0, 1, 2], [1, 0, 2]],
        Dimension::Three => vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
    };
    let zsigns = match dim {
        Dimension::Two => vec![1],
        Dimension::Three => vec![1, -1],
    };
    (
        proptest::sample::select(perms),
        proptest::sample::select(vec![1, -1]),
        proptest::sample::select(vec![1, -1]),
        proptest::sample::select(zsigns),
    )
        .prop_map(|(p, a, b, c)| (p, [a, b, c]))
}

proptest! {
    #[test]
    fn incremental_contacts_match_recount(
        seq in hp_string(2, 40),
        dim in dim_strategy(),
        symmetry: bool,
        choices in proptest::collection::vec(any::<u8>(), 0..40),
    ) {
        let s = grow(&seq, dim, symmetry, &choices);
        prop_assert_eq!(s.contacts(), recount(s.sequence(), s.placed()));
        prop_assert_eq!(s.conformation().contacts(), s.contacts());
        prop_assert!(s.conformation().is_self_avoiding_walk());
    }

    #[test]
    fn legal_moves_target_free_cells(
        seq in hp_string(2, 30),
        dim in dim_strategy(),
        symmetry: bool,
        choices in proptest::collection::vec(any::<u8>(), 0..30),
    ) {
        let s = grow(&seq, dim, symmetry, &choices);
        let occupied: HashSet<Point> = s.placed().iter().copied().collect();
        for m in s.legal_moves() {
            prop_assert!(!occupied.contains(&s.head().step(m)));
            prop_assert!(s.is_legal(m));
            if dim == Dimension::Two {
                prop_assert!(!matches!(m, Move::PosZ | Move::NegZ));
            }
        }
        if !s.is_complete() && !symmetry {
            let free = dim.directions().iter().filter(|&&m| !occupied.contains(&s.head().step(m))).count();
            prop_assert_eq!(free, s.legal_moves().len());
        }
    }

    #[test]
    fn score_invariant_under_lattice_isometries(
        seq in hp_string(4, 30),
        (dim, iso) in dim_strategy().prop_flat_map(|d| (Just(d), isometry(d))),
        choices in proptest::collection::vec(any::<u8>(), 0..30),
    ) {
        let s = grow(&seq, dim, false, &choices);
        let (perm, signs) = iso;
        let moved: Vec<Move> = s.moves().into_iter().map(|m| transform(m, perm, signs)).collect();
        let t = ChainState::replay(s.shared_sequence(), dim, false, &moved).unwrap();
        prop_assert_eq!(t.contacts(), s.contacts());
    }

    #[test]
    fn softmax_sums_to_one_and_ignores_shift(
        logits in proptest::collection::vec(-50.0f64..50.0, 1..7),
        shift in -1e3f64..1e3,
    ) {
        let w = softmax_weights(&logits);
        let sum: f64 = w.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(w.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let shifted: Vec<f64> = logits.iter().map(|l| l + shift).collect();
        for (a, b) in w.iter().zip(softmax_weights(&shifted)) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn move_strings_round_trip(
        seq in hp_string(2, 30),
        dim in dim_strategy(),
        choices in proptest::collection::vec(any::<u8>(), 0..30),
    ) {
        let s = grow(&seq, dim, true, &choices);
        let text = moves_to_string(&s.moves());
        prop_assert_eq!(parse_moves(&text).unwrap(), s.moves());
        let conf = Conformation::parse(&s.conformation().to_text(), dim).unwrap();
        prop_assert_eq!(conf, s.conformation());
    }
}

#[test]
fn huge_logits_stay_finite() {
    let w = softmax_weights(&[1e6, 1e6 - 1.0, -1e6]);
    assert!(w.iter().all(|x| x.is_finite()));
    assert!((w[0] - 1.0 / (1.0 + (-1.0f64).exp())).abs() < 1e-12);
}
