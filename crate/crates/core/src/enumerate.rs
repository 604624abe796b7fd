//! Exhaustive enumeration of self-avoiding conformations for short chains.
//!
//! This module deliberately shares nothing with [`crate::lattice::ChainState`]
//! beyond the `Move` type used to report the optimum: walks are grown on raw
//! coordinate triples, occupancy is a `HashSet`, and contacts are recounted
//! pairwise at every leaf. It serves as an independent oracle for the
//! searches.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Dimension, HpSequence, Move, Residue};

pub const MAX_LEN_2D: usize = 16;
pub const MAX_LEN_3D: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    /// Best contact count over complete conformations (`None` if the chain
    /// cannot be completed, which never happens on these lattices).
    pub complete_optimum: Option<u32>,
    /// Best contact count over every terminal chain-growth state, complete
    /// or trapped.
    pub terminal_optimum: u32,
    #[serde(with = "crate::lattice::move_string")]
    pub optimal_moves: Vec<Move>,
    pub complete_count: u64,
    pub trapped_count: u64,
}

pub fn max_len(dim: Dimension) -> usize {
    match dim {
        Dimension::Two => MAX_LEN_2D,
        Dimension::Three => MAX_LEN_3D,
    }
}

const STEPS: [[i32; 3]; 6] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];

struct Walker<'a> {
    kinds: Vec<bool>,
    steps: &'a [[i32; 3]],
    symmetry: bool,
    path: Vec<[i32; 3]>,
    dirs: Vec<usize>,
    seen: HashSet<[i32; 3]>,
    out: Enumeration,
}

impl Walker<'_> {
    fn contacts(&self) -> u32 {
        let mut c = 0;
        for i in 0..self.path.len() {
            for j in i + 2..self.path.len() {
                if self.kinds[i] && self.kinds[j] {
                    let d: i32 = (0..3).map(|k| (self.path[i][k] - self.path[j][k]).abs()).sum();
                    if d == 1 {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    /// Canonical representatives only: first step +x, first off-axis step
    /// +y, first out-of-plane step +z.
    fn allowed(&self, d: usize) -> bool {
        if !self.symmetry {
            return true;
        }
        if self.dirs.is_empty() {
            return d == 0;
        }
        let turned = self.dirs.iter().any(|&k| k >= 2);
        if !turned {
            return d == 0 || d == 2;
        }
        let lifted = self.dirs.iter().any(|&k| k >= 4);
        lifted || d != 5
    }

    fn leaf(&mut self, complete: bool) {
        let c = self.contacts();
        if complete {
            self.out.complete_count += 1;
            self.out.complete_optimum = Some(self.out.complete_optimum.map_or(c, |b| b.max(c)));
        } else {
            self.out.trapped_count += 1;
        }
        let first = self.out.complete_count + self.out.trapped_count == 1;
        if first || c > self.out.terminal_optimum {
            self.out.terminal_optimum = c;
            self.out.optimal_moves = self.dirs.iter().map(|&k| Move::ALL[k]).collect();
        }
    }

    fn grow(&mut self) {
        if self.path.len() == self.kinds.len() {
            self.leaf(true);
            return;
        }
        let head = *self.path.last().unwrap();
        let mut extended = false;
        for d in 0..self.steps.len() {
            let s = self.steps[d];
            let next = [head[0] + s[0], head[1] + s[1], head[2] + s[2]];
            if self.seen.contains(&next) || !self.allowed(d) {
                continue;
            }
            extended = true;
            self.seen.insert(next);
            self.path.push(next);
            self.dirs.push(d);
            self.grow();
            self.dirs.pop();
            self.path.pop();
            self.seen.remove(&next);
        }
        if !extended {
            self.leaf(false);
        }
    }
}

/// Enumerates every terminal conformation of `seq` (up to lattice symmetry
/// when `symmetry` is set). Refuses chains longer than [`max_len`].
pub fn enumerate(seq: &HpSequence, dim: Dimension, symmetry: bool) -> Result<Enumeration> {
    let max = max_len(dim);
    if seq.len() > max {
        return Err(Error::EnumerationTooLarge {
            len: seq.len(),
            max,
            dim: dim.rank(),
        });
    }
    let steps = match dim {
        Dimension::Two => &STEPS[..4],
        Dimension::Three => &STEPS[..],
    };
    let mut w = Walker {
        kinds: seq.residues().iter().map(|&r| r == Residue::H).collect(),
        steps,
        symmetry,
        path: vec![[0, 0, 0]],
        dirs: Vec::new(),
        seen: HashSet::from([[0, 0, 0]]),
        out: Enumeration {
            complete_optimum: None,
            terminal_optimum: 0,
            optimal_moves: Vec::new(),
            complete_count: 0,
            trapped_count: 0,
        },
    };
    w.grow();
    Ok(w.out)
}
