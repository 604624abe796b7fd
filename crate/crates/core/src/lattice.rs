//! HP-model primitives: residue sequences, square/cubic lattice geometry and
//! chain-growth states.
//!
//! A [`ChainState`] is a partial self-avoiding walk. The first residue sits at
//! the origin and every [`Move`] places the next residue on a free cell next
//! to the current head. The objective score of a state is its number of
//! non-consecutive H–H lattice contacts (the negated HP energy).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Residue {
    H,
    P,
}

impl Residue {
    pub fn from_char(c: char) -> Option<Residue> {
        match c {
            'H' => Some(Residue::H),
            'P' => Some(Residue::P),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Residue::H => 'H',
            Residue::P => 'P',
        }
    }
}

/// An ordered, non-empty chain of H/P residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HpSequence {
    residues: Vec<Residue>,
}

impl HpSequence {
    /// Parses an HP string. Whitespace anywhere is ignored; error indices
    /// refer to character positions in `text`.
    pub fn parse(text: &str) -> Result<HpSequence> {
        let mut residues = Vec::with_capacity(text.len());
        for (index, c) in text.chars().enumerate() {
            if c.is_whitespace() {
                continue;
            }
            match Residue::from_char(c) {
                Some(r) => residues.push(r),
                None => return Err(Error::InvalidResidue { index, found: c }),
            }
        }
        if residues.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(HpSequence { residues })
    }

    pub fn from_residues(residues: Vec<Residue>) -> Result<HpSequence> {
        if residues.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(HpSequence { residues })
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    #[inline]
    pub fn get(&self, i: usize) -> Residue {
        self.residues[i]
    }

    pub fn count_h(&self) -> usize {
        self.residues.iter().filter(|&&r| r == Residue::H).count()
    }
}

impl FromStr for HpSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HpSequence::parse(s)
    }
}

impl fmt::Display for HpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.residues {
            write!(f, "{}", r.as_char())?;
        }
        Ok(())
    }
}

/// Reads a sequence file: one HP string per line, `#` starts a comment,
/// blank lines are skipped.
pub fn parse_sequence_file(text: &str) -> Result<Vec<HpSequence>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let seq = HpSequence::parse(content).map_err(|e| Error::SequenceFile {
            line: i + 1,
            source: Box::new(e),
        })?;
        out.push(seq);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn rank(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Unit directions of this lattice in canonical order.
    pub fn directions(self) -> &'static [Move] {
        match self {
            Dimension::Two => &Move::ALL[..4],
            Dimension::Three => &Move::ALL[..],
        }
    }
}

impl TryFrom<u8> for Dimension {
    type Error = Error;

    fn try_from(d: u8) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(Error::InvalidParameter(format!("dimension must be 2 or 3, got {d}"))),
        }
    }
}

impl From<Dimension> for u8 {
    fn from(d: Dimension) -> u8 {
        d.rank() as u8
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0, z: 0 };

    pub fn new(x: i32, y: i32, z: i32) -> Point {
        Point { x, y, z }
    }

    #[inline]
    pub fn step(self, m: Move) -> Point {
        let (dx, dy, dz) = m.offset();
        Point {
            x: self.x + dx,
            y: self.y + dy,
            z: self.z + dz,
        }
    }

    pub fn manhattan(self, other: Point) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y) + self.z.abs_diff(other.z)
    }

    pub fn is_adjacent(self, other: Point) -> bool {
        self.manhattan(other) == 1
    }
}

/// Absolute lattice direction of one chain-growth step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    PosX,
    NegX,
    PosY,
    NegY,
    PosZ,
    NegZ,
}

impl Move {
    /// Canonical order: +x, -x, +y, -y, +z, -z.
    pub const ALL: [Move; 6] = [
        Move::PosX,
        Move::NegX,
        Move::PosY,
        Move::NegY,
        Move::PosZ,
        Move::NegZ,
    ];

    #[inline]
    pub fn offset(self) -> (i32, i32, i32) {
        match self {
            Move::PosX => (1, 0, 0),
            Move::NegX => (-1, 0, 0),
            Move::PosY => (0, 1, 0),
            Move::NegY => (0, -1, 0),
            Move::PosZ => (0, 0, 1),
            Move::NegZ => (0, 0, -1),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Move {
        Move::ALL[self.index() ^ 1]
    }

    pub fn from_offset(dx: i32, dy: i32, dz: i32) -> Option<Move> {
        Move::ALL.into_iter().find(|m| m.offset() == (dx, dy, dz))
    }

    /// Single-letter code: R/L (x), U/D (y), F/B (z).
    pub fn letter(self) -> char {
        match self {
            Move::PosX => 'R',
            Move::NegX => 'L',
            Move::PosY => 'U',
            Move::NegY => 'D',
            Move::PosZ => 'F',
            Move::NegZ => 'B',
        }
    }

    pub fn from_letter(c: char) -> Result<Move> {
        match c {
            'R' => Ok(Move::PosX),
            'L' => Ok(Move::NegX),
            'U' => Ok(Move::PosY),
            'D' => Ok(Move::NegY),
            'F' => Ok(Move::PosZ),
            'B' => Ok(Move::NegZ),
            other => Err(Error::InvalidMoveLetter(other)),
        }
    }
}

pub fn moves_to_string(moves: &[Move]) -> String {
    moves.iter().map(|m| m.letter()).collect()
}

pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(Move::from_letter)
        .collect()
}

/// Serde adapter storing a move list as its letter string.
pub mod move_string {
    use super::{moves_to_string, parse_moves, Move};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(moves: &[Move], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&moves_to_string(moves))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Move>, D::Error> {
        let text = String::deserialize(d)?;
        parse_moves(&text).map_err(serde::de::Error::custom)
    }
}

/// Pairwise contact rewards used to guide playouts.
///
/// The search objective always uses [`RewardScheme::OBJECTIVE`]; the
/// guidance scheme only shapes the playout softmax.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardScheme {
    pub hh_gain: f64,
    pub hp_penalty: f64,
    pub pp_gain: f64,
}

impl RewardScheme {
    pub const OBJECTIVE: RewardScheme = RewardScheme {
        hh_gain: 1.0,
        hp_penalty: 0.0,
        pp_gain: 0.0,
    };

    pub const GUIDANCE: RewardScheme = RewardScheme {
        hh_gain: 1.0,
        hp_penalty: -0.2,
        pp_gain: 0.0,
    };

    #[inline]
    pub fn pair(&self, a: Residue, b: Residue) -> f64 {
        match (a, b) {
            (Residue::H, Residue::H) => self.hh_gain,
            (Residue::P, Residue::P) => self.pp_gain,
            _ => self.hp_penalty,
        }
    }
}

impl Default for RewardScheme {
    fn default() -> Self {
        RewardScheme::GUIDANCE
    }
}

pub type MoveList = ArrayVec<Move, 6>;

const EMPTY: u64 = u64::MAX;
const COORD_OFFSET: i64 = 1 << 20;

/// Open-addressed map from lattice cell to residue index. Cells are never
/// removed, so linear probing needs no tombstones.
#[derive(Clone, Debug)]
struct Occupancy {
    keys: Vec<u64>,
    owners: Vec<u32>,
    shift: u32,
}

impl Occupancy {
    fn with_residues(n: usize) -> Occupancy {
        let cap = (4 * n).max(16).next_power_of_two();
        Occupancy {
            keys: vec![EMPTY; cap],
            owners: vec![0; cap],
            shift: 64 - cap.trailing_zeros(),
        }
    }

    #[inline]
    fn pack(p: Point) -> u64 {
        let x = (p.x as i64 + COORD_OFFSET) as u64;
        let y = (p.y as i64 + COORD_OFFSET) as u64;
        let z = (p.z as i64 + COORD_OFFSET) as u64;
        x | (y << 21) | (z << 42)
    }

    #[inline]
    fn slot(&self, key: u64) -> usize {
        (key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> self.shift) as usize
    }

    #[inline]
    fn get(&self, p: Point) -> Option<usize> {
        let key = Self::pack(p);
        let mask = self.keys.len() - 1;
        let mut i = self.slot(key);
        loop {
            let k = self.keys[i];
            if k == key {
                return Some(self.owners[i] as usize);
            }
            if k == EMPTY {
                return None;
            }
            i = (i + 1) & mask;
        }
    }

    #[inline]
    fn insert(&mut self, p: Point, owner: usize) {
        let key = Self::pack(p);
        let mask = self.keys.len() - 1;
        let mut i = self.slot(key);
        while self.keys[i] != EMPTY {
            debug_assert_ne!(self.keys[i], key, "cell already occupied");
            i = (i + 1) & mask;
        }
        self.keys[i] = key;
        self.owners[i] = owner as u32;
    }
}

/// A partial chain-growth folding.
///
/// With symmetry reduction on, the first move is fixed to +x, the first
/// move off the x axis is fixed to +y, and (in 3D) the first move off the
/// z = 0 plane is fixed to +z. This removes the 8 (2D) or 48 (3D) lattice
/// symmetries without losing any conformation up to symmetry.
#[derive(Clone, Debug)]
pub struct ChainState {
    sequence: Arc<HpSequence>,
    dim: Dimension,
    symmetry: bool,
    placed: Vec<Point>,
    occupancy: Occupancy,
    contacts: u32,
    turned: bool,
    left_plane: bool,
}

/// Start state with symmetry reduction enabled.
pub fn initial_state(seq: impl Into<Arc<HpSequence>>, dim: Dimension) -> ChainState {
    ChainState::new(seq, dim, true)
}

impl ChainState {
    pub fn new(seq: impl Into<Arc<HpSequence>>, dim: Dimension, symmetry: bool) -> ChainState {
        let sequence: Arc<HpSequence> = seq.into();
        let n = sequence.len();
        let mut occupancy = Occupancy::with_residues(n);
        occupancy.insert(Point::ORIGIN, 0);
        let mut placed = Vec::with_capacity(n);
        placed.push(Point::ORIGIN);
        ChainState {
            sequence,
            dim,
            symmetry,
            placed,
            occupancy,
            contacts: 0,
            turned: false,
            left_plane: false,
        }
    }

    /// Replays `moves` from the start state, validating each one.
    pub fn replay(
        seq: impl Into<Arc<HpSequence>>,
        dim: Dimension,
        symmetry: bool,
        moves: &[Move],
    ) -> Result<ChainState> {
        let mut s = ChainState::new(seq, dim, symmetry);
        for &m in moves {
            s.apply(m)?;
        }
        Ok(s)
    }

    /// Fresh start state for the same sequence and settings.
    pub fn root(&self) -> ChainState {
        ChainState::new(self.sequence.clone(), self.dim, self.symmetry)
    }

    pub fn sequence(&self) -> &HpSequence {
        &self.sequence
    }

    pub fn shared_sequence(&self) -> Arc<HpSequence> {
        self.sequence.clone()
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn symmetry(&self) -> bool {
        self.symmetry
    }

    pub fn placed(&self) -> &[Point] {
        &self.placed
    }

    pub fn head(&self) -> Point {
        *self.placed.last().expect("at least one residue is always placed")
    }

    /// Number of moves played so far (`placed.len() - 1`).
    pub fn moves_played(&self) -> usize {
        self.placed.len() - 1
    }

    pub fn contacts(&self) -> u32 {
        self.contacts
    }

    /// Objective score: the number of non-consecutive H–H contacts.
    /// Trapped incomplete chains score what they have accumulated.
    pub fn score(&self) -> f64 {
        self.contacts as f64
    }

    pub fn is_complete(&self) -> bool {
        self.placed.len() == self.sequence.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.is_complete() || self.legal_moves().is_empty()
    }

    pub fn occupant(&self, p: Point) -> Option<usize> {
        self.occupancy.get(p)
    }

    #[inline]
    fn symmetry_allows(&self, m: Move) -> bool {
        if !self.symmetry {
            return true;
        }
        if self.placed.len() == 1 {
            return m == Move::PosX;
        }
        if !self.turned {
            return matches!(m, Move::PosX | Move::PosY);
        }
        !(self.dim == Dimension::Three && !self.left_plane && m == Move::NegZ)
    }

    /// Legal moves in canonical direction order. Empty for complete or
    /// trapped chains.
    pub fn legal_moves(&self) -> MoveList {
        let mut out = MoveList::new();
        if self.is_complete() {
            return out;
        }
        let head = self.head();
        for &m in self.dim.directions() {
            if self.symmetry_allows(m) && self.occupancy.get(head.step(m)).is_none() {
                out.push(m);
            }
        }
        out
    }

    pub fn is_legal(&self, m: Move) -> bool {
        !self.is_complete()
            && self.dim.directions().contains(&m)
            && self.symmetry_allows(m)
            && self.occupancy.get(self.head().step(m)).is_none()
    }

    fn check(&self, m: Move) -> Result<()> {
        if self.is_legal(m) {
            Ok(())
        } else {
            Err(Error::IllegalMove {
                mv: m,
                moves_played: self.moves_played(),
            })
        }
    }

    /// Sum of pair rewards between the incoming residue at `head + m` and its
    /// occupied lattice neighbours, excluding its chain predecessor.
    #[inline]
    pub(crate) fn gain_unchecked(&self, m: Move, reward: &RewardScheme) -> f64 {
        let incoming = self.placed.len();
        let kind = self.sequence.get(incoming);
        let target = self.head().step(m);
        let mut gain = 0.0;
        for &d in self.dim.directions() {
            if let Some(j) = self.occupancy.get(target.step(d)) {
                if j + 1 != incoming {
                    gain += reward.pair(kind, self.sequence.get(j));
                }
            }
        }
        gain
    }

    pub fn immediate_gain(&self, m: Move, reward: &RewardScheme) -> Result<f64> {
        self.check(m)?;
        Ok(self.gain_unchecked(m, reward))
    }

    #[inline]
    pub(crate) fn apply_unchecked(&mut self, m: Move) {
        let incoming = self.placed.len();
        let target = self.head().step(m);
        if self.sequence.get(incoming) == Residue::H {
            for &d in self.dim.directions() {
                if let Some(j) = self.occupancy.get(target.step(d)) {
                    if j + 1 != incoming && self.sequence.get(j) == Residue::H {
                        self.contacts += 1;
                    }
                }
            }
        }
        self.occupancy.insert(target, incoming);
        self.placed.push(target);
        match m {
            Move::PosX | Move::NegX => {}
            Move::PosY | Move::NegY => self.turned = true,
            Move::PosZ | Move::NegZ => {
                self.turned = true;
                self.left_plane = true;
            }
        }
    }

    /// Places the next residue in place.
    pub fn apply(&mut self, m: Move) -> Result<()> {
        self.check(m)?;
        self.apply_unchecked(m);
        Ok(())
    }

    /// Returns the successor state, leaving `self` untouched.
    pub fn play(&self, m: Move) -> Result<ChainState> {
        self.check(m)?;
        Ok(self.child(m))
    }

    #[inline]
    pub(crate) fn child(&self, m: Move) -> ChainState {
        let mut next = self.clone();
        next.apply_unchecked(m);
        next
    }

    /// Moves played so far, recovered from the placed coordinates.
    pub fn moves(&self) -> Vec<Move> {
        self.placed
            .windows(2)
            .map(|w| {
                Move::from_offset(w[1].x - w[0].x, w[1].y - w[0].y, w[1].z - w[0].z)
                    .expect("consecutive residues are adjacent")
            })
            .collect()
    }

    /// The last `k` moves, oldest first (fewer if the chain is shorter).
    pub fn last_moves(&self, k: usize) -> ArrayVec<Move, 16> {
        let start = self.placed.len().saturating_sub(k.min(16) + 1);
        self.placed[start..]
            .windows(2)
            .map(|w| {
                Move::from_offset(w[1].x - w[0].x, w[1].y - w[0].y, w[1].z - w[0].z)
                    .expect("consecutive residues are adjacent")
            })
            .collect()
    }

    pub fn conformation(&self) -> Conformation {
        Conformation {
            dim: self.dim,
            residues: self.sequence.residues()[..self.placed.len()].to_vec(),
            points: self.placed.clone(),
        }
    }
}

/// Placed residues with coordinates, in the `index kind x y [z]` text form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conformation {
    pub dim: Dimension,
    pub residues: Vec<Residue>,
    pub points: Vec<Point>,
}

impl Conformation {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (r, p)) in self.residues.iter().zip(&self.points).enumerate() {
            match self.dim {
                Dimension::Two => out.push_str(&format!("{i} {} {} {}\n", r.as_char(), p.x, p.y)),
                Dimension::Three => {
                    out.push_str(&format!("{i} {} {} {} {}\n", r.as_char(), p.x, p.y, p.z))
                }
            }
        }
        out
    }

    pub fn parse(text: &str, dim: Dimension) -> Result<Conformation> {
        let mut residues = Vec::new();
        let mut points = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| Error::Conformation {
                line: ln + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 + dim.rank() {
                return Err(bad("wrong number of fields"));
            }
            let index: usize = fields[0].parse().map_err(|_| bad("bad index"))?;
            if index != residues.len() {
                return Err(bad("indices must be consecutive from 0"));
            }
            let mut chars = fields[1].chars();
            let kind = match (chars.next().and_then(Residue::from_char), chars.next()) {
                (Some(r), None) => r,
                _ => return Err(bad("residue kind must be H or P")),
            };
            let mut coords = [0i32; 3];
            for (c, f) in coords.iter_mut().zip(&fields[2..]) {
                *c = f.parse().map_err(|_| bad("bad coordinate"))?;
            }
            residues.push(kind);
            points.push(Point::new(coords[0], coords[1], coords[2]));
        }
        Ok(Conformation { dim, residues, points })
    }

    /// True when consecutive points are adjacent and no cell is reused.
    pub fn is_self_avoiding_walk(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.points.iter().all(|p| seen.insert(*p))
            && self.points.windows(2).all(|w| w[0].is_adjacent(w[1]))
    }

    /// Pairwise recount of non-consecutive H–H contacts.
    pub fn contacts(&self) -> u32 {
        let n = self.points.len();
        let mut c = 0;
        for i in 0..n {
            for j in i + 2..n {
                if self.residues[i] == Residue::H
                    && self.residues[j] == Residue::H
                    && self.points[i].is_adjacent(self.points[j])
                {
                    c += 1;
                }
            }
        }
        c
    }
}
