//! The ten 48-mer 3D benchmark molecules and their best known scores.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::HpSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BenchmarkMolecule {
    pub id: usize,
    pub sequence: &'static str,
    /// Best known contact count (negated ground-state energy).
    pub target_score: u32,
}

impl BenchmarkMolecule {
    pub fn hp_sequence(&self) -> Arc<HpSequence> {
        Arc::new(HpSequence::parse(self.sequence).expect("built-in sequences are valid"))
    }
}

pub const MOLECULES: [BenchmarkMolecule; 10] = [
    BenchmarkMolecule {
        id: 1,
        sequence: "HPHHPPHHHHPHHHPPHHPPHPHHHPHPHHPPHHPPPHPPPPPPPPHH",
        target_score: 32,
    },
    BenchmarkMolecule {
        id: 2,
        sequence: "HHHHPHHPHHHHHPPHPPHHPPHPPPPPPHPPHPPPHPPHHPPHHHPH",
        target_score: 34,
    },
    BenchmarkMolecule {
        id: 3,
        sequence: "PHPHHPHHHHHHPPHPHPPHPHHPHPHPPPHPPHHPPHHPPHPHPPHP",
        target_score: 34,
    },
    BenchmarkMolecule {
        id: 4,
        sequence: "PHPHHPPHPHHHPPHHPHHPPPHHHHHPPHPHHPHPHPPPPHPPHPHP",
        target_score: 33,
    },
    BenchmarkMolecule {
        id: 5,
        sequence: "PPHPPPHPHHHHPPHHHHPHHPHHHPPHPHPHPPHPPPPPPHHPHHPH",
        target_score: 32,
    },
    BenchmarkMolecule {
        id: 6,
        sequence: "HHHPPPHHPHPHHPHHPHHPHPPPPPPPHPHPPHPPPHPPHHHHHHPH",
        target_score: 32,
    },
    BenchmarkMolecule {
        id: 7,
        sequence: "PHPPPPHPHHHPHPHHHHPHHPHHPPPHPHPPPHHHPPHHPPHHPPPH",
        target_score: 32,
    },
    BenchmarkMolecule {
        id: 8,
        sequence: "PHHPHHHPHHHHPPHHHPPPPPPHPHHPPHHPHPPPHHPHPHPHHPPP",
        target_score: 31,
    },
    BenchmarkMolecule {
        id: 9,
        sequence: "PHPHPPPPHPHPHPPHPHHHHHHPPHHHPHPPHPHHPPHPHHHPPPPH",
        target_score: 34,
    },
    BenchmarkMolecule {
        id: 10,
        sequence: "PHHPPPPPPHHPPPHHHPHPPHPHHPPHPPHPPHHPPHHHHHHHPPHH",
        target_score: 33,
    },
];

pub fn molecule(id: usize) -> Result<BenchmarkMolecule> {
    MOLECULES
        .iter()
        .find(|m| m.id == id)
        .copied()
        .ok_or(Error::UnknownMolecule(id))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        assert_eq!(molecule(4).unwrap().target_score, 33);
        assert!(matches!(molecule(0), Err(Error::UnknownMolecule(0))));
        assert!(molecule(11).is_err());
    }

    #[test]
    fn all_are_48_mers() {
        for m in &MOLECULES {
            assert_eq!(m.hp_sequence().len(), 48, "molecule {}", m.id);
        }
    }
}
