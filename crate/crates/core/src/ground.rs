//! Ground spaces (affine line, torus, elliptic curve), their two-torsion
//! subgroups, and the four root families.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which one-dimensional group each coordinate factor is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    Linear,
    Toric,
    Elliptic,
}

impl SpaceKind {
    pub fn parse(s: &str) -> Result<SpaceKind> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(SpaceKind::Linear),
            "toric" => Ok(SpaceKind::Toric),
            "elliptic" => Ok(SpaceKind::Elliptic),
            _ => Err(Error::Invalid(format!("unknown space `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Linear => "linear",
            SpaceKind::Toric => "toric",
            SpaceKind::Elliptic => "elliptic",
        }
    }
}

/// A two-torsion point, stored as 0, 1, or 2 bits with XOR composition.
/// The identity `e` is the all-zero vector; the nonzero elements are named
/// `a`, `b`, `ab`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Torsion(pub u8);

impl Torsion {
    pub const E: Torsion = Torsion(0);

    pub fn compose(self, other: Torsion) -> Torsion {
        Torsion(self.0 ^ other.0)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            0 => "e",
            1 => "a",
            2 => "b",
            3 => "ab",
            _ => unreachable!("torsion element out of range"),
        }
    }

    pub fn from_name(s: &str) -> Result<Torsion> {
        match s {
            "e" => Ok(Torsion(0)),
            "a" => Ok(Torsion(1)),
            "b" => Ok(Torsion(2)),
            "ab" => Ok(Torsion(3)),
            _ => Err(Error::Invalid(format!("unknown torsion element `{s}`"))),
        }
    }

    /// Bit `b` of the element, as an element of Z/2.
    pub fn bit(self, b: usize) -> u8 {
        (self.0 >> b) & 1
    }
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One coordinate factor of the ambient space, with the data the rest of the
/// library needs: its two-torsion group, Betti numbers, and the scalar by
/// which inversion acts on degree-one cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSpace {
    pub kind: SpaceKind,
    /// (b0, b1, b2) of one factor.
    pub betti: (usize, usize, usize),
    /// Inversion acts on H^1 of one factor by this scalar.
    pub h1_inversion_trace: i64,
    torsion_rank: u8,
}

impl GroundSpace {
    pub fn new(kind: SpaceKind) -> GroundSpace {
        let (betti, torsion_rank) = match kind {
            SpaceKind::Linear => ((1, 0, 0), 0),
            SpaceKind::Toric => ((1, 1, 0), 1),
            SpaceKind::Elliptic => ((1, 2, 1), 2),
        };
        GroundSpace { kind, betti, h1_inversion_trace: -1, torsion_rank }
    }

    /// Number of independent Z/2 coordinates in X\[2\] (0, 1, or 2).
    pub fn torsion_rank(&self) -> u8 {
        self.torsion_rank
    }

    /// |X\[2\]|: 1, 2, or 4.
    pub fn torsion_order(&self) -> usize {
        1usize << self.torsion_rank
    }

    pub fn torsion_elements(&self) -> Vec<Torsion> {
        (0..self.torsion_order() as u8).map(Torsion).collect()
    }

    pub fn contains(&self, z: Torsion) -> bool {
        (z.0 as usize) < self.torsion_order()
    }

    /// dim H^d of one factor.
    pub fn betti_dim(&self, d: usize) -> i64 {
        match d {
            0 => self.betti.0 as i64,
            1 => self.betti.1 as i64,
            2 => self.betti.2 as i64,
            _ => 0,
        }
    }

    /// Trace of inversion^s on H^d of one factor (s = 0 or 1).
    pub fn torsion_twist_trace(&self, d: usize, inverted: bool) -> i64 {
        match d {
            1 if inverted => self.h1_inversion_trace * self.betti.1 as i64,
            _ => self.betti_dim(d),
        }
    }

    /// Top nonvanishing cohomological degree of one factor.
    pub fn top_degree(&self) -> usize {
        match self.kind {
            SpaceKind::Linear => 0,
            SpaceKind::Toric => 1,
            SpaceKind::Elliptic => 2,
        }
    }
}

/// The family of root systems the arrangement is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RootFamily {
    A,
    B,
    C,
    D,
}

impl RootFamily {
    pub fn parse(s: &str) -> Result<RootFamily> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(RootFamily::A),
            "B" => Ok(RootFamily::B),
            "C" => Ok(RootFamily::C),
            "D" => Ok(RootFamily::D),
            _ => Err(Error::Invalid(format!("unknown family `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RootFamily::A => "A",
            RootFamily::B => "B",
            RootFamily::C => "C",
            RootFamily::D => "D",
        }
    }

    /// Type A arrangements carry a symmetric-group action; the rest use the
    /// full hyperoctahedral group (also in type D).
    pub fn uses_signs(self) -> bool {
        !matches!(self, RootFamily::A)
    }
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
