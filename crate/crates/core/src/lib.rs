//! Exact-arithmetic layers, characters, and stability scans for the linear,
//! toric, and elliptic arrangements attached to classical root systems.
//!
//! The crate builds the ranked poset of connected components of intersections
//! (as labelled partitions of a barred set), carries the Weyl-group action on
//! it, cross-checks the combinatorics against an integer-lattice model via
//! Smith normal form, assembles the second page of the Leray spectral
//! sequence of the complement as exact class functions, and scans irreducible
//! multiplicities for representation stability. All arithmetic is integer or
//! rational; there are no floats anywhere.

pub mod characters;
pub mod combin;
pub mod error;
pub mod ground;
pub mod linalg;
pub mod oracle;
pub mod os;
pub mod partition;
pub mod poset;
pub mod spectral;
pub mod weyl;

pub use error::{Error, Result};
pub use ground::{GroundSpace, RootFamily, SpaceKind, Torsion};
pub use partition::{enumerate, BarredElement, IntegerLabelledPartition, LabelledPartition};
pub use weyl::{SignedCycleType, SignedPermutation};
