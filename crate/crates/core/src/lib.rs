//! Zero-sum theory over small finite groups.
//!
//! The crate covers:
//!
//! * [`group`]: explicit multiplication tables, including the Heisenberg
//!   groups `H_{p³}` and their z-classes;
//! * [`sequence`]: sequences (multisets) over a group, the product sets
//!   `π(S)` and `Π(S)`, and verified product-one witnesses;
//! * [`egz`]: EGZ sequences, principal parts and the constructive
//!   reordering of a central-product sequence to the identity;
//! * [`constants`]: exhaustive, symmetry-reduced computation of `d(G)`,
//!   `D(G)`, `s(G)`, `E(G)` and the verification suites built on them;
//! * [`extract`]: constructive extraction of product-one subsequences of
//!   length 27 from any 33 terms over `H_27`.

pub mod bitset;
pub mod constants;
pub mod egz;
pub mod extract;
pub mod group;
pub mod rng;
pub mod sequence;

pub use bitset::ElementSet;
pub use group::{ElementId, GroupError, GroupFamily, GroupTable};
pub use sequence::{ReachSet, Sequence, SequenceError, Term, Witness};
