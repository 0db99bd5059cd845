//! Weighted alternating finite automata (WAFA) over commutative semirings.
//!
//! The crate covers evaluation and normal forms of WAFA, their compilation
//! into weighted bottom-up tree automata composed with tree homomorphisms
//! (and back), Nivat-style decompositions, and a zeroness / equivalence
//! decision procedure over the rationals that goes through polynomial
//! automata and an exact Gröbner-basis kernel.

pub mod convert;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod groebner;
pub mod pa;
pub mod polynomial;
pub mod semiring;
pub mod tree;
pub mod wafa;
pub mod wfta;

pub use error::{Error, Result};
pub use polynomial::Polynomial;
pub use semiring::{Element, Semiring, SemiringOps};
pub use tree::{RankedAlphabet, Tree, TreeHomomorphism};
pub use wafa::Wafa;
pub use wfta::Wfta;
