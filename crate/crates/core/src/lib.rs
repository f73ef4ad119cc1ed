//! Exact computations for right-angled Artin monoids and the ideal structure of
//! their Toeplitz algebras.

pub mod error;
pub mod graph;
pub mod automata;
pub mod lattice;
pub mod monoid;
pub mod oracle;
pub mod spectrum;
pub mod star_algebra;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{ComponentDecomposition, Gen, GenMask, PresentationGraph};
pub use lattice::{ComponentSet, LatticeIdeal};
pub use monoid::{AbelianVector, ArtinMonoid, ControlledMapReport, GroupWord, Letter, Trace};
pub use spectrum::{RelationClass, SpectrumPoint};
pub use star_algebra::{AlgebraElement, Monomial};
