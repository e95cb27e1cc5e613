//! Exact Gram determinants of integral forms of the Heisenberg VOA and of
//! lattice VOAs.

pub mod combinatorics;
pub mod detengine;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod schur;
pub mod serde_util;
pub mod voa;

pub use combinatorics::{Partition, WeightVector};
pub use detengine::{DetReport, ExponentMode, GramDeterminant, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use fock::{FockElement, FockMonomial};
pub use lattice::{IntegerLattice, LatticeSpec, Shell, ShellCount};
pub use linalg::{IntMatrix, Matrix, RatMatrix, Scalar};
pub use voa::{VoaDetReport, VoaOracle};
