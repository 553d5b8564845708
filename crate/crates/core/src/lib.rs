//! Efficient, linear and symmetric allocation rules for transferable-utility
//! games on a fixed player set, together with falsification checkers for the
//! invariance axioms that characterize them.

pub mod axioms;
pub mod cli;
pub mod error;
pub mod game;
pub mod io;
pub mod linalg;
pub mod sample;
pub mod scalar;
pub mod theorems;
pub mod transforms;
pub mod values;

pub use error::{Error, Result};
pub use game::{Allocation, Coalition, Game, Permutation};
pub use scalar::{Rational, Scalar};
pub use values::SolutionRule;
