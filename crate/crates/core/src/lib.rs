//! Exact matrix-sequence model of quantum `U(sl2)`.
//!
//! Elements of the completed algebra are sequences of matrices, one block per
//! irreducible representation. The crate builds the representations, the
//! truncated completion, Clebsch–Gordan structure constants and the Hopf
//! structure, the R-matrix and ribbon data, and braid-closure invariants,
//! all generic over the coefficient field (see [`scalar::Scalar`]).

pub mod braids;
pub mod cli;
pub mod coalgebra;
pub mod error;
pub mod matrix;
pub mod pbw;
pub mod report;
pub mod reps;
pub mod ribbon;
pub mod scalar;
pub mod truncated;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use pbw::{PbwCombination, PbwMonomial};
pub use report::CheckReport;
pub use scalar::{LaurentPoly, Numeric, RatFunc, Rational, Scalar};

/// Matrix over the exact field `Q(t)`.
pub type ExactMatrix = Matrix<RatFunc>;
/// Matrix evaluated at the numeric parameter.
pub type NumericMatrix = Matrix<Numeric>;
/// Representation matrices over `Q(t)`.
pub type ExactRep = reps::RepMatrices<RatFunc>;
