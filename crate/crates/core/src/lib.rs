//! Chekanov–Eliashberg DGAs, their A∞ duals and homotopy transfer.

pub mod ainfty;
pub mod dga;
pub mod dgaparse;
pub mod error;
pub mod freealg;
pub mod lambda_family;
pub mod linalg;
pub mod scalar;
pub mod surface;
pub mod transfer;

pub use ainfty::{AInfinityAlgebra, CheckMode, MorphismCandidate, Vector};
pub use dga::{Augmentation, FreeDga};
pub use error::{Error, Result};
pub use freealg::{Alphabet, AlgebraMap, Derivation, GenId, NCPoly, Word};
pub use scalar::{Field, Scalar};
