//! Numerical toolkit for decoherence-free subsystem encodings on three and
//! four exchange-coupled spin qubits: DFS bases, leakage elimination
//! operators, parity-kick decoupling and anisotropic-exchange error analysis.

pub mod basis;
pub mod decoupling;
pub mod dfs3;
pub mod dfs4;
pub mod error;
pub mod error_decomp;
pub mod io;
pub mod leakage;
pub mod operator;
pub mod tilde;
pub mod verify;

pub use basis::{BasisElement, Classification, DfsBasis, ErrorClass};
pub use error::{Error, Result};
pub use leakage::{BlockPartition, Blocks, GradedClass, Leo, LeoRejection};
pub use operator::{Axis, Operator, OperatorSum, Pauli, PauliString};
pub use tilde::{FactorNorm, TildeFactor, TildeProduct, TildeSum};

pub use num_complex::Complex64 as C64;

/// Default tolerance for matrix equality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance for deciding that an eigenvalue is an integer.
pub const INTEGER_TOL: f64 = 1e-8;
