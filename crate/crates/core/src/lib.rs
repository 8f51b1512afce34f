//! Exact automorphism data for smooth plane curves.

pub mod actions;
pub mod covers;
pub mod cyclotomic;
pub mod ff;
pub mod forms;
pub mod par;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod smoothness;
pub mod snf;
pub mod specialgroups;
pub mod stabilizer;
pub mod verify;

pub use cyclotomic::{ArithOp, Cyc, CycError};
pub use forms::{FormError, Monomial, ParamPoly, ProjMatrix, TernaryForm};
pub use par::Execution;
pub use scalar::Scalar;
