//! Weyl-Heisenberg and Clifford groups in finite dimension, their phase-permutation form in square
//! dimensions, SIC fiducials (closed forms and numerical search), Latin-square MUBs and CRT
//! factorisation.

pub mod arith;
pub mod clifford;
pub mod crt;
pub mod error;
pub mod linalg;
pub mod monomial;
pub mod mub;
pub mod phaseperm;
pub mod sic;
pub mod weyl;

pub use error::{Error, Result};

/// Default numerical tolerance shared by verification routines.
pub const DEFAULT_TOL: f64 = 1e-10;
