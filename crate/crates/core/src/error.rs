use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: i64, m: i64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} is not a perfect square")]
    NotSquare(usize),
    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("matrix is not symplectic (determinant {det} mod {modulus})")]
    NotSymplectic { det: i64, modulus: i64 },
    #[error("determinant is not -1 mod {modulus} (got {det})")]
    DetNotMinusOne { det: i64, modulus: i64 },
    #[error("no cube-root branch reproduces the eigenspace table for N = {0}")]
    BranchNotFound(usize),
    #[error("eigenvalue {re}+{im}i is {distance} away from every cube root of unity")]
    ClusterAmbiguity { re: f64, im: f64, distance: f64 },
    #[error("projection onto the eigenspace is numerically null (norm {0})")]
    NullProjection(f64),
    #[error("radicand {name} is negative: {value}")]
    NegativeRadicand { name: &'static str, value: f64 },
    #[error("no Weyl generators registered for basis {0}")]
    BasisUnavailable(String),
    #[error("basis vectors {0} and {1} are not orthonormal (deviation {2})")]
    NotOrthonormal(usize, usize, f64),
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("square is not Latin: {0}")]
    NotLatin(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no fiducial found; best max deviation {best}")]
    NotFound { best: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
