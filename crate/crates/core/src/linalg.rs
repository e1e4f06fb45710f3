//! Small dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `exp(2πi · num / den)`, with `num` reduced modulo `den` before the angle is formed.
pub fn root_of_unity(num: i64, den: u64) -> C64 {
    let den_i = den as i64;
    let k = num.rem_euclid(den_i);
    if k == 0 {
        return ONE;
    }
    // exact quarter turns keep the obvious values exact
    if 4 * k == den_i {
        return I;
    }
    if 2 * k == den_i {
        return -ONE;
    }
    if 4 * k == 3 * den_i {
        return -I;
    }
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / den as f64)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &CVector, b: &CVector) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deviation of `U U†` from the identity, as a max-entry norm.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    max_abs_diff(&prod, &CMatrix::identity(n, n))
}

/// `max |a - e^{iφ} b|` minimised over one global phase φ.
///
/// The phase is taken from the least-squares fit `φ = arg⟨b, a⟩`.
pub fn diff_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let inner: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    if inner.norm() == 0.0 {
        return max_abs_diff(a, b);
    }
    let phase = inner / inner.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

pub fn vec_diff_up_to_phase(a: &CVector, b: &CVector) -> f64 {
    let inner = b.dotc(a);
    if inner.norm() == 0.0 {
        return max_abs_diff_vec(a, b);
    }
    let phase = inner / inner.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// Kronecker product, first factor most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn mat_pow(m: &CMatrix, k: usize) -> CMatrix {
    let n = m.nrows();
    let mut out = CMatrix::identity(n, n);
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Largest off-diagonal modulus.
pub fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if r != c {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

/// Eigenvalues of a general complex square matrix via the complex Schur form.
///
/// Returns `None` if the QR iteration does not converge within its budget.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<C64>> {
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-14, 100_000)?;
    let (_, t) = schur.unpack();
    Some((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

pub fn normalized(v: &CVector) -> CVector {
    let n = v.norm();
    v.map(|x| x / n)
}

/// Orthonormal basis for the column space of `m`, by modified Gram-Schmidt with a drop tolerance.
pub fn column_space(m: &CMatrix, tol: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = Vec::new();
    for c in 0..m.ncols() {
        let mut v: CVector = m.column(c).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let n = v.norm();
        if n > tol {
            basis.push(v / C64::new(n, 0.0));
        }
    }
    basis
}
