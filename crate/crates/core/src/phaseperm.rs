//! Monomial (phase-permutation) matrices stored sparsely.

use crate::linalg::{CMatrix, CVector, ZERO};
use num_complex::Complex64 as C64;

/// `M e_c = phase[c] · e_{perm[c]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePerm {
    pub perm: Vec<usize>,
    pub phase: Vec<C64>,
}

impl PhasePerm {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            phase: vec![C64::new(1.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.len();
        let mut m = CMatrix::from_element(n, n, ZERO);
        for c in 0..n {
            m[(self.perm[c], c)] = self.phase[c];
        }
        m
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::from_element(v.len(), ZERO);
        for c in 0..self.len() {
            out[self.perm[c]] += self.phase[c] * v[c];
        }
        out
    }

    /// `self · other`.
    pub fn compose(&self, other: &PhasePerm) -> PhasePerm {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut phase = vec![ZERO; n];
        for c in 0..n {
            let mid = other.perm[c];
            perm[c] = self.perm[mid];
            phase[c] = self.phase[mid] * other.phase[c];
        }
        PhasePerm { perm, phase }
    }

    pub fn scale(&self, z: C64) -> PhasePerm {
        PhasePerm {
            perm: self.perm.clone(),
            phase: self.phase.iter().map(|p| p * z).collect(),
        }
    }

    /// Inverse, assuming unit-modulus phases.
    pub fn inverse(&self) -> PhasePerm {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut phase = vec![ZERO; n];
        for c in 0..n {
            perm[self.perm[c]] = c;
            phase[self.perm[c]] = self.phase[c].conj();
        }
        PhasePerm { perm, phase }
    }

    pub fn pow(&self, e: usize) -> PhasePerm {
        let mut acc = PhasePerm::identity(self.len());
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.len()];
        for &p in &self.perm {
            if p >= seen.len() || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_matches_dense() {
        let a = PhasePerm {
            perm: vec![1, 2, 0],
            phase: vec![C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0)],
        };
        let b = PhasePerm {
            perm: vec![2, 0, 1],
            phase: vec![C64::new(1.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0)],
        };
        let dense = a.to_matrix() * b.to_matrix();
        let diff = (dense - a.compose(&b).to_matrix()).norm();
        assert!(diff < 1e-15);
        let v = CVector::from_vec(vec![C64::new(1.0, 2.0), C64::new(3.0, 0.0), C64::new(0.0, -1.0)]);
        assert!((a.to_matrix() * &v - a.apply(&v)).norm() < 1e-15);
        let id = a.compose(&a.inverse()).to_matrix();
        assert!((id - CMatrix::identity(3, 3)).norm() < 1e-15);
    }
}
