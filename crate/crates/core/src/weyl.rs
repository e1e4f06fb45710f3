//! The Weyl-Heisenberg group: exact index arithmetic and the standard representation.

use crate::arith::rem;
use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, CMatrix, ZERO};
use crate::phaseperm::PhasePerm;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use crate::arith::mod_inverse;

/// Dimension `N` with its phase modulus `N̄` and, for squares, `n = √N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension {
    n: usize,
    nbar: usize,
    root: Option<usize>,
}

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::DimensionTooSmall { min: 1, got: n });
        }
        let nbar = if n % 2 == 0 { 2 * n } else { n };
        Ok(Self {
            n,
            nbar,
            root: crate::arith::integer_sqrt(n),
        })
    }

    /// The dimension `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nbar(&self) -> usize {
        self.nbar
    }

    /// `n` with `n² = N`, if it exists.
    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn require_square(&self) -> Result<usize> {
        self.root.ok_or(Error::NotSquare(self.n))
    }

    pub(crate) fn ni(&self) -> i64 {
        self.n as i64
    }

    pub(crate) fn nbari(&self) -> i64 {
        self.nbar as i64
    }

    /// `ω^k`, `ω = e^{2πi/N}`.
    pub fn omega_pow(&self, k: i64) -> C64 {
        root_of_unity(k, self.n as u64)
    }

    /// `τ^k`, `τ = −e^{iπ/N} = e^{iπ(N+1)/N}`.
    pub fn tau_pow(&self, k: i64) -> C64 {
        let two_n = 2 * self.ni();
        let k = rem(k, two_n);
        root_of_unity(rem(k * (self.ni() + 1), two_n), two_n as u64)
    }

    /// `σ^k`, `σ = e^{2πi/n}`; panics for non-square `N`.
    pub fn sigma_pow(&self, k: i64) -> C64 {
        let n = self.root.expect("sigma is defined only for square dimensions");
        root_of_unity(k, n as u64)
    }

    pub fn conventions(&self) -> PhaseConventions {
        PhaseConventions {
            omega: self.omega_pow(1),
            tau: self.tau_pow(1),
            sigma: self.root.map(|_| self.sigma_pow(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConventions {
    pub omega: C64,
    pub tau: C64,
    pub sigma: Option<C64>,
}

/// Which basis a matrix or vector is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisTag {
    Standard,
    Monomial,
    Adapted16,
}

impl BasisTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasisTag::Standard => "standard",
            BasisTag::Monomial => "monomial",
            BasisTag::Adapted16 => "adapted16",
        }
    }
}

impl std::str::FromStr for BasisTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(BasisTag::Standard),
            "monomial" => Ok(BasisTag::Monomial),
            "adapted16" => Ok(BasisTag::Adapted16),
            other => Err(Error::BasisUnavailable(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct UnitaryMatrix {
    pub dim: Dimension,
    pub basis: BasisTag,
    pub entries: CMatrix,
}

/// `τ^k D_{ij}` stored exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub k: i64,
    pub i: i64,
    pub j: i64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { k: 0, i: 0, j: 0 };

    pub fn new(k: i64, i: i64, j: i64) -> Self {
        Self { k, i, j }
    }

    pub fn displacement(i: i64, j: i64, dim: Dimension) -> Self {
        canonicalize(Self { k: 0, i, j }, dim)
    }

    pub fn is_canonical(&self, dim: Dimension) -> bool {
        (0..dim.nbari()).contains(&self.k) && (0..dim.ni()).contains(&self.i) && (0..dim.ni()).contains(&self.j)
    }

    pub fn matrix(&self, dim: Dimension) -> CMatrix {
        let g = canonicalize(*self, dim);
        displacement_matrix(dim, g.i, g.j) * dim.tau_pow(g.k)
    }
}

/// Reduce `(k, i, j)` to `0 ≤ i, j < N`, `0 ≤ k < N̄`, keeping the operator fixed.
///
/// `X^i Z^j` depends only on `i, j mod N`, so `τ^k D_{ij} = τ^{k + ij − i'j'} D_{i'j'}`.
pub fn canonicalize(g: GroupElement, dim: Dimension) -> GroupElement {
    let n = dim.ni();
    let nbar = dim.nbari();
    let i2 = rem(g.i, n);
    let j2 = rem(g.j, n);
    // reduce the products first so large inputs do not overflow
    let ij = rem(rem(g.i, nbar) * rem(g.j, nbar), nbar);
    let k2 = rem(g.k + ij - i2 * j2, nbar);
    GroupElement { k: k2, i: i2, j: j2 }
}

/// Product `g1 · g2`, with `D_{ij} D_{lm} = τ^{lj − im} D_{i+l, j+m}`.
pub fn compose(g1: GroupElement, g2: GroupElement, dim: Dimension) -> GroupElement {
    let nbar = dim.nbari();
    let cross = rem(g2.i * g1.j - g1.i * g2.j, nbar);
    canonicalize(
        GroupElement {
            k: g1.k + g2.k + cross,
            i: g1.i + g2.i,
            j: g1.j + g2.j,
        },
        dim,
    )
}

pub fn inverse(g: GroupElement, dim: Dimension) -> GroupElement {
    // D_{ij}^{-1} = D_{-i,-j}
    canonicalize(GroupElement { k: -g.k, i: -g.i, j: -g.j }, dim)
}

pub fn power(g: GroupElement, m: u64, dim: Dimension) -> GroupElement {
    let mut acc = GroupElement::IDENTITY;
    for _ in 0..m {
        acc = compose(acc, g, dim);
    }
    acc
}

/// Least `m ≥ 1` with `g^m = 1`.
pub fn element_order(g: GroupElement, dim: Dimension) -> u64 {
    let g = canonicalize(g, dim);
    let mut acc = g;
    let mut m = 1;
    while acc != GroupElement::IDENTITY {
        acc = compose(acc, g, dim);
        m += 1;
        assert!(m <= (dim.nbar * dim.n) as u64, "element order exceeds group exponent");
    }
    m
}

/// Shift `X` and clock `Z` in the standard basis.
pub fn standard_generators(dim: Dimension) -> (UnitaryMatrix, UnitaryMatrix) {
    let wrap = |m| UnitaryMatrix {
        dim,
        basis: BasisTag::Standard,
        entries: m,
    };
    (wrap(shift_perm(dim, 1).to_matrix()), wrap(clock_perm(dim, 1).to_matrix()))
}

pub(crate) fn shift_perm(dim: Dimension, i: i64) -> PhasePerm {
    let n = dim.n;
    PhasePerm {
        perm: (0..n).map(|u| rem(u as i64 + i, n as i64) as usize).collect(),
        phase: vec![C64::new(1.0, 0.0); n],
    }
}

pub(crate) fn clock_perm(dim: Dimension, j: i64) -> PhasePerm {
    let n = dim.n;
    PhasePerm {
        perm: (0..n).collect(),
        phase: (0..n).map(|u| dim.omega_pow(j * u as i64)).collect(),
    }
}

/// `D_{ij} = τ^{ij} X^i Z^j` as a sparse phase-permutation.
pub fn displacement_perm(dim: Dimension, i: i64, j: i64) -> PhasePerm {
    let n = dim.ni();
    let pre = dim.tau_pow(rem(rem(i, dim.nbari()) * rem(j, dim.nbari()), dim.nbari()));
    PhasePerm {
        perm: (0..n).map(|u| rem(u + i, n) as usize).collect(),
        phase: (0..n).map(|u| pre * dim.omega_pow(j * u)).collect(),
    }
}

pub fn displacement_matrix(dim: Dimension, i: i64, j: i64) -> CMatrix {
    displacement_perm(dim, i, j).to_matrix()
}

/// All `N²` displacements `D_{ij}`, indexed `i·N + j`.
pub fn all_displacements(dim: Dimension) -> Vec<PhasePerm> {
    let n = dim.ni();
    let mut out = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            out.push(displacement_perm(dim, i, j));
        }
    }
    out
}

/// Dense `N×N` zero matrix helper used by several modules.
pub(crate) fn zeros(n: usize) -> CMatrix {
    CMatrix::from_element(n, n, ZERO)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn d(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn conventions() {
        for n in 2..=32 {
            let dim = d(n);
            let c = dim.conventions();
            assert!((c.tau * c.tau - c.omega).norm() < 1e-14);
            let tn = dim.tau_pow(n as i64);
            let want = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!((tn - C64::new(want, 0.0)).norm() < 1e-14);
            assert!((c.tau + C64::from_polar(1.0, std::f64::consts::PI / n as f64)).norm() < 1e-14);
        }
        let dim = d(9);
        assert!((dim.sigma_pow(1) - dim.omega_pow(3)).norm() < 1e-14);
    }

    #[test]
    fn pauli_case() {
        let (x, z) = standard_generators(d(2));
        assert_eq!(x.entries[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(x.entries[(1, 0)], C64::new(1.0, 0.0));
        assert_eq!(z.entries[(1, 1)], C64::new(-1.0, 0.0));
        // D_11 = τ X Z with τ = -i
        let d11 = displacement_matrix(d(2), 1, 1);
        assert!((d11[(0, 1)] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((d11[(1, 0)] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn canonical_examples() {
        let dim = d(4);
        assert_eq!(canonicalize(GroupElement::new(0, 4, 0), dim), GroupElement::IDENTITY);
        assert_eq!(canonicalize(GroupElement::new(0, 4, 1), dim), GroupElement::new(4, 0, 1));
        let g = compose(GroupElement::new(0, 1, 0), GroupElement::new(0, 0, 1), dim);
        assert_eq!(g, GroupElement::new(7, 1, 1));
    }

    #[test]
    fn order_examples() {
        assert_eq!(element_order(GroupElement::IDENTITY, d(5)), 1);
        // D_11 squares to 1 at N = 2, while XZ = τ^{-1} D_11 has order 4
        assert_eq!(element_order(GroupElement::new(0, 1, 1), d(2)), 2);
        assert_eq!(element_order(GroupElement::new(3, 1, 1), d(2)), 4);
        assert_eq!(element_order(GroupElement::new(1, 0, 0), d(4)), 8);
        assert_eq!(element_order(GroupElement::new(1, 0, 0), d(5)), 5);
    }

    #[test]
    fn commutation() {
        for n in 2..=32 {
            let (x, z) = standard_generators(d(n));
            let lhs = &z.entries * &x.entries;
            let rhs = &x.entries * &z.entries * d(n).omega_pow(1);
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        }
    }
}
