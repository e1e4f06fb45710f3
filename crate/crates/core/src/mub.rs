//! Bases unbiased to the clock and shift eigenbases in square dimension, built from Latin squares.

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::monomial::{index, MonomialDisplacements};
use crate::weyl::Dimension;
use nalgebra::SVD;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    pub n: usize,
    /// `cells[r][a]`.
    pub cells: Vec<Vec<usize>>,
}

impl LatinSquare {
    pub fn new(cells: Vec<Vec<usize>>) -> Result<Self> {
        let sq = Self { n: cells.len(), cells };
        sq.check()?;
        Ok(sq)
    }

    /// `λ(r, a)` from a closure, without validation.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        Self {
            n,
            cells: (0..n).map(|r| (0..n).map(|a| f(r, a) % n).collect()).collect(),
        }
    }

    pub fn get(&self, r: usize, a: usize) -> usize {
        self.cells[r][a]
    }

    /// Injective in `r` for every fixed `a`.
    pub fn columns_are_permutations(&self) -> bool {
        (0..self.n).all(|a| is_perm(self.n, (0..self.n).map(|r| self.cells[r][a])))
    }

    /// Injective in `a` for every fixed `r`.
    pub fn rows_are_permutations(&self) -> bool {
        (0..self.n).all(|r| is_perm(self.n, self.cells[r].iter().copied()))
    }

    pub fn check(&self) -> Result<()> {
        if self.cells.iter().any(|row| row.len() != self.n) {
            return Err(Error::NotLatin("array is not square".into()));
        }
        if !self.rows_are_permutations() {
            return Err(Error::NotLatin("a row repeats a symbol".into()));
        }
        if !self.columns_are_permutations() {
            return Err(Error::NotLatin("a column repeats a symbol".into()));
        }
        Ok(())
    }
}

fn is_perm(n: usize, it: impl Iterator<Item = usize>) -> bool {
    let mut seen = vec![false; n];
    for x in it {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisLabel {
    Zero,
    Infinity,
    Latin(usize),
    Custom,
}

impl BasisLabel {
    pub fn name(&self) -> String {
        match self {
            BasisLabel::Zero => "zero".into(),
            BasisLabel::Infinity => "infinity".into(),
            BasisLabel::Latin(k) => format!("latin{k}"),
            BasisLabel::Custom => "custom".into(),
        }
    }
}

/// Orthonormal basis in monomial coordinates; vector `u = a + n b` sits at position `u`.
#[derive(Debug, Clone)]
pub struct Basis {
    pub dim: Dimension,
    pub vectors: Vec<CVector>,
    pub label: BasisLabel,
}

impl Basis {
    pub fn gram_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((u.dotc(v) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn as_matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.vectors)
    }
}

/// `|a+nb⟩₀ = n^{-1/2} Σ_r σ^{br} |r,a⟩`, eigenvectors of `Z` with eigenvalue `ω^{a+nb}`.
///
/// The exponent sign is the one for which the eigenvalue relation holds; with `σ^{-br}` the
/// eigenvalue would be `ω^{a−nb}`.
pub fn eigenbasis_zero(dim: Dimension) -> Result<Basis> {
    let n = dim.require_square()?;
    let scale = 1.0 / (n as f64).sqrt();
    let mut vectors = vec![CVector::from_element(dim.n(), ZERO); dim.n()];
    for a in 0..n {
        for b in 0..n {
            let v = &mut vectors[a + n * b];
            for r in 0..n {
                v[index(n, r as i64, a as i64)] = dim.sigma_pow((b * r) as i64) * scale;
            }
        }
    }
    Ok(Basis { dim, vectors, label: BasisLabel::Zero })
}

/// `|a+nb⟩_∞ = n^{-1/2} Σ_r σ^{-br} ω^{-ar} |a,r⟩`, eigenvectors of `X` with eigenvalue `ω^{a+nb}`.
pub fn eigenbasis_infinity(dim: Dimension) -> Result<Basis> {
    let n = dim.require_square()?;
    let scale = 1.0 / (n as f64).sqrt();
    let mut vectors = vec![CVector::from_element(dim.n(), ZERO); dim.n()];
    for a in 0..n {
        for b in 0..n {
            let v = &mut vectors[a + n * b];
            for r in 0..n {
                let ph = dim.sigma_pow(-((b * r) as i64)) * dim.omega_pow(-((a * r) as i64));
                v[index(n, a as i64, r as i64)] = ph * scale;
            }
        }
    }
    Ok(Basis { dim, vectors, label: BasisLabel::Infinity })
}

/// Phases `ω(r, a, b)`, stored at `(r·n + a)·n + b`.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    pub n: usize,
    pub data: Vec<C64>,
}

impl PhaseTable {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for r in 0..n {
            for a in 0..n {
                for b in 0..n {
                    data.push(f(r, a, b));
                }
            }
        }
        Self { n, data }
    }

    pub fn get(&self, r: usize, a: usize, b: usize) -> C64 {
        self.data[(r * self.n + a) * self.n + b]
    }
}

/// Vectors `n^{-1/2} Σ_r ω(r,a,b) |r, λ(r,a)⟩`, without any orthonormality check.
pub fn latin_vectors(dim: Dimension, lam: &LatinSquare, phases: &PhaseTable) -> Result<Vec<CVector>> {
    let n = dim.require_square()?;
    if lam.n != n || phases.n != n {
        return Err(Error::DimensionMismatch(lam.n.max(phases.n), n));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut vectors = vec![CVector::from_element(dim.n(), ZERO); dim.n()];
    for a in 0..n {
        for b in 0..n {
            let v = &mut vectors[a + n * b];
            for r in 0..n {
                v[index(n, r as i64, lam.get(r, a) as i64)] += phases.get(r, a, b) * scale;
            }
        }
    }
    Ok(vectors)
}

/// The basis defined by `λ` and the phases; fails if the vectors are not orthonormal.
pub fn latin_basis(dim: Dimension, lam: &LatinSquare, phases: &PhaseTable, k: usize) -> Result<Basis> {
    if phases.data.iter().any(|p| (p.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::InvalidParameter("phase table entries must have unit modulus".into()));
    }
    let vectors = latin_vectors(dim, lam, phases)?;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (u.dotc(v) - C64::new(target, 0.0)).norm();
            if dev > 1e-10 {
                return Err(Error::NotOrthonormal(i, j, dev));
            }
        }
    }
    Ok(Basis { dim, vectors, label: BasisLabel::Latin(k) })
}

/// The third basis in dimension 4 from `λ = a + r` with free phases `θ₀…θ₃`.
pub fn n4_latin_family(theta: [C64; 4]) -> Result<Basis> {
    let dim = Dimension::new(4).unwrap();
    let lam = LatinSquare::from_fn(2, |r, a| a + r);
    let phases = PhaseTable::from_fn(2, |r, a, b| if r == 0 { C64::new(1.0, 0.0) } else { theta[a + 2 * b] });
    latin_basis(dim, &lam, &phases, 1)
}

/// Max over pairs of `| |⟨a|b⟩|² − 1/N |`.
pub fn unbiasedness_deviation(a: &[CVector], b: &[CVector]) -> Result<f64> {
    let n = a.first().map(|v| v.len()).unwrap_or(0);
    if let Some(v) = b.iter().chain(a.iter()).find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(v.len(), n));
    }
    let target = 1.0 / n as f64;
    let mut worst: f64 = 0.0;
    for u in a {
        for v in b {
            worst = worst.max((u.dotc(v).norm_sqr() - target).abs());
        }
    }
    Ok(worst)
}

pub fn is_unbiased(a: &Basis, b: &Basis, tol: f64) -> Result<(bool, f64)> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim.n(), b.dim.n()));
    }
    let dev = unbiasedness_deviation(&a.vectors, &b.vectors)?;
    Ok((dev <= tol, dev))
}

/// Eigenbasis of the phase-permutation `X^{-k} Z`, whose cycles are `{(r, a + kr)}`.
fn cyclic_eigenbasis(dim: Dimension, n: usize, k: usize, disp: &MonomialDisplacements) -> Basis {
    let p = disp.get(-(k as i64), 1);
    let scale = 1.0 / (n as f64).sqrt();
    let mut vectors = vec![CVector::from_element(dim.n(), ZERO); dim.n()];
    for a in 0..n {
        let mut cycle = vec![index(n, 0, a as i64)];
        while cycle.len() < n {
            cycle.push(p.perm[*cycle.last().unwrap()]);
        }
        debug_assert_eq!(p.perm[cycle[n - 1]], cycle[0]);
        let prod: C64 = cycle.iter().map(|&c| p.phase[c]).product();
        let lambda0 = C64::from_polar(1.0, prod.arg() / n as f64);
        for b in 0..n {
            let lambda = lambda0 * dim.sigma_pow(b as i64);
            let v = &mut vectors[a + n * b];
            let mut amp = C64::new(scale, 0.0);
            for &c in &cycle {
                v[c] = amp;
                amp = amp * p.phase[c] / lambda;
            }
        }
    }
    Basis { dim, vectors, label: BasisLabel::Latin(k) }
}

/// `p + 1` bases for `N = p²`: the two eigenbases and the Latin bases `λ_k = a + kr`.
pub fn prime_family(p: usize) -> Result<Vec<Basis>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let dim = Dimension::new(p * p)?;
    let disp = MonomialDisplacements::new(dim)?;
    let mut out = vec![eigenbasis_zero(dim)?, eigenbasis_infinity(dim)?];
    for k in 1..p {
        out.push(cyclic_eigenbasis(dim, p, k, &disp));
    }
    Ok(out)
}

pub fn prime_latin_squares(p: usize) -> Vec<LatinSquare> {
    (1..p).map(|k| LatinSquare::from_fn(p, move |r, a| a + k * r)).collect()
}

/// Whether every pair of squares is orthogonal.
pub fn mols_check(squares: &[LatinSquare]) -> Result<bool> {
    for s in squares {
        s.check()?;
    }
    for (i, s) in squares.iter().enumerate() {
        for t in &squares[i + 1..] {
            if s.n != t.n {
                return Err(Error::DimensionMismatch(s.n, t.n));
            }
            let n = s.n;
            let mut seen = vec![false; n * n];
            for r in 0..n {
                for a in 0..n {
                    seen[s.get(r, a) * n + t.get(r, a)] = true;
                }
            }
            if seen.iter().any(|x| !x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Largest deviation of the singular values of the `n×n` reshaping from `1/√n`.
pub fn entanglement_deviation(dim: Dimension, v: &CVector) -> Result<f64> {
    let n = dim.require_square()?;
    let m = CMatrix::from_fn(n, n, |r, s| v[r * n + s]);
    let target = 1.0 / (n as f64).sqrt();
    let sv = SVD::new(m, false, false).singular_values;
    Ok(sv.iter().map(|s| (s - target).abs()).fold(0.0, f64::max))
}
