//! Splitting the Weyl-Heisenberg and Clifford groups over the prime-power factors of `N`.

use crate::arith::{factorize, mod_inverse, rem};
use crate::clifford::{metaplectic, random_symplectic, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::linalg::{diff_up_to_phase, kron, CMatrix};
use crate::phaseperm::PhasePerm;
use crate::weyl::{displacement_perm, Dimension, GroupElement};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub p: usize,
    pub q: u32,
    /// `n_j = p^q`.
    pub n: i64,
    pub nbar: i64,
    /// `κ_j = (N / n_j)^{-1} mod n̄_j`.
    pub kappa: i64,
}

impl Factor {
    pub fn dim(&self) -> Dimension {
        Dimension::new(self.n as usize).unwrap()
    }
}

/// Factors of `N` in ascending prime order; the first factor is the most significant digit of
/// the tensor index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: i64,
    pub factors: Vec<Factor>,
}

pub fn factor_dimension(n: usize) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    let ni = n as i64;
    let mut factors = Vec::new();
    for (p, q) in factorize(n) {
        let nj = (p as i64).pow(q);
        let nbar = if nj % 2 == 0 { 2 * nj } else { nj };
        let kappa = mod_inverse(ni / nj, nbar)?;
        factors.push(Factor { p, q, n: nj, nbar, kappa });
    }
    Ok(Factorization { n: ni, factors })
}

/// `τ^c X^a Z^b` as `(a, b, c)`; `D_{ij} = τ^{ij} X^i Z^j` so `τ^k D_{ij} ↦ (i, j, k + ij)`.
pub fn to_abc(g: GroupElement, dim: Dimension) -> (i64, i64, i64) {
    let nb = dim.nbar() as i64;
    (g.i, g.j, rem(g.k + rem(g.i, nb) * rem(g.j, nb), nb))
}

pub fn from_abc(a: i64, b: i64, c: i64, dim: Dimension) -> GroupElement {
    let nb = dim.nbar() as i64;
    crate::weyl::canonicalize(GroupElement::new(rem(c - rem(a, nb) * rem(b, nb), nb), a, b), dim)
}

/// Image of `τ^c X^a Z^b` in each factor: `(a, κ_j b, κ_j c)` reduced mod `(n_j, n_j, n̄_j)`.
pub fn eta_prime(a: i64, b: i64, c: i64, fac: &Factorization) -> Vec<(i64, i64, i64)> {
    fac.factors
        .iter()
        .map(|f| (rem(a, f.n), rem(f.kappa * rem(b, f.n), f.n), rem(f.kappa * rem(c, f.nbar), f.nbar)))
        .collect()
}

/// `F′_j = (α, κ_j^{-1} β; κ_j γ, δ) mod n̄_j`.
pub fn f_prime(g: &SymplecticMatrix, f: &Factor) -> Result<SymplecticMatrix> {
    let kinv = mod_inverse(f.kappa, f.nbar)?;
    Ok(SymplecticMatrix::new(g.alpha, kinv * rem(g.beta, f.nbar), f.kappa * rem(g.gamma, f.nbar), g.delta).reduce(f.nbar))
}

/// Tensor index of `u`: digits `u mod n_j`, first factor most significant.
pub fn tensor_index(u: i64, fac: &Factorization) -> usize {
    fac.factors.iter().fold(0i64, |acc, f| acc * f.n + rem(u, f.n)) as usize
}

/// The permutation `|u⟩ ↦ ⊗_j |u mod n_j⟩`.
pub fn crt_permutation(fac: &Factorization) -> PhasePerm {
    let n = fac.n as usize;
    PhasePerm {
        perm: (0..n).map(|u| tensor_index(u as i64, fac)).collect(),
        phase: vec![C64::new(1.0, 0.0); n],
    }
}

fn kron_perm(a: &PhasePerm, b: &PhasePerm) -> PhasePerm {
    let nb = b.len();
    let mut perm = vec![0; a.len() * nb];
    let mut phase = vec![C64::new(0.0, 0.0); a.len() * nb];
    for i in 0..a.len() {
        for j in 0..nb {
            perm[i * nb + j] = a.perm[i] * nb + b.perm[j];
            phase[i * nb + j] = a.phase[i] * b.phase[j];
        }
    }
    PhasePerm { perm, phase }
}

fn perm_distance(a: &PhasePerm, b: &PhasePerm) -> f64 {
    if a.perm != b.perm {
        return f64::INFINITY;
    }
    a.phase.iter().zip(&b.phase).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `τ^c X^a Z^b` in the standard basis.
fn weyl_abc(dim: Dimension, a: i64, b: i64, c: i64) -> PhasePerm {
    let nb = dim.nbar() as i64;
    displacement_perm(dim, a, b).scale(dim.tau_pow(rem(c - rem(a, nb) * rem(b, nb), nb)))
}

/// Max over all `(a, b, c)` of `|P τ^c X^a Z^b P† − ⊗_j τ_j^{c_j} X_j^{a_j} Z_j^{b_j}|`.
pub fn displacement_residual(fac: &Factorization) -> f64 {
    let dim = Dimension::new(fac.n as usize).unwrap();
    let p = crt_permutation(fac);
    let pinv = p.inverse();
    let nb = dim.nbar() as i64;
    let mut worst: f64 = 0.0;
    for a in 0..fac.n {
        for b in 0..fac.n {
            for c in 0..nb {
                let lhs = p.compose(&weyl_abc(dim, a, b, c)).compose(&pinv);
                let rhs = eta_prime(a, b, c, fac)
                    .into_iter()
                    .zip(&fac.factors)
                    .map(|((aj, bj, cj), f)| weyl_abc(f.dim(), aj, bj, cj))
                    .reduce(|x, y| kron_perm(&x, &y))
                    .unwrap();
                worst = worst.max(perm_distance(&lhs, &rhs));
            }
        }
    }
    worst
}

/// Residual of `P U_G P† ∝ ⊗_j U_{F′_j}` (normalised distance up to a global phase).
pub fn clifford_residual(g: &SymplecticMatrix, fac: &Factorization) -> Result<f64> {
    let dim = Dimension::new(fac.n as usize).unwrap();
    let p = crt_permutation(fac).to_matrix();
    let lhs = &p * metaplectic(g, dim, 0.0)?.entries * p.adjoint();
    let mut rhs: Option<CMatrix> = None;
    for f in &fac.factors {
        let u = metaplectic(&f_prime(g, f)?, f.dim(), 0.0)?.entries;
        rhs = Some(match rhs {
            None => u,
            Some(r) => kron(&r, &u),
        });
    }
    Ok(diff_up_to_phase(&lhs, &rhs.unwrap()))
}

#[derive(Debug, Clone)]
pub struct CrtReport {
    pub factorization: Factorization,
    pub displacement_residual: f64,
    pub clifford_residual: f64,
    pub elements_checked: usize,
}

/// Checks the displacement map on every group element and the Clifford map on Zauner, Fourier
/// and `samples` random symplectic matrices.
pub fn verify_product_iso(n: usize, samples: usize, seed: u64) -> Result<CrtReport> {
    let fac = factor_dimension(n)?;
    let dim = Dimension::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gs = vec![SymplecticMatrix::ZAUNER, SymplecticMatrix::FOURIER];
    gs.extend((0..samples).map(|_| random_symplectic(dim, &mut rng)));
    let mut worst: f64 = 0.0;
    for g in &gs {
        worst = worst.max(clifford_residual(g, &fac)?);
    }
    Ok(CrtReport {
        displacement_residual: displacement_residual(&fac),
        clifford_residual: worst,
        elements_checked: gs.len(),
        factorization: fac,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappas() {
        let f = factor_dimension(12).unwrap();
        assert_eq!(f.factors.len(), 2);
        // 3^{-1} mod 8 = 3, 4^{-1} mod 3 = 1
        assert_eq!((f.factors[0].n, f.factors[0].nbar, f.factors[0].kappa), (4, 8, 3));
        assert_eq!((f.factors[1].n, f.factors[1].nbar, f.factors[1].kappa), (3, 3, 1));
        assert!(factor_dimension(1).is_err());
    }

    #[test]
    fn abc_round_trip() {
        let dim = Dimension::new(6).unwrap();
        for k in 0..12 {
            for i in 0..6 {
                for j in 0..6 {
                    let g = GroupElement::new(k, i, j);
                    let (a, b, c) = to_abc(g, dim);
                    assert_eq!(from_abc(a, b, c, dim), g);
                }
            }
        }
    }

    #[test]
    fn n6_iso() {
        let r = verify_product_iso(6, 3, 1).unwrap();
        assert!(r.displacement_residual < 1e-12, "{}", r.displacement_residual);
        assert!(r.clifford_residual < 1e-10, "{}", r.clifford_residual);
    }
}
