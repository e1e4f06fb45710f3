//! SIC fiducials: verification, closed forms, simplex projections and numerical search.

mod closed_form;
mod file;
mod n16;
mod search;

pub use closed_form::{fiducial_n4, fiducial_n9, n4_rephasing, n9_moduli, N9Moduli};
pub use file::{FiducialFile, FORMAT_VERSION};
pub use n16::{
    adapted16_generators, adapted16_structure, coefficients as n16_coefficients, fiducial_n16, fiducial_n16_with,
    field_values as n16_field_values, Adapted16, Adapted16Structure, FieldValues, N16Options, Transcription, SLOTS,
};
pub use search::{residual_and_gradient, search_fiducial, SearchConfig, SearchOutcome};

use std::collections::BTreeMap;

use crate::clifford::zauner_unitary;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::monomial::{monomial_zauner_perm, zak_matrix, MonomialDisplacements};
use crate::phaseperm::PhasePerm;
use crate::weyl::{all_displacements, BasisTag, Dimension};
use num_complex::Complex64 as C64;
use serde_json::Value;

/// A candidate fiducial vector together with how it was made.
#[derive(Debug, Clone)]
pub struct Fiducial {
    pub dim: Dimension,
    pub basis: BasisTag,
    pub amplitudes: CVector,
    pub provenance: BTreeMap<String, Value>,
}

impl Fiducial {
    /// Normalises `amplitudes`.
    pub fn new(dim: Dimension, basis: BasisTag, amplitudes: CVector, provenance: BTreeMap<String, Value>) -> Result<Self> {
        if amplitudes.len() != dim.n() {
            return Err(Error::DimensionMismatch(amplitudes.len(), dim.n()));
        }
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("fiducial has zero or non-finite norm".into()));
        }
        Ok(Self {
            dim,
            basis,
            amplitudes: amplitudes / C64::new(norm, 0.0),
            provenance,
        })
    }

    /// The same state written in another basis.
    pub fn to_basis(&self, target: BasisTag) -> Result<Fiducial> {
        let std = match self.basis {
            BasisTag::Standard => self.amplitudes.clone(),
            BasisTag::Monomial => zak_matrix(self.dim)?.entries * &self.amplitudes,
            BasisTag::Adapted16 => adapted16_generators().t.adjoint() * &self.amplitudes,
        };
        let out = match target {
            BasisTag::Standard => std,
            BasisTag::Monomial => zak_matrix(self.dim)?.entries.adjoint() * std,
            BasisTag::Adapted16 => {
                if self.dim.n() != 16 {
                    return Err(Error::BasisUnavailable("adapted16".into()));
                }
                &adapted16_generators().t * std
            }
        };
        let mut f = self.clone();
        f.basis = target;
        f.amplitudes = out;
        Ok(f)
    }
}

/// All `N²` displacements `τ^{ij} X^i Z^j` in the given basis, indexed `i·N + j`.
pub fn displacements_in(basis: BasisTag, dim: Dimension) -> Result<Vec<PhasePerm>> {
    let n = dim.ni();
    match basis {
        BasisTag::Standard => Ok(all_displacements(dim)),
        BasisTag::Monomial => {
            let d = MonomialDisplacements::new(dim)?;
            Ok((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| d.get(i, j)).collect())
        }
        BasisTag::Adapted16 => {
            if dim.n() != 16 {
                return Err(Error::BasisUnavailable("adapted16".into()));
            }
            let a = adapted16_generators();
            let x = dense_to_perm(&a.x).ok_or_else(|| Error::BasisUnavailable("adapted16 X is not monomial".into()))?;
            let z = dense_to_perm(&a.z).ok_or_else(|| Error::BasisUnavailable("adapted16 Z is not monomial".into()))?;
            let mut out = Vec::with_capacity(256);
            let mut xi = PhasePerm::identity(16);
            for i in 0..n {
                let mut zj = PhasePerm::identity(16);
                for j in 0..n {
                    out.push(xi.compose(&zj).scale(dim.tau_pow(i * j)));
                    zj = z.compose(&zj);
                }
                xi = x.compose(&xi);
            }
            Ok(out)
        }
    }
}

/// Read off a phase-permutation from a dense matrix, if it is one.
pub fn dense_to_perm(m: &CMatrix) -> Option<PhasePerm> {
    let n = m.nrows();
    let mut p = PhasePerm::identity(n);
    for c in 0..n {
        let (r, v) = (0..n).map(|r| (r, m[(r, c)])).max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())?;
        if (v.norm() - 1.0).abs() > 1e-9 {
            return None;
        }
        p.perm[c] = r;
        p.phase[c] = v;
    }
    p.is_bijection().then_some(p)
}

/// `⟨ψ|D|ψ⟩` for a phase-permutation `D`.
pub fn expectation(psi: &CVector, d: &PhasePerm) -> C64 {
    let mut acc = ZERO;
    for c in 0..psi.len() {
        acc += psi[d.perm[c]].conj() * d.phase[c] * psi[c];
    }
    acc
}

#[derive(Debug, Clone)]
pub struct SicCertificate {
    /// Max over nontrivial `(i, j)` of `| |⟨ψ|D_ij|ψ⟩|² − 1/(N+1) |`.
    pub max_abs_deviation: f64,
    /// `((i, j), |⟨ψ|D_ij|ψ⟩|²)` for every nontrivial displacement.
    pub per_displacement: Vec<((i64, i64), f64)>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Check the SIC condition in the fiducial's own basis.
pub fn verify_sic(f: &Fiducial, tol: f64) -> Result<SicCertificate> {
    let disps = displacements_in(f.basis, f.dim)?;
    Ok(verify_with(&f.amplitudes, &disps, f.dim, tol))
}

pub(crate) fn verify_with(psi: &CVector, disps: &[PhasePerm], dim: Dimension, tol: f64) -> SicCertificate {
    let n = dim.ni();
    let target = 1.0 / (dim.n() as f64 + 1.0);
    let n2 = psi.norm_squared();
    let mut worst: f64 = 0.0;
    let mut per = Vec::with_capacity(disps.len() - 1);
    for (idx, d) in disps.iter().enumerate().skip(1) {
        let q = expectation(psi, d).norm_sqr() / (n2 * n2);
        worst = worst.max((q - target).abs());
        per.push(((idx as i64 / n, idx as i64 % n), q));
    }
    SicCertificate {
        max_abs_deviation: worst,
        per_displacement: per,
        tolerance: tol,
        pass: worst <= tol,
    }
}

/// Squared moduli of the amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexProjection {
    pub p: Vec<f64>,
}

pub fn simplex_projection(f: &Fiducial) -> SimplexProjection {
    SimplexProjection {
        p: f.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
    }
}

/// Residuals of the shifted-product identities of a SIC's probability vector.
#[derive(Debug, Clone)]
pub struct AutocorrelationResiduals {
    pub basis: BasisTag,
    /// `|Σ p² − 2/(N+1)|`.
    pub zero_shift: f64,
    /// Max over nonzero shifts of `|Σ p_x p_{x+shift} − 1/(N+1)|`.
    pub max_nonzero_shift: f64,
}

impl AutocorrelationResiduals {
    pub fn max(&self) -> f64 {
        self.zero_shift.max(self.max_nonzero_shift)
    }
}

/// Standard basis shifts run over Z_N; monomial shifts over Z_n × Z_n. The fiducial is converted
/// to `basis` first.
pub fn autocorrelation_check(f: &Fiducial, basis: BasisTag) -> Result<AutocorrelationResiduals> {
    let g = f.to_basis(basis)?;
    let p = simplex_projection(&g).p;
    let big = f.dim.n();
    let inv = 1.0 / (big as f64 + 1.0);
    let sum_p2: f64 = p.iter().map(|x| x * x).sum();
    let mut worst: f64 = 0.0;
    match basis {
        BasisTag::Standard => {
            for x in 1..big {
                let s: f64 = (0..big).map(|i| p[i] * p[(i + x) % big]).sum();
                worst = worst.max((s - inv).abs());
            }
        }
        BasisTag::Monomial => {
            let n = f.dim.require_square()?;
            for x in 0..n {
                for y in 0..n {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let mut s = 0.0;
                    for r in 0..n {
                        for t in 0..n {
                            s += p[r * n + t] * p[((r + x) % n) * n + (t + y) % n];
                        }
                    }
                    worst = worst.max((s - inv).abs());
                }
            }
        }
        BasisTag::Adapted16 => return Err(Error::BasisUnavailable("adapted16 has no shift identities".into())),
    }
    Ok(AutocorrelationResiduals {
        basis,
        zero_shift: (sum_p2 - 2.0 * inv).abs(),
        max_nonzero_shift: worst,
    })
}

/// Probability vectors of all `N²` orbit states `D_ij ψ`, in the fiducial's basis.
pub fn orbit_projections(f: &Fiducial) -> Result<Vec<Vec<f64>>> {
    let disps = displacements_in(f.basis, f.dim)?;
    Ok(disps
        .iter()
        .map(|d| d.apply(&f.amplitudes).iter().map(|a| a.norm_sqr()).collect())
        .collect())
}

/// Number of points that differ by more than `tol` (sup norm).
pub fn count_distinct(points: &[Vec<f64>], tol: f64) -> usize {
    let mut reps: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        let fresh = reps
            .iter()
            .all(|q| p.iter().zip(q.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) > tol);
        if fresh {
            reps.push(p);
        }
    }
    reps.len()
}

/// The Zauner unitary in `basis`.
pub fn zauner_in(basis: BasisTag, dim: Dimension) -> Result<CMatrix> {
    match basis {
        BasisTag::Standard => Ok(zauner_unitary(dim)?.entries),
        BasisTag::Monomial => Ok(monomial_zauner_perm(dim)?.to_matrix()),
        BasisTag::Adapted16 => {
            if dim.n() != 16 {
                return Err(Error::BasisUnavailable("adapted16".into()));
            }
            let t = &adapted16_generators().t;
            Ok(t * zauner_unitary(dim)?.entries * t.adjoint())
        }
    }
}

/// Project onto the eigenvalue-1 space of the Zauner unitary via `(1 + U + U²)/3` and renormalise.
pub fn zauner_project(dim: Dimension, v: &CVector, basis: BasisTag) -> Result<CVector> {
    if v.len() != dim.n() {
        return Err(Error::DimensionMismatch(v.len(), dim.n()));
    }
    let u = zauner_in(basis, dim)?;
    let uv = &u * v;
    let uuv = &u * &uv;
    let p = (v + uv + uuv) / C64::new(3.0, 0.0);
    let norm = p.norm();
    if norm < 1e-8 {
        return Err(Error::NullProjection(norm));
    }
    Ok(p / C64::new(norm, 0.0))
}

/// `min_φ ‖U ψ − e^{iφ} ψ‖` for unit `ψ`.
pub fn eigenvector_residual(u: &CMatrix, psi: &CVector) -> f64 {
    let psi = psi / C64::new(psi.norm(), 0.0);
    let up = u * &psi;
    let lambda = psi.dotc(&up);
    let phase = if lambda.norm() > 0.0 { lambda / lambda.norm() } else { C64::new(1.0, 0.0) };
    (up - psi * phase).norm()
}

/// Sorted real parts of `⟨ψ|D_b ψ⟩⟨D_b ψ|D_c ψ⟩⟨D_c ψ|ψ⟩` over all `(b, c)`.
///
/// Triple products are unchanged by rephasing, by displacing the fiducial and by Clifford
/// unitaries; anti-unitaries conjugate them, so the real parts are invariants of the extended
/// Clifford orbit.
pub fn overlap_invariants(f: &Fiducial) -> Result<Vec<f64>> {
    let disps = displacements_in(f.basis, f.dim)?;
    let psi = &f.amplitudes / C64::new(f.amplitudes.norm(), 0.0);
    let images: Vec<CVector> = disps.iter().map(|d| d.apply(&psi)).collect();
    let first: Vec<C64> = images.iter().map(|v| psi.dotc(v)).collect();
    let mut out = Vec::with_capacity(images.len() * images.len());
    for (b, vb) in images.iter().enumerate() {
        for (c, vc) in images.iter().enumerate() {
            let t = first[b] * vb.dotc(vc) * first[c].conj();
            out.push(t.re);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Max elementwise gap between two sorted invariant lists.
pub fn invariant_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Group fiducials into Weyl-Heisenberg orbits: two vectors share an orbit when one is a
/// displacement of the other up to phase. Returns the orbit label of each input.
pub fn weyl_orbit_labels(vectors: &[CVector], disps: &[PhasePerm], tol: f64) -> Vec<usize> {
    let units: Vec<CVector> = vectors.iter().map(|v| v / C64::new(v.norm(), 0.0)).collect();
    let mut labels: Vec<usize> = Vec::with_capacity(units.len());
    let mut reps: Vec<usize> = Vec::new();
    for (idx, v) in units.iter().enumerate() {
        let shifted: Vec<CVector> = disps.iter().map(|d| d.apply(v)).collect();
        let hit = reps
            .iter()
            .position(|&r| shifted.iter().any(|s| (units[r].dotc(s).norm() - 1.0).abs() < tol));
        match hit {
            Some(k) => labels.push(k),
            None => {
                labels.push(reps.len());
                reps.push(idx);
            }
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_vector_is_not_a_sic() {
        let dim = Dimension::new(4).unwrap();
        let mut v = CVector::from_element(4, ZERO);
        v[0] = C64::new(1.0, 0.0);
        let f = Fiducial::new(dim, BasisTag::Standard, v, BTreeMap::new()).unwrap();
        let cert = verify_sic(&f, 1e-10).unwrap();
        assert!(!cert.pass);
        assert!((cert.max_abs_deviation - 0.8).abs() < 1e-15);
    }

    #[test]
    fn uniform_projection() {
        let dim = Dimension::new(5).unwrap();
        let v = CVector::from_element(5, C64::new(1.0, 0.0));
        let f = Fiducial::new(dim, BasisTag::Standard, v, BTreeMap::new()).unwrap();
        let p = simplex_projection(&f).p;
        assert!(p.iter().all(|x| (x - 0.2).abs() < 1e-15));
    }
}
