//! Phase-permutation representation of the Clifford group in square dimension `N = n²`, and the
//! SL(2, N) orbit structure of Z_N².

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::arith::{egcd, gcd, mod_inverse, rem};
use crate::clifford::{decompose, is_symplectic, random_symplectic, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, CMatrix, CVector};
use crate::phaseperm::PhasePerm;
use crate::weyl::{BasisTag, Dimension, UnitaryMatrix};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Flattened index of `|r, s⟩`.
#[inline]
pub fn index(n: usize, r: i64, s: i64) -> usize {
    let ni = n as i64;
    (rem(r, ni) * ni + rem(s, ni)) as usize
}

/// `0` for odd `n`, `n/2` for even `n`.
pub fn half_m(n: usize) -> i64 {
    if n % 2 == 0 {
        (n / 2) as i64
    } else {
        0
    }
}

/// Columns `|r,s⟩ = n^{-1/2} Σ_t ω^{-ntr} |nt + s⟩`, column index `r·n + s`.
pub fn zak_matrix(dim: Dimension) -> Result<UnitaryMatrix> {
    let n = dim.require_square()?;
    let big = dim.n();
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = CMatrix::from_element(big, big, C64::new(0.0, 0.0));
    for r in 0..n {
        for s in 0..n {
            for t in 0..n {
                let amp = dim.omega_pow(-((n * t * r) as i64)) * scale;
                m[(n * t + s, index(n, r as i64, s as i64))] = amp;
            }
        }
    }
    Ok(UnitaryMatrix { dim, basis: BasisTag::Monomial, entries: m })
}

/// `X|r,s⟩ = |r,s+1⟩` (picking up `σ^r` on wrap) and `Z|r,s⟩ = ω^s |r−1,s⟩`.
pub fn monomial_generator_perms(dim: Dimension) -> Result<(PhasePerm, PhasePerm)> {
    let n = dim.require_square()?;
    let mut x = PhasePerm::identity(dim.n());
    let mut z = PhasePerm::identity(dim.n());
    for r in 0..n as i64 {
        for s in 0..n as i64 {
            let c = index(n, r, s);
            x.perm[c] = index(n, r, s + 1);
            x.phase[c] = if s + 1 == n as i64 { dim.sigma_pow(r) } else { C64::new(1.0, 0.0) };
            z.perm[c] = index(n, r - 1, s);
            z.phase[c] = dim.omega_pow(s);
        }
    }
    Ok((x, z))
}

pub fn monomial_weyl_generators(dim: Dimension) -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    let (x, z) = monomial_generator_perms(dim)?;
    let wrap = |p: PhasePerm| UnitaryMatrix { dim, basis: BasisTag::Monomial, entries: p.to_matrix() };
    Ok((wrap(x), wrap(z)))
}

/// Precomputed `D_{ij} = τ^{ij} X^i Z^j` in the monomial basis.
#[derive(Debug, Clone)]
pub struct MonomialDisplacements {
    dim: Dimension,
    xpow: Vec<PhasePerm>,
    zpow: Vec<PhasePerm>,
}

impl MonomialDisplacements {
    pub fn new(dim: Dimension) -> Result<Self> {
        let (x, z) = monomial_generator_perms(dim)?;
        let mut xpow = vec![PhasePerm::identity(dim.n())];
        let mut zpow = vec![PhasePerm::identity(dim.n())];
        for k in 1..dim.n() {
            xpow.push(x.compose(&xpow[k - 1]));
            zpow.push(z.compose(&zpow[k - 1]));
        }
        Ok(Self { dim, xpow, zpow })
    }

    pub fn get(&self, i: i64, j: i64) -> PhasePerm {
        let n = self.dim.ni();
        let nb = self.dim.nbari();
        let pre = self.dim.tau_pow(rem(rem(i, nb) * rem(j, nb), nb));
        self.xpow[rem(i, n) as usize]
            .compose(&self.zpow[rem(j, n) as usize])
            .scale(pre)
    }
}

fn clifford_direct(g: &SymplecticMatrix, dim: Dimension, n: usize) -> PhasePerm {
    let nb = dim.nbari();
    let g = g.reduce(nb);
    let (a, b, c, d) = (g.alpha, g.beta, g.gamma, g.delta);
    let binv = mod_inverse(b, nb).expect("β must be a unit");
    let ni = n as i64;
    let m = half_m(n);
    let mut out = PhasePerm::identity(dim.n());
    for r in 0..ni {
        for s in 0..ni {
            // s' has to be reduced into [0, n) before it enters the quadratic phase
            let sp = rem(-b * r + a * s + m * a, ni);
            let col = index(n, r, s);
            out.perm[col] = index(n, d * r - c * s + m * c * d, -b * r + a * s + m * a * b);
            let e = rem(binv * rem(d * sp * sp - 2 * s * sp + a * s * s, nb), nb);
            out.phase[col] = dim.tau_pow(e);
        }
    }
    out
}

/// The phase-permutation unitary `U_G` in the monomial basis.
pub fn monomial_clifford_perm(g: &SymplecticMatrix, dim: Dimension, theta: f64) -> Result<PhasePerm> {
    let n = dim.require_square()?;
    if !is_symplectic(g, dim) {
        return Err(Error::NotSymplectic { det: g.det_mod(dim.nbari()), modulus: dim.nbari() });
    }
    let u = if gcd(g.beta, dim.nbari()) == 1 {
        clifford_direct(g, dim, n)
    } else {
        let (g1, g2) = decompose(g, dim)?;
        clifford_direct(&g1, dim, n).compose(&clifford_direct(&g2, dim, n))
    };
    Ok(u.scale(C64::from_polar(1.0, theta)))
}

pub fn monomial_clifford(g: &SymplecticMatrix, dim: Dimension, theta: f64) -> Result<UnitaryMatrix> {
    let p = monomial_clifford_perm(g, dim, theta)?;
    Ok(UnitaryMatrix { dim, basis: BasisTag::Monomial, entries: p.to_matrix() })
}

/// `U_Z|r,s⟩ = e^{iπ(N−1)/12} τ^{r²+2rs} |−r−s−m, r⟩`.
pub fn monomial_zauner_perm(dim: Dimension) -> Result<PhasePerm> {
    let n = dim.require_square()?;
    let ni = n as i64;
    let m = half_m(n);
    let global = root_of_unity(dim.ni() - 1, 24);
    let mut out = PhasePerm::identity(dim.n());
    for r in 0..ni {
        for s in 0..ni {
            let c = index(n, r, s);
            out.perm[c] = index(n, -r - s - m, r);
            out.phase[c] = global * dim.tau_pow(r * r + 2 * r * s);
        }
    }
    Ok(out)
}

pub fn monomial_zauner(dim: Dimension) -> Result<UnitaryMatrix> {
    let p = monomial_zauner_perm(dim)?;
    Ok(UnitaryMatrix { dim, basis: BasisTag::Monomial, entries: p.to_matrix() })
}

/// `U_J`: conjugate amplitudes and send `|r,s⟩ → |−r,s⟩`.
pub fn monomial_antiunitary(dim: Dimension, v: &CVector) -> Result<CVector> {
    let n = dim.require_square()?;
    if v.len() != dim.n() {
        return Err(Error::DimensionMismatch(v.len(), dim.n()));
    }
    let mut out = CVector::from_element(dim.n(), C64::new(0.0, 0.0));
    for r in 0..n as i64 {
        for s in 0..n as i64 {
            out[index(n, -r, s)] = v[index(n, r, s)].conj();
        }
    }
    Ok(out)
}

/// Exactly one entry of modulus ≈ 1 per row and column, everything else ≈ 0.
pub fn is_phase_permutation(m: &CMatrix, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let n = m.nrows();
    let mut row_hits = vec![0usize; n];
    let mut col_hits = vec![0usize; n];
    for r in 0..n {
        for c in 0..n {
            let a = m[(r, c)].norm();
            if (a - 1.0).abs() <= tol {
                row_hits[r] += 1;
                col_hits[c] += 1;
            } else if a > tol {
                return false;
            }
        }
    }
    row_hits.iter().chain(col_hits.iter()).all(|&h| h == 1)
}

/// Order of `v` in Z_N²: `N / gcd(v₁, v₂, N)`.
pub fn vector_order(v: (i64, i64), n: i64) -> i64 {
    n / gcd(gcd(v.0, v.1), n)
}

#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub order: i64,
    pub base: (i64, i64),
    pub members: BTreeSet<(i64, i64)>,
    /// For each member `w`, a matrix in SL(2, N) sending `base` to `w`.
    pub witness_maps: BTreeMap<(i64, i64), SymplecticMatrix>,
    /// Whether every witness was checked to be in SL(2, N) and to map `base` to its member.
    pub verified: bool,
}

/// A determinant-one matrix whose first column, scaled by `N/k`, gives `v`.
fn orbit_witness_matrix(v: (i64, i64), n: i64) -> SymplecticMatrix {
    let k = vector_order(v, n);
    if k == 1 {
        return SymplecticMatrix::IDENTITY;
    }
    let q = n / k;
    let (v1, v2) = (rem(v.0, n) / q, rem(v.1, n) / q);
    // v' is fixed only mod k; shift by multiples of k until the integer gcd is a unit mod N
    for t1 in 0..q {
        for t2 in 0..q {
            let (a1, a2) = (v1 + t1 * k, v2 + t2 * k);
            let (g, a, b) = egcd(a1, a2);
            if g == 0 || gcd(g, n) != 1 {
                continue;
            }
            let ginv = mod_inverse(g, n).unwrap();
            let y = rem(ginv * a, n);
            let x = rem(-ginv * b, n);
            let s = SymplecticMatrix::new(a1, x, a2, y).reduce(n);
            debug_assert_eq!(s.det_mod(n), 1);
            return s;
        }
    }
    unreachable!("a unit gcd lift always exists")
}

/// Orbit of `v` under SL(2, N), with constructive witnesses.
pub fn sl2_orbit(dim: Dimension, v: (i64, i64)) -> OrbitReport {
    let n = dim.ni();
    let v = (rem(v.0, n), rem(v.1, n));
    let order = vector_order(v, n);
    let sv_inv = orbit_witness_matrix(v, n).inverse_sl(n);
    let mut members = BTreeSet::new();
    let mut witness_maps = BTreeMap::new();
    let mut verified = true;
    for a in 0..n {
        for b in 0..n {
            if vector_order((a, b), n) != order {
                continue;
            }
            let w = orbit_witness_matrix((a, b), n).mul(&sv_inv, n);
            verified &= w.det_mod(n) == 1 && w.act(v.0, v.1, n) == (a, b);
            members.insert((a, b));
            witness_maps.insert((a, b), w);
        }
    }
    OrbitReport { order, base: v, members, witness_maps, verified }
}

/// Orbits of SL(2, N) on Z_N² found by breadth-first search with the generators `S` and `T`.
pub fn sl2_orbits_bfs(n: i64) -> Vec<BTreeSet<(i64, i64)>> {
    let gens = [SymplecticMatrix::new(0, -1, 1, 0), SymplecticMatrix::new(1, 1, 0, 1)];
    let mut seen = vec![false; (n * n) as usize];
    let mut orbits = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if seen[(a * n + b) as usize] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut queue = VecDeque::from([(a, b)]);
            seen[(a * n + b) as usize] = true;
            while let Some(p) = queue.pop_front() {
                orbit.insert(p);
                for g in &gens {
                    let q = g.act(p.0, p.1, n);
                    let idx = (q.0 * n + q.1) as usize;
                    if !seen[idx] {
                        seen[idx] = true;
                        queue.push_back(q);
                    }
                }
            }
            orbits.push(orbit);
        }
    }
    orbits
}

fn closed_under_addition(set: &BTreeSet<(i64, i64)>, n: i64) -> bool {
    set.iter()
        .all(|a| set.iter().all(|b| set.contains(&(rem(a.0 + b.0, n), rem(a.1 + b.1, n)))))
}

/// Exhaustive search for an SL(2, N)-invariant subgroup of Z_N² of order `N`.
///
/// Invariant subsets are unions of orbits, so it suffices to try every union containing `0`.
pub fn invariant_subgroup_brute(dim: Dimension) -> Option<BTreeSet<(i64, i64)>> {
    let n = dim.ni();
    let orbits = sl2_orbits_bfs(n);
    let (zero, rest): (Vec<_>, Vec<_>) = orbits.into_iter().partition(|o| o.contains(&(0, 0)));
    assert!(rest.len() < 24, "too many orbits for exhaustive search");
    for mask in 0u32..(1 << rest.len()) {
        let size: usize = 1 + (0..rest.len()).filter(|&b| mask >> b & 1 == 1).map(|b| rest[b].len()).sum::<usize>();
        if size != dim.n() {
            continue;
        }
        let mut set = zero[0].clone();
        for (b, o) in rest.iter().enumerate() {
            if mask >> b & 1 == 1 {
                set.extend(o.iter().copied());
            }
        }
        if closed_under_addition(&set, n) {
            return Some(set);
        }
    }
    None
}

/// The invariant subgroup of order `N`: constructive `n·Z_N²` for squares, exhaustive search
/// otherwise (up to `N = 36`; beyond that the square criterion is applied).
pub fn invariant_subgroup(dim: Dimension) -> Option<BTreeSet<(i64, i64)>> {
    if let Some(n) = dim.root() {
        let big = dim.ni();
        let n = n as i64;
        let set = (0..n).flat_map(|a| (0..n).map(move |b| (a * n % big, b * n % big))).collect();
        return Some(set);
    }
    if dim.n() <= 36 {
        invariant_subgroup_brute(dim)
    } else {
        None
    }
}

/// Max deviation when conjugating `X^n`, `Z^n` and `τ·1` by random monomial Clifford unitaries and
/// matching each image against the closest `τ^k X^{an} Z^{bn}`.
pub fn stabilized_abelian_check(dim: Dimension, samples: usize, seed: u64) -> Result<f64> {
    let n = dim.require_square()?;
    let disp = MonomialDisplacements::new(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = [
        disp.get(n as i64, 0),
        disp.get(0, n as i64),
        PhasePerm::identity(dim.n()).scale(dim.tau_pow(1)),
    ];
    let candidates: Vec<PhasePerm> = (0..n as i64)
        .flat_map(|a| (0..n as i64).map(move |b| (a, b)))
        .map(|(a, b)| disp.xpow[(a * n as i64) as usize % dim.n()].compose(&disp.zpow[(b * n as i64) as usize % dim.n()]))
        .collect();
    let mut worst: f64 = 0.0;
    for sample in 0..samples {
        let g = if sample == 0 { SymplecticMatrix::IDENTITY } else { random_symplectic(dim, &mut rng) };
        let u = monomial_clifford_perm(&g, dim, 0.0)?;
        let ui = u.inverse();
        for h in &gens {
            let img = u.compose(h).compose(&ui);
            let best = candidates
                .iter()
                .map(|c| best_tau_fit(&img, c, dim))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
    }
    Ok(worst)
}

fn best_tau_fit(a: &PhasePerm, b: &PhasePerm, dim: Dimension) -> f64 {
    if a.perm != b.perm {
        return f64::INFINITY;
    }
    (0..dim.nbari())
        .map(|k| {
            let t = dim.tau_pow(k);
            a.phase
                .iter()
                .zip(&b.phase)
                .map(|(x, y)| (x - t * y).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Covariance residual of the monomial Clifford unitary against monomial displacements.
///
/// Everything stays a phase-permutation, so each conjugation is `O(N)`.
pub fn monomial_conjugation_check(g: &SymplecticMatrix, dim: Dimension) -> Result<f64> {
    let u = monomial_clifford_perm(g, dim, 0.0)?;
    let ui = u.inverse();
    let disp = MonomialDisplacements::new(dim)?;
    let n = dim.ni();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let img = u.compose(&disp.get(i, j)).compose(&ui);
            let (a, b) = g.act(i, j, n);
            worst = worst.max(best_tau_fit(&img, &disp.get(a, b), dim));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_deviation};

    fn d(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn zak_examples() {
        let z = zak_matrix(d(4)).unwrap().entries;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((z[(0, 0)].re - h).abs() < 1e-15 && (z[(2, 0)].re - h).abs() < 1e-15);
        assert!((z[(0, 2)].re - h).abs() < 1e-15 && (z[(2, 2)].re + h).abs() < 1e-15);
        for n in [4, 9, 16, 25] {
            assert!(unitarity_deviation(&zak_matrix(d(n)).unwrap().entries) < 1e-12);
        }
    }

    #[test]
    fn generator_examples() {
        let (x, z) = monomial_generator_perms(d(9)).unwrap();
        assert_eq!(x.perm[index(3, 0, 2)], index(3, 0, 0));
        assert_eq!(z.perm[index(3, 0, 0)], index(3, 2, 0));
        let xn = x.pow(3);
        let zn = z.pow(3);
        let dim = d(9);
        for r in 0..3 {
            for s in 0..3 {
                let c = index(3, r, s);
                assert_eq!(xn.perm[c], c);
                assert!((xn.phase[c] - dim.sigma_pow(r)).norm() < 1e-14);
                assert!((zn.phase[c] - dim.sigma_pow(s)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zauner_examples() {
        let u = monomial_zauner_perm(d(9)).unwrap();
        assert_eq!(u.perm[0], 0);
        assert!((u.phase[0] - root_of_unity(1, 3)).norm() < 1e-14);
        let u4 = monomial_zauner_perm(d(4)).unwrap();
        for r in 0..2 {
            for s in 0..2 {
                assert_eq!(u4.perm[index(2, r, s)], index(2, -r - s - 1, r));
            }
        }
    }

    #[test]
    fn antiunitary_examples() {
        let dim = d(9);
        let mut v = CVector::from_element(9, C64::new(0.0, 0.0));
        v[index(3, 1, 0)] = C64::new(0.0, 1.0);
        let w = monomial_antiunitary(dim, &v).unwrap();
        assert_eq!(w[index(3, 2, 0)], C64::new(0.0, -1.0));
        let back = monomial_antiunitary(dim, &w).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn phase_permutation_predicate() {
        assert!(is_phase_permutation(&CMatrix::identity(5, 5), 1e-12));
        let f = CMatrix::from_fn(4, 4, |a, b| d(4).omega_pow((a * b) as i64) * 0.5);
        assert!(!is_phase_permutation(&f, 1e-12));
    }

    #[test]
    fn zauner_agrees_with_formula() {
        let dim = d(9);
        let a = monomial_zauner(dim).unwrap().entries;
        let b = monomial_clifford(&SymplecticMatrix::ZAUNER, dim, 0.0).unwrap().entries;
        assert!(crate::linalg::diff_up_to_phase(&a, &b) < 1e-12);
        let cube = &a * &a * &a;
        assert!(max_abs_diff(&cube, &CMatrix::identity(9, 9)) < 1e-12);
    }

    #[test]
    fn orbit_examples() {
        let o = sl2_orbit(d(4), (2, 0));
        assert_eq!(o.members, BTreeSet::from([(2, 0), (0, 2), (2, 2)]));
        assert!(o.verified);
        assert_eq!(sl2_orbit(d(4), (1, 0)).members.len(), 12);
        assert_eq!(sl2_orbit(d(4), (0, 0)).members.len(), 1);
        // the gcd lift matters here: v' = (3, 0) has integer gcd 3
        assert!(sl2_orbit(d(12), (6, 0)).verified);
    }

    #[test]
    fn subgroup_examples() {
        assert_eq!(invariant_subgroup(d(4)).unwrap(), BTreeSet::from([(0, 0), (0, 2), (2, 0), (2, 2)]));
        assert!(invariant_subgroup(d(6)).is_none());
        assert_eq!(invariant_subgroup(d(9)).unwrap().len(), 9);
    }
}
