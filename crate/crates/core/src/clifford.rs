//! Symplectic matrices over Z_N̄ and their metaplectic unitaries in the standard basis.

use crate::arith::{gcd, mod_inverse, rem};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, mat_pow, max_abs_diff, root_of_unity, CMatrix, CVector};
use crate::phaseperm::PhasePerm;
use crate::weyl::{displacement_perm, zeros, BasisTag, Dimension, UnitaryMatrix};
use num_complex::Complex64 as C64;
use rand::Rng;

/// `(α β; γ δ)` with integer entries; the modulus is supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl SymplecticMatrix {
    pub const IDENTITY: SymplecticMatrix = SymplecticMatrix::new(1, 0, 0, 1);
    /// `(0 −1; 1 −1)`.
    pub const ZAUNER: SymplecticMatrix = SymplecticMatrix::new(0, -1, 1, -1);
    /// `(1 0; 0 −1)`.
    pub const J: SymplecticMatrix = SymplecticMatrix::new(1, 0, 0, -1);
    /// `(0 −1; 1 0)`.
    pub const FOURIER: SymplecticMatrix = SymplecticMatrix::new(0, -1, 1, 0);

    pub const fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        Self { alpha, beta, gamma, delta }
    }

    pub fn det(&self) -> i64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    pub fn det_mod(&self, m: i64) -> i64 {
        rem(rem(self.alpha, m) * rem(self.delta, m) - rem(self.beta, m) * rem(self.gamma, m), m)
    }

    pub fn trace(&self) -> i64 {
        self.alpha + self.delta
    }

    pub fn reduce(&self, m: i64) -> Self {
        Self::new(rem(self.alpha, m), rem(self.beta, m), rem(self.gamma, m), rem(self.delta, m))
    }

    pub fn mul(&self, o: &Self, m: i64) -> Self {
        let a = self.reduce(m);
        let b = o.reduce(m);
        Self::new(
            a.alpha * b.alpha + a.beta * b.gamma,
            a.alpha * b.beta + a.beta * b.delta,
            a.gamma * b.alpha + a.delta * b.gamma,
            a.gamma * b.beta + a.delta * b.delta,
        )
        .reduce(m)
    }

    pub fn pow(&self, e: u32, m: i64) -> Self {
        let mut acc = Self::IDENTITY.reduce(m);
        for _ in 0..e {
            acc = acc.mul(self, m);
        }
        acc
    }

    /// Inverse of a determinant-one matrix: `(δ −β; −γ α)`.
    pub fn inverse_sl(&self, m: i64) -> Self {
        Self::new(self.delta, -self.beta, -self.gamma, self.alpha).reduce(m)
    }

    /// `G (i, j)ᵀ` modulo `m`.
    pub fn act(&self, i: i64, j: i64, m: i64) -> (i64, i64) {
        let a = self.reduce(m);
        let (i, j) = (rem(i, m), rem(j, m));
        (rem(a.alpha * i + a.beta * j, m), rem(a.gamma * i + a.delta * j, m))
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

/// Multiplicities of the Zauner eigenvalues `1, e^{2πi/3}, e^{4πi/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenspaceDims {
    pub d0: usize,
    pub d1: usize,
    pub d2: usize,
}

impl EigenspaceDims {
    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.d0, self.d1, self.d2)
    }

    /// The table value for dimension `N`.
    pub fn predicted(n: usize) -> Self {
        let k = n / 3;
        match n % 3 {
            0 => Self { d0: k + 1, d1: k, d2: k - 1 },
            1 => Self { d0: k + 1, d1: k, d2: k },
            _ => Self { d0: k + 1, d1: k + 1, d2: k },
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenspaceReport {
    pub measured: EigenspaceDims,
    pub predicted: EigenspaceDims,
    /// Largest distance of a (rephased) eigenvalue from its cube root of unity.
    pub max_cluster_distance: f64,
}

pub fn is_symplectic(g: &SymplecticMatrix, dim: Dimension) -> bool {
    g.det_mod(dim.nbari()) == 1
}

fn require_symplectic(g: &SymplecticMatrix, dim: Dimension) -> Result<()> {
    if is_symplectic(g, dim) {
        Ok(())
    } else {
        Err(Error::NotSymplectic {
            det: g.det_mod(dim.nbari()),
            modulus: dim.nbari(),
        })
    }
}

/// `G = (0 −1; 1 x) · (γ+xα  δ+xβ; −α  −β)` with the least `x ≥ 0` making `δ+xβ` a unit mod N̄.
pub fn decompose(g: &SymplecticMatrix, dim: Dimension) -> Result<(SymplecticMatrix, SymplecticMatrix)> {
    require_symplectic(g, dim)?;
    let m = dim.nbari();
    let g = g.reduce(m);
    let x = (0..m)
        .find(|&x| gcd(g.delta + x * g.beta, m) == 1)
        .expect("a coprime δ + xβ always exists for a symplectic matrix");
    let g1 = SymplecticMatrix::new(0, -1, 1, x).reduce(m);
    let g2 = SymplecticMatrix::new(g.gamma + x * g.alpha, g.delta + x * g.beta, -g.alpha, -g.beta).reduce(m);
    debug_assert_eq!(g1.mul(&g2, m), g);
    Ok((g1, g2))
}

/// The closed-form kernel for unit `β`; the determinant is not checked.
fn metaplectic_direct(g: &SymplecticMatrix, dim: Dimension) -> CMatrix {
    let m = dim.nbari();
    let g = g.reduce(m);
    let binv = mod_inverse(g.beta, m).expect("β must be a unit");
    let n = dim.n();
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = zeros(n);
    for u in 0..n as i64 {
        for v in 0..n as i64 {
            let e = rem(binv * rem(g.delta * u * u - 2 * u * v + g.alpha * v * v, m), m);
            out[(u as usize, v as usize)] = dim.tau_pow(e) * scale;
        }
    }
    out
}

fn metaplectic_matrix(g: &SymplecticMatrix, dim: Dimension) -> CMatrix {
    let m = dim.nbari();
    if gcd(g.beta, m) == 1 {
        metaplectic_direct(g, dim)
    } else {
        let (g1, g2) = decompose(g, dim).expect("caller checked symplecticity");
        metaplectic_direct(&g1, dim) * metaplectic_direct(&g2, dim)
    }
}

/// Unitary `U_G` with `U_G D_{ij} U_G† = D_{G(i,j)}` up to a power of τ.
pub fn metaplectic(g: &SymplecticMatrix, dim: Dimension, theta: f64) -> Result<UnitaryMatrix> {
    require_symplectic(g, dim)?;
    let entries = metaplectic_matrix(g, dim) * C64::from_polar(1.0, theta);
    Ok(UnitaryMatrix {
        dim,
        basis: BasisTag::Standard,
        entries,
    })
}

/// Max over `(i, j)` of `min_k |U D_{ij} U† − τ^k D_{G(i,j)}|`, with `disp` supplying `D_{ij}` in
/// whatever basis `u` is written in.
pub fn conjugation_residual<F>(u: &CMatrix, g: &SymplecticMatrix, dim: Dimension, disp: F) -> f64
where
    F: Fn(i64, i64) -> PhasePerm,
{
    let n = dim.ni();
    let ud = u.adjoint();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = disp(i, j);
            // U·D: column c of U·D is phase[c]·(column perm[c] of U)
            let mut udm = zeros(dim.n());
            for c in 0..dim.n() {
                let col = u.column(d.perm[c]) * d.phase[c];
                udm.set_column(c, &col);
            }
            let conj = udm * &ud;
            let (a, b) = g.act(i, j, n);
            let target = disp(a, b);
            let mut inner = C64::new(0.0, 0.0);
            for c in 0..dim.n() {
                inner += target.phase[c].conj() * conj[(target.perm[c], c)];
            }
            inner /= n as f64;
            let k = (0..dim.nbari())
                .min_by(|&x, &y| {
                    (inner - dim.tau_pow(x))
                        .norm()
                        .partial_cmp(&(inner - dim.tau_pow(y)).norm())
                        .unwrap()
                })
                .unwrap();
            let fitted = target.scale(dim.tau_pow(k)).to_matrix();
            worst = worst.max(max_abs_diff(&conj, &fitted));
        }
    }
    worst
}

/// Residual of the Clifford covariance relation in the standard basis.
///
/// Non-symplectic input is accepted so the check can serve as a negative control; if `β` is not a
/// unit the decomposition is attempted anyway on the raw entries.
pub fn conjugation_check(g: &SymplecticMatrix, dim: Dimension) -> f64 {
    let m = dim.nbari();
    let u = if gcd(g.beta, m) == 1 {
        metaplectic_direct(g, dim)
    } else if is_symplectic(g, dim) {
        metaplectic_matrix(g, dim)
    } else {
        return f64::INFINITY;
    };
    conjugation_residual(&u, g, dim, |i, j| displacement_perm(dim, i, j))
}

fn cube_root_index(z: C64) -> (usize, f64) {
    (0..3)
        .map(|r| (r, (z - root_of_unity(r as i64, 3)).norm()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
}

fn cluster(eigs: &[C64], phase: C64) -> Result<(EigenspaceDims, f64)> {
    let mut counts = [0usize; 3];
    let mut worst: f64 = 0.0;
    for &e in eigs {
        let (r, dist) = cube_root_index(e * phase);
        if dist >= 1e-3 {
            let z = e * phase;
            return Err(Error::ClusterAmbiguity { re: z.re, im: z.im, distance: dist });
        }
        worst = worst.max(dist);
        counts[r] += 1;
    }
    Ok((
        EigenspaceDims { d0: counts[0], d1: counts[1], d2: counts[2] },
        worst,
    ))
}

/// Zauner unitary with its cube-root branch pinned by the eigenspace table, plus the eigenspace report.
pub fn zauner_with_report(dim: Dimension) -> Result<(UnitaryMatrix, EigenspaceReport)> {
    let n = dim.n();
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    let base = metaplectic_matrix(&SymplecticMatrix::ZAUNER, dim);
    // U³ = c·1 for the θ = 0 representative
    let cube = mat_pow(&base, 3);
    let c = cube[(0, 0)];
    let eigs = eigenvalues(&base).expect("Schur iteration did not converge");
    let predicted = EigenspaceDims::predicted(n);
    let root = C64::from_polar(1.0, -c.arg() / 3.0);
    for b in 0..3 {
        let phase = root * root_of_unity(b, 3);
        let (measured, dist) = cluster(&eigs, phase)?;
        if measured == predicted {
            let entries = base * phase;
            return Ok((
                UnitaryMatrix { dim, basis: BasisTag::Standard, entries },
                EigenspaceReport { measured, predicted, max_cluster_distance: dist },
            ));
        }
    }
    Err(Error::BranchNotFound(n))
}

pub fn zauner_unitary(dim: Dimension) -> Result<UnitaryMatrix> {
    zauner_with_report(dim).map(|(u, _)| u)
}

pub fn eigenspace_dims(dim: Dimension) -> Result<EigenspaceReport> {
    zauner_with_report(dim).map(|(_, r)| r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order3Report {
    /// `G³ ≡ 1` and `G ≢ 1` modulo N.
    pub order3_mod_n: bool,
    /// `G³ ≡ 1` and `G ≢ 1` modulo N̄.
    pub order3_mod_nbar: bool,
    pub trace_minus_one_mod_n: bool,
    pub trace_minus_one_mod_nbar: bool,
}

impl Order3Report {
    /// Whether the trace criterion agrees with the order, both read modulo N.
    pub fn agrees_mod_n(&self) -> bool {
        self.order3_mod_n == self.trace_minus_one_mod_n
    }

    pub fn agrees_mod_nbar(&self) -> bool {
        self.order3_mod_nbar == self.trace_minus_one_mod_nbar
    }
}

pub fn order3_trace_check(g: &SymplecticMatrix, dim: Dimension) -> Order3Report {
    let order3 = |m: i64| {
        let r = g.reduce(m);
        r != SymplecticMatrix::IDENTITY.reduce(m) && r.pow(3, m) == SymplecticMatrix::IDENTITY.reduce(m)
    };
    Order3Report {
        order3_mod_n: order3(dim.ni()),
        order3_mod_nbar: order3(dim.nbari()),
        trace_minus_one_mod_n: rem(g.trace() + 1, dim.ni()) == 0,
        trace_minus_one_mod_nbar: rem(g.trace() + 1, dim.nbari()) == 0,
    }
}

/// Lift `G ∈ SL(2, N)` (N even) to `SL(2, 2N)` by adding `N` to one entry when needed.
pub fn lift_sl2(g: &SymplecticMatrix, dim: Dimension) -> Result<SymplecticMatrix> {
    let n = dim.ni();
    if n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("lift_sl2 needs even N, got {n}")));
    }
    let g = g.reduce(n);
    if g.det_mod(n) != 1 {
        return Err(Error::NotSymplectic { det: g.det_mod(n), modulus: n });
    }
    let k = (g.det() - 1) / n;
    let mut out = g;
    if rem(k, 2) == 1 {
        // an odd entry always exists because the determinant is odd
        if rem(g.alpha, 2) == 1 {
            out.delta += n;
        } else if rem(g.delta, 2) == 1 {
            out.alpha += n;
        } else if rem(g.beta, 2) == 1 {
            out.gamma += n;
        } else {
            assert!(rem(g.gamma, 2) == 1, "determinant parity guarantees an odd entry");
            out.beta += n;
        }
    }
    let out = out.reduce(2 * n);
    debug_assert_eq!(out.det_mod(2 * n), 1);
    Ok(out)
}

/// Apply the anti-unitary for `E = GJ` (det −1): conjugate, then apply `U_G` with `G = EJ`.
pub fn antiunitary_action(e: &SymplecticMatrix, dim: Dimension, v: &CVector) -> Result<CVector> {
    let m = dim.nbari();
    if e.det_mod(m) != rem(-1, m) {
        return Err(Error::DetNotMinusOne { det: e.det_mod(m), modulus: m });
    }
    if v.len() != dim.n() {
        return Err(Error::DimensionMismatch(v.len(), dim.n()));
    }
    let g = e.mul(&SymplecticMatrix::J, m);
    let u = metaplectic_matrix(&g, dim);
    Ok(u * v.conjugate())
}

/// Uniform random element of SL(2, m) by rejection.
pub fn random_sl2<R: Rng + ?Sized>(m: i64, rng: &mut R) -> SymplecticMatrix {
    loop {
        let g = SymplecticMatrix::new(
            rng.random_range(0..m),
            rng.random_range(0..m),
            rng.random_range(0..m),
            rng.random_range(0..m),
        );
        if g.det_mod(m) == rem(1, m) {
            return g;
        }
    }
}

pub fn random_symplectic<R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> SymplecticMatrix {
    random_sl2(dim.nbari(), rng)
}
