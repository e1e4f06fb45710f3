//! The dimension-16 fiducial in a basis where the Zauner unitary is a permutation.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::Fiducial;
use crate::clifford::zauner_unitary;
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, mat_pow, off_diagonal_norm, unitarity_deviation, CMatrix, CVector, I, ZERO};
use crate::weyl::{standard_generators, BasisTag, Dimension};
use num_complex::Complex64 as C64;
use serde_json::json;

fn dim16() -> Dimension {
    Dimension::new(16).unwrap()
}

/// `(row, col, sign, k)` meaning `sign · τ^k`, for the printed generators.
const X_PRINTED: [(usize, usize, i8, i64); 16] = [
    (0, 12, 1, 4), (1, 13, -1, 9), (2, 14, 1, 0), (3, 15, -1, 5),
    (4, 8, 1, 28), (5, 9, -1, 13), (6, 10, 1, 20), (7, 11, -1, 25),
    (8, 0, 1, 20), (9, 1, -1, 27), (10, 2, 1, 0), (11, 3, -1, 31),
    (12, 4, 1, 28), (13, 5, -1, 23), (14, 6, 1, 12), (15, 7, -1, 27),
];

const Z_PRINTED: [(usize, usize, i8, i64); 16] = [
    (0, 1, 1, 0), (1, 2, 1, 12), (2, 3, 1, 20), (3, 0, 1, 0),
    (4, 5, 1, 4), (5, 6, 1, 28), (6, 7, 1, 12), (7, 4, 1, 4),
    (8, 9, -1, 23), (9, 10, -1, 5), (10, 11, -1, 19), (11, 8, -1, 9),
    (12, 13, -1, 7), (13, 14, -1, 5), (14, 15, -1, 27), (15, 12, -1, 1),
];

/// Basis change, `None` for zero, otherwise `(sign, k)`; overall factor `1/2`.
type Entry = Option<(i8, i64)>;

const fn e(s: i8, k: i64) -> Entry {
    Some((s, k))
}

const O: Entry = None;

#[rustfmt::skip]
const T_PRINTED: [[Entry; 16]; 16] = [
    [e(1,0),O,O,O,e(1,16),O,O,O,e(1,0),O,O,O,e(1,16),O,O,O],
    [e(1,0),O,O,O,e(1,24),O,O,O,e(1,16),O,O,O,e(1,8),O,O,O],
    [e(1,20),O,O,O,e(1,20),O,O,O,e(1,20),O,O,O,e(1,20),O,O,O],
    [e(1,0),O,O,O,e(1,8),O,O,O,e(1,16),O,O,O,e(1,24),O,O,O],
    [O,O,e(1,0),O,O,O,e(1,16),O,O,O,e(1,0),O,O,O,e(1,16),O],
    [O,O,e(1,0),O,O,O,e(1,24),O,O,O,e(1,16),O,O,O,e(1,8),O],
    [O,O,e(1,8),O,O,O,e(1,8),O,O,O,e(1,8),O,O,O,e(1,8),O],
    [O,O,e(1,0),O,O,O,e(1,8),O,O,O,e(1,16),O,O,O,e(1,24),O],
    [O,O,O,e(1,4),O,O,O,e(1,20),O,O,O,e(1,4),O,O,O,e(1,20)],
    [O,O,O,e(-1,19),O,O,O,e(-1,11),O,O,O,e(1,3),O,O,O,e(-1,27)],
    [O,O,O,e(1,20),O,O,O,e(1,20),O,O,O,e(1,20),O,O,O,e(1,20)],
    [O,O,O,e(-1,7),O,O,O,e(-1,15),O,O,O,e(1,23),O,O,O,e(-1,31)],
    [O,e(1,28),O,O,O,e(1,12),O,O,O,e(1,28),O,O,O,e(1,12),O,O],
    [O,e(-1,23),O,O,O,e(-1,15),O,O,O,e(-1,7),O,O,O,e(-1,31),O,O],
    [O,e(1,20),O,O,O,e(1,20),O,O,O,e(1,20),O,O,O,e(1,20),O,O],
    [O,e(-1,27),O,O,O,e(-1,3),O,O,O,e(-1,11),O,O,O,e(-1,19),O,O],
];

/// Entries of the basis change whose sign is flipped to make it unitary.
const T_SIGN_FIXES: [(usize, usize); 2] = [(9, 11), (11, 11)];

/// Slots sharing a coefficient, in order `x0, x1, x3, x4, x5, x7`.
pub const SLOTS: [&[usize]; 6] = [&[0, 2, 6], &[1, 9, 10], &[3, 14, 15], &[4], &[5, 11, 12], &[7, 8, 13]];

fn sparse(entries: &[(usize, usize, i8, i64)]) -> CMatrix {
    let d = dim16();
    let mut m = CMatrix::from_element(16, 16, ZERO);
    for &(r, c, s, k) in entries {
        m[(r, c)] = d.tau_pow(k) * s as f64;
    }
    m
}

fn basis_change(fixed: bool) -> CMatrix {
    let d = dim16();
    let mut m = CMatrix::from_element(16, 16, ZERO);
    for (r, row) in T_PRINTED.iter().enumerate() {
        for (c, entry) in row.iter().enumerate() {
            if let Some((s, k)) = *entry {
                let flip = fixed && T_SIGN_FIXES.contains(&(r, c));
                let s = if flip { -s } else { s };
                m[(r, c)] = d.tau_pow(k) * (s as f64 * 0.5);
            }
        }
    }
    m
}

/// Generators of the adapted basis and the change of basis from the standard one.
///
/// `x`, `z` satisfy `ZX = ωXZ` and equal `T X_std T†`, `T Z_std T†`. The printed shift matrix
/// is the adjoint of `x`; the printed basis change differs from `t` by two signs.
#[derive(Debug, Clone)]
pub struct Adapted16 {
    pub x: CMatrix,
    pub z: CMatrix,
    pub t: CMatrix,
    pub x_printed: CMatrix,
    pub z_printed: CMatrix,
    pub t_printed: CMatrix,
}

pub fn adapted16_generators() -> &'static Adapted16 {
    static CELL: OnceLock<Adapted16> = OnceLock::new();
    CELL.get_or_init(|| {
        let x_printed = sparse(&X_PRINTED);
        let z_printed = sparse(&Z_PRINTED);
        Adapted16 {
            x: x_printed.adjoint(),
            z: z_printed.clone(),
            t: basis_change(true),
            x_printed,
            z_printed,
            t_printed: basis_change(false),
        }
    })
}

/// Structural checks on the transcribed matrices.
#[derive(Debug, Clone)]
pub struct Adapted16Structure {
    pub unitarity_x: f64,
    pub unitarity_z: f64,
    pub unitarity_t: f64,
    pub unitarity_t_printed: f64,
    /// `|ZX − ωXZ|` for the adopted generators.
    pub commutation: f64,
    /// `|ZX − ωXZ|` for the generators exactly as printed.
    pub commutation_printed: f64,
    pub x4_off_diagonal: f64,
    pub z4_off_diagonal: f64,
    /// `|T X_std T† − X|`, `|T Z_std T† − Z|`.
    pub basis_change_x: f64,
    pub basis_change_z: f64,
    /// `T U_Z T†` is a phase-permutation whose cycles are exactly the ansatz slots.
    pub zauner_is_slot_permutation: bool,
}

pub fn adapted16_structure() -> Adapted16Structure {
    let a = adapted16_generators();
    let d = dim16();
    let w = d.omega_pow(1);
    let (xs, zs) = standard_generators(d);
    let uz = zauner_unitary(d).expect("Zauner unitary exists for N = 16").entries;
    let conj = &a.t * uz * a.t.adjoint();
    let zauner_is_slot_permutation = match super::dense_to_perm(&conj) {
        None => false,
        Some(p) => SLOTS.iter().all(|slot| {
            let start = slot[0];
            let mut cycle = vec![start];
            let mut cur = p.perm[start];
            while cur != start && cycle.len() <= 16 {
                cycle.push(cur);
                cur = p.perm[cur];
            }
            cycle.sort_unstable();
            cycle == slot.to_vec()
        }),
    };
    Adapted16Structure {
        unitarity_x: unitarity_deviation(&a.x),
        unitarity_z: unitarity_deviation(&a.z),
        unitarity_t: unitarity_deviation(&a.t),
        unitarity_t_printed: unitarity_deviation(&a.t_printed),
        commutation: max_abs_diff(&(&a.z * &a.x), &(&a.x * &a.z * w)),
        commutation_printed: max_abs_diff(&(&a.z_printed * &a.x_printed), &(&a.x_printed * &a.z_printed * w)),
        x4_off_diagonal: off_diagonal_norm(&mat_pow(&a.x, 4)),
        z4_off_diagonal: off_diagonal_norm(&mat_pow(&a.z, 4)),
        basis_change_x: max_abs_diff(&(&a.t * &xs.entries * a.t.adjoint()), &a.x),
        basis_change_z: max_abs_diff(&(&a.t * &zs.entries * a.t.adjoint()), &a.z),
        zauner_is_slot_permutation,
    }
}

/// Which reading of the printed coefficients to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transcription {
    /// The coefficients exactly as typeset.
    AsPrinted,
    /// With the corrections that make the vector a SIC fiducial (see the README).
    Reconciled,
}

impl Transcription {
    pub fn as_str(&self) -> &'static str {
        match self {
            Transcription::AsPrinted => "as_printed",
            Transcription::Reconciled => "reconciled",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct N16Options {
    /// Sign of `t₂`; only `t₂²` is given.
    pub t2_branch: i8,
    pub transcription: Transcription,
    /// Evaluate with `√13 → −√13`, `√17 → −√17`.
    pub galois_conjugate: bool,
}

impl Default for N16Options {
    fn default() -> Self {
        Self {
            t2_branch: 1,
            transcription: Transcription::Reconciled,
            galois_conjugate: false,
        }
    }
}

/// Coefficients of `√2, √13, √17, √26, √34, √221, √442, 1`.
type Lin = [f64; 8];

/// `i·(P₀ t₁ + P₁) f + (P₂ t₁ + P₃) f` with each `P = L₀ r₂r₃ + L₁ r₂ + L₂ r₃ + L₃`.
type Coeff = [[Lin; 4]; 4];

#[rustfmt::skip]
const X1: Coeff = [
    [[21.,22.,16.,5.,5.,4.,1.,74.], [-77.,-26.,-18.,-33.,-19.,2.,-7.,42.], [-45.,30.,-10.,15.,5.,10.,5.,-30.], [0.,30.,30.,0.,0.,10.,0.,-70.]],
    [[3.,3.,9.,-1.,7.,11.,3.,121.], [-82.,-88.,-24.,-74.,-2.,24.,-2.,264.], [175.,80.,-20.,75.,-25.,0.,-5.,380.], [200.,220.,-300.,160.,-160.,-20.,-40.,180.]],
    [[-10.,-15.,-15.,-6.,-8.,-1.,0.,-21.], [55.,16.,28.,7.,21.,8.,5.,108.], [70.,0.,0.,10.,0.,0.,0.,80.], [-10.,-130.,-250.,-70.,-70.,-30.,-10.,-630.]],
    [[10.,-51.,-33.,-24.,-22.,1.,0.,-29.], [320.,-4.,28.,8.,4.,44.,20.,524.], [265.,-30.,-50.,-15.,-35.,10.,5.,310.], [260.,-200.,-560.,-100.,-260.,0.,20.,-600.]],
];

#[rustfmt::skip]
const X3: Coeff = [
    [[-21.,-22.,-16.,-5.,-5.,-4.,-1.,-74.], [77.,26.,18.,33.,19.,-2.,7.,-42.], [-45.,30.,-10.,15.,5.,10.,5.,-30.], [0.,30.,30.,0.,0.,10.,0.,-70.]],
    [[-3.,-3.,-9.,1.,-7.,-11.,-3.,-121.], [82.,88.,24.,74.,2.,-24.,2.,-264.], [175.,80.,-20.,75.,-25.,0.,-5.,380.], [200.,220.,-300.,160.,-160.,-20.,-40.,180.]],
    [[10.,15.,15.,6.,8.,1.,0.,21.], [-55.,-16.,-28.,-7.,-21.,-8.,-5.,-108.], [70.,0.,0.,10.,0.,0.,0.,80.], [-10.,-130.,-250.,-70.,-70.,-30.,-10.,-630.]],
    [[-10.,51.,33.,24.,22.,-1.,0.,29.], [-320.,4.,-28.,-8.,-4.,-44.,-20.,-524.], [265.,-30.,-50.,-15.,-35.,10.,5.,310.], [260.,-200.,-560.,-100.,-260.,0.,20.,-600.]],
];

#[rustfmt::skip]
const X5: Coeff = [
    [[-37.5,-4.,-2.,-12.5,-7.5,0.,-2.5,10.], [-22.,-24.,-12.,14.,2.,-4.,-2.,-24.], [15.,-5.,-5.,25.,-5.,-5.,5.,35.], [270.,60.,180.,10.,70.,20.,10.,620.]],
    [[-85.,-28.,-4.,-3.,1.,4.,-5.,-36.], [-190.,-86.,22.,34.,22.,22.,-10.,122.], [300.,-60.,40.,40.,-20.,0.,0.,-220.], [650.,-60.,460.,110.,-130.,60.,10.,660.]],
    [[1.5,23.,19.,-1.5,-4.5,3.,0.5,63.], [152.,0.,-20.,28.,24.,4.,12.,64.], [-70.,-5.,15.,0.,10.,-5.,0.,55.], [350.,-100.,-100.,50.,110.,-20.,10.,60.]],
    [[43.,28.,24.,-23.,-19.,8.,3.,108.], [476.,-22.,-26.,28.,4.,6.,36.,26.], [-170.,-20.,-40.,50.,10.,0.,-10.,60.], [410.,-160.,-120.,150.,270.,0.,-30.,280.]],
];

#[rustfmt::skip]
const X7: Coeff = [
    [[-1.5,-23.,-19.,1.5,4.5,-3.,-0.5,-63.], [-152.,0.,20.,-28.,-24.,-4.,-12.,-64.], [-70.,-5.,15.,0.,10.,-5.,0.,55.], [350.,-100.,-100.,50.,110.,-20.,10.,60.]],
    [[-43.,-28.,-24.,23.,19.,-8.,-3.,-108.], [-476.,22.,26.,-28.,-4.,-6.,-36.,-26.], [-170.,-20.,-40.,50.,10.,0.,-10.,60.], [410.,-160.,-120.,150.,270.,0.,-30.,280.]],
    [[-37.5,-4.,-2.,-12.5,-7.5,0.,-2.5,10.], [-22.,-24.,-12.,14.,2.,-4.,-2.,-24.], [-15.,5.,5.,-25.,5.,5.,-5.,-35.], [-270.,-60.,-180.,-10.,-70.,-20.,-10.,-620.]],
    [[-85.,-28.,-4.,-3.,1.,4.,-5.,-36.], [-190.,-86.,22.,34.,22.,22.,-10.,122.], [-300.,60.,-40.,-40.,20.,0.,0.,220.], [-650.,60.,-460.,-110.,130.,-60.,-10.,-660.]],
];

/// Evaluated field elements.
#[derive(Debug, Clone, Copy)]
pub struct FieldValues {
    pub roots: [f64; 7],
    pub r2: f64,
    pub r3: f64,
    pub t1: f64,
    pub t2: f64,
    pub t2_squared: f64,
    pub t3: f64,
    pub t4: f64,
}

fn checked_sqrt(name: &'static str, x: f64) -> Result<f64> {
    if x < -1e-12 {
        return Err(Error::NegativeRadicand { name, value: x });
    }
    Ok(x.max(0.0).sqrt())
}

pub fn field_values(opts: &N16Options) -> Result<FieldValues> {
    let g = if opts.galois_conjugate { -1.0 } else { 1.0 };
    let s2 = 2f64.sqrt();
    let s13 = g * 13f64.sqrt();
    let s17 = g * 17f64.sqrt();
    let roots = [s2, s13, s17, s2 * s13, s2 * s17, s13 * s17, s2 * s13 * s17];
    let s221 = roots[5];
    let r2 = checked_sqrt("r2", s221 - 11.0)?;
    let r3 = checked_sqrt("r3", 15.0 + s17)?;
    let t1 = checked_sqrt("t1", 15.0 + (4.0 - s17) * r3 - 3.0 * s17)?;
    let t2_squared = (((3.0 - 5.0 * s17) * s13 + (39.0 * s17 - 65.0)) * r3 + ((16.0 * s17 - 72.0) * s13 + 936.0)) * t1
        - 208.0 * s13
        + 2288.0;
    let t2 = opts.t2_branch.signum() as f64 * checked_sqrt("t2", t2_squared)?;
    let t3 = checked_sqrt("t3", 2.0 - s2)?;
    let t4 = checked_sqrt("t4", 2.0 + t3)?;
    Ok(FieldValues { roots, r2, r3, t1, t2, t2_squared, t3, t4 })
}

fn lin(l: &Lin, roots: &[f64; 7]) -> f64 {
    l[..7].iter().zip(roots).map(|(a, b)| a * b).sum::<f64>() + l[7]
}

fn poly(p: &[Lin; 4], fv: &FieldValues) -> f64 {
    lin(&p[0], &fv.roots) * fv.r2 * fv.r3 + lin(&p[1], &fv.roots) * fv.r2 + lin(&p[2], &fv.roots) * fv.r3 + lin(&p[3], &fv.roots)
}

fn coeff(c: &Coeff, fv: &FieldValues, f: f64) -> C64 {
    let im = (poly(&c[0], fv) * fv.t1 + poly(&c[1], fv)) * f;
    let re = (poly(&c[2], fv) * fv.t1 + poly(&c[3], fv)) * f;
    C64::new(re, im)
}

/// The six distinct coefficients `x0, x1, x3, x4, x5, x7`, already placed per slot group.
pub fn coefficients(opts: &N16Options) -> Result<[C64; 6]> {
    let fv = field_values(opts)?;
    let [s2, s13, s17, s26, _, s221, s442] = fv.roots;
    let x0 = C64::new(-40.0 / 13.0 * s13 * fv.r3 * fv.t1 * fv.t2, 0.0);
    let a = -11.0 / 26.0 * s13 - 0.5 * s17 - 3.0 / 26.0 * s221 - 0.5;
    let b = 10.0 * s2 + 20.0 / 13.0 * s26 + 10.0 / 13.0 * s442;
    let x4 = C64::new((-a * fv.r2 * fv.r3 + b * fv.r2) * fv.t1 * fv.t2, (a * fv.r2 * fv.r3 + b * fv.r2) * fv.t1 * fv.t2);
    match opts.transcription {
        Transcription::AsPrinted => Ok([
            x0,
            coeff(&X1, &fv, fv.t4),
            coeff(&X3, &fv, fv.t4),
            x4,
            coeff(&X5, &fv, 1.0),
            coeff(&X7, &fv, 1.0),
        ]),
        Transcription::Reconciled => {
            // the mixed number 1½ in the leading √2 term is read as 11/2
            let mut x5 = X5;
            let mut x7 = X7;
            x5[2][0][0] = 5.5;
            x7[0][0][0] = -5.5;
            let f13 = I * (fv.t3 / fv.t4);
            let f57 = -C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
            Ok([
                x0,
                coeff(&X1, &fv, fv.t4) * f13,
                coeff(&X3, &fv, fv.t4) * f13,
                x4,
                // x5 and x7 exchange slot groups
                coeff(&x7, &fv, 1.0) * f57,
                coeff(&x5, &fv, 1.0) * f57,
            ])
        }
    }
}

/// The dimension-16 fiducial in the adapted basis.
pub fn fiducial_n16_with(opts: &N16Options) -> Result<Fiducial> {
    if opts.t2_branch != 1 && opts.t2_branch != -1 {
        return Err(Error::InvalidParameter(format!("t2 branch must be ±1, got {}", opts.t2_branch)));
    }
    let xs = coefficients(opts)?;
    let mut v = CVector::from_element(16, ZERO);
    for (slot, x) in SLOTS.iter().zip(xs) {
        for &k in slot.iter() {
            v[k] = x;
        }
    }
    let prov = BTreeMap::from([
        ("construction".to_string(), json!("closed_form_n16")),
        ("t2_branch".to_string(), json!(opts.t2_branch)),
        ("transcription".to_string(), json!(opts.transcription.as_str())),
        ("galois_conjugate".to_string(), json!(opts.galois_conjugate)),
    ]);
    Fiducial::new(dim16(), BasisTag::Adapted16, v, prov)
}

pub fn fiducial_n16(t2_branch: i8) -> Result<Fiducial> {
    fiducial_n16_with(&N16Options { t2_branch, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sic::verify_sic;

    #[test]
    fn structure() {
        let s = adapted16_structure();
        assert!(s.unitarity_x < 1e-12 && s.unitarity_z < 1e-12 && s.unitarity_t < 1e-12);
        assert!(s.unitarity_t_printed > 0.1);
        assert!(s.commutation < 1e-10);
        assert!(s.commutation_printed > 0.1);
        assert!(s.x4_off_diagonal < 1e-12 && s.z4_off_diagonal < 1e-12);
        assert!(s.basis_change_x < 1e-12 && s.basis_change_z < 1e-12);
        assert!(s.zauner_is_slot_permutation);
    }

    #[test]
    fn reconciled_branches_pass() {
        for b in [1, -1] {
            let f = fiducial_n16(b).unwrap();
            assert!(verify_sic(&f, 1e-8).unwrap().pass);
        }
    }

    #[test]
    fn printed_coefficients_fail() {
        let f = fiducial_n16_with(&N16Options { transcription: Transcription::AsPrinted, ..Default::default() }).unwrap();
        assert!(!verify_sic(&f, 1e-8).unwrap().pass);
    }
}
