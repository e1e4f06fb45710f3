//! Closed-form fiducials in dimensions 4 and 9, written in the monomial basis.

use std::collections::BTreeMap;

use super::Fiducial;
use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, CVector, I, ONE, ZERO};
use crate::monomial::index;
use crate::weyl::{BasisTag, Dimension};
use num_complex::Complex64 as C64;
use serde_json::json;

/// Phases `d_k` of the rephased basis `e_k = d_k |k⟩` used for `N = 4`, `k = r·2 + s`.
pub fn n4_rephasing() -> [C64; 4] {
    let dim = Dimension::new(4).unwrap();
    [dim.tau_pow(-2), dim.tau_pow(-7), dim.tau_pow(-5), ONE]
}

/// `(x, i^s, i^t, i^u)` with `x = √(2+√5)` moved to `slot`, in the rephased basis, returned in
/// monomial coordinates.
pub fn fiducial_n4(slot: usize, s: u32, t: u32, u: u32) -> Result<Fiducial> {
    if slot > 3 || s > 3 || t > 3 || u > 3 {
        return Err(Error::InvalidParameter(format!(
            "slot, s, t, u must lie in 0..=3 (got {slot}, {s}, {t}, {u})"
        )));
    }
    let x = (2.0 + 5f64.sqrt()).sqrt();
    let mut powers = [s, t, u].into_iter();
    let d = n4_rephasing();
    let mut v = CVector::from_element(4, ZERO);
    for k in 0..4 {
        let c = if k == slot {
            C64::new(x, 0.0)
        } else {
            I.powu(powers.next().unwrap())
        };
        v[k] = d[k] * c;
    }
    let prov = BTreeMap::from([
        ("construction".to_string(), json!("closed_form_n4")),
        ("slot".to_string(), json!(slot)),
        ("s".to_string(), json!(s)),
        ("t".to_string(), json!(t)),
        ("u".to_string(), json!(u)),
    ]);
    Fiducial::new(Dimension::new(4).unwrap(), BasisTag::Monomial, v, prov)
}

fn checked_sqrt(name: &'static str, x: f64) -> Result<f64> {
    if x < -1e-12 {
        return Err(Error::NegativeRadicand { name, value: x });
    }
    Ok(x.max(0.0).sqrt())
}

fn sign(name: &str, s: i32) -> Result<f64> {
    match s {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidParameter(format!("{name} must be ±1, got {s}"))),
    }
}

/// Squared moduli `p₁…p₄` of the dimension-9 fiducial and the parameters they come from.
#[derive(Debug, Clone, Copy)]
pub struct N9Moduli {
    pub a1: f64,
    pub b1: f64,
    pub a3: f64,
    pub b3: f64,
    pub p: [f64; 4],
}

impl N9Moduli {
    /// Residuals of the normalisation and the two quadratic modulus equations.
    pub fn equation_residuals(&self) -> [f64; 3] {
        let [p1, p2, p3, p4] = self.p;
        [
            p1 + p2 + 3.0 * p3 + 3.0 * p4 - 1.0,
            p1 * p1 + p2 * p2 - p1 * p2 - 0.1,
            3.0 * p3 * p3 + 3.0 * p4 * p4 + 3.0 * p3 * p4 - p3 - p4 + 0.1,
        ]
    }
}

pub fn n9_moduli(s0: i32, s1: i32, s2: i32) -> Result<N9Moduli> {
    let (s0, s1, s2) = (sign("s0", s0)?, sign("s1", s1)?, sign("s2", s2)?);
    let (r3, r5, r15) = (3f64.sqrt(), 5f64.sqrt(), 15f64.sqrt());
    let a1 = (5.0 - 5.0 * s0 * r3 + 3.0 * s0 * r5 + r15) / 40.0;
    let b1 = s2 / 60.0 * checked_sqrt("b1", 15.0 * (r15 + s0 * r3))?;
    let a3 = (15.0 + 5.0 * s0 * r3 - 3.0 * s0 * r5 - r15) / 120.0;
    let b3 = s1 / 60.0 * checked_sqrt("b3", 5.0 * (-18.0 - 7.0 * s0 * r3 + 6.0 * s0 * r5 + 5.0 * r15))?;
    Ok(N9Moduli {
        a1,
        b1,
        a3,
        b3,
        p: [a1 + b1, a1 - b1, a3 + b3, a3 - b3],
    })
}

/// Principal cube root.
fn cbrt(z: C64) -> C64 {
    C64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

/// The dimension-9 fiducial for signs `s0, s1, s2 ∈ {±1}` and cube-root indices `m3, m4 ∈ 0..3`.
pub fn fiducial_n9(s0: i32, s1: i32, s2: i32, m3: u32, m4: u32) -> Result<Fiducial> {
    if m3 > 2 || m4 > 2 {
        return Err(Error::InvalidParameter(format!("m3, m4 must lie in 0..=2 (got {m3}, {m4})")));
    }
    let moduli = n9_moduli(s0, s1, s2)?;
    let (f0, f1, f2) = (s0 as f64, s1 as f64, s2 as f64);
    let (r3, r5, r15) = (3f64.sqrt(), 5f64.sqrt(), 15f64.sqrt());

    let c0 = checked_sqrt("c0", 2.0 * (6.0 + f0 * r3 - r15))? / 8.0;
    // real part non-negative: −π/2 ≤ μ₀ ≤ π/2
    let e0 = C64::new(checked_sqrt("1/2+c0", 0.5 + c0)?, -f1 * checked_sqrt("1/2-c0", 0.5 - c0)?);
    let c1 = f0 / 8.0 * checked_sqrt("c1", 9.0 - 4.0 * f0 * r3 + 3.0 * f0 * r5 - 2.0 * r15)?;
    let c2 = f1 * f0 / 24.0 * checked_sqrt("c2", 15.0 * (-19.0 + 12.0 * f0 * r3 - 9.0 * f0 * r5 + 6.0 * r15))?;
    let cube3 = C64::new(-checked_sqrt("e3 re", 0.5 - c1 + c2)?, f1 * f2 * checked_sqrt("e3 im", 0.5 + c1 - c2)?);
    let cube4 = C64::new(-checked_sqrt("e4 re", 0.5 - c1 - c2)?, f1 * f2 * checked_sqrt("e4 im", 0.5 + c1 + c2)?);
    let e3 = root_of_unity(m3 as i64, 3) * cbrt(cube3);
    let e4 = root_of_unity(m4 as i64, 3) * cbrt(cube4);

    let [p1, p2, p3, p4] = moduli.p;
    let z1 = e0 * checked_sqrt("p1", p1)?;
    let z2 = e0.conj() * checked_sqrt("p2", p2)?;
    let z3 = e3 * checked_sqrt("p3", p3)?;
    let z4 = e4 * checked_sqrt("p4", p4)?;

    let dim = Dimension::new(9).unwrap();
    let w = |k: i64| dim.omega_pow(k);
    let mut v = CVector::from_element(9, ZERO);
    v[index(3, 1, 1)] = -z1 * w(7);
    v[index(3, 2, 2)] = -z2 * w(1);
    v[index(3, 0, 2)] = z3 * w(6);
    v[index(3, 1, 0)] = z3;
    v[index(3, 2, 1)] = z3 * w(8);
    v[index(3, 0, 1)] = z4 * w(6);
    v[index(3, 2, 0)] = z4;
    v[index(3, 1, 2)] = z4 * w(5);

    let prov = BTreeMap::from([
        ("construction".to_string(), json!("closed_form_n9")),
        ("s0".to_string(), json!(s0)),
        ("s1".to_string(), json!(s1)),
        ("s2".to_string(), json!(s2)),
        ("m3".to_string(), json!(m3)),
        ("m4".to_string(), json!(m4)),
    ]);
    Fiducial::new(dim, BasisTag::Monomial, v, prov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sic::verify_sic;

    #[test]
    fn n4_first_solution() {
        let f = fiducial_n4(0, 0, 0, 0).unwrap();
        assert!(verify_sic(&f, 1e-12).unwrap().pass);
        assert!(fiducial_n4(4, 0, 0, 0).is_err());
    }

    #[test]
    fn n9_first_solution() {
        let f = fiducial_n9(1, 1, 1, 0, 0).unwrap();
        assert!(verify_sic(&f, 1e-10).unwrap().pass);
        assert!(fiducial_n9(1, 1, 1, 3, 0).is_err());
        assert!(fiducial_n9(2, 1, 1, 0, 0).is_err());
    }

    #[test]
    fn n9_modulus_equations() {
        for s0 in [1, -1] {
            for s1 in [1, -1] {
                for s2 in [1, -1] {
                    let m = n9_moduli(s0, s1, s2).unwrap();
                    for r in m.equation_residuals() {
                        assert!(r.abs() < 1e-12);
                    }
                }
            }
        }
    }
}
