use monoclif::linalg::{max_abs_diff, CMatrix};
use monoclif::weyl::{
    all_displacements, canonicalize, compose, element_order, inverse, standard_generators, Dimension, GroupElement,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::PI;

// Oracle: X, Z and τ written straight from their definitions with plain floating trig.
fn tau(n: usize, k: i64) -> C64 {
    C64::from_polar(1.0, PI * (n as f64 + 1.0) * k as f64 / n as f64)
}

fn x_oracle(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| if r == (c + 1) % n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

fn z_oracle(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            C64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn mpow(m: &CMatrix, e: i64, n: usize) -> CMatrix {
    let e = e.rem_euclid(n as i64);
    (0..e).fold(CMatrix::identity(m.nrows(), m.nrows()), |acc, _| acc * m)
}

fn oracle(g: GroupElement, n: usize) -> CMatrix {
    let x = x_oracle(n);
    let z = z_oracle(n);
    // τ^{k + ij} X^i Z^j; τ has order 2N at most so reduce the exponent mod 2N
    let e = (g.k + g.i * g.j).rem_euclid(2 * n as i64);
    mpow(&x, g.i, n) * mpow(&z, g.j, n) * tau(n, e)
}

fn d(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

#[test]
fn conventions_match_definitions() {
    for n in 2..=8 {
        let dim = d(n);
        assert!((dim.omega_pow(1) - C64::from_polar(1.0, 2.0 * PI / n as f64)).norm() < 1e-14);
        assert!((dim.tau_pow(1) - tau(n, 1)).norm() < 1e-14);
        assert!((dim.tau_pow(2) - dim.omega_pow(1)).norm() < 1e-13);
        let nbar = if n % 2 == 0 { 2 * n } else { n };
        assert_eq!(dim.nbar(), nbar);
        assert!((dim.tau_pow(nbar as i64) - C64::new(1.0, 0.0)).norm() < 1e-13);
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        assert!((dim.tau_pow(n as i64) - C64::new(sign, 0.0)).norm() < 1e-13);
    }
    assert!(Dimension::new(0).is_err());
    assert!(Dimension::new(1).is_ok());
}

#[test]
fn generators_match_oracle_and_commute_correctly() {
    for n in 2..=12 {
        let (x, z) = standard_generators(d(n));
        assert!(max_abs_diff(&x.entries, &x_oracle(n)) < 1e-14);
        assert!(max_abs_diff(&z.entries, &z_oracle(n)) < 1e-14);
        let w = C64::from_polar(1.0, 2.0 * PI / n as f64);
        let lhs = &z.entries * &x.entries;
        let rhs = &x.entries * &z.entries * w;
        assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "ZX = ωXZ at N={n}");
    }
}

#[test]
fn element_matrices_match_oracle_exhaustively() {
    for n in 2..=5 {
        let dim = d(n);
        let nbar = dim.nbar() as i64;
        for k in 0..nbar {
            for i in 0..n as i64 {
                for j in 0..n as i64 {
                    let g = GroupElement::new(k, i, j);
                    assert!(max_abs_diff(&g.matrix(dim), &oracle(g, n)) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn canonicalize_preserves_the_operator() {
    for n in 2..=4 {
        let dim = d(n);
        for k in -3..9 {
            for i in -5..9 {
                for j in -5..9 {
                    let g = GroupElement::new(k, i, j);
                    let c = canonicalize(g, dim);
                    assert!(c.is_canonical(dim));
                    assert!(max_abs_diff(&c.matrix(dim), &oracle(g, n)) < 1e-11, "{g:?} -> {c:?}");
                }
            }
        }
    }
}

#[test]
fn compose_matches_dense_product() {
    for n in 2..=6 {
        let dim = d(n);
        let nbar = dim.nbar() as i64;
        for k in [0, 1, nbar - 1] {
            for i in 0..n as i64 {
                for j in 0..n as i64 {
                    for l in 0..n as i64 {
                        for m in 0..n as i64 {
                            let a = GroupElement::new(k, i, j);
                            let b = GroupElement::new(0, l, m);
                            let c = compose(a, b, dim);
                            let dense = oracle(a, n) * oracle(b, n);
                            assert!(max_abs_diff(&c.matrix(dim), &dense) < 1e-11);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn worked_examples() {
    let dim = d(4);
    assert_eq!(compose(GroupElement::new(0, 1, 0), GroupElement::new(0, 0, 1), dim), GroupElement::new(7, 1, 1));
    assert_eq!(element_order(GroupElement::new(0, 1, 1), d(2)), 2);
    assert_eq!(element_order(GroupElement::new(3, 1, 1), d(2)), 4);
    assert_eq!(element_order(GroupElement::new(1, 0, 0), dim), 8);
    assert_eq!(element_order(GroupElement::new(0, 1, 0), d(5)), 5);
}

#[test]
fn displacements_are_orthonormal_phase_permutations() {
    for n in 2..=16 {
        let ds = all_displacements(d(n));
        assert_eq!(ds.len(), n * n);
        let mats: Vec<CMatrix> = ds.iter().map(|p| p.to_matrix()).collect();
        for (a, m) in mats.iter().enumerate() {
            for row in 0..n {
                let hits: Vec<_> = (0..n).filter(|&c| m[(row, c)].norm() > 1e-12).collect();
                assert_eq!(hits.len(), 1);
                assert!((m[(row, hits[0])].norm() - 1.0).abs() < 1e-12);
            }
            // spot-check the trace inner product against a handful of partners
            for b in (0..n * n).step_by(n + 1) {
                let ip = (m.adjoint() * &mats[b]).trace() / n as f64;
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((ip - C64::new(target, 0.0)).norm() < 1e-10);
            }
        }
    }
}

fn elem(n: usize) -> impl Strategy<Value = GroupElement> {
    let nb = if n % 2 == 0 { 2 * n } else { n } as i64;
    (0..nb, 0..n as i64, 0..n as i64).prop_map(|(k, i, j)| GroupElement::new(k, i, j))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]
    #[test]
    fn compose_is_associative((n, a, b, c) in (2usize..40).prop_flat_map(|n| (Just(n), elem(n), elem(n), elem(n)))) {
        let dim = d(n);
        prop_assert_eq!(compose(compose(a, b, dim), c, dim), compose(a, compose(b, c, dim), dim));
    }

    #[test]
    fn inverse_and_identity(n in 2usize..40, k in 0i64..80, i in -50i64..50, j in -50i64..50) {
        let dim = d(n);
        let g = canonicalize(GroupElement::new(k, i, j), dim);
        prop_assert_eq!(compose(g, inverse(g, dim), dim), GroupElement::IDENTITY);
        prop_assert_eq!(compose(GroupElement::IDENTITY, g, dim), g);
    }

    #[test]
    fn order_divides_group_exponent(n in 2usize..20, k in 0i64..40, i in 0i64..20, j in 0i64..20) {
        let dim = d(n);
        let g = canonicalize(GroupElement::new(k, i, j), dim);
        let o = element_order(g, dim);
        prop_assert_eq!((2 * n as u64 * dim.nbar() as u64) % o, 0);
    }
}
