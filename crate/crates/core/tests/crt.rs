use monoclif::clifford::{random_symplectic, SymplecticMatrix};
use monoclif::crt::{
    clifford_residual, crt_permutation, displacement_residual, eta_prime, f_prime, factor_dimension, from_abc, to_abc,
    verify_product_iso,
};
use monoclif::weyl::{compose, Dimension, GroupElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn d(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

// Oracle: κ by linear scan.
fn kappa_scan(big: i64, nj: i64, nbar: i64) -> i64 {
    (1..nbar).find(|k| (k * (big / nj)) % nbar == 1).unwrap()
}

#[test]
fn factorization_examples() {
    let f = factor_dimension(6).unwrap();
    let got: Vec<_> = f.factors.iter().map(|x| (x.n, x.nbar, x.kappa)).collect();
    assert_eq!(got, vec![(2, 4, 3), (3, 3, 2)]);
    assert_eq!(factor_dimension(9).unwrap().factors[0].kappa, 1);
    let f12: Vec<_> = factor_dimension(12).unwrap().factors.iter().map(|x| x.n).collect();
    assert_eq!(f12, vec![4, 3]);
    for n in 2..=60usize {
        let f = factor_dimension(n).unwrap();
        assert_eq!(f.factors.iter().map(|x| x.n).product::<i64>(), n as i64);
        for x in &f.factors {
            assert_eq!(x.kappa, kappa_scan(n as i64, x.n, x.nbar));
        }
    }
    assert!(factor_dimension(1).is_err());
}

#[test]
fn eta_prime_examples() {
    let f = factor_dimension(6).unwrap();
    assert_eq!(eta_prime(0, 0, 0, &f), vec![(0, 0, 0), (0, 0, 0)]);
    assert_eq!(eta_prime(1, 1, 0, &f), vec![(1, 1, 0), (1, 2, 0)]);
}

#[test]
fn eta_prime_is_a_homomorphism_exhaustively_at_6() {
    let dim = d(6);
    let f = factor_dimension(6).unwrap();
    let fdims: Vec<Dimension> = f.factors.iter().map(|x| x.dim()).collect();
    let img = |g: GroupElement| -> Vec<GroupElement> {
        let (a, b, c) = to_abc(g, dim);
        eta_prime(a, b, c, &f).into_iter().zip(&fdims).map(|((a, b, c), fd)| from_abc(a, b, c, *fd)).collect()
    };
    let elems: Vec<GroupElement> = (0..12)
        .flat_map(|k| (0..6).flat_map(move |i| (0..6).map(move |j| GroupElement::new(k, i, j))))
        .collect();
    for &g in &elems {
        for &h in elems.iter().step_by(7) {
            let lhs = img(compose(g, h, dim));
            let rhs: Vec<_> = img(g).into_iter().zip(img(h)).zip(&fdims).map(|((x, y), fd)| compose(x, y, *fd)).collect();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn f_prime_examples() {
    let f6 = factor_dimension(6).unwrap();
    for x in &f6.factors {
        assert_eq!(f_prime(&SymplecticMatrix::IDENTITY, x).unwrap(), SymplecticMatrix::IDENTITY);
        assert_eq!(f_prime(&SymplecticMatrix::ZAUNER, x).unwrap().det_mod(x.nbar), 1);
    }
    let f9 = factor_dimension(9).unwrap();
    let g = SymplecticMatrix::new(2, 7, 3, 2);
    assert_eq!(f_prime(&g, &f9.factors[0]).unwrap(), g.reduce(9));
}

#[test]
fn product_isomorphism() {
    let r = verify_product_iso(6, 10, 0).unwrap();
    assert!(r.displacement_residual < 1e-10);
    assert!(r.clifford_residual < 1e-9);
    let r = verify_product_iso(12, 10, 1).unwrap();
    assert!(r.displacement_residual < 1e-9);
    assert!(r.clifford_residual < 1e-9);
    assert_eq!(r.elements_checked, 12);
    for n in [10usize, 4] {
        let f = factor_dimension(n).unwrap();
        assert!(displacement_residual(&f) < 1e-10);
    }
    // single factor: the relabelling is the identity
    let p = crt_permutation(&factor_dimension(4).unwrap());
    assert_eq!(p.perm, vec![0, 1, 2, 3]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn f_prime_is_symplectic(seed in any::<u64>(), idx in 0usize..4) {
        let n = [6usize, 10, 12, 15][idx];
        let dim = d(n);
        let fac = factor_dimension(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_symplectic(dim, &mut rng);
        for x in &fac.factors {
            prop_assert_eq!(f_prime(&g, x).unwrap().det_mod(x.nbar), 1);
        }
    }

    #[test]
    fn eta_prime_homomorphism_random_12(k1 in 0i64..24, i1 in 0i64..12, j1 in 0i64..12, k2 in 0i64..24, i2 in 0i64..12, j2 in 0i64..12) {
        let dim = d(12);
        let f = factor_dimension(12).unwrap();
        let fdims: Vec<Dimension> = f.factors.iter().map(|x| x.dim()).collect();
        let img = |g: GroupElement| -> Vec<GroupElement> {
            let (a, b, c) = to_abc(g, dim);
            eta_prime(a, b, c, &f).into_iter().zip(&fdims).map(|((a, b, c), fd)| from_abc(a, b, c, *fd)).collect()
        };
        let (g, h) = (GroupElement::new(k1, i1, j1), GroupElement::new(k2, i2, j2));
        let lhs = img(compose(g, h, dim));
        let rhs: Vec<_> = img(g).into_iter().zip(img(h)).zip(&fdims).map(|((x, y), fd)| compose(x, y, *fd)).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn clifford_level_factorization_at_10(seed in any::<u64>()) {
        let dim = d(10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_symplectic(dim, &mut rng);
        prop_assert!(clifford_residual(&g, &factor_dimension(10).unwrap()).unwrap() < 1e-9);
    }
}
