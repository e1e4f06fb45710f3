//! Integer helpers for residue arithmetic.

use crate::error::{Error, Result};

/// Least non-negative residue.
#[inline]
pub fn rem(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b)`, `g >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inverse(a: i64, m: i64) -> Result<i64> {
    assert!(m > 0, "modulus must be positive");
    if m == 1 {
        return Ok(0);
    }
    let (g, x, _) = egcd(rem(a, m), m);
    if g != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    Ok(rem(x, m))
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation as ascending `(p, q)` pairs.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 0;
            while n % p == 0 {
                n /= p;
                q += 1;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn integer_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r.saturating_sub(1)..=r + 1).find(|&c| c * c == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 7), Ok(1));
        assert_eq!(mod_inverse(3, 4), Ok(3));
        assert_eq!(mod_inverse(2, 3), Ok(2));
        assert_eq!(mod_inverse(-1, 8), Ok(7));
        assert!(matches!(mod_inverse(2, 4), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn egcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, x, y) = egcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn factor_and_sqrt() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(9), vec![(3, 2)]);
        assert_eq!(integer_sqrt(16), Some(4));
        assert_eq!(integer_sqrt(15), None);
        assert_eq!(integer_sqrt(1), Some(1));
    }
}
