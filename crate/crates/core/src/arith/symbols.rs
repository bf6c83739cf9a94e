//! Jacobi and Kronecker symbols.

/// Kronecker symbol `(a/b)`, the multiplicative extension of the Jacobi symbol
/// to all `b`, using `(a/-1) = sign(a)` and `(a/2) = 0, 1, -1` for `a` even,
/// `a = +-1 mod 8`, `a = +-3 mod 8`. `(a/0)` is `1` for `a = +-1` and `0` otherwise.
pub fn kronecker(a: i128, b: i128) -> i8 {
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut sign: i8 = 1;
    let mut b = b;
    if b < 0 {
        b = -b;
        if a < 0 {
            sign = -sign;
        }
    }
    let tz = b.trailing_zeros();
    b >>= tz;
    if tz % 2 == 1 {
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            sign = -sign;
        }
    }
    sign * jacobi(a, b)
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
pub fn jacobi(a: i128, n: i128) -> i8 {
    assert!(
        n > 0 && n % 2 == 1,
        "jacobi: modulus must be odd and positive, got {n}"
    );
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t: i8 = 1;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol for an odd prime `p` (no primality check).
pub fn legendre(a: i128, p: u128) -> i8 {
    jacobi(a, p as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler(a: i128, p: i128) -> i8 {
        let r = crate::arith::factor::pow_mod(
            a.rem_euclid(p) as u128,
            ((p - 1) / 2) as u128,
            p as u128,
        );
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn documented_values() {
        for a in -20..20 {
            assert_eq!(kronecker(a, 1), 1);
        }
        assert_eq!(kronecker(5, 5), 0);
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(3, -1), 1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn legendre_matches_euler_criterion() {
        for p in [3i128, 5, 7, 11, 13, 97, 101] {
            for a in -50..50 {
                assert_eq!(legendre(a, p as u128), euler(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_is_multiplicative_in_the_bottom() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                for c in -30i128..30 {
                    if b * c == 0 {
                        continue;
                    }
                    assert_eq!(
                        kronecker(a, b * c),
                        kronecker(a, b) * kronecker(a, c),
                        "{a} {b} {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn kronecker_is_multiplicative_in_the_top() {
        for b in -30i128..30 {
            if b == 0 {
                continue;
            }
            for a in (-30i128..30).filter(|&a| a != 0) {
                for c in (-30i128..30).filter(|&c| c != 0) {
                    assert_eq!(
                        kronecker(a * c, b),
                        kronecker(a, b) * kronecker(c, b),
                        "{a} {c} {b}"
                    );
                }
            }
        }
    }
}
