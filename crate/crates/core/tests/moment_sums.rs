//! Moment sums against a brute-force evaluation, and frozen values.

use fourrank::moments::{moment_report, turan_report, xn_sum_direct, xn_sum_reparam, Dyadic};
use fourrank::selmer::Variant;
use fourrank::QuadraticField;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn squarefree(n: i64) -> bool {
    let n = n.abs();
    (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

fn is_prime(p: i64) -> bool {
    p > 1 && (2..).take_while(|q| q * q <= p).all(|q| p % q != 0)
}

/// Legendre symbol by Euler's criterion.
fn legendre(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let (mut b, mut e, mut r) = (a as i128, (p - 1) / 2, 1i128);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as i128;
        }
        b = b * b % p as i128;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn odd_primes_of(m: i64) -> Vec<i64> {
    (3..=m.abs())
        .filter(|&p| is_prime(p) && m % p == 0)
        .collect()
}

fn disc(z: i64) -> i64 {
    if z.rem_euclid(4) == 1 {
        z
    } else {
        4 * z
    }
}

fn brute_sum(z: i64, x: i64, sign: i64) -> BigRational {
    let delta = disc(z);
    let half = BigRational::new(1.into(), 2.into());
    let mut total = BigRational::zero();
    for n in (-x..=x).filter(|&n| n != 0 && squarefree(n)) {
        let top = 2 * delta * n;
        for m in (1..=top.abs()).filter(|&m| top % m == 0 && squarefree(m)) {
            for d in [m, -m] {
                let g = gcd(d, n);
                let twisted = sign * (d / g) * (n / g);
                let mut term = BigRational::from_integer(BigInt::from(1));
                for p in odd_primes_of(d) {
                    if delta % p == 0 {
                        continue;
                    }
                    let a = BigRational::from_integer((1 + legendre(z, p)).into());
                    let b = BigRational::from_integer((1 + legendre(twisted, p)).into());
                    term = term * a * b * &half * &half;
                }
                for p in odd_primes_of(n) {
                    if delta % p == 0 || d % p == 0 {
                        continue;
                    }
                    term = term * BigRational::from_integer((1 + legendre(d, p)).into()) * &half;
                }
                total += term;
            }
        }
    }
    total
}

fn as_rational(d: &Dyadic) -> BigRational {
    BigRational::new(d.numerator().clone(), BigInt::from(1) << d.exponent())
}

#[test]
fn direct_and_reparametrized_sums_match_brute_force() {
    for z in [-1i64, -5, 5, 2, -3] {
        let k = QuadraticField::new(z).unwrap();
        for (variant, sign) in [(Variant::X, 1), (Variant::Y, -1)] {
            let want = brute_sum(z, 60, sign);
            assert_eq!(
                as_rational(&xn_sum_direct(&k, 60, variant).unwrap()),
                want,
                "z = {z}"
            );
            assert_eq!(
                as_rational(&xn_sum_reparam(&k, 60, variant).unwrap()),
                want,
                "z = {z}"
            );
        }
    }
}

#[test]
fn frozen_values() {
    let cases = [
        (-1i64, 200u64, 754i64),
        (5, 200, 1296),
        (-5, 200, 1472),
        (-1, 1000, 3686),
    ];
    for (z, x, want) in cases {
        let k = QuadraticField::new(z).unwrap();
        for v in [Variant::X, Variant::Y] {
            assert_eq!(
                xn_sum_direct(&k, x, v).unwrap(),
                Dyadic::from_int(want),
                "z = {z}, X = {x}"
            );
        }
    }
    let k = QuadraticField::new(-1).unwrap();
    let r = &moment_report(&k, &[1000]).unwrap()[0];
    assert_eq!(r.sum_x, 3686);
    assert_eq!(r.sum_x, r.sum_y);
}

#[test]
fn turan_moments_near_reference() {
    let k = QuadraticField::new(-1).unwrap();
    let r = turan_report(&k, 1_000_000).unwrap();
    let ratio = r.first_moment / (1e6f64).ln().ln();
    assert!((0.35..=0.65).contains(&ratio), "first moment ratio {ratio}");
    assert!(
        r.variance > 0.0 && r.variance < 2.0 * r.first_moment,
        "variance {}",
        r.variance
    );
}
