//! Quadratic Hilbert symbols and square classes at the places of Q.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::symbols::legendre;
use crate::error::{Error, Result};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Infinity,
    /// A rational prime (2 or odd). Primality is not rechecked.
    Prime(u128),
}

impl Place {
    pub fn prime(self) -> Option<u128> {
        match self {
            Place::Prime(p) => Some(p),
            Place::Infinity => None,
        }
    }

    pub fn is_archimedean(self) -> bool {
        matches!(self, Place::Infinity)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Splits `x = p^v * u` with `p` not dividing `u`.
fn split_valuation(mut x: i128, p: u128) -> (u32, i128) {
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    (v, x)
}

fn eps2(u: i128) -> u8 {
    // (u - 1)/2 mod 2 for odd u
    (u.rem_euclid(4) == 3) as u8
}

fn omega2(u: i128) -> u8 {
    // (u^2 - 1)/8 mod 2 for odd u
    let r = u.rem_euclid(8);
    (r == 3 || r == 5) as u8
}

/// `(a, b)_v`: `+1` when `a x^2 + b y^2 = z^2` has a nontrivial solution in `Q_v`.
pub fn hilbert_symbol(a: i128, b: i128, v: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::domain("hilbert symbol of zero"));
    }
    Ok(match v {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = split_valuation(a, 2);
            let (be, w) = split_valuation(b, 2);
            let e = eps2(u) * eps2(w) + (al % 2) as u8 * omega2(w) + (be % 2) as u8 * omega2(u);
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (al, u) = split_valuation(a, p);
            let (be, w) = split_valuation(b, p);
            let mut s: i8 = 1;
            if al % 2 == 1 && be % 2 == 1 && p % 4 == 3 {
                s = -s;
            }
            if be % 2 == 1 {
                s *= legendre(u, p);
            }
            if al % 2 == 1 {
                s *= legendre(w, p);
            }
            s
        }
    })
}

/// Coordinates of `x` in `Q_v^* / Q_v^{*2}` over F_2, packed in the low bits.
///
/// * `inf`: bit 0 = sign.
/// * odd `p`: bit 0 = `v_p(x) mod 2`, bit 1 = unit part is a non-residue.
/// * `2`: bit 0 = `v_2(x) mod 2`, bit 1 = `eps(u)`, bit 2 = `omega(u)`.
pub fn square_class(x: i128, v: Place) -> Result<u8> {
    if x == 0 {
        return Err(Error::domain("square class of zero"));
    }
    Ok(match v {
        Place::Infinity => (x < 0) as u8,
        Place::Prime(2) => {
            let (val, u) = split_valuation(x, 2);
            (val % 2) as u8 | eps2(u) << 1 | omega2(u) << 2
        }
        Place::Prime(p) => {
            let (val, u) = split_valuation(x, p);
            (val % 2) as u8 | ((legendre(u, p) == -1) as u8) << 1
        }
    })
}

/// Dimension of `Q_v^* / Q_v^{*2}` over F_2.
pub fn local_square_class_dim(v: Place) -> usize {
    match v {
        Place::Infinity => 1,
        Place::Prime(2) => 3,
        Place::Prime(_) => 2,
    }
}

pub fn is_local_square(x: i128, v: Place) -> Result<bool> {
    Ok(square_class(x, v)? == 0)
}

/// A representative of the nontrivial unramified square class at a finite place
/// (the class whose character cuts out the unramified quadratic extension).
pub fn unramified_representative(v: Place) -> Result<i128> {
    match v {
        Place::Infinity => Err(Error::domain(
            "no unramified classes at the archimedean place",
        )),
        Place::Prime(2) => Ok(5),
        Place::Prime(p) => Ok((2..)
            .find(|&a| legendre(a, p) == -1)
            .expect("non-residue exists")),
    }
}

/// F_2-rank of a set of packed square-class vectors.
pub fn f2_rank(vectors: &[u8]) -> usize {
    let mut basis: Vec<u8> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive search for a primitive solution of `a x^2 + b y^2 = z^2`
    /// modulo `p^k`; independent of the closed formulas above.
    fn hilbert_by_search(a: i128, b: i128, p: i128, k: u32) -> i8 {
        let m = p.pow(k);
        for x in 0..m {
            for y in 0..m {
                if x % p == 0 && y % p == 0 {
                    // z must then be divisible by p too; not primitive.
                    continue;
                }
                let lhs = (a * x * x + b * y * y).rem_euclid(m);
                for z in 0..m {
                    if (z * z) % m == lhs {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn documented_values() {
        for b in [-7i128, -1, 1, 2, 3, 10] {
            for v in [
                Place::Infinity,
                Place::Prime(2),
                Place::Prime(3),
                Place::Prime(7),
            ] {
                assert_eq!(hilbert_symbol(1, b, v).unwrap(), 1);
            }
        }
        assert_eq!(hilbert_symbol(-1, -1, Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Prime(2)).unwrap(), -1);
        for p in [3u128, 5, 7, 11, 13] {
            assert_eq!(hilbert_symbol(-1, -1, Place::Prime(p)).unwrap(), 1);
        }
        assert!(hilbert_symbol(0, 3, Place::Prime(3)).is_err());
    }

    #[test]
    fn minus_one_minus_one_by_search() {
        assert_eq!(hilbert_by_search(-1, -1, 2, 4), -1);
        for p in [3, 5, 7] {
            assert_eq!(hilbert_by_search(-1, -1, p, 2), 1);
        }
    }

    #[test]
    fn closed_forms_match_search_for_small_squarefree_arguments() {
        let vals: Vec<i128> = (-15i128..=15)
            .filter(|&x| x != 0 && [4i128, 9].iter().all(|s| x % s != 0))
            .collect();
        for &a in &vals {
            for &b in &vals {
                // Search with primitive solutions mod p^3 (odd) and 2^5 (p = 2);
                // valuations are at most one, so these precisions decide solvability.
                for (p, k) in [(2i128, 5u32), (3, 3), (5, 3), (7, 2), (11, 2), (13, 2)] {
                    let formula = hilbert_symbol(a, b, Place::Prime(p as u128)).unwrap();
                    assert_eq!(formula, hilbert_by_search(a, b, p, k), "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn square_classes() {
        assert!(is_local_square(17, Place::Prime(2)).unwrap());
        assert!(!is_local_square(5, Place::Prime(2)).unwrap());
        assert!(is_local_square(-7, Place::Prime(2)).unwrap());
        assert!(is_local_square(4, Place::Prime(3)).unwrap());
        assert!(!is_local_square(3, Place::Prime(3)).unwrap());
        assert!(is_local_square(-2, Place::Prime(3)).unwrap());
        assert!(!is_local_square(-1, Place::Infinity).unwrap());
        assert_eq!(unramified_representative(Place::Prime(7)).unwrap(), 3);
        assert_eq!(f2_rank(&[0b01, 0b10, 0b11]), 2);
        assert_eq!(f2_rank(&[0, 0]), 0);
    }

    #[test]
    fn hilbert_symbol_is_a_function_of_square_classes() {
        for v in [Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            for a in (-40i128..40).filter(|&x| x != 0) {
                for b in (-40i128..40).filter(|&x| x != 0) {
                    let s = hilbert_symbol(a, b, v).unwrap();
                    // scaling by a square leaves the symbol unchanged
                    assert_eq!(s, hilbert_symbol(a * 9, b * 4, v).unwrap());
                    assert_eq!(s, hilbert_symbol(b, a, v).unwrap());
                }
            }
        }
    }
}
