//! Exact integer arithmetic: factorization, squarefree sieving, Kronecker and
//! Hilbert symbols.

pub mod factor;
pub mod hilbert;
pub mod sieve;
pub mod symbols;

pub use factor::{factorize, factorize_with, is_prime, FactorConfig, FactoredInt};
pub use hilbert::{
    f2_rank, hilbert_symbol, is_local_square, square_class, unramified_representative, Place,
};
pub use sieve::{primes_up_to, squarefree_sieve, SquarefreeEntry, SquarefreeSegments};
pub use symbols::{jacobi, kronecker, legendre};

/// Squarefree kernel test for small integers.
pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let m = n.unsigned_abs();
    let mut d = 2u64;
    let mut r = m;
    while d * d <= r {
        if r.is_multiple_of(d * d) {
            return false;
        }
        if r.is_multiple_of(d) {
            r /= d;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n != 0`, ascending.
pub fn prime_divisors(n: i64) -> Vec<u64> {
    let mut m = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Number of distinct prime divisors.
pub fn omega(n: i64) -> usize {
    prime_divisors(n).len()
}
