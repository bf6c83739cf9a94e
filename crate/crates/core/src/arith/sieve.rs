//! Segmented sieves: primes, and squarefree integers with full factorizations.

use smallvec::SmallVec;

use super::factor::FactoredInt;
use crate::error::{Error, Result};

/// Largest range bound accepted by the squarefree sieve.
pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000_000_000;

const SEGMENT: u64 = 1 << 16;

/// Primes `<= n`, plain Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// A positive squarefree integer and its prime divisors, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeEntry {
    pub m: u64,
    pub primes: SmallVec<[u64; 12]>,
}

impl SquarefreeEntry {
    pub fn to_factored(&self, sign: i8) -> FactoredInt {
        FactoredInt::from_parts(sign, self.primes.iter().map(|&p| (p as u128, 1)).collect())
    }
}

/// Iterates over blocks of positive squarefree integers `1..=x`, ascending.
#[derive(Debug)]
pub struct SquarefreeSegments {
    x: u64,
    lo: u64,
    primes: Vec<u64>,
}

impl SquarefreeSegments {
    pub fn new(x: u64) -> Result<Self> {
        Self::with_limit(x, DEFAULT_SIEVE_LIMIT)
    }

    pub fn with_limit(x: u64, limit: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::domain("sieve bound must be at least 1"));
        }
        if x > limit {
            return Err(Error::resource(format!(
                "sieve bound {x} exceeds the configured limit {limit}"
            )));
        }
        let root = super::factor::isqrt_u128(x as u128) as u64;
        Ok(SquarefreeSegments {
            x,
            lo: 1,
            primes: primes_up_to(root),
        })
    }

    fn sieve_block(&self, lo: u64, hi: u64) -> Vec<SquarefreeEntry> {
        let len = (hi - lo) as usize;
        let mut rest: Vec<u64> = (lo..hi).collect();
        let mut alive = vec![true; len];
        let mut found: Vec<SmallVec<[u64; 12]>> = vec![SmallVec::new(); len];
        for &p in &self.primes {
            if p * p >= hi {
                break;
            }
            let sq = p * p;
            let mut k = lo.div_ceil(sq) * sq;
            while k < hi {
                alive[(k - lo) as usize] = false;
                k += sq;
            }
            let mut k = lo.div_ceil(p) * p;
            while k < hi {
                let i = (k - lo) as usize;
                if alive[i] {
                    found[i].push(p);
                    rest[i] /= p;
                }
                k += p;
            }
        }
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            if !alive[i] {
                continue;
            }
            let mut primes = std::mem::take(&mut found[i]);
            if rest[i] > 1 {
                primes.push(rest[i]);
            }
            out.push(SquarefreeEntry {
                m: lo + i as u64,
                primes,
            });
        }
        out
    }
}

impl Iterator for SquarefreeSegments {
    type Item = Vec<SquarefreeEntry>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.lo > self.x {
            return None;
        }
        let hi = (self.lo + SEGMENT).min(self.x + 1);
        let block = self.sieve_block(self.lo, hi);
        self.lo = hi;
        Some(block)
    }
}

/// Streams every squarefree `n` with `1 <= |n| <= x` (as `+m, -m` for ascending
/// `m`), each with its full factorization.
#[derive(Debug)]
pub struct SquarefreeSieve {
    segments: SquarefreeSegments,
    block: std::vec::IntoIter<SquarefreeEntry>,
    pending_negative: Option<FactoredInt>,
}

pub fn squarefree_sieve(x: u64) -> Result<SquarefreeSieve> {
    Ok(SquarefreeSieve {
        segments: SquarefreeSegments::new(x)?,
        block: Vec::new().into_iter(),
        pending_negative: None,
    })
}

impl Iterator for SquarefreeSieve {
    type Item = FactoredInt;

    fn next(&mut self) -> Option<FactoredInt> {
        if let Some(neg) = self.pending_negative.take() {
            return Some(neg);
        }
        loop {
            if let Some(e) = self.block.next() {
                let pos = e.to_factored(1);
                self.pending_negative = Some(pos.negate());
                return Some(pos);
            }
            self.block = self.segments.next()?.into_iter();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_squarefree(m: u64) -> bool {
        (2..)
            .take_while(|d| d * d <= m)
            .all(|d| !m.is_multiple_of(d * d))
    }

    #[test]
    fn ten() {
        let vals: Vec<i128> = squarefree_sieve(10).unwrap().map(|f| f.value()).collect();
        assert_eq!(
            vals,
            vec![1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10]
        );
    }

    #[test]
    fn hundred_matches_brute_force() {
        let expected = (1..=100u64).filter(|&m| brute_squarefree(m)).count() * 2;
        assert_eq!(expected, 122);
        assert_eq!(squarefree_sieve(100).unwrap().count(), 122);
    }

    #[test]
    fn factorizations_are_correct_across_segment_boundaries() {
        let x = 3 * SEGMENT + 17;
        let mut last = 0;
        for block in SquarefreeSegments::new(x).unwrap() {
            for e in block {
                assert!(e.m > last);
                last = e.m;
                assert_eq!(e.primes.iter().product::<u64>(), e.m);
                assert!(e.primes.windows(2).all(|w| w[0] < w[1]));
                assert!(e.primes.iter().all(|&p| crate::arith::is_prime(p as u128)));
            }
        }
        let n = (1..=x).filter(|&m| brute_squarefree(m)).count();
        let got: usize = SquarefreeSegments::new(x).unwrap().map(|b| b.len()).sum();
        assert_eq!(n, got);
    }

    #[test]
    fn limits() {
        assert!(squarefree_sieve(0).unwrap_err().is_domain());
        assert!(SquarefreeSegments::with_limit(1000, 999)
            .unwrap_err()
            .is_resource());
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
    }
}
