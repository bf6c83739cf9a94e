//! Integer factorization for single queries.
//!
//! Trial division up to [`TRIAL_LIMIT`] strips the smooth part; the remaining
//! cofactor is split with Pollard rho (Brent's cycle variant). Batch work over
//! ranges should go through [`crate::arith::sieve`] instead.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRIAL_LIMIT: u64 = 1_000_000;

/// A nonzero integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredInt {
    sign: i8,
    factors: Vec<(u128, u32)>,
}

impl FactoredInt {
    /// Builds from parts. Factors are sorted and merged; primality is the caller's
    /// responsibility.
    pub fn from_parts(sign: i8, mut factors: Vec<(u128, u32)>) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +-1");
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable();
        let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        FactoredInt {
            sign,
            factors: merged,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The integer itself. Panics on `i128` overflow, which cannot happen for
    /// values produced by [`factorize`].
    pub fn value(&self) -> i128 {
        let mut v: i128 = 1;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                v = v
                    .checked_mul(p as i128)
                    .expect("FactoredInt value overflows i128");
            }
        }
        v * self.sign as i128
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn negate(&self) -> Self {
        FactoredInt {
            sign: -self.sign,
            factors: self.factors.clone(),
        }
    }

    /// `v_p(self)`.
    pub fn valuation(&self, p: u128) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Limits for single-query factorization.
#[derive(Clone, Copy, Debug)]
pub struct FactorConfig {
    /// Largest accepted `|n|`.
    pub bound: u128,
    /// Iteration budget per Pollard-rho attempt (summed over restarts).
    pub rho_budget: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            bound: i64::MAX as u128,
            rho_budget: 50_000_000,
        }
    }
}

/// Factors `n` with the default configuration.
pub fn factorize(n: i128) -> Result<FactoredInt> {
    factorize_with(n, &FactorConfig::default())
}

pub fn factorize_with(n: i128, cfg: &FactorConfig) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::domain("cannot factor zero"));
    }
    let sign: i8 = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    if m > cfg.bound {
        return Err(Error::domain(format!(
            "|{n}| exceeds the configured factorization bound {}",
            cfg.bound
        )));
    }
    let mut factors = Vec::new();
    let tz = m.trailing_zeros();
    if tz > 0 {
        factors.push((2u128, tz));
        m >>= tz;
    }
    let mut d: u128 = 3;
    while d <= TRIAL_LIMIT as u128 && d * d <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 2;
    }
    if m > 1 {
        if d * d > m {
            factors.push((m, 1));
        } else {
            let mut stack = vec![m];
            let mut budget = cfg.rho_budget;
            while let Some(c) = stack.pop() {
                if c == 1 {
                    continue;
                }
                if is_prime(c) {
                    factors.push((c, 1));
                    continue;
                }
                if let Some(r) = exact_sqrt(c) {
                    stack.push(r);
                    stack.push(r);
                    continue;
                }
                match pollard_brent(c, &mut budget) {
                    Some(f) => {
                        stack.push(f);
                        stack.push(c / f);
                    }
                    None => {
                        return Err(Error::resource(format!(
                            "Pollard rho budget exhausted; residual composite {c}"
                        )))
                    }
                }
            }
        }
    }
    Ok(FactoredInt::from_parts(sign, factors))
}

fn exact_sqrt(n: u128) -> Option<u128> {
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x > 0 && x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if let Some(p) = a.checked_mul(b) {
        return p % m;
    }
    // Double-and-add; only reached for moduli above 2^64.
    let (mut a, mut b) = (a % m, b % m);
    let mut r: u128 = 0;
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod(r, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    r
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, over) = a.overflowing_add(b);
    if over || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

pub(crate) fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller-Rabin. Deterministic below 3.3e24 (first 13 prime bases); beyond that
/// the extra bases make a false positive astronomically unlikely.
pub fn is_prime(n: u128) -> bool {
    const BASES: [u128; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of the odd composite `n`, Brent's variant.
fn pollard_brent(n: u128, budget: &mut u64) -> Option<u128> {
    const BATCH: u64 = 128;
    let mut c: u128 = 1;
    while *budget > 0 {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let mut y: u128 = 2;
        let mut r: u64 = 1;
        let mut q: u128 = 1;
        let mut g: u128 = 1;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = BATCH.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += lim;
                *budget = budget.saturating_sub(lim);
                if *budget == 0 {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
        c += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let f = factorize(12).unwrap();
        assert_eq!(f.sign(), 1);
        assert_eq!(f.factors(), &[(2, 2), (3, 1)]);
        let u = factorize(-1).unwrap();
        assert_eq!(u.sign(), -1);
        assert!(u.factors().is_empty());
        assert!(factorize(0).unwrap_err().is_domain());
    }

    #[test]
    fn large_smooth_value_needs_raised_bound() {
        let n: i128 = 3_099_044_504_245_996_706_400;
        assert!(factorize(n).unwrap_err().is_domain());
        let cfg = FactorConfig {
            bound: i128::MAX as u128,
            ..Default::default()
        };
        let f = factorize_with(n, &cfg).unwrap();
        assert_eq!(f.value(), n);
        assert!(f.primes().all(is_prime));
        assert_eq!(f.valuation(2), 5);
        assert_eq!(f.valuation(3), 3);
        assert_eq!(f.valuation(5), 2);
        assert_eq!(f.valuation(7), 2);
        assert_eq!(f.omega(), 15);
    }

    #[test]
    fn pollard_splits_semiprimes() {
        let p: i128 = 1_000_000_007;
        let q: i128 = 998_244_353;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors(), &[(q as u128, 1), (p as u128, 1)]);
        let f = factorize(-(p * p)).unwrap();
        assert_eq!(f.factors(), &[(p as u128, 2)]);
        assert_eq!(f.sign(), -1);
    }

    #[test]
    fn huge_semiprime_over_u64() {
        let cfg = FactorConfig {
            bound: i128::MAX as u128,
            ..Default::default()
        };
        let p: i128 = 18_446_744_073_709_551_557; // largest prime below 2^64
        let q: i128 = 1_000_003;
        let f = factorize_with(p * q * 7, &cfg).unwrap();
        assert_eq!(f.factors(), &[(7, 1), (q as u128, 1), (p as u128, 1)]);
    }

    #[test]
    fn rho_budget_exhaustion_is_a_resource_error() {
        let cfg = FactorConfig {
            bound: u128::MAX,
            rho_budget: 10,
        };
        let p: i128 = 1_000_000_007;
        let q: i128 = 998_244_353;
        let err = factorize_with(p * q, &cfg).unwrap_err();
        assert!(err.is_resource());
        assert!(err.to_string().contains(&(p * q).to_string()));
    }

    #[test]
    fn primality_against_trial_division() {
        for n in 0u128..5000 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "{n}");
        }
        // strong pseudoprime to several small bases
        assert!(!is_prime(3_215_031_751));
    }
}
