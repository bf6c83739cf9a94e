use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Finite abelian group `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ... | d_k`, all `d_i >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Canonical form from any list of cyclic orders (zeros are rejected, ones dropped).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        // Collect prime-power parts per prime, then rebuild the divisibility chain.
        let mut parts: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in orders {
            assert!(d > 0, "cyclic factor of infinite order");
            for p in crate::arith::prime_divisors(d as i64) {
                let mut q = 1;
                let mut m = d;
                while m % p == 0 {
                    m /= p;
                    q *= p;
                }
                parts.entry(p).or_default().push(q);
            }
        }
        let len = parts.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for qs in parts.values_mut() {
            qs.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in qs.iter().enumerate() {
                factors[len - 1 - i] *= q;
            }
        }
        AbelianGroupStructure {
            invariant_factors: factors,
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    /// `dim_Fp A/pA` for prime `p`, or more generally `#{i : m | d_i}`.
    pub fn count_divisible_by(&self, m: u64) -> usize {
        self.invariant_factors
            .iter()
            .filter(|&&d| d % m == 0)
            .count()
    }

    pub fn rk2(&self) -> usize {
        self.count_divisible_by(2)
    }

    pub fn rk4(&self) -> usize {
        self.count_divisible_by(4)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.invariant_factors.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for AbelianGroupStructure {
    type Err = Error;

    /// Parses the `[d1;d2;...]` form written by `Display`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::domain(format!("malformed invariant factor list {s:?}")))?;
        let mut orders = Vec::new();
        for tok in inner
            .split([';', ','])
            .map(str::trim)
            .filter(|t| !t.is_empty())
        {
            let d: u64 = tok
                .parse()
                .map_err(|_| Error::domain(format!("bad invariant factor {tok:?}")))?;
            if d == 0 {
                return Err(Error::domain("invariant factor 0 (infinite group)"));
            }
            orders.push(d);
        }
        let g = Self::from_cyclic_orders(&orders);
        if g.invariant_factors
            != orders
                .iter()
                .copied()
                .filter(|&d| d > 1)
                .collect::<Vec<_>>()
        {
            return Err(Error::domain(format!("{s} is not a divisibility chain")));
        }
        Ok(g)
    }
}
