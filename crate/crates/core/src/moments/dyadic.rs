//! Exact dyadic rationals `m / 2^k`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `num / 2^exp`, kept in lowest terms (`num` odd whenever `exp > 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n, 0)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp as u64) as u32;
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// The power of two in the reduced denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.num.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.num.bits();
        if bits <= 1000 {
            return self.num.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.exp as i32);
        }
        let shift = bits - 64;
        let top = (&self.num >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powf(shift as f64 - self.exp as f64)
    }

    fn aligned(&self, exp: u32) -> BigInt {
        &self.num << (exp - self.exp)
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic::default()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic::from_int(1)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        Dyadic::new(self.aligned(exp) + rhs.aligned(exp), exp)
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        self.aligned(exp).cmp(&other.aligned(exp))
    }
}

/// Integers print as plain decimals, everything else as `m/2^k`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Dyadic::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let num: BigInt = n.trim().parse().map_err(|_| bad())?;
                let exp: u32 = d
                    .trim()
                    .strip_prefix("2^")
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                Ok(Dyadic::new(num, exp))
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
