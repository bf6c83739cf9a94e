//! The fixed quadratic field `K = Q(sqrt z)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_squarefree, kronecker, FactoredInt};
use crate::classgroup::{AbelianGroupStructure, ClassGroupConfig};
use crate::error::{Error, Result};

/// Decomposition type of a rational prime in `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// The unit `(a + b sqrt(disc)) / 2 > 1` of norm `norm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub a: BigInt,
    pub b: BigInt,
    pub norm: i8,
}

impl FundamentalUnit {
    /// `log` of the unit under the real embedding (the regulator).
    pub fn log(&self, disc: i64) -> f64 {
        // unit = (a + b sqrt D)/2 with a ~ b sqrt D, so work with logs of big values.
        let la = big_ln(&self.a);
        let lb = big_ln(&self.b) + 0.5 * (disc as f64).ln();
        let (hi, lo) = if la > lb { (la, lb) } else { (lb, la) };
        hi + (lo - hi).exp().ln_1p() - std::f64::consts::LN_2
    }
}

fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug)]
pub struct QuadraticField {
    z: i64,
    disc: i64,
    unit: Option<FundamentalUnit>,
    cl: Option<AbelianGroupStructure>,
}

impl PartialEq for QuadraticField {
    fn eq(&self, other: &Self) -> bool {
        self.z == other.z
    }
}

/// Discriminant of `Q(sqrt n)`: `n` if `n = 1 mod 4`, else `4n`.
pub fn disc_of_sqrt(n: i64) -> Result<i64> {
    if n == 0 || n == 1 || !is_squarefree(n) {
        return Err(Error::domain(format!(
            "{n} is not a squarefree integer other than 0, 1"
        )));
    }
    Ok(if n.rem_euclid(4) == 1 { n } else { 4 * n })
}

impl QuadraticField {
    pub fn new(z: i64) -> Result<Self> {
        let disc = disc_of_sqrt(z)?;
        let unit = (z > 0).then(|| fundamental_unit(disc));
        Ok(QuadraticField {
            z,
            disc,
            unit,
            cl: None,
        })
    }

    /// Builds the field and fills in `Cl(K)`.
    pub fn with_class_group(z: i64, cfg: &ClassGroupConfig) -> Result<Self> {
        let mut k = Self::new(z)?;
        k.compute_class_group(cfg)?;
        Ok(k)
    }

    pub fn compute_class_group(
        &mut self,
        cfg: &ClassGroupConfig,
    ) -> Result<&AbelianGroupStructure> {
        if self.cl.is_none() {
            let g = if self.disc < 0 {
                crate::classgroup::class_group_forms(self.disc)?
            } else {
                let order = crate::classgroup::NumberFieldOrder::quadratic(self.z)?;
                crate::classgroup::class_group(&order, cfg)?.group
            };
            self.cl = Some(g);
        }
        Ok(self.cl.as_ref().expect("just set"))
    }

    /// Installs an externally computed class group (for instance from an audit CSV).
    pub fn set_class_group(&mut self, g: AbelianGroupStructure) {
        self.cl = Some(g);
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_real(&self) -> bool {
        self.z > 0
    }

    pub fn fundamental_unit(&self) -> Option<&FundamentalUnit> {
        self.unit.as_ref()
    }

    pub fn class_group(&self) -> Option<&AbelianGroupStructure> {
        self.cl.as_ref()
    }

    pub fn splitting(&self, p: u64) -> SplittingType {
        match kronecker(self.disc as i128, p as i128) {
            0 => SplittingType::Ramified,
            1 => SplittingType::Split,
            _ => SplittingType::Inert,
        }
    }

    /// Number of distinct prime divisors of `m` that are inert in `K`.
    pub fn omega_inert(&self, m: &FactoredInt) -> usize {
        m.primes()
            .filter(|&p| self.splitting(p as u64) == SplittingType::Inert)
            .count()
    }

    /// `omega_inert` for a small integer given directly.
    pub fn omega_inert_of(&self, m: i64) -> usize {
        crate::arith::prime_divisors(m)
            .into_iter()
            .filter(|&p| self.splitting(p) == SplittingType::Inert)
            .count()
    }
}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.z)
    }
}

/// Fundamental unit of the real quadratic order of discriminant `disc > 0`.
///
/// Walks the continued fraction of `w = (s + sqrt D)/2` (`s = D mod 2`), which is
/// reduced, and returns the first convergent `p/q` for which `p - q w'` is a unit.
pub fn fundamental_unit(disc: i64) -> FundamentalUnit {
    assert!(disc > 1, "real discriminant expected");
    let d = disc as i128;
    let root = crate::arith::factor::isqrt_u128(d as u128) as i128;
    let s = d % 2;
    let (mut pp, mut qq) = (s, 2i128);
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    let four = BigInt::from(4);
    let big_d = BigInt::from(disc);
    loop {
        debug_assert!(qq > 0);
        let a = (pp + root).div_euclid(qq);
        let p_next = &p_cur * a + &p_prev;
        let q_next = &q_cur * a + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        // p - q w' = (2p - s q + q sqrt D) / 2
        let ua = BigInt::from(2) * &p_cur - &q_cur * s;
        let norm4 = &ua * &ua - &big_d * &q_cur * &q_cur;
        if norm4.abs() == four {
            let norm = if norm4.is_positive() { 1 } else { -1 };
            return FundamentalUnit {
                a: ua,
                b: q_cur,
                norm,
            };
        }
        pp = a * qq - pp;
        qq = (d - pp * pp) / qq;
    }
}
