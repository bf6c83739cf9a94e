//! First-moment sums of the candidate bound, in the divisor form and in the
//! pairwise-coprime form.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dyadic::Dyadic;
use crate::arith::{jacobi, prime_divisors, SquarefreeSegments};
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;
use crate::selmer::Variant;

/// Range limits for the moment sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentConfig {
    pub direct_limit: u64,
    pub reparam_limit: u64,
    /// Largest `X` for which full term lists are materialized.
    pub term_list_limit: u64,
}

impl Default for MomentConfig {
    fn default() -> Self {
        MomentConfig {
            direct_limit: 100_000_000,
            reparam_limit: 1_000_000,
            term_list_limit: 20_000,
        }
    }
}

fn check_range(x: u64, limit: u64, what: &str) -> Result<()> {
    if x == 0 {
        return Err(Error::domain("X must be at least 1"));
    }
    if x > limit {
        return Err(Error::resource(format!(
            "{what}: X = {x} exceeds the configured limit {limit}"
        )));
    }
    Ok(())
}

fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Field data shared by both forms of the sum.
#[derive(Clone, Debug)]
struct FieldData {
    z: i64,
    delta: i64,
    /// Primes dividing `2 Delta`, ascending.
    rad_primes: Vec<u64>,
}

impl FieldData {
    fn new(field: &QuadraticField) -> Self {
        FieldData {
            z: field.z(),
            delta: field.disc(),
            rad_primes: prime_divisors(2 * field.disc()),
        }
    }

    fn divides_2delta(&self, p: u64) -> bool {
        self.rad_primes.binary_search(&p).is_ok()
    }

    /// `rad(2 Delta)`, negative when `Delta < 0`.
    fn rad(&self) -> i64 {
        self.delta.signum() * self.rad_primes.iter().product::<u64>() as i64
    }
}

/// One summand `(n, d, a, b, c)` of the expanded divisor sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DirectTerm {
    pub n: i64,
    pub d: i64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl DirectTerm {
    /// `4^-omega(d/(d,2Delta)) 2^-omega(n/(n,2dDelta)) (z/a) (+-d'n'/b) (d/c)` with
    /// `d' = d/(d,n)`, `n' = n/(d,n)`.
    pub fn value(&self, field: &QuadraticField, variant: Variant) -> Dyadic {
        let fd = FieldData::new(field);
        let (n, d) = (self.n as i128, self.d as i128);
        let two_delta = 2 * fd.delta as i128;
        let g = gcd(d, n);
        let w1 = prime_divisors((d / gcd(d, two_delta)) as i64).len() as u32;
        let w2 = prime_divisors((n / gcd(n, two_delta * d)) as i64).len() as u32;
        let s = jacobi(fd.z as i128, self.a as i128)
            * jacobi(variant.sign() as i128 * (d / g) * (n / g), self.b as i128)
            * jacobi(d, self.c as i128);
        Dyadic::new(s, 2 * w1 + w2)
    }
}

/// The ten pairwise coprime variables `y1..y6, z1..z4` of the reparametrized sum.
///
/// `y` entries are odd, positive and prime to `2 Delta`; `z1 z2 z3 z4 = rad(2 Delta)`
/// with `z1 > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SumTerm {
    pub y: [u64; 6],
    pub z: [i64; 4],
}

impl SumTerm {
    fn y_prod(&self, idx: &[usize]) -> i128 {
        idx.iter().map(|&i| self.y[i] as i128).product()
    }

    pub fn d(&self) -> i128 {
        self.y_prod(&[0, 1, 2, 3]) * self.z[0] as i128 * self.z[1] as i128
    }

    pub fn n(&self) -> i128 {
        self.y_prod(&[0, 1, 2, 3, 4, 5]) * self.z[0] as i128 * self.z[2] as i128
    }

    pub fn a(&self) -> u64 {
        self.y[0] * self.y[2]
    }

    pub fn b(&self) -> u64 {
        self.y[1] * self.y[2]
    }

    pub fn c(&self) -> u64 {
        self.y[4]
    }

    pub fn to_direct(&self) -> DirectTerm {
        DirectTerm {
            n: self.n() as i64,
            d: self.d() as i64,
            a: self.a(),
            b: self.b(),
            c: self.c(),
        }
    }

    /// The substitution from a divisor-sum index to coprime variables.
    pub fn from_direct(field: &QuadraticField, t: &DirectTerm) -> SumTerm {
        let fd = FieldData::new(field);
        let two_delta = 2 * fd.delta as i128;
        let (n, d) = (t.n as i128, t.d as i128);
        let (a, b, c) = (t.a as i128, t.b as i128, t.c as i128);
        let ab = gcd(a, b);
        let z1 = gcd(gcd(d, n), two_delta);
        let z2 = d / gcd(d, n);
        let z3 = n.signum() * gcd(n, two_delta) / z1;
        let z4 = fd.rad() as i128 / (z1 * z2 * z3);
        SumTerm {
            y: [
                (a / ab) as u64,
                (b / ab) as u64,
                ab as u64,
                (d.abs() / gcd(d, two_delta * a * b)) as u64,
                c as u64,
                (n.abs() / gcd(n, two_delta * c * d)) as u64,
            ],
            z: [z1 as i64, z2 as i64, z3 as i64, z4 as i64],
        }
    }

    /// Checks coprimality, parity, signs and `prod z = rad(2 Delta)`.
    pub fn check(&self, field: &QuadraticField) -> Result<()> {
        let fd = FieldData::new(field);
        let bad = |why: &str| Err(Error::domain(format!("{self:?}: {why}")));
        let all: Vec<i128> = self
            .y
            .iter()
            .map(|&v| v as i128)
            .chain(self.z.iter().map(|&v| v as i128))
            .collect();
        if all.contains(&0) {
            return bad("zero entry");
        }
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if gcd(all[i], all[j]) != 1 {
                    return bad("entries not pairwise coprime");
                }
            }
        }
        if !all.iter().all(|&v| crate::arith::is_squarefree(v as i64)) {
            return bad("entry not squarefree");
        }
        if self
            .y
            .iter()
            .any(|&v| gcd(v as i128, 2 * fd.delta as i128) != 1)
        {
            return bad("y entry shares a prime with 2 Delta");
        }
        if self.z[0] <= 0 {
            return bad("z1 must be positive");
        }
        if self.z.iter().map(|&v| v as i128).product::<i128>() != fd.rad() as i128 {
            return bad("z1 z2 z3 z4 != rad(2 Delta)");
        }
        Ok(())
    }

    /// `mu^2 / (4^omega(y1y2y3y4) 2^omega(y5y6))` times the three Jacobi factors.
    pub fn value(&self, field: &QuadraticField, variant: Variant) -> Dyadic {
        let all: Vec<i128> = self
            .y
            .iter()
            .map(|&v| v as i128)
            .chain(self.z.iter().map(|&v| v as i128))
            .collect();
        let prod: i128 = all.iter().product();
        if !crate::arith::is_squarefree(prod as i64) {
            return Dyadic::default();
        }
        let w = |idx: &[usize]| -> u32 {
            idx.iter()
                .map(|&i| prime_divisors(self.y[i] as i64).len() as u32)
                .sum()
        };
        let s = self.symbol_product(field.z(), variant);
        Dyadic::new(s, 2 * w(&[0, 1, 2, 3]) + w(&[4, 5]))
    }

    fn symbol_product(&self, z: i64, variant: Variant) -> i8 {
        let y = |i: usize| self.y[i] as i128;
        let (z1, z2, z3) = (self.z[0] as i128, self.z[1] as i128, self.z[2] as i128);
        let top = variant.sign() as i128 * y(4) * y(5) * z2 * z3;
        jacobi(z as i128, y(0) * y(2))
            * jacobi(top, y(1) * y(2))
            * jacobi(y(0) * y(1) * y(2) * y(3) * z1 * z2, y(4))
    }
}

/// Every `(z1, z2, z3, z4)` with `z1 > 0` and `z1 z2 z3 z4 = rad(2 Delta)`.
///
/// For `K = Q(i)`, `rad(2 Delta) = -2` and there are 16 tuples.
pub fn z_tuples(field: &QuadraticField) -> Vec<[i64; 4]> {
    let fd = FieldData::new(field);
    let k = fd.rad_primes.len() as u32;
    let mut out = Vec::new();
    for code in 0..4u64.pow(k) {
        let mut parts = [1i64; 4];
        for (i, &p) in fd.rad_primes.iter().enumerate() {
            parts[(code / 4u64.pow(i as u32) % 4) as usize] *= p as i64;
        }
        for s2 in [1i64, -1] {
            for s3 in [1i64, -1] {
                let s4 = fd.delta.signum() * s2 * s3;
                out.push([parts[0], s2 * parts[1], s3 * parts[2], s4 * parts[3]]);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Indicator-product value of one `(n, d)` pair:
/// `prod_{p | d, p odd prime to Delta} 1/2(1 + (z/p)) 1/2(1 + (+-d'n'/p))`
/// `* prod_{p | n, p prime to 2 d Delta} 1/2(1 + (d/p))`.
fn indicator(
    fd: &FieldData,
    n: i64,
    n_primes: &[u64],
    d: i64,
    d_primes: &[u64],
    sign: i64,
) -> Dyadic {
    let g = gcd(d as i128, n as i128);
    let twisted = sign as i128 * (d as i128 / g) * (n as i128 / g);
    let mut num: i64 = 1;
    let mut exp = 0;
    for &p in d_primes {
        if fd.divides_2delta(p) {
            continue;
        }
        num *=
            (1 + jacobi(fd.z as i128, p as i128) as i64) * (1 + jacobi(twisted, p as i128) as i64);
        exp += 2;
        if num == 0 {
            return Dyadic::default();
        }
    }
    for &p in n_primes {
        if fd.divides_2delta(p) || d_primes.contains(&p) {
            continue;
        }
        num *= 1 + jacobi(d as i128, p as i128) as i64;
        exp += 1;
        if num == 0 {
            return Dyadic::default();
        }
    }
    Dyadic::new(num, exp)
}

fn merged_primes(fd: &FieldData, n_primes: &[u64]) -> Vec<u64> {
    let mut ps = fd.rad_primes.clone();
    ps.extend_from_slice(n_primes);
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Sum over squarefree `d | 2 Delta n` of the indicator product, for one `n`.
fn direct_summand_with(fd: &FieldData, n: i64, n_primes: &[u64], variant: Variant) -> Dyadic {
    let ps = merged_primes(fd, n_primes);
    let mut total = Dyadic::default();
    let mut d_primes = Vec::with_capacity(ps.len());
    for mask in 0u32..(1 << ps.len()) {
        d_primes.clear();
        d_primes.extend(
            ps.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p),
        );
        let m: i64 = d_primes.iter().map(|&p| p as i64).product();
        for d in [m, -m] {
            total += indicator(fd, n, n_primes, d, &d_primes, variant.sign());
        }
    }
    total
}

/// The indicator-product bound for `|X_n|` (or `|Y_n|`) at a single `n`.
pub fn direct_summand(field: &QuadraticField, n: i64, variant: Variant) -> Result<Dyadic> {
    if n == 0 || !crate::arith::is_squarefree(n) {
        return Err(Error::domain(format!("n = {n} is not squarefree")));
    }
    let fd = FieldData::new(field);
    Ok(direct_summand_with(&fd, n, &prime_divisors(n), variant))
}

/// `sum_{|n| <= X squarefree} sum_{d | 2 Delta n} (indicator product)`, exactly.
pub fn xn_sum_direct(field: &QuadraticField, x: u64, variant: Variant) -> Result<Dyadic> {
    xn_sum_direct_with(field, x, variant, &MomentConfig::default())
}

pub fn xn_sum_direct_with(
    field: &QuadraticField,
    x: u64,
    variant: Variant,
    cfg: &MomentConfig,
) -> Result<Dyadic> {
    check_range(x, cfg.direct_limit, "direct moment sum")?;
    let fd = FieldData::new(field);
    let mut total = Dyadic::default();
    for block in SquarefreeSegments::new(x)? {
        let parts: Vec<Dyadic> = block
            .par_iter()
            .map(|e| {
                let m = e.m as i64;
                direct_summand_with(&fd, m, &e.primes, variant)
                    + direct_summand_with(&fd, -m, &e.primes, variant)
            })
            .collect();
        for p in &parts {
            total += p;
        }
    }
    Ok(total)
}

/// Odd squarefree `m <= x` prime to `2 Delta`, with their primes.
fn coprime_odd_squarefree(fd: &FieldData, x: u64) -> Result<Vec<(u64, Vec<u64>)>> {
    let mut out = Vec::new();
    for block in SquarefreeSegments::new(x)? {
        for e in block {
            if e.primes.iter().all(|&p| !fd.divides_2delta(p)) {
                out.push((e.m, e.primes.to_vec()));
            }
        }
    }
    Ok(out)
}

/// Calls `f` on every split of the primes of `m` into `y1 ... y6`.
///
/// `f` also receives `omega(y1 y2 y3 y4)` and `omega(y5 y6)`.
fn for_each_term_of_m(primes: &[u64], z: [i64; 4], mut f: impl FnMut(&SumTerm, u32, u32)) {
    let k = primes.len() as u32;
    for code in 0..6u64.pow(k) {
        let mut y = [1u64; 6];
        let mut w1 = 0;
        let mut c = code;
        for &p in primes {
            let slot = (c % 6) as usize;
            y[slot] *= p;
            if slot < 4 {
                w1 += 1;
            }
            c /= 6;
        }
        f(&SumTerm { y, z }, w1, k - w1);
    }
}

/// The same sum via the coprime variables: for each `z` tuple, every `y` with
/// `y1 ... y6 <= X / (z1 |z3|)`.
pub fn xn_sum_reparam(field: &QuadraticField, x: u64, variant: Variant) -> Result<Dyadic> {
    xn_sum_reparam_with(field, x, variant, &MomentConfig::default())
}

pub fn xn_sum_reparam_with(
    field: &QuadraticField,
    x: u64,
    variant: Variant,
    cfg: &MomentConfig,
) -> Result<Dyadic> {
    check_range(x, cfg.reparam_limit, "reparametrized moment sum")?;
    let fd = FieldData::new(field);
    let ms = coprime_odd_squarefree(&fd, x)?;
    let tuples = z_tuples(field);
    // Numerators bucketed by the exponent of the denominator 4^w1 2^w2.
    let buckets: Vec<Vec<i64>> = tuples
        .par_iter()
        .map(|&z| {
            let mut acc = vec![0i64; 2];
            let lim = x / (z[0] as u64 * z[2].unsigned_abs());
            for (_, primes) in ms.iter().take_while(|(m, _)| *m <= lim) {
                for_each_term_of_m(primes, z, |t, w1, w2| {
                    let e = (2 * w1 + w2) as usize;
                    if acc.len() <= e {
                        acc.resize(e + 1, 0);
                    }
                    acc[e] += t.symbol_product(fd.z, variant) as i64;
                });
            }
            acc
        })
        .collect();
    let mut total = Dyadic::default();
    for acc in &buckets {
        for (e, &s) in acc.iter().enumerate() {
            if s != 0 {
                total += Dyadic::new(s, e as u32);
            }
        }
    }
    Ok(total)
}

/// Every `(n, d, a, b, c)` of the expanded divisor sum with `|n| <= x`, sorted.
pub fn direct_terms(field: &QuadraticField, x: u64) -> Result<Vec<DirectTerm>> {
    check_range(x, MomentConfig::default().term_list_limit, "term list")?;
    let fd = FieldData::new(field);
    let positive_divisors = |primes: &[u64]| -> Vec<u64> {
        (0u32..1 << primes.len())
            .map(|mask| {
                primes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .product()
            })
            .collect()
    };
    let mut out = Vec::new();
    for block in SquarefreeSegments::new(x)? {
        for e in block {
            for n in [e.m as i64, -(e.m as i64)] {
                let ps = merged_primes(&fd, &e.primes);
                for mask in 0u32..1 << ps.len() {
                    let d_primes: Vec<u64> = ps
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &p)| p)
                        .collect();
                    let m: i64 = d_primes.iter().map(|&p| p as i64).product();
                    let ab_primes: Vec<u64> = d_primes
                        .iter()
                        .copied()
                        .filter(|&p| !fd.divides_2delta(p))
                        .collect();
                    let c_primes: Vec<u64> = e
                        .primes
                        .iter()
                        .copied()
                        .filter(|&p| !fd.divides_2delta(p) && !d_primes.contains(&p))
                        .collect();
                    let abs_ = positive_divisors(&ab_primes);
                    let cs = positive_divisors(&c_primes);
                    for d in [m, -m] {
                        for &a in &abs_ {
                            for &b in &abs_ {
                                for &c in &cs {
                                    out.push(DirectTerm { n, d, a, b, c });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Every `SumTerm` with `y1 ... y6 z1 |z3| <= x`, sorted.
pub fn sum_terms(field: &QuadraticField, x: u64) -> Result<Vec<SumTerm>> {
    check_range(x, MomentConfig::default().term_list_limit, "term list")?;
    let fd = FieldData::new(field);
    let ms = coprime_odd_squarefree(&fd, x)?;
    let mut out = Vec::new();
    for z in z_tuples(field) {
        let lim = x / (z[0] as u64 * z[2].unsigned_abs());
        for (_, primes) in ms.iter().take_while(|(m, _)| *m <= lim) {
            for_each_term_of_m(primes, z, |t, _, _| out.push(*t));
        }
    }
    out.sort_unstable();
    Ok(out)
}
