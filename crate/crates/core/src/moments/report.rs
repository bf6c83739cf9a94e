//! Batch statistics over squarefree `n`: candidate-set sizes, averages of
//! `omega_inert`, and the distribution of the predicted 4-rank.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::arith::{kronecker, primes_up_to, SquarefreeEntry, SquarefreeSegments};
use crate::error::{Error, Result};
use crate::quadfield::{QuadraticField, SplittingType};

/// `2 / zeta(2) = 12 / pi^2`.
pub const TWO_OVER_ZETA2: f64 = 12.0 / (std::f64::consts::PI * std::f64::consts::PI);

/// `(|X~_n|, |Y~_n|)` for squarefree `n`, from the merged condition list.
///
/// Unlike [`crate::selmer::xn_candidates`] this accepts `n = 1` and `n = z`, and takes
/// the prime divisors of `|n|` instead of factoring.
pub fn candidate_sizes(field: &QuadraticField, n: i64, n_primes: &[u64]) -> (usize, usize) {
    let delta = field.disc();
    let mut ps: Vec<u64> = crate::arith::prime_divisors(2 * delta);
    ps.extend_from_slice(n_primes);
    ps.sort_unstable();
    ps.dedup();
    let in_2delta = |p: u64| (2 * delta) % p as i64 == 0;
    let mut counts = (0, 0);
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
        // The split and (d/p) conditions do not depend on the variant.
        let split_ok = d_primes
            .iter()
            .all(|&p| in_2delta(p) || kronecker(delta as i128, p as i128) == 1);
        if !split_ok {
            continue;
        }
        for d in [m, -m] {
            let outside_ok = n_primes
                .iter()
                .filter(|&&p| !in_2delta(p) && !d_primes.contains(&p))
                .all(|&p| kronecker(d as i128, p as i128) == 1);
            if !outside_ok {
                continue;
            }
            let g = num_integer::gcd(d, n);
            let base = (d / g) as i128 * (n / g) as i128;
            for (sign, slot) in [(1i128, &mut counts.0), (-1, &mut counts.1)] {
                let ok = d_primes
                    .iter()
                    .filter(|&&p| !in_2delta(p))
                    .all(|&p| kronecker(sign * base, p as i128) == 1);
                if ok {
                    *slot += 1;
                }
            }
        }
    }
    counts
}

/// One line of `moments.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    #[serde(rename = "X")]
    pub x: u64,
    pub sum_x: u64,
    pub sum_y: u64,
    pub sqfree_count: u64,
    pub frac_trivial_x: f64,
    pub frac_trivial_y: f64,
    pub reference: f64,
}

/// Totals over `10^k <= |n| < 10^(k+1)` (the first band starts at 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecadeRow {
    pub lo: u64,
    pub hi: u64,
    pub sqfree_count: u64,
    pub sum_x: u64,
    pub sum_y: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub z: i64,
    pub x: u64,
    pub sum_x: u64,
    pub sum_y: u64,
    pub sqfree_count: u64,
    pub trivial_x: u64,
    pub trivial_y: u64,
    /// `n` with both candidate sets equal to `{1}`.
    pub trivial_both: u64,
    pub reference: f64,
    pub decades: Vec<DecadeRow>,
}

impl MomentReport {
    pub fn frac_trivial_x(&self) -> f64 {
        self.trivial_x as f64 / self.sqfree_count as f64
    }

    pub fn frac_trivial_y(&self) -> f64 {
        self.trivial_y as f64 / self.sqfree_count as f64
    }

    pub fn frac_trivial_both(&self) -> f64 {
        self.trivial_both as f64 / self.sqfree_count as f64
    }

    pub fn row(&self) -> MomentRow {
        MomentRow {
            x: self.x,
            sum_x: self.sum_x,
            sum_y: self.sum_y,
            sqfree_count: self.sqfree_count,
            frac_trivial_x: self.frac_trivial_x(),
            frac_trivial_y: self.frac_trivial_y(),
            reference: self.reference,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    count: u64,
    sum_x: u64,
    sum_y: u64,
    trivial_x: u64,
    trivial_y: u64,
    trivial_both: u64,
}

impl Tally {
    fn add(&mut self, o: &Tally) {
        self.count += o.count;
        self.sum_x += o.sum_x;
        self.sum_y += o.sum_y;
        self.trivial_x += o.trivial_x;
        self.trivial_y += o.trivial_y;
        self.trivial_both += o.trivial_both;
    }
}

fn tally_entry(field: &QuadraticField, e: &SquarefreeEntry) -> Tally {
    let mut t = Tally::default();
    for n in [e.m as i64, -(e.m as i64)] {
        let (sx, sy) = candidate_sizes(field, n, &e.primes);
        t.count += 1;
        t.sum_x += sx as u64;
        t.sum_y += sy as u64;
        t.trivial_x += u64::from(sx == 1);
        t.trivial_y += u64::from(sy == 1);
        t.trivial_both += u64::from(sx == 1 && sy == 1);
    }
    t
}

fn decade_of(m: u64) -> usize {
    let mut k = 0;
    let mut p = 10;
    while m >= p {
        k += 1;
        p *= 10;
    }
    k
}

/// Set-size sums and trivial fractions over squarefree `1 <= |n| <= X`, for each `X`.
///
/// One sieve pass up to `max(X)`; every `X` must be at least 100.
pub fn moment_report(field: &QuadraticField, xs: &[u64]) -> Result<Vec<MomentReport>> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(&bad) = xs.iter().find(|&&x| x < 100) {
        return Err(Error::domain(format!(
            "moment report needs X >= 100, got {bad}"
        )));
    }
    let xmax = *xs.iter().max().expect("nonempty");
    let mut totals = vec![Tally::default(); xs.len()];
    let mut decades: Vec<Vec<Tally>> = vec![Vec::new(); xs.len()];
    for block in SquarefreeSegments::new(xmax)? {
        let tallies: Vec<Tally> = block.par_iter().map(|e| tally_entry(field, e)).collect();
        for (e, t) in block.iter().zip(&tallies) {
            let k = decade_of(e.m);
            for (i, &x) in xs.iter().enumerate() {
                if e.m <= x {
                    totals[i].add(t);
                    if decades[i].len() <= k {
                        decades[i].resize(k + 1, Tally::default());
                    }
                    decades[i][k].add(t);
                }
            }
        }
    }
    Ok(xs
        .iter()
        .zip(totals.iter().zip(&decades))
        .map(|(&x, (t, dec))| MomentReport {
            z: field.z(),
            x,
            sum_x: t.sum_x,
            sum_y: t.sum_y,
            sqfree_count: t.count,
            trivial_x: t.trivial_x,
            trivial_y: t.trivial_y,
            trivial_both: t.trivial_both,
            reference: TWO_OVER_ZETA2 * x as f64,
            decades: dec
                .iter()
                .enumerate()
                .map(|(k, d)| DecadeRow {
                    lo: if k == 0 { 1 } else { 10u64.pow(k as u32) },
                    hi: (10u64.pow(k as u32 + 1) - 1).min(x),
                    sqfree_count: d.count,
                    sum_x: d.sum_x,
                    sum_y: d.sum_y,
                })
                .collect(),
        })
        .collect())
}

/// First and second moments of `omega_inert(n)` over `1 <= |n| <= X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuranReport {
    pub z: i64,
    pub x: u64,
    /// `sum_{1 <= |n| <= X} omega_inert(n)`.
    pub sum_first: u64,
    /// `sum_{1 <= |n| <= X} omega_inert(n)^2`.
    pub sum_second: u64,
    pub first_moment: f64,
    pub second_moment: f64,
    pub variance: f64,
    /// `log log X / 2`.
    pub reference_first: f64,
    /// `(log log X / 2)^2`.
    pub reference_second: f64,
}

pub fn turan_report(field: &QuadraticField, x: u64) -> Result<TuranReport> {
    if x < 100 {
        return Err(Error::domain(format!(
            "Turan report needs X >= 100, got {x}"
        )));
    }
    let len = usize::try_from(x).map_err(|_| Error::resource("X does not fit in memory"))?;
    let mut w = vec![0u8; len + 1];
    for p in primes_up_to(x) {
        if field.splitting(p) == SplittingType::Inert {
            let p = p as usize;
            for m in (p..=len).step_by(p) {
                w[m] += 1;
            }
        }
    }
    let (s1, s2) = w[1..].iter().fold((0u64, 0u64), |(a, b), &v| {
        (a + v as u64, b + (v as u64).pow(2))
    });
    // Both signs of n contribute equally, so the 1/(2X) average is a 1/X average.
    let first = s1 as f64 / x as f64;
    let second = s2 as f64 / x as f64;
    let a = (x as f64).ln().ln() / 2.0;
    Ok(TuranReport {
        z: field.z(),
        x,
        sum_first: 2 * s1,
        sum_second: 2 * s2,
        first_moment: first,
        second_moment: second,
        variance: second - first * first,
        reference_first: a,
        reference_second: a * a,
    })
}

/// Standard normal CDF.
pub fn phi(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// `-3.00, -2.99, ..., 3.00`.
pub fn default_z_grid() -> Vec<f64> {
    (-300..=300).map(|i| i as f64 / 100.0).collect()
}

/// One line of `ek.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EkRow {
    pub z: f64,
    #[serde(rename = "F_emp")]
    pub f_emp: f64,
    #[serde(rename = "Phi")]
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EkReport {
    /// The field parameter (not a grid point).
    pub field_z: i64,
    pub x: u64,
    /// `log log X / 2`.
    pub a: f64,
    /// `sqrt(A)`.
    pub b: f64,
    /// Squarefree `n` counted (`n = 1` and `n = z` are left out).
    pub count: u64,
    /// `(rk4, number of n)`, ascending.
    pub histogram: Vec<(i64, u64)>,
    pub rows: Vec<EkRow>,
    pub sup_distance: f64,
}

/// `omega_inert(Delta_n)` from the prime divisors of `|n|`.
pub fn omega_inert_disc(field: &QuadraticField, n: i64, n_primes: &[u64]) -> usize {
    let inert = |p: u64| field.splitting(p) == SplittingType::Inert;
    let mut w = n_primes.iter().filter(|&&p| inert(p)).count();
    let disc_even = n.rem_euclid(4) != 1;
    if disc_even && n % 2 != 0 && inert(2) {
        w += 1;
    }
    w
}

/// Empirical CDF of `(rk4_pred(n) - A(X)) / B(X)` over squarefree `|n| <= X`
/// against the standard normal, on the given grid.
pub fn erdos_kac_report(field: &QuadraticField, x: u64, grid: &[f64]) -> Result<EkReport> {
    if x < 1000 {
        return Err(Error::domain(format!(
            "Erdos-Kac report needs X >= 1000, got {x}"
        )));
    }
    let cl = field.class_group().ok_or_else(|| {
        Error::State(format!(
            "Cl(K) for K = Q(sqrt {}) has not been computed",
            field.z()
        ))
    })?;
    let offset = crate::arith::omega(field.disc()) as i64 + cl.rk2() as i64
        - if field.is_real() { 3 } else { 2 };
    let mut hist: std::collections::BTreeMap<i64, u64> = Default::default();
    for block in SquarefreeSegments::new(x)? {
        let vals: Vec<[Option<i64>; 2]> = block
            .par_iter()
            .map(|e| {
                let m = e.m as i64;
                [m, -m].map(|n| {
                    (n != 1 && n != field.z())
                        .then(|| omega_inert_disc(field, n, &e.primes) as i64 + offset)
                })
            })
            .collect();
        for v in vals.iter().flatten().flatten() {
            *hist.entry(*v).or_default() += 1;
        }
    }
    let count: u64 = hist.values().sum();
    let a = (x as f64).ln().ln() / 2.0;
    let b = a.sqrt();
    let rows: Vec<EkRow> = grid
        .iter()
        .map(|&z| {
            let below: u64 = hist
                .iter()
                .filter(|(&v, _)| (v as f64) - a < z * b)
                .map(|(_, &c)| c)
                .sum();
            EkRow {
                z,
                f_emp: below as f64 / count as f64,
                phi: phi(z),
            }
        })
        .collect();
    let sup_distance = rows
        .iter()
        .map(|r| (r.f_emp - r.phi).abs())
        .fold(0.0, f64::max);
    Ok(EkReport {
        field_z: field.z(),
        x,
        a,
        b,
        count,
        histogram: hist.into_iter().collect(),
        rows,
        sup_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_divisors;
    use crate::classgroup::ClassGroupConfig;
    use crate::selmer::{predicted_rk4, xn_candidates, yn_candidates};

    #[test]
    fn sizes_match_selmer_sets() {
        for z in [-1i64, -5, 5, 3] {
            let k = QuadraticField::new(z).unwrap();
            for m in 1i64..400 {
                for n in [m, -m] {
                    if !crate::arith::is_squarefree(n) || n == 1 || n == z {
                        continue;
                    }
                    let got = candidate_sizes(&k, n, &prime_divisors(n));
                    let x = xn_candidates(&k, n).unwrap().len();
                    let y = yn_candidates(&k, n).unwrap().len();
                    assert_eq!(got, (x, y), "z={z} n={n}");
                }
            }
        }
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0), 0.5);
        assert!((phi(1.96) - 0.975).abs() < 1e-3);
        assert!((phi(-1.0) + phi(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sqfree_count_is_field_independent() {
        let a = moment_report(&QuadraticField::new(-1).unwrap(), &[100, 1000]).unwrap();
        let b = moment_report(&QuadraticField::new(5).unwrap(), &[100, 1000]).unwrap();
        assert_eq!(a[0].sqfree_count, 122);
        for (r, s) in a.iter().zip(&b) {
            assert_eq!(r.sqfree_count, s.sqfree_count);
            assert_eq!(
                r.decades.iter().map(|d| d.sqfree_count).sum::<u64>(),
                r.sqfree_count
            );
        }
    }

    #[test]
    fn omega_inert_disc_matches_field() {
        for z in [-1i64, 5, -3] {
            let mut k = QuadraticField::new(z).unwrap();
            k.compute_class_group(&ClassGroupConfig::default()).unwrap();
            let offset = crate::arith::omega(k.disc()) as i64
                + k.class_group().unwrap().rk2() as i64
                - if k.is_real() { 3 } else { 2 };
            for n in -300i64..300 {
                if n == 0 || n == 1 || n == z || !crate::arith::is_squarefree(n) {
                    continue;
                }
                let w = omega_inert_disc(&k, n, &prime_divisors(n)) as i64;
                assert_eq!(w + offset, predicted_rk4(&k, n).unwrap(), "z={z} n={n}");
            }
        }
    }

    #[test]
    fn ek_cdf_is_monotone() {
        let mut k = QuadraticField::new(-1).unwrap();
        k.compute_class_group(&ClassGroupConfig::default()).unwrap();
        let r = erdos_kac_report(&k, 5000, &default_z_grid()).unwrap();
        for w in r.rows.windows(2) {
            assert!(w[0].f_emp <= w[1].f_emp);
        }
        assert!(r.rows.iter().all(|row| (0.0..=1.0).contains(&row.f_emp)));
        assert!(erdos_kac_report(&k, 999, &[0.0]).unwrap_err().is_domain());
    }

    #[test]
    fn turan_small_x_runs() {
        let k = QuadraticField::new(-1).unwrap();
        let r = turan_report(&k, 100).unwrap();
        // Inert primes for Q(i) are 3 mod 4: 3, 7, 11, ... ; sum of floor(100/p).
        let expect: u64 = primes_up_to(100)
            .into_iter()
            .filter(|p| p % 4 == 3)
            .map(|p| 100 / p)
            .sum();
        assert_eq!(r.sum_first, 2 * expect);
    }
}
