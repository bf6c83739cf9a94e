//! Relation collection over a Minkowski factor base.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::group::AbelianGroupStructure;
use super::ideal::{factor_prime, PrimeIdeal};
use super::lattice::{lll, smith_diagonal, HnfBasis};
use super::order::{Elt, FieldSpec, NumberFieldOrder};
use crate::arith::{kronecker, primes_up_to};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupConfig {
    /// Element trials before giving up.
    pub max_trials: u64,
    /// Quartic fields stop after `stability_factor * |factor base|` relations with
    /// unchanged 2-rank and 4-rank.
    pub stability_factor: usize,
    /// Initial coefficient box for random elements; it grows with the trial count.
    pub coefficient_bound: i64,
    pub seed: u64,
    /// Euler-product cutoff for `L(1, chi)`.
    pub euler_bound: u64,
    pub max_abs_disc_quartic: u128,
    pub max_abs_disc_quadratic: u128,
}

impl Default for ClassGroupConfig {
    fn default() -> Self {
        ClassGroupConfig {
            max_trials: 2_000_000,
            stability_factor: 5,
            coefficient_bound: 2,
            seed: 0x4b52_4e4b,
            euler_bound: 200_000,
            max_abs_disc_quartic: 100_000_000,
            max_abs_disc_quadratic: 10_000_000_000,
        }
    }
}

/// How far a class-group result can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    /// Proven: analytic estimate or empty factor base.
    Certified,
    /// Relation lattice saturated at 2 heuristically.
    Stable,
}

impl std::fmt::Display for OracleStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleStatus::Certified => "certified",
            OracleStatus::Stable => "stable",
        })
    }
}

impl std::str::FromStr for OracleStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "certified" => Ok(OracleStatus::Certified),
            "stable" => Ok(OracleStatus::Stable),
            other => Err(Error::domain(format!("unknown oracle status {other:?}"))),
        }
    }
}

/// One principal ideal `(witness) = prod P_i^exponents[i]`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub exponents: Vec<i64>,
    pub witness: Elt,
}

#[derive(Clone, Debug)]
pub struct RelationMatrix {
    pub factor_base: Vec<PrimeIdeal>,
    pub relations: Vec<Relation>,
}

impl RelationMatrix {
    pub fn matrix(&self) -> Vec<Vec<BigInt>> {
        self.relations
            .iter()
            .map(|r| r.exponents.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Re-checks every witness by norm and by per-ideal valuation.
    pub fn verify(&self, order: &NumberFieldOrder) -> Result<()> {
        for (i, rel) in self.relations.iter().enumerate() {
            let bad = |what: &str| Error::State(format!("relation {i}: {what}"));
            let norm = order
                .norm(&rel.witness)
                .ok_or_else(|| bad("norm overflow"))?;
            let mut expected: i128 = 1;
            for (ideal, &v) in self.factor_base.iter().zip(&rel.exponents) {
                expected *= (ideal.norm() as i128).pow(v as u32);
                if ideal.valuation(order, &rel.witness) != Some(v as u32) {
                    return Err(bad("valuation mismatch"));
                }
            }
            if norm.abs() != expected {
                return Err(bad("norm mismatch"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroupResult {
    pub spec: FieldSpec,
    pub disc: i128,
    pub group: AbelianGroupStructure,
    pub status: OracleStatus,
    pub relations: RelationMatrix,
    pub trials: u64,
    /// Analytic estimate of `h` (quadratic fields only).
    pub h_estimate: Option<f64>,
}

/// Class group of a maximal order by relation collection.
pub fn class_group(order: &NumberFieldOrder, cfg: &ClassGroupConfig) -> Result<ClassGroupResult> {
    let disc = order.discriminant();
    let limit = if order.degree() == 2 {
        cfg.max_abs_disc_quadratic
    } else {
        cfg.max_abs_disc_quartic
    };
    if disc.unsigned_abs() > limit {
        return Err(Error::domain(format!(
            "|disc| = {} exceeds the configured bound {limit}",
            disc.abs()
        )));
    }
    let bound = order.minkowski_bound().floor() as u64;
    let mut factor_base = Vec::new();
    let mut complete_primes = Vec::new();
    for p in primes_up_to(bound) {
        let above = factor_prime(order, p);
        if above.iter().all(|i| i.norm() <= bound) {
            complete_primes.push(p);
        }
        factor_base.extend(above.into_iter().filter(|i| i.norm() <= bound));
    }
    factor_base.sort_by_key(|i| (i.norm(), i.p));
    let k = factor_base.len();
    let h_estimate = (order.degree() == 2).then(|| analytic_class_number(order, cfg.euler_bound));
    let mut result = ClassGroupResult {
        spec: order.spec(),
        disc,
        group: AbelianGroupStructure::trivial(),
        status: OracleStatus::Certified,
        relations: RelationMatrix {
            factor_base,
            relations: Vec::new(),
        },
        trials: 0,
        h_estimate,
    };
    if k == 0 {
        return Ok(result);
    }
    let fb = &result.relations.factor_base;
    let fb_primes: Vec<u64> = {
        let mut v: Vec<u64> = fb.iter().map(|i| i.p).collect();
        v.dedup();
        v
    };
    let mut hnf = HnfBasis::new(k);
    let mut rels = Vec::new();
    for &p in &complete_primes {
        let exps: Vec<i64> = fb
            .iter()
            .map(|i| if i.p == p { i.e as i64 } else { 0 })
            .collect();
        hnf.insert(&exps);
        rels.push(Relation {
            exponents: exps,
            witness: order.from_int(p as i128),
        });
    }

    let gram = order.t2_gram();
    let short_bases: Vec<Vec<Vec<i128>>> = fb
        .iter()
        .map(|ideal| {
            let mut b = ideal.basis().to_vec();
            let d = b.len();
            let g: Vec<Vec<f64>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let mut s = 0.0;
                            for a in 0..d {
                                for c in 0..d {
                                    s += b[i][a] as f64 * gram[a][c] * b[j][c] as f64;
                                }
                            }
                            s
                        })
                        .collect()
                })
                .collect();
            // Reduce the coefficient vectors, then map back to order coordinates.
            let mut coeffs: Vec<Vec<i128>> = (0..d)
                .map(|i| (0..d).map(|j| i128::from(i == j)).collect())
                .collect();
            lll(&mut coeffs, &g);
            let out = coeffs
                .iter()
                .map(|c| {
                    (0..d)
                        .map(|l| (0..d).map(|i| c[i] * b[i][l]).sum())
                        .collect()
                })
                .collect();
            b.clear();
            out
        })
        .collect();

    let mut rng =
        ChaCha8Rng::seed_from_u64(cfg.seed ^ (disc as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut last_ranks: Option<(usize, usize)> = None;
    let mut stable_run = 0usize;
    let mut current: Option<Vec<BigInt>> = None;
    let d = order.degree();
    let mut trials = 0u64;
    let mut settled = false;
    while !settled && trials < cfg.max_trials {
        trials += 1;
        let t = (trials as usize) % k;
        let box_ = cfg.coefficient_bound + (trials / (256 * k as u64)).min(64) as i64;
        let mut x: Elt = [0; 4];
        for row in &short_bases[t] {
            let c = rng.gen_range(-box_..=box_) as i128;
            for l in 0..d {
                x[l] += c * row[l];
            }
        }
        if x.iter().all(|&c| c == 0) {
            continue;
        }
        let Some(exps) = smooth_exponents(order, fb, &fb_primes, &x) else {
            continue;
        };
        let changed = hnf.insert(&exps);
        rels.push(Relation {
            exponents: exps,
            witness: x,
        });
        if !hnf.is_full_rank() {
            continue;
        }
        if changed || current.is_none() {
            current = Some(smith_diagonal(&hnf.nontrivial_block()));
        }
        let diag = current.as_ref().unwrap();
        if let Some(h_est) = h_estimate {
            let h_tent = hnf.determinant().unwrap().to_f64().unwrap_or(f64::INFINITY);
            if h_tent < std::f64::consts::SQRT_2 * h_est {
                result.group = to_group(diag).expect("certified order fits");
                result.status = OracleStatus::Certified;
                settled = true;
            }
        } else {
            let ranks = (count_div(diag, 2), count_div(diag, 4));
            if last_ranks == Some(ranks) {
                stable_run += 1;
            } else {
                last_ranks = Some(ranks);
                stable_run = 0;
            }
            if stable_run >= cfg.stability_factor * k {
                if let Some(g) = to_group(diag) {
                    result.group = g;
                    result.status = OracleStatus::Stable;
                    settled = true;
                }
            }
        }
    }
    result.trials = trials;
    result.relations.relations = rels;
    if !settled {
        let partial = current.as_ref().and_then(|d| to_group(d));
        return Err(Error::Resource {
            msg: format!(
                "class group of {} not settled after {trials} element trials",
                order.spec()
            ),
            partial,
        });
    }
    Ok(result)
}

fn count_div(diag: &[BigInt], m: u32) -> usize {
    diag.iter().filter(|x| (*x % m).to_u32() == Some(0)).count()
}

fn to_group(diag: &[BigInt]) -> Option<AbelianGroupStructure> {
    let orders: Option<Vec<u64>> = diag
        .iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64())
        .collect();
    let orders = orders?;
    orders.iter().try_fold(1u64, |acc, &o| acc.checked_mul(o))?;
    Some(AbelianGroupStructure::from_cyclic_orders(&orders))
}

/// Exponent vector of `(x)` over the factor base, if it factors completely.
fn smooth_exponents(
    order: &NumberFieldOrder,
    fb: &[PrimeIdeal],
    primes: &[u64],
    x: &Elt,
) -> Option<Vec<i64>> {
    let mut n = order.norm(x)?.unsigned_abs();
    if n == 0 {
        return None;
    }
    let mut vp = Vec::new();
    for &p in primes {
        let p = p as u128;
        let mut v = 0u32;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        if v > 0 {
            vp.push((p as u64, v));
        }
    }
    if n != 1 {
        return None;
    }
    let mut exps = vec![0i64; fb.len()];
    for (p, v) in vp {
        let mut sum = 0;
        for (i, ideal) in fb.iter().enumerate().filter(|(_, i)| i.p == p) {
            let w = ideal.valuation(order, x)?;
            exps[i] = w as i64;
            sum += w * ideal.f;
        }
        if sum != v {
            // Some prime above p lies outside the factor base.
            return None;
        }
    }
    Some(exps)
}

fn euler_primes(bound: u64) -> Vec<u64> {
    static DEFAULT: OnceLock<Vec<u64>> = OnceLock::new();
    if bound == ClassGroupConfig::default().euler_bound {
        DEFAULT.get_or_init(|| primes_up_to(bound)).clone()
    } else {
        primes_up_to(bound)
    }
}

/// Class number formula with a truncated Euler product for `L(1, chi_D)`.
pub fn analytic_class_number(order: &NumberFieldOrder, euler_bound: u64) -> f64 {
    let disc = order.discriminant();
    assert_eq!(order.degree(), 2);
    let mut l = 1.0f64;
    for p in euler_primes(euler_bound) {
        let chi = kronecker(disc, p as i128) as f64;
        l *= 1.0 / (1.0 - chi / p as f64);
    }
    let sd = (disc.unsigned_abs() as f64).sqrt();
    if disc < 0 {
        let w = match disc {
            -3 => 6.0,
            -4 => 4.0,
            _ => 2.0,
        };
        w * sd / (2.0 * std::f64::consts::PI) * l
    } else {
        let reg = crate::quadfield::fundamental_unit(disc as i64).log(disc as i64);
        sd * l / (2.0 * reg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(z: i64) -> AbelianGroupStructure {
        class_group(
            &NumberFieldOrder::quadratic(z).unwrap(),
            &ClassGroupConfig::default(),
        )
        .unwrap()
        .group
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(cg(-23).to_string(), "[3]");
        assert_eq!(cg(-1).to_string(), "[]");
        assert_eq!(cg(-5).to_string(), "[2]");
        assert_eq!(cg(-47).to_string(), "[5]");
        assert_eq!(cg(-21).to_string(), "[2;2]");
        assert_eq!(cg(10).to_string(), "[2]");
        assert_eq!(cg(79).to_string(), "[3]");
        assert_eq!(cg(5).to_string(), "[]");
    }

    #[test]
    fn witnesses_verify() {
        let o = NumberFieldOrder::maximal_order(-1, 21).unwrap();
        let r = class_group(&o, &ClassGroupConfig::default()).unwrap();
        r.relations.verify(&o).unwrap();
        assert_eq!(r.status, OracleStatus::Stable);
    }

    #[test]
    fn disc_bound_is_domain_error() {
        let cfg = ClassGroupConfig {
            max_abs_disc_quadratic: 10,
            ..Default::default()
        };
        assert!(
            class_group(&NumberFieldOrder::quadratic(-23).unwrap(), &cfg)
                .unwrap_err()
                .is_domain()
        );
    }

    #[test]
    fn budget_is_resource_error() {
        let cfg = ClassGroupConfig {
            max_trials: 3,
            ..Default::default()
        };
        let e = class_group(&NumberFieldOrder::quadratic(-3299).unwrap(), &cfg).unwrap_err();
        assert!(e.is_resource());
    }
}
