//! Local conditions, candidate character sets and the Selmer dimension formula.
//!
//! A quadratic character `chi_d` of `Q` is represented by the squarefree integer `d`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{
    f2_rank, hilbert_symbol, is_local_square, is_squarefree, kronecker, prime_divisors,
    square_class, unramified_representative, Place,
};

use crate::classgroup::AbelianGroupStructure;
use crate::error::{Error, Result};
use crate::quadfield::{disc_of_sqrt, QuadraticField, SplittingType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalKind {
    Zero,
    Unramified,
    UnramifiedPlusChiK,
    ChiNPlusChiK,
    Full,
}

/// The subspace `L'_{v,n}` of `H^1(G_{Q_v}, Z/2) = Q_v^* / Q_v^*2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalConditionSpace {
    pub place: Place,
    pub kind: LocalKind,
    pub dim: usize,
    /// Integers whose local square classes span the space.
    pub generators: Vec<i128>,
}

impl LocalConditionSpace {
    /// Whether `chi_d` is orthogonal to the space under the Hilbert pairing.
    pub fn is_orthogonal(&self, d: i128) -> Result<bool> {
        for &g in &self.generators {
            if hilbert_symbol(d, g, self.place)? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `chi_d` restricted to `Q_v` lies in the space.
    pub fn contains(&self, d: i128) -> Result<bool> {
        let target = square_class(d, self.place)?;
        let gens: Vec<u8> = self
            .generators
            .iter()
            .map(|&g| square_class(g, self.place))
            .collect::<Result<_>>()?;
        let mut with = gens.clone();
        with.push(target);
        Ok(f2_rank(&with) == f2_rank(&gens))
    }
}

/// A finite set of characters `chi_d`, with the `(field, n)` it was built for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCharacterSet {
    pub z: i64,
    pub n: i64,
    pub members: BTreeSet<i64>,
}

impl QuadCharacterSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1 && self.members.contains(&1)
    }

    pub fn contains(&self, d: i64) -> bool {
        self.members.contains(&d)
    }
}

impl fmt::Display for QuadCharacterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// Which of the two candidate sets: the corestriction image or the dual Selmer group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    X,
    Y,
}

impl Variant {
    pub fn sign(self) -> i64 {
        match self {
            Variant::X => 1,
            Variant::Y => -1,
        }
    }
}

/// Rejects `n` unless it is squarefree and `K(sqrt n)` is quartic.
pub fn check_n(field: &QuadraticField, n: i64) -> Result<()> {
    if n == 0 || !is_squarefree(n) {
        return Err(Error::domain(format!(
            "n = {n} is not a nonzero squarefree integer"
        )));
    }
    if n == 1 || n == field.z() {
        return Err(Error::domain(format!(
            "K(sqrt {n}) = K for K = Q(sqrt {}); not quartic",
            field.z()
        )));
    }
    Ok(())
}

/// `L'_{v,n}` at a place `v` of `Q`.
pub fn local_condition(field: &QuadraticField, n: i64, v: Place) -> Result<LocalConditionSpace> {
    check_n(field, n)?;
    let z = field.z() as i128;
    let n128 = n as i128;
    let (kind, generators) = match v {
        Place::Infinity if field.is_real() => (LocalKind::Zero, vec![]),
        Place::Infinity => (LocalKind::Full, vec![-1]),
        Place::Prime(p) => {
            if !crate::arith::is_prime(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            let n_square_in_kw = is_local_square(n128, v)? || is_local_square(n128 * z, v)?;
            let ramified_in_k = field.disc() as i128 % p as i128 == 0;
            match (n_square_in_kw, ramified_in_k) {
                (true, true) => (
                    LocalKind::UnramifiedPlusChiK,
                    vec![unramified_representative(v)?, z],
                ),
                (true, false) => (LocalKind::Unramified, vec![unramified_representative(v)?]),
                (false, _) => (LocalKind::ChiNPlusChiK, vec![n128, z]),
            }
        }
    };
    let classes: Vec<u8> = generators
        .iter()
        .map(|&g| square_class(g, v))
        .collect::<Result<_>>()?;
    Ok(LocalConditionSpace {
        place: v,
        kind,
        dim: f2_rank(&classes),
        generators,
    })
}

/// Places where `L'_{v,n}` can differ from the unramified line: `inf`, 2 and odd `p | Delta n`.
pub fn relevant_places(field: &QuadraticField, n: i64) -> Vec<Place> {
    let mut primes: BTreeSet<u64> = prime_divisors(field.disc()).into_iter().collect();
    primes.extend(prime_divisors(n));
    primes.insert(2);
    std::iter::once(Place::Infinity)
        .chain(primes.into_iter().map(|p| Place::Prime(p as u128)))
        .collect()
}

/// `L'_{v,n}` at every relevant place.
pub fn local_condition_table(field: &QuadraticField, n: i64) -> Result<Vec<LocalConditionSpace>> {
    relevant_places(field, n)
        .into_iter()
        .map(|v| local_condition(field, n, v))
        .collect()
}

/// Squarefree `d` (both signs) dividing `2 Delta n`, ascending.
fn divisors_of_2dn(field: &QuadraticField, n: i64) -> Vec<i64> {
    let mut ps: BTreeSet<u64> = prime_divisors(field.disc()).into_iter().collect();
    ps.extend(prime_divisors(n));
    ps.insert(2);
    let ps: Vec<u64> = ps.into_iter().collect();
    let mut out = Vec::with_capacity(2 << ps.len());
    for mask in 0u32..(1 << ps.len()) {
        let d: i64 = ps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p as i64)
            .product();
        out.push(d);
        out.push(-d);
    }
    out.sort_unstable();
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Whether `d` passes the merged odd-prime conditions for the given variant.
pub fn passes_conditions(field: &QuadraticField, n: i64, d: i64, variant: Variant) -> bool {
    let delta = field.disc();
    let g = gcd(d, n);
    let twisted = variant.sign() as i128 * (d / g) as i128 * (n / g) as i128;
    for p in prime_divisors(d) {
        if (2 * delta) % p as i64 == 0 {
            continue;
        }
        if field.splitting(p) != SplittingType::Split {
            return false;
        }
        if kronecker(twisted, p as i128) != 1 {
            return false;
        }
    }
    for p in prime_divisors(n) {
        if (2 * delta) % p as i64 == 0 || d % p as i64 == 0 {
            continue;
        }
        if kronecker(d as i128, p as i128) != 1 {
            return false;
        }
    }
    true
}

fn candidates(field: &QuadraticField, n: i64, variant: Variant) -> Result<QuadCharacterSet> {
    check_n(field, n)?;
    let members = divisors_of_2dn(field, n)
        .into_iter()
        .filter(|&d| passes_conditions(field, n, d, variant))
        .collect();
    Ok(QuadCharacterSet {
        z: field.z(),
        n,
        members,
    })
}

/// Candidate superset of `X_n`, the corestriction image.
pub fn xn_candidates(field: &QuadraticField, n: i64) -> Result<QuadCharacterSet> {
    candidates(field, n, Variant::X)
}

/// Candidate superset of the dual Selmer group `Y_n`, from the explicit condition list.
pub fn yn_candidates(field: &QuadraticField, n: i64) -> Result<QuadCharacterSet> {
    candidates(field, n, Variant::Y)
}

/// The same candidate superset of `Y_n`, computed as the set of `d | 2 Delta n` orthogonal
/// to `L'_{p,n}` under the Hilbert pairing at every odd `p` not dividing `Delta`.
pub fn yn_candidates_dual(field: &QuadraticField, n: i64) -> Result<QuadCharacterSet> {
    check_n(field, n)?;
    let delta = field.disc();
    let mut members = BTreeSet::new();
    'd: for d in divisors_of_2dn(field, n) {
        let mut ps: BTreeSet<u64> = prime_divisors(d).into_iter().collect();
        ps.extend(prime_divisors(n));
        for p in ps {
            if p == 2 || delta % p as i64 == 0 {
                continue;
            }
            let space = local_condition(field, n, Place::Prime(p as u128))?;
            if !space.is_orthogonal(d as i128)? {
                continue 'd;
            }
        }
        members.insert(d);
    }
    Ok(QuadCharacterSet {
        z: field.z(),
        n,
        members,
    })
}

/// Whether both candidate sets are `{1}`, so that `X_n` and `Y_n` are trivial.
pub fn is_generic(field: &QuadraticField, n: i64) -> Result<bool> {
    Ok(xn_candidates(field, n)?.is_trivial() && yn_candidates(field, n)?.is_trivial())
}

/// `dim Sel_{chi_n}(G_K, Z/2) = omega(Delta) - 1 + omega_inert(Delta_n) - [K real]`.
///
/// Only valid when both candidate sets are trivial; otherwise an error reports their sizes.
pub fn sel_dim_formula(field: &QuadraticField, n: i64) -> Result<usize> {
    let x = xn_candidates(field, n)?;
    let y = yn_candidates(field, n)?;
    if !x.is_trivial() || !y.is_trivial() {
        return Err(Error::domain(format!(
            "n = {n} is not generic for K = Q(sqrt {}): candidate sets have sizes {} and {}; \
             use the candidate sets directly",
            field.z(),
            x.len(),
            y.len()
        )));
    }
    sel_dim_unchecked(field, n)
}

fn sel_dim_unchecked(field: &QuadraticField, n: i64) -> Result<usize> {
    let dn = disc_of_sqrt(n)?;
    let base = crate::arith::omega(field.disc()) - 1 + field.omega_inert_of(dn);
    Ok(base - usize::from(field.is_real()))
}

/// The closed-form 4-rank
/// `omega_inert(Delta_n) + omega(Delta) + rk2 Cl(K) - (3 if K real else 2)`.
///
/// The value is signed: for non-generic `n` it can be `-1`.
pub fn predicted_rk4(field: &QuadraticField, n: i64) -> Result<i64> {
    check_n(field, n)?;
    let cl = field.class_group().ok_or_else(|| {
        Error::State(format!(
            "Cl(K) for K = Q(sqrt {}) has not been computed",
            field.z()
        ))
    })?;
    predicted_rk4_with(field, n, cl)
}

fn predicted_rk4_with(field: &QuadraticField, n: i64, cl: &AbelianGroupStructure) -> Result<i64> {
    let dn = disc_of_sqrt(n)?;
    let w = field.omega_inert_of(dn) as i64
        + crate::arith::omega(field.disc()) as i64
        + cl.rk2() as i64;
    Ok(w - if field.is_real() { 3 } else { 2 })
}

/// Outcome of comparing `rk4 Cl(K(sqrt n))` with `dim Sel_{chi_n} + rk2 Cl(K) - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: i64,
    pub generic: bool,
    pub x_size: usize,
    pub y_size: usize,
    /// `None` for non-generic `n`.
    pub formula_side: Option<i64>,
    pub oracle_rk4: usize,
    pub agrees: Option<bool>,
}

pub fn generic_identity_check(
    field: &QuadraticField,
    n: i64,
    oracle: &AbelianGroupStructure,
) -> Result<IdentityReport> {
    let cl = field.class_group().ok_or_else(|| {
        Error::State(format!(
            "Cl(K) for K = Q(sqrt {}) has not been computed",
            field.z()
        ))
    })?;
    let x = xn_candidates(field, n)?;
    let y = yn_candidates(field, n)?;
    let generic = x.is_trivial() && y.is_trivial();
    let formula_side = if generic {
        Some(sel_dim_unchecked(field, n)? as i64 + cl.rk2() as i64 - 1)
    } else {
        None
    };
    let oracle_rk4 = oracle.rk4();
    Ok(IdentityReport {
        n,
        generic,
        x_size: x.len(),
        y_size: y.len(),
        formula_side,
        oracle_rk4,
        agrees: formula_side.map(|f| f == oracle_rk4 as i64),
    })
}
