//! Integer linear algebra: incremental Hermite normal form, Smith normal form,
//! small exact helpers over `i128` and `F_p`, and LLL reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style upper-triangular HNF of a sublattice of `Z^k`, grown one vector at a time.
///
/// Row `i` (when present) has its pivot in column `i`, zeros before it, and every
/// entry above a pivot is reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HnfBasis {
    rows: Vec<Option<Vec<BigInt>>>,
}

impl HnfBasis {
    pub fn new(dim: usize) -> Self {
        HnfBasis {
            rows: vec![None; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Product of the pivots once the lattice has full rank: the index `[Z^k : L]`.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_full_rank() {
            return None;
        }
        Some(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.as_ref().unwrap()[i].clone())
                .product(),
        )
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.rows.iter().flatten()
    }

    /// Adds `v` to the generating set. Returns whether the lattice changed.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim());
        let det = self.determinant();
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        if let Some(d) = &det {
            // d * Z^k lies inside a full-rank lattice of index d.
            for x in v.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
        let mut changed = false;
        for i in 0..self.dim() {
            if v[i].is_zero() {
                continue;
            }
            match self.rows[i].take() {
                None => {
                    if v[i].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows[i] = Some(std::mem::take(&mut v));
                    changed = true;
                    break;
                }
                Some(mut r) => {
                    if v[i].is_multiple_of(&r[i]) {
                        let q = &v[i] / &r[i];
                        axpy(&mut v, &q, &r, i);
                    } else {
                        let e = r[i].extended_gcd(&v[i]);
                        let (a, b) = (r[i].clone() / &e.gcd, v[i].clone() / &e.gcd);
                        let mut new_r = Vec::with_capacity(r.len());
                        let mut new_v = Vec::with_capacity(r.len());
                        for j in 0..r.len() {
                            new_r.push(&e.x * &r[j] + &e.y * &v[j]);
                            new_v.push(&a * &v[j] - &b * &r[j]);
                        }
                        r = new_r;
                        v = new_v;
                        if r[i].is_negative() {
                            r.iter_mut().for_each(|x| *x = -&*x);
                        }
                        changed = true;
                    }
                    self.rows[i] = Some(r);
                }
            }
        }
        if changed {
            self.reduce();
        }
        changed
    }

    fn reduce(&mut self) {
        let k = self.dim();
        for i in 0..k {
            let Some(ri) = self.rows[i].clone() else {
                continue;
            };
            for j in 0..i {
                if let Some(rj) = self.rows[j].as_mut() {
                    let q = rj[i].div_floor(&ri[i]);
                    if !q.is_zero() {
                        axpy(rj, &q, &ri, i);
                    }
                }
            }
        }
    }

    /// Square matrix of the HNF restricted to rows and columns whose pivot exceeds 1.
    ///
    /// The cokernel of the full basis equals the cokernel of this block.
    pub fn nontrivial_block(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_full_rank());
        let idx: Vec<usize> = (0..self.dim())
            .filter(|&i| !self.rows[i].as_ref().unwrap()[i].is_one())
            .collect();
        idx.iter()
            .map(|&i| {
                let r = self.rows[i].as_ref().unwrap();
                idx.iter().map(|&j| r[j].clone()).collect()
            })
            .collect()
    }
}

/// `v -= q * r` on entries `from..`.
fn axpy(v: &mut [BigInt], q: &BigInt, r: &[BigInt], from: usize) {
    for j in from..v.len() {
        v[j] -= q * &r[j];
    }
}

/// Nonzero elementary divisors `e_1 | e_2 | ...` of an integer matrix.
///
/// Elimination pivots on an entry of minimal absolute value.
pub fn smith_diagonal(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Minimal nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                let pivot_row = a[t].clone();
                axpy(&mut a[i], &q, &pivot_row, t);
                clean &= a[i][t].is_zero();
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                clean &= a[t][j].is_zero();
            }
        }
        if !clean {
            continue;
        }
        // Pivot must divide the rest; otherwise fold an offending row into row t.
        let p = a[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
        if let Some(i) = bad {
            let row = a[i].clone();
            for j in t..cols {
                a[t][j] += &row[j];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Lower-triangular HNF over `i128`: row `i` is zero past column `i`, has a positive
/// pivot at `i`, and entries left of a pivot are reduced into `[0, pivot)`.
///
/// The generators must span a full-rank lattice of `Z^d`.
pub(crate) fn hnf_lower_i128(gens: &[Vec<i128>], d: usize) -> Vec<Vec<i128>> {
    let mut pool: Vec<Vec<i128>> = gens
        .iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let mut out = vec![vec![0i128; d]; d];
    for c in (0..d).rev() {
        // gcd-combine everything on column c into a single row.
        loop {
            let mut nz: Vec<usize> = (0..pool.len()).filter(|&i| pool[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| pool[i][c].abs());
            let piv = pool[nz[0]].clone();
            for &i in &nz[1..] {
                let q = pool[i][c].div_euclid(piv[c]);
                for j in 0..d {
                    pool[i][j] -= q * piv[j];
                }
            }
        }
        let pos = (0..pool.len())
            .find(|&i| pool[i][c] != 0)
            .expect("lattice not of full rank");
        let mut r = pool.swap_remove(pos);
        if r[c] < 0 {
            r.iter_mut().for_each(|x| *x = -*x);
        }
        pool.retain(|g| g.iter().any(|&x| x != 0));
        out[c] = r;
    }
    for i in 0..d {
        for j in (0..i).rev() {
            let q = out[i][j].div_euclid(out[j][j]);
            if q != 0 {
                let rj = out[j].clone();
                for k in 0..d {
                    out[i][k] -= q * rj[k];
                }
            }
        }
    }
    out
}

/// Determinant by fraction-free Gaussian elimination; `None` on overflow.
pub(crate) fn det_i128(m: &[Vec<i128>]) -> Option<i128> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Some(0);
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Basis of the right nullspace `{x : M x = 0}` over `F_p`.
pub(crate) fn nullspace_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(s) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, s);
        let inv = inv_mod(a[r][c], p);
        a[r].iter_mut().for_each(|x| *x = *x * inv % p);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..ncols {
                    a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; ncols];
            x[f] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                x[c] = (p - a[i][f]) % p;
            }
            x
        })
        .collect()
}

/// Rank over `F_p` of an integer matrix.
pub fn rank_mod_p(m: &[Vec<BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let rows: Vec<Vec<u64>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| u64::try_from(x.mod_floor(&pb)).unwrap())
                .collect()
        })
        .collect();
    let ncols = rows.first().map_or(0, Vec::len);
    ncols - nullspace_mod_p(&rows, ncols, p).len()
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(p as i128) as u64
}

/// LLL reduction (`delta = 0.99`) of integer row vectors under the Gram form `gram`.
///
/// Gram-Schmidt data lives in `f64`; the basis itself stays exact.
pub(crate) fn lll(basis: &mut [Vec<i128>], gram: &[Vec<f64>]) {
    let n = basis.len();
    let ip = |u: &[i128], v: &[i128]| -> f64 {
        let mut s = 0.0;
        for i in 0..u.len() {
            for j in 0..v.len() {
                s += u[i] as f64 * gram[i][j] * v[j] as f64;
            }
        }
        s
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        let (mu, bstar) = gram_schmidt(basis, &ip);
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as i128;
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, _) = gram_schmidt(basis, &ip);
        if bstar[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

fn gram_schmidt(
    basis: &[Vec<i128>],
    ip: &dyn Fn(&[i128], &[i128]) -> f64,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = basis.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        bstar[i] = ip(&basis[i], &basis[i]);
        for j in 0..i {
            let mut s = ip(&basis[i], &basis[j]);
            for l in 0..j {
                s -= mu[j][l] * mu[i][l] * bstar[l];
            }
            mu[i][j] = s / bstar[j];
            bstar[i] -= mu[i][j] * mu[i][j] * bstar[j];
        }
    }
    (mu, bstar)
}
