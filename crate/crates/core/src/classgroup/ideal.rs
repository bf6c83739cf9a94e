//! Prime ideals of an order via homomorphisms to finite fields.

use std::fmt;

use super::lattice::{hnf_lower_i128, inv_mod, nullspace_mod_p};
use super::order::{Elt, NumberFieldOrder};
use crate::arith::legendre;

/// `F_p` or `F_{p^2} = F_p(t)` with `t^2 = nr` (odd `p`) or `t^2 = t + 1` (`p = 2`).
#[derive(Clone, Copy, Debug)]
struct Fq {
    p: u64,
    nr: u64,
}

type Fe = (u64, u64);

impl Fq {
    fn new(p: u64) -> Self {
        let nr = if p == 2 {
            0
        } else {
            (2..p)
                .find(|&a| legendre(a as i128, p as u128) == -1)
                .unwrap()
        };
        Fq { p, nr }
    }

    fn red(&self, x: i128) -> u64 {
        x.rem_euclid(self.p as i128) as u64
    }

    fn add(&self, x: Fe, y: Fe) -> Fe {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    fn scale(&self, c: i128, x: Fe) -> Fe {
        let c = self.red(c) as u128;
        let p = self.p as u128;
        ((c * x.0 as u128 % p) as u64, (c * x.1 as u128 % p) as u64)
    }

    fn mul(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p as u128;
        let (a, b, c, d) = (x.0 as u128, x.1 as u128, y.0 as u128, y.1 as u128);
        if self.p == 2 {
            (
                (((a * c) + (b * d)) % 2) as u64,
                ((a * d + b * c + b * d) % 2) as u64,
            )
        } else {
            (
                ((a * c + b * d % p * self.nr as u128) % p) as u64,
                ((a * d + b * c) % p) as u64,
            )
        }
    }

    fn frobenius(&self, x: Fe) -> Fe {
        if self.p == 2 {
            ((x.0 + x.1) % 2, x.1)
        } else {
            (x.0, (self.p - x.1) % self.p)
        }
    }

    fn elements(&self) -> Vec<Fe> {
        (0..self.p)
            .flat_map(|a| (0..self.p).map(move |b| (a, b)))
            .collect()
    }

    /// Both square roots of `r in F_p`, in `F_{p^2}` (odd `p`).
    fn sqrt(&self, r: u64) -> Fe {
        let p = self.p;
        if r == 0 {
            return (0, 0);
        }
        if legendre(r as i128, p as u128) == 1 {
            (sqrt_mod(r, p), 0)
        } else {
            // (s t)^2 = s^2 nr = r
            let q = r as u128 * inv_mod(self.nr, p) as u128 % p as u128;
            (0, sqrt_mod(q as u64, p))
        }
    }
}

/// Tonelli-Shanks for a quadratic residue `a` modulo an odd prime `p`.
fn sqrt_mod(a: u64, p: u64) -> u64 {
    use crate::arith::factor::pow_mod;
    let (a, pp) = (a as u128 % p as u128, p as u128);
    if a == 0 {
        return 0;
    }
    let mut q = pp - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..pp)
        .find(|&z| pow_mod(z, (pp - 1) / 2, pp) == pp - 1)
        .unwrap();
    let mut m = s;
    let mut c = pow_mod(z, q, pp);
    let mut t = pow_mod(a, q, pp);
    let mut r = pow_mod(a, q.div_ceil(2), pp);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % pp;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), pp);
        m = i;
        c = b * b % pp;
        t = t * c % pp;
        r = r * b % pp;
    }
    r as u64
}

/// A prime ideal `P` above `p`, with residue degree `f` and ramification index `e`.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// Generator with `P = (p, pi)`.
    pub pi: Elt,
    /// `beta in (pO : P) \ pO`, used for valuations.
    beta: Elt,
    /// Z-basis (lower-triangular HNF rows in integral-basis coordinates).
    basis: Vec<Vec<i128>>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn basis(&self) -> &[Vec<i128>] {
        &self.basis
    }

    /// `v_P(x)` for nonzero `x`; `None` if an intermediate overflows.
    pub fn valuation(&self, order: &NumberFieldOrder, x: &Elt) -> Option<u32> {
        assert!(x.iter().any(|&c| c != 0), "valuation of zero");
        let p = self.p as i128;
        let mut a = *x;
        let mut v = 0;
        loop {
            let t = order.mul(&a, &self.beta)?;
            if t.iter().all(|c| c % p == 0) {
                a = t.map(|c| c / p);
                v += 1;
            } else {
                return Some(v);
            }
        }
    }

    /// Membership test via the HNF basis.
    pub fn contains(&self, x: &Elt) -> bool {
        let d = self.basis.len();
        let mut t: Vec<i128> = x[..d].to_vec();
        for c in (0..d).rev() {
            if t[c] % self.basis[c][c] != 0 {
                return false;
            }
            let q = t[c] / self.basis[c][c];
            for l in 0..=c {
                t[l] -= q * self.basis[c][l];
            }
        }
        true
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?}) e={} f={}", self.p, self.pi, self.e, self.f)
    }
}

/// All prime ideals above `p`, with `sum e f = degree`.
pub fn factor_prime(order: &NumberFieldOrder, p: u64) -> Vec<PrimeIdeal> {
    let fq = Fq::new(p);
    let d = order.degree();
    let homs = homomorphisms(order, &fq);
    // One representative per Frobenius orbit.
    let mut reps: Vec<(Vec<Fe>, u32)> = Vec::new();
    for h in homs {
        let conj: Vec<Fe> = h.iter().map(|&x| fq.frobenius(x)).collect();
        if reps.iter().any(|(r, _)| *r == h || *r == conj) {
            continue;
        }
        let f = if h.iter().all(|x| x.1 == 0) { 1 } else { 2 };
        reps.push((h, f));
    }
    let mut ideals: Vec<PrimeIdeal> = reps
        .into_iter()
        .map(|(h, f)| {
            let mut rows = vec![h.iter().map(|x| x.0).collect::<Vec<u64>>()];
            if f == 2 {
                rows.push(h.iter().map(|x| x.1).collect());
            }
            let kernel = nullspace_mod_p(&rows, d, p);
            // Stack the multiplication matrices of the kernel generators mod p.
            let mut stack = Vec::new();
            for g in &kernel {
                let m = order.regular_matrix(&to_elt(g)).expect("small generator");
                stack.extend(
                    m.iter()
                        .map(|r| r.iter().map(|&x| fq.red(x)).collect::<Vec<u64>>()),
                );
            }
            let beta = to_elt(&nullspace_mod_p(&stack, d, p)[0]);
            let mut gens: Vec<Vec<i128>> = (0..d)
                .map(|i| (0..d).map(|j| if i == j { p as i128 } else { 0 }).collect())
                .collect();
            gens.extend(
                kernel
                    .iter()
                    .map(|g| g.iter().map(|&x| x as i128).collect()),
            );
            let basis = hnf_lower_i128(&gens, d);
            let mut ideal = PrimeIdeal {
                p,
                e: 0,
                f,
                pi: [0; 4],
                beta,
                basis,
            };
            ideal.e = ideal
                .valuation(order, &order.from_int(p as i128))
                .expect("small");
            ideal
        })
        .collect();
    let snapshot = ideals.clone();
    for (idx, ideal) in ideals.iter_mut().enumerate() {
        ideal.pi = two_element_generator(order, &snapshot, idx);
    }
    debug_assert_eq!(ideals.iter().map(|i| i.e * i.f).sum::<u32>() as usize, d);
    ideals
}

fn to_elt(v: &[u64]) -> Elt {
    let mut e = [0i128; 4];
    for (x, y) in e.iter_mut().zip(v) {
        *x = *y as i128;
    }
    e
}

/// Ring homomorphisms `O -> F_{p^2}` as images of the integral basis.
fn homomorphisms(order: &NumberFieldOrder, fq: &Fq) -> Vec<Vec<Fe>> {
    let d = order.degree();
    let p = fq.p;
    let check = |img: &[Fe]| -> bool {
        for i in 0..d {
            for j in i..d {
                let lhs = fq.mul(img[i], img[j]);
                let t = order.mult_table(i, j);
                let mut rhs = (0, 0);
                for l in 0..d {
                    rhs = fq.add(rhs, fq.scale(t[l], img[l]));
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    };
    let mut out: Vec<Vec<Fe>> = Vec::new();
    if p == 2 {
        let els = fq.elements();
        let mut idx = vec![0usize; d - 1];
        loop {
            let mut img = vec![(1, 0)];
            img.extend(idx.iter().map(|&i| els[i]));
            if check(&img) && !out.contains(&img) {
                out.push(img);
            }
            let mut k = 0;
            while k < d - 1 {
                idx[k] += 1;
                if idx[k] < els.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == d - 1 {
                break;
            }
        }
        return out;
    }
    let roots: Vec<Fe> = order
        .radicands()
        .iter()
        .map(|&r| fq.sqrt(fq.red(r as i128)))
        .collect();
    let inv4 = inv_mod(4 % p, p) as i128;
    for signs in 0..(1u32 << (d - 1)) {
        let rad: Vec<Fe> = (0..d)
            .map(|i| {
                if i == 0 {
                    (1, 0)
                } else if signs >> (i - 1) & 1 == 1 {
                    fq.scale(-1, roots[i])
                } else {
                    roots[i]
                }
            })
            .collect();
        let img: Vec<Fe> = order
            .integral_basis()
            .iter()
            .map(|b| {
                let mut s = (0, 0);
                for c in 0..d {
                    s = fq.add(s, fq.scale(b[c] as i128, rad[c]));
                }
                fq.scale(inv4, s)
            })
            .collect();
        if check(&img) && !out.contains(&img) {
            out.push(img);
        }
    }
    out
}

fn two_element_generator(order: &NumberFieldOrder, ideals: &[PrimeIdeal], idx: usize) -> Elt {
    let me = &ideals[idx];
    let d = order.degree();
    let p = me.p as i128;
    let good = |x: &Elt| -> bool {
        if x.iter().all(|&c| c == 0) {
            return false;
        }
        ideals
            .iter()
            .enumerate()
            .all(|(j, q)| match q.valuation(order, x) {
                Some(v) if j == idx => v == 1,
                Some(v) => v == 0,
                None => false,
            })
    };
    // Small combinations of the ideal's Z-basis.
    for bound in 1..=3i128 {
        let width = (2 * bound + 1) as usize;
        let total = width.pow(d as u32);
        for code in 0..total {
            let mut c = code;
            let mut x = [0i128; 4];
            for row in &me.basis {
                let k = (c % width) as i128 - bound;
                c /= width;
                for l in 0..d {
                    x[l] += k * row[l];
                }
            }
            if good(&x) {
                return x;
            }
        }
    }
    // Unreachable in practice; p itself generates when P is the only prime above p.
    [p, 0, 0, 0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(o: &NumberFieldOrder, p: u64) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = factor_prime(o, p).iter().map(|i| (i.e, i.f)).collect();
        v.sort();
        v
    }

    #[test]
    fn gaussian_integers() {
        let o = NumberFieldOrder::quadratic(-1).unwrap();
        assert_eq!(pattern(&o, 5), vec![(1, 1), (1, 1)]);
        assert_eq!(pattern(&o, 2), vec![(2, 1)]);
        assert_eq!(pattern(&o, 3), vec![(1, 2)]);
    }

    #[test]
    fn biquadratic_patterns() {
        let o = NumberFieldOrder::maximal_order(-1, 3).unwrap();
        // 7 is inert in Q(i) and Q(sqrt 3), split in Q(sqrt -3).
        assert_eq!(pattern(&o, 7), vec![(1, 2), (1, 2)]);
        assert_eq!(pattern(&o, 2), vec![(2, 2)]);
        assert_eq!(pattern(&o, 3), vec![(2, 2)]);
        assert_eq!(pattern(&o, 13), vec![(1, 1); 4]);
    }

    #[test]
    fn generators_and_membership() {
        let o = NumberFieldOrder::maximal_order(-1, 5).unwrap();
        for p in [2u64, 3, 5, 7, 29, 41] {
            for ideal in factor_prime(&o, p) {
                assert!(ideal.contains(&ideal.pi));
                assert!(ideal.contains(&o.from_int(p as i128)));
                assert!(!ideal.contains(&o.one()));
                assert_eq!(ideal.valuation(&o, &ideal.pi), Some(1));
            }
        }
    }

    #[test]
    fn sqrt_mod_small() {
        for p in [3u64, 5, 7, 13, 17, 41, 97] {
            for a in 1..p {
                if legendre(a as i128, p as u128) == 1 {
                    let r = sqrt_mod(a, p);
                    assert_eq!(r * r % p, a);
                }
            }
        }
    }
}
