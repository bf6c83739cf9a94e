use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::lattice::{det_i128, hnf_lower_i128};
use crate::arith::is_squarefree;
use crate::error::{Error, Result};
use crate::quadfield::disc_of_sqrt;

/// Element of an order, in coordinates of its integral basis (unused tail entries are 0).
pub type Elt = [i128; 4];

/// Which field an order belongs to: `Q(sqrt z)` or `Q(sqrt m, sqrt n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Quadratic(i64),
    Biquadratic(i64, i64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Quadratic(z) => write!(f, "{z}"),
            FieldSpec::Biquadratic(m, n) => write!(f, "{m}:{n}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::domain(format!("bad field spec {s:?}")))
        };
        match s.split_once(':') {
            Some((m, n)) => Ok(FieldSpec::Biquadratic(parse(m)?, parse(n)?)),
            None => Ok(FieldSpec::Quadratic(parse(s)?)),
        }
    }
}

impl FieldSpec {
    pub fn order(&self) -> Result<NumberFieldOrder> {
        match *self {
            FieldSpec::Quadratic(z) => NumberFieldOrder::quadratic(z),
            FieldSpec::Biquadratic(m, n) => NumberFieldOrder::maximal_order(m, n),
        }
    }
}

/// The maximal order of a quadratic or biquadratic field.
///
/// Internally the field is spanned by radicals `e_0 = 1, e_1, e_2, e_3` with
/// `e_i^2 = sq[i]` and `e_i e_j = c e_k`; the integral basis `w_i` is stored as
/// numerators over 4 in those coordinates.
#[derive(Clone, Debug)]
pub struct NumberFieldOrder {
    spec: FieldSpec,
    degree: usize,
    sq: [i64; 4],
    prod: [[(i64, usize); 4]; 4],
    basis: Vec<[i64; 4]>,
    mult: Vec<Vec<Elt>>,
    disc: i128,
    subfield_discs: Vec<i64>,
    r2: usize,
}

impl NumberFieldOrder {
    /// Ring of integers of `Q(sqrt z)`.
    pub fn quadratic(z: i64) -> Result<Self> {
        let d = disc_of_sqrt(z)?;
        let mut prod = [[(0, 0); 4]; 4];
        prod[0] = [(1, 0), (1, 1), (0, 0), (0, 0)];
        prod[1] = [(1, 1), (z, 0), (0, 0), (0, 0)];
        Self::build(
            FieldSpec::Quadratic(z),
            2,
            [1, z, 0, 0],
            prod,
            vec![d],
            usize::from(z < 0),
        )
    }

    /// Ring of integers of `Q(sqrt m, sqrt n)`.
    pub fn maximal_order(m: i64, n: i64) -> Result<Self> {
        if !is_squarefree(m) || !is_squarefree(n) {
            return Err(Error::domain(format!("{m}, {n} must be squarefree")));
        }
        let g = m.gcd(&n);
        let k = (m / g) * (n / g);
        if m == 1 || n == 1 || k == 1 || m == n {
            return Err(Error::domain(format!(
                "Q(sqrt {m}, sqrt {n}) is not quartic"
            )));
        }
        let d = vec![disc_of_sqrt(m)?, disc_of_sqrt(n)?, disc_of_sqrt(k)?];
        // e3 = sqrt(m) sqrt(n) / g
        let prod = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (m, 0), (g, 3), (m / g, 2)],
            [(1, 2), (g, 3), (n, 0), (n / g, 1)],
            [(1, 3), (m / g, 2), (n / g, 1), (k, 0)],
        ];
        let r2 = if m < 0 || n < 0 { 2 } else { 0 };
        Self::build(FieldSpec::Biquadratic(m, n), 4, [1, m, n, k], prod, d, r2)
    }

    fn build(
        spec: FieldSpec,
        degree: usize,
        sq: [i64; 4],
        prod: [[(i64, usize); 4]; 4],
        subfield_discs: Vec<i64>,
        r2: usize,
    ) -> Result<Self> {
        let mut gens: Vec<Vec<i128>> = (0..degree)
            .map(|i| (0..degree).map(|j| if i == j { 4 } else { 0 }).collect())
            .collect();
        let total = 4usize.pow(degree as u32);
        for code in 1..total {
            let a: Vec<i64> = (0..degree)
                .map(|i| ((code >> (2 * i)) & 3) as i64)
                .collect();
            if quarter_is_integral(&a, &prod, degree) {
                gens.push(a.iter().map(|&x| x as i128).collect());
            }
        }
        let h = hnf_lower_i128(&gens, degree);
        let basis: Vec<[i64; 4]> = h
            .iter()
            .map(|r| {
                let mut b = [0i64; 4];
                for (x, y) in b.iter_mut().zip(r) {
                    *x = *y as i64;
                }
                b
            })
            .collect();
        debug_assert_eq!(basis[0][0], 4);
        let mut ord = NumberFieldOrder {
            spec,
            degree,
            sq,
            prod,
            basis,
            mult: Vec::new(),
            disc: 0,
            subfield_discs,
            r2,
        };
        ord.mult = (0..degree)
            .map(|i| (0..degree).map(|j| ord.basis_product(i, j)).collect())
            .collect();
        let tr: Vec<i128> = (0..degree)
            .map(|l| degree as i128 * ord.basis[l][0] as i128 / 4)
            .collect();
        let gram: Vec<Vec<i128>> = (0..degree)
            .map(|i| {
                (0..degree)
                    .map(|j| (0..degree).map(|l| ord.mult[i][j][l] * tr[l]).sum())
                    .collect()
            })
            .collect();
        ord.disc = det_i128(&gram).expect("discriminant fits in i128");
        Ok(ord)
    }

    /// `w_i w_j` in basis coordinates.
    fn basis_product(&self, i: usize, j: usize) -> Elt {
        let d = self.degree;
        let mut p = [0i128; 4];
        for a in 0..d {
            for b in 0..d {
                let (c, k) = self.prod[a][b];
                p[k] += (self.basis[i][a] * self.basis[j][b] * c) as i128;
            }
        }
        // p is over 16; solve sum y_l B_l = p / 4 on the lower-triangular basis.
        for x in p.iter_mut() {
            assert_eq!(*x % 4, 0, "basis not closed under multiplication");
            *x /= 4;
        }
        let mut y = [0i128; 4];
        for c in (0..d).rev() {
            let piv = self.basis[c][c] as i128;
            assert_eq!(p[c] % piv, 0, "basis not closed under multiplication");
            y[c] = p[c] / piv;
            for l in 0..=c {
                p[l] -= y[c] * self.basis[c][l] as i128;
            }
        }
        y
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn discriminant(&self) -> i128 {
        self.disc
    }

    /// Discriminants of the quadratic subfields (one entry in the quadratic case).
    pub fn subfield_discriminants(&self) -> &[i64] {
        &self.subfield_discs
    }

    /// Number of pairs of complex embeddings.
    pub fn r2(&self) -> usize {
        self.r2
    }

    /// Integral basis as numerators over 4 in the radical coordinates `1, sqrt m, sqrt n, sqrt(mn)/g`.
    pub fn integral_basis(&self) -> &[[i64; 4]] {
        &self.basis
    }

    /// Squares of the radical coordinates.
    pub fn radicands(&self) -> &[i64] {
        &self.sq[..self.degree]
    }

    pub fn one(&self) -> Elt {
        [1, 0, 0, 0]
    }

    pub fn from_int(&self, a: i128) -> Elt {
        [a, 0, 0, 0]
    }

    pub fn basis_element(&self, i: usize) -> Elt {
        let mut e = [0; 4];
        e[i] = 1;
        e
    }

    pub(crate) fn mult_table(&self, i: usize, j: usize) -> &Elt {
        &self.mult[i][j]
    }

    /// Product; `None` if an intermediate overflows.
    pub fn mul(&self, x: &Elt, y: &Elt) -> Option<Elt> {
        let d = self.degree;
        let mut out = [0i128; 4];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0 {
                    continue;
                }
                let s = x[i].checked_mul(y[j])?;
                for l in 0..d {
                    let c = self.mult[i][j][l];
                    if c != 0 {
                        out[l] = out[l].checked_add(s.checked_mul(c)?)?;
                    }
                }
            }
        }
        Some(out)
    }

    /// Matrix of multiplication by `x`: column `j` holds `x w_j`.
    pub fn regular_matrix(&self, x: &Elt) -> Option<Vec<Vec<i128>>> {
        let d = self.degree;
        let mut m = vec![vec![0i128; d]; d];
        for j in 0..d {
            let col = self.mul(x, &self.basis_element(j))?;
            for l in 0..d {
                m[l][j] = col[l];
            }
        }
        Some(m)
    }

    /// Field norm of `x`; `None` on overflow.
    pub fn norm(&self, x: &Elt) -> Option<i128> {
        det_i128(&self.regular_matrix(x)?)
    }

    pub fn trace(&self, x: &Elt) -> i128 {
        (0..self.degree)
            .map(|l| x[l] * self.degree as i128 * self.basis[l][0] as i128 / 4)
            .sum()
    }

    /// Minkowski bound `d!/d^d (4/pi)^r2 sqrt|D|`.
    pub fn minkowski_bound(&self) -> f64 {
        let d = self.degree as f64;
        let fact: f64 = (1..=self.degree).map(|i| i as f64).product();
        fact / d.powi(self.degree as i32)
            * (4.0 / std::f64::consts::PI).powi(self.r2 as i32)
            * (self.disc.unsigned_abs() as f64).sqrt()
    }

    /// Gram matrix of the positive form `T2(x) = sum |sigma(x)|^2` on basis coordinates,
    /// up to the positive factor `d/16`.
    pub fn t2_gram(&self) -> Vec<Vec<f64>> {
        let d = self.degree;
        let w: Vec<f64> = (0..d).map(|c| self.sq[c].unsigned_abs() as f64).collect();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|c| w[c] * (self.basis[i][c] * self.basis[j][c]) as f64)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Whether `(sum a_i e_i)/4` is integral, via its characteristic polynomial.
fn quarter_is_integral(a: &[i64], prod: &[[(i64, usize); 4]; 4], d: usize) -> bool {
    // M = 4 * (matrix of multiplication by the element) in radical coordinates.
    let mut m = vec![vec![0i128; d]; d];
    for (i, &ai) in a.iter().enumerate() {
        for j in 0..d {
            let (c, k) = prod[i][j];
            m[k][j] += (ai * c) as i128;
        }
    }
    // Faddeev-LeVerrier: char poly of M is sum c_k x^k; the element's is c_k / 4^(d-k).
    let mut coeffs = vec![0i128; d + 1];
    coeffs[d] = 1;
    let mut mk = vec![vec![0i128; d]; d];
    for k in 1..=d {
        // mk = M * mk_prev + c_{d-k+1} I
        let mut next = vec![vec![0i128; d]; d];
        for i in 0..d {
            for j in 0..d {
                next[i][j] = (0..d).map(|l| m[i][l] * mk[l][j]).sum();
            }
            next[i][i] += coeffs[d - k + 1];
        }
        mk = next;
        let tr: i128 = (0..d)
            .map(|i| (0..d).map(|l| m[i][l] * mk[l][i]).sum::<i128>())
            .sum();
        coeffs[d - k] = -tr / k as i128;
    }
    (0..d).all(|k| coeffs[k] % 4i128.pow((d - k) as u32) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_orders() {
        assert_eq!(NumberFieldOrder::quadratic(-1).unwrap().discriminant(), -4);
        assert_eq!(NumberFieldOrder::quadratic(5).unwrap().discriminant(), 5);
        assert_eq!(
            NumberFieldOrder::quadratic(-23).unwrap().discriminant(),
            -23
        );
        assert_eq!(NumberFieldOrder::quadratic(-5).unwrap().discriminant(), -20);
    }

    #[test]
    fn quartic_examples() {
        for (m, n, d) in [(-1, -3, 144), (2, 3, 2304), (-1, 5, 400)] {
            let o = NumberFieldOrder::maximal_order(m, n).unwrap();
            assert_eq!(o.discriminant(), d, "{m}:{n}");
            let prod: i64 = o.subfield_discriminants().iter().product();
            assert_eq!(prod as i128, d);
        }
        assert!(NumberFieldOrder::maximal_order(-1, -1).is_err());
        assert!(NumberFieldOrder::maximal_order(2, 8).is_err());
        assert!(NumberFieldOrder::maximal_order(3, 12).is_err());
    }

    #[test]
    fn norms_and_traces() {
        let o = NumberFieldOrder::quadratic(-1).unwrap();
        assert_eq!(o.norm(&[3, 4, 0, 0]), Some(25));
        assert_eq!(o.trace(&[3, 4, 0, 0]), 6);
        let o = NumberFieldOrder::maximal_order(-1, 3).unwrap();
        assert_eq!(o.norm(&o.from_int(2)), Some(16));
        assert_eq!(o.trace(&o.one()), 4);
    }

    #[test]
    fn spec_parse() {
        assert_eq!(
            "-1:21".parse::<FieldSpec>().unwrap(),
            FieldSpec::Biquadratic(-1, 21)
        );
        assert_eq!("-5".parse::<FieldSpec>().unwrap(), FieldSpec::Quadratic(-5));
        assert_eq!(FieldSpec::Biquadratic(-1, 21).to_string(), "-1:21");
        assert!("x".parse::<FieldSpec>().is_err());
    }
}
