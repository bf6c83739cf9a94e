//! Positive definite binary quadratic forms of negative discriminant.

use num_integer::Integer;

use super::group::AbelianGroupStructure;
use crate::arith::{is_squarefree, prime_divisors};
use crate::error::{Error, Result};

/// The form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Form {
    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn identity(disc: i128) -> Form {
        let b = disc.rem_euclid(2);
        Form {
            a: 1,
            b,
            c: (b * b - disc) / 4,
        }
    }

    pub fn inverse(&self) -> Form {
        Form {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduced()
    }

    pub fn is_reduced(&self) -> bool {
        -self.a < self.b
            && self.b <= self.a
            && self.a <= self.c
            && !(self.a == self.c && self.b < 0)
    }

    fn normalized(self) -> Form {
        let Form { a, b, .. } = self;
        let two_a = 2 * a;
        let mut r = b.rem_euclid(two_a);
        if r > a {
            r -= two_a;
        }
        let disc = self.discriminant();
        Form {
            a,
            b: r,
            c: (r * r - disc) / (4 * a),
        }
    }

    pub fn reduced(self) -> Form {
        let mut f = self.normalized();
        while f.a > f.c {
            f = Form {
                a: f.c,
                b: -f.b,
                c: f.a,
            }
            .normalized();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    /// Gaussian composition followed by reduction.
    pub fn compose(&self, other: &Form) -> Form {
        let (f1, f2) = if self.a > other.a {
            (other, self)
        } else {
            (self, other)
        };
        let disc = f1.discriminant();
        let s = (f1.b + f2.b) / 2;
        let n = f2.b - s;
        let (y1, d) = if f2.a % f1.a == 0 {
            (0, f1.a)
        } else {
            let e = f2.a.extended_gcd(&f1.a);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = f1.a / d1;
        let v2 = f2.a / d1;
        let r = (y1 * y2 * n - x2 * f2.c).rem_euclid(v1);
        let b3 = f2.b + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        Form {
            a: a3,
            b: b3,
            c: c3,
        }
        .reduced()
    }

    pub fn pow(&self, mut e: u128) -> Form {
        let mut acc = Form::identity(self.discriminant());
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

/// Whether `d` is a fundamental discriminant.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => d != 1 && is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// All reduced primitive forms of discriminant `disc < 0`.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let d = disc as i128;
    let mut out = Vec::new();
    let mut a = 1i128;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 || (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            let f = Form { a, b, c };
            if f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

/// `Cl(Q(sqrt disc))` for a negative fundamental discriminant, via forms.
///
/// The `p`-part is read off from `log_p #G[p^j]` for each prime `p | h`.
pub fn class_group_forms(disc: i64) -> Result<AbelianGroupStructure> {
    if disc >= 0 || !is_fundamental_discriminant(disc) {
        return Err(Error::domain(format!(
            "{disc} is not a negative fundamental discriminant"
        )));
    }
    if disc < -10_000_000 {
        return Err(Error::domain(format!(
            "|{disc}| exceeds the forms oracle bound 10^7"
        )));
    }
    let forms = reduced_forms(disc);
    let h = forms.len() as u64;
    let orders: Vec<u64> = forms.iter().map(|f| element_order(f, h)).collect();
    let mut cyclic = Vec::new();
    for p in prime_divisors(h as i64) {
        // n_j = log_p #{x : x^(p^j) = 1}
        let mut counts = vec![0u32];
        let mut pj = 1u64;
        loop {
            pj *= p;
            let size = orders.iter().filter(|&&o| pj.is_multiple_of(o)).count();
            let n = ilog(size as u64, p);
            counts.push(n);
            if n == counts[counts.len() - 2] {
                counts.pop();
                break;
            }
        }
        // Number of cyclic factors of order >= p^j is n_j - n_{j-1}.
        let top = counts.len() - 1;
        for j in 1..=top {
            let ge_j = counts[j] - counts[j - 1];
            let ge_next = if j < top {
                counts[j + 1] - counts[j]
            } else {
                0
            };
            for _ in 0..(ge_j - ge_next) {
                cyclic.push(p.pow(j as u32));
            }
        }
    }
    Ok(AbelianGroupStructure::from_cyclic_orders(&cyclic))
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p, 0, "subgroup order is not a prime power");
        n /= p;
        k += 1;
    }
    k
}

fn element_order(f: &Form, h: u64) -> u64 {
    let id = Form::identity(f.discriminant());
    let mut ord = h;
    for q in prime_divisors(h as i64) {
        while ord.is_multiple_of(q) && f.pow((ord / q) as u128) == id {
            ord /= q;
        }
    }
    ord
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(d: i64) -> String {
        class_group_forms(d).unwrap().to_string()
    }

    #[test]
    fn small_groups() {
        assert_eq!(g(-3), "[]");
        assert_eq!(g(-4), "[]");
        assert_eq!(g(-20), "[2]");
        assert_eq!(g(-23), "[3]");
        assert_eq!(g(-47), "[5]");
        assert_eq!(g(-84), "[2;2]");
        assert_eq!(g(-56), "[4]");
        assert_eq!(g(-3299), "[3;9]");
        assert!(class_group_forms(-12).is_err());
        assert!(class_group_forms(5).is_err());
    }

    #[test]
    fn composition_laws() {
        let fs = reduced_forms(-3299);
        let id = Form::identity(fs[0].discriminant());
        for f in fs.iter().take(30) {
            assert_eq!(f.compose(&id), *f);
            assert_eq!(f.compose(&f.inverse()), id);
            for g in fs.iter().take(10) {
                assert_eq!(f.compose(g), g.compose(f));
                for h in fs.iter().take(5) {
                    assert_eq!(f.compose(g).compose(h), f.compose(&g.compose(h)));
                }
            }
        }
    }
}
