use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

type Mat2<T> = [[T; 2]; 2];

/// Both sides of the five-term decomposition of
/// `[[1 + m^2 a, m b], [m c, 1 + m^2 d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumIdentityCheck {
    pub holds: bool,
    pub lhs: Mat2<BigInt>,
    pub rhs: Mat2<BigInt>,
    /// The summands after the scalar one; each has determinant 1.
    pub terms: Vec<Mat2<BigInt>>,
}

fn add2<T: Clone + Add<Output = T>>(x: &Mat2<T>, y: &Mat2<T>) -> Mat2<T> {
    [
        [x[0][0].clone() + y[0][0].clone(), x[0][1].clone() + y[0][1].clone()],
        [x[1][0].clone() + y[1][0].clone(), x[1][1].clone() + y[1][1].clone()],
    ]
}

/// `(lhs, scalar coefficient, the four non-scalar summands)`.
#[allow(clippy::type_complexity)]
fn sides<T>(m: &T, a: &T, b: &T, c: &T, d: &T, k: impl Fn(i64) -> T) -> (Mat2<T>, T, [Mat2<T>; 4])
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let m2 = m.clone() * m.clone();
    let one = k(1);
    let zero = k(0);
    let lhs = [
        [one.clone() + m2.clone() * a.clone(), m.clone() * b.clone()],
        [m.clone() * c.clone(), one.clone() + m2.clone() * d.clone()],
    ];
    let scalar = k(2) * m2.clone() - k(3);
    let t1 = [
        [one.clone(), m.clone() * (b.clone() - k(2))],
        [zero.clone(), one.clone()],
    ];
    let t2 = [
        [one.clone(), zero.clone()],
        [m.clone() * (c.clone() - a.clone() - d.clone() + k(4)), one.clone()],
    ];
    let t3 = [
        [one.clone() + m2.clone() * (a.clone() - k(2)), m.clone()],
        [m.clone() * (a.clone() - k(2)), one.clone()],
    ];
    let t4 = [
        [one.clone(), m.clone()],
        [m.clone() * (d.clone() - k(2)), one + m2 * (d.clone() - k(2))],
    ];
    (lhs, scalar, [t1, t2, t3, t4])
}

fn rhs_of<T>(scalar: T, terms: &[Mat2<T>; 4], k: impl Fn(i64) -> T) -> Mat2<T>
where
    T: Clone + Add<Output = T>,
{
    let s = [[scalar.clone(), k(0)], [k(0), scalar]];
    terms.iter().fold(s, |acc, t| add2(&acc, t))
}

/// Exact evaluation of both sides for one integer tuple.
pub fn verify_sum_identity(m: i64, a: i64, b: i64, c: i64, d: i64) -> SumIdentityCheck {
    let big = |v: i64| BigInt::from(v);
    let (lhs, scalar, terms) = sides(&big(m), &big(a), &big(b), &big(c), &big(d), big);
    let rhs = rhs_of(scalar, &terms, big);
    let dets_ok = terms
        .iter()
        .all(|t| &t[0][0] * &t[1][1] - &t[0][1] * &t[1][0] == BigInt::from(1));
    SumIdentityCheck {
        holds: lhs == rhs && dets_ok,
        lhs,
        rhs,
        terms: terms.to_vec(),
    }
}

/// Polynomial in `m, a, b, c, d` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly(BTreeMap<[u32; 5], BigInt>);

impl Poly {
    fn constant(c: i64) -> Self {
        Poly(BTreeMap::from([([0; 5], BigInt::from(c))])).trimmed()
    }

    fn var(k: usize) -> Self {
        let mut e = [0; 5];
        e[k] = 1;
        Poly(BTreeMap::from([(e, BigInt::from(1))]))
    }

    fn trimmed(mut self) -> Self {
        self.0.retain(|_, c| !c.is_zero());
        self
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.0 {
            *self.0.entry(e).or_insert_with(BigInt::zero) += c;
        }
        self.trimmed()
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.0 {
            *self.0.entry(e).or_insert_with(BigInt::zero) -= c;
        }
        self.trimmed()
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out: BTreeMap<[u32; 5], BigInt> = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &rhs.0 {
                let mut e = *e1;
                for k in 0..5 {
                    e[k] += e2[k];
                }
                *out.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        Poly(out).trimmed()
    }
}

/// Entrywise equality of both sides as polynomials in `Z[m, a, b, c, d]`,
/// and determinant 1 for every non-scalar summand.
pub fn sum_identity_symbolic() -> bool {
    let v: Vec<Poly> = (0..5).map(Poly::var).collect();
    let (lhs, scalar, terms) = sides(&v[0], &v[1], &v[2], &v[3], &v[4], Poly::constant);
    let rhs = rhs_of(scalar, &terms, Poly::constant);
    let dets_ok = terms
        .iter()
        .all(|t| t[0][0].clone() * t[1][1].clone() - t[0][1].clone() * t[1][0].clone() == Poly::constant(1));
    lhs == rhs && dets_ok
}
