use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{poly, RingElement, RingError, RingSpec};

/// Integer Bezout: returns `(g, x, y)` with `g = x*a + y*b`, `g >= 0`.
fn int_xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Bezout over a list of integers.
fn int_list_xgcd(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = values[0].clone();
    let mut coeffs = vec![BigInt::one()];
    for v in &values[1..] {
        let (g2, x, y) = int_xgcd(&g, v);
        for c in coeffs.iter_mut() {
            *c = &*c * &x;
        }
        coeffs.push(y);
        g = g2;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -&*c;
        }
    }
    (g, coeffs)
}

fn poly_xgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut old_r, mut r) = (a.to_vec(), b.to_vec());
    let (mut old_s, mut s) = (vec![1], Vec::new());
    let (mut old_t, mut t) = (Vec::new(), vec![1]);
    while !r.is_empty() {
        let (q, rem) = poly::div_rem(&old_r, &r, p);
        old_r = std::mem::replace(&mut r, rem);
        let next_s = poly::sub(&old_s, &poly::mul(&q, &s, p), p);
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = poly::sub(&old_t, &poly::mul(&q, &t, p), p);
        old_t = std::mem::replace(&mut t, next_t);
    }
    (old_r, poly::trim(old_s), poly::trim(old_t))
}

/// Bezout witness for a nonempty list: `g = sum coeffs[i] * elems[i]`, where
/// `g` is the canonical generator of the ideal the list generates.
pub fn extended_gcd(elems: &[RingElement]) -> Result<(RingElement, Vec<RingElement>), RingError> {
    let first = elems.first().ok_or(RingError::EmptyIdeal)?;
    let ring = first.ring();
    if let Some(e) = elems.iter().find(|e| e.ring() != ring) {
        return Err(RingError::MismatchedRings {
            left: ring,
            right: e.ring(),
        });
    }
    match ring {
        RingSpec::Integers => {
            let ints: Vec<BigInt> = elems.iter().map(|e| e.as_bigint().unwrap().clone()).collect();
            let (g, c) = int_list_xgcd(&ints);
            Ok((ring.from_bigint(&g), c.iter().map(|x| ring.from_bigint(x)).collect()))
        }
        RingSpec::IntegersMod(m) => {
            // Work with integer lifts plus the modulus so that the gcd
            // comes out as the canonical divisor of m directly.
            let mut ints: Vec<BigInt> = elems.iter().map(|e| BigInt::from(e.as_residue().unwrap())).collect();
            ints.push(BigInt::from(m));
            let (g, mut c) = int_list_xgcd(&ints);
            c.pop();
            Ok((ring.from_bigint(&g), c.iter().map(|x| ring.from_bigint(x)).collect()))
        }
        RingSpec::PolyOverFp(p) => {
            let mut g = first.as_poly().unwrap().to_vec();
            let mut coeffs: Vec<Vec<u64>> = vec![vec![1]];
            for e in &elems[1..] {
                let (g2, x, y) = poly_xgcd(&g, e.as_poly().unwrap(), p);
                for c in coeffs.iter_mut() {
                    *c = poly::mul(c, &x, p);
                }
                coeffs.push(y);
                g = g2;
            }
            if let Some(&lc) = g.last() {
                let inv = poly::inv_mod_prime(lc, p);
                g = poly::scale(&g, inv, p);
                for c in coeffs.iter_mut() {
                    *c = poly::scale(c, inv, p);
                }
            }
            let lift = |c: &[u64]| {
                let signed: Vec<i64> = c.iter().map(|&v| v as i64).collect();
                ring.poly(&signed).expect("polynomial ring")
            };
            Ok((lift(&g), coeffs.iter().map(|c| lift(c)).collect()))
        }
        RingSpec::LocalizedIntegers(_) => {
            // Units are ±p^k: strip them, solve over Z, and put the p-powers
            // back into the coefficients.
            let parts: Vec<(BigInt, i64)> = elems
                .iter()
                .map(|e| {
                    let (n, k) = e.as_local().unwrap();
                    (n.clone(), k)
                })
                .collect();
            let ints: Vec<BigInt> = parts.iter().map(|(n, _)| n.clone()).collect();
            let (g, c) = int_list_xgcd(&ints);
            let coeffs = c
                .iter()
                .zip(&parts)
                .map(|(ci, (_, k))| ring.local(ci.clone(), -k).expect("localized ring"))
                .collect();
            Ok((ring.local(g, 0)?, coeffs))
        }
    }
}
