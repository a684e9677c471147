//! Commutative rings with unit and their exact elements.
//!
//! Four concrete rings are supported: the integers, the residue rings
//! `Z/m`, polynomial rings `F_p[x]` over a prime field, and the
//! localizations `Z[1/p]`. Every element carries its parent ring and is
//! stored in a canonical form, so structural equality is value equality.

mod gcd;
mod ideal;
pub(crate) mod poly;

pub use gcd::extended_gcd;
pub use ideal::{ideal_membership, Ideal};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("elements belong to different rings ({left} vs {right})")]
    MismatchedRings { left: RingSpec, right: RingSpec },
    #[error("operation `{op}` is not supported over {ring}")]
    UnsupportedRing { ring: RingSpec, op: &'static str },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("an ideal needs at least one generator")]
    EmptyIdeal,
}

/// Which ring an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Integers,
    IntegersMod(u64),
    PolyOverFp(u64),
    LocalizedIntegers(u64),
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_prime(p: u64) -> Result<u64, RingError> {
    if p < (1 << 32) && is_prime(p) {
        Ok(p)
    } else {
        Err(RingError::NotPrime(p))
    }
}

impl RingSpec {
    pub fn integers() -> Self {
        RingSpec::Integers
    }

    pub fn integers_mod(m: u64) -> Result<Self, RingError> {
        if m < 2 {
            return Err(RingError::InvalidModulus(m));
        }
        if m >= (1 << 32) {
            return Err(RingError::Parse {
                input: m.to_string(),
                reason: "modulus must stay below 2^32".into(),
            });
        }
        Ok(RingSpec::IntegersMod(m))
    }

    /// The prime field `F_p`, modelled as `Z/p`.
    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        checked_prime(p).map(RingSpec::IntegersMod)
    }

    pub fn poly_over_fp(p: u64) -> Result<Self, RingError> {
        checked_prime(p).map(RingSpec::PolyOverFp)
    }

    pub fn localized(p: u64) -> Result<Self, RingError> {
        checked_prime(p).map(RingSpec::LocalizedIntegers)
    }

    /// Integral domains: everything except `Z/m` with composite `m`.
    pub fn is_domain(&self) -> bool {
        match *self {
            RingSpec::IntegersMod(m) => is_prime(m),
            _ => true,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingSpec::IntegersMod(_))
    }

    /// Number of elements for finite rings.
    pub fn order(&self) -> Option<u64> {
        match *self {
            RingSpec::IntegersMod(m) => Some(m),
            _ => None,
        }
    }

    /// All elements of a finite ring in increasing residue order.
    pub fn elements(&self) -> Option<Vec<RingElement>> {
        let m = self.order()?;
        Some((0..m).map(|r| self.residue(r)).collect())
    }

    pub fn zero(&self) -> RingElement {
        self.int(0)
    }

    pub fn one(&self) -> RingElement {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> RingElement {
        self.from_bigint(&BigInt::from(v))
    }

    /// Image of an integer under the canonical map `Z -> R`.
    pub fn from_bigint(&self, v: &BigInt) -> RingElement {
        let repr = match *self {
            RingSpec::Integers => Repr::Int(v.clone()),
            RingSpec::IntegersMod(m) => Repr::Residue(reduce_mod(v, m)),
            RingSpec::PolyOverFp(p) => Repr::Poly(poly::trim(vec![reduce_mod(v, p)])),
            RingSpec::LocalizedIntegers(p) => normalize_local(v.clone(), 0, p),
        };
        RingElement { ring: *self, repr }
    }

    fn residue(&self, r: u64) -> RingElement {
        RingElement {
            ring: *self,
            repr: Repr::Residue(r),
        }
    }

    /// Polynomial from ascending coefficients (reduced mod p).
    pub fn poly(&self, coeffs: &[i64]) -> Result<RingElement, RingError> {
        match *self {
            RingSpec::PolyOverFp(p) => Ok(RingElement {
                ring: *self,
                repr: Repr::Poly(poly::trim(
                    coeffs.iter().map(|&c| reduce_mod(&BigInt::from(c), p)).collect(),
                )),
            }),
            _ => Err(RingError::UnsupportedRing {
                ring: *self,
                op: "polynomial literal",
            }),
        }
    }

    /// `n * p^k` in `Z[1/p]`.
    pub fn local(&self, n: impl Into<BigInt>, k: i64) -> Result<RingElement, RingError> {
        match *self {
            RingSpec::LocalizedIntegers(p) => Ok(RingElement {
                ring: *self,
                repr: normalize_local(n.into(), k, p),
            }),
            _ => Err(RingError::UnsupportedRing {
                ring: *self,
                op: "localized literal",
            }),
        }
    }

    /// The variable `x` of `F_p[x]`.
    pub fn x(&self) -> Result<RingElement, RingError> {
        self.poly(&[0, 1])
    }

    pub fn parse_element(&self, s: &str) -> Result<RingElement, RingError> {
        let bad = |reason: &str| RingError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        match *self {
            RingSpec::Integers => s
                .parse::<BigInt>()
                .map(|v| self.from_bigint(&v))
                .map_err(|_| bad("expected a decimal integer")),
            RingSpec::IntegersMod(m) => {
                let r: u64 = s.parse().map_err(|_| bad("expected a residue"))?;
                if r >= m {
                    return Err(bad("residue out of range"));
                }
                Ok(self.residue(r))
            }
            RingSpec::PolyOverFp(p) => {
                let coeffs = s
                    .split(',')
                    .map(|c| c.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad("expected comma-separated coefficients"))?;
                if coeffs.iter().any(|&c| c >= p) {
                    return Err(bad("coefficient out of range"));
                }
                Ok(RingElement {
                    ring: *self,
                    repr: Repr::Poly(poly::trim(coeffs)),
                })
            }
            RingSpec::LocalizedIntegers(p) => {
                let (n, rest) = match s.split_once('*') {
                    Some(parts) => parts,
                    None => {
                        let v: BigInt = s.parse().map_err(|_| bad("expected n*p^k"))?;
                        return Ok(self.from_bigint(&v));
                    }
                };
                let (base, exp) = rest.split_once('^').ok_or_else(|| bad("expected n*p^k"))?;
                if base.trim().parse::<u64>().ok() != Some(p) {
                    return Err(bad("base must be the localized prime"));
                }
                let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
                let k: i64 = exp.trim().parse().map_err(|_| bad("bad exponent"))?;
                self.local(n, k)
            }
        }
    }

    /// Units tried by searches that need "some unit": the whole unit group
    /// for `Z/m`, `{1, -1}` for `Z`, nonzero constants for `F_p[x]`, and
    /// `±p^k` with `|k| <= max_exp` for `Z[1/p]`.
    pub fn unit_candidates(&self, max_exp: i64) -> Vec<RingElement> {
        match *self {
            RingSpec::Integers => vec![self.int(1), self.int(-1)],
            RingSpec::IntegersMod(m) => (1..m).filter(|r| r.gcd(&m) == 1).map(|r| self.residue(r)).collect(),
            RingSpec::PolyOverFp(p) => (1..p as i64).map(|c| self.int(c)).collect(),
            RingSpec::LocalizedIntegers(_) => {
                let mut out = Vec::new();
                for k in 0..=max_exp {
                    for e in if k == 0 { vec![0] } else { vec![k, -k] } {
                        for s in [1i64, -1] {
                            out.push(self.local(s, e).expect("localized ring"));
                        }
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::IntegersMod(m) => write!(f, "Z/{m}"),
            RingSpec::PolyOverFp(p) => write!(f, "F{p}[x]"),
            RingSpec::LocalizedIntegers(p) => write!(f, "Z[1/{p}]"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RingError::Parse {
            input: s.to_string(),
            reason: "expected Z, Z/<m>, F<p>[x] or Z[1/<p>]".to_string(),
        };
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        if s == "Z" {
            Ok(RingSpec::Integers)
        } else if let Some(p) = s.strip_prefix("Z[1/").and_then(|r| r.strip_suffix(']')) {
            RingSpec::localized(num(p)?)
        } else if let Some(m) = s.strip_prefix("Z/") {
            RingSpec::integers_mod(num(m)?)
        } else if let Some(p) = s.strip_prefix('F').and_then(|r| r.strip_suffix("[x]")) {
            RingSpec::poly_over_fp(num(p)?)
        } else {
            Err(bad())
        }
    }
}

fn reduce_mod(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

fn normalize_local(mut n: BigInt, mut k: i64, p: u64) -> Repr {
    if n.is_zero() {
        return Repr::Local(n, 0);
    }
    let pb = BigInt::from(p);
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        n = q;
        k += 1;
    }
    Repr::Local(n, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Int(BigInt),
    Residue(u64),
    Poly(Vec<u64>),
    /// `n * p^k` with `p` not dividing `n`; zero is `(0, 0)`.
    Local(BigInt, i64),
}

/// An element of a [`RingSpec`] in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingSpec,
    repr: Repr,
}

impl RingElement {
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Int(v) => v.is_zero(),
            Repr::Residue(r) => *r == 0,
            Repr::Poly(c) => c.is_empty(),
            Repr::Local(n, _) => n.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn same_ring(&self, other: &Self) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::MismatchedRings {
                left: self.ring,
                right: other.ring,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let repr = match (&self.repr, &other.repr, self.ring) {
            (Repr::Int(a), Repr::Int(b), _) => Repr::Int(a + b),
            (Repr::Residue(a), Repr::Residue(b), RingSpec::IntegersMod(m)) => {
                Repr::Residue(((*a as u128 + *b as u128) % m as u128) as u64)
            }
            (Repr::Poly(a), Repr::Poly(b), RingSpec::PolyOverFp(p)) => Repr::Poly(poly::add(a, b, p)),
            (Repr::Local(n1, k1), Repr::Local(n2, k2), RingSpec::LocalizedIntegers(p)) => {
                if n1.is_zero() {
                    return other.clone();
                }
                if n2.is_zero() {
                    return self.clone();
                }
                let k = (*k1).min(*k2);
                let pb = BigInt::from(p);
                let lift = |n: &BigInt, e: i64| n * num_traits::pow(pb.clone(), (e - k) as usize);
                normalize_local(lift(n1, *k1) + lift(n2, *k2), k, p)
            }
            _ => unreachable!("representation does not match ring"),
        };
        RingElement { ring: self.ring, repr }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let repr = match (&self.repr, &other.repr, self.ring) {
            (Repr::Int(a), Repr::Int(b), _) => Repr::Int(a * b),
            (Repr::Residue(a), Repr::Residue(b), RingSpec::IntegersMod(m)) => Repr::Residue(poly::mul_mod(*a, *b, m)),
            (Repr::Poly(a), Repr::Poly(b), RingSpec::PolyOverFp(p)) => Repr::Poly(poly::mul(a, b, p)),
            (Repr::Local(n1, k1), Repr::Local(n2, k2), RingSpec::LocalizedIntegers(p)) => {
                normalize_local(n1 * n2, k1 + k2, p)
            }
            _ => unreachable!("representation does not match ring"),
        };
        RingElement { ring: self.ring, repr }
    }

    pub fn neg(&self) -> Self {
        let repr = match (&self.repr, self.ring) {
            (Repr::Int(a), _) => Repr::Int(-a),
            (Repr::Residue(a), RingSpec::IntegersMod(m)) => Repr::Residue((m - a) % m),
            (Repr::Poly(a), RingSpec::PolyOverFp(p)) => Repr::Poly(poly::neg(a, p)),
            (Repr::Local(n, k), _) => Repr::Local(-n, *k),
            _ => unreachable!("representation does not match ring"),
        };
        RingElement { ring: self.ring, repr }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Inverse if the element is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let ring = self.ring;
        match (&self.repr, ring) {
            (Repr::Int(a), _) => (a.abs().is_one()).then(|| self.clone()),
            (Repr::Residue(a), RingSpec::IntegersMod(m)) => {
                let g = BigInt::from(*a).extended_gcd(&BigInt::from(m));
                g.gcd.is_one().then(|| ring.from_bigint(&g.x))
            }
            (Repr::Poly(c), RingSpec::PolyOverFp(p)) => (c.len() == 1).then(|| RingElement {
                ring,
                repr: Repr::Poly(vec![poly::inv_mod_prime(c[0], p)]),
            }),
            (Repr::Local(n, k), _) => n.abs().is_one().then(|| RingElement {
                ring,
                repr: Repr::Local(n.clone(), -k),
            }),
            _ => unreachable!("representation does not match ring"),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    /// Some `k` with `divisor * k == self`, if one exists.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.ring, divisor.ring, "exact_div across rings");
        if self.is_zero() {
            return Some(self.ring.zero());
        }
        if divisor.is_zero() {
            return None;
        }
        let ring = self.ring;
        match (&self.repr, &divisor.repr, ring) {
            (Repr::Int(a), Repr::Int(b), _) => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(RingElement {
                    ring,
                    repr: Repr::Int(q),
                })
            }
            (Repr::Residue(a), Repr::Residue(b), RingSpec::IntegersMod(m)) => {
                // b*k = a (mod m) is solvable iff gcd(b, m) | a.
                let g = b.gcd(&m);
                if a % g != 0 {
                    return None;
                }
                let m2 = m / g;
                let inv = BigInt::from(b / g).extended_gcd(&BigInt::from(m2)).x;
                let k = BigInt::from(a / g) * inv;
                Some(ring.from_bigint(&k.mod_floor(&BigInt::from(m2))))
            }
            (Repr::Poly(a), Repr::Poly(b), RingSpec::PolyOverFp(p)) => {
                let (q, r) = poly::div_rem(a, b, p);
                r.is_empty().then_some(RingElement {
                    ring,
                    repr: Repr::Poly(q),
                })
            }
            (Repr::Local(n1, k1), Repr::Local(n2, k2), RingSpec::LocalizedIntegers(p)) => {
                let (q, r) = n1.div_rem(n2);
                r.is_zero().then(|| RingElement {
                    ring,
                    repr: normalize_local(q, k1 - k2, p),
                })
            }
            _ => unreachable!("representation does not match ring"),
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    /// Size used by Euclidean reduction: `|a|` over `Z`, the least
    /// nonnegative representative over `Z/m`, the degree plus one over
    /// `F_p[x]` (zero for the zero polynomial).
    pub fn euclid_norm(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Int(a) => Some(a.abs()),
            Repr::Residue(r) => Some(BigInt::from(*r)),
            Repr::Poly(c) => Some(BigInt::from(c.len())),
            Repr::Local(..) => None,
        }
    }

    /// Euclidean quotient and remainder with `norm(rem) < norm(divisor)`.
    /// Over `Z/m` the division is carried out on representatives in `[0, m)`.
    pub fn div_rem_euclid(&self, divisor: &Self) -> Result<(Self, Self), RingError> {
        assert_eq!(self.ring, divisor.ring);
        assert!(!divisor.is_zero(), "Euclidean division by zero");
        let ring = self.ring;
        match (&self.repr, &divisor.repr, ring) {
            (Repr::Int(a), Repr::Int(b), _) => {
                let (q, r) = a.div_mod_floor(b);
                Ok((ring.from_bigint(&q), ring.from_bigint(&r)))
            }
            (Repr::Residue(a), Repr::Residue(b), _) => Ok((ring.residue(a / b), ring.residue(a % b))),
            (Repr::Poly(a), Repr::Poly(b), RingSpec::PolyOverFp(p)) => {
                let (q, r) = poly::div_rem(a, b, p);
                Ok((
                    RingElement {
                        ring,
                        repr: Repr::Poly(q),
                    },
                    RingElement {
                        ring,
                        repr: Repr::Poly(r),
                    },
                ))
            }
            _ => Err(RingError::UnsupportedRing {
                ring,
                op: "Euclidean division",
            }),
        }
    }

    /// The integer value over `Z`.
    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Int(v) => Some(v),
            _ => None,
        }
    }

    /// The representative in `[0, m)` over `Z/m`.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Residue(r) => Some(*r),
            _ => None,
        }
    }

    /// Ascending coefficients over `F_p[x]`.
    pub fn as_poly(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Poly(c) => Some(c),
            _ => None,
        }
    }

    /// `(n, k)` with `self = n * p^k` over `Z[1/p]`.
    pub fn as_local(&self) -> Option<(&BigInt, i64)> {
        match &self.repr {
            Repr::Local(n, k) => Some((n, *k)),
            _ => None,
        }
    }

    /// Canonical associate: the preferred generator of the principal ideal
    /// `self * R` (nonnegative integer, divisor of `m`, monic polynomial,
    /// positive `p`-free integer).
    pub fn normalized_associate(&self) -> Self {
        let ring = self.ring;
        match (&self.repr, ring) {
            (Repr::Int(a), _) => ring.from_bigint(&a.abs()),
            (Repr::Residue(a), RingSpec::IntegersMod(m)) => ring.residue(a.gcd(&m) % m),
            (Repr::Poly(c), RingSpec::PolyOverFp(p)) => RingElement {
                ring,
                repr: Repr::Poly(poly::monic(c, p)),
            },
            (Repr::Local(n, _), _) => RingElement {
                ring,
                repr: Repr::Local(n.abs(), 0),
            },
            _ => unreachable!("representation does not match ring"),
        }
    }

    /// Key for deterministic tie-breaking among elements of the same ring.
    pub fn sort_key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.repr, self.ring) {
            (Repr::Int(v), _) => write!(f, "{v}"),
            (Repr::Residue(r), _) => write!(f, "{r}"),
            (Repr::Poly(c), _) => {
                if c.is_empty() {
                    write!(f, "0")
                } else {
                    let parts: Vec<String> = c.iter().map(u64::to_string).collect();
                    write!(f, "{}", parts.join(","))
                }
            }
            (Repr::Local(n, k), RingSpec::LocalizedIntegers(p)) => write!(f, "{n}*{p}^{k}"),
            _ => unreachable!("representation does not match ring"),
        }
    }
}

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ring, self.euclid_norm(), self.to_string()).cmp(&(other.ring, other.euclid_norm(), other.to_string()))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> std::ops::$trait<&'a RingElement> for &'a RingElement {
            type Output = RingElement;
            /// Panics if the operands live in different rings; use the
            /// `checked_*` methods for fallible arithmetic.
            fn $method(self, rhs: &'a RingElement) -> RingElement {
                assert_eq!(self.ring, rhs.ring, "ring mismatch");
                $body(self, rhs)
            }
        }
        impl std::ops::$trait<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &RingElement, b: &RingElement| a.add_unchecked(b));
binop!(Sub, sub, |a: &RingElement, b: &RingElement| a.add_unchecked(&b.neg()));
binop!(Mul, mul, |a: &RingElement, b: &RingElement| a.mul_unchecked(b));

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(self)
    }
}

impl std::ops::Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(&self)
    }
}

/// `a op b` with parent checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn ring_arith(a: &RingElement, b: &RingElement, op: ArithOp) -> Result<RingElement, RingError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

/// Inverse of `e` if it is a unit.
pub fn unit_check(e: &RingElement) -> Option<RingElement> {
    e.inverse()
}
