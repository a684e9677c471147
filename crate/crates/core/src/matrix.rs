//! Exact square matrices over a [`RingSpec`].
//!
//! Indices in the public API are 1-based (`get(1, 2)` is the entry in the
//! first row, second column), matching the usual `e_ij` notation.

use std::fmt;

use thiserror::Error;

use crate::ring::{Ideal, RingElement, RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("matrix dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrices live over different rings ({left} vs {right})")]
    MismatchedRings { left: RingSpec, right: RingSpec },
    #[error("matrix is not invertible (determinant {det} is not a unit)")]
    NotInvertible { det: String },
    #[error("bad elementary indices ({i},{j}) for dimension {n}")]
    BadIndices { i: usize, j: usize, n: usize },
    #[error("congruence level against the zero ideal is undefined")]
    ZeroIdeal,
    #[error("matrix text, line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqMatrix {
    ring: RingSpec,
    n: usize,
    entries: Vec<RingElement>,
}

impl SqMatrix {
    pub fn identity(ring: RingSpec, n: usize) -> Result<Self, MatrixError> {
        Self::scalar(ring, n, ring.one())
    }

    pub fn scalar(ring: RingSpec, n: usize, c: RingElement) -> Result<Self, MatrixError> {
        if n < 2 {
            return Err(MatrixError::DimensionTooSmall(n));
        }
        let mut entries = vec![ring.zero(); n * n];
        for k in 0..n {
            entries[k * n + k] = c.clone();
        }
        Ok(SqMatrix { ring, n, entries })
    }

    pub fn from_rows(ring: RingSpec, rows: Vec<Vec<RingElement>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n < 2 {
            return Err(MatrixError::DimensionTooSmall(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for e in row {
                if e.ring() != ring {
                    return Err(MatrixError::MismatchedRings {
                        left: ring,
                        right: e.ring(),
                    });
                }
                entries.push(e);
            }
        }
        Ok(SqMatrix { ring, n, entries })
    }

    /// Convenience constructor from integer rows (images under `Z -> R`).
    pub fn from_ints(ring: RingSpec, rows: &[&[i64]]) -> Result<Self, MatrixError> {
        Self::from_rows(
            ring,
            rows.iter().map(|r| r.iter().map(|&v| ring.int(v)).collect()).collect(),
        )
    }

    pub(crate) fn from_fn(ring: RingSpec, n: usize, f: impl Fn(usize, usize) -> RingElement) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SqMatrix { ring, n, entries }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "index out of range"
        );
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Entry `(r, c)`, 0-based.
    pub(crate) fn at(&self, r: usize, c: usize) -> &RingElement {
        &self.entries[r * self.n + c]
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: RingElement) {
        self.entries[r * self.n + c] = v;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<RingElement> {
        (1..=self.n).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<RingElement> {
        (1..=self.n).map(|i| self.get(i, j).clone()).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), MatrixError> {
        if self.ring != other.ring {
            return Err(MatrixError::MismatchedRings {
                left: self.ring,
                right: other.ring,
            });
        }
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.n;
        let zero = self.ring.zero();
        SqMatrix::from_fn(self.ring, n, |r, c| {
            (0..n).fold(zero.clone(), |acc, k| {
                let a = self.at(r, k);
                let b = other.at(k, c);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(a * b)
                }
            })
        })
    }

    pub fn transpose(&self) -> Self {
        SqMatrix::from_fn(self.ring, self.n, |r, c| self.at(c, r).clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar_with(&self.ring.one())
    }

    /// `c * I` for some `c`.
    pub fn is_scalar(&self) -> bool {
        self.is_scalar_with(self.at(0, 0))
    }

    fn is_scalar_with(&self, c: &RingElement) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|col| {
                let e = self.at(r, col);
                if r == col {
                    e == c
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Entries of `self - I`.
    pub fn minus_identity(&self) -> Vec<RingElement> {
        let one = self.ring.one();
        (0..self.n * self.n)
            .map(|k| {
                let e = &self.entries[k];
                if k / self.n == k % self.n {
                    e - &one
                } else {
                    e.clone()
                }
            })
            .collect()
    }

    pub fn determinant(&self) -> RingElement {
        if self.n <= 4 || !self.ring.is_domain() {
            cofactor_det(self.ring, self.n, &self.entries)
        } else {
            bareiss_det(self)
        }
    }

    /// Adjugate-based inverse; requires a unit determinant.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let det = self.determinant();
        let det_inv = det
            .inverse()
            .ok_or_else(|| MatrixError::NotInvertible { det: det.to_string() })?;
        let n = self.n;
        Ok(SqMatrix::from_fn(self.ring, n, |r, c| {
            // inv[r][c] = (-1)^{r+c} * minor(c, r) / det
            let minor: Vec<RingElement> = (0..n)
                .filter(|&rr| rr != c)
                .flat_map(|rr| (0..n).filter(move |&cc| cc != r).map(move |cc| (rr, cc)))
                .map(|(rr, cc)| self.at(rr, cc).clone())
                .collect();
            let m = if n == 2 {
                minor[0].clone()
            } else {
                SqMatrix {
                    ring: self.ring,
                    n: n - 1,
                    entries: minor,
                }
                .determinant()
            };
            let signed = if (r + c) % 2 == 0 { m } else { -m };
            &signed * &det_inv
        }))
    }

    pub fn is_invertible(&self) -> bool {
        self.determinant().is_unit()
    }

    /// Determinant equals one.
    pub fn is_special(&self) -> bool {
        self.determinant().is_one()
    }

    /// Elementary matrix `I + a e_ij` (1-based, `i != j`).
    pub fn elementary(ring: RingSpec, n: usize, i: usize, j: usize, a: RingElement) -> Result<Self, MatrixError> {
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(MatrixError::BadIndices { i, j, n });
        }
        if a.ring() != ring {
            return Err(MatrixError::MismatchedRings {
                left: ring,
                right: a.ring(),
            });
        }
        let mut m = SqMatrix::identity(ring, n)?;
        m.set(i - 1, j - 1, a);
        Ok(m)
    }

    /// If `self = I + a e_ij` with `a != 0`, returns `(i, j, a)`.
    pub fn as_elementary(&self) -> Option<(usize, usize, RingElement)> {
        let one = self.ring.one();
        let mut found = None;
        for r in 0..self.n {
            for c in 0..self.n {
                let e = self.at(r, c);
                if r == c {
                    if *e != one {
                        return None;
                    }
                } else if !e.is_zero() {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((r + 1, c + 1, e.clone()));
                }
            }
        }
        found
    }

    /// `[g, h] = g h g^-1 h^-1`.
    pub fn commutator(&self, h: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(h)?;
        let gi = self.inverse()?;
        let hi = h.inverse()?;
        Ok(&(&(self * h) * &gi) * &hi)
    }

    /// `s g s^-1`.
    pub fn conjugate_by(&self, s: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(s)?;
        let si = s.inverse()?;
        Ok(&(s * self) * &si)
    }

    /// Reduce every entry through `Z -> Z/m`, or `Z/m -> Z/d` for `d | m`.
    pub fn reduce_mod(&self, target: RingSpec) -> Option<Self> {
        let RingSpec::IntegersMod(d) = target else { return None };
        if let RingSpec::IntegersMod(m) = self.ring {
            if m % d != 0 {
                return None;
            }
        }
        let entries = self
            .entries
            .iter()
            .map(|e| match e.as_residue() {
                Some(r) => Some(target.int((r % d) as i64)),
                None => e.as_bigint().map(|v| target.from_bigint(v)),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(SqMatrix {
            ring: target,
            n: self.n,
            entries,
        })
    }

    /// Membership in `G1 = {[[gamma, v], [0, 1]]}`: last row is `e_n`.
    pub fn in_g1(&self) -> bool {
        let n = self.n;
        (0..n).all(|c| {
            let e = self.at(n - 1, c);
            if c == n - 1 {
                e.is_one()
            } else {
                e.is_zero()
            }
        })
    }

    /// Membership in `G2 = {[[1, v^T], [0, gamma]]}`: first column is `e_1`.
    pub fn in_g2(&self) -> bool {
        (0..self.n).all(|r| {
            let e = self.at(r, 0);
            if r == 0 {
                e.is_one()
            } else {
                e.is_zero()
            }
        })
    }

    /// Square block with rows and columns `from..from+size` (0-based).
    pub(crate) fn block(&self, from: usize, size: usize) -> Self {
        SqMatrix::from_fn(self.ring, size, |r, c| self.at(from + r, from + c).clone())
    }

    /// Plain-text form: `<n> <ring>` then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.ring);
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.at(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(MatrixError::Parse {
            line: 1,
            reason: "empty input".into(),
        })?;
        let (n, ring) = header.trim().split_once(' ').ok_or(MatrixError::Parse {
            line: hl + 1,
            reason: "expected `<n> <ring>`".into(),
        })?;
        let n: usize = n.parse().map_err(|_| MatrixError::Parse {
            line: hl + 1,
            reason: "bad dimension".into(),
        })?;
        let ring: RingSpec = ring.trim().parse()?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines.next().ok_or(MatrixError::Parse {
                line: hl + rows.len() + 2,
                reason: "missing row".into(),
            })?;
            let row = line
                .split_whitespace()
                .map(|tok| ring.parse_element(tok))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| MatrixError::Parse {
                    line: ln + 1,
                    reason: e.to_string(),
                })?;
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(MatrixError::Parse {
                line: ln + 1,
                reason: "trailing content".into(),
            });
        }
        SqMatrix::from_rows(ring, rows)
    }
}

impl<'a> std::ops::Mul<&'a SqMatrix> for &'a SqMatrix {
    type Output = SqMatrix;
    /// Panics on ring or dimension mismatch; see [`SqMatrix::try_mul`].
    fn mul(self, rhs: &'a SqMatrix) -> SqMatrix {
        self.try_mul(rhs).expect("incompatible matrices")
    }
}

impl fmt::Display for SqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|r| {
                let row: Vec<String> = (0..self.n).map(|c| self.at(r, c).to_string()).collect();
                row.join(" ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

fn cofactor_det(ring: RingSpec, n: usize, e: &[RingElement]) -> RingElement {
    match n {
        1 => e[0].clone(),
        2 => &(&e[0] * &e[3]) - &(&e[1] * &e[2]),
        _ => {
            let mut acc = ring.zero();
            for c in 0..n {
                if e[c].is_zero() {
                    continue;
                }
                let minor: Vec<RingElement> = (1..n)
                    .flat_map(|r| (0..n).filter(move |&cc| cc != c).map(move |cc| (r, cc)))
                    .map(|(r, cc)| e[r * n + cc].clone())
                    .collect();
                let term = &e[c] * &cofactor_det(ring, n - 1, &minor);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Fraction-free elimination; valid over integral domains only.
fn bareiss_det(m: &SqMatrix) -> RingElement {
    let n = m.n;
    let ring = m.ring;
    let mut a: Vec<Vec<RingElement>> = (0..n).map(|r| (0..n).map(|c| m.at(r, c).clone()).collect()).collect();
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact over a domain");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Elementary matrix `I + a e_ij` (1-based).
pub fn elementary(i: usize, j: usize, a: RingElement, n: usize) -> Result<SqMatrix, MatrixError> {
    SqMatrix::elementary(a.ring(), n, i, j, a)
}

pub fn mat_mul(a: &SqMatrix, b: &SqMatrix) -> Result<SqMatrix, MatrixError> {
    a.try_mul(b)
}

pub fn mat_inv(a: &SqMatrix) -> Result<SqMatrix, MatrixError> {
    a.inverse()
}

pub fn determinant(a: &SqMatrix) -> RingElement {
    a.determinant()
}

pub fn commutator(g: &SqMatrix, h: &SqMatrix) -> Result<SqMatrix, MatrixError> {
    g.commutator(h)
}

/// `s g s^-1`.
pub fn conjugate(g: &SqMatrix, s: &SqMatrix) -> Result<SqMatrix, MatrixError> {
    g.conjugate_by(s)
}

/// Scalar matrices are exactly the ones commuting with every `I + e_ij`.
pub fn is_central(g: &SqMatrix) -> bool {
    let n = g.dim();
    let ring = g.ring();
    (1..=n).all(|i| {
        (1..=n).filter(|&j| j != i).all(|j| {
            let e = SqMatrix::elementary(ring, n, i, j, ring.one()).expect("valid indices");
            &e * g == g * &e
        })
    })
}

/// Largest `i` with `g = I mod ideal^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Finite(u32),
    /// `g` is the identity.
    Identity,
    /// `g != I` but `g = I` modulo every power up to the cap.
    CapExceeded(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceDatum {
    pub ideal: Ideal,
    pub level: Level,
}

pub const DEFAULT_LEVEL_CAP: u32 = 64;

pub fn congruence_level(g: &SqMatrix, ideal: &Ideal, cap: u32) -> Result<CongruenceDatum, MatrixError> {
    if ideal.is_zero() {
        return Err(MatrixError::ZeroIdeal);
    }
    if ideal.ring() != g.ring() {
        return Err(MatrixError::MismatchedRings {
            left: g.ring(),
            right: ideal.ring(),
        });
    }
    let level = if g.is_identity() {
        Level::Identity
    } else {
        let diff: Vec<RingElement> = g.minus_identity().into_iter().filter(|e| !e.is_zero()).collect();
        let mut level = Level::CapExceeded(cap);
        for i in 1..=cap {
            let power = ideal.power(i);
            if !diff.iter().all(|e| power.contains(e).expect("same ring")) {
                level = Level::Finite(i - 1);
                break;
            }
        }
        level
    };
    Ok(CongruenceDatum {
        ideal: ideal.clone(),
        level,
    })
}

/// Which affine copy to embed into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineSide {
    /// `(gamma, v) -> [[gamma, v], [0, 1]]` (the copy `G1`, `v` a column).
    Column,
    /// `(gamma, v) -> [[1, v^T], [0, gamma]]` (the copy `G2`, `v` a row).
    Row,
}

pub fn embed_affine(gamma: &SqMatrix, v: &[RingElement], side: AffineSide, n: usize) -> Result<SqMatrix, MatrixError> {
    if gamma.dim() + 1 != n {
        return Err(MatrixError::DimensionMismatch {
            expected: n - 1,
            found: gamma.dim(),
        });
    }
    if v.len() != n - 1 {
        return Err(MatrixError::DimensionMismatch {
            expected: n - 1,
            found: v.len(),
        });
    }
    let ring = gamma.ring();
    let zero = ring.zero();
    let one = ring.one();
    Ok(match side {
        AffineSide::Column => SqMatrix::from_fn(ring, n, |r, c| match (r < n - 1, c < n - 1) {
            (true, true) => gamma.at(r, c).clone(),
            (true, false) => v[r].clone(),
            (false, true) => zero.clone(),
            (false, false) => one.clone(),
        }),
        AffineSide::Row => SqMatrix::from_fn(ring, n, |r, c| match (r == 0, c == 0) {
            (true, true) => one.clone(),
            (true, false) => v[c - 1].clone(),
            (false, true) => zero.clone(),
            (false, false) => gamma.at(r - 1, c - 1).clone(),
        }),
    })
}

/// `diag(1, inner)` for an `(n-1)`-square `inner`.
#[cfg(test)]
fn lower_block(inner: &SqMatrix) -> SqMatrix {
    let zero = vec![inner.ring().zero(); inner.dim()];
    embed_affine(inner, &zero, AffineSide::Row, inner.dim() + 1).expect("consistent sizes")
}
