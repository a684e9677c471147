//! Factorisation of `SL_n` matrices into elementary matrices.
//!
//! The target is reduced to the identity by Euclidean row operations; the
//! factorisation is the list of inverse operations in reverse order.
//! Supported rings: `Z`, `F_p[x]` and `Z/m` (division on representatives
//! in `[0, m)`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::census::{enumerate_sl, CensusError};
use crate::exec::Execution;
use crate::matrix::{MatrixError, SqMatrix};
use crate::ring::{RingElement, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElemError {
    #[error("determinant is {det}, not 1")]
    NotSL { det: String },
    #[error("elementary decomposition is not implemented over {0}")]
    UnsupportedRing(RingSpec),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Census(#[from] CensusError),
}

/// One factor `I + a e_ij` (1-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElemFactor {
    pub i: usize,
    pub j: usize,
    pub a: RingElement,
}

impl ElemFactor {
    pub fn to_matrix(&self, n: usize) -> SqMatrix {
        SqMatrix::elementary(self.a.ring(), n, self.i, self.j, self.a.clone()).expect("valid factor")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemFactorization {
    pub factors: Vec<ElemFactor>,
    pub target: SqMatrix,
}

impl ElemFactorization {
    /// Factorisation given directly by its factors.
    pub fn from_factors(ring: RingSpec, n: usize, factors: Vec<ElemFactor>) -> Result<Self, MatrixError> {
        let mut target = SqMatrix::identity(ring, n)?;
        for f in &factors {
            target = &target * &f.to_matrix(n);
        }
        Ok(ElemFactorization { factors, target })
    }

    pub fn count(&self) -> usize {
        self.factors.len()
    }

    /// Ordered product of the factors.
    pub fn product(&self) -> SqMatrix {
        let n = self.target.dim();
        self.factors
            .iter()
            .fold(SqMatrix::identity(self.target.ring(), n).expect("n >= 2"), |acc, f| {
                &acc * &f.to_matrix(n)
            })
    }

    pub fn verify(&self) -> bool {
        self.product() == self.target && self.factors.iter().all(|f| f.i != f.j && !f.a.is_zero())
    }

    /// Factorisation of the inverse: reversed, negated factors.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| ElemFactor {
                i: f.i,
                j: f.j,
                a: -&f.a,
            })
            .collect();
        Ok(ElemFactorization {
            factors,
            target: self.target.inverse()?,
        })
    }
}

/// Records left-multiplications by elementary matrices applied to `work`.
struct RowReducer {
    work: SqMatrix,
    ops: Vec<ElemFactor>,
}

impl RowReducer {
    /// row_dst += a * row_src (0-based), i.e. left-multiply by I + a e_{dst,src}.
    fn add_row(&mut self, dst: usize, src: usize, a: RingElement) {
        if a.is_zero() {
            return;
        }
        let n = self.work.dim();
        for c in 0..n {
            let s = self.work.at(src, c);
            if s.is_zero() {
                continue;
            }
            let v = self.work.at(dst, c) + &(&a * s);
            self.work.set(dst, c, v);
        }
        self.ops.push(ElemFactor {
            i: dst + 1,
            j: src + 1,
            a,
        });
    }

    /// Multiply rows (k, k+1) by diag(u, u^-1) using six elementary steps.
    fn scale_pair(&mut self, k: usize, u: &RingElement) {
        let ui = u.inverse().expect("unit");
        let one = u.ring().one();
        // diag(u, u^-1) = w(u) w(-1), w(u) = e12(u) e21(-u^-1) e12(u).
        // Left-multiplying by a product applies its rightmost factor first.
        let steps = [
            (k, k + 1, -&one),
            (k + 1, k, one.clone()),
            (k, k + 1, -&one),
            (k, k + 1, u.clone()),
            (k + 1, k, -&ui),
            (k, k + 1, u.clone()),
        ];
        for (dst, src, a) in steps {
            self.add_row(dst, src, a);
        }
    }
}

/// Factor `g` into elementary matrices.
///
/// Pivoting picks the entry of smallest Euclidean norm in the working
/// column, lowest row index on ties, so the output is deterministic.
pub fn decompose_elementary(g: &SqMatrix) -> Result<ElemFactorization, ElemError> {
    let ring = g.ring();
    if matches!(ring, RingSpec::LocalizedIntegers(_)) {
        return Err(ElemError::UnsupportedRing(ring));
    }
    let det = g.determinant();
    if !det.is_one() {
        return Err(ElemError::NotSL { det: det.to_string() });
    }
    let n = g.dim();
    let mut red = RowReducer {
        work: g.clone(),
        ops: Vec::new(),
    };
    for col in 0..n {
        // Euclid on rows col..n until one nonzero entry remains.
        let pivot = loop {
            let nonzero: Vec<(BigInt, usize)> = (col..n)
                .filter(|&r| !red.work.at(r, col).is_zero())
                .map(|r| (red.work.at(r, col).euclid_norm().expect("Euclidean ring"), r))
                .collect();
            let &(_, p) = nonzero.iter().min().expect("column of an invertible matrix is nonzero");
            if nonzero.len() == 1 {
                break p;
            }
            let pv = red.work.at(p, col).clone();
            for &(_, r) in &nonzero {
                if r != p {
                    let (q, _) = red
                        .work
                        .at(r, col)
                        .div_rem_euclid(&pv)
                        .map_err(|_| ElemError::UnsupportedRing(ring))?;
                    red.add_row(r, p, -q);
                }
            }
        };
        if pivot != col {
            red.add_row(col, pivot, ring.one());
            red.add_row(pivot, col, -ring.one());
        }
        let u = red.work.at(col, col).clone();
        let ui = u.inverse().ok_or_else(|| ElemError::NotSL { det: det.to_string() })?;
        for r in 0..n {
            if r != col && !red.work.at(r, col).is_zero() {
                let a = -&(red.work.at(r, col) * &ui);
                red.add_row(r, col, a);
            }
        }
    }
    // Now diagonal with unit entries whose product is one.
    for k in 0..n - 1 {
        let d = red.work.at(k, k).clone();
        if !d.is_one() {
            let di = d.inverse().expect("unit diagonal");
            red.scale_pair(k, &di);
        }
    }
    debug_assert!(red.work.is_identity());
    let factors = red
        .ops
        .into_iter()
        .map(|f| ElemFactor {
            i: f.i,
            j: f.j,
            a: -&f.a,
        })
        .collect();
    Ok(ElemFactorization {
        factors,
        target: g.clone(),
    })
}

/// Histogram of factor counts over a finite `SL_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountCensus {
    pub order: usize,
    pub histogram: BTreeMap<usize, usize>,
}

impl CountCensus {
    pub fn max(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    /// `count,frequency` rows followed by `max=<k> order=<N>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("count,frequency\n");
        for (k, f) in &self.histogram {
            out.push_str(&format!("{k},{f}\n"));
        }
        out.push_str(&format!("max={} order={}\n", self.max(), self.order));
        out
    }
}

pub const DEFAULT_ORDER_BUDGET: usize = 1_000_000;

pub fn factor_count_census(n: usize, ring: RingSpec, budget: usize, exec: Execution) -> Result<CountCensus, ElemError> {
    let table = enumerate_sl(n, ring, budget)?;
    let counts = exec.map(table.elements(), |g| decompose_elementary(g).map(|f| f.count()));
    let mut histogram = BTreeMap::new();
    for c in counts {
        *histogram.entry(c?).or_insert(0) += 1;
    }
    Ok(CountCensus {
        order: table.order(),
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    #[test]
    fn identity_has_no_factors() {
        let f = decompose_elementary(&SqMatrix::identity(z(), 3).unwrap()).unwrap();
        assert_eq!(f.count(), 0);
    }

    #[test]
    fn single_elementary() {
        let g = SqMatrix::elementary(z(), 3, 1, 2, z().int(7)).unwrap();
        let f = decompose_elementary(&g).unwrap();
        assert_eq!(
            f.factors,
            vec![ElemFactor {
                i: 1,
                j: 2,
                a: z().int(7)
            }]
        );
    }

    #[test]
    fn rejects_non_sl_and_localized() {
        let g = SqMatrix::from_ints(z(), &[&[2, 0], &[0, 1]]).unwrap();
        assert!(matches!(decompose_elementary(&g), Err(ElemError::NotSL { .. })));
        let l = RingSpec::localized(3).unwrap();
        let g = SqMatrix::identity(l, 2).unwrap();
        assert!(matches!(decompose_elementary(&g), Err(ElemError::UnsupportedRing(_))));
    }

    #[test]
    fn diagonal_units_are_cleared() {
        let g = SqMatrix::from_ints(z(), &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]).unwrap();
        let f = decompose_elementary(&g).unwrap();
        assert!(f.verify());
        let z7 = RingSpec::integers_mod(7).unwrap();
        let g = SqMatrix::from_ints(z7, &[&[3, 0], &[0, 5]]).unwrap();
        assert!(decompose_elementary(&g).unwrap().verify());
    }

    #[test]
    fn polynomial_matrix() {
        let f3 = RingSpec::poly_over_fp(3).unwrap();
        let x = f3.x().unwrap();
        let a = SqMatrix::elementary(f3, 2, 1, 2, &x * &x).unwrap();
        let b = SqMatrix::elementary(f3, 2, 2, 1, f3.poly(&[1, 2]).unwrap()).unwrap();
        let g = &(&a * &b) * &a;
        let f = decompose_elementary(&g).unwrap();
        assert!(f.verify());
        assert!(f.inverse().unwrap().verify());
    }

    #[test]
    fn residue_ring_composite() {
        let z4 = RingSpec::integers_mod(4).unwrap();
        let g = SqMatrix::from_ints(z4, &[&[3, 2], &[2, 3]]).unwrap();
        assert!(g.is_special());
        assert!(decompose_elementary(&g).unwrap().verify());
    }

    #[test]
    fn small_censuses() {
        let f2 = RingSpec::integers_mod(2).unwrap();
        let c = factor_count_census(2, f2, DEFAULT_ORDER_BUDGET, Execution::Sequential).unwrap();
        assert_eq!(c.order, 6);
        assert_eq!(c.histogram.values().sum::<usize>(), 6);
        assert_eq!(c.histogram.get(&0), Some(&1));
        let f3 = RingSpec::integers_mod(3).unwrap();
        let c = factor_count_census(2, f3, DEFAULT_ORDER_BUDGET, Execution::default()).unwrap();
        assert_eq!(c.histogram.values().sum::<usize>(), 24);
        assert_eq!(c.histogram.get(&0), Some(&1));
        assert!(c.to_csv().ends_with(&format!("max={} order=24\n", c.max())));
    }
}
