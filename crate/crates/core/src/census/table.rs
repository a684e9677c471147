use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use super::CensusError;
use crate::exec::Execution;
use crate::matrix::{is_central, SqMatrix};
use crate::ring::{Ideal, RingSpec};

/// A finite matrix group with elements indexed by discovery order.
#[derive(Debug)]
pub struct FiniteGroupTable {
    ring: RingSpec,
    n: usize,
    elements: Vec<SqMatrix>,
    index: HashMap<SqMatrix, usize>,
    identity: usize,
    inverse: Vec<usize>,
    center: Vec<usize>,
    products: OnceLock<Vec<u32>>,
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// `|SL_n(Z/m)|` from the closed form, `None` on overflow.
pub fn sl_order(n: usize, m: u64) -> Option<u128> {
    let n = n as u32;
    let mut total: u128 = 1;
    for (p, e) in factorize(m) {
        let p = p as u128;
        // |SL_n(F_p)| = p^{n(n-1)/2} prod_{k=2..n} (p^k - 1)
        let mut local = p.checked_pow(n * (n - 1) / 2)?;
        for k in 2..=n {
            local = local.checked_mul(p.checked_pow(k)? - 1)?;
        }
        local = local.checked_mul(p.checked_pow((e - 1) * (n * n - 1))?)?;
        total = total.checked_mul(local)?;
    }
    Some(total)
}

/// All of `SL_n(R)` for a finite `R = Z/m`, by closure under the elementary
/// generators `I + e_ij`, cross-checked against the closed-form order.
pub fn enumerate_sl(n: usize, ring: RingSpec, budget: usize) -> Result<FiniteGroupTable, CensusError> {
    let m = ring.order().ok_or(CensusError::NotFinite(ring))?;
    let expected = sl_order(n, m).ok_or(CensusError::BudgetExceeded {
        order: u128::MAX,
        budget,
    })?;
    if expected > budget as u128 {
        return Err(CensusError::BudgetExceeded {
            order: expected,
            budget,
        });
    }
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                gens.push(SqMatrix::elementary(ring, n, i, j, ring.one())?);
            }
        }
    }
    let table = FiniteGroupTable::closure(ring, n, &gens, budget)?;
    if table.order() as u128 != expected {
        return Err(CensusError::OrderMismatch {
            expected,
            found: table.order(),
        });
    }
    Ok(table)
}

impl FiniteGroupTable {
    /// Subgroup generated by `gens` (finite, so monoid closure suffices).
    pub fn closure(ring: RingSpec, n: usize, gens: &[SqMatrix], budget: usize) -> Result<Self, CensusError> {
        let id = SqMatrix::identity(ring, n)?;
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in gens {
                let h = &elements[k] * g;
                if !index.contains_key(&h) {
                    if elements.len() >= budget {
                        return Err(CensusError::BudgetExceeded {
                            order: elements.len() as u128 + 1,
                            budget,
                        });
                    }
                    index.insert(h.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(h);
                }
            }
        }
        let inverse = elements
            .iter()
            .map(|g| {
                let gi = g.inverse().expect("group element");
                *index.get(&gi).expect("closed under inverses")
            })
            .collect();
        let center = elements
            .iter()
            .enumerate()
            .filter(|(_, g)| is_central(g))
            .map(|(k, _)| k)
            .collect();
        Ok(FiniteGroupTable {
            ring,
            n,
            elements,
            index,
            identity: 0,
            inverse,
            center,
            products: OnceLock::new(),
        })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SqMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &SqMatrix {
        &self.elements[k]
    }

    pub fn index_of(&self, g: &SqMatrix) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, k: usize) -> usize {
        self.inverse[k]
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn is_central(&self, k: usize) -> bool {
        self.center.contains(&k)
    }

    fn product_table(&self) -> &[u32] {
        self.products.get_or_init(|| {
            let n = self.order();
            let rows = Execution::default().map_range(n, |a| {
                (0..n)
                    .map(|b| {
                        let p = &self.elements[a] * &self.elements[b];
                        self.index[&p] as u32
                    })
                    .collect::<Vec<u32>>()
            });
            rows.concat()
        })
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product_table()[a * self.order() + b] as usize
    }

    /// `s g s^-1`.
    pub fn conj(&self, g: usize, s: usize) -> usize {
        self.mul(self.mul(s, g), self.inv(s))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    /// Indices of `E(n, R, q)`: the subgroup generated by `I + g e_ij`, `g`
    /// the canonical generator of `q`.
    pub fn elementary_subgroup(&self, q: &Ideal) -> Result<Vec<usize>, CensusError> {
        let g = q.canonical_generator().clone();
        let mut gens = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                if i != j {
                    gens.push(SqMatrix::elementary(self.ring, self.n, i, j, g.clone())?);
                }
            }
        }
        let sub = FiniteGroupTable::closure(self.ring, self.n, &gens, self.order())?;
        sub.elements
            .iter()
            .map(|e| self.index_of(e).ok_or(CensusError::NotInGroup))
            .collect()
    }

    /// Indices of `Gamma(q)`: elements congruent to `I` modulo `q`.
    pub fn congruence_subgroup(&self, q: &Ideal) -> Vec<usize> {
        (0..self.order())
            .filter(|&k| {
                self.elements[k]
                    .minus_identity()
                    .iter()
                    .all(|e| q.contains(e).expect("same ring"))
            })
            .collect()
    }

    /// Indices of `E_ij(q) \ {I}`.
    pub fn elementary_targets(&self, i: usize, j: usize, q: &Ideal) -> Vec<usize> {
        (0..self.order())
            .filter(|&k| match self.elements[k].as_elementary() {
                Some((a, b, x)) => a == i && b == j && q.contains(&x).expect("same ring"),
                None => false,
            })
            .collect()
    }
}
