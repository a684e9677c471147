//! Conjugation-invariant norms and ways of building new ones.
//!
//! A norm is a function `G -> Q>=0` that vanishes exactly at the identity,
//! is symmetric, satisfies the triangle inequality and is invariant under
//! the group's action (conjugation for matrix groups). Values are exact
//! rationals. [`axiom_harness`] checks the five axioms on random samples.

mod config;
mod groups;
mod harness;
pub mod models;
mod scaling;
mod word;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::{congruence_level, Level, MatrixError, SqMatrix};
use crate::ring::Ideal;

pub use config::{run_config, NormConfig};
pub use groups::{FiniteGroup, Group, Mat2i, MatrixGroup, ProductGroup, QuotientGroup, Sampler, Z2Group, Z2};
pub use harness::{axiom_harness, AxiomResult, HarnessReport, AXIOMS};
pub use scaling::{scaling_check, shrink_ideal, ShrinkResult};
pub use word::{conjugation_closure, word_length, word_norm, WordBudget, WordOutcome};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("element is congruent to I beyond the level cap {cap}; its filtration value is ambiguous")]
    CapAmbiguous { cap: u32 },
    #[error("bad filtration values: {0}")]
    BadChain(String),
    #[error("inner norm takes the value {value} > 1 on the subgroup")]
    InnerUnbounded { value: String },
    #[error("subgroup element is not central: {0}")]
    NotCentral(String),
    #[error("bad transversal: {0}")]
    BadTransversal(String),
    #[error("word search exceeded the state budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("element not reached within word length {depth} (frontier {frontier})")]
    Unreached { depth: u32, frontier: usize },
    #[error("element is outside the domain: {0}")]
    NotInDomain(String),
    #[error("no nonzero vector of norm <= {epsilon}/6 found")]
    NoSmallVector { epsilon: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

type EvalFn<E> = Arc<dyn Fn(&E) -> Result<BigRational, NormError> + Send + Sync>;

/// A named norm on elements of type `E`.
#[derive(Clone)]
pub struct NormEval<E> {
    pub tag: String,
    pub params: Vec<(String, String)>,
    pub domain: String,
    eval: EvalFn<E>,
}

impl<E> fmt::Debug for NormEval<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormEval")
            .field("tag", &self.tag)
            .field("params", &self.params)
            .field("domain", &self.domain)
            .finish()
    }
}

impl<E> NormEval<E> {
    pub fn new(
        tag: &str,
        domain: &str,
        eval: impl Fn(&E) -> Result<BigRational, NormError> + Send + Sync + 'static,
    ) -> Self {
        NormEval {
            tag: tag.to_string(),
            params: Vec::new(),
            domain: domain.to_string(),
            eval: Arc::new(eval),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn evaluate(&self, g: &E) -> Result<BigRational, NormError> {
        (self.eval)(g)
    }

    /// `tag(k=v, ...)`.
    pub fn describe(&self) -> String {
        if self.params.is_empty() {
            return self.tag.clone();
        }
        let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.tag, p.join(", "))
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// 0 at the identity, 1 elsewhere.
pub fn dirac<E: PartialEq + Send + Sync + 'static>(identity: E, domain: &str) -> NormEval<E> {
    NormEval::new("dirac", domain, move |g| {
        Ok(if *g == identity {
            BigRational::zero()
        } else {
            BigRational::one()
        })
    })
}

/// Norm from the congruence filtration `Gamma(q^0) > Gamma(q) > ...`:
/// `||g|| = values[k]` when `g` lies in `Gamma(q^k)` but not `Gamma(q^{k+1})`.
/// Without explicit values, `values[k] = 2^-k`. Values must be positive
/// and strictly decreasing; levels past the list or the cap are ambiguous.
pub fn filtration_norm(
    ideal: &Ideal,
    values: Option<Vec<BigRational>>,
    cap: u32,
) -> Result<NormEval<SqMatrix>, NormError> {
    if ideal.is_zero() || ideal.is_whole() {
        return Err(NormError::BadChain("the ideal must be proper and nonzero".into()));
    }
    if let Some(v) = &values {
        if v.is_empty() || v.iter().any(|x| !x.is_positive()) {
            return Err(NormError::BadChain("values must be positive".into()));
        }
        if v.windows(2).any(|w| w[1] >= w[0]) {
            return Err(NormError::BadChain("values must strictly decrease".into()));
        }
    }
    let cap = values.as_ref().map_or(cap, |v| cap.min(v.len() as u32));
    let q = ideal.clone();
    let shown = values.as_ref().map_or("2^-k".to_string(), |v| {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    });
    Ok(NormEval::new(
        "filtration",
        &format!("SL_n over {}", ideal.ring()),
        move |g: &SqMatrix| match congruence_level(g, &q, cap)?.level {
            Level::Identity => Ok(BigRational::zero()),
            Level::CapExceeded(cap) => Err(NormError::CapAmbiguous { cap }),
            Level::Finite(k) => Ok(match &values {
                Some(v) => v[k as usize].clone(),
                None => BigRational::new(BigInt::one(), BigInt::one() << k as usize),
            }),
        },
    )
    .with_param("ideal", ideal)
    .with_param("values", shown)
    .with_param("cap", cap))
}

/// `||g|| / (1 + ||g||)`: a bounded norm with the same zero set.
pub fn bounded_transform<E: 'static>(inner: NormEval<E>) -> NormEval<E> {
    let domain = inner.domain.clone();
    let desc = inner.describe();
    NormEval::new("bounded", &domain, move |g| {
        let x = inner.evaluate(g)?;
        Ok(&x / (BigRational::one() + &x))
    })
    .with_param("inner", desc)
}

/// Extension of a norm bounded by 1 on a normal subgroup `N` to the whole
/// group: the inner value on `N`, 1 elsewhere. `samples` from `N` are used
/// to check the bound.
pub fn singular_extension<E: Send + Sync + 'static>(
    inner: NormEval<E>,
    in_subgroup: impl Fn(&E) -> bool + Send + Sync + 'static,
    samples: &[E],
) -> Result<NormEval<E>, NormError> {
    for s in samples.iter().filter(|s| in_subgroup(s)) {
        let v = inner.evaluate(s)?;
        if v > BigRational::one() {
            return Err(NormError::InnerUnbounded { value: v.to_string() });
        }
    }
    let domain = inner.domain.clone();
    let desc = inner.describe();
    Ok(NormEval::new("singular", &domain, move |g| {
        if in_subgroup(g) {
            inner.evaluate(g)
        } else {
            Ok(BigRational::one())
        }
    })
    .with_param("inner", desc))
}

/// Norm on `G / A` for a finite central subgroup `A`: the minimum over the
/// coset.
pub fn quotient_norm<G>(
    group: &G,
    inner: NormEval<G::Elem>,
    central: Vec<G::Elem>,
) -> Result<NormEval<G::Elem>, NormError>
where
    G: Group + Clone + 'static,
{
    if let Some(a) = central.iter().find(|a| !group.is_central(a)) {
        return Err(NormError::NotCentral(format!("{a:?}")));
    }
    let size = central.len();
    let desc = inner.describe();
    let g2 = group.clone();
    Ok(
        NormEval::new("quotient", &format!("{} / A", group.describe()), move |g| {
            let mut best: Option<BigRational> = None;
            for a in &central {
                let v = inner.evaluate(&g2.mul(g, a))?;
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
            best.ok_or_else(|| NormError::NotCentral("empty subgroup".into()))
        })
        .with_param("inner", desc)
        .with_param("central", size),
    )
}

/// Average of an `N`-invariant norm on `N` over a transversal of `G/N`:
/// `(1/k) sum ||t g t^-1||`. `same_coset(a, b)` decides `aN = bN`.
pub fn average_norm<G>(
    group: &G,
    inner: NormEval<G::Elem>,
    reps: Vec<G::Actor>,
    index: usize,
    same_coset: impl Fn(&G::Actor, &G::Actor) -> bool,
) -> Result<NormEval<G::Elem>, NormError>
where
    G: Group + Clone + 'static,
{
    if reps.len() != index {
        return Err(NormError::BadTransversal(format!(
            "{} representatives for index {index}",
            reps.len()
        )));
    }
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            if same_coset(&reps[a], &reps[b]) {
                return Err(NormError::BadTransversal(format!(
                    "representatives {a} and {b} share a coset"
                )));
            }
        }
    }
    let k = BigInt::from(index);
    let desc = inner.describe();
    let g2 = group.clone();
    Ok(NormEval::new("average", &group.describe(), move |g| {
        let mut sum = BigRational::zero();
        for t in &reps {
            sum += inner.evaluate(&g2.act(t, g))?;
        }
        Ok(sum / BigRational::from_integer(k.clone()))
    })
    .with_param("inner", desc)
    .with_param("index", index))
}

/// `||(a, b)|| = ||a|| + ||b||` on a direct product.
pub fn product_sum<A: 'static, B: 'static>(left: NormEval<A>, right: NormEval<B>) -> NormEval<(A, B)> {
    let domain = format!("{} x {}", left.domain, right.domain);
    let desc = (left.describe(), right.describe());
    NormEval::new("product", &domain, move |(a, b)| {
        Ok(left.evaluate(a)? + right.evaluate(b)?)
    })
    .with_param("left", desc.0)
    .with_param("right", desc.1)
}

/// `|x|_p = p^-v(x)`, `|0|_p = 0`.
pub fn padic_abs(x: &BigInt, p: u64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let p = BigInt::from(p);
    let mut v = 0usize;
    let mut r = x.clone();
    while (&r % &p).is_zero() {
        r /= &p;
        v += 1;
    }
    BigRational::new(BigInt::one(), num_traits::pow(p, v))
}

/// `||(x, y)|| = max(|x|_p / 2, |y|)` on `Z^2`, invariant under
/// `(x, y) -> (x + k y, y)`.
pub fn z2_mixed_norm(p: u64) -> NormEval<Z2> {
    NormEval::new("z2-mixed", "Z^2", move |(x, y): &Z2| {
        let a = padic_abs(x, p) / BigRational::from_integer(BigInt::from(2));
        let b = BigRational::from_integer(y.abs());
        Ok(if a > b { a } else { b })
    })
    .with_param("p", p)
}

/// `||(x, y)|| = max(|x|_2, |y|_2)` on `2Z + 2Z`.
pub fn twoadic_sup_norm() -> NormEval<Z2> {
    NormEval::new("twoadic-sup", "2Z^2", |(x, y): &Z2| {
        let two = BigInt::from(2);
        if !(x % &two).is_zero() || !(y % &two).is_zero() {
            return Err(NormError::NotInDomain(format!("({x}, {y}) is not in 2Z^2")));
        }
        let (a, b) = (padic_abs(x, 2), padic_abs(y, 2));
        Ok(if a > b { a } else { b })
    })
}
