//! Scaling behaviour of invariant norms on `2Z + 2Z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AxiomResult, NormError, NormEval, Z2};
use crate::exec::Execution;

fn even(rng: &mut ChaCha8Rng) -> BigInt {
    let k: i64 = rng.gen_range(-50..=50);
    let e: u32 = rng.gen_range(0..6);
    BigInt::from(2 * k) << e as usize
}

/// Checks `||(z y, 0)|| <= 2 ||(x, y)||` and `||(0, z x)|| <= 2 ||(x, y)||`
/// for random `x, y, z` in `2Z`.
pub fn scaling_check(norm: &NormEval<Z2>, samples: usize, seed: u64, exec: Execution) -> AxiomResult {
    let zero = BigInt::zero();
    let rows = exec.map_range(samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let (x, y, z) = (even(&mut rng), even(&mut rng), even(&mut rng));
        let base = norm.evaluate(&(x.clone(), y.clone()));
        let a = norm.evaluate(&(&z * &y, zero.clone()));
        let b = norm.evaluate(&(zero.clone(), &z * &x));
        match (&base, &a, &b) {
            (Ok(n), Ok(a), Ok(b)) => {
                let bound = n * BigRational::from_integer(2.into());
                (*a > bound || *b > bound)
                    .then(|| format!("x={x} y={y} z={z} ||(x,y)||={n} ||(zy,0)||={a} ||(0,zx)||={b}"))
            }
            _ => Some(format!("x={x} y={y} z={z}: evaluation failed")),
        }
    });
    let examples: Vec<String> = rows.iter().flatten().cloned().collect();
    AxiomResult {
        axiom: "scaling",
        samples,
        violations: examples.len(),
        examples: examples.into_iter().take(5).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrinkResult {
    /// The small vector found, `x != 0`.
    pub x: BigInt,
    pub y: BigInt,
    pub value: BigRational,
    /// Generator `x^3` of the smaller ideal.
    pub generator: BigInt,
    /// Random points of `(x^3) + (x^3)` checked against `epsilon`.
    pub checked: usize,
    pub violations: usize,
}

/// Finds `(x, y)` in `2Z + 2Z`, `x != 0`, with `6 ||(x, y)|| <= epsilon` and
/// returns the ideal `(x^3)`, then spot-checks that its square lies in the
/// `epsilon`-ball. Candidates are `(a 2^k, b 2^k)` with small `a, b` and
/// `k <= 32`, smallest `k` first.
pub fn shrink_ideal(
    norm: &NormEval<Z2>,
    epsilon: &BigRational,
    checks: usize,
    seed: u64,
) -> Result<ShrinkResult, NormError> {
    let six = BigRational::from_integer(6.into());
    let mut found = None;
    'search: for k in 1..=32usize {
        for a in [1i64, -1, 2, -2] {
            for b in [0i64, 1, -1, 2, -2] {
                let (x, y) = (BigInt::from(a) << k, BigInt::from(b) << k);
                let v = norm.evaluate(&(x.clone(), y.clone()))?;
                if &v * &six <= *epsilon {
                    found = Some((x, y, v));
                    break 'search;
                }
            }
        }
    }
    let Some((x, y, value)) = found else {
        return Err(NormError::NoSmallVector {
            epsilon: epsilon.to_string(),
        });
    };
    let generator = x.pow(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..checks {
        let u = &generator * BigInt::from(rng.gen_range(-1000i64..=1000));
        let v = &generator * BigInt::from(rng.gen_range(-1000i64..=1000));
        if norm.evaluate(&(u, v))? > *epsilon {
            violations += 1;
        }
    }
    Ok(ShrinkResult {
        x,
        y,
        value,
        generator,
        checked: checks,
        violations,
    })
}
