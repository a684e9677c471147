//! Ready-made (group, norm) pairs used by the command line and the tests.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    average_norm, conjugation_closure, filtration_norm, product_sum, quotient_norm, singular_extension,
    twoadic_sup_norm, word_norm, z2_mixed_norm, FiniteGroup, Group, MatrixGroup, NormError, NormEval, ProductGroup,
    QuotientGroup, Sampler, WordBudget, Z2Group,
};
use crate::census::enumerate_sl;
use crate::matrix::SqMatrix;
use crate::ring::{Ideal, RingSpec};

/// `SL_n(R)` sampled across the first `max_level` levels of `q`, with the
/// filtration norm of `q`.
pub fn filtration(
    ring: RingSpec,
    n: usize,
    q: &Ideal,
    max_level: u32,
) -> Result<(MatrixGroup, NormEval<SqMatrix>), NormError> {
    let g = MatrixGroup::leveled(
        ring,
        n,
        q.canonical_generator().clone(),
        max_level,
        &format!("SL{n}({ring})"),
    );
    Ok((g, filtration_norm(q, None, 64)?))
}

/// `SL_3(Z)`; the filtration norm of `(2)` on `Gamma(4)`, extended by 1.
pub fn singular_sl3z(seed: u64) -> Result<(MatrixGroup, NormEval<SqMatrix>), NormError> {
    let z = RingSpec::Integers;
    let (g, inner) = filtration(z, 3, &Ideal::principal(z.int(2)), 4)?;
    let four = Ideal::principal(z.int(4));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<SqMatrix> = (0..200).map(|_| g.sample(&mut rng)).collect();
    let in_n = move |m: &SqMatrix| m.minus_identity().iter().all(|e| four.contains(e).expect("same ring"));
    Ok((g, singular_extension(inner, in_n, &samples)?))
}

/// `SL_2(Z) / {±I}` with the quotient of the filtration norm of `(2)`.
pub fn quotient_sl2z() -> Result<(QuotientGroup<MatrixGroup>, NormEval<SqMatrix>), NormError> {
    let z = RingSpec::Integers;
    let (base, inner) = filtration(z, 2, &Ideal::principal(z.int(2)), 3)?;
    let minus = SqMatrix::scalar(z, 2, z.int(-1))?;
    let central = vec![base.identity(), minus];
    let norm = quotient_norm(&base, inner, central.clone())?;
    Ok((QuotientGroup { base, central }, norm))
}

fn hamming(g: &SqMatrix) -> BigRational {
    BigRational::from_integer(BigInt::from(g.minus_identity().iter().filter(|e| !e.is_zero()).count()))
}

/// The kernel `N` of `SL_3(Z/4) -> SL_3(F_2)` (order 256), conjugated by
/// all of `SL_3(Z/4)`.
pub fn kernel_sl3_mod4() -> Result<MatrixGroup, NormError> {
    let r = RingSpec::integers_mod(4).expect("valid modulus");
    let mut members = Vec::new();
    for bits in 0u32..512 {
        let x: Vec<i64> = (0..9).map(|k| ((bits >> k) & 1) as i64).collect();
        if (x[0] + x[4] + x[8]) % 2 != 0 {
            continue;
        }
        let rows: Vec<Vec<_>> = (0..3)
            .map(|i| (0..3).map(|j| r.int(i64::from(i == j) + 2 * x[3 * i + j])).collect())
            .collect();
        let m = SqMatrix::from_rows(r, rows)?;
        debug_assert!(m.is_special());
        members.push(m);
    }
    Ok(MatrixGroup {
        ring: r,
        n: 3,
        elements: Sampler::List(Arc::new(members)),
        actors: Sampler::Levels {
            generator: r.one(),
            min_level: 0,
            max_level: 0,
            max_len: 8,
        },
        label: "ker(SL3(Z/4) -> SL3(F2))".into(),
    })
}

/// One lift to `SL_3(Z/4)` of each element of `SL_3(F_2)`.
pub fn transversal_sl3_mod4() -> Result<Vec<SqMatrix>, NormError> {
    let f2 = RingSpec::integers_mod(2).expect("valid modulus");
    let r = RingSpec::integers_mod(4).expect("valid modulus");
    let table = enumerate_sl(3, f2, 1000).map_err(|e| NormError::Config(e.to_string()))?;
    let mut reps = Vec::new();
    for g in table.elements() {
        let mut rows: Vec<Vec<_>> = (1..=3)
            .map(|i| {
                g.row(i)
                    .iter()
                    .map(|e| r.int(e.as_residue().expect("residue") as i64))
                    .collect()
            })
            .collect();
        let lift = SqMatrix::from_rows(r, rows.clone())?;
        if !lift.is_special() {
            // det is 3 = -1; negating a row keeps the residue mod 2
            rows[0] = rows[0].iter().map(|e| -e).collect();
        }
        reps.push(SqMatrix::from_rows(r, rows)?);
    }
    Ok(reps)
}

/// The Hamming weight of `g - I` on `N`, averaged over a transversal of
/// `SL_3(Z/4) / N`.
pub fn average_sl3_mod4() -> Result<(MatrixGroup, NormEval<SqMatrix>), NormError> {
    let n = kernel_sl3_mod4()?;
    let inner = NormEval::new("hamming", &n.label, |g: &SqMatrix| Ok(hamming(g)));
    let reps = transversal_sl3_mod4()?;
    let f2 = RingSpec::integers_mod(2).expect("valid modulus");
    let same = move |a: &SqMatrix, b: &SqMatrix| a.reduce_mod(f2) == b.reduce_mod(f2);
    let norm = average_norm(&n, inner, reps, 168, same)?;
    Ok((n, norm))
}

/// `SL_2(F_3)` with the word norm in the conjugates of elementary matrices.
pub fn word_sl2_f3() -> Result<(FiniteGroup, NormEval<usize>), NormError> {
    word_finite(2, RingSpec::integers_mod(3).expect("valid modulus"))
}

/// `SL_n(R)` for finite `R`, word norm in the conjugates of all nontrivial
/// elementary matrices.
pub fn word_finite(n: usize, ring: RingSpec) -> Result<(FiniteGroup, NormEval<usize>), NormError> {
    let table = Arc::new(enumerate_sl(n, ring, 1 << 20).map_err(|e| NormError::Config(e.to_string()))?);
    let g = FiniteGroup::whole(table.clone(), &format!("SL{n}({ring})"));
    let whole = Ideal::whole(ring);
    let mut seeds = Vec::new();
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            seeds.extend(table.elementary_targets(i, j, &whole));
        }
    }
    let gens = conjugation_closure(&g, &seeds, &g.actors);
    let norm = word_norm(&g, &gens, WordBudget::default())?;
    Ok((g, norm))
}

/// `Z^2` with `max(|x|_p / 2, |y|)`, acted on by `(x, y) -> (x + k y, y)`.
pub fn z2_mixed(p: u64) -> (Z2Group, NormEval<super::Z2>) {
    let g = Z2Group {
        scale: 1,
        bound: 40,
        depth: 0,
        scale_act: 1,
        transpose_actors: false,
        label: "Z^2".into(),
    };
    (g, z2_mixed_norm(p))
}

/// `2Z + 2Z` with the 2-adic sup norm, acted on by `E(2, 2Z)`.
pub fn twoadic() -> (Z2Group, NormEval<super::Z2>) {
    let g = Z2Group {
        scale: 2,
        bound: 40,
        depth: 5,
        scale_act: 2,
        transpose_actors: true,
        label: "2Z^2".into(),
    };
    (g, twoadic_sup_norm())
}

pub type ProductModel = (ProductGroup<FiniteGroup, Z2Group>, NormEval<(usize, super::Z2)>);

/// `SL_2(F_3) x 2Z^2` with word norm plus 2-adic sup norm.
pub fn product() -> Result<ProductModel, NormError> {
    let (a, na) = word_sl2_f3()?;
    let (b, nb) = twoadic();
    Ok((ProductGroup { left: a, right: b }, product_sum(na, nb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::norms::{axiom_harness, bounded_transform, dirac};

    #[test]
    fn transversal_is_a_transversal() {
        let reps = transversal_sl3_mod4().unwrap();
        assert_eq!(reps.len(), 168);
        assert!(reps.iter().all(|r| r.is_special()));
    }

    #[test]
    fn averaging_an_invariant_norm_changes_nothing() {
        let n = kernel_sl3_mod4().unwrap();
        let inner = dirac(n.identity(), "N");
        let reps = transversal_sl3_mod4().unwrap();
        let f2 = RingSpec::integers_mod(2).unwrap();
        let avg = average_norm(&n, inner.clone(), reps, 168, move |a, b| {
            a.reduce_mod(f2) == b.reduce_mod(f2)
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = n.sample(&mut rng);
            assert_eq!(avg.evaluate(&g).unwrap(), inner.evaluate(&g).unwrap());
        }
    }

    #[test]
    fn duplicate_representative_rejected() {
        let n = kernel_sl3_mod4().unwrap();
        let mut reps = transversal_sl3_mod4().unwrap();
        reps[1] = reps[0].clone();
        let f2 = RingSpec::integers_mod(2).unwrap();
        let inner = dirac(n.identity(), "N");
        let r = average_norm(&n, inner, reps, 168, move |a, b| a.reduce_mod(f2) == b.reduce_mod(f2));
        assert!(matches!(r, Err(NormError::BadTransversal(_))));
    }

    #[test]
    fn hamming_alone_is_not_invariant() {
        let n = kernel_sl3_mod4().unwrap();
        let inner = NormEval::new("hamming", "N", |g: &SqMatrix| Ok(hamming(g)));
        let r = axiom_harness(&n, &inner, 300, 1, Execution::Sequential);
        assert!(r.violations("conjugation") > 0);
        assert_eq!(r.violations("triangle"), 0);
    }

    #[test]
    fn models_satisfy_axioms() {
        let exec = Execution::default();
        let z = RingSpec::Integers;
        let (g, n) = filtration(z, 3, &Ideal::principal(z.int(2)), 4).unwrap();
        assert!(axiom_harness(&g, &n, 200, 1, exec).passed());
        assert!(axiom_harness(&g, &bounded_transform(n), 100, 2, exec).passed());
        let (g, n) = quotient_sl2z().unwrap();
        assert!(axiom_harness(&g, &n, 200, 1, exec).passed());
        let (g, n) = word_sl2_f3().unwrap();
        assert!(axiom_harness(&g, &n, 200, 1, exec).passed());
        let (g, n) = z2_mixed(3);
        assert!(axiom_harness(&g, &n, 500, 1, exec).passed());
        let (g, n) = twoadic();
        assert!(axiom_harness(&g, &n, 500, 1, exec).passed());
        let (g, n) = product().unwrap();
        assert!(axiom_harness(&g, &n, 200, 1, exec).passed());
        let (g, n) = average_sl3_mod4().unwrap();
        assert!(axiom_harness(&g, &n, 100, 1, exec).passed());
        let (g, n) = singular_sl3z(1).unwrap();
        assert!(axiom_harness(&g, &n, 200, 1, exec).passed());
    }
}
