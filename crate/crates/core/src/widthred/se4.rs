use super::{Builder, CaseTag, Membership, OpKind, ReductionTrace, Se4Phase, WidthError};
use crate::matrix::{is_central, SqMatrix};
use crate::ring::{Ideal, RingElement};

/// Unit exponents tried for `Z[1/p]`: `±p^k` with `|k|` up to this.
const UNIT_EXPONENT_BOUND: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Se4Side {
    E12,
    E21,
}

fn in_gamma(g: &SqMatrix, q: &Ideal) -> bool {
    g.is_special() && g.minus_identity().iter().all(|e| q.contains(e).expect("same ring"))
}

fn mat2(a: &RingElement, b: &RingElement, c: &RingElement, d: &RingElement) -> SqMatrix {
    SqMatrix::from_rows(a.ring(), vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]).expect("2x2")
}

fn lands_in_e12(g: &SqMatrix, q: &Ideal) -> bool {
    matches!(g.as_elementary(), Some((1, 2, x)) if q.contains(&x).expect("same ring"))
}

/// Tries to finish `b` with `[current, Z]`, `Z = [[z, w], [0, z^-1]]`.
fn final_commutator(b: &mut Builder, q: &Ideal, zs: &[RingElement], side: Se4Side) -> Result<bool, WidthError> {
    let ring = b.current.ring();
    let p = q.canonical_generator();
    for z in zs {
        let Some(zi) = z.inverse() else { continue };
        for w in [ring.zero(), p.clone()] {
            let zm = mat2(z, &w, &ring.zero(), &zi);
            if !in_gamma(&zm, q) {
                continue;
            }
            let out = b.current.commutator(&zm)?;
            if lands_in_e12(&out, q) {
                b.apply(
                    OpKind::CommRight,
                    zm,
                    Membership::Congruence,
                    CaseTag::Se4(side, Se4Phase::Final),
                )?;
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The `E12` construction; `accept(u)` is the hypothesis on the unit.
fn e12(
    sigma: &SqMatrix,
    q: &Ideal,
    side: Se4Side,
    accept: impl Fn(&RingElement) -> bool,
) -> Result<Builder, WidthError> {
    let ring = sigma.ring();
    let (a, c) = (sigma.get(1, 1).clone(), sigma.get(2, 1).clone());
    let mut b = Builder::new(sigma);
    if lands_in_e12(sigma, q) {
        return Ok(b);
    }
    let candidates = ring.unit_candidates(UNIT_EXPONENT_BOUND);
    if c.is_zero() {
        let mut zs = vec![ring.one()];
        zs.extend(candidates.iter().cloned());
        if final_commutator(&mut b, q, &zs, side)? {
            return Ok(b);
        }
        return Err(WidthError::NoUnitFound { tried: zs.len() });
    }
    let one = ring.one();
    let zero = ring.zero();
    let sigma_inv = sigma.inverse()?;
    for u in &candidates {
        if !accept(u) {
            continue;
        }
        let u2 = u * u;
        let u4 = &u2 * &u2;
        let Some(x) = (&u4 - &one).exact_div(&c) else { continue };
        let t = &a * &x;
        let n_mat = mat2(&one, &t, &zero, &one);
        let u2i = u2.inverse().expect("unit");
        let d_mat = mat2(&u2, &zero, &zero, &u2i);
        if !in_gamma(&n_mat, q) || !in_gamma(&d_mat, q) {
            continue;
        }
        // [N^-1 D, sigma] conjugated by N sigma^-1 is Y = S^-1 T.
        let m = &n_mat.inverse()? * &d_mat;
        let conj = &n_mat * &sigma_inv;
        let mut trial = Builder::new(sigma);
        trial.apply(
            OpKind::CommLeft,
            m,
            Membership::Congruence,
            CaseTag::Se4(side, Se4Phase::Commute),
        )?;
        trial.apply(
            OpKind::Conjugate,
            conj,
            Membership::Congruence,
            CaseTag::Se4(side, Se4Phase::Conjugate),
        )?;
        let y = &trial.current;
        let u4i = u4.inverse().expect("unit");
        if !y.get(2, 1).is_zero() || y.get(1, 1) != &u4i || y.get(2, 2) != &u4 {
            return Err(WidthError::Internal("se4 Y"));
        }
        if final_commutator(&mut trial, q, &[u4], side)? {
            return Ok(trial);
        }
    }
    Err(WidthError::NoUnitFound {
        tried: candidates.len(),
    })
}

/// `SL_2` reduction: at most four conjugates of `sigma^{±1}` by elements
/// of `Gamma(q)` multiply to a nontrivial element of `E_12(q)` (or
/// `E_21(q)`), provided a suitable unit is found.
pub fn unit_trick_se4(sigma: &SqMatrix, q: &Ideal, side: Se4Side) -> Result<ReductionTrace, WidthError> {
    let ring = sigma.ring();
    if sigma.dim() != 2 {
        return Err(WidthError::BadDimension {
            found: sigma.dim(),
            need: "n = 2",
        });
    }
    if q.is_zero() {
        return Err(WidthError::ZeroIdeal);
    }
    if !sigma.is_special() {
        return Err(WidthError::NotSpecial);
    }
    if !in_gamma(sigma, q) {
        return Err(WidthError::NotCongruent);
    }
    if is_central(sigma) {
        return Err(WidthError::CentralInput);
    }
    let one = ring.one();
    let (steps, output, target) = match side {
        Se4Side::E12 => {
            let c = sigma.get(2, 1).clone();
            let c2 = &c * &c;
            let b = e12(sigma, q, side, |u| c2.divides(&(u - &one)))?;
            (b.steps, b.current, (1, 2))
        }
        Se4Side::E21 => {
            // g -> w g w^-1 with w = [[0, 1], [-1, 0]] swaps E12 and E21.
            let zero = ring.zero();
            let w = mat2(&zero, &one, &-&one, &zero);
            let wi = w.inverse()?;
            let there = |g: &SqMatrix| g.conjugate_by(&wi).expect("invertible");
            let back = |g: &SqMatrix| g.conjugate_by(&w).expect("invertible");
            let b_entry = sigma.get(1, 2).clone();
            let mirrored = there(sigma);
            let b = e12(&mirrored, q, side, |u| b_entry.divides(&(&(u * u) - &one)))?;
            let mut steps = b.steps;
            for s in &mut steps {
                s.op.s = back(&s.op.s);
                s.result = back(&s.result);
            }
            (steps, back(&b.current), (2, 1))
        }
    };
    Ok(ReductionTrace {
        input: sigma.clone(),
        ideal: q.clone(),
        target,
        steps,
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    #[test]
    fn upper_triangular_needs_one_commutator() {
        let z = RingSpec::Integers;
        let q = Ideal::principal(z.int(2));
        // c = 0, a = 1: already elementary
        let g = SqMatrix::from_ints(z, &[&[1, 4], &[0, 1]]).unwrap();
        let t = unit_trick_se4(&g, &q, Se4Side::E12).unwrap();
        assert!(t.steps.is_empty());
        t.validate().unwrap();
    }

    #[test]
    fn residue_field_with_large_units() {
        let f13 = RingSpec::integers_mod(13).unwrap();
        let q = Ideal::whole(f13);
        let g = SqMatrix::from_ints(f13, &[&[2, 3], &[1, 2]]).unwrap();
        assert!(g.is_special());
        for side in [Se4Side::E12, Se4Side::E21] {
            let t = unit_trick_se4(&g, &q, side).unwrap();
            t.validate().unwrap();
            assert!(t.word_length() <= 4);
        }
    }

    #[test]
    fn fourth_powers_trivial_mod_five() {
        let f5 = RingSpec::integers_mod(5).unwrap();
        let g = SqMatrix::from_ints(f5, &[&[2, 3], &[1, 2]]).unwrap();
        assert!(matches!(
            unit_trick_se4(&g, &Ideal::whole(f5), Se4Side::E12),
            Err(WidthError::NoUnitFound { .. })
        ));
    }
}
