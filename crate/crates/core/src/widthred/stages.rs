use super::sr::{unimodular_certificate, unimodular_square_shift};
use super::{Builder, CaseTag, Membership, OpKind, ReductionTrace, TraceStep, WidthError};
use crate::elemgen::{ElemFactor, ElemFactorization};
use crate::exec::Execution;
use crate::matrix::{is_central, SqMatrix};
use crate::ring::{Ideal, RingElement};

/// Which affine copy step 1 landed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    /// `[[gamma, v], [0, 1]]`
    G1,
    /// `[[1, v^T], [0, gamma]]`
    G2,
}

/// Steps of one stage, with a ledger starting at 1, and the stage output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageResult {
    pub steps: Vec<TraceStep>,
    pub output: SqMatrix,
}

impl From<Builder> for StageResult {
    fn from(b: Builder) -> Self {
        StageResult {
            steps: b.steps,
            output: b.current,
        }
    }
}

/// Product of elementary factors together with its witness.
fn elementary_product(g: &SqMatrix, factors: Vec<(usize, usize, RingElement)>) -> (SqMatrix, Membership) {
    let factors = factors
        .into_iter()
        .filter(|(_, _, a)| !a.is_zero())
        .map(|(i, j, a)| ElemFactor { i, j, a })
        .collect();
    let f = ElemFactorization::from_factors(g.ring(), g.dim(), factors).expect("valid factors");
    (f.target.clone(), Membership::Elementary(f))
}

fn elementary_op(g: &SqMatrix, i: usize, j: usize, a: RingElement) -> (SqMatrix, Membership) {
    elementary_product(g, vec![(i, j, a)])
}

fn check_common(sigma: &SqMatrix, q: &Ideal) -> Result<RingElement, WidthError> {
    let ring = sigma.ring();
    if q.ring() != ring {
        return Err(WidthError::Ring(crate::ring::RingError::MismatchedRings {
            left: ring,
            right: q.ring(),
        }));
    }
    if sigma.dim() < 3 {
        return Err(WidthError::BadDimension {
            found: sigma.dim(),
            need: "n >= 3",
        });
    }
    if q.is_zero() {
        return Err(WidthError::ZeroIdeal);
    }
    if !ring.is_domain() {
        return Err(WidthError::NotDomain(ring));
    }
    if !sigma.is_special() {
        return Err(WidthError::NotSpecial);
    }
    if !sigma.minus_identity().iter().all(|e| q.contains(e).expect("same ring")) {
        return Err(WidthError::NotCongruent);
    }
    if is_central(sigma) {
        return Err(WidthError::CentralInput);
    }
    Ok(q.canonical_generator().clone())
}

fn commutes(a: &SqMatrix, b: &SqMatrix) -> bool {
    a * b == b * a
}

/// Case 1 of step 1: the first column of the current matrix is `u e_1`.
fn case1(b: &mut Builder, p: &RingElement, second: bool) -> Result<(), WidthError> {
    let g = b.current.clone();
    let n = g.dim();
    let ring = g.ring();
    let inner = g.block(1, n - 1);
    let (k, l, tag) = if !inner.is_scalar() {
        // some I + e_kl fails to commute with a non-scalar matrix
        let mut found = None;
        'search: for k in 1..n {
            for l in 1..n {
                if k != l {
                    let e = SqMatrix::elementary(ring, n - 1, k, l, ring.one())?;
                    if !commutes(&inner, &e) {
                        found = Some((k, l));
                        break 'search;
                    }
                }
            }
        }
        let (k, l) = found.ok_or(WidthError::Internal("step1 case1 non-scalar block"))?;
        let tag = if second {
            CaseTag::Step1Case2aNonScalar
        } else {
            CaseTag::Step1Case1NonScalar
        };
        (k, l, tag)
    } else {
        let k = (1..n)
            .find(|&k| !g.get(1, k + 1).is_zero())
            .ok_or(WidthError::Internal("step1 case1 zero translation"))?;
        let l = if k == 1 { 2 } else { 1 };
        let tag = if second {
            CaseTag::Step1Case2aScalar
        } else {
            CaseTag::Step1Case1Scalar
        };
        (k, l, tag)
    };
    let (s, w) = elementary_op(&g, k + 1, l + 1, p.clone());
    b.apply(OpKind::CommRight, s, w, tag)?;
    if !b.current.in_g2() || is_central(&b.current) {
        return Err(WidthError::Internal("step1 case1 output"));
    }
    Ok(())
}

fn first_column_is_unit_e1(g: &SqMatrix) -> bool {
    g.get(1, 1).is_unit() && (2..=g.dim()).all(|r| g.get(r, 1).is_zero())
}

fn step1(b: &mut Builder, p: &RingElement) -> Result<Location, WidthError> {
    let locate = |g: &SqMatrix| {
        if g.in_g1() {
            Some(Location::G1)
        } else if g.in_g2() {
            Some(Location::G2)
        } else {
            None
        }
    };
    if let Some(loc) = locate(&b.current) {
        return Ok(loc);
    }
    let n = b.current.dim();
    let (tau, tau_w) = elementary_op(&b.current, 1, 2, p.clone());
    if b.current.commutator(&tau)?.is_identity() {
        if !first_column_is_unit_e1(&b.current) {
            return Err(WidthError::Internal("step1 case1 first column"));
        }
        case1(b, p, false)?;
        return Ok(Location::G2);
    }

    // Case 2: make (a_1, ..., a_{n-1}) unimodular.
    let alpha = b.current.column(1);
    if unimodular_certificate(&alpha[..n - 1])?.is_none() {
        let w = unimodular_square_shift(&alpha)?;
        let an = &alpha[n - 1];
        let factors = (0..n - 1).map(|i| (i + 1, n, an * &w.t[i])).collect();
        let (mu, mu_w) = elementary_product(&b.current, factors);
        b.apply(OpKind::Conjugate, mu, mu_w, CaseTag::Step1Case2Shift)?;
        if b.current.commutator(&tau)?.is_identity() {
            case1(b, p, false)?;
            return Ok(Location::G2);
        }
    }
    let alpha = b.current.column(1);
    let d = unimodular_certificate(&alpha[..n - 1])?.ok_or(WidthError::Internal("step1 shift"))?;
    let an = alpha[n - 1].clone();
    b.apply(
        OpKind::CommRight,
        tau.clone(),
        tau_w.clone(),
        CaseTag::Step1Case2Commute,
    )?;
    if !an.is_zero() {
        // s = lambda^-1, lambda = [[I, 0], [a_n d, 1]]
        let factors = (0..n - 1).map(|k| (n, k + 1, -&(&an * &d[k]))).collect();
        let (s, w) = elementary_product(&b.current, factors);
        if !s.is_identity() {
            b.apply(OpKind::Conjugate, s, w, CaseTag::Step1Case2Conjugate)?;
        }
    }
    if is_central(&b.current) {
        return Err(WidthError::Internal("step1 rho central"));
    }
    // Over a domain [rho, tau] = I already forces rho into G2; the branch is
    // still taken so that its output has the Case 1 shape.
    if b.current.commutator(&tau)?.is_identity() {
        if !first_column_is_unit_e1(&b.current) {
            return Err(WidthError::Internal("step1 case2a first column"));
        }
        case1(b, p, true)?;
        return Ok(Location::G2);
    }
    if let Some(loc) = locate(&b.current) {
        return Ok(loc);
    }
    b.apply(OpKind::CommRight, tau, tau_w, CaseTag::Step1Case2b)?;
    if !b.current.in_g1() || is_central(&b.current) {
        return Err(WidthError::Internal("step1 case2b output"));
    }
    Ok(Location::G1)
}

/// Reduce `sigma` to a non-central matrix in `G1` or `G2` with at most
/// four q-operations, `p` the canonical generator of `q`.
pub fn reduce_to_affine(sigma: &SqMatrix, q: &Ideal) -> Result<(StageResult, Location), WidthError> {
    let p = check_common(sigma, q)?;
    let mut b = Builder::new(sigma);
    let loc = step1(&mut b, &p)?;
    Ok((b.into(), loc))
}

fn step2(b: &mut Builder, p: &RingElement) -> Result<(), WidthError> {
    let g = b.current.clone();
    let n = g.dim();
    if g.in_g1() {
        let gamma = g.block(0, n - 1);
        if gamma.is_identity() {
            return Ok(());
        }
        // v' = p e_k with gamma e_k != e_k
        let k = (1..n)
            .find(|&k| (1..n).any(|r| g.get(r, k) != &if r == k { g.ring().one() } else { g.ring().zero() }))
            .ok_or(WidthError::Internal("step2 column"))?;
        let (s, w) = elementary_op(&g, k, n, p.clone());
        b.apply(OpKind::CommRight, s, w, CaseTag::Step2Column)?;
    } else if g.in_g2() {
        let gamma = g.block(1, n - 1);
        if gamma.is_identity() {
            return Ok(());
        }
        // w' = p e_k with e_k^T gamma^-1 != e_k^T
        let gi = gamma.inverse()?;
        let k = (1..n)
            .find(|&k| (1..n).any(|c| gi.get(k, c) != &if c == k { g.ring().one() } else { g.ring().zero() }))
            .ok_or(WidthError::Internal("step2 row"))?;
        let (s, w) = elementary_op(&g, 1, k + 1, p.clone());
        b.apply(OpKind::CommRight, s, w, CaseTag::Step2Row)?;
    } else {
        return Err(WidthError::WrongForm("not in G1 or G2"));
    }
    if form(&b.current).is_none() || b.current.is_identity() {
        return Err(WidthError::Internal("step2 output"));
    }
    Ok(())
}

/// Strip the linear part of a non-central element of `G1` or `G2`.
pub fn strip_to_translation(g: &SqMatrix, q: &Ideal) -> Result<StageResult, WidthError> {
    if is_central(g) {
        return Err(WidthError::CentralInput);
    }
    let mut b = Builder::new(g);
    step2(&mut b, q.canonical_generator())?;
    Ok(b.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    /// `I + sum v_k e_kn`
    Column,
    /// `I + sum w_k e_1k`
    Row,
}

fn form(g: &SqMatrix) -> Option<Form> {
    let n = g.dim();
    let off_ok = |allowed: &dyn Fn(usize, usize) -> bool| {
        (1..=n).all(|r| {
            (1..=n).all(|c| {
                let e = g.get(r, c);
                if r == c {
                    e.is_one()
                } else {
                    allowed(r, c) || e.is_zero()
                }
            })
        })
    };
    if off_ok(&|_, c| c == n) {
        Some(Form::Column)
    } else if off_ok(&|r, _| r == 1) {
        Some(Form::Row)
    } else {
        None
    }
}

fn step3(b: &mut Builder, p: &RingElement) -> Result<(), WidthError> {
    let g = b.current.clone();
    let n = g.dim();
    match form(&g) {
        Some(Form::Column) => {
            let Some(j) = (2..n).find(|&j| !g.get(j, n).is_zero()) else {
                return Ok(());
            };
            let (s, w) = elementary_op(&g, 1, j, p.clone());
            b.apply(OpKind::CommRight, s, w, CaseTag::Step3Column)?;
        }
        Some(Form::Row) => {
            let Some(j) = (2..n).find(|&j| !g.get(1, j).is_zero()) else {
                return Ok(());
            };
            let (s, w) = elementary_op(&g, j, n, p.clone());
            b.apply(OpKind::CommRight, s, w, CaseTag::Step3Row)?;
        }
        None => return Err(WidthError::WrongForm("not a translation")),
    }
    match b.current.as_elementary() {
        Some((1, c, _)) if c == n => Ok(()),
        _ => Err(WidthError::Internal("step3 output")),
    }
}

/// Turn a non-central translation into a nontrivial `I + c e_1n`.
pub fn translation_to_elementary(g: &SqMatrix, q: &Ideal) -> Result<StageResult, WidthError> {
    if is_central(g) {
        return Err(WidthError::CentralInput);
    }
    let mut b = Builder::new(g);
    step3(&mut b, q.canonical_generator())?;
    Ok(b.into())
}

fn step4(b: &mut Builder, target: (usize, usize), p: &RingElement) -> Result<(), WidthError> {
    let (i, j) = target;
    for _ in 0..3 {
        let g = b.current.clone();
        let (k, l, _) = g.as_elementary().ok_or(WidthError::WrongForm("not elementary"))?;
        if (k, l) == (i, j) {
            return Ok(());
        }
        let n = g.dim();
        if j == l {
            let (s, w) = elementary_op(&g, i, k, p.clone());
            b.apply(OpKind::CommLeft, s, w, CaseTag::Step4Case1)?;
        } else if i == k {
            let (s, w) = elementary_op(&g, l, j, p.clone());
            b.apply(OpKind::CommRight, s, w, CaseTag::Step4Case1)?;
        } else if k != j {
            let (s, w) = elementary_op(&g, l, j, p.clone());
            b.apply(OpKind::CommRight, s, w, CaseTag::Step4Case2Distinct)?;
        } else {
            let h = if i != l {
                i
            } else {
                (1..=n).find(|&h| h != k && h != l).expect("n >= 3")
            };
            let (s, w) = elementary_op(&g, h, k, p.clone());
            b.apply(OpKind::CommLeft, s, w, CaseTag::Step4Case2KeqJ)?;
        }
    }
    match b.current.as_elementary() {
        Some((k, l, _)) if (k, l) == (i, j) => Ok(()),
        _ => Err(WidthError::Internal("step4 output")),
    }
}

fn check_target(n: usize, target: (usize, usize)) -> Result<(), WidthError> {
    let (i, j) = target;
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(WidthError::BadTarget(i, j));
    }
    Ok(())
}

/// Move a nontrivial `I + r e_kl` to `E_ij(q)` with at most three
/// commutators.
pub fn relocate_elementary(g: &SqMatrix, target: (usize, usize), q: &Ideal) -> Result<StageResult, WidthError> {
    let n = g.dim();
    if n < 3 {
        return Err(WidthError::BadDimension {
            found: n,
            need: "n >= 3",
        });
    }
    check_target(n, target)?;
    if g.is_identity() {
        return Err(WidthError::TrivialInput);
    }
    let mut b = Builder::new(g);
    step4(&mut b, target, q.canonical_generator())?;
    Ok(b.into())
}

/// The full pipeline: steps 1 to 4 in sequence.
pub fn reduce_full(sigma: &SqMatrix, q: &Ideal, target: (usize, usize)) -> Result<ReductionTrace, WidthError> {
    let p = check_common(sigma, q)?;
    check_target(sigma.dim(), target)?;
    let mut b = Builder::new(sigma);
    if b.current.as_elementary().is_none() {
        step1(&mut b, &p)?;
        step2(&mut b, &p)?;
        if b.current.as_elementary().is_none() {
            step3(&mut b, &p)?;
        }
    }
    step4(&mut b, target, &p)?;
    Ok(ReductionTrace {
        input: sigma.clone(),
        ideal: q.clone(),
        target,
        steps: b.steps,
        output: b.current,
    })
}

/// [`reduce_full`] over every input and target, in input-major order.
pub fn reduce_batch(
    inputs: &[SqMatrix],
    q: &Ideal,
    targets: &[(usize, usize)],
    exec: Execution,
) -> Vec<Result<ReductionTrace, WidthError>> {
    let pairs: Vec<(&SqMatrix, (usize, usize))> = inputs
        .iter()
        .flat_map(|s| targets.iter().map(move |&t| (s, t)))
        .collect();
    exec.map(&pairs, |(s, t)| reduce_full(s, q, *t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn ideal(v: i64) -> Ideal {
        Ideal::principal(z().int(v))
    }

    fn m(rows: &[&[i64]]) -> SqMatrix {
        SqMatrix::from_ints(z(), rows).unwrap()
    }

    #[test]
    fn block_input_short_circuits() {
        let g = m(&[&[1, 0, 2], &[0, 1, 0], &[0, 0, 1]]);
        let (r, loc) = reduce_to_affine(&g, &ideal(2)).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(loc, Location::G1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let id = SqMatrix::identity(z(), 3).unwrap();
        assert_eq!(reduce_to_affine(&id, &ideal(2)).unwrap_err(), WidthError::CentralInput);
        let g = m(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(reduce_to_affine(&g, &ideal(2)).unwrap_err(), WidthError::NotCongruent);
        assert_eq!(reduce_to_affine(&g, &ideal(0)).unwrap_err(), WidthError::ZeroIdeal);
        let z4 = RingSpec::integers_mod(4).unwrap();
        let g = SqMatrix::elementary(z4, 3, 1, 2, z4.one()).unwrap();
        assert!(matches!(
            reduce_full(&g, &Ideal::whole(z4), (1, 2)),
            Err(WidthError::NotDomain(_))
        ));
    }

    #[test]
    fn step3_formula() {
        // v = (0, 3) over Z with q = (2): [sigma, I + 2 e_12] = I - 6 e_13
        let g = m(&[&[1, 0, 0], &[0, 1, 3], &[0, 0, 1]]);
        let r = translation_to_elementary(&g, &ideal(2)).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.output, SqMatrix::elementary(z(), 3, 1, 3, z().int(-6)).unwrap());
    }

    #[test]
    fn step4_case1_formula() {
        let g = SqMatrix::elementary(z(), 3, 1, 3, z().int(2)).unwrap();
        let r = relocate_elementary(&g, (1, 2), &ideal(2)).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].op.s, SqMatrix::elementary(z(), 3, 3, 2, z().int(2)).unwrap());
        assert_eq!(r.output, SqMatrix::elementary(z(), 3, 1, 2, z().int(4)).unwrap());
    }

    #[test]
    fn elementary_input_at_target_is_free() {
        let g = SqMatrix::elementary(z(), 3, 1, 2, z().int(2)).unwrap();
        let t = reduce_full(&g, &ideal(2), (1, 2)).unwrap();
        assert!(t.steps.is_empty());
        t.validate().unwrap();
    }

    #[test]
    fn all_relocations_within_three() {
        let g = SqMatrix::elementary(z(), 4, 2, 1, z().int(2)).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j {
                    let r = relocate_elementary(&g, (i, j), &ideal(2)).unwrap();
                    assert!(r.steps.len() <= 3);
                    assert_eq!(r.output.as_elementary().map(|(a, b, _)| (a, b)), Some((i, j)));
                }
            }
        }
    }
}
