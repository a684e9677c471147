//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use conjwidth::census::{enumerate_sl, sl_order, sum_identity_symbolic, verify_sum_identity, width_bfs, width_census};
use conjwidth::elemgen::{decompose_elementary, factor_count_census};
use conjwidth::norms::{self, axiom_harness, dirac, models, scaling_check, shrink_ideal, FiniteGroup, HarnessReport};
use conjwidth::widthred::{
    expand_trace_word, reduce_full, unit_trick_se4, word_product, CaseTag, ReductionTrace, Se4Side, MAX_STEPS,
    MAX_WORD_LENGTH,
};
use conjwidth::{Execution, Ideal, RingSpec, SqMatrix};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 20240531;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn targets(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

fn random_elementary_product(
    rng: &mut ChaCha8Rng,
    ring: RingSpec,
    n: usize,
    len: usize,
    scale: i64,
    range: i64,
) -> SqMatrix {
    let mut g = SqMatrix::identity(ring, n).unwrap();
    for _ in 0..len {
        let i = rng.gen_range(1..=n);
        let mut j = rng.gen_range(1..n);
        if j >= i {
            j += 1;
        }
        let a = scale * rng.gen_range(-range..=range);
        g = &g * &SqMatrix::elementary(ring, n, i, j, ring.int(a)).unwrap();
    }
    g
}

/// Full check of one trace: replay, budget, target, text round trip and
/// word expansion.
fn full_trace_check(t: &ReductionTrace) -> Result<(), String> {
    t.validate().map_err(|e| format!("invalid trace: {e}"))?;
    let text = t.to_text();
    let (back, _) = ReductionTrace::from_text(&text).map_err(|e| e.to_string())?;
    check(back == *t && back.to_text() == text, || {
        "text round trip differs".into()
    })?;
    back.replay().map_err(|e| e.to_string())?;
    let word = expand_trace_word(t);
    check(word.len() as u64 == t.word_length(), || {
        "word length differs from ledger".into()
    })?;
    let product = word_product(&t.input, &word).map_err(|e| e.to_string())?;
    check(product == t.output, || {
        "expanded word does not multiply to the output".into()
    })
}

fn criterion1() -> Outcome {
    let f2 = RingSpec::integers_mod(2).unwrap();
    let t = enumerate_sl(3, f2, 1000).map_err(|e| e.to_string())?;
    check(t.order() == 168, || format!("order {}", t.order()))?;
    let s = width_census(&t, &Ideal::whole(f2), Execution::default()).map_err(|e| e.to_string())?;
    let sigmas = s.rows.len() / 6;
    check(s.unreachable() == 0, || format!("{} unreachable rows", s.unreachable()))?;
    let max_ops = s.max_ops().unwrap_or(0);
    let max_len = s.max_len().unwrap_or(0);
    check(max_ops <= 9, || format!("max ops {max_ops}"))?;
    check(max_len <= 512, || format!("max word length {max_len}"))?;
    Ok(format!(
        "{sigmas} non-central sigma x 6 targets, max ops {max_ops} <= 9, max word length {max_len} <= 512"
    ))
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let z = RingSpec::Integers;
    let q = Ideal::principal(z.int(2));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut inputs = Vec::new();
    while inputs.len() < 100 {
        let g = random_elementary_product(&mut rng, z, 3, 10, 2, 3);
        if !g.is_scalar() {
            inputs.push(g);
        }
    }
    let mut traces = 0;
    let (mut max_steps, mut max_len) = (0, 0);
    for g in &inputs {
        for target in targets(3) {
            let t = reduce_full(g, &q, target).map_err(|e| format!("{target:?}: {e}"))?;
            full_trace_check(&t)?;
            let c = t.stage_counts();
            check(c[1] <= 4 && c[2] <= 1 && c[3] <= 1 && c[4] <= 3, || {
                format!("stage counts {c:?}")
            })?;
            max_steps = max_steps.max(t.steps.len());
            max_len = max_len.max(t.word_length());
            traces += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{traces} traces valid, max steps {max_steps} <= {MAX_STEPS}, max word length {max_len} <= {MAX_WORD_LENGTH}, {secs:.2}s"))
}

fn criterion3() -> Outcome {
    let z = RingSpec::Integers;
    let f3 = RingSpec::integers_mod(3).unwrap();
    let f7 = RingSpec::integers_mod(7).unwrap();
    let f13 = RingSpec::integers_mod(13).unwrap();
    let two = Ideal::principal(z.int(2));
    let cases: Vec<(SqMatrix, Ideal, (usize, usize))> = vec![
        // first column -e1, non-scalar lower block
        (
            SqMatrix::from_ints(z, &[&[-1, 0, 0], &[0, -1, 0], &[0, 2, 1]]).unwrap(),
            two.clone(),
            (1, 2),
        ),
        // first column 2 e1 over F7, scalar lower block 2I (2^3 = 1)
        (
            SqMatrix::from_ints(f7, &[&[2, 1, 0], &[0, 2, 0], &[0, 0, 2]]).unwrap(),
            Ideal::whole(f7),
            (1, 2),
        ),
        // Case 2 with a shift, rho commuting with tau
        (
            SqMatrix::from_ints(z, &[&[9, 0, 4], &[0, 1, 0], &[2, 0, 1]]).unwrap(),
            two.clone(),
            (1, 2),
        ),
        (
            SqMatrix::from_ints(z, &[&[1, 0, 0], &[0, 1, 0], &[-4, -2, 1]]).unwrap(),
            two.clone(),
            (2, 1),
        ),
        (
            SqMatrix::from_ints(f3, &[&[2, 0, 1], &[0, 1, 1], &[0, 0, 2]]).unwrap(),
            Ideal::whole(f3),
            (1, 2),
        ),
        // Case 2, rho not commuting with tau
        (
            SqMatrix::from_ints(z, &[&[1, 0, 0], &[-4, 1, -2], &[2, 0, 1]]).unwrap(),
            two.clone(),
            (1, 2),
        ),
        // column form, then the three step-4 shapes
        (
            SqMatrix::from_ints(z, &[&[1, 0, -4], &[4, 1, 0], &[0, 0, 1]]).unwrap(),
            two.clone(),
            (1, 2),
        ),
        (
            SqMatrix::from_ints(z, &[&[1, 0, 0], &[-2, 1, 0], &[0, 0, 1]]).unwrap(),
            two.clone(),
            (1, 3),
        ),
        (
            SqMatrix::from_ints(z, &[&[1, 0, 0], &[-2, 1, 0], &[0, 0, 1]]).unwrap(),
            two.clone(),
            (3, 2),
        ),
        (
            SqMatrix::from_ints(z, &[&[1, 0, 0], &[-2, 1, 0], &[0, 0, 1]]).unwrap(),
            two.clone(),
            (2, 3),
        ),
        // row form and its step 3
        (
            SqMatrix::from_ints(z, &[&[1, 2, 0], &[0, 1, 0], &[0, 4, 1]]).unwrap(),
            two.clone(),
            (1, 2),
        ),
        (
            SqMatrix::from_ints(z, &[&[1, 0, 0], &[0, 1, 4], &[0, -4, -15]]).unwrap(),
            two.clone(),
            (1, 2),
        ),
    ];
    let mut seen = BTreeSet::new();
    for (g, q, target) in &cases {
        let t = reduce_full(g, q, *target).map_err(|e| format!("{g:?}: {e}"))?;
        full_trace_check(&t)?;
        seen.extend(t.steps.iter().map(|s| s.case));
    }
    let g = SqMatrix::from_ints(f13, &[&[2, 3], &[1, 2]]).unwrap();
    for side in [Se4Side::E12, Se4Side::E21] {
        let t = unit_trick_se4(&g, &Ideal::whole(f13), side).map_err(|e| e.to_string())?;
        full_trace_check(&t)?;
        check(t.word_length() <= 4, || "se4 longer than 4".into())?;
        seen.extend(t.steps.iter().map(|s| s.case));
    }
    let required = [
        "step1.case1.nonscalar",
        "step1.case1.scalar",
        "step1.case2.shift",
        "step1.case2.commute",
        "step1.case2.conjugate",
        "step1.case2a.nonscalar",
        "step1.case2a.scalar",
        "step1.case2b",
        "step2.column",
        "step2.row",
        "step3.column",
        "step3.row",
        "step4.case1",
        "step4.case2.distinct",
        "step4.case2.keqj",
    ];
    let names: BTreeSet<String> = seen.iter().map(|c| c.to_string()).collect();
    let missing: Vec<&str> = required.iter().copied().filter(|r| !names.contains(*r)).collect();
    check(missing.is_empty(), || format!("tags never hit: {missing:?}"))?;
    for side in [Se4Side::E12, Se4Side::E21] {
        check(
            seen.iter().any(|c| matches!(c, CaseTag::Se4(s, _) if *s == side)),
            || format!("se4 {side:?} not hit"),
        )?;
    }
    Ok(format!(
        "{} tags hit by {} constructed inputs, all traces valid",
        seen.len(),
        cases.len() + 2
    ))
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    check(verify_sum_identity(1, 0, 0, 0, 0).holds, || "(1,0,0,0,0) fails".into())?;
    for _ in 0..10_000 {
        let v: Vec<i64> = (0..5).map(|_| rng.gen_range(-50..=50)).collect();
        let r = verify_sum_identity(v[0], v[1], v[2], v[3], v[4]);
        check(r.holds, || format!("{v:?}: {:?} != {:?}", r.lhs, r.rhs))?;
    }
    check(sum_identity_symbolic(), || "symbolic expansion differs".into())?;
    Ok(format!(
        "10000 random tuples and the symbolic check agree, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn criterion5() -> Outcome {
    const SAMPLES: usize = 1000;
    let exec = Execution::default();
    let mut reports: Vec<HarnessReport> = Vec::new();
    let f3 = RingSpec::integers_mod(3).unwrap();
    let table = Arc::new(enumerate_sl(2, f3, 1000).map_err(|e| e.to_string())?);
    let finite = FiniteGroup::whole(table.clone(), "SL2(F3)");
    reports.push(axiom_harness(
        &finite,
        &dirac(table.identity(), "SL2(F3)"),
        SAMPLES,
        SEED,
        exec,
    ));
    let z = RingSpec::Integers;
    let (g, n) = models::filtration(z, 3, &Ideal::principal(z.int(2)), 5).map_err(|e| e.to_string())?;
    reports.push(axiom_harness(&g, &n, SAMPLES, SEED, exec));
    reports.push(axiom_harness(&g, &norms::bounded_transform(n), SAMPLES, SEED, exec));
    let (g, n) = models::singular_sl3z(SEED).map_err(|e| e.to_string())?;
    reports.push(axiom_harness(&g, &n, SAMPLES, SEED, exec));
    let (g, n) = models::quotient_sl2z().map_err(|e| e.to_string())?;
    reports.push(axiom_harness(&g, &n, SAMPLES, SEED, exec));
    let (g, n) = models::average_sl3_mod4().map_err(|e| e.to_string())?;
    reports.push(axiom_harness(&g, &n, SAMPLES, SEED, exec));
    let (g, n) = models::product().map_err(|e| e.to_string())?;
    reports.push(axiom_harness(&g, &n, SAMPLES, SEED, exec));
    let (g, n) = models::z2_mixed(2);
    reports.push(axiom_harness(&g, &n, SAMPLES, SEED, exec));
    let (g, n) = models::word_sl2_f3().map_err(|e| e.to_string())?;
    reports.push(axiom_harness(&g, &n, SAMPLES, SEED, exec));
    let bad: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.to_text()).collect();
    check(bad.is_empty(), || bad.join("\n"))?;
    let tags: Vec<&str> = reports.iter().map(|r| r.norm.split('(').next().unwrap_or("")).collect();
    Ok(format!(
        "{} constructions x {SAMPLES} samples, 0 violations: {}",
        reports.len(),
        tags.join(" ")
    ))
}

fn criterion6() -> Outcome {
    let (_, n) = models::twoadic();
    let r = scaling_check(&n, 1000, SEED, Execution::default());
    check(r.violations == 0, || format!("{:?}", r.examples))?;
    let mut found = Vec::new();
    for eps in [
        BigRational::new(1.into(), 4.into()),
        BigRational::new(1.into(), 16.into()),
    ] {
        let s = shrink_ideal(&n, &eps, 1000, SEED).map_err(|e| e.to_string())?;
        check(s.violations == 0 && s.checked == 1000, || {
            format!("eps {eps}: {} of {} outside", s.violations, s.checked)
        })?;
        found.push(format!("eps {eps} -> ({})", s.generator));
    }
    Ok(format!("1000 scaling samples hold; {}", found.join(", ")))
}

fn criterion7() -> Outcome {
    let z = RingSpec::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let g = random_elementary_product(&mut rng, z, 3, 20, 1, 3);
        let f = decompose_elementary(&g).map_err(|e| e.to_string())?;
        check(f.verify() && f.product() == g, || format!("{g:?} does not re-multiply"))?;
    }
    let f3 = RingSpec::integers_mod(3).unwrap();
    let t = enumerate_sl(2, f3, 1000).map_err(|e| e.to_string())?;
    for g in t.elements() {
        let f = decompose_elementary(g).map_err(|e| e.to_string())?;
        check(f.product() == *g, || format!("{g:?} does not re-multiply"))?;
    }
    let mut totals = Vec::new();
    for (n, p) in [(2usize, 2u64), (2, 3), (2, 5), (3, 2)] {
        let ring = RingSpec::integers_mod(p).unwrap();
        let c = factor_count_census(n, ring, 1_000_000, Execution::default()).map_err(|e| e.to_string())?;
        let total: usize = c.histogram.values().sum();
        let order = sl_order(n, p).unwrap() as usize;
        check(total == order && c.order == order, || {
            format!("SL{n}(F{p}): total {total}, order {order}")
        })?;
        check(c.histogram.get(&0) == Some(&1), || "identity bucket".into())?;
        totals.push(format!("SL{n}(F{p})={total}"));
    }
    Ok(format!(
        "1000 SL3(Z) products and all 24 of SL2(Z/3) re-multiply; census totals {}",
        totals.join(" ")
    ))
}

fn criterion8() -> Outcome {
    let f2 = RingSpec::integers_mod(2).unwrap();
    let t = enumerate_sl(3, f2, 1000).map_err(|e| e.to_string())?;
    let q = Ideal::whole(f2);
    let mut compared = 0;
    let mut tightest = 0;
    for k in 0..t.order() {
        if t.is_central(k) {
            continue;
        }
        let rows = width_bfs(&t, k, &q, &targets(3)).map_err(|e| e.to_string())?;
        for row in rows {
            let tr = reduce_full(t.element(k), &q, row.target).map_err(|e| format!("{k} {:?}: {e}", row.target))?;
            tr.validate().map_err(|e| e.to_string())?;
            let (ops, len) = (row.min_ops.ok_or("unreachable")?, row.min_len.ok_or("unreachable")?);
            check(ops as usize <= tr.steps.len() && len as u64 <= tr.word_length(), || {
                format!(
                    "sigma {k} {:?}: bfs ({ops}, {len}) vs trace ({}, {})",
                    row.target,
                    tr.steps.len(),
                    tr.word_length()
                )
            })?;
            tightest += usize::from(ops as usize == tr.steps.len());
            compared += 1;
        }
    }
    let f5 = RingSpec::integers_mod(5).unwrap();
    let t5 = enumerate_sl(2, f5, 1000).map_err(|e| e.to_string())?;
    let q5 = Ideal::whole(f5);
    let (mut se4_ok, mut se4_none) = (0, 0);
    for k in 0..t5.order() {
        if t5.is_central(k) {
            continue;
        }
        for (side, target) in [(Se4Side::E12, (1, 2)), (Se4Side::E21, (2, 1))] {
            match unit_trick_se4(t5.element(k), &q5, side) {
                Ok(tr) => {
                    tr.validate().map_err(|e| e.to_string())?;
                    let row = &width_bfs(&t5, k, &q5, &[target]).map_err(|e| e.to_string())?[0];
                    let (ops, len) = (row.min_ops.ok_or("unreachable")?, row.min_len.ok_or("unreachable")?);
                    check(ops as usize <= tr.steps.len() && len as u64 <= tr.word_length(), || {
                        format!(
                            "SL2(Z/5) sigma {k}: bfs ({ops}, {len}) vs trace ({}, {})",
                            tr.steps.len(),
                            tr.word_length()
                        )
                    })?;
                    se4_ok += 1;
                }
                Err(_) => se4_none += 1,
            }
        }
    }
    check(se4_ok > 0, || "se4 applied to no element of SL2(Z/5)".into())?;
    Ok(format!(
        "SL3(F2): {compared} (sigma, target) pairs, BFS <= trace ({tightest} with equal op count); \
         SL2(Z/5) se4: {se4_ok} traces compared, {se4_none} without a usable unit"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("exhaustive width budget on SL3(F2)", criterion1),
        ("randomized pipeline on Gamma(2) in SL3(Z)", criterion2),
        ("branch coverage", criterion3),
        ("five-term sum identity", criterion4),
        ("norm axioms", criterion5),
        ("2Z+2Z scaling and ideal shrinking", criterion6),
        ("elementary decomposition", criterion7),
        ("oracle consistency", criterion8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {}: PASS {name} [{secs:.2}s] {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{secs:.2}s] {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
