use std::fmt::Write;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Group, NormError, NormEval};
use crate::exec::Execution;

pub const AXIOMS: [&str; 5] = ["positivity", "definiteness", "symmetry", "triangle", "conjugation"];

/// Violations kept verbatim per axiom.
const KEEP: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub samples: usize,
    pub violations: usize,
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessReport {
    pub norm: String,
    pub domain: String,
    pub seed: u64,
    pub results: Vec<AxiomResult>,
    /// Extra `# ` lines printed under the header.
    pub notes: Vec<String>,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.violations == 0)
    }

    pub fn violations(&self, axiom: &str) -> usize {
        self.results
            .iter()
            .filter(|r| r.axiom == axiom)
            .map(|r| r.violations)
            .sum()
    }

    /// One `axiom=<name> samples=<k> violations=<v>` line per axiom, each
    /// followed by its kept counterexamples.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# norm={} domain={} seed={}", self.norm, self.domain, self.seed);
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        for r in &self.results {
            let _ = writeln!(
                out,
                "axiom={} samples={} violations={}",
                r.axiom, r.samples, r.violations
            );
            for e in &r.examples {
                let _ = writeln!(out, "  {e}");
            }
        }
        out
    }
}

fn show(v: &Result<BigRational, NormError>) -> String {
    match v {
        Ok(x) => x.to_string(),
        Err(e) => format!("error({e})"),
    }
}

/// Checks every axiom on `samples` random tuples. Sample `k` draws from
/// its own ChaCha stream, so the report depends only on `seed`.
pub fn axiom_harness<G: Group>(
    group: &G,
    norm: &NormEval<G::Elem>,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> HarnessReport {
    let id = group.identity();
    let id_value = norm.evaluate(&id);
    let id_bad = !matches!(&id_value, Ok(v) if v.is_zero());

    let per_sample = exec.map_range(samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let g = group.sample(&mut rng);
        let h = group.sample(&mut rng);
        let s = group.sample_actor(&mut rng);
        let ng = norm.evaluate(&g);
        let nh = norm.evaluate(&h);
        let mut out: [Option<String>; 5] = Default::default();

        out[0] = match &ng {
            Ok(v) if !v.is_negative() => None,
            _ => Some(format!("g={g:?} ||g||={}", show(&ng))),
        };
        out[1] = match &ng {
            Ok(v) if v.is_zero() == (g == id) => None,
            _ => Some(format!("g={g:?} ||g||={}", show(&ng))),
        };
        let ngi = norm.evaluate(&group.inv(&g));
        out[2] = match (&ng, &ngi) {
            (Ok(a), Ok(b)) if a == b => None,
            _ => Some(format!("g={g:?} ||g||={} ||g^-1||={}", show(&ng), show(&ngi))),
        };
        let ngh = norm.evaluate(&group.mul(&g, &h));
        out[3] = match (&ng, &nh, &ngh) {
            (Ok(a), Ok(b), Ok(c)) if *c <= a + b => None,
            _ => Some(format!(
                "g={g:?} h={h:?} ||g||={} ||h||={} ||gh||={}",
                show(&ng),
                show(&nh),
                show(&ngh)
            )),
        };
        let nsg = norm.evaluate(&group.act(&s, &g));
        out[4] = match (&ng, &nsg) {
            (Ok(a), Ok(b)) if a == b => None,
            _ => Some(format!("g={g:?} s={s:?} ||g||={} ||s.g||={}", show(&ng), show(&nsg))),
        };
        out
    });

    let mut results: Vec<AxiomResult> = AXIOMS
        .iter()
        .map(|&axiom| AxiomResult {
            axiom,
            samples,
            violations: 0,
            examples: Vec::new(),
        })
        .collect();
    if id_bad {
        results[1].violations += 1;
        results[1].examples.push(format!("identity ||e||={}", show(&id_value)));
    }
    for row in per_sample {
        for (r, v) in results.iter_mut().zip(row) {
            if let Some(v) = v {
                r.violations += 1;
                if r.examples.len() < KEEP {
                    r.examples.push(v);
                }
            }
        }
    }
    HarnessReport {
        norm: norm.describe(),
        domain: group.describe(),
        seed,
        results,
        notes: Vec::new(),
    }
}
