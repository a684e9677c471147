//! TOML description of a norm to check.
//!
//! ```toml
//! norm = "filtration"   # dirac filtration bounded singular quotient average
//!                       # word product z2-mixed twoadic zero
//! ring = "Z"
//! n = 3
//! ideal = "2"
//! values = ["1", "1/2", "1/4", "1/8", "1/16", "1/32"]
//! samples = 1000
//! seed = 7
//! ```

use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use super::{
    axiom_harness, bounded_transform, dirac, filtration_norm, models, scaling_check, shrink_ideal, HarnessReport,
    MatrixGroup, NormError, NormEval,
};
use crate::exec::Execution;
use crate::matrix::SqMatrix;
use crate::ring::{Ideal, RingSpec};

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub norm: String,
    pub ring: Option<String>,
    pub n: Option<usize>,
    pub ideal: Option<String>,
    pub values: Option<Vec<String>>,
    pub cap: Option<u32>,
    pub max_level: Option<u32>,
    pub p: Option<u64>,
    /// For `twoadic`: also shrink to an ideal inside this ball.
    pub epsilon: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl NormConfig {
    pub fn from_toml(text: &str) -> Result<Self, NormError> {
        toml::from_str(text).map_err(|e| NormError::Config(e.to_string()))
    }

    fn ring(&self) -> Result<RingSpec, NormError> {
        self.ring
            .as_deref()
            .unwrap_or("Z")
            .parse()
            .map_err(|e: crate::ring::RingError| NormError::Config(e.to_string()))
    }

    fn ideal(&self, ring: RingSpec) -> Result<Ideal, NormError> {
        let g = ring
            .parse_element(self.ideal.as_deref().unwrap_or("2"))
            .map_err(|e| NormError::Config(e.to_string()))?;
        Ok(Ideal::principal(g))
    }

    fn values(&self) -> Result<Option<Vec<BigRational>>, NormError> {
        self.values
            .as_ref()
            .map(|v| {
                v.iter()
                    .map(|x| {
                        x.parse::<BigRational>()
                            .map_err(|e| NormError::Config(format!("value `{x}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    fn matrix_setup(&self) -> Result<(MatrixGroup, NormEval<SqMatrix>), NormError> {
        let ring = self.ring()?;
        let n = self.n.unwrap_or(3);
        let q = self.ideal(ring)?;
        let g = MatrixGroup::leveled(
            ring,
            n,
            q.canonical_generator().clone(),
            self.max_level.unwrap_or(4),
            &format!("SL{n}({ring})"),
        );
        let norm = filtration_norm(&q, self.values()?, self.cap.unwrap_or(64))?;
        Ok((g, norm))
    }
}

/// Builds the configured norm and runs the axiom harness on it.
/// `seed` overrides the config's seed.
pub fn run_config(cfg: &NormConfig, seed: Option<u64>, exec: Execution) -> Result<HarnessReport, NormError> {
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let samples = cfg.samples.unwrap_or(1000);
    let report = match cfg.norm.as_str() {
        "filtration" => {
            let (g, n) = cfg.matrix_setup()?;
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "bounded" => {
            let (g, n) = cfg.matrix_setup()?;
            axiom_harness(&g, &bounded_transform(n), samples, seed, exec)
        }
        "dirac" => {
            let (g, _) = cfg.matrix_setup()?;
            axiom_harness(&g, &dirac(g.identity_matrix(), &g.label), samples, seed, exec)
        }
        "zero" => {
            let (g, _) = cfg.matrix_setup()?;
            let n = NormEval::new("zero", &g.label, |_: &SqMatrix| Ok(BigRational::zero()));
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "singular" => {
            let (g, n) = models::singular_sl3z(seed)?;
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "quotient" => {
            let (g, n) = models::quotient_sl2z()?;
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "average" => {
            let (g, n) = models::average_sl3_mod4()?;
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "word" => {
            let ring = cfg
                .ring
                .as_deref()
                .map_or(Ok(RingSpec::integers_mod(3).expect("valid")), |_| cfg.ring())?;
            let (g, n) = models::word_finite(cfg.n.unwrap_or(2), ring)?;
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "product" => {
            let (g, n) = models::product()?;
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "z2-mixed" => {
            let (g, n) = models::z2_mixed(cfg.p.unwrap_or(2));
            axiom_harness(&g, &n, samples, seed, exec)
        }
        "twoadic" => {
            let (g, n) = models::twoadic();
            let mut r = axiom_harness(&g, &n, samples, seed, exec);
            r.results.push(scaling_check(&n, samples, seed, exec));
            if let Some(eps) = &cfg.epsilon {
                let eps: BigRational = eps.parse().map_err(|e| NormError::Config(format!("epsilon: {e}")))?;
                let s = shrink_ideal(&n, &eps, samples, seed)?;
                r.notes.push(format!(
                    "shrink epsilon={eps} x={} y={} norm={} ideal=({}) checked={} violations={}",
                    s.x, s.y, s.value, s.generator, s.checked, s.violations
                ));
            }
            r
        }
        other => return Err(NormError::Config(format!("unknown norm `{other}`"))),
    };
    Ok(report)
}
