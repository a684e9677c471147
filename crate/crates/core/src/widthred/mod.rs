//! Reduction of a non-central congruence matrix to a nontrivial elementary
//! matrix by q-operations `g -> s g s^-1`, `g -> [g, s]`, `g -> [s, g]`.
//!
//! Every run produces a [`ReductionTrace`] that can be replayed, checked,
//! serialised and expanded into an explicit word in conjugates of
//! `sigma^{±1}`.

mod se4;
mod sr;
mod stages;
mod text;

pub use se4::{unit_trick_se4, Se4Side};
pub use sr::{unimodular_square_shift, SRWitness, SR_SEARCH_BOUND};
pub use stages::{
    reduce_batch, reduce_full, reduce_to_affine, relocate_elementary, strip_to_translation, translation_to_elementary,
    Location, StageResult,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::elemgen::ElemFactorization;
use crate::matrix::{MatrixError, SqMatrix};
use crate::ring::{Ideal, RingError, RingSpec};

pub const MAX_STEPS: usize = 9;
pub const MAX_WORD_LENGTH: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WidthError {
    #[error("sigma is central")]
    CentralInput,
    #[error("the ideal is zero")]
    ZeroIdeal,
    #[error("sigma is not congruent to the identity modulo the ideal")]
    NotCongruent,
    #[error("determinant is not 1")]
    NotSpecial,
    #[error("{0} is not an integral domain")]
    NotDomain(RingSpec),
    #[error("dimension {found} is not supported here (need {need})")]
    BadDimension { found: usize, need: &'static str },
    #[error("bad target ({0},{1})")]
    BadTarget(usize, usize),
    #[error("input is not of the expected form: {0}")]
    WrongForm(&'static str),
    #[error("elementary entry is zero")]
    TrivialInput,
    #[error("vector is not unimodular")]
    NotUnimodular,
    #[error("no stable-range shift found among {bound} candidates")]
    SearchExhausted { bound: usize },
    #[error("no usable unit among {tried} candidates")]
    NoUnitFound { tried: usize },
    #[error("construction produced an unexpected matrix at {0}")]
    Internal(&'static str),
    #[error("replay mismatch at step {step}: {reason}")]
    ReplayMismatch { step: usize, reason: String },
    #[error("trace line {line}: {reason}")]
    TraceParse { line: usize, reason: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// `g -> s g s^-1`
    Conjugate,
    /// `g -> [g, s]`
    CommRight,
    /// `g -> [s, g]`
    CommLeft,
}

impl OpKind {
    pub fn apply(self, g: &SqMatrix, s: &SqMatrix) -> Result<SqMatrix, MatrixError> {
        match self {
            OpKind::Conjugate => g.conjugate_by(s),
            OpKind::CommRight => g.commutator(s),
            OpKind::CommLeft => s.commutator(g),
        }
    }

    /// Word length after the operation, given the length before.
    pub fn next_length(self, len: u64) -> u64 {
        match self {
            OpKind::Conjugate => len,
            _ => 2 * len,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            OpKind::Conjugate => "Conjugate",
            OpKind::CommRight => "CommRight",
            OpKind::CommLeft => "CommLeft",
        }
    }
}

impl FromStr for OpKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Conjugate" => Ok(OpKind::Conjugate),
            "CommRight" => Ok(OpKind::CommRight),
            "CommLeft" => Ok(OpKind::CommLeft),
            _ => Err(format!("unknown operation kind `{s}`")),
        }
    }
}

/// Why `s` is an allowed conjugator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `s` is a product of elementary matrices with entries in `q`.
    Elementary(ElemFactorization),
    /// `s` is in `SL_n` and congruent to `I` modulo `q`.
    Congruence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QOperation {
    pub kind: OpKind,
    pub s: SqMatrix,
    pub witness: Membership,
}

impl QOperation {
    /// Checks the membership witness against `q`.
    pub fn check(&self, q: &Ideal) -> Result<(), String> {
        match &self.witness {
            Membership::Elementary(f) => {
                if f.product() != self.s || f.target != self.s {
                    return Err("factorization does not multiply to s".into());
                }
                for x in &f.factors {
                    if x.i == x.j || !q.contains(&x.a).map_err(|e| e.to_string())? {
                        return Err(format!("factor ({},{},{}) is not in E(q)", x.i, x.j, x.a));
                    }
                }
                Ok(())
            }
            Membership::Congruence => {
                let congruent = self.s.minus_identity().iter().all(|e| q.contains(e).unwrap_or(false));
                if self.s.is_special() && congruent {
                    Ok(())
                } else {
                    Err("s is not in the congruence subgroup".into())
                }
            }
        }
    }
}

/// Which stage and case produced a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    Step1Case1NonScalar,
    Step1Case1Scalar,
    Step1Case2Shift,
    Step1Case2Commute,
    Step1Case2Conjugate,
    Step1Case2aNonScalar,
    Step1Case2aScalar,
    Step1Case2b,
    Step2Column,
    Step2Row,
    Step3Column,
    Step3Row,
    Step4Case1,
    Step4Case2Distinct,
    Step4Case2KeqJ,
    Se4(Se4Side, Se4Phase),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Se4Phase {
    Commute,
    Conjugate,
    Final,
}

const PLAIN_TAGS: [(CaseTag, &str); 15] = [
    (CaseTag::Step1Case1NonScalar, "step1.case1.nonscalar"),
    (CaseTag::Step1Case1Scalar, "step1.case1.scalar"),
    (CaseTag::Step1Case2Shift, "step1.case2.shift"),
    (CaseTag::Step1Case2Commute, "step1.case2.commute"),
    (CaseTag::Step1Case2Conjugate, "step1.case2.conjugate"),
    (CaseTag::Step1Case2aNonScalar, "step1.case2a.nonscalar"),
    (CaseTag::Step1Case2aScalar, "step1.case2a.scalar"),
    (CaseTag::Step1Case2b, "step1.case2b"),
    (CaseTag::Step2Column, "step2.column"),
    (CaseTag::Step2Row, "step2.row"),
    (CaseTag::Step3Column, "step3.column"),
    (CaseTag::Step3Row, "step3.row"),
    (CaseTag::Step4Case1, "step4.case1"),
    (CaseTag::Step4Case2Distinct, "step4.case2.distinct"),
    (CaseTag::Step4Case2KeqJ, "step4.case2.keqj"),
];

impl CaseTag {
    /// Stage the step belongs to: 1 to 4 for the pipeline, 0 for se4.
    pub fn stage(self) -> u8 {
        use CaseTag::*;
        match self {
            Step1Case1NonScalar | Step1Case1Scalar | Step1Case2Shift | Step1Case2Commute | Step1Case2Conjugate
            | Step1Case2aNonScalar | Step1Case2aScalar | Step1Case2b => 1,
            Step2Column | Step2Row => 2,
            Step3Column | Step3Row => 3,
            Step4Case1 | Step4Case2Distinct | Step4Case2KeqJ => 4,
            Se4(..) => 0,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let CaseTag::Se4(side, phase) = self {
            let side = match side {
                Se4Side::E12 => "e12",
                Se4Side::E21 => "e21",
            };
            let phase = match phase {
                Se4Phase::Commute => "commute",
                Se4Phase::Conjugate => "conjugate",
                Se4Phase::Final => "final",
            };
            return write!(f, "se4.{side}.{phase}");
        }
        let name = PLAIN_TAGS.iter().find(|(t, _)| t == self).expect("listed").1;
        f.write_str(name)
    }
}

impl FromStr for CaseTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some((tag, _)) = PLAIN_TAGS.iter().find(|(_, name)| *name == s) {
            return Ok(*tag);
        }
        let parts: Vec<&str> = s.split('.').collect();
        if let ["se4", side, phase] = parts.as_slice() {
            let side = match *side {
                "e12" => Se4Side::E12,
                "e21" => Se4Side::E21,
                _ => return Err(format!("unknown case tag `{s}`")),
            };
            let phase = match *phase {
                "commute" => Se4Phase::Commute,
                "conjugate" => Se4Phase::Conjugate,
                "final" => Se4Phase::Final,
                _ => return Err(format!("unknown case tag `{s}`")),
            };
            return Ok(CaseTag::Se4(side, phase));
        }
        Err(format!("unknown case tag `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub op: QOperation,
    pub case: CaseTag,
    pub result: SqMatrix,
    pub word_length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub input: SqMatrix,
    pub ideal: Ideal,
    pub target: (usize, usize),
    pub steps: Vec<TraceStep>,
    pub output: SqMatrix,
}

impl ReductionTrace {
    pub fn word_length(&self) -> u64 {
        self.steps.last().map_or(1, |s| s.word_length)
    }

    /// Number of steps per stage `[se4, step1, step2, step3, step4]`.
    pub fn stage_counts(&self) -> [usize; 5] {
        let mut out = [0; 5];
        for s in &self.steps {
            out[s.case.stage() as usize] += 1;
        }
        out
    }

    /// Re-applies every operation and checks intermediates, the ledger and
    /// the membership witnesses.
    pub fn replay(&self) -> Result<(), WidthError> {
        let mut current = self.input.clone();
        let mut len = 1u64;
        for (k, step) in self.steps.iter().enumerate() {
            let mismatch = |reason: String| WidthError::ReplayMismatch { step: k + 1, reason };
            step.op.check(&self.ideal).map_err(mismatch)?;
            let next = step
                .op
                .kind
                .apply(&current, &step.op.s)
                .map_err(|e| mismatch(e.to_string()))?;
            if next != step.result {
                return Err(mismatch("result differs".into()));
            }
            len = step.op.kind.next_length(len);
            if len != step.word_length {
                return Err(mismatch(format!("ledger says {}, expected {len}", step.word_length)));
            }
            current = next;
        }
        if current != self.output {
            return Err(WidthError::ReplayMismatch {
                step: self.steps.len(),
                reason: "output differs".into(),
            });
        }
        Ok(())
    }

    /// True if the output is a nontrivial element of `E_ij(q)`.
    pub fn output_in_target(&self) -> bool {
        match self.output.as_elementary() {
            Some((i, j, x)) => (i, j) == self.target && self.ideal.contains(&x).unwrap_or(false),
            None => false,
        }
    }

    /// Replay plus the budget and the output condition.
    pub fn validate(&self) -> Result<(), WidthError> {
        self.replay()?;
        if self.steps.len() > MAX_STEPS || self.word_length() > MAX_WORD_LENGTH {
            return Err(WidthError::Internal("budget exceeded"));
        }
        if !self.output_in_target() {
            return Err(WidthError::Internal("output not in target"));
        }
        Ok(())
    }
}

/// One letter `s sigma^e s^-1` of an expanded word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub s: SqMatrix,
    pub exponent: i8,
}

/// The output of `trace` as an explicit word in conjugates of
/// `sigma^{±1}`; its length equals the trace's word length.
pub fn expand_trace_word(trace: &ReductionTrace) -> Vec<Letter> {
    let n = trace.input.dim();
    let ring = trace.input.ring();
    let mut word = vec![Letter {
        s: SqMatrix::identity(ring, n).expect("n >= 2"),
        exponent: 1,
    }];
    for step in &trace.steps {
        let s = &step.op.s;
        let conj = |w: &[Letter]| -> Vec<Letter> {
            w.iter()
                .map(|l| Letter {
                    s: s * &l.s,
                    exponent: l.exponent,
                })
                .collect()
        };
        let inverse = |w: &[Letter]| -> Vec<Letter> {
            w.iter()
                .rev()
                .map(|l| Letter {
                    s: l.s.clone(),
                    exponent: -l.exponent,
                })
                .collect()
        };
        word = match step.op.kind {
            OpKind::Conjugate => conj(&word),
            OpKind::CommRight => {
                let mut w = word.clone();
                w.extend(conj(&inverse(&word)));
                w
            }
            OpKind::CommLeft => {
                let mut w = conj(&word);
                w.extend(inverse(&word));
                w
            }
        };
    }
    word
}

/// Product of the letters of a word, given `sigma`.
pub fn word_product(sigma: &SqMatrix, word: &[Letter]) -> Result<SqMatrix, MatrixError> {
    let inv = sigma.inverse()?;
    let mut acc = SqMatrix::identity(sigma.ring(), sigma.dim())?;
    for l in word {
        let base = if l.exponent > 0 { sigma } else { &inv };
        acc = &acc * &base.conjugate_by(&l.s)?;
    }
    Ok(acc)
}

/// Accumulates steps while tracking the current matrix and word length.
pub(crate) struct Builder {
    pub current: SqMatrix,
    pub len: u64,
    pub steps: Vec<TraceStep>,
}

impl Builder {
    pub fn new(start: &SqMatrix) -> Self {
        Builder {
            current: start.clone(),
            len: 1,
            steps: Vec::new(),
        }
    }

    pub fn apply(&mut self, kind: OpKind, s: SqMatrix, witness: Membership, case: CaseTag) -> Result<(), WidthError> {
        let result = kind.apply(&self.current, &s)?;
        self.len = kind.next_length(self.len);
        self.steps.push(TraceStep {
            op: QOperation { kind, s, witness },
            case,
            result: result.clone(),
            word_length: self.len,
        });
        self.current = result;
        Ok(())
    }
}
