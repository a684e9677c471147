//! Plain-text trace format.
//!
//! ```text
//! # conjwidth trace v1
//! ring Z
//! ideal 2
//! target 1,2
//! input M0
//! step kind=CommRight s=M1 out=M2 len=2 case=step4.case1
//! output M2
//! matrix M0
//! 3 Z
//! ...
//! matrix M1 factors=3:2:2
//! ...
//! ```
//!
//! Extra `#` lines after the first are kept as comments. Parsing and
//! printing round-trip byte for byte.

use std::collections::BTreeMap;

use super::{CaseTag, Membership, OpKind, QOperation, ReductionTrace, TraceStep, WidthError};
use crate::elemgen::{ElemFactor, ElemFactorization};
use crate::matrix::SqMatrix;
use crate::ring::{Ideal, RingSpec};

pub const TRACE_MAGIC: &str = "# conjwidth trace v1";

fn witness_text(w: &Membership) -> String {
    match w {
        Membership::Congruence => "congruence".into(),
        Membership::Elementary(f) => {
            let items: Vec<String> = f.factors.iter().map(|x| format!("{}:{}:{}", x.i, x.j, x.a)).collect();
            format!("factors={}", items.join("|"))
        }
    }
}

impl ReductionTrace {
    pub fn to_text(&self) -> String {
        self.to_text_with_comments(&[])
    }

    /// Serialise, inserting `# <comment>` lines after the first line.
    pub fn to_text_with_comments(&self, comments: &[String]) -> String {
        let mut out = format!("{TRACE_MAGIC}\n");
        for c in comments {
            out.push_str(&format!("# {c}\n"));
        }
        let gens: Vec<String> = self.ideal.generators().iter().map(|g| g.to_string()).collect();
        out.push_str(&format!("ring {}\n", self.input.ring()));
        out.push_str(&format!("ideal {}\n", gens.join(" ")));
        out.push_str(&format!("target {},{}\n", self.target.0, self.target.1));
        out.push_str("input M0\n");
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step kind={} s=M{} out=M{} len={} case={}\n",
                s.op.kind.as_str(),
                2 * k + 1,
                2 * k + 2,
                s.word_length,
                s.case
            ));
        }
        out.push_str(&format!("output M{}\n", 2 * self.steps.len()));
        out.push_str("matrix M0\n");
        out.push_str(&self.input.to_text());
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("matrix M{} {}\n", 2 * k + 1, witness_text(&s.op.witness)));
            out.push_str(&s.op.s.to_text());
            out.push_str(&format!("matrix M{}\n", 2 * k + 2));
            out.push_str(&s.result.to_text());
        }
        out
    }

    /// Parse a trace and its comment lines.
    pub fn from_text(text: &str) -> Result<(ReductionTrace, Vec<String>), WidthError> {
        let lines: Vec<&str> = text.lines().collect();
        let err = |line: usize, reason: String| WidthError::TraceParse { line: line + 1, reason };
        if lines.first() != Some(&TRACE_MAGIC) {
            return Err(err(0, "missing trace header".into()));
        }
        let mut pos = 1;
        let mut comments = Vec::new();
        while pos < lines.len() && lines[pos].starts_with('#') {
            comments.push(lines[pos].strip_prefix("# ").unwrap_or(&lines[pos][1..]).to_string());
            pos += 1;
        }
        let field = |pos: usize, key: &str| -> Result<&str, WidthError> {
            lines
                .get(pos)
                .and_then(|l| l.strip_prefix(key))
                .and_then(|l| l.strip_prefix(' '))
                .ok_or_else(|| err(pos, format!("expected `{key}`")))
        };
        let ring: RingSpec = field(pos, "ring")?
            .parse()
            .map_err(|e: crate::ring::RingError| err(pos, e.to_string()))?;
        pos += 1;
        let gens = field(pos, "ideal")?
            .split(' ')
            .map(|g| ring.parse_element(g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(pos, e.to_string()))?;
        let ideal = Ideal::new(ring, gens).map_err(|e| err(pos, e.to_string()))?;
        pos += 1;
        let target = field(pos, "target")?
            .split_once(',')
            .and_then(|(i, j)| Some((i.parse().ok()?, j.parse().ok()?)))
            .ok_or_else(|| err(pos, "bad target".into()))?;
        pos += 1;
        if field(pos, "input")? != "M0" {
            return Err(err(pos, "input must be M0".into()));
        }
        pos += 1;

        struct RawStep {
            line: usize,
            kind: OpKind,
            s: String,
            out: String,
            len: u64,
            case: CaseTag,
        }
        let mut raw = Vec::new();
        while let Ok(rest) = field(pos, "step") {
            let mut kv = BTreeMap::new();
            for part in rest.split(' ') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| err(pos, format!("bad field `{part}`")))?;
                kv.insert(k, v);
            }
            let get = |k: &str| kv.get(k).copied().ok_or_else(|| err(pos, format!("missing `{k}`")));
            raw.push(RawStep {
                line: pos,
                kind: get("kind")?.parse().map_err(|e| err(pos, e))?,
                s: get("s")?.to_string(),
                out: get("out")?.to_string(),
                len: get("len")?.parse().map_err(|_| err(pos, "bad len".into()))?,
                case: get("case")?.parse().map_err(|e| err(pos, e))?,
            });
            pos += 1;
        }
        let output_ref = field(pos, "output")?.to_string();
        pos += 1;

        let mut matrices: BTreeMap<String, (SqMatrix, Option<String>)> = BTreeMap::new();
        while pos < lines.len() {
            let rest = field(pos, "matrix")?;
            let (name, witness) = match rest.split_once(' ') {
                Some((n, w)) => (n.to_string(), Some(w.to_string())),
                None => (rest.to_string(), None),
            };
            let header_line = pos + 1;
            let n: usize = lines
                .get(header_line)
                .and_then(|l| l.split(' ').next())
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| err(header_line, "bad matrix header".into()))?;
            let end = header_line + 1 + n;
            if end > lines.len() {
                return Err(err(header_line, "truncated matrix".into()));
            }
            let m = SqMatrix::from_text(&lines[header_line..end].join("\n"))
                .map_err(|e| err(header_line, e.to_string()))?;
            if m.ring() != ring {
                return Err(err(header_line, "matrix over a different ring".into()));
            }
            matrices.insert(name, (m, witness));
            pos = end;
        }
        let lookup = |name: &str, line: usize| {
            matrices
                .get(name)
                .cloned()
                .ok_or_else(|| err(line, format!("unknown matrix `{name}`")))
        };
        let input = lookup("M0", 0)?.0;
        let mut steps = Vec::new();
        for r in raw {
            let (s, witness) = lookup(&r.s, r.line)?;
            let witness = match witness.as_deref() {
                Some("congruence") => Membership::Congruence,
                Some(w) if w.starts_with("factors=") => {
                    let body = &w["factors=".len()..];
                    let mut factors = Vec::new();
                    for item in body.split('|').filter(|x| !x.is_empty()) {
                        let mut it = item.splitn(3, ':');
                        let (i, j, a) = (it.next(), it.next(), it.next());
                        let parsed = (|| {
                            Some(ElemFactor {
                                i: i?.parse().ok()?,
                                j: j?.parse().ok()?,
                                a: ring.parse_element(a?).ok()?,
                            })
                        })();
                        factors.push(parsed.ok_or_else(|| err(r.line, format!("bad factor `{item}`")))?);
                    }
                    Membership::Elementary(ElemFactorization {
                        factors,
                        target: s.clone(),
                    })
                }
                _ => return Err(err(r.line, format!("matrix `{}` has no witness", r.s))),
            };
            let result = lookup(&r.out, r.line)?.0;
            steps.push(TraceStep {
                op: QOperation {
                    kind: r.kind,
                    s,
                    witness,
                },
                case: r.case,
                result,
                word_length: r.len,
            });
        }
        let output = lookup(&output_ref, 0)?.0;
        Ok((
            ReductionTrace {
                input,
                ideal,
                target,
                steps,
                output,
            },
            comments,
        ))
    }
}
