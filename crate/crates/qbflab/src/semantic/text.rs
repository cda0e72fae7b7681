//! Text format for semantic proofs.
//!
//! One step per line: `<id> <line-kind> <line> ; <just>` with kinds `cl`
//! (clause, signed literals), `bf` (formula, prefix notation), `cp` (linear
//! inequality) and `pcr` (polynomial, requires a preceding `p pcr field=...`
//! header line when used). Justifications: `ax`, `sc <id>*`,
//! `red <id> <lit>*`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::BoolExpr;
use crate::line::ProofLine;
use crate::pcr::FieldTag;
use crate::qcnf::{Assignment, Clause, Literal};

use super::{SemJust, SemStep, SemanticProof};

pub fn write_semantic(proof: &SemanticProof) -> String {
    let mut out = String::new();
    // emit a field header if any pcr line occurs
    if let Some(tag) = proof.steps.iter().find_map(|s| match &s.line {
        ProofLine::Pcr(p) => Some(p.field()),
        _ => None,
    }) {
        let _ = writeln!(out, "p pcr field={tag}");
    }
    for step in &proof.steps {
        let line = match &step.line {
            ProofLine::Const(b) => format!("bf {}", if *b { "true" } else { "false" }),
            ProofLine::Clause(c) => {
                if c.is_empty() {
                    "cl".to_string()
                } else {
                    format!("cl {c}")
                }
            }
            ProofLine::Formula(f) => format!("bf {f}"),
            ProofLine::Cp(l) => format!("cp {l}"),
            ProofLine::Pcr(p) => format!("pcr {p}"),
        };
        let just = match &step.just {
            SemJust::Axiom => "ax".to_string(),
            SemJust::Consequence(ids) => {
                let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
                format!("sc {}", ids.join(" ")).trim_end().to_string()
            }
            SemJust::Reduction { source, beta } => {
                let lits: Vec<String> = beta.to_dimacs().iter().map(|l| l.to_string()).collect();
                format!("red {source} {}", lits.join(" "))
            }
        };
        let _ = writeln!(out, "{} {line} ; {just}", step.id);
    }
    out
}

pub fn parse_semantic(text: &str) -> Result<SemanticProof> {
    let mut steps: Vec<SemStep> = Vec::new();
    let mut last_id = 0u64;
    let mut field: Option<FieldTag> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with("p pcr") {
            let spec = line
                .split("field=")
                .nth(1)
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "missing field= in header".into(),
                })?
                .trim();
            field = Some(if spec == "Q" {
                FieldTag::Rational
            } else if let Some(inner) = spec.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
                FieldTag::Prime(inner.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: "bad prime".into(),
                })?)
            } else {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown field {spec:?}"),
                });
            });
            continue;
        }
        let (body, just_text) = line.rsplit_once(';').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "missing `;` separator".into(),
        })?;
        let body = body.trim();
        let (id_tok, rest) = body.split_once(' ').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "missing step id".into(),
        })?;
        let id: u64 = id_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad step id {id_tok:?}"),
        })?;
        if id <= last_id {
            return Err(Error::Parse {
                line: lineno,
                msg: "step ids must be strictly increasing".into(),
            });
        }
        last_id = id;
        let rest = rest.trim();
        let (kind, payload) = match rest.split_once(' ') {
            Some((k, p)) => (k, p.trim()),
            None => (rest, ""),
        };
        let line_val = match kind {
            "cl" => {
                if payload.is_empty() {
                    ProofLine::Clause(Clause::empty())
                } else {
                    let lits = payload
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<i64>()
                                .map_err(|_| Error::Parse {
                                    line: lineno,
                                    msg: format!("bad literal {t:?}"),
                                })
                                .and_then(Literal::from_dimacs)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ProofLine::Clause(Clause::new(lits))
                }
            }
            "bf" => match BoolExpr::parse(payload)? {
                BoolExpr::Const(b) => ProofLine::Const(b),
                f => ProofLine::Formula(f),
            },
            "cp" => ProofLine::Cp(super::super::cp::text_parse_line(payload, lineno)?),
            "pcr" => {
                let tag = field.ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "pcr line before `p pcr field=` header".into(),
                })?;
                ProofLine::Pcr(super::super::pcr::text_parse_poly(payload, tag, lineno)?)
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown line kind {other:?}"),
                })
            }
        };
        let jt: Vec<&str> = just_text.split_whitespace().collect();
        let just = match jt.first() {
            Some(&"ax") => SemJust::Axiom,
            Some(&"sc") => {
                let ids = jt[1..]
                    .iter()
                    .map(|t| {
                        t.parse::<u64>().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad premise id {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                SemJust::Consequence(ids)
            }
            Some(&"red") => {
                if jt.len() < 3 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "red takes a source and literals".into(),
                    });
                }
                let source: u64 = jt[1].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: "bad source id".into(),
                })?;
                let lits = jt[2..]
                    .iter()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| Error::Parse {
                                line: lineno,
                                msg: format!("bad literal {t:?}"),
                            })
                            .and_then(Literal::from_dimacs)
                    })
                    .collect::<Result<Vec<_>>>()?;
                SemJust::Reduction {
                    source,
                    beta: Assignment::from_literals(lits)?,
                }
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "missing justification".into(),
                })
            }
        };
        steps.push(SemStep {
            id,
            line: line_val,
            just,
        });
    }
    if steps.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty proof".into(),
        });
    }
    Ok(SemanticProof {
        conclusion: last_id,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{frege_eq_refutation, qures_to_semantic};
    use super::*;
    use crate::gen;
    use crate::qures::{prove_saturate, Mode};
    use crate::Caps;

    #[test]
    fn semantic_text_roundtrip_formula_lines() {
        let proof = frege_eq_refutation(2, &Caps::default()).unwrap();
        let text = write_semantic(&proof);
        let parsed = parse_semantic(&text).unwrap();
        assert_eq!(parsed, proof);
        assert_eq!(write_semantic(&parsed), text);
    }

    #[test]
    fn semantic_text_roundtrip_clause_lines() {
        let q = gen::equality(1).unwrap();
        let qp = prove_saturate(&q, &Caps::default(), Mode::QuRes)
            .unwrap()
            .unwrap();
        let sem = qures_to_semantic(&q, &qp).unwrap();
        let text = write_semantic(&sem);
        let parsed = parse_semantic(&text).unwrap();
        assert_eq!(parsed, sem);
    }
}
