//! Text format for CP+∀red proofs.
//!
//! One step per line: `<id> <rule> <args> : <c>*v<k> ... >= <A>` with rules
//! `ax k | bl v | bu v | lin i c1 j c2 | div i c | red i <lit>*`. Integers
//! are decimal with arbitrary precision; `c` comment lines allowed.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::qcnf::{Assignment, Literal, VarId};

use super::{CpJust, CpProof, CpStep, LinearInequality};

pub fn write_cp(proof: &CpProof) -> String {
    let mut out = String::new();
    for step in &proof.steps {
        let rule = match &step.just {
            CpJust::AxiomClause(k) => format!("ax {k}"),
            CpJust::BoolLower(v) => format!("bl {v}"),
            CpJust::BoolUpper(v) => format!("bu {v}"),
            CpJust::Lin {
                left,
                left_scale,
                right,
                right_scale,
            } => format!("lin {left} {left_scale} {right} {right_scale}"),
            CpJust::Div { source, divisor } => format!("div {source} {divisor}"),
            CpJust::Reduce { source, beta } => {
                let lits: Vec<String> = beta.to_dimacs().iter().map(|l| l.to_string()).collect();
                format!("red {source} {}", lits.join(" "))
            }
        };
        let _ = writeln!(out, "{} {rule} : {}", step.id, step.line);
    }
    out
}

pub fn parse_cp(text: &str) -> Result<CpProof> {
    let mut steps = Vec::new();
    let mut last_id = 0u64;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let (head, body) = line.split_once(':').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "missing `:` separator".into(),
        })?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: "missing step id or rule".into(),
            });
        }
        let id: u64 = toks[0].parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad step id {:?}", toks[0]),
        })?;
        if id <= last_id {
            return Err(Error::Parse {
                line: lineno,
                msg: "step ids must be strictly increasing".into(),
            });
        }
        last_id = id;
        let num = |s: &str| -> Result<BigInt> {
            BigInt::from_str(s).map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad integer {s:?}"),
            })
        };
        let stepid = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad step reference {s:?}"),
            })
        };
        let var = |s: &str| -> Result<VarId> {
            let n: u32 = s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad variable {s:?}"),
            })?;
            if n == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "variable ids are 1-based".into(),
                });
            }
            Ok(VarId::new(n))
        };
        let arity = |want: usize| -> Result<()> {
            if toks.len() != want + 2 {
                Err(Error::Parse {
                    line: lineno,
                    msg: format!("rule {:?} takes {} arguments", toks[1], want),
                })
            } else {
                Ok(())
            }
        };
        let just = match toks[1] {
            "ax" => {
                arity(1)?;
                CpJust::AxiomClause(toks[2].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: "bad axiom index".into(),
                })?)
            }
            "bl" => {
                arity(1)?;
                CpJust::BoolLower(var(toks[2])?)
            }
            "bu" => {
                arity(1)?;
                CpJust::BoolUpper(var(toks[2])?)
            }
            "lin" => {
                arity(4)?;
                CpJust::Lin {
                    left: stepid(toks[2])?,
                    left_scale: num(toks[3])?,
                    right: stepid(toks[4])?,
                    right_scale: num(toks[5])?,
                }
            }
            "div" => {
                arity(2)?;
                CpJust::Div {
                    source: stepid(toks[2])?,
                    divisor: num(toks[3])?,
                }
            }
            "red" => {
                if toks.len() < 4 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "red takes a source and at least one literal".into(),
                    });
                }
                let source = stepid(toks[2])?;
                let lits = toks[3..]
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
                CpJust::Reduce {
                    source,
                    beta: Assignment::from_literals(lits)?,
                }
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown rule {other:?}"),
                })
            }
        };
        let line = parse_line(body.trim(), lineno)?;
        steps.push(CpStep { id, line, just });
    }
    if steps.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty proof".into(),
        });
    }
    Ok(CpProof {
        conclusion: last_id,
        steps,
    })
}

/// Parses `<c>*v<k> ... >= <A>`; an empty left side is a constant line.
pub(crate) fn parse_line(body: &str, lineno: usize) -> Result<LinearInequality> {
    let (lhs, rhs) = body.split_once(">=").ok_or_else(|| Error::Parse {
        line: lineno,
        msg: "missing `>=`".into(),
    })?;
    let constant = BigInt::from_str(rhs.trim()).map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("bad constant {:?}", rhs.trim()),
    })?;
    let mut coeffs = Vec::new();
    for term in lhs.split_whitespace() {
        let (c, v) = term.split_once("*v").ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("bad term {term:?}, expected `<c>*v<k>`"),
        })?;
        let coeff = BigInt::from_str(c).map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad coefficient {c:?}"),
        })?;
        let vid: u32 = v.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad variable in term {term:?}"),
        })?;
        if vid == 0 {
            return Err(Error::Parse {
                line: lineno,
                msg: "variable ids are 1-based".into(),
            });
        }
        coeffs.push((VarId::new(vid), coeff));
    }
    Ok(LinearInequality::new(coeffs, constant))
}

#[cfg(test)]
mod tests {
    use super::super::cp_from_qures;
    use super::*;
    use crate::gen;
    use crate::qures::{prove_saturate, Mode};
    use crate::Caps;

    #[test]
    fn cp_text_roundtrip() {
        let q = gen::equality(2).unwrap();
        let qp = prove_saturate(&q, &Caps::default(), Mode::QuRes)
            .unwrap()
            .unwrap();
        let cp = cp_from_qures(&q, &qp).unwrap();
        let text = write_cp(&cp);
        let parsed = parse_cp(&text).unwrap();
        assert_eq!(parsed, cp);
        assert_eq!(write_cp(&parsed), text);
        super::super::check(&q, &parsed).unwrap();
    }
}
