//! Text format for PCR+∀red proofs.
//!
//! Header line `p pcr field=Q` or `p pcr field=GF(<prime>)`, then one step
//! per line: `<id> <rule> <args> : <poly>` with rules
//! `ax k | boolax v | compax v | lin i a j b | mul i v | red i <lit>*`.
//! Monomials are written `coef * v3 * ~v5^2` (`~` marks the barred twin),
//! terms joined with `+`; rationals as `p/q`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::qcnf::{Assignment, Literal, VarId};

use super::{AlgebraicVar, FieldElem, FieldTag, Monomial, PcrJust, PcrProof, PcrStep, Polynomial};

pub fn write_pcr(proof: &PcrProof) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p pcr field={}", proof.field);
    for step in &proof.steps {
        let rule = match &step.just {
            PcrJust::AxiomClause(k) => format!("ax {k}"),
            PcrJust::BoolAx(v) => format!("boolax {v}"),
            PcrJust::CompAx(x) => format!("compax v{x}"),
            PcrJust::Lin {
                left,
                left_scale,
                right,
                right_scale,
            } => format!("lin {left} {left_scale} {right} {right_scale}"),
            PcrJust::Mul { source, var } => format!("mul {source} {var}"),
            PcrJust::Reduce { source, beta } => {
                let lits: Vec<String> = beta.to_dimacs().iter().map(|l| l.to_string()).collect();
                format!("red {source} {}", lits.join(" "))
            }
        };
        let _ = writeln!(out, "{} {rule} : {}", step.id, step.poly);
    }
    out
}

pub fn parse_pcr(text: &str) -> Result<PcrProof> {
    let mut field: Option<FieldTag> = None;
    let mut steps: Vec<PcrStep> = Vec::new();
    let mut last_id = 0u64;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') && field.is_none() {
            let rest = line.strip_prefix('p').unwrap_or(line).trim();
            let rest = rest.strip_prefix("pcr").ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "header must be `p pcr field=...`".into(),
            })?;
            let spec = rest
                .trim()
                .strip_prefix("field=")
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "missing field= in header".into(),
                })?;
            field = Some(parse_field(spec.trim(), lineno)?);
            continue;
        }
        let field = field.ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "step before `p pcr` header".into(),
        })?;
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
        let stepid = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad step reference {s:?}"),
            })
        };
        let just = match toks[1] {
            "ax" => {
                require(toks.len() == 3, lineno, "ax takes one argument")?;
                PcrJust::AxiomClause(toks[2].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: "bad axiom index".into(),
                })?)
            }
            "boolax" => {
                require(toks.len() == 3, lineno, "boolax takes one argument")?;
                PcrJust::BoolAx(parse_avar(toks[2], lineno)?)
            }
            "compax" => {
                require(toks.len() == 3, lineno, "compax takes one argument")?;
                let v = parse_avar(toks[2], lineno)?;
                require(!v.is_barred(), lineno, "compax takes a plain variable")?;
                PcrJust::CompAx(v.base())
            }
            "lin" => {
                require(toks.len() == 6, lineno, "lin takes four arguments")?;
                PcrJust::Lin {
                    left: stepid(toks[2])?,
                    left_scale: parse_coef(toks[3], field, lineno)?,
                    right: stepid(toks[4])?,
                    right_scale: parse_coef(toks[5], field, lineno)?,
                }
            }
            "mul" => {
                require(toks.len() == 4, lineno, "mul takes two arguments")?;
                PcrJust::Mul {
                    source: stepid(toks[2])?,
                    var: parse_avar(toks[3], lineno)?,
                }
            }
            "red" => {
                require(toks.len() >= 4, lineno, "red takes a source and literals")?;
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
                PcrJust::Reduce {
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
        let poly = parse_poly(body.trim(), field, lineno)?;
        steps.push(PcrStep { id, poly, just });
    }
    let field = field.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing `p pcr` header".into(),
    })?;
    if steps.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty proof".into(),
        });
    }
    Ok(PcrProof {
        field,
        conclusion: last_id,
        steps,
    })
}

fn require(ok: bool, line: usize, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parse {
            line,
            msg: msg.into(),
        })
    }
}

fn parse_field(spec: &str, line: usize) -> Result<FieldTag> {
    if spec == "Q" {
        return Ok(FieldTag::Rational);
    }
    if let Some(inner) = spec.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
        let p: u64 = inner.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad prime {inner:?}"),
        })?;
        if p < 2 {
            return Err(Error::Parse {
                line,
                msg: "field characteristic must be at least 2".into(),
            });
        }
        return Ok(FieldTag::Prime(p));
    }
    Err(Error::Parse {
        line,
        msg: format!("unknown field {spec:?}"),
    })
}

fn parse_avar(tok: &str, line: usize) -> Result<AlgebraicVar> {
    let (barred, rest) = match tok.strip_prefix('~') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let rest = rest.strip_prefix('v').ok_or_else(|| Error::Parse {
        line,
        msg: format!("bad variable token {tok:?}"),
    })?;
    let id: u32 = rest.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad variable token {tok:?}"),
    })?;
    if id == 0 {
        return Err(Error::Parse {
            line,
            msg: "variable ids are 1-based".into(),
        });
    }
    let base = VarId::new(id);
    Ok(if barred {
        AlgebraicVar::barred(base)
    } else {
        AlgebraicVar::plain(base)
    })
}

fn parse_coef(tok: &str, field: FieldTag, line: usize) -> Result<FieldElem> {
    match field {
        FieldTag::Rational => {
            let rat = match tok.split_once('/') {
                Some((num, den)) => {
                    let n = BigInt::from_str(num).map_err(|_| bad_coef(tok, line))?;
                    let d = BigInt::from_str(den).map_err(|_| bad_coef(tok, line))?;
                    if d == BigInt::from(0) {
                        return Err(bad_coef(tok, line));
                    }
                    BigRational::new(n, d)
                }
                None => BigRational::from(BigInt::from_str(tok).map_err(|_| bad_coef(tok, line))?),
            };
            Ok(FieldElem::Rat(rat))
        }
        FieldTag::Prime(p) => {
            let n = i128::from_str(tok).map_err(|_| bad_coef(tok, line))?;
            Ok(FieldElem::Mod {
                p,
                value: n.rem_euclid(p as i128) as u64,
            })
        }
    }
}

fn bad_coef(tok: &str, line: usize) -> Error {
    Error::Parse {
        line,
        msg: format!("bad coefficient {tok:?}"),
    }
}

pub(crate) fn parse_poly(body: &str, field: FieldTag, line: usize) -> Result<Polynomial> {
    if body == "0" {
        return Ok(Polynomial::zero(field));
    }
    let mut terms = Vec::new();
    for term in body.split('+') {
        let factors: Vec<&str> = term.split('*').map(str::trim).collect();
        if factors.is_empty() || factors[0].is_empty() {
            return Err(Error::Parse {
                line,
                msg: format!("bad term {term:?}"),
            });
        }
        let coef = parse_coef(factors[0], field, line)?;
        let mut mono = Monomial::one();
        for factor in &factors[1..] {
            let (var_tok, exp) = match factor.split_once('^') {
                Some((v, e)) => {
                    let e: u32 = e.parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad exponent in {factor:?}"),
                    })?;
                    if e == 0 {
                        return Err(Error::Parse {
                            line,
                            msg: "exponents are at least 1".into(),
                        });
                    }
                    (v, e)
                }
                None => (*factor, 1),
            };
            let av = parse_avar(var_tok, line)?;
            for _ in 0..exp {
                mono = mono.times_var(av);
            }
        }
        terms.push((mono, coef));
    }
    Polynomial::from_terms(field, terms).map_err(|_| Error::Parse {
        line,
        msg: "field mismatch in polynomial".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::pcr_from_qures;
    use super::*;
    use crate::gen;
    use crate::qures::{prove_saturate, Mode};
    use crate::Caps;

    #[test]
    fn pcr_text_roundtrip() {
        for field in [FieldTag::Rational, FieldTag::Prime(5)] {
            let q = gen::equality(1).unwrap();
            let qp = prove_saturate(&q, &Caps::default(), Mode::QuRes)
                .unwrap()
                .unwrap();
            let pcr = pcr_from_qures(&q, &qp, field).unwrap();
            let text = write_pcr(&pcr);
            let parsed = parse_pcr(&text).unwrap();
            assert_eq!(parsed, pcr);
            assert_eq!(write_pcr(&parsed), text);
            super::super::check(&q, &parsed).unwrap();
        }
    }

    #[test]
    fn poly_text_negative_and_rational() {
        let text = "p pcr field=Q\n1 compax v1 : 1 * v1 + 1 * ~v1 + -1\n";
        let proof = parse_pcr(text).unwrap();
        assert_eq!(proof.steps[0].poly.monomial_count(), 3);
        let text2 = "p pcr field=Q\n1 ax 0 : -1/2 * v1 * ~v2^2\n";
        let proof2 = parse_pcr(text2).unwrap();
        assert_eq!(proof2.steps[0].poly.monomial_count(), 1);
    }
}
