//! Text trace format for QU-Res proofs.
//!
//! One step per line: `<id> <lit>* 0 <antecedent-id>* 0`, ids strictly
//! increasing, literals as signed integers, `c` comment lines allowed. The
//! rule is inferred from the antecedent count: none = axiom (the clause must
//! occur in the matrix), two = resolution (the pivot is recomputed and must
//! be unique), one = reduction if the clause is a strict subset of the
//! antecedent, weakening if a strict superset; equality is rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qcnf::{Clause, Literal, Qcnf};

use super::{QuResJust, QuResProof, QuResStep};

pub fn write_trace(proof: &QuResProof) -> String {
    let mut out = String::new();
    for step in &proof.steps {
        let _ = write!(out, "{}", step.id);
        for lit in step.clause.literals() {
            let _ = write!(out, " {lit}");
        }
        let _ = write!(out, " 0");
        for ante in step.just.antecedents() {
            let _ = write!(out, " {ante}");
        }
        let _ = writeln!(out, " 0");
    }
    out
}

pub fn parse_trace(text: &str, qcnf: &Qcnf) -> Result<QuResProof> {
    let mut steps: Vec<QuResStep> = Vec::new();
    let mut clauses: BTreeMap<u64, Clause> = BTreeMap::new();
    let mut last_id = 0u64;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let nums: Vec<i64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad token {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if nums.len() < 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: "step needs id, literals, and two 0 terminators".into(),
            });
        }
        let id = nums[0];
        if id <= 0 {
            return Err(Error::Parse {
                line: lineno,
                msg: "step id must be positive".into(),
            });
        }
        let id = id as u64;
        if id <= last_id {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("step ids must be strictly increasing ({id} after {last_id})"),
            });
        }
        last_id = id;
        let mut zeros = nums[1..].split(|&n| n == 0);
        let lits = zeros.next().unwrap_or(&[]);
        let antes = zeros.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "missing antecedent section".into(),
        })?;
        // exactly two 0-terminated sections
        match zeros.next() {
            Some([]) => {}
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "step must end with the antecedent terminator 0".into(),
                })
            }
        }
        let clause = Clause::new(
            lits.iter()
                .map(|&l| Literal::from_dimacs(l))
                .collect::<Result<Vec<_>>>()?,
        );
        let antes: Vec<u64> = antes
            .iter()
            .map(|&a| {
                if a <= 0 {
                    Err(Error::Parse {
                        line: lineno,
                        msg: "antecedent ids must be positive".into(),
                    })
                } else {
                    Ok(a as u64)
                }
            })
            .collect::<Result<_>>()?;
        let ante_clause = |aid: u64| -> Result<&Clause> {
            clauses.get(&aid).ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("antecedent {aid} not defined yet"),
            })
        };

        let just = match antes.len() {
            0 => {
                let k = qcnf
                    .matrix
                    .iter()
                    .position(|c| c == &clause)
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: format!("axiom clause `{clause}` not in the matrix"),
                    })?;
                QuResJust::Axiom(k)
            }
            1 => {
                let src = ante_clause(antes[0])?;
                if clause.is_subset_of(src) && &clause != src {
                    let removed = src
                        .literals()
                        .iter()
                        .copied()
                        .filter(|l| !clause.contains(*l))
                        .collect();
                    QuResJust::Reduce {
                        source: antes[0],
                        removed,
                    }
                } else if src.is_subset_of(&clause) && src != &clause {
                    let added = clause
                        .literals()
                        .iter()
                        .copied()
                        .filter(|l| !src.contains(*l))
                        .collect();
                    QuResJust::Weaken {
                        source: antes[0],
                        added,
                    }
                } else {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "single-antecedent step is neither a strict subset nor a strict superset".into(),
                    });
                }
            }
            2 => {
                let lc = ante_clause(antes[0])?.clone();
                let rc = ante_clause(antes[1])?.clone();
                let mut pivots = Vec::new();
                for v in lc.var_set().intersection(&rc.var_set()) {
                    let lp = lc.contains(Literal::positive(*v));
                    let ln = lc.contains(Literal::negative(*v));
                    let rp = rc.contains(Literal::positive(*v));
                    let rn = rc.contains(Literal::negative(*v));
                    if (lp && rn) || (ln && rp) {
                        pivots.push(*v);
                    }
                }
                if pivots.len() != 1 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("resolution pivot not unique: {} candidates", pivots.len()),
                    });
                }
                QuResJust::Resolve {
                    left: antes[0],
                    right: antes[1],
                    pivot: pivots[0],
                }
            }
            n => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("steps take at most two antecedents, found {n}"),
                })
            }
        };
        clauses.insert(id, clause.clone());
        steps.push(QuResStep { id, clause, just });
    }
    let conclusion = last_id;
    if steps.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty trace".into(),
        });
    }
    Ok(QuResProof { steps, conclusion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::qures::{check, prove_saturate, Mode};
    use crate::Caps;

    #[test]
    fn trace_roundtrip_eq2() {
        let q = gen::equality(2).unwrap();
        let proof = prove_saturate(&q, &Caps::default(), Mode::QuRes)
            .unwrap()
            .unwrap();
        let text = write_trace(&proof);
        let parsed = parse_trace(&text, &q).unwrap();
        check(&q, &parsed, Mode::QuRes).unwrap();
        assert_eq!(write_trace(&parsed), text);
        assert_eq!(parsed.size(), proof.size());
    }

    #[test]
    fn trace_rejects_nonmonotone_ids() {
        let q = gen::equality(1).unwrap();
        let text = "2 3 0 0\n1 1 2 -3 0 0\n";
        assert!(parse_trace(text, &q).is_err());
    }

    #[test]
    fn trace_rejects_ambiguous_pivot() {
        let q = Qcnf::new(
            crate::qcnf::Prefix::new(vec![crate::qcnf::Block::new(
                crate::qcnf::Quantifier::Exists,
                [crate::VarId::new(1), crate::VarId::new(2)],
            )])
            .unwrap(),
            vec![
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[-1, -2]).unwrap(),
            ],
        )
        .unwrap();
        let text = "1 1 2 0 0\n2 -1 -2 0 0\n3 0 1 2 0\n";
        assert!(parse_trace(text, &q).is_err());
    }
}
