//! QDIMACS reading and writing.
//!
//! Accepted input: `c` comment lines anywhere before the header and between
//! lines, a `p cnf V C` header, `a`/`e` quantifier lines and clause lines,
//! each 0-terminated. Free variables are rejected: the input must be a closed
//! prenex QCNF. Writing emits the canonical form (sorted literals, merged
//! adjacent same-quantifier blocks), so `write ∘ parse` is the identity on
//! canonical input.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qcnf::{Block, Clause, Literal, Prefix, Qcnf, Quantifier, VarId};

pub fn parse(text: &str) -> Result<Qcnf> {
    let mut header: Option<(u32, usize)> = None;
    let mut blocks: Vec<Block> = Vec::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut prefix_done = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return err(lineno, "duplicate header");
            }
            let mut it = line.split_whitespace();
            it.next();
            if it.next() != Some("cnf") {
                return err(lineno, "header must be `p cnf V C`");
            }
            let v: u32 = parse_num(it.next(), lineno, "variable count")?;
            let c: usize = parse_num(it.next(), lineno, "clause count")?;
            if it.next().is_some() {
                return err(lineno, "trailing tokens after header");
            }
            header = Some((v, c));
            continue;
        }
        let Some((max_var, _)) = header else {
            return err(lineno, "content before `p cnf` header");
        };
        let (kind, rest) = match line.split_whitespace().next() {
            Some("a") => (Some(Quantifier::Forall), &line[1..]),
            Some("e") => (Some(Quantifier::Exists), &line[1..]),
            _ => (None, line),
        };
        let nums: Vec<i64> = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad token {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if nums.last() != Some(&0) {
            return err(lineno, "line not 0-terminated");
        }
        let body = &nums[..nums.len() - 1];
        if body.contains(&0) {
            return err(lineno, "embedded 0 before terminator");
        }
        match kind {
            Some(q) => {
                if prefix_done {
                    return err(lineno, "quantifier line after first clause");
                }
                let mut vars = Vec::with_capacity(body.len());
                for &n in body {
                    if n < 0 {
                        return err(lineno, "negative variable in quantifier line");
                    }
                    let n = n as u64;
                    if n == 0 || n > max_var as u64 {
                        return err(lineno, "variable out of range");
                    }
                    vars.push(VarId::new(n as u32));
                }
                if vars.is_empty() {
                    return err(lineno, "empty quantifier line");
                }
                blocks.push(Block::new(q, vars));
            }
            None => {
                prefix_done = true;
                for &n in body {
                    if n.unsigned_abs() > max_var as u64 {
                        return err(lineno, "variable out of range");
                    }
                }
                let lits = body
                    .iter()
                    .map(|&n| Literal::from_dimacs(n))
                    .collect::<Result<Vec<_>>>()?;
                clauses.push(Clause::new(lits));
            }
        }
    }

    let Some((max_var, clause_count)) = header else {
        return err(0, "missing `p cnf` header");
    };
    if clauses.len() != clause_count {
        return Err(Error::Parse {
            line: 0,
            msg: format!(
                "header declares {clause_count} clauses, found {}",
                clauses.len()
            ),
        });
    }
    let prefix = Prefix::new(blocks)?;
    // closed formula: every declared variable must be quantified
    let quantified: BTreeSet<VarId> = prefix.var_set();
    let mut used: BTreeSet<VarId> = BTreeSet::new();
    for c in &clauses {
        used.extend(c.vars());
    }
    for v in 1..=max_var {
        let v = VarId::new(v);
        if used.contains(&v) && !quantified.contains(&v) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("free variable {v}: input must be a closed prenex QCNF"),
            });
        }
    }
    Qcnf::new(prefix, clauses)
}

pub fn write(qcnf: &Qcnf) -> String {
    let mut out = String::new();
    let max_var = qcnf.max_var();
    let _ = writeln!(out, "p cnf {} {}", max_var, qcnf.matrix.len());
    for block in qcnf.prefix.normalized().blocks() {
        let tag = match block.quant {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        };
        let _ = write!(out, "{tag}");
        for v in block.vars() {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out, " 0");
    }
    for clause in &qcnf.matrix {
        for lit in clause.literals() {
            let _ = write!(out, "{lit} ");
        }
        let _ = writeln!(out, "0");
    }
    out
}

fn err<T>(line: usize, msg: &str) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.to_string(),
    })
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("missing or invalid {what}"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_out_of_range_variable() {
        let text = "p cnf 2 1\ne 1 2 0\n3 0\n";
        assert!(matches!(parse(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_rejects_free_variable() {
        let text = "p cnf 2 1\ne 1 0\n1 2 0\n";
        let e = parse(text).unwrap_err();
        assert!(e.to_string().contains("free variable"));
    }

    #[test]
    fn parse_rejects_unterminated_line() {
        let text = "p cnf 2 1\ne 1 2 0\n1 2\n";
        assert!(parse(text).is_err());
    }

    #[test]
    fn comments_allowed() {
        let text = "c hello\np cnf 2 1\nc mid\ne 1 0\na 2 0\nc another\n1 -2 0\n";
        let q = parse(text).unwrap();
        assert_eq!(q.matrix.len(), 1);
        assert_eq!(q.prefix.blocks().len(), 2);
    }

    #[test]
    fn roundtrip_canonical() {
        let text = "p cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 2 -3 0\n3 0\n";
        let q = parse(text).unwrap();
        let written = write(&q);
        assert_eq!(parse(&written).unwrap(), q);
        assert_eq!(write(&parse(&written).unwrap()), written);
    }
}
