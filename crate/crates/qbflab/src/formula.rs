//! Boolean formula trees, used as proof lines by the semantic checker.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::qcnf::{Assignment, Clause, Literal, VarId};

/// A formula over {⊤, ⊥, literal, AND, OR, NOT}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolExpr {
    Const(bool),
    Lit(Literal),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Not(Box<BoolExpr>),
}

impl BoolExpr {
    pub fn lit(l: Literal) -> Self {
        BoolExpr::Lit(l)
    }

    pub fn var(v: VarId) -> Self {
        BoolExpr::Lit(Literal::positive(v))
    }

    pub fn and(parts: impl IntoIterator<Item = BoolExpr>) -> Self {
        BoolExpr::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = BoolExpr>) -> Self {
        BoolExpr::Or(parts.into_iter().collect())
    }

    /// Negation; a negated literal collapses to the opposite literal so the
    /// text form is canonical.
    pub fn not(e: BoolExpr) -> Self {
        match e {
            BoolExpr::Lit(l) => BoolExpr::Lit(l.negated()),
            BoolExpr::Const(b) => BoolExpr::Const(!b),
            other => BoolExpr::Not(Box::new(other)),
        }
    }

    pub fn from_clause(c: &Clause) -> Self {
        BoolExpr::Or(c.literals().iter().copied().map(BoolExpr::Lit).collect())
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Lit(l) => {
                out.insert(l.var());
            }
            BoolExpr::And(xs) | BoolExpr::Or(xs) => {
                for x in xs {
                    x.collect_vars(out);
                }
            }
            BoolExpr::Not(x) => x.collect_vars(out),
        }
    }

    /// Evaluation under a total assignment to the formula's variables.
    pub fn eval(&self, tau: &Assignment) -> Result<bool> {
        Ok(match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Lit(l) => {
                let v = tau.value(l.var()).ok_or_else(|| {
                    Error::invalid(format!(
                        "partial assignment: variable {} unassigned",
                        l.var()
                    ))
                })?;
                l.satisfied_by(v)
            }
            BoolExpr::And(xs) => {
                let mut acc = true;
                for x in xs {
                    acc &= x.eval(tau)?;
                }
                acc
            }
            BoolExpr::Or(xs) => {
                let mut acc = false;
                for x in xs {
                    acc |= x.eval(tau)?;
                }
                acc
            }
            BoolExpr::Not(x) => !x.eval(tau)?,
        })
    }

    /// Substitutes assigned variables and simplifies constants away.
    pub fn restrict(&self, tau: &Assignment) -> BoolExpr {
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Lit(l) => match tau.value(l.var()) {
                Some(v) => BoolExpr::Const(l.satisfied_by(v)),
                None => BoolExpr::Lit(*l),
            },
            BoolExpr::And(xs) => {
                let mut kept = Vec::new();
                for x in xs {
                    match x.restrict(tau) {
                        BoolExpr::Const(false) => return BoolExpr::Const(false),
                        BoolExpr::Const(true) => {}
                        other => kept.push(other),
                    }
                }
                if kept.is_empty() {
                    BoolExpr::Const(true)
                } else if kept.len() == 1 {
                    kept.pop().unwrap()
                } else {
                    BoolExpr::And(kept)
                }
            }
            BoolExpr::Or(xs) => {
                let mut kept = Vec::new();
                for x in xs {
                    match x.restrict(tau) {
                        BoolExpr::Const(true) => return BoolExpr::Const(true),
                        BoolExpr::Const(false) => {}
                        other => kept.push(other),
                    }
                }
                if kept.is_empty() {
                    BoolExpr::Const(false)
                } else if kept.len() == 1 {
                    kept.pop().unwrap()
                } else {
                    BoolExpr::Or(kept)
                }
            }
            BoolExpr::Not(x) => match x.restrict(tau) {
                BoolExpr::Const(b) => BoolExpr::Const(!b),
                other => BoolExpr::not(other),
            },
        }
    }

    /// Prefix-notation serialization: `(and ...)`, `(or ...)`, `(not ...)`,
    /// `vK`, `true`, `false`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s);
        s
    }

    fn write_text(&self, out: &mut String) {
        match self {
            BoolExpr::Const(b) => out.push_str(if *b { "true" } else { "false" }),
            BoolExpr::Lit(l) => {
                if !l.is_positive() {
                    out.push_str("(not ");
                }
                out.push('v');
                out.push_str(&l.var().get().to_string());
                if !l.is_positive() {
                    out.push(')');
                }
            }
            BoolExpr::And(xs) => {
                out.push_str("(and");
                for x in xs {
                    out.push(' ');
                    x.write_text(out);
                }
                out.push(')');
            }
            BoolExpr::Or(xs) => {
                out.push_str("(or");
                for x in xs {
                    out.push(' ');
                    x.write_text(out);
                }
                out.push(')');
            }
            BoolExpr::Not(x) => {
                out.push_str("(not ");
                x.write_text(out);
                out.push(')');
            }
        }
    }

    pub fn parse(text: &str) -> Result<BoolExpr> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let expr = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::invalid("trailing tokens after formula"));
        }
        Ok(expr)
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    Ok(tokens)
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<BoolExpr> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::invalid("unexpected end of formula"))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let head = tokens
                .get(*pos)
                .ok_or_else(|| Error::invalid("unexpected end of formula"))?
                .clone();
            *pos += 1;
            let mut args = Vec::new();
            while tokens.get(*pos).map(String::as_str) != Some(")") {
                if *pos >= tokens.len() {
                    return Err(Error::invalid("unclosed parenthesis"));
                }
                args.push(parse_expr(tokens, pos)?);
            }
            *pos += 1; // consume ')'
            match head.as_str() {
                "and" => Ok(BoolExpr::And(args)),
                "or" => Ok(BoolExpr::Or(args)),
                "not" => {
                    if args.len() != 1 {
                        return Err(Error::invalid("`not` takes exactly one argument"));
                    }
                    Ok(BoolExpr::not(args.into_iter().next().unwrap()))
                }
                other => Err(Error::invalid(format!("unknown operator {other:?}"))),
            }
        }
        ")" => Err(Error::invalid("unexpected `)`")),
        "true" => Ok(BoolExpr::Const(true)),
        "false" => Ok(BoolExpr::Const(false)),
        tok => {
            let rest = tok
                .strip_prefix('v')
                .ok_or_else(|| Error::invalid(format!("unknown token {tok:?}")))?;
            let id: u32 = rest
                .parse()
                .map_err(|_| Error::invalid(format!("bad variable token {tok:?}")))?;
            if id == 0 {
                return Err(Error::invalid("variable ids are 1-based"));
            }
            Ok(BoolExpr::var(VarId::new(id)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: u32) -> VarId {
        VarId::new(id)
    }

    #[test]
    fn eval_and_restrict() {
        // (x1 ∨ u1) ∧ (¬x1 ∨ ¬u1)
        let e = BoolExpr::and([
            BoolExpr::or([BoolExpr::var(v(1)), BoolExpr::var(v(2))]),
            BoolExpr::or([
                BoolExpr::lit(Literal::negative(v(1))),
                BoolExpr::lit(Literal::negative(v(2))),
            ]),
        ]);
        let eq = Assignment::from_pairs([(v(1), true), (v(2), false)]);
        assert!(e.eval(&eq).unwrap());
        let same = Assignment::from_pairs([(v(1), true), (v(2), true)]);
        assert!(!e.eval(&same).unwrap());

        let r = e.restrict(&Assignment::from_pairs([(v(1), true)]));
        assert_eq!(r.vars(), [v(2)].into_iter().collect());
    }

    #[test]
    fn text_roundtrip() {
        let e = BoolExpr::or([
            BoolExpr::and([BoolExpr::var(v(1)), BoolExpr::not(BoolExpr::var(v(3)))]),
            BoolExpr::Const(false),
            BoolExpr::lit(Literal::negative(v(2))),
        ]);
        let text = e.to_text();
        assert_eq!(BoolExpr::parse(&text).unwrap(), e);
    }
}
