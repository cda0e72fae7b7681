//! A uniform view over proof lines of every system: variable set,
//! evaluation, restriction, and exhaustive tautology testing.
//!
//! Restriction commutes with the associated Boolean function for every
//! variant (the restrictive-closure property), which the test suite audits
//! exhaustively at desk scale.

use std::collections::BTreeSet;

use crate::caps::Caps;
use crate::cp::LinearInequality;
use crate::error::Result;
use crate::formula::BoolExpr;
use crate::pcr::Polynomial;
use crate::qcnf::{
    Assignment, AssignmentSpace, Clause, Prefix, Qcnf, Quantifier, RestrictedClause, VarId,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofLine {
    Const(bool),
    Clause(Clause),
    Formula(BoolExpr),
    Cp(LinearInequality),
    Pcr(Polynomial),
}

impl ProofLine {
    pub fn vars(&self) -> BTreeSet<VarId> {
        match self {
            ProofLine::Const(_) => BTreeSet::new(),
            ProofLine::Clause(c) => c.var_set(),
            ProofLine::Formula(f) => f.vars(),
            ProofLine::Cp(l) => l.vars(),
            ProofLine::Pcr(p) => p.base_vars(),
        }
    }

    /// Truth under a total assignment to the line's variables (extra
    /// bindings are ignored).
    pub fn eval(&self, tau: &Assignment) -> Result<bool> {
        match self {
            ProofLine::Const(b) => Ok(*b),
            ProofLine::Clause(c) => c.eval(tau),
            ProofLine::Formula(f) => f.eval(tau),
            ProofLine::Cp(l) => l.eval(tau),
            ProofLine::Pcr(p) => Ok(p.eval_bool(tau)?.is_zero()),
        }
    }

    pub fn restrict(&self, tau: &Assignment) -> ProofLine {
        match self {
            ProofLine::Const(b) => ProofLine::Const(*b),
            ProofLine::Clause(c) => match c.restrict(tau) {
                RestrictedClause::Satisfied => ProofLine::Const(true),
                RestrictedClause::Clause(c) => ProofLine::Clause(c),
            },
            ProofLine::Formula(f) => match f.restrict(tau) {
                BoolExpr::Const(b) => ProofLine::Const(b),
                f => ProofLine::Formula(f),
            },
            ProofLine::Cp(l) => ProofLine::Cp(l.substitute(tau)),
            ProofLine::Pcr(p) => ProofLine::Pcr(p.substitute(tau)),
        }
    }

    /// Exhaustive tautology test: true on every assignment to its variables.
    pub fn is_tautology(&self, caps: &Caps) -> Result<bool> {
        let vars = self.vars();
        caps.check_semantic_vars(vars.len())?;
        let space = AssignmentSpace::new(vars);
        for tau in space.iter() {
            if !self.eval(&tau)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exhaustive unsatisfiability test: false on every assignment.
    pub fn is_contradiction(&self, caps: &Caps) -> Result<bool> {
        let vars = self.vars();
        caps.check_semantic_vars(vars.len())?;
        let space = AssignmentSpace::new(vars);
        for tau in space.iter() {
            if self.eval(&tau)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Index of the line's rightmost block in `prefix`.
    pub fn rightmost_block(&self, prefix: &Prefix) -> Option<usize> {
        prefix.rightmost_block(&self.vars())
    }

    /// Reducible: the rightmost block exists and is universal.
    pub fn is_reducible(&self, prefix: &Prefix) -> bool {
        self.rightmost_block(prefix)
            .is_some_and(|i| prefix.blocks()[i].quant == Quantifier::Forall)
    }
}

/// Truth-table entailment of `conclusion` from `premises` over the union of
/// their variables.
pub fn entails(premises: &[&ProofLine], conclusion: &ProofLine, caps: &Caps) -> Result<bool> {
    let mut vars = conclusion.vars();
    for p in premises {
        vars.extend(p.vars());
    }
    caps.check_semantic_vars(vars.len())?;
    let space = AssignmentSpace::new(vars);
    for tau in space.iter() {
        let mut all = true;
        for p in premises {
            if !p.eval(&tau)? {
                all = false;
                break;
            }
        }
        if all && !conclusion.eval(&tau)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Semantic equivalence: mutual entailment over the union of variables.
pub fn equivalent(a: &ProofLine, b: &ProofLine, caps: &Caps) -> Result<bool> {
    Ok(entails(&[a], b, caps)? && entails(&[b], a, caps)?)
}

/// Extracts the line sequence of a proof in any supported system.
pub fn qures_lines(proof: &crate::qures::QuResProof) -> Vec<ProofLine> {
    proof
        .steps
        .iter()
        .map(|s| ProofLine::Clause(s.clause.clone()))
        .collect()
}

pub fn cp_lines(proof: &crate::cp::CpProof) -> Vec<ProofLine> {
    proof
        .steps
        .iter()
        .map(|s| ProofLine::Cp(s.line.clone()))
        .collect()
}

pub fn pcr_lines(proof: &crate::pcr::PcrProof) -> Vec<ProofLine> {
    proof
        .steps
        .iter()
        .map(|s| ProofLine::Pcr(s.poly.clone()))
        .collect()
}

/// A copy of the formula with adjacent same-quantifier blocks merged; the
/// whole engine works on game-normalized prefixes so block identity matches
/// the evaluation game.
pub(crate) fn game_normalized(qcnf: &Qcnf) -> Qcnf {
    Qcnf {
        prefix: qcnf.prefix.normalized(),
        matrix: qcnf.matrix.clone(),
        names: qcnf.names.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcnf::Literal;

    fn v(id: u32) -> VarId {
        VarId::new(id)
    }

    #[test]
    fn clause_line_restriction() {
        let line = ProofLine::Clause(Clause::from_dimacs(&[1, -2]).unwrap());
        let sat = line.restrict(&Assignment::from_pairs([(v(1), true)]));
        assert_eq!(sat, ProofLine::Const(true));
        let dropped = line.restrict(&Assignment::from_pairs([(v(1), false)]));
        assert_eq!(
            dropped,
            ProofLine::Clause(Clause::new([Literal::negative(v(2))]))
        );
    }

    #[test]
    fn restrictive_closure_across_variants() {
        // B_{L[τ]} = B_L|τ for each line kind, checked exhaustively
        let caps = Caps::default();
        let lines = vec![
            ProofLine::Clause(Clause::from_dimacs(&[1, -2, 3]).unwrap()),
            ProofLine::Formula(BoolExpr::and([
                BoolExpr::or([BoolExpr::var(v(1)), BoolExpr::var(v(2))]),
                BoolExpr::not(BoolExpr::var(v(3))),
            ])),
            ProofLine::Cp(
                crate::cp::encode_clause(&Clause::from_dimacs(&[1, 2, -3]).unwrap()).unwrap(),
            ),
            ProofLine::Pcr(crate::pcr::encode_clause(
                &Clause::from_dimacs(&[1, -2, 3]).unwrap(),
                crate::pcr::FieldTag::Rational,
            )),
        ];
        for line in &lines {
            let vars: Vec<VarId> = line.vars().into_iter().collect();
            let tau = Assignment::from_pairs([(vars[0], true)]);
            let restricted = line.restrict(&tau);
            let rest_vars: Vec<VarId> = vars[1..].to_vec();
            for full in AssignmentSpace::new(rest_vars).iter() {
                let combined = full.union(&tau).unwrap();
                assert_eq!(
                    restricted.eval(&full).unwrap(),
                    line.eval(&combined).unwrap()
                );
            }
            assert!(!line.is_tautology(&caps).unwrap());
        }
    }
}
