//! Semantic P+∀red refutations: lines of any kind, justified by axiom
//! introduction, semantic consequence from declared premises, or semantic
//! universal reduction up to equivalence.
//!
//! Consequence is checked by truth table against the declared premise
//! subset, a sound strengthening of entailment from all preceding lines:
//! subset entailment implies full-set entailment, and it keeps the tables
//! tractable. Reduction requires the assignment to sit on the rightmost
//! block of the source line, which must be universal, and the stated line to
//! be semantically equivalent to the restriction.

mod build;
mod text;

pub use build::{completeness_refutation, frege_eq_line, frege_eq_refutation};
pub use text::{parse_semantic, write_semantic};

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::{CheckKind, Error, Result};
use crate::line::{entails, equivalent, game_normalized, ProofLine};
use crate::qcnf::{Assignment, Qcnf, Quantifier, VarId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemJust {
    /// The line is (equivalent to) a matrix clause.
    Axiom,
    /// Semantic consequence of the declared earlier steps.
    Consequence(Vec<u64>),
    /// Semantically equivalent to the source line restricted by `beta`.
    Reduction { source: u64, beta: Assignment },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemStep {
    pub id: u64,
    pub line: ProofLine,
    pub just: SemJust,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticProof {
    pub steps: Vec<SemStep>,
    pub conclusion: u64,
}

impl SemanticProof {
    /// Proof size: the number of lines.
    pub fn size(&self) -> usize {
        self.steps.len()
    }

    pub fn step(&self, id: u64) -> Option<&SemStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn lines(&self) -> Vec<ProofLine> {
        self.steps.iter().map(|s| s.line.clone()).collect()
    }

    /// Number of reduction steps (the oracle-system size measure).
    pub fn reduction_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.just, SemJust::Reduction { .. }))
            .count()
    }
}

/// Checks a semantic refutation; the conclusion must be semantically false.
pub fn check_semantic(qcnf: &Qcnf, proof: &SemanticProof, caps: &Caps) -> Result<()> {
    let qcnf = game_normalized(qcnf);
    let matrix_lines: Vec<ProofLine> = qcnf
        .matrix
        .iter()
        .map(|c| ProofLine::Clause(c.clone()))
        .collect();
    let mut seen: BTreeMap<u64, &ProofLine> = BTreeMap::new();
    for step in &proof.steps {
        if seen.contains_key(&step.id) {
            return Err(Error::check(step.id, CheckKind::DuplicateId));
        }
        match &step.just {
            SemJust::Axiom => {
                let mut found = false;
                for m in &matrix_lines {
                    if equivalent(&step.line, m, caps)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Err(Error::check(step.id, CheckKind::AxiomMismatch(usize::MAX)));
                }
            }
            SemJust::Consequence(ids) => {
                let mut premises = Vec::with_capacity(ids.len());
                for id in ids {
                    premises.push(
                        *seen
                            .get(id)
                            .ok_or_else(|| Error::check(step.id, CheckKind::DanglingRef(*id)))?,
                    );
                }
                if !entails(&premises, &step.line, caps)? {
                    return Err(Error::check(step.id, CheckKind::NotEntailed));
                }
            }
            SemJust::Reduction { source, beta } => {
                let src = seen
                    .get(source)
                    .copied()
                    .ok_or_else(|| Error::check(step.id, CheckKind::DanglingRef(*source)))?;
                crate::cp::check_reduce_block(&qcnf, &src.vars(), beta)
                    .map_err(|kind| Error::check(step.id, kind))?;
                let restricted = src.restrict(beta);
                if !equivalent(&step.line, &restricted, caps)? {
                    return Err(Error::check(step.id, CheckKind::NotEquivalent));
                }
            }
        }
        seen.insert(step.id, &step.line);
    }
    let conclusion = proof
        .step(proof.conclusion)
        .ok_or_else(|| Error::check(proof.conclusion, CheckKind::DanglingRef(proof.conclusion)))?;
    if !conclusion.line.is_contradiction(caps)? {
        return Err(Error::check(proof.conclusion, CheckKind::WrongConclusion));
    }
    Ok(())
}

/// Re-justifies an accepted QU-Res refutation semantically: resolution and
/// weakening become consequences, reductions become semantic reductions.
/// The proof is normalized first so its reductions act on rightmost blocks.
pub fn qures_to_semantic(qcnf: &Qcnf, proof: &crate::qures::QuResProof) -> Result<SemanticProof> {
    let normalized = crate::qures::normalize(qcnf, proof, crate::qures::Mode::QuRes)?;
    let steps = normalized
        .steps
        .iter()
        .map(|s| {
            let just = match &s.just {
                crate::qures::QuResJust::Axiom(_) => SemJust::Axiom,
                crate::qures::QuResJust::Resolve { left, right, .. } => {
                    SemJust::Consequence(vec![*left, *right])
                }
                crate::qures::QuResJust::Weaken { source, .. } => {
                    SemJust::Consequence(vec![*source])
                }
                crate::qures::QuResJust::Reduce { source, removed } => SemJust::Reduction {
                    source: *source,
                    beta: Assignment::from_literals(removed.iter().map(|l| l.negated()))
                        .expect("non-tautological removal set"),
                },
            };
            SemStep {
                id: s.id,
                line: ProofLine::Clause(s.clause.clone()),
                just,
            }
        })
        .collect();
    Ok(SemanticProof {
        steps,
        conclusion: normalized.conclusion,
    })
}

/// Which restriction a semantic proof is transformed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictionKind {
    /// A partial assignment to existential variables.
    Existential,
    /// A total assignment to the first block, which must be universal and
    /// must falsify the first non-tautological line over that block.
    UniversalFirstBlock,
}

/// Restricts an accepted semantic refutation, re-justifying each line so the
/// result refutes the restricted formula.
pub fn restrict_semantic_proof(
    qcnf: &Qcnf,
    proof: &SemanticProof,
    tau: &Assignment,
    kind: RestrictionKind,
    caps: &Caps,
) -> Result<(Qcnf, SemanticProof)> {
    let normalized = game_normalized(qcnf);
    match kind {
        RestrictionKind::Existential => {
            let evars = normalized.prefix.exists_vars();
            if !tau.vars().all(|v| evars.contains(&v)) {
                return Err(Error::invalid(
                    "existential restriction must assign existential variables only",
                ));
            }
        }
        RestrictionKind::UniversalFirstBlock => {
            let first = normalized
                .prefix
                .blocks()
                .first()
                .ok_or_else(|| Error::invalid("formula has no blocks"))?;
            if first.quant != Quantifier::Forall {
                return Err(Error::invalid("first block is not universal"));
            }
            let block: std::collections::BTreeSet<VarId> = first.vars().iter().copied().collect();
            if tau.var_set() != block {
                return Err(Error::invalid(
                    "universal restriction must assign the whole first block",
                ));
            }
        }
    }
    let restricted_formula = qcnf.restrict(tau)?;

    // the pivot line for the universal case: first non-tautological line
    // whose variables sit inside the first block
    let pivot: Option<(usize, u64)> = match kind {
        RestrictionKind::Existential => None,
        RestrictionKind::UniversalFirstBlock => {
            let block: std::collections::BTreeSet<VarId> = normalized.prefix.blocks()[0]
                .vars()
                .iter()
                .copied()
                .collect();
            let mut found = None;
            for (i, step) in proof.steps.iter().enumerate() {
                if step.line.vars().is_subset(&block) && !step.line.is_tautology(caps)? {
                    found = Some((i, step.id));
                    break;
                }
            }
            let (i, id) = found
                .ok_or_else(|| Error::invalid("no non-tautological line over the first block"))?;
            if !proof.steps[i].line.restrict(tau).is_contradiction(caps)? {
                return Err(Error::invalid(
                    "the restriction does not falsify the first eligible line",
                ));
            }
            Some((i, id))
        }
    };

    let mut steps = Vec::with_capacity(proof.steps.len());
    for (pos, step) in proof.steps.iter().enumerate() {
        let line = step.line.restrict(tau);
        let just = match &step.just {
            SemJust::Axiom => {
                if line.is_tautology(caps)? {
                    // the matrix clause was satisfied: the line is trivially
                    // true and follows from nothing
                    SemJust::Consequence(vec![])
                } else {
                    SemJust::Axiom
                }
            }
            SemJust::Consequence(ids) => SemJust::Consequence(ids.clone()),
            SemJust::Reduction { source, beta } => {
                let src_step = proof
                    .step(*source)
                    .ok_or_else(|| Error::check(step.id, CheckKind::DanglingRef(*source)))?;
                let src_restricted = src_step.line.restrict(tau);
                let overlap = beta.vars().any(|v| src_restricted.vars().contains(&v));
                let same_block_as_tau = match (&kind, pivot) {
                    (RestrictionKind::UniversalFirstBlock, Some(_)) => {
                        let block: std::collections::BTreeSet<VarId> = normalized.prefix.blocks()
                            [0]
                        .vars()
                        .iter()
                        .copied()
                        .collect();
                        beta.vars().all(|v| block.contains(&v))
                    }
                    _ => false,
                };
                if same_block_as_tau {
                    // reductions on the restricted block: before the pivot
                    // line they are tautologies, after it they follow from
                    // the pivot's falsified restriction
                    let (pivot_pos, pivot_id) = pivot.expect("pivot for universal restriction");
                    if pos <= pivot_pos {
                        SemJust::Consequence(vec![])
                    } else {
                        SemJust::Consequence(vec![pivot_id])
                    }
                } else if overlap {
                    SemJust::Reduction {
                        source: *source,
                        beta: beta.clone(),
                    }
                } else {
                    // the restriction already removed every block variable of
                    // the source line, so reduction is the identity
                    SemJust::Consequence(vec![*source])
                }
            }
        };
        steps.push(SemStep {
            id: step.id,
            line,
            just,
        });
    }
    let out = SemanticProof {
        steps,
        conclusion: proof.conclusion,
    };
    Ok((restricted_formula, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::qures::{prove_saturate, Mode};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn requalified_qures_accepted() {
        for q in [gen::equality(1).unwrap(), gen::equality(2).unwrap()] {
            let qp = prove_saturate(&q, &caps(), Mode::QuRes).unwrap().unwrap();
            let sem = qures_to_semantic(&q, &qp).unwrap();
            check_semantic(&q, &sem, &caps()).unwrap();
        }
    }

    #[test]
    fn bogus_entailment_rejected() {
        // {x} does not entail {¬x}
        let q = gen::equality(1).unwrap();
        let proof = SemanticProof {
            steps: vec![
                SemStep {
                    id: 1,
                    line: ProofLine::Clause(crate::qcnf::Clause::from_dimacs(&[3]).unwrap()),
                    just: SemJust::Axiom,
                },
                SemStep {
                    id: 2,
                    line: ProofLine::Clause(crate::qcnf::Clause::from_dimacs(&[-3]).unwrap()),
                    just: SemJust::Consequence(vec![1]),
                },
            ],
            conclusion: 2,
        };
        let err = check_semantic(&q, &proof, &caps()).unwrap_err();
        assert!(matches!(
            err,
            Error::Check {
                step: 2,
                kind: CheckKind::NotEntailed
            }
        ));
    }

    #[test]
    fn existential_restriction_preserves_acceptance() {
        let q = gen::equality(2).unwrap();
        let qp = prove_saturate(&q, &caps(), Mode::QuRes).unwrap().unwrap();
        let sem = qures_to_semantic(&q, &qp).unwrap();
        let tau = Assignment::from_pairs([(VarId::new(1), true)]);
        let (rq, rp) =
            restrict_semantic_proof(&q, &sem, &tau, RestrictionKind::Existential, &caps()).unwrap();
        check_semantic(&rq, &rp, &caps()).unwrap();
    }
}
