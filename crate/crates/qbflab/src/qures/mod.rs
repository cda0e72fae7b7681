//! QU-resolution: proof representation, checker, normal form, restriction,
//! a tiny saturation prover, and linear refutations of (1,2) components via
//! 2-SAT.
//!
//! The checker implements resolution (over existential or universal pivots),
//! universal reduction (removed literals must be universal and right of every
//! existential variable of the clause), weakening, and axiom introduction,
//! with tautological clauses forbidden throughout. A strict mode additionally
//! forbids universal pivots.

mod normalize;
mod prove;
mod restrict;
mod trace;

pub use normalize::{leftmost_universal_block, normalize, reductions_on_block};
pub use prove::{prove_saturate, refute_2sat, refute_sigma2};
pub use restrict::restrict_proof;
pub use trace::{parse_trace, write_trace};

use std::collections::BTreeMap;

use crate::error::{CheckKind, Error, Result};
use crate::qcnf::{Clause, Literal, Qcnf, Quantifier, VarId};

/// Resolution over universal pivots is allowed in `QuRes` (the default) and
/// forbidden in `QRes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    QuRes,
    QRes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuResJust {
    /// Clause `k` of the matrix.
    Axiom(usize),
    Resolve {
        left: u64,
        right: u64,
        pivot: VarId,
    },
    Reduce {
        source: u64,
        removed: Vec<Literal>,
    },
    Weaken {
        source: u64,
        added: Vec<Literal>,
    },
}

impl QuResJust {
    pub fn antecedents(&self) -> Vec<u64> {
        match self {
            QuResJust::Axiom(_) => vec![],
            QuResJust::Resolve { left, right, .. } => vec![*left, *right],
            QuResJust::Reduce { source, .. } | QuResJust::Weaken { source, .. } => vec![*source],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuResStep {
    pub id: u64,
    pub clause: Clause,
    pub just: QuResJust,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuResProof {
    pub steps: Vec<QuResStep>,
    pub conclusion: u64,
}

impl QuResProof {
    /// Proof size: the number of steps.
    pub fn size(&self) -> usize {
        self.steps.len()
    }

    pub fn step(&self, id: u64) -> Option<&QuResStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn conclusion_clause(&self) -> Option<&Clause> {
        self.step(self.conclusion).map(|s| &s.clause)
    }
}

/// Checks a refutation: every step rule-valid, no tautologies, conclusion
/// empty.
pub fn check(qcnf: &Qcnf, proof: &QuResProof, mode: Mode) -> Result<()> {
    check_derivation(qcnf, proof, mode)?;
    match proof.conclusion_clause() {
        Some(c) if c.is_empty() => Ok(()),
        Some(_) => Err(Error::check(proof.conclusion, CheckKind::WrongConclusion)),
        None => Err(Error::check(
            proof.conclusion,
            CheckKind::DanglingRef(proof.conclusion),
        )),
    }
}

/// Checks every step of a derivation (without the empty-conclusion demand).
pub fn check_derivation(qcnf: &Qcnf, proof: &QuResProof, mode: Mode) -> Result<()> {
    for (k, c) in qcnf.matrix.iter().enumerate() {
        if c.is_tautology() {
            return Err(Error::invalid(format!(
                "matrix clause {k} is tautological; QU-Res inputs must be tautology-free"
            )));
        }
    }
    let mut seen: BTreeMap<u64, &Clause> = BTreeMap::new();
    for step in &proof.steps {
        if seen.contains_key(&step.id) {
            return Err(Error::check(step.id, CheckKind::DuplicateId));
        }
        let antecedent = |id: u64| -> Result<&Clause> {
            seen.get(&id)
                .copied()
                .ok_or_else(|| Error::check(step.id, CheckKind::DanglingRef(id)))
        };
        if step.clause.is_tautology() {
            return Err(Error::check(step.id, CheckKind::Tautology));
        }
        match &step.just {
            QuResJust::Axiom(k) => {
                let c = qcnf
                    .matrix
                    .get(*k)
                    .ok_or_else(|| Error::check(step.id, CheckKind::AxiomOutOfRange(*k)))?;
                if c != &step.clause {
                    return Err(Error::check(step.id, CheckKind::AxiomMismatch(*k)));
                }
            }
            QuResJust::Resolve { left, right, pivot } => {
                let lc = antecedent(*left)?;
                let rc = antecedent(*right)?;
                if mode == Mode::QRes
                    && qcnf.prefix.quantifier_of(*pivot) == Some(Quantifier::Forall)
                {
                    return Err(Error::check(
                        step.id,
                        CheckKind::UniversalPivot(pivot.get()),
                    ));
                }
                let resolvent =
                    resolve_on(lc, rc, *pivot).map_err(|kind| Error::check(step.id, kind))?;
                if resolvent != step.clause {
                    return Err(Error::check(step.id, CheckKind::ResolventMismatch));
                }
            }
            QuResJust::Reduce { source, removed } => {
                let sc = antecedent(*source)?;
                if removed.is_empty() {
                    return Err(Error::check(step.id, CheckKind::ReduceEmpty));
                }
                for lit in removed {
                    if !sc.contains(*lit) {
                        return Err(Error::check(step.id, CheckKind::LineMismatch));
                    }
                    if qcnf.prefix.quantifier_of(lit.var()) != Some(Quantifier::Forall) {
                        return Err(Error::check(
                            step.id,
                            CheckKind::ReduceExistential(lit.var().get()),
                        ));
                    }
                }
                let removed_vars: Vec<VarId> = removed.iter().map(|l| l.var()).collect();
                let result = Clause::new(
                    sc.literals()
                        .iter()
                        .copied()
                        .filter(|l| !removed.contains(l)),
                );
                // every removed variable must be right of every existential
                // variable of the clause
                let exists = qcnf.prefix.exists_vars();
                for u in &removed_vars {
                    for e in sc.vars() {
                        if exists.contains(&e) && !qcnf.prefix.left_of(e, *u) {
                            return Err(Error::check(
                                step.id,
                                CheckKind::ReduceBlocked {
                                    blocked: u.get(),
                                    witness: e.get(),
                                },
                            ));
                        }
                    }
                }
                if result != step.clause {
                    return Err(Error::check(step.id, CheckKind::LineMismatch));
                }
            }
            QuResJust::Weaken { source, added } => {
                let sc = antecedent(*source)?;
                if added.is_empty() {
                    return Err(Error::check(step.id, CheckKind::WeakenNotSuperset));
                }
                let expected = Clause::new(sc.literals().iter().chain(added.iter()).copied());
                if expected != step.clause || !sc.is_subset_of(&step.clause) || sc == &step.clause {
                    return Err(Error::check(step.id, CheckKind::WeakenNotSuperset));
                }
                let pvars = qcnf.prefix.var_set();
                for lit in added {
                    if !pvars.contains(&lit.var()) {
                        return Err(Error::check(
                            step.id,
                            CheckKind::UnknownVar(lit.var().get()),
                        ));
                    }
                }
            }
        }
        seen.insert(step.id, &step.clause);
    }
    Ok(())
}

/// The resolvent of two non-tautological clauses on `pivot`; the pivot must
/// occur with opposite polarity, and the result must be non-tautological.
pub(crate) fn resolve_on(
    left: &Clause,
    right: &Clause,
    pivot: VarId,
) -> std::result::Result<Clause, CheckKind> {
    let lp = left.contains(Literal::positive(pivot));
    let ln = left.contains(Literal::negative(pivot));
    let rp = right.contains(Literal::positive(pivot));
    let rn = right.contains(Literal::negative(pivot));
    let ok = (lp && rn) || (ln && rp);
    if !ok {
        return Err(CheckKind::PivotMissing(pivot.get()));
    }
    let resolvent = Clause::new(
        left.literals()
            .iter()
            .chain(right.literals().iter())
            .copied()
            .filter(|l| l.var() != pivot),
    );
    if resolvent.is_tautology() {
        return Err(CheckKind::Tautology);
    }
    Ok(resolvent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::qcnf::{Assignment, Block, Prefix};

    fn v(id: u32) -> VarId {
        VarId::new(id)
    }

    fn clause(ls: &[i64]) -> Clause {
        Clause::from_dimacs(ls).unwrap()
    }

    /// A hand refutation of EQ(1): resolve both pair clauses with the long
    /// clause on t1, reduce u1 twice, resolve on x1.
    fn eq1_proof() -> QuResProof {
        QuResProof {
            steps: vec![
                QuResStep {
                    id: 1,
                    clause: clause(&[1, 2, -3]),
                    just: QuResJust::Axiom(0),
                },
                QuResStep {
                    id: 2,
                    clause: clause(&[-1, -2, -3]),
                    just: QuResJust::Axiom(1),
                },
                QuResStep {
                    id: 3,
                    clause: clause(&[3]),
                    just: QuResJust::Axiom(2),
                },
                QuResStep {
                    id: 4,
                    clause: clause(&[1, 2]),
                    just: QuResJust::Resolve {
                        left: 1,
                        right: 3,
                        pivot: v(3),
                    },
                },
                QuResStep {
                    id: 5,
                    clause: clause(&[-1, -2]),
                    just: QuResJust::Resolve {
                        left: 2,
                        right: 3,
                        pivot: v(3),
                    },
                },
                QuResStep {
                    id: 6,
                    clause: clause(&[1]),
                    just: QuResJust::Reduce {
                        source: 4,
                        removed: vec![Literal::positive(v(2))],
                    },
                },
                QuResStep {
                    id: 7,
                    clause: clause(&[-1]),
                    just: QuResJust::Reduce {
                        source: 5,
                        removed: vec![Literal::negative(v(2))],
                    },
                },
                QuResStep {
                    id: 8,
                    clause: Clause::empty(),
                    just: QuResJust::Resolve {
                        left: 6,
                        right: 7,
                        pivot: v(1),
                    },
                },
            ],
            conclusion: 8,
        }
    }

    #[test]
    fn eq1_hand_proof_accepted() {
        let q = gen::equality(1).unwrap();
        check(&q, &eq1_proof(), Mode::QuRes).unwrap();
    }

    #[test]
    fn resolve_example() {
        let r = resolve_on(&clause(&[1, 2, -3]), &clause(&[3]), v(3)).unwrap();
        assert_eq!(r, clause(&[1, 2]));
    }

    #[test]
    fn reduce_rightmost_universal() {
        // under ∃x1 ∀u1 ∃t1: {x1, u1} reduces to {x1}
        let q = gen::equality(1).unwrap();
        let proof = QuResProof {
            steps: vec![
                QuResStep {
                    id: 1,
                    clause: clause(&[1, 2, -3]),
                    just: QuResJust::Axiom(0),
                },
                QuResStep {
                    id: 2,
                    clause: clause(&[3]),
                    just: QuResJust::Axiom(2),
                },
                QuResStep {
                    id: 3,
                    clause: clause(&[1, 2]),
                    just: QuResJust::Resolve {
                        left: 1,
                        right: 2,
                        pivot: v(3),
                    },
                },
                QuResStep {
                    id: 4,
                    clause: clause(&[1]),
                    just: QuResJust::Reduce {
                        source: 3,
                        removed: vec![Literal::positive(v(2))],
                    },
                },
            ],
            conclusion: 4,
        };
        check_derivation(&q, &proof, Mode::QuRes).unwrap();
    }

    #[test]
    fn tautological_resolvent_rejected() {
        // resolving {x,u} and {¬x,¬u} on x gives {u,¬u}: forbidden
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(Quantifier::Exists, [v(1)]),
                Block::new(Quantifier::Forall, [v(2)]),
            ])
            .unwrap(),
            vec![clause(&[1, 2]), clause(&[-1, -2])],
        )
        .unwrap();
        let proof = QuResProof {
            steps: vec![
                QuResStep {
                    id: 1,
                    clause: clause(&[1, 2]),
                    just: QuResJust::Axiom(0),
                },
                QuResStep {
                    id: 2,
                    clause: clause(&[-1, -2]),
                    just: QuResJust::Axiom(1),
                },
                QuResStep {
                    id: 3,
                    clause: clause(&[2, -2]),
                    just: QuResJust::Resolve {
                        left: 1,
                        right: 2,
                        pivot: v(1),
                    },
                },
            ],
            conclusion: 3,
        };
        let err = check_derivation(&q, &proof, Mode::QuRes).unwrap_err();
        assert!(matches!(
            err,
            Error::Check {
                step: 3,
                kind: CheckKind::Tautology
            }
        ));
    }

    #[test]
    fn reduce_blocked_by_right_existential() {
        // u1 is left of t1, so {u1, ¬t1} cannot reduce u1
        let q = gen::equality(1).unwrap();
        let proof = QuResProof {
            steps: vec![
                QuResStep {
                    id: 1,
                    clause: clause(&[1, 2, -3]),
                    just: QuResJust::Axiom(0),
                },
                QuResStep {
                    id: 2,
                    clause: clause(&[1, -3]),
                    just: QuResJust::Reduce {
                        source: 1,
                        removed: vec![Literal::positive(v(2))],
                    },
                },
            ],
            conclusion: 2,
        };
        let err = check_derivation(&q, &proof, Mode::QuRes).unwrap_err();
        assert!(matches!(
            err,
            Error::Check {
                step: 2,
                kind: CheckKind::ReduceBlocked {
                    blocked: 2,
                    witness: 3
                }
            }
        ));
    }

    #[test]
    fn qres_mode_forbids_universal_pivot() {
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(Quantifier::Exists, [v(1)]),
                Block::new(Quantifier::Forall, [v(2)]),
                Block::new(Quantifier::Exists, [v(3)]),
            ])
            .unwrap(),
            vec![clause(&[1, 2, 3]), clause(&[1, -2, 3])],
        )
        .unwrap();
        let proof = QuResProof {
            steps: vec![
                QuResStep {
                    id: 1,
                    clause: clause(&[1, 2, 3]),
                    just: QuResJust::Axiom(0),
                },
                QuResStep {
                    id: 2,
                    clause: clause(&[1, -2, 3]),
                    just: QuResJust::Axiom(1),
                },
                QuResStep {
                    id: 3,
                    clause: clause(&[1, 3]),
                    just: QuResJust::Resolve {
                        left: 1,
                        right: 2,
                        pivot: v(2),
                    },
                },
            ],
            conclusion: 3,
        };
        check_derivation(&q, &proof, Mode::QuRes).unwrap();
        assert!(matches!(
            check_derivation(&q, &proof, Mode::QRes).unwrap_err(),
            Error::Check {
                kind: CheckKind::UniversalPivot(2),
                ..
            }
        ));
    }

    #[test]
    fn accepted_refutations_are_sound_at_desk_scale() {
        // soundness spot check: EQ(1) is false and the hand proof is accepted
        let q = gen::equality(1).unwrap();
        check(&q, &eq1_proof(), Mode::QuRes).unwrap();
        assert!(!crate::oracle::truth(&q, &crate::Caps::default()).unwrap());
        let _ = Assignment::empty();
    }
}
