//! Restriction of QU-Res refutations by partial assignments.
//!
//! Axiom clauses are restricted, satisfied clauses dropped, and the original
//! steps replayed wherever possible; every replayed clause is a subset of the
//! restriction of the original clause. Existential restrictions always
//! preserve refutations. Universal restrictions preserve them provided no
//! reduced literal is satisfied; violating that is reported as an error.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcnf::{Assignment, Clause, Qcnf, RestrictedClause};

use super::normalize::garbage_collect;
use super::{resolve_on, QuResJust, QuResProof, QuResStep};

/// The restricted formula together with the replayed refutation of it.
pub fn restrict_proof(
    qcnf: &Qcnf,
    proof: &QuResProof,
    tau: &Assignment,
) -> Result<(Qcnf, QuResProof)> {
    let restricted = qcnf.restrict(tau)?;
    // axiom index remap: position among surviving clauses
    let mut axiom_map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut kept = 0usize;
    for (k, c) in qcnf.matrix.iter().enumerate() {
        if !matches!(c.restrict(tau), RestrictedClause::Satisfied) {
            axiom_map.insert(k, kept);
            kept += 1;
        }
    }

    // target of each original step: None means its restriction is satisfied
    let mut target: BTreeMap<u64, Option<(u64, Clause)>> = BTreeMap::new();
    let mut steps: Vec<QuResStep> = Vec::new();
    let mut next_id = 1u64;
    let mut conclusion: Option<u64> = None;

    let push =
        |clause: Clause, just: QuResJust, steps: &mut Vec<QuResStep>, next_id: &mut u64| -> u64 {
            let id = *next_id;
            *next_id += 1;
            steps.push(QuResStep { id, clause, just });
            id
        };

    for step in &proof.steps {
        let restricted_clause = step.clause.restrict(tau);
        let entry: Option<(u64, Clause)> = match restricted_clause {
            RestrictedClause::Satisfied => None,
            RestrictedClause::Clause(goal) => match &step.just {
                QuResJust::Axiom(k) => {
                    let new_k = axiom_map[k];
                    let id = push(
                        goal.clone(),
                        QuResJust::Axiom(new_k),
                        &mut steps,
                        &mut next_id,
                    );
                    Some((id, goal))
                }
                QuResJust::Resolve { left, right, pivot } => {
                    let ta = target[left].clone();
                    let tb = target[right].clone();
                    match (ta, tb) {
                        (None, Some(t)) | (Some(t), None) => Some(t),
                        (None, None) => {
                            unreachable!("both antecedents satisfied but the resolvent is not")
                        }
                        (Some((lid, lc)), Some((rid, rc))) => {
                            if !lc.var_set().contains(pivot) {
                                Some((lid, lc))
                            } else if !rc.var_set().contains(pivot) {
                                Some((rid, rc))
                            } else {
                                let resolvent = resolve_on(&lc, &rc, *pivot)
                                    .map_err(|kind| Error::check(step.id, kind))?;
                                let id = push(
                                    resolvent.clone(),
                                    QuResJust::Resolve {
                                        left: lid,
                                        right: rid,
                                        pivot: *pivot,
                                    },
                                    &mut steps,
                                    &mut next_id,
                                );
                                Some((id, resolvent))
                            }
                        }
                    }
                }
                QuResJust::Reduce { source, removed } => match target[source].clone() {
                    None => {
                        return Err(Error::invalid(format!(
                            "restriction satisfies the antecedent of reduction step {} \
                             but not its consequent; the refutation is not preserved",
                            step.id
                        )));
                    }
                    Some((sid, sc)) => {
                        let still_present: Vec<_> = removed
                            .iter()
                            .copied()
                            .filter(|l| sc.contains(*l))
                            .collect();
                        if still_present.is_empty() {
                            Some((sid, sc))
                        } else {
                            let reduced = Clause::new(
                                sc.literals()
                                    .iter()
                                    .copied()
                                    .filter(|l| !still_present.contains(l)),
                            );
                            let id = push(
                                reduced.clone(),
                                QuResJust::Reduce {
                                    source: sid,
                                    removed: still_present,
                                },
                                &mut steps,
                                &mut next_id,
                            );
                            Some((id, reduced))
                        }
                    }
                },
                QuResJust::Weaken { source, .. } => match target[source].clone() {
                    // the source is a subset: if it is satisfied so is this
                    None => unreachable!("weakened clause unsatisfied but source satisfied"),
                    some => some,
                },
            },
        };
        if let Some((id, clause)) = &entry {
            if clause.is_empty() && conclusion.is_none() {
                conclusion = Some(*id);
                target.insert(step.id, entry);
                break;
            }
        }
        target.insert(step.id, entry);
    }

    let conclusion = conclusion
        .ok_or_else(|| Error::invalid("restricted refutation did not reach the empty clause"))?;
    Ok((restricted, garbage_collect(&steps, conclusion)))
}
