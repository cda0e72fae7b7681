//! Normal form for QU-Res refutations: maximal universal reduction applied
//! to every clause, one full rightmost block per reduction step, first empty
//! clause as conclusion, duplicates and unreachable steps dropped.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcnf::{Clause, Qcnf, Quantifier};

use super::{check, resolve_on, Mode, QuResJust, QuResProof, QuResStep};

struct Builder<'a> {
    qcnf: &'a Qcnf,
    steps: Vec<QuResStep>,
    by_clause: BTreeMap<Clause, u64>,
    next_id: u64,
}

impl<'a> Builder<'a> {
    fn new(qcnf: &'a Qcnf) -> Self {
        Builder {
            qcnf,
            steps: Vec::new(),
            by_clause: BTreeMap::new(),
            next_id: 1,
        }
    }

    /// Adds a step unless the clause is already derived; returns its id.
    fn add(&mut self, clause: Clause, just: QuResJust) -> u64 {
        if let Some(&id) = self.by_clause.get(&clause) {
            return id;
        }
        let id = self.next_id;
        self.next_id += 1;
        self.by_clause.insert(clause.clone(), id);
        self.steps.push(QuResStep { id, clause, just });
        id
    }

    /// The literals of the clause's rightmost block, provided that block is
    /// universal and right of every existential variable of the clause.
    fn reducible_block(&self, clause: &Clause) -> Option<Vec<crate::qcnf::Literal>> {
        let vars = clause.var_set();
        let bi = self.qcnf.prefix.rightmost_block(&vars)?;
        let block = &self.qcnf.prefix.blocks()[bi];
        if block.quant != Quantifier::Forall {
            return None;
        }
        let lits: Vec<_> = clause
            .literals()
            .iter()
            .copied()
            .filter(|l| block.contains(l.var()))
            .collect();
        debug_assert!(!lits.is_empty());
        Some(lits)
    }

    /// Chains full-block reduction steps until no rightmost universal block
    /// remains.
    fn reduce_fully(&mut self, mut id: u64, mut clause: Clause) -> (u64, Clause) {
        while let Some(removed) = self.reducible_block(&clause) {
            let reduced = Clause::new(
                clause
                    .literals()
                    .iter()
                    .copied()
                    .filter(|l| !removed.contains(l)),
            );
            id = self.add(
                reduced.clone(),
                QuResJust::Reduce {
                    source: id,
                    removed,
                },
            );
            clause = reduced;
        }
        (id, clause)
    }
}

/// Rewrites an accepted refutation into the normal form. The result is
/// accepted by the checker and normalizing again is the identity.
pub fn normalize(qcnf: &Qcnf, proof: &QuResProof, mode: Mode) -> Result<QuResProof> {
    check(qcnf, proof, mode)?;
    let mut b = Builder::new(qcnf);
    // target of each original step: (new id, its clause), a subset of the
    // original clause
    let mut target: BTreeMap<u64, (u64, Clause)> = BTreeMap::new();
    let mut conclusion: Option<u64> = None;

    for step in &proof.steps {
        let entry = match &step.just {
            QuResJust::Axiom(k) => {
                let base = qcnf.matrix[*k].clone();
                let id = b.add(base.clone(), QuResJust::Axiom(*k));
                b.reduce_fully(id, base)
            }
            QuResJust::Resolve { left, right, pivot } => {
                let (lid, lc) = target[left].clone();
                let (rid, rc) = target[right].clone();
                if !lc.var_set().contains(pivot) {
                    (lid, lc)
                } else if !rc.var_set().contains(pivot) {
                    (rid, rc)
                } else {
                    let resolvent =
                        resolve_on(&lc, &rc, *pivot).map_err(|kind| Error::check(step.id, kind))?;
                    let id = b.add(
                        resolvent.clone(),
                        QuResJust::Resolve {
                            left: lid,
                            right: rid,
                            pivot: *pivot,
                        },
                    );
                    b.reduce_fully(id, resolvent)
                }
            }
            // targets are always fully reduced, so original reductions and
            // weakenings collapse onto their source
            QuResJust::Reduce { source, .. } | QuResJust::Weaken { source, .. } => {
                target[source].clone()
            }
        };
        if entry.1.is_empty() && conclusion.is_none() {
            conclusion = Some(entry.0);
            target.insert(step.id, entry);
            break;
        }
        target.insert(step.id, entry);
    }

    let conclusion = conclusion.ok_or_else(|| {
        Error::invalid("replay of an accepted refutation did not reach the empty clause")
    })?;

    Ok(garbage_collect(&b.steps, conclusion))
}

/// Keeps the sub-derivation of `conclusion` and renumbers ids to 1..k in
/// step order.
pub(super) fn garbage_collect(steps: &[QuResStep], conclusion: u64) -> QuResProof {
    let mut needed: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    needed.insert(conclusion);
    for step in steps.iter().rev() {
        if needed.contains(&step.id) {
            needed.extend(step.just.antecedents());
        }
    }
    let mut remap: BTreeMap<u64, u64> = BTreeMap::new();
    let mut out = Vec::with_capacity(needed.len());
    for step in steps {
        if !needed.contains(&step.id) {
            continue;
        }
        let new_id = remap.len() as u64 + 1;
        remap.insert(step.id, new_id);
        let just = match &step.just {
            QuResJust::Axiom(k) => QuResJust::Axiom(*k),
            QuResJust::Resolve { left, right, pivot } => QuResJust::Resolve {
                left: remap[left],
                right: remap[right],
                pivot: *pivot,
            },
            QuResJust::Reduce { source, removed } => QuResJust::Reduce {
                source: remap[source],
                removed: removed.clone(),
            },
            QuResJust::Weaken { source, added } => QuResJust::Weaken {
                source: remap[source],
                added: added.clone(),
            },
        };
        out.push(QuResStep {
            id: new_id,
            clause: step.clause.clone(),
            just,
        });
    }
    QuResProof {
        steps: out,
        conclusion: remap[&conclusion],
    }
}

/// Number of reduction steps acting on the given universal block index.
pub fn reductions_on_block(qcnf: &Qcnf, proof: &QuResProof, block_idx: usize) -> usize {
    proof
        .steps
        .iter()
        .filter(|s| match &s.just {
            QuResJust::Reduce { removed, .. } => removed
                .iter()
                .any(|l| qcnf.prefix.block_of(l.var()) == Some(block_idx)),
            _ => false,
        })
        .count()
}

/// Index of the leftmost universal block of the prefix, if any.
pub fn leftmost_universal_block(qcnf: &Qcnf) -> Option<usize> {
    qcnf.prefix
        .blocks()
        .iter()
        .position(|b| b.quant == Quantifier::Forall)
}
