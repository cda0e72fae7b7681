//! Step-by-step simulation of QU-Res refutations in cutting planes.
//!
//! Resolution becomes: add the two clause inequalities (the pivot cancels),
//! pad every unmerged literal with its Boolean axiom, divide by two.
//! Universal reduction becomes reduction by the falsifying assignment to the
//! removed literals. The input proof is normalized first so its reductions
//! act on full rightmost blocks, matching the reduction side condition here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::qcnf::{Assignment, Literal, Qcnf};
use crate::qures::{self, Mode, QuResJust, QuResProof};

use super::{encode_clause, CpJust, CpProof, CpStep, LinearInequality};

struct Builder {
    steps: Vec<CpStep>,
    next_id: u64,
    bool_axioms: BTreeMap<(u32, bool), u64>, // (var, upper?) -> id
}

impl Builder {
    fn push(&mut self, line: LinearInequality, just: CpJust) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.steps.push(CpStep { id, line, just });
        id
    }

    /// `v ≥ 0` (lower) or `−v ≥ −1` (upper), deduplicated.
    fn bool_axiom(&mut self, v: crate::qcnf::VarId, upper: bool) -> u64 {
        if let Some(&id) = self.bool_axioms.get(&(v.get(), upper)) {
            return id;
        }
        let (line, just) = if upper {
            (
                LinearInequality::new([(v, -BigInt::one())], -BigInt::one()),
                CpJust::BoolUpper(v),
            )
        } else {
            (
                LinearInequality::new([(v, BigInt::one())], BigInt::from(0)),
                CpJust::BoolLower(v),
            )
        };
        let id = self.push(line, just);
        self.bool_axioms.insert((v.get(), upper), id);
        id
    }

    /// Adds the Boolean axiom for `lit`, doubling its coefficient.
    fn pad(&mut self, current: (u64, LinearInequality), lit: Literal) -> (u64, LinearInequality) {
        let ax = self.bool_axiom(lit.var(), !lit.is_positive());
        let ax_line = self
            .steps
            .iter()
            .find(|s| s.id == ax)
            .expect("axiom step")
            .line
            .clone();
        let line = current.1.combine(&BigInt::one(), &ax_line, &BigInt::one());
        let id = self.push(
            line.clone(),
            CpJust::Lin {
                left: current.0,
                left_scale: BigInt::one(),
                right: ax,
                right_scale: BigInt::one(),
            },
        );
        (id, line)
    }
}

/// Translates an accepted QU-Res refutation into an accepted CP+∀red
/// refutation of the same formula.
pub fn cp_from_qures(qcnf: &Qcnf, proof: &QuResProof) -> Result<CpProof> {
    let normalized = qures::normalize(qcnf, proof, Mode::QuRes)?;
    let mut b = Builder {
        steps: Vec::new(),
        next_id: 1,
        bool_axioms: BTreeMap::new(),
    };
    // image of each QU-Res step: the encoding of its clause
    let mut image: BTreeMap<u64, u64> = BTreeMap::new();

    for step in &normalized.steps {
        let target = encode_clause(&step.clause)?;
        let id = match &step.just {
            QuResJust::Axiom(k) => b.push(target.clone(), CpJust::AxiomClause(*k)),
            QuResJust::Resolve { left, right, .. } => {
                let lc = &normalized.step(*left).expect("left step").clause;
                let rc = &normalized.step(*right).expect("right step").clause;
                let sum_line =
                    encode_clause(lc)?.combine(&BigInt::one(), &encode_clause(rc)?, &BigInt::one());
                let sum_id = b.push(
                    sum_line.clone(),
                    CpJust::Lin {
                        left: image[left],
                        left_scale: BigInt::one(),
                        right: image[right],
                        right_scale: BigInt::one(),
                    },
                );
                // literals occurring in exactly one antecedent still have
                // coefficient ±1; pad each with its Boolean axiom
                let mut current = (sum_id, sum_line);
                for lit in step.clause.literals() {
                    let in_both = lc.contains(*lit) && rc.contains(*lit);
                    if !in_both {
                        current = b.pad(current, *lit);
                    }
                }
                let halved = current
                    .1
                    .divide(&BigInt::from(2))
                    .map_err(|kind| Error::check(step.id, kind))?;
                debug_assert_eq!(halved, target);
                b.push(
                    halved,
                    CpJust::Div {
                        source: current.0,
                        divisor: BigInt::from(2),
                    },
                )
            }
            QuResJust::Reduce { source, removed } => {
                let beta = Assignment::from_literals(removed.iter().map(|l| l.negated()))?;
                b.push(
                    target.clone(),
                    CpJust::Reduce {
                        source: image[source],
                        beta,
                    },
                )
            }
            QuResJust::Weaken { source, added } => {
                let mut current = (
                    image[source],
                    encode_clause(&normalized.step(*source).expect("source step").clause)?,
                );
                for lit in added {
                    current = b.pad(current, *lit);
                }
                debug_assert_eq!(current.1, target);
                current.0
            }
        };
        image.insert(step.id, id);
    }
    Ok(CpProof {
        conclusion: image[&normalized.conclusion],
        steps: b.steps,
    })
}
