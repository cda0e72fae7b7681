//! Step-by-step simulation of QU-Res refutations in PCR+∀red.
//!
//! Clause encodings are single monomials, so resolution on `p` becomes:
//! multiply each antecedent up to the resolvent monomial (times the pivot's
//! algebraic variable), add them, subtract the complementarity axiom
//! `p + p̄ − 1` multiplied up to the resolvent monomial. Universal reduction
//! becomes reduction by the falsifying assignment. The input proof is
//! normalized first so reductions act on full rightmost blocks.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::qcnf::{Assignment, Qcnf};
use crate::qures::{self, Mode, QuResJust, QuResProof};

use super::{
    encode_clause, AlgebraicVar, FieldElem, FieldTag, Monomial, PcrJust, PcrProof, PcrStep,
    Polynomial,
};

struct Builder {
    field: FieldTag,
    steps: Vec<PcrStep>,
    next_id: u64,
    comp_axioms: BTreeMap<u32, u64>,
}

impl Builder {
    fn push(&mut self, poly: Polynomial, just: PcrJust) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.steps.push(PcrStep { id, poly, just });
        id
    }

    fn comp_axiom(&mut self, x: crate::qcnf::VarId) -> u64 {
        if let Some(&id) = self.comp_axioms.get(&x.get()) {
            return id;
        }
        let poly = Polynomial::from_terms(
            self.field,
            [
                (
                    Monomial::var(AlgebraicVar::plain(x)),
                    FieldElem::one(self.field),
                ),
                (
                    Monomial::var(AlgebraicVar::barred(x)),
                    FieldElem::one(self.field),
                ),
                (Monomial::one(), FieldElem::one(self.field).neg()),
            ],
        )
        .expect("single field");
        let id = self.push(poly, PcrJust::CompAx(x));
        self.comp_axioms.insert(x.get(), id);
        id
    }

    /// Multiplies step `id` (holding `poly`) by every algebraic variable of
    /// `target` missing from it, one step per variable.
    fn multiply_up(
        &mut self,
        mut id: u64,
        mut poly: Polynomial,
        target: &Monomial,
    ) -> (u64, Polynomial) {
        loop {
            // all monomials in these products share the same variable set
            let current_vars: std::collections::BTreeSet<AlgebraicVar> = poly
                .terms()
                .flat_map(|(m, _)| m.algebraic_vars().collect::<Vec<_>>())
                .collect();
            let missing = target.algebraic_vars().find(|v| !current_vars.contains(v));
            let Some(var) = missing else {
                return (id, poly);
            };
            poly = poly.times_var(var);
            id = self.push(poly.clone(), PcrJust::Mul { source: id, var });
        }
    }
}

/// Translates an accepted QU-Res refutation into an accepted PCR+∀red
/// refutation of the same formula over the given field.
pub fn pcr_from_qures(qcnf: &Qcnf, proof: &QuResProof, field: FieldTag) -> Result<PcrProof> {
    let normalized = qures::normalize(qcnf, proof, Mode::QuRes)?;
    let mut b = Builder {
        field,
        steps: Vec::new(),
        next_id: 1,
        comp_axioms: BTreeMap::new(),
    };
    let one = FieldElem::one(field);
    let mut image: BTreeMap<u64, u64> = BTreeMap::new();

    for step in &normalized.steps {
        let target = encode_clause(&step.clause, field);
        let target_monomial = target.terms().next().expect("one monomial").0.clone();
        let id = match &step.just {
            QuResJust::Axiom(k) => b.push(target.clone(), PcrJust::AxiomClause(*k)),
            QuResJust::Resolve { left, right, pivot } => {
                let lc = &normalized.step(*left).expect("left step").clause;
                let rc = &normalized.step(*right).expect("right step").clause;
                let lpos = lc.contains(crate::qcnf::Literal::positive(*pivot));
                let (plain_side, barred_side) = if lpos {
                    ((*left, lc), (*right, rc))
                } else {
                    ((*right, rc), (*left, lc))
                };
                // m·t(p) from the antecedent containing literal p
                let with_plain = target_monomial.times_var(AlgebraicVar::plain(*pivot));
                let with_barred = target_monomial.times_var(AlgebraicVar::barred(*pivot));
                let (aid, apoly) = b.multiply_up(
                    image[&plain_side.0],
                    encode_clause(plain_side.1, field),
                    &with_plain,
                );
                let (bid, bpoly) = b.multiply_up(
                    image[&barred_side.0],
                    encode_clause(barred_side.1, field),
                    &with_barred,
                );
                debug_assert_eq!(apoly.terms().next().unwrap().0, &with_plain);
                debug_assert_eq!(bpoly.terms().next().unwrap().0, &with_barred);
                // m·p + m·p̄
                let sum = apoly.combine(&one, &bpoly, &one).expect("same field");
                let sum_id = b.push(
                    sum.clone(),
                    PcrJust::Lin {
                        left: aid,
                        left_scale: one.clone(),
                        right: bid,
                        right_scale: one.clone(),
                    },
                );
                // (p + p̄ − 1)·m
                let comp = b.comp_axiom(*pivot);
                let comp_poly = b.steps[(comp - 1) as usize].poly.clone();
                let (cid, cpoly) = b.multiply_up(comp, comp_poly, &target_monomial);
                // m = (m·p + m·p̄) − (m·p + m·p̄ − m)
                let result = sum.combine(&one, &cpoly, &one.neg()).expect("same field");
                debug_assert_eq!(result, target);
                b.push(
                    result,
                    PcrJust::Lin {
                        left: sum_id,
                        left_scale: one.clone(),
                        right: cid,
                        right_scale: one.neg(),
                    },
                )
            }
            QuResJust::Reduce { source, removed } => {
                let beta = Assignment::from_literals(removed.iter().map(|l| l.negated()))?;
                b.push(
                    target.clone(),
                    PcrJust::Reduce {
                        source: image[source],
                        beta,
                    },
                )
            }
            QuResJust::Weaken { source, added } => {
                let source_clause = &normalized.step(*source).expect("source step").clause;
                let (id, poly) = b.multiply_up(
                    image[source],
                    encode_clause(source_clause, field),
                    &target_monomial,
                );
                debug_assert_eq!(poly, target);
                let _ = added;
                id
            }
        };
        image.insert(step.id, id);
    }
    Ok(PcrProof {
        field,
        conclusion: image[&normalized.conclusion],
        steps: b.steps,
    })
}
