//! Property tests for the core invariants: restriction composes, matrix
//! evaluation agrees with restriction, and every text format round-trips.

use proptest::prelude::*;

use qbflab::qcnf::{enumerate_assignments, AssignmentSpace, Block, Prefix};
use qbflab::{gen, qdimacs, Assignment, Clause, Qcnf, Quantifier, VarId};

fn arb_clause(max_var: u32) -> impl Strategy<Value = Clause> {
    prop::collection::vec((1..=max_var, any::<bool>()), 1..=4).prop_map(|lits| {
        Clause::new(
            lits.into_iter()
                .map(|(v, pos)| qbflab::Literal::new(VarId::new(v), pos)),
        )
    })
}

fn arb_qcnf() -> impl Strategy<Value = Qcnf> {
    let max_var = 6u32;
    (
        prop::collection::vec(any::<bool>(), 1..=3),
        prop::collection::vec(arb_clause(max_var), 1..=6),
    )
        .prop_map(move |(quants, matrix)| {
            // split 1..=max_var into consecutive blocks
            let mut blocks = Vec::new();
            let per = max_var.div_ceil(quants.len() as u32);
            for (i, q) in quants.iter().enumerate() {
                let lo = 1 + i as u32 * per;
                let hi = (lo + per - 1).min(max_var);
                if lo > hi {
                    break;
                }
                blocks.push(Block::new(
                    if *q {
                        Quantifier::Exists
                    } else {
                        Quantifier::Forall
                    },
                    (lo..=hi).map(VarId::new),
                ));
            }
            Qcnf::new(Prefix::new(blocks).unwrap(), matrix).unwrap()
        })
}

fn arb_partial(max_var: u32) -> impl Strategy<Value = Assignment> {
    prop::collection::btree_map(1..=max_var, any::<bool>(), 0..=4)
        .prop_map(|m| Assignment::from_pairs(m.into_iter().map(|(v, b)| (VarId::new(v), b))))
}

proptest! {
    #[test]
    fn restriction_composes(q in arb_qcnf(), t1 in arb_partial(6), t2 in arb_partial(6)) {
        // make the parts disjoint
        let t2 = Assignment::from_pairs(t2.iter().filter(|(v, _)| !t1.contains_var(*v)));
        let lhs = q.restrict(&t1).unwrap().restrict(&t2).unwrap();
        let rhs = q.restrict(&t1.union(&t2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_matches_restriction(q in arb_qcnf()) {
        // total assignments: satisfied matrix iff the restriction empties it
        let vars: Vec<VarId> = q.prefix.vars().collect();
        let space = AssignmentSpace::new(vars);
        for tau in space.iter().take(16) {
            let value = q.eval_matrix(&tau).unwrap();
            let restricted = q.restrict(&tau).unwrap();
            if value {
                prop_assert!(restricted.matrix.is_empty());
            } else {
                prop_assert!(restricted.has_empty_clause());
            }
        }
    }

    #[test]
    fn qdimacs_roundtrip_random_q(cn in 1u32..=12, seed in 0u64..=300) {
        let (q, _) = gen::random_q(3, 1, cn, seed).unwrap();
        let text = qdimacs::write(&q);
        let parsed = qdimacs::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &q);
        prop_assert_eq!(qdimacs::write(&parsed), text);
    }

    #[test]
    fn enumeration_has_exactly_two_to_the_k(k in 0usize..=6) {
        let vars: Vec<VarId> = (1..=k as u32).map(VarId::new).collect();
        let all = enumerate_assignments(vars, 24).unwrap();
        prop_assert_eq!(all.len(), 1 << k);
        let distinct: std::collections::BTreeSet<_> = all.iter().collect();
        prop_assert_eq!(distinct.len(), 1 << k);
    }
}

#[test]
fn trace_and_report_formats_roundtrip() {
    // one representative per proof format; the per-format modules carry
    // their own round-trip tests
    let q = gen::equality(2).unwrap();
    let proof =
        qbflab::qures::prove_saturate(&q, &qbflab::Caps::default(), qbflab::qures::Mode::QuRes)
            .unwrap()
            .unwrap();
    let trace = qbflab::qures::write_trace(&proof);
    let parsed = qbflab::qures::parse_trace(&trace, &q).unwrap();
    assert_eq!(qbflab::qures::write_trace(&parsed), trace);
}
