//! Cross-cutting regression sweep: on every accepted proof the size, cost
//! and capacity oracles satisfy the size-cost-capacity inequality, every
//! produced response map passes its defining-condition audit, and every
//! extracted strategy wins.

use qbflab::extract::extract_strategy;
use qbflab::gen;
use qbflab::line::ProofLine;
use qbflab::oracle::verify_strategy;
use qbflab::qures::{self, Mode};
use qbflab::response::default_response_maps;
use qbflab::scc::{verify_scc, AnyProof};
use qbflab::semantic;
use qbflab::{Caps, Literal, Qcnf};

fn caps() -> Caps {
    Caps::default()
}

/// Verifies the full pipeline on one proof: soundness of acceptance, the
/// inequality, response-map audits, and extraction with both the default
/// and the minimal response maps.
fn sweep(qcnf: &Qcnf, proof: &AnyProof<'_>) {
    // accepted refutations only exist for false formulas
    assert!(!qbflab::oracle::truth(qcnf, &caps()).unwrap());
    let report = verify_scc(qcnf, proof, &caps()).unwrap();
    assert!(
        report.holds,
        "size-cost-capacity violated: size {} cost {} capacity {}",
        report.size, report.cost, report.capacity
    );
    let lines = proof.lines();
    let maps = default_response_maps(qcnf, &lines, &caps()).unwrap();
    for (i, map) in &maps {
        assert!(map.audit(qcnf, &lines[*i], &caps()).unwrap());
    }
    let out = extract_strategy(qcnf, &lines, &maps, &caps()).unwrap();
    assert!(verify_strategy(qcnf, &out.strategy, &caps()).unwrap());
    // extraction wins for every valid response map set, not just the
    // default one: swap in the minimal witnesses
    let minimal: std::collections::BTreeMap<usize, qbflab::response::ResponseMap> = maps
        .keys()
        .map(|&i| {
            let (_, map) = qbflab::response::min_response_range(qcnf, &lines[i], &caps()).unwrap();
            (i, map)
        })
        .collect();
    let out = extract_strategy(qcnf, &lines, &minimal, &caps()).unwrap();
    assert!(verify_strategy(qcnf, &out.strategy, &caps()).unwrap());
}

#[test]
fn qures_family_proofs() {
    for q in [
        gen::equality(1).unwrap(),
        gen::equality(2).unwrap(),
        gen::kbkf_weak(1).unwrap(),
        gen::kbkf(1).unwrap(),
    ] {
        let proof = qures::prove_saturate(&q, &caps(), Mode::QuRes)
            .unwrap()
            .unwrap();
        sweep(&q, &AnyProof::QuRes(&proof));
    }
}

#[test]
fn translated_cp_and_pcr_proofs() {
    let q = gen::equality(2).unwrap();
    let qp = qures::prove_saturate(&q, &caps(), Mode::QuRes)
        .unwrap()
        .unwrap();
    let cp = qbflab::cp::cp_from_qures(&q, &qp).unwrap();
    sweep(&q, &AnyProof::Cp(&cp));
    let pcr = qbflab::pcr::pcr_from_qures(&q, &qp, qbflab::pcr::FieldTag::Rational).unwrap();
    sweep(&q, &AnyProof::Pcr(&pcr));
}

#[test]
fn semantic_proofs() {
    let q = gen::equality(2).unwrap();
    let qp = qures::prove_saturate(&q, &caps(), Mode::QuRes)
        .unwrap()
        .unwrap();
    let sem = semantic::qures_to_semantic(&q, &qp).unwrap();
    sweep(&q, &AnyProof::Semantic(&sem));
    for n in 1..=2u32 {
        let fq = gen::equality(n).unwrap();
        let frege = semantic::frege_eq_refutation(n, &caps()).unwrap();
        sweep(&fq, &AnyProof::Semantic(&frege));
    }
}

#[test]
fn sigma2_component_proofs() {
    let mut done = 0;
    for seed in 0..30u64 {
        let (_, meta) = gen::random_q(4, 1, 7, seed).unwrap();
        for comp in &meta.components {
            let psi = comp.psi().unwrap();
            if !qbflab::oracle::psi_false(&psi).unwrap() {
                continue;
            }
            let proof = qures::refute_sigma2(&psi).unwrap();
            sweep(&psi, &AnyProof::QuRes(&proof));
            done += 1;
            if done >= 5 {
                return;
            }
        }
    }
    assert!(done >= 2, "too few false components sampled");
}

/// The counting argument behind the equality lower bound: every total
/// universal assignment embeds, negated, in some clause of the refutation,
/// and distinct assignments embed in distinct clauses.
#[test]
fn negated_block_assignments_embed_in_distinct_clauses() {
    for n in 1..=3u32 {
        let q = gen::equality(n).unwrap();
        let proof = qures::prove_saturate(&q, &caps(), Mode::QuRes)
            .unwrap()
            .unwrap();
        let u_vars: Vec<_> = (n + 1..=2 * n).map(qbflab::VarId::new).collect();
        let space = qbflab::qcnf::AssignmentSpace::new(u_vars);
        let mut hits = std::collections::BTreeSet::new();
        for beta in space.iter() {
            let negated: Vec<Literal> = beta.iter().map(|(v, b)| Literal::new(v, !b)).collect();
            let holder = proof
                .steps
                .iter()
                .position(|s| negated.iter().all(|l| s.clause.contains(*l)))
                .unwrap_or_else(|| panic!("no clause holds the negation of {beta}"));
            assert!(hits.insert(holder), "two assignments embed in one clause");
        }
        assert!(proof.size() as u64 >= space.len());
    }
}

/// Capacity as min-over-sets of max range equals max-over-lines of min
/// range: any valid response map set's maximum range is at least the
/// computed capacity, with equality for the per-line minimal set.
#[test]
fn capacity_min_max_exchange() {
    let q = gen::equality(2).unwrap();
    let proof = qures::prove_saturate(&q, &caps(), Mode::QuRes)
        .unwrap()
        .unwrap();
    let lines: Vec<ProofLine> = proof
        .steps
        .iter()
        .map(|s| ProofLine::Clause(s.clause.clone()))
        .collect();
    let cap = qbflab::response::capacity(&q, &lines, &caps()).unwrap();
    // the per-line minimal witnesses achieve the capacity exactly
    let mut max_min = 1;
    for line in &lines {
        if !line.is_reducible(&q.prefix) {
            continue;
        }
        let (r, map) = qbflab::response::min_response_range(&q, line, &caps()).unwrap();
        assert!(map.audit(&q, line, &caps()).unwrap());
        max_min = max_min.max(r);
    }
    assert_eq!(cap, max_min);
    // the default (non-minimal in general) set can only be worse
    let defaults = default_response_maps(&q, &lines, &caps()).unwrap();
    let default_max = defaults.values().map(|m| m.range_size()).max().unwrap_or(1);
    assert!(default_max >= cap);
}
