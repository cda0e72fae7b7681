//! The acceptance suite: twelve criteria covering exact desk-scale values
//! of the closed-form quantities, property sweeps over sampled proofs and
//! restrictions, the statistical guards of the random study, and format
//! determinism. Each criterion runs independently and reports one line.

use std::collections::BTreeSet;
use std::time::Instant;

use qbflab::extract::extract_strategy;
use qbflab::line::ProofLine;
use qbflab::oracle::{
    self, cost_exact_general, cost_exact_single_block, synthesize_winning_forall, truth,
    verify_strategy,
};
use qbflab::pcr::{AlgebraicVar, FieldElem, FieldTag, Monomial, Polynomial};
use qbflab::qcnf::{AssignmentSpace, Block, Prefix};
use qbflab::qures::{self, Mode};
use qbflab::response::{self, default_response_maps};
use qbflab::rng::SplitMix64;
use qbflab::scc::{verify_scc, AnyProof};
use qbflab::semantic::{
    self, check_semantic, completeness_refutation, frege_eq_line, frege_eq_refutation,
    RestrictionKind,
};
use qbflab::study::{self, StudyParams};
use qbflab::{gen, qdimacs, Assignment, Caps, Clause, Literal, Qcnf, Quantifier, VarId};

pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn render(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

type Check = std::result::Result<String, String>;

fn outcome(index: usize, name: &'static str, res: Check) -> CriterionOutcome {
    match res {
        Ok(detail) => CriterionOutcome {
            index,
            name,
            passed: true,
            detail,
        },
        Err(detail) => CriterionOutcome {
            index,
            name,
            passed: false,
            detail,
        },
    }
}

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return fail(format!($($arg)*));
        }
    };
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

pub fn run_all(caps: &Caps) -> Vec<CriterionOutcome> {
    (1..=12)
        .map(|i| run_one(i, caps).expect("fixed index"))
        .collect()
}

/// Runs a single criterion by its 1-based index.
pub fn run_one(index: usize, caps: &Caps) -> Option<CriterionOutcome> {
    Some(match index {
        1 => outcome(1, "equality cost", criterion_1(caps)),
        2 => outcome(2, "equality hardness in clause proofs", criterion_2(caps)),
        3 => outcome(3, "weakened doubled family", criterion_3(caps)),
        4 => outcome(4, "extraction soundness", criterion_4(caps)),
        5 => outcome(5, "cutting-planes refutation", criterion_5(caps)),
        6 => outcome(6, "polynomial response maps", criterion_6(caps)),
        7 => outcome(7, "formula-line refutation", criterion_7(caps)),
        8 => outcome(8, "completeness builder", criterion_8(caps)),
        9 => outcome(9, "random family statistics", criterion_9(caps)),
        10 => outcome(10, "counting bound consistency", criterion_10(caps)),
        11 => outcome(11, "restriction closure", criterion_11(caps)),
        12 => outcome(12, "determinism and formats", criterion_12(caps)),
        _ => return None,
    })
}

/// cost(EQ(n)) = 2^n exactly for n in 1..=3, within 10 seconds.
fn criterion_1(caps: &Caps) -> Check {
    let start = Instant::now();
    for n in 1..=3u32 {
        let q = gen::equality(n).map_err(e)?;
        let report = cost_exact_single_block(&q, caps).map_err(e)?;
        ensure!(
            report.cost == 1 << n,
            "cost(EQ({n})) = {} != 2^{n}",
            report.cost
        );
        ensure!(
            verify_strategy(&q, &report.witness, caps).map_err(e)?,
            "cost witness for EQ({n}) is not winning"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs() < 10, "took {elapsed:?}, budget 10 s");
    Ok(format!("cost(EQ(n)) = 2^n for n in 1..=3 ({elapsed:?})"))
}

/// Saturation refutations of EQ(1..3) accepted, size >= 2^n, capacity
/// exactly 1, and the size-cost-capacity report holds; within 60 seconds.
fn criterion_2(caps: &Caps) -> Check {
    let start = Instant::now();
    let mut sizes = Vec::new();
    for n in 1..=3u32 {
        let q = gen::equality(n).map_err(e)?;
        let proof = qures::prove_saturate(&q, caps, Mode::QuRes)
            .map_err(e)?
            .ok_or("saturation found no refutation")?;
        qures::check(&q, &proof, Mode::QuRes).map_err(e)?;
        ensure!(
            proof.size() as u64 >= 1 << n,
            "EQ({n}) refutation size {} below 2^{n}",
            proof.size()
        );
        let lines = qbflab::line::qures_lines(&proof);
        let cap = response::capacity(&q, &lines, caps).map_err(e)?;
        ensure!(cap == 1, "capacity of EQ({n}) refutation is {cap}, not 1");
        let report = verify_scc(&q, &AnyProof::QuRes(&proof), caps).map_err(e)?;
        ensure!(report.holds, "size-cost-capacity fails on EQ({n})");
        ensure!(report.size_ge_cost, "size below cost on EQ({n})");
        sizes.push(proof.size());
    }
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    Ok(format!(
        "sizes {sizes:?}, capacity 1 throughout ({elapsed:?})"
    ))
}

/// cost of the weakened doubled family is 2^n for n in 1..=2, and the truth
/// oracle confirms both variants false; within 60 seconds.
fn criterion_3(caps: &Caps) -> Check {
    let start = Instant::now();
    for n in 1..=2u32 {
        let weak = gen::kbkf_weak(n).map_err(e)?;
        let report = cost_exact_general(&weak, caps).map_err(e)?;
        ensure!(
            report.cost == 1 << n,
            "cost(weakened({n})) = {} != 2^{n}",
            report.cost
        );
        ensure!(!truth(&weak, caps).map_err(e)?, "weakened({n}) not false");
        let doubled = gen::kbkf_doubled(n).map_err(e)?;
        ensure!(!truth(&doubled, caps).map_err(e)?, "doubled({n}) not false");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    Ok(format!(
        "cost 2^n and falsity confirmed for n in 1..=2 ({elapsed:?})"
    ))
}

/// Builds the full proof inventory; every accepted refutation's extracted
/// strategy must win.
fn criterion_4(caps: &Caps) -> Check {
    let mut count = 0usize;
    let mut run = |q: &Qcnf, lines: Vec<ProofLine>| -> Check {
        let maps = default_response_maps(q, &lines, caps).map_err(e)?;
        let out = extract_strategy(q, &lines, &maps, caps).map_err(e)?;
        ensure!(
            verify_strategy(q, &out.strategy, caps).map_err(e)?,
            "extracted strategy lost"
        );
        count += 1;
        Ok(String::new())
    };

    // clause proofs of the named families
    let mut qures_proofs = Vec::new();
    for q in [
        gen::equality(1).map_err(e)?,
        gen::equality(2).map_err(e)?,
        gen::equality(3).map_err(e)?,
        gen::kbkf_weak(1).map_err(e)?,
        gen::kbkf(1).map_err(e)?,
    ] {
        let proof = qures::prove_saturate(&q, caps, Mode::QuRes)
            .map_err(e)?
            .ok_or("no refutation")?;
        run(&q, qbflab::line::qures_lines(&proof))?;
        qures_proofs.push((q, proof));
    }

    // 20 sampled false components, refuted via the 2-SAT route
    let mut sampled = 0;
    'outer: for seed in 0..200u64 {
        let (_, meta) = gen::random_q(6, 1, 9, seed).map_err(e)?;
        for comp in &meta.components {
            let psi = comp.psi().map_err(e)?;
            if !oracle::psi_false(&psi).map_err(e)? {
                continue;
            }
            let proof = qures::refute_sigma2(&psi).map_err(e)?;
            qures::check(&psi, &proof, Mode::QuRes).map_err(e)?;
            run(&psi, qbflab::line::qures_lines(&proof))?;
            sampled += 1;
            if sampled >= 20 {
                break 'outer;
            }
        }
    }
    ensure!(sampled >= 20, "only {sampled} false components sampled");

    // translated inequality and polynomial proofs
    for (q, proof) in qures_proofs.iter() {
        let cp = qbflab::cp::cp_from_qures(q, proof).map_err(e)?;
        qbflab::cp::check(q, &cp).map_err(e)?;
        run(q, qbflab::line::cp_lines(&cp))?;
        let pcr = qbflab::pcr::pcr_from_qures(q, proof, FieldTag::Rational).map_err(e)?;
        qbflab::pcr::check(q, &pcr).map_err(e)?;
        run(q, qbflab::line::pcr_lines(&pcr))?;
    }

    // semantic proofs: re-justified clause proofs, formula-line refutations,
    // and strategy-built refutations of random false formulas
    for (q, proof) in qures_proofs.iter() {
        let sem = semantic::qures_to_semantic(q, proof).map_err(e)?;
        check_semantic(q, &sem, caps).map_err(e)?;
        run(q, sem.lines())?;
    }
    for n in 1..=3u32 {
        let q = gen::equality(n).map_err(e)?;
        let sem = frege_eq_refutation(n, caps).map_err(e)?;
        run(&q, sem.lines())?;
    }
    let mut rng = SplitMix64::new(0xAC4);
    for _ in 0..10 {
        let q = random_false_qcnf(&mut rng, caps).map_err(e)?;
        let strategy = synthesize_winning_forall(&q, caps).map_err(e)?;
        let sem = completeness_refutation(&q, &strategy, caps).map_err(e)?;
        check_semantic(&q, &sem, caps).map_err(e)?;
        run(&q, sem.lines())?;
    }

    ensure!(count >= 50, "only {count} proofs in the inventory");
    Ok(format!("{count} proofs, all extracted strategies winning"))
}

/// A cutting-planes refutation of EQ(2) is accepted, has capacity 1, and its
/// line count is at least the cost.
fn criterion_5(caps: &Caps) -> Check {
    let q = gen::equality(2).map_err(e)?;
    let qp = qures::prove_saturate(&q, caps, Mode::QuRes)
        .map_err(e)?
        .ok_or("no refutation")?;
    let cp = qbflab::cp::cp_from_qures(&q, &qp).map_err(e)?;
    qbflab::cp::check(&q, &cp).map_err(e)?;
    qbflab::cp::audit_soundness(&q, &cp, caps).map_err(e)?;
    let report = verify_scc(&q, &AnyProof::Cp(&cp), caps).map_err(e)?;
    ensure!(report.capacity == 1, "capacity {} != 1", report.capacity);
    ensure!(report.cost == 4, "cost {} != 4", report.cost);
    ensure!(report.size_ge_cost, "size {} below cost 4", report.size);
    ensure!(report.holds, "size-cost-capacity fails");
    Ok(format!(
        "accepted, size {}, cost 4, capacity 1",
        report.size
    ))
}

/// On 200 random reducible polynomial lines the greedy range is at most the
/// monomial count and at least the brute-force minimum; the crossing line
/// has minimal range exactly 2.
fn criterion_6(caps: &Caps) -> Check {
    let start = Instant::now();
    let q = Qcnf::new(
        Prefix::new(vec![
            Block::new(Quantifier::Exists, (1..=4).map(VarId::new)),
            Block::new(Quantifier::Forall, (5..=8).map(VarId::new)),
        ])
        .map_err(e)?,
        vec![],
    )
    .map_err(e)?;
    let mut rng = SplitMix64::new(0xAC6);
    let mut checked = 0;
    while checked < 200 {
        let Some(poly) = random_reducible_line(&mut rng) else {
            continue;
        };
        let line = ProofLine::Pcr(poly.clone());
        let (min_r, min_map) = response::min_response_range(&q, &line, caps).map_err(e)?;
        ensure!(
            min_map.audit(&q, &line, caps).map_err(e)?,
            "minimal witness fails its audit"
        );
        let table = qbflab::pcr::greedy_response(&q, &poly, caps).map_err(e)?;
        let greedy: BTreeSet<_> = table.values().collect();
        let monos = poly.monomial_count() as u64;
        ensure!(
            greedy.len() as u64 <= monos,
            "greedy range {} exceeds monomial count {monos}",
            greedy.len()
        );
        ensure!(
            min_r <= greedy.len() as u64,
            "greedy range {} below the minimum {min_r}",
            greedy.len()
        );
        checked += 1;
    }
    // the crossing line x(1−u)+(1−x)u in expanded form has minimal range 2
    let qx = Qcnf::new(
        Prefix::new(vec![
            Block::new(Quantifier::Exists, [VarId::new(1)]),
            Block::new(Quantifier::Forall, [VarId::new(2)]),
        ])
        .map_err(e)?,
        vec![],
    )
    .map_err(e)?;
    let x = AlgebraicVar::plain(VarId::new(1));
    let u = AlgebraicVar::plain(VarId::new(2));
    let crossing = Polynomial::from_terms(
        FieldTag::Rational,
        [
            (Monomial::var(x), FieldElem::from_i64(FieldTag::Rational, 1)),
            (Monomial::var(u), FieldElem::from_i64(FieldTag::Rational, 1)),
            (
                Monomial::from_vars([x, u]),
                FieldElem::from_i64(FieldTag::Rational, -2),
            ),
        ],
    )
    .map_err(|k| k.to_string())?;
    let (r, _) = response::min_response_range(&qx, &ProofLine::Pcr(crossing), caps).map_err(e)?;
    ensure!(r == 2, "crossing line minimal range {r} != 2");
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    Ok(format!(
        "200 lines bounded, crossing line range 2 ({elapsed:?})"
    ))
}

/// The formula-line refutations of the equality family are accepted with at
/// most 6n+4 lines for n in 1..=3, and the disjunction line needs exactly
/// 2^n responses for n in 1..=4.
fn criterion_7(caps: &Caps) -> Check {
    for n in 1..=3u32 {
        let q = gen::equality(n).map_err(e)?;
        let proof = frege_eq_refutation(n, caps).map_err(e)?;
        check_semantic(&q, &proof, caps).map_err(e)?;
        ensure!(
            proof.size() <= 6 * n as usize + 4,
            "refutation of EQ({n}) has {} lines, budget {}",
            proof.size(),
            6 * n + 4
        );
    }
    for n in 1..=4u32 {
        let q = gen::equality(n).map_err(e)?;
        let line = ProofLine::Formula(frege_eq_line(n));
        let (r, _) = response::min_response_range(&q, &line, caps).map_err(e)?;
        ensure!(r == 1 << n, "disjunction line range {r} != 2^{n}");
    }
    Ok("linear-size refutations, disjunction line range 2^n for n in 1..=4".into())
}

/// The strategy-driven completeness builder yields accepted refutations of
/// EQ(1) and of 10 random false formulas with at most 8 variables.
fn criterion_8(caps: &Caps) -> Check {
    let q = gen::equality(1).map_err(e)?;
    let s = synthesize_winning_forall(&q, caps).map_err(e)?;
    let proof = completeness_refutation(&q, &s, caps).map_err(e)?;
    check_semantic(&q, &proof, caps).map_err(e)?;

    let mut rng = SplitMix64::new(0xAC8);
    for i in 0..10 {
        let q = random_false_qcnf(&mut rng, caps).map_err(e)?;
        let s = synthesize_winning_forall(&q, caps).map_err(e)?;
        let proof = completeness_refutation(&q, &s, caps).map_err(e)?;
        check_semantic(&q, &proof, caps).map_err(|err| format!("random formula {i}: {err}"))?;
    }
    Ok("accepted on EQ(1) and 10 random false formulas".into())
}

/// The random-family study at the pinned seed: all-false fraction and mean
/// nonconstancy against their thresholds, plus the random 2-SAT
/// unsatisfiability guard.
fn criterion_9(caps: &Caps) -> Check {
    let params = StudyParams {
        n: 30,
        m: 3,
        cn: 45,
        trials: 200,
        seed: 1,
        exact_cost: false,
    };
    let rows = study::run_study(&params, caps).map_err(e)?;
    let all_false =
        rows.iter().filter(|r| r.all_components_false).count() as f64 / rows.len() as f64;
    let mean_k = rows
        .iter()
        .map(|r| r.k_nonconstant as f64 / params.n as f64)
        .sum::<f64>()
        / rows.len() as f64;
    let unsat_fraction = study::two_sat_unsat_fraction(200, 300, 500, 1).map_err(e)?;
    let detail = format!(
        "all-false fraction {all_false:.3}, mean k/n {mean_k:.3}, 2-SAT unsat fraction {unsat_fraction:.3}"
    );
    ensure!(
        unsat_fraction >= 0.9,
        "2-SAT unsat fraction {unsat_fraction:.3} below 0.9 ({detail})"
    );
    ensure!(mean_k >= 0.5, "mean k/n {mean_k:.3} below 0.5 ({detail})");
    ensure!(
        all_false >= 0.5,
        "all-false fraction {all_false:.3} below 0.5 ({detail})"
    );
    Ok(detail)
}

/// On 30 tiny all-false instances the exact cost meets the counting bound;
/// within 5 minutes.
fn criterion_10(caps: &Caps) -> Check {
    let start = Instant::now();
    let mut found = 0u32;
    let mut seed = 0u64;
    while found < 30 {
        if seed > 60_000 {
            return fail("could not find 30 all-false tiny instances");
        }
        let cn = if seed.is_multiple_of(2) { 5 } else { 6 };
        let (qcnf, meta) = gen::random_q(3, 1, cn, seed).map_err(e)?;
        seed += 1;
        let mut all_false = true;
        for comp in &meta.components {
            if !oracle::psi_false(&comp.psi().map_err(e)?).map_err(e)? {
                all_false = false;
                break;
            }
        }
        if !all_false {
            continue;
        }
        let bound = match oracle::cost_lower_bound_q(&meta, caps).map_err(e)? {
            oracle::QCostBound::Certified { bound, .. } => bound,
            oracle::QCostBound::TruthUncertified { .. } => {
                return fail("bound uncertified on an all-false instance")
            }
        };
        let cost = cost_exact_single_block(&qcnf, caps).map_err(e)?.cost;
        ensure!(
            cost as f64 >= bound.ceil() - 1e-9,
            "seed {}: exact cost {cost} below ceil(bound) = {}",
            seed - 1,
            bound.ceil()
        );
        found += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs() < 300, "took {elapsed:?}, budget 5 min");
    Ok(format!(
        "30 instances within {} seeds, exact cost >= ceil(bound) throughout ({elapsed:?})",
        seed
    ))
}

/// 100 randomized restriction-closure tests: existential restriction of
/// clause and semantic refutations, eligible universal restriction of both.
fn criterion_11(caps: &Caps) -> Check {
    let mut rng = SplitMix64::new(0xAC11);
    let mut done = [0usize; 4];

    // pool of (formula, accepted clause refutation)
    let mut pool = Vec::new();
    for q in [gen::equality(2).map_err(e)?, gen::kbkf_weak(1).map_err(e)?] {
        let p = qures::prove_saturate(&q, caps, Mode::QuRes)
            .map_err(e)?
            .ok_or("no refutation")?;
        pool.push((q, p));
    }
    for _ in 0..4 {
        let q = random_false_qcnf(&mut rng, caps).map_err(e)?;
        let p = qures::prove_saturate(&q, caps, Mode::QuRes)
            .map_err(e)?
            .ok_or("no refutation for a false formula")?;
        pool.push((q, p));
    }

    let quota = 25usize;
    let mut trial = 0usize;
    while done.iter().any(|&d| d < quota) {
        if trial > 400 {
            return fail(format!(
                "closure quota unreached after {trial} trials: {done:?}"
            ));
        }
        // existential restriction preserves clause refutations
        if done[0] < quota {
            let (q, p) = &pool[trial % pool.len()];
            let alpha = random_existential_partial(&mut rng, q);
            let (rq, rp) = qures::restrict_proof(q, p, &alpha)
                .map_err(|err| format!("existential clause restriction: {err}"))?;
            qures::check(&rq, &rp, Mode::QuRes)
                .map_err(|err| format!("restricted clause proof rejected: {err}"))?;
            done[0] += 1;
        }

        // eligible universal restriction preserves clause refutations:
        // restrict by a full existential first so the first block is
        // universal, normalize, then falsify the penultimate clause's
        // block literals
        if done[1] < quota {
            let (q, p) = &pool[(trial + 1) % pool.len()];
            let outer: Vec<VarId> = first_exists_block(q);
            let outer_alpha = random_total(&mut rng, &outer);
            let (uq, up) = qures::restrict_proof(q, p, &outer_alpha).map_err(e)?;
            let norm = qures::normalize(&uq, &up, Mode::QuRes).map_err(e)?;
            if let Some(beta) = penultimate_falsifier(&mut rng, &uq, &norm) {
                let (bq, bp) = qures::restrict_proof(&uq, &norm, &beta)
                    .map_err(|err| format!("universal clause restriction: {err}"))?;
                qures::check(&bq, &bp, Mode::QuRes)
                    .map_err(|err| format!("universally restricted proof rejected: {err}"))?;
                done[1] += 1;
            }
        }

        // existential restriction preserves semantic refutations
        if done[2] < quota {
            let (q, p) = &pool[(trial + 2) % pool.len()];
            let sem = semantic::qures_to_semantic(q, p).map_err(e)?;
            let alpha = random_existential_partial(&mut rng, q);
            let (rq, rp) = semantic::restrict_semantic_proof(
                q,
                &sem,
                &alpha,
                RestrictionKind::Existential,
                caps,
            )
            .map_err(|err| format!("existential semantic restriction: {err}"))?;
            check_semantic(&rq, &rp, caps)
                .map_err(|err| format!("restricted semantic proof rejected: {err}"))?;
            done[2] += 1;
        }

        // eligible universal restriction preserves semantic refutations
        if done[3] < quota {
            let (q, p) = &pool[(trial + 3) % pool.len()];
            let outer: Vec<VarId> = first_exists_block(q);
            let outer_alpha = random_total(&mut rng, &outer);
            let (uq, up) = qures::restrict_proof(q, p, &outer_alpha).map_err(e)?;
            let usem = semantic::qures_to_semantic(&uq, &up).map_err(e)?;
            if let Some(beta) = first_line_falsifier(&uq, &usem, caps).map_err(e)? {
                let (bq, bp) = semantic::restrict_semantic_proof(
                    &uq,
                    &usem,
                    &beta,
                    RestrictionKind::UniversalFirstBlock,
                    caps,
                )
                .map_err(|err| format!("universal semantic restriction: {err}"))?;
                check_semantic(&bq, &bp, caps).map_err(|err| {
                    format!("universally restricted semantic proof rejected: {err}")
                })?;
                done[3] += 1;
            }
        }
        trial += 1;
    }
    let total: usize = done.iter().sum();
    ensure!(total >= 100, "only {total} closure tests ran: {done:?}");
    Ok(format!(
        "{total} restrictions preserved acceptance ({} + {} + {} + {})",
        done[0], done[1], done[2], done[3]
    ))
}

/// Formats round-trip byte-exactly and fixed seeds reproduce formulas
/// byte-exactly across two runs.
fn criterion_12(caps: &Caps) -> Check {
    // generation determinism
    for make in [
        || qdimacs::write(&gen::random_q(5, 2, 9, 42).unwrap().0),
        || qdimacs::write(&gen::random_12qcnf(2, 5, 7, 42).unwrap()),
        || qdimacs::write(&gen::random_2sat(9, 14, 42).unwrap()),
        || qdimacs::write(&gen::equality(3).unwrap()),
        || qdimacs::write(&gen::kbkf_weak(2).unwrap()),
    ] {
        ensure!(make() == make(), "generation not reproducible");
    }
    // QDIMACS round-trip
    let q = gen::random_q(4, 1, 6, 7).map_err(e)?.0;
    let text = qdimacs::write(&q);
    let reparsed = qdimacs::parse(&text).map_err(e)?;
    ensure!(
        qdimacs::write(&reparsed) == text,
        "qdimacs round-trip drifted"
    );

    // proof formats round-trip byte-exactly
    let eq2 = gen::equality(2).map_err(e)?;
    let qp = qures::prove_saturate(&eq2, caps, Mode::QuRes)
        .map_err(e)?
        .ok_or("no refutation")?;
    let trace = qures::write_trace(&qp);
    let qp2 = qures::parse_trace(&trace, &eq2).map_err(e)?;
    ensure!(qures::write_trace(&qp2) == trace, "clause trace drifted");

    let cp = qbflab::cp::cp_from_qures(&eq2, &qp).map_err(e)?;
    let cp_text = qbflab::cp::write_cp(&cp);
    let cp2 = qbflab::cp::parse_cp(&cp_text).map_err(e)?;
    ensure!(qbflab::cp::write_cp(&cp2) == cp_text, "cp format drifted");

    let pcr = qbflab::pcr::pcr_from_qures(&eq2, &qp, FieldTag::Rational).map_err(e)?;
    let pcr_text = qbflab::pcr::write_pcr(&pcr);
    let pcr2 = qbflab::pcr::parse_pcr(&pcr_text).map_err(e)?;
    ensure!(
        qbflab::pcr::write_pcr(&pcr2) == pcr_text,
        "pcr format drifted"
    );

    let sem = frege_eq_refutation(2, caps).map_err(e)?;
    let sem_text = semantic::write_semantic(&sem);
    let sem2 = semantic::parse_semantic(&sem_text).map_err(e)?;
    ensure!(
        semantic::write_semantic(&sem2) == sem_text,
        "semantic format drifted"
    );
    Ok("all formats round-trip byte-exactly; seeded generation reproducible".into())
}

// ---------------------------------------------------------------------------
// samplers shared by the criteria

/// A random false closed prenex QCNF with at most 8 variables, at least one
/// universal block, and a tautology-free matrix.
pub fn random_false_qcnf(rng: &mut SplitMix64, caps: &Caps) -> qbflab::Result<Qcnf> {
    loop {
        let nvars = 4 + rng.next_below(5) as u32; // 4..=8
        let nblocks = 2 + rng.next_below(2) as usize; // 2..=3
        let mut blocks = Vec::new();
        let per = nvars.div_ceil(nblocks as u32);
        let mut has_universal = false;
        for b in 0..nblocks {
            let lo = 1 + b as u32 * per;
            let hi = ((b as u32 + 1) * per).min(nvars);
            if lo > hi {
                break;
            }
            let quant = if rng.next_below(2) == 0 {
                Quantifier::Exists
            } else {
                has_universal = true;
                Quantifier::Forall
            };
            blocks.push(Block::new(quant, (lo..=hi).map(VarId::new)));
        }
        if !has_universal {
            continue;
        }
        let nclauses = 3 + rng.next_below(6) as usize;
        let mut matrix = Vec::new();
        for _ in 0..nclauses {
            let width = 2 + rng.next_below(2) as usize;
            let mut vars = BTreeSet::new();
            while vars.len() < width {
                vars.insert(1 + rng.next_below(nvars as u64) as u32);
            }
            let clause = Clause::new(
                vars.into_iter()
                    .map(|v| Literal::new(VarId::new(v), rng.next_below(2) == 0)),
            );
            matrix.push(clause);
        }
        let Ok(prefix) = Prefix::new(blocks) else {
            continue;
        };
        let Ok(q) = Qcnf::new(prefix, matrix) else {
            continue;
        };
        if q.matrix.iter().any(Clause::is_tautology) {
            continue;
        }
        if !truth(&q, caps)? {
            return Ok(q);
        }
    }
}

/// A random reducible polynomial line over 4 existential and 4 universal
/// variables with at most 8 monomials.
fn random_reducible_line(rng: &mut SplitMix64) -> Option<Polynomial> {
    let n_mono = 1 + rng.next_below(8) as usize;
    let mut terms = Vec::new();
    for _ in 0..n_mono {
        let mut mono = Monomial::one();
        for var in 1..=8u32 {
            match rng.next_below(4) {
                0 => mono = mono.times_var(AlgebraicVar::plain(VarId::new(var))),
                1 => mono = mono.times_var(AlgebraicVar::barred(VarId::new(var))),
                _ => {}
            }
        }
        let coef = 1 + rng.next_below(3) as i64;
        let sign = if rng.next_below(2) == 0 { 1 } else { -1 };
        terms.push((mono, FieldElem::from_i64(FieldTag::Rational, sign * coef)));
    }
    let poly = Polynomial::from_terms(FieldTag::Rational, terms).ok()?;
    if poly.is_zero() || !poly.base_vars().iter().any(|b| b.get() > 4) {
        return None;
    }
    Some(poly)
}

fn random_existential_partial(rng: &mut SplitMix64, q: &Qcnf) -> Assignment {
    let evars: Vec<VarId> = q.prefix.exists_vars().into_iter().collect();
    let mut pairs = Vec::new();
    for v in evars {
        if rng.next_below(2) == 0 {
            pairs.push((v, rng.next_below(2) == 0));
        }
    }
    Assignment::from_pairs(pairs)
}

fn random_total(rng: &mut SplitMix64, vars: &[VarId]) -> Assignment {
    Assignment::from_pairs(vars.iter().map(|&v| (v, rng.next_below(2) == 0)))
}

fn first_exists_block(q: &Qcnf) -> Vec<VarId> {
    q.prefix
        .normalized()
        .blocks()
        .first()
        .filter(|b| b.quant == Quantifier::Exists)
        .map(|b| b.vars().to_vec())
        .unwrap_or_default()
}

/// A total assignment to the raw first block falsifying the penultimate
/// clause's block literals (free variables filled randomly), when the
/// restricted formula starts with a universal block and has a non-trivial
/// refutation. The raw block matters: reductions in the proof follow the
/// formula's own block structure, and the restriction must not touch later
/// blocks.
fn penultimate_falsifier(
    rng: &mut SplitMix64,
    q: &Qcnf,
    proof: &qures::QuResProof,
) -> Option<Assignment> {
    let first = q.prefix.blocks().first()?;
    if first.quant != Quantifier::Forall {
        return None;
    }
    if proof.steps.len() < 2 {
        return None;
    }
    let penultimate = &proof.steps[proof.steps.len() - 2].clause;
    let mut beta = Assignment::empty();
    for &u in first.vars() {
        let value = if penultimate.contains(Literal::positive(u)) {
            false
        } else if penultimate.contains(Literal::negative(u)) {
            true
        } else {
            rng.next_below(2) == 0
        };
        beta.bind(u, value).ok()?;
    }
    Some(beta)
}

/// A total first-block assignment falsifying the first non-tautological line
/// over that block, if one exists.
fn first_line_falsifier(
    q: &Qcnf,
    proof: &semantic::SemanticProof,
    caps: &Caps,
) -> qbflab::Result<Option<Assignment>> {
    let prefix = q.prefix.normalized();
    let Some(first) = prefix.blocks().first() else {
        return Ok(None);
    };
    if first.quant != Quantifier::Forall {
        return Ok(None);
    }
    let block: BTreeSet<VarId> = first.vars().iter().copied().collect();
    let mut target = None;
    for step in &proof.steps {
        if step.line.vars().is_subset(&block) && !step.line.is_tautology(caps)? {
            target = Some(step.line.clone());
            break;
        }
    }
    let Some(line) = target else {
        return Ok(None);
    };
    let space = AssignmentSpace::new(block.iter().copied());
    for beta in space.iter() {
        if line.restrict(&beta).is_contradiction(caps)? {
            return Ok(Some(beta));
        }
    }
    Ok(None)
}
