//! Constructive semantic refutations: the strategy-driven completeness
//! builder, and the linear-size formula-line refutation of the equality
//! family.

use std::collections::{BTreeMap, BTreeSet};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::formula::BoolExpr;
use crate::line::{game_normalized, ProofLine};
use crate::oracle::{verify_strategy, Strategy};
use crate::qcnf::{Assignment, AssignmentSpace, Clause, Literal, Qcnf, Quantifier, VarId};

use super::{SemJust, SemStep, SemanticProof};

/// Builds a semantic refutation from a verified winning universal strategy.
///
/// For each universal variable `u_i` (in prefix order) the Boolean function
/// `B_i` over `X_i ∪ {u_1..u_i}` (existentials left of `u_i` plus the
/// universals so far) is zero exactly when the universal play matches the
/// strategy. Its zero rows, encoded as maxterm clauses, are derived level by
/// level: the base level follows from the axioms, and each level's zero rows
/// are reduced by the strategy's move on `u_i` and entail the next level
/// down. Level zero is the empty clause.
pub fn completeness_refutation(
    qcnf: &Qcnf,
    strategy: &Strategy,
    caps: &Caps,
) -> Result<SemanticProof> {
    caps.check_vars("completeness builder variables", qcnf.var_count())?;
    if !verify_strategy(qcnf, strategy, caps)? {
        return Err(Error::invalid(
            "completeness builder needs a verified winning strategy",
        ));
    }
    let normalized = game_normalized(qcnf);

    let mut steps: Vec<SemStep> = Vec::new();
    let mut next_id = 1u64;
    let push = |line: ProofLine, just: SemJust, steps: &mut Vec<SemStep>, next_id: &mut u64| {
        let id = *next_id;
        *next_id += 1;
        steps.push(SemStep { id, line, just });
        id
    };

    // trivial case: the matrix already contains the empty clause
    if let Some(k) = normalized.matrix.iter().position(Clause::is_empty) {
        let _ = k;
        let id = push(
            ProofLine::Clause(Clause::empty()),
            SemJust::Axiom,
            &mut steps,
            &mut next_id,
        );
        return Ok(SemanticProof {
            steps,
            conclusion: id,
        });
    }

    let axiom_ids: Vec<u64> = normalized
        .matrix
        .iter()
        .map(|c| {
            push(
                ProofLine::Clause(c.clone()),
                SemJust::Axiom,
                &mut steps,
                &mut next_id,
            )
        })
        .collect();

    // universal variables in prefix order, each with the existentials left
    // of it
    let mut universals: Vec<(VarId, BTreeSet<VarId>)> = Vec::new();
    let mut exists_so_far: BTreeSet<VarId> = BTreeSet::new();
    for block in normalized.prefix.blocks() {
        match block.quant {
            Quantifier::Exists => exists_so_far.extend(block.vars().iter().copied()),
            Quantifier::Forall => {
                for &u in block.vars() {
                    universals.push((u, exists_so_far.clone()));
                }
            }
        }
    }

    // the strategy's move on u as a function of the existentials left of it
    let exists_all = normalized.prefix.exists_vars();
    let respond = |u: VarId, partial_exists: &Assignment| -> bool {
        // extend deterministically; the staircase condition makes the
        // response independent of the extension
        let full = Assignment::from_pairs(
            exists_all
                .iter()
                .map(|&e| (e, partial_exists.value(e).unwrap_or(false))),
        );
        strategy
            .response(&full)
            .expect("total strategy table")
            .value(u)
            .expect("total universal response")
    };

    if universals.is_empty() {
        // no universal variables: a false formula has an unsatisfiable
        // matrix, so the empty clause is a consequence of the axioms
        let id = push(
            ProofLine::Clause(Clause::empty()),
            SemJust::Consequence(axiom_ids),
            &mut steps,
            &mut next_id,
        );
        return Ok(SemanticProof {
            steps,
            conclusion: id,
        });
    }

    // maxterm clause falsified exactly at sigma
    let maxterm = |sigma: &Assignment| -> Clause {
        Clause::new(sigma.iter().map(|(v, b)| Literal::new(v, !b)))
    };

    // B_i zero rows for level i (1-based): assignments over
    // X_i ∪ {u_1..u_i} where every u_j plays the strategy's move
    let zero_rows = |level: usize| -> Vec<Assignment> {
        let (_, ref x_i) = universals[level - 1];
        let dom_exists = AssignmentSpace::new(x_i.iter().copied());
        dom_exists
            .iter()
            .map(|alpha| {
                let mut sigma = alpha.clone();
                for (u, _) in universals.iter().take(level) {
                    let mv = respond(*u, &alpha);
                    sigma.bind(*u, mv).expect("fresh variable");
                }
                sigma
            })
            .collect()
    };

    // base level n: each zero-row maxterm follows from the axioms
    let n = universals.len();
    let mut level_steps: BTreeMap<Assignment, u64> = BTreeMap::new();
    for sigma in zero_rows(n) {
        let id = push(
            ProofLine::Clause(maxterm(&sigma)),
            SemJust::Consequence(axiom_ids.clone()),
            &mut steps,
            &mut next_id,
        );
        level_steps.insert(sigma, id);
    }

    // step down: reduce u_i by the strategy's move, then derive the next
    // level's maxterms from the reduced rows extending them
    for level in (1..=n).rev() {
        let (u_i, _) = universals[level - 1];
        let mut reduced: BTreeMap<Assignment, u64> = BTreeMap::new();
        for (sigma, &src_id) in &level_steps {
            let move_value = sigma.value(u_i).expect("row assigns u_i");
            let beta = Assignment::from_pairs([(u_i, move_value)]);
            let remaining = Assignment::from_pairs(sigma.iter().filter(|(v, _)| *v != u_i));
            let id = push(
                ProofLine::Clause(maxterm(&remaining)),
                SemJust::Reduction {
                    source: src_id,
                    beta,
                },
                &mut steps,
                &mut next_id,
            );
            reduced.insert(remaining, id);
        }
        if level == 1 {
            // the single zero row of B_0 is the empty assignment; its
            // maxterm is the empty clause
            let premises: Vec<u64> = reduced.values().copied().collect();
            let id = push(
                ProofLine::Clause(Clause::empty()),
                SemJust::Consequence(premises),
                &mut steps,
                &mut next_id,
            );
            return Ok(SemanticProof {
                steps,
                conclusion: id,
            });
        }
        // next level down
        let mut next_level: BTreeMap<Assignment, u64> = BTreeMap::new();
        for sigma in zero_rows(level - 1) {
            // premises: the reduced rows whose projection matches sigma
            let dom: BTreeSet<VarId> = sigma.vars().collect();
            let premises: Vec<u64> = reduced
                .iter()
                .filter(|(row, _)| row.project(&dom) == sigma)
                .map(|(_, &id)| id)
                .collect();
            debug_assert!(!premises.is_empty());
            let id = push(
                ProofLine::Clause(maxterm(&sigma)),
                SemJust::Consequence(premises),
                &mut steps,
                &mut next_id,
            );
            next_level.insert(sigma, id);
        }
        level_steps = next_level;
    }
    unreachable!("loop returns at level 1");
}

/// The disjunction `⋁_{i≤n} (x_i ∨ u_i) ∧ (¬x_i ∨ ¬u_i)` over the equality
/// formula's variables: the high-capacity line of the formula-level
/// refutation.
pub fn frege_eq_line(n: u32) -> BoolExpr {
    BoolExpr::or((1..=n).map(|i| eq_term(n, i)))
}

fn eq_term(n: u32, i: u32) -> BoolExpr {
    let x = VarId::new(i);
    let u = VarId::new(n + i);
    BoolExpr::and([
        BoolExpr::or([BoolExpr::var(x), BoolExpr::var(u)]),
        BoolExpr::or([
            BoolExpr::lit(Literal::negative(x)),
            BoolExpr::lit(Literal::negative(u)),
        ]),
    ])
}

/// A formula-line semantic refutation of the equality formula of size `n`
/// with a linear number of lines: derive
/// `L_i = ((x_i∨u_i) ∧ (¬x_i∨¬u_i)) ∨ ¬t_i` from each clause pair, resolve
/// the `t_i` out of the long clause to reach `L = ⋁ᵢ (x_i∨u_i)∧(¬x_i∨¬u_i)`,
/// then peel each `u_m` by its two reductions and resolve on `x_m`.
pub fn frege_eq_refutation(n: u32, caps: &Caps) -> Result<SemanticProof> {
    if n == 0 {
        return Err(Error::invalid("equality family needs n >= 1"));
    }
    caps.check_semantic_vars(2 * n as usize + 1)?;
    let x = |i: u32| VarId::new(i);
    let u = |i: u32| VarId::new(n + i);
    let t = |i: u32| VarId::new(2 * n + i);

    let mut steps: Vec<SemStep> = Vec::new();
    let mut next_id = 1u64;
    let push = |line: ProofLine, just: SemJust, steps: &mut Vec<SemStep>, next_id: &mut u64| {
        let id = *next_id;
        *next_id += 1;
        steps.push(SemStep { id, line, just });
        id
    };

    // axioms as formula lines
    let mut pair_ids = Vec::new();
    for i in 1..=n {
        let pos = push(
            ProofLine::Formula(BoolExpr::or([
                BoolExpr::var(x(i)),
                BoolExpr::var(u(i)),
                BoolExpr::lit(Literal::negative(t(i))),
            ])),
            SemJust::Axiom,
            &mut steps,
            &mut next_id,
        );
        let neg = push(
            ProofLine::Formula(BoolExpr::or([
                BoolExpr::lit(Literal::negative(x(i))),
                BoolExpr::lit(Literal::negative(u(i))),
                BoolExpr::lit(Literal::negative(t(i))),
            ])),
            SemJust::Axiom,
            &mut steps,
            &mut next_id,
        );
        pair_ids.push((pos, neg));
    }
    let long = push(
        ProofLine::Formula(BoolExpr::or((1..=n).map(|i| BoolExpr::var(t(i))))),
        SemJust::Axiom,
        &mut steps,
        &mut next_id,
    );

    // L_i = term_i ∨ ¬t_i
    let mut li_ids = Vec::new();
    for i in 1..=n {
        let line = BoolExpr::or([eq_term(n, i), BoolExpr::lit(Literal::negative(t(i)))]);
        let (p, q) = pair_ids[i as usize - 1];
        let id = push(
            ProofLine::Formula(line),
            SemJust::Consequence(vec![p, q]),
            &mut steps,
            &mut next_id,
        );
        li_ids.push(id);
    }

    // G_i = (⋁_{j≤i} term_j) ∨ t_{i+1} ∨ … ∨ t_n, resolving t_i out
    let g_line = |i: u32| {
        BoolExpr::or(
            (1..=i)
                .map(|j| eq_term(n, j))
                .chain((i + 1..=n).map(|j| BoolExpr::var(t(j)))),
        )
    };
    let mut prev = long;
    for i in 1..=n {
        let id = push(
            ProofLine::Formula(g_line(i)),
            SemJust::Consequence(vec![prev, li_ids[i as usize - 1]]),
            &mut steps,
            &mut next_id,
        );
        prev = id;
    }

    // K_m chain: reduce u_m both ways, resolve on x_m
    let k_line =
        |m: u32, extra: Option<BoolExpr>| BoolExpr::or((1..=m).map(|j| eq_term(n, j)).chain(extra));
    let mut k_prev = prev; // K_n = G_n
    for m in (1..=n).rev() {
        let zero = push(
            ProofLine::Formula(k_line(m - 1, Some(BoolExpr::var(x(m))))),
            SemJust::Reduction {
                source: k_prev,
                beta: Assignment::from_pairs([(u(m), false)]),
            },
            &mut steps,
            &mut next_id,
        );
        let one = push(
            ProofLine::Formula(k_line(m - 1, Some(BoolExpr::lit(Literal::negative(x(m)))))),
            SemJust::Reduction {
                source: k_prev,
                beta: Assignment::from_pairs([(u(m), true)]),
            },
            &mut steps,
            &mut next_id,
        );
        let line = if m == 1 {
            ProofLine::Const(false)
        } else {
            ProofLine::Formula(k_line(m - 1, None))
        };
        k_prev = push(
            line,
            SemJust::Consequence(vec![zero, one]),
            &mut steps,
            &mut next_id,
        );
    }
    Ok(SemanticProof {
        steps,
        conclusion: k_prev,
    })
}
