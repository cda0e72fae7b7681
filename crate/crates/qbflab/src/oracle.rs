//! Exhaustive semantic oracles at desk scale.
//!
//! Game truth value, winning-strategy synthesis and verification, exact cost
//! (single-block set-cover search and the general multi-block search), and
//! the polynomial component checks for the random family. Everything here is
//! exhaustive and deterministic: enumeration order is the canonical
//! assignment order, ties break to the first candidate found.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exec;
use crate::gen::RandomQMeta;
use crate::qcnf::{Assignment, AssignmentSpace, Clause, Qcnf, Quantifier, RestrictedClause, VarId};
use crate::twosat::{self, TwoSatOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Forall,
    Exists,
}

/// A dependency-respecting strategy, stored as an explicit table from total
/// opponent assignments to total own assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub player: Player,
    pub table: BTreeMap<Assignment, Assignment>,
}

impl Strategy {
    pub fn response(&self, opponent: &Assignment) -> Option<&Assignment> {
        self.table.get(opponent)
    }

    /// Range of the projection of the strategy to one variable set.
    pub fn projected_range(&self, vars: &BTreeSet<VarId>) -> BTreeSet<Assignment> {
        self.table.values().map(|b| b.project(vars)).collect()
    }
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            alpha: &'a Assignment,
            beta: &'a Assignment,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            player: Player,
            rows: Vec<Row<'a>>,
        }
        Repr {
            player: self.player,
            rows: self
                .table
                .iter()
                .map(|(alpha, beta)| Row { alpha, beta })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Row {
            alpha: Assignment,
            beta: Assignment,
        }
        #[derive(Deserialize)]
        struct Repr {
            player: Player,
            rows: Vec<Row>,
        }
        let repr = Repr::deserialize(d)?;
        Ok(Strategy {
            player: repr.player,
            table: repr.rows.into_iter().map(|r| (r.alpha, r.beta)).collect(),
        })
    }
}

/// Exact cost of a false QBF plus the witness achieving it.
#[derive(Debug, Clone, Serialize)]
pub struct CostReport {
    pub cost: u64,
    /// `|rng(S_i)|` of the witness per universal block, in prefix order.
    pub block_ranges: Vec<u64>,
    pub witness: Strategy,
}

/// The flattened prefix as (variable, quantifier) in game order.
fn game_vars(qcnf: &Qcnf) -> Vec<(VarId, Quantifier)> {
    qcnf.prefix
        .blocks()
        .iter()
        .flat_map(|b| b.vars().iter().map(move |&v| (v, b.quant)))
        .collect()
}

/// Restricts a matrix by one variable binding; `None` when a clause is
/// falsified outright (game lost for the existential player at this node).
fn assign_matrix(matrix: &[Clause], var: VarId, value: bool) -> Option<Vec<Clause>> {
    let tau = Assignment::from_pairs([(var, value)]);
    let mut out = Vec::with_capacity(matrix.len());
    for c in matrix {
        match c.restrict(&tau) {
            RestrictedClause::Satisfied => {}
            RestrictedClause::Clause(c) => {
                if c.is_empty() {
                    return None;
                }
                out.push(c);
            }
        }
    }
    Some(out)
}

/// Memoized game evaluation. Keys are (position, residual matrix): two
/// partial assignments with the same residual matrix at the same position
/// have the same game value.
struct GameEval {
    vars: Vec<(VarId, Quantifier)>,
    memo: HashMap<(usize, Vec<Clause>), bool>,
}

impl GameEval {
    fn new(vars: Vec<(VarId, Quantifier)>) -> Self {
        GameEval {
            vars,
            memo: HashMap::new(),
        }
    }

    /// True iff the existential player wins from `pos` with `matrix` left.
    fn value(&mut self, pos: usize, matrix: Vec<Clause>) -> bool {
        if matrix.is_empty() {
            return true;
        }
        if matrix.iter().any(Clause::is_empty) {
            return false;
        }
        if pos == self.vars.len() {
            // all variables assigned: handled by the two cases above
            unreachable!("non-empty residual matrix with all variables assigned");
        }
        let key = (pos, matrix);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (var, quant) = self.vars[key.0];
        let mut result = match quant {
            Quantifier::Exists => false,
            Quantifier::Forall => true,
        };
        for value in [false, true] {
            let child = match assign_matrix(&key.1, var, value) {
                Some(m) => self.value(key.0 + 1, m),
                None => false,
            };
            match quant {
                Quantifier::Exists => result |= child,
                Quantifier::Forall => result &= child,
            }
        }
        self.memo.insert(key, result);
        result
    }
}

/// Game value of a closed prenex QCNF by recursion over the prefix.
pub fn truth(qcnf: &Qcnf, caps: &Caps) -> Result<bool> {
    caps.check_vars("truth oracle variables", qcnf.var_count())?;
    let mut eval = GameEval::new(game_vars(qcnf));
    Ok(eval.value(0, qcnf.matrix.clone()))
}

/// Synthesizes a winning universal strategy for a false QBF. At each
/// universal variable the first losing-for-the-opponent value (0 before 1)
/// is chosen, so the result is deterministic and dependency-respecting by
/// construction.
pub fn synthesize_winning_forall(qcnf: &Qcnf, caps: &Caps) -> Result<Strategy> {
    caps.check_vars("strategy synthesis variables", qcnf.var_count())?;
    let exists_vars = qcnf.prefix.exists_vars();
    caps.check_vars("strategy table variables", exists_vars.len())?;
    let vars = game_vars(qcnf);
    let mut eval = GameEval::new(vars.clone());
    if eval.value(0, qcnf.matrix.clone()) {
        return Err(Error::NotFalse);
    }

    let space = AssignmentSpace::new(exists_vars);
    let mut table = BTreeMap::new();
    for alpha in space.iter() {
        let mut beta = Assignment::empty();
        let mut matrix = qcnf.matrix.clone();
        let mut lost = false; // a clause already falsified: remaining play is free
        for (pos, &(var, quant)) in vars.iter().enumerate() {
            let value = match quant {
                Quantifier::Exists => alpha.value(var).expect("alpha total on existentials"),
                Quantifier::Forall => {
                    let choice = if lost {
                        false
                    } else {
                        // first value keeping the universal player winning
                        let wins_with =
                            |ev: &mut GameEval, m: &[Clause], v: bool| match assign_matrix(
                                m, var, v,
                            ) {
                                Some(m2) => !ev.value(pos + 1, m2),
                                None => true,
                            };
                        if wins_with(&mut eval, &matrix, false) {
                            false
                        } else {
                            debug_assert!(wins_with(&mut eval, &matrix, true));
                            true
                        }
                    };
                    beta.bind(var, choice)?;
                    choice
                }
            };
            if !lost {
                match assign_matrix(&matrix, var, value) {
                    Some(m) => matrix = m,
                    None => lost = true,
                }
            }
        }
        table.insert(alpha, beta);
    }
    Ok(Strategy {
        player: Player::Forall,
        table,
    })
}

/// Checks totality, the dependency (staircase) condition, and the winning
/// condition `φ[α ∪ S(α)] = ⊥` over every opponent assignment. Structural
/// mismatches (wrong variable sets) are errors; a well-formed strategy that
/// violates the staircase condition or loses somewhere yields `false`.
pub fn verify_strategy(qcnf: &Qcnf, strategy: &Strategy, caps: &Caps) -> Result<bool> {
    if strategy.player != Player::Forall {
        return Err(Error::invalid("expected a universal-player strategy"));
    }
    let exists_vars = qcnf.prefix.exists_vars();
    let forall_vars = qcnf.prefix.forall_vars();
    caps.check_vars("strategy verification variables", exists_vars.len())?;

    let space = AssignmentSpace::new(exists_vars.iter().copied());
    if strategy.table.len() as u64 != space.len() {
        return Err(Error::invalid(format!(
            "strategy table has {} rows, expected {}",
            strategy.table.len(),
            space.len()
        )));
    }
    for (alpha, beta) in &strategy.table {
        if alpha.var_set() != exists_vars {
            return Err(Error::invalid("strategy row domain mismatch"));
        }
        if beta.var_set() != forall_vars {
            return Err(Error::invalid("strategy row range mismatch"));
        }
    }

    // staircase: for each universal block, the response projection must be a
    // function of the existential variables quantified left of the block
    let blocks = qcnf.prefix.blocks();
    for (i, block) in blocks.iter().enumerate() {
        if block.quant != Quantifier::Forall {
            continue;
        }
        let left_exists: BTreeSet<VarId> = blocks[..i]
            .iter()
            .filter(|b| b.quant == Quantifier::Exists)
            .flat_map(|b| b.vars().iter().copied())
            .collect();
        let block_vars: BTreeSet<VarId> = block.vars().iter().copied().collect();
        let mut seen: BTreeMap<Assignment, Assignment> = BTreeMap::new();
        for (alpha, beta) in &strategy.table {
            let key = alpha.project(&left_exists);
            let value = beta.project(&block_vars);
            if let Some(prev) = seen.insert(key, value.clone()) {
                if prev != value {
                    return Ok(false);
                }
            }
        }
    }

    for (alpha, beta) in &strategy.table {
        let tau = alpha.union(beta)?;
        if qcnf.eval_matrix(&tau)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact cost for a formula with exactly one universal block, by
/// increasing-size exhaustive cover search over the block's responses.
///
/// Unfolding the cost definition for a prefix `∃E₀ ∀U ∃E₁`: the cost is the
/// minimum size of a set `B ⊆ ⟨U⟩` such that every `α ∈ ⟨E₀⟩` has some
/// `β ∈ B` with `Φ[α∪β]` false.
pub fn cost_exact_single_block(qcnf: &Qcnf, caps: &Caps) -> Result<CostReport> {
    let prefix = qcnf.prefix.normalized();
    let ublocks: Vec<_> = prefix
        .blocks()
        .iter()
        .filter(|b| b.quant == Quantifier::Forall)
        .collect();
    if ublocks.len() != 1 {
        return Err(Error::invalid(format!(
            "cost_exact_single_block needs exactly one universal block, found {}",
            ublocks.len()
        )));
    }
    let ublock: BTreeSet<VarId> = ublocks[0].vars().iter().copied().collect();
    let uidx = prefix
        .blocks()
        .iter()
        .position(|b| b.quant == Quantifier::Forall)
        .expect("universal block present");
    let outer: BTreeSet<VarId> = prefix.blocks()[..uidx]
        .iter()
        .flat_map(|b| b.vars().iter().copied())
        .collect();

    caps.check_vars("cost oracle universal block", ublock.len())?;
    caps.check_vars("cost oracle outer existentials", outer.len())?;
    caps.check_vars("cost oracle variables", qcnf.var_count())?;

    let alpha_space = AssignmentSpace::new(outer.iter().copied());
    let beta_space = AssignmentSpace::new(ublock.iter().copied());
    let n_alpha = alpha_space.len();
    let n_beta = beta_space.len();

    // W(α) as a bitset over β indices: β is a winning response iff Φ[α∪β]
    // is false. Independent per α, evaluated in parallel.
    let game = game_vars(qcnf);
    let winning: Vec<Vec<u64>> = exec::map_range(n_alpha, |ai| {
        let alpha = alpha_space.assignment(ai);
        let mut eval = GameEval::new(game.clone());
        let mut bits = vec![0u64; n_beta.div_ceil(64) as usize];
        for bi in 0..n_beta {
            let beta = beta_space.assignment(bi);
            let tau = alpha.union(&beta).expect("disjoint");
            let restricted = qcnf.restrict(&tau).expect("vars in prefix");
            // the remaining game is purely existential
            if !eval_from(&mut eval, &game, &restricted) {
                bits[(bi / 64) as usize] |= 1 << (bi % 64);
            }
        }
        bits
    });

    if winning.iter().any(|bits| bits.iter().all(|&w| w == 0)) {
        return Err(Error::NotFalse);
    }

    let cover = minimum_cover(&winning, n_beta)?;
    let betas: Vec<Assignment> = cover.iter().map(|&b| beta_space.assignment(b)).collect();

    // witness strategy over the full existential space
    let exists_vars = qcnf.prefix.exists_vars();
    caps.check_vars("cost witness table variables", exists_vars.len())?;
    let full_space = AssignmentSpace::new(exists_vars.iter().copied());
    let mut table = BTreeMap::new();
    for alpha_full in full_space.iter() {
        let outer_alpha = alpha_full.project(&outer);
        let ai = alpha_space
            .index_of(&outer_alpha)
            .expect("projection total");
        let bits = &winning[ai as usize];
        let choice = cover
            .iter()
            .position(|&b| bits[(b / 64) as usize] >> (b % 64) & 1 == 1)
            .expect("cover hits every alpha");
        table.insert(alpha_full, betas[choice].clone());
    }
    let witness = Strategy {
        player: Player::Forall,
        table,
    };
    let range = witness.projected_range(&ublock).len() as u64;
    debug_assert_eq!(range, cover.len() as u64);
    Ok(CostReport {
        cost: cover.len() as u64,
        block_ranges: vec![range],
        witness,
    })
}

fn eval_from(eval: &mut GameEval, game: &[(VarId, Quantifier)], restricted: &Qcnf) -> bool {
    // find the first unassigned position: restricted prefixes only drop vars
    let remaining: BTreeSet<VarId> = restricted.prefix.var_set();
    let pos = game
        .iter()
        .position(|(v, _)| remaining.contains(v))
        .unwrap_or(game.len());
    if pos == game.len() {
        return !restricted.matrix.iter().any(Clause::is_empty);
    }
    eval.value(pos, restricted.matrix.clone())
}

/// Minimum-cardinality hitting set over β-bitsets: subsets enumerated by
/// increasing size, candidates in canonical β order, first cover wins.
pub(crate) fn minimum_cover(winning: &[Vec<u64>], n_beta: u64) -> Result<Vec<u64>> {
    let mut candidates: Vec<u64> = Vec::new();
    for b in 0..n_beta {
        if winning
            .iter()
            .any(|bits| bits[(b / 64) as usize] >> (b % 64) & 1 == 1)
        {
            candidates.push(b);
        }
    }
    // singleton winning sets force their β into every cover
    let mut forced: BTreeSet<u64> = BTreeSet::new();
    for bits in winning {
        let count: u32 = bits.iter().map(|w| w.count_ones()).sum();
        if count == 1 {
            let b = bits
                .iter()
                .enumerate()
                .find_map(|(i, w)| {
                    if *w != 0 {
                        Some(i as u64 * 64 + w.trailing_zeros() as u64)
                    } else {
                        None
                    }
                })
                .expect("nonzero word");
            forced.insert(b);
        }
    }
    let covers = |subset: &[u64]| {
        winning.iter().all(|bits| {
            subset
                .iter()
                .any(|&b| bits[(b / 64) as usize] >> (b % 64) & 1 == 1)
        })
    };
    let forced_vec: Vec<u64> = forced.iter().copied().collect();
    if covers(&forced_vec) {
        return Ok(forced_vec);
    }
    let free: Vec<u64> = candidates
        .iter()
        .copied()
        .filter(|b| !forced.contains(b))
        .collect();
    // increasing total size; forced elements are always included
    for k in 1..=free.len() {
        let mut chosen = forced_vec.clone();
        if let Some(cover) = search_subsets(&free, k, 0, &mut chosen, &covers) {
            return Ok(cover);
        }
    }
    Err(Error::invalid("no covering response set exists"))
}

fn search_subsets(
    free: &[u64],
    k: usize,
    start: usize,
    chosen: &mut Vec<u64>,
    covers: &impl Fn(&[u64]) -> bool,
) -> Option<Vec<u64>> {
    if k == 0 {
        if covers(chosen) {
            let mut out = chosen.clone();
            out.sort();
            return Some(out);
        }
        return None;
    }
    for i in start..=free.len().saturating_sub(k) {
        chosen.push(free[i]);
        if let Some(found) = search_subsets(free, k - 1, i + 1, chosen, covers) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Exact cost over arbitrary prefixes: the minimum `r` such that the
/// universal player wins with every block's responses confined to some
/// size-`r` set, searched exhaustively over response-set combinations.
pub fn cost_exact_general(qcnf: &Qcnf, caps: &Caps) -> Result<CostReport> {
    caps.check_vars("cost oracle variables", qcnf.var_count())?;
    if truth(qcnf, caps)? {
        return Err(Error::NotFalse);
    }
    let prefix = qcnf.prefix.normalized();
    let exists_vars = qcnf.prefix.exists_vars();
    caps.check_vars("cost witness table variables", exists_vars.len())?;

    let ublocks: Vec<BTreeSet<VarId>> = prefix
        .blocks()
        .iter()
        .filter(|b| b.quant == Quantifier::Forall)
        .map(|b| b.vars().iter().copied().collect())
        .collect();
    if ublocks.is_empty() {
        // no universal block: any winning strategy is trivial, cost 1 by the
        // empty-block convention
        let full_space = AssignmentSpace::new(exists_vars.iter().copied());
        let table = full_space
            .iter()
            .map(|alpha| (alpha, Assignment::empty()))
            .collect();
        return Ok(CostReport {
            cost: 1,
            block_ranges: vec![],
            witness: Strategy {
                player: Player::Forall,
                table,
            },
        });
    }
    for u in &ublocks {
        caps.check_vars("cost oracle universal block", u.len())?;
    }

    let spaces: Vec<AssignmentSpace> = ublocks
        .iter()
        .map(|u| AssignmentSpace::new(u.iter().copied()))
        .collect();
    let max_r = spaces.iter().map(|s| s.len()).max().expect("nonempty");

    let mut budget = caps.strategy_budget;
    for r in 1..=max_r {
        let sizes: Vec<u64> = spaces.iter().map(|s| s.len().min(r)).collect();
        let combos: u64 = spaces
            .iter()
            .zip(&sizes)
            .map(|(s, &k)| binomial(s.len(), k))
            .try_fold(1u64, |acc, c| acc.checked_mul(c))
            .ok_or(Error::CapExceeded {
                what: "strategy search combinations",
                actual: u64::MAX,
                limit: caps.strategy_budget,
            })?;
        if combos > budget {
            return Err(Error::CapExceeded {
                what: "strategy search combinations",
                actual: combos,
                limit: budget,
            });
        }
        budget -= combos;

        let mut chosen: Vec<Vec<u64>> = Vec::new();
        if let Some(report) = try_response_sets(qcnf, &prefix, &spaces, &sizes, 0, &mut chosen)? {
            debug_assert_eq!(report.cost, r);
            return Ok(report);
        }
    }
    unreachable!("full response sets always win on a false formula")
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    for i in 0..k {
        num = num.saturating_mul(n - i) / (i + 1);
    }
    num
}

/// Depth-first enumeration of per-block response sets in canonical order;
/// the first winning combination is evaluated into a witness.
fn try_response_sets(
    qcnf: &Qcnf,
    prefix: &crate::qcnf::Prefix,
    spaces: &[AssignmentSpace],
    sizes: &[u64],
    block: usize,
    chosen: &mut Vec<Vec<u64>>,
) -> Result<Option<CostReport>> {
    if block == spaces.len() {
        return evaluate_response_sets(qcnf, prefix, spaces, chosen);
    }
    let n = spaces[block].len();
    let k = sizes[block] as usize;
    let mut subset: Vec<u64> = (0..k as u64).collect();
    loop {
        chosen.push(subset.clone());
        if let Some(found) = try_response_sets(qcnf, prefix, spaces, sizes, block + 1, chosen)? {
            return Ok(Some(found));
        }
        chosen.pop();
        // next k-subset of 0..n in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if subset[i] < n - (k - i) as u64 {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Game evaluation where each universal block must respond from its chosen
/// set; blocks are played atomically.
struct RestrictedGame {
    blocks: Vec<(Quantifier, Vec<VarId>, Option<usize>)>, // (quant, vars, universal block index)
    options: Vec<Vec<Assignment>>,
    memo: HashMap<(usize, Vec<Clause>), bool>,
}

impl RestrictedGame {
    fn new(prefix: &crate::qcnf::Prefix, spaces: &[AssignmentSpace], sets: &[Vec<u64>]) -> Self {
        let mut blocks = Vec::new();
        let mut ui = 0;
        for b in prefix.blocks() {
            let idx = if b.quant == Quantifier::Forall {
                let i = ui;
                ui += 1;
                Some(i)
            } else {
                None
            };
            blocks.push((b.quant, b.vars().to_vec(), idx));
        }
        let options = sets
            .iter()
            .enumerate()
            .map(|(i, set)| set.iter().map(|&b| spaces[i].assignment(b)).collect())
            .collect();
        RestrictedGame {
            blocks,
            options,
            memo: HashMap::new(),
        }
    }

    /// True iff the universal player wins from `block` with `matrix` left.
    fn forall_wins(&mut self, block: usize, matrix: Vec<Clause>) -> bool {
        if matrix.iter().any(Clause::is_empty) {
            return true;
        }
        if matrix.is_empty() || block == self.blocks.len() {
            return false;
        }
        let key = (block, matrix);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (quant, vars, uidx) = self.blocks[key.0].clone();
        let result = match quant {
            Quantifier::Exists => {
                let space = AssignmentSpace::new(vars);
                let mut all = true;
                for ext in space.iter() {
                    match restrict_matrix(&key.1, &ext) {
                        Some(m) => {
                            if !self.forall_wins(key.0 + 1, m) {
                                all = false;
                                break;
                            }
                        }
                        None => {} // clause falsified: universal wins this branch
                    }
                }
                all
            }
            Quantifier::Forall => {
                let opts = self.options[uidx.expect("universal index")].clone();
                let mut any = false;
                for beta in &opts {
                    match restrict_matrix(&key.1, beta) {
                        Some(m) => {
                            if self.forall_wins(key.0 + 1, m) {
                                any = true;
                                break;
                            }
                        }
                        None => {
                            any = true;
                            break;
                        }
                    }
                }
                any
            }
        };
        self.memo.insert(key, result);
        result
    }

    /// First response in the set keeping the universal player winning.
    fn pick_response(&mut self, block: usize, matrix: &[Clause]) -> Assignment {
        let uidx = self.blocks[block].2.expect("universal block");
        let opts = self.options[uidx].clone();
        for beta in &opts {
            let wins = match restrict_matrix(matrix, beta) {
                Some(m) => self.forall_wins(block + 1, m),
                None => true,
            };
            if wins {
                return beta.clone();
            }
        }
        // losing position: the response is immaterial, take the first option
        opts[0].clone()
    }
}

fn restrict_matrix(matrix: &[Clause], tau: &Assignment) -> Option<Vec<Clause>> {
    let mut out = Vec::with_capacity(matrix.len());
    for c in matrix {
        match c.restrict(tau) {
            RestrictedClause::Satisfied => {}
            RestrictedClause::Clause(c) => {
                if c.is_empty() {
                    return None;
                }
                out.push(c);
            }
        }
    }
    Some(out)
}

fn evaluate_response_sets(
    qcnf: &Qcnf,
    prefix: &crate::qcnf::Prefix,
    spaces: &[AssignmentSpace],
    sets: &[Vec<u64>],
) -> Result<Option<CostReport>> {
    let mut game = RestrictedGame::new(prefix, spaces, sets);
    if !game.forall_wins(0, qcnf.matrix.clone()) {
        return Ok(None);
    }
    // tabulate the witness: at each universal block take the first winning
    // response from the set
    let exists_vars = qcnf.prefix.exists_vars();
    let forall_blocks: Vec<BTreeSet<VarId>> = game
        .blocks
        .iter()
        .filter(|(q, _, _)| *q == Quantifier::Forall)
        .map(|(_, vars, _)| vars.iter().copied().collect())
        .collect();
    let full_space = AssignmentSpace::new(exists_vars.iter().copied());
    let mut table = BTreeMap::new();
    for alpha in full_space.iter() {
        let mut beta_all = Assignment::empty();
        let mut matrix = qcnf.matrix.clone();
        let mut dead = false; // a clause falsified: play out arbitrarily
        for bi in 0..game.blocks.len() {
            let (quant, vars, _) = game.blocks[bi].clone();
            let ext = match quant {
                Quantifier::Exists => {
                    let vs: BTreeSet<VarId> = vars.iter().copied().collect();
                    alpha.project(&vs)
                }
                Quantifier::Forall => {
                    let choice = if dead {
                        let uidx = game.blocks[bi].2.expect("universal block");
                        game.options[uidx][0].clone()
                    } else {
                        game.pick_response(bi, &matrix)
                    };
                    beta_all = beta_all.union(&choice)?;
                    choice
                }
            };
            if !dead {
                match restrict_matrix(&matrix, &ext) {
                    Some(m) => matrix = m,
                    None => dead = true,
                }
            }
        }
        table.insert(alpha, beta_all);
    }
    let witness = Strategy {
        player: Player::Forall,
        table,
    };
    let block_ranges: Vec<u64> = forall_blocks
        .iter()
        .map(|u| witness.projected_range(u).len() as u64)
        .collect();
    let cost = block_ranges.iter().copied().max().unwrap_or(1);
    Ok(Some(CostReport {
        cost,
        block_ranges,
        witness,
    }))
}

/// Truth of a (1,2) component `Ψ = ∃Y∀X·ψ` reduces to 2-SAT: `Ψ` is false
/// iff the 2-CNF of the clauses' existential parts is unsatisfiable.
pub fn psi_false(psi: &Qcnf) -> Result<bool> {
    let (_, projection) = psi_projection(psi)?;
    Ok(matches!(
        twosat::solve(&projection)?,
        TwoSatOutcome::Unsat(_)
    ))
}

/// No constant universal response wins: for every `β ∈ ⟨X⟩` the restricted
/// 2-CNF `ψ[β]` is satisfiable. Together with [`psi_false`] this certifies
/// `cost(Ψ) ≥ 2`.
pub fn psi_nonconstant(psi: &Qcnf, caps: &Caps) -> Result<bool> {
    let (universal, _) = psi_projection(psi)?;
    caps.check_vars("psi_nonconstant universal block", universal.len())?;
    let space = AssignmentSpace::new(universal.iter().copied());
    let ok = exec::map_range(space.len(), |bi| {
        let beta = space.assignment(bi);
        let restricted: Vec<Clause> = psi
            .matrix
            .iter()
            .filter_map(|c| match c.restrict(&beta) {
                RestrictedClause::Satisfied => None,
                RestrictedClause::Clause(c) => Some(c),
            })
            .collect();
        matches!(twosat::solve(&restricted), Ok(TwoSatOutcome::Sat(_)))
    });
    Ok(ok.into_iter().all(|b| b))
}

/// Validates the (1,2) clause structure of `Ψ = ∃Y∀X·ψ` and returns its
/// universal variable set plus the existential 2-CNF projection.
fn psi_projection(psi: &Qcnf) -> Result<(BTreeSet<VarId>, Vec<Clause>)> {
    let universal = psi.prefix.forall_vars();
    let existential = psi.prefix.exists_vars();
    let mut projection = Vec::with_capacity(psi.matrix.len());
    for (i, c) in psi.matrix.iter().enumerate() {
        let u: Vec<_> = c
            .literals()
            .iter()
            .filter(|l| universal.contains(&l.var()))
            .collect();
        let e: Vec<_> = c
            .literals()
            .iter()
            .copied()
            .filter(|l| existential.contains(&l.var()))
            .collect();
        if u.len() != 1 || e.len() != 2 || c.len() != 3 {
            return Err(Error::invalid(format!(
                "clause {i} is not a (1,2) clause (one universal, two existential literals)"
            )));
        }
        let evars: BTreeSet<VarId> = e.iter().map(|l| l.var()).collect();
        if evars.len() != 2 {
            return Err(Error::invalid(format!(
                "clause {i} repeats an existential variable"
            )));
        }
        projection.push(Clause::new(e));
    }
    Ok((universal, projection))
}

/// Outcome of the counting lower bound for a sampled `Q(n,m,c)` instance.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum QCostBound {
    /// All components are false, so the bound `cost(Q) ≥ (N/(N−1))^k`
    /// with `N = 2^m` is certified.
    Certified {
        /// Number of components with no constant winning response.
        k: u32,
        /// `N = 2^m`.
        n_responses: u64,
        bound: f64,
        log2_bound: f64,
    },
    /// Some component is not certified false; the bound does not apply.
    TruthUncertified { first_true_component: u32 },
}

/// Counting lower bound on `cost(Q(n,m,c))` from the component checks.
pub fn cost_lower_bound_q(meta: &RandomQMeta, caps: &Caps) -> Result<QCostBound> {
    let mut k = 0u32;
    for comp in &meta.components {
        let psi = comp.psi()?;
        if !psi_false(&psi)? {
            return Ok(QCostBound::TruthUncertified {
                first_true_component: comp.index,
            });
        }
        if psi_nonconstant(&psi, caps)? {
            k += 1;
        }
    }
    let n = 1u64 << meta.m;
    let ratio = n as f64 / (n as f64 - 1.0);
    Ok(QCostBound::Certified {
        k,
        n_responses: n,
        bound: ratio.powi(k as i32),
        log2_bound: k as f64 * ratio.log2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::qcnf::{Block, Prefix};

    fn caps() -> Caps {
        Caps::default()
    }

    fn v(id: u32) -> VarId {
        VarId::new(id)
    }

    #[test]
    fn equality_is_false() {
        for n in 1..=3 {
            assert!(!truth(&gen::equality(n).unwrap(), &caps()).unwrap());
        }
    }

    #[test]
    fn satisfiable_everywhere_is_true() {
        // ∀u ∃t · (u ∨ t)(¬u ∨ t): existential player always wins via t=1
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(Quantifier::Forall, [v(1)]),
                Block::new(Quantifier::Exists, [v(2)]),
            ])
            .unwrap(),
            vec![
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[-1, 2]).unwrap(),
            ],
        )
        .unwrap();
        assert!(truth(&q, &caps()).unwrap());
    }

    #[test]
    fn kbkf_weak_false() {
        assert!(!truth(&gen::kbkf_weak(1).unwrap(), &caps()).unwrap());
        assert!(!truth(&gen::kbkf_weak(2).unwrap(), &caps()).unwrap());
        assert!(!truth(&gen::kbkf_doubled(1).unwrap(), &caps()).unwrap());
        assert!(!truth(&gen::kbkf(1).unwrap(), &caps()).unwrap());
    }

    #[test]
    fn synthesized_strategy_for_equality_copies() {
        let q = gen::equality(1).unwrap();
        let s = synthesize_winning_forall(&q, &caps()).unwrap();
        assert!(verify_strategy(&q, &s, &caps()).unwrap());
        // the unique winning response copies x1 into u1
        for (alpha, beta) in &s.table {
            assert_eq!(beta.value(v(2)), alpha.value(v(1)));
        }
    }

    #[test]
    fn constant_strategy_loses_equality() {
        let q = gen::equality(1).unwrap();
        let exists = q.prefix.exists_vars();
        let space = AssignmentSpace::new(exists.iter().copied());
        let table = space
            .iter()
            .map(|a| (a, Assignment::from_pairs([(v(2), false)])))
            .collect();
        let s = Strategy {
            player: Player::Forall,
            table,
        };
        assert!(!verify_strategy(&q, &s, &caps()).unwrap());
    }

    #[test]
    fn synthesis_rejects_true_formula() {
        let q = Qcnf::new(
            Prefix::new(vec![Block::new(Quantifier::Exists, [v(1)])]).unwrap(),
            vec![Clause::from_dimacs(&[1]).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            synthesize_winning_forall(&q, &caps()),
            Err(Error::NotFalse)
        ));
    }

    #[test]
    fn cost_equality() {
        for n in 1..=3u32 {
            let q = gen::equality(n).unwrap();
            let report = cost_exact_single_block(&q, &caps()).unwrap();
            assert_eq!(report.cost, 1 << n, "cost(EQ({n}))");
            assert!(verify_strategy(&q, &report.witness, &caps()).unwrap());
        }
    }

    #[test]
    fn cost_with_empty_clause_is_one() {
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(Quantifier::Exists, [v(1)]),
                Block::new(Quantifier::Forall, [v(2)]),
            ])
            .unwrap(),
            vec![Clause::empty(), Clause::from_dimacs(&[1, 2]).unwrap()],
        )
        .unwrap();
        assert_eq!(cost_exact_single_block(&q, &caps()).unwrap().cost, 1);
    }

    #[test]
    fn cost_xor_formula_is_two() {
        // ∃x ∀u · (x∨u)(¬x∨¬u): the universal player must mirror x
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(Quantifier::Exists, [v(1)]),
                Block::new(Quantifier::Forall, [v(2)]),
            ])
            .unwrap(),
            vec![
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[-1, -2]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(cost_exact_single_block(&q, &caps()).unwrap().cost, 2);
        assert_eq!(cost_exact_general(&q, &caps()).unwrap().cost, 2);
    }

    #[test]
    fn cost_general_kbkf_weak() {
        for n in 1..=2u32 {
            let q = gen::kbkf_weak(n).unwrap();
            let report = cost_exact_general(&q, &caps()).unwrap();
            assert_eq!(report.cost, 1 << n, "cost(kbkf_weak({n}))");
            assert!(verify_strategy(&q, &report.witness, &caps()).unwrap());
        }
    }

    #[test]
    fn cost_general_agrees_on_single_block() {
        for n in 1..=2u32 {
            let q = gen::equality(n).unwrap();
            let a = cost_exact_single_block(&q, &caps()).unwrap();
            let b = cost_exact_general(&q, &caps()).unwrap();
            assert_eq!(a.cost, b.cost);
        }
    }

    #[test]
    fn cost_without_universal_blocks_is_one() {
        // a false purely existential formula: the empty block convention
        // contributes range 1
        let q = Qcnf::new(
            Prefix::new(vec![Block::new(Quantifier::Exists, [v(1)])]).unwrap(),
            vec![
                Clause::from_dimacs(&[1]).unwrap(),
                Clause::from_dimacs(&[-1]).unwrap(),
            ],
        )
        .unwrap();
        let report = cost_exact_general(&q, &caps()).unwrap();
        assert_eq!(report.cost, 1);
        assert!(report.block_ranges.is_empty());
    }

    #[test]
    fn strategy_json_roundtrip() {
        let q = gen::equality(1).unwrap();
        let s = synthesize_winning_forall(&q, &caps()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: Strategy = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(verify_strategy(&q, &back, &caps()).unwrap());
    }

    #[test]
    fn psi_checks_agree_with_game_oracle() {
        let mut tested = 0;
        for seed in 0..40u64 {
            let (_, meta) = gen::random_q(3, 1, 6, seed).unwrap();
            for comp in &meta.components {
                let psi = comp.psi().unwrap();
                let false_by_2sat = psi_false(&psi).unwrap();
                let false_by_game = !truth(&psi, &caps()).unwrap();
                assert_eq!(false_by_2sat, false_by_game, "seed {seed}");
                if false_by_2sat {
                    let nonconst = psi_nonconstant(&psi, &caps()).unwrap();
                    let cost = cost_exact_single_block(&psi, &caps()).unwrap().cost;
                    assert_eq!(nonconst, cost >= 2, "seed {seed}");
                    tested += 1;
                }
            }
        }
        assert!(tested >= 10, "too few false components sampled");
    }

    #[test]
    fn single_clause_psi_is_satisfiable() {
        let (_, meta) = gen::random_q(3, 1, 1, 9).unwrap();
        let psi = meta.components[0].psi().unwrap();
        assert!(!psi_false(&psi).unwrap());
    }

    #[test]
    fn bound_formula() {
        // m=1 gives N=2, so the bound is 2^k
        for seed in 0..40u64 {
            let (_, meta) = gen::random_q(3, 1, 6, seed).unwrap();
            match cost_lower_bound_q(&meta, &caps()).unwrap() {
                QCostBound::Certified {
                    k,
                    n_responses,
                    bound,
                    ..
                } => {
                    assert_eq!(n_responses, 2);
                    assert_eq!(bound, 2f64.powi(k as i32));
                    return;
                }
                QCostBound::TruthUncertified { .. } => continue,
            }
        }
        panic!("no certified instance found in 40 seeds");
    }
}
