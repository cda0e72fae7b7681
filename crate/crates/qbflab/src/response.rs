//! Response maps, minimal response ranges, and proof capacity.
//!
//! A response map for a reducible line sends each assignment of the line's
//! outer variables to an assignment of its rightmost (universal) block that
//! falsifies the restricted line whenever it is falsifiable. The minimum
//! achievable range unfolds into an exact set-cover problem over the block's
//! responses; the capacity of a proof is the maximum of the per-line minima,
//! which per-line independence makes equal to the minimum over response-map
//! sets of the maximum range.

use std::collections::{BTreeMap, BTreeSet};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exec;
use crate::line::{game_normalized, ProofLine};
use crate::oracle::minimum_cover;
use crate::qcnf::{Assignment, AssignmentSpace, Qcnf, Quantifier, VarId};

/// A per-line response map with its domain (the outer variables) and block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMap {
    /// `X = vars(L) ∖ U`.
    domain: BTreeSet<VarId>,
    /// The full rightmost universal block `U`.
    block: BTreeSet<VarId>,
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Constant(Assignment),
    Table(BTreeMap<Assignment, Assignment>),
}

impl ResponseMap {
    pub fn constant(domain: BTreeSet<VarId>, block: BTreeSet<VarId>, beta: Assignment) -> Self {
        ResponseMap {
            domain,
            block,
            repr: Repr::Constant(beta),
        }
    }

    pub fn table(
        domain: BTreeSet<VarId>,
        block: BTreeSet<VarId>,
        table: BTreeMap<Assignment, Assignment>,
    ) -> Self {
        ResponseMap {
            domain,
            block,
            repr: Repr::Table(table),
        }
    }

    pub fn domain(&self) -> &BTreeSet<VarId> {
        &self.domain
    }

    pub fn block(&self) -> &BTreeSet<VarId> {
        &self.block
    }

    /// The response for an assignment covering the domain (projected here).
    pub fn respond(&self, outer: &Assignment) -> Result<Assignment> {
        match &self.repr {
            Repr::Constant(beta) => Ok(beta.clone()),
            Repr::Table(t) => {
                let key = outer.project(&self.domain);
                t.get(&key)
                    .cloned()
                    .ok_or_else(|| Error::invalid("response map queried outside its domain"))
            }
        }
    }

    pub fn range(&self) -> BTreeSet<Assignment> {
        match &self.repr {
            Repr::Constant(beta) => [beta.clone()].into_iter().collect(),
            Repr::Table(t) => t.values().cloned().collect(),
        }
    }

    pub fn range_size(&self) -> u64 {
        self.range().len() as u64
    }

    /// The defining condition: whenever `L[α]` is not a tautology, the
    /// response falsifies it. Checked exhaustively over `⟨X⟩ × ⟨U⟩`.
    pub fn audit(&self, qcnf: &Qcnf, line: &ProofLine, caps: &Caps) -> Result<bool> {
        caps.check_vars("response audit outer variables", self.domain.len())?;
        caps.check_vars("response audit block variables", self.block.len())?;
        let x_space = AssignmentSpace::new(self.domain.iter().copied());
        let u_space = AssignmentSpace::new(self.block.iter().copied());
        let _ = qcnf;
        for alpha in x_space.iter() {
            let restricted = line.restrict(&alpha);
            let mut falsifiable = false;
            for beta in u_space.iter() {
                if !restricted.eval(&beta)? {
                    falsifiable = true;
                    break;
                }
            }
            if !falsifiable {
                continue; // tautological restriction: any response is fine
            }
            let beta = self.respond(&alpha)?;
            if beta.var_set() != self.block {
                return Ok(false);
            }
            if restricted.eval(&beta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The line's rightmost block must be universal; returns `(U, X)` over the
/// game-normalized prefix.
fn reducible_split(qcnf: &Qcnf, line: &ProofLine) -> Result<(BTreeSet<VarId>, BTreeSet<VarId>)> {
    let vars = line.vars();
    let bi = qcnf
        .prefix
        .rightmost_block(&vars)
        .ok_or_else(|| Error::invalid("line has no variables, nothing to reduce"))?;
    let block = &qcnf.prefix.blocks()[bi];
    if block.quant != Quantifier::Forall {
        return Err(Error::invalid("line is not reducible"));
    }
    let u: BTreeSet<VarId> = block.vars().iter().copied().collect();
    let x: BTreeSet<VarId> = vars.difference(&u).copied().collect();
    Ok((u, x))
}

/// The minimum response-map range for a reducible line: the smallest set of
/// block responses hitting every falsifiable restriction, found by
/// increasing-size exhaustive cover search in canonical order, together with
/// the assembled witness map.
pub fn min_response_range(
    qcnf: &Qcnf,
    line: &ProofLine,
    caps: &Caps,
) -> Result<(u64, ResponseMap)> {
    let qcnf = game_normalized(qcnf);
    let (u, x) = reducible_split(&qcnf, line)?;
    caps.check_vars("response range outer variables", x.len())?;
    caps.check_vars("response range block variables", u.len())?;

    let x_space = AssignmentSpace::new(x.iter().copied());
    let u_space = AssignmentSpace::new(u.iter().copied());
    let n_beta = u_space.len();

    // W(α): the responses falsifying L[α], as a bitset
    let winning: Vec<Vec<u64>> = exec::map_range(x_space.len(), |ai| {
        let alpha = x_space.assignment(ai);
        let restricted = line.restrict(&alpha);
        let mut bits = vec![0u64; n_beta.div_ceil(64) as usize];
        for bi in 0..n_beta {
            let beta = u_space.assignment(bi);
            if !restricted.eval(&beta).unwrap_or(true) {
                bits[(bi / 64) as usize] |= 1 << (bi % 64);
            }
        }
        bits
    });

    // only falsifiable restrictions constrain the cover
    let constrained: Vec<Vec<u64>> = winning
        .iter()
        .filter(|bits| bits.iter().any(|&w| w != 0))
        .cloned()
        .collect();
    if constrained.is_empty() {
        // the line is a tautology on every restriction: constant map
        let beta = u_space.assignment(0);
        return Ok((1, ResponseMap::constant(x, u, beta)));
    }
    let cover = minimum_cover(&constrained, n_beta)?;
    let betas: Vec<Assignment> = cover.iter().map(|&b| u_space.assignment(b)).collect();

    let mut table = BTreeMap::new();
    for (ai, bits) in winning.iter().enumerate() {
        let alpha = x_space.assignment(ai as u64);
        let choice = cover
            .iter()
            .position(|&b| bits[(b / 64) as usize] >> (b % 64) & 1 == 1)
            .unwrap_or(0); // tautological restriction: first chosen response
        table.insert(alpha, betas[choice].clone());
    }
    Ok((cover.len() as u64, ResponseMap::table(x, u, table)))
}

/// Capacity of a proof given as its line sequence: the maximum over
/// reducible lines of the minimal response range (at least 1).
pub fn capacity(qcnf: &Qcnf, lines: &[ProofLine], caps: &Caps) -> Result<u64> {
    let qcnf = game_normalized(qcnf);
    let reducible: Vec<&ProofLine> = lines
        .iter()
        .filter(|l| l.is_reducible(&qcnf.prefix))
        .collect();
    let minima = exec::map_slice(&reducible, |line| {
        min_response_range(&qcnf, line, caps).map(|(r, _)| r)
    });
    let mut cap = 1;
    for m in minima {
        cap = cap.max(m?);
    }
    Ok(cap)
}

/// The per-system default response maps for every reducible line, keyed by
/// line index: clauses get the constant negation of their block literals,
/// cutting-planes lines the sign rule, PCR lines the greedy construction,
/// and anything else the minimal witness.
pub fn default_response_maps(
    qcnf: &Qcnf,
    lines: &[ProofLine],
    caps: &Caps,
) -> Result<BTreeMap<usize, ResponseMap>> {
    let qcnf = game_normalized(qcnf);
    let mut maps = BTreeMap::new();
    for (i, line) in lines.iter().enumerate() {
        if !line.is_reducible(&qcnf.prefix) {
            continue;
        }
        let (u, x) = reducible_split(&qcnf, line)?;
        let map = match line {
            ProofLine::Clause(c) => {
                // negate the block literals; unassigned block variables get 0
                let beta = Assignment::from_pairs(
                    u.iter()
                        .map(|&bv| (bv, c.contains(crate::qcnf::Literal::negative(bv)))),
                );
                ResponseMap::constant(x, u, beta)
            }
            ProofLine::Cp(l) => {
                let beta = crate::cp::cp_response(&qcnf, l)?;
                ResponseMap::constant(x, u, beta)
            }
            ProofLine::Pcr(p) => {
                let table = crate::pcr::greedy_response(&qcnf, p, caps)?;
                ResponseMap::table(x, u, table)
            }
            ProofLine::Formula(_) | ProofLine::Const(_) => min_response_range(&qcnf, line, caps)?.1,
        };
        maps.insert(i, map);
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::BoolExpr;
    use crate::gen;
    use crate::line::qures_lines;
    use crate::qcnf::{Block, Clause, Literal, Prefix};
    use crate::qures::{prove_saturate, Mode};

    fn v(id: u32) -> VarId {
        VarId::new(id)
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn reducible_clause_min_range_is_one() {
        let q = gen::equality(2).unwrap();
        // {x1, u1} is reducible with minimal range 1
        let line = ProofLine::Clause(Clause::from_dimacs(&[1, 3]).unwrap());
        let (r, map) = min_response_range(&q, &line, &caps()).unwrap();
        assert_eq!(r, 1);
        assert!(map.audit(&q, &line, &caps()).unwrap());
    }

    #[test]
    fn equality_term_disjunction_min_range() {
        // L(n) = ⋁ᵢ (xᵢ∨uᵢ)∧(¬xᵢ∨¬uᵢ) needs 2^n responses
        for n in [1u32, 3] {
            let q = gen::equality(n).unwrap();
            let term = |i: u32| {
                BoolExpr::and([
                    BoolExpr::or([BoolExpr::var(v(i)), BoolExpr::var(v(n + i))]),
                    BoolExpr::or([
                        BoolExpr::lit(Literal::negative(v(i))),
                        BoolExpr::lit(Literal::negative(v(n + i))),
                    ]),
                ])
            };
            let line = ProofLine::Formula(BoolExpr::or((1..=n).map(term)));
            let (r, map) = min_response_range(&q, &line, &caps()).unwrap();
            assert_eq!(r, 1 << n);
            assert!(map.audit(&q, &line, &caps()).unwrap());
        }
    }

    #[test]
    fn qures_default_maps_are_constant_and_valid() {
        let q = gen::equality(2).unwrap();
        let proof = prove_saturate(&q, &caps(), Mode::QuRes).unwrap().unwrap();
        let lines = qures_lines(&proof);
        let maps = default_response_maps(&q, &lines, &caps()).unwrap();
        assert!(!maps.is_empty());
        for (i, map) in &maps {
            assert_eq!(map.range_size(), 1, "clause maps are constant");
            assert!(map.audit(&q, &lines[*i], &caps()).unwrap());
        }
        assert_eq!(capacity(&q, &lines, &caps()).unwrap(), 1);
    }

    #[test]
    fn default_map_negates_block_literals() {
        // clause {x1, u1, ¬u2, t1} with rightmost block {u1, u2}:
        // the constant response is u1 ↦ 0, u2 ↦ 1
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(crate::qcnf::Quantifier::Exists, [v(1)]),
                Block::new(crate::qcnf::Quantifier::Forall, [v(2), v(3)]),
                Block::new(crate::qcnf::Quantifier::Exists, [v(4)]),
            ])
            .unwrap(),
            vec![],
        )
        .unwrap();
        let line = ProofLine::Clause(Clause::from_dimacs(&[1, 2, -3]).unwrap());
        let maps = default_response_maps(&q, std::slice::from_ref(&line), &caps()).unwrap();
        let beta = maps[&0]
            .respond(&Assignment::from_pairs([(v(1), false)]))
            .unwrap();
        assert_eq!(beta, Assignment::from_pairs([(v(2), false), (v(3), true)]));
        // a clause without block variables in its rightmost position is not
        // reducible: {x1, t1} has rightmost block existential
        let not_red = ProofLine::Clause(Clause::from_dimacs(&[1, 4]).unwrap());
        let maps2 = default_response_maps(&q, std::slice::from_ref(&not_red), &caps()).unwrap();
        assert!(maps2.is_empty());
    }

    #[test]
    fn greedy_ranges_bounded_by_minimum_and_monomials() {
        // random reducible PCR lines: min ≤ greedy ≤ distinct U-monomials
        use crate::pcr::{AlgebraicVar, FieldElem, FieldTag, Monomial, Polynomial};
        use crate::rng::SplitMix64;
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(crate::qcnf::Quantifier::Exists, (1..=4).map(v)),
                Block::new(crate::qcnf::Quantifier::Forall, (5..=8).map(v)),
            ])
            .unwrap(),
            vec![],
        )
        .unwrap();
        let mut rng = SplitMix64::new(99);
        let mut checked = 0;
        for _ in 0..60 {
            let n_mono = 1 + rng.next_below(8) as usize;
            let mut terms = Vec::new();
            let mut has_u = false;
            for _ in 0..n_mono {
                let mut mono = Monomial::one();
                for var in 1..=8u32 {
                    match rng.next_below(4) {
                        0 => {
                            mono = mono.times_var(AlgebraicVar::plain(v(var)));
                            has_u |= var > 4;
                        }
                        1 => {
                            mono = mono.times_var(AlgebraicVar::barred(v(var)));
                            has_u |= var > 4;
                        }
                        _ => {}
                    }
                }
                let coef = 1 + rng.next_below(3) as i64;
                let sign = if rng.next_below(2) == 0 { 1 } else { -1 };
                terms.push((mono, FieldElem::from_i64(FieldTag::Rational, sign * coef)));
            }
            if !has_u {
                continue;
            }
            let Ok(poly) = Polynomial::from_terms(FieldTag::Rational, terms) else {
                continue;
            };
            if poly.is_zero() || !poly.base_vars().iter().any(|b| b.get() > 4) {
                continue;
            }
            let line = ProofLine::Pcr(poly.clone());
            let (min_r, _) = min_response_range(&q, &line, &caps()).unwrap();
            let table = crate::pcr::greedy_response(&q, &poly, &caps()).unwrap();
            let greedy: BTreeSet<_> = table.values().collect();
            let n_u = crate::pcr::u_monomial_count(&q, &poly).unwrap() as u64;
            assert!(min_r <= greedy.len() as u64);
            assert!(greedy.len() as u64 <= n_u.max(1));
            assert!(n_u as usize <= poly.monomial_count().max(1));
            checked += 1;
        }
        assert!(checked >= 20, "only {checked} random lines exercised");
    }
}
