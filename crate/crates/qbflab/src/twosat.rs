//! 2-SAT decision via the implication graph and strongly connected
//! components.
//!
//! Accepts clauses of width one or two (unit clauses arise from restriction).
//! Tautological clauses contribute no edges. Unsatisfiability is witnessed
//! either by an empty input clause or by a variable sharing a component with
//! its negation; satisfying models are read off the reverse topological
//! order of the condensation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcnf::{Assignment, Clause, Literal, VarId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoSatOutcome {
    Sat(Assignment),
    Unsat(UnsatWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnsatWitness {
    /// Index of an empty clause in the input.
    EmptyClause(usize),
    /// A variable equivalent to its own negation; both implication paths
    /// exist in the graph.
    Conflict(VarId),
}

/// Implication graph for a width-≤2 clause set.
#[derive(Debug)]
pub struct TwoSat {
    vars: Vec<VarId>,
    var_index: BTreeMap<VarId, usize>,
    /// adj[node] = (target node, index of the inducing clause)
    adj: Vec<Vec<(usize, usize)>>,
    empty_clause: Option<usize>,
}

impl TwoSat {
    pub fn new(clauses: &[Clause]) -> Result<Self> {
        let mut vars: Vec<VarId> = clauses
            .iter()
            .flat_map(|c| c.vars().collect::<Vec<_>>())
            .collect();
        vars.sort();
        vars.dedup();
        let var_index: BTreeMap<VarId, usize> =
            vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); 2 * vars.len()];
        let mut empty_clause = None;
        for (ci, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                empty_clause.get_or_insert(ci);
                continue;
            }
            if c.is_tautology() {
                continue;
            }
            let lits = c.literals();
            match lits.len() {
                1 => {
                    let a = lits[0];
                    let from = node(&var_index, a.negated());
                    let to = node(&var_index, a);
                    adj[from].push((to, ci));
                }
                2 => {
                    let (a, b) = (lits[0], lits[1]);
                    adj[node(&var_index, a.negated())].push((node(&var_index, b), ci));
                    adj[node(&var_index, b.negated())].push((node(&var_index, a), ci));
                }
                w => {
                    return Err(Error::invalid(format!(
                        "clause {ci} has width {w}, expected at most 2"
                    )))
                }
            }
        }
        Ok(TwoSat {
            vars,
            var_index,
            adj,
            empty_clause,
        })
    }

    pub fn solve(&self) -> TwoSatOutcome {
        if let Some(ci) = self.empty_clause {
            return TwoSatOutcome::Unsat(UnsatWitness::EmptyClause(ci));
        }
        let comp = self.scc();
        for (i, &v) in self.vars.iter().enumerate() {
            if comp[2 * i] == comp[2 * i + 1] {
                return TwoSatOutcome::Unsat(UnsatWitness::Conflict(v));
            }
        }
        // Tarjan completion index: an edge across components points to the
        // smaller index, so smaller index = later in topological order.
        // A literal is true iff its node completes before its negation's.
        let model = Assignment::from_pairs(
            self.vars
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, comp[2 * i] < comp[2 * i + 1])),
        );
        TwoSatOutcome::Sat(model)
    }

    /// BFS path in the implication graph from literal `from` to literal `to`:
    /// the visited literal sequence plus the clause inducing each edge.
    /// Returns `None` if unreachable.
    pub fn find_path(&self, from: Literal, to: Literal) -> Option<Vec<(Literal, usize)>> {
        let start = node(&self.var_index, from);
        let goal = node(&self.var_index, to);
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            if u == goal {
                let mut path = Vec::new();
                let mut cur = goal;
                while cur != start {
                    let (p, ci) = prev[cur].expect("path backtrack");
                    path.push((self.literal_of(cur), ci));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(w, ci) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((u, ci));
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn literal_of(&self, n: usize) -> Literal {
        Literal::new(self.vars[n / 2], n.is_multiple_of(2))
    }

    /// Iterative Tarjan; returns component index per node, indices assigned
    /// in completion order.
    fn scc(&self) -> Vec<usize> {
        let n = self.adj.len();
        const UNSET: usize = usize::MAX;
        let mut index = vec![UNSET; n];
        let mut low = vec![0usize; n];
        let mut comp = vec![UNSET; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_index = 0usize;
        let mut comp_count = 0usize;
        // explicit DFS stack of (node, next edge offset)
        let mut work: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNSET {
                continue;
            }
            work.push((root, 0));
            while let Some(&(u, ei)) = work.last() {
                if ei == 0 {
                    index[u] = next_index;
                    low[u] = next_index;
                    next_index += 1;
                    stack.push(u);
                    on_stack[u] = true;
                }
                if let Some(&(w, _)) = self.adj[u].get(ei) {
                    work.last_mut().expect("work frame").1 += 1;
                    if index[w] == UNSET {
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[u] = low[u].min(index[w]);
                    }
                } else {
                    if low[u] == index[u] {
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp[w] = comp_count;
                            if w == u {
                                break;
                            }
                        }
                        comp_count += 1;
                    }
                    work.pop();
                    if let Some(&(p, _)) = work.last() {
                        low[p] = low[p].min(low[u]);
                    }
                }
            }
        }
        comp
    }
}

fn node(var_index: &BTreeMap<VarId, usize>, l: Literal) -> usize {
    let i = var_index[&l.var()];
    2 * i + if l.is_positive() { 0 } else { 1 }
}

/// Decides a width-≤2 clause set.
pub fn solve(clauses: &[Clause]) -> Result<TwoSatOutcome> {
    Ok(TwoSat::new(clauses)?.solve())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn clause(ls: &[i64]) -> Clause {
        Clause::from_dimacs(ls).unwrap()
    }

    #[test]
    fn four_clause_unsat() {
        let cls = vec![
            clause(&[1, 2]),
            clause(&[1, -2]),
            clause(&[-1, 2]),
            clause(&[-1, -2]),
        ];
        assert!(matches!(
            solve(&cls).unwrap(),
            TwoSatOutcome::Unsat(UnsatWitness::Conflict(_))
        ));
    }

    #[test]
    fn single_clause_sat() {
        match solve(&[clause(&[1, 2])]).unwrap() {
            TwoSatOutcome::Sat(model) => {
                assert!(clause(&[1, 2]).eval(&model).unwrap());
            }
            _ => panic!("expected sat"),
        }
    }

    #[test]
    fn unit_clauses() {
        match solve(&[clause(&[1]), clause(&[-1, 2])]).unwrap() {
            TwoSatOutcome::Sat(model) => {
                assert_eq!(model.value(VarId::new(1)), Some(true));
                assert_eq!(model.value(VarId::new(2)), Some(true));
            }
            _ => panic!("expected sat"),
        }
        assert!(matches!(
            solve(&[clause(&[1]), clause(&[-1])]).unwrap(),
            TwoSatOutcome::Unsat(_)
        ));
    }

    #[test]
    fn empty_clause_unsat() {
        assert_eq!(
            solve(&[Clause::empty()]).unwrap(),
            TwoSatOutcome::Unsat(UnsatWitness::EmptyClause(0))
        );
    }

    #[test]
    fn width_three_rejected() {
        assert!(solve(&[clause(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn model_against_brute_force() {
        // randomized cross-check of the component-order model rule
        let mut rng = SplitMix64::new(11);
        for _ in 0..300 {
            let nvars = 2 + (rng.next_below(6) as u32);
            let nclauses = 1 + rng.next_below(12) as usize;
            let mut cls = Vec::new();
            for _ in 0..nclauses {
                let a = 1 + rng.next_below(nvars as u64) as i64;
                let mut b = 1 + rng.next_below(nvars as u64) as i64;
                if b == a {
                    b = a % nvars as i64 + 1;
                }
                let sa = if rng.next_below(2) == 0 { 1 } else { -1 };
                let sb = if rng.next_below(2) == 0 { 1 } else { -1 };
                cls.push(clause(&[sa * a, sb * b]));
            }
            let brute_sat = (0..(1u64 << nvars)).any(|bits| {
                let tau = Assignment::from_pairs(
                    (0..nvars).map(|i| (VarId::new(i + 1), (bits >> i) & 1 == 1)),
                );
                cls.iter().all(|c| c.eval(&tau).unwrap_or(false))
            });
            match solve(&cls).unwrap() {
                TwoSatOutcome::Sat(model) => {
                    assert!(brute_sat, "solver said sat, brute force says unsat");
                    for c in &cls {
                        assert!(c.eval(&model).unwrap(), "model does not satisfy {c}");
                    }
                }
                TwoSatOutcome::Unsat(_) => {
                    assert!(!brute_sat, "solver said unsat, brute force says sat")
                }
            }
        }
    }

    #[test]
    fn conflict_paths_exist() {
        let cls = vec![
            clause(&[1, 2]),
            clause(&[1, -2]),
            clause(&[-1, 2]),
            clause(&[-1, -2]),
        ];
        let ts = TwoSat::new(&cls).unwrap();
        let TwoSatOutcome::Unsat(UnsatWitness::Conflict(v)) = ts.solve() else {
            panic!("expected conflict");
        };
        let pos = Literal::positive(v);
        assert!(ts.find_path(pos, pos.negated()).is_some());
        assert!(ts.find_path(pos.negated(), pos).is_some());
    }
}
