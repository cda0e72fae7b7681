//! Core data model: variables, literals, clauses, prefixes, QCNFs and
//! assignments, with restriction, matrix evaluation and assignment
//! enumeration.
//!
//! All values are immutable after construction and safe to share across
//! threads; every operation here is a pure function.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-based variable identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(u32);

impl VarId {
    /// Panics on 0; variable ids start at 1.
    pub fn new(id: u32) -> Self {
        assert!(id >= 1, "variable ids are 1-based");
        VarId(id)
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A variable or its negation. Ordered by variable id, then polarity, so
/// sorted literal sequences are canonical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    var: VarId,
    positive: bool,
}

impl Literal {
    pub fn new(var: VarId, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn positive(var: VarId) -> Self {
        Literal::new(var, true)
    }

    pub fn negative(var: VarId) -> Self {
        Literal::new(var, false)
    }

    /// Builds a literal from a signed DIMACS-style integer; 0 is rejected.
    pub fn from_dimacs(lit: i64) -> Result<Self> {
        if lit == 0 {
            return Err(Error::invalid("literal 0 is reserved as a terminator"));
        }
        let var = u32::try_from(lit.unsigned_abs())
            .map_err(|_| Error::invalid(format!("literal {lit} out of range")))?;
        Ok(Literal::new(VarId::new(var), lit > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var.get() as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> VarId {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal::new(self.var, !self.positive)
    }

    /// True under `value` for the literal's variable.
    pub fn satisfied_by(self, value: bool) -> bool {
        self.positive == value
    }

    /// The value of the variable that makes this literal true.
    pub fn satisfying_value(self) -> bool {
        self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A clause: a canonically sorted, duplicate-free set of literals.
///
/// Clauses containing a complementary pair are representable (semantic lines
/// need them) and flagged by [`Clause::is_tautology`]; the QU-Res checker is
/// the one place that rejects them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

/// Outcome of restricting a clause by an assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestrictedClause {
    /// Some literal is satisfied; the clause disappears from the matrix.
    Satisfied,
    /// Falsified literals dropped, unassigned literals kept.
    Clause(Clause),
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Self {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        Clause { lits }
    }

    pub fn empty() -> Self {
        Clause { lits: Vec::new() }
    }

    pub fn from_dimacs(lits: &[i64]) -> Result<Self> {
        let lits = lits
            .iter()
            .map(|&l| Literal::from_dimacs(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Clause::new(lits))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        // sorted order groups the two polarities of one variable together
        let mut last = None;
        self.lits.iter().filter_map(move |l| {
            if last == Some(l.var()) {
                None
            } else {
                last = Some(l.var());
                Some(l.var())
            }
        })
    }

    pub fn var_set(&self) -> BTreeSet<VarId> {
        self.vars().collect()
    }

    /// Contains both `x` and `¬x` for some variable.
    pub fn is_tautology(&self) -> bool {
        self.lits
            .windows(2)
            .any(|w| w[0].var() == w[1].var() && w[0].is_positive() != w[1].is_positive())
    }

    /// Set union with another clause.
    pub fn union(&self, other: &Clause) -> Clause {
        Clause::new(self.lits.iter().chain(other.lits.iter()).copied())
    }

    /// The clause without any literal on `var`.
    pub fn without_var(&self, var: VarId) -> Clause {
        Clause {
            lits: self
                .lits
                .iter()
                .copied()
                .filter(|l| l.var() != var)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Clause) -> bool {
        self.lits.iter().all(|l| other.contains(*l))
    }

    /// Drops falsified literals, reports satisfaction.
    pub fn restrict(&self, tau: &Assignment) -> RestrictedClause {
        let mut kept = Vec::with_capacity(self.lits.len());
        for &lit in &self.lits {
            match tau.value(lit.var()) {
                Some(v) if lit.satisfied_by(v) => return RestrictedClause::Satisfied,
                Some(_) => {}
                None => kept.push(lit),
            }
        }
        RestrictedClause::Clause(Clause { lits: kept })
    }

    /// True iff some literal is satisfied; `tau` must cover all variables.
    pub fn eval(&self, tau: &Assignment) -> Result<bool> {
        for &lit in &self.lits {
            match tau.value(lit.var()) {
                Some(v) => {
                    if lit.satisfied_by(v) {
                        return Ok(true);
                    }
                }
                None => {
                    return Err(Error::invalid(format!(
                        "partial assignment: variable {} unassigned",
                        lit.var()
                    )))
                }
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.lits {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

/// One quantifier block: a quantifier and a sorted, non-empty variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub quant: Quantifier,
    vars: Vec<VarId>,
}

impl Block {
    pub fn new(quant: Quantifier, vars: impl IntoIterator<Item = VarId>) -> Self {
        let mut vars: Vec<VarId> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        Block { quant, vars }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.vars.binary_search(&v).is_ok()
    }
}

/// Ordered sequence of quantifier blocks. Adjacent same-quantifier blocks are
/// permitted (restriction can create them) and merged only by the explicit
/// [`Prefix::normalized`] step, so block identity used by the cost measure is
/// never changed silently.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Prefix {
    blocks: Vec<Block>,
}

impl Prefix {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            if b.vars().is_empty() {
                return Err(Error::invalid("empty quantifier block"));
            }
            for &v in b.vars() {
                if !seen.insert(v) {
                    return Err(Error::invalid(format!(
                        "variable {v} quantified more than once"
                    )));
                }
            }
        }
        Ok(Prefix { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn var_count(&self) -> usize {
        self.blocks.iter().map(|b| b.vars().len()).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.blocks.iter().flat_map(|b| b.vars().iter().copied())
    }

    pub fn var_set(&self) -> BTreeSet<VarId> {
        self.vars().collect()
    }

    /// Index of the block quantifying `v`.
    pub fn block_of(&self, v: VarId) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(v))
    }

    pub fn quantifier_of(&self, v: VarId) -> Option<Quantifier> {
        self.block_of(v).map(|i| self.blocks[i].quant)
    }

    pub fn exists_vars(&self) -> BTreeSet<VarId> {
        self.vars_with(Quantifier::Exists)
    }

    pub fn forall_vars(&self) -> BTreeSet<VarId> {
        self.vars_with(Quantifier::Forall)
    }

    fn vars_with(&self, q: Quantifier) -> BTreeSet<VarId> {
        self.blocks
            .iter()
            .filter(|b| b.quant == q)
            .flat_map(|b| b.vars().iter().copied())
            .collect()
    }

    /// `a <_Q b`: `a` is quantified strictly left of `b`.
    pub fn left_of(&self, a: VarId, b: VarId) -> bool {
        match (self.block_of(a), self.block_of(b)) {
            (Some(i), Some(j)) => i < j,
            _ => false,
        }
    }

    /// Index of the rightmost block containing a variable of `vars`.
    pub fn rightmost_block(&self, vars: &BTreeSet<VarId>) -> Option<usize> {
        self.blocks
            .iter()
            .rposition(|b| b.vars().iter().any(|v| vars.contains(v)))
    }

    /// Merges adjacent same-quantifier blocks.
    pub fn normalized(&self) -> Prefix {
        let mut blocks: Vec<Block> = Vec::new();
        for b in &self.blocks {
            match blocks.last_mut() {
                Some(last) if last.quant == b.quant => {
                    let merged: Vec<VarId> =
                        last.vars().iter().chain(b.vars().iter()).copied().collect();
                    *last = Block::new(b.quant, merged);
                }
                _ => blocks.push(b.clone()),
            }
        }
        Prefix { blocks }
    }

    /// Drops the given variables, then drops blocks that became empty.
    pub fn without_vars(&self, drop: &BTreeSet<VarId>) -> Prefix {
        let blocks = self
            .blocks
            .iter()
            .filter_map(|b| {
                let vars: Vec<VarId> = b
                    .vars()
                    .iter()
                    .copied()
                    .filter(|v| !drop.contains(v))
                    .collect();
                if vars.is_empty() {
                    None
                } else {
                    Some(Block::new(b.quant, vars))
                }
            })
            .collect();
        Prefix { blocks }
    }
}

/// A partial truth assignment; each variable is bound at most once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment {
    bindings: BTreeMap<VarId, bool>,
}

impl Assignment {
    pub fn empty() -> Self {
        Assignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, bool)>) -> Self {
        Assignment {
            bindings: pairs.into_iter().collect(),
        }
    }

    /// Reads a set of literals as an assignment (`¬x` binds `x ↦ 0`);
    /// complementary literals are rejected.
    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut bindings = BTreeMap::new();
        for l in lits {
            if let Some(prev) = bindings.insert(l.var(), l.satisfying_value()) {
                if prev != l.satisfying_value() {
                    return Err(Error::invalid(format!(
                        "contradictory bindings for variable {}",
                        l.var()
                    )));
                }
            }
        }
        Ok(Assignment { bindings })
    }

    pub fn value(&self, v: VarId) -> Option<bool> {
        self.bindings.get(&v).copied()
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.bindings.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.bindings.keys().copied()
    }

    pub fn var_set(&self) -> BTreeSet<VarId> {
        self.bindings.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    pub fn bind(&mut self, v: VarId, value: bool) -> Result<()> {
        if let Some(prev) = self.bindings.insert(v, value) {
            if prev != value {
                return Err(Error::invalid(format!(
                    "variable {v} bound twice with different values"
                )));
            }
        }
        Ok(())
    }

    /// Union of two assignments; disagreement on a shared variable is an error.
    pub fn union(&self, other: &Assignment) -> Result<Assignment> {
        let mut out = self.clone();
        for (v, b) in other.iter() {
            out.bind(v, b)?;
        }
        Ok(out)
    }

    /// Projection to a variable set.
    pub fn project(&self, vars: &BTreeSet<VarId>) -> Assignment {
        Assignment {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(&v, &b)| (v, b))
                .collect(),
        }
    }

    pub fn agrees_with(&self, other: &Assignment, on: &BTreeSet<VarId>) -> bool {
        on.iter().all(|v| self.value(*v) == other.value(*v))
    }

    /// Signed-integer rendering, sorted by variable.
    pub fn to_dimacs(&self) -> Vec<i64> {
        self.iter()
            .map(|(v, b)| Literal::new(v, b).to_dimacs())
            .collect()
    }

    pub fn from_dimacs(lits: &[i64]) -> Result<Self> {
        let lits = lits
            .iter()
            .map(|&l| Literal::from_dimacs(l))
            .collect::<Result<Vec<_>>>()?;
        Assignment::from_literals(lits)
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dimacs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lits = Vec::<i64>::deserialize(d)?;
        Assignment::from_dimacs(&lits).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, b) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", Literal::new(v, b))?;
            first = false;
        }
        Ok(())
    }
}

/// A closed prenex QCNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qcnf {
    pub prefix: Prefix,
    pub matrix: Vec<Clause>,
    /// Optional display names for generated families.
    pub names: Option<BTreeMap<VarId, String>>,
}

impl Qcnf {
    /// Requires `vars(matrix) ⊆ vars(prefix)`.
    pub fn new(prefix: Prefix, matrix: Vec<Clause>) -> Result<Self> {
        let pvars = prefix.var_set();
        for c in &matrix {
            for v in c.vars() {
                if !pvars.contains(&v) {
                    return Err(Error::invalid(format!(
                        "matrix variable {v} is not quantified"
                    )));
                }
            }
        }
        Ok(Qcnf {
            prefix,
            matrix,
            names: None,
        })
    }

    pub fn with_names(mut self, names: BTreeMap<VarId, String>) -> Self {
        self.names = Some(names);
        self
    }

    pub fn var_count(&self) -> usize {
        self.prefix.var_count()
    }

    pub fn max_var(&self) -> u32 {
        self.prefix.vars().map(VarId::get).max().unwrap_or(0)
    }

    /// True iff every clause is satisfied; `tau` must be total on the matrix
    /// variables. The empty matrix evaluates to true.
    pub fn eval_matrix(&self, tau: &Assignment) -> Result<bool> {
        for c in &self.matrix {
            if !c.eval(tau)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction `Φ[τ]`: assigned variables leave the prefix, satisfied
    /// clauses leave the matrix, falsified literals leave their clauses.
    /// Unknown variables in `tau` are an error.
    pub fn restrict(&self, tau: &Assignment) -> Result<Qcnf> {
        let pvars = self.prefix.var_set();
        for v in tau.vars() {
            if !pvars.contains(&v) {
                return Err(Error::invalid(format!(
                    "unknown variable {v} in restriction"
                )));
            }
        }
        let prefix = self.prefix.without_vars(&tau.var_set());
        let mut matrix = Vec::with_capacity(self.matrix.len());
        for c in &self.matrix {
            match c.restrict(tau) {
                RestrictedClause::Satisfied => {}
                RestrictedClause::Clause(c) => matrix.push(c),
            }
        }
        Ok(Qcnf {
            prefix,
            matrix,
            names: self.names.clone(),
        })
    }

    pub fn has_empty_clause(&self) -> bool {
        self.matrix.iter().any(Clause::is_empty)
    }
}

/// The `2^|vars|` total assignments to `vars`, in lexicographic order of the
/// binary counter over the sorted variable ids (first variable is the most
/// significant bit).
#[derive(Debug, Clone)]
pub struct AssignmentSpace {
    vars: Vec<VarId>,
}

impl AssignmentSpace {
    pub fn new(vars: impl IntoIterator<Item = VarId>) -> Self {
        let mut vars: Vec<VarId> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        AssignmentSpace { vars }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn len(&self) -> u64 {
        1u64 << self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the empty variable set still has one (empty) assignment
    }

    /// The `index`-th assignment in enumeration order.
    pub fn assignment(&self, index: u64) -> Assignment {
        let n = self.vars.len();
        debug_assert!(index < self.len());
        Assignment::from_pairs(
            self.vars
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, (index >> (n - 1 - i)) & 1 == 1)),
        )
    }

    /// Position of a total assignment in enumeration order.
    pub fn index_of(&self, tau: &Assignment) -> Option<u64> {
        let n = self.vars.len();
        let mut idx = 0u64;
        for (i, &v) in self.vars.iter().enumerate() {
            {
                let b = tau.value(v)?;
                idx |= (b as u64) << (n - 1 - i)
            }
        }
        Some(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.len()).map(move |i| self.assignment(i))
    }
}

/// Materialises the assignment space, guarded by `cap` on the variable count.
pub fn enumerate_assignments(
    vars: impl IntoIterator<Item = VarId>,
    cap: u32,
) -> Result<Vec<Assignment>> {
    let space = AssignmentSpace::new(vars);
    if space.vars().len() as u64 > cap as u64 {
        return Err(Error::CapExceeded {
            what: "assignment enumeration variables",
            actual: space.vars().len() as u64,
            limit: cap as u64,
        });
    }
    Ok(space.iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: u32) -> VarId {
        VarId::new(id)
    }

    fn lit(l: i64) -> Literal {
        Literal::from_dimacs(l).unwrap()
    }

    fn clause(ls: &[i64]) -> Clause {
        Clause::from_dimacs(ls).unwrap()
    }

    #[test]
    fn clause_restrict_drops_falsified() {
        // {x1, u1, ¬t1}[x1 ↦ 0] = {u1, ¬t1}
        let c = clause(&[1, 2, -3]);
        let tau = Assignment::from_pairs([(v(1), false)]);
        assert_eq!(c.restrict(&tau), RestrictedClause::Clause(clause(&[2, -3])));
    }

    #[test]
    fn clause_restrict_satisfied() {
        let c = clause(&[1, 2, -3]);
        let tau = Assignment::from_pairs([(v(1), true)]);
        assert_eq!(c.restrict(&tau), RestrictedClause::Satisfied);
    }

    #[test]
    fn clause_restrict_identity_on_empty() {
        let c = clause(&[3]);
        assert_eq!(
            c.restrict(&Assignment::empty()),
            RestrictedClause::Clause(c.clone())
        );
    }

    #[test]
    fn tautology_flagged() {
        assert!(clause(&[1, -1, 2]).is_tautology());
        assert!(!clause(&[1, 2]).is_tautology());
    }

    #[test]
    fn empty_matrix_is_true() {
        let q = Qcnf::new(
            Prefix::new(vec![Block::new(Quantifier::Exists, [v(1)])]).unwrap(),
            vec![],
        )
        .unwrap();
        let tau = Assignment::from_pairs([(v(1), false)]);
        assert!(q.eval_matrix(&tau).unwrap());
    }

    #[test]
    fn eval_matrix_requires_total() {
        let q = Qcnf::new(
            Prefix::new(vec![Block::new(Quantifier::Exists, [v(1), v(2)])]).unwrap(),
            vec![clause(&[1, 2])],
        )
        .unwrap();
        let tau = Assignment::from_pairs([(v(1), false)]);
        assert!(q.eval_matrix(&tau).is_err());
    }

    #[test]
    fn restrict_unknown_var_rejected() {
        let q = Qcnf::new(
            Prefix::new(vec![Block::new(Quantifier::Exists, [v(1)])]).unwrap(),
            vec![clause(&[1])],
        )
        .unwrap();
        let tau = Assignment::from_pairs([(v(9), true)]);
        assert!(q.restrict(&tau).is_err());
    }

    #[test]
    fn restrict_keeps_empty_clause() {
        let q = Qcnf::new(
            Prefix::new(vec![Block::new(Quantifier::Exists, [v(1)])]).unwrap(),
            vec![clause(&[1])],
        )
        .unwrap();
        let r = q
            .restrict(&Assignment::from_pairs([(v(1), false)]))
            .unwrap();
        assert!(r.has_empty_clause());
        assert!(r.prefix.is_empty());
    }

    #[test]
    fn restriction_composes() {
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(Quantifier::Exists, [v(1), v(2)]),
                Block::new(Quantifier::Forall, [v(3)]),
            ])
            .unwrap(),
            vec![clause(&[1, 3]), clause(&[-2, -3]), clause(&[1, 2])],
        )
        .unwrap();
        let t1 = Assignment::from_pairs([(v(1), false)]);
        let t2 = Assignment::from_pairs([(v(3), true)]);
        let both = t1.union(&t2).unwrap();
        assert_eq!(
            q.restrict(&t1).unwrap().restrict(&t2).unwrap(),
            q.restrict(&both).unwrap()
        );
    }

    #[test]
    fn enumerate_counts_and_order() {
        let asg = enumerate_assignments([v(2)], 24).unwrap();
        assert_eq!(
            asg,
            vec![
                Assignment::from_pairs([(v(2), false)]),
                Assignment::from_pairs([(v(2), true)]),
            ]
        );
        let empty = enumerate_assignments([], 24).unwrap();
        assert_eq!(empty, vec![Assignment::empty()]);
        let three = enumerate_assignments([v(1), v(2), v(3)], 24).unwrap();
        assert_eq!(three.len(), 8);
        let set: std::collections::BTreeSet<_> = three.iter().collect();
        assert_eq!(set.len(), 8);
        // lexicographic: first variable is the most significant bit
        assert_eq!(
            three[1],
            Assignment::from_pairs([(v(1), false), (v(2), false), (v(3), true)])
        );
    }

    #[test]
    fn enumerate_cap() {
        let vars: Vec<VarId> = (1..=30).map(v).collect();
        assert!(matches!(
            enumerate_assignments(vars, 24),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn equality_restriction_examples() {
        // EQ(1)[x1 -> 1, u1 -> 1]: matrix {~t1},{t1} under prefix exists t1
        let q = crate::gen::equality(1).unwrap();
        let tau = Assignment::from_pairs([(v(1), true), (v(2), true)]);
        let r = q.restrict(&tau).unwrap();
        assert_eq!(r.matrix, vec![clause(&[-3]), clause(&[3])]);
        assert_eq!(r.prefix.blocks().len(), 1);
        assert_eq!(r.prefix.blocks()[0].vars(), &[v(3)]);
        // EQ(1)[x1 -> 1, u1 -> 0, t1 -> 1]: everything satisfied
        let tau = Assignment::from_pairs([(v(1), true), (v(2), false), (v(3), true)]);
        let r = q.restrict(&tau).unwrap();
        assert!(r.matrix.is_empty());
        // identity on the empty assignment
        assert_eq!(q.restrict(&Assignment::empty()).unwrap(), q);
    }

    #[test]
    fn equality_matrix_eval_examples() {
        let q = crate::gen::equality(1).unwrap();
        let falsified = Assignment::from_pairs([(v(1), false), (v(2), false), (v(3), true)]);
        assert!(!q.eval_matrix(&falsified).unwrap());
        let satisfied = Assignment::from_pairs([(v(1), false), (v(2), true), (v(3), true)]);
        assert!(q.eval_matrix(&satisfied).unwrap());
    }

    #[test]
    fn prefix_merge_and_drop() {
        let p = Prefix::new(vec![
            Block::new(Quantifier::Exists, [v(1)]),
            Block::new(Quantifier::Exists, [v(2)]),
            Block::new(Quantifier::Forall, [v(3)]),
        ])
        .unwrap();
        let n = p.normalized();
        assert_eq!(n.blocks().len(), 2);
        assert_eq!(n.blocks()[0].vars(), &[v(1), v(2)]);

        let dropped = p.without_vars(&[v(1)].into_iter().collect());
        assert_eq!(dropped.blocks().len(), 2);
        assert_eq!(dropped.blocks()[0].vars(), &[v(2)]);
    }
}
