//! Polynomial calculus with resolution and universal reduction.
//!
//! Lines are polynomials over a configurable field (exact rationals by
//! default, or a prime field chosen by flag) in twin variables: each Boolean
//! variable `x` has algebraic variables `x` and `x̄`. Boolean true maps the
//! plain algebraic variable to 0 (the usual swap for algebraic systems), and
//! `x̄ = 1 − x` is enforced by explicit complementarity axioms inside proofs
//! but used directly by evaluation and restriction.
//!
//! Rules: clause axioms (one monomial per clause), Boolean axioms `v² − v`,
//! complementarity axioms `x + x̄ − 1`, field-linear combination,
//! multiplication by a single algebraic variable, and universal reduction on
//! the line's rightmost block. A refutation derives the constant polynomial
//! 1. Proof size is the total monomial count across all lines; there is no
//! implicit multilinearization.

mod from_qures;
mod response;
mod text;

pub use from_qures::pcr_from_qures;
pub use response::{greedy_response, u_monomial_count};
pub(crate) use text::parse_poly as text_parse_poly;
pub use text::{parse_pcr, write_pcr};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::caps::Caps;
use crate::error::{CheckKind, Error, Result};
use crate::qcnf::{Assignment, Clause, Literal, Qcnf, VarId};

/// Which field the proof works over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldTag {
    Rational,
    /// GF(p) for a prime p.
    Prime(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// An exact field element: a rational, or a residue modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    Mod { p: u64, value: u64 },
}

impl FieldElem {
    pub fn zero(tag: FieldTag) -> Self {
        FieldElem::from_i64(tag, 0)
    }

    pub fn one(tag: FieldTag) -> Self {
        FieldElem::from_i64(tag, 1)
    }

    pub fn from_i64(tag: FieldTag, n: i64) -> Self {
        match tag {
            FieldTag::Rational => FieldElem::Rat(BigRational::from(BigInt::from(n))),
            FieldTag::Prime(p) => FieldElem::Mod {
                p,
                value: n.rem_euclid(p as i64) as u64,
            },
        }
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            FieldElem::Rat(_) => FieldTag::Rational,
            FieldElem::Mod { p, .. } => FieldTag::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &FieldElem) -> std::result::Result<FieldElem, CheckKind> {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => Ok(FieldElem::Rat(a + b)),
            (FieldElem::Mod { p, value: a }, FieldElem::Mod { p: q, value: b }) if p == q => {
                Ok(FieldElem::Mod {
                    p: *p,
                    value: (a + b) % p,
                })
            }
            _ => Err(CheckKind::FieldMismatch),
        }
    }

    pub fn mul(&self, other: &FieldElem) -> std::result::Result<FieldElem, CheckKind> {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => Ok(FieldElem::Rat(a * b)),
            (FieldElem::Mod { p, value: a }, FieldElem::Mod { p: q, value: b }) if p == q => {
                Ok(FieldElem::Mod {
                    p: *p,
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                })
            }
            _ => Err(CheckKind::FieldMismatch),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod { p, value } => FieldElem::Mod {
                p: *p,
                value: (*p - *value) % *p,
            },
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

/// A plain (`x`) or barred (`x̄`) algebraic variable over a Boolean base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraicVar {
    base: VarId,
    barred: bool,
}

impl AlgebraicVar {
    pub fn plain(base: VarId) -> Self {
        AlgebraicVar {
            base,
            barred: false,
        }
    }

    pub fn barred(base: VarId) -> Self {
        AlgebraicVar { base, barred: true }
    }

    /// The algebraic variable whose value is 0 exactly when `lit` is true.
    pub fn for_literal(lit: Literal) -> Self {
        if lit.is_positive() {
            AlgebraicVar::plain(lit.var())
        } else {
            AlgebraicVar::barred(lit.var())
        }
    }

    pub fn base(self) -> VarId {
        self.base
    }

    pub fn is_barred(self) -> bool {
        self.barred
    }

    /// Value under a Boolean assignment: plain `x` is `1 − τ(x)`, barred is
    /// `τ(x)`.
    pub fn bool_value(self, value: bool) -> u8 {
        match (self.barred, value) {
            (false, true) | (true, false) => 0,
            (false, false) | (true, true) => 1,
        }
    }
}

impl fmt::Display for AlgebraicVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "~v{}", self.base)
        } else {
            write!(f, "v{}", self.base)
        }
    }
}

/// A power product of algebraic variables; exponents are at least 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    powers: BTreeMap<AlgebraicVar, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: AlgebraicVar) -> Self {
        Monomial {
            powers: [(v, 1)].into_iter().collect(),
        }
    }

    pub fn from_vars(vars: impl IntoIterator<Item = AlgebraicVar>) -> Self {
        let mut m = Monomial::one();
        for v in vars {
            m = m.times_var(v);
        }
        m
    }

    pub fn times_var(&self, v: AlgebraicVar) -> Monomial {
        let mut powers = self.powers.clone();
        *powers.entry(v).or_insert(0) += 1;
        Monomial { powers }
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut powers = self.powers.clone();
        for (v, e) in &other.powers {
            *powers.entry(*v).or_insert(0) += e;
        }
        Monomial { powers }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn powers(&self) -> impl Iterator<Item = (AlgebraicVar, u32)> + '_ {
        self.powers.iter().map(|(&v, &e)| (v, e))
    }

    pub fn algebraic_vars(&self) -> impl Iterator<Item = AlgebraicVar> + '_ {
        self.powers.keys().copied()
    }

    pub fn base_vars(&self) -> BTreeSet<VarId> {
        self.powers.keys().map(|v| v.base()).collect()
    }

    /// Splits into the sub-monomial over `u_vars` bases and the rest.
    pub fn split(&self, u_vars: &BTreeSet<VarId>) -> (Monomial, Monomial) {
        let mut u = Monomial::one();
        let mut x = Monomial::one();
        for (v, e) in &self.powers {
            let part = if u_vars.contains(&v.base()) {
                &mut u
            } else {
                &mut x
            };
            part.powers.insert(*v, *e);
        }
        (u, x)
    }

    /// 0/1 value under a total Boolean assignment to its base variables.
    pub fn eval_bool(&self, tau: &Assignment) -> Result<u8> {
        for v in self.powers.keys() {
            let b = tau.value(v.base()).ok_or_else(|| {
                Error::invalid(format!(
                    "partial assignment: variable {} unassigned",
                    v.base()
                ))
            })?;
            if v.bool_value(b) == 0 {
                return Ok(0);
            }
        }
        Ok(1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.powers {
            if !first {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// A polynomial: canonicalized map from monomials to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    field: FieldTag,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl Polynomial {
    pub fn zero(field: FieldTag) -> Self {
        Polynomial {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem) -> Self {
        let mut p = Polynomial::zero(c.tag());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(field: FieldTag) -> Self {
        Polynomial::constant(FieldElem::one(field))
    }

    pub fn from_terms(
        field: FieldTag,
        terms: impl IntoIterator<Item = (Monomial, FieldElem)>,
    ) -> std::result::Result<Self, CheckKind> {
        let mut p = Polynomial::zero(field);
        for (m, c) in terms {
            p.add_term(&m, &c)?;
        }
        Ok(p)
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .is_some_and(FieldElem::is_one)
    }

    fn add_term(&mut self, m: &Monomial, c: &FieldElem) -> std::result::Result<(), CheckKind> {
        if c.tag() != self.field {
            return Err(CheckKind::FieldMismatch);
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(m) {
            Some(existing) => {
                let sum = existing.add(c)?;
                if sum.is_zero() {
                    self.terms.remove(m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn combine(
        &self,
        a: &FieldElem,
        other: &Polynomial,
        b: &FieldElem,
    ) -> std::result::Result<Polynomial, CheckKind> {
        if other.field != self.field || a.tag() != self.field || b.tag() != self.field {
            return Err(CheckKind::FieldMismatch);
        }
        let mut out = Polynomial::zero(self.field);
        for (m, c) in &self.terms {
            out.add_term(m, &c.mul(a)?)?;
        }
        for (m, c) in &other.terms {
            out.add_term(m, &c.mul(b)?)?;
        }
        Ok(out)
    }

    /// Multiplication by one algebraic variable.
    pub fn times_var(&self, v: AlgebraicVar) -> Polynomial {
        let mut out = Polynomial::zero(self.field);
        for (m, c) in &self.terms {
            out.terms.insert(m.times_var(v), c.clone());
        }
        out
    }

    pub fn base_vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.base_vars()).collect()
    }

    /// Substitutes Boolean values: `u ↦ b` sets algebraic `u := 1−b` and
    /// `ū := b`, killing or shortening monomials.
    pub fn substitute(&self, tau: &Assignment) -> Polynomial {
        let mut out = Polynomial::zero(self.field);
        'terms: for (m, c) in &self.terms {
            let mut reduced = Monomial::one();
            for (v, e) in m.powers() {
                match tau.value(v.base()) {
                    Some(b) => {
                        if v.bool_value(b) == 0 {
                            continue 'terms; // the whole monomial vanishes
                        }
                        // value 1: the variable drops out
                    }
                    None => {
                        for _ in 0..e {
                            reduced = reduced.times_var(v);
                        }
                    }
                }
            }
            out.add_term(&reduced, c).expect("same field");
        }
        out
    }

    /// Field value under a total Boolean assignment to the base variables;
    /// the line "holds" iff the value is zero.
    pub fn eval_bool(&self, tau: &Assignment) -> Result<FieldElem> {
        let mut acc = FieldElem::zero(self.field);
        for (m, c) in &self.terms {
            if m.eval_bool(tau)? == 1 {
                acc = acc.add(c).map_err(|_| Error::invalid("field mismatch"))?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {m}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Clause encoding `∏_{l∈C} t(l)` with `t(x) = x`, `t(¬x) = x̄`: exactly one
/// monomial, which vanishes iff the clause is satisfied.
pub fn encode_clause(c: &Clause, field: FieldTag) -> Polynomial {
    let m = Monomial::from_vars(c.literals().iter().map(|&l| AlgebraicVar::for_literal(l)));
    Polynomial::from_terms(field, [(m, FieldElem::one(field))]).expect("single field")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PcrJust {
    /// Encoding of matrix clause `k`.
    AxiomClause(usize),
    /// `v² − v` for an algebraic variable.
    BoolAx(AlgebraicVar),
    /// `x + x̄ − 1` for a Boolean variable.
    CompAx(VarId),
    /// `a·L_left + b·L_right`.
    Lin {
        left: u64,
        left_scale: FieldElem,
        right: u64,
        right_scale: FieldElem,
    },
    /// `v · L_source`.
    Mul { source: u64, var: AlgebraicVar },
    /// Universal reduction by a Boolean assignment to (part of) the line's
    /// rightmost block.
    Reduce { source: u64, beta: Assignment },
}

impl PcrJust {
    pub fn antecedents(&self) -> Vec<u64> {
        match self {
            PcrJust::AxiomClause(_) | PcrJust::BoolAx(_) | PcrJust::CompAx(_) => vec![],
            PcrJust::Lin { left, right, .. } => vec![*left, *right],
            PcrJust::Mul { source, .. } | PcrJust::Reduce { source, .. } => vec![*source],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcrStep {
    pub id: u64,
    pub poly: Polynomial,
    pub just: PcrJust,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcrProof {
    pub field: FieldTag,
    pub steps: Vec<PcrStep>,
    pub conclusion: u64,
}

impl PcrProof {
    /// Proof size: total monomial count across all lines.
    pub fn size(&self) -> usize {
        self.steps.iter().map(|s| s.poly.monomial_count()).sum()
    }

    pub fn max_line_monomials(&self) -> usize {
        self.steps
            .iter()
            .map(|s| s.poly.monomial_count())
            .max()
            .unwrap_or(0)
    }

    pub fn step(&self, id: u64) -> Option<&PcrStep> {
        self.steps.iter().find(|s| s.id == id)
    }
}

/// Checks a refutation: every step's polynomial recomputed over the proof's
/// field, conclusion the constant polynomial 1.
pub fn check(qcnf: &Qcnf, proof: &PcrProof) -> Result<()> {
    let field = proof.field;
    let pvars = qcnf.prefix.var_set();
    let mut seen: BTreeMap<u64, &Polynomial> = BTreeMap::new();
    for step in &proof.steps {
        if seen.contains_key(&step.id) {
            return Err(Error::check(step.id, CheckKind::DuplicateId));
        }
        if step.poly.field() != field {
            return Err(Error::check(step.id, CheckKind::FieldMismatch));
        }
        let antecedent = |id: u64| -> Result<&Polynomial> {
            seen.get(&id)
                .copied()
                .ok_or_else(|| Error::check(step.id, CheckKind::DanglingRef(id)))
        };
        let expected = match &step.just {
            PcrJust::AxiomClause(k) => {
                let c = qcnf
                    .matrix
                    .get(*k)
                    .ok_or_else(|| Error::check(step.id, CheckKind::AxiomOutOfRange(*k)))?;
                encode_clause(c, field)
            }
            PcrJust::BoolAx(v) => {
                if !pvars.contains(&v.base()) {
                    return Err(Error::check(step.id, CheckKind::UnknownVar(v.base().get())));
                }
                let sq = Monomial::var(*v).times_var(*v);
                Polynomial::from_terms(
                    field,
                    [
                        (sq, FieldElem::one(field)),
                        (Monomial::var(*v), FieldElem::one(field).neg()),
                    ],
                )
                .map_err(|kind| Error::check(step.id, kind))?
            }
            PcrJust::CompAx(x) => {
                if !pvars.contains(x) {
                    return Err(Error::check(step.id, CheckKind::UnknownVar(x.get())));
                }
                Polynomial::from_terms(
                    field,
                    [
                        (
                            Monomial::var(AlgebraicVar::plain(*x)),
                            FieldElem::one(field),
                        ),
                        (
                            Monomial::var(AlgebraicVar::barred(*x)),
                            FieldElem::one(field),
                        ),
                        (Monomial::one(), FieldElem::one(field).neg()),
                    ],
                )
                .map_err(|kind| Error::check(step.id, kind))?
            }
            PcrJust::Lin {
                left,
                left_scale,
                right,
                right_scale,
            } => antecedent(*left)?
                .combine(left_scale, antecedent(*right)?, right_scale)
                .map_err(|kind| Error::check(step.id, kind))?,
            PcrJust::Mul { source, var } => {
                if !pvars.contains(&var.base()) {
                    return Err(Error::check(
                        step.id,
                        CheckKind::UnknownVar(var.base().get()),
                    ));
                }
                antecedent(*source)?.times_var(*var)
            }
            PcrJust::Reduce { source, beta } => {
                let src = antecedent(*source)?;
                crate::cp::check_reduce_block(qcnf, &src.base_vars(), beta)
                    .map_err(|kind| Error::check(step.id, kind))?;
                src.substitute(beta)
            }
        };
        if expected != step.poly {
            return Err(Error::check(step.id, CheckKind::LineMismatch));
        }
        seen.insert(step.id, &step.poly);
    }
    match proof.step(proof.conclusion) {
        Some(s) if s.poly.is_constant_one() => Ok(()),
        Some(_) => Err(Error::check(proof.conclusion, CheckKind::WrongConclusion)),
        None => Err(Error::check(
            proof.conclusion,
            CheckKind::DanglingRef(proof.conclusion),
        )),
    }
}

/// Exhaustive per-step soundness audit: common Boolean zeros of the
/// antecedents are zeros of the derived line; reduction audited via the
/// restriction semantics.
pub fn audit_soundness(_qcnf: &Qcnf, proof: &PcrProof, caps: &Caps) -> Result<()> {
    let mut seen: BTreeMap<u64, &Polynomial> = BTreeMap::new();
    for step in &proof.steps {
        let ante_ids = step.just.antecedents();
        if ante_ids.is_empty() {
            // axioms are validated syntactically; Boolean and
            // complementarity axioms vanish on every Boolean assignment by
            // construction
            seen.insert(step.id, &step.poly);
            continue;
        }
        let antes: Vec<&Polynomial> = ante_ids.iter().map(|id| seen[id]).collect();
        let mut vars = step.poly.base_vars();
        for a in &antes {
            vars.extend(a.base_vars());
        }
        caps.check_vars("pcr audit variables", vars.len())?;
        let reduction_beta = match &step.just {
            PcrJust::Reduce { beta, .. } => Some(beta.clone()),
            _ => None,
        };
        let space = crate::qcnf::AssignmentSpace::new(vars.iter().copied());
        for tau in space.iter() {
            match &reduction_beta {
                Some(beta) => {
                    let overwritten = Assignment::from_pairs(
                        tau.iter().map(|(w, val)| (w, beta.value(w).unwrap_or(val))),
                    );
                    if step.poly.eval_bool(&tau)? != antes[0].eval_bool(&overwritten)? {
                        return Err(Error::check(step.id, CheckKind::LineMismatch));
                    }
                }
                None => {
                    let all_zero = antes
                        .iter()
                        .map(|a| a.eval_bool(&tau).map(|v| v.is_zero()))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .all(|b| b);
                    if all_zero && !step.poly.eval_bool(&tau)?.is_zero() {
                        return Err(Error::check(step.id, CheckKind::NotEntailed));
                    }
                }
            }
        }
        seen.insert(step.id, &step.poly);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::qcnf::{Block, Prefix, Quantifier};

    fn v(id: u32) -> VarId {
        VarId::new(id)
    }

    fn rat(n: i64) -> FieldElem {
        FieldElem::from_i64(FieldTag::Rational, n)
    }

    #[test]
    fn encode_single_monomial() {
        // {¬x1, ¬x2} → x̄1·x̄2, one monomial
        let c = Clause::from_dimacs(&[-1, -2]).unwrap();
        let p = encode_clause(&c, FieldTag::Rational);
        assert_eq!(p.monomial_count(), 1);
        let m = Monomial::from_vars([AlgebraicVar::barred(v(1)), AlgebraicVar::barred(v(2))]);
        assert_eq!(p.terms().next().unwrap().0, &m);
        // {t1} → t1
        let unit = encode_clause(&Clause::from_dimacs(&[3]).unwrap(), FieldTag::Rational);
        assert_eq!(unit.monomial_count(), 1);
        // {x1, u1, ¬t1} → x1·u1·t̄1
        let mixed = encode_clause(
            &Clause::from_dimacs(&[1, 2, -3]).unwrap(),
            FieldTag::Rational,
        );
        let mm = Monomial::from_vars([
            AlgebraicVar::plain(v(1)),
            AlgebraicVar::plain(v(2)),
            AlgebraicVar::barred(v(3)),
        ]);
        assert_eq!(mixed.terms().next().unwrap().0, &mm);
    }

    #[test]
    fn mul_and_lin() {
        // (x + x̄ − 1)·x = x² + x·x̄ − x
        let comp = Polynomial::from_terms(
            FieldTag::Rational,
            [
                (Monomial::var(AlgebraicVar::plain(v(1))), rat(1)),
                (Monomial::var(AlgebraicVar::barred(v(1))), rat(1)),
                (Monomial::one(), rat(-1)),
            ],
        )
        .unwrap();
        let prod = comp.times_var(AlgebraicVar::plain(v(1)));
        assert_eq!(prod.monomial_count(), 3);
        // 2x + (−2)x = 0
        let x = Polynomial::from_terms(
            FieldTag::Rational,
            [(Monomial::var(AlgebraicVar::plain(v(1))), rat(1))],
        )
        .unwrap();
        let zero = x.combine(&rat(2), &x, &rat(-2)).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn reduce_substitution_convention() {
        // x·ū + x̄·u under Boolean u ↦ 0: algebraic u := 1, ū := 0, giving x̄
        // (which vanishes exactly when Boolean x is 0, matching the
        // restriction of "x equals u" by u = 0)
        let p = Polynomial::from_terms(
            FieldTag::Rational,
            [
                (
                    Monomial::from_vars([AlgebraicVar::plain(v(1)), AlgebraicVar::barred(v(2))]),
                    rat(1),
                ),
                (
                    Monomial::from_vars([AlgebraicVar::barred(v(1)), AlgebraicVar::plain(v(2))]),
                    rat(1),
                ),
            ],
        )
        .unwrap();
        let beta = Assignment::from_pairs([(v(2), false)]);
        let reduced = p.substitute(&beta);
        let expected = Polynomial::from_terms(
            FieldTag::Rational,
            [(Monomial::var(AlgebraicVar::barred(v(1))), rat(1))],
        )
        .unwrap();
        assert_eq!(reduced, expected);
        // restrictive closure: the substituted line computes the restricted
        // Boolean function
        for a in [false, true] {
            let tau = Assignment::from_pairs([(v(1), a)]);
            let full = tau.union(&beta).unwrap();
            assert_eq!(
                reduced.eval_bool(&tau).unwrap().is_zero(),
                p.eval_bool(&full).unwrap().is_zero()
            );
        }
    }

    #[test]
    fn eval_convention() {
        // encode({x}) is 0 when x is true
        let p = encode_clause(&Clause::from_dimacs(&[1]).unwrap(), FieldTag::Rational);
        let tau = Assignment::from_pairs([(v(1), true)]);
        assert!(p.eval_bool(&tau).unwrap().is_zero());
        // x·ū + x̄·u is 0 iff x = u
        let xor = Polynomial::from_terms(
            FieldTag::Rational,
            [
                (
                    Monomial::from_vars([AlgebraicVar::plain(v(1)), AlgebraicVar::barred(v(2))]),
                    rat(1),
                ),
                (
                    Monomial::from_vars([AlgebraicVar::barred(v(1)), AlgebraicVar::plain(v(2))]),
                    rat(1),
                ),
            ],
        )
        .unwrap();
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let tau = Assignment::from_pairs([(v(1), a), (v(2), b)]);
            let val = xor.eval_bool(&tau).unwrap();
            assert_eq!(val.is_zero(), a == b);
            if a != b {
                assert!(val.is_one());
            }
        }
        // the constant 1 never holds
        assert!(Polynomial::one(FieldTag::Rational)
            .eval_bool(&Assignment::empty())
            .unwrap()
            .is_one());
    }

    #[test]
    fn pcr_refutation_of_equality_via_translation() {
        for field in [FieldTag::Rational, FieldTag::Prime(2), FieldTag::Prime(5)] {
            let q = gen::equality(2).unwrap();
            let qp = crate::qures::prove_saturate(&q, &Caps::default(), crate::qures::Mode::QuRes)
                .unwrap()
                .unwrap();
            let pcr = pcr_from_qures(&q, &qp, field).unwrap();
            check(&q, &pcr).unwrap();
            audit_soundness(&q, &pcr, &Caps::default()).unwrap();
            assert!(pcr.size() >= qp.size());
        }
    }

    #[test]
    fn gf2_arithmetic() {
        let one = FieldElem::from_i64(FieldTag::Prime(2), 1);
        assert!(one.add(&one).unwrap().is_zero());
        assert!(one.neg().is_one());
        assert!(one.add(&rat(1)).is_err());
    }

    #[test]
    fn reduce_needs_rightmost_block() {
        let q = Qcnf::new(
            Prefix::new(vec![
                Block::new(Quantifier::Forall, [v(1)]),
                Block::new(Quantifier::Exists, [v(2)]),
            ])
            .unwrap(),
            vec![Clause::from_dimacs(&[1, 2]).unwrap()],
        )
        .unwrap();
        let field = FieldTag::Rational;
        let ax = encode_clause(&q.matrix[0], field);
        let proof = PcrProof {
            field,
            steps: vec![
                PcrStep {
                    id: 1,
                    poly: ax.clone(),
                    just: PcrJust::AxiomClause(0),
                },
                PcrStep {
                    id: 2,
                    poly: ax.substitute(&Assignment::from_pairs([(v(1), false)])),
                    just: PcrJust::Reduce {
                        source: 1,
                        beta: Assignment::from_pairs([(v(1), false)]),
                    },
                },
            ],
            conclusion: 2,
        };
        // u is not rightmost (the existential is right of it)
        let err = check(&q, &proof).unwrap_err();
        assert!(matches!(
            err,
            Error::Check {
                step: 2,
                kind: CheckKind::ReduceNotRightmost
            }
        ));
    }
}
