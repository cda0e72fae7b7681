//! The greedy response map for reducible PCR lines.
//!
//! Writing the line as `Σ f_j·v_j` with `v_j` the distinct monomials over
//! the rightmost (universal) block, two responses that evaluate the `v_j`
//! identically falsify the same restrictions, and the greedy construction's
//! fresh responses have linearly independent evaluation vectors. Its range
//! is therefore at most the number of distinct `v_j`, which is at most the
//! line's monomial count.

use std::collections::{BTreeMap, BTreeSet};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::qcnf::{Assignment, AssignmentSpace, Qcnf, Quantifier, VarId};

use super::Polynomial;

/// The number of distinct monomials over the rightmost-block variables.
pub fn u_monomial_count(qcnf: &Qcnf, poly: &Polynomial) -> Result<usize> {
    let (u_vars, _) = reducible_split(qcnf, poly)?;
    let mut distinct = BTreeSet::new();
    for (m, _) in poly.terms() {
        let (u, _) = m.split(&u_vars);
        distinct.insert(u);
    }
    Ok(distinct.len())
}

/// Greedy response map construction: enumerate the outer assignments in
/// canonical order; reuse the earliest previously chosen falsifying
/// response, otherwise pick the first fresh falsifying one; tautological
/// restrictions map to the first chosen response.
pub fn greedy_response(
    qcnf: &Qcnf,
    poly: &Polynomial,
    caps: &Caps,
) -> Result<BTreeMap<Assignment, Assignment>> {
    let (u_vars, x_vars) = reducible_split(qcnf, poly)?;
    caps.check_vars("response map outer variables", x_vars.len())?;
    caps.check_vars("response map block variables", u_vars.len())?;

    let x_space = AssignmentSpace::new(x_vars.iter().copied());
    let u_space = AssignmentSpace::new(u_vars.iter().copied());

    let mut chosen: Vec<Assignment> = Vec::new(); // in choice order
    let mut table: BTreeMap<Assignment, Assignment> = BTreeMap::new();
    let mut pending_taut: Vec<Assignment> = Vec::new();

    for alpha in x_space.iter() {
        let restricted = poly.substitute(&alpha);
        // find a falsifying response: value non-zero
        let falsifies =
            |beta: &Assignment| -> Result<bool> { Ok(!restricted.eval_bool(beta)?.is_zero()) };
        if let Some(beta) = chosen
            .iter()
            .map(|b| falsifies(b).map(|ok| (b, ok)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find_map(|(b, ok)| ok.then(|| b.clone()))
        {
            table.insert(alpha, beta);
            continue;
        }
        let mut fresh = None;
        for beta in u_space.iter() {
            if falsifies(&beta)? {
                fresh = Some(beta);
                break;
            }
        }
        match fresh {
            Some(beta) => {
                chosen.push(beta.clone());
                table.insert(alpha, beta);
            }
            None => {
                // tautological restriction: defer until a response exists
                pending_taut.push(alpha);
            }
        }
    }
    let default = match chosen.first() {
        Some(b) => b.clone(),
        // the whole line is a tautology: any constant map works
        None => u_space.assignment(0),
    };
    for alpha in pending_taut {
        table.insert(alpha, default.clone());
    }
    Ok(table)
}

/// Splits the line's base variables into the rightmost (universal) block
/// part and the rest; errors when the line is not reducible.
fn reducible_split(qcnf: &Qcnf, poly: &Polynomial) -> Result<(BTreeSet<VarId>, BTreeSet<VarId>)> {
    let vars = poly.base_vars();
    let bi = qcnf
        .prefix
        .rightmost_block(&vars)
        .ok_or_else(|| Error::invalid("line has no variables"))?;
    let block = &qcnf.prefix.blocks()[bi];
    if block.quant != Quantifier::Forall {
        return Err(Error::invalid("line is not reducible"));
    }
    let u_vars: BTreeSet<VarId> = block.vars().iter().copied().collect();
    let x_vars: BTreeSet<VarId> = vars.difference(&u_vars).copied().collect();
    Ok((u_vars, x_vars))
}
