//! The size/cost/capacity verifier: checks a proof, computes its
//! system-specific size, the formula's exact cost, and the proof's capacity,
//! and confirms `size ≥ cost / capacity` (in exact integer arithmetic).
//! Clause and inequality proofs additionally satisfy `size ≥ cost`;
//! polynomial proofs satisfy `size² ≥ cost`.

use serde::Serialize;

use crate::caps::Caps;
use crate::cp::CpProof;
use crate::error::Result;
use crate::line::{cp_lines, pcr_lines, qures_lines, ProofLine};
use crate::oracle::{cost_exact_general, cost_exact_single_block, CostReport};
use crate::pcr::PcrProof;
use crate::qcnf::{Qcnf, Quantifier};
use crate::qures::QuResProof;
use crate::response::capacity;
use crate::semantic::SemanticProof;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    QuRes,
    Cp,
    Pcr,
    Semantic,
}

/// A checked proof of any supported system.
pub enum AnyProof<'a> {
    QuRes(&'a QuResProof),
    Cp(&'a CpProof),
    Pcr(&'a PcrProof),
    Semantic(&'a SemanticProof),
}

impl AnyProof<'_> {
    pub fn system(&self) -> System {
        match self {
            AnyProof::QuRes(_) => System::QuRes,
            AnyProof::Cp(_) => System::Cp,
            AnyProof::Pcr(_) => System::Pcr,
            AnyProof::Semantic(_) => System::Semantic,
        }
    }

    /// System-specific proof size: step count, except total monomials for
    /// polynomial proofs.
    pub fn size(&self) -> u64 {
        match self {
            AnyProof::QuRes(p) => p.size() as u64,
            AnyProof::Cp(p) => p.size() as u64,
            AnyProof::Pcr(p) => p.size() as u64,
            AnyProof::Semantic(p) => p.size() as u64,
        }
    }

    pub fn lines(&self) -> Vec<ProofLine> {
        match self {
            AnyProof::QuRes(p) => qures_lines(p),
            AnyProof::Cp(p) => cp_lines(p),
            AnyProof::Pcr(p) => pcr_lines(p),
            AnyProof::Semantic(p) => p.lines(),
        }
    }

    fn check(&self, qcnf: &Qcnf, caps: &Caps) -> Result<()> {
        match self {
            AnyProof::QuRes(p) => crate::qures::check(qcnf, p, crate::qures::Mode::QuRes),
            AnyProof::Cp(p) => crate::cp::check(qcnf, p),
            AnyProof::Pcr(p) => crate::pcr::check(qcnf, p),
            AnyProof::Semantic(p) => crate::semantic::check_semantic(qcnf, p, caps),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SccReport {
    pub system: System,
    pub size: u64,
    pub cost: u64,
    pub capacity: u64,
    /// `cost / capacity` as a float, for reporting.
    pub ratio: f64,
    /// `size · capacity ≥ cost`, the inequality itself.
    pub holds: bool,
    /// `size ≥ cost`; meaningful for clause and inequality proofs.
    pub size_ge_cost: bool,
    /// `size² ≥ cost`; meaningful for polynomial proofs.
    pub size_ge_sqrt_cost: bool,
    pub cost_block_ranges: Vec<u64>,
    /// Number of reduction steps (reported for the oracle-system reading).
    pub reduction_steps: Option<u64>,
}

/// Exact cost via the cover search when the prefix has a single universal
/// block, the general search otherwise.
pub fn cost_auto(qcnf: &Qcnf, caps: &Caps) -> Result<CostReport> {
    let ublocks = qcnf
        .prefix
        .normalized()
        .blocks()
        .iter()
        .filter(|b| b.quant == Quantifier::Forall)
        .count();
    if ublocks == 1 {
        cost_exact_single_block(qcnf, caps)
    } else {
        cost_exact_general(qcnf, caps)
    }
}

/// Checks the proof, computes all three quantities, and verifies the
/// inequality.
pub fn verify_scc(qcnf: &Qcnf, proof: &AnyProof<'_>, caps: &Caps) -> Result<SccReport> {
    proof.check(qcnf, caps)?;
    let size = proof.size();
    let cost_report = cost_auto(qcnf, caps)?;
    let cost = cost_report.cost;
    let lines = proof.lines();
    let cap = capacity(qcnf, &lines, caps)?;
    let holds = size.saturating_mul(cap) >= cost;
    let reduction_steps = match proof {
        AnyProof::Semantic(p) => Some(p.reduction_count() as u64),
        AnyProof::QuRes(p) => Some(
            p.steps
                .iter()
                .filter(|s| matches!(s.just, crate::qures::QuResJust::Reduce { .. }))
                .count() as u64,
        ),
        AnyProof::Cp(p) => Some(
            p.steps
                .iter()
                .filter(|s| matches!(s.just, crate::cp::CpJust::Reduce { .. }))
                .count() as u64,
        ),
        AnyProof::Pcr(p) => Some(
            p.steps
                .iter()
                .filter(|s| matches!(s.just, crate::pcr::PcrJust::Reduce { .. }))
                .count() as u64,
        ),
    };
    Ok(SccReport {
        system: proof.system(),
        size,
        cost,
        capacity: cap,
        ratio: cost as f64 / cap as f64,
        holds,
        size_ge_cost: size >= cost,
        size_ge_sqrt_cost: size.saturating_mul(size) >= cost,
        cost_block_ranges: cost_report.block_ranges,
        reduction_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::qures::{prove_saturate, Mode};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn equality_two_qures() {
        let q = gen::equality(2).unwrap();
        let proof = prove_saturate(&q, &caps(), Mode::QuRes).unwrap().unwrap();
        let report = verify_scc(&q, &AnyProof::QuRes(&proof), &caps()).unwrap();
        assert_eq!(report.cost, 4);
        assert_eq!(report.capacity, 1);
        assert!(report.size >= 4);
        assert!(report.holds);
        assert!(report.size_ge_cost);
    }

    #[test]
    fn kbkf_weak_one_qures() {
        let q = gen::kbkf_weak(1).unwrap();
        let proof = prove_saturate(&q, &caps(), Mode::QuRes).unwrap().unwrap();
        let report = verify_scc(&q, &AnyProof::QuRes(&proof), &caps()).unwrap();
        assert_eq!(report.cost, 2);
        assert_eq!(report.capacity, 1);
        assert!(report.holds && report.size_ge_cost);
    }

    #[test]
    fn frege_eq_capacity_matches_cost() {
        let n = 3u32;
        let q = gen::equality(n).unwrap();
        let proof = crate::semantic::frege_eq_refutation(n, &caps()).unwrap();
        let report = verify_scc(&q, &AnyProof::Semantic(&proof), &caps()).unwrap();
        assert_eq!(report.cost, 8);
        assert_eq!(report.capacity, 8);
        assert!(report.holds);
        assert_eq!(report.ratio, 1.0);
        assert!(report.size >= 1);
    }
}
