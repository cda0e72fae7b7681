//! Scale caps for the exhaustive oracles.
//!
//! Every oracle enumerates assignment spaces or strategy spaces exhaustively.
//! The caps below bound those enumerations; exceeding a cap is a hard
//! [`Error::CapExceeded`](crate::Error::CapExceeded), never a silent truncation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Bound on `|vars(Φ)|` for the game-value and cost oracles, and on the
    /// variable count of a single assignment enumeration (default 24).
    pub var_cap: u32,
    /// Bound on the variable count of a truth-table check in the semantic
    /// checker (default 22).
    pub semantic_var_cap: u32,
    /// Bound on `|vars(Φ)|` for the saturation prover (default 14).
    pub saturation_var_cap: u32,
    /// Bound on the number of distinct clauses the saturation prover may
    /// generate before giving up.
    pub saturation_clause_cap: usize,
    /// Bound on the number of response-set combinations the exact multi-block
    /// cost search may try.
    pub strategy_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            var_cap: 24,
            semantic_var_cap: 22,
            saturation_var_cap: 14,
            saturation_clause_cap: 200_000,
            strategy_budget: 10_000_000,
        }
    }
}

impl Caps {
    pub fn check_vars(&self, what: &'static str, actual: usize) -> Result<()> {
        if actual as u64 > self.var_cap as u64 {
            return Err(Error::CapExceeded {
                what,
                actual: actual as u64,
                limit: self.var_cap as u64,
            });
        }
        Ok(())
    }

    pub fn check_semantic_vars(&self, actual: usize) -> Result<()> {
        if actual as u64 > self.semantic_var_cap as u64 {
            return Err(Error::CapExceeded {
                what: "semantic check variables",
                actual: actual as u64,
                limit: self.semantic_var_cap as u64,
            });
        }
        Ok(())
    }
}
