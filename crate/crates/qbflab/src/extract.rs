//! Round-based strategy extraction from refutations.
//!
//! Playing against an existential assignment round by round: restrict the
//! proof by the round's existential move, find the first line whose
//! variables are inside the rounds played so far and whose restriction is
//! not a tautology, and answer from that line's response map when its
//! rightmost block is this round's universal block — otherwise from the
//! first line whose rightmost block is that block. When no line reduces on
//! the block at all (possible after restriction), the response defaults to
//! all-zeros and the outcome records that the fallback fired.

use std::collections::{BTreeMap, BTreeSet};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exec;
use crate::line::{game_normalized, ProofLine};
use crate::oracle::{Player, Strategy};
use crate::qcnf::{Assignment, AssignmentSpace, Qcnf, Quantifier, VarId};
use crate::response::ResponseMap;

/// One game round: an existential block followed by a universal block,
/// either possibly empty at the prefix's ends.
#[derive(Debug, Clone)]
struct Round {
    exists: Vec<VarId>,
    /// `(prefix block index, variables)` of the universal block, if any.
    forall: Option<(usize, Vec<VarId>)>,
}

fn rounds(qcnf: &Qcnf) -> Vec<Round> {
    let mut out = Vec::new();
    let mut pending_exists: Vec<VarId> = Vec::new();
    for (bi, block) in qcnf.prefix.blocks().iter().enumerate() {
        match block.quant {
            Quantifier::Exists => pending_exists = block.vars().to_vec(),
            Quantifier::Forall => {
                out.push(Round {
                    exists: std::mem::take(&mut pending_exists),
                    forall: Some((bi, block.vars().to_vec())),
                });
            }
        }
    }
    if !pending_exists.is_empty() {
        out.push(Round {
            exists: pending_exists,
            forall: None,
        });
    }
    out
}

/// The result of tabulating the extracted strategy over every existential
/// assignment.
#[derive(Debug, Clone)]
pub struct ExtractionOutcome {
    pub strategy: Strategy,
    /// Some universal block was nobody's rightmost block and received the
    /// all-zeros default.
    pub fallback_used: bool,
}

/// An interactive extraction session; one owner plays one game.
pub struct PlaySession<'a> {
    qcnf: Qcnf,
    lines: &'a [ProofLine],
    maps: &'a BTreeMap<usize, ResponseMap>,
    caps: &'a Caps,
    rounds: Vec<Round>,
    round_idx: usize,
    sigma: Assignment,
    fallback_used: bool,
}

impl<'a> PlaySession<'a> {
    pub fn new(
        qcnf: &Qcnf,
        lines: &'a [ProofLine],
        maps: &'a BTreeMap<usize, ResponseMap>,
        caps: &'a Caps,
    ) -> Self {
        let qcnf = game_normalized(qcnf);
        let rounds = rounds(&qcnf);
        PlaySession {
            qcnf,
            lines,
            maps,
            caps,
            rounds,
            round_idx: 0,
            sigma: Assignment::empty(),
            fallback_used: false,
        }
    }

    pub fn finished(&self) -> bool {
        self.round_idx >= self.rounds.len()
    }

    /// Plays one round: takes the existential move for this round's
    /// existential block and returns the universal response.
    pub fn play_round(&mut self, alpha_i: &Assignment) -> Result<Assignment> {
        if self.finished() {
            return Err(Error::invalid("game already finished"));
        }
        let round = self.rounds[self.round_idx].clone();
        let expected: BTreeSet<VarId> = round.exists.iter().copied().collect();
        if alpha_i.var_set() != expected {
            return Err(Error::invalid(
                "round move must assign exactly this round's existential block",
            ));
        }
        let sigma_alpha = self.sigma.union(alpha_i)?;
        let beta = match &round.forall {
            None => Assignment::empty(),
            Some((block_idx, block_vars)) => {
                let eligible: BTreeSet<VarId> = self
                    .rounds
                    .iter()
                    .take(self.round_idx + 1)
                    .flat_map(|r| {
                        r.exists
                            .iter()
                            .copied()
                            .chain(r.forall.iter().flat_map(|(_, vs)| vs.iter().copied()))
                    })
                    .collect();
                self.response_for(&sigma_alpha, *block_idx, block_vars, &eligible)?
            }
        };
        self.sigma = sigma_alpha.union(&beta)?;
        self.round_idx += 1;
        Ok(beta)
    }

    /// The first eligible non-tautological line decides the response;
    /// otherwise the first line reducing on this block; otherwise all-zeros.
    fn response_for(
        &mut self,
        sigma_alpha: &Assignment,
        block_idx: usize,
        block_vars: &[VarId],
        eligible: &BTreeSet<VarId>,
    ) -> Result<Assignment> {
        let mut first_eligible: Option<usize> = None;
        for (i, line) in self.lines.iter().enumerate() {
            if !line.vars().is_subset(eligible) {
                continue;
            }
            if line.restrict(sigma_alpha).is_tautology(self.caps)? {
                continue;
            }
            first_eligible = Some(i);
            break;
        }
        let first = first_eligible.ok_or_else(|| {
            Error::invalid("no eligible line; the proof does not end in a contradiction")
        })?;
        let chosen = if self.lines[first].rightmost_block(&self.qcnf.prefix) == Some(block_idx) {
            Some(first)
        } else {
            // the fallback line: minimal index whose rightmost block is this
            // round's universal block
            self.lines
                .iter()
                .position(|l| l.rightmost_block(&self.qcnf.prefix) == Some(block_idx))
        };
        match chosen {
            Some(j) => {
                let map = self.maps.get(&j).ok_or_else(|| {
                    Error::invalid(format!("missing response map for reducible line {j}"))
                })?;
                map.respond(sigma_alpha)
            }
            None => {
                self.fallback_used = true;
                Ok(Assignment::from_pairs(
                    block_vars.iter().map(|&v| (v, false)),
                ))
            }
        }
    }
}

/// Batch extraction: tabulates the round-based strategy over all existential
/// assignments. The response maps must pass their defining-condition audit.
pub fn extract_strategy(
    qcnf: &Qcnf,
    lines: &[ProofLine],
    maps: &BTreeMap<usize, ResponseMap>,
    caps: &Caps,
) -> Result<ExtractionOutcome> {
    let normalized = game_normalized(qcnf);
    for (i, map) in maps {
        let line = lines
            .get(*i)
            .ok_or_else(|| Error::invalid(format!("response map for missing line {i}")))?;
        if !map.audit(&normalized, line, caps)? {
            return Err(Error::invalid(format!(
                "response map for line {i} violates its defining condition"
            )));
        }
    }
    let exists_vars = normalized.prefix.exists_vars();
    caps.check_vars("extraction table variables", exists_vars.len())?;
    let space = AssignmentSpace::new(exists_vars.iter().copied());
    let game_rounds = rounds(&normalized);

    let rows: Vec<Result<(Assignment, Assignment, bool)>> = exec::map_range(space.len(), |ai| {
        let alpha = space.assignment(ai);
        let mut session = PlaySession::new(qcnf, lines, maps, caps);
        let mut beta_all = Assignment::empty();
        for round in &game_rounds {
            let evars: BTreeSet<VarId> = round.exists.iter().copied().collect();
            let alpha_i = alpha.project(&evars);
            let beta_i = session.play_round(&alpha_i)?;
            beta_all = beta_all.union(&beta_i)?;
        }
        Ok((alpha, beta_all, session.fallback_used))
    });

    let mut table = BTreeMap::new();
    let mut fallback_used = false;
    for row in rows {
        let (alpha, beta, fb) = row?;
        fallback_used |= fb;
        table.insert(alpha, beta);
    }
    Ok(ExtractionOutcome {
        strategy: Strategy {
            player: Player::Forall,
            table,
        },
        fallback_used,
    })
}
