//! Second-player drawing strategies as phase machines, first-player test
//! adversaries, and a registry that builds either kind from a name.

mod adversary;
mod distraction;
mod k24;
mod k2t;
mod registry;

use std::collections::BTreeSet;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::game::{GameState, Player};
use crate::hypercore::{HEdge, Vertex};

pub use adversary::{greedy_move, improving_by_search, normalize_fresh, GreedyP1, RandomP1, ScriptedP1};
pub use distraction::{
    choose_orientation, distraction_move, distraction_precondition, has_scaffold,
    precondition_report, DistractionContext, DistractionStrategy, Family, PreconditionReport,
};
pub use k24::{compute_f, K24Strategy};
pub use k2t::K2tStrategy;
pub use registry::StrategyRegistry;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("inapplicable state: {0}")]
    InapplicableState(String),
    #[error("strategy plays {seat} but {to_move} is to move")]
    WrongSeat { seat: Player, to_move: Player },
    #[error("the game is already over")]
    GameOver,
    #[error("strategy does not support target {0}")]
    UnsupportedTarget(String),
    #[error("scripted moves exhausted after {0} moves")]
    ScriptExhausted(usize),
    #[error("bad strategy spec: {0}")]
    BadSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AuditCheck {
    /// P1 threatened, P2 could not win, and the reply did not block.
    ForcedBlock,
    /// An algorithm part (i) reply left an odd number of free edges of A.
    AParity,
    /// Distraction entered without the precondition in either orientation.
    DistractionPrecondition,
    /// The tight copy's roles were not unique.
    TightCopy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub check: AuditCheck,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyDecision {
    pub edge: HEdge,
    pub tag: String,
    /// The move came from the distraction loop.
    pub distraction: bool,
    pub audits: Vec<AuditFailure>,
}

impl StrategyDecision {
    pub fn new(edge: HEdge, tag: impl Into<String>) -> Self {
        StrategyDecision {
            edge,
            tag: tag.into(),
            distraction: false,
            audits: Vec::new(),
        }
    }
}

/// Strategy memory exposed for canonical hashing: labels for named
/// vertices and edges, and a digest of everything else. The digest must
/// not depend on vertex ids, which the labels carry instead.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MemoryMarks {
    pub vertices: Vec<(Vertex, u16)>,
    pub edges: Vec<(HEdge, u16)>,
    pub digest: u64,
}

pub(crate) fn digest_of(value: &impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    fn seat(&self) -> Player;

    /// Chooses a move for the state and advances the memory. Calls must
    /// follow the game: one call per own move, in order.
    fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError>;

    fn clone_box(&self) -> Box<dyn Strategy>;

    fn marks(&self) -> MemoryMarks {
        MemoryMarks::default()
    }
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

/// Rebuilds a strategy's memory from a game in progress by asking it for
/// each of its past moves. Fails if a recorded move differs from what the
/// strategy would play.
pub fn resume(strategy: &mut dyn Strategy, state: &GameState) -> Result<(), StrategyError> {
    let mut replay = crate::game::GameState::new(state.rules().clone(), state.horizon());
    for (p, e) in state.move_log() {
        if *p == strategy.seat() {
            let d = strategy.decide(&replay)?;
            if d.edge != *e {
                return Err(StrategyError::InapplicableState(format!(
                    "recorded move {e} but the strategy plays {}",
                    d.edge
                )));
            }
        }
        replay
            .play(*p, *e)
            .map_err(|err| StrategyError::Domain(err.to_string()))?;
    }
    Ok(())
}

pub(crate) fn check_turn(seat: Player, state: &GameState) -> Result<(), StrategyError> {
    if state.status().is_over() {
        return Err(StrategyError::GameOver);
    }
    let to_move = state.to_move();
    if to_move != seat {
        return Err(StrategyError::WrongSeat { seat, to_move });
    }
    Ok(())
}

/// Win and block obligations for `me`: all edges that complete one of my
/// copies, and all edges that complete one of the opponent's.
pub(crate) struct Obligations {
    pub wins: BTreeSet<HEdge>,
    pub blocks: BTreeSet<HEdge>,
}

impl Obligations {
    pub fn of(state: &GameState, me: Player) -> Self {
        Obligations {
            wins: state.threat_edges(me),
            blocks: state.threat_edges(me.other()),
        }
    }

    /// The forced move if there is one: the lowest winning edge, else the
    /// preferred edge if it blocks, else the lowest blocking edge.
    pub fn forced(&self, preferred: Option<HEdge>) -> Option<StrategyDecision> {
        if let Some(w) = self.wins.iter().next() {
            return Some(StrategyDecision::new(*w, "win"));
        }
        match preferred {
            Some(p) if self.blocks.contains(&p) => Some(StrategyDecision::new(p, "block")),
            _ => self
                .blocks
                .iter()
                .next()
                .map(|b| StrategyDecision::new(*b, "block")),
        }
    }

    /// Appends a forced-block audit failure if `d` neither wins nor blocks
    /// while a block was required.
    pub fn audit(&self, d: &mut StrategyDecision) {
        if self.wins.is_empty() && !self.blocks.is_empty() && !self.blocks.contains(&d.edge) {
            d.audits.push(AuditFailure {
                check: AuditCheck::ForcedBlock,
                detail: format!("played {} while P1 threatens {:?}", d.edge, self.blocks),
            });
        }
    }
}

pub(crate) fn edge3(a: Vertex, b: Vertex, c: Vertex) -> HEdge {
    HEdge::new(&[a, b, c]).expect("distinct vertices")
}
