use serde::{Deserialize, Serialize};

use crate::game::Player;
use crate::hypercore::HEdge;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "moves")]
pub enum Outcome {
    NoP1WinFound,
    CounterexampleTrace(Vec<(Player, HEdge)>),
}

impl Outcome {
    pub fn is_clean(&self) -> bool {
        matches!(self, Outcome::NoP1WinFound)
    }
}

/// Counts that only playout runs produce.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayoutStats {
    pub adversary: String,
    pub games: u64,
    pub plies: usize,
    pub p1_wins: u64,
    pub p2_wins: u64,
    pub draws: u64,
    pub distraction_entries: u64,
    pub forced_block_violations: u64,
    pub inapplicable_states: u64,
    pub a_parity_checks: u64,
    pub a_parity_violations: u64,
    pub other_audit_failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub strategy: String,
    pub target: String,
    pub depth: usize,
    pub states_expanded: u64,
    pub orbit_reductions: u64,
    pub transposition_hits: u64,
    pub outcome: Outcome,
    pub invariant_violations: Vec<String>,
    pub wall_time_ms: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub playout: Option<PlayoutStats>,
}

impl VerifyReport {
    pub fn new(strategy: &str, target: &str, depth: usize) -> Self {
        VerifyReport {
            strategy: strategy.to_string(),
            target: target.to_string(),
            depth,
            states_expanded: 0,
            orbit_reductions: 0,
            transposition_hits: 0,
            outcome: Outcome::NoP1WinFound,
            invariant_violations: Vec::new(),
            wall_time_ms: 0,
            playout: None,
        }
    }

    /// No P1 win and no invariant violation.
    pub fn passed(&self) -> bool {
        self.outcome.is_clean() && self.invariant_violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
