//! Many independent games of a P2 strategy against a randomized adversary.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{Outcome, PlayoutStats, VerifyReport};
use crate::game::{new_game, GameState, Player};
use crate::hypercore::TargetGraph;
use crate::strategy::{
    AuditCheck, GreedyP1, RandomP1, Strategy, StrategyDecision, StrategyError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adversary {
    Random,
    Greedy,
}

impl Adversary {
    /// The adversary for one game; every game gets its own seed.
    pub fn build(self, seed: u64) -> Box<dyn Strategy> {
        match self {
            Adversary::Random => Box::new(RandomP1::new(seed)),
            Adversary::Greedy => Box::new(GreedyP1::new(Some(seed))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Adversary::Random => "p1-random",
            Adversary::Greedy => "p1-greedy",
        }
    }
}

impl FromStr for Adversary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "p1-random" | "random" => Ok(Adversary::Random),
            "p1-greedy" | "greedy" => Ok(Adversary::Greedy),
            _ => Err(format!("unknown adversary {s:?}")),
        }
    }
}

/// Checks a P2 decision against the invariants every strategy must keep,
/// returning one message per violation.
pub fn reply_violations(before: &GameState, d: &StrategyDecision) -> Vec<String> {
    let mut out: Vec<String> = d
        .audits
        .iter()
        .map(|a| format!("{:?}: {}", a.check, a.detail))
        .collect();
    if !before.is_free(&d.edge) {
        out.push(format!("reply {} is already claimed", d.edge));
    }
    let pool = before.pool_size();
    let fresh: Vec<_> = d.edge.vertices().iter().filter(|&&v| v >= pool).copied().collect();
    if fresh.iter().enumerate().any(|(i, &v)| v != pool + i as u32) {
        out.push(format!("reply {} skips fresh ids from {pool}", d.edge));
    }
    out
}

#[derive(Default)]
struct Tally {
    stats: PlayoutStats,
    violations: Vec<String>,
    counterexample: Option<Vec<(Player, crate::hypercore::HEdge)>>,
    moves: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        let (a, b) = (&mut self.stats, &other.stats);
        a.games += b.games;
        a.p1_wins += b.p1_wins;
        a.p2_wins += b.p2_wins;
        a.draws += b.draws;
        a.distraction_entries += b.distraction_entries;
        a.forced_block_violations += b.forced_block_violations;
        a.inapplicable_states += b.inapplicable_states;
        a.a_parity_checks += b.a_parity_checks;
        a.a_parity_violations += b.a_parity_violations;
        a.other_audit_failures += b.other_audit_failures;
        self.moves += other.moves;
        if self.violations.len() < MAX_RECORDED {
            self.violations.extend(other.violations);
            self.violations.truncate(MAX_RECORDED);
        }
        self.counterexample = self.counterexample.or(other.counterexample);
        self
    }
}

/// Violation messages kept in a report; the counters keep exact totals.
const MAX_RECORDED: usize = 50;

fn play_one(
    proto: &dyn Strategy,
    rules: &std::sync::Arc<crate::game::Rules>,
    adversary: Adversary,
    plies: usize,
    seed: u64,
) -> Tally {
    let mut t = Tally::default();
    t.stats.games = 1;
    let mut g = GameState::new(rules.clone(), Some(plies));
    let mut p2 = proto.clone_box();
    let mut p1 = adversary.build(seed);
    let mut entered = false;
    while !g.status().is_over() {
        let mover = g.to_move();
        let res = match mover {
            Player::P1 => p1.decide(&g),
            Player::P2 => p2.decide(&g),
        };
        let d = match res {
            Ok(d) => d,
            Err(e) => {
                if matches!(e, StrategyError::InapplicableState(_)) {
                    t.stats.inapplicable_states += 1;
                }
                t.violations.push(format!("game seed {seed}, move {}: {mover} failed: {e}", g.move_log().len() + 1));
                return t;
            }
        };
        t.moves += 1;
        if mover == Player::P2 {
            if d.tag.starts_with("Case 2 (i)") {
                t.stats.a_parity_checks += 1;
            }
            for a in &d.audits {
                match a.check {
                    AuditCheck::ForcedBlock => t.stats.forced_block_violations += 1,
                    AuditCheck::AParity => t.stats.a_parity_violations += 1,
                    _ => t.stats.other_audit_failures += 1,
                }
            }
            for v in reply_violations(&g, &d) {
                t.violations.push(format!("game seed {seed}, move {}: {v}", g.move_log().len() + 1));
            }
            entered |= d.distraction;
        }
        if let Err(e) = g.play(mover, d.edge) {
            t.violations.push(format!("game seed {seed}: illegal move by {mover}: {e}"));
            return t;
        }
    }
    match g.status().winner() {
        Some(Player::P1) => {
            t.stats.p1_wins += 1;
            t.counterexample = Some(g.move_log().to_vec());
        }
        Some(Player::P2) => t.stats.p2_wins += 1,
        None => t.stats.draws += 1,
    }
    t.stats.distraction_entries += entered as u64;
    t
}

/// Plays `games` games of at most `plies` half-moves. Game `i` seeds its
/// adversary with `seed + i`.
pub fn playout_suite(
    strategy: &dyn Strategy,
    target: &TargetGraph,
    adversary: Adversary,
    games: u64,
    plies: usize,
    seed: u64,
) -> VerifyReport {
    let start = Instant::now();
    let rules = std::sync::Arc::new(crate::game::Rules::new(target.clone()));
    let tally = (0..games)
        .into_par_iter()
        .map(|i| play_one(strategy, &rules, adversary, plies, seed.wrapping_add(i)))
        .reduce(Tally::default, Tally::merge);
    let mut report = VerifyReport::new(&strategy.name(), target.name(), plies);
    report.states_expanded = tally.moves;
    let mut stats = tally.stats;
    stats.adversary = adversary.name().to_string();
    stats.plies = plies;
    report.invariant_violations = tally.violations;
    if let Some(trace) = tally.counterexample {
        report.outcome = Outcome::CounterexampleTrace(trace);
    }
    report.playout = Some(stats);
    report.wall_time_ms = start.elapsed().as_millis();
    report
}

/// Convenience for a single game, returning the final state.
pub fn play_game(
    p1: &mut dyn Strategy,
    p2: &mut dyn Strategy,
    target: &TargetGraph,
    plies: Option<usize>,
) -> Result<(GameState, Vec<StrategyDecision>), StrategyError> {
    let mut g = new_game(target.clone(), plies);
    let mut ds = Vec::new();
    while !g.status().is_over() {
        let d = match g.to_move() {
            Player::P1 => p1.decide(&g)?,
            Player::P2 => p2.decide(&g)?,
        };
        g.play(g.to_move(), d.edge)
            .map_err(|e| StrategyError::Domain(e.to_string()))?;
        ds.push(d);
    }
    Ok((g, ds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{hat_k24_3, k2t_target};
    use crate::strategy::{K24Strategy, K2tStrategy};

    #[test]
    fn small_k24_suite_is_clean() {
        let r = playout_suite(&K24Strategy::new(), &hat_k24_3(), Adversary::Random, 20, 60, 1);
        assert!(r.passed(), "{}", r.to_json());
        let s = r.playout.unwrap();
        assert_eq!(s.games, 20);
        assert_eq!(s.p1_wins, 0);
    }

    #[test]
    fn small_k2t_suite_is_clean() {
        let t = k2t_target(3).unwrap();
        let r = playout_suite(&K2tStrategy::new(3).unwrap(), &t, Adversary::Greedy, 5, 80, 1);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn same_seed_same_report() {
        let a = playout_suite(&K24Strategy::new(), &hat_k24_3(), Adversary::Greedy, 3, 30, 9);
        let b = playout_suite(&K24Strategy::new(), &hat_k24_3(), Adversary::Greedy, 3, 30, 9);
        assert_eq!(a.playout, b.playout);
        assert_eq!(a.states_expanded, b.states_expanded);
    }
}
