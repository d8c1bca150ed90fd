//! Cross-checks of the main copy, overlap and threat searches against the
//! brute-force oracle on seeded random positions.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::{oracle_scan, ThreatKey, ORACLE_MAX_EDGES, ORACLE_MAX_POOL};
use crate::game::{GameState, Player, Rules};
use crate::hypercore::{enumerate_copies, max_overlap, HEdge, TargetGraph, Vertex};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub target: String,
    pub states: u64,
    /// Individual comparisons made (overlap, copies, threats, threat edges),
    /// per state and player.
    pub comparisons: u64,
    pub mismatches: Vec<String>,
    /// Player-positions where the threat/measure law was checked, i.e. the
    /// player holds no complete copy.
    pub law_checks: u64,
    pub law_violations: Vec<String>,
    /// Player-positions with at least one threat.
    pub with_threats: u64,
    /// Player-positions holding a complete copy.
    pub with_copies: u64,
    pub wall_time_ms: u128,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.law_violations.is_empty()
    }

    fn merge(mut self, other: AgreementReport) -> AgreementReport {
        self.states += other.states;
        self.comparisons += other.comparisons;
        self.mismatches.extend(other.mismatches);
        self.law_checks += other.law_checks;
        self.law_violations.extend(other.law_violations);
        self.with_threats += other.with_threats;
        self.with_copies += other.with_copies;
        self
    }
}

fn random_edge(rng: &mut ChaCha8Rng, n: Vertex, k: usize) -> HEdge {
    let verts: Vec<Vertex> = (0..n).collect();
    let pick: Vec<Vertex> = verts.choose_multiple(rng, k).copied().collect();
    HEdge::new(&pick).expect("distinct vertices")
}

/// A position on at most `ORACLE_MAX_POOL` vertices with at most
/// `ORACLE_MAX_EDGES` edges. Most positions contain partial copies of the
/// target for either player, often one edge short, so that threats,
/// blocked threats and complete copies are common.
pub fn random_position(rules: &Arc<Rules>, rng: &mut ChaCha8Rng) -> GameState {
    let target = rules.target();
    let k = target.arity();
    let tv = target.vertex_count();
    let e = target.edge_count();
    let n = rng.gen_range(k.max(tv.saturating_sub(2))..=ORACLE_MAX_POOL) as Vertex;
    let room = (0..k).fold(1, |c, i| c * (n as usize - i) / (i + 1));
    let cap = ORACLE_MAX_EDGES.min(room);
    let planted = |rng: &mut ChaCha8Rng| -> Vec<HEdge> {
        if (n as usize) < tv {
            return Vec::new();
        }
        let mut verts: Vec<Vertex> = (0..n).collect();
        verts.shuffle(rng);
        let mut es: Vec<HEdge> = target.edges().iter().map(|e| e.map(|v| verts[v as usize])).collect();
        es.shuffle(rng);
        es
    };
    // the player with a near-complete copy, if any, and its edge count
    let lead = rng.gen_bool(0.7).then(|| {
        let want = match rng.gen_range(0..10) {
            0..=5 => e.saturating_sub(1),
            6..=7 => e.saturating_sub(2),
            _ => e,
        };
        (rng.gen_range(0..2usize), want)
    });
    let mut m = if rng.gen_bool(0.5) { cap } else { rng.gen_range(0..=cap) };
    if let Some((p, want)) = lead {
        m = m.max((2 * want + p).saturating_sub(1)).min(cap);
    }
    let quota = [m.div_ceil(2), m / 2];
    let mut sets = [BTreeSet::new(), BTreeSet::new()];
    if let Some((p, want)) = lead {
        let es = planted(rng);
        let take = want.min(quota[p]).min(es.len());
        sets[p].extend(es[..take].iter().copied());
        for f in &es[take..] {
            if sets[1 - p].len() < quota[1 - p] && rng.gen_bool(0.3) {
                sets[1 - p].insert(*f);
            }
        }
    }
    if rng.gen_bool(0.4) {
        let p = lead.map_or(1, |(p, _)| 1 - p);
        for f in planted(rng) {
            if sets[p].len() < quota[p] && !sets[1 - p].contains(&f) {
                sets[p].insert(f);
            }
        }
    }
    for p in 0..2 {
        while sets[p].len() < quota[p] {
            let f = random_edge(rng, n, k);
            if !sets[1 - p].contains(&f) {
                sets[p].insert(f);
            }
        }
    }
    let [p1, p2] = sets;
    GameState::from_edges(rules.clone(), p1, p2).expect("generated position is well formed")
}

fn check_state(g: &GameState, tag: &str) -> AgreementReport {
    let target = g.target();
    let pool = g.pool_size() as usize;
    let mut r = AgreementReport {
        states: 1,
        ..Default::default()
    };
    let oracle = match oracle_scan(target, g.edges(Player::P1), g.edges(Player::P2), pool) {
        Ok(o) => o,
        Err(e) => {
            r.mismatches.push(format!("{tag}: oracle refused: {e}"));
            return r;
        }
    };
    for (i, p) in [Player::P1, Player::P2].into_iter().enumerate() {
        let own = g.edges(p);
        let opp = g.edges(p.other());
        let mut differ = |what: &str, main: String, brute: String| {
            r.mismatches.push(format!("{tag} {p:?} {what}: main {main}, oracle {brute}"));
        };
        r.comparisons += 4;

        let overlap = max_overlap(target, own, opp, pool);
        if overlap != oracle.overlap[i] {
            differ("max_overlap", overlap.to_string(), oracle.overlap[i].to_string());
        }

        let copies: BTreeSet<Vec<Vertex>> =
            enumerate_copies(target, own, pool).into_iter().map(|e| e.0).collect();
        if copies != oracle.copies[i] {
            differ("copies", format!("{copies:?}"), format!("{:?}", oracle.copies[i]));
        }

        let threats = g.threats(p);
        let keys: BTreeSet<ThreatKey> = threats
            .iter()
            .map(|t| {
                let held: Vec<HEdge> = target.edges().iter().copied().filter(|e| *e != t.removed).collect();
                (t.embedding.image_edges(&held), t.completing)
            })
            .collect();
        if keys != oracle.threats[i] {
            differ("threats", format!("{keys:?}"), format!("{:?}", oracle.threats[i]));
        }

        let completing: BTreeSet<HEdge> = oracle.threats[i].iter().map(|t| t.1).collect();
        let fast = g.threat_edges(p);
        if fast != completing || g.has_threat(p) != !completing.is_empty() {
            differ("threat edges", format!("{fast:?}"), format!("{completing:?}"));
        }

        r.with_threats += !threats.is_empty() as u64;
        r.with_copies += !copies.is_empty() as u64;
        if copies.is_empty() {
            r.law_checks += 1;
            let by_measure = target.edge_count() - overlap == 1;
            if by_measure != !threats.is_empty() {
                r.law_violations.push(format!(
                    "{tag} {p:?}: {} threats but the overlap is {overlap} of {}",
                    threats.len(),
                    target.edge_count()
                ));
            }
        }
    }
    r
}

/// Compares the main implementations with the oracle on `states` random
/// positions; position `i` is generated from `seed + i`.
pub fn oracle_agreement(target: &TargetGraph, states: u64, seed: u64) -> AgreementReport {
    let start = Instant::now();
    let rules = Arc::new(Rules::new(target.clone()));
    let mut report = (0..states)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let g = random_position(&rules, &mut ChaCha8Rng::seed_from_u64(s));
            check_state(&g, &format!("state seed {s}"))
        })
        .reduce(AgreementReport::default, AgreementReport::merge);
    report.target = target.name().to_string();
    report.mismatches.sort();
    report.law_violations.sort();
    report.wall_time_ms = start.elapsed().as_millis();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{g_minus, hat_k24_3};

    #[test]
    fn positions_respect_the_oracle_limits() {
        let rules = Arc::new(Rules::new(hat_k24_3()));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = random_position(&rules, &mut rng);
            assert!(g.pool_size() as usize <= ORACLE_MAX_POOL);
            assert!(g.edges(Player::P1).len() + g.edges(Player::P2).len() <= ORACLE_MAX_EDGES);
        }
    }

    #[test]
    fn small_runs_agree() {
        for t in [hat_k24_3(), g_minus()] {
            let r = oracle_agreement(&t, 20, 11);
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.states, 20);
        }
    }
}
