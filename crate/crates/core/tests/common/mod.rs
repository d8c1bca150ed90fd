//! Generators and naive reference counts shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramsey_core::game::{GameState, Player, Rules};
use ramsey_core::hypercore::{hat_k24_3, HEdge, TargetGraph, Vertex};
use ramsey_core::strategy::{
    choose_orientation, distraction_precondition, DistractionStrategy, Family, GreedyP1, Strategy,
};
use ramsey_core::verify::oracle::oracle_isomorphic;
use ramsey_core::verify::Colored;

pub fn e(a: Vertex, b: Vertex, c: Vertex) -> HEdge {
    HEdge::new(&[a, b, c]).unwrap()
}

/// The family's scaffold with center `v[0]` and mains `v[1]`, `v[2]`.
pub fn scaffold(family: Family, v: &[Vertex]) -> BTreeSet<HEdge> {
    let (c, x, y) = (v[0], v[1], v[2]);
    let mut out = BTreeSet::new();
    match family {
        Family::K24 => {
            out.insert(e(c, x, y));
            for &m in &v[3..6] {
                out.insert(e(c, x, m));
                out.insert(e(c, y, m));
            }
        }
        Family::K2t(t) => {
            for &m in &v[3..3 + t] {
                out.insert(e(c, x, m));
                out.insert(e(c, y, m));
            }
            for &l in &v[3 + t..1 + 2 * t] {
                out.insert(e(c, x, l));
            }
        }
    }
    out
}

pub fn random_edge(rng: &mut ChaCha8Rng, verts: &[Vertex]) -> HEdge {
    let pick: Vec<Vertex> = verts.choose_multiple(rng, 3).copied().collect();
    HEdge::new(&pick).unwrap()
}

/// A position where P2 holds a scaffold on shuffled labels, P1 holds one
/// edge more, mostly near the scaffold, and the distraction precondition
/// holds in one orientation.
pub fn precondition_state(
    rules: &Arc<Rules>,
    family: Family,
    rng: &mut ChaCha8Rng,
) -> Option<(GameState, (Vertex, Vertex, Vertex))> {
    let mut verts: Vec<Vertex> = (0..16).collect();
    verts.shuffle(rng);
    let p2 = scaffold(family, &verts);
    let near = &verts[..10];
    let mut p1 = BTreeSet::new();
    while p1.len() < p2.len() + 1 {
        let f = if rng.gen_bool(0.7) { random_edge(rng, near) } else { random_edge(rng, &verts) };
        if !p2.contains(&f) {
            p1.insert(f);
        }
    }
    let g = GameState::from_edges(rules.clone(), p1, p2).ok()?;
    if g.status().is_over() || g.to_move() != Player::P2 {
        return None;
    }
    let roles = choose_orientation(&g, family, verts[0], verts[1], verts[2]).ok()??;
    Some((g, roles))
}

/// Runs the distraction loop against a seeded greedy P1, failing on an
/// audit, a P1 win or a P1 threat.
pub fn run_loop(g: &mut GameState, roles: (Vertex, Vertex, Vertex), seed: u64, rounds: usize) -> Result<(), String> {
    let (c, x, y) = roles;
    let mut p2 = DistractionStrategy::with_roles(c, x, y);
    let mut p1 = GreedyP1::new(Some(seed));
    for round in 0..rounds {
        let d = p2.decide(g).map_err(|e| e.to_string())?;
        if !d.audits.is_empty() {
            return Err(format!("audits in round {round}: {:?}", d.audits));
        }
        g.play(Player::P2, d.edge).map_err(|e| e.to_string())?;
        if g.status().is_over() {
            return match g.status().winner() {
                Some(Player::P2) => Ok(()),
                _ => Err(format!("game ended with {:?}", g.status().label())),
            };
        }
        let m = p1.decide(g).map_err(|e| e.to_string())?;
        g.play(Player::P1, m.edge).map_err(|e| e.to_string())?;
        if g.status().winner().is_some() {
            return Err(format!("P1 won in round {round}"));
        }
        if g.has_threat(Player::P1) {
            return Err(format!("P1 threat in round {round}: {:?}", g.move_log()));
        }
    }
    Ok(())
}

/// Generates `states` positions satisfying the distraction precondition
/// and runs a `rounds`-round loop from each; the failures, if any.
pub fn loop_suite(target: TargetGraph, states: usize, seed: u64, rounds: usize) -> Result<usize, String> {
    let family = Family::for_target(&target).map_err(|e| e.to_string())?;
    let rules = Arc::new(Rules::new(target));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    let mut tries = 0;
    while found < states {
        tries += 1;
        if tries >= 100 * states {
            return Err("generator too weak".into());
        }
        let Some((mut g, roles)) = precondition_state(&rules, family, &mut rng) else {
            continue;
        };
        if !distraction_precondition(&g, roles.0, roles.1, roles.2, family).map_err(|e| e.to_string())? {
            return Err(format!("chosen roles fail the precondition: {:?}", g.move_log()));
        }
        run_loop(&mut g, roles, seed + found as u64, rounds)?;
        found += 1;
    }
    Ok(found)
}

/// A lifted K̂_{2,3} for P1 with center `c`, mains `x`, `y` and commons `m`.
pub fn p1_core(c: Vertex, x: Vertex, y: Vertex, m: &[Vertex]) -> Vec<HEdge> {
    let mut out = vec![e(c, x, y)];
    for &w in m {
        out.push(e(c, x, w));
        out.push(e(c, y, w));
    }
    out
}

/// Counts from the entry-state check.
pub struct EntryStats {
    pub checked: usize,
    pub with_core: usize,
    pub swapped: usize,
}

/// States with a P2 scaffold and at most 10 P1 edges but no P1 threat, many
/// with a P1 core on the scaffold's vertices. Each must pass the
/// precondition in some orientation.
pub fn entry_states(states: usize, seed: u64) -> Result<EntryStats, String> {
    let rules = Arc::new(Rules::new(hat_k24_3()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = EntryStats {
        checked: 0,
        with_core: 0,
        swapped: 0,
    };
    while s.checked < states {
        let mut verts: Vec<Vertex> = (0..14).collect();
        verts.shuffle(&mut rng);
        let p2 = scaffold(Family::K24, &verts);
        let (c, x, y) = (verts[0], verts[1], verts[2]);
        let mut p1: BTreeSet<HEdge> = BTreeSet::new();
        if rng.gen_bool(0.6) {
            // a P1 core on the scaffold's center and one of its mains
            let (center, main) = *[(c, x), (x, c), (c, y), (y, c)].choose(&mut rng).unwrap();
            let others: Vec<Vertex> = verts[6..].choose_multiple(&mut rng, 4).copied().collect();
            p1.extend(p1_core(center, main, others[0], &others[1..]));
        }
        let n1 = rng.gen_range(p2.len()..=10);
        while p1.len() < n1 {
            p1.insert(random_edge(&mut rng, &verts[..9]));
        }
        if p1.len() > 10 || p1.iter().any(|f| p2.contains(f)) {
            continue;
        }
        let mut p2 = p2;
        // P2's remaining moves go far away
        let mut far = 100;
        while p2.len() + 1 < p1.len() {
            p2.insert(e(far, far + 1, far + 2));
            far += 3;
        }
        let Ok(g) = GameState::from_edges(rules.clone(), p1, p2) else {
            continue;
        };
        if g.status().is_over() || g.has_threat(Player::P1) {
            continue;
        }
        s.checked += 1;
        let roles = choose_orientation(&g, Family::K24, c, x, y).map_err(|e| e.to_string())?;
        let Some((_, rx, _)) = roles else {
            return Err(format!("no orientation works: {:?}", g.move_log()));
        };
        let pre = |a, b| distraction_precondition(&g, c, a, b, Family::K24).map_err(|e| e.to_string());
        s.with_core += (!pre(x, y)? || !pre(y, x)?) as usize;
        s.swapped += (rx == y) as usize;
    }
    Ok(s)
}

/// Orbits of P1's second move, found by trying every triple of a 12-vertex
/// pool and merging successors the brute-force isomorphism test matches.
pub fn naive_second_move_orbits(proto: &dyn Strategy, target: &TargetGraph) -> usize {
    let rules = Arc::new(Rules::new(target.clone()));
    let mut g = GameState::new(rules, None);
    g.play(Player::P1, HEdge::new(&[0, 1, 2]).unwrap()).unwrap();
    let mut p2 = proto.clone_box();
    let d = p2.decide(&g).unwrap();
    g.play(Player::P2, d.edge).unwrap();
    let marks = p2.marks();
    let mut reps: Vec<Colored> = Vec::new();
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                let e = HEdge::new(&[a, b, c]).unwrap();
                if !g.is_free(&e) {
                    continue;
                }
                let next = Colored::of_state(&g.apply_move(Player::P1, e).unwrap(), &marks);
                if !reps.iter().any(|r| oracle_isomorphic(r, &next).unwrap()) {
                    reps.push(next);
                }
            }
        }
    }
    reps.len()
}
