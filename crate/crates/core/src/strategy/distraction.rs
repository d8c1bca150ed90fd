//! The distraction endgame: once P2 holds the scaffold with center c and
//! main vertices x, y, he keeps claiming c y a for fresh a, and P1 must
//! answer c x a every time.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{
    check_turn, digest_of, edge3, AuditCheck, AuditFailure, MemoryMarks, Obligations, Strategy,
    StrategyDecision, StrategyError,
};
use crate::game::{GameState, Player};
use crate::hypercore::{HEdge, TargetGraph, Vertex};

/// Which scaffold the distraction needs: a lifted K̂_{2,3} for the K̂_{2,4}
/// game, a lifted K_{2,t}(t-2) for G_t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    K24,
    K2t(usize),
}

impl Family {
    pub fn for_target(target: &TargetGraph) -> Result<Family, StrategyError> {
        let name = target.name();
        if name == "hatK24-3" {
            return Ok(Family::K24);
        }
        if let Some(t) = name.strip_prefix("k2t").and_then(|t| t.parse::<usize>().ok()) {
            if t >= 3 {
                return Ok(Family::K2t(t));
            }
        }
        Err(StrategyError::UnsupportedTarget(name.to_string()))
    }
}

/// Neighborhoods on the `center`-board of an edge set.
fn board(edges: &BTreeSet<HEdge>, center: Vertex) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for e in edges {
        if let Some(rest) = e.without(center) {
            if rest.len() == 2 {
                adj.entry(rest[0]).or_default().insert(rest[1]);
                adj.entry(rest[1]).or_default().insert(rest[0]);
            }
        }
    }
    adj
}

/// Does `edges` contain the family's scaffold with center `c` and main
/// vertices `x`, `y`?
pub fn has_scaffold(
    edges: &BTreeSet<HEdge>,
    family: Family,
    c: Vertex,
    x: Vertex,
    y: Vertex,
) -> bool {
    let adj = board(edges, c);
    let empty = BTreeSet::new();
    let nx = adj.get(&x).unwrap_or(&empty);
    let ny = adj.get(&y).unwrap_or(&empty);
    let common = nx.intersection(ny).count();
    match family {
        Family::K24 => nx.contains(&y) && common >= 3,
        Family::K2t(t) => {
            let only = |n: &BTreeSet<Vertex>, other: Vertex| n.iter().filter(|&&w| w != other).count();
            common >= t && only(nx, y).max(only(ny, x)) >= 2 * t - 2
        }
    }
}

/// Does `edges` contain the family's core (lifted K̂_{2,3}, resp. K_{2,t})
/// with center `center` and `main` as one main vertex?
fn has_core(edges: &BTreeSet<HEdge>, family: Family, center: Vertex, main: Vertex) -> bool {
    let adj = board(edges, center);
    let Some(nm) = adj.get(&main) else {
        return false;
    };
    match family {
        Family::K24 => nm
            .iter()
            .any(|y| adj[y].intersection(nm).count() >= 3),
        Family::K2t(t) => adj
            .iter()
            .any(|(y, ny)| *y != main && ny.intersection(nm).count() >= t),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PreconditionReport {
    pub scaffold: bool,
    pub no_threat: bool,
    /// P1 has no core with center c and main vertex x.
    pub cond_ii: bool,
    /// P1 has no core with center x and main vertex c.
    pub cond_iii: bool,
}

impl PreconditionReport {
    pub fn holds(&self) -> bool {
        self.scaffold && self.no_threat && self.cond_ii && self.cond_iii
    }
}

pub fn precondition_report(
    state: &GameState,
    c: Vertex,
    x: Vertex,
    y: Vertex,
    family: Family,
) -> Result<PreconditionReport, StrategyError> {
    let pool = state.pool_size();
    if c >= pool || x >= pool || y >= pool {
        return Err(StrategyError::Domain(format!(
            "roles ({c}, {x}, {y}) outside the pool 0..{pool}"
        )));
    }
    if c == x || c == y || x == y {
        return Err(StrategyError::Domain(format!("roles ({c}, {x}, {y}) repeat a vertex")));
    }
    let p1 = state.edges(Player::P1);
    Ok(PreconditionReport {
        scaffold: has_scaffold(state.edges(Player::P2), family, c, x, y),
        no_threat: !state.has_threat(Player::P1),
        cond_ii: !has_core(p1, family, c, x),
        cond_iii: !has_core(p1, family, x, c),
    })
}

pub fn distraction_precondition(
    state: &GameState,
    c: Vertex,
    x: Vertex,
    y: Vertex,
    family: Family,
) -> Result<bool, StrategyError> {
    Ok(precondition_report(state, c, x, y, family)?.holds())
}

/// Tries the roles as given, then with the main vertices exchanged.
pub fn choose_orientation(
    state: &GameState,
    family: Family,
    c: Vertex,
    m1: Vertex,
    m2: Vertex,
) -> Result<Option<(Vertex, Vertex, Vertex)>, StrategyError> {
    for (x, y) in [(m1, m2), (m2, m1)] {
        if distraction_precondition(state, c, x, y, family)? {
            return Ok(Some((c, x, y)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistractionContext {
    pub family: Family,
    pub c: Vertex,
    pub x: Vertex,
    pub y: Vertex,
    /// The fresh vertices a_i used so far.
    pub fresh: Vec<Vertex>,
}

impl DistractionContext {
    pub fn new(family: Family, (c, x, y): (Vertex, Vertex, Vertex)) -> Self {
        DistractionContext {
            family,
            c,
            x,
            y,
            fresh: Vec::new(),
        }
    }

    pub(crate) fn mark(&self, marks: &mut MemoryMarks, base: u16) {
        marks.vertices.push((self.c, base));
        marks.vertices.push((self.x, base + 1));
        marks.vertices.push((self.y, base + 2));
        for &a in &self.fresh {
            marks.vertices.push((a, base + 3));
        }
    }
}

/// One distraction step: claim a pending c x a_i if P1 left it open,
/// otherwise c y a for the lowest fresh a.
pub fn distraction_move(state: &GameState, ctx: &mut DistractionContext) -> StrategyDecision {
    let (c, x, y) = (ctx.c, ctx.x, ctx.y);
    for &a in &ctx.fresh {
        let e = edge3(c, x, a);
        if state.is_free(&e) && state.edges(Player::P2).contains(&edge3(c, y, a)) {
            let mut d = StrategyDecision::new(e, "Distraction win");
            d.distraction = true;
            return d;
        }
    }
    let a = state.fresh_vertex();
    ctx.fresh.push(a);
    let mut d = StrategyDecision::new(edge3(c, y, a), "Distraction loop");
    d.distraction = true;
    d
}

/// Standalone distraction player. Without explicit roles it looks for a
/// scaffold in P2's edges on its first move.
#[derive(Clone, Debug)]
pub struct DistractionStrategy {
    roles: Option<(Vertex, Vertex, Vertex)>,
    ctx: Option<DistractionContext>,
}

impl DistractionStrategy {
    pub fn new() -> Self {
        DistractionStrategy {
            roles: None,
            ctx: None,
        }
    }

    pub fn with_roles(c: Vertex, x: Vertex, y: Vertex) -> Self {
        DistractionStrategy {
            roles: Some((c, x, y)),
            ctx: None,
        }
    }

    fn discover(state: &GameState, family: Family) -> Result<(Vertex, Vertex, Vertex), StrategyError> {
        let p2 = state.edges(Player::P2);
        let centers: BTreeSet<Vertex> = p2.iter().flat_map(|e| e.vertices().to_vec()).collect();
        for &c in &centers {
            let adj = board(p2, c);
            let vs: Vec<Vertex> = adj.keys().copied().collect();
            for (i, &m1) in vs.iter().enumerate() {
                for &m2 in &vs[i + 1..] {
                    if !has_scaffold(p2, family, c, m1, m2) {
                        continue;
                    }
                    if let Some(r) = choose_orientation(state, family, c, m1, m2)? {
                        return Ok(r);
                    }
                }
            }
        }
        Err(StrategyError::InapplicableState(
            "no scaffold satisfying the distraction precondition".into(),
        ))
    }
}

impl Default for DistractionStrategy {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for DistractionStrategy {
    fn name(&self) -> String {
        "distraction".into()
    }

    fn seat(&self) -> Player {
        Player::P2
    }

    fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        check_turn(Player::P2, state)?;
        let family = Family::for_target(state.target())?;
        let mut audits = Vec::new();
        if self.ctx.is_none() {
            let roles = match self.roles {
                Some((c, x, y)) => match choose_orientation(state, family, c, x, y)? {
                    Some(r) => r,
                    None => {
                        audits.push(AuditFailure {
                            check: AuditCheck::DistractionPrecondition,
                            detail: format!("roles ({c}, {x}, {y}) fail in both orientations"),
                        });
                        (c, x, y)
                    }
                },
                None => Self::discover(state, family)?,
            };
            self.ctx = Some(DistractionContext::new(family, roles));
        }
        let ob = Obligations::of(state, Player::P2);
        let ctx = self.ctx.as_mut().expect("context set above");
        let mut d = match ob.forced(None) {
            Some(d) => d,
            None => distraction_move(state, ctx),
        };
        d.audits.extend(audits);
        ob.audit(&mut d);
        Ok(d)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn marks(&self) -> MemoryMarks {
        let mut m = MemoryMarks::default();
        if let Some(ctx) = &self.ctx {
            ctx.mark(&mut m, 1);
            m.digest = digest_of(&(ctx.family, ctx.fresh.len()));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;
    use crate::hypercore::hat_k24_3;

    fn play(g: &mut GameState, p: Player, v: [Vertex; 3]) {
        g.play(p, edge3(v[0], v[1], v[2])).unwrap();
    }

    /// P2 builds c=0, x=1, y=2 with commons 3, 4, 5 while P1 plays far away.
    fn scaffold_state() -> GameState {
        let mut g = new_game(hat_k24_3(), None);
        let p2 = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [0, 1, 4], [0, 2, 4], [0, 1, 5], [0, 2, 5]];
        for (i, m) in p2.iter().enumerate() {
            let f = 10 + 3 * i as Vertex;
            play(&mut g, Player::P1, [f, f + 1, f + 2]);
            play(&mut g, Player::P2, *m);
        }
        play(&mut g, Player::P1, [40, 41, 42]);
        g
    }

    #[test]
    fn precondition_on_clean_scaffold() {
        let g = scaffold_state();
        let r = precondition_report(&g, 0, 1, 2, Family::K24).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(!distraction_precondition(&g, 0, 1, 6, Family::K24).unwrap());
        assert!(matches!(
            distraction_precondition(&g, 0, 1, 500, Family::K24),
            Err(StrategyError::Domain(_))
        ));
    }

    #[test]
    fn p1_core_breaks_condition_ii() {
        // P1 owns a hatK23 with center 0 and main 1 on vertices 6..9
        let mut g = new_game(hat_k24_3(), None);
        let p1 = [[0, 1, 6], [0, 1, 7], [0, 6, 7], [0, 1, 8], [0, 6, 8], [0, 1, 9], [0, 6, 9]];
        let p2 = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [0, 1, 4], [0, 2, 4], [0, 1, 5], [0, 2, 5]];
        for i in 0..7 {
            play(&mut g, Player::P1, p1[i]);
            play(&mut g, Player::P2, p2[i]);
        }
        play(&mut g, Player::P1, [40, 41, 42]);
        let r = precondition_report(&g, 0, 1, 2, Family::K24).unwrap();
        assert!(r.scaffold && r.no_threat && !r.cond_ii);
        // seven edges are one short of a threat; the swapped orientation passes
        assert_eq!(choose_orientation(&g, Family::K24, 0, 1, 2).unwrap(), Some((0, 2, 1)));
    }

    #[test]
    fn loop_claims_fresh_and_wins_when_unblocked() {
        let mut g = scaffold_state();
        let mut s = DistractionStrategy::with_roles(0, 1, 2);
        let d = s.decide(&g).unwrap();
        let a1 = g.fresh_vertex();
        assert_eq!(d.edge, edge3(0, 2, a1));
        assert!(d.distraction && d.audits.is_empty());
        g.play(Player::P2, d.edge).unwrap();
        g.play(Player::P1, edge3(50, 51, 52)).unwrap();
        let d = s.decide(&g).unwrap();
        assert_eq!(d.edge, edge3(0, 1, a1));
        g.play(Player::P2, d.edge).unwrap();
        assert_eq!(g.status().winner(), Some(Player::P2));
    }
}
