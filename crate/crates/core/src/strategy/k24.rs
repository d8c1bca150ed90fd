//! P2's drawing strategy for the lifted K̂_{2,4}.
//!
//! Opening: five edges a b v_i on fresh vertices. After P1's sixth edge
//! the machine splits on the sets F_a, F_b, builds a lifted K̂_{2,3} on the
//! c-board (Case 1) or the a-board (Case 2), and hands over to the
//! distraction loop. Wins and blocks take priority over the script at
//! every move.

use std::collections::BTreeSet;

use super::distraction::{choose_orientation, distraction_move, has_scaffold, DistractionContext, Family};
use super::{
    check_turn, digest_of, edge3, AuditCheck, AuditFailure, MemoryMarks, Obligations, Strategy,
    StrategyDecision, StrategyError,
};
use crate::game::{GameState, Player};
use crate::hypercore::{k2t_plain, EdgeIndex, HEdge, Matcher, Vertex};

/// Anchors `v_i` such that no P1 edge `v v_i v_j` joins them to another
/// anchor on the v-board.
pub fn compute_f(state: &GameState, v: Vertex, anchors: &[Vertex]) -> Vec<Vertex> {
    let p1 = state.edges(Player::P1);
    anchors
        .iter()
        .copied()
        .filter(|&vi| {
            anchors
                .iter()
                .filter(|&&vj| vj != vi && vj != v && vi != v)
                .all(|&vj| !p1.contains(&edge3(v, vi, vj)))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    Opening,
    Case1,
    Case2,
    Distraction,
}

#[derive(Clone, Debug)]
struct Memory {
    phase: Phase,
    a: Vertex,
    b: Vertex,
    anchors: Vec<Vertex>,
    z: Option<HEdge>,
    e_star: Option<HEdge>,
    // Case 1
    c: Vertex,
    x: Vertex,
    pair: (Vertex, Vertex),
    v5: Option<Vertex>,
    vk: Option<Vertex>,
    t2: Option<&'static str>,
    // Case 2: v1..v5 after relabeling
    labels: [Vertex; 5],
    distraction: Option<DistractionContext>,
}

impl Default for Memory {
    fn default() -> Self {
        Memory {
            phase: Phase::Opening,
            a: 0,
            b: 0,
            anchors: Vec::new(),
            z: None,
            e_star: None,
            c: 0,
            x: 0,
            pair: (0, 0),
            v5: None,
            vk: None,
            t2: None,
            labels: [0; 5],
            distraction: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct K24Strategy {
    mem: Memory,
}

impl K24Strategy {
    pub fn new() -> Self {
        Self::default()
    }

    fn anchor_index(&self, v: Vertex) -> Option<usize> {
        self.mem.anchors.iter().position(|&w| w == v)
    }

    fn inapplicable<T>(&self, what: impl Into<String>) -> Result<T, StrategyError> {
        Err(StrategyError::InapplicableState(what.into()))
    }

    fn opening(&mut self, state: &GameState) -> StrategyDecision {
        let m = &mut self.mem;
        let f = state.fresh_vertex();
        if m.anchors.is_empty() {
            m.a = f;
            m.b = f + 1;
            m.anchors.push(f + 2);
        } else {
            m.anchors.push(f);
        }
        let log = state.move_log();
        m.z = log.first().map(|(_, e)| *e);
        if log.len() >= 3 {
            m.e_star = Some(log[2].1);
        }
        let v = *m.anchors.last().unwrap();
        StrategyDecision::new(edge3(m.a, m.b, v), format!("Opening abv{}", m.anchors.len()))
    }

    /// Case split at T1 and the sixth move.
    fn at_t1(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        let (a, b) = (self.mem.a, self.mem.b);
        let anchors = self.mem.anchors.clone();
        let fa = compute_f(state, a, &anchors);
        let fb = compute_f(state, b, &anchors);
        if fa.len() >= 2 || fb.len() >= 2 {
            let c = if fa.len() >= 2 && fb.len() >= 2 {
                match self.mem.e_star {
                    Some(e) if e.contains(a) && !e.contains(b) => b,
                    _ => a,
                }
            } else if fa.len() >= 2 {
                a
            } else {
                b
            };
            let x = if c == a { b } else { a };
            let mut fc = if c == a { fa } else { fb };
            fc.sort_by_key(|&v| (state.degree(Player::P1, v), v));
            let (p, q) = (fc[0], fc[1]);
            self.mem.phase = Phase::Case1;
            self.mem.c = c;
            self.mem.x = x;
            self.mem.pair = (p, q);
            return Ok(StrategyDecision::new(edge3(c, p, q), "Case 1 pair"));
        }
        // Case 2: two disjoint P1 pairs among the anchors on the a-board
        let p1 = state.edges(Player::P1);
        let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
        for (i, &u) in anchors.iter().enumerate() {
            for &w in &anchors[i + 1..] {
                if p1.contains(&edge3(a, u, w)) {
                    pairs.push((u.min(w), u.max(w)));
                }
            }
        }
        pairs.sort();
        let covered: BTreeSet<Vertex> = pairs.iter().flat_map(|&(u, w)| [u, w]).collect();
        if pairs.len() != 2 || covered.len() != 4 {
            return self.inapplicable(format!("Case 2 expects two disjoint a-board pairs, found {pairs:?}"));
        }
        let v5 = *anchors.iter().find(|v| !covered.contains(v)).unwrap();
        self.mem.labels = [pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1, v5];
        self.mem.phase = Phase::Case2;
        let [_, _, _, v4, v5] = self.mem.labels;
        Ok(StrategyDecision::new(edge3(a, v4, v5), "Case 2 av4v5"))
    }

    /// Seventh move of Case 1: pick v5 from the pair and claim c v_k v5.
    fn case1_anchor(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        let c = self.mem.c;
        let (p, q) = self.mem.pair;
        let others: Vec<Vertex> = self
            .mem
            .anchors
            .iter()
            .copied()
            .filter(|&w| w != p && w != q)
            .collect();
        let p1 = state.edges(Player::P1);
        let clean = |r: Vertex| others.iter().all(|&w| !p1.contains(&edge3(c, w, r)));
        let v5 = match (clean(p), clean(q)) {
            (true, true) => p.min(q),
            (true, false) => p,
            (false, true) => q,
            (false, false) => return self.inapplicable("both pair vertices touched on the c-board"),
        };
        let vk = *others
            .iter()
            .max_by_key(|&&w| (state.degree(Player::P1, w), std::cmp::Reverse(w)))
            .unwrap();
        self.mem.v5 = Some(v5);
        self.mem.vk = Some(vk);
        Ok(StrategyDecision::new(edge3(c, vk, v5), "Case 1 anchor"))
    }

    fn case1_t2_tag(&mut self, state: &GameState) -> &'static str {
        if let Some(t) = self.mem.t2 {
            return t;
        }
        let tag = match state.progress(Player::P1) {
            0..=6 => "Case 1.1",
            7 => "Case 1.4",
            _ => {
                let k24 = Matcher::for_target(&k2t_plain(4).expect("valid"));
                if k24.find_any(&EdgeIndex::new(state.edges(Player::P1))).is_some() {
                    "Case 1.2"
                } else {
                    "Case 1.3"
                }
            }
        };
        self.mem.t2 = Some(tag);
        tag
    }

    /// Next scripted edge once the opening and T1 are behind; `None` when
    /// no scripted edge is needed because the scaffold is complete.
    fn scripted(&self, state: &GameState) -> Result<Option<HEdge>, StrategyError> {
        let p2 = state.edges(Player::P2);
        match self.mem.phase {
            Phase::Case1 => {
                let (c, v5) = (self.mem.c, self.mem.v5.expect("set at move 7"));
                let vk = self.mem.vk.expect("set at move 7");
                let (p, q) = self.mem.pair;
                let v4 = if v5 == p { q } else { p };
                let rest = self
                    .mem
                    .anchors
                    .iter()
                    .copied()
                    .filter(|&w| w != v4 && w != v5 && w != vk);
                let mut free: Vec<HEdge> =
                    rest.map(|w| edge3(c, w, v5)).filter(|e| state.is_free(e)).collect();
                free.sort();
                match free.first() {
                    Some(e) => Ok(Some(*e)),
                    None => self.inapplicable("both c v_j v5 completions are taken"),
                }
            }
            Phase::Case2 => {
                let a = self.mem.a;
                let [v1, v2, v3, v4, v5] = self.mem.labels;
                let mine = |u: Vertex, w: Vertex| p2.contains(&edge3(a, u, w));
                let free = |u: Vertex, w: Vertex| state.is_free(&edge3(a, u, w));
                if !mine(v4, v5) {
                    return if free(v4, v5) {
                        Ok(Some(edge3(a, v4, v5)))
                    } else {
                        self.inapplicable("a v4 v5 taken before P2 could claim it")
                    };
                }
                if !mine(v1, v5) && !mine(v2, v5) {
                    return match [(v1, v5), (v2, v5)].into_iter().find(|&(u, w)| free(u, w)) {
                        Some((u, w)) => Ok(Some(edge3(a, u, w))),
                        None => self.inapplicable("a v1 v5 and a v2 v5 both taken"),
                    };
                }
                // h is the relabeled v1: the pair vertex P2 joined to v5
                let (h, h2) = if mine(v1, v5) { (v1, v2) } else { (v2, v1) };
                if let Some((u, w)) = [(h2, v5), (v3, v5)].into_iter().find(|&(u, w)| free(u, w)) {
                    return Ok(Some(edge3(a, u, w)));
                }
                if !mine(h, v4) {
                    return if free(h, v4) {
                        Ok(Some(edge3(a, h, v4)))
                    } else {
                        self.inapplicable("a v1 v4 taken in Case 2")
                    };
                }
                match [(h2, v4), (h, v3)].into_iter().find(|&(u, w)| free(u, w)) {
                    Some((u, w)) => Ok(Some(edge3(a, u, w))),
                    None => self.inapplicable("a v2 v4 and a v1 v3 both taken"),
                }
            }
            _ => Ok(None),
        }
    }

    /// Center and main vertices of a complete scaffold, if P2 has one.
    fn built_scaffold(&self, state: &GameState) -> Option<(Vertex, Vertex, Vertex)> {
        let p2 = state.edges(Player::P2);
        match self.mem.phase {
            Phase::Case1 => {
                let (c, x, v5) = (self.mem.c, self.mem.x, self.mem.v5?);
                has_scaffold(p2, Family::K24, c, x, v5).then_some((c, x, v5))
            }
            Phase::Case2 => {
                let (a, b) = (self.mem.a, self.mem.b);
                self.mem
                    .labels
                    .iter()
                    .rev()
                    .find(|&&m| has_scaffold(p2, Family::K24, a, b, m))
                    .map(|&m| (a, b, m))
            }
            _ => None,
        }
    }

    fn case_tag(&self) -> String {
        match self.mem.phase {
            Phase::Case1 => self.mem.t2.unwrap_or("Case 1").to_string(),
            Phase::Case2 => "Case 2".to_string(),
            Phase::Distraction => "Distraction".to_string(),
            Phase::Opening => "Opening".to_string(),
        }
    }
}

impl Strategy for K24Strategy {
    fn name(&self) -> String {
        "k24".into()
    }

    fn seat(&self) -> Player {
        Player::P2
    }

    fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        check_turn(Player::P2, state)?;
        if state.target().name() != "hatK24-3" {
            return Err(StrategyError::UnsupportedTarget(state.target().name().to_string()));
        }
        let ob = Obligations::of(state, Player::P2);
        let m = state.edges(Player::P2).len() + 1;

        if self.mem.phase == Phase::Distraction {
            let ctx = self.mem.distraction.as_mut().expect("set on entry");
            let mut d = ob.forced(None).unwrap_or_else(|| distraction_move(state, ctx));
            if !d.distraction {
                d.tag = format!("Distraction {}", d.tag);
            }
            ob.audit(&mut d);
            return Ok(d);
        }

        let mut d = if self.mem.phase == Phase::Opening && m <= 5 {
            match ob.forced(None) {
                Some(d) => d,
                None => self.opening(state),
            }
        } else if self.mem.phase == Phase::Opening {
            match ob.forced(None) {
                Some(d) => d,
                None => self.at_t1(state)?,
            }
        } else if self.mem.phase == Phase::Case1 && self.mem.v5.is_none() {
            match ob.forced(None) {
                Some(d) => d,
                None => self.case1_anchor(state)?,
            }
        } else {
            if self.mem.phase == Phase::Case1 {
                self.case1_t2_tag(state);
            }
            let scripted = if ob.blocks.is_empty() && ob.wins.is_empty() {
                None
            } else {
                self.scripted(state).ok().flatten()
            };
            if let Some(mut d) = ob.forced(scripted) {
                d.tag = format!("{} {}", self.case_tag(), d.tag);
                d
            } else if let Some((c, m1, m2)) = self.built_scaffold(state) {
                let mut audits = Vec::new();
                let roles = match choose_orientation(state, Family::K24, c, m1, m2)? {
                    Some(r) => r,
                    None => {
                        audits.push(AuditFailure {
                            check: AuditCheck::DistractionPrecondition,
                            detail: format!("scaffold ({c}, {m1}, {m2}) fails in both orientations"),
                        });
                        (c, m1, m2)
                    }
                };
                let mut ctx = DistractionContext::new(Family::K24, roles);
                let mut d = distraction_move(state, &mut ctx);
                d.tag = format!("{} -> Distraction", self.case_tag());
                d.audits = audits;
                self.mem.distraction = Some(ctx);
                self.mem.phase = Phase::Distraction;
                d
            } else {
                match self.scripted(state)? {
                    Some(e) => StrategyDecision::new(e, format!("{} scaffold", self.case_tag())),
                    None => return self.inapplicable("no scripted move"),
                }
            }
        };
        ob.audit(&mut d);
        Ok(d)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn marks(&self) -> MemoryMarks {
        let m = &self.mem;
        let mut marks = MemoryMarks::default();
        if m.anchors.is_empty() {
            return marks;
        }
        marks.vertices.push((m.a, 1));
        marks.vertices.push((m.b, 2));
        for (i, &v) in m.anchors.iter().enumerate() {
            marks.vertices.push((v, 3 + i as u16));
        }
        if let Some(z) = m.z {
            marks.edges.push((z, 1));
        }
        if let Some(e) = m.e_star {
            marks.edges.push((e, 2));
        }
        let idx = |v: Option<Vertex>| v.and_then(|v| self.anchor_index(v));
        let label_idx: Vec<Option<usize>> = m.labels.iter().map(|&v| self.anchor_index(v)).collect();
        if let Some(ctx) = &m.distraction {
            ctx.mark(&mut marks, 20);
        }
        marks.digest = digest_of(&(
            m.phase,
            m.c == m.a,
            idx(Some(m.pair.0)),
            idx(Some(m.pair.1)),
            idx(m.v5),
            idx(m.vk),
            m.t2,
            label_idx,
            m.distraction.as_ref().map(|c| c.fresh.len()),
        ));
        marks
    }
}
