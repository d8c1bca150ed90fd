//! P2's drawing strategy for G_t, the lifted K_{2,t+1}(t-2).
//!
//! Opening: 2t-1 edges x1 x2 y_i. At T1 P2 fixes x_C and a fresh z and
//! claims x_C z y_1. At T2 he either keeps claiming x_C z y_i (Case 1) or
//! first runs the blocking algorithm on the set A (Case 2). Both end in the
//! distraction loop with center x_C and main vertices x_M, z.

use std::collections::BTreeSet;

use super::distraction::{choose_orientation, distraction_move, DistractionContext, Family};
use super::{
    check_turn, digest_of, edge3, AuditCheck, AuditFailure, MemoryMarks, Obligations, Strategy,
    StrategyDecision, StrategyError,
};
use crate::game::{GameState, Player};
use crate::hypercore::{EdgeIndex, HEdge, OverlapSearch, Slot, Vertex};

const COPY_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    Opening,
    AfterT1,
    Case1,
    Case2,
    Distraction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Roles {
    center: Vertex,
    mains: [Vertex; 2],
}

#[derive(Clone, Debug)]
struct Memory {
    phase: Phase,
    x1: Vertex,
    x2: Vertex,
    ys: Vec<Vertex>,
    xc: Vertex,
    xm: Vertex,
    z: Vertex,
    a1: Vertex,
    a2: Vertex,
    am: Vertex,
    a_set: BTreeSet<HEdge>,
    s: (usize, usize, usize),
    e1: Vec<HEdge>,
    e2: Vec<HEdge>,
    e3: Vec<HEdge>,
    distraction: Option<DistractionContext>,
}

#[derive(Clone, Debug)]
pub struct K2tStrategy {
    t: usize,
    mem: Memory,
}

impl K2tStrategy {
    pub fn new(t: usize) -> Result<Self, StrategyError> {
        if t < 3 {
            return Err(StrategyError::BadSpec(format!("k2t needs t >= 3, got {t}")));
        }
        Ok(K2tStrategy {
            t,
            mem: Memory {
                phase: Phase::Opening,
                x1: 0,
                x2: 0,
                ys: Vec::new(),
                xc: 0,
                xm: 0,
                z: 0,
                a1: 0,
                a2: 0,
                am: 0,
                a_set: BTreeSet::new(),
                s: (0, 0, 0),
                e1: Vec::new(),
                e2: Vec::new(),
                e3: Vec::new(),
                distraction: None,
            },
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Edges of A still claimed by neither player.
    pub fn free_a(&self, state: &GameState) -> usize {
        self.mem.a_set.iter().filter(|e| state.is_free(e)).count()
    }

    /// The split of P1's a1-board at T2 into (s1, s', s''), once in Case 2.
    pub fn split(&self) -> Option<(usize, usize, usize)> {
        (self.mem.phase == Phase::Case2
            || (self.mem.phase == Phase::Distraction && !self.mem.a_set.is_empty()))
        .then_some(self.mem.s)
    }

    /// Role triples of all copies holding at least `threshold` P1 edges.
    fn tight_roles(&self, state: &GameState, threshold: usize) -> BTreeSet<Roles> {
        let target = state.target();
        let center = target.centers()[0] as usize;
        let mains = target.mains();
        let mut out = BTreeSet::new();
        if let Some(star) = state.rules().double_star() {
            let (c, xy) = star.roles();
            let same = c as usize == center && (xy == [mains[0], mains[1]] || xy == [mains[1], mains[0]]);
            let own = EdgeIndex::new(state.edges(Player::P1));
            let opp = EdgeIndex::new(state.edges(Player::P2));
            if let Some(frames) = same.then(|| star.heavy_frames(&own, &opp, threshold)).flatten() {
                return frames
                    .into_iter()
                    .map(|(c, a, b)| Roles {
                        center: c,
                        mains: [a.min(b), a.max(b)],
                    })
                    .collect();
            }
        }
        let mut search = OverlapSearch::new(target, state.edges(Player::P1), state.edges(Player::P2));
        search.collect(threshold, COPY_BUDGET, &mut |copy| {
            let seen = |i: usize| match copy.slots[i] {
                Slot::Seen(v) => Some(v),
                Slot::Fresh => None,
            };
            if let (Some(c), Some(m1), Some(m2)) =
                (seen(center), seen(mains[0] as usize), seen(mains[1] as usize))
            {
                out.insert(Roles {
                    center: c,
                    mains: [m1.min(m2), m1.max(m2)],
                });
            }
            true
        });
        out
    }

    fn opening(&mut self, state: &GameState) -> StrategyDecision {
        let m = &mut self.mem;
        let f = state.fresh_vertex();
        if m.ys.is_empty() {
            m.x1 = f;
            m.x2 = f + 1;
            m.ys.push(f + 2);
        } else {
            m.ys.push(f);
        }
        StrategyDecision::new(
            edge3(m.x1, m.x2, *m.ys.last().unwrap()),
            format!("Opening x1x2y{}", m.ys.len()),
        )
    }

    /// Move 2t: choose x_C and a fresh z, claim x_C z y_1.
    fn at_t1(&mut self, state: &GameState) -> StrategyDecision {
        let t = self.t;
        let (x1, x2) = (self.mem.x1, self.mem.x2);
        let mut audits = Vec::new();
        let mut excluded = BTreeSet::new();
        if state.progress(Player::P1) == 2 * t {
            let roles = self.tight_roles(state, 2 * t);
            let first = state.move_log()[0].1;
            for r in &roles {
                // the main outside P1's first edge
                for m in r.mains {
                    if !first.contains(m) && (m == x1 || m == x2) {
                        excluded.insert(m);
                    }
                }
            }
            if roles.len() > 1 {
                audits.push(AuditFailure {
                    check: AuditCheck::TightCopy,
                    detail: format!("{} role triples attain 2t at T1", roles.len()),
                });
            }
        }
        let mut cands: Vec<Vertex> = [x1, x2].into_iter().filter(|v| !excluded.contains(v)).collect();
        if cands.is_empty() {
            cands = vec![x1, x2];
        }
        let xc = *cands
            .iter()
            .min_by_key(|&&v| (state.degree(Player::P1, v), v))
            .unwrap();
        let m = &mut self.mem;
        m.xc = xc;
        m.xm = if xc == x1 { x2 } else { x1 };
        m.z = state.fresh_vertex();
        m.phase = Phase::AfterT1;
        let mut d = StrategyDecision::new(edge3(m.xc, m.z, m.ys[0]), "T1 x_C z y1");
        d.audits = audits;
        d
    }

    /// Case split at T2.
    fn at_t2(&mut self, state: &GameState) -> Result<(), StrategyError> {
        let t = self.t;
        if state.progress(Player::P1) < 2 * t + 1 {
            self.mem.phase = Phase::Case1;
            return Ok(());
        }
        let roles = self.tight_roles(state, 2 * t + 1);
        let Some(r) = roles.iter().next().copied() else {
            return Err(StrategyError::InapplicableState(
                "measure 2t+1 but no copy found".into(),
            ));
        };
        let first = state.move_log()[0].1;
        let (a2, am) = if first.contains(r.mains[1]) && !first.contains(r.mains[0]) {
            (r.mains[1], r.mains[0])
        } else {
            (r.mains[0], r.mains[1])
        };
        let a1 = r.center;
        let p1 = state.edges(Player::P1);
        let mut only2 = Vec::new();
        let mut only_m = Vec::new();
        let mut both = 0;
        let mut vs: BTreeSet<Vertex> = BTreeSet::new();
        for e in p1 {
            if e.contains(a1) && (e.contains(a2) ^ e.contains(am)) {
                vs.extend(e.vertices().iter().copied().filter(|&v| v != a1 && v != a2 && v != am));
            }
        }
        for v in vs {
            match (p1.contains(&edge3(a1, a2, v)), p1.contains(&edge3(a1, am, v))) {
                (true, true) => both += 1,
                (true, false) => only2.push(v),
                (false, true) => only_m.push(v),
                (false, false) => {}
            }
        }
        let m = &mut self.mem;
        m.a1 = a1;
        m.a2 = a2;
        m.am = am;
        m.s = (both, only2.len(), only_m.len());
        m.a_set = only2
            .iter()
            .map(|&v| edge3(a1, am, v))
            .chain(only_m.iter().map(|&v| edge3(a1, a2, v)))
            .collect();
        m.phase = Phase::Case2;
        Ok(())
    }

    /// Rule (iii): the lowest free x_C z y_i.
    fn rule_iii(&self, state: &GameState) -> Option<HEdge> {
        let m = &self.mem;
        m.ys.iter()
            .map(|&y| edge3(m.xc, m.z, y))
            .find(|e| state.is_free(e))
    }

    /// Algorithm parts (i) and (ii), keyed on P1's last edge.
    fn rule_i_ii(&self, state: &GameState) -> Option<(HEdge, u8)> {
        let m = &self.mem;
        let (_, last) = *state.move_log().last()?;
        if m.a_set.contains(&last) {
            return m
                .a_set
                .iter()
                .find(|e| state.is_free(e))
                .map(|e| (*e, 1));
        }
        if !last.contains(m.a1) {
            return None;
        }
        let v = last
            .vertices()
            .iter()
            .copied()
            .find(|&v| v != m.a1 && v != m.a2 && v != m.am)?;
        let (with2, with_m) = (edge3(m.a1, m.a2, v), edge3(m.a1, m.am, v));
        let partner = if last == with2 {
            with_m
        } else if last == with_m {
            with2
        } else {
            return None;
        };
        if m.a_set.contains(&with2) || m.a_set.contains(&with_m) || !state.is_free(&partner) {
            return None;
        }
        Some((partner, 2))
    }

    fn enter_distraction(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        let (c, x, y) = (self.mem.xc, self.mem.xm, self.mem.z);
        let family = Family::K2t(self.t);
        let mut audits = Vec::new();
        let roles = match choose_orientation(state, family, c, x, y)? {
            Some(r) => r,
            None => {
                audits.push(AuditFailure {
                    check: AuditCheck::DistractionPrecondition,
                    detail: format!("scaffold ({c}, {x}, {y}) fails in both orientations"),
                });
                (c, x, y)
            }
        };
        let mut ctx = DistractionContext::new(family, roles);
        let mut d = distraction_move(state, &mut ctx);
        d.tag = format!("{} -> Distraction", self.case_tag());
        d.audits = audits;
        self.mem.distraction = Some(ctx);
        self.mem.phase = Phase::Distraction;
        Ok(d)
    }

    fn case_tag(&self) -> &'static str {
        match self.mem.phase {
            Phase::Case1 => "Case 1",
            Phase::Case2 => "Case 2",
            Phase::Distraction => "Distraction",
            _ => "Opening",
        }
    }
}

impl Strategy for K2tStrategy {
    fn name(&self) -> String {
        format!("k2t:{}", self.t)
    }

    fn seat(&self) -> Player {
        Player::P2
    }

    fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, StrategyError> {
        check_turn(Player::P2, state)?;
        let t = self.t;
        if state.target().name() != format!("k2t{t}") {
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
        if self.mem.phase == Phase::Opening {
            let mut d = match ob.forced(None) {
                Some(d) => d,
                None if m < 2 * t => self.opening(state),
                None => self.at_t1(state),
            };
            ob.audit(&mut d);
            return Ok(d);
        }
        if self.mem.phase == Phase::AfterT1 {
            self.at_t2(state)?;
        }
        let last = state.move_log().last().map(|(_, e)| *e);
        let flag = if self.mem.phase == Phase::Case2
            && last == Some(edge3(self.mem.a1, self.mem.a2, self.mem.am))
        {
            " (P1 took a1a2aM)"
        } else {
            ""
        };

        let mut d = if let Some(mut d) = ob.forced(self.rule_iii(state)) {
            d.tag = format!("{} {}{flag}", self.case_tag(), d.tag);
            d
        } else if self.mem.phase == Phase::Case2 && m == 2 * t + 1 {
            // first Case 2 move: any edge of A, making the free count even
            let pick = if self.free_a(state) % 2 == 1 {
                self.mem.a_set.iter().find(|e| state.is_free(e)).copied()
            } else {
                None
            };
            match pick.or_else(|| self.rule_iii(state)) {
                Some(e) => StrategyDecision::new(e, "Case 2 A"),
                None => return Err(StrategyError::InapplicableState("no move at T2".into())),
            }
        } else {
            let part = if self.mem.phase == Phase::Case2 {
                self.rule_i_ii(state)
            } else {
                None
            };
            match part {
                Some((e, 1)) => {
                    let mut d = StrategyDecision::new(e, format!("Case 2 (i){flag}"));
                    self.mem.e1.extend(last);
                    let left = self.free_a(state) - 1;
                    if left % 2 != 0 {
                        d.audits.push(AuditFailure {
                            check: AuditCheck::AParity,
                            detail: format!("{left} free edges of A after a part (i) reply"),
                        });
                    }
                    d
                }
                Some((e, _)) => {
                    self.mem.e2.extend(last);
                    StrategyDecision::new(e, format!("Case 2 (ii){flag}"))
                }
                None => match self.rule_iii(state) {
                    Some(e) => {
                        if self.mem.phase == Phase::Case2 {
                            self.mem.e3.extend(last);
                        }
                        let tag = if self.mem.phase == Phase::Case2 {
                            format!("Case 2 (iii){flag}")
                        } else {
                            "Case 1 x_C z y_i".to_string()
                        };
                        StrategyDecision::new(e, tag)
                    }
                    None => self.enter_distraction(state)?,
                },
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
        if m.ys.is_empty() {
            return marks;
        }
        marks.vertices.push((m.x1, 1));
        marks.vertices.push((m.x2, 2));
        for (i, &y) in m.ys.iter().enumerate() {
            marks.vertices.push((y, 3 + i as u16));
        }
        if m.phase != Phase::Opening {
            marks.vertices.push((m.z, 40));
        }
        if !m.a_set.is_empty() {
            marks.vertices.push((m.a1, 41));
            marks.vertices.push((m.a2, 42));
            marks.vertices.push((m.am, 43));
            for e in &m.a_set {
                marks.edges.push((*e, 1));
            }
        }
        if let Some(ctx) = &m.distraction {
            ctx.mark(&mut marks, 50);
        }
        marks.digest = digest_of(&(
            self.t,
            m.phase,
            m.xc == m.x1,
            m.distraction.as_ref().map(|c| c.fresh.len()),
        ));
        marks
    }
}
