//! Bounded adversarial search: every P1 line up to a depth against a P2
//! strategy, one representative per orbit of P1 moves.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use dashmap::DashMap;
use rayon::prelude::*;

use super::canon::{canonical_form_with, CanonKey};
use super::playout::reply_violations;
use super::report::{Outcome, VerifyReport};
use crate::game::{GameState, Player, Rules};
use crate::hypercore::{HEdge, TargetGraph, Vertex};
use crate::strategy::Strategy;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// P1 moves explored along every line.
    pub p1_depth: usize,
    /// Placeholder fresh vertices a P1 move may use, at most the arity.
    pub fresh_budget: usize,
    /// Keep one P1 move per orbit of the position's automorphisms.
    pub reduce: bool,
    pub transpositions: bool,
    /// P1 moves stay below this vertex id.
    pub max_pool: Option<Vertex>,
}

impl SearchOptions {
    pub fn new(p1_depth: usize, fresh_budget: usize) -> Self {
        SearchOptions {
            p1_depth,
            fresh_budget,
            reduce: true,
            transpositions: true,
            max_pool: None,
        }
    }
}

/// Everything a search reports, plus the number of P1 branches explored
/// at each depth.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub report: VerifyReport,
    pub branches: Vec<u64>,
}

type Trace = Vec<(Player, HEdge)>;

struct Ctx {
    opts: SearchOptions,
    tt: DashMap<CanonKey, usize>,
    expanded: AtomicU64,
    reductions: AtomicU64,
    hits: AtomicU64,
    branches: Vec<AtomicU64>,
    violations: Mutex<Vec<String>>,
    found: Mutex<Option<Trace>>,
    stop: AtomicBool,
}

/// P1's candidate moves: all free edges over the pool and up to
/// `min(k, fresh_budget)` fresh vertices, with fresh ids consecutive from
/// the pool size.
pub fn candidate_moves(state: &GameState, fresh_budget: usize, max_pool: Option<Vertex>) -> Vec<HEdge> {
    let k = state.arity();
    let pool = state.pool_size();
    let top = pool + k.min(fresh_budget) as Vertex;
    let top = max_pool.map_or(top, |m| top.min(m));
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(k);
    fn rec(from: Vertex, top: Vertex, k: usize, pick: &mut Vec<Vertex>, f: &mut dyn FnMut(&[Vertex])) {
        if pick.len() == k {
            f(pick);
            return;
        }
        for v in from..top {
            pick.push(v);
            rec(v + 1, top, k, pick, f);
            pick.pop();
        }
    }
    rec(0, top, k, &mut pick, &mut |vs| {
        // fresh vertices must be pool, pool+1, ...
        let fresh = vs.iter().filter(|&&v| v >= pool).count() as Vertex;
        if vs.iter().any(|&v| v >= pool + fresh) {
            return;
        }
        let e = HEdge::new(vs).expect("distinct");
        if state.is_free(&e) {
            out.push(e);
        }
    });
    out
}

impl Ctx {
    fn violation(&self, msg: String) {
        self.violations.lock().expect("lock").push(msg);
    }

    fn node(&self, state: &GameState, p2: &dyn Strategy, left: usize, level: usize) {
        if self.stop.load(Ordering::Relaxed) {
            return;
        }
        self.expanded.fetch_add(1, Ordering::Relaxed);
        let key = self.opts.transpositions.then(|| canonical_form_with(state, &p2.marks()));
        if let Some(k) = &key {
            if self.tt.get(k).is_some_and(|d| *d >= left) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return;
            }
        }
        let cands = candidate_moves(state, self.opts.fresh_budget, self.opts.max_pool);
        let total = cands.len();
        let moves = if self.opts.reduce {
            let marks = p2.marks();
            let mut seen = std::collections::HashSet::new();
            cands
                .into_iter()
                .filter(|e| {
                    let next = state.apply_move(Player::P1, *e).expect("candidate is free");
                    seen.insert(canonical_form_with(&next, &marks))
                })
                .collect::<Vec<_>>()
        } else {
            cands
        };
        self.reductions.fetch_add((total - moves.len()) as u64, Ordering::Relaxed);
        self.branches[level].fetch_add(moves.len() as u64, Ordering::Relaxed);
        moves.par_iter().for_each(|e| self.branch(state, p2, *e, left, level));
        if let Some(k) = key {
            if !self.stop.load(Ordering::Relaxed) {
                let mut d = self.tt.entry(k).or_insert(left);
                *d = (*d).max(left);
            }
        }
    }

    fn branch(&self, state: &GameState, p2: &dyn Strategy, e: HEdge, left: usize, level: usize) {
        if self.stop.load(Ordering::Relaxed) {
            return;
        }
        let mut s = state.clone();
        s.play(Player::P1, e).expect("candidate is free");
        if s.status().winner() == Some(Player::P1) {
            let mut found = self.found.lock().expect("lock");
            found.get_or_insert_with(|| s.move_log().to_vec());
            self.stop.store(true, Ordering::Relaxed);
            return;
        }
        if s.status().is_over() {
            return;
        }
        let mut p2 = p2.clone_box();
        let d = match p2.decide(&s) {
            Ok(d) => d,
            Err(err) => {
                self.violation(format!("after {:?}: {err}", s.move_log()));
                return;
            }
        };
        for v in reply_violations(&s, &d) {
            self.violation(format!("after {:?}: {v}", s.move_log()));
        }
        if let Err(err) = s.play(Player::P2, d.edge) {
            self.violation(format!("after {:?}: {err}", s.move_log()));
            return;
        }
        if left > 1 && !s.status().is_over() {
            self.node(&s, &*p2, left - 1, level + 1);
        }
    }
}

/// Replays P1's moves against a fresh copy of the strategy; the log if P1
/// completes a copy.
pub fn replay_p1(proto: &dyn Strategy, rules: &Arc<Rules>, p1: &[HEdge]) -> Option<Trace> {
    let mut g = GameState::new(rules.clone(), None);
    let mut p2 = proto.clone_box();
    for e in p1 {
        if g.status().is_over() || !g.is_free(e) {
            return None;
        }
        g.play(Player::P1, *e).ok()?;
        if g.status().winner() == Some(Player::P1) {
            return Some(g.move_log().to_vec());
        }
        if g.status().is_over() {
            return None;
        }
        let d = p2.decide(&g).ok()?;
        g.play(Player::P2, d.edge).ok()?;
    }
    None
}

/// Drops P1 moves one at a time while P1 still wins.
pub fn minimize_counterexample(proto: &dyn Strategy, rules: &Arc<Rules>, trace: &[(Player, HEdge)]) -> Trace {
    let mut moves: Vec<HEdge> = trace.iter().filter(|m| m.0 == Player::P1).map(|m| m.1).collect();
    let mut best = replay_p1(proto, rules, &moves).unwrap_or_else(|| trace.to_vec());
    'outer: loop {
        for i in 0..moves.len() {
            let mut fewer = moves.clone();
            fewer.remove(i);
            if let Some(t) = replay_p1(proto, rules, &fewer) {
                moves = fewer;
                best = t;
                continue 'outer;
            }
        }
        return best;
    }
}

pub fn exhaustive_search(strategy: &dyn Strategy, target: &TargetGraph, opts: SearchOptions) -> SearchResult {
    let start = Instant::now();
    let rules = Arc::new(Rules::new(target.clone()));
    let ctx = Ctx {
        opts,
        tt: DashMap::new(),
        expanded: AtomicU64::new(0),
        reductions: AtomicU64::new(0),
        hits: AtomicU64::new(0),
        branches: (0..opts.p1_depth).map(|_| AtomicU64::new(0)).collect(),
        violations: Mutex::new(Vec::new()),
        found: Mutex::new(None),
        stop: AtomicBool::new(false),
    };
    if opts.p1_depth > 0 {
        ctx.node(&GameState::new(rules.clone(), None), strategy, opts.p1_depth, 0);
    }
    let mut report = VerifyReport::new(&strategy.name(), target.name(), opts.p1_depth);
    report.states_expanded = ctx.expanded.into_inner();
    report.orbit_reductions = ctx.reductions.into_inner();
    report.transposition_hits = ctx.hits.into_inner();
    report.invariant_violations = ctx.violations.into_inner().expect("lock");
    report.invariant_violations.sort();
    if let Some(trace) = ctx.found.into_inner().expect("lock") {
        report.outcome = Outcome::CounterexampleTrace(minimize_counterexample(strategy, &rules, &trace));
    }
    report.wall_time_ms = start.elapsed().as_millis();
    SearchResult {
        report,
        branches: ctx.branches.into_iter().map(AtomicU64::into_inner).collect(),
    }
}

/// Orbit-reduced search with transpositions over every P1 line of
/// `p1_depth` moves.
pub fn exhaustive_verify(
    strategy: &dyn Strategy,
    target: &TargetGraph,
    p1_depth: usize,
    fresh_budget: usize,
) -> VerifyReport {
    exhaustive_search(strategy, target, SearchOptions::new(p1_depth, fresh_budget)).report
}
