//! Exact values of strong games on small complete boards.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::canon::{canonical_key, CanonKey, Colored};
use crate::hypercore::{HEdge, TargetGraph, Vertex};

pub const DEFAULT_EDGE_CAP: usize = 35;

/// Game value with the number of plies to the end under perfect play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameValue {
    P1Win(u32),
    P2Win(u32),
    Draw,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("board has {edges} edges, over the cap of {cap}")]
    TooLarge { edges: usize, cap: usize },
    #[error("bad board: {0}")]
    BadBoard(String),
}

/// Value for the player to move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Win(u32),
    Loss(u32),
    Draw,
}

impl Rel {
    fn flip(self) -> Rel {
        match self {
            Rel::Win(r) => Rel::Loss(r + 1),
            Rel::Loss(r) => Rel::Win(r + 1),
            Rel::Draw => Rel::Draw,
        }
    }

    /// Orders outcomes for the mover: fast wins first, slow losses last.
    fn score(self) -> i64 {
        match self {
            Rel::Win(r) => 1_000_000 - r as i64,
            Rel::Draw => 0,
            Rel::Loss(r) => -1_000_000 + r as i64,
        }
    }
}

pub struct Solver {
    k: usize,
    n: usize,
    edges: Vec<HEdge>,
    /// Edge sets of all copies of the target, by edge.
    copies: Vec<Vec<u64>>,
    memo: Option<HashMap<CanonKey, Rel>>,
    pub nodes: u64,
}

fn copies_of(target: &TargetGraph, n: usize, edges: &[HEdge]) -> Vec<u64> {
    let tv = target.vertex_count();
    let index: HashMap<HEdge, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut out = Vec::new();
    let mut map: Vec<Vertex> = Vec::new();
    let mut used = vec![false; n];
    fn rec(
        t: &TargetGraph,
        tv: usize,
        map: &mut Vec<Vertex>,
        used: &mut [bool],
        index: &HashMap<HEdge, usize>,
        out: &mut Vec<u64>,
    ) {
        if map.len() == tv {
            let mask = t
                .edges()
                .iter()
                .map(|e| 1u64 << index[&e.map(|v| map[v as usize])])
                .fold(0, |a, b| a | b);
            out.push(mask);
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                map.push(v as Vertex);
                rec(t, tv, map, used, index, out);
                map.pop();
                used[v] = false;
            }
        }
    }
    if tv <= n {
        rec(target, tv, &mut map, &mut used, &index, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

impl Solver {
    pub fn new(n: usize, target: &TargetGraph, cap: usize, memoize: bool) -> Result<Solver, SolveError> {
        let k = target.arity();
        let mut edges = Vec::new();
        let mut pick = Vec::new();
        fn rec(from: usize, n: usize, k: usize, pick: &mut Vec<Vertex>, out: &mut Vec<HEdge>) {
            if pick.len() == k {
                out.push(HEdge::new(pick).expect("distinct"));
                return;
            }
            for v in from..n {
                pick.push(v as Vertex);
                rec(v + 1, n, k, pick, out);
                pick.pop();
            }
        }
        if k == 0 || k > n.max(1) {
            return Err(SolveError::BadBoard(format!("{n} vertices cannot hold {k}-edges")));
        }
        // count before listing so huge boards are refused cheaply
        let count = (0..k).fold(1u128, |c, i| c * (n - i) as u128 / (i + 1) as u128);
        if count > cap as u128 || count > 64 {
            return Err(SolveError::TooLarge {
                edges: count as usize,
                cap: cap.min(64),
            });
        }
        rec(0, n, k, &mut pick, &mut edges);
        let all = copies_of(target, n, &edges);
        let copies = (0..edges.len())
            .map(|i| all.iter().copied().filter(|m| m >> i & 1 == 1).collect())
            .collect();
        Ok(Solver {
            k,
            n,
            edges,
            copies,
            memo: memoize.then(HashMap::new),
            nodes: 0,
        })
    }

    fn key(&self, mine: u64, theirs: u64) -> CanonKey {
        let colored = |mask: u64, c: u16| {
            (0..self.edges.len())
                .filter(move |&i| mask >> i & 1 == 1)
                .map(move |i| (self.edges[i], vec![c]))
        };
        canonical_key(&Colored {
            header: vec![self.k as u8, self.n as u8],
            vertex_labels: Vec::new(),
            edges: colored(mine, 1).chain(colored(theirs, 2)).collect(),
        })
    }

    fn value(&mut self, mine: u64, theirs: u64) -> Rel {
        self.nodes += 1;
        let full = if self.edges.len() == 64 { !0 } else { (1u64 << self.edges.len()) - 1 };
        let free = full & !(mine | theirs);
        if free == 0 {
            return Rel::Draw;
        }
        for i in 0..self.edges.len() {
            let with = mine | 1 << i;
            if free >> i & 1 == 1 && self.copies[i].iter().any(|&c| c & with == c) {
                return Rel::Win(1);
            }
        }
        let alive = |c: &u64, other: u64| c & other == 0;
        if !self.copies.iter().flatten().any(|c| alive(c, theirs) || alive(c, mine)) {
            return Rel::Draw;
        }
        let key = self.memo.as_ref().map(|_| self.key(mine, theirs));
        if let (Some(memo), Some(k)) = (&self.memo, &key) {
            if let Some(v) = memo.get(k) {
                return *v;
            }
        }
        let mut best: Option<Rel> = None;
        for i in 0..self.edges.len() {
            if free >> i & 1 == 0 {
                continue;
            }
            let v = self.value(theirs, mine | 1 << i).flip();
            if best.is_none_or(|b| v.score() > b.score()) {
                best = Some(v);
            }
            if v == Rel::Win(3) {
                // no faster win once immediate wins are ruled out
                break;
            }
        }
        let best = best.expect("a free edge");
        if let (Some(memo), Some(k)) = (&mut self.memo, key) {
            memo.insert(k, best);
        }
        best
    }

    pub fn solve(&mut self) -> GameValue {
        match self.value(0, 0) {
            Rel::Win(r) => GameValue::P1Win(r),
            Rel::Loss(r) => GameValue::P2Win(r),
            Rel::Draw => GameValue::Draw,
        }
    }
}

/// Minimax value of the strong game on the complete `target.arity()`-uniform
/// hypergraph with `board_vertices` vertices, memoized on canonical keys.
pub fn exact_solve(board_vertices: usize, target: &TargetGraph) -> Result<GameValue, SolveError> {
    exact_solve_capped(board_vertices, target, DEFAULT_EDGE_CAP)
}

pub fn exact_solve_capped(board_vertices: usize, target: &TargetGraph, cap: usize) -> Result<GameValue, SolveError> {
    Ok(Solver::new(board_vertices, target, cap, true)?.solve())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{hat_k24_3, lift, path, triangle, TargetGraph};

    #[test]
    fn trivial_values() {
        let one = TargetGraph::from_edges("edge", 3, vec![HEdge::new(&[0, 1, 2]).unwrap()]).unwrap();
        assert_eq!(exact_solve(4, &one), Ok(GameValue::P1Win(1)));
        assert_eq!(exact_solve(5, &hat_k24_3()), Ok(GameValue::Draw));
        assert!(matches!(exact_solve(8, &one), Err(SolveError::TooLarge { edges: 56, .. })));
    }

    #[test]
    fn memo_agrees_with_plain_minimax() {
        let cases = [(4, triangle()), (5, triangle()), (4, lift(&path(2).unwrap(), 3).unwrap())];
        for (n, t) in cases {
            let fast = Solver::new(n, &t, DEFAULT_EDGE_CAP, true).unwrap().solve();
            let slow = Solver::new(n, &t, DEFAULT_EDGE_CAP, false).unwrap().solve();
            assert_eq!(fast, slow, "{} on {n}", t.name());
        }
    }
}
