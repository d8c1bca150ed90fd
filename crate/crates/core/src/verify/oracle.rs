//! Brute-force reference implementations. They enumerate every map from
//! target vertices to pool vertices or fresh ones and evaluate it in full,
//! sharing no search code with the main implementations.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::canon::Colored;
use crate::hypercore::{HEdge, TargetGraph, Vertex};

pub const ORACLE_MAX_POOL: usize = 12;
pub const ORACLE_MAX_EDGES: usize = 15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle refuses {pool} pool vertices and {edges} colored edges (limits {ORACLE_MAX_POOL} and {ORACLE_MAX_EDGES})")]
    TooLarge { pool: usize, edges: usize },
    #[error("edge {0} does not fit the pool or the target arity")]
    BadEdge(HEdge),
}

/// Threat key: sorted images of the held edges and the completing edge.
pub type ThreatKey = (Vec<HEdge>, HEdge);

/// Everything the oracle derives from one position, indexed by player
/// (0 for the first player, 1 for the second).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleScan {
    pub overlap: [usize; 2],
    pub copies: [BTreeSet<Vec<Vertex>>; 2],
    pub threats: [BTreeSet<ThreatKey>; 2],
}

const FRESH: u8 = u8::MAX;

pub fn oracle_scan(
    target: &TargetGraph,
    p1: &BTreeSet<HEdge>,
    p2: &BTreeSet<HEdge>,
    pool_size: usize,
) -> Result<OracleScan, OracleError> {
    if pool_size > ORACLE_MAX_POOL || p1.len() + p2.len() > ORACLE_MAX_EDGES {
        return Err(OracleError::TooLarge {
            pool: pool_size,
            edges: p1.len() + p2.len(),
        });
    }
    let mut color = vec![0u8; 1 << pool_size];
    for (c, set) in [(1u8, p1), (2u8, p2)] {
        for e in set {
            if e.arity() != target.arity() || e.max_vertex() as usize >= pool_size {
                return Err(OracleError::BadEdge(*e));
            }
            color[mask_of(e.vertices())] = c;
        }
    }
    let mut order: Vec<Vertex> = (0..target.vertex_count() as Vertex).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(target.degree(v)));
    let mut step = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        step[v as usize] = i;
    }
    let closes = |e: &HEdge| e.vertices().iter().map(|&v| step[v as usize]).max().unwrap_or(0);
    let mut edges: Vec<HEdge> = target.edges().to_vec();
    edges.sort_by_key(closes);
    let mut ranges = vec![(0, 0); order.len()];
    for (f, e) in edges.iter().enumerate() {
        let r = &mut ranges[closes(e)];
        if r.1 == r.0 {
            *r = (f, f);
        }
        r.1 = f + 1;
    }
    let k = target.arity();
    let board = Board {
        k,
        pool: pool_size,
        color,
        ends: edges.iter().flat_map(|e| e.vertices().iter().map(|&v| v as u8)).collect(),
        edges,
        order,
        ranges,
    };
    let mut walk = Walk {
        assign: vec![0; board.order.len()],
        used: 0,
        base: vec![0; board.edges.len()],
        edge_color: vec![0; board.edges.len()],
        count: [0; 3],
        out: OracleScan::default(),
    };
    walk.walk(&board, 0);
    Ok(walk.out)
}

pub fn oracle_max_overlap(
    target: &TargetGraph,
    own: &BTreeSet<HEdge>,
    opp: &BTreeSet<HEdge>,
    pool_size: usize,
) -> Result<usize, OracleError> {
    Ok(oracle_scan(target, own, opp, pool_size)?.overlap[0])
}

pub fn oracle_copies(
    target: &TargetGraph,
    allowed: &BTreeSet<HEdge>,
    pool_size: usize,
) -> Result<BTreeSet<Vec<Vertex>>, OracleError> {
    let [own, _] = oracle_scan(target, allowed, &BTreeSet::new(), pool_size)?.copies;
    Ok(own)
}

pub fn oracle_threats(
    target: &TargetGraph,
    own: &BTreeSet<HEdge>,
    opp: &BTreeSet<HEdge>,
    pool_size: usize,
) -> Result<BTreeSet<ThreatKey>, OracleError> {
    let [own, _] = oracle_scan(target, own, opp, pool_size)?.threats;
    Ok(own)
}

fn mask_of(vs: &[Vertex]) -> usize {
    vs.iter().fold(0, |m, &v| m | (1 << v))
}

struct Board {
    k: usize,
    pool: usize,
    /// Owner of the pool edge with a given vertex mask.
    color: Vec<u8>,
    /// Target edges sorted by the step that places their last vertex; the
    /// edges closed at step `i` are `ranges[i]`.
    edges: Vec<HEdge>,
    ranges: Vec<(usize, usize)>,
    /// Vertices of edge `f` at `ends[f * k..][..k]`.
    ends: Vec<u8>,
    /// Target vertices in placement order, high degree first.
    order: Vec<Vertex>,
}

struct Walk {
    /// Pool vertex or `FRESH` per target vertex.
    assign: Vec<u8>,
    /// Pool vertices in use, as a bit mask.
    used: u32,
    /// Mask of an edge's vertices other than its last, or `NO_MASK` if one
    /// of them is fresh.
    base: Vec<usize>,
    /// Per edge: 0 unclaimed (or touching a fresh vertex), 1, 2.
    edge_color: Vec<u8>,
    count: [usize; 3],
    out: OracleScan,
}

const NO_MASK: usize = usize::MAX;

impl Walk {
    fn walk(&mut self, b: &Board, i: usize) {
        let v = b.order[i] as usize;
        let last = i + 1 == b.order.len();
        let (lo, hi) = b.ranges[i];
        for f in lo..hi {
            self.base[f] = self.partial_mask(b, f, v);
        }
        let base = &self.base[lo..hi].to_vec();
        // unused pool vertices, then the fresh placeholder
        let mut free = !self.used & ((1u32 << b.pool) - 1);
        loop {
            let fresh = free == 0;
            let h = free.trailing_zeros() as usize;
            free &= free.wrapping_sub(1);
            if last {
                self.last_step(b, v, h, fresh, lo, hi, base);
            } else {
                let bit = if fresh { 0 } else { 1u32 << h };
                self.used |= bit;
                self.place(b, v, h, fresh, lo, hi, base);
                self.walk(b, i + 1);
                self.unplace(lo, hi);
                self.used &= !bit;
            }
            if fresh {
                return;
            }
        }
    }

    #[inline(always)]
    fn place(&mut self, b: &Board, v: usize, h: usize, fresh: bool, lo: usize, hi: usize, base: &[usize]) {
        self.assign[v] = if fresh { FRESH } else { h as u8 };
        for (c, &m) in self.edge_color[lo..hi].iter_mut().zip(base) {
            *c = if fresh || m == NO_MASK { 0 } else { b.color[m | 1 << h] };
            self.count[*c as usize] += 1;
        }
    }

    #[inline(always)]
    fn unplace(&mut self, lo: usize, hi: usize) {
        for &c in &self.edge_color[lo..hi] {
            self.count[c as usize] -= 1;
        }
    }

    /// The last placement completes a map. Its counts are evaluated first;
    /// the full record is written only for maps that change the result.
    #[inline(always)]
    #[allow(clippy::too_many_arguments)]
    fn last_step(&mut self, b: &Board, v: usize, h: usize, fresh: bool, lo: usize, hi: usize, base: &[usize]) {
        let mut n = self.count;
        if !fresh {
            for &m in base {
                if m != NO_MASK {
                    n[b.color[m | 1 << h] as usize] += 1;
                }
            }
        }
        let total = b.edges.len();
        let matters =
            |p: usize| n[2 - p] == 0 && (n[p + 1] > self.out.overlap[p] || n[p + 1] + 1 >= total);
        if matters(0) || matters(1) {
            self.place(b, v, h, fresh, lo, hi, base);
            self.leaf(b);
            self.unplace(lo, hi);
        }
    }

    fn partial_mask(&self, b: &Board, f: usize, skip: usize) -> usize {
        let mut mask = 0usize;
        for &v in &b.ends[f * b.k..(f + 1) * b.k] {
            if v as usize == skip {
                continue;
            }
            match self.assign[v as usize] {
                FRESH => return NO_MASK,
                h => mask |= 1 << h,
            }
        }
        mask
    }

    #[inline(always)]
    fn leaf(&mut self, b: &Board) {
        let total = b.edges.len();
        for p in 0..2 {
            let held = self.count[p + 1];
            if self.count[2 - p] != 0 || held + 1 < total && held <= self.out.overlap[p] {
                continue;
            }
            self.out.overlap[p] = self.out.overlap[p].max(held);
            if held == total {
                self.out.copies[p].insert(self.assign.iter().map(|&h| h as Vertex).collect());
            }
            if held + 1 == total {
                self.threat(b, p);
            }
        }
    }

    fn image(&self, v: Vertex, next_fresh: &mut Vertex) -> Vertex {
        match self.assign[v as usize] {
            FRESH => {
                *next_fresh += 1;
                *next_fresh - 1
            }
            h => h as Vertex,
        }
    }

    fn threat(&mut self, b: &Board, p: usize) {
        let mine = p as u8 + 1;
        let missing = self.edge_color.iter().position(|&c| c != mine).expect("one edge missing");
        let mut next_fresh = b.pool as Vertex;
        let completing: Vec<Vertex> =
            b.edges[missing].vertices().iter().map(|&v| self.image(v, &mut next_fresh)).collect();
        let completing = HEdge::new(&completing).expect("distinct images");
        let mut held: Vec<HEdge> = (0..b.edges.len())
            .filter(|&f| f != missing)
            .map(|f| b.edges[f].map(|v| self.assign[v as usize] as Vertex))
            .collect();
        held.sort_unstable();
        self.out.threats[p].insert((held, completing));
    }
}

pub const ORACLE_MAX_ISO_VERTICES: usize = 9;

/// Whether some bijection of the used vertices carries `a` onto `b`,
/// labels and edge colors included. Extends partial maps vertex by vertex
/// and checks each edge once all its vertices are mapped.
pub fn oracle_isomorphic(a: &Colored, b: &Colored) -> Result<bool, OracleError> {
    type Norm = (Vec<Vertex>, Vec<Vec<u16>>, BTreeMap<Vec<Vertex>, Vec<u16>>);
    fn norm(g: &Colored) -> Norm {
        let mut used: BTreeSet<Vertex> = g.vertex_labels.iter().map(|&(v, _)| v).collect();
        let mut edges: BTreeMap<Vec<Vertex>, Vec<u16>> = BTreeMap::new();
        for (e, l) in &g.edges {
            used.extend(e.vertices());
            let mut l = l.clone();
            l.sort_unstable();
            edges.insert(e.vertices().to_vec(), l);
        }
        let used: Vec<Vertex> = used.into_iter().collect();
        let labels = used
            .iter()
            .map(|v| {
                let mut l: Vec<u16> = g.vertex_labels.iter().filter(|x| x.0 == *v).map(|x| x.1).collect();
                l.sort_unstable();
                l
            })
            .collect();
        (used, labels, edges)
    }
    let (va, la, ea) = norm(a);
    let (vb, lb, eb) = norm(b);
    let n = va.len().max(vb.len());
    if n > ORACLE_MAX_ISO_VERTICES {
        return Err(OracleError::TooLarge {
            pool: n,
            edges: ea.len().max(eb.len()),
        });
    }
    if a.header != b.header || va.len() != vb.len() || ea.len() != eb.len() {
        return Ok(false);
    }
    // edges of `a` by their last vertex, so each is checked once mapped
    let mut by_last: Vec<Vec<(Vec<usize>, &Vec<u16>)>> = vec![Vec::new(); n];
    for (e, l) in &ea {
        let loc: Vec<usize> = e.iter().map(|v| va.binary_search(v).unwrap()).collect();
        by_last[*loc.iter().max().unwrap()].push((loc, l));
    }
    fn extend(
        i: usize,
        perm: &mut Vec<usize>,
        free: &mut Vec<bool>,
        ctx: &(&[Vec<u16>], &[Vec<u16>], &[Vertex], &BTreeMap<Vec<Vertex>, Vec<u16>>, &[Vec<(Vec<usize>, &Vec<u16>)>]),
    ) -> bool {
        let (la, lb, vb, eb, by_last) = *ctx;
        if i == la.len() {
            return true;
        }
        for j in 0..la.len() {
            if !free[j] || la[i] != lb[j] {
                continue;
            }
            perm.push(j);
            let fits = by_last[i].iter().all(|(e, l)| {
                let mut img: Vec<Vertex> = e.iter().map(|&u| vb[perm[u]]).collect();
                img.sort_unstable();
                eb.get(&img) == Some(*l)
            });
            if fits {
                free[j] = false;
                if extend(i + 1, perm, free, ctx) {
                    return true;
                }
                free[j] = true;
            }
            perm.pop();
        }
        false
    }
    Ok(extend(0, &mut Vec::new(), &mut vec![true; n], &(&la, &lb, &vb, &eb, &by_last)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{hat_k24_3, lift, triangle};

    fn set(list: &[&[Vertex]]) -> BTreeSet<HEdge> {
        list.iter().map(|v| HEdge::new(v).unwrap()).collect()
    }

    #[test]
    fn empty_state_scores_zero() {
        let s = oracle_scan(&hat_k24_3(), &BTreeSet::new(), &BTreeSet::new(), 0).unwrap();
        assert_eq!(s.overlap, [0, 0]);
        assert!(s.copies[0].is_empty() && s.threats[0].is_empty());
    }

    #[test]
    fn refuses_large_inputs() {
        assert!(matches!(
            oracle_scan(&hat_k24_3(), &BTreeSet::new(), &BTreeSet::new(), 13),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn lifted_triangle_threats() {
        let t = lift(&triangle(), 3).unwrap();
        let p1 = set(&[&[0, 1, 3], &[0, 2, 3]]);
        // two edges sharing a pair close a lifted triangle around either
        // shared vertex
        let s = oracle_scan(&t, &p1, &BTreeSet::new(), 5).unwrap();
        assert_eq!(s.overlap[0], 2);
        let closing: BTreeSet<HEdge> = s.threats[0].iter().map(|(_, c)| *c).collect();
        assert_eq!(closing, set(&[&[0, 1, 2], &[1, 2, 3]]));
        let s = oracle_scan(&t, &p1, &set(&[&[1, 2, 3]]), 5).unwrap();
        let closing: BTreeSet<HEdge> = s.threats[0].iter().map(|(_, c)| *c).collect();
        assert_eq!(closing, set(&[&[0, 1, 2]]));
        let s = oracle_scan(&t, &p1, &set(&[&[1, 2, 3], &[0, 1, 2]]), 5).unwrap();
        assert!(s.threats[0].is_empty());
        assert_eq!(s.overlap[0], 1);
    }
}
