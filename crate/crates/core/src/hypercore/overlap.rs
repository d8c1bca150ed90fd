use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{EdgeIndex, Embedding, HEdge, TargetGraph, Vertex, MAX_ARITY};

/// Image of a target vertex in a copy: a seen vertex or a fresh one.
/// Fresh images are pairwise distinct and never touch a claimed edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Seen(Vertex),
    Fresh,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapCopy {
    pub slots: Vec<Slot>,
    pub value: usize,
}

impl OverlapCopy {
    /// Replaces fresh slots by consecutive ids starting at `first_fresh`,
    /// in target vertex order.
    pub fn materialize(&self, first_fresh: Vertex) -> Embedding {
        let mut next = first_fresh;
        Embedding(
            self.slots
                .iter()
                .map(|s| match s {
                    Slot::Seen(h) => *h,
                    Slot::Fresh => {
                        next += 1;
                        next - 1
                    }
                })
                .collect(),
        )
    }
}

/// Branch and bound over maps from target vertices to seen vertices or
/// fresh ones, maximising the number of target edges whose image is one of
/// `own` while no image is one of `opp`.
///
/// A seen vertex is only tried for a target vertex if some incident target
/// edge could still become an `own` edge through it; otherwise a fresh image
/// is at least as good.
pub struct OverlapSearch<'a> {
    target: &'a TargetGraph,
    own: EdgeIndex,
    opp: EdgeIndex,
    order: Vec<Vertex>,
    complete_at: Vec<Vec<usize>>,
    edges_of: Vec<Vec<usize>>,
    slots: Vec<Option<Slot>>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl<'a> OverlapSearch<'a> {
    pub fn new<'e>(
        target: &'a TargetGraph,
        own: impl IntoIterator<Item = &'e HEdge>,
        opp: impl IntoIterator<Item = &'e HEdge>,
    ) -> Self {
        let own = EdgeIndex::new(own);
        let opp = EdgeIndex::new(opp);
        let n = target.vertex_count();
        let mut edges_of = vec![Vec::new(); n];
        for (i, e) in target.edges().iter().enumerate() {
            for &v in e.vertices() {
                edges_of[v as usize].push(i);
            }
        }
        let order = vertex_order(target, &edges_of);
        let mut pos = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos[v as usize] = p;
        }
        let mut complete_at = vec![Vec::new(); n];
        for (i, e) in target.edges().iter().enumerate() {
            let last = e.vertices().iter().map(|&v| pos[v as usize]).max().unwrap();
            complete_at[last].push(i);
        }
        let span = own.span().max(opp.span());
        OverlapSearch {
            target,
            own,
            opp,
            order,
            complete_at,
            edges_of,
            slots: vec![None; n],
            used: vec![false; span],
            nodes: 0,
            budget: u64::MAX,
            exhausted: false,
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// The measure and one copy attaining it.
    pub fn max(&mut self) -> (usize, OverlapCopy) {
        let n = self.target.vertex_count();
        let mut best = OverlapCopy {
            slots: vec![Slot::Fresh; n],
            value: 0,
        };
        self.budget = u64::MAX;
        self.exhausted = false;
        let cap = self.own.len().min(self.target.edge_count());
        self.descend(0, 0, &mut Mode::Max { best: &mut best, cap });
        (best.value, best)
    }

    /// Visits every copy (within the dominance rule above) whose value is at
    /// least `threshold`. Returns `false` if the node budget ran out first.
    pub fn collect(
        &mut self,
        threshold: usize,
        budget: u64,
        visit: &mut dyn FnMut(&OverlapCopy) -> bool,
    ) -> bool {
        self.budget = self.nodes.saturating_add(budget);
        self.exhausted = false;
        self.descend(0, 0, &mut Mode::Collect { threshold, visit });
        !self.exhausted
    }

    fn descend(&mut self, pos: usize, value: usize, mode: &mut Mode<'_>) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        if pos == self.order.len() {
            return match mode {
                Mode::Max { best, cap } => {
                    if value > best.value {
                        best.value = value;
                        best.slots = self.slots.iter().map(|s| s.unwrap()).collect();
                    }
                    best.value < *cap
                }
                Mode::Collect { threshold, visit } => {
                    if value >= *threshold {
                        let copy = OverlapCopy {
                            slots: self.slots.iter().map(|s| s.unwrap()).collect(),
                            value,
                        };
                        visit(&copy)
                    } else {
                        true
                    }
                }
            };
        }
        let bound = value + self.potential(pos);
        let keep = match mode {
            Mode::Max { best, .. } => bound > best.value,
            Mode::Collect { threshold, .. } => bound >= *threshold,
        };
        if !keep {
            return true;
        }
        let u = self.order[pos];
        let candidates = self.candidates(u);
        for slot in candidates.into_iter().map(Slot::Seen).chain(std::iter::once(Slot::Fresh)) {
            if let Slot::Seen(h) = slot {
                self.used[h as usize] = true;
            }
            self.slots[u as usize] = Some(slot);
            let gained = self.settle(pos);
            let go = match gained {
                Some(g) => self.descend(pos + 1, value + g, mode),
                None => true,
            };
            self.slots[u as usize] = None;
            if let Slot::Seen(h) = slot {
                self.used[h as usize] = false;
            }
            if !go {
                return false;
            }
        }
        true
    }

    /// Own edges gained by the target edges completed at `pos`, or `None`
    /// if one of them lands on an opponent edge.
    fn settle(&self, pos: usize) -> Option<usize> {
        let mut gained = 0;
        for &i in &self.complete_at[pos] {
            if let Some(img) = self.image(i) {
                if self.opp.contains(&img) {
                    return None;
                }
                if self.own.contains(&img) {
                    gained += 1;
                }
            }
        }
        Some(gained)
    }

    fn image(&self, edge: usize) -> Option<HEdge> {
        let e = &self.target.edges()[edge];
        let mut buf = [0 as Vertex; MAX_ARITY];
        for (i, &v) in e.vertices().iter().enumerate() {
            match self.slots[v as usize] {
                Some(Slot::Seen(h)) => buf[i] = h,
                _ => return None,
            }
        }
        Some(HEdge::from_distinct(&buf[..e.arity()]))
    }

    /// Assigned seen images of an incomplete target edge, or `None` if the
    /// edge already touches a fresh image.
    fn partial(&self, edge: usize, buf: &mut [Vertex; MAX_ARITY]) -> Option<usize> {
        let mut n = 0;
        for &v in self.target.edges()[edge].vertices() {
            match self.slots[v as usize] {
                Some(Slot::Seen(h)) => {
                    buf[n] = h;
                    n += 1;
                }
                Some(Slot::Fresh) => return None,
                None => {}
            }
        }
        Some(n)
    }

    /// Upper bound on own edges still obtainable among incomplete target
    /// edges: edges sharing the same assigned image set can gain at most as
    /// many as there are own edges through that set.
    fn potential(&self, pos: usize) -> usize {
        let mut groups: Vec<([Vertex; MAX_ARITY], usize)> = Vec::new();
        for done in &self.complete_at[pos..] {
            for &i in done {
                let mut buf = [Vertex::MAX; MAX_ARITY];
                if let Some(n) = self.partial(i, &mut buf) {
                    buf[..n].sort_unstable();
                    groups.push((buf, n));
                }
            }
        }
        groups.sort_unstable();
        let mut total = 0;
        let mut i = 0;
        while i < groups.len() {
            let mut j = i;
            while j < groups.len() && groups[j] == groups[i] {
                j += 1;
            }
            let (set, n) = &groups[i];
            let room = if *n == 0 {
                self.own.len()
            } else {
                self.own.codegree(&set[..*n])
            };
            total += room.min(j - i);
            i = j;
        }
        total.min(self.own.len())
    }

    fn candidates(&self, u: Vertex) -> Vec<Vertex> {
        let mut out: BTreeSet<Vertex> = BTreeSet::new();
        let mut open = false;
        for &i in &self.edges_of[u as usize] {
            let mut buf = [0; MAX_ARITY];
            let Some(n) = self.partial(i, &mut buf) else {
                continue;
            };
            if n == 0 {
                open = true;
                break;
            }
            let set = &buf[..n];
            let pivot = *set.iter().min_by_key(|&&h| self.own.degree(h)).unwrap();
            for e in self.own.incident(pivot) {
                if set.iter().all(|&h| e.contains(h)) {
                    out.extend(e.vertices().iter().filter(|h| !set.contains(h)));
                }
            }
        }
        if open {
            out = self.own.vertices().collect();
        }
        let mut list: Vec<Vertex> = out.into_iter().filter(|&h| !self.used[h as usize]).collect();
        list.sort_by_key(|&h| (std::cmp::Reverse(self.own.degree(h)), h));
        list
    }
}

enum Mode<'m> {
    Max {
        best: &'m mut OverlapCopy,
        cap: usize,
    },
    Collect {
        threshold: usize,
        visit: &'m mut dyn FnMut(&OverlapCopy) -> bool,
    },
}

/// Highest degree first, then repeatedly the vertex sharing the most edges
/// with those already placed.
fn vertex_order(target: &TargetGraph, edges_of: &[Vec<usize>]) -> Vec<Vertex> {
    let n = target.vertex_count();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let centers = target.centers();
    while order.len() < n {
        let next = (0..n as Vertex)
            .filter(|&v| !placed[v as usize])
            .max_by_key(|&v| {
                let touching = edges_of[v as usize]
                    .iter()
                    .filter(|&&i| {
                        target.edges()[i]
                            .vertices()
                            .iter()
                            .any(|&w| placed[w as usize])
                    })
                    .count();
                (
                    touching,
                    centers.contains(&v),
                    edges_of[v as usize].len(),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        placed[next as usize] = true;
        order.push(next);
    }
    order
}

/// `e_T^{own}(target)`: the largest number of `own` edges in a copy of the
/// target containing no `opp` edge. Copies may use any number of vertices
/// beyond `host_size`, which only affects where fresh images would go.
pub fn max_overlap(
    target: &TargetGraph,
    own: &BTreeSet<HEdge>,
    opp: &BTreeSet<HEdge>,
    _host_size: usize,
) -> usize {
    match super::DoubleStar::of(target) {
        Some(s) => s.max(&EdgeIndex::new(own), &EdgeIndex::new(opp)),
        None => OverlapSearch::new(target, own, opp).max().0,
    }
}

/// The 2-uniform projection `{yz : xyz ∈ edges}` of a 3-uniform edge set.
pub fn x_board<'e>(edges: impl IntoIterator<Item = &'e HEdge>, x: Vertex) -> BTreeSet<(Vertex, Vertex)> {
    edges
        .into_iter()
        .filter(|e| e.arity() == 3)
        .filter_map(|e| e.without(x))
        .map(|r| (r[0], r[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{g_minus, hat_k24_3, k2t_target, lift, make_hat_k2l};
    use crate::verify::oracle::oracle_max_overlap;

    fn set(list: &[&[Vertex]]) -> BTreeSet<HEdge> {
        list.iter().map(|v| HEdge::new(v).unwrap()).collect()
    }

    #[test]
    fn empty_and_full() {
        let g = hat_k24_3();
        assert_eq!(max_overlap(&g, &BTreeSet::new(), &BTreeSet::new(), 0), 0);
        let full: BTreeSet<HEdge> = g.edges().iter().copied().collect();
        assert_eq!(max_overlap(&g, &full, &BTreeSet::new(), 7), 9);
        let gm: BTreeSet<HEdge> = g_minus().edges().iter().copied().collect();
        assert_eq!(max_overlap(&g, &gm, &BTreeSet::new(), 7), 8);
    }

    #[test]
    fn opponent_edge_blocks_the_copy() {
        let g = hat_k24_3();
        let mut own: BTreeSet<HEdge> = g.edges().iter().copied().collect();
        let main = g.main_edge().unwrap();
        own.remove(&main);
        let opp: BTreeSet<HEdge> = [main].into_iter().collect();
        // every copy through the blocked main edge is lost
        let v = max_overlap(&g, &own, &opp, 7);
        assert_eq!(v, 4);
        assert_eq!(oracle_max_overlap(&g, &own, &opp, 7).unwrap(), 4);
    }

    #[test]
    fn case_two_position_at_t1() {
        // z = {0,1,2}; a = 3, b = 4, v1..v5 = 5..9; e* vertex-disjoint
        let g = hat_k24_3();
        let p1 = set(&[
            &[0, 1, 2],
            &[10, 11, 12],
            &[3, 5, 6],
            &[3, 7, 8],
            &[4, 5, 6],
            &[4, 7, 8],
        ]);
        let p2 = set(&[&[3, 4, 5], &[3, 4, 6], &[3, 4, 7], &[3, 4, 8], &[3, 4, 9]]);
        let v = max_overlap(&g, &p1, &p2, 13);
        assert!(v <= 3);
        assert_eq!(v, 2);
        // same position without e*, small enough for the oracle
        let mut small = p1.clone();
        small.remove(&HEdge::new(&[10, 11, 12]).unwrap());
        assert_eq!(oracle_max_overlap(&g, &small, &p2, 10).unwrap(), 2);
    }

    #[test]
    fn copies_collected_at_threshold() {
        let g = lift(&make_hat_k2l(3).unwrap(), 3).unwrap();
        let p1 = set(&[&[0, 1, 9], &[0, 2, 9]]);
        let mut s = OverlapSearch::new(&g, &p1, &BTreeSet::new());
        let (best, copy) = s.max();
        assert_eq!(best, 2);
        assert_eq!(copy.value, 2);
        let mut count = 0;
        assert!(s.collect(2, u64::MAX, &mut |c| {
            assert_eq!(c.value, 2);
            count += 1;
            true
        }));
        assert!(count > 0);
    }

    #[test]
    fn materialize_assigns_fresh_ids_in_order() {
        let c = OverlapCopy {
            slots: vec![Slot::Seen(3), Slot::Fresh, Slot::Seen(0), Slot::Fresh],
            value: 0,
        };
        assert_eq!(c.materialize(10).0, vec![3, 10, 0, 11]);
    }

    #[test]
    fn k2t_measure_of_its_own_edges() {
        let g = k2t_target(4).unwrap();
        let all: BTreeSet<HEdge> = g.edges().iter().copied().collect();
        assert_eq!(max_overlap(&g, &all, &BTreeSet::new(), 10), 12);
    }

    #[test]
    fn x_board_projection() {
        let e = set(&[&[0, 1, 2], &[0, 1, 3]]);
        let b = x_board(&e, 0);
        assert_eq!(b, [(1, 2), (1, 3)].into_iter().collect());
        assert!(x_board(&e, 7).is_empty());
        // lift then project on the lift center gives back the base edges
        let base = make_hat_k2l(4).unwrap();
        let lifted = lift(&base, 3).unwrap();
        let center = lifted.centers()[0];
        let proj = x_board(lifted.edges(), center);
        let expect: BTreeSet<(Vertex, Vertex)> = base
            .edges()
            .iter()
            .map(|e| (e.vertices()[0], e.vertices()[1]))
            .collect();
        assert_eq!(proj, expect);
    }
}

