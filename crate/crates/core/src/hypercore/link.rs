//! Closed-form measure for lifted double stars.
//!
//! A lifted double star has a center lying in every edge; removing it leaves
//! two main vertices x and y, minors adjacent to both, leaves adjacent to x
//! only, and possibly the main edge xy. `hatK2l`, `gminus`, `G_t` and the
//! lifted triangle and short paths all have this shape.
//!
//! Every copy maps the center to some v, so its edges live in the link of v.
//! Once v and the images a, b of the mains are fixed, the best placement of
//! minors and leaves is a transportation problem over a handful of vertex
//! categories, which has a closed form.

use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeIndex, HEdge, TargetGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleStar {
    center: Vertex,
    x: Vertex,
    y: Vertex,
    minors: usize,
    leaves: usize,
    main: bool,
    edges: usize,
}

/// How many vertices of each kind a (v, a, b) frame offers.
/// `both`: both link pairs own; `a_only`: pair with a own, pair with b
/// free; `a_blocked`: pair with a own, pair with b taken by the opponent;
/// `b_only`: pair with b own, pair with a free.
#[derive(Clone, Copy, Debug, Default)]
struct Counts {
    both: usize,
    a_only: usize,
    a_blocked: usize,
    b_only: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Both,
    AOnly,
    ABlocked,
    BOnly,
    Other,
}

impl Counts {
    fn add(&mut self, k: Kind, d: isize) {
        let slot = match k {
            Kind::Both => &mut self.both,
            Kind::AOnly => &mut self.a_only,
            Kind::ABlocked => &mut self.a_blocked,
            Kind::BOnly => &mut self.b_only,
            Kind::Other => return,
        };
        *slot = (*slot as isize + d) as usize;
    }
}

/// Best total gain from `minors` minor slots and `leaves` leaf slots.
fn assign(c: Counts, minors: usize, leaves: usize) -> usize {
    (0..=minors.min(c.both))
        .map(|on_both| {
            let r = minors - on_both;
            let rest = c.both - on_both;
            let to_leaf = c.a_only + c.a_blocked + rest;
            let to_minor = c.b_only + c.a_only;
            let flow = (r + leaves)
                .min(r + to_leaf)
                .min(leaves + to_minor)
                .min(c.b_only + c.a_only + c.a_blocked + rest);
            2 * on_both + flow
        })
        .max()
        .unwrap_or(0)
}

/// A vertex of a frame: an index into a link's vertices, or a vertex with
/// no edge at the center (named, or fresh when `None`).
#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    At(usize),
    Free(Option<Vertex>),
}

const FRESH: Slot = Slot::Free(None);

/// The own and opponent links of one center as bit rows over the vertices
/// that occur in either.
struct Link {
    v: Vertex,
    verts: Vec<Vertex>,
    words: usize,
    own: Vec<u64>,
    opp: Vec<u64>,
    deg: Vec<usize>,
    edges: usize,
}

impl Link {
    fn new(v: Vertex, own: &[(Vertex, Vertex)], opp: &[(Vertex, Vertex)]) -> Link {
        let mut verts: Vec<Vertex> = own.iter().chain(opp).flat_map(|&(p, q)| [p, q]).collect();
        verts.sort_unstable();
        verts.dedup();
        let words = verts.len().div_ceil(64);
        let mut l = Link {
            v,
            words,
            own: vec![0; words * verts.len()],
            opp: vec![0; words * verts.len()],
            deg: vec![0; verts.len()],
            edges: own.len(),
            verts,
        };
        let at = |u: Vertex, verts: &[Vertex]| verts.binary_search(&u).expect("link vertex");
        for (rows, pairs) in [(&mut l.own, own), (&mut l.opp, opp)] {
            for &(p, q) in pairs {
                let (i, j) = (at(p, &l.verts), at(q, &l.verts));
                rows[i * words + j / 64] |= 1 << (j % 64);
                rows[j * words + i / 64] |= 1 << (i % 64);
            }
        }
        for &(p, q) in own {
            l.deg[at(p, &l.verts)] += 1;
            l.deg[at(q, &l.verts)] += 1;
        }
        l
    }

    fn word(&self, rows: &[u64], s: Slot, k: usize) -> u64 {
        match s {
            Slot::At(i) => rows[i * self.words + k],
            Slot::Free(_) => 0,
        }
    }

    fn bit(&self, rows: &[u64], a: Slot, w: Slot) -> bool {
        match (a, w) {
            (Slot::At(i), Slot::At(j)) => rows[i * self.words + j / 64] >> (j % 64) & 1 == 1,
            _ => false,
        }
    }

    fn own(&self, a: Slot, w: Slot) -> bool {
        self.bit(&self.own, a, w)
    }

    fn blocked(&self, a: Slot, w: Slot) -> bool {
        self.bit(&self.opp, a, w)
    }

    fn degree(&self, a: Slot) -> usize {
        match a {
            Slot::At(i) => self.deg[i],
            Slot::Free(_) => 0,
        }
    }

    fn name(&self, s: Slot) -> Option<Vertex> {
        match s {
            Slot::At(i) => Some(self.verts[i]),
            Slot::Free(u) => u,
        }
    }

    fn kind(&self, a: Slot, b: Slot, w: Slot) -> Kind {
        match (self.own(a, w), self.own(b, w)) {
            (true, true) => Kind::Both,
            (true, false) if self.blocked(b, w) => Kind::ABlocked,
            (true, false) => Kind::AOnly,
            (false, true) if !self.blocked(a, w) => Kind::BOnly,
            _ => Kind::Other,
        }
    }

    /// Word `k` of the mask that drops the frame's own mains.
    fn keep(&self, a: Slot, b: Slot, k: usize) -> u64 {
        let mut m = !0u64;
        for s in [a, b] {
            if let Slot::At(i) = s {
                if i / 64 == k {
                    m &= !(1 << (i % 64));
                }
            }
        }
        m
    }

    fn counts(&self, a: Slot, b: Slot) -> Counts {
        let mut c = Counts::default();
        for k in 0..self.words {
            let keep = self.keep(a, b, k);
            let (oa, ob) = (self.word(&self.own, a, k) & keep, self.word(&self.own, b, k) & keep);
            let (xa, xb) = (self.word(&self.opp, a, k), self.word(&self.opp, b, k));
            c.both += (oa & ob).count_ones() as usize;
            c.a_only += (oa & !ob & !xb).count_ones() as usize;
            c.a_blocked += (oa & !ob & xb).count_ones() as usize;
            c.b_only += (ob & !oa & !xa).count_ones() as usize;
        }
        c
    }

    /// Vertices with a positive gain in the frame.
    fn support(&self, a: Slot, b: Slot) -> Vec<usize> {
        let mut out = Vec::new();
        for k in 0..self.words {
            let mut m = (self.word(&self.own, a, k) | self.word(&self.own, b, k)) & self.keep(a, b, k);
            while m != 0 {
                out.push(k * 64 + m.trailing_zeros() as usize);
                m &= m - 1;
            }
        }
        out
    }
}

fn tri(a: Vertex, b: Vertex, c: Vertex) -> HEdge {
    HEdge::new(&[a, b, c]).expect("distinct vertices")
}

/// Links of every center with an own edge, biggest first so that the
/// bound bites early.
fn links(own: &EdgeIndex, opp: &EdgeIndex) -> Vec<Link> {
    type Pairs = BTreeMap<Vertex, Vec<(Vertex, Vertex)>>;
    let split = |edges: &[HEdge], by: &mut Pairs, only_known: bool| {
        for e in edges {
            let vs = e.vertices();
            for i in 0..3 {
                let pair = (vs[(i + 1) % 3], vs[(i + 2) % 3]);
                if only_known {
                    if let Some(p) = by.get_mut(&vs[i]) {
                        p.push(pair);
                    }
                } else {
                    by.entry(vs[i]).or_default().push(pair);
                }
            }
        }
    };
    let mut mine = Pairs::new();
    split(own.edges(), &mut mine, false);
    let mut theirs: Pairs = mine.keys().map(|&v| (v, Vec::new())).collect();
    split(opp.edges(), &mut theirs, true);
    let mut out: Vec<Link> = mine.iter().map(|(&v, p)| Link::new(v, p, &theirs[&v])).collect();
    out.sort_by_key(|l| std::cmp::Reverse(l.edges));
    out
}

/// Placements whose copies reach the measure, as edges with fresh ids
/// starting at `pool`.
struct Collector {
    pool: Vertex,
    out: BTreeSet<HEdge>,
}

impl Collector {
    fn add(&mut self, v: Vertex, p: Option<Vertex>, q: Option<Vertex>) {
        let mut next = self.pool;
        let mut fresh = || {
            next += 1;
            next - 1
        };
        let p = p.unwrap_or_else(&mut fresh);
        let q = q.unwrap_or_else(&mut fresh);
        self.out.insert(tri(v, p, q));
    }
}

impl DoubleStar {
    /// Recognizes a 3-uniform target of this shape.
    pub fn of(t: &TargetGraph) -> Option<DoubleStar> {
        if t.arity() != 3 || t.edge_count() == 0 {
            return None;
        }
        let n = t.vertex_count() as Vertex;
        for c in 0..n {
            if !t.edges().iter().all(|e| e.contains(c)) {
                continue;
            }
            let base: Vec<[Vertex; 2]> = t
                .edges()
                .iter()
                .map(|e| {
                    let r = e.without(c).expect("contains c");
                    [r[0], r[1]]
                })
                .collect();
            let others: Vec<Vertex> = (0..n).filter(|&v| v != c).collect();
            for &x in &others {
                for &y in &others {
                    if x == y {
                        continue;
                    }
                    if let Some(s) = Self::try_frame(&base, &others, x, y) {
                        return Some(DoubleStar { center: c, x, y, ..s });
                    }
                }
            }
        }
        None
    }

    fn try_frame(base: &[[Vertex; 2]], verts: &[Vertex], x: Vertex, y: Vertex) -> Option<DoubleStar> {
        let adjacent = |u: Vertex, w: Vertex| base.iter().any(|e| e.contains(&u) && e.contains(&w));
        if base.iter().any(|e| !e.contains(&x) && !e.contains(&y)) {
            return None;
        }
        if !base.iter().any(|e| e.contains(&y)) {
            return None;
        }
        let (mut minors, mut leaves) = (0, 0);
        for &u in verts {
            if u == x || u == y {
                continue;
            }
            match (adjacent(u, x), adjacent(u, y)) {
                (true, true) => minors += 1,
                (true, false) => leaves += 1,
                _ => return None,
            }
        }
        Some(DoubleStar {
            center: 0,
            x,
            y,
            minors,
            leaves,
            main: adjacent(x, y),
            edges: base.len(),
        })
    }

    /// Gain of the main edge in a frame, or `None` if the opponent holds it.
    fn main_gain(&self, l: &Link, a: Slot, b: Slot) -> Option<usize> {
        if !self.main {
            return Some(0);
        }
        if l.blocked(a, b) {
            return None;
        }
        Some(l.own(a, b) as usize)
    }

    fn frame(&self, l: &Link, a: Slot, b: Slot) -> Option<(usize, Counts)> {
        let main = self.main_gain(l, a, b)?;
        let c = l.counts(a, b);
        Some((main + assign(c, self.minors, self.leaves), c))
    }

    /// Candidate images of the mains, by decreasing degree. With `pool`,
    /// every vertex below it is a candidate.
    fn slots(l: &Link, pool: Option<Vertex>) -> Vec<Slot> {
        let mut s: Vec<Slot> = match pool {
            Some(pool) => (0..pool)
                .filter(|&u| u != l.v)
                .map(|u| match l.verts.binary_search(&u) {
                    Ok(i) => Slot::At(i),
                    Err(_) => Slot::Free(Some(u)),
                })
                .collect(),
            None => (0..l.verts.len()).filter(|&i| l.deg[i] > 0).map(Slot::At).collect(),
        };
        s.sort_by_key(|&u| std::cmp::Reverse(l.degree(u)));
        s.push(FRESH);
        s
    }

    /// The measure: most own edges in a copy avoiding opponent edges.
    pub fn max(&self, own: &EdgeIndex, opp: &EdgeIndex) -> usize {
        self.max_in(&links(own, opp), 0)
    }

    /// The measure if it exceeds `floor`, otherwise at most `floor`.
    fn max_in(&self, links: &[Link], floor: usize) -> usize {
        let mut best = floor;
        for l in links {
            if l.edges <= best {
                break;
            }
            let slots = Self::slots(l, None);
            for (i, &a) in slots.iter().enumerate() {
                let da = l.degree(a);
                if 1 + 2 * da <= best {
                    break;
                }
                for &b in &slots[i + 1..] {
                    if 1 + da + l.degree(b) <= best {
                        break;
                    }
                    // the shape is not symmetric in its mains
                    for (p, q) in [(a, b), (b, a)] {
                        if let Some((v, _)) = self.frame(l, p, q) {
                            best = best.max(v);
                        }
                    }
                }
            }
            if best == self.edges {
                break;
            }
        }
        best
    }

    /// The measure and the set of non-own edges lying in some copy that
    /// attains it. With `anywhere`, vertices that gain nothing may be any
    /// unused vertex below `pool` as well as fresh; otherwise they are
    /// fresh, numbered from `pool`. Needs a positive measure.
    pub fn improving(
        &self,
        own: &EdgeIndex,
        opp: &EdgeIndex,
        pool: Vertex,
        anywhere: bool,
    ) -> (usize, BTreeSet<HEdge>) {
        let ls = links(own, opp);
        let m = self.max_in(&ls, 0);
        (m, self.edges_at(&ls, pool, m, anywhere))
    }

    /// Non-own edges of the copies with exactly `m` own edges, when `m` is
    /// the measure.
    fn edges_at(&self, links: &[Link], pool: Vertex, m: usize, anywhere: bool) -> BTreeSet<HEdge> {
        let mut col = Collector {
            pool,
            out: BTreeSet::new(),
        };
        if m == 0 {
            return col.out;
        }
        for l in links {
            if l.edges < m {
                break;
            }
            let slots = Self::slots(l, anywhere.then_some(pool));
            for (i, &a) in slots.iter().enumerate() {
                let da = l.degree(a);
                if 1 + 2 * da < m {
                    break;
                }
                for &b in &slots[i + 1..] {
                    if 1 + da + l.degree(b) < m {
                        break;
                    }
                    self.frame_edges(l, a, b, m, pool, anywhere, &mut col);
                    self.frame_edges(l, b, a, m, pool, anywhere, &mut col);
                }
            }
        }
        col.out
    }

    #[allow(clippy::too_many_arguments)]
    fn frame_edges(
        &self,
        l: &Link,
        a: Slot,
        b: Slot,
        m: usize,
        pool: Vertex,
        anywhere: bool,
        col: &mut Collector,
    ) {
        let Some((value, counts)) = self.frame(l, a, b) else {
            return;
        };
        if value != m {
            return;
        }
        let main = value - assign(counts, self.minors, self.leaves);
        let v = l.v;
        let (na, nb) = (l.name(a), l.name(b));
        if self.main && !l.own(a, b) {
            col.add(v, na, nb);
        }
        let minor_ok = |w: Slot| !l.blocked(a, w) && !l.blocked(b, w);
        let leaf_ok = |w: Slot| !l.blocked(a, w);
        let place = |w: Slot, kind: Kind, col: &mut Collector| {
            let mut c = counts;
            c.add(kind, -1);
            let (ga, gb) = (l.own(a, w) as usize, l.own(b, w) as usize);
            let named = w != FRESH;
            if self.minors > 0
                && minor_ok(w)
                && (anywhere || ga + gb > 0 || !named)
                && main + ga + gb + assign(c, self.minors - 1, self.leaves) == m
            {
                if ga == 0 {
                    col.add(v, na, l.name(w));
                }
                if gb == 0 {
                    col.add(v, nb, l.name(w));
                }
            }
            if self.leaves > 0
                && leaf_ok(w)
                && (anywhere || ga > 0 || !named)
                && main + ga + assign(c, self.minors, self.leaves - 1) == m
                && ga == 0
            {
                col.add(v, na, l.name(w));
            }
        };
        let support = l.support(a, b);
        for &w in &support {
            let w = Slot::At(w);
            place(w, l.kind(a, b, w), col);
        }
        place(FRESH, Kind::Other, col);
        if anywhere {
            for u in 0..pool {
                if u == v || Some(u) == na || Some(u) == nb {
                    continue;
                }
                let w = match l.verts.binary_search(&u) {
                    Ok(i) if support.binary_search(&i).is_ok() => continue,
                    Ok(i) => Slot::At(i),
                    Err(_) => Slot::Free(Some(u)),
                };
                place(w, Kind::Other, col);
            }
        }
    }

    /// Completing edges of all threats: non-own edges of copies with all
    /// but one edge own. Copies may use any unused vertex below `pool` or
    /// fresh ones from `pool` on.
    pub fn threat_edges(&self, own: &EdgeIndex, opp: &EdgeIndex, pool: Vertex) -> Option<BTreeSet<HEdge>> {
        let ls = links(own, opp);
        let m = self.max_in(&ls, self.edges.saturating_sub(2));
        if m >= self.edges {
            // a finished copy hides the threats below it
            return None;
        }
        if m + 1 < self.edges {
            return Some(BTreeSet::new());
        }
        Some(self.edges_at(&ls, pool, m, true))
    }

    /// The target's center and mains, in that order.
    pub fn roles(&self) -> (Vertex, [Vertex; 2]) {
        (self.center, [self.x, self.y])
    }

    /// Images `(v, a, b)` of center and mains over all copies with at least
    /// `threshold` own edges whose center and mains are seen vertices.
    /// Returns `None` unless the threshold forces both mains to carry own
    /// edges, the only case where seen mains come from the own link.
    pub fn heavy_frames(
        &self,
        own: &EdgeIndex,
        opp: &EdgeIndex,
        threshold: usize,
    ) -> Option<BTreeSet<(Vertex, Vertex, Vertex)>> {
        let main = self.main as usize;
        if threshold <= self.minors + self.leaves + main || threshold <= self.minors + main {
            return None;
        }
        let mut out = BTreeSet::new();
        for l in links(own, opp) {
            if l.edges < threshold {
                break;
            }
            let slots = Self::slots(&l, None);
            for &a in &slots {
                for &b in &slots {
                    if a == b || a == FRESH || b == FRESH {
                        continue;
                    }
                    if self.frame(&l, a, b).is_some_and(|(v, _)| v >= threshold) {
                        out.insert((l.v, l.name(a).unwrap(), l.name(b).unwrap()));
                    }
                }
            }
        }
        Some(out)
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{
        g_minus, hat_k23_3, hat_k24_3, k2t_target, lift, path, triangle, OverlapSearch,
    };

    #[test]
    fn shapes() {
        let s = DoubleStar::of(&hat_k24_3()).unwrap();
        assert_eq!((s.minors, s.leaves, s.main, s.edges), (4, 0, true, 9));
        let s = DoubleStar::of(&g_minus()).unwrap();
        assert_eq!((s.minors, s.leaves, s.main, s.edges), (3, 1, true, 8));
        let s = DoubleStar::of(&k2t_target(3).unwrap()).unwrap();
        assert_eq!((s.minors, s.leaves, s.main, s.edges), (4, 1, false, 9));
        let s = DoubleStar::of(&lift(&triangle(), 3).unwrap()).unwrap();
        assert_eq!((s.minors, s.leaves, s.main), (1, 0, true));
        assert!(DoubleStar::of(&lift(&path(2).unwrap(), 3).unwrap()).is_some());
        assert!(DoubleStar::of(&lift(&path(4).unwrap(), 3).unwrap()).is_none());
        assert!(DoubleStar::of(&triangle()).is_none());
    }

    #[test]
    fn assignment_closed_form() {
        let c = Counts {
            both: 3,
            a_only: 1,
            a_blocked: 1,
            b_only: 0,
        };
        // three minors on `both`, the leaf on an a-only vertex
        assert_eq!(assign(c, 3, 1), 7);
        assert_eq!(assign(c, 4, 0), 7);
        assert_eq!(assign(Counts::default(), 4, 2), 0);
    }

    #[test]
    fn agrees_with_branch_and_bound_on_a_fixture() {
        let t = hat_k23_3();
        let own: Vec<HEdge> = [[0, 1, 9], [0, 2, 9], [1, 2, 9], [0, 3, 9], [5, 6, 7]]
            .iter()
            .map(|v| HEdge::new(v).unwrap())
            .collect();
        let opp: Vec<HEdge> = vec![HEdge::new(&[1, 3, 9]).unwrap()];
        let s = DoubleStar::of(&t).unwrap();
        let fast = s.max(&EdgeIndex::new(&own), &EdgeIndex::new(&opp));
        let slow = OverlapSearch::new(&t, &own, &opp).max().0;
        assert_eq!(fast, slow);
    }
}
