use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{EdgeIndex, HEdge, TargetGraph, Vertex};

/// Injective map from target vertex ids (the index) to host vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding(pub Vec<Vertex>);

impl Embedding {
    pub fn image(&self, v: Vertex) -> Vertex {
        self.0[v as usize]
    }

    pub fn map_edge(&self, e: &HEdge) -> HEdge {
        e.map(|v| self.0[v as usize])
    }

    /// Images of the given pattern edges, sorted.
    pub fn image_edges(&self, edges: &[HEdge]) -> Vec<HEdge> {
        let mut out: Vec<HEdge> = edges.iter().map(|e| self.map_edge(e)).collect();
        out.sort_unstable();
        out
    }
}

pub(crate) const UNMAPPED: Vertex = Vertex::MAX;

/// Backtracking subhypergraph matcher for a fixed pattern.
///
/// Edges are matched one at a time in a connected order; each step picks a
/// host edge through an already mapped vertex and assigns the remaining
/// pattern vertices of that edge in every consistent order.
#[derive(Clone, Debug)]
pub struct Matcher {
    n: usize,
    edges: Vec<HEdge>,
    degree: Vec<usize>,
    profile: Vec<usize>,
}

impl Matcher {
    pub fn new(n: usize, edges: Vec<HEdge>) -> Self {
        let mut degree = vec![0; n];
        for e in &edges {
            for &v in e.vertices() {
                degree[v as usize] += 1;
            }
        }
        let mut profile: Vec<usize> = degree.iter().copied().filter(|&d| d > 0).collect();
        profile.sort_unstable_by(|a, b| b.cmp(a));
        Matcher {
            n,
            edges,
            degree,
            profile,
        }
    }

    pub fn for_target(t: &TargetGraph) -> Self {
        Matcher::new(t.vertex_count(), t.edges().to_vec())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[HEdge] {
        &self.edges
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.degree[v as usize]
    }

    /// Pattern vertices that lie in no pattern edge.
    pub fn isolated(&self) -> Vec<Vertex> {
        (0..self.n as Vertex).filter(|&v| self.degree[v as usize] == 0).collect()
    }

    /// Cheap necessary condition: the host must have, for every j, at least
    /// j vertices whose degree reaches the j-th largest pattern degree.
    fn degree_feasible(&self, host: &EdgeIndex) -> bool {
        if self.edges.len() > host.len() {
            return false;
        }
        let mut hd: Vec<usize> = host.vertices().map(|v| host.degree(v)).collect();
        if hd.len() < self.profile.len() {
            return false;
        }
        hd.sort_unstable_by(|a, b| b.cmp(a));
        self.profile.iter().zip(&hd).all(|(p, h)| h >= p)
    }

    fn edge_order(&self, start: usize) -> Vec<usize> {
        let m = self.edges.len();
        let mut order = Vec::with_capacity(m);
        let mut done = vec![false; m];
        let mut covered = vec![false; self.n];
        let mut next = Some(start);
        while let Some(i) = next {
            done[i] = true;
            order.push(i);
            for &v in self.edges[i].vertices() {
                covered[v as usize] = true;
            }
            next = (0..m).filter(|&j| !done[j]).max_by_key(|&j| {
                let e = &self.edges[j];
                let shared = e.vertices().iter().filter(|&&v| covered[v as usize]).count();
                let weight: usize = e.vertices().iter().map(|&v| self.degree[v as usize]).sum();
                (shared, weight, usize::MAX - j)
            });
        }
        order
    }

    fn default_start(&self) -> usize {
        (0..self.edges.len())
            .max_by_key(|&j| {
                let e = &self.edges[j];
                let top = e.vertices().iter().map(|&v| self.degree[v as usize]).max().unwrap_or(0);
                let weight: usize = e.vertices().iter().map(|&v| self.degree[v as usize]).sum();
                (top, weight, usize::MAX - j)
            })
            .unwrap_or(0)
    }

    /// Calls `visit` with every embedding of the pattern's edges into `host`.
    /// Isolated pattern vertices are left unmapped. Returns `false` if the
    /// visitor stopped the search.
    pub fn for_each(&self, host: &EdgeIndex, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if self.edges.is_empty() {
            return visit(&vec![UNMAPPED; self.n]);
        }
        if !self.degree_feasible(host) {
            return true;
        }
        let order = self.edge_order(self.default_start());
        let mut run = Run::new(self, host, order, None);
        run.step(0, visit)
    }

    /// Like [`Matcher::for_each`] but only embeddings whose image contains
    /// `through`; each such embedding is reported once per pattern edge that
    /// maps onto `through`, which for injective maps means exactly once.
    pub fn for_each_through(
        &self,
        host: &EdgeIndex,
        through: &HEdge,
        visit: &mut dyn FnMut(&[Vertex]) -> bool,
    ) -> bool {
        if !self.degree_feasible(host) || !host.contains(through) {
            return true;
        }
        for start in 0..self.edges.len() {
            let order = self.edge_order(start);
            let mut run = Run::new(self, host, order, Some(*through));
            if !run.step(0, visit) {
                return false;
            }
        }
        true
    }

    pub fn find_through(&self, host: &EdgeIndex, through: &HEdge) -> Option<Vec<Vertex>> {
        let mut found = None;
        self.for_each_through(host, through, &mut |m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    pub fn find_any(&self, host: &EdgeIndex) -> Option<Vec<Vertex>> {
        let mut found = None;
        self.for_each(host, &mut |m| {
            found = Some(m.to_vec());
            false
        });
        found
    }
}

struct Run<'a> {
    pat: &'a Matcher,
    host: &'a EdgeIndex,
    order: Vec<usize>,
    first: Option<HEdge>,
    map: Vec<Vertex>,
    used: Vec<bool>,
}

impl<'a> Run<'a> {
    fn new(pat: &'a Matcher, host: &'a EdgeIndex, order: Vec<usize>, first: Option<HEdge>) -> Self {
        Run {
            pat,
            host,
            order,
            first,
            map: vec![UNMAPPED; pat.n],
            used: vec![false; host.span()],
        }
    }

    fn step(&mut self, pos: usize, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if pos == self.order.len() {
            return visit(&self.map);
        }
        let te = self.pat.edges[self.order[pos]];
        let mut images = [0 as Vertex; super::MAX_ARITY];
        let mut ni = 0;
        let mut free = [0 as Vertex; super::MAX_ARITY];
        let mut nf = 0;
        for &v in te.vertices() {
            let h = self.map[v as usize];
            if h == UNMAPPED {
                free[nf] = v;
                nf += 1;
            } else {
                images[ni] = h;
                ni += 1;
            }
        }
        let images = &images[..ni];
        if nf == 0 {
            let img = HEdge::from_distinct(images);
            if self.host.contains(&img) {
                return self.step(pos + 1, visit);
            }
            return true;
        }
        let free = &free[..nf];
        let candidates: Vec<HEdge> = if pos == 0 && self.first.is_some() {
            vec![self.first.unwrap()]
        } else if ni > 0 {
            let pivot = *images.iter().min_by_key(|&&h| self.host.degree(h)).unwrap();
            self.host
                .incident(pivot)
                .filter(|e| images.iter().all(|&h| e.contains(h)))
                .copied()
                .collect()
        } else {
            self.host.edges().to_vec()
        };
        for he in candidates {
            let mut rest = [0 as Vertex; super::MAX_ARITY];
            let mut nr = 0;
            let mut ok = true;
            for &h in he.vertices() {
                if images.contains(&h) {
                    continue;
                }
                if self.used[h as usize] {
                    ok = false;
                    break;
                }
                rest[nr] = h;
                nr += 1;
            }
            if !ok || nr != nf || !images.iter().all(|h| he.contains(*h)) {
                continue;
            }
            if !self.assign(pos, free, &rest[..nr], 0, visit) {
                return false;
            }
        }
        true
    }

    fn assign(
        &mut self,
        pos: usize,
        free: &[Vertex],
        rest: &[Vertex],
        i: usize,
        visit: &mut dyn FnMut(&[Vertex]) -> bool,
    ) -> bool {
        if i == free.len() {
            return self.step(pos + 1, visit);
        }
        let v = free[i];
        let need = self.pat.degree[v as usize];
        for &h in rest {
            if self.used[h as usize] || self.host.degree(h) < need {
                continue;
            }
            self.map[v as usize] = h;
            self.used[h as usize] = true;
            let go = self.assign(pos, free, rest, i + 1, visit);
            self.used[h as usize] = false;
            self.map[v as usize] = UNMAPPED;
            if !go {
                return false;
            }
        }
        true
    }
}

/// Visits every embedding of `target` whose edge images all lie in `allowed`.
/// Isolated target vertices range over the unused ids below `host_size`.
pub fn for_each_copy(
    target: &TargetGraph,
    allowed: &EdgeIndex,
    host_size: usize,
    visit: &mut dyn FnMut(&Embedding) -> bool,
) {
    let matcher = Matcher::for_target(target);
    let isolated = matcher.isolated();
    matcher.for_each(allowed, &mut |map| {
        let mut full = Embedding(map.to_vec());
        place_isolated(&mut full.0, &isolated, host_size, 0, visit)
    });
}

fn place_isolated(
    map: &mut Vec<Vertex>,
    isolated: &[Vertex],
    host_size: usize,
    i: usize,
    visit: &mut dyn FnMut(&Embedding) -> bool,
) -> bool {
    if i == isolated.len() {
        let e = Embedding(map.clone());
        return visit(&e);
    }
    for h in 0..host_size as Vertex {
        if map.contains(&h) {
            continue;
        }
        map[isolated[i] as usize] = h;
        let go = place_isolated(map, isolated, host_size, i + 1, visit);
        map[isolated[i] as usize] = UNMAPPED;
        if !go {
            return false;
        }
    }
    true
}

/// Every embedding of `target` into the edge set `allowed`. Automorphic
/// images of one copy appear as distinct maps.
pub fn enumerate_copies(
    target: &TargetGraph,
    allowed: &BTreeSet<HEdge>,
    host_size: usize,
) -> Vec<Embedding> {
    let index = EdgeIndex::new(allowed);
    let mut out = Vec::new();
    for_each_copy(target, &index, host_size, &mut |e| {
        out.push(e.clone());
        true
    });
    out
}
