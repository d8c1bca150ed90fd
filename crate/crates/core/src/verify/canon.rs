//! Canonical keys for positions with colored vertices and edges.
//!
//! Colors are refined by incident edge signatures until stable, then the
//! search individualizes vertices of the first non-singleton cell and keeps
//! the lexicographically least edge encoding over all discrete leaves.
//! Automorphisms found at equal leaves prune sibling branches.

use std::collections::BTreeMap;

use crate::game::{GameState, Player};
use crate::hypercore::{HEdge, Vertex};
use crate::strategy::MemoryMarks;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(Vec<u8>);

impl CanonKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// A hypergraph whose vertices and edges carry label lists. Vertices that
/// are in no edge and carry no label are dropped.
#[derive(Clone, Debug, Default)]
pub struct Colored {
    /// Label-free bytes copied into the key as is.
    pub header: Vec<u8>,
    pub vertex_labels: Vec<(Vertex, u16)>,
    pub edges: Vec<(HEdge, Vec<u16>)>,
}

impl Colored {
    /// The colored view of a position: owner colors 1 and 2, plus strategy
    /// marks on vertices and edges.
    pub fn of_state(state: &GameState, marks: &MemoryMarks) -> Colored {
        let mut edges: BTreeMap<HEdge, Vec<u16>> = BTreeMap::new();
        for p in [Player::P1, Player::P2] {
            for e in state.edges(p) {
                edges.entry(*e).or_default().push(p.number() as u16);
            }
        }
        for (e, label) in &marks.edges {
            edges.entry(*e).or_default().push(16 + label);
        }
        let mut header = vec![state.arity() as u8, state.to_move().number()];
        header.extend_from_slice(&marks.digest.to_be_bytes());
        Colored {
            header,
            vertex_labels: marks.vertices.clone(),
            edges: edges.into_iter().collect(),
        }
    }
}

pub fn canonical_form(state: &GameState) -> CanonKey {
    canonical_key(&Colored::of_state(state, &MemoryMarks::default()))
}

/// Key of a position together with a P2 strategy's memory.
pub fn canonical_form_with(state: &GameState, marks: &MemoryMarks) -> CanonKey {
    canonical_key(&Colored::of_state(state, marks))
}

struct Problem {
    n: usize,
    /// Per edge: color rank and local vertices.
    edges: Vec<(u32, Vec<usize>)>,
    incident: Vec<Vec<usize>>,
}

fn rank<T: Ord + Clone>(items: &[T]) -> (Vec<u32>, Vec<T>) {
    let mut distinct = items.to_vec();
    distinct.sort();
    distinct.dedup();
    let ranks = items
        .iter()
        .map(|x| distinct.binary_search(x).expect("present") as u32)
        .collect();
    (ranks, distinct)
}

impl Problem {
    fn cells(colors: &[u32]) -> usize {
        colors.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Refines `colors` to the coarsest equitable partition below it.
    /// Colors stay ordered: a vertex's new color sorts first by its old one.
    fn refine(&self, colors: &mut Vec<u32>) {
        loop {
            let before = Self::cells(colors);
            let sigs: Vec<(u32, Vec<(u32, Vec<u32>)>)> = (0..self.n)
                .map(|v| {
                    let mut inc: Vec<(u32, Vec<u32>)> = self.incident[v]
                        .iter()
                        .map(|&j| {
                            let (c, vs) = &self.edges[j];
                            let mut others: Vec<u32> =
                                vs.iter().filter(|&&u| u != v).map(|&u| colors[u]).collect();
                            others.sort_unstable();
                            (*c, others)
                        })
                        .collect();
                    inc.sort_unstable();
                    (colors[v], inc)
                })
                .collect();
            *colors = rank(&sigs).0;
            if Self::cells(colors) == before {
                return;
            }
        }
    }

    fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
        let c = colors[v];
        colors
            .iter()
            .enumerate()
            .map(|(u, &x)| {
                if x > c || (x == c && u != v) {
                    x + 1
                } else {
                    x
                }
            })
            .collect()
    }

    fn encode(&self, labeling: &[u32]) -> Vec<u32> {
        let mut rows: Vec<Vec<u32>> = self
            .edges
            .iter()
            .map(|(c, vs)| {
                let mut r: Vec<u32> = vs.iter().map(|&v| labeling[v]).collect();
                r.sort_unstable();
                r.insert(0, *c);
                r
            })
            .collect();
        rows.sort_unstable();
        rows.concat()
    }
}

struct Search<'a> {
    p: &'a Problem,
    best: Option<(Vec<u32>, Vec<u32>)>,
    automorphisms: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl Search<'_> {
    fn leaf(&mut self, labeling: Vec<u32>) {
        let code = self.p.encode(&labeling);
        match &self.best {
            Some((b, _)) if code > *b => {}
            Some((b, bl)) if code == *b => {
                // labeling^-1 then best: an automorphism
                let mut inv = vec![0; self.p.n];
                for (v, &l) in bl.iter().enumerate() {
                    inv[l as usize] = v;
                }
                let sigma: Vec<usize> = labeling.iter().map(|&l| inv[l as usize]).collect();
                if sigma.iter().enumerate().any(|(i, &s)| i != s) {
                    self.automorphisms.push(sigma);
                }
            }
            _ => self.best = Some((code, labeling)),
        }
    }

    fn descend(&mut self, colors: Vec<u32>, path: &mut Vec<usize>) {
        let n = self.p.n;
        if Problem::cells(&colors) == n {
            self.leaf(colors);
            return;
        }
        let mut size = vec![0usize; n];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let cell = (0..n).find(|&c| size[c] > 1).expect("non-discrete") as u32;
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if !tried.is_empty() {
                let mut parent: Vec<usize> = (0..n).collect();
                for g in &self.automorphisms {
                    if path.iter().all(|&p| g[p] == p) {
                        for (i, &j) in g.iter().enumerate() {
                            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                            parent[a] = b;
                        }
                    }
                }
                let root = find(&mut parent, v);
                if tried.iter().any(|&u| find(&mut parent, u) == root) {
                    continue;
                }
            }
            tried.push(v);
            let mut next = Problem::individualize(&colors, v);
            self.p.refine(&mut next);
            path.push(v);
            self.descend(next, path);
            path.pop();
        }
    }
}

pub fn canonical_key(g: &Colored) -> CanonKey {
    let mut verts: Vec<Vertex> = g
        .edges
        .iter()
        .flat_map(|(e, _)| e.vertices().iter().copied())
        .chain(g.vertex_labels.iter().map(|&(v, _)| v))
        .collect();
    verts.sort_unstable();
    verts.dedup();
    let n = verts.len();
    let local = |v: Vertex| verts.binary_search(&v).expect("collected");
    let mut vlabels: Vec<Vec<u16>> = vec![Vec::new(); n];
    for &(v, l) in &g.vertex_labels {
        vlabels[local(v)].push(l);
    }
    for l in &mut vlabels {
        l.sort_unstable();
    }
    let mut elabels: Vec<Vec<u16>> = g.edges.iter().map(|(_, l)| l.clone()).collect();
    for l in &mut elabels {
        l.sort_unstable();
    }
    let (ecolor, edistinct) = rank(&elabels);
    let (vcolor, vdistinct) = rank(&vlabels);
    let mut incident = vec![Vec::new(); n];
    let edges: Vec<(u32, Vec<usize>)> = g
        .edges
        .iter()
        .zip(&ecolor)
        .enumerate()
        .map(|(j, ((e, _), &c))| {
            let vs: Vec<usize> = e.vertices().iter().map(|&v| local(v)).collect();
            for &v in &vs {
                incident[v].push(j);
            }
            (c, vs)
        })
        .collect();
    let p = Problem { n, edges, incident };

    let mut out = g.header.clone();
    let put = |x: usize, out: &mut Vec<u8>| out.extend_from_slice(&(x as u32).to_be_bytes());
    put(n, &mut out);
    for table in [&vdistinct, &edistinct] {
        put(table.len(), &mut out);
        for labels in table.iter() {
            put(labels.len(), &mut out);
            for &l in labels {
                out.extend_from_slice(&l.to_be_bytes());
            }
        }
    }
    if n == 0 {
        return CanonKey(out);
    }
    let mut colors = vcolor.clone();
    p.refine(&mut colors);
    let mut s = Search {
        p: &p,
        best: None,
        automorphisms: Vec::new(),
    };
    s.descend(colors, &mut Vec::new());
    let (code, labeling) = s.best.expect("at least one leaf");
    // initial vertex colors in canonical order
    let mut by_label = vec![0u32; n];
    for (v, &l) in labeling.iter().enumerate() {
        by_label[l as usize] = vcolor[v];
    }
    for c in by_label {
        put(c as usize, &mut out);
    }
    put(p.edges.len(), &mut out);
    for x in code {
        put(x as usize, &mut out);
    }
    CanonKey(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;
    use crate::hypercore::hat_k24_3;

    fn e(v: [Vertex; 3]) -> HEdge {
        HEdge::new(&v).unwrap()
    }

    #[test]
    fn empty_state_has_a_fixed_key() {
        let g = new_game(hat_k24_3(), None);
        assert_eq!(canonical_form(&g), canonical_form(&new_game(hat_k24_3(), Some(5))));
        assert_eq!(canonical_form(&g).as_bytes().len(), 2 + 8 + 4 * 3);
    }

    #[test]
    fn relabeling_and_color_swaps() {
        let mut a = new_game(hat_k24_3(), None);
        a.play(Player::P1, e([0, 1, 2])).unwrap();
        a.play(Player::P2, e([2, 3, 4])).unwrap();
        let mut b = new_game(hat_k24_3(), None);
        b.play(Player::P1, e([2, 3, 4])).unwrap();
        b.play(Player::P2, e([0, 1, 2])).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        let mut c = new_game(hat_k24_3(), None);
        c.play(Player::P1, e([0, 1, 2])).unwrap();
        c.play(Player::P2, e([1, 2, 3])).unwrap();
        assert_ne!(canonical_form(&a), canonical_form(&c));
    }

    #[test]
    fn symmetric_cycle() {
        // a cyclic chain of edges: every vertex looks alike to refinement
        let cyc = |shift: Vertex| -> Colored {
            let n = 8;
            Colored {
                header: Vec::new(),
                vertex_labels: Vec::new(),
                edges: (0..n)
                    .map(|i| {
                        let v = |j: Vertex| (i + j + shift) % n;
                        (e([v(0), v(1), v(3)]), vec![1 + (i % 2) as u16])
                    })
                    .collect(),
            }
        };
        assert_eq!(canonical_key(&cyc(0)), canonical_key(&cyc(3)));
    }
}
