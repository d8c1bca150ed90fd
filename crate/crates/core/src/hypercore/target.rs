use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HEdge, HyperError, Vertex};

/// A finite k-uniform target hypergraph together with the vertex roles the
/// strategies reason about: lift centers, main vertices (base degree >= 3)
/// and minor vertices (base degree <= 2).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetGraph {
    name: String,
    arity: usize,
    vertex_count: usize,
    edges: Vec<HEdge>,
    centers: Vec<Vertex>,
    mains: Vec<Vertex>,
    minors: Vec<Vertex>,
    main_edge: Option<HEdge>,
}

impl fmt::Debug for TargetGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetGraph")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("edges", &self.edges)
            .finish()
    }
}

/// `K̂_{2,l}`: `K_{2,l}` plus the main edge joining its two degree-`l` vertices.
///
/// Vertices 0 and 1 are the main vertices, `2..l+2` the minor ones.
pub fn make_hat_k2l(l: usize) -> Result<TargetGraph, HyperError> {
    if l < 3 {
        return Err(HyperError::Domain(format!("hat K2,l needs l >= 3, got {l}")));
    }
    let mut edges = vec![HEdge::from_distinct(&[0, 1])];
    for i in 0..l as Vertex {
        edges.push(HEdge::from_distinct(&[0, 2 + i]));
        edges.push(HEdge::from_distinct(&[1, 2 + i]));
    }
    let mut g = TargetGraph::with_roles(
        format!("hatK2{l}"),
        2,
        l + 2,
        edges,
        vec![],
        vec![0, 1],
    )?;
    g.main_edge = Some(HEdge::from_distinct(&[0, 1]));
    Ok(g)
}

/// `K_{2,t}(s)`: `K_{2,t}` with the center of an `s`-star glued onto one of
/// its degree-`t` vertices.
///
/// Vertex 0 carries the star, vertex 1 is the other main vertex, `2..t+2`
/// are the common neighbours and the remaining `s` ids are the star leaves.
pub fn make_k2t_s(t: usize, s: usize) -> Result<TargetGraph, HyperError> {
    if t < 3 {
        return Err(HyperError::Domain(format!("K2,t(s) needs t >= 3, got {t}")));
    }
    let mut edges = Vec::with_capacity(2 * t + s);
    for i in 0..t as Vertex {
        edges.push(HEdge::from_distinct(&[0, 2 + i]));
        edges.push(HEdge::from_distinct(&[1, 2 + i]));
    }
    for j in 0..s as Vertex {
        edges.push(HEdge::from_distinct(&[0, 2 + t as Vertex + j]));
    }
    TargetGraph::with_roles(format!("K2,{t}({s})"), 2, 2 + t + s, edges, vec![], vec![0, 1])
}

/// `G^(k)`: adds the same `k - 2` new vertices to every edge of a graph.
pub fn lift(base: &TargetGraph, k: usize) -> Result<TargetGraph, HyperError> {
    if k < 2 {
        return Err(HyperError::Domain(format!("lift needs k >= 2, got {k}")));
    }
    if base.arity != 2 {
        return Err(HyperError::Domain(format!(
            "lift expects a 2-uniform base, got arity {}",
            base.arity
        )));
    }
    if k == 2 {
        return Ok(base.clone());
    }
    let n = base.vertex_count as Vertex;
    let extra: Vec<Vertex> = (n..n + (k as Vertex - 2)).collect();
    let grow = |e: &HEdge| {
        let mut vs = e.vertices().to_vec();
        vs.extend_from_slice(&extra);
        HEdge::from_distinct(&vs)
    };
    let edges: Vec<HEdge> = base.edges.iter().map(grow).collect();
    let mut g = TargetGraph::with_roles(
        format!("{}-{k}", base.name),
        k,
        base.vertex_count + k - 2,
        edges,
        extra.clone(),
        base.mains.clone(),
    )?;
    g.main_edge = base.main_edge.as_ref().map(grow);
    Ok(g)
}

/// The 8-edge subgraph of `K̂_{2,4}^(3)` that keeps the main edge.
pub fn g_minus() -> TargetGraph {
    let full = hat_k24_3();
    // drop the edge between main vertex 1, the last minor and the center
    let dropped = HEdge::from_distinct(&[1, 5, 6]);
    let edges: Vec<HEdge> = full.edges.iter().copied().filter(|e| *e != dropped).collect();
    let mut g = TargetGraph::with_roles("gminus".into(), 3, 7, edges, vec![6], vec![0, 1])
        .expect("gminus is well formed");
    g.main_edge = full.main_edge;
    g
}

/// `K̂_{2,4}^(3)`.
pub fn hat_k24_3() -> TargetGraph {
    lift(&make_hat_k2l(4).expect("l = 4"), 3).expect("k = 3")
}

/// `K̂_{2,3}^(3)`, the scaffold of the first distraction family.
pub fn hat_k23_3() -> TargetGraph {
    lift(&make_hat_k2l(3).expect("l = 3"), 3).expect("k = 3")
}

/// `G_t = K_{2,t+1}^(3)(t-2)`.
pub fn k2t_target(t: usize) -> Result<TargetGraph, HyperError> {
    if t < 3 {
        return Err(HyperError::Domain(format!("G_t needs t >= 3, got {t}")));
    }
    let mut g = lift(&make_k2t_s(t + 1, t - 2)?, 3)?;
    g.name = format!("k2t{t}");
    Ok(g)
}

/// `K_{2,t}^(3)(t-2)`, the scaffold of the second distraction family.
pub fn k2t_scaffold(t: usize) -> Result<TargetGraph, HyperError> {
    lift(&make_k2t_s(t, t - 2)?, 3)
}

/// `K_{2,t}^(3)`.
pub fn k2t_plain(t: usize) -> Result<TargetGraph, HyperError> {
    lift(&make_k2t_s(t, 0)?, 3)
}

/// A cycle on three vertices.
pub fn triangle() -> TargetGraph {
    let edges = vec![
        HEdge::from_distinct(&[0, 1]),
        HEdge::from_distinct(&[0, 2]),
        HEdge::from_distinct(&[1, 2]),
    ];
    TargetGraph::with_roles("k3".into(), 2, 3, edges, vec![], vec![]).expect("triangle")
}

/// A path with `m` edges.
pub fn path(m: usize) -> Result<TargetGraph, HyperError> {
    if m == 0 {
        return Err(HyperError::Domain("path needs at least one edge".into()));
    }
    let edges = (0..m as Vertex)
        .map(|i| HEdge::from_distinct(&[i, i + 1]))
        .collect();
    TargetGraph::with_roles(format!("path{m}"), 2, m + 1, edges, vec![], vec![])
}

impl TargetGraph {
    fn with_roles(
        name: String,
        arity: usize,
        vertex_count: usize,
        mut edges: Vec<HEdge>,
        centers: Vec<Vertex>,
        mains: Vec<Vertex>,
    ) -> Result<Self, HyperError> {
        edges.sort();
        edges.dedup();
        let mut seen = vec![false; vertex_count];
        for e in &edges {
            if e.arity() != arity {
                return Err(HyperError::Domain(format!("edge {e} has wrong arity")));
            }
            for &v in e.vertices() {
                let slot = seen.get_mut(v as usize).ok_or_else(|| {
                    HyperError::Domain(format!("vertex {v} outside 0..{vertex_count}"))
                })?;
                *slot = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(HyperError::Domain(format!("vertex {v} lies in no edge")));
        }
        let minors = (0..vertex_count as Vertex)
            .filter(|v| !centers.contains(v) && !mains.contains(v))
            .collect();
        Ok(TargetGraph {
            name,
            arity,
            vertex_count,
            edges,
            centers,
            mains,
            minors,
            main_edge: None,
        })
    }

    /// Builds a target from a bare edge list and infers its roles: centers
    /// are the vertices shared by every edge (at most `k - 2` of them),
    /// main vertices have degree at least 3, the rest are minor.
    pub fn from_edges(name: &str, arity: usize, edges: Vec<HEdge>) -> Result<Self, HyperError> {
        if edges.is_empty() {
            return Err(HyperError::Domain("target has no edges".into()));
        }
        let vertex_count = edges.iter().map(|e| e.max_vertex() as usize + 1).max().unwrap_or(0);
        let mut centers: Vec<Vertex> = Vec::new();
        if arity >= 3 {
            centers = (0..vertex_count as Vertex)
                .filter(|&v| edges.iter().all(|e| e.contains(v)))
                .take(arity - 2)
                .collect();
        }
        let mut degree = vec![0usize; vertex_count];
        for e in &edges {
            for &v in e.vertices() {
                degree[v as usize] += 1;
            }
        }
        let mains = (0..vertex_count as Vertex)
            .filter(|v| !centers.contains(v) && degree[*v as usize] >= 3)
            .collect();
        TargetGraph::with_roles(name.to_string(), arity, vertex_count, edges, centers, mains)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[HEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn centers(&self) -> &[Vertex] {
        &self.centers
    }

    pub fn mains(&self) -> &[Vertex] {
        &self.mains
    }

    pub fn minors(&self) -> &[Vertex] {
        &self.minors
    }

    pub fn main_edge(&self) -> Option<HEdge> {
        self.main_edge
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// The target with one edge removed; vertices and roles are kept.
    pub fn without_edge(&self, edge: &HEdge) -> Option<TargetGraph> {
        let pos = self.edges.iter().position(|e| e == edge)?;
        let mut g = self.clone();
        g.edges.remove(pos);
        if g.main_edge == Some(*edge) {
            g.main_edge = None;
        }
        g.name = format!("{}-minus-{}", self.name, edge);
        Some(g)
    }

    /// Removes a vertex with all its edges and compacts the ids.
    pub fn without_vertex(&self, v: Vertex) -> Result<TargetGraph, HyperError> {
        let shift = |u: Vertex| if u > v { u - 1 } else { u };
        let edges: Vec<HEdge> = self
            .edges
            .iter()
            .filter(|e| !e.contains(v))
            .map(|e| e.map(shift))
            .collect();
        TargetGraph::from_edges(&format!("{}-del{v}", self.name), self.arity, edges)
    }

    /// One edge per line, ascending ids, preceded by a `k <arity>` header.
    pub fn to_edge_list(&self) -> String {
        format_edge_list(self.arity, &self.edges)
    }

    pub fn from_edge_list(name: &str, text: &str) -> Result<Self, HyperError> {
        let (k, edges) = parse_edge_list(text)?;
        TargetGraph::from_edges(name, k, edges)
    }
}

pub fn format_edge_list(arity: usize, edges: &[HEdge]) -> String {
    let mut out = format!("k {arity}\n");
    for e in edges {
        let parts: Vec<String> = e.vertices().iter().map(|v| v.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the edge-list text format. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<HEdge>), HyperError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| HyperError::Parse("missing `k <arity>` header".into()))?;
    let k = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["k", n] => n
            .parse::<usize>()
            .map_err(|e| HyperError::Parse(format!("bad arity {n:?}: {e}")))?,
        _ => return Err(HyperError::Parse(format!("bad header {header:?}"))),
    };
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (no, line) in lines.enumerate() {
        let vs = line
            .split_whitespace()
            .map(|tok| tok.parse::<Vertex>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| HyperError::Parse(format!("edge line {}: {e}", no + 1)))?;
        if vs.len() != k {
            return Err(HyperError::Parse(format!(
                "edge line {} has {} vertices, expected {k}",
                no + 1,
                vs.len()
            )));
        }
        let e = HEdge::new(&vs)?;
        if seen.insert(e) {
            edges.push(e);
        }
    }
    Ok((k, edges))
}

/// Resolves a target name: `hatK24-3`, `k2t<t>`, `gminus`, `k3`,
/// `path<m>`, `hatK2<l>`, `file:<path>`; a trailing `-<k>` lifts a
/// 2-uniform base.
pub fn target_by_name(name: &str) -> Result<TargetGraph, HyperError> {
    if let Some(path) = name.strip_prefix("file:") {
        let text = std::fs::read_to_string(Path::new(path))
            .map_err(|e| HyperError::Parse(format!("cannot read {path}: {e}")))?;
        return TargetGraph::from_edge_list(name, &text);
    }
    if name == "gminus" {
        return Ok(g_minus());
    }
    if name == "k3" || name == "triangle" {
        return Ok(triangle());
    }
    if let Some(t) = name.strip_prefix("k2t") {
        let t = parse_param(name, t)?;
        return k2t_target(t);
    }
    if let Some((base, k)) = name.rsplit_once('-') {
        if let Ok(k) = k.parse::<usize>() {
            let g = target_by_name(base)?;
            return lift(&g, k);
        }
    }
    if let Some(l) = name.strip_prefix("hatK2") {
        return make_hat_k2l(parse_param(name, l)?);
    }
    if let Some(m) = name.strip_prefix("path") {
        return path(parse_param(name, m)?);
    }
    Err(HyperError::Parse(format!("unknown target {name:?}")))
}

fn parse_param(name: &str, s: &str) -> Result<usize, HyperError> {
    s.parse()
        .map_err(|_| HyperError::Parse(format!("bad parameter in target {name:?}")))
}
