use super::{HEdge, Vertex};

/// A sorted edge list with per-vertex incidence, built once per query.
#[derive(Clone, Debug, Default)]
pub struct EdgeIndex {
    edges: Vec<HEdge>,
    incident: Vec<Vec<u32>>,
}

impl EdgeIndex {
    pub fn new<'a>(edges: impl IntoIterator<Item = &'a HEdge>) -> Self {
        let mut edges: Vec<HEdge> = edges.into_iter().copied().collect();
        edges.sort_unstable();
        edges.dedup();
        let n = edges.iter().map(|e| e.max_vertex() as usize + 1).max().unwrap_or(0);
        let mut incident = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e.vertices() {
                incident[v as usize].push(i as u32);
            }
        }
        EdgeIndex { edges, incident }
    }

    #[inline]
    pub fn contains(&self, e: &HEdge) -> bool {
        // scan the shorter incidence list instead of a full binary search
        let best = e
            .vertices()
            .iter()
            .map(|&v| self.incident_ids(v))
            .min_by_key(|l| l.len())
            .unwrap_or(&[]);
        best.iter().any(|&i| self.edges[i as usize] == *e)
    }

    pub fn edges(&self) -> &[HEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// One past the largest vertex id touched by an edge.
    pub fn span(&self) -> usize {
        self.incident.len()
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.incident_ids(v).len()
    }

    #[inline]
    fn incident_ids(&self, v: Vertex) -> &[u32] {
        self.incident.get(v as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = &HEdge> + '_ {
        self.incident_ids(v).iter().map(move |&i| &self.edges[i as usize])
    }

    /// Vertices that lie in at least one edge, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.incident.len() as Vertex).filter(move |&v| self.degree(v) > 0)
    }

    /// Does some edge contain every vertex of `set`?
    pub fn covers(&self, set: &[Vertex]) -> bool {
        match set.len() {
            0 => !self.edges.is_empty(),
            _ => {
                let pivot = *set.iter().min_by_key(|&&v| self.degree(v)).unwrap();
                self.incident(pivot)
                    .any(|e| set.iter().all(|&v| e.contains(v)))
            }
        }
    }

    /// Number of edges containing every vertex of a nonempty `set`.
    pub fn codegree(&self, set: &[Vertex]) -> usize {
        let pivot = *set.iter().min_by_key(|&&v| self.degree(v)).unwrap();
        self.incident(pivot)
            .filter(|e| set.iter().all(|&v| e.contains(v)))
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[Vertex]) -> HEdge {
        HEdge::new(v).unwrap()
    }

    #[test]
    fn membership_and_degrees() {
        let idx = EdgeIndex::new(&[e(&[0, 1, 2]), e(&[0, 1, 3]), e(&[2, 3, 4])]);
        assert!(idx.contains(&e(&[1, 0, 3])));
        assert!(!idx.contains(&e(&[0, 2, 3])));
        assert!(!idx.contains(&e(&[7, 8, 9])));
        assert_eq!(idx.degree(0), 2);
        assert_eq!(idx.degree(9), 0);
        assert!(idx.covers(&[0, 1]));
        assert!(!idx.covers(&[0, 4]));
        assert_eq!(idx.codegree(&[0, 1]), 2);
        assert_eq!(idx.vertices().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    }
}
