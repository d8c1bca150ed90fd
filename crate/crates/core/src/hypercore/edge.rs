use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::HyperError;

/// Index of a vertex in the game's pool.
pub type Vertex = u32;

/// Largest arity an edge can carry.
pub const MAX_ARITY: usize = 6;

/// A k-edge stored as a strictly increasing tuple of vertex ids.
///
/// Slots past the arity are zero, so the derived `Hash`/`Eq` agree with
/// set equality of the vertex tuples.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct HEdge {
    len: u8,
    v: [Vertex; MAX_ARITY],
}

impl HEdge {
    pub fn new(vertices: &[Vertex]) -> Result<Self, HyperError> {
        if vertices.len() < 2 || vertices.len() > MAX_ARITY {
            return Err(HyperError::InvalidEdge(format!(
                "arity {} outside 2..={MAX_ARITY}",
                vertices.len()
            )));
        }
        let mut v = [0; MAX_ARITY];
        v[..vertices.len()].copy_from_slice(vertices);
        v[..vertices.len()].sort_unstable();
        if v[..vertices.len()].windows(2).any(|w| w[0] == w[1]) {
            return Err(HyperError::InvalidEdge(format!(
                "repeated vertex in {vertices:?}"
            )));
        }
        Ok(HEdge {
            len: vertices.len() as u8,
            v,
        })
    }

    /// Builds an edge from vertices known to be distinct; sorts them.
    pub(crate) fn from_distinct(vertices: &[Vertex]) -> Self {
        debug_assert!(vertices.len() >= 2 && vertices.len() <= MAX_ARITY);
        let mut v = [0; MAX_ARITY];
        v[..vertices.len()].copy_from_slice(vertices);
        v[..vertices.len()].sort_unstable();
        debug_assert!(v[..vertices.len()].windows(2).all(|w| w[0] < w[1]));
        HEdge {
            len: vertices.len() as u8,
            v,
        }
    }

    #[inline]
    pub fn vertices(&self) -> &[Vertex] {
        &self.v[..self.len as usize]
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn contains(&self, x: Vertex) -> bool {
        self.vertices().contains(&x)
    }

    pub fn max_vertex(&self) -> Vertex {
        self.v[self.len as usize - 1]
    }

    /// Vertices of the edge other than `x`, or `None` if `x` is not in it.
    pub fn without(&self, x: Vertex) -> Option<Vec<Vertex>> {
        if !self.contains(x) {
            return None;
        }
        Some(self.vertices().iter().copied().filter(|&u| u != x).collect())
    }

    /// Applies a vertex map to every vertex.
    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> HEdge {
        let mapped: Vec<Vertex> = self.vertices().iter().map(|&u| f(u)).collect();
        HEdge::from_distinct(&mapped)
    }
}

impl Ord for HEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for HEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for HEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for HEdge {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HEdge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<Vertex> = Vec::deserialize(d)?;
        HEdge::new(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_sorted_and_ordered_lexicographically() {
        let e = HEdge::new(&[5, 1, 3]).unwrap();
        assert_eq!(e.vertices(), &[1, 3, 5]);
        assert!(HEdge::new(&[0, 1, 9]).unwrap() < HEdge::new(&[0, 2, 3]).unwrap());
        assert_eq!(e, HEdge::new(&[3, 5, 1]).unwrap());
    }

    #[test]
    fn rejects_repeats_and_bad_arity() {
        assert!(HEdge::new(&[1, 1, 2]).is_err());
        assert!(HEdge::new(&[1]).is_err());
        assert!(HEdge::new(&[0, 1, 2, 3, 4, 5, 6]).is_err());
    }

    #[test]
    fn serde_uses_plain_arrays() {
        let e = HEdge::new(&[2, 0, 1]).unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[0,1,2]");
        let back: HEdge = serde_json::from_str("[4,2,3]").unwrap();
        assert_eq!(back.vertices(), &[2, 3, 4]);
    }
}
