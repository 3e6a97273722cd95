use std::fmt;

use crate::error::{Error, Result};

/// A simplex: a strictly increasing sequence of 1-based vertex ids.
///
/// A simplex on `m` vertices has dimension `m - 1`. Equality and hashing are
/// by vertex set only, which the sorted canonical form gives us for free.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<u32>,
}

impl Simplex {
    /// Builds a simplex from a vertex list, sorting it into canonical order.
    /// Fails on duplicates or an empty list.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("simplex must be non-empty".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "repeated vertex in simplex {:?}",
                vertices
            )));
        }
        Ok(Self { vertices })
    }

    /// Canonical constructor for vertex lists already known to be strictly
    /// increasing. Panics in debug builds if they are not.
    pub fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self { vertices }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        if self.vertices.len() > other.vertices.len() {
            return false;
        }
        self.vertices.iter().all(|v| other.contains_vertex(*v))
    }

    /// The simplex with vertex `v` removed; `None` if `v` is absent or the
    /// result would be empty.
    pub fn without_vertex(&self, v: u32) -> Option<Simplex> {
        if self.vertices.len() == 1 || !self.contains_vertex(v) {
            return None;
        }
        Some(Simplex::from_sorted(
            self.vertices.iter().copied().filter(|&u| u != v).collect(),
        ))
    }

    /// The simplex extended by vertex `v` (must be absent).
    pub fn with_vertex(&self, v: u32) -> Simplex {
        debug_assert!(!self.contains_vertex(v));
        let mut verts = self.vertices.clone();
        verts.push(v);
        verts.sort_unstable();
        Simplex { vertices: verts }
    }

    /// All facets (subsets of one dimension lower), in the order obtained by
    /// dropping the i-th vertex of the ascending ordering.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| {
                let mut verts = self.vertices.clone();
                verts.remove(i);
                Simplex { vertices: verts }
            })
            .collect()
    }

    /// All non-empty proper subsets.
    pub fn proper_subsets(&self) -> Vec<Simplex> {
        let m = self.vertices.len();
        let mut out = Vec::new();
        for mask in 1u32..((1 << m) - 1) {
            let verts: Vec<u32> = (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.vertices[i])
                .collect();
            out.push(Simplex { vertices: verts });
        }
        out
    }

    /// All subsets of the given cardinality, in lexicographic order.
    pub fn subsets_of_size(&self, size: usize) -> Vec<Simplex> {
        combinations(&self.vertices, size)
            .into_iter()
            .map(Simplex::from_sorted)
            .collect()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// All `size`-element subsets of a sorted slice, lexicographically.
pub fn combinations(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    let n = items.len();
    if size == 0 || size > n {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance the combination
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for k in i + 1..size {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// A hypergraph: a list of generator edges over `[n]`, not downward closed.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    pub n: u32,
    pub edges: Vec<Simplex>,
}

impl Hypergraph {
    pub fn new(n: u32, edges: Vec<Simplex>) -> Self {
        Self { n, edges }
    }

    /// Validates that every edge fits in `[n]` and has size between 2 and d+1.
    pub fn validate(&self, d: usize) -> Result<()> {
        for e in &self.edges {
            let sz = e.vertices().len();
            if sz < 2 || sz > d + 1 {
                return Err(Error::InvalidInput(format!(
                    "edge {:?} has size {}, expected 2..={}",
                    e,
                    sz,
                    d + 1
                )));
            }
            if let Some(&max) = e.vertices().last() {
                if max > self.n || e.vertices()[0] < 1 {
                    return Err(Error::InvalidInput(format!(
                        "edge {:?} has a vertex outside [1, {}]",
                        e, self.n
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sorting_and_equality() {
        let a = Simplex::new(vec![3, 1, 2]).unwrap();
        let b = Simplex::new(vec![1, 2, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dimension(), 2);
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert!(Simplex::new(vec![]).is_err());
    }

    #[test]
    fn facets_follow_drop_order() {
        let s = Simplex::new(vec![1, 2, 3]).unwrap();
        let f = s.facets();
        assert_eq!(f[0], Simplex::new(vec![2, 3]).unwrap());
        assert_eq!(f[1], Simplex::new(vec![1, 3]).unwrap());
        assert_eq!(f[2], Simplex::new(vec![1, 2]).unwrap());
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c = combinations(&[1, 2, 3, 4], 2);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![1, 2]);
        assert_eq!(c[5], vec![3, 4]);
    }

    #[test]
    fn hypergraph_validation() {
        let h = Hypergraph::new(3, vec![Simplex::new(vec![1, 2, 3]).unwrap()]);
        assert!(h.validate(2).is_ok());
        assert!(h.validate(1).is_err());
        let h2 = Hypergraph::new(2, vec![Simplex::new(vec![1, 3]).unwrap()]);
        assert!(h2.validate(2).is_err());
    }
}
