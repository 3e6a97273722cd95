use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{combinations, Hypergraph, Simplex};

/// A d-dimensional simplicial complex on vertex set `[n]`.
///
/// Stored per dimension in hash sets keyed by canonical sorted vertex arrays.
/// All n singletons are always present, the layers are downward closed, and
/// nothing exceeds dimension `d`. Values are immutable: `add_simplex` returns
/// a new complex.
#[derive(Clone, Debug)]
pub struct Complex {
    n: u32,
    d: usize,
    layers: Vec<HashSet<Simplex>>,
}

impl Complex {
    /// The complex consisting of the n singletons only.
    pub fn singletons(n: u32, d: usize) -> Self {
        let mut layers = vec![HashSet::new(); d + 1];
        for v in 1..=n {
            layers[0].insert(Simplex::from_sorted(vec![v]));
        }
        Self { n, d, layers }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dimension_cap(&self) -> usize {
        self.d
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        s.dimension() <= self.d && self.layers[s.dimension()].contains(s)
    }

    /// The i-simplices, sorted lexicographically (fresh vector).
    pub fn simplices_of_dim(&self, i: usize) -> Vec<Simplex> {
        if i > self.d {
            return Vec::new();
        }
        let mut v: Vec<Simplex> = self.layers[i].iter().cloned().collect();
        v.sort_unstable();
        v
    }

    pub fn count_of_dim(&self, i: usize) -> usize {
        if i > self.d {
            0
        } else {
            self.layers[i].len()
        }
    }

    pub fn total_simplices(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    fn insert_with_closure(&mut self, s: &Simplex) {
        if self.contains(s) {
            return;
        }
        self.layers[s.dimension()].insert(s.clone());
        if s.dimension() > 0 {
            for f in s.facets() {
                self.insert_with_closure(&f);
            }
        }
    }

    /// Adds `b` and its downward closure, returning the enlarged complex.
    /// If `b` is already present the result equals `self`.
    pub fn add_simplex(&self, b: &Simplex) -> Result<Complex> {
        self.check_valid_simplex(b)?;
        let mut out = self.clone();
        out.insert_with_closure(b);
        Ok(out)
    }

    /// In-place variant used by process replay, same closure semantics.
    pub fn add_simplex_mut(&mut self, b: &Simplex) -> Result<()> {
        self.check_valid_simplex(b)?;
        self.insert_with_closure(b);
        Ok(())
    }

    fn check_valid_simplex(&self, b: &Simplex) -> Result<()> {
        if b.dimension() > self.d {
            return Err(Error::InvalidInput(format!(
                "simplex {:?} exceeds dimension cap {}",
                b, self.d
            )));
        }
        if b.vertices().last().copied().unwrap_or(0) > self.n || b.vertices()[0] < 1 {
            return Err(Error::InvalidInput(format!(
                "simplex {:?} has a vertex outside [1, {}]",
                b, self.n
            )));
        }
        Ok(())
    }

    /// True iff the (j+2)-set `a` is a j-shell: all of its (j+1)-subsets are
    /// j-simplices.
    pub fn is_shell(&self, a: &Simplex, j: usize) -> bool {
        if a.vertices().len() != j + 2 {
            return false;
        }
        a.facets().iter().all(|f| self.contains(f))
    }

    /// Apex vertices `a` outside `b` such that `b ∪ {a}` is a j-shell, where
    /// `b` is a j-simplex. Ascending order.
    pub fn shells_containing(&self, b: &Simplex) -> Vec<u32> {
        let j = b.dimension();
        (1..=self.n)
            .filter(|&a| !b.contains_vertex(a))
            .filter(|&a| self.is_shell(&b.with_vertex(a), j))
            .collect()
    }

    /// Vertex classes under "joined by a path of shared simplices".
    /// Classes are sorted internally and by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<u32>> {
        let mut uf = UnionFind::new(self.n as usize + 1);
        for layer in &self.layers[1..] {
            for s in layer {
                let vs = s.vertices();
                for w in vs.windows(2) {
                    uf.union(w[0] as usize, w[1] as usize);
                }
            }
        }
        let mut classes: HashMap<usize, Vec<u32>> = HashMap::new();
        for v in 1..=self.n {
            classes.entry(uf.find(v as usize)).or_default().push(v);
        }
        let mut out: Vec<Vec<u32>> = classes.into_values().collect();
        out.sort_unstable_by_key(|c| c[0]);
        out
    }

    /// The j-skeleton: all i-simplices with i ≤ j, as a j-complex.
    pub fn skeleton(&self, j: usize) -> Complex {
        let cap = j.min(self.d);
        Complex {
            n: self.n,
            d: cap,
            layers: self.layers[..=cap].to_vec(),
        }
    }

    /// Inclusion-maximal simplices, sorted lexicographically.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for s in layer {
                let mut maximal = true;
                'outer: for hi in i + 1..=self.d {
                    for t in &self.layers[hi] {
                        if s.is_subset_of(t) {
                            maximal = false;
                            break 'outer;
                        }
                    }
                }
                if maximal {
                    out.push(s.clone());
                }
            }
        }
        out.sort_unstable_by(|a, b| {
            a.vertices()
                .len()
                .cmp(&b.vertices().len())
                .then_with(|| a.cmp(b))
        });
        out
    }

    /// `self ⊆ other` as simplex sets.
    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.layers
            .iter()
            .all(|layer| layer.iter().all(|s| other.contains(s)))
    }

    /// Simplices of dimension in `j+1..=d` that strictly contain the given
    /// (j+1)-set, i.e. candidates violating K-localisation.
    pub fn strict_supersets(&self, j_set: &Simplex) -> Vec<Simplex> {
        let j = j_set.dimension();
        let mut out = Vec::new();
        for i in j + 1..=self.d {
            for s in &self.layers[i] {
                if j_set.is_subset_of(s) {
                    out.push(s.clone());
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Index from each j-simplex to the simplices of higher dimension that
    /// contain it. Sorted deterministically.
    pub fn superset_index(&self, j: usize) -> HashMap<Simplex, Vec<Simplex>> {
        let mut index: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
        for s in &self.layers[j] {
            index.insert(s.clone(), Vec::new());
        }
        for i in j + 1..=self.d {
            for s in &self.layers[i] {
                for sub in s.subsets_of_size(j + 1) {
                    if let Some(v) = index.get_mut(&sub) {
                        v.push(s.clone());
                    }
                }
            }
        }
        for v in index.values_mut() {
            v.sort_unstable();
        }
        index
    }

    /// All (j+2)-sets of `[n]` forming j-shells, lexicographically.
    pub fn shells(&self, j: usize) -> Vec<Simplex> {
        let all: Vec<u32> = (1..=self.n).collect();
        combinations(&all, j + 2)
            .into_iter()
            .map(Simplex::from_sorted)
            .filter(|a| self.is_shell(a, j))
            .collect()
    }

    /// Exhaustive closure check, used by tests.
    pub fn closure_holds(&self) -> bool {
        for v in 1..=self.n {
            if !self.contains(&Simplex::from_sorted(vec![v])) {
                return false;
            }
        }
        self.layers.iter().flatten().all(|s| {
            s.proper_subsets()
                .iter()
                .all(|sub| self.contains(sub))
        })
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.layers == other.layers
    }
}
impl Eq for Complex {}

/// The downward closure of a hypergraph's edges plus all singletons.
pub fn downward_closure(h: &Hypergraph, d: usize) -> Result<Complex> {
    h.validate(d)?;
    let mut c = Complex::singletons(h.n, d);
    for e in &h.edges {
        c.insert_with_closure(e);
    }
    Ok(c)
}

/// Union-find with path compression and union by rank.
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            self.parent[x] = self.find(self.parent[x]);
        }
        self.parent[x]
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return;
        }
        if self.rank[rx] < self.rank[ry] {
            self.parent[rx] = ry;
        } else if self.rank[rx] > self.rank[ry] {
            self.parent[ry] = rx;
        } else {
            self.parent[ry] = rx;
            self.rank[rx] += 1;
        }
    }
}

/// Serialization schema: `{"n":.., "d":.., "facets":[[..],..]}` with optional
/// ignored metadata. The reader reconstructs by downward closure.
#[derive(Serialize, Deserialize)]
pub struct ComplexFile {
    pub n: u32,
    pub d: usize,
    pub facets: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl ComplexFile {
    pub fn from_complex(c: &Complex, meta: Option<serde_json::Value>) -> Self {
        Self {
            n: c.n(),
            d: c.dimension_cap(),
            facets: c
                .facets()
                .into_iter()
                .map(|s| s.vertices().to_vec())
                .collect(),
            meta,
        }
    }

    pub fn into_complex(self) -> Result<Complex> {
        let mut c = Complex::singletons(self.n, self.d);
        for f in self.facets {
            let s = Simplex::new(f)?;
            c.add_simplex_mut(&s)?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    /// The path complex of the paper's non-monotonicity example.
    pub fn path_complex() -> Complex {
        downward_closure(
            &Hypergraph::new(4, vec![s(&[1, 2]), s(&[2, 3]), s(&[3, 4])]),
            2,
        )
        .unwrap()
    }

    #[test]
    fn closure_of_single_triangle() {
        let c = downward_closure(&Hypergraph::new(3, vec![s(&[1, 2, 3])]), 2).unwrap();
        assert_eq!(c.total_simplices(), 7);
        for sub in [
            s(&[1]),
            s(&[2]),
            s(&[3]),
            s(&[1, 2]),
            s(&[1, 3]),
            s(&[2, 3]),
            s(&[1, 2, 3]),
        ] {
            assert!(c.contains(&sub));
        }
        assert!(c.closure_holds());
    }

    #[test]
    fn closure_of_empty_generators() {
        let c = downward_closure(&Hypergraph::new(5, vec![]), 2).unwrap();
        assert_eq!(c.total_simplices(), 5);
    }

    #[test]
    fn closure_rejects_bad_edges() {
        let h = Hypergraph::new(3, vec![s(&[1, 4])]);
        assert!(downward_closure(&h, 2).is_err());
        let h2 = Hypergraph::new(5, vec![s(&[1, 2, 3, 4])]);
        assert!(downward_closure(&h2, 2).is_err());
    }

    #[test]
    fn add_simplex_is_idempotent_on_members() {
        let c = path_complex();
        let c2 = c.add_simplex(&s(&[2, 3])).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn add_simplex_to_singletons() {
        let c = Complex::singletons(3, 2);
        let c2 = c.add_simplex(&s(&[1, 2])).unwrap();
        assert_eq!(c2.count_of_dim(1), 1);
        assert!(c2.contains(&s(&[1, 2])));
        assert!(c.is_subcomplex_of(&c2));
    }

    #[test]
    fn add_simplex_dimension_overflow() {
        let c = Complex::singletons(5, 1);
        assert!(c.add_simplex(&s(&[1, 2, 3])).is_err());
    }

    #[test]
    fn example_complex_gprime_shells() {
        // 𝒢′ = path + {1,3,4}
        let g = path_complex();
        let gp = g.add_simplex(&s(&[1, 3, 4])).unwrap();
        assert!(gp.is_shell(&s(&[1, 2, 3]), 1));
        assert!(!g.is_shell(&s(&[1, 2, 3]), 1));
        let full = downward_closure(&Hypergraph::new(4, vec![s(&[1, 2, 3, 4])]), 3).unwrap();
        assert!(full.is_shell(&s(&[2, 3, 4]), 1));

        assert_eq!(g.shells_containing(&s(&[2, 3])), Vec::<u32>::new());
        assert_eq!(gp.shells_containing(&s(&[1, 3])), vec![2, 4]);
    }

    #[test]
    fn shells_containing_on_complete_skeleton() {
        let n = 7;
        let all: Vec<u32> = (1..=n).collect();
        let edges = combinations(&all, 2)
            .into_iter()
            .map(Simplex::from_sorted)
            .collect();
        let c = downward_closure(&Hypergraph::new(n, edges), 2).unwrap();
        assert_eq!(c.shells_containing(&s(&[2, 5])).len(), (n - 2) as usize);
    }

    #[test]
    fn components_counts() {
        assert_eq!(Complex::singletons(4, 2).connected_components().len(), 4);
        assert_eq!(path_complex().connected_components().len(), 1);
        let c = downward_closure(&Hypergraph::new(5, vec![s(&[1, 2]), s(&[3, 4])]), 2).unwrap();
        let comps = c.connected_components();
        assert_eq!(comps, vec![vec![1, 2], vec![3, 4], vec![5]]);
    }

    #[test]
    fn skeleton_drops_high_dimensions() {
        let full = downward_closure(&Hypergraph::new(4, vec![s(&[1, 2, 3, 4])]), 3).unwrap();
        let sk = full.skeleton(1);
        assert_eq!(sk.count_of_dim(1), 6);
        assert_eq!(sk.dimension_cap(), 1);
        let sk0 = full.skeleton(0);
        assert_eq!(sk0.total_simplices(), 4);
        let g = path_complex();
        assert_eq!(g.skeleton(1), g.skeleton(1).skeleton(1));
        assert_eq!(g.skeleton(1).total_simplices(), g.total_simplices());
    }

    #[test]
    fn facet_roundtrip() {
        let g = path_complex().add_simplex(&s(&[1, 3, 4])).unwrap();
        let file = ComplexFile::from_complex(&g, None);
        let back = file.into_complex().unwrap();
        assert_eq!(g, back);
    }
}
