//! Coloured k-uniform hypergraphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::combin::{binom, colex_rank, Subsets};
use crate::edge::{Colour, Edge, VertexSet, MAX_K, MAX_N};
use crate::error::{param, Error, Result};

/// Graphs whose label space has at most this many k-sets keep a flat
/// colour table indexed by colex rank.
const DENSE_LIMIT: u128 = 1 << 26;

#[derive(Clone)]
enum Store {
    /// 0 = absent, 1 = red, 2 = blue.
    Dense(Vec<u8>),
    Sparse(BTreeMap<Edge, Colour>),
}

fn encode(c: Option<Colour>) -> u8 {
    match c {
        None => 0,
        Some(Colour::Red) => 1,
        Some(Colour::Blue) => 2,
    }
}

fn decode(b: u8) -> Option<Colour> {
    match b {
        1 => Some(Colour::Red),
        2 => Some(Colour::Blue),
        _ => None,
    }
}

/// A k-graph with a red/blue colour on every edge. Vertex labels live in
/// `0..label_bound()`; the vertex set may be any subset of that range and
/// labels are never compacted.
#[derive(Clone)]
pub struct ColouredKGraph {
    k: usize,
    bound: usize,
    vertices: VertexSet,
    store: Store,
    counts: [usize; 2],
}

impl ColouredKGraph {
    /// Empty k-graph on `{0, …, n−1}`.
    pub fn new(k: usize, n: usize) -> Result<ColouredKGraph> {
        Self::on_vertices(k, n, VertexSet::range(n.min(256)))
    }

    /// Empty k-graph on an explicit vertex set with labels below `bound`.
    pub fn on_vertices(k: usize, bound: usize, vertices: VertexSet) -> Result<ColouredKGraph> {
        if k == 0 || k > MAX_K {
            return param(format!("uniformity {k} outside 1..={MAX_K}"));
        }
        if bound > MAX_N {
            return param(format!("{bound} vertices exceeds the supported {MAX_N}"));
        }
        if vertices.iter().any(|v| v >= bound) {
            return param("vertex set exceeds label bound");
        }
        let slots = binom(bound, k);
        let store = if slots <= DENSE_LIMIT {
            Store::Dense(vec![0; slots as usize])
        } else {
            Store::Sparse(BTreeMap::new())
        };
        Ok(ColouredKGraph { k, bound, vertices, store, counts: [0, 0] })
    }

    /// Every k-subset of `{0, …, n−1}` in one colour.
    pub fn complete(k: usize, n: usize, colour: Colour) -> Result<ColouredKGraph> {
        Self::from_fn(k, n, |_| Some(colour))
    }

    /// Colours each k-subset of `{0, …, n−1}` (in lexicographic order) by `f`.
    pub fn from_fn<F: FnMut(Edge) -> Option<Colour>>(k: usize, n: usize, mut f: F) -> Result<ColouredKGraph> {
        let mut g = Self::new(k, n)?;
        for e in Subsets::new((0..n).collect(), k) {
            if let Some(c) = f(e) {
                g.set(e, Some(c));
            }
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label_bound(&self) -> usize {
        self.bound
    }

    pub fn vertices(&self) -> VertexSet {
        self.vertices
    }

    /// `|V(H)|`.
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.counts[0] + self.counts[1]
    }

    pub fn colour_count(&self, c: Colour) -> usize {
        self.counts[c.index()]
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count() == 0
    }

    /// True when every k-subset of the vertex set is an edge.
    pub fn is_complete(&self) -> bool {
        self.edge_count() as u128 == binom(self.order(), self.k)
    }

    pub(crate) fn is_dense_store(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    /// Colour lookup by colex rank, for dense graphs only.
    #[inline]
    pub fn colour_at_rank(&self, rank: usize) -> Option<Option<Colour>> {
        match &self.store {
            Store::Dense(table) => Some(decode(table[rank])),
            Store::Sparse(_) => None,
        }
    }

    /// Colour of `e`, or `None` when `e` is not an edge.
    #[inline]
    pub fn colour(&self, e: Edge) -> Option<Colour> {
        match &self.store {
            Store::Dense(table) => {
                if e.len() != self.k || e.get(self.k - 1) >= self.bound {
                    return None;
                }
                decode(table[colex_rank(e)])
            }
            Store::Sparse(map) => map.get(&e).copied(),
        }
    }

    #[inline]
    pub fn contains(&self, e: Edge) -> bool {
        self.colour(e).is_some()
    }

    #[inline]
    pub fn has(&self, e: Edge, c: Colour) -> bool {
        self.colour(e) == Some(c)
    }

    fn check_edge(&self, e: Edge) -> Result<()> {
        if e.len() != self.k {
            return param(format!("edge {e:?} has {} vertices, expected {}", e.len(), self.k));
        }
        if let Some(v) = e.iter().find(|&v| !self.vertices.contains(v)) {
            return param(format!("vertex {v} of edge {e:?} is not in the vertex set"));
        }
        Ok(())
    }

    /// Adds a new edge; duplicates are rejected.
    pub fn insert(&mut self, e: Edge, c: Colour) -> Result<()> {
        self.check_edge(e)?;
        if self.contains(e) {
            return Err(Error::InvalidParameter(format!("duplicate edge {e:?}")));
        }
        self.set(e, Some(c));
        Ok(())
    }

    /// Sets or clears the colour of `e`, returning the previous value.
    /// Panics if `e` is not a k-subset of the vertex set.
    pub fn set(&mut self, e: Edge, c: Option<Colour>) -> Option<Colour> {
        if let Err(err) = self.check_edge(e) {
            panic!("{err}");
        }
        let old = match &mut self.store {
            Store::Dense(table) => {
                let slot = &mut table[colex_rank(e)];
                let old = decode(*slot);
                *slot = encode(c);
                old
            }
            Store::Sparse(map) => match c {
                Some(c) => map.insert(e, c),
                None => map.remove(&e),
            },
        };
        if let Some(o) = old {
            self.counts[o.index()] -= 1;
        }
        if let Some(n) = c {
            self.counts[n.index()] += 1;
        }
        old
    }

    pub fn remove(&mut self, e: Edge) -> Option<Colour> {
        if self.check_edge(e).is_err() {
            return None;
        }
        self.set(e, None)
    }

    /// All edges with colours, in lexicographic order.
    pub fn edges(&self) -> Box<dyn Iterator<Item = (Edge, Colour)> + '_> {
        match &self.store {
            Store::Dense(table) => Box::new(
                Subsets::new(self.vertices.to_vec(), self.k)
                    .filter_map(move |e| decode(table[colex_rank(e)]).map(|c| (e, c))),
            ),
            Store::Sparse(map) => Box::new(map.iter().map(|(&e, &c)| (e, c))),
        }
    }

    pub fn edges_of(&self, c: Colour) -> impl Iterator<Item = Edge> + '_ {
        self.edges().filter(move |&(_, d)| d == c).map(|(e, _)| e)
    }

    pub fn edge_list(&self) -> Vec<(Edge, Colour)> {
        self.edges().collect()
    }

    /// Edges of `self` inside `w` (brute force over subsets when cheaper).
    pub fn edges_within(&self, w: &VertexSet) -> Vec<(Edge, Colour)> {
        let inside = w.intersection(&self.vertices);
        if self.is_dense_store() && binom(inside.len(), self.k) <= self.edge_count() as u128 {
            Subsets::new(inside.to_vec(), self.k)
                .filter_map(|e| self.colour(e).map(|c| (e, c)))
                .collect()
        } else {
            self.edges().filter(|&(e, _)| inside.contains_edge(e)).collect()
        }
    }

    /// Same vertex set, edges kept when `keep` holds.
    pub fn filter<F: FnMut(Edge, Colour) -> bool>(&self, mut keep: F) -> ColouredKGraph {
        let mut g = self.empty_like();
        for (e, c) in self.edges() {
            if keep(e, c) {
                g.set(e, Some(c));
            }
        }
        g
    }

    /// Same vertex set and uniformity, no edges.
    pub fn empty_like(&self) -> ColouredKGraph {
        ColouredKGraph::on_vertices(self.k, self.bound, self.vertices).expect("valid shape")
    }

    /// Every colour replaced by its opposite.
    pub fn swap_colours(&self) -> ColouredKGraph {
        let mut g = self.clone();
        match &mut g.store {
            Store::Dense(table) => {
                for b in table.iter_mut() {
                    *b = match *b {
                        1 => 2,
                        2 => 1,
                        x => x,
                    };
                }
            }
            Store::Sparse(map) => {
                for c in map.values_mut() {
                    *c = c.other();
                }
            }
        }
        g.counts.swap(0, 1);
        g
    }

    /// `H − W`: vertices of `w` and every edge meeting them removed.
    pub fn delete_vertices(&self, w: &VertexSet) -> ColouredKGraph {
        let keep = self.vertices.difference(w);
        self.restrict(&keep)
    }

    /// `H[W]`: the subgraph induced on `w ∩ V(H)`.
    pub fn restrict(&self, w: &VertexSet) -> ColouredKGraph {
        let keep = self.vertices.intersection(w);
        let mut g = ColouredKGraph::on_vertices(self.k, self.bound, keep).expect("valid shape");
        for (e, c) in self.edges_within(&keep) {
            g.set(e, Some(c));
        }
        g
    }

    /// Link graph of `S`: the (k−|S|)-graph on `V(H) ∖ S` of sets `e` with
    /// `e ∪ S ∈ H`, coloured as `e ∪ S`.
    pub fn link(&self, s: Edge) -> Result<ColouredKGraph> {
        if s.len() >= self.k {
            return param(format!("link of a {}-set in a {}-graph", s.len(), self.k));
        }
        if s.is_empty() {
            return Ok(self.clone());
        }
        let rest = self.vertices.difference(&s.to_set());
        let mut g = ColouredKGraph::on_vertices(self.k - s.len(), self.bound, rest)?;
        if self.is_dense_store() {
            for f in Subsets::new(rest.to_vec(), self.k - s.len()) {
                if let Some(c) = self.colour(f.union(s)) {
                    g.set(f, Some(c));
                }
            }
        } else {
            for (e, c) in self.edges() {
                if s.is_subset(e) {
                    g.set(e.minus(s), Some(c));
                }
            }
        }
        Ok(g)
    }

    /// `d_H(S, W)`: number of `(k−|S|)`-sets `e ⊆ W` with `e ∪ S ∈ H`
    /// (optionally of one colour).
    pub fn degree(&self, s: Edge, w: &VertexSet, colour: Option<Colour>) -> Result<usize> {
        if s.len() >= self.k {
            return param(format!("degree of a {}-set in a {}-graph", s.len(), self.k));
        }
        let pool = w.intersection(&self.vertices).difference(&s.to_set());
        let r = self.k - s.len();
        let matches = |c: Colour| colour.is_none_or(|d| d == c);
        if self.is_dense_store() && binom(pool.len(), r) <= 4 * self.edge_count() as u128 + 16 {
            Ok(Subsets::new(pool.to_vec(), r)
                .filter(|&f| self.colour(f.union(s)).is_some_and(matches))
                .count())
        } else {
            Ok(self
                .edges()
                .filter(|&(e, c)| matches(c) && s.is_subset(e) && pool.contains_edge(e.minus(s)))
                .count())
        }
    }

    /// `N_H(S)` for a (k−1)-set `S`: vertices `v` with `S ∪ v ∈ H`.
    pub fn neighbourhood(&self, s: Edge, colour: Option<Colour>) -> VertexSet {
        debug_assert_eq!(s.len() + 1, self.k);
        self.vertices
            .iter()
            .filter(|&v| !s.contains(v))
            .filter(|&v| match (self.colour(s.with(v)), colour) {
                (Some(c), Some(d)) => c == d,
                (Some(_), None) => true,
                (None, _) => false,
            })
            .collect()
    }

    /// Degrees `d_H(S)` of all `i`-sets at once.
    pub fn subset_degrees(&self, i: usize, colour: Option<Colour>) -> SetCounter {
        assert!(i <= self.k);
        let mut deg = SetCounter::new(self.bound, i);
        let mut buf = [0usize; MAX_K];
        for (e, c) in self.edges() {
            if colour.is_some_and(|d| d != c) {
                continue;
            }
            let n = e.len();
            for (j, v) in e.iter().enumerate() {
                buf[j] = v;
            }
            crate::combin::for_each_combination(&buf[..n], i, |sub| deg.add(Edge::from_sorted(sub), 1));
        }
        deg
    }

    /// `∂^j H`: all (k−j)-sets inside some edge.
    pub fn shadow(&self, j: usize) -> Result<BTreeSet<Edge>> {
        shadow_of(self.edges().map(|(e, _)| e), self.k, j)
    }

    /// The same edges with one colour, so tight connectivity ignores colour.
    pub fn uncoloured(&self) -> ColouredKGraph {
        let mut g = self.empty_like();
        for (e, _) in self.edges() {
            g.set(e, Some(Colour::Red));
        }
        g
    }

    /// Vertices covered by at least one edge.
    pub fn support(&self) -> VertexSet {
        let mut s = VertexSet::new();
        for (e, _) in self.edges() {
            for v in e.iter() {
                s.insert(v);
            }
        }
        s
    }
}

/// `∂^j` of an arbitrary family of k-sets.
pub fn shadow_of<I: IntoIterator<Item = Edge>>(edges: I, k: usize, j: usize) -> Result<BTreeSet<Edge>> {
    if j == 0 || j >= k {
        return param(format!("shadow index {j} outside 1..{k}"));
    }
    let size = k - j;
    let mut out = BTreeSet::new();
    for e in edges {
        for s in e.subsets(size) {
            out.insert(s);
        }
    }
    Ok(out)
}

/// Counts keyed by `i`-sets of a label space: a flat colex-indexed table
/// when it fits, a hash map otherwise.
pub enum SetCounter {
    Flat(Vec<u32>),
    Map(std::collections::HashMap<Edge, u32>),
}

impl SetCounter {
    pub fn new(bound: usize, i: usize) -> SetCounter {
        let slots = binom(bound, i);
        if slots <= DENSE_LIMIT {
            SetCounter::Flat(vec![0; slots as usize])
        } else {
            SetCounter::Map(Default::default())
        }
    }

    #[inline]
    pub fn get(&self, s: Edge) -> u32 {
        match self {
            SetCounter::Flat(t) => t[colex_rank(s)],
            SetCounter::Map(m) => m.get(&s).copied().unwrap_or(0),
        }
    }

    #[inline]
    pub fn add(&mut self, s: Edge, by: u32) {
        match self {
            SetCounter::Flat(t) => t[colex_rank(s)] += by,
            SetCounter::Map(m) => *m.entry(s).or_insert(0) += by,
        }
    }
}

impl PartialEq for ColouredKGraph {
    fn eq(&self, other: &ColouredKGraph) -> bool {
        self.k == other.k
            && self.vertices == other.vertices
            && self.counts == other.counts
            && self.edges().eq(other.edges())
    }
}

impl Eq for ColouredKGraph {}

impl fmt::Debug for ColouredKGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ColouredKGraph(k={}, |V|={}, red={}, blue={})",
            self.k,
            self.order(),
            self.counts[0],
            self.counts[1]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[usize]) -> Edge {
        Edge::new(v).unwrap()
    }

    #[test]
    fn insert_and_lookup() {
        let mut g = ColouredKGraph::new(3, 5).unwrap();
        g.insert(e(&[0, 1, 2]), Colour::Red).unwrap();
        g.insert(e(&[1, 2, 4]), Colour::Blue).unwrap();
        assert!(g.insert(e(&[0, 1, 2]), Colour::Blue).is_err());
        assert!(g.insert(e(&[0, 1]), Colour::Blue).is_err());
        assert!(g.insert(e(&[0, 1, 5]), Colour::Blue).is_err());
        assert_eq!(g.colour(e(&[1, 2, 4])), Some(Colour::Blue));
        assert_eq!(g.colour(e(&[0, 2, 4])), None);
        assert_eq!(g.edge_count(), 2);
        let order: Vec<Edge> = g.edges().map(|(x, _)| x).collect();
        assert_eq!(order, vec![e(&[0, 1, 2]), e(&[1, 2, 4])]);
    }

    #[test]
    fn sparse_store_behaves_like_dense() {
        let mut g = ColouredKGraph::new(8, 200).unwrap();
        assert!(!g.is_dense_store());
        g.insert(e(&[0, 1, 2, 3, 4, 5, 6, 7]), Colour::Red).unwrap();
        g.insert(e(&[0, 1, 2, 3, 4, 5, 6, 199]), Colour::Blue).unwrap();
        assert_eq!(g.colour_count(Colour::Blue), 1);
        let l = g.link(e(&[0, 1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!(l.edge_count(), 2);
        assert_eq!(l.colour(Edge::singleton(199)), Some(Colour::Blue));
    }

    #[test]
    fn link_examples() {
        let h = ColouredKGraph::complete(3, 4, Colour::Red).unwrap();
        let l = h.link(Edge::singleton(0)).unwrap();
        assert_eq!(l.k(), 2);
        assert_eq!(l.vertices().to_vec(), vec![1, 2, 3]);
        assert_eq!(l.edge_count(), 3);
        assert_eq!(h.link(Edge::EMPTY).unwrap(), h);
        assert!(h.link(e(&[0, 1, 2])).is_err());
    }

    #[test]
    fn degree_examples() {
        let k5 = ColouredKGraph::complete(3, 5, Colour::Red).unwrap();
        assert_eq!(k5.degree(e(&[0, 1]), &k5.vertices(), None).unwrap(), 3);
        let k3 = ColouredKGraph::complete(3, 3, Colour::Red).unwrap();
        let w: VertexSet = [0, 1, 2].into_iter().collect();
        assert_eq!(k3.degree(Edge::singleton(0), &w, None).unwrap(), 1);
        assert_eq!(k3.degree(Edge::singleton(0), &w, Some(Colour::Blue)).unwrap(), 0);
    }

    #[test]
    fn deletion_keeps_labels() {
        let h = ColouredKGraph::complete(3, 6, Colour::Blue).unwrap();
        let w: VertexSet = [2].into_iter().collect();
        let d = h.delete_vertices(&w);
        assert_eq!(d.label_bound(), 6);
        assert_eq!(d.edge_count(), 10);
        assert!(d.contains(e(&[3, 4, 5])));
        assert_eq!(h.delete_vertices(&VertexSet::new()), h);
        assert!(h.delete_vertices(&h.vertices()).is_empty());
    }

    #[test]
    fn shadow_examples() {
        let mut h = ColouredKGraph::new(3, 3).unwrap();
        h.insert(e(&[0, 1, 2]), Colour::Red).unwrap();
        let s: Vec<Edge> = h.shadow(1).unwrap().into_iter().collect();
        assert_eq!(s, vec![e(&[0, 1]), e(&[0, 2]), e(&[1, 2])]);
        assert!(h.shadow(3).is_err());
        assert!(ColouredKGraph::new(3, 5).unwrap().shadow(2).unwrap().is_empty());
    }

    #[test]
    fn subset_degree_table() {
        let h = ColouredKGraph::complete(4, 7, Colour::Red).unwrap();
        let d = h.subset_degrees(2, None);
        assert!(Subsets::new((0..7).collect(), 2).all(|s| d.get(s) == 10));
        assert_eq!(h.subset_degrees(0, None).get(Edge::EMPTY), 35);
    }
}
