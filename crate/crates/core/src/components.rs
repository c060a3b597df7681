//! Tight and loose connectivity.
//!
//! Two edges are tightly adjacent when they share `k − 1` vertices and have
//! the same colour. Adjacency is discovered by registering each edge under
//! its `k` facets, so the cost is linear in `k · |E|`.

use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::combin::{binom, colex_rank};
use crate::edge::{Colour, Edge, VertexSet};
use crate::error::{param, Result};
use crate::graph::ColouredKGraph;

/// Index of a tight component in a [`TightDecomposition`].
pub type ComponentId = usize;

pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        true
    }
}

/// A maximal tightly connected monochromatic edge set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightComponent {
    pub id: ComponentId,
    pub colour: Colour,
    pub edges: BTreeSet<Edge>,
}

/// Summary of one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub id: ComponentId,
    pub colour: Colour,
    pub size: usize,
    pub least_edge: Edge,
    pub support: VertexSet,
}

enum Lookup {
    Rank(Vec<u32>),
    Map(HashMap<Edge, u32>),
}

const NONE: u32 = u32::MAX;

/// Component label of every edge of a graph.
pub struct TightDecomposition {
    k: usize,
    lookup: Lookup,
    components: Vec<ComponentInfo>,
}

impl TightDecomposition {
    /// Tight components of `h`, respecting colours.
    pub fn new(h: &ColouredKGraph) -> TightDecomposition {
        Self::build(h, true)
    }

    /// Tight components of `h` with colours ignored.
    pub fn uncoloured(h: &ColouredKGraph) -> TightDecomposition {
        Self::build(h, false)
    }

    fn build(h: &ColouredKGraph, by_colour: bool) -> TightDecomposition {
        let k = h.k();
        let edges = h.edge_list();
        let m = edges.len();
        let mut uf = UnionFind::new(m);
        let facet_slots = binom(h.label_bound(), k - 1);
        let colour_slot = |c: Colour| if by_colour { c.index() } else { 0 };
        if facet_slots <= 1 << 26 {
            let mut first = vec![NONE; 2 * facet_slots as usize];
            for (i, &(e, c)) in edges.iter().enumerate() {
                for f in e.facets() {
                    let slot = 2 * colex_rank(f) + colour_slot(c);
                    if first[slot] == NONE {
                        first[slot] = i as u32;
                    } else {
                        uf.union(first[slot] as usize, i);
                    }
                }
            }
        } else {
            let mut first: HashMap<(Edge, usize), u32> = HashMap::new();
            for (i, &(e, c)) in edges.iter().enumerate() {
                for f in e.facets() {
                    match first.entry((f, colour_slot(c))) {
                        std::collections::hash_map::Entry::Occupied(o) => {
                            uf.union(*o.get() as usize, i);
                        }
                        std::collections::hash_map::Entry::Vacant(v) => {
                            v.insert(i as u32);
                        }
                    }
                }
            }
        }
        // edges are in lexicographic order, so first sight of a root is its least edge
        let mut root_id = vec![NONE; m];
        let mut components: Vec<ComponentInfo> = Vec::new();
        let mut label = vec![0u32; m];
        for (i, &(e, c)) in edges.iter().enumerate() {
            let r = uf.find(i);
            if root_id[r] == NONE {
                root_id[r] = components.len() as u32;
                components.push(ComponentInfo {
                    id: components.len(),
                    colour: c,
                    size: 0,
                    least_edge: e,
                    support: VertexSet::new(),
                });
            }
            let id = root_id[r];
            label[i] = id;
            let info = &mut components[id as usize];
            info.size += 1;
            for v in e.iter() {
                info.support.insert(v);
            }
        }
        let lookup = if h.is_dense_store() {
            let mut table = vec![NONE; binom(h.label_bound(), k) as usize];
            for (i, &(e, _)) in edges.iter().enumerate() {
                table[colex_rank(e)] = label[i];
            }
            Lookup::Rank(table)
        } else {
            Lookup::Map(edges.iter().enumerate().map(|(i, &(e, _))| (e, label[i])).collect())
        };
        TightDecomposition { k, lookup, components }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    pub fn info(&self, id: ComponentId) -> &ComponentInfo {
        &self.components[id]
    }

    /// Component of edge `e`, or `None` when `e` is not an edge.
    #[inline]
    pub fn component_of(&self, e: Edge) -> Option<ComponentId> {
        if e.len() != self.k {
            return None;
        }
        let raw = match &self.lookup {
            Lookup::Rank(t) => *t.get(colex_rank(e))?,
            Lookup::Map(m) => *m.get(&e)?,
        };
        (raw != NONE).then_some(raw as ComponentId)
    }

    /// Component lookup by colex rank when the lookup table is dense.
    #[inline]
    pub fn component_at_rank(&self, rank: usize) -> Option<Option<ComponentId>> {
        match &self.lookup {
            Lookup::Rank(t) => Some(t.get(rank).filter(|&&r| r != NONE).map(|&r| r as ComponentId)),
            Lookup::Map(_) => None,
        }
    }

    pub fn in_component(&self, e: Edge, id: ComponentId) -> bool {
        self.component_of(e) == Some(id)
    }

    /// Edges of component `id`, lexicographically.
    pub fn edges_of(&self, h: &ColouredKGraph, id: ComponentId) -> Vec<Edge> {
        h.edges_within(&self.components[id].support)
            .into_iter()
            .filter(|&(e, _)| self.in_component(e, id))
            .map(|(e, _)| e)
            .collect()
    }

    /// Is the (k−1)-set `t` in `∂` of component `id`?
    pub fn in_shadow(&self, t: Edge, id: ComponentId) -> bool {
        let info = &self.components[id];
        info.support.iter().any(|v| !t.contains(v) && self.in_component(t.with(v), id))
    }

    /// Materialises all components.
    pub fn materialise(&self, h: &ColouredKGraph) -> Vec<TightComponent> {
        let mut out: Vec<TightComponent> = self
            .components
            .iter()
            .map(|c| TightComponent { id: c.id, colour: c.colour, edges: BTreeSet::new() })
            .collect();
        for (e, _) in h.edges() {
            if let Some(id) = self.component_of(e) {
                out[id].edges.insert(e);
            }
        }
        out
    }
}

/// All tight components of `h`, ids ordered by least edge.
pub fn tight_components(h: &ColouredKGraph) -> Vec<TightComponent> {
    TightDecomposition::new(h).materialise(h)
}

/// Shortest tight walk from `f` to `g`, found by A* with the number of
/// differing vertices as heuristic. `Ok(None)` means not connected.
pub fn tight_walk(h: &ColouredKGraph, f: Edge, g: Edge) -> Result<Option<Vec<Edge>>> {
    let (Some(cf), Some(cg)) = (h.colour(f), h.colour(g)) else {
        return param(format!("tight walk endpoints {f:?}, {g:?} must be edges"));
    };
    if cf != cg {
        return Ok(None);
    }
    let colour = cf;
    let verts = h.vertices().to_vec();
    let dist_to_goal = |e: Edge| e.len() - e.intersection_len(g);
    let mut parent: HashMap<Edge, Edge> = HashMap::new();
    let mut best: HashMap<Edge, usize> = HashMap::new();
    let mut heap = BinaryHeap::new();
    best.insert(f, 0);
    heap.push(Reverse((dist_to_goal(f), 0usize, f)));
    while let Some(Reverse((_, d, e))) = heap.pop() {
        if e == g {
            let mut walk = vec![g];
            let mut cur = g;
            while let Some(&p) = parent.get(&cur) {
                walk.push(p);
                cur = p;
            }
            walk.reverse();
            return Ok(Some(walk));
        }
        if best.get(&e).is_some_and(|&b| b < d) {
            continue;
        }
        // prefer moves that bring in a vertex of g
        for out in e.iter() {
            let facet = e.without(out);
            for &v in &verts {
                if e.contains(v) {
                    continue;
                }
                let next = facet.with(v);
                if !h.has(next, colour) {
                    continue;
                }
                let nd = d + 1;
                if best.get(&next).is_none_or(|&b| nd < b) {
                    best.insert(next, nd);
                    parent.insert(next, e);
                    heap.push(Reverse((nd + dist_to_goal(next), nd, next)));
                }
            }
        }
    }
    Ok(None)
}

/// Checks that `walk` is a tight walk in colour `c`.
pub fn is_tight_walk(h: &ColouredKGraph, walk: &[Edge], c: Colour) -> bool {
    !walk.is_empty()
        && walk.iter().all(|&e| h.has(e, c))
        && walk.windows(2).all(|w| w[0].intersection_len(w[1]) + 1 == h.k())
}

/// Maximal loosely connected sets of edges of one colour, ordered by least
/// edge; edges within each set are sorted.
pub fn loose_components(h: &ColouredKGraph, colour: Colour) -> Vec<Vec<Edge>> {
    let edges: Vec<Edge> = h.edges_of(colour).collect();
    let mut uf = UnionFind::new(edges.len());
    let mut at_vertex = vec![NONE; h.label_bound()];
    for (i, e) in edges.iter().enumerate() {
        for v in e.iter() {
            if at_vertex[v] == NONE {
                at_vertex[v] = i as u32;
            } else {
                uf.union(at_vertex[v] as usize, i);
            }
        }
    }
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<Vec<Edge>> = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        let r = uf.find(i);
        let idx = *slot.entry(r).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[idx].push(e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(k: usize, n: usize, edges: &[(&[usize], Colour)]) -> ColouredKGraph {
        let mut g = ColouredKGraph::new(k, n).unwrap();
        for (v, c) in edges {
            g.insert(Edge::new(v).unwrap(), *c).unwrap();
        }
        g
    }

    const R: Colour = Colour::Red;
    const B: Colour = Colour::Blue;

    #[test]
    fn small_components() {
        let g = graph(3, 6, &[(&[0, 1, 2], R), (&[1, 2, 3], R)]);
        assert_eq!(tight_components(&g).len(), 1);
        let g = graph(3, 6, &[(&[0, 1, 2], R), (&[3, 4, 5], R)]);
        assert_eq!(tight_components(&g).len(), 2);
        let g = graph(3, 6, &[(&[0, 1, 2], R), (&[1, 2, 3], B)]);
        let comps = tight_components(&g);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].colour, R);
        assert_eq!(comps[1].colour, B);
    }

    #[test]
    fn ids_follow_least_edge() {
        let g = graph(3, 7, &[(&[4, 5, 6], R), (&[0, 1, 2], B), (&[1, 2, 6], B)]);
        let d = TightDecomposition::new(&g);
        assert_eq!(d.info(0).least_edge, Edge::new(&[0, 1, 2]).unwrap());
        assert_eq!(d.info(0).size, 2);
        assert_eq!(d.component_of(Edge::new(&[4, 5, 6]).unwrap()), Some(1));
        assert_eq!(d.component_of(Edge::new(&[0, 5, 6]).unwrap()), None);
        let u = TightDecomposition::uncoloured(&graph(3, 6, &[(&[0, 1, 2], R), (&[1, 2, 3], B)]));
        assert_eq!(u.len(), 1);
    }

    #[test]
    fn walks() {
        let g = graph(3, 6, &[(&[0, 1, 2], R), (&[1, 2, 3], R), (&[2, 3, 4], R), (&[3, 4, 5], B)]);
        let a = Edge::new(&[0, 1, 2]).unwrap();
        let b = Edge::new(&[2, 3, 4]).unwrap();
        assert_eq!(tight_walk(&g, a, a).unwrap(), Some(vec![a]));
        let w = tight_walk(&g, a, b).unwrap().unwrap();
        assert_eq!(w.len(), 3);
        assert!(is_tight_walk(&g, &w, R));
        assert_eq!(tight_walk(&g, a, Edge::new(&[3, 4, 5]).unwrap()).unwrap(), None);
        assert!(tight_walk(&g, a, Edge::new(&[0, 4, 5]).unwrap()).is_err());
    }

    #[test]
    fn loose_examples() {
        let g = graph(3, 6, &[(&[0, 1, 2], R), (&[2, 3, 4], R)]);
        assert_eq!(loose_components(&g, R).len(), 1);
        let g = graph(3, 6, &[(&[0, 1, 2], R), (&[3, 4, 5], R)]);
        assert_eq!(loose_components(&g, R).len(), 2);
        assert!(loose_components(&g, B).is_empty());
    }

    #[test]
    fn shadow_membership() {
        let g = graph(3, 6, &[(&[0, 1, 2], R), (&[1, 2, 3], R)]);
        let d = TightDecomposition::new(&g);
        assert!(d.in_shadow(Edge::new(&[1, 3]).unwrap(), 0));
        assert!(!d.in_shadow(Edge::new(&[0, 3]).unwrap(), 0));
        assert_eq!(d.edges_of(&g, 0).len(), 2);
    }
}
