//! Reference implementations shared by the integration tests. Each one is
//! written straight from the definitions, without the library's shortcuts.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::HashMap;

use hypermatch::combin::{binom, colex_rank, combinations};
use hypermatch::components::UnionFind;
use hypermatch::fracmatch::{exhaustive_edge_set_optimum, selections, Selection};
use hypermatch::{Colour, ColouredKGraph, Edge, Rational, TightDecomposition, Vertex, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Component label of every edge (lex order) under tight adjacency within a
/// colour, or ignoring colours when `coloured` is false.
pub fn component_labels(h: &ColouredKGraph, coloured: bool) -> Vec<(Edge, Colour, usize)> {
    let edges = h.edge_list();
    let k = h.k();
    let mut uf = UnionFind::new(edges.len());
    let slots = binom(h.label_bound(), k - 1) as usize;
    let mut first: [Vec<u32>; 2] = [vec![u32::MAX; slots], vec![u32::MAX; slots]];
    for (i, &(e, c)) in edges.iter().enumerate() {
        let side = if coloured { c.index() } else { 0 };
        for f in e.subsets(k - 1) {
            let slot = &mut first[side][colex_rank(f)];
            if *slot == u32::MAX {
                *slot = i as u32;
            } else {
                uf.union(*slot as usize, i);
            }
        }
    }
    let mut names = HashMap::new();
    edges
        .iter()
        .enumerate()
        .map(|(i, &(e, c))| {
            let root = uf.find(i);
            let next = names.len();
            (e, c, *names.entry(root).or_insert(next))
        })
        .collect()
}

pub fn component_count(h: &ColouredKGraph, coloured: bool) -> usize {
    component_labels(h, coloured).iter().map(|t| t.2 + 1).max().unwrap_or(0)
}

/// Degree of `s` in `h`, counted edge by edge.
pub fn degree(h: &ColouredKGraph, s: Edge) -> u64 {
    h.edges().filter(|(e, _)| s.is_subset(*e)).count() as u64
}

/// Edges removed by the bad-set cascade for `α = s²`, with every comparison
/// done in integers: a set is bad when `d < (1 − s)·C(n, k−i)`, and `X`
/// joins `𝒜_{j−1}` when `d_{𝒜_j}(X)^{2k} ≥ s·n^{2k}`.
pub fn cascade_oracle(h: &ColouredKGraph, s: Rational) -> (Vec<Vec<Edge>>, Vec<Edge>) {
    let k = h.k();
    let n = h.order();
    let verts = h.vertices().to_vec();
    let (p, q) = (*s.numer(), *s.denom());
    let mut degrees: HashMap<Edge, u64> = HashMap::new();
    for (e, _) in h.edges() {
        for i in 1..k {
            for x in e.subsets(i) {
                *degrees.entry(x).or_default() += 1;
            }
        }
    }
    let bad: Vec<Vec<Edge>> = (1..k)
        .map(|i| {
            let c = binom(n, k - i) as i128;
            combinations(&verts, i)
                .into_iter()
                .filter(|x| (degrees.get(x).copied().unwrap_or(0) as i128) * q < (q - p) * c)
                .collect()
        })
        .collect();
    let mut cascade = bad.clone();
    for j in (2..k).rev() {
        let upper = cascade[j - 1].clone();
        let pulled: Vec<Edge> = combinations(&verts, j - 1)
            .into_iter()
            .filter(|&x| {
                let d = upper.iter().filter(|y| x.is_subset(**y)).count() as i128;
                d > 0 && d.pow(2 * k as u32) * q >= p * (n as i128).pow(2 * k as u32)
            })
            .collect();
        let level = &mut cascade[j - 2];
        level.extend(pulled);
        level.sort();
        level.dedup();
    }
    let removed = h
        .edges()
        .map(|(e, _)| e)
        .filter(|&e| cascade.iter().flatten().any(|x| x.is_subset(e)))
        .collect();
    (cascade, removed)
}

/// The vertex set split into `X`/`Y` so that every window of `order`
/// (cyclic when asked) has at least two `Y` vertices; `None` when a cyclic
/// attempt fails at the seam.
pub fn window_bipartition<R: Rng>(rng: &mut R, order: &[Vertex], k: usize, cyclic: bool) -> Option<(VertexSet, VertexSet)> {
    let p_x: f64 = rng.gen_range(0.05..0.95);
    let mut in_y = vec![false; order.len()];
    for i in 0..order.len() {
        let ys = in_y[i.saturating_sub(k - 1)..i].iter().filter(|&&b| b).count();
        in_y[i] = !(ys >= 2 && rng.gen_bool(p_x));
    }
    if cyclic {
        let shift = rng.gen_range(0..order.len());
        in_y.rotate_left(shift);
    }
    let len = order.len();
    let windows = if cyclic { len } else { len + 1 - k };
    for start in 0..windows {
        let ys = (0..k).filter(|&j| in_y[(start + j) % len]).count();
        if ys < 2 {
            return None;
        }
    }
    let mut x = VertexSet::new();
    let mut y = VertexSet::new();
    for (i, &v) in order.iter().enumerate() {
        if in_y[i] {
            y.insert(v);
        } else {
            x.insert(v);
        }
    }
    Some((x, y))
}

pub fn shuffled_labels<R: Rng>(rng: &mut R, len: usize) -> Vec<Vertex> {
    let mut pool: Vec<Vertex> = (0..len.max(64)).collect();
    pool.shuffle(rng);
    pool.truncate(len);
    pool
}

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut p: Vec<Vertex> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Exhaustive optimum of a constrained fractional matching, taken over the
/// admissible selections one by one. Edge sets are memoised up to vertex
/// relabelling, which the optimum does not see.
pub struct CanonicalOracle {
    n: usize,
    k: usize,
    index: HashMap<Edge, usize>,
    mapped: Vec<Vec<u64>>,
    memo: RefCell<HashMap<(u64, Rational), Rational>>,
    pub hits: RefCell<usize>,
    pub misses: RefCell<usize>,
}

impl CanonicalOracle {
    pub fn new(k: usize, n: usize) -> CanonicalOracle {
        let verts: Vec<Vertex> = (0..n).collect();
        let all = combinations(&verts, k);
        let index: HashMap<Edge, usize> = all.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mapped = permutations(n)
            .iter()
            .map(|p| {
                all.iter()
                    .map(|e| {
                        let image: Vec<Vertex> = e.iter().map(|v| p[v]).collect();
                        1u64 << index[&Edge::new(&image).unwrap()]
                    })
                    .collect()
            })
            .collect();
        CanonicalOracle { n, k, index, mapped, memo: RefCell::default(), hits: RefCell::new(0), misses: RefCell::new(0) }
    }

    fn canonical(&self, edges: &[Edge]) -> u64 {
        let ids: Vec<usize> = edges.iter().map(|e| self.index[e]).collect();
        self.mapped.iter().map(|m| ids.iter().fold(0u64, |acc, &i| acc | m[i])).min().unwrap_or(0)
    }

    pub fn edge_set_optimum(&self, edges: &[Edge], beta: Rational) -> Rational {
        assert!(binom(self.n, self.k) <= 64);
        let key = (self.canonical(edges), beta);
        if let Some(&w) = self.memo.borrow().get(&key) {
            *self.hits.borrow_mut() += 1;
            return w;
        }
        *self.misses.borrow_mut() += 1;
        let (w, assignment, _) = exhaustive_edge_set_optimum(edges, beta).unwrap();
        assert_eq!(assignment.weight(), w);
        self.memo.borrow_mut().insert(key, w);
        w
    }

    pub fn optimum(&self, h: &ColouredKGraph, mode: Selection, beta: Rational) -> Rational {
        let dec = TightDecomposition::new(h);
        selections(&dec, mode)
            .unwrap()
            .iter()
            .map(|sel| {
                let mut edges: Vec<Edge> = sel.iter().flat_map(|&id| dec.edges_of(h, id)).collect();
                edges.sort();
                self.edge_set_optimum(&edges, beta)
            })
            .max()
            .unwrap_or_else(|| Rational::from_integer(0))
    }
}

pub fn random_complete<R: Rng>(rng: &mut R, k: usize, n: usize, red: f64) -> ColouredKGraph {
    ColouredKGraph::from_fn(k, n, |_| Some(if rng.gen_bool(red) { Colour::Red } else { Colour::Blue })).unwrap()
}
