//! The extremal colouring, the parity colouring, tight-cycle search and
//! the exhaustive two-cycle partition decision procedure.
//!
//! Searches are reduced by twin classes: vertices `u`, `v` are twins when
//! swapping them preserves every colour. Any two vertex sets with the same
//! number of vertices from each class are then equivalent, so the verifier
//! enumerates count vectors instead of subsets, and the cycle search always
//! takes the least unused member of a class.

use std::collections::HashSet;

use serde::Serialize;

use crate::combin::Subsets;
use crate::components::TightDecomposition;
use crate::edge::{Colour, Edge, Vertex, VertexSet, MAX_N};
use crate::error::{param, Error, Result};
use crate::graph::ColouredKGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalLayout {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub x: VertexSet,
    pub y: VertexSet,
    pub z: Vertex,
}

impl ExtremalLayout {
    pub fn new(k: usize, m: usize) -> Result<ExtremalLayout> {
        if k < 3 {
            return param(format!("the extremal colouring needs k >= 3, got {k}"));
        }
        if m < k + 1 {
            return param(format!("the extremal colouring needs m >= k + 1 = {}, got {m}", k + 1));
        }
        let n = k * (m + 1) + 1;
        if n > MAX_N {
            return param(format!("n = {n} exceeds the supported {MAX_N}"));
        }
        let sx = (k - 1) * m + k - 2;
        let x = VertexSet::range(sx);
        let y = VertexSet::range(sx + m + 2).difference(&x);
        Ok(ExtremalLayout { k, m, n, x, y, z: n - 1 })
    }

    pub fn colour(&self, e: Edge) -> Colour {
        let in_y = e.iter().filter(|&v| self.y.contains(v)).count();
        let red = if e.contains(self.z) { in_y >= 2 } else { in_y == 1 };
        if red {
            Colour::Red
        } else {
            Colour::Blue
        }
    }
}

/// Complete k-graph on `k(m+1)+1` vertices, `X` first, then `Y`, then `z`.
pub fn extremal_colouring(k: usize, m: usize) -> Result<ColouredKGraph> {
    let layout = ExtremalLayout::new(k, m)?;
    ColouredKGraph::from_fn(k, layout.n, |e| Some(layout.colour(e)))
}

/// Complete k-graph on `A = 0..a`, `B = a..a+b`; red iff `|e ∩ A|` is even.
pub fn parity_colouring(k: usize, a: usize, b: usize) -> Result<ColouredKGraph> {
    if a + b < k {
        return param(format!("need a + b >= k, got {a} + {b} < {k}"));
    }
    ColouredKGraph::from_fn(k, a + b, |e| {
        let in_a = e.iter().filter(|&v| v < a).count();
        Some(if in_a % 2 == 0 { Colour::Red } else { Colour::Blue })
    })
}

/// Consecutive k-windows of a vertex order.
pub fn window_edges(order: &[Vertex], k: usize, cyclic: bool) -> Vec<Edge> {
    let n = order.len();
    if n < k {
        return Vec::new();
    }
    let count = if cyclic && n > k { n } else { n - k + 1 };
    (0..count)
        .map(|i| {
            let mut w: Vec<Vertex> = (0..k).map(|j| order[(i + j) % n]).collect();
            w.sort_unstable();
            Edge::from_sorted(&w)
        })
        .collect()
}

/// A cycle found by the search. `colour` is `None` for a vertex set of
/// fewer than k vertices, which may stand in for either colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightCycleCandidate {
    pub order: Vec<Vertex>,
    pub colour: Option<Colour>,
}

impl TightCycleCandidate {
    pub fn vertices(&self) -> VertexSet {
        self.order.iter().copied().collect()
    }

    pub fn is_degenerate(&self, k: usize) -> bool {
        self.order.len() <= k
    }

    /// Checks the candidate against `h` for colour slot `c`.
    pub fn is_valid(&self, h: &ColouredKGraph, c: Colour) -> bool {
        let k = h.k();
        let distinct = self.vertices().len() == self.order.len();
        if !distinct {
            return false;
        }
        if self.order.len() < k {
            return self.colour.is_none_or(|d| d == c);
        }
        self.colour == Some(c) && window_edges(&self.order, k, true).into_iter().all(|e| h.has(e, c))
    }
}

/// Partition of `within` into twin classes of `h`, ordered by least member.
/// Absent edges count as a third colour.
pub fn twin_classes(h: &ColouredKGraph, within: &VertexSet) -> Vec<VertexSet> {
    let k = h.k();
    let mut classes: Vec<VertexSet> = Vec::new();
    for u in within.iter() {
        let home = classes.iter_mut().find(|class| {
            let v = VertexSet::min(class).expect("classes are non-empty");
            let rest: Vec<Vertex> = within.iter().filter(|&w| w != u && w != v).collect();
            Subsets::new(rest, k - 1).all(|t| h.colour(t.with(u)) == h.colour(t.with(v)))
        });
        match home {
            Some(class) => {
                class.insert(u);
            }
            None => classes.push([u].into_iter().collect()),
        }
    }
    classes
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Vertices placed by the cycle searches.
    pub nodes: u64,
    /// Sides rejected without a cycle search (component support), plus
    /// failure-memo hits.
    pub prunes: u64,
    /// Vertex sets (or count vectors) examined.
    pub subsets: u64,
}

struct CycleSearch<'a> {
    h: &'a ColouredKGraph,
    colour: Colour,
    k: usize,
    class_of: Vec<usize>,
    /// Members of each class inside S, ascending.
    members: Vec<Vec<Vertex>>,
    used: Vec<usize>,
    order: Vec<Vertex>,
    failed: HashSet<(Vec<usize>, Vec<usize>, Vec<usize>)>,
    stats: SearchStats,
}

impl CycleSearch<'_> {
    fn window_ok(&self, window: &[Vertex]) -> bool {
        let mut w = window.to_vec();
        w.sort_unstable();
        self.h.has(Edge::from_sorted(&w), self.colour)
    }

    fn key(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let len = self.order.len();
        let take = (self.k - 1).min(len);
        let head = self.order[..take].iter().map(|&v| self.class_of[v]).collect();
        let tail = self.order[len - take..].iter().map(|&v| self.class_of[v]).collect();
        (head, tail, self.used.clone())
    }

    fn extend(&mut self, total: usize) -> bool {
        let k = self.k;
        let len = self.order.len();
        if len == total {
            let mut closing: Vec<Vertex> = self.order[len - (k - 1)..].to_vec();
            closing.extend_from_slice(&self.order[..k - 1]);
            return (0..k - 1).all(|i| self.window_ok(&closing[i..i + k]));
        }
        let key = (len >= k - 1).then(|| self.key());
        if let Some(key) = &key {
            if self.failed.contains(key) {
                self.stats.prunes += 1;
                return false;
            }
        }
        let mut candidates: Vec<(usize, Vertex, usize)> = Vec::new();
        for (c, members) in self.members.iter().enumerate() {
            let Some(&v) = members.get(self.used[c]) else { continue };
            if len + 1 >= k {
                let mut window = self.order[len + 1 - k..].to_vec();
                window.push(v);
                if !self.window_ok(&window) {
                    continue;
                }
            }
            candidates.push((self.residual_degree(v), v, c));
        }
        candidates.sort_unstable();
        for (_, v, c) in candidates {
            self.stats.nodes += 1;
            self.order.push(v);
            self.used[c] += 1;
            if self.extend(total) {
                return true;
            }
            self.used[c] -= 1;
            self.order.pop();
        }
        if let Some(key) = key {
            self.failed.insert(key);
        }
        false
    }

    /// Number of classes whose next member could follow `v`.
    fn residual_degree(&self, v: Vertex) -> usize {
        let len = self.order.len();
        if len + 2 < self.k {
            return 0;
        }
        let mut window = self.order[len + 2 - self.k..].to_vec();
        window.push(v);
        let cv = self.class_of[v];
        self.members
            .iter()
            .enumerate()
            .filter_map(|(c, members)| members.get(self.used[c] + usize::from(c == cv)))
            .filter(|&&u| {
                window.push(u);
                let ok = self.window_ok(&window);
                window.pop();
                ok
            })
            .count()
    }
}

fn search_cycle(
    h: &ColouredKGraph,
    s: &VertexSet,
    colour: Colour,
    classes: &[VertexSet],
    stats: &mut SearchStats,
) -> Option<TightCycleCandidate> {
    let k = h.k();
    let n = s.len();
    if n < k {
        return Some(TightCycleCandidate { order: s.to_vec(), colour: None });
    }
    let verts = s.to_vec();
    if n == k {
        let e = Edge::from_sorted(&verts);
        return h.has(e, colour).then_some(TightCycleCandidate { order: verts, colour: Some(colour) });
    }
    let mut class_of = vec![usize::MAX; h.label_bound()];
    let mut members = Vec::new();
    for class in classes {
        let inside: Vec<Vertex> = class.intersection(s).to_vec();
        if inside.is_empty() {
            continue;
        }
        for &v in &inside {
            class_of[v] = members.len();
        }
        members.push(inside);
    }
    assert!(verts.iter().all(|&v| class_of[v] != usize::MAX), "classes must cover S");
    let first = class_of[verts[0]];
    let mut search = CycleSearch {
        h,
        colour,
        k,
        class_of,
        used: vec![0; members.len()],
        members,
        order: vec![verts[0]],
        failed: HashSet::new(),
        stats: SearchStats::default(),
    };
    search.used[first] = 1;
    let found = search.extend(n);
    stats.nodes += search.stats.nodes;
    stats.prunes += search.stats.prunes;
    found.then_some(TightCycleCandidate { order: search.order, colour: Some(colour) })
}

/// Looks for a tight cycle of `colour` in `h` with vertex set exactly `s`.
///
/// Fewer than k vertices succeed at once as a wildcard, k vertices succeed
/// when they form an edge of the colour, and larger sets are searched by
/// backtracking.
pub fn tight_cycle_on(h: &ColouredKGraph, s: &VertexSet, colour: Colour) -> Option<TightCycleCandidate> {
    let classes = twin_classes(h, s);
    search_cycle(h, s, colour, &classes, &mut SearchStats::default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Partition { red: TightCycleCandidate, blue: TightCycleCandidate },
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionCertificate {
    pub verdict: Verdict,
    pub stats: SearchStats,
    /// Twin classes used by the search (empty for the naive oracle).
    pub classes: Vec<VertexSet>,
}

impl PartitionCertificate {
    pub fn found(&self) -> bool {
        matches!(self.verdict, Verdict::Partition { .. })
    }

    /// Checks a `Partition` verdict against `h`; `None` verdicts pass.
    pub fn check(&self, h: &ColouredKGraph) -> bool {
        match &self.verdict {
            Verdict::None => true,
            Verdict::Partition { red, blue } => {
                red.is_valid(h, Colour::Red)
                    && blue.is_valid(h, Colour::Blue)
                    && red.vertices().is_disjoint(&blue.vertices())
                    && red.vertices().union(&blue.vertices()) == h.vertices()
            }
        }
    }
}

fn require_complete(h: &ColouredKGraph) -> Result<()> {
    if !h.is_complete() {
        return param(format!(
            "partition verification needs a complete k-graph; {} of the k-sets are uncoloured",
            crate::combin::binom(h.order(), h.k()) - h.edge_count() as u128
        ));
    }
    Ok(())
}

/// Decides whether the complete coloured k-graph `h` splits into a red
/// and a blue tight cycle (degenerate cycles allowed).
pub fn verify_two_cycle_partition(h: &ColouredKGraph) -> Result<PartitionCertificate> {
    require_complete(h)?;
    let k = h.k();
    let all = h.vertices();
    let classes = twin_classes(h, &all);
    let dec = TightDecomposition::new(h);
    let supports: [Vec<VertexSet>; 2] = [Colour::Red, Colour::Blue]
        .map(|c| dec.components().iter().filter(|i| i.colour == c).map(|i| i.support).collect());
    let mut stats = SearchStats::default();
    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let members: Vec<Vec<Vertex>> = classes.iter().map(|c| c.to_vec()).collect();
    let mut counts = vec![0usize; classes.len()];
    let side_ok = |side: &VertexSet, c: Colour, stats: &mut SearchStats| -> Option<TightCycleCandidate> {
        if side.len() > k && !supports[c.index()].iter().any(|sup| side.is_subset(sup)) {
            stats.prunes += 1;
            return None;
        }
        search_cycle(h, side, c, &classes, stats)
    };
    loop {
        stats.subsets += 1;
        let red_side: VertexSet =
            members.iter().zip(&counts).flat_map(|(m, &a)| m[..a].iter().copied()).collect();
        let blue_side = all.difference(&red_side);
        if let Some(red) = side_ok(&red_side, Colour::Red, &mut stats) {
            if let Some(blue) = side_ok(&blue_side, Colour::Blue, &mut stats) {
                return Ok(PartitionCertificate { verdict: Verdict::Partition { red, blue }, stats, classes });
            }
        }
        // next count vector
        let mut i = 0;
        while i < counts.len() && counts[i] == sizes[i] {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
        counts[i] += 1;
    }
    Ok(PartitionCertificate { verdict: Verdict::None, stats, classes })
}

fn naive_cycle(h: &ColouredKGraph, s: &VertexSet, c: Colour, stats: &mut SearchStats) -> Option<TightCycleCandidate> {
    let k = h.k();
    let verts = s.to_vec();
    if verts.len() < k {
        return Some(TightCycleCandidate { order: verts, colour: None });
    }
    // every permutation with the least vertex first
    let mut rest = verts[1..].to_vec();
    loop {
        stats.nodes += 1;
        let mut order = vec![verts[0]];
        order.extend_from_slice(&rest);
        if window_edges(&order, k, true).into_iter().all(|e| h.has(e, c)) {
            return Some(TightCycleCandidate { order, colour: Some(c) });
        }
        if !next_permutation(&mut rest) {
            return None;
        }
    }
}

fn next_permutation(xs: &mut [Vertex]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else { return false };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).expect("pivot has a successor");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Reference decision procedure: every subset, every cyclic order.
pub fn naive_two_cycle_partition(h: &ColouredKGraph) -> Result<PartitionCertificate> {
    require_complete(h)?;
    let verts = h.vertices().to_vec();
    if verts.len() > 12 {
        return param("the naive oracle is limited to 12 vertices");
    }
    let all = h.vertices();
    let mut stats = SearchStats::default();
    for mask in 0u32..(1 << verts.len()) {
        stats.subsets += 1;
        let red_side: VertexSet = (0..verts.len()).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        let blue_side = all.difference(&red_side);
        if let Some(red) = naive_cycle(h, &red_side, Colour::Red, &mut stats) {
            if let Some(blue) = naive_cycle(h, &blue_side, Colour::Blue, &mut stats) {
                return Ok(PartitionCertificate {
                    verdict: Verdict::Partition { red, blue },
                    stats,
                    classes: Vec::new(),
                });
            }
        }
    }
    Ok(PartitionCertificate { verdict: Verdict::None, stats, classes: Vec::new() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Structure {
    Path,
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// Evaluates the matching inequality for a tight path or cycle given by
/// its vertex order, split into `x` and `y`:
/// `2(|X| − (k−1)) ≤ (k−2)|Y|` for paths and `2|X| ≤ (k−2)|Y|` for cycles.
pub fn partition_inequality_check(
    structure: Structure,
    k: usize,
    x: &VertexSet,
    y: &VertexSet,
    order: &[Vertex],
) -> Result<InequalityCheck> {
    let verts: VertexSet = order.iter().copied().collect();
    if verts.len() != order.len() {
        return param("the order repeats a vertex");
    }
    let min_len = match structure {
        Structure::Path => k,
        Structure::Cycle => k + 1,
    };
    if order.len() < min_len {
        return param(format!("a {structure:?} needs at least {min_len} vertices"));
    }
    if !x.is_disjoint(y) || x.union(y) != verts {
        return param("X and Y must partition the vertex set");
    }
    for e in window_edges(order, k, structure == Structure::Cycle) {
        let meet = e.iter().filter(|&v| y.contains(v)).count();
        if meet < 2 {
            return Err(Error::Hypothesis { edge: e, meet });
        }
    }
    let (sx, sy, k) = (x.len() as i64, y.len() as i64, k as i64);
    let lhs = match structure {
        Structure::Path => 2 * (sx - (k - 1)),
        Structure::Cycle => 2 * sx,
    };
    let rhs = (k - 2) * sy;
    Ok(InequalityCheck { lhs, rhs, holds: lhs <= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(vs: &[Vertex]) -> Edge {
        Edge::new(vs).unwrap()
    }

    #[test]
    fn extremal_sizes_and_rule() {
        let l = ExtremalLayout::new(3, 4).unwrap();
        assert_eq!((l.n, l.x.len(), l.y.len(), l.z), (16, 9, 6, 15));
        let h = extremal_colouring(3, 4).unwrap();
        assert!(h.is_complete());
        assert_eq!(h.colour(e(&[0, 1, 2])), Some(Colour::Blue));
        assert_eq!(h.colour(e(&[9, 10, 15])), Some(Colour::Red));
        assert_eq!(h.colour(e(&[0, 9, 15])), Some(Colour::Blue));
        assert_eq!(h.colour(e(&[0, 1, 9])), Some(Colour::Red));
        assert!(extremal_colouring(3, 3).is_err());
    }

    #[test]
    fn parity_rule() {
        let h = parity_colouring(3, 4, 3).unwrap();
        assert_eq!(h.colour(e(&[0, 1, 5])), Some(Colour::Red));
        assert_eq!(h.colour(e(&[0, 4, 5])), Some(Colour::Blue));
        assert!(parity_colouring(4, 1, 2).is_err());
    }

    #[test]
    fn twins_of_extremal_colouring() {
        let h = extremal_colouring(3, 4).unwrap();
        let classes = twin_classes(&h, &h.vertices());
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![9, 6, 1]);
    }

    #[test]
    fn red_k4_cycle() {
        let h = ColouredKGraph::complete(3, 4, Colour::Red).unwrap();
        let c = tight_cycle_on(&h, &h.vertices(), Colour::Red).unwrap();
        assert_eq!(c.order, vec![0, 1, 2, 3]);
        assert!(c.is_valid(&h, Colour::Red));
        assert!(tight_cycle_on(&h, &h.vertices(), Colour::Blue).is_none());
        let small: VertexSet = [1, 3].into_iter().collect();
        assert_eq!(tight_cycle_on(&h, &small, Colour::Blue).unwrap().colour, None);
    }

    #[test]
    fn cycle_matches_permutations() {
        // red iff the edge contains 0 or is {1,2,3}; a hand-checked case
        let h = ColouredKGraph::from_fn(3, 6, |x| {
            Some(if x.contains(0) || x == e(&[1, 2, 3]) { Colour::Red } else { Colour::Blue })
        })
        .unwrap();
        for mask in 0u32..64 {
            let s: VertexSet = (0..6).filter(|&i| mask >> i & 1 == 1).collect();
            for c in Colour::BOTH {
                let fast = tight_cycle_on(&h, &s, c).is_some();
                let slow = naive_cycle(&h, &s, c, &mut SearchStats::default()).is_some();
                assert_eq!(fast, slow, "{s:?} {c:?}");
            }
        }
    }

    #[test]
    fn monochromatic_complete_partitions() {
        let h = ColouredKGraph::complete(3, 7, Colour::Red).unwrap();
        let cert = verify_two_cycle_partition(&h).unwrap();
        assert!(cert.found() && cert.check(&h));
        let naive = naive_two_cycle_partition(&h).unwrap();
        assert!(naive.found() && naive.check(&h));
        let mut partial = h.clone();
        partial.remove(e(&[0, 1, 2]));
        assert!(verify_two_cycle_partition(&partial).is_err());
    }

    #[test]
    fn inequality_examples() {
        let order = [0, 1, 2, 3, 4];
        let y: VertexSet = [0, 1, 3, 4].into_iter().collect();
        let x: VertexSet = [2].into_iter().collect();
        let r = partition_inequality_check(Structure::Path, 3, &x, &y, &order).unwrap();
        assert_eq!(r, InequalityCheck { lhs: -2, rhs: 4, holds: true });
        let all: VertexSet = order.iter().copied().collect();
        let r = partition_inequality_check(Structure::Cycle, 3, &VertexSet::new(), &all, &order).unwrap();
        assert!(r.holds);
        let y2: VertexSet = [0, 1, 3].into_iter().collect();
        let x2: VertexSet = [2, 4].into_iter().collect();
        match partition_inequality_check(Structure::Path, 3, &x2, &y2, &order) {
            Err(Error::Hypothesis { edge, meet }) => {
                assert_eq!((edge, meet), (e(&[2, 3, 4]), 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn windows() {
        assert_eq!(window_edges(&[0, 1, 2, 3], 3, true), vec![e(&[0, 1, 2]), e(&[1, 2, 3]), e(&[0, 2, 3]), e(&[0, 1, 3])]);
        assert_eq!(window_edges(&[0, 1, 2, 3], 3, false).len(), 2);
    }

    #[test]
    fn parity_blueprint_swaps_colours() {
        use crate::blueprint::build_blueprint;
        use crate::numeric::Rational;
        let h = parity_colouring(4, 12, 4).unwrap();
        let dec = TightDecomposition::new(&h);
        let bp = build_blueprint(&h, &dec, Rational::new(1, 10_000)).unwrap();
        let expected = ColouredKGraph::from_fn(2, 16, |p| {
            let in_a = p.iter().filter(|&v| v < 12).count();
            Some(if in_a == 1 { Colour::Red } else { Colour::Blue })
        })
        .unwrap();
        assert_eq!(bp.graph, expected);
    }

    #[test]
    fn extremal_has_no_partition() {
        let h = extremal_colouring(3, 4).unwrap();
        let cert = verify_two_cycle_partition(&h).unwrap();
        assert_eq!(cert.verdict, Verdict::None);
        assert_eq!(cert.stats.subsets, 140);
    }
}
