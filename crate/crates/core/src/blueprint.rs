//! Blueprints: a coloured (k−2)-graph whose edges each point at a
//! monochromatic tight component of the host, consistently across edges
//! that share k−3 vertices.
//!
//! Construction: every (k−2)-set `e` of positive degree colours its link
//! 2-graph by the host colours, picks a largest monochromatic component
//! `K_e` after a min-degree deletion, and takes `e`'s colour and component
//! from it. For every (k−3)-set `S` a pivot vertex then selects the
//! neighbours `Γ(S)` whose components agree, and only edges selected from
//! all k−2 of their (k−3)-subsets survive.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::combin::{PairRanks, Subsets};
use crate::components::{ComponentId, TightDecomposition, UnionFind};
use crate::edge::{Colour, Edge, Vertex, VertexSet};
use crate::error::{param, Error, Result};
use crate::graph::ColouredKGraph;
use crate::numeric::{at_least, at_most, to_f64, Rational};

/// Vertex deletion rule before choosing a monochromatic component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum Peeling {
    /// One round, against the degrees of the input graph.
    #[default]
    SinglePass,
    /// Repeat until every remaining vertex meets the threshold.
    Iterated,
}

#[derive(Clone, Debug)]
pub struct MonoSpanning {
    /// The input restricted to the chosen component's vertex set.
    pub subgraph: ColouredKGraph,
    pub colour: Option<Colour>,
    /// Number of vertices of the chosen component.
    pub order: usize,
    pub component: VertexSet,
    pub deleted: VertexSet,
}

/// Monochromatic components of a 2-graph in one colour, as vertex sets
/// (only components with at least one edge), ordered by least vertex.
pub fn colour_components(f: &ColouredKGraph, c: Colour) -> Vec<VertexSet> {
    let mut uf = UnionFind::new(f.label_bound());
    let mut touched = VertexSet::new();
    for e in f.edges_of(c) {
        uf.union(e.get(0), e.get(1));
        touched.insert(e.get(0));
        touched.insert(e.get(1));
    }
    let mut by_root: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for v in touched.iter() {
        by_root.entry(uf.find(v)).or_default().insert(v);
    }
    let mut out: Vec<VertexSet> = by_root.into_values().collect();
    out.sort_by_key(|s| s.min());
    out
}

/// Min-degree deletion followed by a largest monochromatic component.
///
/// A vertex is deleted when its degree is below `(1 − 2√γ)(n − 1)`, that is,
/// the `(1 − 2√γ)n` threshold scaled to the largest possible degree of a 2-graph
/// on `n` vertices. Ties between components go to red, then to the least
/// vertex.
pub fn mono_spanning_subgraph(f: &ColouredKGraph, n: usize, gamma: Rational) -> Result<MonoSpanning> {
    mono_spanning_subgraph_with(f, n, gamma, Peeling::SinglePass)
}

pub fn mono_spanning_subgraph_with(f: &ColouredKGraph, n: usize, gamma: Rational, peeling: Peeling) -> Result<MonoSpanning> {
    if f.k() != 2 {
        return param(format!("mono_spanning_subgraph expects a 2-graph, got k = {}", f.k()));
    }
    if f.order() > n {
        return param(format!("graph has {} vertices, more than n = {n}", f.order()));
    }
    let mut adj = Adjacency::new(f.label_bound());
    for (e, c) in f.edges() {
        adj.add(e.get(0), e.get(1), c);
    }
    let (best, alive) = adj.spanning(f.vertices(), spanning_threshold(n, gamma), peeling);
    let deleted = f.vertices().difference(&alive);
    Ok(match best {
        Some((c, comp)) => MonoSpanning { subgraph: f.restrict(&comp), colour: Some(c), order: comp.len(), component: comp, deleted },
        None => MonoSpanning {
            subgraph: f.restrict(&VertexSet::new()),
            colour: None,
            order: 0,
            component: VertexSet::new(),
            deleted,
        },
    })
}

fn spanning_threshold(n: usize, gamma: Rational) -> usize {
    at_least((1.0 - 2.0 * to_f64(gamma).sqrt()) * n.saturating_sub(1) as f64) as usize
}

/// Coloured 2-graph as neighbourhood bitsets.
struct Adjacency {
    nbrs: Vec<[VertexSet; 2]>,
}

impl Adjacency {
    fn new(bound: usize) -> Adjacency {
        Adjacency { nbrs: vec![[VertexSet::new(); 2]; bound] }
    }

    fn clear(&mut self) {
        self.nbrs.iter_mut().for_each(|x| *x = [VertexSet::new(); 2]);
    }

    fn add(&mut self, a: Vertex, b: Vertex, c: Colour) {
        self.nbrs[a][c.index()].insert(b);
        self.nbrs[b][c.index()].insert(a);
    }

    fn has(&self, a: Vertex, b: Vertex, c: Colour) -> bool {
        self.nbrs[a][c.index()].contains(b)
    }

    fn is_empty(&self, verts: &VertexSet) -> bool {
        verts.iter().all(|v| self.nbrs[v][0].is_empty() && self.nbrs[v][1].is_empty())
    }

    /// Deletion then the largest monochromatic component (red first on
    /// ties, then least vertex). Returns the choice and the kept vertices.
    fn spanning(&self, verts: VertexSet, threshold: usize, peeling: Peeling) -> (Option<(Colour, VertexSet)>, VertexSet) {
        let mut alive = verts;
        loop {
            let low: Vec<Vertex> = alive
                .iter()
                .filter(|&v| self.nbrs[v][0].union(&self.nbrs[v][1]).intersection(&alive).len() < threshold)
                .collect();
            for &v in &low {
                alive.remove(v);
            }
            if low.is_empty() || peeling == Peeling::SinglePass {
                break;
            }
        }
        let mut best: Option<(Colour, VertexSet)> = None;
        for c in Colour::BOTH {
            let mut seen = VertexSet::new();
            for v in alive.iter() {
                if seen.contains(v) || self.nbrs[v][c.index()].intersection(&alive).is_empty() {
                    continue;
                }
                let mut comp: VertexSet = [v].into_iter().collect();
                let mut frontier = comp;
                while !frontier.is_empty() {
                    let mut next = VertexSet::new();
                    for u in frontier.iter() {
                        next = next.union(&self.nbrs[u][c.index()]);
                    }
                    frontier = next.intersection(&alive).difference(&comp);
                    comp = comp.union(&frontier);
                }
                seen = seen.union(&comp);
                if best.as_ref().is_none_or(|(_, b)| comp.len() > b.len()) {
                    best = Some((c, comp));
                }
            }
        }
        (best, alive)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BlueprintStats {
    /// (k−2)-sets of positive degree.
    pub shadow_sets: usize,
    /// Of those, how many obtained a colour.
    pub coloured: usize,
    /// `multiplicity[m]`: coloured sets selected by exactly `m` of their
    /// (k−3)-subsets.
    pub multiplicity: Vec<usize>,
    /// Edges kept in the blueprint.
    pub kept: usize,
    /// Smallest witness order over kept edges.
    pub min_witness: Option<usize>,
    /// (k−3)-sets with a non-empty pivot selection, per colour.
    pub pivoted: [usize; 2],
}

/// A coloured (k−2)-graph with its induced components and witnesses.
#[derive(Clone, Debug)]
pub struct Blueprint {
    pub epsilon: Rational,
    /// Uniformity of the host.
    pub host_k: usize,
    pub graph: ColouredKGraph,
    pub induced: BTreeMap<Edge, ComponentId>,
    pub witness: BTreeMap<Edge, VertexSet>,
    /// Every coloured (k−2)-set before the multiplicity filter.
    pub candidates: ColouredKGraph,
    pub stats: BlueprintStats,
}

struct Candidate {
    component: ComponentId,
    witness: VertexSet,
}

/// Builds a blueprint of `h` (k ≥ 3) given its tight decomposition.
pub fn build_blueprint(h: &ColouredKGraph, dec: &TightDecomposition, epsilon: Rational) -> Result<Blueprint> {
    let k = h.k();
    if k < 3 {
        return param(format!("blueprints need k >= 3, got {k}"));
    }
    let n = h.order();
    let verts = h.vertices().to_vec();
    let mut candidates = ColouredKGraph::on_vertices(k - 2, h.label_bound(), h.vertices())?;
    let mut info: BTreeMap<Edge, Candidate> = BTreeMap::new();
    let mut stats = BlueprintStats { multiplicity: vec![0; k - 1], ..Default::default() };

    let threshold = spanning_threshold(n - (k - 2), epsilon);
    let mut adj = Adjacency::new(h.label_bound());
    for e in Subsets::new(verts.clone(), k - 2) {
        adj.clear();
        let rest = h.vertices().difference(&e.to_set());
        let others = rest.to_vec();
        let ranks = PairRanks::new(e, h.label_bound());
        let colour = |a: Vertex, b: Vertex| h.colour_at_rank(ranks.rank(a, b)).unwrap_or_else(|| h.colour(e.with(a).with(b)));
        for (i, &a) in others.iter().enumerate() {
            for &b in &others[i + 1..] {
                if let Some(c) = colour(a, b) {
                    adj.add(a, b, c);
                }
            }
        }
        if adj.is_empty(&rest) {
            continue;
        }
        stats.shadow_sets += 1;
        let (best, _) = adj.spanning(rest, threshold, Peeling::SinglePass);
        let Some((c, witness)) = best else { continue };
        let mut component: Option<ComponentId> = None;
        let members = witness.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !adj.has(a, b, c) {
                    continue;
                }
                let id = dec
                    .component_at_rank(ranks.rank(a, b))
                    .unwrap_or_else(|| dec.component_of(e.with(a).with(b)))
                    .expect("link edge lifts to a host edge");
                match component {
                    None => component = Some(id),
                    Some(prev) if prev != id => {
                        return Err(Error::Verification(format!(
                            "link component of {e:?} spans two tight components"
                        )))
                    }
                    _ => {}
                }
            }
        }
        let component = component.expect("chosen component has an edge");
        candidates.set(e, Some(c));
        info.insert(e, Candidate { component, witness });
        stats.coloured += 1;
    }

    // Γ(S) for every (k−3)-set S and colour
    let threshold = at_most(6.0 * to_f64(epsilon).sqrt() * n as f64).unwrap_or(0) as usize;
    let mut selected: BTreeMap<Edge, usize> = BTreeMap::new();
    for s in Subsets::new(verts.clone(), k - 3) {
        for c in Colour::BOTH {
            let nbrs: Vec<Vertex> =
                verts.iter().copied().filter(|&y| !s.contains(y) && candidates.has(s.with(y), c)).collect();
            if nbrs.len() <= threshold {
                continue;
            }
            let witness: Vec<VertexSet> = nbrs.iter().map(|&y| info[&s.with(y)].witness).collect();
            let double = |a: usize, b: usize| witness[b].contains(nbrs[a]) && witness[a].contains(nbrs[b]);
            let mut pivot = 0;
            let mut pivot_count = 0;
            for a in 0..nbrs.len() {
                let count = (0..nbrs.len()).filter(|&b| b != a && double(a, b)).count();
                if count > pivot_count {
                    pivot = a;
                    pivot_count = count;
                }
            }
            stats.pivoted[c.index()] += 1;
            for b in 0..nbrs.len() {
                if b == pivot || double(pivot, b) {
                    *selected.entry(s.with(nbrs[b])).or_insert(0) += 1;
                }
            }
        }
    }

    let mut graph = ColouredKGraph::on_vertices(k - 2, h.label_bound(), h.vertices())?;
    let mut induced = BTreeMap::new();
    let mut witness = BTreeMap::new();
    for (e, c) in candidates.edges() {
        let m = selected.get(&e).copied().unwrap_or(0);
        assert!(m <= k - 2, "multiplicity {m} exceeds k − 2");
        stats.multiplicity[m] += 1;
        if m == k - 2 {
            graph.set(e, Some(c));
            let cand = &info[&e];
            induced.insert(e, cand.component);
            witness.insert(e, cand.witness);
            let w = cand.witness.len();
            stats.min_witness = Some(stats.min_witness.map_or(w, |x: usize| x.min(w)));
        }
    }
    stats.kept = graph.edge_count();
    Ok(Blueprint { epsilon, host_k: k, graph, induced, witness, candidates, stats })
}

impl Blueprint {
    pub fn colour(&self, e: Edge) -> Option<Colour> {
        self.graph.colour(e)
    }

    pub fn induced_of(&self, e: Edge) -> Option<ComponentId> {
        self.induced.get(&e).copied()
    }

    /// Pairs of same-coloured edges sharing k−3 vertices with different
    /// induced components (empty for a valid blueprint).
    pub fn bp2_violations(&self, sub: &ColouredKGraph) -> Vec<(Edge, Edge)> {
        let kk = sub.k();
        let mut groups: BTreeMap<(Edge, Colour), Vec<Edge>> = BTreeMap::new();
        for (e, c) in sub.edges() {
            for s in e.subsets(kk - 1) {
                groups.entry((s, c)).or_default().push(e);
            }
        }
        let mut out = Vec::new();
        for members in groups.values() {
            let first = members[0];
            for &other in &members[1..] {
                if self.induced[&first] != self.induced[&other] {
                    out.push((first, other));
                }
            }
        }
        out
    }

    /// Edges failing the finite-n BP1 audit: the induced component must have
    /// the edge's colour, contain `e ∪ f` for every witness pair `f` of the
    /// edge's colour, and reach at least `|witness|` vertices through its
    /// shadow at `e`.
    pub fn bp1_violations(&self, h: &ColouredKGraph, dec: &TightDecomposition) -> Vec<Edge> {
        let mut out = Vec::new();
        for (e, c) in self.graph.edges() {
            let id = self.induced[&e];
            let w = &self.witness[&e];
            let info = dec.info(id);
            let mut ok = info.colour == c;
            if ok {
                let shadow_degree = h
                    .vertices()
                    .iter()
                    .filter(|&v| !e.contains(v) && dec.in_shadow(e.with(v), id))
                    .count();
                ok = shadow_degree >= w.len();
            }
            if ok {
                let core = h.link(e).expect("e is smaller than k").restrict(w);
                ok = core.edges_of(c).all(|f| dec.in_component(e.union(f), id));
            }
            if !ok {
                out.push(e);
            }
        }
        out
    }
}

/// `G⁺` for a subgraph `sub` of the blueprint (only edges of `colour` are
/// used): every host edge in one of the induced components that contains an
/// edge of `sub`.
pub fn plus_graph(
    h: &ColouredKGraph,
    dec: &TightDecomposition,
    bp: &Blueprint,
    sub: &ColouredKGraph,
    colour: Colour,
) -> BTreeSet<Edge> {
    let comps: BTreeSet<ComponentId> = sub.edges_of(colour).map(|f| bp.induced[&f]).collect();
    let mut out = BTreeSet::new();
    for f in sub.edges_of(colour) {
        let rest: Vec<Vertex> = h.vertices().iter().filter(|&v| !f.contains(v)).collect();
        for pair in Subsets::new(rest, h.k() - f.len()) {
            let x = f.union(pair);
            if dec.component_of(x).is_some_and(|id| comps.contains(&id)) {
                out.insert(x);
            }
        }
    }
    out
}

/// Membership test for `G⁺` without materialising it.
pub struct PlusFilter<'a> {
    sub: &'a ColouredKGraph,
    colour: Colour,
    comps: BTreeSet<ComponentId>,
}

impl<'a> PlusFilter<'a> {
    pub fn new(bp: &Blueprint, sub: &'a ColouredKGraph, colour: Colour) -> PlusFilter<'a> {
        let comps = sub.edges_of(colour).map(|f| bp.induced[&f]).collect();
        PlusFilter { sub, colour, comps }
    }

    pub fn components(&self) -> &BTreeSet<ComponentId> {
        &self.comps
    }

    pub fn contains(&self, dec: &TightDecomposition, x: Edge) -> bool {
        dec.component_of(x).is_some_and(|id| self.comps.contains(&id))
            && x.subsets(self.sub.k()).into_iter().any(|f| self.sub.has(f, self.colour))
    }
}

/// Edges of `g` (a blueprint subgraph) inducing component `id`.
fn induces(bp: &Blueprint, g: &ColouredKGraph, e: Edge, id: ComponentId) -> bool {
    g.contains(e) && bp.induced_of(e) == Some(id)
}

/// First quadruple `(x, x′, y, y′)` of distinct vertices of `U ∖ S`, in
/// lexicographic order, with `S∪xx′` inducing `R*`, `S∪yy′` inducing `B*`,
/// `S∪xx′y ∈ ∂R*`, `S∪yy′x ∈ ∂B*` and `S∪xx′yy′ ∈ H`.
#[allow(clippy::too_many_arguments)]
pub fn find_bridge(
    h: &ColouredKGraph,
    dec: &TightDecomposition,
    bp: &Blueprint,
    g: &ColouredKGraph,
    u: &VertexSet,
    s: Edge,
    r_star: ComponentId,
    b_star: ComponentId,
) -> Result<Option<[Vertex; 4]>> {
    let k = h.k();
    if k < 4 || s.len() != k - 4 {
        return param(format!("find_bridge needs k >= 4 and |S| = k − 4, got k = {k}, |S| = {}", s.len()));
    }
    if !u.contains_edge(s) {
        return param("S must lie inside U");
    }
    let pool: Vec<Vertex> = u.iter().filter(|&v| !s.contains(v)).collect();
    for &x in &pool {
        for &x2 in &pool {
            if x2 == x || !induces(bp, g, s.with(x).with(x2), r_star) {
                continue;
            }
            let sxx = s.with(x).with(x2);
            for &y in &pool {
                if y == x || y == x2 || !dec.in_shadow(sxx.with(y), r_star) {
                    continue;
                }
                for &y2 in &pool {
                    if y2 == x || y2 == x2 || y2 == y {
                        continue;
                    }
                    let syy = s.with(y).with(y2);
                    if induces(bp, g, syy, b_star) && dec.in_shadow(syy.with(x), b_star) && h.contains(sxx.union(syy)) {
                        return Ok(Some([x, x2, y, y2]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Shadow pivot: the `y` in `pivot_side` (neighbours of `T`
/// in colour `c`) with most `x` in `other_side` (neighbours in the other
/// colour) such that `T∪xy` lies in the shadows of both components induced
/// by `T∪x` and `T∪y`. Ties go to the least `y`.
pub fn shadow_pivot(
    dec: &TightDecomposition,
    bp: &Blueprint,
    g: &ColouredKGraph,
    t: Edge,
    pivot_side: &VertexSet,
    other_side: &VertexSet,
) -> Result<Option<(Vertex, VertexSet)>> {
    if t.len() + 3 != bp.host_k {
        return param("shadow_pivot needs |T| = k − 3");
    }
    let side_colour = |set: &VertexSet| -> Result<Option<Colour>> {
        let mut colour = None;
        for v in set.iter() {
            let Some(c) = g.colour(t.with(v)) else {
                return param(format!("T ∪ {v} is not a blueprint edge"));
            };
            if colour.is_some_and(|d| d != c) {
                return param("side mixes colours");
            }
            colour = Some(c);
        }
        Ok(colour)
    };
    let (pc, oc) = (side_colour(pivot_side)?, side_colour(other_side)?);
    if pc.is_some() && pc == oc {
        return param("both sides have the same colour");
    }
    let mut best: Option<(Vertex, VertexSet)> = None;
    for y in pivot_side.iter() {
        let by = bp.induced[&t.with(y)];
        let gamma: VertexSet = other_side
            .iter()
            .filter(|&x| x != y)
            .filter(|&x| {
                let txy = t.with(x).with(y);
                dec.in_shadow(txy, bp.induced[&t.with(x)]) && dec.in_shadow(txy, by)
            })
            .collect();
        if best.as_ref().is_none_or(|(_, b)| gamma.len() > b.len()) {
            best = Some((y, gamma));
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    /// Subgraph of the link `G_S[U]` (2-sets).
    pub edges: Vec<(Edge, Colour)>,
    /// Component induced by the primary-colour edges, if any.
    pub primary_component: Option<ComponentId>,
    /// Component induced by the kept other-colour edges, if any.
    pub other_component: Option<ComponentId>,
    /// True when the other colour was dropped by the mass threshold.
    pub early_exit: bool,
    /// Size of the high-degree set `X` and of the kept core `V(F*)`.
    pub high_degree: usize,
    pub core: usize,
}

/// Reduces the link `G_S[U]` (k−4 = |S|) to a subgraph whose
/// primary-colour edges and other-colour edges each induce one component.
///
/// `primary` plays the role of red: its edges are kept as they are; the
/// other colour keeps the edges meeting a connected min-degree core of the
/// double-edge graph of the pivot digraph. `delta` sets the thresholds
/// (`2δ^{1/2}n²` mass, `δn` degree).
#[allow(clippy::too_many_arguments)]
pub fn reduce_components(
    h: &ColouredKGraph,
    dec: &TightDecomposition,
    bp: &Blueprint,
    g: &ColouredKGraph,
    primary: Colour,
    u: &VertexSet,
    s: Edge,
    delta: f64,
) -> Result<Reduction> {
    let k = h.k();
    if k < 4 || s.len() != k - 4 {
        return param("reduce_components needs k >= 4 and |S| = k − 4");
    }
    let n = h.order();
    let other = primary.other();
    let pool: Vec<Vertex> = u.iter().filter(|&v| !s.contains(v)).collect();
    let lift = |e: Edge| s.union(e);
    let mut link: Vec<(Edge, Colour)> = Vec::new();
    for pair in Subsets::new(pool.clone(), 2) {
        if let Some(c) = g.colour(lift(pair)) {
            link.push((pair, c));
        }
    }
    let primary_edges: Vec<(Edge, Colour)> = link.iter().copied().filter(|&(_, c)| c == primary).collect();
    let other_edges: Vec<(Edge, Colour)> = link.iter().copied().filter(|&(_, c)| c == other).collect();

    let primary_component = same_component(bp, &primary_edges, lift)?;
    let mass = at_least(2.0 * delta.sqrt() * (n * n) as f64) as usize;
    if other_edges.len() < mass || other_edges.is_empty() {
        return Ok(Reduction {
            edges: primary_edges,
            primary_component,
            other_component: None,
            early_exit: true,
            high_degree: 0,
            core: 0,
        });
    }
    let bound = h.label_bound();
    let mut deg_other = vec![0usize; bound];
    for &(e, _) in &other_edges {
        deg_other[e.get(0)] += 1;
        deg_other[e.get(1)] += 1;
    }
    let min_deg = at_least(delta * n as f64) as usize;
    let x_set: VertexSet = pool.iter().copied().filter(|&x| deg_other[x] >= min_deg.max(1)).collect();
    let xs = x_set.to_vec();
    let colour_of = |a: Vertex, b: Vertex| g.colour(lift(Edge::from_sorted(&[a.min(b), a.max(b)])));
    let r = primary_component;
    // x → x′ when xx′ has the other colour, or has the primary colour and
    // S∪xx′y ∈ ∂R ∩ ∂B(S∪xy) for some other-colour neighbour y of x in U.
    let arc = |x: Vertex, x2: Vertex| -> bool {
        match colour_of(x, x2) {
            Some(c) if c == other => true,
            Some(_) => {
                let Some(r) = r else { return false };
                pool.iter().any(|&y| {
                    y != x
                        && y != x2
                        && colour_of(x, y) == Some(other)
                        && {
                            let t = lift(Edge::from_sorted(&[x.min(x2), x.max(x2)])).with(y);
                            let by = bp.induced[&lift(Edge::from_sorted(&[x.min(y), x.max(y)]))];
                            dec.in_shadow(t, r) && dec.in_shadow(t, by)
                        }
                })
            }
            None => false,
        }
    };
    let mut double = ColouredKGraph::on_vertices(2, bound, x_set)?;
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i + 1..] {
            if arc(a, b) && arc(b, a) {
                double.set(Edge::from_sorted(&[a, b]), Some(Colour::Red));
            }
        }
    }
    let gamma = Rational::new(
        (4.0 * delta.sqrt() * 1_000_000.0).round() as i128,
        1_000_000,
    );
    let peeled = mono_spanning_subgraph(&double, xs.len(), gamma.min(Rational::from_integer(1)))?;
    let core = peeled.component;
    let kept_other: Vec<(Edge, Colour)> = other_edges
        .iter()
        .copied()
        .filter(|&(e, _)| core.contains(e.get(0)) || core.contains(e.get(1)))
        .collect();
    let other_component = same_component(bp, &kept_other, lift)?;
    let mut edges = primary_edges;
    edges.extend(kept_other);
    edges.sort();
    Ok(Reduction {
        edges,
        primary_component,
        other_component,
        early_exit: false,
        high_degree: xs.len(),
        core: core.len(),
    })
}

fn same_component(bp: &Blueprint, edges: &[(Edge, Colour)], lift: impl Fn(Edge) -> Edge) -> Result<Option<ComponentId>> {
    let mut first: Option<(Edge, ComponentId)> = None;
    for &(e, _) in edges {
        let id = bp.induced[&lift(e)];
        match first {
            None => first = Some((lift(e), id)),
            Some((f, fid)) if fid != id => return Err(Error::ReductionFailed { first: f, second: lift(e) }),
            _ => {}
        }
    }
    Ok(first.map(|(_, id)| id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i128, r: i128) -> Rational {
        Rational::new(p, r)
    }

    #[test]
    fn red_complete_link() {
        let f = ColouredKGraph::complete(2, 7, Colour::Red).unwrap();
        let ms = mono_spanning_subgraph(&f, 7, q(1, 100)).unwrap();
        assert_eq!(ms.colour, Some(Colour::Red));
        assert_eq!(ms.order, 7);
        assert_eq!(ms.subgraph, f);
    }

    #[test]
    fn two_cliques_tie_to_red() {
        let mut f = ColouredKGraph::new(2, 8).unwrap();
        for e in Subsets::new(vec![0, 1, 2, 3], 2) {
            f.set(e, Some(Colour::Blue));
        }
        for e in Subsets::new(vec![4, 5, 6, 7], 2) {
            f.set(e, Some(Colour::Red));
        }
        let ms = mono_spanning_subgraph(&f, 8, q(1, 1)).unwrap();
        assert_eq!(ms.colour, Some(Colour::Red));
        assert_eq!(ms.component.to_vec(), vec![4, 5, 6, 7]);
        for e in Subsets::new(vec![0, 1, 2], 2) {
            f.set(e, Some(Colour::Red));
        }
        let ms = mono_spanning_subgraph(&f, 8, q(1, 1)).unwrap();
        assert_eq!(ms.colour, Some(Colour::Red));
        assert_eq!(ms.component.to_vec(), vec![4, 5, 6, 7]);
    }

    #[test]
    fn empty_link_has_order_zero() {
        let f = ColouredKGraph::new(2, 5).unwrap();
        let ms = mono_spanning_subgraph(&f, 5, q(1, 100)).unwrap();
        assert_eq!(ms.order, 0);
        assert_eq!(ms.colour, None);
    }

    #[test]
    fn iterated_peeling_goes_further() {
        // a path 0-1-2-3 with threshold 1 for n = 3: single pass keeps all
        let mut f = ColouredKGraph::new(2, 4).unwrap();
        for (a, b) in [(0, 1), (1, 2), (2, 3)] {
            f.set(Edge::from_sorted(&[a, b]), Some(Colour::Blue));
        }
        let once = mono_spanning_subgraph(&f, 4, q(1, 16)).unwrap();
        assert_eq!(once.deleted.to_vec(), vec![0, 3]);
        let iter = mono_spanning_subgraph_with(&f, 4, q(1, 16), Peeling::Iterated).unwrap();
        assert_eq!(iter.deleted.len(), 4);
        assert_eq!(iter.order, 0);
    }

    #[test]
    fn red_complete_blueprint() {
        let h = ColouredKGraph::complete(4, 9, Colour::Red).unwrap();
        let dec = TightDecomposition::new(&h);
        let bp = build_blueprint(&h, &dec, q(1, 10_000)).unwrap();
        assert_eq!(bp.graph, ColouredKGraph::complete(2, 9, Colour::Red).unwrap());
        assert!(bp.induced.values().all(|&id| id == 0));
        assert!(bp.bp2_violations(&bp.graph).is_empty());
        assert!(bp.bp1_violations(&h, &dec).is_empty());
        assert_eq!(bp.stats.min_witness, Some(7));
    }

    #[test]
    fn plus_graph_of_one_edge() {
        let h = ColouredKGraph::complete(4, 7, Colour::Red).unwrap();
        let dec = TightDecomposition::new(&h);
        let bp = build_blueprint(&h, &dec, q(1, 10_000)).unwrap();
        let mut sub = bp.graph.empty_like();
        let e = Edge::from_sorted(&[2, 5]);
        sub.set(e, Some(Colour::Red));
        let plus = plus_graph(&h, &dec, &bp, &sub, Colour::Red);
        assert_eq!(plus.len(), 10);
        assert!(plus.iter().all(|x| e.is_subset(*x)));
        let filter = PlusFilter::new(&bp, &sub, Colour::Red);
        assert!(filter.contains(&dec, Edge::from_sorted(&[0, 2, 3, 5])));
        assert!(!filter.contains(&dec, Edge::from_sorted(&[0, 2, 3, 4])));
        assert!(plus_graph(&h, &dec, &bp, &bp.graph.empty_like(), Colour::Red).is_empty());
    }

    #[test]
    fn bridge_needs_room() {
        let h = ColouredKGraph::complete(4, 8, Colour::Red).unwrap();
        let dec = TightDecomposition::new(&h);
        let bp = build_blueprint(&h, &dec, q(1, 10_000)).unwrap();
        let u: VertexSet = [0, 1, 2].into_iter().collect();
        assert_eq!(find_bridge(&h, &dec, &bp, &bp.graph, &u, Edge::EMPTY, 0, 0).unwrap(), None);
    }

    #[test]
    fn reduction_of_all_red_link() {
        let h = ColouredKGraph::complete(4, 8, Colour::Red).unwrap();
        let dec = TightDecomposition::new(&h);
        let bp = build_blueprint(&h, &dec, q(1, 10_000)).unwrap();
        let u = h.vertices();
        let red = reduce_components(&h, &dec, &bp, &bp.graph, Colour::Red, &u, Edge::EMPTY, 0.01).unwrap();
        assert_eq!(red.edges.len(), 28);
        assert_eq!(red.primary_component, Some(0));
        assert!(red.early_exit);
    }
}
