//! Tightly connected matchings.
//!
//! The two pipelines follow the structure of the existence proofs for
//! k = 4 (one red and one blue matching) and k = 5 (at most four
//! matchings). Every existential step becomes a search; when a search comes
//! back empty the pipeline records why in the trace and carries on with a
//! smaller, still verified, bundle.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::blueprint::{build_blueprint, mono_spanning_subgraph, reduce_components, Blueprint};
use crate::combin::Subsets;
use crate::components::{loose_components, tight_walk, ComponentId, TightDecomposition};
use crate::density::{dense_subgraph, ser_rational};
use crate::edge::{Colour, Edge, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::graph::ColouredKGraph;
use crate::numeric::{at_least, at_most, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    /// Lexicographically sorted.
    pub edges: Vec<Edge>,
    pub colour: Colour,
    pub component: ComponentId,
}

impl Matching {
    pub fn new(mut edges: Vec<Edge>, colour: Colour, component: ComponentId) -> Matching {
        edges.sort_unstable();
        Matching { edges, colour, component }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.edges.iter().flat_map(|e| e.iter()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingBundle {
    pub matchings: Vec<Matching>,
    pub covered: VertexSet,
    pub leftover: VertexSet,
}

impl MatchingBundle {
    /// Drops empty matchings and computes the cover.
    pub fn new(h: &ColouredKGraph, matchings: Vec<Matching>) -> MatchingBundle {
        let matchings: Vec<Matching> = matchings.into_iter().filter(|m| !m.is_empty()).collect();
        let covered = matchings.iter().fold(VertexSet::new(), |acc, m| acc.union(&m.vertices()));
        MatchingBundle { leftover: h.vertices().difference(&covered), covered, matchings }
    }

    pub fn coverage(&self) -> usize {
        self.covered.len()
    }

    pub fn components(&self) -> BTreeSet<ComponentId> {
        self.matchings.iter().map(|m| m.component).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Two edges share a vertex.
    Disjointness { vertex: Vertex, edges: (Edge, Edge) },
    /// The edge is missing from the host or has the other colour.
    Colour { edge: Edge },
    /// No tight walk joins the two edges.
    Connectivity { pair: (Edge, Edge) },
    /// The edge lies outside the claimed component.
    Component { edge: Edge },
    /// Two matchings of one bundle share a vertex.
    Overlap { vertex: Vertex },
}

/// Checks that the edges are pairwise disjoint, all of colour `c` in `h`,
/// and joined by tight walks (consecutive pairs, which suffices by
/// transitivity).
pub fn verify_edges(h: &ColouredKGraph, edges: &[Edge], c: Colour) -> std::result::Result<(), Violation> {
    let mut owner: BTreeMap<Vertex, Edge> = BTreeMap::new();
    for &e in edges {
        if !h.has(e, c) {
            return Err(Violation::Colour { edge: e });
        }
        for v in e.iter() {
            if let Some(&other) = owner.get(&v) {
                return Err(Violation::Disjointness { vertex: v, edges: (other, e) });
            }
            owner.insert(v, e);
        }
    }
    for pair in edges.windows(2) {
        let walk = tight_walk(h, pair[0], pair[1]).expect("endpoints are edges");
        if walk.is_none() {
            return Err(Violation::Connectivity { pair: (pair[0], pair[1]) });
        }
    }
    Ok(())
}

/// Full check of one matching, including membership of the named component.
pub fn verify_matching(
    h: &ColouredKGraph,
    dec: &TightDecomposition,
    m: &Matching,
) -> std::result::Result<(), Violation> {
    verify_edges(h, &m.edges, m.colour)?;
    if let Some(&e) = m.edges.iter().find(|&&e| !dec.in_component(e, m.component)) {
        return Err(Violation::Component { edge: e });
    }
    Ok(())
}

pub fn verify_bundle(
    h: &ColouredKGraph,
    dec: &TightDecomposition,
    bundle: &MatchingBundle,
) -> std::result::Result<(), Violation> {
    let mut seen = VertexSet::new();
    for m in &bundle.matchings {
        verify_matching(h, dec, m)?;
        let vs = m.vertices();
        if let Some(v) = VertexSet::min(&seen.intersection(&vs)) {
            return Err(Violation::Overlap { vertex: v });
        }
        seen = seen.union(&vs);
    }
    Ok(())
}

/// Lexicographic greedy matching: scans k-subsets of `pool` in order and
/// keeps every accepted one that misses the vertices used so far.
pub fn greedy_matching<F: FnMut(Edge) -> bool>(k: usize, pool: &VertexSet, mut accept: F) -> Vec<Edge> {
    let verts = pool.to_vec();
    let mut used = VertexSet::new();
    let mut out = Vec::new();
    let mut prefix: Vec<Vertex> = Vec::with_capacity(k);
    scan(&verts, 0, k, &mut prefix, &mut used, &mut out, &mut accept);
    out
}

fn scan<F: FnMut(Edge) -> bool>(
    verts: &[Vertex],
    start: usize,
    k: usize,
    prefix: &mut Vec<Vertex>,
    used: &mut VertexSet,
    out: &mut Vec<Edge>,
    accept: &mut F,
) {
    let need = k - prefix.len();
    for i in start..verts.len() {
        if verts.len() - i < need {
            return;
        }
        let v = verts[i];
        if used.contains(v) {
            continue;
        }
        prefix.push(v);
        if need == 1 {
            let e = Edge::from_sorted(prefix);
            if accept(e) {
                out.push(e);
                for u in e.iter() {
                    used.insert(u);
                }
            }
        } else {
            scan(verts, i + 1, k, prefix, used, out, accept);
        }
        prefix.pop();
        if prefix.iter().any(|&p| used.contains(p)) {
            // every later set in this branch contains a used vertex
            return;
        }
    }
}

/// First accepted k-subset of `pool`, if any: the maximality audit.
pub fn addable_edge<F: FnMut(Edge) -> bool>(k: usize, pool: &VertexSet, mut accept: F) -> Option<Edge> {
    Subsets::new(pool.to_vec(), k).find(|&e| accept(e))
}

/// Maximal matching of component `id` avoiding `forbidden`.
pub fn greedy_component_matching(
    h: &ColouredKGraph,
    dec: &TightDecomposition,
    id: ComponentId,
    forbidden: &VertexSet,
) -> Matching {
    let info = dec.info(id);
    let pool = info.support.difference(forbidden);
    let edges = greedy_matching(h.k(), &pool, |e| dec.in_component(e, id));
    Matching::new(edges, info.colour, id)
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineParams {
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub eta: Rational,
    /// Recorded in the trace; the pipelines are deterministic.
    pub seed: u64,
    /// Local-search improvements allowed; defaults to `10·n`.
    pub iteration_cap: Option<usize>,
    /// Replacement edges considered per removed edge.
    pub candidate_cap: usize,
}

impl Default for PipelineParams {
    fn default() -> PipelineParams {
        PipelineParams {
            epsilon: Rational::new(1, 10_000),
            alpha: Rational::new(1, 100),
            eta: Rational::new(1, 10),
            seed: 0,
            iteration_cap: None,
            candidate_cap: 2_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseRecord {
    pub phase: String,
    /// `(colour, component, edges)` of each matching after the phase.
    pub matchings: Vec<(Colour, ComponentId, usize)>,
    pub covered: usize,
    /// Wall time since the pipeline started; not serialised.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Classification {
    pub w_red: usize,
    pub w_blue: usize,
    pub w_0: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineTrace {
    pub params: PipelineParams,
    /// Named components in the order the pipeline fixed them.
    pub components: Vec<(String, Option<ComponentId>)>,
    pub phases: Vec<PhaseRecord>,
    pub classification: Option<Classification>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub iterations: usize,
    pub termination: String,
    #[serde(skip)]
    started: Option<Instant>,
}

impl PipelineTrace {
    fn new(params: &PipelineParams) -> PipelineTrace {
        PipelineTrace {
            params: params.clone(),
            components: Vec::new(),
            phases: Vec::new(),
            classification: None,
            checks: Vec::new(),
            notes: Vec::new(),
            iterations: 0,
            termination: String::new(),
            started: Some(Instant::now()),
        }
    }

    fn component(&mut self, name: &str, id: Option<ComponentId>) {
        self.components.push((name.to_string(), id));
    }

    fn check(&mut self, name: &str, holds: bool) {
        self.checks.push(Check { name: name.to_string(), holds });
    }

    fn phase(&mut self, name: &str, work: &Working) {
        self.phases.push(PhaseRecord {
            phase: name.to_string(),
            matchings: work.groups().into_iter().map(|(c, id, es)| (c, id, es.len())).collect(),
            covered: work.used.len(),
            elapsed: self.started.map(|t| t.elapsed()).unwrap_or_default(),
        });
    }

    pub fn covered_by_phase(&self) -> Vec<usize> {
        self.phases.iter().map(|p| p.covered).collect()
    }
}

/// The matching under construction: edges tagged with colour and component.
#[derive(Clone, Debug, Default)]
struct Working {
    edges: BTreeMap<Edge, (Colour, ComponentId)>,
    used: VertexSet,
}

impl Working {
    fn add(&mut self, e: Edge, c: Colour, id: ComponentId) {
        debug_assert!(self.used.is_disjoint(&e.to_set()));
        self.edges.insert(e, (c, id));
        for v in e.iter() {
            self.used.insert(v);
        }
    }

    fn remove(&mut self, e: Edge) {
        self.edges.remove(&e);
        for v in e.iter() {
            self.used.remove(v);
        }
    }

    fn count(&self, c: Colour) -> usize {
        self.edges.values().filter(|(d, _)| *d == c).count()
    }

    fn groups(&self) -> Vec<(Colour, ComponentId, Vec<Edge>)> {
        let mut by: BTreeMap<(ComponentId, usize), Vec<Edge>> = BTreeMap::new();
        let mut colour_of = BTreeMap::new();
        for (&e, &(c, id)) in &self.edges {
            by.entry((id, c.index())).or_default().push(e);
            colour_of.insert(id, c);
        }
        by.into_iter().map(|((id, _), es)| (colour_of[&id], id, es)).collect()
    }

    fn into_matchings(self) -> Vec<Matching> {
        self.groups().into_iter().map(|(c, id, es)| Matching::new(es, c, id)).collect()
    }
}

fn finish(
    h: &ColouredKGraph,
    dec: &TightDecomposition,
    work: Working,
    mut trace: PipelineTrace,
    reason: &str,
) -> Result<(MatchingBundle, PipelineTrace)> {
    let bundle = MatchingBundle::new(h, work.into_matchings());
    if let Err(v) = verify_bundle(h, dec, &bundle) {
        return Err(Error::Verification(format!("pipeline produced an invalid bundle: {v:?}")));
    }
    trace.termination = reason.to_string();
    Ok((bundle, trace))
}

/// Dense cleaning, or the input itself when cleaning removes every edge
/// (small n, where the thresholds exceed the largest possible degrees).
fn clean_or_keep(g: &ColouredKGraph, alpha: Rational, trace: &mut PipelineTrace) -> Result<ColouredKGraph> {
    let cleaned = dense_subgraph(g, alpha)?.graph;
    if cleaned.is_empty() && !g.is_empty() {
        trace.notes.push(format!("dense cleaning of a {}-graph removed every edge; kept it uncleaned", g.k()));
        return Ok(g.clone());
    }
    Ok(cleaned)
}

/// Single-pass deletion of vertices of degree below `threshold`.
fn min_degree_core(g: &ColouredKGraph, threshold: usize) -> ColouredKGraph {
    let mut degree = vec![0usize; g.label_bound()];
    for (e, _) in g.edges() {
        for v in e.iter() {
            degree[v] += 1;
        }
    }
    let keep: VertexSet = g.vertices().iter().filter(|&v| degree[v] >= threshold).collect();
    g.restrict(&keep)
}

/// Most frequent component among `ids`, ties to the least id.
fn majority(ids: impl IntoIterator<Item = ComponentId>) -> Option<ComponentId> {
    let mut votes: BTreeMap<ComponentId, usize> = BTreeMap::new();
    for id in ids {
        *votes.entry(id).or_insert(0) += 1;
    }
    let best = votes.values().copied().max()?;
    votes.into_iter().find(|&(_, v)| v == best).map(|(id, _)| id)
}

/// Membership in `(G^c)⁺` restricted to one component: an edge of `id`
/// containing a `c`-coloured pair of `g` that induces `id`.
fn in_plus(dec: &TightDecomposition, bp: &Blueprint, g: &ColouredKGraph, c: Colour, id: ComponentId, e: Edge) -> bool {
    dec.in_component(e, id)
        && e.subsets(g.k()).into_iter().any(|f| g.has(f, c) && bp.induced_of(f) == Some(id))
}

struct Targets<'a> {
    dec: &'a TightDecomposition,
    bp: &'a Blueprint,
    g: &'a ColouredKGraph,
    /// `(colour, component)` per plus graph.
    parts: Vec<(Colour, ComponentId)>,
}

impl Targets<'_> {
    fn classify(&self, e: Edge) -> Option<(Colour, ComponentId)> {
        self.parts.iter().copied().find(|&(c, id)| in_plus(self.dec, self.bp, self.g, c, id, e))
    }
}

fn degree_in(g: &ColouredKGraph, v: Vertex, within: &VertexSet, c: Colour) -> usize {
    within.iter().filter(|&u| u != v && g.has(Edge::from_sorted(&[u.min(v), u.max(v)]), c)).count()
}

fn empty(h: &ColouredKGraph, dec: &TightDecomposition, trace: PipelineTrace, reason: &str) -> Result<(MatchingBundle, PipelineTrace)> {
    finish(h, dec, Working::default(), trace, reason)
}

/// One red and one blue tightly connected matching in a 4-graph.
pub fn two_matchings_k4(h: &ColouredKGraph, params: &PipelineParams) -> Result<(MatchingBundle, PipelineTrace)> {
    if h.k() != 4 {
        return crate::error::param(format!("the k = 4 pipeline got a {}-graph", h.k()));
    }
    let n = h.order();
    let eps = to_f64(params.epsilon);
    let alpha = to_f64(params.alpha);
    let mut trace = PipelineTrace::new(params);
    let dec = TightDecomposition::new(h);
    let bp = build_blueprint(h, &dec, params.epsilon)?;
    if bp.graph.is_empty() {
        return empty(h, &dec, trace, "no blueprint edges");
    }

    // phase 1: clean, fix the spanning colour and its component R
    let cleaned = clean_or_keep(&bp.graph, params.alpha, &mut trace)?;
    let ms = mono_spanning_subgraph(&cleaned, n, params.alpha)?;
    let Some(c1) = ms.colour else {
        return empty(h, &dec, trace, "cleaned blueprint has no monochromatic component");
    };
    let g1 = ms.subgraph;
    let c2 = c1.other();
    let r = majority(g1.edges_of(c1).map(|f| bp.induced[&f]));
    let r = r.expect("spanning component has an edge");
    trace.check("primary blueprint edges induce one component", g1.edges_of(c1).all(|f| bp.induced[&f] == r));
    trace.component(if c1 == Colour::Red { "R" } else { "B" }, Some(r));
    let pool1 = g1.vertices();
    let mut work = Working::default();
    for e in greedy_matching(4, &pool1, |e| in_plus(&dec, &bp, &g1, c1, r, e)) {
        work.add(e, c1, r);
    }
    trace.phase("primary plus-graph matching", &work);

    // phase 2: reduce the leftover link to fix B, then extend
    let u = pool1.difference(&work.used);
    let delta = alpha.powf(1.0 / 3.0);
    let (kept_other, reduced_other) = match reduce_components(h, &dec, &bp, &g1, c1, &u, Edge::EMPTY, delta) {
        Ok(red) => {
            if red.early_exit {
                trace.notes.push("other-colour mass below threshold; reduction kept the primary side only".into());
            }
            let kept: BTreeSet<Edge> = red.edges.iter().filter(|&&(_, c)| c == c2).map(|&(e, _)| e).collect();
            (kept, red.other_component)
        }
        Err(Error::ReductionFailed { first, second }) => {
            trace.notes.push(format!("reduction failed on {first:?} / {second:?}; dropping its other-colour edges"));
            (BTreeSet::new(), None)
        }
        Err(e) => return Err(e),
    };
    let g2 = g1.filter(|e, c| c == c1 || !u.contains_edge(e) || kept_other.contains(&e));
    let g = min_degree_core(&g2, at_least((1.0 - alpha.powf(1.0 / 30.0)) * n.saturating_sub(1) as f64) as usize);
    let b = reduced_other.or_else(|| majority(g.edges_of(c2).map(|f| bp.induced[&f])));
    trace.component(if c2 == Colour::Blue { "B" } else { "R" }, b);
    let mut targets = Targets { dec: &dec, bp: &bp, g: &g, parts: vec![(c1, r)] };
    if let Some(b) = b {
        targets.parts.push((c2, b));
    }
    let pool = g.vertices();
    let w = pool.difference(&work.used);
    for e in greedy_matching(4, &w, |e| targets.classify(e).is_some()) {
        let (c, id) = targets.classify(e).expect("accepted");
        work.add(e, c, id);
    }
    trace.phase("extension to M0", &work);
    let w0 = pool.difference(&work.used);
    trace.check(
        "primary blueprint edges induce R",
        g.edges_of(c1).all(|f| bp.induced[&f] == r),
    );
    trace.check(
        "other-colour blueprint edges of V(M0) and W0 induce B",
        b.is_none_or(|b| {
            let side: VertexSet = work
                .edges
                .iter()
                .filter(|(_, &(c, _))| c == c2)
                .flat_map(|(e, _)| e.iter())
                .collect::<VertexSet>()
                .union(&w0);
            g.edges_of(c2).filter(|&f| side.contains_edge(f)).all(|f| bp.induced[&f] == b)
        }),
    );
    trace.check("M0 lies in the plus graphs", work.edges.keys().all(|&e| targets.classify(e).is_some()));
    trace.check("plus graphs are empty on W0", addable_edge(4, &w0, |e| targets.classify(e).is_some()).is_none());

    // phase 3: local search on (|M|, |M^primary|)
    let cap = params.iteration_cap.unwrap_or(10 * n);
    while trace.iterations < cap {
        if !improve(&mut work, &pool, &targets, c1, params.candidate_cap) {
            break;
        }
        trace.iterations += 1;
        let w = pool.difference(&work.used);
        for e in greedy_matching(4, &w, |e| targets.classify(e).is_some()) {
            let (c, id) = targets.classify(e).expect("accepted");
            work.add(e, c, id);
        }
    }
    if trace.iterations == cap {
        trace.notes.push(format!("local search stopped at the cap of {cap} moves"));
    }
    trace.phase("local search", &work);

    // phase 4: classify the leftover and match inside the generated component
    let w = pool.difference(&work.used);
    let t = at_most(8.0 * eps.sqrt() * n as f64).unwrap_or(0) as usize;
    let w_red: VertexSet = w.iter().filter(|&v| degree_in(&g, v, &w, Colour::Blue) <= t).collect();
    let w_blue: VertexSet = w.iter().filter(|&v| degree_in(&g, v, &w, Colour::Red) <= t).collect();
    trace.classification = Some(Classification {
        w_red: w_red.len(),
        w_blue: w_blue.len(),
        w_0: w.difference(&w_red.union(&w_blue)).len(),
    });
    let (major, major_set) = if w_red.len() >= w_blue.len() { (Colour::Red, w_red) } else { (Colour::Blue, w_blue) };
    let lc = major.other();
    let major_comp = if major == c1 { Some(r) } else { b };
    let existing = if lc == c1 { Some(r) } else { b };
    let mut votes: Vec<ComponentId> = Vec::new();
    if let Some(mc) = major_comp {
        let ms: Vec<Vertex> = major_set.to_vec();
        for xyz in Subsets::new(ms.clone(), 3) {
            if !dec.in_shadow(xyz, mc) || !xyz.subsets(2).into_iter().any(|f| g.has(f, major)) {
                continue;
            }
            for &v in &ms {
                if !xyz.contains(v) && h.has(xyz.with(v), lc) {
                    votes.push(dec.component_of(xyz.with(v)).expect("edge"));
                }
            }
        }
    }
    let generated = majority(votes.iter().copied()).or_else(|| {
        trace.notes.push("no generating triples; using the majority leftover component".into());
        majority(h.edges_within(&w).into_iter().filter(|&(_, c)| c == lc).map(|(e, _)| dec.component_of(e).expect("edge")))
    });
    trace.component(if lc == Colour::Blue { "B'" } else { "R'" }, generated);
    if let Some(b2) = generated {
        let extra = greedy_matching(4, &w, |e| dec.in_component(e, b2));
        // distinct components of one colour have disjoint shadows
        if existing == Some(b2) {
            for e in extra {
                work.add(e, lc, b2);
            }
            trace.notes.push("leftover component equals the existing one; matchings merged".into());
        } else {
            let current = work.count(lc);
            if extra.len() > current {
                let drop: Vec<Edge> = work.edges.iter().filter(|(_, &(c, _))| c == lc).map(|(&e, _)| e).collect();
                for e in drop {
                    work.remove(e);
                }
                for e in extra {
                    work.add(e, lc, b2);
                }
                trace.notes.push("leftover component differs; kept its larger matching".into());
            } else if !extra.is_empty() {
                trace.notes.push("leftover component differs; kept the existing matching".into());
            }
        }
    }
    trace.phase("leftover matching", &work);
    finish(h, &dec, work, trace, "completed")
}

/// One improving exchange: drop an edge `e` (other colour first) and put in
/// its place pairwise disjoint target edges meeting `e` and otherwise
/// inside the leftover, when that raises `(|M|, |M^primary|)`.
fn improve(work: &mut Working, pool: &VertexSet, targets: &Targets, primary: Colour, cap: usize) -> bool {
    let w = pool.difference(&work.used);
    let mut order: Vec<(usize, Edge, Colour)> =
        work.edges.iter().map(|(&e, &(c, _))| (usize::from(c == primary), e, c)).collect();
    order.sort_unstable();
    for (_, e, c) in order {
        let mut cands: Vec<(Edge, Colour, ComponentId)> = Vec::new();
        'outer: for a in 1..=e.len() {
            for inner in e.subsets(a) {
                for rest in Subsets::new(w.to_vec(), e.len() - a) {
                    let f = inner.union(rest);
                    if let Some((fc, id)) = targets.classify(f) {
                        cands.push((f, fc, id));
                        if cands.len() >= cap {
                            break 'outer;
                        }
                    }
                }
            }
        }
        // a single primary edge for an other-colour edge
        if c != primary {
            if let Some(&f) = cands.iter().find(|x| x.1 == primary) {
                work.remove(e);
                work.add(f.0, f.1, f.2);
                return true;
            }
        }
        // two or more disjoint edges
        for i in 0..cands.len() {
            for j in i + 1..cands.len() {
                if !cands[i].0.is_disjoint(cands[j].0) {
                    continue;
                }
                let mut chosen = vec![cands[i], cands[j]];
                let mut used = cands[i].0.union(cands[j].0).to_set();
                for &x in &cands[j + 1..] {
                    if used.is_disjoint(&x.0.to_set()) {
                        chosen.push(x);
                        used = used.union(&x.0.to_set());
                    }
                }
                work.remove(e);
                for (f, fc, id) in chosen {
                    work.add(f, fc, id);
                }
                return true;
            }
        }
    }
    false
}

/// At most four tightly connected matchings in a 5-graph.
pub fn four_matchings_k5(h: &ColouredKGraph, params: &PipelineParams) -> Result<(MatchingBundle, PipelineTrace)> {
    if h.k() != 5 {
        return crate::error::param(format!("the k = 5 pipeline got a {}-graph", h.k()));
    }
    let n = h.order();
    let alpha = to_f64(params.alpha);
    let mut trace = PipelineTrace::new(params);
    let dec = TightDecomposition::new(h);
    let bp = build_blueprint(h, &dec, params.epsilon)?;
    let g = clean_or_keep(&bp.graph, params.alpha, &mut trace)?;
    if g.is_empty() {
        return empty(h, &dec, trace, "no blueprint edges");
    }

    // phase 1: the blueprint of the blueprint fixes V^red, V^blue, R, B
    let dec_g = TightDecomposition::new(&g);
    let j = build_blueprint(&g, &dec_g, params.alpha)?;
    let mut v_sides = [VertexSet::new(), VertexSet::new()];
    let mut chosen: [Option<ComponentId>; 2] = [None, None];
    for c in Colour::BOTH {
        let singles: Vec<Edge> = j.graph.edges_of(c).collect();
        v_sides[c.index()] = singles.iter().map(|s| s.get(0)).collect();
        let in_g = majority(singles.iter().map(|&s| j.induced[&s]));
        if let Some(cg) = in_g {
            let edges = dec_g.edges_of(&g, cg);
            chosen[c.index()] = majority(edges.iter().map(|f| bp.induced[f]));
            trace.check(
                &format!("{c:?} blueprint component induces one host component"),
                edges.iter().all(|f| Some(bp.induced[f]) == chosen[c.index()]),
            );
        }
    }
    let [r, b] = chosen;
    trace.component("R", r);
    trace.component("B", b);
    let v_star = v_sides[0].union(&v_sides[1]);
    let in_any = |e: Edge, ids: &[Option<ComponentId>]| {
        let id = dec.component_of(e);
        id.is_some() && ids.contains(&id)
    };

    // phase 2: maximal matching in (R ∪ B)[V*]
    let mut work = Working::default();
    for e in greedy_matching(5, &v_star, |e| in_any(e, &[r, b])) {
        let id = dec.component_of(e).expect("edge");
        work.add(e, dec.info(id).colour, id);
    }
    trace.phase("matching in R and B", &work);

    // phase 3: per-vertex link reductions give R* and B*
    let u = v_star.difference(&work.used);
    let delta = alpha.powf(1.0 / 37.0);
    let mut reduced: BTreeMap<Vertex, BTreeSet<Edge>> = BTreeMap::new();
    let mut failures = 0usize;
    for x in u.iter() {
        let (primary, anchor) = if v_sides[0].contains(x) { (Colour::Red, r) } else { (Colour::Blue, b) };
        let Some(anchor) = anchor else { continue };
        let s = Edge::singleton(x);
        let u_star: VertexSet = u
            .iter()
            .filter(|&y| y != x)
            .filter(|&y| {
                let xy = s.with(y);
                u.iter().any(|z| z != x && z != y && g.contains(xy.with(z)) && bp.induced[&xy.with(z)] == anchor)
            })
            .collect();
        match reduce_components(h, &dec, &bp, &g, primary, &u_star, s, delta) {
            Ok(red) => {
                reduced.insert(x, red.edges.iter().map(|&(e, _)| e.with(x)).collect());
            }
            Err(Error::ReductionFailed { .. }) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    if failures > 0 {
        trace.notes.push(format!("{failures} link reductions failed and were left empty"));
    }
    let mut f = g.restrict(&u).empty_like();
    for (e, c) in g.edges_within(&u) {
        if e.iter().all(|x| reduced.get(&x).is_some_and(|set| set.contains(&e))) {
            f.set(e, Some(c));
        }
    }
    let f_clean = clean_or_keep(&f, params.alpha, &mut trace)?;
    let mut stars: [Option<ComponentId>; 2] = [None, None];
    for c in Colour::BOTH {
        let loose = loose_components(&f_clean, c);
        let consistent = loose.iter().all(|comp| {
            let first = bp.induced[&comp[0]];
            comp.iter().all(|e| bp.induced[e] == first)
        });
        trace.check(&format!("{c:?} loose components of F induce one component each"), consistent);
        stars[c.index()] = majority(f_clean.edges_of(c).map(|e| bp.induced[&e]));
    }
    let [mut r_star, mut b_star] = stars;
    if r_star.is_some() && b_star.is_some() && r_star != r && b_star != b {
        let weight = |id: Option<ComponentId>, c: Colour| f_clean.edges_of(c).filter(|e| Some(bp.induced[e]) == id).count();
        if weight(r, Colour::Red) >= weight(b, Colour::Blue) {
            r_star = r;
            trace.notes.push("neither star matched; forced R* = R".into());
        } else {
            b_star = b;
            trace.notes.push("neither star matched; forced B* = B".into());
        }
    }
    trace.component("R*", r_star);
    trace.component("B*", b_star);
    let diamond = [r, r_star, b, b_star];
    let rest = v_star.difference(&work.used);
    for e in greedy_matching(5, &rest, |e| in_any(e, &diamond)) {
        let id = dec.component_of(e).expect("edge");
        work.add(e, dec.info(id).colour, id);
    }
    trace.phase("extension in R, R*, B, B*", &work);

    // phase 4: majority colour on the leftover, dense cleaning, one component
    let w = v_star.difference(&work.used);
    let big = alpha * (n * n) as f64;
    let star_degree = |x: Vertex, id: Option<ComponentId>| {
        g.edges_within(&w).into_iter().filter(|&(e, _)| e.contains(x) && Some(bp.induced[&e]) == id).count() as f64
    };
    let mut cls = Classification::default();
    for x in w.iter() {
        let (dr, db) = (star_degree(x, r_star), star_degree(x, b_star));
        if dr + db < 2.0 * big {
            cls.w_0 += 1;
        } else if db < big {
            cls.w_red += 1;
        } else {
            cls.w_blue += 1;
        }
    }
    trace.classification = Some(cls);
    let count = |id: Option<ComponentId>| g.edges_within(&w).into_iter().filter(|&(e, _)| Some(bp.induced[&e]) == id).count();
    let (rc, bc) = (count(r_star), count(b_star));
    let lc = if rc > bc {
        Colour::Blue
    } else if bc > rc {
        Colour::Red
    } else {
        let hr = h.edges_within(&w).into_iter().filter(|&(_, c)| c == Colour::Red).count();
        let hb = h.edges_within(&w).len() - hr;
        trace.notes.push("no star edges decide the leftover; using host edge counts".into());
        if hb > hr {
            Colour::Blue
        } else {
            Colour::Red
        }
    };
    let sub = h.restrict(&w).filter(|_, c| c == lc);
    let cleaned = clean_or_keep(&sub, params.alpha, &mut trace)?;
    let local = TightDecomposition::new(&cleaned);
    let largest = local.components().iter().max_by(|a, b| a.size.cmp(&b.size).then(b.id.cmp(&a.id))).map(|i| i.id);
    if let Some(lid) = largest {
        let extra = greedy_matching(5, &w, |e| local.in_component(e, lid));
        if let Some(&first) = extra.first() {
            let id = dec.component_of(first).expect("edge of H");
            trace.component("leftover", Some(id));
            for e in extra {
                work.add(e, lc, id);
            }
        }
    }
    trace.phase("leftover matching", &work);
    let comps: BTreeSet<ComponentId> = work.edges.values().map(|&(_, id)| id).collect();
    trace.check("at most four components", comps.len() <= 4);
    finish(h, &dec, work, trace, "completed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(vs: &[Vertex]) -> Edge {
        Edge::new(vs).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let mut h = ColouredKGraph::new(3, 5).unwrap();
        h.set(e(&[0, 1, 2]), Some(Colour::Red));
        let dec = TightDecomposition::new(&h);
        assert_eq!(greedy_component_matching(&h, &dec, 0, &VertexSet::new()).edges, vec![e(&[0, 1, 2])]);
        h.set(e(&[1, 2, 3]), Some(Colour::Red));
        let dec = TightDecomposition::new(&h);
        let m = greedy_component_matching(&h, &dec, 0, &VertexSet::new());
        assert_eq!(m.edges, vec![e(&[0, 1, 2])]);
        let forbid: VertexSet = [0].into_iter().collect();
        assert_eq!(greedy_component_matching(&h, &dec, 0, &forbid).edges, vec![e(&[1, 2, 3])]);
    }

    #[test]
    fn greedy_matches_reference() {
        let h = crate::harness::random_colouring(&crate::harness::RandomModel {
            missing: 0.6,
            ..crate::harness::RandomModel::complete(3, 11, 0.5, 3)
        })
        .unwrap();
        let pool = h.vertices();
        let fast = greedy_matching(3, &pool, |x| h.has(x, Colour::Red));
        let mut slow = Vec::new();
        let mut used = VertexSet::new();
        for x in h.edges_of(Colour::Red) {
            if used.is_disjoint(&x.to_set()) {
                slow.push(x);
                used = used.union(&x.to_set());
            }
        }
        assert_eq!(fast, slow);
        let rest = pool.difference(&used);
        assert_eq!(addable_edge(3, &rest, |x| h.has(x, Colour::Red)), None);
    }

    #[test]
    fn verification_violations() {
        let h = ColouredKGraph::from_fn(3, 7, |x| Some(if x.contains(6) { Colour::Blue } else { Colour::Red })).unwrap();
        let dec = TightDecomposition::new(&h);
        let ok = Matching::new(vec![e(&[0, 1, 2])], Colour::Red, dec.component_of(e(&[0, 1, 2])).unwrap());
        assert_eq!(verify_matching(&h, &dec, &ok), Ok(()));
        let shared = Matching::new(vec![e(&[0, 1, 2]), e(&[2, 3, 4])], Colour::Red, ok.component);
        assert!(matches!(verify_matching(&h, &dec, &shared), Err(Violation::Disjointness { vertex: 2, .. })));
        let mut split = ColouredKGraph::new(3, 6).unwrap();
        split.set(e(&[0, 1, 2]), Some(Colour::Red));
        split.set(e(&[3, 4, 5]), Some(Colour::Red));
        let pair = [e(&[0, 1, 2]), e(&[3, 4, 5])];
        assert_eq!(verify_edges(&split, &pair, Colour::Red), Err(Violation::Connectivity { pair: (pair[0], pair[1]) }));
        assert_eq!(verify_edges(&split, &pair, Colour::Blue), Err(Violation::Colour { edge: pair[0] }));
    }

    #[test]
    fn red_complete_k4() {
        let h = ColouredKGraph::complete(4, 8, Colour::Red).unwrap();
        let (bundle, trace) = two_matchings_k4(&h, &PipelineParams::default()).unwrap();
        assert_eq!(bundle.matchings.len(), 1);
        assert_eq!(bundle.matchings[0].colour, Colour::Red);
        assert_eq!(bundle.matchings[0].len(), 2);
        assert_eq!(bundle.coverage(), 8);
        assert_eq!(trace.termination, "completed");
    }

    #[test]
    fn blue_complete_k5() {
        let h = ColouredKGraph::complete(5, 10, Colour::Blue).unwrap();
        let (bundle, _) = four_matchings_k5(&h, &PipelineParams::default()).unwrap();
        assert_eq!(bundle.matchings.len(), 1);
        assert_eq!(bundle.matchings[0].colour, Colour::Blue);
        assert_eq!(bundle.matchings[0].len(), 2);
    }

    #[test]
    fn empty_host() {
        let h = ColouredKGraph::new(4, 9).unwrap();
        let (bundle, trace) = two_matchings_k4(&h, &PipelineParams::default()).unwrap();
        assert!(bundle.matchings.is_empty());
        assert_eq!(trace.termination, "no blueprint edges");
        assert!(two_matchings_k4(&ColouredKGraph::new(3, 5).unwrap(), &PipelineParams::default()).is_err());
    }
}
