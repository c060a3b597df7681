//! Maximum-weight fractional matchings whose support lies in a few
//! monochromatic tight components, with a floor `β` on every positive weight.
//!
//! For a fixed selection of components the problem is
//! `max Σ w(e)` subject to vertex loads at most 1 and `w(e) ∈ {0} ∪ [β, 1]`.
//! [`max_constrained_fractional_matching`] solves it by branch and bound on
//! edge supports over an exact LP relaxation; [`exhaustive_support_optimum`]
//! enumerates supports outright and exists as a reference.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::components::{ComponentId, TightDecomposition};
use crate::edge::{Colour, Edge, VertexSet};
use crate::error::{param, Result};
use crate::graph::ColouredKGraph;
use crate::numeric::{fraction_string, Rational};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

const AUTOMORPHISM_LIMIT: usize = 50_000;
const QUICK_NODES: usize = 64;

/// Which component selections are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Selection {
    /// Any `s` monochromatic tight components, of either colour.
    AnyS(usize),
    /// One red and one blue tight component.
    RedBluePair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Optimality {
    Exact,
    /// The node budget ran out; the weight is attained but may not be optimal.
    LowerBound,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FractionalMatching {
    pub weights: BTreeMap<Edge, Rational>,
}

impl FractionalMatching {
    pub fn weight(&self) -> Rational {
        self.weights.values().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn load(&self, v: usize) -> Rational {
        self.weights.iter().filter(|(e, _)| e.contains(v)).fold(Rational::zero(), |acc, (_, w)| acc + w)
    }

    /// Checks vertex loads, the `β` floor and that `allowed` holds on the support.
    pub fn is_valid(&self, beta: Rational, allowed: impl Fn(Edge) -> bool) -> bool {
        let mut verts = VertexSet::new();
        for (&e, w) in &self.weights {
            if *w < beta || *w > Rational::one() || !allowed(e) {
                return false;
            }
            verts.extend(e.iter());
        }
        let within = verts.iter().all(|v| self.load(v) <= Rational::one());
        within
    }
}

impl Serialize for FractionalMatching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            edge: Edge,
            weight: String,
        }
        s.collect_seq(self.weights.iter().map(|(&edge, &w)| Entry { edge, weight: fraction_string(w) }))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MuResult {
    #[serde(serialize_with = "crate::density::ser_rational")]
    pub weight: Rational,
    pub assignment: FractionalMatching,
    pub components_used: Vec<ComponentId>,
    pub optimality: Optimality,
    /// Branch-and-bound nodes (or supports, for the exhaustive search) visited.
    pub nodes: usize,
}

impl MuResult {
    fn empty() -> MuResult {
        MuResult {
            weight: Rational::zero(),
            assignment: FractionalMatching::default(),
            components_used: Vec::new(),
            optimality: Optimality::Exact,
            nodes: 0,
        }
    }
}

/// Admissible selections in lexicographic order of component ids.
pub fn selections(dec: &TightDecomposition, mode: Selection) -> Result<Vec<Vec<ComponentId>>> {
    let ids: Vec<ComponentId> = (0..dec.len()).collect();
    match mode {
        Selection::AnyS(0) => param("s must be at least 1"),
        Selection::AnyS(s) => {
            let mut out = Vec::new();
            crate::combin::for_each_combination(&ids, s.min(ids.len()), |c| out.push(c.to_vec()));
            Ok(out)
        }
        Selection::RedBluePair => {
            let of = |c: Colour| ids.iter().copied().filter(|&i| dec.info(i).colour == c).collect::<Vec<_>>();
            let (red, blue) = (of(Colour::Red), of(Colour::Blue));
            // a missing colour leaves single-component selections
            Ok(match (red.is_empty(), blue.is_empty()) {
                (true, _) => blue.into_iter().map(|b| vec![b]).collect(),
                (false, true) => red.into_iter().map(|r| vec![r]).collect(),
                _ => red.iter().flat_map(|&r| blue.iter().map(move |&b| vec![r.min(b), r.max(b)])).collect(),
            })
        }
    }
}

fn check_beta(beta: Rational) -> Result<()> {
    if beta <= Rational::zero() || beta > Rational::one() {
        return param(format!("beta = {} must lie in (0, 1]", fraction_string(beta)));
    }
    Ok(())
}

/// `max Σ x` subject to `A x ≤ b`, `x ≥ 0`, where column `j` of `A` is the
/// 0/1 indicator of `cols[j]` and `b` is a nonnegative integer vector.
///
/// Integer-preserving tableau: every entry is an integer over the common
/// denominator `d`, the last pivot, and each update divides exactly.
/// Bland's rule prevents cycling. Returns the optimum and `x`.
pub(crate) fn simplex(rows: usize, cols: &[Vec<usize>], b: &[i64]) -> (Rational, Vec<Rational>) {
    let nv = cols.len();
    let width = nv + rows + 1;
    let rhs = width - 1;
    // rows 0..rows are constraints, row `rows` is the objective
    let mut t = vec![vec![0i64; width]; rows + 1];
    for (j, col) in cols.iter().enumerate() {
        for &r in col {
            t[r][j] = 1;
        }
        t[rows][j] = 1;
    }
    for r in 0..rows {
        t[r][nv + r] = 1;
        debug_assert!(b[r] >= 0);
        t[r][rhs] = b[r];
    }
    let mut basis: Vec<usize> = (nv..nv + rows).collect();
    let mut d = 1i64;
    while let Some(enter) = (0..nv + rows).find(|&j| t[rows][j] > 0) {
        let mut leave: Option<usize> = None;
        for r in 0..rows {
            if t[r][enter] <= 0 {
                continue;
            }
            leave = match leave {
                None => Some(r),
                Some(q) => {
                    let (lhs, cur) = (t[r][rhs] * t[q][enter], t[q][rhs] * t[r][enter]);
                    if lhs < cur || (lhs == cur && basis[r] < basis[q]) {
                        Some(r)
                    } else {
                        Some(q)
                    }
                }
            };
        }
        let p = leave.expect("every column meets a vertex row, so the LP is bounded");
        let a = t[p][enter];
        let prow = t[p].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r == p {
                continue;
            }
            let f = row[enter];
            for (x, &y) in row.iter_mut().zip(&prow) {
                let num = a
                    .checked_mul(*x)
                    .zip(f.checked_mul(y))
                    .and_then(|(u, v)| u.checked_sub(v))
                    .expect("simplex entries overflow i64");
                debug_assert_eq!(num % d, 0);
                *x = if d == 1 { num } else { num / d };
            }
        }
        d = a;
        basis[p] = enter;
    }
    let mut x = vec![Rational::zero(); nv];
    for (r, &j) in basis.iter().enumerate() {
        if j < nv {
            x[j] = Rational::new(t[r][rhs] as i128, d as i128);
        }
    }
    (Rational::new(-t[rows][rhs] as i128, d as i128), x)
}

/// The edges of one selection, with vertices renumbered densely.
struct Instance {
    edges: Vec<Edge>,
    rows: Vec<Vec<usize>>,
    n: usize,
}

impl Instance {
    fn new(edges: Vec<Edge>) -> Instance {
        let mut verts = VertexSet::new();
        for e in &edges {
            verts.extend(e.iter());
        }
        let index: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let rows = edges.iter().map(|e| e.iter().map(|v| index[&v]).collect()).collect();
        Instance { edges, rows, n: verts.len() }
    }

    /// LP over edges not switched off, with `on` edges shifted to `w ≥ β`.
    /// `None` when the `on` edges already overload a vertex.
    fn relax(&self, state: &[State], beta: Rational) -> Option<(Rational, Vec<Rational>)> {
        // scale by the denominator of β so the right-hand side is integral
        let (p, q) = (*beta.numer() as i64, *beta.denom() as i64);
        let mut b = vec![q; self.n];
        let mut vars = Vec::new();
        let mut cols = Vec::new();
        let mut on = 0;
        for (j, s) in state.iter().enumerate() {
            match s {
                State::Off => continue,
                State::On => {
                    on += 1;
                    for &r in &self.rows[j] {
                        b[r] -= p;
                    }
                }
                State::Free => {}
            }
            vars.push(j);
            cols.push(self.rows[j].clone());
        }
        if b.iter().any(|&x| x < 0) {
            return None;
        }
        let (value, x) = simplex(self.n, &cols, &b);
        let scale = Rational::from_integer(q as i128);
        let mut w = vec![Rational::zero(); self.edges.len()];
        for (i, &j) in vars.iter().enumerate() {
            w[j] = x[i] / scale + if state[j] == State::On { beta } else { Rational::zero() };
        }
        Some((value / scale + beta * Rational::from_integer(on), w))
    }

    /// Vertex permutations preserving the edge set, acting on edge indices,
    /// found by backtracking with degree pruning. At most `limit` are
    /// returned; any subset of automorphisms is sound for orbital branching.
    fn automorphisms(&self, limit: usize) -> Vec<Vec<usize>> {
        let identity = vec![(0..self.edges.len()).collect()];
        if self.n > 64 || self.edges.is_empty() {
            return identity;
        }
        let mask = |r: &[usize]| r.iter().fold(0u64, |m, &v| m | 1 << v);
        let index: HashMap<u64, usize> = self.rows.iter().enumerate().map(|(j, r)| (mask(r), j)).collect();
        let mut degree = vec![0usize; self.n];
        // edges whose largest vertex is i become checkable once i is mapped
        let mut closing = vec![Vec::new(); self.n];
        for (j, r) in self.rows.iter().enumerate() {
            for &v in r {
                degree[v] += 1;
            }
            closing[*r.iter().max().expect("edges are nonempty")].push(j);
        }
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; self.n];
        let mut taken = vec![false; self.n];
        self.extend_automorphism(0, &mut image, &mut taken, &degree, &closing, &index, limit, &mut out);
        if out.is_empty() {
            identity
        } else {
            out
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_automorphism(
        &self,
        i: usize,
        image: &mut [usize],
        taken: &mut [bool],
        degree: &[usize],
        closing: &[Vec<usize>],
        index: &HashMap<u64, usize>,
        limit: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == self.n {
            let perm = self
                .rows
                .iter()
                .map(|r| index[&r.iter().fold(0u64, |m, &v| m | 1 << image[v])])
                .collect();
            out.push(perm);
            return;
        }
        for t in 0..self.n {
            if taken[t] || degree[t] != degree[i] {
                continue;
            }
            image[i] = t;
            let fits = closing[i]
                .iter()
                .all(|&j| index.contains_key(&self.rows[j].iter().fold(0u64, |m, &v| m | 1 << image[v])));
            if fits {
                taken[t] = true;
                self.extend_automorphism(i + 1, image, taken, degree, closing, index, limit, out);
                taken[t] = false;
            }
        }
        image[i] = usize::MAX;
    }

    fn matching(&self, w: &[Rational]) -> FractionalMatching {
        FractionalMatching {
            weights: self.edges.iter().zip(w).filter(|(_, x)| !x.is_zero()).map(|(&e, &x)| (e, x)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Free,
    On,
    Off,
}

struct Best {
    weight: Rational,
    assignment: FractionalMatching,
    ids: Vec<ComponentId>,
}

fn selection_edges(h: &ColouredKGraph, dec: &TightDecomposition, ids: &[ComponentId]) -> Vec<Edge> {
    let mut edges: Vec<Edge> = ids.iter().flat_map(|&id| dec.edges_of(h, id)).collect();
    edges.sort_unstable();
    edges
}

struct Search {
    nodes: usize,
    closed: bool,
    /// Strictly better than the starting incumbent, if any.
    found: Option<(Rational, FractionalMatching)>,
}

/// Depth-first branch and bound on one selection. `group` lists edge
/// permutations preserving the selection; it may be empty.
fn search(inst: &Instance, beta: Rational, mut incumbent: Rational, group: &[Vec<usize>], limit: usize) -> Search {
    let mut out = Search { nodes: 0, closed: true, found: None };
    let mut stack = vec![(vec![State::Free; inst.edges.len()], (0..group.len()).collect::<Vec<_>>())];
    while let Some((state, sym)) = stack.pop() {
        if out.nodes >= limit {
            out.closed = false;
            break;
        }
        out.nodes += 1;
        let Some((bound, w)) = inst.relax(&state, beta) else { continue };
        if bound <= incumbent {
            continue;
        }
        // the free edge closest to the floor from below
        let split = (0..w.len())
            .filter(|&j| state[j] == State::Free && !w[j].is_zero() && w[j] < beta)
            .max_by(|&a, &b| w[a].cmp(&w[b]).then(b.cmp(&a)));
        let Some(j) = split else {
            incumbent = bound;
            out.found = Some((bound, inst.matching(&w)));
            continue;
        };
        // orbital branching: either j is on, or its whole orbit is off
        let mut off = state.clone();
        off[j] = State::Off;
        for &g in &sym {
            off[group[g][j]] = State::Off;
        }
        let mut on = state;
        on[j] = State::On;
        let keep = |st: &[State]| -> Vec<usize> {
            sym.iter().copied().filter(|&g| (0..st.len()).all(|i| st[group[g][i]] == st[i])).collect()
        };
        let (off_sym, on_sym) = (keep(&off), keep(&on));
        stack.push((off, off_sym));
        stack.push((on, on_sym));
    }
    out
}

/// Branch and bound over supports; the total node count is capped by `budget`.
pub fn max_constrained_fractional_matching_with(
    h: &ColouredKGraph,
    mode: Selection,
    beta: Rational,
    budget: usize,
) -> Result<MuResult> {
    check_beta(beta)?;
    let dec = TightDecomposition::new(h);
    let choices = selections(&dec, mode)?;
    let mut result = MuResult::empty();
    let mut best: Option<Best> = None;
    for ids in choices {
        let inst = Instance::new(selection_edges(h, &dec, &ids));
        let floor = best.as_ref().map(|b| b.weight).unwrap_or_else(Rational::zero);
        // symmetry only pays off for selections that do not close quickly
        let quick = search(&inst, beta, floor, &[], QUICK_NODES.min(budget - result.nodes));
        result.nodes += quick.nodes;
        let mut outcome = quick.found.clone();
        let mut closed = quick.closed;
        if !closed && result.nodes < budget {
            let group = inst.automorphisms(AUTOMORPHISM_LIMIT);
            let start = quick.found.as_ref().map_or(floor, |(w, _)| *w);
            let full = search(&inst, beta, start, &group, budget - result.nodes);
            result.nodes += full.nodes;
            closed = full.closed;
            if full.found.is_some() {
                outcome = full.found;
            }
        }
        if let Some((weight, assignment)) = outcome {
            best = Some(Best { weight, assignment, ids });
        }
        if !closed {
            result.optimality = Optimality::LowerBound;
            break;
        }
    }
    if let Some(b) = best {
        result.weight = b.weight;
        result.assignment = b.assignment;
        result.components_used = b.ids;
    }
    Ok(result)
}

pub fn max_constrained_fractional_matching(h: &ColouredKGraph, mode: Selection, beta: Rational) -> Result<MuResult> {
    max_constrained_fractional_matching_with(h, mode, beta, DEFAULT_NODE_BUDGET)
}

/// Largest selection the exhaustive search accepts.
pub const EXHAUSTIVE_EDGE_LIMIT: usize = 40;

/// Enumerates every support with all vertex degrees at most `1/β` and solves
/// the LP with the whole support forced to `w ≥ β`. Exponential.
pub fn exhaustive_support_optimum(h: &ColouredKGraph, mode: Selection, beta: Rational) -> Result<MuResult> {
    check_beta(beta)?;
    let dec = TightDecomposition::new(h);
    let mut result = MuResult::empty();
    for ids in selections(&dec, mode)? {
        let (weight, assignment, visited) = exhaustive_edge_set_optimum(&selection_edges(h, &dec, &ids), beta)?;
        result.nodes += visited;
        if weight > result.weight {
            result.weight = weight;
            result.assignment = assignment;
            result.components_used = ids;
        }
    }
    Ok(result)
}

/// The support enumeration on an explicit edge set (any uniformity).
/// Returns the optimum, an optimal assignment and the supports visited.
pub fn exhaustive_edge_set_optimum(edges: &[Edge], beta: Rational) -> Result<(Rational, FractionalMatching, usize)> {
    check_beta(beta)?;
    if edges.len() > EXHAUSTIVE_EDGE_LIMIT {
        return param(format!(
            "selection has {} edges; exhaustive search supports at most {EXHAUSTIVE_EDGE_LIMIT}",
            edges.len()
        ));
    }
    let mut edges = edges.to_vec();
    edges.sort_unstable();
    edges.dedup();
    let inst = Instance::new(edges);
    let cap = (Rational::one() / beta).floor().to_integer() as usize;
    let mut state = vec![State::Off; inst.edges.len()];
    let mut degree = vec![0usize; inst.n];
    let mut best = None;
    let mut visited = 0;
    support_search(&inst, beta, cap, 0, &mut state, &mut degree, &mut visited, &mut best);
    let (w, m) = best.expect("the empty support is always visited");
    Ok((w, m, visited))
}

#[allow(clippy::too_many_arguments)]
fn support_search(
    inst: &Instance,
    beta: Rational,
    cap: usize,
    from: usize,
    state: &mut [State],
    degree: &mut [usize],
    visited: &mut usize,
    best: &mut Option<(Rational, FractionalMatching)>,
) {
    *visited += 1;
    // every variable is forced on, so the relaxation is the support's own LP
    let (weight, w) = inst.relax(state, beta).expect("degree cap keeps the floor feasible");
    if best.as_ref().is_none_or(|(b, _)| weight > *b) {
        *best = Some((weight, inst.matching(&w)));
    }
    for j in from..inst.edges.len() {
        if inst.rows[j].iter().any(|&r| degree[r] == cap) {
            continue;
        }
        state[j] = State::On;
        for &r in &inst.rows[j] {
            degree[r] += 1;
        }
        support_search(inst, beta, cap, j + 1, state, degree, visited, best);
        for &r in &inst.rows[j] {
            degree[r] -= 1;
        }
        state[j] = State::Off;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    fn graph(k: usize, n: usize, edges: &[(&[usize], Colour)]) -> ColouredKGraph {
        let mut h = ColouredKGraph::new(k, n).unwrap();
        for (e, c) in edges {
            h.set(Edge::new(e).unwrap(), Some(*c));
        }
        h
    }

    #[test]
    fn simplex_small() {
        // max x0 + x1 + x2, each pair of variables shares a unit row
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let (v, x) = simplex(3, &cols, &[1; 3]);
        assert_eq!(v, q(3, 2));
        assert!(x.iter().all(|y| *y == q(1, 2)));
    }

    /// Best feasible vertex of `{A x ≤ b, x ≥ 0}` by trying every choice of
    /// `nv` tight constraints.
    fn vertex_enumeration(rows: usize, cols: &[Vec<usize>], b: &[i64]) -> Rational {
        let nv = cols.len();
        // constraint i < rows is row i of A; i >= rows is -x_{i-rows} <= 0
        let coef = |i: usize, j: usize| -> Rational {
            if i < rows {
                Rational::from_integer(cols[j].contains(&i) as i128)
            } else {
                Rational::from_integer(-((i - rows == j) as i128))
            }
        };
        let rhs = |i: usize| if i < rows { Rational::from_integer(b[i] as i128) } else { Rational::zero() };
        let mut best = Rational::zero();
        let all: Vec<usize> = (0..rows + nv).collect();
        crate::combin::for_each_combination(&all, nv, |tight| {
            let mut m: Vec<Vec<Rational>> =
                tight.iter().map(|&i| (0..nv).map(|j| coef(i, j)).chain([rhs(i)]).collect()).collect();
            for c in 0..nv {
                let Some(p) = (c..nv).find(|&r| !m[r][c].is_zero()) else { return };
                m.swap(c, p);
                let pivot = m[c][c];
                for x in m[c].iter_mut() {
                    *x /= pivot;
                }
                for r in 0..nv {
                    if r != c {
                        let f = m[r][c];
                        let row = m[c].clone();
                        for (x, y) in m[r].iter_mut().zip(row) {
                            *x -= f * y;
                        }
                    }
                }
            }
            let x: Vec<Rational> = m.iter().map(|row| row[nv]).collect();
            let feasible = (0..rows + nv)
                .all(|i| (0..nv).fold(Rational::zero(), |acc, j| acc + coef(i, j) * x[j]) <= rhs(i));
            let value = x.iter().fold(Rational::zero(), |acc, y| acc + y);
            if feasible && value > best {
                best = value;
            }
        });
        best
    }

    proptest::proptest! {
        #[test]
        fn simplex_matches_vertex_enumeration(
            rows in 1usize..5,
            raw in proptest::collection::vec(proptest::collection::vec(0usize..5, 1..4), 1..5),
            b in proptest::collection::vec(0i64..4, 5),
        ) {
            let cols: Vec<Vec<usize>> = raw
                .into_iter()
                .map(|c| {
                    let mut c: Vec<usize> = c.into_iter().map(|r| r % rows).collect();
                    c.sort_unstable();
                    c.dedup();
                    c
                })
                .collect();
            let (value, x) = simplex(rows, &cols, &b[..rows]);
            proptest::prop_assert_eq!(value, vertex_enumeration(rows, &cols, &b[..rows]));
            proptest::prop_assert_eq!(value, x.iter().fold(Rational::zero(), |acc, y| acc + y));
            for r in 0..rows {
                let load = cols.iter().zip(&x).filter(|(c, _)| c.contains(&r)).fold(Rational::zero(), |acc, (_, y)| acc + y);
                proptest::prop_assert!(load <= Rational::from_integer(b[r] as i128));
            }
        }
    }

    #[test]
    fn single_edge_and_pairs() {
        let h = graph(3, 3, &[(&[0, 1, 2], Colour::Red)]);
        let r = max_constrained_fractional_matching(&h, Selection::AnyS(1), q(1, 1)).unwrap();
        assert_eq!(r.weight, q(1, 1));
        let h = graph(3, 6, &[(&[0, 1, 2], Colour::Red), (&[3, 4, 5], Colour::Blue)]);
        let r = max_constrained_fractional_matching(&h, Selection::RedBluePair, q(1, 1)).unwrap();
        assert_eq!(r.weight, q(2, 1));
        assert_eq!(r.components_used, vec![0, 1]);
        let r = max_constrained_fractional_matching(&h, Selection::AnyS(1), q(1, 1)).unwrap();
        assert_eq!((r.weight, r.components_used), (q(1, 1), vec![0]));
    }

    #[test]
    fn floor_matters_on_k4() {
        let h = ColouredKGraph::complete(3, 4, Colour::Red).unwrap();
        let third = max_constrained_fractional_matching(&h, Selection::AnyS(1), q(1, 3)).unwrap();
        assert_eq!(third.weight, q(4, 3));
        assert_eq!(third.assignment.weights.len(), 4);
        assert!(third.assignment.is_valid(q(1, 3), |e| h.colour(e).is_some()));
        let half = max_constrained_fractional_matching(&h, Selection::AnyS(1), q(1, 2)).unwrap();
        assert_eq!(half.weight, q(1, 1));
        assert_eq!(exhaustive_support_optimum(&h, Selection::AnyS(1), q(1, 2)).unwrap().weight, q(1, 1));
        assert_eq!(exhaustive_support_optimum(&h, Selection::AnyS(1), q(1, 3)).unwrap().weight, q(4, 3));
    }

    #[test]
    fn empty_and_bad_input() {
        let h = ColouredKGraph::new(3, 5).unwrap();
        let r = max_constrained_fractional_matching(&h, Selection::RedBluePair, q(1, 2)).unwrap();
        assert_eq!(r.weight, Rational::zero());
        assert!(r.assignment.weights.is_empty());
        assert!(max_constrained_fractional_matching(&h, Selection::AnyS(0), q(1, 2)).is_err());
        assert!(max_constrained_fractional_matching(&h, Selection::AnyS(1), q(0, 1)).is_err());
        assert!(max_constrained_fractional_matching(&h, Selection::AnyS(1), q(3, 2)).is_err());
    }

    #[test]
    fn budget_gives_lower_bound() {
        let h = ColouredKGraph::complete(3, 7, Colour::Red).unwrap();
        let r = max_constrained_fractional_matching_with(&h, Selection::AnyS(1), q(1, 3), 0).unwrap();
        assert_eq!((r.optimality, r.weight), (Optimality::LowerBound, Rational::zero()));
        let full = max_constrained_fractional_matching(&h, Selection::AnyS(1), q(1, 3)).unwrap();
        assert_eq!(full.optimality, Optimality::Exact);
        assert_eq!(full.weight, q(7, 3));
    }
}
