//! The `(μ, α)`-density predicate, its edge-count and connectivity
//! consequences, and the bad-set cascade that extracts a dense subgraph.
//!
//! A k-graph on `n` vertices is `(μ, α)`-dense when, for each `i` in
//! `1..k`, all but at most `α·C(n,i)` of the `i`-sets have degree at least
//! `μ·C(n,k−i)`, and each of those remaining sets has degree exactly 0.

use serde::Serialize;

use crate::combin::{binom, Subsets};
use crate::components::TightDecomposition;
use crate::edge::Edge;
use crate::error::{Error, Result};
use crate::graph::{ColouredKGraph, SetCounter};
use crate::numeric::{at_least, at_most, ceil_times, floor_times, to_f64, unit_interval, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DensityParams {
    #[serde(serialize_with = "ser_rational")]
    pub mu: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::numeric::fraction_string(*q))
}

impl DensityParams {
    pub fn new(mu: Rational, alpha: Rational) -> Result<DensityParams> {
        Ok(DensityParams { mu: unit_interval("mu", mu)?, alpha: unit_interval("alpha", alpha)? })
    }
}

/// Per-level thresholds: how large a degree must be, and how many sets may
/// fall short (`None` when not even zero sets are allowed).
#[derive(Clone, Copy, Debug)]
enum Bounds {
    Exact(DensityParams),
    Real { mu: f64, alpha: f64 },
}

impl Bounds {
    fn min_degree(&self, n: usize, k: usize, i: usize) -> u128 {
        let c = binom(n, k - i);
        match *self {
            Bounds::Exact(p) => ceil_times(p.mu, c),
            Bounds::Real { mu, .. } => at_least(mu * c as f64) as u128,
        }
    }

    fn budget(&self, n: usize, i: usize) -> Option<u128> {
        let c = binom(n, i);
        match *self {
            Bounds::Exact(p) => Some(floor_times(p.alpha, c)),
            Bounds::Real { alpha, .. } => at_most(alpha * c as f64).map(u128::from),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    /// Size `i` of the sets on this level.
    pub size: usize,
    pub min_degree: u128,
    /// Number of sets allowed below `min_degree`.
    pub budget: Option<u128>,
    /// Every `i`-set with degree below `min_degree`, with its degree.
    pub below: Vec<(Edge, u64)>,
    /// How many of `below` have positive degree (each one breaks density).
    pub positive: usize,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub dense: bool,
    pub k: usize,
    pub n: usize,
    pub levels: Vec<LevelReport>,
}

fn evaluate(h: &ColouredKGraph, bounds: Bounds) -> DensityReport {
    let k = h.k();
    let n = h.order();
    let verts = h.vertices().to_vec();
    let mut levels = Vec::new();
    for i in 1..k {
        let degrees = h.subset_degrees(i, None);
        let min_degree = bounds.min_degree(n, k, i);
        let budget = bounds.budget(n, i);
        let below: Vec<(Edge, u64)> = Subsets::new(verts.clone(), i)
            .map(|s| (s, degrees.get(s) as u64))
            .filter(|&(_, d)| (d as u128) < min_degree)
            .collect();
        let positive = below.iter().filter(|&&(_, d)| d > 0).count();
        let over = match budget {
            Some(b) => below.len() as u128 > b,
            None => true,
        };
        levels.push(LevelReport { size: i, min_degree, budget, positive, violated: positive > 0 || over, below });
    }
    DensityReport { dense: levels.iter().all(|l| !l.violated), k, n, levels }
}

/// Exact density check by enumerating every `i`-set, `1 <= i < k`.
pub fn is_dense(h: &ColouredKGraph, params: DensityParams) -> DensityReport {
    evaluate(h, Bounds::Exact(params))
}

/// Density check against real-valued parameters (rounded by the crate's
/// threshold rule).
pub fn is_dense_real(h: &ColouredKGraph, mu: f64, alpha: f64) -> DensityReport {
    evaluate(h, Bounds::Real { mu, alpha })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsequenceReport {
    pub edge_count: usize,
    /// `(μ − α)·C(n, k)`.
    #[serde(serialize_with = "ser_rational")]
    pub edge_bound: Rational,
    pub edge_bound_holds: bool,
    /// Whether `μ > 1/2`, so connectivity is implied.
    pub connectivity_implied: bool,
    /// Number of tight components with colours ignored.
    pub uncoloured_components: usize,
    pub connected: bool,
}

/// Checks the edge-count bound and, for `μ > 1/2`, tight connectivity of a
/// graph already known to be dense.
pub fn assert_dense_consequences(h: &ColouredKGraph, params: DensityParams) -> Result<ConsequenceReport> {
    if !is_dense(h, params).dense {
        return Err(Error::Contract(format!(
            "graph is not ({}, {})-dense",
            params.mu, params.alpha
        )));
    }
    let total = binom(h.order(), h.k()) as i128;
    let edge_bound = (params.mu - params.alpha) * Rational::from_integer(total);
    let edge_count = h.edge_count();
    let uncoloured_components = TightDecomposition::uncoloured(h).len();
    let connectivity_implied = params.mu > Rational::new(1, 2);
    Ok(ConsequenceReport {
        edge_count,
        edge_bound,
        edge_bound_holds: Rational::from_integer(edge_count as i128) >= edge_bound,
        connectivity_implied,
        uncoloured_components,
        connected: uncoloured_components <= 1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CascadeReport {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    /// Set when `|H| < (1 − α)·C(n, k)`; the cascade still runs.
    pub below_edge_hypothesis: bool,
    /// `bad[i-1]`: the `i`-sets of degree below `(1 − √α)·C(n, k−i)`.
    pub bad: Vec<Vec<Edge>>,
    /// `cascade[i-1]`: the closure `𝒜_i`.
    pub cascade: Vec<Vec<Edge>>,
    /// Edges removed, lexicographically.
    pub removed: Vec<Edge>,
    pub guaranteed_mu: f64,
    pub guaranteed_alpha: f64,
    /// True when `guaranteed_mu <= 0`, so the density guarantee says nothing.
    pub vacuous: bool,
    /// Density of the output against the guaranteed parameters.
    pub check: DensityReport,
}

pub struct DenseSubgraph {
    pub graph: ColouredKGraph,
    pub report: CascadeReport,
}

/// Removes every edge containing a member of the bad-set cascade.
pub fn dense_subgraph(h: &ColouredKGraph, alpha: Rational) -> Result<DenseSubgraph> {
    unit_interval("alpha", alpha)?;
    let k = h.k();
    let n = h.order();
    let af = to_f64(alpha);
    let below_edge_hypothesis = Rational::from_integer(h.edge_count() as i128)
        < (Rational::from_integer(1) - alpha) * Rational::from_integer(binom(n, k) as i128);
    let verts = h.vertices().to_vec();
    let bound = h.label_bound();

    let levels = k.saturating_sub(1);
    let mut bad: Vec<Vec<Edge>> = vec![Vec::new(); levels];
    for i in 1..k {
        let degrees = h.subset_degrees(i, None);
        let threshold = at_least((1.0 - af.sqrt()) * binom(n, k - i) as f64);
        bad[i - 1] = Subsets::new(verts.clone(), i).filter(|&s| (degrees.get(s) as u64) < threshold).collect();
    }

    // 𝒜_{k−1} = ℬ_{k−1}; 𝒜_{j−1} = ℬ_{j−1} ∪ {X : d_{𝒜_j}(X) ≥ β^{1/2} n}
    let beta = af.powf(1.0 / (2.0 * k as f64));
    let pull = at_least(beta.sqrt() * n as f64) as u32;
    let mut cascade: Vec<Vec<Edge>> = vec![Vec::new(); levels];
    if levels > 0 {
        cascade[levels - 1] = bad[levels - 1].clone();
        for j in (2..k).rev() {
            let mut up = SetCounter::new(bound, j - 1);
            for &y in &cascade[j - 1] {
                for x in y.facets() {
                    up.add(x, 1);
                }
            }
            let mut member = SetCounter::new(bound, j - 1);
            for &b in &bad[j - 2] {
                member.add(b, 1);
            }
            cascade[j - 2] = Subsets::new(verts.clone(), j - 1)
                .filter(|&x| member.get(x) > 0 || up.get(x) >= pull.max(1))
                .collect();
        }
    }
    for i in 0..levels {
        assert!(bad[i].iter().all(|b| cascade[i].binary_search(b).is_ok()), "bad sets escape the cascade");
    }

    let mut marked: Vec<SetCounter> = (1..k).map(|i| SetCounter::new(bound, i)).collect();
    for (i, level) in cascade.iter().enumerate() {
        for &s in level {
            marked[i].add(s, 1);
        }
    }
    let mut removed = Vec::new();
    let mut graph = h.clone();
    for (e, _) in h.edges() {
        let hit = (1..k).any(|i| e.subsets(i).into_iter().any(|s| marked[i - 1].get(s) > 0));
        if hit {
            removed.push(e);
            graph.set(e, None);
        }
    }

    let g = af.powf(1.0 / (4.0 * (k * k) as f64));
    let guaranteed_mu = 1.0 - 2.0 * g;
    let guaranteed_alpha = 2.0 * g;
    let check = is_dense_real(&graph, guaranteed_mu, guaranteed_alpha);
    Ok(DenseSubgraph {
        graph,
        report: CascadeReport {
            alpha,
            below_edge_hypothesis,
            bad,
            cascade,
            removed,
            guaranteed_mu,
            guaranteed_alpha,
            vacuous: guaranteed_mu <= 0.0,
            check,
        },
    })
}
