mod common;

use hypermatch::blueprint::build_blueprint;
use hypermatch::density::{dense_subgraph, is_dense, DensityParams};
use hypermatch::extremal::{partition_inequality_check, Structure};
use hypermatch::fracmatch::{exhaustive_support_optimum, max_constrained_fractional_matching, Optimality, Selection};
use hypermatch::io::{parse_json, parse_text, to_json, to_text};
use hypermatch::matching::{greedy_component_matching, verify_bundle, Matching, MatchingBundle, Violation};
use hypermatch::{Colour, ColouredKGraph, Edge, Rational, TightDecomposition, Vertex, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

/// A random colouring where each k-set is missing with probability `missing`.
fn sparse(k: usize, n: usize, missing: f64, red: f64, seed: u64) -> ColouredKGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ColouredKGraph::from_fn(k, n, |_| {
        if rng.gen_bool(missing) {
            None
        } else {
            Some(if rng.gen_bool(red) { Colour::Red } else { Colour::Blue })
        }
    })
    .unwrap()
}

fn relabel(h: &ColouredKGraph, perm: &[Vertex]) -> ColouredKGraph {
    let mut g = ColouredKGraph::new(h.k(), h.label_bound()).unwrap();
    for (e, c) in h.edges() {
        let image: Vec<Vertex> = e.iter().map(|v| perm[v]).collect();
        g.insert(Edge::new(&image).unwrap(), c).unwrap();
    }
    g
}

fn graph_strategy() -> impl Strategy<Value = ColouredKGraph> {
    (3usize..=4, 0.0f64..0.8, 0.0f64..1.0, any::<u64>())
        .prop_flat_map(|(k, missing, red, seed)| (Just(k), k..=k + 5, Just(missing), Just(red), Just(seed)))
        .prop_map(|(k, n, missing, red, seed)| sparse(k, n, missing, red, seed))
}

fn mode_strategy() -> impl Strategy<Value = Selection> {
    prop_oneof![Just(Selection::AnyS(1)), Just(Selection::AnyS(2)), Just(Selection::RedBluePair)]
}

fn beta_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(Rational::new(1, 1)), Just(Rational::new(1, 2)), Just(Rational::new(1, 3))]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn components_match_the_reference(h in graph_strategy()) {
        let dec = TightDecomposition::new(&h);
        let labels = component_labels(&h, true);
        prop_assert_eq!(dec.len(), component_count(&h, true));
        // same partition of the edges
        for w in labels.windows(2) {
            let (a, b) = (w[0], w[1]);
            prop_assert_eq!(a.2 == b.2, dec.component_of(a.0) == dec.component_of(b.0));
        }
        for &(e, c, l) in &labels {
            let id = dec.component_of(e).unwrap();
            prop_assert_eq!(dec.info(id).colour, c);
            let first = labels.iter().find(|t| t.2 == l).unwrap().0;
            prop_assert_eq!(dec.info(id).least_edge, first);
        }
    }

    #[test]
    fn branch_and_bound_matches_exhaustive(h in graph_strategy(), mode in mode_strategy(), beta in beta_strategy()) {
        prop_assume!(h.edge_count() <= 30);
        let bb = max_constrained_fractional_matching(&h, mode, beta).unwrap();
        let ex = exhaustive_support_optimum(&h, mode, beta).unwrap();
        prop_assert_eq!(bb.optimality, Optimality::Exact);
        prop_assert_eq!(bb.weight, ex.weight);
        let dec = TightDecomposition::new(&h);
        let used = bb.components_used.clone();
        prop_assert!(bb.assignment.is_valid(beta, |e| dec.component_of(e).is_some_and(|id| used.contains(&id))));
    }

    #[test]
    fn optimum_dominates_greedy_matchings(h in graph_strategy(), beta in beta_strategy()) {
        prop_assume!(h.edge_count() <= 40);
        let dec = TightDecomposition::new(&h);
        let best = max_constrained_fractional_matching(&h, Selection::AnyS(1), beta).unwrap();
        for id in 0..dec.len() {
            let m = greedy_component_matching(&h, &dec, id, &VertexSet::new());
            prop_assert!(best.weight >= Rational::from_integer(m.len() as i128));
        }
    }

    #[test]
    fn relabelling_preserves_invariants(h in graph_strategy(), seed in any::<u64>(), beta in beta_strategy()) {
        prop_assume!(h.edge_count() <= 30);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<Vertex> = (0..h.label_bound()).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
        let g = relabel(&h, &perm);
        let (dh, dg) = (TightDecomposition::new(&h), TightDecomposition::new(&g));
        let mut sizes_h: Vec<usize> = dh.components().iter().map(|c| c.size).collect();
        let mut sizes_g: Vec<usize> = dg.components().iter().map(|c| c.size).collect();
        sizes_h.sort();
        sizes_g.sort();
        prop_assert_eq!(sizes_h, sizes_g);
        let params = DensityParams::new(Rational::new(1, 2), Rational::new(1, 10)).unwrap();
        prop_assert_eq!(is_dense(&h, params).dense, is_dense(&g, params).dense);
        for mode in [Selection::AnyS(1), Selection::RedBluePair] {
            let a = max_constrained_fractional_matching(&h, mode, beta).unwrap().weight;
            let b = max_constrained_fractional_matching(&g, mode, beta).unwrap().weight;
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn text_and_json_round_trip(h in graph_strategy()) {
        prop_assert_eq!(parse_text(&to_text(&h)).unwrap(), h.clone());
        prop_assert_eq!(parse_json(&to_json(&h)).unwrap(), h);
    }

    #[test]
    fn density_is_monotone(h in graph_strategy(), mu in 0u32..=20, alpha in 0u32..=20) {
        let p = |mu: u32, alpha: u32| DensityParams::new(Rational::new(mu as i128, 20), Rational::new(alpha as i128, 20)).unwrap();
        if is_dense(&h, p(mu, alpha)).dense {
            prop_assert!(is_dense(&h, p(mu.saturating_sub(1), alpha)).dense);
            prop_assert!(is_dense(&h, p(mu, (alpha + 1).min(20))).dense);
        }
    }

    #[test]
    fn cleaning_matches_the_reference(h in graph_strategy(), root in 1i128..=9) {
        let s = Rational::new(root, 20);
        let out = dense_subgraph(&h, s * s).unwrap();
        let (cascade, removed) = cascade_oracle(&h, s);
        prop_assert_eq!(&out.report.cascade, &cascade);
        prop_assert_eq!(&out.report.removed, &removed);
        prop_assert!(out.graph.edges().all(|(e, c)| h.colour(e) == Some(c)));
        prop_assert_eq!(out.graph.edge_count() + removed.len(), h.edge_count());
        prop_assert_eq!(out.graph.vertices(), h.vertices());
    }

    #[test]
    fn path_and_cycle_inequalities(k in 3usize..=6, len in 4usize..=60, cyclic in any::<bool>(), seed in any::<u64>()) {
        prop_assume!(len >= k + usize::from(cyclic));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = shuffled_labels(&mut rng, len);
        let split = (0..20).find_map(|_| window_bipartition(&mut rng, &order, k, cyclic));
        prop_assume!(split.is_some());
        let (x, y) = split.unwrap();
        let structure = if cyclic { Structure::Cycle } else { Structure::Path };
        let got = partition_inequality_check(structure, k, &x, &y, &order).unwrap();
        prop_assert!(got.holds);
    }

    #[test]
    fn blueprint_subgraphs_keep_bp2(seed in any::<u64>(), keep in 0.1f64..1.0) {
        let h = sparse(4, 12, 0.0, 0.5, seed);
        let dec = TightDecomposition::new(&h);
        let bp = build_blueprint(&h, &dec, Rational::new(1, 10_000)).unwrap();
        prop_assert!(bp.bp2_violations(&bp.graph).is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let sub = bp.graph.filter(|_, _| rng.gen_bool(keep));
        prop_assert!(bp.bp2_violations(&sub).is_empty());
        prop_assert!(bp.bp1_violations(&h, &dec).is_empty());
    }

    #[test]
    fn verifier_rejects_broken_bundles(h in graph_strategy(), pick in any::<prop::sample::Index>()) {
        let dec = TightDecomposition::new(&h);
        prop_assume!(!dec.is_empty());
        let id = pick.index(dec.len());
        let m = greedy_component_matching(&h, &dec, id, &VertexSet::new());
        let good = MatchingBundle::new(&h, vec![m.clone()]);
        prop_assert!(verify_bundle(&h, &dec, &good).is_ok());

        // an edge of the other colour, or a missing k-set
        let k = h.k();
        let verts = h.vertices().to_vec();
        let foreign = hypermatch::combin::combinations(&verts, k)
            .into_iter()
            .find(|&e| h.colour(e) != Some(m.colour) && m.edges.iter().all(|f| f.is_disjoint(e)));
        if let Some(e) = foreign {
            let mut edges = m.edges.clone();
            edges.push(e);
            let bad = MatchingBundle::new(&h, vec![Matching::new(edges, m.colour, m.component)]);
            prop_assert!(verify_bundle(&h, &dec, &bad).is_err());
        }

        // two matchings sharing a vertex
        let first = m.edges[0];
        let twin = Matching::new(vec![first], m.colour, m.component);
        let overlap = MatchingBundle::new(&h, vec![m.clone(), twin]);
        let caught = matches!(verify_bundle(&h, &dec, &overlap), Err(Violation::Overlap { .. } | Violation::Disjointness { .. }));
        prop_assert!(caught);
    }
}
