//! The density predicate, its consequences and the bad-set cascade.

use hypermatch::density::{assert_dense_consequences, dense_subgraph, is_dense, DensityParams};
use hypermatch::{Colour, ColouredKGraph, Edge, Rational};

fn main() -> hypermatch::Result<()> {
    let mut h = ColouredKGraph::complete(3, 20, Colour::Red)?;
    // thin out the pair {0, 1}
    for v in (2..20).step_by(2) {
        h.remove(Edge::new(&[0, 1, v])?);
    }

    let params = DensityParams::new(Rational::new(7, 10), Rational::new(1, 100))?;
    let report = is_dense(&h, params);
    println!("(7/10, 1/100)-dense: {}", report.dense);
    for level in &report.levels {
        println!("  {}-sets: need degree {}, {} below it", level.size, level.min_degree, level.below.len());
    }

    let loose = DensityParams::new(Rational::new(2, 5), Rational::new(1, 100))?;
    if is_dense(&h, loose).dense {
        let c = assert_dense_consequences(&h, loose)?;
        println!("(2/5, 1/100)-dense: {} edges >= {}, {} tight component(s)", c.edge_count, c.edge_bound, c.uncoloured_components);
    }

    let alpha = Rational::new(9, 100);
    let out = dense_subgraph(&h, alpha)?;
    let r = &out.report;
    println!("cleaning at alpha = {alpha}: bad pairs {:?}, removed {} edges", r.bad[1], r.removed.len());
    println!("guarantee ({:.3}, {:.3}), vacuous = {}", r.guaranteed_mu, r.guaranteed_alpha, r.vacuous);
    Ok(())
}
