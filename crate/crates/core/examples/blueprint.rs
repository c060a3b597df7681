//! Blueprint of a random colouring of K_24^(4) with its BP1/BP2 audit, and
//! the blueprint of the parity colouring.

use hypermatch::blueprint::build_blueprint;
use hypermatch::extremal::parity_colouring;
use hypermatch::harness::{random_colouring, RandomModel};
use hypermatch::{Colour, Rational, TightDecomposition};

fn main() -> hypermatch::Result<()> {
    let eps = Rational::new(1, 10_000);
    let h = random_colouring(&RandomModel::complete(4, 24, 0.5, 1))?;
    let dec = TightDecomposition::new(&h);
    let bp = build_blueprint(&h, &dec, eps)?;
    println!("{} tight components, {} blueprint pairs", dec.len(), bp.graph.edge_count());
    println!("stats: {:?}", bp.stats);
    println!("BP1 failures: {}, BP2 failures: {}", bp.bp1_violations(&h, &dec).len(), bp.bp2_violations(&bp.graph).len());
    for (e, id) in bp.induced.iter().take(5) {
        println!("  {e} {:?} -> component {id}, witness order {}", bp.colour(*e), bp.witness[e].len());
    }

    // pairs meeting A once are red, the others blue
    let p = parity_colouring(4, 10, 4)?;
    let pdec = TightDecomposition::new(&p);
    let pbp = build_blueprint(&p, &pdec, eps)?;
    println!(
        "parity(4, 10, 4): {} red and {} blue pairs",
        pbp.graph.colour_count(Colour::Red),
        pbp.graph.colour_count(Colour::Blue)
    );
    Ok(())
}
