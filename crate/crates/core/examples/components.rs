//! Tight and loose components of a random 2-coloured 3-graph, and a tight
//! walk between two edges of one component.

use hypermatch::components::loose_components;
use hypermatch::harness::{random_colouring, RandomModel};
use hypermatch::{tight_walk, Colour, TightDecomposition};

fn main() -> hypermatch::Result<()> {
    let h = random_colouring(&RandomModel { n: 9, k: 3, missing: 0.6, red: 0.5, seed: 7 })?;
    println!("{} edges on {} vertices ({} red)", h.edge_count(), h.order(), h.colour_count(Colour::Red));

    let dec = TightDecomposition::new(&h);
    for info in dec.components() {
        println!("component {}: {} {} edges, least {}, support {:?}", info.id, info.colour, info.size, info.least_edge, info.support);
    }
    for c in Colour::BOTH {
        let sizes: Vec<usize> = loose_components(&h, c).iter().map(|comp| comp.len()).collect();
        println!("{c} loose components: {sizes:?}");
    }

    let biggest = dec.components().iter().max_by_key(|info| info.size).expect("some edge");
    let edges = dec.edges_of(&h, biggest.id);
    let (f, g) = (edges[0], edges[edges.len() - 1]);
    if let Some(walk) = tight_walk(&h, f, g)? {
        let steps: Vec<String> = walk.iter().map(|e| e.to_string()).collect();
        println!("walk {f} -> {g}: {}", steps.join(" "));
    }
    Ok(())
}
