//! At most four tightly connected matchings in a random K_30^(5).

use hypermatch::harness::{random_colouring, RandomModel};
use hypermatch::matching::{four_matchings_k5, verify_bundle, PipelineParams};
use hypermatch::TightDecomposition;

fn main() -> hypermatch::Result<()> {
    let h = random_colouring(&RandomModel::complete(5, 30, 0.5, 4))?;
    let (bundle, trace) = four_matchings_k5(&h, &PipelineParams::default())?;
    for (name, id) in &trace.components {
        println!("{name} = {id:?}");
    }
    for m in &bundle.matchings {
        println!("{} matching in component {}: {} edges", m.colour, m.component, m.len());
    }
    println!("covered {}/{} in {} components", bundle.coverage(), h.order(), bundle.components().len());
    let dec = TightDecomposition::new(&h);
    println!("verified: {:?}", verify_bundle(&h, &dec, &bundle));
    Ok(())
}
