//! Two tightly connected matchings, one per colour, in a random K_40^(4).

use hypermatch::harness::{random_colouring, RandomModel};
use hypermatch::matching::{two_matchings_k4, verify_bundle, PipelineParams};
use hypermatch::TightDecomposition;

fn main() -> hypermatch::Result<()> {
    let h = random_colouring(&RandomModel::complete(4, 40, 0.5, 3))?;
    let (bundle, trace) = two_matchings_k4(&h, &PipelineParams::default())?;
    for m in &bundle.matchings {
        println!("{} matching in component {}: {} edges", m.colour, m.component, m.len());
    }
    println!("covered {}/{}, leftover {:?}", bundle.coverage(), h.order(), bundle.leftover);
    for p in &trace.phases {
        println!("  after {}: {} covered", p.phase, p.covered);
    }
    for note in &trace.notes {
        println!("  note: {note}");
    }
    let dec = TightDecomposition::new(&h);
    println!("verified: {:?}", verify_bundle(&h, &dec, &bundle));
    Ok(())
}
