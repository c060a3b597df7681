//! Constrained fractional matchings: branch and bound against the
//! exhaustive support search, for each selection mode and weight floor.

use hypermatch::fracmatch::{exhaustive_support_optimum, max_constrained_fractional_matching, Selection};
use hypermatch::harness::{random_colouring, RandomModel};
use hypermatch::numeric::fraction_string;
use hypermatch::Rational;

fn main() -> hypermatch::Result<()> {
    let h = random_colouring(&RandomModel::complete(3, 7, 0.5, 11))?;
    for mode in [Selection::AnyS(1), Selection::AnyS(2), Selection::RedBluePair] {
        for beta in [Rational::new(1, 1), Rational::new(1, 2), Rational::new(1, 3)] {
            let r = max_constrained_fractional_matching(&h, mode, beta)?;
            let ex = exhaustive_support_optimum(&h, mode, beta)?;
            println!(
                "{mode:?} beta={beta}: {} ({:?}, {} nodes), exhaustive {} over {} supports, components {:?}",
                fraction_string(r.weight),
                r.optimality,
                r.nodes,
                fraction_string(ex.weight),
                ex.nodes,
                r.components_used
            );
        }
    }
    let best = max_constrained_fractional_matching(&h, Selection::AnyS(1), Rational::new(1, 3))?;
    println!("{}", serde_json::to_string(&best.assignment).expect("serialisable"));
    Ok(())
}
