//! The extremal colouring has no red/blue tight cycle partition; a random
//! colouring does. Also evaluates the path and cycle inequalities.

use hypermatch::extremal::{extremal_colouring, partition_inequality_check, verify_two_cycle_partition, Structure, Verdict};
use hypermatch::harness::{random_colouring, RandomModel};
use hypermatch::VertexSet;

fn main() -> hypermatch::Result<()> {
    let h = extremal_colouring(3, 4)?;
    let cert = verify_two_cycle_partition(&h)?;
    println!("extremal(3, 4) on {} vertices: {:?} after {} subsets", h.order(), cert.verdict, cert.stats.subsets);

    let g = random_colouring(&RandomModel::complete(3, 8, 0.5, 2))?;
    if let Verdict::Partition { red, blue } = verify_two_cycle_partition(&g)?.verdict {
        println!("random K_8^(3): red cycle {:?}, blue cycle {:?}", red.order, blue.order);
    }

    let order: Vec<usize> = (0..10).collect();
    let x: VertexSet = [0, 3, 6].into_iter().collect();
    let y = VertexSet::range(10).difference(&x);
    let path = partition_inequality_check(Structure::Path, 3, &x, &y, &order)?;
    println!("tight path, |X| = 3: {} <= {} is {}", path.lhs, path.rhs, path.holds);
    Ok(())
}
