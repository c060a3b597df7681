//! A small batch through the experiment harness, written as CSV.

use hypermatch::fracmatch::Selection;
use hypermatch::harness::{run_experiment, ExperimentConfig, Pipeline, RandomModel};
use hypermatch::matching::PipelineParams;
use hypermatch::Rational;

fn main() -> hypermatch::Result<()> {
    let k4 = ExperimentConfig {
        model: RandomModel::complete(4, 24, 0.5, 100),
        repetitions: 4,
        pipeline: Pipeline::K4,
        params: PipelineParams::default(),
        jobs: 2,
    };
    print!("{}", run_experiment(&k4)?.to_csv_string(false)?);

    let mu = ExperimentConfig {
        model: RandomModel::complete(3, 6, 0.5, 0),
        repetitions: 5,
        pipeline: Pipeline::Mu { mode: Selection::RedBluePair, beta: Rational::new(1, 2), oracle: true },
        params: PipelineParams::default(),
        jobs: 1,
    };
    let report = run_experiment(&mu)?;
    println!("mu: median {} min {}", report.median, report.min);
    Ok(())
}
