//! Random instances and batch experiments.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combin::Subsets;
use crate::components::TightDecomposition;
use crate::edge::Colour;
use crate::error::{param, Error, Result};
use crate::fracmatch::{exhaustive_support_optimum, max_constrained_fractional_matching, Optimality, Selection};
use crate::graph::ColouredKGraph;
use crate::matching::{four_matchings_k5, two_matchings_k4, verify_bundle, MatchingBundle, PipelineParams, PipelineTrace};
use crate::numeric::{fraction_string, Rational};

/// Each k-set of `0..n` is present with probability `1 − missing` and then
/// red with probability `red`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomModel {
    pub n: usize,
    pub k: usize,
    pub missing: f64,
    pub red: f64,
    pub seed: u64,
}

impl RandomModel {
    /// Complete host with red probability `red`.
    pub fn complete(k: usize, n: usize, red: f64, seed: u64) -> RandomModel {
        RandomModel { n, k, missing: 0.0, red, seed }
    }

    pub fn with_seed(self, seed: u64) -> RandomModel {
        RandomModel { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("missing", self.missing), ("red", self.red)] {
            if !(0.0..=1.0).contains(&p) {
                return param(format!("{name} probability {p} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Draws a colouring; k-sets are visited in lexicographic order with one
/// presence draw and, if present, one colour draw each.
pub fn random_colouring(model: &RandomModel) -> Result<ColouredKGraph> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut g = ColouredKGraph::new(model.k, model.n)?;
    for e in Subsets::new((0..model.n).collect(), model.k) {
        if !rng.gen_bool(1.0 - model.missing) {
            continue;
        }
        let c = if rng.gen_bool(model.red) { Colour::Red } else { Colour::Blue };
        g.set(e, Some(c));
    }
    Ok(g)
}

/// Bumped whenever the CSV columns change.
pub const FORMAT_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 16] = [
    "format_version",
    "kind",
    "index",
    "seed",
    "n",
    "k",
    "pipeline",
    "coverage",
    "matching_sizes",
    "components",
    "weight",
    "oracle_weight",
    "optimality",
    "median",
    "min",
    "phase_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    K4,
    K5,
    /// Constrained fractional matching; `oracle` also runs the exhaustive search.
    Mu { mode: Selection, beta: Rational, oracle: bool },
}

impl Pipeline {
    pub fn name(&self) -> &'static str {
        match self {
            Pipeline::K4 => "k4",
            Pipeline::K5 => "k5",
            Pipeline::Mu { .. } => "mu",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub model: RandomModel,
    pub repetitions: usize,
    pub pipeline: Pipeline,
    pub params: PipelineParams,
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub coverage: Option<usize>,
    pub matching_sizes: Vec<usize>,
    pub components: usize,
    pub weight: Option<Rational>,
    pub oracle_weight: Option<Rational>,
    pub optimality: Option<Optimality>,
    /// Cumulative time at the end of each phase (a single entry for `mu`).
    pub phases: Vec<Duration>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub pipeline: Pipeline,
    pub rows: Vec<ExperimentRow>,
    /// Median and minimum of coverage, or of weight for `mu`.
    pub median: Rational,
    pub min: Rational,
}

fn median(mut xs: Vec<Rational>) -> Rational {
    xs.sort();
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2]
    } else {
        (xs[m / 2 - 1] + xs[m / 2]) / Rational::from_integer(2)
    }
}

/// Reruns the checks a bundle must pass before it is recorded.
pub fn reverify(h: &ColouredKGraph, bundle: &MatchingBundle, max_matchings: usize) -> Result<()> {
    let dec = TightDecomposition::new(h);
    verify_bundle(h, &dec, bundle).map_err(|v| Error::Verification(format!("{v:?}")))?;
    let components = bundle.components().len();
    if bundle.matchings.len() > max_matchings || components > max_matchings {
        return Err(Error::Verification(format!(
            "{} matchings in {components} components, at most {max_matchings} allowed",
            bundle.matchings.len()
        )));
    }
    Ok(())
}

fn bundle_row(index: usize, seed: u64, h: &ColouredKGraph, bundle: &MatchingBundle, trace: &PipelineTrace) -> ExperimentRow {
    ExperimentRow {
        index,
        seed,
        n: h.order(),
        k: h.k(),
        coverage: Some(bundle.coverage()),
        matching_sizes: bundle.matchings.iter().map(|m| m.len()).collect(),
        components: bundle.components().len(),
        weight: None,
        oracle_weight: None,
        optimality: None,
        phases: trace.phases.iter().map(|p| p.elapsed).collect(),
    }
}

fn run_one(config: &ExperimentConfig, index: usize) -> Result<ExperimentRow> {
    let seed = config.model.seed.wrapping_add(index as u64);
    let h = random_colouring(&config.model.with_seed(seed))?;
    let params = PipelineParams { seed, ..config.params.clone() };
    let fail = |e: Error| Error::Verification(format!("seed {seed}: {e}"));
    match config.pipeline {
        Pipeline::K4 => {
            let (bundle, trace) = two_matchings_k4(&h, &params).map_err(fail)?;
            reverify(&h, &bundle, 2).map_err(fail)?;
            Ok(bundle_row(index, seed, &h, &bundle, &trace))
        }
        Pipeline::K5 => {
            let (bundle, trace) = four_matchings_k5(&h, &params).map_err(fail)?;
            reverify(&h, &bundle, 4).map_err(fail)?;
            Ok(bundle_row(index, seed, &h, &bundle, &trace))
        }
        Pipeline::Mu { mode, beta, oracle } => {
            let start = Instant::now();
            let r = max_constrained_fractional_matching(&h, mode, beta).map_err(fail)?;
            let dec = TightDecomposition::new(&h);
            let inside = |e| dec.component_of(e).is_some_and(|id| r.components_used.contains(&id));
            if !r.assignment.is_valid(beta, inside) || r.assignment.weight() != r.weight {
                return Err(fail(Error::Verification("fractional matching fails its constraints".into())));
            }
            let oracle_weight = if oracle {
                let o = exhaustive_support_optimum(&h, mode, beta).map_err(fail)?;
                if r.optimality == Optimality::Exact && o.weight != r.weight {
                    return Err(fail(Error::Verification(format!(
                        "branch and bound gave {}, support enumeration {}",
                        fraction_string(r.weight),
                        fraction_string(o.weight)
                    ))));
                }
                Some(o.weight)
            } else {
                None
            };
            Ok(ExperimentRow {
                index,
                seed,
                n: h.order(),
                k: h.k(),
                coverage: None,
                matching_sizes: Vec::new(),
                components: r.components_used.len(),
                weight: Some(r.weight),
                oracle_weight,
                optimality: Some(r.optimality),
                phases: vec![start.elapsed()],
            })
        }
    }
}

/// Runs every repetition, up to `jobs` at a time, and re-verifies each
/// result. The first failure in repetition order aborts the batch.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.repetitions == 0 {
        return param("repetitions must be at least 1");
    }
    config.model.validate()?;
    let reps = config.repetitions;
    let slots: Mutex<Vec<Option<Result<ExperimentRow>>>> = Mutex::new((0..reps).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..config.jobs.clamp(1, reps) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= reps {
                    break;
                }
                let row = run_one(config, i);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(row);
            });
        }
    });
    let rows = slots
        .into_inner()
        .expect("workers have finished")
        .into_iter()
        .map(|r| r.expect("every repetition ran"))
        .collect::<Result<Vec<_>>>()?;
    let metric: Vec<Rational> = rows
        .iter()
        .map(|r| match (r.coverage, r.weight) {
            (Some(c), _) => Rational::from_integer(c as i128),
            (None, Some(w)) => w,
            (None, None) => Rational::zero(),
        })
        .collect();
    let min = *metric.iter().min().expect("at least one repetition");
    Ok(ExperimentReport { pipeline: config.pipeline, rows, median: median(metric), min })
}

impl ExperimentReport {
    /// One row per repetition, then a summary row. Timings are left empty
    /// unless `meta` is set.
    pub fn write_csv<W: Write>(&self, out: W, meta: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        let opt = |q: Option<Rational>| q.map(fraction_string).unwrap_or_default();
        let version = FORMAT_VERSION.to_string();
        let name = self.pipeline.name();
        for r in &self.rows {
            let sizes = r.matching_sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";");
            let phases = if meta {
                r.phases.iter().map(|d| format!("{:.3}", d.as_secs_f64() * 1e3)).collect::<Vec<_>>().join(";")
            } else {
                String::new()
            };
            let optimality = match r.optimality {
                Some(Optimality::Exact) => "exact",
                Some(Optimality::LowerBound) => "lower_bound",
                None => "",
            };
            w.write_record([
                version.as_str(),
                "repetition",
                &r.index.to_string(),
                &r.seed.to_string(),
                &r.n.to_string(),
                &r.k.to_string(),
                name,
                &r.coverage.map(|c| c.to_string()).unwrap_or_default(),
                &sizes,
                &r.components.to_string(),
                &opt(r.weight),
                &opt(r.oracle_weight),
                optimality,
                "",
                "",
                &phases,
            ])?;
        }
        let first = &self.rows[0];
        w.write_record([
            version.as_str(),
            "summary",
            "",
            "",
            &first.n.to_string(),
            &first.k.to_string(),
            name,
            "",
            "",
            "",
            "",
            "",
            "",
            &fraction_string(self.median),
            &fraction_string(self.min),
            "",
        ])?;
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, meta: bool) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, meta)?;
        Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let red = random_colouring(&RandomModel::complete(3, 7, 1.0, 5)).unwrap();
        assert_eq!(red, ColouredKGraph::complete(3, 7, Colour::Red).unwrap());
        let none = random_colouring(&RandomModel { missing: 1.0, ..RandomModel::complete(3, 7, 0.5, 5) }).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn seeded() {
        let m = RandomModel::complete(4, 12, 0.5, 99);
        assert_eq!(random_colouring(&m).unwrap(), random_colouring(&m).unwrap());
        assert_ne!(random_colouring(&m).unwrap(), random_colouring(&m.with_seed(100)).unwrap());
        assert!(random_colouring(&RandomModel { red: 1.5, ..m }).is_err());
    }

    fn config(pipeline: Pipeline, model: RandomModel, repetitions: usize, jobs: usize) -> ExperimentConfig {
        ExperimentConfig { model, repetitions, pipeline, params: PipelineParams::default(), jobs }
    }

    #[test]
    fn red_complete_k4_covers_everything() {
        let c = config(Pipeline::K4, RandomModel::complete(4, 8, 1.0, 3), 1, 1);
        let report = run_experiment(&c).unwrap();
        assert_eq!(report.rows[0].coverage, Some(8));
        assert_eq!(report.median, Rational::from_integer(8));
        let csv = report.to_csv_string(false).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("format_version,kind,index,seed"));
        assert!(lines[1].starts_with("1,repetition,0,3,8,4,k4,8,2,1,"));
        assert!(lines[2].starts_with("1,summary,"));
    }

    #[test]
    fn rows_follow_repetition_order_and_jobs_do_not_matter() {
        let mu = Pipeline::Mu { mode: Selection::AnyS(1), beta: Rational::new(1, 2), oracle: true };
        let one = run_experiment(&config(mu, RandomModel::complete(3, 6, 0.5, 10), 6, 1)).unwrap();
        let many = run_experiment(&config(mu, RandomModel::complete(3, 6, 0.5, 10), 6, 3)).unwrap();
        assert_eq!(one.to_csv_string(false).unwrap(), many.to_csv_string(false).unwrap());
        for (i, r) in one.rows.iter().enumerate() {
            assert_eq!((r.index, r.seed), (i, 10 + i as u64));
            assert_eq!(r.weight, r.oracle_weight);
        }
        assert!(run_experiment(&config(mu, RandomModel::complete(3, 6, 0.5, 10), 0, 1)).is_err());
    }
}
