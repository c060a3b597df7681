use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypermatch::blueprint::build_blueprint;
use hypermatch::density::{dense_subgraph, is_dense, DensityParams, DensityReport};
use hypermatch::extremal::{extremal_colouring, naive_two_cycle_partition, parity_colouring, verify_two_cycle_partition, Verdict};
use hypermatch::fracmatch::{max_constrained_fractional_matching, Selection};
use hypermatch::harness::{random_colouring, run_experiment, ExperimentConfig, Pipeline, RandomModel};
use hypermatch::io::{read_graph, to_json, to_text, write_graph};
use hypermatch::matching::{four_matchings_k5, two_matchings_k4, PipelineParams};
use hypermatch::numeric::{fraction_string, parse_rational};
use hypermatch::{Colour, ColouredKGraph, ComponentId, Edge, Error, Rational, TightDecomposition};

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Tight components and monochromatic matchings in 2-coloured k-graphs")]
struct Cli {
    /// Base seed for anything random.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch work.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a colouring.
    #[command(subcommand)]
    Gen(Gen),
    /// Tight components and a density report.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "1/2", value_parser = rational)]
        mu: Rational,
        #[arg(long, default_value = "1/100", value_parser = rational)]
        alpha: Rational,
    },
    #[command(subcommand)]
    Density(Density),
    #[command(subcommand)]
    Blueprint(BlueprintCmd),
    /// Tightly connected monochromatic matchings.
    Match {
        #[arg(value_enum)]
        pipeline: MatchPipeline,
        file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Write the pipeline trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Maximum constrained fractional matching.
    Mu {
        file: PathBuf,
        /// Number of components of either colour.
        #[arg(long, conflicts_with = "redblue", required_unless_present = "redblue")]
        s: Option<usize>,
        /// One red and one blue component.
        #[arg(long)]
        redblue: bool,
        #[arg(long, value_parser = rational)]
        beta: Rational,
    },
    #[command(subcommand)]
    Verify(Verify),
    /// Batch of random instances, written as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum Gen {
    /// The two-sided construction on |X| = m, |Y| = m(k−1) + 1 plus one vertex.
    Extremal {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Red iff an edge meets A in an even number of vertices.
    Parity {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Independent presence and colour per k-set.
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        red: f64,
        #[arg(long, default_value_t = 0.0)]
        missing: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Density {
    /// Exact (μ, α)-density check.
    Check {
        file: PathBuf,
        #[arg(long, value_parser = rational)]
        mu: Rational,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
    },
    /// Remove the bad-set cascade.
    Clean {
        file: PathBuf,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum BlueprintCmd {
    /// Build the blueprint of a complete colouring.
    Build {
        file: PathBuf,
        #[arg(long, default_value = "1/10000", value_parser = rational)]
        epsilon: Rational,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Search for a red and a blue tight cycle partitioning the vertices.
    Partition {
        file: PathBuf,
        /// Use the naive enumeration instead.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MatchPipeline {
    K4,
    K5,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentPipeline {
    K4,
    K5,
    Mu,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value = "1/10000", value_parser = rational)]
    epsilon: Rational,
    #[arg(long, default_value = "1/100", value_parser = rational)]
    alpha: Rational,
    #[arg(long, default_value = "1/10", value_parser = rational)]
    eta: Rational,
}

impl ParamArgs {
    fn params(&self, seed: u64) -> PipelineParams {
        PipelineParams { epsilon: self.epsilon, alpha: self.alpha, eta: self.eta, seed, ..PipelineParams::default() }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    pipeline: ExperimentPipeline,
    #[arg(long)]
    n: usize,
    /// Uniformity; defaults to 4 for k4, 5 for k5 and 3 for mu.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    red: f64,
    #[arg(long, default_value_t = 0.0)]
    missing: f64,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    #[command(flatten)]
    params: ParamArgs,
    /// mu: number of components.
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// mu: one red and one blue component.
    #[arg(long)]
    redblue: bool,
    /// mu: weight floor.
    #[arg(long, default_value = "1", value_parser = rational)]
    beta: Rational,
    /// mu: also run the exhaustive support enumeration.
    #[arg(long)]
    oracle: bool,
    /// Leave timing columns empty so output is reproducible.
    #[arg(long)]
    no_meta: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) | Error::ReductionFailed { .. } => 4,
        _ => 2,
    }
}

fn emit_graph(g: &ColouredKGraph, output: Option<&Path>, json: bool) -> hypermatch::Result<()> {
    match output {
        Some(path) => write_graph(path, g),
        None => {
            print!("{}", if json { to_json(g) } else { to_text(g) });
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> hypermatch::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn density_text(r: &DensityReport) -> String {
    let mut s = format!("dense: {}\n", if r.dense { "yes" } else { "no" });
    for l in &r.levels {
        let budget = l.budget.map_or("none".to_string(), |b| b.to_string());
        s += &format!(
            "  {}-sets: min degree {}, {} below ({} positive), budget {}{}\n",
            l.size,
            l.min_degree,
            l.below.len(),
            l.positive,
            budget,
            if l.violated { ", violated" } else { "" }
        );
    }
    s
}

#[derive(Serialize)]
struct Analysis {
    k: usize,
    n: usize,
    edges: usize,
    red_edges: usize,
    blue_edges: usize,
    components: Vec<hypermatch::components::ComponentInfo>,
    density: DensityReport,
}

#[derive(Serialize)]
struct BlueprintEdge {
    edge: Edge,
    colour: Colour,
    induced: ComponentId,
    witness_order: usize,
}

#[derive(Serialize)]
struct BlueprintOut {
    #[serde(serialize_with = "ser_fraction")]
    epsilon: Rational,
    stats: hypermatch::blueprint::BlueprintStats,
    edges: Vec<BlueprintEdge>,
    components: Vec<hypermatch::components::ComponentInfo>,
}

fn ser_fraction<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fraction_string(*q))
}

fn run(cli: Cli) -> hypermatch::Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Gen(g) => {
            let (graph, output) = match g {
                Gen::Extremal { k, m, output } => (extremal_colouring(k, m)?, output),
                Gen::Parity { k, a, b, output } => (parity_colouring(k, a, b)?, output),
                Gen::Random { k, n, red, missing, output } => {
                    (random_colouring(&RandomModel { n, k, missing, red, seed: cli.seed })?, output)
                }
            };
            emit_graph(&graph, output.as_deref(), json)?;
        }
        Command::Analyze { file, mu, alpha } => {
            let h = read_graph(&file)?;
            let dec = TightDecomposition::new(&h);
            let density = is_dense(&h, DensityParams::new(mu, alpha)?);
            let a = Analysis {
                k: h.k(),
                n: h.order(),
                edges: h.edge_count(),
                red_edges: h.colour_count(Colour::Red),
                blue_edges: h.colour_count(Colour::Blue),
                components: dec.components().to_vec(),
                density,
            };
            if json {
                print_json(&a)?;
            } else {
                println!("k={} n={} edges={} red={} blue={}", a.k, a.n, a.edges, a.red_edges, a.blue_edges);
                println!("tight components: {}", a.components.len());
                for c in &a.components {
                    println!("  #{} {:?}: {} edges on {} vertices, least {:?}", c.id, c.colour, c.size, c.support.len(), c.least_edge);
                }
                print!("{}", density_text(&a.density));
            }
        }
        Command::Density(Density::Check { file, mu, alpha }) => {
            let h = read_graph(&file)?;
            let r = is_dense(&h, DensityParams::new(mu, alpha)?);
            if json {
                print_json(&r)?;
            } else {
                print!("{}", density_text(&r));
            }
        }
        Command::Density(Density::Clean { file, alpha, output }) => {
            let h = read_graph(&file)?;
            let out = dense_subgraph(&h, alpha)?;
            write_graph(&output, &out.graph)?;
            if json {
                print_json(&out.report)?;
            } else {
                println!(
                    "removed {} of {} edges; guarantee ({:.6}, {:.6}){}",
                    out.report.removed.len(),
                    h.edge_count(),
                    out.report.guaranteed_mu,
                    out.report.guaranteed_alpha,
                    if out.report.vacuous { ", vacuous" } else { "" }
                );
            }
        }
        Command::Blueprint(BlueprintCmd::Build { file, epsilon, output }) => {
            let h = read_graph(&file)?;
            let dec = TightDecomposition::new(&h);
            let bp = build_blueprint(&h, &dec, epsilon)?;
            let edges: Vec<BlueprintEdge> = bp
                .graph
                .edges()
                .map(|(e, c)| BlueprintEdge { edge: e, colour: c, induced: bp.induced[&e], witness_order: bp.witness[&e].len() })
                .collect();
            let out = BlueprintOut { epsilon, stats: bp.stats.clone(), edges, components: dec.components().to_vec() };
            let body = serde_json::to_string_pretty(&out)?;
            match output {
                Some(path) => std::fs::write(path, body + "\n")?,
                None => println!("{body}"),
            }
        }
        Command::Match { pipeline, file, params, trace } => {
            let h = read_graph(&file)?;
            let p = params.params(cli.seed);
            let (bundle, tr) = match pipeline {
                MatchPipeline::K4 => two_matchings_k4(&h, &p)?,
                MatchPipeline::K5 => four_matchings_k5(&h, &p)?,
            };
            if let Some(path) = trace {
                std::fs::write(path, serde_json::to_string_pretty(&tr)? + "\n")?;
            }
            print_json(&bundle)?;
            println!("covered={}/{}", bundle.coverage(), h.order());
        }
        Command::Mu { file, s, redblue, beta } => {
            let h = read_graph(&file)?;
            let mode = if redblue { Selection::RedBluePair } else { Selection::AnyS(s.unwrap_or(1)) };
            print_json(&max_constrained_fractional_matching(&h, mode, beta)?)?;
        }
        Command::Verify(Verify::Partition { file, oracle }) => {
            let h = read_graph(&file)?;
            let cert = if oracle { naive_two_cycle_partition(&h)? } else { verify_two_cycle_partition(&h)? };
            if json {
                print_json(&cert)?;
            } else {
                match &cert.verdict {
                    Verdict::Partition { red, blue } => {
                        println!("partition found");
                        println!("  red:  {:?}", red.order);
                        println!("  blue: {:?}", blue.order);
                    }
                    Verdict::None => println!("no partition"),
                }
                println!("searched {} subsets, {} nodes, {} prunes", cert.stats.subsets, cert.stats.nodes, cert.stats.prunes);
            }
            return Ok(if cert.found() { 0 } else { 3 });
        }
        Command::Experiment(a) => {
            let pipeline = match a.pipeline {
                ExperimentPipeline::K4 => Pipeline::K4,
                ExperimentPipeline::K5 => Pipeline::K5,
                ExperimentPipeline::Mu => Pipeline::Mu {
                    mode: if a.redblue { Selection::RedBluePair } else { Selection::AnyS(a.s) },
                    beta: a.beta,
                    oracle: a.oracle,
                },
            };
            let k = a.k.unwrap_or(match a.pipeline {
                ExperimentPipeline::K4 => 4,
                ExperimentPipeline::K5 => 5,
                ExperimentPipeline::Mu => 3,
            });
            let config = ExperimentConfig {
                model: RandomModel { n: a.n, k, missing: a.missing, red: a.red, seed: cli.seed },
                repetitions: a.repetitions,
                pipeline,
                params: a.params.params(cli.seed),
                jobs: cli.jobs,
            };
            let report = run_experiment(&config)?;
            let csv = report.to_csv_string(!a.no_meta)?;
            match a.output {
                Some(path) => std::fs::write(path, csv)?,
                None => std::io::stdout().write_all(csv.as_bytes())?,
            }
        }
    }
    Ok(0)
}

/// A closed stdout (`| head`) ends the process quietly instead of panicking.
fn quiet_broken_pipe() {
    let default = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let message = info
            .payload()
            .downcast_ref::<String>()
            .map(String::as_str)
            .or_else(|| info.payload().downcast_ref::<&str>().copied())
            .unwrap_or("");
        if message.contains("Broken pipe") {
            std::process::exit(0);
        }
        default(info);
    }));
}

fn main() -> ExitCode {
    quiet_broken_pipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
