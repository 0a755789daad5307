//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rcplace_core::{find_contour_segments, Algorithm, Halves, PlacementResult};
use serde_json::json;

use crate::instance::{parse_instance, write_instance, Instance};
use crate::sim::{bench, generate, simulate, BenchRow, Distribution};

#[derive(Parser, Debug)]
#[command(
    name = "rcplace",
    version,
    about = "Free-space management and routing-conscious placement on reconfigurable chips"
)]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a benchmark instance
    Generate {
        #[arg(long, value_parser = parse_distribution)]
        distribution: Distribution,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Place one request of an instance on its current layout
    Place {
        #[arg(long)]
        instance: PathBuf,
        /// Index into the instance's requests
        #[arg(long, default_value_t = 0)]
        request: usize,
        #[arg(long, default_value = "rcp", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the temporal placement simulation for one instance
    Simulate {
        /// Instance file; generated from --distribution and --seed if absent
        #[arg(long, conflicts_with = "distribution")]
        instance: Option<PathBuf>,
        #[arg(long, value_parser = parse_distribution, required_unless_present = "instance")]
        distribution: Option<Distribution>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One algorithm; all three if absent
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Option<Algorithm>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate many generated instances and report one row per instance and algorithm
    Bench {
        /// A distribution tag or "all"
        #[arg(long, default_value = "all")]
        distribution: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        runs: u64,
        /// One algorithm; all three if absent
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Option<Algorithm>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the contour segments of the free space for one request
    ContourDump {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        request: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_distribution(s: &str) -> Result<Distribution, String> {
    s.parse().map_err(|e: crate::sim::UnknownDistribution| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: rcplace_core::placer::UnknownAlgorithm| e.to_string())
}

fn read_instance(path: &PathBuf) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn algorithms(one: Option<Algorithm>) -> Vec<Algorithm> {
    one.map_or_else(|| Algorithm::ALL.to_vec(), |a| vec![a])
}

fn rows_text(rows: &[BenchRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut text = String::from(BenchRow::CSV_HEADER);
            text.push('\n');
            for r in rows {
                text.push_str(&r.csv());
                text.push('\n');
            }
            text
        }
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
    }
}

fn place_text(algorithm: Algorithm, result: &PlacementResult, format: Format) -> String {
    let center = result.center().map(|c| (Halves(c.x).to_string(), Halves(c.y).to_string()));
    let cost = result.cost().map(|c| c.to_string());
    let candidates = match result {
        PlacementResult::Placed { candidates, .. } => Some(*candidates),
        PlacementResult::Rejected => None,
    };
    let status = if result.is_placed() { "placed" } else { "rejected" };
    match format {
        Format::Csv => {
            let (x, y) = center.unwrap_or_default();
            format!(
                "algorithm,status,center_x,center_y,cost,candidates\n{},{},{},{},{},{}\n",
                algorithm,
                status,
                x,
                y,
                cost.unwrap_or_default(),
                candidates.map(|c| c.to_string()).unwrap_or_default()
            )
        }
        Format::Json => {
            let value = json!({
                "algorithm": algorithm.name(),
                "status": status,
                "center": center.map(|(x, y)| [x, y]),
                "cost": cost,
                "candidates": candidates,
            });
            serde_json::to_string_pretty(&value).expect("json") + "\n"
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { distribution, seed, out } => emit(&out, &write_instance(&generate(distribution, seed))),
        Command::Place { instance, request, algorithm, format, out } => {
            let inst = read_instance(&instance)?;
            let Some(req) = inst.requests.get(request) else {
                bail!("instance has {} requests, no index {}", inst.requests.len(), request);
            };
            let demands = inst.resolve_demands(req)?;
            let result = algorithm.run_doubled(&inst.chip(), &inst.layout(), req.w, req.h, &demands)?;
            emit(&out, &place_text(algorithm, &result, format))
        }
        Command::Simulate { instance, distribution, seed, algorithm, format, out } => {
            let inst = match (instance, distribution) {
                (Some(path), _) => read_instance(&path)?,
                (None, Some(d)) => generate(d, seed),
                (None, None) => bail!("either --instance or --distribution is required"),
            };
            let rows = algorithms(algorithm)
                .into_iter()
                .map(|a| simulate(&inst, a).map(|r| r.row()))
                .collect::<Result<Vec<_>, _>>()?;
            emit(&out, &rows_text(&rows, format))
        }
        Command::Bench { distribution, seed, runs, algorithm, jobs, format, out } => {
            let dists = if distribution == "all" {
                Distribution::ALL.to_vec()
            } else {
                vec![parse_distribution(&distribution).map_err(anyhow::Error::msg)?]
            };
            let reports = bench(&dists, seed, runs, &algorithms(algorithm), jobs)?;
            let rows: Vec<BenchRow> = reports.iter().map(|r| r.row()).collect();
            emit(&out, &rows_text(&rows, format))
        }
        Command::ContourDump { instance, request, format, out } => {
            let inst = read_instance(&instance)?;
            let Some(req) = inst.requests.get(request) else {
                bail!("instance has {} requests, no index {}", inst.requests.len(), request);
            };
            let scene = rcplace_core::expand(&inst.chip(), &inst.layout(), req.w, req.h)?;
            let contour = find_contour_segments(&scene);
            let segments = contour
                .vertical
                .iter()
                .map(|s| ("vertical", Halves(s.at), Halves(s.lo), Halves(s.at), Halves(s.hi)))
                .chain(
                    contour
                        .horizontal
                        .iter()
                        .map(|s| ("horizontal", Halves(s.lo), Halves(s.at), Halves(s.hi), Halves(s.at))),
                );
            let text = match format {
                Format::Csv => {
                    let mut text = String::from("orientation,x1,y1,x2,y2\n");
                    for (o, x1, y1, x2, y2) in segments {
                        text.push_str(&format!("{o},{x1},{y1},{x2},{y2}\n"));
                    }
                    text
                }
                Format::Json => {
                    let list: Vec<_> = segments
                        .map(|(o, x1, y1, x2, y2)| {
                            json!({ "orientation": o, "from": [x1.to_string(), y1.to_string()], "to": [x2.to_string(), y2.to_string()] })
                        })
                        .collect();
                    serde_json::to_string_pretty(&list).expect("json") + "\n"
                }
            };
            emit(&out, &text)
        }
    }
}
