//! Benchmark instances and the temporal placement simulator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rcplace_core::{Algorithm, Coord, Demand, ModelError, Point, Rect};
use serde::Serialize;

use crate::instance::{ChipSpec, Edge, Instance, ModuleSpec, Target};

pub const CHIP_WIDTH: Coord = 80;
pub const CHIP_HEIGHT: Coord = 120;
pub const MODULE_COUNT: usize = 100;
pub const LIFETIMES: (u32, u32) = (4, 100);
pub const MAX_BUSWIDTH: u64 = 10;

/// Module size distribution, in percent of the chip area.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distribution {
    Uniform { lo: u32, hi: u32 },
    Increasing,
    Decreasing,
}

impl Distribution {
    pub const ALL: [Distribution; 7] = [
        Distribution::Uniform { lo: 5, hi: 10 },
        Distribution::Uniform { lo: 10, hi: 15 },
        Distribution::Uniform { lo: 15, hi: 20 },
        Distribution::Uniform { lo: 20, hi: 25 },
        Distribution::Uniform { lo: 5, hi: 25 },
        Distribution::Increasing,
        Distribution::Decreasing,
    ];

    pub fn percent_range(&self) -> (u32, u32) {
        match *self {
            Distribution::Uniform { lo, hi } => (lo, hi),
            Distribution::Increasing | Distribution::Decreasing => (5, 25),
        }
    }

    /// Smallest and largest module area in cells.
    pub fn area_range(&self) -> (Coord, Coord) {
        let (lo, hi) = self.percent_range();
        let cells = CHIP_WIDTH * CHIP_HEIGHT;
        (cells * lo as Coord / 100, cells * hi as Coord / 100)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Uniform { lo, hi } => write!(f, "uniform{lo}-{hi}"),
            Distribution::Increasing => f.write_str("increasing5-25"),
            Distribution::Decreasing => f.write_str("decreasing25-5"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown distribution {0:?}; expected one of uniform5-10, uniform10-15, uniform15-20, uniform20-25, uniform5-25, increasing5-25, decreasing25-5")]
pub struct UnknownDistribution(pub String);

impl FromStr for Distribution {
    type Err = UnknownDistribution;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Distribution::ALL.into_iter().find(|d| d.to_string() == s).ok_or_else(|| UnknownDistribution(s.to_string()))
    }
}

/// Even width and height with area in the distribution's range and aspect
/// ratio within `[1/2, 2]`.
fn module_dims(rng: &mut impl Rng, dist: Distribution) -> (Coord, Coord) {
    let (amin, amax) = dist.area_range();
    let even = |v: f64| 2 * (v / 2.0).round() as Coord;
    loop {
        let area = rng.random_range(amin as f64..=amax as f64);
        let ratio = rng.random_range(0.5..=2.0);
        let w = even((area * ratio).sqrt());
        if w < 2 {
            continue;
        }
        let h = even(area / w as f64);
        let fits = (2..=CHIP_WIDTH).contains(&w) && (2..=CHIP_HEIGHT).contains(&h);
        if fits && (amin..=amax).contains(&(w * h)) && 2 * w >= h && 2 * h >= w {
            return (w, h);
        }
    }
}

/// A benchmark instance. Identical arguments give identical instances.
pub fn generate(dist: Distribution, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dims: Vec<(Coord, Coord)> = (0..MODULE_COUNT).map(|_| module_dims(&mut rng, dist)).collect();
    match dist {
        Distribution::Increasing => dims.sort_by_key(|&(w, h)| w * h),
        Distribution::Decreasing => dims.sort_by_key(|&(w, h)| std::cmp::Reverse(w * h)),
        Distribution::Uniform { .. } => {}
    }

    let mut modules: Vec<ModuleSpec> = Vec::with_capacity(MODULE_COUNT);
    for (i, (w, h)) in dims.into_iter().enumerate() {
        let lifetime = rng.random_range(LIFETIMES.0..=LIFETIMES.1);
        let edge = Edge::ALL[rng.random_range(0..4)];
        let mut buswidths = BTreeMap::new();
        buswidths.insert(Target::Border, rng.random_range(0..=MAX_BUSWIDTH));
        // only earlier modules that can still be on the chip at step i
        for earlier in modules.iter().filter(|m| i < m.arrival_index + m.lifetime as usize) {
            buswidths.insert(Target::Module(earlier.id), rng.random_range(0..=MAX_BUSWIDTH));
        }
        modules.push(ModuleSpec {
            id: i as u32,
            arrival_index: i,
            x: None,
            y: None,
            w,
            h,
            lifetime,
            border_edge: Some(edge),
            buswidths,
        });
    }
    Instance {
        chip: ChipSpec { width: CHIP_WIDTH, height: CHIP_HEIGHT },
        distribution: Some(dist.to_string()),
        seed: Some(seed),
        modules,
        requests: Vec::new(),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("module {id}: {source}")]
    Model { id: u32, source: ModelError },
    #[error("module {id} was placed off the cell grid; give it even width and height")]
    OffGrid { id: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepOutcome {
    pub id: u32,
    /// Lower-left corner, if placed.
    pub position: Option<(Coord, Coord)>,
    /// Cost in half units, if placed.
    pub cost: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub distribution: String,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub elapsed: Duration,
    pub placed: usize,
    pub rejected: usize,
    /// Sum of placement costs in half units.
    pub total_cost: u64,
    pub steps: Vec<StepOutcome>,
}

impl SimulationReport {
    pub fn time_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1000.0
    }

    /// Mean cost per placed module in external units.
    pub fn avg_cost(&self) -> f64 {
        if self.placed == 0 {
            0.0
        } else {
            self.total_cost as f64 / 2.0 / self.placed as f64
        }
    }

    pub fn rejection_pct(&self) -> f64 {
        let total = self.placed + self.rejected;
        if total == 0 {
            0.0
        } else {
            100.0 * self.rejected as f64 / total as f64
        }
    }

    pub fn row(&self) -> BenchRow {
        BenchRow {
            distribution: self.distribution.clone(),
            seed: self.seed,
            algorithm: self.algorithm.name(),
            time_ms: self.time_ms(),
            avg_cost: self.avg_cost(),
            rejection_pct: self.rejection_pct(),
        }
    }
}

/// Runs the instance's modules in arrival order on an initially empty chip.
///
/// A module placed at step `t` with lifetime `l` leaves before step `t + l`;
/// rejected modules are dropped but still use up their step. Demands are the
/// midpoint of the module's border edge and the centers of the modules on
/// the chip, weighted by the module's buswidths. Only the algorithm calls are
/// timed.
pub fn simulate(instance: &Instance, algorithm: Algorithm) -> Result<SimulationReport, SimError> {
    let chip = instance.chip();
    let mut order: Vec<&ModuleSpec> = instance.modules.iter().collect();
    order.sort_by_key(|m| m.arrival_index);

    struct Active {
        id: u32,
        rect: Rect,
        leaves_at: usize,
    }
    let mut active: Vec<Active> = Vec::new();
    let mut layout: Vec<Rect> = Vec::new();
    let mut demands: Vec<Demand> = Vec::new();
    let mut report = SimulationReport {
        distribution: instance.distribution.clone().unwrap_or_default(),
        seed: instance.seed.unwrap_or_default(),
        algorithm,
        elapsed: Duration::ZERO,
        placed: 0,
        rejected: 0,
        total_cost: 0,
        steps: Vec::with_capacity(order.len()),
    };

    for (step, m) in order.into_iter().enumerate() {
        active.retain(|a| a.leaves_at > step);
        layout.clear();
        layout.extend(active.iter().map(|a| a.rect));
        demands.clear();
        if let (Some(edge), Some(&b)) = (m.border_edge, m.buswidths.get(&Target::Border)) {
            demands.push(Demand { at: edge.midpoint(&chip), weight: b });
        }
        for a in &active {
            if let Some(&b) = m.buswidths.get(&Target::Module(a.id)) {
                demands.push(Demand { at: Point::new(2 * a.rect.x + a.rect.w, 2 * a.rect.y + a.rect.h), weight: b });
            }
        }

        let start = Instant::now();
        let result = algorithm
            .run_doubled(&chip, &layout, m.w, m.h, &demands)
            .map_err(|source| SimError::Model { id: m.id, source })?;
        report.elapsed += start.elapsed();

        match result.module_rect(m.w, m.h) {
            Some(rect) => {
                let cost = result.cost().expect("placed").0 as u64;
                report.placed += 1;
                report.total_cost += cost;
                active.push(Active { id: m.id, rect, leaves_at: step + m.lifetime as usize });
                report.steps.push(StepOutcome { id: m.id, position: Some((rect.x, rect.y)), cost: Some(cost) });
            }
            None if result.is_placed() => return Err(SimError::OffGrid { id: m.id }),
            None => {
                report.rejected += 1;
                report.steps.push(StepOutcome { id: m.id, position: None, cost: None });
            }
        }
    }
    Ok(report)
}

/// One output row per instance and algorithm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub distribution: String,
    pub seed: u64,
    pub algorithm: &'static str,
    pub time_ms: f64,
    pub avg_cost: f64,
    pub rejection_pct: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "distribution,seed,algorithm,time_ms,avg_cost,rejection_pct";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{:.3},{:.3},{:.1}",
            self.distribution, self.seed, self.algorithm, self.time_ms, self.avg_cost, self.rejection_pct
        )
    }
}

/// Runs `runs` seeds starting at `seed` for every distribution and every
/// algorithm, on `jobs` worker threads. Reports come back ordered by
/// distribution, seed and algorithm regardless of `jobs`.
pub fn bench(
    distributions: &[Distribution],
    seed: u64,
    runs: u64,
    algorithms: &[Algorithm],
    jobs: usize,
) -> Result<Vec<SimulationReport>, SimError> {
    let work: Vec<(Distribution, u64)> =
        distributions.iter().flat_map(|&d| (0..runs).map(move |i| (d, seed.wrapping_add(i)))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let per_instance: Vec<Result<Vec<SimulationReport>, SimError>> = pool.install(|| {
        work.par_iter()
            .map(|&(d, s)| {
                let instance = generate(d, s);
                algorithms.iter().map(|&a| simulate(&instance, a)).collect()
            })
            .collect()
    });
    let mut out = Vec::with_capacity(work.len() * algorithms.len());
    for reports in per_instance {
        out.extend(reports?);
    }
    Ok(out)
}
