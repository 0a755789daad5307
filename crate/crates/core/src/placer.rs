//! Routing-conscious placement.
//!
//! The cost of a center point is `c(x, y) = Σ b_i (|x_i - x| + |y_i - y|)`,
//! which splits into `c_x(x) + c_y(y)`. Without obstacles the weighted
//! medians minimize both parts. Otherwise the optimum sits on the contour,
//! and since `c` is convex along every contour segment it is attained either
//! where the segment meets a median axis or at one of its endpoints.
//!
//! All candidate costs are evaluated with one sorted scan per axis instead of
//! one pass over the demands per candidate.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::baselines;
use crate::contour::{contour_vertices, find_contour_segments, is_feasible, Contour};
use crate::model::{
    check_demands, expand, to_internal, ChipConfig, Coord, Demand, ExpandedScene, ModelError, PlacementRequest,
    PlacementResult, Point, Rect,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoDemand;

impl fmt::Display for NoDemand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("no demand point has positive buswidth")
    }
}

impl core::error::Error for NoDemand {}

/// Lower weighted medians of the demand coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MedianAxes {
    pub x: Coord,
    pub y: Coord,
}

impl MedianAxes {
    pub fn of(demands: &[Demand]) -> Result<Self, NoDemand> {
        let xs: Vec<(Coord, u64)> = demands.iter().map(|d| (d.at.x, d.weight)).collect();
        let ys: Vec<(Coord, u64)> = demands.iter().map(|d| (d.at.y, d.weight)).collect();
        Ok(MedianAxes { x: weighted_median(&xs)?, y: weighted_median(&ys)? })
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Smallest `v` whose cumulative weight reaches half the total.
pub fn weighted_median(values: &[(Coord, u64)]) -> Result<Coord, NoDemand> {
    let total: u64 = values.iter().map(|&(_, w)| w).sum();
    if total == 0 {
        return Err(NoDemand);
    }
    let mut sorted: Vec<(Coord, u64)> = values.to_vec();
    sorted.sort_unstable();
    let mut acc = 0u64;
    for (v, w) in sorted {
        acc += w;
        if 2 * acc >= total {
            return Ok(v);
        }
    }
    unreachable!("cumulative weight reaches the total")
}

/// Slope of `c_x` at `x`: weight to the left minus weight to the right.
pub fn gradient_x(demands: &[Demand], x: Coord) -> i64 {
    demands
        .iter()
        .map(|d| match d.at.x.cmp(&x) {
            core::cmp::Ordering::Less => d.weight as i64,
            core::cmp::Ordering::Greater => -(d.weight as i64),
            core::cmp::Ordering::Equal => 0,
        })
        .sum()
}

/// Slope of `c_y` at `y`: weight below minus weight above.
pub fn gradient_y(demands: &[Demand], y: Coord) -> i64 {
    demands
        .iter()
        .map(|d| match d.at.y.cmp(&y) {
            core::cmp::Ordering::Less => d.weight as i64,
            core::cmp::Ordering::Greater => -(d.weight as i64),
            core::cmp::Ordering::Equal => 0,
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Median,
    AxisIntersection,
    Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub point: Point,
    pub origin: Origin,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub points: Vec<Candidate>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Feasible median, contour/median-axis intersections and contour vertices,
/// deduplicated. All vertices are kept, not only the ones whose angle points
/// toward the median.
pub fn candidates(scene: &ExpandedScene, contour: &Contour, axes: &MedianAxes) -> CandidateSet {
    let mut points = Vec::new();
    if is_feasible(scene, axes.point()) {
        points.push(Candidate { point: axes.point(), origin: Origin::Median });
    }
    for s in contour.vertical.iter().filter(|s| s.contains(axes.y)) {
        points.push(Candidate { point: Point::new(s.at, axes.y), origin: Origin::AxisIntersection });
    }
    for s in contour.horizontal.iter().filter(|s| s.contains(axes.x)) {
        points.push(Candidate { point: Point::new(axes.x, s.at), origin: Origin::AxisIntersection });
    }
    points.extend(contour_vertices(contour).into_iter().map(|v| Candidate { point: v.point, origin: Origin::Vertex }));
    points.sort_unstable_by_key(|c| (c.point, c.origin));
    points.dedup_by_key(|c| c.point);
    CandidateSet { points }
}

/// `c_axis(v)` for every query coordinate by a forward and a backward scan
/// over the merged, deduplicated coordinates.
fn axis_costs(queries: &[Coord], demands: &[(Coord, u64)]) -> Vec<i64> {
    // (coordinate, weight) with queries carrying weight zero
    let mut line: Vec<(Coord, u64)> = Vec::with_capacity(queries.len() + demands.len());
    line.extend(queries.iter().map(|&q| (q, 0)));
    line.extend_from_slice(demands);
    line.sort_unstable_by_key(|&(v, _)| v);
    let mut merged: Vec<(Coord, i64)> = Vec::with_capacity(line.len());
    for (v, w) in line {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += w as i64,
            _ => merged.push((v, w as i64)),
        }
    }
    if merged.is_empty() {
        return Vec::new();
    }
    let n = merged.len();
    // left[i]: weight at or before i; right[i]: weight at or after i
    let mut left = Vec::with_capacity(n);
    let mut acc = 0;
    for &(_, w) in &merged {
        acc += w;
        left.push(acc);
    }
    let mut right = alloc::vec![0; n];
    acc = 0;
    for i in (0..n).rev() {
        acc += merged[i].1;
        right[i] = acc;
    }
    let first = merged[0].0;
    let mut cost = Vec::with_capacity(n);
    cost.push(merged.iter().map(|&(v, w)| w * (v - first)).sum::<i64>());
    for i in 0..n - 1 {
        let step = merged[i + 1].0 - merged[i].0;
        cost.push(cost[i] + (left[i] - right[i + 1]) * step);
    }
    queries
        .iter()
        .map(|q| {
            let i = merged.partition_point(|&(v, _)| v < *q);
            cost[i]
        })
        .collect()
}

/// Weighted Manhattan cost of every point, in the points' own units.
pub fn evaluate_costs(points: &[Point], demands: &[Demand]) -> Vec<u64> {
    let xs: Vec<Coord> = points.iter().map(|p| p.x).collect();
    let ys: Vec<Coord> = points.iter().map(|p| p.y).collect();
    let dx: Vec<(Coord, u64)> = demands.iter().map(|d| (d.at.x, d.weight)).collect();
    let dy: Vec<(Coord, u64)> = demands.iter().map(|d| (d.at.y, d.weight)).collect();
    let cx = axis_costs(&xs, &dx);
    let cy = axis_costs(&ys, &dy);
    cx.into_iter().zip(cy).map(|(a, b)| (a + b) as u64).collect()
}

/// Direct `O(k)` cost of one point.
pub fn direct_cost(p: Point, demands: &[Demand]) -> u64 {
    demands.iter().map(|d| d.weight * p.manhattan(&d.at)).sum()
}

/// Optimal feasible center for an already transformed scene.
///
/// Ties go to the smallest `x`, then the smallest `y`. With all buswidths
/// zero every feasible point is optimal and the lexicographically smallest
/// contour vertex is returned.
pub fn place_in_scene(scene: &ExpandedScene, demands: &[Demand]) -> PlacementResult {
    let contour = find_contour_segments(scene);
    if contour.is_empty() {
        return PlacementResult::Rejected;
    }
    let axes = match MedianAxes::of(demands) {
        Ok(axes) => axes,
        Err(NoDemand) => {
            let vertices = contour_vertices(&contour);
            let first = vertices.iter().map(|v| v.point).min().expect("non-empty contour has vertices");
            return PlacementResult::Placed { center: first, cost: 0, candidates: vertices.len() };
        }
    };
    if is_feasible(scene, axes.point()) {
        let center = axes.point();
        return PlacementResult::Placed { center, cost: direct_cost(center, demands), candidates: 1 };
    }
    let set = candidates(scene, &contour, &axes);
    let points: Vec<Point> = set.points.iter().map(|c| c.point).collect();
    let costs = evaluate_costs(&points, demands);
    let (cost, center) = costs.into_iter().zip(points).min().expect("non-empty contour yields candidates");
    PlacementResult::Placed { center, cost, candidates: set.len() }
}

/// Places a new module on the chip at minimum weighted Manhattan distance
/// to its demand points. The center and cost come back doubled.
pub fn place(chip: &ChipConfig, modules: &[Rect], request: &PlacementRequest) -> Result<PlacementResult, ModelError> {
    let scene = to_internal(chip, modules, request)?;
    Ok(place_in_scene(&scene, &request.doubled_demands()))
}

/// [`place`] with demand points already doubled, so they may sit on half
/// units (centers of odd-sized modules).
pub fn place_doubled(
    chip: &ChipConfig,
    modules: &[Rect],
    width: Coord,
    height: Coord,
    demands: &[Demand],
) -> Result<PlacementResult, ModelError> {
    let scene = expand(chip, modules, width, height)?;
    check_demands(chip, demands)?;
    Ok(place_in_scene(&scene, demands))
}

/// Placement strategies compared by the benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Optimal routing-conscious placement.
    Rcp,
    /// Maximal empty rectangles with first fit.
    Kff,
    /// Weighted Euclidean heuristic restricted to the contour.
    Nao,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Rcp, Algorithm::Nao, Algorithm::Kff];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Rcp => "rcp",
            Algorithm::Kff => "kff",
            Algorithm::Nao => "nao",
        }
    }

    pub fn run(
        &self,
        chip: &ChipConfig,
        modules: &[Rect],
        request: &PlacementRequest,
    ) -> Result<PlacementResult, ModelError> {
        self.run_doubled(chip, modules, request.width, request.height, &request.doubled_demands())
    }

    pub fn run_doubled(
        &self,
        chip: &ChipConfig,
        modules: &[Rect],
        width: Coord,
        height: Coord,
        demands: &[Demand],
    ) -> Result<PlacementResult, ModelError> {
        match self {
            Algorithm::Rcp => place_doubled(chip, modules, width, height, demands),
            Algorithm::Kff => baselines::kamer_first_fit_doubled(chip, modules, width, height, demands),
            Algorithm::Nao => baselines::nao_heuristic_doubled(chip, modules, width, height, demands),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownAlgorithm;

impl fmt::Display for UnknownAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of rcp, kff, nao")
    }
}

impl core::error::Error for UnknownAlgorithm {}

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rcp" => Ok(Algorithm::Rcp),
            "kff" => Ok(Algorithm::Kff),
            "nao" => Ok(Algorithm::Nao),
            _ => Err(UnknownAlgorithm),
        }
    }
}
