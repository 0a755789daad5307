//! Brute-force reference implementations used by the test suites.
//!
//! Nothing here shares code with the sweep, the segment tree or the placer;
//! everything is a direct enumeration over a grid or a list.

use alloc::vec::Vec;
use core::fmt;

use crate::model::{ChipConfig, Coord, DemandPoint, ExpandedScene, PlacementRequest, Point, Rect};
use crate::span::Span;

/// Largest grid the raster oracles agree to enumerate.
pub const MAX_RASTER_CELLS: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridTooLarge {
    pub cells: usize,
}

impl fmt::Display for GridTooLarge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "raster of {} cells exceeds the limit of {}", self.cells, MAX_RASTER_CELLS)
    }
}

impl core::error::Error for GridTooLarge {}

/// Feasibility of every integer point of a rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterGrid {
    pub origin: Point,
    pub width: usize,
    pub height: usize,
    cells: Vec<bool>,
}

impl RasterGrid {
    fn build(area: Rect, mut feasible: impl FnMut(Point) -> bool) -> Result<Self, GridTooLarge> {
        if area.w < 0 || area.h < 0 {
            return Ok(RasterGrid { origin: Point::new(area.x, area.y), width: 0, height: 0, cells: Vec::new() });
        }
        let width = area.w as usize + 1;
        let height = area.h as usize + 1;
        let cells = width.saturating_mul(height);
        if cells > MAX_RASTER_CELLS {
            return Err(GridTooLarge { cells });
        }
        let mut grid = Vec::with_capacity(cells);
        for j in 0..height {
            for i in 0..width {
                grid.push(feasible(Point::new(area.x + i as Coord, area.y + j as Coord)));
            }
        }
        Ok(RasterGrid { origin: Point::new(area.x, area.y), width, height, cells: grid })
    }

    pub fn get(&self, p: Point) -> bool {
        let (i, j) = (p.x - self.origin.x, p.y - self.origin.y);
        if i < 0 || j < 0 || i as usize >= self.width || j as usize >= self.height {
            return false;
        }
        self.cells[j as usize * self.width + i as usize]
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.height).flat_map(move |j| {
            (0..self.width)
                .filter(move |&i| self.cells[j * self.width + i])
                .map(move |i| Point::new(self.origin.x + i as Coord, self.origin.y + j as Coord))
        })
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Feasible with at least one infeasible 4-neighbor.
    pub fn is_boundary(&self, p: Point) -> bool {
        self.get(p)
            && [(1, 0), (-1, 0), (0, 1), (0, -1)].iter().any(|&(dx, dy)| !self.get(Point::new(p.x + dx, p.y + dy)))
    }

    /// Maximal runs of feasible x on row `y`, as closed intervals.
    pub fn runs_on_row(&self, y: Coord) -> Vec<(Coord, Coord)> {
        let mut runs: Vec<(Coord, Coord)> = Vec::new();
        for i in 0..self.width as Coord {
            let x = self.origin.x + i;
            if self.get(Point::new(x, y)) {
                match runs.last_mut() {
                    Some(last) if last.1 == x - 1 => last.1 = x,
                    _ => runs.push((x, x)),
                }
            }
        }
        runs
    }
}

/// Feasible centers of an expanded scene on its integer grid.
pub fn raster_feasible_set(scene: &ExpandedScene) -> Result<RasterGrid, GridTooLarge> {
    RasterGrid::build(scene.shrunk_chip, |p| {
        !scene.expanded.iter().any(|o| o.x_span().contains(p.x) && o.y_span().contains(p.y))
    })
}

/// Doubled centers at which a `request` module fits on the chip without
/// overlapping any placed module, checked on the original geometry.
pub fn raster_placements(
    chip: &ChipConfig,
    placed: &[Rect],
    request: &PlacementRequest,
) -> Result<RasterGrid, GridTooLarge> {
    let (w, h) = (request.width, request.height);
    let area = Rect::from_corners(w, h, 2 * chip.width - w, 2 * chip.height - h);
    RasterGrid::build(area, |c| {
        // module spans [(c.x - w) / 2, (c.x + w) / 2]; compare doubled
        placed.iter().all(|m| {
            let apart_x = c.x + w <= 2 * m.x || c.x - w >= 2 * (m.x + m.w);
            let apart_y = c.y + h <= 2 * m.y || c.y - h >= 2 * (m.y + m.h);
            apart_x || apart_y
        })
    })
}

/// Weighted Manhattan distance from a doubled center to external demands,
/// in half units.
pub fn doubled_cost(center: Point, demands: &[DemandPoint]) -> u64 {
    demands
        .iter()
        .map(|d| d.buswidth * ((center.x - 2 * d.x).unsigned_abs() + (center.y - 2 * d.y).unsigned_abs()))
        .sum()
}

/// Cheapest feasible doubled center by exhaustive search; ties go to the
/// smallest `x`, then `y`.
pub fn grid_optimal_placement(
    chip: &ChipConfig,
    placed: &[Rect],
    request: &PlacementRequest,
) -> Result<Option<(Point, u64)>, GridTooLarge> {
    let grid = raster_placements(chip, placed, request)?;
    Ok(grid
        .points()
        .map(|p| (doubled_cost(p, &request.demands), p))
        .min_by_key(|&(c, p)| (c, p.x, p.y))
        .map(|(c, p)| (p, c)))
}

/// A list of intervals with linear-time coverage queries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NaiveCoverage {
    endpoints: Vec<Coord>,
    spans: Vec<Span>,
}

impl NaiveCoverage {
    pub fn new(mut endpoints: Vec<Coord>) -> Self {
        endpoints.sort_unstable();
        endpoints.dedup();
        NaiveCoverage { endpoints, spans: Vec::new() }
    }

    pub fn insert(&mut self, span: Span) {
        self.spans.push(span);
    }

    /// Removes one copy; false if `span` was not stored.
    pub fn remove(&mut self, span: Span) -> bool {
        match self.spans.iter().position(|s| *s == span) {
            Some(i) => {
                self.spans.swap_remove(i);
                true
            }
            None => false,
        }
    }

    pub fn covers_point(&self, v: Coord) -> bool {
        self.spans.iter().any(|s| s.contains(v))
    }

    /// Whether the open gap `(a, b)` between consecutive endpoints is covered.
    pub fn covers_gap(&self, a: Coord, b: Coord) -> bool {
        self.spans.iter().any(|s| s.lo <= a && s.hi >= b && s.lo < s.hi)
    }

    /// Maximal uncovered pieces of `[lo, hi]` in terms of the endpoint grid.
    pub fn uncovered_within(&self, lo: Coord, hi: Coord) -> Vec<Span> {
        let mut out: Vec<Span> = Vec::new();
        let mut push = |piece: Span| match out.last_mut() {
            Some(last) if last.hi == piece.lo && (last.hi_closed || piece.lo_closed) => {
                last.hi = piece.hi;
                last.hi_closed = piece.hi_closed;
            }
            _ => out.push(piece),
        };
        let inside: Vec<Coord> = self.endpoints.iter().copied().filter(|&v| lo <= v && v <= hi).collect();
        for (k, &v) in inside.iter().enumerate() {
            if !self.covers_point(v) {
                push(Span::point(v));
            }
            if let Some(&next) = inside.get(k + 1) {
                if !self.covers_gap(v, next) {
                    push(Span::open(v, next));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn raster_of_empty_chip_is_the_whole_center_box() {
        let chip = ChipConfig::new(6, 4).unwrap();
        let grid = raster_placements(&chip, &[], &PlacementRequest::new(2, 2, vec![])).unwrap();
        // doubled centers x in [2, 10], y in [2, 6]
        assert_eq!(grid.count(), 9 * 5);
        assert!(grid.get(Point::new(2, 2)));
        assert!(!grid.get(Point::new(1, 2)));
    }

    #[test]
    fn raster_excludes_overlap_but_allows_abutting() {
        let chip = ChipConfig::new(6, 2).unwrap();
        let grid = raster_placements(&chip, &[Rect::new(2, 0, 2, 2)], &PlacementRequest::new(2, 2, vec![])).unwrap();
        assert_eq!(grid.runs_on_row(2), vec![(2, 2), (10, 10)]);
    }

    #[test]
    fn grid_optimum_breaks_ties_lexicographically() {
        let chip = ChipConfig::new(4, 4).unwrap();
        let req = PlacementRequest::new(2, 2, vec![]);
        assert_eq!(grid_optimal_placement(&chip, &[], &req).unwrap(), Some((Point::new(2, 2), 0)));
    }

    #[test]
    fn oversized_grid_is_refused() {
        let chip = ChipConfig::new(5000, 5000).unwrap();
        assert!(raster_placements(&chip, &[], &PlacementRequest::new(1, 1, vec![])).is_err());
    }

    #[test]
    fn naive_coverage_pieces() {
        let mut c = NaiveCoverage::new(vec![0, 2, 5, 8, 10]);
        c.insert(Span::open(2, 8));
        assert_eq!(c.uncovered_within(0, 10), vec![Span::closed(0, 2), Span::closed(8, 10)]);
        c.insert(Span::closed(8, 8));
        assert_eq!(c.uncovered_within(0, 10), vec![Span::closed(0, 2), Span::new(8, 10, false, true)]);
        assert!(c.remove(Span::open(2, 8)));
        assert!(!c.remove(Span::open(2, 8)));
    }
}
