//! Free-space contour by two plane sweeps.
//!
//! The horizontal sweep moves a vertical line left to right and reports the
//! vertical contour edges; the vertical sweep does the same with the axes
//! swapped. A single sweep is not enough: a zero-height corridor between two
//! modules stacked on top of each other has no vertical extent at all.
//!
//! At every sweep coordinate `X` the segment tree passes through three
//! states: blocks covering `X - δ`, blocks covering `X` itself, and blocks
//! covering `X + δ`. A point of the sweep line is on the contour when it is
//! free itself and blocked on at least one side. Closing before opening at
//! equal coordinates falls out of this ordering.
//!
//! The shrunk chip is framed by four blocks, so its border is reported like
//! any other contour edge.

use alloc::vec::Vec;

use crate::model::{Coord, ExpandedScene, Point, Rect};
use crate::segment_tree::{LeafRange, SegmentTree};
use crate::span::Span;

/// Which side of a contour edge is free space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Facing {
    /// Free toward smaller coordinates (left of a vertical edge, below a
    /// horizontal one).
    Low,
    /// Free toward larger coordinates.
    High,
    /// Blocked on both sides: a zero-width corridor or an isolated point.
    Neither,
}

/// A contour edge with uniform facing. `at` is the fixed coordinate and
/// `lo..=hi` the extent along the edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub at: Coord,
    pub lo: Coord,
    pub hi: Coord,
    pub facing: Facing,
}

/// A maximal collinear contour segment, possibly a single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub at: Coord,
    pub lo: Coord,
    pub hi: Coord,
}

impl Segment {
    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: Coord) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Boundary of the free space of an [`ExpandedScene`], in doubled
/// coordinates. Vertical segments have `at = x` and extend in `y`;
/// horizontal ones the other way round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Contour {
    pub vertical: Vec<Segment>,
    pub horizontal: Vec<Segment>,
    pub vertical_edges: Vec<Edge>,
    pub horizontal_edges: Vec<Edge>,
}

impl Contour {
    /// No contour means no feasible point.
    pub fn is_empty(&self) -> bool {
        self.vertical_edges.is_empty() && self.horizontal_edges.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.vertical.len() + self.horizontal.len()
    }

    /// Closed intervals of free space on the horizontal line `y`, rebuilt
    /// from the contour alone.
    pub fn free_runs_on_row(&self, y: Coord) -> Vec<(Coord, Coord)> {
        let mut runs = Vec::new();
        // Region interiors: walk the edges crossing the line just above `y`.
        let mut start = None;
        for e in self.vertical_edges.iter().filter(|e| e.lo <= y && y < e.hi) {
            match e.facing {
                Facing::High => {
                    start.get_or_insert(e.at);
                }
                Facing::Low => {
                    if let Some(s) = start.take() {
                        runs.push((s, e.at));
                    }
                }
                Facing::Neither => {}
            }
        }
        runs.extend(self.vertical_edges.iter().filter(|e| e.lo <= y && y <= e.hi).map(|e| (e.at, e.at)));
        runs.extend(self.horizontal_edges.iter().filter(|e| e.at == y).map(|e| (e.lo, e.hi)));
        runs.sort_unstable();
        let mut merged: Vec<(Coord, Coord)> = Vec::with_capacity(runs.len());
        for (lo, hi) in runs {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        merged
    }

    /// Point-in-free-space test that only looks at the contour.
    pub fn encloses(&self, p: Point) -> bool {
        self.free_runs_on_row(p.y).iter().any(|&(lo, hi)| lo <= p.x && p.x <= hi)
    }
}

/// Directions in which a vertex has free space right next to it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Directions {
    pub east: bool,
    pub west: bool,
    pub north: bool,
    pub south: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub point: Point,
    pub free: Directions,
}

/// `true` iff `p` lies in the shrunk chip and no expanded module blocks it.
pub fn is_feasible(scene: &ExpandedScene, p: Point) -> bool {
    let f = &scene.shrunk_chip;
    let inside = f.x <= p.x && p.x <= f.right() && f.y <= p.y && p.y <= f.top();
    inside && !scene.expanded.iter().any(|o| o.blocks(p))
}

/// Runs both sweeps over the scene and returns the complete contour.
pub fn find_contour_segments(scene: &ExpandedScene) -> Contour {
    let mut blocks: Vec<(Span, Span)> = scene.expanded.iter().map(|o| (o.x_span(), o.y_span())).collect();
    blocks.extend(frame_blocks(&scene.shrunk_chip));

    let vertical_edges = sweep(blocks.iter().copied());
    let horizontal_edges = sweep(blocks.iter().map(|&(x, y)| (y, x)));
    Contour {
        vertical: merge_edges(&vertical_edges),
        horizontal: merge_edges(&horizontal_edges),
        vertical_edges,
        horizontal_edges,
    }
}

/// Endpoints of all maximal segments with the free directions at each.
pub fn contour_vertices(contour: &Contour) -> Vec<Vertex> {
    let mut points: Vec<Point> = Vec::with_capacity(2 * contour.segment_count());
    for s in &contour.vertical {
        points.push(Point::new(s.at, s.lo));
        points.push(Point::new(s.at, s.hi));
    }
    for s in &contour.horizontal {
        points.push(Point::new(s.lo, s.at));
        points.push(Point::new(s.hi, s.at));
    }
    points.sort_unstable();
    points.dedup();

    points
        .into_iter()
        .map(|p| {
            let mut free = Directions::default();
            for e in edges_through(&contour.horizontal_edges, p.y, p.x) {
                free.east |= p.x < e.hi;
                free.west |= e.lo < p.x;
                free.north |= e.facing == Facing::High;
                free.south |= e.facing == Facing::Low;
            }
            for e in edges_through(&contour.vertical_edges, p.x, p.y) {
                free.north |= p.y < e.hi;
                free.south |= e.lo < p.y;
                free.east |= e.facing == Facing::High;
                free.west |= e.facing == Facing::Low;
            }
            Vertex { point: p, free }
        })
        .collect()
}

/// Edges at `at` whose extent contains `v`. Relies on the edges being sorted
/// by `(at, lo)` and overlapping at most in endpoints.
fn edges_through(edges: &[Edge], at: Coord, v: Coord) -> impl Iterator<Item = &Edge> {
    let end = edges.partition_point(|e| (e.at, e.lo) <= (at, v));
    edges[..end].iter().rev().take_while(move |e| e.at == at && e.hi >= v)
}

/// Blocks covering everything just outside `frame`.
fn frame_blocks(frame: &Rect) -> [(Span, Span); 4] {
    let (x1, y1, x2, y2) = (frame.x, frame.y, frame.right(), frame.top());
    let tall = Span::closed(y1 - 1, y2 + 1);
    let wide = Span::closed(x1 - 1, x2 + 1);
    [
        (Span::new(x1 - 1, x1, true, false), tall),
        (Span::new(x2, x2 + 1, false, true), tall),
        (wide, Span::new(y1 - 1, y1, true, false)),
        (wide, Span::new(y2, y2 + 1, false, true)),
    ]
}

/// One plane sweep along the first span of each block; reports the contour
/// edges perpendicular to the sweep direction.
fn sweep(blocks: impl Iterator<Item = (Span, Span)>) -> Vec<Edge> {
    let blocks: Vec<(Span, Span)> = blocks.filter(|(a, c)| !a.is_empty() && !c.is_empty()).collect();
    let mut tree = SegmentTree::new(blocks.iter().flat_map(|(_, c)| [c.lo, c.hi]));
    let leaves: Vec<LeafRange> = blocks
        .iter()
        .map(|(_, c)| tree.leaf_range(c).expect("endpoints registered").expect("non-empty span"))
        .collect();

    let mut starts: Vec<usize> = (0..blocks.len()).collect();
    starts.sort_by_key(|&i| blocks[i].0.lo);
    let mut ends: Vec<usize> = (0..blocks.len()).collect();
    ends.sort_by_key(|&i| blocks[i].0.hi);

    let mut edges = Vec::new();
    let (mut si, mut ei) = (0, 0);
    let mut low_side = Vec::new();
    let mut high_side = Vec::new();
    let mut runs = Vec::new();
    let mut pieces = Vec::new();

    while si < starts.len() || ei < ends.len() {
        let x = match (starts.get(si), ends.get(ei)) {
            (Some(&s), Some(&e)) => blocks[s].0.lo.min(blocks[e].0.hi),
            (Some(&s), None) => blocks[s].0.lo,
            (None, Some(&e)) => blocks[e].0.hi,
            (None, None) => unreachable!(),
        };
        let opening = take_while_at(&starts, &mut si, |i| blocks[i].0.lo == x);
        let closing = take_while_at(&ends, &mut ei, |i| blocks[i].0.hi == x);

        // covering x - δ  ->  covering x
        for &i in closing.iter().filter(|&&i| !blocks[i].0.hi_closed) {
            tree.update_leaves(leaves[i], -1);
        }
        for &i in opening.iter().filter(|&&i| blocks[i].0.lo_closed) {
            tree.update_leaves(leaves[i], 1);
        }

        // Free points blocked just below x or just above it.
        low_side.clear();
        low_side.extend(closing.iter().filter(|&&i| !blocks[i].0.hi_closed).map(|&i| leaves[i]));
        merge_ranges(&mut low_side);
        high_side.clear();
        high_side.extend(opening.iter().filter(|&&i| !blocks[i].0.lo_closed).map(|&i| leaves[i]));
        merge_ranges(&mut high_side);
        let mut changed: Vec<LeafRange> = low_side.iter().chain(high_side.iter()).copied().collect();
        merge_ranges(&mut changed);

        for &range in &changed {
            runs.clear();
            tree.uncovered_runs(range, &mut runs);
            for &run in &runs {
                pieces.clear();
                classify(run, &low_side, &high_side, &mut pieces);
                for &(piece, facing) in &pieces {
                    let span = tree.leaf_span(piece);
                    edges.push(Edge { at: x, lo: span.lo, hi: span.hi, facing });
                }
            }
        }

        // covering x  ->  covering x + δ
        for &i in closing.iter().filter(|&&i| blocks[i].0.hi_closed) {
            tree.update_leaves(leaves[i], -1);
        }
        for &i in opening.iter().filter(|&&i| !blocks[i].0.lo_closed) {
            tree.update_leaves(leaves[i], 1);
        }
    }
    edges
}

fn take_while_at<'a>(order: &'a [usize], pos: &mut usize, at: impl Fn(usize) -> bool) -> &'a [usize] {
    let start = *pos;
    while *pos < order.len() && at(order[*pos]) {
        *pos += 1;
    }
    &order[start..*pos]
}

/// Sorts and unions leaf ranges, joining ranges that touch.
fn merge_ranges(ranges: &mut Vec<LeafRange>) {
    ranges.sort_unstable();
    let mut out = 0;
    for i in 0..ranges.len() {
        if out > 0 && ranges[i].0 <= ranges[out - 1].1 + 1 {
            ranges[out - 1].1 = ranges[out - 1].1.max(ranges[i].1);
        } else {
            ranges[out] = ranges[i];
            out += 1;
        }
    }
    ranges.truncate(out);
}

/// Index of the range in `ranges` containing `leaf`, or of the first range after it.
fn locate(ranges: &[LeafRange], leaf: usize) -> (bool, usize) {
    let i = ranges.partition_point(|r| r.1 < leaf);
    match ranges.get(i) {
        Some(r) if r.0 <= leaf => (true, r.1 + 1),
        Some(r) => (false, r.0),
        None => (false, usize::MAX),
    }
}

/// Splits a run of free leaves into pieces of constant facing.
fn classify(run: LeafRange, low_side: &[LeafRange], high_side: &[LeafRange], out: &mut Vec<(LeafRange, Facing)>) {
    let mut pos = run.0;
    while pos <= run.1 {
        let (low_blocked, low_next) = locate(low_side, pos);
        let (high_blocked, high_next) = locate(high_side, pos);
        let next = low_next.min(high_next).min(run.1 + 1);
        let facing = match (low_blocked, high_blocked) {
            (true, false) => Facing::High,
            (false, true) => Facing::Low,
            (true, true) => Facing::Neither,
            (false, false) => unreachable!("run lies inside a changed range"),
        };
        out.push(((pos, next - 1), facing));
        pos = next;
    }
}

/// Unions collinear edges that touch into maximal segments.
fn merge_edges(edges: &[Edge]) -> Vec<Segment> {
    let mut sorted: Vec<Segment> = edges.iter().map(|e| Segment { at: e.at, lo: e.lo, hi: e.hi }).collect();
    sorted.sort_unstable();
    let mut merged: Vec<Segment> = Vec::with_capacity(sorted.len());
    for s in sorted {
        match merged.last_mut() {
            Some(last) if last.at == s.at && s.lo <= last.hi => last.hi = last.hi.max(s.hi),
            _ => merged.push(s),
        }
    }
    merged
}
