//! Free-space management and routing-conscious placement of rectangular
//! modules on a partially reconfigurable chip.
//!
//! The crate is `no_std` and only needs `alloc`. All geometry is exact
//! integer arithmetic: external coordinates are doubled on the way in so
//! that half the new module's width and height are integers.
//!
//! The pipeline for one placement request is:
//!
//! 1. [`model::to_internal`] expands every placed module by half the new
//!    module's size and shrinks the chip, turning rectangle placement into
//!    point placement.
//! 2. [`contour::find_contour_segments`] runs two plane sweeps over a
//!    [`segment_tree::SegmentTree`] and reports every contour segment of the
//!    free space, including zero-width corridors between abutting modules.
//! 3. [`placer::place`] picks the feasible point with minimum
//!    buswidth-weighted Manhattan distance to the demand points.
//!
//! [`baselines`] carries the comparison heuristics and [`oracles`] the
//! brute-force references used by the test suites.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baselines;
pub mod contour;
pub mod model;
pub mod oracles;
pub mod placer;
pub mod segment_tree;
pub mod span;

pub use contour::{contour_vertices, find_contour_segments, is_feasible, Contour};
pub use model::{
    expand, to_internal, ChipConfig, Coord, Demand, DemandPoint, ExpandedScene, Halves, ModelError, Obstacle,
    PlacementRequest, PlacementResult, Point, Rect,
};
pub use placer::{place, place_doubled, Algorithm};
pub use span::Span;
