//! Domain types and the expand-and-shrink transform.
//!
//! External coordinates are chip cells. Internally every coordinate is
//! doubled so that `w_m / 2` and `h_m / 2` stay integral; values in this
//! "half-unit" space are printed through [`Halves`].

use alloc::vec::Vec;
use core::fmt;

use crate::segment_tree::SegmentTree;
use crate::span::Span;

pub type Coord = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub const fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    pub fn manhattan(&self, other: &Point) -> u64 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

/// Axis-parallel rectangle with lower-left corner `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub x: Coord,
    pub y: Coord,
    pub w: Coord,
    pub h: Coord,
}

impl Rect {
    pub const fn new(x: Coord, y: Coord, w: Coord, h: Coord) -> Self {
        Rect { x, y, w, h }
    }

    pub fn from_corners(x1: Coord, y1: Coord, x2: Coord, y2: Coord) -> Self {
        Rect { x: x1, y: y1, w: x2 - x1, h: y2 - y1 }
    }

    pub fn right(&self) -> Coord {
        self.x + self.w
    }

    pub fn top(&self) -> Coord {
        self.y + self.h
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x <= other.x && self.y <= other.y && other.right() <= self.right() && other.top() <= self.top()
    }

    pub fn interiors_overlap(&self, other: &Rect) -> bool {
        self.x < other.right() && other.x < self.right() && self.y < other.top() && other.y < self.top()
    }

    /// Closed intersection, `None` when the rectangles are disjoint.
    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x1 = self.x.max(other.x);
        let y1 = self.y.max(other.y);
        let x2 = self.right().min(other.right());
        let y2 = self.top().min(other.top());
        (x1 <= x2 && y1 <= y2).then(|| Rect::from_corners(x1, y1, x2, y2))
    }

    /// `other` pokes through `self` on both vertical sides while `self`
    /// pokes through `other` on both horizontal sides (a plus-shaped overlap).
    pub fn crosses(&self, other: &Rect) -> bool {
        fn one_way(a: &Rect, b: &Rect) -> bool {
            a.x < b.x && b.right() < a.right() && b.y < a.y && a.top() < b.top()
        }
        one_way(self, other) || one_way(other, self)
    }

    pub fn scaled(&self, k: Coord) -> Rect {
        Rect::new(self.x * k, self.y * k, self.w * k, self.h * k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChipConfig {
    pub width: Coord,
    pub height: Coord,
}

impl ChipConfig {
    pub fn new(width: Coord, height: Coord) -> Result<Self, ModelError> {
        if width <= 0 || height <= 0 {
            return Err(ModelError::InvalidChip { width, height });
        }
        Ok(ChipConfig { width, height })
    }

    pub fn area(&self) -> Coord {
        self.width * self.height
    }

    pub fn rect(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }
}

/// A communication target of the new module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DemandPoint {
    pub x: Coord,
    pub y: Coord,
    pub buswidth: u64,
}

impl DemandPoint {
    pub const fn new(x: Coord, y: Coord, buswidth: u64) -> Self {
        DemandPoint { x, y, buswidth }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementRequest {
    pub width: Coord,
    pub height: Coord,
    pub demands: Vec<DemandPoint>,
}

impl PlacementRequest {
    pub fn new(width: Coord, height: Coord, demands: Vec<DemandPoint>) -> Self {
        PlacementRequest { width, height, demands }
    }

    pub fn doubled_demands(&self) -> Vec<Demand> {
        self.demands.iter().map(Demand::from_external).collect()
    }
}

/// Demand point in doubled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Demand {
    pub at: Point,
    pub weight: u64,
}

impl Demand {
    pub fn from_external(d: &DemandPoint) -> Self {
        Demand { at: Point::new(2 * d.x, 2 * d.y), weight: d.buswidth }
    }
}

/// Which sides of an expanded module were cut off by the shrunk chip.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CutSides {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

/// An expanded module clipped to the shrunk chip.
///
/// The blocked set is the interior of the unclipped expansion intersected
/// with the shrunk chip. Along an original side that is the open side of
/// `rect`; along a cut side the points on the chip border stay blocked, so
/// that side is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Obstacle {
    pub rect: Rect,
    pub cut: CutSides,
}

impl Obstacle {
    pub fn x_span(&self) -> Span {
        Span::new(self.rect.x, self.rect.right(), self.cut.left, self.cut.right)
    }

    pub fn y_span(&self) -> Span {
        Span::new(self.rect.y, self.rect.top(), self.cut.bottom, self.cut.top)
    }

    pub fn is_void(&self) -> bool {
        self.x_span().is_empty() || self.y_span().is_empty()
    }

    pub fn blocks(&self, p: Point) -> bool {
        self.x_span().contains(p.x) && self.y_span().contains(p.y)
    }
}

/// Scene after the expand-and-shrink transform, in doubled coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedScene {
    /// The region available to the new module's center.
    pub shrunk_chip: Rect,
    pub expanded: Vec<Obstacle>,
    /// Number of placed modules before clipped-away ones were dropped.
    pub original_count: usize,
}

impl ExpandedScene {
    /// A scene built directly from obstacles; void ones are dropped.
    pub fn from_parts(shrunk_chip: Rect, obstacles: impl IntoIterator<Item = Obstacle>) -> Self {
        let obstacles: Vec<Obstacle> = obstacles.into_iter().collect();
        let original_count = obstacles.len();
        ExpandedScene {
            shrunk_chip,
            expanded: obstacles.into_iter().filter(|o| !o.is_void()).collect(),
            original_count,
        }
    }

    /// The same scene with every coordinate multiplied by `k > 0`.
    pub fn scaled(&self, k: Coord) -> Self {
        ExpandedScene {
            shrunk_chip: self.shrunk_chip.scaled(k),
            expanded: self.expanded.iter().map(|o| Obstacle { rect: o.rect.scaled(k), cut: o.cut }).collect(),
            original_count: self.original_count,
        }
    }
}

/// A coordinate or cost in half units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halves(pub i64);

impl Halves {
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn whole(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }
}

impl fmt::Display for Halves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let v = self.0.unsigned_abs();
        if v.is_multiple_of(2) {
            write!(f, "{}{}", sign, v / 2)
        } else {
            write!(f, "{}{}.5", sign, v / 2)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlacementResult {
    Placed {
        /// Center of the new module, doubled.
        center: Point,
        /// Weighted Manhattan cost in doubled units.
        cost: u64,
        /// Candidate points that were evaluated.
        candidates: usize,
    },
    Rejected,
}

impl PlacementResult {
    pub fn is_placed(&self) -> bool {
        matches!(self, PlacementResult::Placed { .. })
    }

    pub fn center(&self) -> Option<Point> {
        match self {
            PlacementResult::Placed { center, .. } => Some(*center),
            PlacementResult::Rejected => None,
        }
    }

    /// Cost in external units, exact to a half.
    pub fn cost(&self) -> Option<Halves> {
        match self {
            PlacementResult::Placed { cost, .. } => Some(Halves(*cost as i64)),
            PlacementResult::Rejected => None,
        }
    }

    /// The placed module in external coordinates, if its corner is integral.
    pub fn module_rect(&self, width: Coord, height: Coord) -> Option<Rect> {
        let c = self.center()?;
        let x = Halves(c.x - width).whole()?;
        let y = Halves(c.y - height).whole()?;
        Some(Rect::new(x, y, width, height))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelError {
    InvalidChip {
        width: Coord,
        height: Coord,
    },
    /// The new module has a non-positive dimension.
    InvalidRequest {
        width: Coord,
        height: Coord,
    },
    /// The new module is larger than the chip.
    EmptyShrunkChip,
    DegenerateModule {
        index: usize,
    },
    ModuleOutsideChip {
        index: usize,
    },
    OverlappingModules {
        index: usize,
    },
    DemandOutsideChip {
        index: usize,
    },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::InvalidChip { width, height } => write!(f, "invalid chip size {}x{}", width, height),
            ModelError::InvalidRequest { width, height } => write!(f, "invalid module size {}x{}", width, height),
            ModelError::EmptyShrunkChip => write!(f, "new module does not fit on the chip"),
            ModelError::DegenerateModule { index } => write!(f, "module {} has zero or negative size", index),
            ModelError::ModuleOutsideChip { index } => write!(f, "module {} lies outside the chip", index),
            ModelError::OverlappingModules { index } => write!(f, "module {} overlaps an earlier module", index),
            ModelError::DemandOutsideChip { index } => write!(f, "demand point {} lies outside the chip", index),
        }
    }
}

impl core::error::Error for ModelError {}

/// Checks the layout: positive sizes, inside the chip, interiors disjoint.
pub fn validate_layout(chip: &ChipConfig, modules: &[Rect]) -> Result<(), ModelError> {
    if chip.width <= 0 || chip.height <= 0 {
        return Err(ModelError::InvalidChip { width: chip.width, height: chip.height });
    }
    let frame = chip.rect();
    for (index, m) in modules.iter().enumerate() {
        if m.w <= 0 || m.h <= 0 {
            return Err(ModelError::DegenerateModule { index });
        }
        if !frame.contains_rect(m) {
            return Err(ModelError::ModuleOutsideChip { index });
        }
    }
    if let Some(index) = first_overlap(modules) {
        return Err(ModelError::OverlappingModules { index });
    }
    Ok(())
}

/// Index of a module whose interior meets an earlier-swept module, if any.
fn first_overlap(modules: &[Rect]) -> Option<usize> {
    // (x, is_open, index); closes sort before opens at equal x
    let mut events: Vec<(Coord, bool, usize)> = Vec::with_capacity(2 * modules.len());
    for (i, m) in modules.iter().enumerate() {
        events.push((m.x, true, i));
        events.push((m.right(), false, i));
    }
    events.sort_unstable();
    let mut tree = SegmentTree::new(modules.iter().flat_map(|m| [m.y, m.top()]));
    for (_, is_open, i) in events {
        let span = Span::open(modules[i].y, modules[i].top());
        if is_open {
            if !tree.is_clear(&span).expect("endpoints registered") {
                return Some(i);
            }
            tree.insert_span(span).expect("endpoints registered");
        } else {
            tree.remove_span(span).expect("open precedes close");
        }
    }
    None
}

/// Expands the placed modules by half the new module and shrinks the chip.
///
/// Everything in the result is doubled. The shrunk chip is
/// `[w_m, 2W - w_m] x [h_m, 2H - h_m]`; each module becomes
/// `[2x - w_m, 2(x + w) + w_m] x [2y - h_m, 2(y + h) + h_m]` intersected with
/// it. Modules whose blocked set vanishes are dropped.
pub fn expand(chip: &ChipConfig, modules: &[Rect], wm: Coord, hm: Coord) -> Result<ExpandedScene, ModelError> {
    validate_layout(chip, modules)?;
    if wm <= 0 || hm <= 0 {
        return Err(ModelError::InvalidRequest { width: wm, height: hm });
    }
    if wm > chip.width || hm > chip.height {
        return Err(ModelError::EmptyShrunkChip);
    }
    let shrunk = Rect::from_corners(wm, hm, 2 * chip.width - wm, 2 * chip.height - hm);
    let expanded = modules
        .iter()
        .filter_map(|m| {
            let grown = Rect::from_corners(2 * m.x - wm, 2 * m.y - hm, 2 * m.right() + wm, 2 * m.top() + hm);
            let rect = grown.intersection(&shrunk)?;
            let cut = CutSides {
                left: grown.x < shrunk.x,
                right: grown.right() > shrunk.right(),
                bottom: grown.y < shrunk.y,
                top: grown.top() > shrunk.top(),
            };
            let obstacle = Obstacle { rect, cut };
            (!obstacle.is_void()).then_some(obstacle)
        })
        .collect();
    Ok(ExpandedScene { shrunk_chip: shrunk, expanded, original_count: modules.len() })
}

/// Checks that doubled demand points lie on the chip.
pub fn check_demands(chip: &ChipConfig, demands: &[Demand]) -> Result<(), ModelError> {
    let frame = chip.rect().scaled(2);
    match demands
        .iter()
        .position(|d| d.at.x < frame.x || d.at.x > frame.right() || d.at.y < frame.y || d.at.y > frame.top())
    {
        Some(index) => Err(ModelError::DemandOutsideChip { index }),
        None => Ok(()),
    }
}

/// [`expand`] for a request, after checking its demand points.
pub fn to_internal(
    chip: &ChipConfig,
    modules: &[Rect],
    request: &PlacementRequest,
) -> Result<ExpandedScene, ModelError> {
    let scene = expand(chip, modules, request.width, request.height)?;
    check_demands(chip, &request.doubled_demands())?;
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn request(w: Coord, h: Coord) -> PlacementRequest {
        PlacementRequest::new(w, h, vec![])
    }

    #[test]
    fn empty_chip_shrinks_by_half_module() {
        let chip = ChipConfig::new(16, 12).unwrap();
        let scene = to_internal(&chip, &[], &request(4, 2)).unwrap();
        assert_eq!(scene.shrunk_chip, Rect::from_corners(4, 2, 28, 22));
        assert!(scene.expanded.is_empty());
    }

    #[test]
    fn interior_module_is_expanded() {
        let chip = ChipConfig::new(16, 12).unwrap();
        let scene = to_internal(&chip, &[Rect::new(5, 5, 3, 3)], &request(4, 2)).unwrap();
        // external [3,10] x [4,9]
        assert_eq!(scene.expanded[0].rect, Rect::from_corners(6, 8, 20, 18));
        assert_eq!(scene.expanded[0].cut, CutSides::default());
    }

    #[test]
    fn corner_module_is_clipped() {
        let chip = ChipConfig::new(16, 12).unwrap();
        let scene = to_internal(&chip, &[Rect::new(0, 0, 2, 2)], &request(4, 2)).unwrap();
        // external [-2,4] x [-1,3] clipped to [2,4] x [1,3]
        let o = scene.expanded[0];
        assert_eq!(o.rect, Rect::from_corners(4, 2, 8, 6));
        assert!(o.cut.left && o.cut.bottom && !o.cut.right && !o.cut.top);
        // border point under the module stays blocked, its outer corner does not
        assert!(o.blocks(Point::new(4, 4)));
        assert!(!o.blocks(Point::new(4, 6)));
    }

    #[test]
    fn void_obstacles_are_dropped() {
        let frame = Rect::from_corners(4, 2, 28, 22);
        let touching =
            Obstacle { rect: Rect::from_corners(4, 2, 4, 22), cut: CutSides { left: true, ..CutSides::default() } };
        let inside = Obstacle { rect: Rect::from_corners(6, 8, 20, 18), cut: CutSides::default() };
        let scene = ExpandedScene::from_parts(frame, [touching, inside]);
        assert_eq!(scene.original_count, 2);
        assert_eq!(scene.expanded, vec![inside]);
    }

    #[test]
    fn full_width_request_keeps_degenerate_frame() {
        let chip = ChipConfig::new(8, 8).unwrap();
        let scene = to_internal(&chip, &[Rect::new(0, 0, 8, 2)], &request(8, 2)).unwrap();
        assert_eq!(scene.shrunk_chip.w, 0);
        assert_eq!(scene.expanded.len(), 1);
        let o = scene.expanded[0];
        assert!(o.cut.left && o.cut.right);
        assert!(o.blocks(Point::new(8, 4)));
        assert!(!o.blocks(Point::new(8, 6)));
    }

    #[test]
    fn oversized_request_is_rejected() {
        let chip = ChipConfig::new(16, 12).unwrap();
        assert_eq!(to_internal(&chip, &[], &request(17, 2)), Err(ModelError::EmptyShrunkChip));
        assert_eq!(to_internal(&chip, &[], &request(0, 2)), Err(ModelError::InvalidRequest { width: 0, height: 2 }));
    }

    #[test]
    fn bad_layouts_are_rejected() {
        let chip = ChipConfig::new(16, 12).unwrap();
        let r = request(2, 2);
        assert_eq!(to_internal(&chip, &[Rect::new(15, 0, 2, 2)], &r), Err(ModelError::ModuleOutsideChip { index: 0 }));
        assert_eq!(to_internal(&chip, &[Rect::new(1, 1, 0, 2)], &r), Err(ModelError::DegenerateModule { index: 0 }));
        assert!(matches!(
            to_internal(&chip, &[Rect::new(0, 0, 4, 4), Rect::new(3, 3, 4, 4)], &r),
            Err(ModelError::OverlappingModules { .. })
        ));
        // abutting modules are fine
        assert!(to_internal(&chip, &[Rect::new(0, 0, 4, 4), Rect::new(4, 0, 4, 4), Rect::new(0, 4, 4, 4)], &r).is_ok());
    }

    #[test]
    fn demand_outside_chip_is_rejected() {
        let chip = ChipConfig::new(16, 12).unwrap();
        let r = PlacementRequest::new(2, 2, vec![DemandPoint::new(17, 0, 1)]);
        assert_eq!(to_internal(&chip, &[], &r), Err(ModelError::DemandOutsideChip { index: 0 }));
    }

    #[test]
    fn overlap_sweep_matches_pairwise_check() {
        let layouts: [&[Rect]; 4] = [
            &[Rect::new(0, 0, 2, 2), Rect::new(2, 2, 2, 2)],
            &[Rect::new(0, 0, 4, 1), Rect::new(1, 0, 1, 3)],
            &[Rect::new(0, 0, 4, 4), Rect::new(1, 1, 1, 1)],
            &[Rect::new(0, 0, 1, 5), Rect::new(1, 0, 1, 5), Rect::new(2, 2, 1, 1)],
        ];
        for layout in layouts {
            let pairwise =
                layout.iter().enumerate().any(|(i, a)| layout[i + 1..].iter().any(|b| a.interiors_overlap(b)));
            assert_eq!(first_overlap(layout).is_some(), pairwise, "{:?}", layout);
        }
    }

    #[test]
    fn halves_format() {
        assert_eq!(alloc::format!("{}", Halves(7)), "3.5");
        assert_eq!(alloc::format!("{}", Halves(8)), "4");
        assert_eq!(alloc::format!("{}", Halves(-1)), "-0.5");
    }
}
