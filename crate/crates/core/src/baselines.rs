//! Comparison placers: KAMER with first fit, and a weighted-Euclidean
//! heuristic restricted to the contour ("NAO-style").

use alloc::vec::Vec;

use crate::contour::{contour_vertices, find_contour_segments};
use crate::model::{
    check_demands, expand, ChipConfig, Coord, Demand, ModelError, PlacementRequest, PlacementResult, Point, Rect,
};
use crate::placer::direct_cost;

/// All maximal empty rectangles of a layout, in external coordinates.
///
/// For every pair of candidate x-boundaries the free gaps of the vertical
/// strip between them are empty and maximal in `y`; a gap is kept when it
/// cannot grow to the left or right either.
pub fn max_empty_rects(chip: &ChipConfig, placed: &[Rect]) -> Vec<Rect> {
    let mut xs: Vec<Coord> = placed.iter().flat_map(|m| [m.x, m.right()]).collect();
    xs.push(0);
    xs.push(chip.width);
    xs.sort_unstable();
    xs.dedup();

    let mut out = Vec::new();
    let mut blockers: Vec<(Coord, Coord)> = Vec::new();
    for (i, &left) in xs.iter().enumerate() {
        for &right in &xs[i + 1..] {
            blockers.clear();
            blockers.extend(placed.iter().filter(|m| m.x < right && m.right() > left).map(|m| (m.y, m.top())));
            blockers.sort_unstable();
            let mut floor = 0;
            let mut gaps = Vec::new();
            for &(lo, hi) in &blockers {
                if lo > floor {
                    gaps.push((floor, lo));
                }
                floor = floor.max(hi);
            }
            if chip.height > floor {
                gaps.push((floor, chip.height));
            }
            for (bottom, top) in gaps {
                let touches = |m: &&Rect| m.y < top && m.top() > bottom;
                let left_closed = left == 0 || placed.iter().filter(touches).any(|m| m.right() == left);
                let right_closed = right == chip.width || placed.iter().filter(touches).any(|m| m.x == right);
                if left_closed && right_closed {
                    out.push(Rect::from_corners(left, bottom, right, top));
                }
            }
        }
    }
    out
}

/// Bottom-left corner of the first maximal empty rectangle, in `(y, x)`
/// order, that can hold the module.
pub fn kamer_first_fit(
    chip: &ChipConfig,
    placed: &[Rect],
    request: &PlacementRequest,
) -> Result<PlacementResult, ModelError> {
    kamer_first_fit_doubled(chip, placed, request.width, request.height, &request.doubled_demands())
}

pub fn kamer_first_fit_doubled(
    chip: &ChipConfig,
    placed: &[Rect],
    width: Coord,
    height: Coord,
    demands: &[Demand],
) -> Result<PlacementResult, ModelError> {
    expand(chip, placed, width, height)?;
    check_demands(chip, demands)?;
    let mut rects = max_empty_rects(chip, placed);
    rects.sort_unstable_by_key(|r| (r.y, r.x, r.w, r.h));
    let total = rects.len();
    let Some(slot) = rects.into_iter().find(|r| r.w >= width && r.h >= height) else {
        return Ok(PlacementResult::Rejected);
    };
    let center = Point::new(2 * slot.x + width, 2 * slot.y + height);
    Ok(PlacementResult::Placed { center, cost: direct_cost(center, demands), candidates: total })
}

fn euclidean_cost(p: Point, demands: &[Demand]) -> f64 {
    demands
        .iter()
        .map(|d| {
            let dx = (p.x - d.at.x) as f64;
            let dy = (p.y - d.at.y) as f64;
            d.weight as f64 * libm::sqrt(dx * dx + dy * dy)
        })
        .sum()
}

/// Nearest integer to `num / den` with the given parity (`den > 0`).
fn round_to_parity(num: i128, den: i128, parity: i128) -> Coord {
    let a = num - parity * den;
    let b = 2 * den;
    let u = (2 * a + b).div_euclid(2 * b);
    (2 * u + parity) as Coord
}

/// Contour point minimizing the weighted Euclidean distance, among contour
/// vertices and the projections of the weighted centroid onto each contour
/// segment. The centroid is rounded so the module corner stays on the cell
/// grid. The reported cost is still the weighted Manhattan one.
pub fn nao_heuristic(
    chip: &ChipConfig,
    placed: &[Rect],
    request: &PlacementRequest,
) -> Result<PlacementResult, ModelError> {
    nao_heuristic_doubled(chip, placed, request.width, request.height, &request.doubled_demands())
}

pub fn nao_heuristic_doubled(
    chip: &ChipConfig,
    placed: &[Rect],
    width: Coord,
    height: Coord,
    demands: &[Demand],
) -> Result<PlacementResult, ModelError> {
    let scene = expand(chip, placed, width, height)?;
    check_demands(chip, demands)?;
    let contour = find_contour_segments(&scene);
    if contour.is_empty() {
        return Ok(PlacementResult::Rejected);
    }
    let mut points: Vec<Point> = contour_vertices(&contour).into_iter().map(|v| v.point).collect();

    let total: i128 = demands.iter().map(|d| d.weight as i128).sum();
    if total > 0 {
        let sx: i128 = demands.iter().map(|d| d.weight as i128 * d.at.x as i128).sum();
        let sy: i128 = demands.iter().map(|d| d.weight as i128 * d.at.y as i128).sum();
        let tx = round_to_parity(sx, total, (width % 2) as i128);
        let ty = round_to_parity(sy, total, (height % 2) as i128);
        points.extend(contour.vertical.iter().map(|s| Point::new(s.at, ty.clamp(s.lo, s.hi))));
        points.extend(contour.horizontal.iter().map(|s| Point::new(tx.clamp(s.lo, s.hi), s.at)));
    }
    points.sort_unstable();
    points.dedup();

    let candidates = points.len();
    let center = points
        .into_iter()
        .map(|p| (euclidean_cost(p, demands), p))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, p)| p)
        .expect("non-empty contour has vertices");
    Ok(PlacementResult::Placed { center, cost: direct_cost(center, demands), candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DemandPoint;
    use alloc::vec;

    #[test]
    fn empty_chip_has_one_maximal_rect() {
        let chip = ChipConfig::new(10, 8).unwrap();
        assert_eq!(max_empty_rects(&chip, &[]), vec![Rect::new(0, 0, 10, 8)]);
    }

    #[test]
    fn one_module_in_the_middle_gives_four() {
        let chip = ChipConfig::new(10, 10).unwrap();
        let mut rects = max_empty_rects(&chip, &[Rect::new(4, 4, 2, 2)]);
        rects.sort();
        assert_eq!(
            rects,
            vec![Rect::new(0, 0, 4, 10), Rect::new(0, 0, 10, 4), Rect::new(0, 6, 10, 4), Rect::new(6, 0, 4, 10)]
        );
    }

    #[test]
    fn first_fit_on_empty_chip_uses_origin() {
        let chip = ChipConfig::new(10, 8).unwrap();
        let r = kamer_first_fit(&chip, &[], &PlacementRequest::new(3, 2, vec![])).unwrap();
        assert_eq!(r.module_rect(3, 2), Some(Rect::new(0, 0, 3, 2)));
    }

    #[test]
    fn first_fit_rejects_when_nothing_fits() {
        let chip = ChipConfig::new(10, 8).unwrap();
        let placed = [Rect::new(0, 0, 10, 4), Rect::new(0, 5, 10, 3)];
        let r = kamer_first_fit(&chip, &placed, &PlacementRequest::new(2, 2, vec![])).unwrap();
        assert_eq!(r, PlacementResult::Rejected);
    }

    #[test]
    fn first_fit_skips_narrow_gaps() {
        let chip = ChipConfig::new(10, 8).unwrap();
        let placed = [Rect::new(0, 0, 9, 3)];
        let r = kamer_first_fit(&chip, &placed, &PlacementRequest::new(2, 2, vec![])).unwrap();
        assert_eq!(r.module_rect(2, 2), Some(Rect::new(0, 3, 2, 2)));
    }

    #[test]
    fn parity_rounding() {
        assert_eq!(round_to_parity(7, 2, 0), 4);
        assert_eq!(round_to_parity(7, 2, 1), 3);
        assert_eq!(round_to_parity(-3, 1, 0), -2);
        assert_eq!(round_to_parity(10, 1, 0), 10);
        assert_eq!(round_to_parity(10, 1, 1), 11);
    }

    #[test]
    fn nao_picks_nearest_contour_point_for_one_demand() {
        let chip = ChipConfig::new(16, 12).unwrap();
        let req = PlacementRequest::new(4, 2, vec![DemandPoint::new(7, 6, 2)]);
        // module in the middle, demand at its center
        let r = nao_heuristic(&chip, &[Rect::new(5, 5, 4, 2)], &req).unwrap();
        // blocked region for centers is (3, 11) x (4, 8); nearest boundary point is (7, 4) or (7, 8)
        assert_eq!(r.center(), Some(Point::new(14, 8)));
    }

    #[test]
    fn nao_rejects_without_free_space() {
        let chip = ChipConfig::new(8, 8).unwrap();
        let req = PlacementRequest::new(4, 4, vec![DemandPoint::new(1, 1, 1)]);
        let r = nao_heuristic(&chip, &[Rect::new(3, 3, 2, 2)], &req).unwrap();
        assert_eq!(r, PlacementResult::Rejected);
    }
}
