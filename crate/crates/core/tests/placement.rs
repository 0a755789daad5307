mod common;

use proptest::prelude::*;
use rand::Rng;
use rcplace_core::baselines::{kamer_first_fit, max_empty_rects, nao_heuristic};
use rcplace_core::contour::find_contour_segments;
use rcplace_core::model::{Demand, DemandPoint, Obstacle};
use rcplace_core::oracles::{doubled_cost, grid_optimal_placement, raster_placements};
use rcplace_core::placer::{candidates, direct_cost, evaluate_costs, place_in_scene, MedianAxes};
use rcplace_core::{place, to_internal, ExpandedScene, PlacementRequest, PlacementResult, Point, Rect};

fn placed_rect_is_valid(r: &Rect, chip: &Rect, modules: &[Rect]) -> bool {
    chip.contains_rect(r) && modules.iter().all(|m| !m.interiors_overlap(r))
}

/// Same check for a doubled center, whose corner may sit on a half unit.
fn center_is_valid(center: Point, request: &PlacementRequest, chip: &Rect, modules: &[Rect]) -> bool {
    let r = Rect::new(center.x - request.width, center.y - request.height, 2 * request.width, 2 * request.height);
    let doubled: Vec<Rect> = modules.iter().map(|m| m.scaled(2)).collect();
    placed_rect_is_valid(&r, &chip.scaled(2), &doubled)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn place_matches_the_grid_optimum(seed in any::<u64>()) {
        let (chip, modules, request) = common::random_instance(seed, 32, 8, 6);
        let result = place(&chip, &modules, &request).unwrap();
        let oracle = grid_optimal_placement(&chip, &modules, &request).unwrap();
        match (result, oracle) {
            (PlacementResult::Placed { center, cost, .. }, Some((best, best_cost))) => {
                prop_assert_eq!(cost, best_cost);
                prop_assert_eq!(doubled_cost(center, &request.demands), cost);
                if request.demands.iter().any(|d| d.buswidth > 0) {
                    prop_assert_eq!(center, best);
                }
                prop_assert!(center_is_valid(center, &request, &chip.rect(), &modules));
            }
            (PlacementResult::Rejected, None) => {}
            (r, o) => prop_assert!(false, "place {:?} but oracle {:?}", r, o),
        }
    }

    #[test]
    fn grid_optimum_is_a_candidate(seed in any::<u64>()) {
        let (chip, modules, request) = common::random_instance(seed, 24, 8, 6);
        prop_assume!(request.demands.iter().any(|d| d.buswidth > 0));
        let Some((best, _)) = grid_optimal_placement(&chip, &modules, &request).unwrap() else {
            return Ok(());
        };
        let scene = to_internal(&chip, &modules, &request).unwrap();
        let demands: Vec<Demand> = request.demands.iter().map(Demand::from_external).collect();
        let axes = MedianAxes::of(&demands).unwrap();
        let set = candidates(&scene, &find_contour_segments(&scene), &axes);
        prop_assert!(set.points.iter().any(|c| c.point == best));
    }

    #[test]
    fn scan_costs_equal_direct_sums(
        points in prop::collection::vec((-100i64..100, -100i64..100), 1..60),
        demands in prop::collection::vec((-100i64..100, -100i64..100, 0u64..20), 0..25),
    ) {
        let points: Vec<Point> = points.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let demands: Vec<Demand> = demands.into_iter().map(|(x, y, w)| Demand { at: Point::new(x, y), weight: w }).collect();
        let scanned = evaluate_costs(&points, &demands);
        for (p, c) in points.iter().zip(scanned) {
            let naive: u64 = demands.iter().map(|d| d.weight * ((p.x - d.at.x).unsigned_abs() + (p.y - d.at.y).unsigned_abs())).sum();
            prop_assert_eq!(c, naive);
            prop_assert_eq!(direct_cost(*p, &demands), naive);
        }
    }

    #[test]
    fn scaling_buswidths_keeps_the_optimum(seed in any::<u64>(), k in 1u64..6) {
        let (chip, modules, request) = common::random_instance(seed, 32, 8, 6);
        let scaled = PlacementRequest::new(
            request.width,
            request.height,
            request.demands.iter().map(|d| DemandPoint::new(d.x, d.y, d.buswidth * k)).collect(),
        );
        let a = place(&chip, &modules, &request).unwrap();
        let b = place(&chip, &modules, &scaled).unwrap();
        prop_assert_eq!(a.center(), b.center());
        prop_assert_eq!(a.cost().map(|c| c.0 * k as i64), b.cost().map(|c| c.0));
    }

    #[test]
    fn translating_the_scene_translates_the_optimum(seed in any::<u64>(), dx in -50i64..50, dy in -50i64..50) {
        let (chip, modules, request) = common::random_instance(seed, 32, 8, 6);
        let scene = to_internal(&chip, &modules, &request).unwrap();
        let demands: Vec<Demand> = request.demands.iter().map(Demand::from_external).collect();
        let shift = |r: Rect| Rect::new(r.x + dx, r.y + dy, r.w, r.h);
        let moved = ExpandedScene::from_parts(
            shift(scene.shrunk_chip),
            scene.expanded.iter().map(|o| Obstacle { rect: shift(o.rect), cut: o.cut }),
        );
        let moved_demands: Vec<Demand> = demands
            .iter()
            .map(|d| Demand { at: Point::new(d.at.x + dx, d.at.y + dy), weight: d.weight })
            .collect();
        let a = place_in_scene(&scene, &demands);
        let b = place_in_scene(&moved, &moved_demands);
        prop_assert_eq!(a.center().map(|p| Point::new(p.x + dx, p.y + dy)), b.center());
        prop_assert_eq!(a.cost(), b.cost());
    }

    #[test]
    fn nao_never_beats_rcp(seed in any::<u64>()) {
        let (chip, modules, request) = common::random_instance(seed, 32, 8, 6);
        let rcp = place(&chip, &modules, &request).unwrap();
        let nao = nao_heuristic(&chip, &modules, &request).unwrap();
        prop_assert_eq!(rcp.is_placed(), nao.is_placed());
        if let (Some(a), Some(b)) = (rcp.cost(), nao.cost()) {
            prop_assert!(a <= b);
            prop_assert!(center_is_valid(nao.center().unwrap(), &request, &chip.rect(), &modules));
        }
    }

    #[test]
    fn first_fit_rejects_iff_nothing_fits(seed in any::<u64>()) {
        let (chip, modules, request) = common::random_instance(seed, 32, 10, 2);
        let kff = kamer_first_fit(&chip, &modules, &request).unwrap();
        let grid = raster_placements(&chip, &modules, &request).unwrap();
        prop_assert_eq!(kff.is_placed(), !grid.is_empty());
        if let Some(rect) = kff.module_rect(request.width, request.height) {
            prop_assert!(placed_rect_is_valid(&rect, &chip.rect(), &modules));
        }
    }

    #[test]
    fn maximal_empty_rects_are_empty_and_maximal(seed in any::<u64>()) {
        let (chip, modules, _) = common::random_instance(seed, 24, 8, 0);
        let rects = max_empty_rects(&chip, &modules);
        let frame = chip.rect();
        for r in &rects {
            prop_assert!(r.w > 0 && r.h > 0);
            prop_assert!(placed_rect_is_valid(r, &frame, &modules));
            let grown = [
                Rect::new(r.x - 1, r.y, r.w + 1, r.h),
                Rect::new(r.x, r.y - 1, r.w, r.h + 1),
                Rect::new(r.x, r.y, r.w + 1, r.h),
                Rect::new(r.x, r.y, r.w, r.h + 1),
            ];
            for g in grown {
                prop_assert!(!placed_rect_is_valid(&g, &frame, &modules), "{:?} grows to {:?}", r, g);
            }
        }
        // every free unit cell lies in some rectangle
        for y in 0..chip.height {
            for x in 0..chip.width {
                let cell = Rect::new(x, y, 1, 1);
                if placed_rect_is_valid(&cell, &frame, &modules) {
                    prop_assert!(rects.iter().any(|r| r.contains_rect(&cell)));
                }
            }
        }
    }
}

#[test]
fn feasible_median_short_circuits() {
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let chip = rcplace_core::ChipConfig::new(20, 20).unwrap();
        let x = rng.random_range(2..=18);
        let y = rng.random_range(2..=18);
        let req = PlacementRequest::new(4, 4, vec![DemandPoint::new(x, y, 3)]);
        let r = place(&chip, &[], &req).unwrap();
        assert_eq!(r, PlacementResult::Placed { center: Point::new(2 * x, 2 * y), cost: 0, candidates: 1 });
    }
}
