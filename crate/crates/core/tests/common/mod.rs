#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcplace_core::{ChipConfig, Coord, DemandPoint, PlacementRequest, Rect};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `n` random interior-disjoint modules; failed attempts are skipped.
/// Modules are snapped to a coarse grid now and then so that abutting sides
/// and shared coordinates show up often.
pub fn random_layout(rng: &mut impl Rng, chip: &ChipConfig, n: usize, max_side: Coord) -> Vec<Rect> {
    let mut placed: Vec<Rect> = Vec::new();
    let snap = rng.random_range(1..=4);
    for _ in 0..n * 8 {
        if placed.len() == n {
            break;
        }
        let w = rng.random_range(1..=max_side.min(chip.width));
        let h = rng.random_range(1..=max_side.min(chip.height));
        let mut x = rng.random_range(0..=chip.width - w);
        let mut y = rng.random_range(0..=chip.height - h);
        if rng.random_bool(0.5) {
            x -= x % snap;
            y -= y % snap;
        }
        let r = Rect::new(x, y, w, h);
        if placed.iter().all(|m| !m.interiors_overlap(&r)) {
            placed.push(r);
        }
    }
    placed
}

pub fn random_demands(rng: &mut impl Rng, chip: &ChipConfig, k: usize) -> Vec<DemandPoint> {
    (0..k)
        .map(|_| {
            DemandPoint::new(
                rng.random_range(0..=chip.width),
                rng.random_range(0..=chip.height),
                rng.random_range(0..=10),
            )
        })
        .collect()
}

/// A chip, a layout and a request with random size and demands.
pub fn random_instance(
    seed: u64,
    max_chip: Coord,
    max_n: usize,
    max_k: usize,
) -> (ChipConfig, Vec<Rect>, PlacementRequest) {
    let mut rng = rng(seed);
    let chip = ChipConfig::new(rng.random_range(2..=max_chip), rng.random_range(2..=max_chip)).unwrap();
    let n = rng.random_range(0..=max_n);
    let side = rng.random_range(1..=(max_chip / 2).max(1));
    let modules = random_layout(&mut rng, &chip, n, side);
    let w = rng.random_range(1..=chip.width.min(max_chip / 2).max(1));
    let h = rng.random_range(1..=chip.height.min(max_chip / 2).max(1));
    let k = rng.random_range(0..=max_k);
    let demands = random_demands(&mut rng, &chip, k);
    (chip, modules, PlacementRequest::new(w, h, demands))
}
