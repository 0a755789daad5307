//! Random layouts for tests and scaling runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcplace_core::{ChipConfig, Coord, DemandPoint, PlacementRequest, Rect};

/// Up to `n` interior-disjoint modules with sides in `1..=max_side`, placed
/// by rejection. Half the time corners snap to a coarse grid so that
/// abutting modules and shared coordinates are common.
pub fn random_layout(rng: &mut impl Rng, chip: &ChipConfig, n: usize, max_side: Coord) -> Vec<Rect> {
    let snap = rng.random_range(1..=4);
    let mut placed: Vec<Rect> = Vec::with_capacity(n);
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

/// A random chip of at most `max_chip` per side, up to `max_n` modules and a
/// request with up to `max_k` demands.
pub fn random_instance(
    seed: u64,
    max_chip: Coord,
    max_n: usize,
    max_k: usize,
) -> (ChipConfig, Vec<Rect>, PlacementRequest) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chip = ChipConfig::new(rng.random_range(2..=max_chip), rng.random_range(2..=max_chip)).expect("positive size");
    let n = rng.random_range(0..=max_n);
    let side = rng.random_range(1..=(max_chip / 2).max(1));
    let modules = random_layout(&mut rng, &chip, n, side);
    let w = rng.random_range(1..=chip.width.min(max_chip / 2).max(1));
    let h = rng.random_range(1..=chip.height.min(max_chip / 2).max(1));
    let k = rng.random_range(0..=max_k);
    let demands = random_demands(&mut rng, &chip, k);
    (chip, modules, PlacementRequest::new(w, h, demands))
}

/// `n` modules, one per cell of a near-square grid of 12x12 cells, each with
/// random size and offset inside its cell, and a 6x6 request with eight
/// demands.
pub fn synthetic_scene(n: usize, seed: u64) -> (ChipConfig, Vec<Rect>, PlacementRequest) {
    const CELL: Coord = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = (n as f64).sqrt().ceil().max(1.0) as usize;
    let rows = n.div_ceil(cols).max(1);
    let chip = ChipConfig::new(cols as Coord * CELL, rows as Coord * CELL).expect("positive size");
    let modules = (0..n)
        .map(|i| {
            let w = rng.random_range(4..=10);
            let h = rng.random_range(4..=10);
            let x = (i % cols) as Coord * CELL + rng.random_range(0..=CELL - w);
            let y = (i / cols) as Coord * CELL + rng.random_range(0..=CELL - h);
            Rect::new(x, y, w, h)
        })
        .collect();
    let demands = random_demands(&mut rng, &chip, 8);
    (chip, modules, PlacementRequest::new(6, 6, demands))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts_are_disjoint_and_inside() {
        for seed in 0..50 {
            let (chip, modules, request) = random_instance(seed, 40, 15, 4);
            for (i, a) in modules.iter().enumerate() {
                assert!(chip.rect().contains_rect(a));
                assert!(modules[i + 1..].iter().all(|b| !a.interiors_overlap(b)));
            }
            assert!(request.width <= chip.width && request.height <= chip.height);
        }
    }

    #[test]
    fn synthetic_scene_has_n_valid_modules() {
        let (chip, modules, request) = synthetic_scene(1000, 3);
        assert_eq!(modules.len(), 1000);
        assert!(rcplace_core::place(&chip, &modules, &request).is_ok());
    }
}
