#![allow(dead_code)]

use std::sync::Arc;

use qwproj::spaces::{Geometry, PositionKey, PositionSpace};
use qwproj::{Amplitude, CoinVector, WalkState};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_position(space: &PositionSpace, rng: &mut ChaCha8Rng, radius: i64) -> PositionKey {
    match space.geometry() {
        Geometry::Cyclic { modulus } => PositionKey::scalar(rng.gen_range(0..modulus)),
        Geometry::Lattice { dim } => {
            let coords: Vec<i64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
            PositionKey::new(&coords)
        }
    }
}

pub fn random_coin(dim: usize, rng: &mut ChaCha8Rng) -> CoinVector {
    (0..dim)
        .map(|_| Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// A normalised state on 1 to `max_sites` random positions.
pub fn random_state(
    space: &Arc<PositionSpace>,
    rng: &mut ChaCha8Rng,
    max_sites: usize,
    radius: i64,
) -> WalkState {
    let sites = rng.gen_range(1..=max_sites);
    let d = space.coin_dim();
    let assignments: Vec<_> = (0..sites)
        .map(|_| (random_position(space, rng, radius), random_coin(d, rng)))
        .collect();
    let s = WalkState::new(space.clone(), assignments).unwrap();
    s.normalized().unwrap()
}
