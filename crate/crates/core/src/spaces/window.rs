//! Finite position windows used by the sampling checks.

use std::collections::BTreeSet;

use super::{PositionKey, PositionSpace};
use crate::error::Result;

/// `[-radius, radius]^2`.
pub fn square(radius: i64) -> Vec<PositionKey> {
    rect(-radius..=radius, -radius..=radius)
}

pub fn rect(
    xs: std::ops::RangeInclusive<i64>,
    ys: std::ops::RangeInclusive<i64>,
) -> Vec<PositionKey> {
    xs.flat_map(|x| ys.clone().map(move |y| PositionKey::pair(x, y)))
        .collect()
}

pub fn interval(lo: i64, hi: i64) -> Vec<PositionKey> {
    (lo..=hi).map(PositionKey::scalar).collect()
}

/// Every position reachable from `seeds` by at most `steps` displacements.
pub fn reachable<'a>(
    space: &PositionSpace,
    seeds: impl IntoIterator<Item = &'a PositionKey>,
    steps: usize,
) -> Result<BTreeSet<PositionKey>> {
    let mut seen: BTreeSet<PositionKey> = seeds.into_iter().cloned().collect();
    let mut frontier: Vec<PositionKey> = seen.iter().cloned().collect();
    for _ in 0..steps {
        let mut next = Vec::new();
        for x in &frontier {
            for c in 0..space.coin_dim() {
                let y = space.apply(x, c)?;
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_from_origin() {
        let z2 = PositionSpace::z2();
        let o = PositionKey::pair(0, 0);
        let r = reachable(&z2, [&o], 3).unwrap();
        // |x| + |y| <= 3
        assert_eq!(r.len(), 25);
        assert!(r.iter().all(|p| p.x().abs() + p.y().abs() <= 3));
    }

    #[test]
    fn circle_saturates() {
        let c = PositionSpace::circle(5).unwrap();
        let r = reachable(&c, [&PositionKey::scalar(0)], 100).unwrap();
        assert_eq!(r.len(), 5);
    }
}
