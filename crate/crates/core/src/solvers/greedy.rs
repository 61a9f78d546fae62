use std::collections::BTreeSet;
use std::time::Instant;

use crate::geometry::{orientations, overlaps, Cuboid, Dims};
use crate::instance::InstanceSpec;
use crate::stability::Placed;

use super::SolveResult;

/// Corner-point greedy baseline.
///
/// Items are taken largest volume first (longest side breaks ties). For each
/// item the corner set is scanned in ascending `(z, y, x)` order and every
/// rotation is tried; the first in-bounds, non-overlapping position wins. The
/// used corner is replaced by the three corners the item exposes. Other
/// corners are never pruned, even once covered. Items that fit nowhere are
/// skipped. No stability constraint is applied.
pub fn greedy_solve(instance: &InstanceSpec) -> SolveResult {
    let started = Instant::now();
    let bin = instance.bin;

    let mut queue: Vec<(usize, Dims)> = instance
        .items
        .iter()
        .enumerate()
        .flat_map(|(i, t)| std::iter::repeat_n((i, t.dims()), t.quantity as usize))
        .collect();
    // stable: equal items keep their input order
    queue.sort_by(|a, b| {
        (b.1.volume(), b.1.max_side()).cmp(&(a.1.volume(), a.1.max_side()))
    });

    let mut corners: BTreeSet<(i64, i64, i64)> = BTreeSet::from([(0, 0, 0)]);
    let mut placed: Vec<Placed> = Vec::new();
    let mut volume = 0i64;
    let mut h_max = 0i64;

    for (item, dims) in queue {
        let rotations = match orientations(dims) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let mut choice = None;
        'corners: for &(z, y, x) in &corners {
            for rot in &rotations {
                if x + rot.l <= bin.l && y + rot.w <= bin.w && z + rot.h <= bin.h {
                    let candidate = Cuboid::at([x, y, z], *rot);
                    if !placed.iter().any(|p| overlaps(&candidate, &p.cuboid)) {
                        choice = Some(((z, y, x), candidate));
                        break 'corners;
                    }
                }
            }
        }
        if let Some((corner, c)) = choice {
            volume += c.volume();
            h_max = h_max.max(c.top());
            corners.remove(&corner);
            corners.insert((c.z, c.y, c.x_max()));
            corners.insert((c.z, c.y_max(), c.x));
            corners.insert((c.top(), c.y, c.x));
            placed.push(Placed { item, cuboid: c, weight: instance.items[item].weight });
        }
    }

    let eta = if h_max == 0 {
        0.0
    } else {
        volume as f64 / (bin.l as f64 * bin.w as f64 * h_max as f64)
    };
    SolveResult {
        solver: "greedy".to_string(),
        eta,
        placements: placed,
        actions: None,
        samples: 1,
        wall_time: started.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::ItemType;
    use crate::stability::StabilityParams;

    fn instance(bin: (i64, i64, i64), items: Vec<ItemType>) -> InstanceSpec {
        InstanceSpec {
            id: "t".into(),
            scheme: "test".into(),
            seed: 0,
            bin: Dims::new(bin.0, bin.1, bin.2),
            items,
            params: StabilityParams::unconstrained(),
        }
    }

    #[test]
    fn single_cube() {
        let inst = instance((10, 10, 10), vec![ItemType::new(Dims::new(5, 5, 5), 1.0, 1)]);
        let r = greedy_solve(&inst);
        assert_eq!(r.placements[0].cuboid, Cuboid::at([0, 0, 0], Dims::new(5, 5, 5)));
        assert_eq!(r.eta, 0.25);
    }

    #[test]
    fn two_cubes_hand_trace() {
        // After the first cube the corners sorted by (z, y, x) are
        // (0,0,5) -> x=5, (0,5,0) -> y=5, (5,0,0) -> z=5; x=5 comes first.
        let inst = instance((10, 10, 10), vec![ItemType::new(Dims::new(5, 5, 5), 1.0, 2)]);
        let r = greedy_solve(&inst);
        let pos: Vec<[i64; 3]> = r.placements.iter().map(|p| p.cuboid.flb()).collect();
        assert_eq!(pos, vec![[0, 0, 0], [5, 0, 0]]);
        assert_eq!(r.eta, 250.0 / 500.0);
    }

    #[test]
    fn volume_order_with_longest_side_tiebreak() {
        // equal volume 64: 16x2x2 has the longer side and goes first
        let inst = instance(
            (20, 20, 20),
            vec![ItemType::new(Dims::new(4, 4, 4), 1.0, 1), ItemType::new(Dims::new(16, 2, 2), 1.0, 1)],
        );
        let r = greedy_solve(&inst);
        assert_eq!(r.placements[0].item, 1);
        assert_eq!(r.placements[1].item, 0);
    }

    #[test]
    fn unplaceable_item_is_skipped() {
        let inst = instance(
            (10, 10, 10),
            vec![ItemType::new(Dims::new(11, 11, 11), 1.0, 1), ItemType::new(Dims::new(5, 5, 5), 1.0, 1)],
        );
        let r = greedy_solve(&inst);
        assert_eq!(r.placements.len(), 1);
        assert_eq!(r.placements[0].item, 1);
    }

    #[test]
    fn deterministic() {
        let inst = crate::instance::generate_instance("B2_30", 5).unwrap();
        let a = greedy_solve(&inst);
        let b = greedy_solve(&inst);
        assert_eq!(a.placements, b.placements);
        assert_eq!(a.eta, b.eta);
    }
}
