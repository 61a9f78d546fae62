mod common;

use std::collections::BTreeSet;

use common::{random_bin, random_packing, VoxelGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stablepack::ems::{initial_spaces, update_after_placement};
use stablepack::geometry::{contains, overlaps, Cuboid, Dims};

fn ems_after(bin: Dims, placed: &[Cuboid]) -> Vec<BTreeSet<Cuboid>> {
    let mut stack = initial_spaces(&Cuboid::at([0, 0, 0], bin)).unwrap();
    let mut sets = Vec::new();
    for c in placed {
        stack = update_after_placement(&stack, c);
        sets.push(stack.iter().copied().collect());
    }
    sets
}

#[test]
fn empty_bin_is_one_space() {
    let bin = Dims::new(4, 3, 2);
    let oracle = VoxelGrid::new(bin, &[]).maximal_empty_boxes();
    assert_eq!(oracle, BTreeSet::from([Cuboid::at([0, 0, 0], bin)]));
    let ems: BTreeSet<Cuboid> = initial_spaces(&Cuboid::at([0, 0, 0], bin)).unwrap().iter().copied().collect();
    assert_eq!(ems, oracle);
}

#[test]
fn matches_voxel_oracle_after_every_placement() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..120 {
        let bin = random_bin(&mut rng, 8);
        let placed = random_packing(&mut rng, bin, 6);
        for (k, ems) in ems_after(bin, &placed).into_iter().enumerate() {
            let oracle = VoxelGrid::new(bin, &placed[..=k]).maximal_empty_boxes();
            assert_eq!(ems, oracle, "bin {bin:?} after {:?}", &placed[..=k]);
        }
    }
}

#[test]
fn spaces_cover_free_space_and_avoid_items() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..80 {
        let bin = random_bin(&mut rng, 9);
        let placed = random_packing(&mut rng, bin, 7);
        let Some(spaces) = ems_after(bin, &placed).pop() else { continue };
        for s in &spaces {
            assert!(contains(&Cuboid::at([0, 0, 0], bin), s));
            assert!(placed.iter().all(|p| !overlaps(p, s)));
        }
        for x in 0..bin.l {
            for y in 0..bin.w {
                for z in 0..bin.h {
                    let voxel = Cuboid { x, y, z, l: 1, w: 1, h: 1 };
                    let free = placed.iter().all(|p| !overlaps(p, &voxel));
                    let covered = spaces.iter().any(|s| contains(s, &voxel));
                    assert_eq!(free, covered, "voxel {voxel:?}");
                }
            }
        }
    }
}

#[test]
fn filling_the_bin_leaves_no_space() {
    let bin = Dims::new(4, 4, 4);
    let halves = [Cuboid::new(0, 0, 0, 4, 4, 2).unwrap(), Cuboid::new(0, 0, 2, 4, 4, 2).unwrap()];
    assert!(ems_after(bin, &halves).pop().unwrap().is_empty());
}
