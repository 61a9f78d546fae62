//! Brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stablepack::geometry::{overlaps, Cuboid, Dims};

/// Unit-voxel occupancy of a small bin.
pub struct VoxelGrid {
    pub dims: Dims,
    /// Prefix sums over occupied voxels, `(l+1) * (w+1) * (h+1)` entries.
    prefix: Vec<i64>,
}

impl VoxelGrid {
    pub fn new(dims: Dims, placed: &[Cuboid]) -> Self {
        let (l, w, h) = (dims.l as usize, dims.w as usize, dims.h as usize);
        let mut occ = vec![0i64; l * w * h];
        for c in placed {
            for x in c.x..c.x_max() {
                for y in c.y..c.y_max() {
                    for z in c.z..c.top() {
                        occ[(x as usize * w + y as usize) * h + z as usize] = 1;
                    }
                }
            }
        }
        let idx = |x: usize, y: usize, z: usize| (x * (w + 1) + y) * (h + 1) + z;
        let mut prefix = vec![0i64; (l + 1) * (w + 1) * (h + 1)];
        for x in 1..=l {
            for y in 1..=w {
                for z in 1..=h {
                    prefix[idx(x, y, z)] = occ[((x - 1) * w + y - 1) * h + z - 1]
                        + prefix[idx(x - 1, y, z)]
                        + prefix[idx(x, y - 1, z)]
                        + prefix[idx(x, y, z - 1)]
                        - prefix[idx(x - 1, y - 1, z)]
                        - prefix[idx(x - 1, y, z - 1)]
                        - prefix[idx(x, y - 1, z - 1)]
                        + prefix[idx(x - 1, y - 1, z - 1)];
                }
            }
        }
        Self { dims, prefix }
    }

    fn at(&self, x: i64, y: i64, z: i64) -> i64 {
        let (w, h) = (self.dims.w + 1, self.dims.h + 1);
        self.prefix[((x * w + y) * h + z) as usize]
    }

    /// Occupied voxels inside the half-open box `[x0,x1) x [y0,y1) x [z0,z1)`.
    pub fn occupied(&self, x0: i64, x1: i64, y0: i64, y1: i64, z0: i64, z1: i64) -> i64 {
        self.at(x1, y1, z1) - self.at(x0, y1, z1) - self.at(x1, y0, z1) - self.at(x1, y1, z0)
            + self.at(x0, y0, z1)
            + self.at(x0, y1, z0)
            + self.at(x1, y0, z0)
            - self.at(x0, y0, z0)
    }

    fn empty(&self, b: [i64; 6]) -> bool {
        let d = self.dims;
        b[0] >= 0 && b[2] >= 0 && b[4] >= 0 && b[1] <= d.l && b[3] <= d.w && b[5] <= d.h
            && self.occupied(b[0], b[1], b[2], b[3], b[4], b[5]) == 0
    }

    /// Every empty box that cannot grow by one voxel in any of the six directions.
    pub fn maximal_empty_boxes(&self) -> BTreeSet<Cuboid> {
        let d = self.dims;
        let mut out = BTreeSet::new();
        for x0 in 0..d.l {
            for y0 in 0..d.w {
                for z0 in 0..d.h {
                    for x1 in x0 + 1..=d.l {
                        if !self.empty([x0, x1, y0, y0 + 1, z0, z0 + 1]) {
                            break;
                        }
                        for y1 in y0 + 1..=d.w {
                            if !self.empty([x0, x1, y0, y1, z0, z0 + 1]) {
                                break;
                            }
                            for z1 in z0 + 1..=d.h {
                                let b = [x0, x1, y0, y1, z0, z1];
                                if !self.empty(b) {
                                    break;
                                }
                                let grows = [
                                    [x0 - 1, x1, y0, y1, z0, z1],
                                    [x0, x1 + 1, y0, y1, z0, z1],
                                    [x0, x1, y0 - 1, y1, z0, z1],
                                    [x0, x1, y0, y1 + 1, z0, z1],
                                    [x0, x1, y0, y1, z0 - 1, z1],
                                    [x0, x1, y0, y1, z0, z1 + 1],
                                ];
                                if grows.iter().all(|g| !self.empty(*g)) {
                                    out.insert(Cuboid { x: x0, y: y0, z: z0, l: x1 - x0, w: y1 - y0, h: z1 - z0 });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Shared voxels of two boxes, counted one by one.
pub fn voxel_overlap(a: &Cuboid, b: &Cuboid) -> i64 {
    let mut n = 0;
    for x in a.x..a.x_max() {
        for y in a.y..a.y_max() {
            for z in a.z..a.top() {
                if x >= b.x && x < b.x_max() && y >= b.y && y < b.y_max() && z >= b.z && z < b.top() {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Up to `max_items` random non-overlapping boxes at arbitrary integer positions.
pub fn random_packing(rng: &mut ChaCha8Rng, bin: Dims, max_items: usize) -> Vec<Cuboid> {
    let mut placed: Vec<Cuboid> = Vec::new();
    for _ in 0..max_items {
        for _attempt in 0..40 {
            let l = rng.gen_range(1..=bin.l.max(2) / 2 + 1).min(bin.l);
            let w = rng.gen_range(1..=bin.w.max(2) / 2 + 1).min(bin.w);
            let h = rng.gen_range(1..=bin.h.max(2) / 2 + 1).min(bin.h);
            let c = Cuboid {
                x: rng.gen_range(0..=bin.l - l),
                y: rng.gen_range(0..=bin.w - w),
                z: rng.gen_range(0..=bin.h - h),
                l,
                w,
                h,
            };
            if !placed.iter().any(|p| overlaps(p, &c)) {
                placed.push(c);
                break;
            }
        }
    }
    placed
}

pub fn random_bin(rng: &mut ChaCha8Rng, max_side: i64) -> Dims {
    Dims::new(rng.gen_range(1..=max_side), rng.gen_range(1..=max_side), rng.gen_range(1..=max_side))
}

/// Covariance by explicit expectation, written independently of the library.
pub fn direct_covariance(p: &[f64], a: &[f64]) -> f64 {
    let mut e_l = 0.0;
    let mut e_a = 0.0;
    let mut e_la = 0.0;
    for i in 0..p.len() {
        if p[i] > 0.0 {
            let l = p[i].ln();
            e_l += p[i] * l;
            e_a += p[i] * a[i];
            e_la += p[i] * l * a[i];
        }
    }
    e_la - e_l * e_a
}

pub fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}
