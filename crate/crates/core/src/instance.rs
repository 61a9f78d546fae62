//! Problem instances and the seeded generators for the benchmark families.
//!
//! Scheme tags read `<family>_<count>`. The family fixes the bin footprint:
//!
//! | family | footprint `L x W` | nominal height |
//! |--------|-------------------|----------------|
//! | `S1`   | 100 x 100         | 100            |
//! | `S2`   | 300 x 200         | 200            |
//! | `B1`   | 230 x 150         | 180            |
//! | `B2`   | 176 x 153         | 203            |
//! | `B3`   | 298 x 103         | 159            |
//! | `M`, `BM` | sampled: three draws from U{100..450}, sorted descending | |
//! | `CASE` | 100 x 100, seven item types with independent weights | |
//!
//! The count is either a fixed number of items (`S1_30`) or `M`, meaning item
//! types are appended until their total volume exceeds `r_volume` times the
//! nominal bin volume, with `r_volume ~ U[0.8, 1.2]`. Bin height is finally
//! set to the sum of the largest side of every item, so any instance can be
//! packed by stacking.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{ItemType, PackingState};
use crate::error::{PackError, Result};
use crate::geometry::{Cuboid, Dims};
use crate::stability::StabilityParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    S1,
    S2,
    B1,
    B2,
    B3,
    /// Random bin per instance. `BM` is accepted as an alias.
    Mixed,
    /// Small stability case study.
    Case,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ItemCount {
    Fixed(u32),
    VolumeRatio,
}

/// A parsed scheme tag such as `S1_10`, `B2_30` or `BM_M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub family: Family,
    pub count: ItemCount,
    tag: String,
}

impl Scheme {
    pub fn tag(&self) -> &str {
        &self.tag
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)
    }
}

impl FromStr for Scheme {
    type Err = PackError;

    fn from_str(tag: &str) -> Result<Self> {
        let unknown = || PackError::InvalidInput(format!("unknown scheme {tag:?}"));
        let (family, count) = tag.split_once('_').ok_or_else(unknown)?;
        let family = match family {
            "S1" => Family::S1,
            "S2" => Family::S2,
            "B1" => Family::B1,
            "B2" => Family::B2,
            "B3" => Family::B3,
            "M" | "BM" => Family::Mixed,
            "CASE" => Family::Case,
            _ => return Err(unknown()),
        };
        let count = match count {
            "M" => ItemCount::VolumeRatio,
            n => match n.parse::<u32>() {
                Ok(n) if n >= 1 => ItemCount::Fixed(n),
                _ => return Err(unknown()),
            },
        };
        if family == Family::Case {
            if let ItemCount::Fixed(n) = count {
                if n < CASE_TYPES as u32 {
                    return Err(PackError::InvalidInput(format!(
                        "scheme {tag:?} needs at least {CASE_TYPES} items"
                    )));
                }
            }
        }
        Ok(Self { family, count, tag: tag.to_string() })
    }
}

const CASE_TYPES: usize = 7;

/// A packing problem: bin, item batches, constraints and provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub id: String,
    pub scheme: String,
    pub seed: u64,
    pub bin: Dims,
    pub items: Vec<ItemType>,
    #[serde(default)]
    pub params: StabilityParams,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.bin.is_positive() {
            return Err(PackError::InvalidInput(format!(
                "instance {}: bin extents must be positive",
                self.id
            )));
        }
        for item in &self.items {
            item.validate()?;
        }
        self.params.validate()
    }

    pub fn bin_cuboid(&self) -> Cuboid {
        Cuboid::at([0, 0, 0], self.bin)
    }

    pub fn item_count(&self) -> u64 {
        self.items.iter().map(|t| t.quantity as u64).sum()
    }

    pub fn total_volume(&self) -> i64 {
        self.items.iter().map(|t| t.dims().volume() * t.quantity as i64).sum()
    }

    pub fn with_params(mut self, params: StabilityParams) -> Self {
        self.params = params;
        self
    }

    pub fn initial_state(&self) -> Result<PackingState> {
        self.validate()?;
        PackingState::new(self.bin_cuboid(), self.items.clone(), self.params)
    }
}

/// Seed for the `index`-th member of a family seeded by `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// `[ceil(0.05 L), floor(0.4 L)]`, lower end at least 1.
fn side_range(length: i64) -> (i64, i64) {
    let lo = ((5 * length + 99) / 100).max(1);
    let hi = (4 * length / 10).max(lo);
    (lo, hi)
}

fn sample_dims(rng: &mut impl Rng, length: i64) -> Dims {
    let (lo, hi) = side_range(length);
    let l = rng.gen_range(lo..=hi);
    let w = rng.gen_range(lo..=hi);
    // h >= 0.1 l, and within the same band as l and w
    let h_lo = ((l + 9) / 10).max(lo);
    let h = rng.gen_range(h_lo..=hi);
    Dims::new(l, w, h)
}

fn fixed_footprint(family: Family) -> Option<(i64, i64, i64)> {
    match family {
        Family::S1 | Family::Case => Some((100, 100, 100)),
        Family::S2 => Some((300, 200, 200)),
        Family::B1 => Some((230, 150, 180)),
        Family::B2 => Some((176, 153, 203)),
        Family::B3 => Some((298, 103, 159)),
        Family::Mixed => None,
    }
}

pub fn generate_instance(scheme: &str, seed: u64) -> Result<InstanceSpec> {
    let parsed: Scheme = scheme.parse()?;
    Ok(generate_with(&parsed, seed, format!("{scheme}-{seed}")))
}

fn generate_with(scheme: &Scheme, seed: u64, id: String) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (length, width, nominal_h) = fixed_footprint(scheme.family).unwrap_or_else(|| {
        let mut d = [
            rng.gen_range(100..=450i64),
            rng.gen_range(100..=450i64),
            rng.gen_range(100..=450i64),
        ];
        d.sort_unstable_by(|a, b| b.cmp(a));
        (d[0], d[1], d[2])
    });

    let items = if scheme.family == Family::Case {
        case_items(&mut rng, scheme.count)
    } else {
        sampled_items(&mut rng, scheme.count, length, width * length * nominal_h)
    };

    let height = if scheme.family == Family::Case {
        let tallest = items.iter().map(|t| t.dims().max_side()).max().unwrap_or(1);
        let count: i64 = items.iter().map(|t| t.quantity as i64).sum();
        tallest * count
    } else {
        items
            .iter()
            .map(|t| t.dims().max_side() * t.quantity as i64)
            .sum()
    };

    InstanceSpec {
        id,
        scheme: scheme.tag().to_string(),
        seed,
        bin: Dims::new(length, width, height.max(1)),
        items,
        params: StabilityParams::unconstrained(),
    }
}

fn sampled_items(rng: &mut impl Rng, count: ItemCount, length: i64, nominal_volume: i64) -> Vec<ItemType> {
    let mut items = Vec::new();
    match count {
        ItemCount::Fixed(n) => {
            let mut total = 0u32;
            while total < n {
                let dims = sample_dims(rng, length);
                let quantity = rng.gen_range(1..=10u32).min(n - total);
                total += quantity;
                items.push(ItemType::new(dims, dims.volume() as f64, quantity));
            }
        }
        ItemCount::VolumeRatio => {
            let r_volume: f64 = rng.gen_range(0.8..=1.2);
            let target = r_volume * nominal_volume as f64;
            let mut total = 0i64;
            while total as f64 <= target {
                let dims = sample_dims(rng, length);
                let quantity = rng.gen_range(1..=10u32);
                total += dims.volume() * quantity as i64;
                items.push(ItemType::new(dims, dims.volume() as f64, quantity));
            }
        }
    }
    items
}

/// Seven types in a 100 x 100 bin with weights drawn independently of size,
/// so heavy-over-light stacking actually occurs.
fn case_items(rng: &mut impl Rng, count: ItemCount) -> Vec<ItemType> {
    let dims: Vec<Dims> = (0..CASE_TYPES).map(|_| sample_dims(rng, 100)).collect();
    let weights: Vec<f64> = (0..CASE_TYPES).map(|_| rng.gen_range(1..=20u32) as f64).collect();
    let quantities: Vec<u32> = match count {
        ItemCount::VolumeRatio => (0..CASE_TYPES).map(|_| rng.gen_range(1..=10u32)).collect(),
        ItemCount::Fixed(n) => {
            let mut q = vec![1u32; CASE_TYPES];
            for _ in CASE_TYPES as u32..n {
                q[rng.gen_range(0..CASE_TYPES)] += 1;
            }
            q
        }
    };
    dims.into_iter()
        .zip(weights)
        .zip(quantities)
        .map(|((d, g), q)| ItemType::new(d, g, q))
        .collect()
}

pub fn generate_set(scheme: &str, count: usize, master_seed: u64) -> Result<Vec<InstanceSpec>> {
    let parsed: Scheme = scheme.parse()?;
    if count == 0 {
        return Err(PackError::InvalidInput("instance count must be at least 1".into()));
    }
    Ok((0..count)
        .map(|i| {
            let seed = derive_seed(master_seed, i as u64);
            generate_with(&parsed, seed, format!("{scheme}/{i}"))
        })
        .collect())
}
