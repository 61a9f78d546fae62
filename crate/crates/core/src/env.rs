//! The packing MDP.
//!
//! A state holds the placed items, the remaining item counts and the empty
//! maximal spaces. Each step the spaces are scanned in screening order; the
//! first space that is supportable and admits at least one stable
//! (item type, orientation) pair becomes the current space, and those pairs
//! are the valid actions. An action drops the oriented item at the current
//! space's FLB corner. The episode ends when no space admits an action.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ems::{initial_spaces, update_after_placement, SpaceStack};
use crate::error::{PackError, Result};
use crate::geometry::{orientations, Cuboid, Dims};
use crate::stability::{is_stable_placement, is_stable_space, Placed, StabilityParams};

/// A batch of identical items.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemType {
    pub l: i64,
    pub w: i64,
    pub h: i64,
    pub weight: f64,
    pub quantity: u32,
}

impl ItemType {
    pub fn new(dims: Dims, weight: f64, quantity: u32) -> Self {
        Self { l: dims.l, w: dims.w, h: dims.h, weight, quantity }
    }

    pub fn dims(&self) -> Dims {
        Dims::new(self.l, self.w, self.h)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dims().is_positive() {
            return Err(PackError::InvalidInput(format!(
                "item dimensions must be positive, got {}x{}x{}",
                self.l, self.w, self.h
            )));
        }
        if !(self.weight.is_finite() && self.weight > 0.0) {
            return Err(PackError::InvalidInput(format!("item weight must be positive, got {}", self.weight)));
        }
        Ok(())
    }
}

/// Place one item of type `item` with extents `dims` at the current space's
/// FLB corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlacementAction {
    pub item: usize,
    pub dims: Dims,
}

/// Weights of the loading-rate and height-difference terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardConfig {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self { alpha1: 1.0, alpha2: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReward {
    pub r_lr: f64,
    pub r_hd: f64,
    pub total: f64,
}

/// Running volume and top-height statistics of a layout.
///
/// `top` is the highest item top (`H_t`); `second_top` is the second largest
/// entry of the multiset of item tops (`H_t'`), 0 with fewer than two items.
/// Two items sharing the highest top therefore give a height gap of 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LayoutStats {
    pub packed_volume: i64,
    pub top: i64,
    pub second_top: i64,
}

impl LayoutStats {
    pub fn push(&mut self, placed: &Cuboid) {
        self.packed_volume += placed.volume();
        let t = placed.top();
        if t > self.top {
            self.second_top = self.top;
            self.top = t;
        } else if t > self.second_top {
            self.second_top = t;
        }
    }

    pub fn from_layout<'a>(cuboids: impl IntoIterator<Item = &'a Cuboid>) -> Self {
        let mut stats = Self::default();
        for c in cuboids {
            stats.push(c);
        }
        stats
    }

    /// `sum volume / (W * L * H_t)`, zero for an empty layout.
    pub fn loading_rate(&self, bin: &Cuboid) -> f64 {
        if self.top == 0 {
            0.0
        } else {
            self.packed_volume as f64 / (bin.l as f64 * bin.w as f64 * self.top as f64)
        }
    }

    pub fn height_gap(&self) -> i64 {
        self.top - self.second_top
    }
}

/// Stepwise reward between two consecutive layouts.
///
/// The height term is negated and divided by the bin height so that a
/// shrinking gap between the two highest tops earns a positive reward.
pub fn reward_between(bin: &Cuboid, prev: &LayoutStats, next: &LayoutStats, cfg: &RewardConfig) -> StepReward {
    let r_lr = next.loading_rate(bin) - prev.loading_rate(bin);
    let r_hd = -((next.height_gap() - prev.height_gap()) as f64) / bin.h as f64;
    StepReward { r_lr, r_hd, total: cfg.alpha1 * r_lr + cfg.alpha2 * r_hd }
}

/// Rewards for every prefix of a placement sequence.
pub fn layout_rewards(bin: &Cuboid, sequence: &[Cuboid], cfg: &RewardConfig) -> Vec<StepReward> {
    let mut stats = LayoutStats::default();
    sequence
        .iter()
        .map(|c| {
            let prev = stats;
            stats.push(c);
            reward_between(bin, &prev, &stats, cfg)
        })
        .collect()
}

/// The current space and the actions it admits.
#[derive(Clone, Debug, PartialEq)]
pub struct Frontier {
    pub space: Cuboid,
    pub actions: Vec<PlacementAction>,
}

#[derive(Debug)]
struct Catalog {
    types: Vec<ItemType>,
    orientations: Vec<Vec<Dims>>,
}

#[derive(Clone, Debug)]
pub struct PackingState {
    bin: Cuboid,
    catalog: Arc<Catalog>,
    remaining: Vec<u32>,
    placements: Vec<Placed>,
    spaces: SpaceStack,
    frontier: Option<Frontier>,
    stats: LayoutStats,
    params: StabilityParams,
    step_count: usize,
}

impl PartialEq for PackingState {
    fn eq(&self, other: &Self) -> bool {
        self.bin == other.bin
            && self.catalog.types == other.catalog.types
            && self.remaining == other.remaining
            && self.placements == other.placements
            && self.spaces == other.spaces
            && self.frontier == other.frontier
            && self.stats == other.stats
            && self.params == other.params
            && self.step_count == other.step_count
    }
}

/// Result of applying one action.
#[derive(Clone, Debug)]
pub struct Transition {
    pub state: PackingState,
    pub reward: StepReward,
    pub done: bool,
}

impl PackingState {
    pub fn new(bin: Cuboid, item_types: Vec<ItemType>, params: StabilityParams) -> Result<Self> {
        let spaces = initial_spaces(&bin)?;
        params.validate()?;
        let orientations = item_types
            .iter()
            .map(|t| {
                t.validate()?;
                orientations(t.dims())
            })
            .collect::<Result<Vec<_>>>()?;
        let remaining = item_types.iter().map(|t| t.quantity).collect();
        let mut state = Self {
            bin,
            catalog: Arc::new(Catalog { types: item_types, orientations }),
            remaining,
            placements: Vec::new(),
            spaces,
            frontier: None,
            stats: LayoutStats::default(),
            params,
            step_count: 0,
        };
        state.frontier = state.scan_frontier();
        Ok(state)
    }

    pub fn bin(&self) -> &Cuboid {
        &self.bin
    }

    pub fn item_types(&self) -> &[ItemType] {
        &self.catalog.types
    }

    pub fn remaining(&self) -> &[u32] {
        &self.remaining
    }

    pub fn placements(&self) -> &[Placed] {
        &self.placements
    }

    pub fn spaces(&self) -> &SpaceStack {
        &self.spaces
    }

    pub fn params(&self) -> &StabilityParams {
        &self.params
    }

    pub fn stats(&self) -> &LayoutStats {
        &self.stats
    }

    /// Highest item top, `H_t`.
    pub fn max_height(&self) -> i64 {
        self.stats.top
    }

    /// Second largest item top, `H_t'`.
    pub fn second_max_height(&self) -> i64 {
        self.stats.second_top
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn current_space(&self) -> Option<&Cuboid> {
        self.frontier.as_ref().map(|f| &f.space)
    }

    pub fn frontier(&self) -> Option<&Frontier> {
        self.frontier.as_ref()
    }

    pub fn valid_actions(&self) -> &[PlacementAction] {
        self.frontier.as_ref().map_or(&[], |f| &f.actions)
    }

    pub fn is_terminal(&self) -> bool {
        self.frontier.is_none()
    }

    /// Items not yet placed, counting quantities.
    pub fn items_left(&self) -> u64 {
        self.remaining.iter().map(|&r| r as u64).sum()
    }

    fn scan_frontier(&self) -> Option<Frontier> {
        if self.remaining.iter().all(|&r| r == 0) {
            return None;
        }
        for space in &self.spaces {
            if !is_stable_space(space, &self.placements) {
                continue;
            }
            let room = space.dims();
            let mut actions = Vec::new();
            for (item, (ty, orients)) in self
                .catalog
                .types
                .iter()
                .zip(&self.catalog.orientations)
                .enumerate()
            {
                if self.remaining[item] == 0 {
                    continue;
                }
                for dims in orients.iter().filter(|d| d.fits_within(&room)) {
                    let candidate = Cuboid::at(space.flb(), *dims);
                    if is_stable_placement(&candidate, ty.weight, &self.placements, &self.params) {
                        actions.push(PlacementAction { item, dims: *dims });
                    }
                }
            }
            if !actions.is_empty() {
                return Some(Frontier { space: *space, actions });
            }
        }
        None
    }

    /// The box `action` would occupy, if it is currently valid.
    pub fn placement_of(&self, action: &PlacementAction) -> Option<Cuboid> {
        let f = self.frontier.as_ref()?;
        f.actions
            .contains(action)
            .then(|| Cuboid::at(f.space.flb(), action.dims))
    }

    pub fn step(&self, action: &PlacementAction, rewards: &RewardConfig) -> Result<Transition> {
        let placed = self.placement_of(action).ok_or_else(|| {
            PackError::ContractViolation(format!(
                "action {:?} is not valid in the current state (step {})",
                action, self.step_count
            ))
        })?;
        let weight = self.catalog.types[action.item].weight;

        let mut next = Self {
            bin: self.bin,
            catalog: Arc::clone(&self.catalog),
            remaining: self.remaining.clone(),
            placements: self.placements.clone(),
            spaces: update_after_placement(&self.spaces, &placed),
            frontier: None,
            stats: self.stats,
            params: self.params,
            step_count: self.step_count + 1,
        };
        next.remaining[action.item] -= 1;
        next.placements.push(Placed { item: action.item, cuboid: placed, weight });
        next.stats.push(&placed);
        next.frontier = next.scan_frontier();

        let reward = reward(self, &next, rewards);
        let done = next.is_terminal();
        Ok(Transition { state: next, reward, done })
    }

    /// Row-major `(n + 2) x 7` bin matrix: the bin, the current space, then
    /// each placed item. Columns are `x, y, z, l, w, h, weight`; the bin and
    /// current-space rows carry weight 0, and the current-space row is all
    /// zeros when the state is terminal.
    pub fn bin_matrix(&self) -> Vec<[f64; 7]> {
        let row = |c: &Cuboid, weight: f64| {
            [c.x as f64, c.y as f64, c.z as f64, c.l as f64, c.w as f64, c.h as f64, weight]
        };
        let mut rows = Vec::with_capacity(self.placements.len() + 2);
        rows.push(row(&self.bin, 0.0));
        rows.push(self.current_space().map_or([0.0; 7], |s| row(s, 0.0)));
        rows.extend(self.placements.iter().map(|p| row(&p.cuboid, p.weight)));
        rows
    }

    /// Row-major `k x 5` matrix of the item types that have at least one
    /// valid action. Columns are `l, w, h, remaining, weight`.
    pub fn valid_items_matrix(&self) -> Vec<[f64; 5]> {
        let mut seen = vec![false; self.catalog.types.len()];
        for a in self.valid_actions() {
            seen[a.item] = true;
        }
        self.catalog
            .types
            .iter()
            .enumerate()
            .filter(|(i, _)| seen[*i])
            .map(|(i, t)| [t.l as f64, t.w as f64, t.h as f64, self.remaining[i] as f64, t.weight])
            .collect()
    }
}

/// Reward for moving from `prev` to its successor `next`.
pub fn reward(prev: &PackingState, next: &PackingState, cfg: &RewardConfig) -> StepReward {
    reward_between(&prev.bin, &prev.stats, &next.stats, cfg)
}

/// Space utilization `sum volume / (W * L * H_N)`.
pub fn utilization(state: &PackingState) -> Result<f64> {
    if state.placements.is_empty() {
        return Err(PackError::Undefined("utilization of an empty bin".into()));
    }
    Ok(state.stats.loading_rate(&state.bin))
}

pub fn flatten<const N: usize>(rows: &[[f64; N]]) -> Vec<f64> {
    rows.iter().flatten().copied().collect()
}
