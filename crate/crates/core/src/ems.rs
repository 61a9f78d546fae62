//! Empty maximal spaces (EMS).
//!
//! The free volume of a bin is represented by the set of empty boxes that are
//! not contained in any larger empty box. Placing an item splits every space
//! it cuts into at most six residuals; residuals swallowed by another space
//! are discarded. The resulting set is kept in screening order so that the
//! first element is the stack top.

use std::cmp::Reverse;

use crate::error::{PackError, Result};
use crate::geometry::{contains, overlaps, Cuboid};

/// Empty maximal spaces in screening order. Index 0 is the stack top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceStack {
    spaces: Vec<Cuboid>,
}

impl SpaceStack {
    pub fn spaces(&self) -> &[Cuboid] {
        &self.spaces
    }

    pub fn top(&self) -> Option<&Cuboid> {
        self.spaces.first()
    }

    pub fn pop(&mut self) -> Option<Cuboid> {
        if self.spaces.is_empty() {
            None
        } else {
            Some(self.spaces.remove(0))
        }
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cuboid> {
        self.spaces.iter()
    }

    pub fn into_vec(self) -> Vec<Cuboid> {
        self.spaces
    }
}

impl<'a> IntoIterator for &'a SpaceStack {
    type Item = &'a Cuboid;
    type IntoIter = std::slice::Iter<'a, Cuboid>;

    fn into_iter(self) -> Self::IntoIter {
        self.spaces.iter()
    }
}

/// The single space of an empty bin.
pub fn initial_spaces(bin: &Cuboid) -> Result<SpaceStack> {
    if !bin.is_proper() {
        return Err(PackError::InvalidInput(format!(
            "bin extents must be positive, got {}x{}x{}",
            bin.l, bin.w, bin.h
        )));
    }
    Ok(SpaceStack { spaces: vec![*bin] })
}

/// Sorts spaces so that the lowest layer fills first, row by row along X.
///
/// Key: FLB `z`, then `y`, then `x`, all ascending; equal corners put the
/// larger volume first; remaining ties fall back to the full box ordering.
pub fn screening_order(mut spaces: Vec<Cuboid>) -> Vec<Cuboid> {
    spaces.sort_unstable_by_key(|s| (s.z, s.y, s.x, Reverse(s.volume()), *s));
    spaces
}

/// Residual pieces of `space` that lie outside `placed`. Zero-extent pieces
/// are never produced.
fn split(space: &Cuboid, placed: &Cuboid, out: &mut Vec<Cuboid>) {
    let s = space;
    let p = placed;
    if p.x > s.x {
        out.push(Cuboid { l: p.x - s.x, ..*s });
    }
    if s.x_max() > p.x_max() {
        out.push(Cuboid { x: p.x_max(), l: s.x_max() - p.x_max(), ..*s });
    }
    if p.y > s.y {
        out.push(Cuboid { w: p.y - s.y, ..*s });
    }
    if s.y_max() > p.y_max() {
        out.push(Cuboid { y: p.y_max(), w: s.y_max() - p.y_max(), ..*s });
    }
    if p.z > s.z {
        out.push(Cuboid { h: p.z - s.z, ..*s });
    }
    if s.top() > p.top() {
        out.push(Cuboid { z: p.top(), h: s.top() - p.top(), ..*s });
    }
}

/// Maximal-space set after `placed` is added to the bin.
///
/// `placed` must lie inside the bin and must not overlap earlier placements.
/// Spaces untouched by `placed` stay maximal; only the residuals need a
/// containment sweep.
pub fn update_after_placement(stack: &SpaceStack, placed: &Cuboid) -> SpaceStack {
    let mut kept = Vec::with_capacity(stack.len() + 6);
    let mut residuals = Vec::new();
    for space in &stack.spaces {
        if overlaps(space, placed) {
            split(space, placed, &mut residuals);
        } else {
            kept.push(*space);
        }
    }

    residuals.sort_unstable();
    residuals.dedup();

    let survivors: Vec<Cuboid> = residuals
        .iter()
        .enumerate()
        .filter(|&(i, r)| {
            let inside_residual = residuals
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && contains(other, r));
            !inside_residual && !kept.iter().any(|k| contains(k, r))
        })
        .map(|(_, r)| *r)
        .collect();

    kept.extend(survivors);
    SpaceStack {
        spaces: screening_order(kept),
    }
}
