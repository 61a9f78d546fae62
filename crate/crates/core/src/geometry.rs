//! Exact integer geometry for axis-aligned cuboids.
//!
//! Coordinates live in the bin frame: origin at the bin's front-left-bottom
//! (FLB) vertex, X along the length, Y along the width, Z up. Every predicate
//! here is evaluated in integer arithmetic, so contact and overlap tests have
//! no tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{PackError, Result};

/// Extent of an item or space along X, Y and Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dims {
    pub l: i64,
    pub w: i64,
    pub h: i64,
}

impl Dims {
    pub const fn new(l: i64, w: i64, h: i64) -> Self {
        Self { l, w, h }
    }

    pub fn is_positive(&self) -> bool {
        self.l > 0 && self.w > 0 && self.h > 0
    }

    pub fn volume(&self) -> i64 {
        self.l * self.w * self.h
    }

    pub fn max_side(&self) -> i64 {
        self.l.max(self.w).max(self.h)
    }

    /// Componentwise `self <= other`.
    pub fn fits_within(&self, other: &Dims) -> bool {
        self.l <= other.l && self.w <= other.w && self.h <= other.h
    }

    /// Sorted side lengths, used to compare dimension multisets.
    pub fn sorted_sides(&self) -> [i64; 3] {
        let mut s = [self.l, self.w, self.h];
        s.sort_unstable();
        s
    }

    pub fn as_array(&self) -> [i64; 3] {
        [self.l, self.w, self.h]
    }
}

/// An axis-aligned box given by its FLB corner and its extents.
///
/// Items, placements, empty spaces and the bin itself are all `Cuboid`s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cuboid {
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub l: i64,
    pub w: i64,
    pub h: i64,
}

impl Cuboid {
    /// Builds a cuboid, rejecting non-positive extents.
    pub fn new(x: i64, y: i64, z: i64, l: i64, w: i64, h: i64) -> Result<Self> {
        if l <= 0 || w <= 0 || h <= 0 {
            return Err(PackError::InvalidInput(format!(
                "cuboid extents must be positive, got {l}x{w}x{h}"
            )));
        }
        Ok(Self { x, y, z, l, w, h })
    }

    pub fn at(pos: [i64; 3], dims: Dims) -> Self {
        Self {
            x: pos[0],
            y: pos[1],
            z: pos[2],
            l: dims.l,
            w: dims.w,
            h: dims.h,
        }
    }

    /// A bin of the given size anchored at the origin.
    pub fn bin(l: i64, w: i64, h: i64) -> Result<Self> {
        Self::new(0, 0, 0, l, w, h)
    }

    pub fn dims(&self) -> Dims {
        Dims::new(self.l, self.w, self.h)
    }

    pub fn flb(&self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn x_max(&self) -> i64 {
        self.x + self.l
    }

    pub fn y_max(&self) -> i64 {
        self.y + self.w
    }

    pub fn top(&self) -> i64 {
        self.z + self.h
    }

    pub fn volume(&self) -> i64 {
        self.l * self.w * self.h
    }

    pub fn footprint(&self) -> i64 {
        self.l * self.w
    }

    /// True iff every extent is positive.
    pub fn is_proper(&self) -> bool {
        self.l > 0 && self.w > 0 && self.h > 0
    }
}

/// One of the six axis permutations of `(l, w, h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Orientation(u8);

impl Orientation {
    const PERMUTATIONS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];

    pub fn all() -> impl Iterator<Item = Orientation> {
        (0..6).map(Orientation)
    }

    pub fn from_index(index: u8) -> Option<Self> {
        (index < 6).then_some(Orientation(index))
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    pub fn apply(&self, dims: Dims) -> Dims {
        let src = dims.as_array();
        let p = Self::PERMUTATIONS[self.0 as usize];
        Dims::new(src[p[0]], src[p[1]], src[p[2]])
    }
}

/// Distinct oriented dimension triples of an item, lexicographically descending.
///
/// A cube yields one triple, an item with exactly two equal sides three, and
/// an item with all sides distinct six.
pub fn orientations(dims: Dims) -> Result<Vec<Dims>> {
    if !dims.is_positive() {
        return Err(PackError::InvalidInput(format!(
            "item dimensions must be positive, got {}x{}x{}",
            dims.l, dims.w, dims.h
        )));
    }
    let mut out: Vec<Dims> = Orientation::all().map(|o| o.apply(dims)).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out.dedup();
    Ok(out)
}

/// Open-interior intersection. Boxes that only share a face, edge or vertex
/// do not overlap.
pub fn overlaps(a: &Cuboid, b: &Cuboid) -> bool {
    a.x < b.x_max()
        && a.x_max() > b.x
        && a.y < b.y_max()
        && a.y_max() > b.y
        && a.z < b.top()
        && a.top() > b.z
}

/// Closed containment: `inner` may touch the walls of `outer`.
pub fn contains(outer: &Cuboid, inner: &Cuboid) -> bool {
    inner.x >= outer.x
        && inner.y >= outer.y
        && inner.z >= outer.z
        && inner.x_max() <= outer.x_max()
        && inner.y_max() <= outer.y_max()
        && inner.top() <= outer.top()
}

fn interval_overlap(a0: i64, a1: i64, b0: i64, b1: i64) -> i64 {
    (a1.min(b1) - a0.max(b0)).max(0)
}

/// Area of the XY rectangle intersection between two footprints, ignoring Z.
pub fn footprint_intersection(a: &Cuboid, b: &Cuboid) -> i64 {
    interval_overlap(a.x, a.x_max(), b.x, b.x_max()) * interval_overlap(a.y, a.y_max(), b.y, b.y_max())
}

/// Contact area between `upper`'s bottom face and `lower`'s top face.
///
/// Zero unless the faces are coplanar (`upper.z == lower.top()`).
pub fn horizontal_contact_area(upper: &Cuboid, lower: &Cuboid) -> i64 {
    if upper.z != lower.top() {
        return 0;
    }
    footprint_intersection(upper, lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i64, y: i64, z: i64, l: i64, w: i64, h: i64) -> Cuboid {
        Cuboid { x, y, z, l, w, h }
    }

    #[test]
    fn orientation_counts() {
        assert_eq!(orientations(Dims::new(2, 3, 5)).unwrap().len(), 6);
        assert_eq!(orientations(Dims::new(2, 2, 2)).unwrap(), vec![Dims::new(2, 2, 2)]);
        assert_eq!(
            orientations(Dims::new(2, 2, 5)).unwrap(),
            vec![Dims::new(5, 2, 2), Dims::new(2, 5, 2), Dims::new(2, 2, 5)]
        );
    }

    #[test]
    fn orientations_canonical_order() {
        let o = orientations(Dims::new(2, 3, 5)).unwrap();
        assert_eq!(o[0], Dims::new(5, 3, 2));
        assert_eq!(o[5], Dims::new(2, 3, 5));
        assert!(o.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn orientations_reject_non_positive() {
        assert!(matches!(
            orientations(Dims::new(0, 3, 5)),
            Err(PackError::InvalidInput(_))
        ));
        assert!(orientations(Dims::new(2, -1, 5)).is_err());
    }

    #[test]
    fn overlap_examples() {
        let a = c(0, 0, 0, 10, 10, 10);
        assert!(overlaps(&a, &c(5, 5, 5, 10, 10, 10)));
        assert!(!overlaps(&a, &c(10, 0, 0, 5, 5, 5)));
        assert!(overlaps(&a, &a));
    }

    #[test]
    fn containment_examples() {
        let bin = c(0, 0, 0, 10, 10, 10);
        assert!(contains(&bin, &bin));
        assert!(!contains(&bin, &c(6, 0, 0, 5, 5, 5)));
        assert!(contains(&bin, &c(2, 2, 2, 3, 3, 3)));
    }

    #[test]
    fn contact_area_examples() {
        let lower = c(0, 0, 0, 10, 10, 10);
        assert_eq!(horizontal_contact_area(&c(0, 0, 10, 10, 10, 5), &lower), 100);
        assert_eq!(horizontal_contact_area(&c(4, 0, 10, 10, 10, 5), &lower), 60);
        assert_eq!(horizontal_contact_area(&c(0, 0, 11, 10, 10, 5), &lower), 0);
    }

    #[test]
    fn cuboid_new_validates() {
        assert!(Cuboid::new(0, 0, 0, 1, 0, 1).is_err());
        assert!(Cuboid::bin(10, 10, 10).is_ok());
    }
}
