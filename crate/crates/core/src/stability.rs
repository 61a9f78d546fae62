//! Support and weight constraints.
//!
//! Support: the summed contact area `F` between an item's bottom face and the
//! tops of the items directly beneath it must satisfy `F >= r_s * f`, where
//! `f` is the item's bottom area. Weight: when exactly one item `i` carries
//! item `j`, `G_j <= r_w * G_i`. Items resting on two or more supporters are
//! not weight-constrained.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{PackError, Result};
use crate::geometry::{footprint_intersection, horizontal_contact_area, Cuboid};

/// A box already in the bin, with the item type it came from and its weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placed {
    pub item: usize,
    pub cuboid: Cuboid,
    pub weight: f64,
}

/// Non-negative rational `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(PackError::InvalidInput("ratio denominator is zero".into()));
        }
        let g = gcd(num, den).max(1);
        Ok(Self { num: num / g, den: den / g })
    }

    /// Reads the shortest decimal form of `value`, so `0.66` becomes exactly
    /// `33/50` rather than the nearest binary fraction.
    pub fn from_decimal(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(PackError::InvalidInput(format!("ratio must be a finite non-negative number, got {value}")));
        }
        let text = format!("{value}");
        let (int_part, frac_part) = text.split_once('.').unwrap_or((&text, ""));
        if frac_part.len() > 12 || int_part.len() > 6 {
            return Err(PackError::InvalidInput(format!("ratio {value} has too many digits")));
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let digits = format!("{int_part}{frac_part}");
        let num: u64 = digits
            .parse()
            .map_err(|_| PackError::InvalidInput(format!("cannot read ratio {value}")))?;
        Self::new(num, den)
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Ratio::from_decimal(v).map_err(serde::de::Error::custom)
    }
}

/// Constraint configuration for an instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityParams {
    /// Minimum supported fraction of the bottom face, `r_s`.
    pub support_ratio: Ratio,
    /// Maximum weight multiple over a single supporter, `r_w`.
    pub weight_ratio: f64,
    pub support_enabled: bool,
    pub weight_enabled: bool,
}

impl Default for StabilityParams {
    fn default() -> Self {
        Self::unconstrained()
    }
}

impl StabilityParams {
    pub const DEFAULT_WEIGHT: f64 = 3.0;

    /// Both constraints off; ratios preset to `r_s = 0.66`, `r_w = 3.0`.
    pub fn unconstrained() -> Self {
        Self {
            support_ratio: Ratio { num: 33, den: 50 },
            weight_ratio: Self::DEFAULT_WEIGHT,
            support_enabled: false,
            weight_enabled: false,
        }
    }

    pub fn support_only(r_s: Ratio) -> Self {
        Self { support_ratio: r_s, support_enabled: true, ..Self::unconstrained() }
    }

    pub fn weight_only(r_w: f64) -> Self {
        Self { weight_ratio: r_w, weight_enabled: true, ..Self::unconstrained() }
    }

    pub fn both(r_s: Ratio, r_w: f64) -> Self {
        Self {
            support_ratio: r_s,
            weight_ratio: r_w,
            support_enabled: true,
            weight_enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.support_ratio.num > self.support_ratio.den {
            return Err(PackError::InvalidInput(format!(
                "support ratio {} exceeds 1",
                self.support_ratio
            )));
        }
        if !(self.weight_ratio.is_finite() && self.weight_ratio > 0.0) {
            return Err(PackError::InvalidInput(format!(
                "weight ratio must be positive, got {}",
                self.weight_ratio
            )));
        }
        Ok(())
    }
}

/// Exact support fraction `contact / footprint`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportRatio {
    pub contact: i64,
    pub footprint: i64,
}

impl SupportRatio {
    pub fn to_f64(&self) -> f64 {
        self.contact as f64 / self.footprint as f64
    }

    /// `contact / footprint >= r`, by cross-multiplication.
    pub fn meets(&self, r: &Ratio) -> bool {
        (self.contact as i128) * (r.den as i128) >= (r.num as i128) * (self.footprint as i128)
    }
}

impl PartialOrd for SupportRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SupportRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.contact as i128 * other.footprint as i128;
        let rhs = other.contact as i128 * self.footprint as i128;
        lhs.cmp(&rhs)
    }
}

/// Supported fraction of `candidate`'s bottom face. The bin floor supports
/// fully.
pub fn support_ratio(candidate: &Cuboid, placements: &[Placed]) -> SupportRatio {
    let footprint = candidate.footprint();
    if candidate.z == 0 {
        return SupportRatio { contact: footprint, footprint };
    }
    let contact = placements
        .iter()
        .map(|p| horizontal_contact_area(candidate, &p.cuboid))
        .sum();
    SupportRatio { contact, footprint }
}

/// Items whose top face touches `candidate`'s bottom face with positive area.
pub fn supporters<'a>(candidate: &'a Cuboid, placements: &'a [Placed]) -> impl Iterator<Item = &'a Placed> + 'a {
    placements
        .iter()
        .filter(move |p| horizontal_contact_area(candidate, &p.cuboid) > 0)
}

/// Weight rule for a single supporter; vacuous otherwise.
pub fn check_weight(candidate: &Cuboid, weight: f64, placements: &[Placed], r_w: f64) -> bool {
    let mut it = supporters(candidate, placements);
    match (it.next(), it.next()) {
        (Some(only), None) => weight <= r_w * only.weight,
        _ => true,
    }
}

pub fn is_stable_placement(candidate: &Cuboid, weight: f64, placements: &[Placed], params: &StabilityParams) -> bool {
    if params.support_enabled && !support_ratio(candidate, placements).meets(&params.support_ratio) {
        return false;
    }
    if params.weight_enabled && !check_weight(candidate, weight, placements, params.weight_ratio) {
        return false;
    }
    true
}

/// A space can hold an item only if its floor is the bin floor or touches the
/// top of some placed item.
pub fn is_stable_space(space: &Cuboid, placements: &[Placed]) -> bool {
    space.z == 0
        || placements
            .iter()
            .any(|p| p.cuboid.top() == space.z && footprint_intersection(space, &p.cuboid) > 0)
}

/// Post-hoc constraint check of one placement against the items placed
/// before it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityAudit {
    pub support: SupportRatio,
    pub support_ok: bool,
    pub weight_ok: bool,
}

impl StabilityAudit {
    pub fn passed(&self) -> bool {
        self.support_ok && self.weight_ok
    }
}

pub fn audit_placement(candidate: &Cuboid, weight: f64, prior: &[Placed], params: &StabilityParams) -> StabilityAudit {
    let support = support_ratio(candidate, prior);
    StabilityAudit {
        support,
        support_ok: !params.support_enabled || support.meets(&params.support_ratio),
        weight_ok: !params.weight_enabled || check_weight(candidate, weight, prior, params.weight_ratio),
    }
}
