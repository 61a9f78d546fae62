//! Support ratio and single-supporter weight checks on a hand-built stack.

use stablepack::stability::{audit_placement, supporters, Ratio};
use stablepack::{Cuboid, Placed, Result, StabilityParams};

fn main() -> Result<()> {
    let base = Placed { item: 0, cuboid: Cuboid::new(0, 0, 0, 10, 10, 10)?, weight: 3.0 };
    let params = StabilityParams::both(Ratio::from_decimal(0.66)?, 3.0);

    for (weight, x) in [(9.0, 0), (10.0, 0), (9.0, 4)] {
        let top = Cuboid::new(x, 0, 10, 10, 10, 5)?;
        let audit = audit_placement(&top, weight, &[base], &params);
        let n = supporters(&top, std::slice::from_ref(&base)).count();
        println!(
            "item of weight {weight} at x={x}: support {}/{} ({:.2}), {n} supporter(s), support ok {}, weight ok {}, stable {}",
            audit.support.contact,
            audit.support.footprint,
            audit.support.to_f64(),
            audit.support_ok,
            audit.weight_ok,
            audit.passed()
        );
    }
    Ok(())
}
