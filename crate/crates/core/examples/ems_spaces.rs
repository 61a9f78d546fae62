//! Place two items in a small bin and print the empty maximal spaces after
//! each placement, in screening order (index 0 is the next space to fill).

use stablepack::ems::{initial_spaces, update_after_placement};
use stablepack::{Cuboid, Result};

fn main() -> Result<()> {
    let bin = Cuboid::bin(10, 10, 10)?;
    let mut stack = initial_spaces(&bin)?;
    for item in [Cuboid::new(0, 0, 0, 10, 5, 4)?, Cuboid::new(0, 5, 0, 4, 5, 6)?] {
        stack = update_after_placement(&stack, &item);
        println!("after placing {item:?}:");
        for (i, s) in stack.iter().enumerate() {
            println!("  {i}: at ({}, {}, {}) size {}x{}x{}", s.x, s.y, s.z, s.l, s.w, s.h);
        }
    }
    Ok(())
}
