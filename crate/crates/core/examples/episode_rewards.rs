//! Step through one packing episode by hand, always taking the first valid
//! action, and print the state matrices and the shaped reward per step.

use stablepack::env::{flatten, utilization};
use stablepack::{generate_instance, RewardConfig, Result};

fn main() -> Result<()> {
    let instance = generate_instance("S1_10", 42)?;
    let cfg = RewardConfig::default();
    let mut state = instance.initial_state()?;
    let mut sum_lr = 0.0;

    println!("bin {:?}, {} items", instance.bin, instance.item_count());
    while !state.is_terminal() {
        let action = state.valid_actions()[0];
        let space = *state.current_space().expect("non-terminal state has a space");
        println!(
            "space at ({}, {}, {}): {} valid actions, valid-item matrix has {} values",
            space.x,
            space.y,
            space.z,
            state.valid_actions().len(),
            flatten(&state.valid_items_matrix()).len()
        );
        let t = state.step(&action, &cfg)?;
        sum_lr += t.reward.r_lr;
        println!(
            "  place type {} as {}x{}x{}: r_lr {:.4} r_hd {:+.4} total {:.4}",
            action.item, action.dims.l, action.dims.w, action.dims.h, t.reward.r_lr, t.reward.r_hd, t.reward.total
        );
        state = t.state;
    }
    println!("placed {} items, eta {:.4}, sum of r_lr {:.4}", state.placements().len(), utilization(&state)?, sum_lr);
    println!("bin matrix rows: {}", state.bin_matrix().len());
    Ok(())
}
