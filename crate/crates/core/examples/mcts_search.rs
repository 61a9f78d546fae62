//! UCT search against the greedy baseline on one 30-item instance.
//!
//! Usage: `mcts_search [rollouts] [exploration]`

use stablepack::solvers::{greedy_solve, mcts_solve, MctsConfig};
use stablepack::{generate_instance, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let rollouts = args.next().and_then(|a| a.parse().ok()).unwrap_or(5000);
    let exploration = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.03);

    let instance = generate_instance("B2_30", 11)?;
    let greedy = greedy_solve(&instance);
    let mcts = mcts_solve(&instance, &MctsConfig { rollouts, exploration, seed: 1 })?;
    println!("greedy: eta {:.4}, {} placed", greedy.eta, greedy.placements.len());
    println!(
        "mcts:   eta {:.4}, {} placed, {} rollouts in {:.2?}",
        mcts.eta,
        mcts.placements.len(),
        mcts.samples,
        mcts.wall_time
    );
    Ok(())
}
