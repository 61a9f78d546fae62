//! Corner-point greedy over the fixed-bin benchmark sets.
//!
//! Usage: `greedy_baseline [count] [seed]`

use stablepack::solvers::greedy_solve;
use stablepack::{generate_set, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let count = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(2025);

    for scheme in ["B1_30", "B2_30", "B3_30", "BM_M", "S1_30"] {
        let etas: Vec<f64> = generate_set(scheme, count, seed)?.iter().map(|i| greedy_solve(i).eta).collect();
        let mean = etas.iter().sum::<f64>() / etas.len() as f64;
        let var = etas.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / etas.len() as f64;
        println!("{scheme:6} greedy {:.2}% ± {var:.4}", 100.0 * mean);
    }
    Ok(())
}
