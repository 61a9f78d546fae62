//! Best-of-K decoding with a uniform policy and with a custom policy that
//! prefers large items, under the case-study constraints.

use stablepack::solvers::{sample_best_of_k, Policy, UniformPolicy};
use stablepack::stability::Ratio;
use stablepack::{generate_instance, PackingState, Result, StabilityParams};

/// Probability proportional to the volume of the oriented item.
struct VolumePolicy;

impl Policy for VolumePolicy {
    fn distribution(&self, state: &PackingState) -> Vec<f64> {
        let volumes: Vec<f64> = state.valid_actions().iter().map(|a| a.dims.volume() as f64).collect();
        let total: f64 = volumes.iter().sum();
        volumes.into_iter().map(|v| v / total).collect()
    }
}

fn main() -> Result<()> {
    let params = StabilityParams::both(Ratio::from_decimal(0.66)?, 3.0);
    let instance = generate_instance("CASE_20", 5)?.with_params(params);
    for k in [1, 8, 128] {
        let uniform = sample_best_of_k(&instance, &UniformPolicy, k, 0)?;
        let volume = sample_best_of_k(&instance, &VolumePolicy, k, 0)?;
        println!("k = {k:3}: uniform eta {:.4}, volume-weighted eta {:.4}", uniform.eta, volume.eta);
    }
    Ok(())
}
