//! Entropy, the covariance estimate of the entropy change, high-covariance
//! clipping and the first-step drift penalty on a small decision batch.

use stablepack::rl_math::{
    clip_selection, clipped_ratios, drift_adjusted_objective, entropy, entropy_delta_estimate, node_covariances,
    DecisionRecord,
};
use stablepack::Result;

fn softmax(z: &[f64]) -> Vec<f64> {
    let e: Vec<f64> = z.iter().map(|v| v.exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

fn main() -> Result<()> {
    let z = [1.0, 0.2, -0.5, 0.0];
    let adv = [0.8, -0.3, 0.1, -0.6];
    let p = softmax(&z);
    let step = 1e-3;
    let moved: Vec<f64> = z.iter().zip(&adv).map(|(a, b)| a + step * b).collect();
    println!("entropy {:.6}", entropy(&p)?);
    println!(
        "entropy change: measured {:.3e}, predicted {:.3e}",
        entropy(&softmax(&moved))? - entropy(&p)?,
        entropy_delta_estimate(&p, &adv, step)?
    );

    let batch = vec![
        DecisionRecord { probs_old: vec![0.7, 0.2, 0.1], probs_new: vec![0.75, 0.15, 0.1], action: 0, advantage: 1.5, is_first_step: true, covariance: None },
        DecisionRecord { probs_old: vec![0.5, 0.5], probs_new: vec![0.4, 0.6], action: 1, advantage: 0.2, is_first_step: false, covariance: None },
        DecisionRecord { probs_old: vec![0.1, 0.9], probs_new: vec![0.2, 0.8], action: 0, advantage: -1.0, is_first_step: false, covariance: None },
        DecisionRecord { probs_old: vec![0.25; 4], probs_new: vec![0.25; 4], action: 2, advantage: 0.4, is_first_step: true, covariance: None },
    ];
    let covs = node_covariances(&batch)?;
    println!("node covariances {covs:.4?}");
    println!("clipped at phi=0.5: {:?}", clip_selection(&covs, 0.5)?);
    println!("ratios at phi=0:   {:.4?}", clipped_ratios(&batch, 0.0)?);
    println!("ratios at phi=0.5: {:.4?}", clipped_ratios(&batch, 0.5)?);
    for r in &batch {
        println!("objective 1.0 becomes {:.4}", drift_adjusted_objective(1.0, r, 0.5)?);
    }
    Ok(())
}
