//! Solve one instance, store it as a verified solution record and export the
//! layout as JSON and as a Wavefront OBJ mesh.

use stablepack::io::{layout_obj, verify_solution, LayoutDocument, SolutionRecord, SolverConfig, SolverKind};
use stablepack::solvers::{sample_best_of_k, UniformPolicy};
use stablepack::{generate_instance, RewardConfig, Result};

fn main() -> Result<()> {
    let instance = generate_instance("S1_10", 3)?;
    let result = sample_best_of_k(&instance, &UniformPolicy, 128, 0)?;
    let config = SolverConfig { solver: SolverKind::Sample, budget: Some(128), exploration: None, seed: 0, rewards: RewardConfig::default() };
    let record = SolutionRecord::from_result(&instance, config, &result);
    verify_solution(&record)?;

    let doc = LayoutDocument::from_solution(&record);
    let dir = std::env::temp_dir();
    std::fs::write(dir.join("layout.json"), doc.to_json()?)?;
    std::fs::write(dir.join("layout.obj"), layout_obj(&doc))?;
    println!("eta {:.4}, {} cuboids written to {}", record.eta, doc.cuboids.len(), dir.display());

    let back = LayoutDocument::load(&std::fs::read_to_string(dir.join("layout.json"))?)?;
    assert_eq!(back.solution.as_ref(), Some(&record));
    Ok(())
}
