//! Deterministic 3D bin packing with support and weight constraints.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: exact integer cuboid arithmetic.
//! - [`ems`]: empty maximal spaces and their screening order.
//! - [`stability`]: support-ratio and weight rules.
//! - [`env`]: the packing MDP with its weighted stepwise reward.
//! - [`solvers`]: corner-point greedy, UCT search and best-of-K sampling.
//! - [`rl_math`]: entropy, covariance and ratio-clipping arithmetic.
//! - [`instance`]: seeded benchmark instance generators.
//! - [`io`]: versioned JSON-lines formats, re-verification and layout export.
//! - [`cli`]: the `stablepack` command-line front end.
//!
//! Runnable walkthroughs of each piece live in the crate's `examples/`.

pub mod cli;
pub mod ems;
pub mod env;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod io;
pub mod rl_math;
pub mod solvers;
pub mod stability;

pub use env::{ItemType, PackingState, PlacementAction, RewardConfig, StepReward};
pub use error::{PackError, Result};
pub use geometry::{Cuboid, Dims};
pub use instance::{generate_instance, generate_set, InstanceSpec};
pub use solvers::SolveResult;
pub use stability::{Placed, StabilityParams};
