//! Monte Carlo oracles on simulated compound Poisson paths.
//!
//! Path `k` of a run draws from its own ChaCha stream keyed by
//! `(seed, stream_offset + k)`, and per-block results are merged in a fixed
//! order, so estimates are bit-identical for any thread count.

pub mod estimators;
pub mod fluid;
pub mod paths;
pub mod stats;

pub use estimators::{conditional_survival, resolvent_mc, ruin_time_lt, simulate_joint_ruin, simulate_joint_ruin_fluid};
pub use fluid::{fluid_embed, FluidPath};
pub use paths::{sample_path, ClaimSampler, ClaimStream, EventKind, PathEvent};
pub use stats::{McConfig, McEstimate, Meta};
