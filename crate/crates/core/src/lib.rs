//! Training toolkit for small feed-forward classification networks.
//!
//! Three trainers share one network core: a firefly-algorithm trainer that
//! evolves a population of weight sets by brightness-driven attraction, a
//! real-coded genetic algorithm with optional gradient refinement of its
//! elites, and plain batch steepest descent. A CSV ingestion layer feeds the
//! UCI Iris / Wine / Liver benchmark files through min-max normalization and
//! one-hot encoding, and every trainer emits the same per-iteration metrics
//! records so runs can be compared directly.
//!
//! All randomness flows from a caller-supplied seeded generator; identical
//! seeds and configs give bit-identical runs.

pub mod dataset;
pub mod error;
pub mod firefly;
pub mod ga;
pub mod gradient;
pub mod network;
pub mod record;
pub mod topology;
pub mod transfer;

pub use error::{Error, Result};
pub use network::{LabeledSet, WeightSet};
pub use record::TrainingRecord;
pub use topology::Topology;
pub use transfer::Transfer;

/// The deterministic generator used by the experiment harness.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Seeded generator for a reproducible run.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
