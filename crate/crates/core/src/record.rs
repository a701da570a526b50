//! Per-iteration training metrics shared by all trainers.

/// One row of training metrics. `best_sse` and `correct_rate` describe the
/// best weight set seen so far (the elitist snapshot), `avg_sse` the current
/// population (a single state for steepest descent). `eta` is the light
/// absorption coefficient in effect during the iteration and is `None` for
/// non-firefly trainers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRecord {
    pub iteration: usize,
    pub avg_sse: f64,
    pub best_sse: f64,
    pub correct_rate: f64,
    pub eta: Option<f64>,
}
