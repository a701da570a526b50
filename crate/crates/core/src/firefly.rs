//! Firefly-algorithm training of network weights.
//!
//! A population of candidate weight sets is evolved by attraction: each
//! firefly's brightness is inversely tied to its sum of squared errors, and
//! dimmer fireflies move toward the brightest one, with the attraction
//! damped by a light absorption coefficient that grows every iteration to
//! contract the search.
//!
//! Two movement spaces are supported. `WeightVector` treats a firefly as a
//! point in flattened weight space and moves it componentwise toward the
//! brightest firefly's weights. `ErrorScalar` moves the scalar SSE values
//! themselves and subtracts the moved value from every weight and bias of
//! the firefly; it reproduces the update rule exactly as written but shifts
//! all parameters along the all-ones direction, which leaves each firefly on
//! a one-dimensional slice of weight space and goes nowhere as a trainer
//! (see `movement_space` in [`FireflyConfig`]).

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::network::{evaluate, LabeledSet, WeightSet};
use crate::record::TrainingRecord;
use crate::topology::Topology;

/// Which quantity the movement formula is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovementSpace {
    /// Move the scalar SSE values and subtract the result from every weight
    /// and bias.
    ErrorScalar,
    /// Move the flattened weight vectors componentwise (standard firefly
    /// optimization over weight space).
    WeightVector,
}

impl fmt::Display for MovementSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MovementSpace::ErrorScalar => "error-scalar",
            MovementSpace::WeightVector => "weight-vector",
        })
    }
}

impl FromStr for MovementSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error-scalar" => Ok(MovementSpace::ErrorScalar),
            "weight-vector" => Ok(MovementSpace::WeightVector),
            other => Err(Error::InvalidConfig(format!(
                "unknown movement space '{other}' (expected error-scalar or weight-vector)"
            ))),
        }
    }
}

/// Parameters of the firefly trainer.
#[derive(Debug, Clone, PartialEq)]
pub struct FireflyConfig {
    /// Number of fireflies (candidate weight sets).
    pub population_size: usize,
    /// Initial light intensity L0.
    pub initial_intensity: f64,
    /// Initial light absorption coefficient.
    pub initial_absorption: f64,
    /// Per-iteration multiplicative absorption increment: eta <- eta * (1 + growth).
    pub absorption_growth: f64,
    /// Randomization constant alpha.
    pub randomization: f64,
    /// Per-iteration multiplicative decay of alpha.
    pub randomization_decay: f64,
    /// Scale of the uniform weight initialization, strictly inside (0, 1).
    pub init_scale: f64,
    pub max_iterations: usize,
    /// Stop once the best snapshot's correct-classification rate exceeds
    /// this percentage.
    pub cc_threshold: f64,
    /// Stop once the population-average SSE falls to or below this value.
    pub sse_threshold: f64,
    pub movement_space: MovementSpace,
}

impl Default for FireflyConfig {
    fn default() -> Self {
        FireflyConfig {
            population_size: 20,
            initial_intensity: 1.0,
            initial_absorption: 1.0,
            absorption_growth: 0.05,
            randomization: 0.2,
            randomization_decay: 0.97,
            init_scale: 0.5,
            max_iterations: 100,
            cc_threshold: 97.0,
            sse_threshold: 0.45,
            movement_space: MovementSpace::WeightVector,
        }
    }
}

impl FireflyConfig {
    pub fn validate(&self) -> Result<()> {
        fn fail(msg: String) -> Result<()> {
            Err(Error::InvalidConfig(msg))
        }
        if self.population_size == 0 {
            return fail("population_size must be >= 1".into());
        }
        if !(self.initial_intensity > 0.0) {
            return fail(format!("L0 must be > 0, got {}", self.initial_intensity));
        }
        if !(self.initial_absorption >= 0.0) {
            return fail(format!("eta0 must be >= 0, got {}", self.initial_absorption));
        }
        if !(self.absorption_growth >= 0.0) {
            return fail(format!(
                "absorption growth must be >= 0, got {}",
                self.absorption_growth
            ));
        }
        if !(self.randomization >= 0.0) {
            return fail(format!("alpha must be >= 0, got {}", self.randomization));
        }
        if !(0.0..=1.0).contains(&self.randomization_decay) {
            return fail(format!(
                "alpha decay must lie in [0, 1], got {}",
                self.randomization_decay
            ));
        }
        if !(self.init_scale > 0.0 && self.init_scale < 1.0) {
            return Err(Error::BadInitScale(self.init_scale));
        }
        if self.max_iterations == 0 {
            return fail("max_iterations must be >= 1".into());
        }
        if !(0.0..=100.0).contains(&self.cc_threshold) {
            return fail(format!(
                "cc_threshold must lie in [0, 100], got {}",
                self.cc_threshold
            ));
        }
        if !(self.sse_threshold >= 0.0) {
            return fail(format!(
                "sse_threshold must be >= 0, got {}",
                self.sse_threshold
            ));
        }
        Ok(())
    }
}

/// One candidate solution: a weight set plus its cached SSE (the inverse of
/// its brightness) and correct-classification rate on the training set.
/// A firefly whose weights changed but whose error was not yet recomputed is
/// stale; [`Firefly::is_fresh`] reports this.
#[derive(Debug, Clone, PartialEq)]
pub struct Firefly {
    pub weights: WeightSet,
    pub error: f64,
    pub correct_rate: f64,
}

impl Firefly {
    /// Evaluate `weights` on `data` and cache the results.
    pub fn evaluated(weights: WeightSet, data: &LabeledSet) -> Result<Self> {
        let (error, correct_rate) = evaluate(&weights, data)?;
        Ok(Firefly {
            weights,
            error,
            correct_rate,
        })
    }

    pub fn is_fresh(&self) -> bool {
        self.error.is_finite()
    }
}

/// Ordered list of fireflies; its length never changes during training.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    fireflies: Vec<Firefly>,
}

impl Population {
    pub fn new(fireflies: Vec<Firefly>) -> Self {
        Population { fireflies }
    }

    pub fn len(&self) -> usize {
        self.fireflies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fireflies.is_empty()
    }

    pub fn fireflies(&self) -> &[Firefly] {
        &self.fireflies
    }

    /// Index of the lowest-error firefly; ties go to the lowest index.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for (i, f) in self.fireflies.iter().enumerate().skip(1) {
            if f.error < self.fireflies[best].error {
                best = i;
            }
        }
        best
    }

    /// Stable sort by error, ascending.
    pub fn rank(&mut self) {
        self.fireflies
            .sort_by(|a, b| a.error.partial_cmp(&b.error).expect("non-finite error"));
    }

    pub fn errors(&self) -> Vec<f64> {
        self.fireflies.iter().map(|f| f.error).collect()
    }
}

/// Scalar aggregate of the population's SSE values: the sum of their
/// squares.
pub fn performance_index(errors: &[f64]) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::EmptyList);
    }
    debug_assert!(errors.iter().all(|&e| e >= 0.0));
    Ok(errors.iter().map(|&e| e * e).sum())
}

/// Distance between two fireflies: the absolute brightness gap in
/// error-scalar mode, the Euclidean distance of the flattened weights in
/// weight-vector mode.
pub fn firefly_distance(fi: &Firefly, fj: &Firefly, space: MovementSpace) -> Result<f64> {
    if fi.weights.topology() != fj.weights.topology() {
        return Err(Error::InvalidConfig(
            "fireflies have different topologies".into(),
        ));
    }
    Ok(match space {
        MovementSpace::ErrorScalar => (fi.error - fj.error).abs(),
        MovementSpace::WeightVector => fi
            .weights
            .flatten()
            .iter()
            .zip(fj.weights.flatten().iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt(),
    })
}

/// Attraction strength at distance `d`: `l0 * exp(-eta * d^2)`.
pub fn light_intensity(l0: f64, eta: f64, d: f64) -> f64 {
    l0 * (-eta * d * d).exp()
}

/// Move one scalar value toward a brighter one:
/// `fi + l0 e^{-eta d^2} (fj - fi) + alpha (u - 1/2)`.
pub fn move_scalar(
    fi: f64,
    fj: f64,
    d: f64,
    l0: f64,
    eta: f64,
    alpha: f64,
    rng: &mut impl Rng,
) -> f64 {
    fi + light_intensity(l0, eta, d) * (fj - fi) + alpha * (rng.random::<f64>() - 0.5)
}

/// Componentwise movement of a flattened weight vector toward a brighter
/// firefly's weights, with an independent random term per component.
pub fn move_vector(
    wi: &[f64],
    wj: &[f64],
    d: f64,
    l0: f64,
    eta: f64,
    alpha: f64,
    rng: &mut impl Rng,
) -> Vec<f64> {
    let beta = light_intensity(l0, eta, d);
    wi.iter()
        .zip(wj)
        .map(|(&a, &b)| a + beta * (b - a) + alpha * (rng.random::<f64>() - 0.5))
        .collect()
}

/// The moved quantity produced by [`move_firefly`].
#[derive(Debug, Clone, PartialEq)]
pub enum Movement {
    Scalar(f64),
    Vector(Vec<f64>),
}

/// Movement of firefly `fi` toward the brighter `fj` in the configured
/// space.
pub fn move_firefly(
    fi: &Firefly,
    fj: &Firefly,
    d: f64,
    space: MovementSpace,
    l0: f64,
    eta: f64,
    alpha: f64,
    rng: &mut impl Rng,
) -> Movement {
    match space {
        MovementSpace::ErrorScalar => {
            Movement::Scalar(move_scalar(fi.error, fj.error, d, l0, eta, alpha, rng))
        }
        MovementSpace::WeightVector => Movement::Vector(move_vector(
            &fi.weights.flatten(),
            &fj.weights.flatten(),
            d,
            l0,
            eta,
            alpha,
            rng,
        )),
    }
}

/// Write a movement back into a firefly's parameters. In error-scalar mode
/// the moved scalar is subtracted from every weight and bias; in
/// weight-vector mode the flattened weights are replaced by the moved
/// vector. The returned firefly is stale until re-evaluated.
pub fn apply_movement(firefly: &Firefly, movement: &Movement) -> Result<Firefly> {
    let weights = match movement {
        Movement::Scalar(delta) => firefly.weights.shift_all(*delta),
        Movement::Vector(flat) => WeightSet::from_flat(firefly.weights.topology(), flat)?,
    };
    Ok(Firefly {
        weights,
        error: f64::NAN,
        correct_rate: f64::NAN,
    })
}

/// Grow the absorption coefficient once per completed iteration:
/// `eta * (1 + growth)`.
pub fn update_absorption(eta: f64, growth: f64) -> f64 {
    eta * (1.0 + growth)
}

/// Training state between iterations.
#[derive(Debug, Clone)]
pub struct Swarm {
    population: Population,
    eta: f64,
    alpha: f64,
    completed: usize,
    best: Firefly,
}

impl Swarm {
    /// Generate and evaluate the initial population.
    pub fn init(
        data: &LabeledSet,
        topology: &Topology,
        cfg: &FireflyConfig,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        cfg.validate()?;
        let mut fireflies = Vec::with_capacity(cfg.population_size);
        for _ in 0..cfg.population_size {
            let ws = WeightSet::init_random(topology, cfg.init_scale, rng)?;
            fireflies.push(Firefly::evaluated(ws, data)?);
        }
        let population = Population::new(fireflies);
        let best = population.fireflies()[population.best_index()].clone();
        Ok(Swarm {
            population,
            eta: cfg.initial_absorption,
            alpha: cfg.randomization,
            completed: 0,
            best,
        })
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Best-ever firefly (elitist snapshot kept outside the population).
    pub fn best(&self) -> &Firefly {
        &self.best
    }

    pub fn completed_iterations(&self) -> usize {
        self.completed
    }
}

/// One outer iteration: every firefly dimmer than the brightest one moves
/// toward it and has its SSE and classification rate recomputed before the
/// next candidate is considered. The brightest firefly is chosen once per
/// iteration and never moves. Afterwards the population is re-ranked by
/// error and the iteration's metrics are recorded; the absorption
/// coefficient is not touched here.
pub fn train_iteration(
    swarm: &mut Swarm,
    data: &LabeledSet,
    cfg: &FireflyConfig,
    rng: &mut impl Rng,
) -> Result<TrainingRecord> {
    if swarm.population.fireflies().iter().any(|f| !f.is_fresh()) {
        return Err(Error::InvalidConfig(
            "population has stale errors on entry".into(),
        ));
    }
    let j = swarm.population.best_index();
    let brightest = swarm.population.fireflies()[j].clone();

    for i in 0..swarm.population.len() {
        if i == j {
            continue;
        }
        let dim = &swarm.population.fireflies[i];
        if !(brightest.error < dim.error) {
            continue; // pass: not strictly dimmer than the brightest
        }
        let d = firefly_distance(dim, &brightest, cfg.movement_space)?;
        let movement = move_firefly(
            dim,
            &brightest,
            d,
            cfg.movement_space,
            cfg.initial_intensity,
            swarm.eta,
            swarm.alpha,
            rng,
        );
        let mut moved = apply_movement(dim, &movement)?;
        let (sse, rate) = evaluate(&moved.weights, data)?;
        moved.error = sse;
        moved.correct_rate = rate;
        if moved.error < swarm.best.error {
            swarm.best = moved.clone();
        }
        swarm.population.fireflies[i] = moved;
    }

    swarm.population.rank();
    swarm.completed += 1;
    let errors = swarm.population.errors();
    let avg_sse = errors.iter().sum::<f64>() / errors.len() as f64;
    Ok(TrainingRecord {
        iteration: swarm.completed,
        avg_sse,
        best_sse: swarm.best.error,
        correct_rate: swarm.best.correct_rate,
        eta: Some(swarm.eta),
    })
}

/// Result of a full firefly training run.
#[derive(Debug, Clone)]
pub struct FireflyRun {
    /// Best-ever weight set (elitist snapshot).
    pub best: WeightSet,
    pub best_sse: f64,
    pub best_rate: f64,
    /// Aggregate of the initial population's SSE values.
    pub initial_performance_index: f64,
    pub records: Vec<TrainingRecord>,
}

/// Full training loop: initialize the population, then iterate movements,
/// growing the absorption coefficient and decaying the randomization after
/// every iteration, until the classification rate exceeds `cc_threshold`,
/// the population-average SSE drops to `sse_threshold`, or `max_iterations`
/// is reached.
pub fn train(
    data: &LabeledSet,
    topology: &Topology,
    cfg: &FireflyConfig,
    rng: &mut impl Rng,
) -> Result<FireflyRun> {
    let mut swarm = Swarm::init(data, topology, cfg, rng)?;
    let initial_performance_index = performance_index(&swarm.population.errors())?;
    let mut records = Vec::new();
    for _ in 0..cfg.max_iterations {
        let record = train_iteration(&mut swarm, data, cfg, rng)?;
        swarm.eta = update_absorption(swarm.eta, cfg.absorption_growth);
        swarm.alpha *= cfg.randomization_decay;
        let stop = record.correct_rate > cfg.cc_threshold || record.avg_sse <= cfg.sse_threshold;
        records.push(record);
        if stop {
            break;
        }
    }
    Ok(FireflyRun {
        best: swarm.best.weights.clone(),
        best_sse: swarm.best.error,
        best_rate: swarm.best.correct_rate,
        initial_performance_index,
        records,
    })
}
