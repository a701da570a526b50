//! Real-coded genetic algorithm over flattened network weights, with
//! optional steepest-descent refinement of the elites each generation.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::gradient::sdbp_step;
use crate::network::{evaluate, LabeledSet, WeightSet};
use crate::record::TrainingRecord;
use crate::topology::Topology;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub mutation_sigma: f64,
    pub tournament_size: usize,
    pub elite_count: usize,
    /// Steepest-descent steps applied to each elite per generation.
    pub refine_steps: usize,
    /// Learning rate of the refinement steps.
    pub learning_rate: f64,
    pub max_generations: usize,
    pub init_scale: f64,
    /// Stop early once the best snapshot's classification rate exceeds this
    /// percentage; `None` runs all generations.
    pub cc_threshold: Option<f64>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            crossover_rate: 0.9,
            mutation_rate: 0.05,
            mutation_sigma: 0.1,
            tournament_size: 3,
            elite_count: 2,
            refine_steps: 1,
            learning_rate: 0.001,
            max_generations: 100,
            init_scale: 0.5,
            cc_threshold: None,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        fn fail(msg: String) -> Result<()> {
            Err(Error::InvalidConfig(msg))
        }
        if self.population_size == 0 {
            return fail("population_size must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return fail(format!(
                "crossover_rate must lie in [0, 1], got {}",
                self.crossover_rate
            ));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return fail(format!(
                "mutation_rate must lie in [0, 1], got {}",
                self.mutation_rate
            ));
        }
        if !(self.mutation_sigma > 0.0) {
            return fail(format!(
                "mutation_sigma must be > 0, got {}",
                self.mutation_sigma
            ));
        }
        if self.tournament_size < 2 || self.tournament_size > self.population_size {
            return fail(format!(
                "tournament_size must lie in [2, population_size], got {}",
                self.tournament_size
            ));
        }
        if self.elite_count > self.population_size {
            return fail(format!(
                "elite_count must not exceed population_size, got {}",
                self.elite_count
            ));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::BadLearningRate(self.learning_rate));
        }
        if self.max_generations == 0 {
            return fail("max_generations must be >= 1".into());
        }
        if !(self.init_scale > 0.0 && self.init_scale < 1.0) {
            return Err(Error::BadInitScale(self.init_scale));
        }
        Ok(())
    }
}

/// Flat genome in the canonical parameter order, with its cached fitness
/// `1 / (1 + SSE)`. A fitness of zero marks a not-yet-evaluated chromosome.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
    pub fitness: f64,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Self {
        Chromosome {
            genes,
            fitness: 0.0,
        }
    }
}

/// Flatten a weight set into a chromosome (fitness unset).
pub fn encode(ws: &WeightSet) -> Chromosome {
    Chromosome::new(ws.flatten())
}

/// Rebuild the weight set from a chromosome; fails on a gene-count mismatch.
pub fn decode(c: &Chromosome, topology: &Topology) -> Result<WeightSet> {
    WeightSet::from_flat(topology, &c.genes)
}

/// Fitness of a chromosome on the data: `1 / (1 + SSE)`, strictly decreasing
/// in the SSE and equal to 1 only at zero error.
pub fn fitness(c: &Chromosome, data: &LabeledSet, topology: &Topology) -> Result<f64> {
    let ws = decode(c, topology)?;
    let (sse, _) = evaluate(&ws, data)?;
    Ok(1.0 / (1.0 + sse))
}

fn sse_of(c: &Chromosome) -> f64 {
    1.0 / c.fitness - 1.0
}

/// Pick `k` distinct members at random and return the fittest of them.
pub fn tournament_select<'a>(
    pop: &'a [Chromosome],
    k: usize,
    rng: &mut impl Rng,
) -> Result<&'a Chromosome> {
    if pop.is_empty() {
        return Err(Error::EmptyList);
    }
    let k = k.min(pop.len());
    let sampled = rand::seq::index::sample(rng, pop.len(), k);
    let mut best: Option<&Chromosome> = None;
    for idx in sampled {
        let c = &pop[idx];
        if best.is_none_or(|b| c.fitness > b.fitness) {
            best = Some(c);
        }
    }
    Ok(best.unwrap())
}

/// Arithmetic crossover with one mixing coefficient per pair:
/// `child1 = u p1 + (1 - u) p2`, `child2 = (1 - u) p1 + u p2`.
pub fn arithmetic_crossover(
    p1: &Chromosome,
    p2: &Chromosome,
    rng: &mut impl Rng,
) -> (Chromosome, Chromosome) {
    let u: f64 = rng.random();
    let c1 = p1
        .genes
        .iter()
        .zip(&p2.genes)
        .map(|(a, b)| u * a + (1.0 - u) * b)
        .collect();
    let c2 = p1
        .genes
        .iter()
        .zip(&p2.genes)
        .map(|(a, b)| (1.0 - u) * a + u * b)
        .collect();
    (Chromosome::new(c1), Chromosome::new(c2))
}

/// Perturb each gene independently with probability `rate` by Gaussian noise
/// of standard deviation `sigma`.
pub fn gaussian_mutate(
    c: &Chromosome,
    rate: f64,
    sigma: f64,
    rng: &mut impl Rng,
) -> Chromosome {
    let normal = Normal::new(0.0, sigma).expect("sigma must be positive");
    let genes = c
        .genes
        .iter()
        .map(|&g| {
            if rng.random::<f64>() < rate {
                g + normal.sample(rng)
            } else {
                g
            }
        })
        .collect();
    Chromosome::new(genes)
}

/// Result of a full GA training run.
#[derive(Debug, Clone)]
pub struct GaRun {
    /// Best-ever weight set seen across all evaluations.
    pub best: WeightSet,
    pub best_sse: f64,
    pub best_rate: f64,
    pub records: Vec<TrainingRecord>,
}

struct BestTracker {
    weights: WeightSet,
    sse: f64,
    rate: f64,
}

impl BestTracker {
    fn offer(&mut self, ws: &WeightSet, sse: f64, rate: f64) {
        if sse < self.sse {
            self.weights = ws.clone();
            self.sse = sse;
            self.rate = rate;
        }
    }
}

/// Generational loop with elitism: evaluate everyone, carry the elites over
/// (after the configured number of steepest-descent refinement steps each),
/// and fill the remainder by tournament selection, arithmetic crossover, and
/// Gaussian mutation. Emits one record per generation.
pub fn ga_train(
    data: &LabeledSet,
    topology: &Topology,
    cfg: &GaConfig,
    rng: &mut impl Rng,
) -> Result<GaRun> {
    cfg.validate()?;

    let mut population: Vec<Chromosome> = Vec::with_capacity(cfg.population_size);
    for _ in 0..cfg.population_size {
        let ws = WeightSet::init_random(topology, cfg.init_scale, rng)?;
        population.push(encode(&ws));
    }

    let mut best = BestTracker {
        weights: WeightSet::zeros(topology),
        sse: f64::INFINITY,
        rate: 0.0,
    };
    let mut records = Vec::with_capacity(cfg.max_generations);

    for generation in 1..=cfg.max_generations {
        // Evaluate and rank, fittest first.
        for c in &mut population {
            let ws = decode(c, topology)?;
            let (sse, rate) = evaluate(&ws, data)?;
            c.fitness = 1.0 / (1.0 + sse);
            best.offer(&ws, sse, rate);
        }
        population.sort_by(|a, b| b.fitness.partial_cmp(&a.fitness).expect("non-finite fitness"));

        // Lamarckian refinement of the elites.
        if cfg.refine_steps > 0 {
            for c in population.iter_mut().take(cfg.elite_count) {
                let mut ws = decode(c, topology)?;
                for _ in 0..cfg.refine_steps {
                    ws = sdbp_step(&ws, data, cfg.learning_rate)?;
                }
                let (sse, rate) = evaluate(&ws, data)?;
                *c = encode(&ws);
                c.fitness = 1.0 / (1.0 + sse);
                best.offer(&ws, sse, rate);
            }
            population.sort_by(|a, b| {
                b.fitness.partial_cmp(&a.fitness).expect("non-finite fitness")
            });
        }

        let avg_sse =
            population.iter().map(sse_of).sum::<f64>() / population.len() as f64;
        let record = TrainingRecord {
            iteration: generation,
            avg_sse,
            best_sse: best.sse,
            correct_rate: best.rate,
            eta: None,
        };
        let stop = generation == cfg.max_generations
            || cfg.cc_threshold.is_some_and(|t| record.correct_rate > t);
        records.push(record);
        if stop {
            break;
        }

        // Next generation: elites first, offspring fill the rest.
        let mut next: Vec<Chromosome> =
            population.iter().take(cfg.elite_count).cloned().collect();
        while next.len() < cfg.population_size {
            let p1 = tournament_select(&population, cfg.tournament_size, rng)?.clone();
            let p2 = tournament_select(&population, cfg.tournament_size, rng)?.clone();
            let (c1, c2) = if rng.random::<f64>() < cfg.crossover_rate {
                arithmetic_crossover(&p1, &p2, rng)
            } else {
                (p1, p2)
            };
            next.push(gaussian_mutate(&c1, cfg.mutation_rate, cfg.mutation_sigma, rng));
            if next.len() < cfg.population_size {
                next.push(gaussian_mutate(&c2, cfg.mutation_rate, cfg.mutation_sigma, rng));
            }
        }
        population = next;
    }

    Ok(GaRun {
        best: best.weights,
        best_sse: best.sse,
        best_rate: best.rate,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::Transfer;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn topo(sizes: &[usize]) -> Topology {
        Topology::uniform(sizes.to_vec(), Transfer::LogSigmoid).unwrap()
    }

    fn tiny_data() -> LabeledSet {
        LabeledSet::new(
            vec![vec![0.1, 0.9], vec![0.8, 0.2], vec![0.3, 0.4]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn encode_decode_round_trips() {
        let t = topo(&[4, 3, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ws = WeightSet::init_random(&t, 0.5, &mut rng).unwrap();
        let back = decode(&encode(&ws), &t).unwrap();
        assert_eq!(ws, back);
    }

    #[test]
    fn gene_count_of_small_linear_net() {
        let t = Topology::uniform(vec![2, 1], Transfer::Linear).unwrap();
        let ws = WeightSet::zeros(&t);
        assert_eq!(encode(&ws).genes.len(), 3);
    }

    #[test]
    fn encode_is_stable() {
        let t = topo(&[3, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ws = WeightSet::init_random(&t, 0.5, &mut rng).unwrap();
        assert_eq!(encode(&ws), encode(&ws));
    }

    #[test]
    fn decode_rejects_wrong_gene_count() {
        let t = topo(&[3, 2]);
        assert!(decode(&Chromosome::new(vec![0.0; 5]), &t).is_err());
    }

    #[test]
    fn fitness_examples() {
        // Zero-weight logsig net outputs 0.5 everywhere; targets of 0.5 give
        // SSE = 0 and fitness 1.
        let t = topo(&[1, 1]);
        let data = LabeledSet::new(vec![vec![0.3]], vec![vec![0.5]]).unwrap();
        let c = encode(&WeightSet::zeros(&t));
        assert_eq!(fitness(&c, &data, &t).unwrap(), 1.0);

        // SSE = 1 gives fitness 0.5: linear 1-1 net, output 0, target 1.
        let t = Topology::uniform(vec![1, 1], Transfer::Linear).unwrap();
        let data = LabeledSet::new(vec![vec![0.0]], vec![vec![1.0]]).unwrap();
        let c = encode(&WeightSet::zeros(&t));
        assert_eq!(fitness(&c, &data, &t).unwrap(), 0.5);
    }

    #[test]
    fn fitness_is_monotone_in_sse() {
        assert!(1.0 / (1.0 + 0.3) > 1.0 / (1.0 + 0.7));
    }

    #[test]
    fn crossover_of_identical_parents_returns_them() {
        let p = Chromosome::new(vec![0.4, -0.2, 1.1]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (c1, c2) = arithmetic_crossover(&p, &p, &mut rng);
        for (a, b) in c1.genes.iter().zip(&p.genes) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in c2.genes.iter().zip(&p.genes) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_mutation_rate_changes_nothing() {
        let c = Chromosome::new(vec![0.4, -0.2, 1.1]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = gaussian_mutate(&c, 0.0, 0.1, &mut rng);
        assert_eq!(m.genes, c.genes);
    }

    #[test]
    fn exhaustive_tournament_returns_global_best() {
        let mut pop: Vec<Chromosome> = (0..6)
            .map(|i| {
                let mut c = Chromosome::new(vec![i as f64]);
                c.fitness = 0.1 * i as f64;
                c
            })
            .collect();
        pop[3].fitness = 0.99;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let winner = tournament_select(&pop, pop.len(), &mut rng).unwrap();
        assert_eq!(winner.fitness, 0.99);
    }

    #[test]
    fn single_generation_yields_single_record() {
        let cfg = GaConfig {
            population_size: 8,
            max_generations: 1,
            ..GaConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let run = ga_train(&tiny_data(), &topo(&[2, 3, 2]), &cfg, &mut rng).unwrap();
        assert_eq!(run.records.len(), 1);
    }

    #[test]
    fn all_elite_population_is_static() {
        // Every slot an elite, no refinement, no mutation: a closed system.
        let cfg = GaConfig {
            population_size: 6,
            elite_count: 6,
            refine_steps: 0,
            mutation_rate: 0.0,
            max_generations: 5,
            ..GaConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let run = ga_train(&tiny_data(), &topo(&[2, 3, 2]), &cfg, &mut rng).unwrap();
        let first = run.records.first().unwrap().best_sse;
        for r in &run.records {
            assert_eq!(r.best_sse, first);
            assert_eq!(r.avg_sse, run.records[0].avg_sse);
        }
    }

    #[test]
    fn elitism_keeps_best_fitness_non_decreasing() {
        let cfg = GaConfig {
            population_size: 12,
            elite_count: 2,
            refine_steps: 0,
            max_generations: 15,
            ..GaConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let run = ga_train(&tiny_data(), &topo(&[2, 3, 2]), &cfg, &mut rng).unwrap();
        let mut last = f64::INFINITY;
        for r in &run.records {
            assert!(r.best_sse <= last + 1e-15);
            last = r.best_sse;
        }
    }

    #[test]
    fn ga_train_is_deterministic_per_seed() {
        let cfg = GaConfig {
            population_size: 10,
            max_generations: 6,
            ..GaConfig::default()
        };
        let r1 = ga_train(
            &tiny_data(),
            &topo(&[2, 3, 2]),
            &cfg,
            &mut ChaCha8Rng::seed_from_u64(11),
        )
        .unwrap();
        let r2 = ga_train(
            &tiny_data(),
            &topo(&[2, 3, 2]),
            &cfg,
            &mut ChaCha8Rng::seed_from_u64(11),
        )
        .unwrap();
        assert_eq!(r1.records, r2.records);
        assert_eq!(r1.best, r2.best);
    }

    #[test]
    fn config_validation_catches_bad_fields() {
        let mut cfg = GaConfig::default();
        cfg.crossover_rate = 1.5;
        assert!(cfg.validate().is_err());
        let mut cfg = GaConfig::default();
        cfg.tournament_size = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = GaConfig::default();
        cfg.elite_count = cfg.population_size + 1;
        assert!(cfg.validate().is_err());
        assert!(GaConfig::default().validate().is_ok());
    }
}
