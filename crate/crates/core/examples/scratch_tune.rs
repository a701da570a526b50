// Scratch experiment: hidden-transfer and init-scale variants on Iris.

use fabpnn::dataset::load_builtin;
use fabpnn::firefly::{train, FireflyConfig, MovementSpace};
use fabpnn::seeded_rng;
use fabpnn::topology::Topology;
use fabpnn::transfer::Transfer;

fn stability(rates: &[f64]) -> Option<usize> {
    if rates.len() < 2 {
        return None;
    }
    let last = *rates.last().unwrap();
    for k in 0..rates.len() {
        if rates[k..].iter().all(|r| (r - last).abs() <= 0.5) {
            return Some(k + 1);
        }
    }
    None
}

fn main() {
    let data = load_builtin("iris")
        .unwrap()
        .min_max_normalize()
        .to_labeled_set()
        .unwrap();

    let mut results = Vec::new();
    for (hname, hidden) in [("logsig", Transfer::LogSigmoid), ("tansig", Transfer::TanSigmoid)] {
        let topology =
            Topology::new(vec![4, 6, 3], vec![hidden, Transfer::LogSigmoid]).unwrap();
        for a in [0.5, 0.9] {
            for alpha in [0.4, 0.6, 0.8] {
                for decay in [0.95, 0.97] {
                    for eta0 in [0.02, 0.1] {
                        for growth in [0.0, 0.05] {
                            let mut pass = 0;
                            let mut lines = Vec::new();
                            for seed in 1..=5u64 {
                                let cfg = FireflyConfig {
                                    movement_space: MovementSpace::WeightVector,
                                    randomization: alpha,
                                    randomization_decay: decay,
                                    initial_absorption: eta0,
                                    absorption_growth: growth,
                                    init_scale: a,
                                    ..FireflyConfig::default()
                                };
                                let run =
                                    train(&data, &topology, &cfg, &mut seeded_rng(seed))
                                        .unwrap();
                                let rates: Vec<f64> =
                                    run.records.iter().map(|r| r.correct_rate).collect();
                                let fin = *rates.last().unwrap();
                                let st = stability(&rates).unwrap_or(999);
                                if fin >= 90.0 && st <= 40 {
                                    pass += 1;
                                }
                                lines.push(format!("{fin:.0}@{st}"));
                            }
                            results.push((
                                pass,
                                format!(
                                    "h={hname} a={a} alpha={alpha} decay={decay} eta0={eta0} growth={growth} -> {pass}/5  {}",
                                    lines.join(" ")
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    results.sort_by(|a, b| b.0.cmp(&a.0));
    for (_, line) in results.iter().take(18) {
        println!("{line}");
    }
}
