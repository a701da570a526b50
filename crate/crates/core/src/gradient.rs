//! Back-propagated sensitivities, the analytic batch gradient built from
//! them, a central-difference gradient used to cross-check it, and the plain
//! steepest-descent trainer.

use rand::Rng;

use crate::error::{Error, Result};
use crate::network::{evaluate, forward, sum_squared_error, ForwardTrace, LabeledSet, WeightSet};
use crate::record::TrainingRecord;
use crate::topology::Topology;

/// Per-layer error signals for one pattern, back-propagated from the output
/// layer. The seed at the output layer is `-2 f'(N) (t - p)`; every earlier
/// layer n is `f'(N^n) ((W^{n+1})^T s^{n+1})`. The gradient of the squared
/// error with respect to layer n's weights is `s^n (p^{n-1})^T`, and with
/// respect to its biases `s^n`.
pub fn backward_sensitivities(
    ws: &WeightSet,
    trace: &ForwardTrace,
    target: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let layers = ws.topology().weight_layers();
    if trace.net_inputs.len() != layers {
        return Err(Error::DimensionMismatch {
            expected: layers,
            got: trace.net_inputs.len(),
        });
    }
    if target.len() != ws.topology().output_dim() {
        return Err(Error::DimensionMismatch {
            expected: ws.topology().output_dim(),
            got: target.len(),
        });
    }

    let transfers = ws.topology().transfers();
    let mut sensitivities = vec![Vec::new(); layers];

    let last = layers - 1;
    let output = trace.output();
    sensitivities[last] = trace.net_inputs[last]
        .iter()
        .zip(target.iter().zip(output))
        .map(|(&n, (&t, &p))| -2.0 * transfers[last].derivative_at(n) * (t - p))
        .collect();

    for n in (0..last).rev() {
        let next = &ws.layers[n + 1];
        let s_next = &sensitivities[n + 1];
        let mut s = Vec::with_capacity(trace.net_inputs[n].len());
        for (r, &net) in trace.net_inputs[n].iter().enumerate() {
            // column r of W^{n+1} dotted with s^{n+1}
            let back: f64 = (0..next.rows)
                .map(|k| next.weights[k * next.cols + r] * s_next[k])
                .sum();
            s.push(transfers[n].derivative_at(net) * back);
        }
        sensitivities[n] = s;
    }
    Ok(sensitivities)
}

/// Batch gradient of the SSE over all patterns, flattened in the canonical
/// parameter order (per layer: weights row-major, then biases).
pub fn analytic_gradient(ws: &WeightSet, data: &LabeledSet) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut acc = WeightSet::zeros(ws.topology());
    for i in 0..data.len() {
        let (input, target) = data.pattern(i);
        let trace = forward(ws, input)?;
        let sens = backward_sensitivities(ws, &trace, target)?;
        for (n, layer) in acc.layers.iter_mut().enumerate() {
            let prev = &trace.activations[n];
            let s = &sens[n];
            for r in 0..layer.rows {
                for c in 0..layer.cols {
                    layer.weights[r * layer.cols + c] += s[r] * prev[c];
                }
                layer.biases[r] += s[r];
            }
        }
    }
    Ok(acc.flatten())
}

/// Central-difference gradient of the SSE: `(SSE(x + h) - SSE(x - h)) / 2h`
/// per parameter, in the canonical flat order. Slow by construction; used to
/// verify the analytic gradient.
pub fn numeric_gradient(ws: &WeightSet, data: &LabeledSet, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::BadStep(h));
    }
    let flat = ws.flatten();
    let mut grad = Vec::with_capacity(flat.len());
    let mut probe = flat.clone();
    for i in 0..flat.len() {
        probe[i] = flat[i] + h;
        let plus = sum_squared_error(&WeightSet::from_flat(ws.topology(), &probe)?, data)?;
        probe[i] = flat[i] - h;
        let minus = sum_squared_error(&WeightSet::from_flat(ws.topology(), &probe)?, data)?;
        probe[i] = flat[i];
        grad.push((plus - minus) / (2.0 * h));
    }
    Ok(grad)
}

/// One batch steepest-descent update: gradient contributions accumulated
/// over all patterns, then every weight and bias moved against the gradient
/// scaled by the learning rate.
pub fn sdbp_step(ws: &WeightSet, data: &LabeledSet, learning_rate: f64) -> Result<WeightSet> {
    if learning_rate <= 0.0 {
        return Err(Error::BadLearningRate(learning_rate));
    }
    let grad = analytic_gradient(ws, data)?;
    let flat = ws.flatten();
    let updated: Vec<f64> = flat
        .iter()
        .zip(&grad)
        .map(|(w, g)| w - learning_rate * g)
        .collect();
    let out = WeightSet::from_flat(ws.topology(), &updated)?;
    debug_assert!(out.is_finite());
    Ok(out)
}

/// Plain steepest-descent training loop, recording one entry per iteration.
/// `best_sse`/`correct_rate` in the records track the best state seen so far,
/// mirroring the other trainers.
pub fn sdbp_train(
    data: &LabeledSet,
    topology: &Topology,
    learning_rate: f64,
    max_iterations: usize,
    init_scale: f64,
    rng: &mut impl Rng,
) -> Result<(WeightSet, Vec<TrainingRecord>)> {
    if max_iterations == 0 {
        return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
    }
    let mut ws = WeightSet::init_random(topology, init_scale, rng)?;
    let (mut best_sse, mut best_rate) = evaluate(&ws, data)?;
    let mut best = ws.clone();
    let mut records = Vec::with_capacity(max_iterations);
    for iteration in 1..=max_iterations {
        ws = sdbp_step(&ws, data, learning_rate)?;
        let (sse, rate) = evaluate(&ws, data)?;
        if sse < best_sse {
            best_sse = sse;
            best_rate = rate;
            best = ws.clone();
        }
        records.push(TrainingRecord {
            iteration,
            avg_sse: sse,
            best_sse,
            correct_rate: best_rate,
            eta: None,
        });
    }
    Ok((best, records))
}
