//! Feed-forward network parameters, forward propagation, and the error and
//! classification measures computed from it.

use rand::Rng;

use crate::error::{Error, Result};
use crate::topology::Topology;

/// Weight matrix and bias vector of one layer. Weights are row-major with
/// shape `(rows, cols)` where `rows` is this layer's size and `cols` the
/// previous layer's.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LayerParams {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl LayerParams {
    fn zeros(rows: usize, cols: usize) -> Self {
        LayerParams {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            biases: vec![0.0; rows],
        }
    }
}

/// All weight matrices and bias vectors of a network, together with its
/// topology. One firefly / chromosome / trainer state is exactly one of
/// these.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    topology: Topology,
    pub(crate) layers: Vec<LayerParams>,
}

impl WeightSet {
    /// All-zero parameters for the given shape.
    pub fn zeros(topology: &Topology) -> Self {
        let layers = topology
            .layer_sizes()
            .windows(2)
            .map(|w| LayerParams::zeros(w[1], w[0]))
            .collect();
        WeightSet {
            topology: topology.clone(),
            layers,
        }
    }

    /// Random initialization: every weight and bias is `scale * (u - 1/2)`
    /// for an independent uniform `u` in `[0, 1)`, so entries lie in
    /// `[-scale/2, scale/2)`. `scale` must lie strictly inside `(0, 1)`.
    ///
    /// Entries are drawn layer by layer, weights in row-major order first,
    /// then biases; callers relying on reproducibility get the same set for
    /// the same seed.
    pub fn init_random(topology: &Topology, scale: f64, rng: &mut impl Rng) -> Result<Self> {
        if !(scale > 0.0 && scale < 1.0) {
            return Err(Error::BadInitScale(scale));
        }
        let mut ws = WeightSet::zeros(topology);
        for layer in &mut ws.layers {
            for w in &mut layer.weights {
                *w = scale * (rng.random::<f64>() - 0.5);
            }
            for b in &mut layer.biases {
                *b = scale * (rng.random::<f64>() - 0.5);
            }
        }
        Ok(ws)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// Total number of scalar parameters.
    pub fn param_count(&self) -> usize {
        self.topology.param_count()
    }

    /// Flatten to a single vector: layer by layer, weight matrix in
    /// row-major order followed by the bias vector. This is the canonical
    /// parameter order shared by gradients and chromosomes.
    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            flat.extend_from_slice(&layer.weights);
            flat.extend_from_slice(&layer.biases);
        }
        flat
    }

    /// Inverse of [`WeightSet::flatten`].
    pub fn from_flat(topology: &Topology, flat: &[f64]) -> Result<Self> {
        if flat.len() != topology.param_count() {
            return Err(Error::DimensionMismatch {
                expected: topology.param_count(),
                got: flat.len(),
            });
        }
        let mut ws = WeightSet::zeros(topology);
        let mut at = 0;
        for layer in &mut ws.layers {
            let nw = layer.weights.len();
            layer.weights.copy_from_slice(&flat[at..at + nw]);
            at += nw;
            let nb = layer.biases.len();
            layer.biases.copy_from_slice(&flat[at..at + nb]);
            at += nb;
        }
        Ok(ws)
    }

    /// Subtract the same scalar from every weight and every bias.
    pub fn shift_all(&self, delta: f64) -> WeightSet {
        let mut out = self.clone();
        for layer in &mut out.layers {
            for w in &mut layer.weights {
                *w -= delta;
            }
            for b in &mut layer.biases {
                *b -= delta;
            }
        }
        debug_assert!(out.is_finite());
        out
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.iter().chain(&l.biases).all(|v| v.is_finite()))
    }

    pub fn weight(&self, layer: usize, row: usize, col: usize) -> f64 {
        let l = &self.layers[layer];
        l.weights[row * l.cols + col]
    }

    pub fn bias(&self, layer: usize, row: usize) -> f64 {
        self.layers[layer].biases[row]
    }
}

/// Net inputs and activations of every layer for one input pattern.
/// `activations[0]` is the input itself; `net_inputs[n]` and
/// `activations[n + 1]` belong to weight layer `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    pub net_inputs: Vec<Vec<f64>>,
    pub activations: Vec<Vec<f64>>,
}

impl ForwardTrace {
    /// Final layer activation, the network output.
    pub fn output(&self) -> &[f64] {
        self.activations.last().unwrap()
    }
}

/// Training patterns with their target vectors. Targets produced by the
/// dataset pipeline are one-hot; hand-built sets used for gradient work may
/// carry arbitrary target vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    inputs: Vec<Vec<f64>>,
    targets: Vec<Vec<f64>>,
}

impl LabeledSet {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.len(),
                got: targets.len(),
            });
        }
        if let Some(first) = inputs.first() {
            let d = first.len();
            if inputs.iter().any(|p| p.len() != d) {
                return Err(Error::InvalidConfig(
                    "patterns have inconsistent input dimensions".into(),
                ));
            }
        }
        if let Some(first) = targets.first() {
            let d = first.len();
            if targets.iter().any(|t| t.len() != d) {
                return Err(Error::InvalidConfig(
                    "patterns have inconsistent target dimensions".into(),
                ));
            }
        }
        Ok(LabeledSet { inputs, targets })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    pub fn target_dim(&self) -> usize {
        self.targets.first().map_or(0, Vec::len)
    }

    pub fn pattern(&self, i: usize) -> (&[f64], &[f64]) {
        (&self.inputs[i], &self.targets[i])
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[Vec<f64>] {
        &self.targets
    }

    /// True when every target has exactly one entry equal to 1 and the rest 0.
    pub fn is_one_hot(&self) -> bool {
        self.targets.iter().all(|t| {
            t.iter().all(|&v| v == 0.0 || v == 1.0) && t.iter().filter(|&&v| v == 1.0).count() == 1
        })
    }
}

/// Propagate one input through the network, recording net inputs and
/// activations of every layer.
pub fn forward(ws: &WeightSet, input: &[f64]) -> Result<ForwardTrace> {
    if input.len() != ws.topology.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: ws.topology.input_dim(),
            got: input.len(),
        });
    }
    let mut activations = Vec::with_capacity(ws.layers.len() + 1);
    let mut net_inputs = Vec::with_capacity(ws.layers.len());
    activations.push(input.to_vec());
    for (layer, transfer) in ws.layers.iter().zip(ws.topology.transfers()) {
        let prev = activations.last().unwrap();
        let mut net = Vec::with_capacity(layer.rows);
        for r in 0..layer.rows {
            let row = &layer.weights[r * layer.cols..(r + 1) * layer.cols];
            let sum: f64 = row.iter().zip(prev).map(|(w, p)| w * p).sum();
            net.push(sum + layer.biases[r]);
        }
        let act = net.iter().map(|&n| transfer.evaluate(n)).collect();
        net_inputs.push(net);
        activations.push(act);
    }
    Ok(ForwardTrace {
        net_inputs,
        activations,
    })
}

/// Output of the network for one input, without keeping the trace. The two
/// scratch buffers are swapped between layers so repeated calls do not
/// allocate.
fn output_into(ws: &WeightSet, input: &[f64], cur: &mut Vec<f64>, next: &mut Vec<f64>) {
    cur.clear();
    cur.extend_from_slice(input);
    for (layer, transfer) in ws.layers.iter().zip(ws.topology.transfers()) {
        next.clear();
        for r in 0..layer.rows {
            let row = &layer.weights[r * layer.cols..(r + 1) * layer.cols];
            let sum: f64 = row.iter().zip(cur.iter()).map(|(w, p)| w * p).sum();
            next.push(transfer.evaluate(sum + layer.biases[r]));
        }
        std::mem::swap(cur, next);
    }
}

/// Sum of squared errors over all patterns: `sum_j (t_j - p_j)^T (t_j - p_j)`.
/// Patterns are accumulated in index order, so the result is bit-stable.
pub fn sum_squared_error(ws: &WeightSet, data: &LabeledSet) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    check_shapes(ws, data)?;
    let mut cur = Vec::new();
    let mut next = Vec::new();
    let mut total = 0.0;
    for i in 0..data.len() {
        let (input, target) = data.pattern(i);
        output_into(ws, input, &mut cur, &mut next);
        total += squared_error(target, &cur);
    }
    Ok(total)
}

fn squared_error(target: &[f64], output: &[f64]) -> f64 {
    target
        .iter()
        .zip(output)
        .map(|(t, p)| (t - p) * (t - p))
        .sum()
}

/// Index of the largest output activation; ties go to the lowest index.
pub fn classify(ws: &WeightSet, input: &[f64]) -> Result<usize> {
    let trace = forward(ws, input)?;
    Ok(argmax(trace.output()))
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Percentage of patterns whose predicted class matches the target class.
pub fn correct_classification_rate(ws: &WeightSet, data: &LabeledSet) -> Result<f64> {
    evaluate(ws, data).map(|(_, rate)| rate)
}

/// SSE and correct-classification rate in a single pass over the patterns.
pub fn evaluate(ws: &WeightSet, data: &LabeledSet) -> Result<(f64, f64)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    check_shapes(ws, data)?;
    let mut cur = Vec::new();
    let mut next = Vec::new();
    let mut sse = 0.0;
    let mut correct = 0usize;
    for i in 0..data.len() {
        let (input, target) = data.pattern(i);
        output_into(ws, input, &mut cur, &mut next);
        sse += squared_error(target, &cur);
        if argmax(&cur) == argmax(target) {
            correct += 1;
        }
    }
    let rate = 100.0 * correct as f64 / data.len() as f64;
    Ok((sse, rate))
}

fn check_shapes(ws: &WeightSet, data: &LabeledSet) -> Result<()> {
    if data.input_dim() != ws.topology.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: ws.topology.input_dim(),
            got: data.input_dim(),
        });
    }
    if data.target_dim() != ws.topology.output_dim() {
        return Err(Error::DimensionMismatch {
            expected: ws.topology.output_dim(),
            got: data.target_dim(),
        });
    }
    Ok(())
}
