//! Network shape: layer sizes plus the transfer function of each layer.

use crate::error::{Error, Result};
use crate::transfer::Transfer;

/// Layer sizes of a feed-forward network, first entry being the input
/// dimension and the last the output dimension, with one transfer function
/// per non-input layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    layer_sizes: Vec<usize>,
    transfers: Vec<Transfer>,
}

impl Topology {
    pub fn new(layer_sizes: Vec<usize>, transfers: Vec<Transfer>) -> Result<Self> {
        if layer_sizes.len() < 2 || layer_sizes.iter().any(|&n| n == 0) {
            return Err(Error::BadTopology);
        }
        if transfers.len() != layer_sizes.len() - 1 {
            return Err(Error::DimensionMismatch {
                expected: layer_sizes.len() - 1,
                got: transfers.len(),
            });
        }
        Ok(Topology {
            layer_sizes,
            transfers,
        })
    }

    /// Same transfer function on every non-input layer.
    pub fn uniform(layer_sizes: Vec<usize>, transfer: Transfer) -> Result<Self> {
        let n = layer_sizes.len().saturating_sub(1);
        Topology::new(layer_sizes, vec![transfer; n])
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn transfers(&self) -> &[Transfer] {
        &self.transfers
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    /// Number of weight layers (layers with a weight matrix and bias vector).
    pub fn weight_layers(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    /// Total number of scalar parameters (weights plus biases).
    pub fn param_count(&self) -> usize {
        self.layer_sizes
            .windows(2)
            .map(|w| w[1] * w[0] + w[1])
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(Topology::uniform(vec![4], Transfer::LogSigmoid).is_err());
        assert!(Topology::uniform(vec![], Transfer::LogSigmoid).is_err());
        assert!(Topology::uniform(vec![4, 0, 3], Transfer::LogSigmoid).is_err());
    }

    #[test]
    fn rejects_transfer_count_mismatch() {
        assert!(Topology::new(vec![4, 3, 3], vec![Transfer::LogSigmoid]).is_err());
    }

    #[test]
    fn param_count_matches_by_hand() {
        // 4-3-3: 4*3+3 weights+biases in the hidden layer, 3*3+3 in the output.
        let t = Topology::uniform(vec![4, 3, 3], Transfer::LogSigmoid).unwrap();
        assert_eq!(t.param_count(), 15 + 12);
        // 2-1 linear net: 2 weights + 1 bias.
        let t = Topology::uniform(vec![2, 1], Transfer::Linear).unwrap();
        assert_eq!(t.param_count(), 3);
    }
}
