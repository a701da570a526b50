//! Transfer functions applied by each non-input layer.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Elementwise transfer function of a layer.
///
/// `LogSigmoid` maps into (0, 1), `TanSigmoid` into (-1, 1), `Linear` is the
/// identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transfer {
    LogSigmoid,
    TanSigmoid,
    Linear,
}

impl Transfer {
    pub fn evaluate(self, x: f64) -> f64 {
        match self {
            Transfer::LogSigmoid => 1.0 / (1.0 + (-x).exp()),
            Transfer::TanSigmoid => x.tanh(),
            Transfer::Linear => x,
        }
    }

    /// Derivative with respect to the net input, evaluated at `x`.
    pub fn derivative_at(self, x: f64) -> f64 {
        match self {
            Transfer::LogSigmoid => {
                let y = self.evaluate(x);
                y * (1.0 - y)
            }
            Transfer::TanSigmoid => {
                let y = x.tanh();
                1.0 - y * y
            }
            Transfer::Linear => 1.0,
        }
    }
}

impl fmt::Display for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Transfer::LogSigmoid => "logsig",
            Transfer::TanSigmoid => "tansig",
            Transfer::Linear => "linear",
        };
        f.write_str(name)
    }
}

impl FromStr for Transfer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "logsig" | "log-sigmoid" => Ok(Transfer::LogSigmoid),
            "tansig" | "tan-sigmoid" => Ok(Transfer::TanSigmoid),
            "linear" => Ok(Transfer::Linear),
            other => Err(Error::InvalidConfig(format!(
                "unknown transfer function '{other}' (expected logsig, tansig, or linear)"
            ))),
        }
    }
}
