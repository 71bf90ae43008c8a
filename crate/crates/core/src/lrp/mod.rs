// SPDX-License-Identifier: MIT OR Apache-2.0

//! Layer-wise relevance propagation for LSTM language models.

pub mod linear;
pub mod propagate;

use serde::{Deserialize, Serialize};

pub use linear::{lrp_linear, stabilized, Contribution, LinearSplit, Term};
pub use propagate::{
    check_conservation, init_relevance, layer_bias_name, lrp_decoder, lrp_lstm_step,
    min_abs_denominator, propagate, span_relevance, AttributionResult, ConservationLedger,
    RelevanceInit, StepRelevance, DECODER_BIAS,
};

/// Stabilizer used when none is given.
pub const DEFAULT_EPSILON: f64 = 1e-3;

/// JSON dump of one attribution run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributionDump {
    pub tokens: Vec<String>,
    pub relevance: Vec<f64>,
    pub ledger: ConservationLedger,
    pub delta_y: f64,
    pub epsilon: f64,
    pub residual: f64,
}

impl AttributionDump {
    pub fn new(tokens: Vec<String>, result: &AttributionResult) -> Self {
        Self {
            tokens,
            relevance: result.token_relevance.clone(),
            ledger: result.ledger.clone(),
            delta_y: result.delta_y,
            epsilon: result.epsilon,
            residual: check_conservation(result),
        }
    }
}
