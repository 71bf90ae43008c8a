// SPDX-License-Identifier: MIT OR Apache-2.0

//! Backward relevance flow through the decoder and the LSTM stack.
//!
//! Per layer and timestep, relevance on `h_t` passes unchanged to `c_t` (the
//! output gate is a unary scaler), is split between `f⊙c_{t-1}` and `i⊙g`, and
//! the `i⊙g` share is split across `W_gx x_t`, `W_gh h_{t-1}` and `b_g` using the
//! candidate pre-activation as denominator. The input and forget gates carry no
//! relevance of their own. The relevance emitted for a layer's input at time
//! `t` is added to the lower layer's pending `h_t` relevance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{score_pair, ForwardTrace, Gate, GateRecord, LayerWeights, WeightContainer};
use crate::tensor::{dot, Matrix};

use super::linear::{lrp_linear, Term};

pub const DECODER_BIAS: &str = "decoder.b";

pub fn layer_bias_name(layer: usize) -> String {
    format!("layer{layer}.b")
}

/// Output relevance: `y_pos` on the positive id, `−y_neg` on the negative id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelevanceInit {
    pub id_pos: usize,
    pub id_neg: usize,
    pub r_pos: f64,
    pub r_neg: f64,
    pub delta_y: f64,
}

impl RelevanceInit {
    /// Non-zero entries of `R(y)` as `(id, relevance)`.
    pub fn entries(&self) -> [(usize, f64); 2] {
        [(self.id_pos, self.r_pos), (self.id_neg, self.r_neg)]
    }

    pub fn total(&self) -> f64 {
        self.r_pos + self.r_neg
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            r_pos: alpha * self.r_pos,
            r_neg: alpha * self.r_neg,
            delta_y: alpha * self.delta_y,
            ..self.clone()
        }
    }
}

pub fn init_relevance(logits: &[f64], id_pos: usize, id_neg: usize) -> Result<RelevanceInit> {
    let delta_y = score_pair(logits, id_pos, id_neg)?;
    Ok(RelevanceInit {
        id_pos,
        id_neg,
        r_pos: logits[id_pos],
        r_neg: -logits[id_neg],
        delta_y,
    })
}

/// Relevance that ended somewhere other than an input token.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConservationLedger {
    pub bias_relevance: BTreeMap<String, f64>,
    /// Mass that reached `h_0` or `c_0`.
    pub initial_state_relevance: f64,
    /// Mass absorbed by the ε stabilizer.
    pub epsilon_leak: f64,
}

impl ConservationLedger {
    pub fn add_bias(&mut self, name: &str, amount: f64) {
        *self.bias_relevance.entry(name.to_string()).or_insert(0.0) += amount;
    }

    pub fn bias_total(&self) -> f64 {
        self.bias_relevance.values().sum()
    }

    pub fn total(&self) -> f64 {
        self.bias_total() + self.initial_state_relevance + self.epsilon_leak
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributionResult {
    /// `r(x_j)`: summed embedding-level relevance per input position.
    pub token_relevance: Vec<f64>,
    /// `input_relevance[layer][t]` is `R(x_t)` at that layer's input.
    pub input_relevance: Vec<Vec<Vec<f64>>>,
    pub ledger: ConservationLedger,
    pub delta_y: f64,
    pub epsilon: f64,
}

/// Relevance flowing to a layer's input and previous states after one step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRelevance {
    pub r_x: Vec<f64>,
    pub r_h_prev: Vec<f64>,
    pub r_c_prev: Vec<f64>,
}

/// Splits the two active output units back onto `h_T` and the decoder bias.
pub fn lrp_decoder(
    init: &RelevanceInit,
    decoder_weights: &Matrix,
    hidden: &[f64],
    decoder_bias: &[f64],
    epsilon: f64,
    ledger: &mut ConservationLedger,
) -> Result<Vec<f64>> {
    let size = decoder_weights.rows();
    let mut r_h = vec![0.0; hidden.len()];
    for (id, r) in init.entries() {
        if id >= size || id >= decoder_bias.len() {
            return Err(Error::IdOutOfRange { id, size });
        }
        let bias = [decoder_bias[id]];
        let y = [dot(decoder_weights.row(id), hidden) + decoder_bias[id]];
        let split = lrp_linear(
            &[r],
            &[
                Term::product("decoder.w", decoder_weights, id..id + 1, hidden),
                Term::elementwise(DECODER_BIAS, &bias),
            ],
            &y,
            epsilon,
        )?;
        for (acc, v) in r_h.iter_mut().zip(&split.relevance[0]) {
            *acc += v;
        }
        ledger.add_bias(DECODER_BIAS, split.relevance[1][0]);
        ledger.epsilon_leak += split.leak;
    }
    Ok(r_h)
}

/// One backward LSTM step for `layer` at the timestep recorded in `record`.
pub fn lrp_lstm_step(
    weights: &LayerWeights,
    layer: usize,
    record: &GateRecord,
    r_h: &[f64],
    r_c_future: &[f64],
    epsilon: f64,
    ledger: &mut ConservationLedger,
) -> Result<StepRelevance> {
    let h = record.hidden_size();
    if r_h.len() != h || r_c_future.len() != h {
        return Err(Error::InvalidArgument(format!(
            "relevance vectors must have length {h}"
        )));
    }
    // (a) o ⊙ tanh(·) is a one-term linearity: R(c_t) = R(h_t) + R(c_t) from t+1
    let r_c: Vec<f64> = r_h.iter().zip(r_c_future).map(|(a, b)| a + b).collect();

    // (b) c_t = f⊙c_{t-1} + i⊙g
    let retained: Vec<f64> = (0..h)
        .map(|k| record.forget_gate[k] * record.c_prev[k])
        .collect();
    let written: Vec<f64> = (0..h)
        .map(|k| record.input_gate[k] * record.candidate[k])
        .collect();
    let cell_split = lrp_linear(
        &r_c,
        &[
            Term::elementwise("forget*c_prev", &retained),
            Term::elementwise("input*candidate", &written),
        ],
        &record.cell,
        epsilon,
    )?;
    let [r_c_prev, r_written]: [Vec<f64>; 2] = cell_split.relevance.try_into().expect("two terms");

    // (c) i ⊙ tanh(W_gx x + W_gh h_{t-1} + b_g)
    let g_rows = Gate::Candidate.rows(h);
    let bias_g = &weights.bias[g_rows.clone()];
    let bias_name = layer_bias_name(layer);
    let g_split = lrp_linear(
        &r_written,
        &[
            Term::product("wx_g", &weights.input_weights, g_rows.clone(), &record.x),
            Term::product("wh_g", &weights.recurrent_weights, g_rows, &record.h_prev),
            Term::elementwise(&bias_name, bias_g),
        ],
        record.gate_preactivation(Gate::Candidate),
        epsilon,
    )?;
    let [r_x, r_h_prev, r_bias]: [Vec<f64>; 3] = g_split.relevance.try_into().expect("three terms");

    ledger.add_bias(&bias_name, r_bias.iter().sum());
    ledger.epsilon_leak += cell_split.leak + g_split.leak;
    Ok(StepRelevance {
        r_x,
        r_h_prev,
        r_c_prev,
    })
}

/// Full backward pass from the decoder output to the input embeddings.
pub fn propagate(
    weights: &WeightContainer,
    trace: &ForwardTrace,
    init: &RelevanceInit,
    epsilon: f64,
) -> Result<AttributionResult> {
    let num_layers = trace.num_layers();
    let steps = trace.len();
    if num_layers == 0 || steps == 0 || num_layers != weights.layers.len() {
        return Err(Error::InvalidArgument(
            "trace does not match the weight container".into(),
        ));
    }
    let mut ledger = ConservationLedger::default();
    let mut pending_h: Vec<Vec<f64>> = trace
        .initial_hidden
        .iter()
        .map(|v| vec![0.0; v.len()])
        .collect();
    let mut pending_c = pending_h.clone();
    pending_h[num_layers - 1] = lrp_decoder(
        init,
        &weights.decoder_weights,
        trace.final_hidden(),
        &weights.decoder_bias,
        epsilon,
        &mut ledger,
    )?;

    let mut input_relevance: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); steps]; num_layers];
    for t in (0..steps).rev() {
        for l in (0..num_layers).rev() {
            let step = lrp_lstm_step(
                &weights.layers[l],
                l,
                &trace.steps[l][t],
                &pending_h[l],
                &pending_c[l],
                epsilon,
                &mut ledger,
            )?;
            pending_h[l] = step.r_h_prev;
            pending_c[l] = step.r_c_prev;
            if l > 0 {
                for (acc, v) in pending_h[l - 1].iter_mut().zip(&step.r_x) {
                    *acc += v;
                }
            }
            input_relevance[l][t] = step.r_x;
        }
    }
    ledger.initial_state_relevance = pending_h
        .iter()
        .chain(pending_c.iter())
        .flat_map(|v| v.iter())
        .sum();

    let token_relevance = input_relevance[0].iter().map(|v| v.iter().sum()).collect();
    Ok(AttributionResult {
        token_relevance,
        input_relevance,
        ledger,
        delta_y: init.delta_y,
        epsilon,
    })
}

/// `Δy − (Σ_j r(x_j) + Σ r(b) + initial-state + leak)`.
pub fn check_conservation(result: &AttributionResult) -> f64 {
    let tokens: f64 = result.token_relevance.iter().sum();
    result.delta_y - (tokens + result.ledger.total())
}

/// Sums token relevance over each span.
pub fn span_relevance<K: Ord + Clone>(
    result: &AttributionResult,
    spans: &BTreeMap<K, Vec<usize>>,
) -> Result<BTreeMap<K, f64>> {
    let n = result.token_relevance.len();
    spans
        .iter()
        .map(|(tag, positions)| {
            let mut sum = 0.0;
            for &p in positions {
                if p >= n {
                    return Err(Error::InvalidArgument(format!(
                        "span position {p} out of range for {n} tokens"
                    )));
                }
                sum += result.token_relevance[p];
            }
            Ok((tag.clone(), sum))
        })
        .collect()
}

/// Smallest `|denominator|` any split in a propagation of `trace` would use.
///
/// Covers the two active logits, every cell state, and every candidate
/// pre-activation.
pub fn min_abs_denominator(trace: &ForwardTrace, init: &RelevanceInit) -> f64 {
    let mut m = trace.logits[init.id_pos]
        .abs()
        .min(trace.logits[init.id_neg].abs());
    for rec in trace.steps.iter().flatten() {
        for &v in rec
            .cell
            .iter()
            .chain(rec.gate_preactivation(Gate::Candidate))
        {
            m = m.min(v.abs());
        }
    }
    m
}
