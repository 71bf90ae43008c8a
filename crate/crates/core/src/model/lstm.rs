// SPDX-License-Identifier: MIT OR Apache-2.0

//! LSTM language-model forward pass with a full activation trace.

use crate::error::{Error, Result};
use crate::tensor::{dot, sigmoid};

use super::weights::{Gate, LayerWeights, WeightContainer};

/// Everything computed by one layer at one timestep.
#[derive(Clone, Debug, PartialEq)]
pub struct GateRecord {
    /// Layer input: the embedding at layer 0, the lower layer's `h_t` above it.
    pub x: Vec<f64>,
    pub h_prev: Vec<f64>,
    pub c_prev: Vec<f64>,
    /// `4H` pre-activations, `[i | f | g | o]`.
    pub preactivation: Vec<f64>,
    pub input_gate: Vec<f64>,
    pub forget_gate: Vec<f64>,
    pub candidate: Vec<f64>,
    pub output_gate: Vec<f64>,
    pub cell: Vec<f64>,
    pub hidden: Vec<f64>,
}

impl GateRecord {
    pub fn hidden_size(&self) -> usize {
        self.cell.len()
    }

    pub fn gate_preactivation(&self, gate: Gate) -> &[f64] {
        &self.preactivation[gate.rows(self.hidden_size())]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForwardTrace {
    pub ids: Vec<usize>,
    /// `steps[layer][t]`.
    pub steps: Vec<Vec<GateRecord>>,
    pub initial_hidden: Vec<Vec<f64>>,
    pub initial_cell: Vec<Vec<f64>>,
    /// Decoder output at the final timestep.
    pub logits: Vec<f64>,
}

impl ForwardTrace {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn num_layers(&self) -> usize {
        self.steps.len()
    }

    /// Top-layer hidden state at the last timestep.
    pub fn final_hidden(&self) -> &[f64] {
        &self
            .steps
            .last()
            .and_then(|s| s.last())
            .expect("non-empty trace")
            .hidden
    }
}

fn check_finite(values: &[f64], gate: &'static str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(unit) => Err(Error::NonFiniteGate {
            gate,
            layer: 0,
            step: 0,
            unit,
        }),
        None => Ok(()),
    }
}

/// One LSTM update `c = f⊙c_prev + i⊙g`, `h = o⊙tanh(c)`.
///
/// Errors report `layer` and `step` as 0; [`forward`] fills in the real position.
pub fn lstm_cell_step(
    layer: &LayerWeights,
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
) -> Result<GateRecord> {
    let h = layer.hidden_size();
    if x.len() != layer.input_size() || h_prev.len() != h || c_prev.len() != h {
        return Err(Error::InvalidArgument(format!(
            "cell step dimensions: x {} (want {}), h_prev {}, c_prev {} (want {h})",
            x.len(),
            layer.input_size(),
            h_prev.len(),
            c_prev.len()
        )));
    }
    let preactivation: Vec<f64> = (0..4 * h)
        .map(|r| {
            dot(layer.input_weights.row(r), x)
                + dot(layer.recurrent_weights.row(r), h_prev)
                + layer.bias[r]
        })
        .collect();
    for gate in Gate::ALL {
        check_finite(&preactivation[gate.rows(h)], gate.name())?;
    }
    let block = |g: Gate| &preactivation[g.rows(h)];
    let input_gate: Vec<f64> = block(Gate::Input).iter().map(|&z| sigmoid(z)).collect();
    let forget_gate: Vec<f64> = block(Gate::Forget).iter().map(|&z| sigmoid(z)).collect();
    let candidate: Vec<f64> = block(Gate::Candidate).iter().map(|&z| z.tanh()).collect();
    let output_gate: Vec<f64> = block(Gate::Output).iter().map(|&z| sigmoid(z)).collect();
    let cell: Vec<f64> = (0..h)
        .map(|k| forget_gate[k] * c_prev[k] + input_gate[k] * candidate[k])
        .collect();
    check_finite(&cell, "cell")?;
    let hidden: Vec<f64> = (0..h).map(|k| output_gate[k] * cell[k].tanh()).collect();
    Ok(GateRecord {
        x: x.to_vec(),
        h_prev: h_prev.to_vec(),
        c_prev: c_prev.to_vec(),
        preactivation,
        input_gate,
        forget_gate,
        candidate,
        output_gate,
        cell,
        hidden,
    })
}

/// Runs the stack over `ids` from zero initial states and decodes the last top-layer state.
pub fn forward(weights: &WeightContainer, ids: &[usize]) -> Result<ForwardTrace> {
    if ids.is_empty() {
        return Err(Error::EmptyInput("forward needs at least one token"));
    }
    let vocab = weights.embedding.rows();
    if let Some(&id) = ids.iter().find(|&&id| id >= vocab) {
        return Err(Error::IdOutOfRange { id, size: vocab });
    }
    let num_layers = weights.layers.len();
    let initial_hidden: Vec<Vec<f64>> = weights
        .layers
        .iter()
        .map(|l| vec![0.0; l.hidden_size()])
        .collect();
    let initial_cell = initial_hidden.clone();
    let mut steps: Vec<Vec<GateRecord>> = (0..num_layers)
        .map(|_| Vec::with_capacity(ids.len()))
        .collect();

    for (t, &id) in ids.iter().enumerate() {
        let mut x = weights.embedding.row(id).to_vec();
        for (l, layer) in weights.layers.iter().enumerate() {
            let (h_prev, c_prev) = match steps[l].last() {
                Some(prev) => (prev.hidden.as_slice(), prev.cell.as_slice()),
                None => (initial_hidden[l].as_slice(), initial_cell[l].as_slice()),
            };
            let rec = lstm_cell_step(layer, &x, h_prev, c_prev).map_err(|e| match e {
                Error::NonFiniteGate { gate, unit, .. } => Error::NonFiniteGate {
                    gate,
                    layer: l,
                    step: t,
                    unit,
                },
                other => other,
            })?;
            x = rec.hidden.clone();
            steps[l].push(rec);
        }
    }

    let top = &steps[num_layers - 1].last().expect("non-empty").hidden;
    let logits = decode_logits(weights, top);
    Ok(ForwardTrace {
        ids: ids.to_vec(),
        steps,
        initial_hidden,
        initial_cell,
        logits,
    })
}

/// `y = W h + b`.
pub fn decode_logits(weights: &WeightContainer, hidden: &[f64]) -> Vec<f64> {
    (0..weights.decoder_weights.rows())
        .map(|i| dot(weights.decoder_weights.row(i), hidden) + weights.decoder_bias[i])
        .collect()
}

/// `Δy = y[correct] − y[incorrect]`.
pub fn score_pair(logits: &[f64], id_correct: usize, id_incorrect: usize) -> Result<f64> {
    for id in [id_correct, id_incorrect] {
        if id >= logits.len() {
            return Err(Error::IdOutOfRange {
                id,
                size: logits.len(),
            });
        }
    }
    if id_correct == id_incorrect {
        return Err(Error::InvalidArgument(format!(
            "target pair ids must differ (both {id_correct})"
        )));
    }
    Ok(logits[id_correct] - logits[id_incorrect])
}
