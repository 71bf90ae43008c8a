// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Matrix;

/// Gate block order used for every `4H` row dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Input = 0,
    Forget = 1,
    Candidate = 2,
    Output = 3,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::Input, Gate::Forget, Gate::Candidate, Gate::Output];

    pub fn name(self) -> &'static str {
        match self {
            Gate::Input => "input",
            Gate::Forget => "forget",
            Gate::Candidate => "candidate",
            Gate::Output => "output",
        }
    }

    /// Row range of this gate's block in a `4H`-row tensor.
    #[inline]
    pub fn rows(self, hidden: usize) -> std::ops::Range<usize> {
        let k = self as usize;
        k * hidden..(k + 1) * hidden
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub num_layers: usize,
    pub hidden_size: usize,
    pub embed_size: usize,
    pub vocab_size: usize,
}

impl ModelConfig {
    pub fn layer_input_size(&self, layer: usize) -> usize {
        if layer == 0 {
            self.embed_size
        } else {
            self.hidden_size
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_layers == 0
            || self.hidden_size == 0
            || self.embed_size == 0
            || self.vocab_size == 0
        {
            return Err(Error::InvalidArgument(format!(
                "model dimensions must be strictly positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// One LSTM layer. Rows of every tensor are ordered `[i | f | g | o]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerWeights {
    /// `4H × input`.
    pub input_weights: Matrix,
    /// `4H × H`.
    pub recurrent_weights: Matrix,
    /// `4H`, the sum of any input and recurrent biases.
    pub bias: Vec<f64>,
}

impl LayerWeights {
    pub fn hidden_size(&self) -> usize {
        self.recurrent_weights.cols()
    }

    pub fn input_size(&self) -> usize {
        self.input_weights.cols()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightContainer {
    /// `V × d`.
    pub embedding: Matrix,
    pub layers: Vec<LayerWeights>,
    /// `V × H`.
    pub decoder_weights: Matrix,
    /// `V`.
    pub decoder_bias: Vec<f64>,
}

impl WeightContainer {
    /// All-zero weights with the given shape.
    pub fn zeros(config: &ModelConfig) -> Self {
        let h = config.hidden_size;
        Self {
            embedding: Matrix::zeros(config.vocab_size, config.embed_size),
            layers: (0..config.num_layers)
                .map(|l| LayerWeights {
                    input_weights: Matrix::zeros(4 * h, config.layer_input_size(l)),
                    recurrent_weights: Matrix::zeros(4 * h, h),
                    bias: vec![0.0; 4 * h],
                })
                .collect(),
            decoder_weights: Matrix::zeros(config.vocab_size, h),
            decoder_bias: vec![0.0; config.vocab_size],
        }
    }

    /// Checks every shape against `config` and that all entries are finite.
    pub fn validate(&self, config: &ModelConfig) -> Result<()> {
        config.validate()?;
        let (v, d, h) = (config.vocab_size, config.embed_size, config.hidden_size);
        // (name, expected shape, found shape, values)
        type ShapeCheck<'a> = (String, Vec<usize>, Vec<usize>, &'a [f64]);
        let mut shapes: Vec<ShapeCheck> = vec![(
            "embedding".into(),
            vec![v, d],
            vec![self.embedding.rows(), self.embedding.cols()],
            self.embedding.as_slice(),
        )];
        if self.layers.len() != config.num_layers {
            return Err(Error::InvalidArgument(format!(
                "expected {} layers, found {}",
                config.num_layers,
                self.layers.len()
            )));
        }
        for (l, layer) in self.layers.iter().enumerate() {
            let input = config.layer_input_size(l);
            shapes.push((
                format!("layer{l}.wx"),
                vec![4 * h, input],
                vec![layer.input_weights.rows(), layer.input_weights.cols()],
                layer.input_weights.as_slice(),
            ));
            shapes.push((
                format!("layer{l}.wh"),
                vec![4 * h, h],
                vec![
                    layer.recurrent_weights.rows(),
                    layer.recurrent_weights.cols(),
                ],
                layer.recurrent_weights.as_slice(),
            ));
            shapes.push((
                format!("layer{l}.b"),
                vec![4 * h],
                vec![layer.bias.len()],
                &layer.bias,
            ));
        }
        shapes.push((
            "decoder.w".into(),
            vec![v, h],
            vec![self.decoder_weights.rows(), self.decoder_weights.cols()],
            self.decoder_weights.as_slice(),
        ));
        shapes.push((
            "decoder.b".into(),
            vec![v],
            vec![self.decoder_bias.len()],
            &self.decoder_bias,
        ));
        for (name, expected, found, data) in shapes {
            if expected != found {
                return Err(Error::DimensionMismatch {
                    tensor: name,
                    offset: 0,
                    expected,
                    found,
                });
            }
            if let Some(index) = data.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFiniteTensor {
                    tensor: name,
                    offset: 0,
                    index,
                });
            }
        }
        Ok(())
    }
}
