// SPDX-License-Identifier: MIT OR Apache-2.0

//! Weight loading and LSTM inference.

pub mod container;
pub mod lstm;
pub mod vocab;
pub mod weights;

use std::path::Path;

use crate::error::{Error, Result};

pub use container::{read_container, write_container};
pub use lstm::{decode_logits, forward, lstm_cell_step, score_pair, ForwardTrace, GateRecord};
pub use vocab::{Tokenized, Vocabulary, UNK_TOKEN};
pub use weights::{Gate, LayerWeights, ModelConfig, WeightContainer};

/// A loaded model: immutable after construction and shareable across threads.
#[derive(Clone, Debug)]
pub struct LanguageModel {
    pub config: ModelConfig,
    pub weights: WeightContainer,
    pub vocab: Vocabulary,
}

impl LanguageModel {
    pub fn new(config: ModelConfig, weights: WeightContainer, vocab: Vocabulary) -> Result<Self> {
        weights.validate(&config)?;
        if vocab.len() != config.vocab_size {
            return Err(Error::Vocabulary(format!(
                "vocabulary has {} tokens but the container header says {}",
                vocab.len(),
                config.vocab_size
            )));
        }
        Ok(Self {
            config,
            weights,
            vocab,
        })
    }

    /// Loads a weight container and its vocabulary file.
    pub fn load(weights_path: impl AsRef<Path>, vocab_path: impl AsRef<Path>) -> Result<Self> {
        let (config, weights) = read_container(weights_path)?;
        let vocab = Vocabulary::load(vocab_path)?;
        Self::new(config, weights, vocab)
    }

    pub fn forward(&self, ids: &[usize]) -> Result<ForwardTrace> {
        forward(&self.weights, ids)
    }

    /// Looks up a token, failing if it is not in the vocabulary.
    pub fn require_id(&self, token: &str) -> Result<usize> {
        self.vocab
            .id(token)
            .ok_or_else(|| Error::MissingWords(vec![token.to_string()]))
    }
}
