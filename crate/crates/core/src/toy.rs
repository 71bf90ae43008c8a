// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded random models for tests, demos, and smoke runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{ModelConfig, WeightContainer};

/// Weights drawn uniformly from `[-scale, scale]`.
pub fn random_weights<R: Rng>(config: &ModelConfig, rng: &mut R, scale: f64) -> WeightContainer {
    let mut w = WeightContainer::zeros(config);
    let mut fill = |xs: &mut [f64]| {
        for x in xs {
            *x = rng.gen_range(-scale..=scale);
        }
    };
    fill(w.embedding.as_mut_slice());
    for layer in &mut w.layers {
        fill(layer.input_weights.as_mut_slice());
        fill(layer.recurrent_weights.as_mut_slice());
        fill(&mut layer.bias);
    }
    fill(w.decoder_weights.as_mut_slice());
    fill(&mut w.decoder_bias);
    w
}

pub fn seeded_weights(config: &ModelConfig, seed: u64, scale: f64) -> WeightContainer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_weights(config, &mut rng, scale)
}
