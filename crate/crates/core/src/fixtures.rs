// SPDX-License-Identifier: MIT OR Apache-2.0

//! Reference-logit fixtures produced by the checkpoint exporter.
//!
//! ```json
//! { "fixtures": [
//!     { "sentence": "The senators", "pair": ["laugh", "laughs"],
//!       "logits": [3.1, 1.7], "oov": [] } ] }
//! ```
//!
//! `logits` are the source framework's decoder outputs at the two pair ids
//! after reading the whole sentence.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LanguageModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub sentence: String,
    pub pair: (String, String),
    pub logits: (f64, f64),
    #[serde(default)]
    pub oov: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub fixtures: Vec<Fixture>,
}

impl FixtureFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixtureCheck {
    pub sentence: String,
    pub expected: (f64, f64),
    pub actual: (f64, f64),
    pub max_abs_diff: f64,
}

/// Recomputes every fixture with `model`.
pub fn cross_check(model: &LanguageModel, file: &FixtureFile) -> Result<Vec<FixtureCheck>> {
    file.fixtures
        .iter()
        .map(|f| {
            let tokens = model.vocab.tokenize(&f.sentence)?;
            let trace = model.forward(&tokens.ids)?;
            let a = model.require_id(&f.pair.0)?;
            let b = model.require_id(&f.pair.1)?;
            let actual = (trace.logits[a], trace.logits[b]);
            Ok(FixtureCheck {
                sentence: f.sentence.clone(),
                expected: f.logits,
                actual,
                max_abs_diff: (actual.0 - f.logits.0)
                    .abs()
                    .max((actual.1 - f.logits.1).abs()),
            })
        })
        .collect()
}
