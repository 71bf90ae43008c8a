// SPDX-License-Identifier: MIT OR Apache-2.0

//! # agreement-lrp
//!
//! Layer-wise relevance propagation (LRP) for LSTM language models, applied
//! to subject–verb agreement.
//!
//! - [`model`] loads a weight container and runs inference, recording every
//!   gate activation in a [`ForwardTrace`].
//! - [`lrp`] walks that trace backwards and splits a logit difference `Δy`
//!   across input tokens, keeping a ledger of the mass absorbed by biases,
//!   initial states and the ε stabilizer.
//! - [`tse`] generates templated agreement test cases, evaluates them, and
//!   computes prediction and pointing-game accuracy.
//! - [`report`] holds the statistics (correlation, regression, signed splits)
//!   and report emission used by the `agreement-lrp` binary.
//!
//! ```no_run
//! use agreement_lrp::{lrp, LanguageModel};
//!
//! # fn main() -> agreement_lrp::Result<()> {
//! let model = LanguageModel::load("model.lrpw", "vocab.txt")?;
//! let tokens = model.vocab.tokenize("The keys on the table")?;
//! let trace = model.forward(&tokens.ids)?;
//! let init = lrp::init_relevance(&trace.logits, model.require_id("are")?, model.require_id("is")?)?;
//! let result = lrp::propagate(&model.weights, &trace, &init, lrp::DEFAULT_EPSILON)?;
//! assert!(lrp::check_conservation(&result).abs() < 1e-8);
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod lrp;
pub mod model;
pub mod report;
pub mod tensor;
pub mod toy;
pub mod tse;

pub use error::{Error, Result};
pub use lrp::{AttributionResult, ConservationLedger, RelevanceInit};
pub use model::{ForwardTrace, LanguageModel, ModelConfig, Vocabulary, WeightContainer};
