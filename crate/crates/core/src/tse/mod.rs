// SPDX-License-Identifier: MIT OR Apache-2.0

//! Templated subject–verb agreement evaluation.

pub mod evaluate;
pub mod generate;
pub mod lexicon;
pub mod metrics;
pub mod template;

pub use evaluate::{evaluate_case, evaluate_cases, EvalRecord};
pub use generate::{capitalize_first, generate_cases, GenerateOptions, Number, TestCase};
pub use lexicon::Lexicon;
pub use metrics::{
    incorrect_prediction_forms, mean_abs_relevance, n2_top_rate, pointing_game_accuracy,
    prediction_accuracy, split_records, top_tag, top_tag_breakdown, Partition, SplitBy,
    TopTagBreakdown,
};
pub use template::{Tag, Template, TemplateId, TemplateKind, VerbClass};
