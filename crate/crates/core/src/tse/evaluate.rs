// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lrp::{
    check_conservation, init_relevance, propagate, span_relevance, ConservationLedger,
};
use crate::model::LanguageModel;

use super::generate::TestCase;
use super::template::Tag;

/// Outcome of one test case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub case: TestCase,
    /// `delta_y > 0`.
    pub correct: bool,
    pub delta_y: f64,
    pub logit_correct: f64,
    pub logit_incorrect: f64,
    pub tag_relevance: BTreeMap<Tag, f64>,
    pub token_relevance: Vec<f64>,
    pub ledger: ConservationLedger,
    pub predicted_form: String,
}

impl EvalRecord {
    pub fn relevance(&self, tag: Tag) -> Result<f64> {
        self.tag_relevance
            .get(&tag)
            .copied()
            .ok_or_else(|| Error::MissingTag(tag.to_string()))
    }
}

/// Runs the model on the preamble, scores the target pair, and attributes `Δy` to the tags.
pub fn evaluate_case(model: &LanguageModel, case: &TestCase, epsilon: f64) -> Result<EvalRecord> {
    let ids: Vec<usize> = case
        .preamble
        .iter()
        .map(|t| model.require_id(t))
        .collect::<Result<_>>()?;
    let id_correct = model.require_id(&case.target_correct)?;
    let id_incorrect = model.require_id(&case.target_incorrect)?;

    let trace = model.forward(&ids)?;
    let init = init_relevance(&trace.logits, id_correct, id_incorrect)?;
    let result = propagate(&model.weights, &trace, &init, epsilon)?;
    debug_assert!(check_conservation(&result).abs() <= 1e-6 * result.delta_y.abs().max(1.0));
    let tag_relevance = span_relevance(&result, &case.spans)?;

    let correct = init.delta_y > 0.0;
    Ok(EvalRecord {
        case: case.clone(),
        correct,
        delta_y: init.delta_y,
        logit_correct: trace.logits[id_correct],
        logit_incorrect: trace.logits[id_incorrect],
        tag_relevance,
        token_relevance: result.token_relevance,
        ledger: result.ledger,
        predicted_form: if correct {
            case.target_correct.clone()
        } else {
            case.target_incorrect.clone()
        },
    })
}

/// Evaluates cases in parallel; output order matches input order.
pub fn evaluate_cases(
    model: &LanguageModel,
    cases: &[TestCase],
    epsilon: f64,
) -> Result<Vec<EvalRecord>> {
    cases
        .par_iter()
        .map(|c| evaluate_case(model, c, epsilon))
        .collect()
}
