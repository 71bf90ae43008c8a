// SPDX-License-Identifier: MIT OR Apache-2.0

//! Prediction accuracy, pointing game, and record partitions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::evaluate::EvalRecord;
use super::generate::Number;
use super::template::Tag;

fn percentage(hits: usize, total: usize) -> f64 {
    100.0 * hits as f64 / total as f64
}

fn nonempty(records: &[EvalRecord]) -> Result<()> {
    if records.is_empty() {
        Err(Error::EmptyInput("no evaluation records"))
    } else {
        Ok(())
    }
}

pub fn prediction_accuracy(records: &[EvalRecord]) -> Result<f64> {
    nonempty(records)?;
    Ok(percentage(
        records.iter().filter(|r| r.correct).count(),
        records.len(),
    ))
}

/// The tag with the strictly largest `|r(tag)|`, or `None` on a tie for first place.
pub fn top_tag(record: &EvalRecord) -> Option<Tag> {
    let mut best: Option<(Tag, f64)> = None;
    let mut tied = false;
    for (&tag, &r) in &record.tag_relevance {
        let a = r.abs();
        match best {
            Some((_, b)) if a < b => {}
            Some((_, b)) if a == b => tied = true,
            _ => {
                best = Some((tag, a));
                tied = false;
            }
        }
    }
    if tied {
        None
    } else {
        best.map(|(t, _)| t)
    }
}

fn top_rate(records: &[EvalRecord], tag: Tag) -> Result<f64> {
    nonempty(records)?;
    let mut hits = 0;
    for r in records {
        r.relevance(tag)?;
        if top_tag(r) == Some(tag) {
            hits += 1;
        }
    }
    Ok(percentage(hits, records.len()))
}

/// Percentage of records where N1 has the strictly highest absolute tag relevance.
pub fn pointing_game_accuracy(records: &[EvalRecord]) -> Result<f64> {
    top_rate(records, Tag::N1)
}

/// Percentage of records where N2 has the strictly highest absolute tag relevance.
pub fn n2_top_rate(records: &[EvalRecord]) -> Result<f64> {
    top_rate(records, Tag::N2)
}

/// How first place in the pointing game was distributed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TopTagBreakdown {
    pub by_tag: BTreeMap<Tag, f64>,
    pub tie: f64,
}

pub fn top_tag_breakdown(records: &[EvalRecord]) -> Result<TopTagBreakdown> {
    nonempty(records)?;
    let mut counts: BTreeMap<Tag, usize> = BTreeMap::new();
    let mut ties = 0;
    for r in records {
        match top_tag(r) {
            Some(t) => *counts.entry(t).or_default() += 1,
            None => ties += 1,
        }
    }
    Ok(TopTagBreakdown {
        by_tag: counts
            .into_iter()
            .map(|(t, c)| (t, percentage(c, records.len())))
            .collect(),
        tie: percentage(ties, records.len()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitBy {
    /// `matching` = correct predictions.
    Correctness,
    /// `matching` = singular target.
    TargetNumber,
    /// `matching` = preamble or targets contain the word.
    ContainsWord(String),
}

/// A disjoint, exhaustive two-way partition.
#[derive(Clone, Debug, Default)]
pub struct Partition<'a> {
    pub matching: Vec<&'a EvalRecord>,
    pub rest: Vec<&'a EvalRecord>,
}

pub fn split_records<'a>(records: &'a [EvalRecord], by: &SplitBy) -> Partition<'a> {
    let (matching, rest) = records.iter().partition(|r| match by {
        SplitBy::Correctness => r.correct,
        SplitBy::TargetNumber => r.case.n1_number == Number::Singular,
        SplitBy::ContainsWord(w) => r.case.contains_word(w),
    });
    Partition { matching, rest }
}

/// Percentage of incorrect predictions by predicted verb form.
pub fn incorrect_prediction_forms(records: &[EvalRecord]) -> BTreeMap<String, f64> {
    let wrong: Vec<&EvalRecord> = records.iter().filter(|r| !r.correct).collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in &wrong {
        *counts.entry(r.predicted_form.clone()).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(f, c)| (f, percentage(c, wrong.len())))
        .collect()
}

/// Mean `|r(tag)|` over records, per tag present in any record.
pub fn mean_abs_relevance<'a>(
    records: impl IntoIterator<Item = &'a EvalRecord>,
) -> BTreeMap<Tag, f64> {
    let mut sums: BTreeMap<Tag, (f64, usize)> = BTreeMap::new();
    for r in records {
        for (&t, &v) in &r.tag_relevance {
            let e = sums.entry(t).or_insert((0.0, 0));
            e.0 += v.abs();
            e.1 += 1;
        }
    }
    sums.into_iter()
        .map(|(t, (s, n))| (t, s / n as f64))
        .collect()
}
