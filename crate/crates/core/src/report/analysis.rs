// SPDX-License-Identifier: MIT OR Apache-2.0

//! Per-record series behind the scatter plots and signed-relevance splits.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tse::{EvalRecord, Number, Tag};

use super::stats::{det_noun_regression, DetNounRegression};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl ScatterSeries {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, x: f64, y: f64) {
        if x.is_finite() && y.is_finite() {
            self.points.push((x, y));
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let ctx = || path.display().to_string();
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(ctx(), e))?;
        w.write_record(["x", "y"])
            .map_err(|e| Error::csv(ctx(), e))?;
        for &(x, y) in &self.points {
            w.serialize((x, y)).map_err(|e| Error::csv(ctx(), e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Signed `r(tag)` per record, partitioned by target verb number.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SignedSplit {
    pub singular: Vec<f64>,
    pub plural: Vec<f64>,
}

pub fn signed_split(records: &[EvalRecord], tag: Tag) -> Result<SignedSplit> {
    let mut out = SignedSplit::default();
    for r in records {
        let v = r.relevance(tag)?;
        match r.case.n1_number {
            Number::Singular => out.singular.push(v),
            Number::Plural => out.plural.push(v),
        }
    }
    Ok(out)
}

fn tokens_at(record: &EvalRecord, tag: Tag) -> Option<String> {
    let span = record.case.spans.get(&tag)?;
    Some(
        span.iter()
            .map(|&p| record.case.preamble[p].as_str())
            .collect::<Vec<_>>()
            .join(" "),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyJoin {
    /// `(ln count, |r(N1)|)` per joined record.
    pub series: ScatterSeries,
    /// Records whose N1 token was absent from the table or had a zero count.
    pub skipped: usize,
}

/// Pairs each record's N1 relevance magnitude with the N1 token's log frequency.
pub fn frequency_join(
    records: &[EvalRecord],
    freq: &HashMap<String, u64>,
) -> Result<FrequencyJoin> {
    let mut series = ScatterSeries::new("log_frequency_vs_abs_n1_relevance");
    let mut skipped = 0;
    for r in records {
        let token = tokens_at(r, Tag::N1).ok_or_else(|| Error::MissingTag("N1".into()))?;
        let rel = r.relevance(Tag::N1)?;
        match freq.get(&token) {
            Some(&count) if count > 0 => series.push((count as f64).ln(), rel.abs()),
            _ => skipped += 1,
        }
    }
    if series.points.is_empty() {
        return Err(Error::EmptyInput(
            "no N1 token found in the frequency table",
        ));
    }
    Ok(FrequencyJoin { series, skipped })
}

/// Reads a `token,count` CSV. A first row whose count is not an integer is treated as a header.
pub fn load_frequency_table(path: impl AsRef<Path>) -> Result<HashMap<String, u64>> {
    let path = path.as_ref();
    let ctx = || path.display().to_string();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::csv(ctx(), e))?;
    let mut table = HashMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::csv(ctx(), e))?;
        if row.len() != 2 {
            return Err(Error::InvalidArgument(format!(
                "{}: line {} has {} fields, expected token,count",
                ctx(),
                i + 1,
                row.len()
            )));
        }
        match row[1].trim().parse::<u64>() {
            Ok(c) => {
                table.insert(row[0].to_string(), c);
            }
            Err(_) if i == 0 => {}
            Err(_) => {
                return Err(Error::InvalidArgument(format!(
                    "{}: line {}: count `{}` is not a non-negative integer",
                    ctx(),
                    i + 1,
                    &row[1]
                )))
            }
        }
    }
    Ok(table)
}

/// `(logit of the correct form, ln|r(N1)|)`; records with `r(N1) = 0` are dropped.
pub fn n1_relevance_vs_logit(records: &[EvalRecord]) -> Result<ScatterSeries> {
    let mut s = ScatterSeries::new("correct_logit_vs_log_abs_n1_relevance");
    for r in records {
        let v = r.relevance(Tag::N1)?.abs();
        if v > 0.0 {
            s.push(r.logit_correct, v.ln());
        }
    }
    Ok(s)
}

/// `(r(N), r(Det))` for each noun phrase: (N1, Det1) and, where present, (N2, Det2).
pub fn det_noun_points(records: &[EvalRecord]) -> ScatterSeries {
    let mut s = ScatterSeries::new("noun_vs_det_relevance");
    for r in records {
        for (n, d) in [(Tag::N1, Tag::Det1), (Tag::N2, Tag::Det2)] {
            if let (Some(&nv), Some(&dv)) = (r.tag_relevance.get(&n), r.tag_relevance.get(&d)) {
                s.push(nv, dv);
            }
        }
    }
    s
}

pub fn det_noun_analysis(records: &[EvalRecord]) -> Result<DetNounRegression> {
    let pts = det_noun_points(records);
    det_noun_regression(&pts.xs(), &pts.ys())
}
