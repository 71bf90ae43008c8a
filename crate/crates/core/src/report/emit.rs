// SPDX-License-Identifier: MIT OR Apache-2.0

//! Report rows and their JSON / CSV serialization.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tse::{
    incorrect_prediction_forms, mean_abs_relevance, n2_top_rate, pointing_game_accuracy,
    prediction_accuracy, split_records, EvalRecord, SplitBy, Tag, TemplateId,
};

use super::analysis::{det_noun_analysis, n1_relevance_vs_logit};
use super::stats::{pearson, DetNounRegression};

pub const REPORT_JSON: &str = "report.json";
pub const ROWS_CSV: &str = "rows.csv";
pub const TAG_RELEVANCE_CSV: &str = "tag_relevance.csv";
pub const INCORRECT_FORMS_CSV: &str = "incorrect_forms.csv";

/// Mean `|r(tag)|` over correct and incorrect predictions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TagMeans {
    pub correct: Option<f64>,
    pub incorrect: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub template: TemplateId,
    pub record_count: usize,
    pub prediction_accuracy: f64,
    pub pointing_game: f64,
    pub n2_top_rate: Option<f64>,
    pub mean_abs_relevance: BTreeMap<Tag, TagMeans>,
    /// Share of incorrect predictions per predicted verb form.
    pub incorrect_forms: BTreeMap<String, f64>,
}

impl ReportRow {
    pub fn from_records(template: TemplateId, records: &[EvalRecord]) -> Result<Self> {
        let has_n2 = records
            .iter()
            .all(|r| r.tag_relevance.contains_key(&Tag::N2));
        let parts = split_records(records, &SplitBy::Correctness);
        let correct = mean_abs_relevance(parts.matching.iter().copied());
        let incorrect = mean_abs_relevance(parts.rest.iter().copied());
        let mut means: BTreeMap<Tag, TagMeans> = BTreeMap::new();
        for r in records {
            for &tag in r.tag_relevance.keys() {
                means.entry(tag).or_insert_with(|| TagMeans {
                    correct: correct.get(&tag).copied(),
                    incorrect: incorrect.get(&tag).copied(),
                });
            }
        }
        Ok(Self {
            template,
            record_count: records.len(),
            prediction_accuracy: prediction_accuracy(records)?,
            pointing_game: pointing_game_accuracy(records)?,
            n2_top_rate: if has_n2 {
                Some(n2_top_rate(records)?)
            } else {
                None
            },
            mean_abs_relevance: means,
            incorrect_forms: incorrect_prediction_forms(records),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub weights: String,
    pub vocab: String,
    pub lexicon: Option<String>,
    pub epsilon: f64,
    pub capitalize: bool,
    pub dedupe: bool,
    pub exclude_words: Vec<String>,
    pub templates: Vec<TemplateId>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    /// Across template rows: prediction accuracy vs pointing-game accuracy.
    pub pointing_vs_accuracy: Option<f64>,
    /// Across template rows that contain N2: prediction accuracy vs N2 top rate.
    pub n2_vs_accuracy: Option<f64>,
    /// Across records: correct-form logit vs `ln|r(N1)|`.
    pub n1_relevance_vs_logit: Option<f64>,
    pub detn_regression: Option<DetNounRegression>,
}

impl Correlations {
    /// Correlations that cannot be computed (too few rows, constant series) are `None`.
    pub fn compute(rows: &[ReportRow], records: &[EvalRecord]) -> Self {
        let acc: Vec<f64> = rows.iter().map(|r| r.prediction_accuracy).collect();
        let pg: Vec<f64> = rows.iter().map(|r| r.pointing_game).collect();
        let (n2_acc, n2): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter_map(|r| r.n2_top_rate.map(|n| (r.prediction_accuracy, n)))
            .unzip();
        Self {
            pointing_vs_accuracy: pearson(&acc, &pg).ok(),
            n2_vs_accuracy: pearson(&n2_acc, &n2).ok(),
            n1_relevance_vs_logit: n1_relevance_vs_logit(records)
                .ok()
                .and_then(|s| pearson(&s.xs(), &s.ys()).ok()),
            detn_regression: det_noun_analysis(records).ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: RunMetadata,
    pub rows: Vec<ReportRow>,
    pub correlations: Correlations,
}

#[derive(Debug, Serialize, Deserialize)]
struct RowCsv {
    template: TemplateId,
    record_count: usize,
    prediction_accuracy: f64,
    pointing_game: f64,
    n2_top_rate: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TagCsv {
    template: TemplateId,
    tag: Tag,
    mean_abs_correct: Option<f64>,
    mean_abs_incorrect: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FormCsv {
    template: TemplateId,
    predicted_form: String,
    percent_of_incorrect: f64,
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let ctx = || path.display().to_string();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(ctx(), e))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(ctx(), e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let ctx = || path.display().to_string();
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(ctx(), e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::csv(ctx(), e))
}

pub fn report_to_json(report: &Report) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::json("report", e))?;
    s.push('\n');
    Ok(s)
}

/// Writes `report.json` plus the row, tag, and incorrect-form CSVs into `dir`.
pub fn emit_report(report: &Report, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json_path = dir.join(REPORT_JSON);
    std::fs::write(&json_path, report_to_json(report)?).map_err(|e| Error::io(&json_path, e))?;

    write_csv(
        &dir.join(ROWS_CSV),
        report.rows.iter().map(|r| RowCsv {
            template: r.template,
            record_count: r.record_count,
            prediction_accuracy: r.prediction_accuracy,
            pointing_game: r.pointing_game,
            n2_top_rate: r.n2_top_rate,
        }),
    )?;
    write_csv(
        &dir.join(TAG_RELEVANCE_CSV),
        report.rows.iter().flat_map(|r| {
            r.mean_abs_relevance.iter().map(|(&tag, m)| TagCsv {
                template: r.template,
                tag,
                mean_abs_correct: m.correct,
                mean_abs_incorrect: m.incorrect,
            })
        }),
    )?;
    write_csv(
        &dir.join(INCORRECT_FORMS_CSV),
        report.rows.iter().flat_map(|r| {
            r.incorrect_forms.iter().map(|(f, &p)| FormCsv {
                template: r.template,
                predicted_form: f.clone(),
                percent_of_incorrect: p,
            })
        }),
    )?;
    Ok(())
}

pub fn read_report_json(path: impl AsRef<Path>) -> Result<Report> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))
}

/// Rebuilds report rows from the three CSV files in `dir`.
pub fn read_rows_csv(dir: impl AsRef<Path>) -> Result<Vec<ReportRow>> {
    let dir = dir.as_ref();
    let base: Vec<RowCsv> = read_csv(&dir.join(ROWS_CSV))?;
    let tags: Vec<TagCsv> = read_csv(&dir.join(TAG_RELEVANCE_CSV))?;
    let forms: Vec<FormCsv> = read_csv(&dir.join(INCORRECT_FORMS_CSV))?;
    let mut rows: Vec<ReportRow> = base
        .into_iter()
        .map(|b| ReportRow {
            template: b.template,
            record_count: b.record_count,
            prediction_accuracy: b.prediction_accuracy,
            pointing_game: b.pointing_game,
            n2_top_rate: b.n2_top_rate,
            mean_abs_relevance: BTreeMap::new(),
            incorrect_forms: BTreeMap::new(),
        })
        .collect();
    fn row_for(rows: &mut [ReportRow], t: TemplateId) -> Result<&mut ReportRow> {
        rows.iter_mut()
            .find(|r| r.template == t)
            .ok_or_else(|| Error::InvalidArgument(format!("CSV references unknown row {t}")))
    }
    for t in tags {
        row_for(&mut rows, t.template)?.mean_abs_relevance.insert(
            t.tag,
            TagMeans {
                correct: t.mean_abs_correct,
                incorrect: t.mean_abs_incorrect,
            },
        );
    }
    for f in forms {
        row_for(&mut rows, f.template)?
            .incorrect_forms
            .insert(f.predicted_form, f.percent_of_incorrect);
    }
    Ok(rows)
}
