// SPDX-License-Identifier: MIT OR Apache-2.0

//! Statistics and report emission.

pub mod analysis;
pub mod emit;
pub mod stats;

pub use analysis::{
    det_noun_analysis, det_noun_points, frequency_join, load_frequency_table,
    n1_relevance_vs_logit, signed_split, FrequencyJoin, ScatterSeries, SignedSplit,
};
pub use emit::{
    emit_report, read_report_json, read_rows_csv, report_to_json, Correlations, Report, ReportRow,
    RunMetadata, TagMeans,
};
pub use stats::{det_noun_regression, linear_regression, pearson, DetNounRegression, LinearFit};
