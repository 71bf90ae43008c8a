// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line entry points.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::fixtures::{cross_check, FixtureFile};
use crate::lrp::{self, AttributionDump};
use crate::model::{write_container, LanguageModel, ModelConfig, Vocabulary, UNK_TOKEN};
use crate::report::{
    det_noun_points, emit_report, frequency_join, load_frequency_table, n1_relevance_vs_logit,
    Correlations, Report, ReportRow, RunMetadata, ScatterSeries,
};
use crate::tse::{
    evaluate_cases, generate_cases, EvalRecord, GenerateOptions, Lexicon, TemplateId,
};

#[derive(Debug, Parser)]
#[command(
    name = "agreement-lrp",
    version,
    about = "LRP attribution for LSTM subject-verb agreement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate templated test cases, evaluate them, and write reports.
    Eval(EvalArgs),
    /// Print per-token relevance for one preamble and target pair.
    Attribute(AttributeArgs),
    /// Write a small random model covering a lexicon's vocabulary.
    ToyModel(ToyModelArgs),
    /// Compare forward logits with exporter reference fixtures.
    CheckFixtures(CheckFixturesArgs),
}

fn parse_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    /// Lexicon JSON; the built-in lexicon is used when omitted.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Comma-separated template ids (e.g. `simple,pp,orc-no-that`); default all.
    #[arg(long)]
    pub templates: Option<String>,
    #[arg(long, default_value_t = lrp::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub capitalize: bool,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub dedupe: bool,
    /// Comma-separated words; cases containing any of them are dropped.
    #[arg(long, default_value = "")]
    pub exclude_words: String,
    /// Optional `token,count` CSV for the frequency-vs-relevance series.
    #[arg(long)]
    pub frequencies: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AttributeArgs {
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    /// Whitespace-tokenized preamble.
    #[arg(long)]
    pub sentence: String,
    /// `POSITIVE,NEGATIVE` target forms; relevance explains `y_pos − y_neg`.
    #[arg(long)]
    pub pair: String,
    #[arg(long, default_value_t = lrp::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Also write the attribution as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ToyModelArgs {
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value_t = 16)]
    pub hidden: usize,
    #[arg(long, default_value_t = 16)]
    pub embed: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub scale: f64,
    #[arg(long)]
    pub out_weights: PathBuf,
    #[arg(long)]
    pub out_vocab: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckFixturesArgs {
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub fixtures: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}

pub fn run(cli: Cli, out: &mut impl std::io::Write) -> Result<()> {
    match cli.command {
        Command::Eval(a) => run_eval(&a).map(|report| {
            let _ = writeln!(
                out,
                "wrote {} rows to {}",
                report.rows.len(),
                a.out.display()
            );
        }),
        Command::Attribute(a) => {
            let text = run_attribute(&a)?;
            out.write_all(text.as_bytes())
                .map_err(|e| Error::io("stdout", e))
        }
        Command::ToyModel(a) => run_toy_model(&a),
        Command::CheckFixtures(a) => run_check_fixtures(&a, out),
    }
}

fn write_records(path: &Path, records: &[EvalRecord]) -> Result<()> {
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r).map_err(|e| Error::json("record", e))?);
        buf.push('\n');
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

fn write_signed_relevance(
    path: &Path,
    by_template: &[(TemplateId, Vec<EvalRecord>)],
) -> Result<()> {
    let ctx = || path.display().to_string();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(ctx(), e))?;
    w.write_record(["template", "case", "tag", "target_number", "relevance"])
        .map_err(|e| Error::csv(ctx(), e))?;
    for (t, records) in by_template {
        for (i, r) in records.iter().enumerate() {
            for (tag, v) in &r.tag_relevance {
                w.serialize((t, i, tag, r.case.n1_number, v))
                    .map_err(|e| Error::csv(ctx(), e))?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Runs every requested template end to end and writes reports under `args.out`.
pub fn run_eval(args: &EvalArgs) -> Result<Report> {
    if args.epsilon.is_nan() || args.epsilon < 0.0 {
        return Err(Error::InvalidArgument(
            "--epsilon must be non-negative".into(),
        ));
    }
    let model = LanguageModel::load(&args.weights, &args.vocab)?;
    let lexicon = match &args.lexicon {
        Some(p) => Lexicon::load(p)?,
        None => Lexicon::default(),
    };
    let templates: Vec<TemplateId> = match &args.templates {
        Some(list) => parse_list(list)
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?,
        None => TemplateId::ALL.to_vec(),
    };
    if templates.is_empty() {
        return Err(Error::InvalidArgument("--templates is empty".into()));
    }
    let options = GenerateOptions {
        capitalize: args.capitalize,
        dedupe: args.dedupe,
        exclude_words: parse_list(&args.exclude_words),
    };

    let mut rows = Vec::new();
    let mut by_template = Vec::new();
    for &id in &templates {
        let cases = generate_cases(&id.template(), &lexicon, &options, &model.vocab)?;
        if cases.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "template {id} produced no cases with this lexicon and exclusion list"
            )));
        }
        let records = evaluate_cases(&model, &cases, args.epsilon)?;
        rows.push(ReportRow::from_records(id, &records)?);
        by_template.push((id, records));
    }
    let all: Vec<EvalRecord> = by_template
        .iter()
        .flat_map(|(_, r)| r.iter().cloned())
        .collect();

    let report = Report {
        metadata: RunMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            weights: args.weights.display().to_string(),
            vocab: args.vocab.display().to_string(),
            lexicon: args.lexicon.as_ref().map(|p| p.display().to_string()),
            epsilon: args.epsilon,
            capitalize: args.capitalize,
            dedupe: args.dedupe,
            exclude_words: options.exclude_words.clone(),
            templates: templates.clone(),
        },
        correlations: Correlations::compute(&rows, &all),
        rows,
    };
    emit_report(&report, &args.out)?;

    let series_dir = args.out.join("series");
    std::fs::create_dir_all(&series_dir).map_err(|e| Error::io(&series_dir, e))?;
    let mut acc_pg = ScatterSeries::new("prediction_accuracy_vs_pointing_game");
    let mut acc_n2 = ScatterSeries::new("prediction_accuracy_vs_n2_top_rate");
    for r in &report.rows {
        acc_pg.push(r.prediction_accuracy, r.pointing_game);
        if let Some(n2) = r.n2_top_rate {
            acc_n2.push(r.prediction_accuracy, n2);
        }
    }
    acc_pg.write_csv(series_dir.join("pointing_vs_accuracy.csv"))?;
    acc_n2.write_csv(series_dir.join("n2_vs_accuracy.csv"))?;
    det_noun_points(&all).write_csv(series_dir.join("det_vs_noun.csv"))?;
    n1_relevance_vs_logit(&all)?.write_csv(series_dir.join("n1_relevance_vs_logit.csv"))?;
    if let Some(path) = &args.frequencies {
        let table = load_frequency_table(path)?;
        let joined = frequency_join(&all, &table)?;
        joined
            .series
            .write_csv(series_dir.join("frequency_vs_relevance.csv"))?;
    }
    write_signed_relevance(&series_dir.join("signed_relevance.csv"), &by_template)?;
    write_records(&args.out.join("records.jsonl"), &all)?;
    Ok(report)
}

/// Attributes `y_pos − y_neg` for one preamble; returns the printed report.
pub fn run_attribute(args: &AttributeArgs) -> Result<String> {
    let pair = parse_list(&args.pair);
    let [pos, neg] = pair.as_slice() else {
        return Err(Error::InvalidArgument(format!(
            "--pair must be two comma-separated words, got `{}`",
            args.pair
        )));
    };
    let model = LanguageModel::load(&args.weights, &args.vocab)?;
    let tokens = model.vocab.tokenize(&args.sentence)?;
    let trace = model.forward(&tokens.ids)?;
    let init = lrp::init_relevance(
        &trace.logits,
        model.require_id(pos)?,
        model.require_id(neg)?,
    )?;
    let result = lrp::propagate(&model.weights, &trace, &init, args.epsilon)?;
    let dump = AttributionDump::new(tokens.tokens.clone(), &result);

    let mut s = String::new();
    if !tokens.oov.is_empty() {
        let _ = writeln!(
            s,
            "# out of vocabulary (mapped to {UNK_TOKEN}): {}",
            tokens.oov.join(" ")
        );
    }
    let _ = writeln!(s, "# delta_y = y[{pos}] - y[{neg}] = {:.6}", result.delta_y);
    for (tok, r) in tokens.tokens.iter().zip(&result.token_relevance) {
        let _ = writeln!(s, "{tok}\t{r:.6}");
    }
    for (name, r) in &result.ledger.bias_relevance {
        let _ = writeln!(s, "# bias {name}\t{r:.6}");
    }
    let _ = writeln!(
        s,
        "# initial_state\t{:.6}",
        result.ledger.initial_state_relevance
    );
    let _ = writeln!(s, "# epsilon_leak\t{:.6}", result.ledger.epsilon_leak);
    let _ = writeln!(s, "# residual\t{:.3e}", dump.residual);

    if let Some(path) = &args.json {
        let text =
            serde_json::to_string_pretty(&dump).map_err(|e| Error::json("attribution", e))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    Ok(s)
}

pub fn run_toy_model(args: &ToyModelArgs) -> Result<()> {
    let lexicon = match &args.lexicon {
        Some(p) => Lexicon::load(p)?,
        None => Lexicon::default(),
    };
    let vocab = Vocabulary::from_tokens(
        std::iter::once(UNK_TOKEN.to_string()).chain(lexicon.all_tokens()),
    )?;
    let config = ModelConfig {
        num_layers: args.layers,
        hidden_size: args.hidden,
        embed_size: args.embed,
        vocab_size: vocab.len(),
    };
    config.validate()?;
    let weights = crate::toy::seeded_weights(&config, args.seed, args.scale);
    write_container(&args.out_weights, &config, &weights)?;
    vocab.save(&args.out_vocab)
}

pub fn run_check_fixtures(args: &CheckFixturesArgs, out: &mut impl std::io::Write) -> Result<()> {
    let model = LanguageModel::load(&args.weights, &args.vocab)?;
    let file = FixtureFile::load(&args.fixtures)?;
    let checks = cross_check(&model, &file)?;
    let mut failures = BTreeMap::new();
    for c in &checks {
        let ok = c.max_abs_diff <= args.tolerance;
        let _ = writeln!(
            out,
            "{} {:.3e}\t{}",
            if ok { "PASS" } else { "FAIL" },
            c.max_abs_diff,
            c.sentence
        );
        if !ok {
            failures.insert(c.sentence.clone(), c.max_abs_diff);
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{} of {} fixtures exceed tolerance {}",
            failures.len(),
            checks.len(),
            args.tolerance
        )))
    }
}
