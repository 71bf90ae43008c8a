// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use std::collections::HashSet;

use agreement_lrp::model::{LanguageModel, ModelConfig, Vocabulary, WeightContainer};
use agreement_lrp::toy::seeded_weights;
use agreement_lrp::tse::{
    evaluate_case, evaluate_cases, generate_cases, pointing_game_accuracy, split_records,
    top_tag_breakdown, GenerateOptions, Lexicon, SplitBy, Tag, TemplateId,
};
use proptest::prelude::*;

use common::*;

const NOUNS: [(&str, &str); 4] = [
    ("senator", "senators"),
    ("manager", "managers"),
    ("pilot", "pilots"),
    ("author", "authors"),
];
const VERBS: [(&str, &str); 3] = [("laughs", "laugh"), ("swims", "swim"), ("waits", "wait")];
const TRANSITIVE: [(&str, &str); 2] = [("likes", "like"), ("hates", "hate")];
const LVP: [(&str, &str, &str); 3] = [
    ("knows", "know", "many languages"),
    ("is", "are", "very tall"),
    ("writes", "write", "long letters"),
];

fn lexicon(nouns: usize, verbs: usize, lvp: usize) -> Lexicon {
    let pairs = |xs: &[(&str, &str)]| {
        xs.iter()
            .map(|(s, p)| (s.to_string(), p.to_string()))
            .collect()
    };
    Lexicon {
        nouns: pairs(&NOUNS[..nouns]),
        verbs: pairs(&VERBS[..verbs]),
        lvp_verbs: LVP[..lvp]
            .iter()
            .map(|(s, p, c)| (s.to_string(), p.to_string(), c.to_string()))
            .collect(),
        transitive_verbs: Some(pairs(&TRANSITIVE)),
        complement_verbs: Some(vec![("says".into(), "say".into())]),
        determiners: vec!["the".into()],
        prepositions: vec!["near".into(), "behind".into()],
        complementizers: vec!["that".into()],
        conjunctions: vec!["and".into()],
    }
}

fn vocab_for(lex: &Lexicon) -> Vocabulary {
    Vocabulary::from_tokens(std::iter::once("<unk>".to_string()).chain(lex.all_tokens())).unwrap()
}

/// Case count by direct multiplication; one determiner, so no duplicates arise.
fn expected_count(id: TemplateId, lex: &Lexicon) -> usize {
    let n = lex.nouns.len();
    let v = lex.verbs.len();
    let tv = lex.transitive_verbs.as_ref().unwrap().len();
    let cv = lex.complement_verbs.as_ref().unwrap().len();
    let lvp = lex.lvp_verbs.len();
    let p = lex.prepositions.len();
    let n1 = 2 * n;
    let n2 = 2 * (n - 1);
    match id {
        TemplateId::Simple => n1 * v,
        TemplateId::IorcNoThat | TemplateId::Iorc => n1 * n2 * tv,
        TemplateId::Sc => n1 * n2 * cv * v,
        TemplateId::Pp => n1 * n2 * p * v,
        TemplateId::Src | TemplateId::Orc | TemplateId::OrcNoThat => n1 * n2 * tv * v,
        TemplateId::Svp => n1 * v * (v - 1),
        TemplateId::Lvp => n1 * lvp * (lvp - 1),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn case_counts_match_enumeration(nouns in 2usize..=4, verbs in 2usize..=3, lvp in 2usize..=3, t in 0usize..10) {
        let id = TemplateId::ALL[t];
        let lex = lexicon(nouns, verbs, lvp);
        let cases = generate_cases(&id.template(), &lex, &GenerateOptions::default(), &vocab_for(&lex)).unwrap();
        prop_assert_eq!(cases.len(), expected_count(id, &lex));
        let distinct: HashSet<_> = cases.iter().map(|c| (c.preamble_text(), c.target_correct.clone())).collect();
        prop_assert_eq!(distinct.len(), cases.len());
    }

    #[test]
    fn spans_partition_every_preamble(t in 0usize..10, capitalize in any::<bool>()) {
        let id = TemplateId::ALL[t];
        let lex = lexicon(3, 3, 3);
        let opts = GenerateOptions { capitalize, ..Default::default() };
        for case in generate_cases(&id.template(), &lex, &opts, &vocab_for(&lex)).unwrap() {
            let mut covered: Vec<usize> = case.spans.values().flatten().copied().collect();
            covered.sort_unstable();
            prop_assert_eq!(covered, (0..case.preamble.len()).collect::<Vec<_>>());
            prop_assert!(case.spans.contains_key(&Tag::N1));
            prop_assert_ne!(&case.target_correct, &case.target_incorrect);
            prop_assert_eq!(case.preamble[0].chars().next().unwrap().is_uppercase(), capitalize);
        }
    }

    #[test]
    fn top_tag_breakdown_sums_to_100(
        rows in prop::collection::vec((any::<bool>(), prop::collection::vec(-2i32..=2, 4)), 1..30)
    ) {
        // small integer relevances make ties common
        let records: Vec<_> = rows
            .iter()
            .map(|(c, v)| record(*c, &[(Tag::Det1, v[0] as f64), (Tag::N1, v[1] as f64), (Tag::Det2, v[2] as f64), (Tag::N2, v[3] as f64)]))
            .collect();
        let b = top_tag_breakdown(&records).unwrap();
        let total: f64 = b.by_tag.values().sum::<f64>() + b.tie;
        prop_assert!((total - 100.0).abs() < 1e-9);
        prop_assert_eq!(b.by_tag.get(&Tag::N1).copied().unwrap_or(0.0), pointing_game_accuracy(&records).unwrap());
    }

    #[test]
    fn splits_are_disjoint_and_exhaustive(rows in prop::collection::vec(any::<bool>(), 0..20)) {
        let records: Vec<_> = rows.iter().map(|&c| record(c, &[(Tag::N1, 1.0)])).collect();
        for by in [SplitBy::Correctness, SplitBy::TargetNumber, SplitBy::ContainsWord("laugh".into())] {
            let p = split_records(&records, &by);
            prop_assert_eq!(p.matching.len() + p.rest.len(), records.len());
            for m in &p.matching {
                prop_assert!(!p.rest.iter().any(|r| std::ptr::eq(*r, *m)));
            }
        }
    }
}

#[test]
fn counting_fixture_matches_hand_counts() {
    let records = counting_fixture();
    let b = top_tag_breakdown(&records).unwrap();
    assert_eq!(b.by_tag[&Tag::N1], FIXTURE_POINTING);
    assert_eq!(b.by_tag[&Tag::N2], FIXTURE_N2_TOP);
    assert_eq!(b.by_tag[&Tag::Det1], 100.0 / 12.0);
    assert_eq!(b.by_tag[&Tag::Det2], 100.0 / 12.0);
    assert_eq!(b.tie, 100.0 / 12.0);
}

fn stub_model(lex: &Lexicon) -> LanguageModel {
    let vocab = vocab_for(lex);
    let config = ModelConfig {
        num_layers: 1,
        hidden_size: 3,
        embed_size: 2,
        vocab_size: vocab.len(),
    };
    let mut w = WeightContainer::zeros(&config);
    // the model always prefers singular verbs by 0.5
    for (s, p) in &lex.verbs {
        w.decoder_bias[vocab.id(s).unwrap()] = 1.0;
        w.decoder_bias[vocab.id(p).unwrap()] = 0.5;
    }
    LanguageModel::new(config, w, vocab).unwrap()
}

#[test]
fn stub_model_outcomes() {
    let lex = lexicon(2, 1, 2);
    let model = stub_model(&lex);
    let cases = generate_cases(
        &TemplateId::Simple.template(),
        &lex,
        &GenerateOptions::default(),
        &model.vocab,
    )
    .unwrap();
    let records = evaluate_cases(&model, &cases, 0.0).unwrap();
    assert_eq!(records.len(), 4);
    for (case, r) in cases.iter().zip(&records) {
        assert_eq!(&r.case, case);
        let singular = case.target_correct == "laughs";
        assert_eq!(r.correct, singular);
        assert_eq!(r.delta_y, if singular { 0.5 } else { -0.5 });
        assert_eq!(r.predicted_form, "laughs");
        // with zero LSTM weights all of Δy sits on the decoder bias
        assert!(r.token_relevance.iter().all(|&v| v == 0.0));
        assert_eq!(r.ledger.bias_relevance["decoder.b"], r.delta_y);
    }
}

#[test]
fn parallel_evaluation_matches_sequential() {
    let lex = lexicon(3, 2, 2);
    let vocab = vocab_for(&lex);
    let config = ModelConfig {
        num_layers: 2,
        hidden_size: 4,
        embed_size: 3,
        vocab_size: vocab.len(),
    };
    let model = LanguageModel::new(config, seeded_weights(&config, 9, 0.8), vocab).unwrap();
    let cases = generate_cases(
        &TemplateId::Orc.template(),
        &lex,
        &GenerateOptions::default(),
        &model.vocab,
    )
    .unwrap();
    let par = evaluate_cases(&model, &cases, 1e-3).unwrap();
    let seq: Vec<_> = cases
        .iter()
        .map(|c| evaluate_case(&model, c, 1e-3).unwrap())
        .collect();
    assert_eq!(par, seq);
    for r in &par {
        let tags: f64 = r.tag_relevance.values().sum();
        let tokens: f64 = r.token_relevance.iter().sum();
        assert!((tags - tokens).abs() < 1e-12);
        assert!((tokens + r.ledger.total() - r.delta_y).abs() < 1e-9);
    }
}
