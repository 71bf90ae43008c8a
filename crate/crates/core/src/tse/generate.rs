// SPDX-License-Identifier: MIT OR Apache-2.0

//! Cartesian instantiation of templates over a lexicon.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Vocabulary;

use super::lexicon::{Lexicon, VerbForms};
use super::template::{Tag, Template, TemplateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Singular,
    Plural,
}

impl Number {
    pub const BOTH: [Number; 2] = [Number::Singular, Number::Plural];

    pub fn pick<'a>(self, singular: &'a str, plural: &'a str) -> &'a str {
        match self {
            Number::Singular => singular,
            Number::Plural => plural,
        }
    }
}

/// One preamble with its tagged spans and target verb pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub template: TemplateId,
    pub preamble: Vec<String>,
    /// Token positions per tag; together they cover every preamble position once.
    pub spans: BTreeMap<Tag, Vec<usize>>,
    pub target_correct: String,
    pub target_incorrect: String,
    pub n1_number: Number,
}

impl TestCase {
    pub fn preamble_text(&self) -> String {
        self.preamble.join(" ")
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.preamble.iter().any(|t| t == word)
            || self.target_correct == word
            || self.target_incorrect == word
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerateOptions {
    /// Capitalize the first letter of each preamble.
    pub capitalize: bool,
    /// Drop cases with an identical preamble and target pair.
    pub dedupe: bool,
    /// Drop cases whose preamble or targets contain any of these tokens.
    pub exclude_words: Vec<String>,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            capitalize: true,
            dedupe: true,
            exclude_words: Vec::new(),
        }
    }
}

pub fn capitalize_first(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn opt_list(present: bool, words: &[String]) -> Vec<Option<&str>> {
    if present {
        words.iter().map(|w| Some(w.as_str())).collect()
    } else {
        vec![None]
    }
}

struct Fill<'a> {
    det1: &'a str,
    n1: (&'a str, &'a str),
    n1_number: Number,
    det2: Option<&'a str>,
    n2: Option<((&'a str, &'a str), Number)>,
    comp: Option<&'a str>,
    prep: Option<&'a str>,
    conj: Option<&'a str>,
    verb: Option<VerbForms<'a>>,
    target: (&'a str, &'a str),
}

fn build_case(template: &Template, fill: &Fill<'_>, capitalize: bool) -> TestCase {
    let mut preamble: Vec<String> = Vec::new();
    let mut spans: BTreeMap<Tag, Vec<usize>> = BTreeMap::new();
    let verb_number = match template.verb_agrees_with {
        Some(Tag::N2) => fill.n2.map(|(_, n)| n).unwrap_or(fill.n1_number),
        _ => fill.n1_number,
    };
    for &slot in &template.slots {
        let text: &str = match slot {
            Tag::Det1 => fill.det1,
            Tag::N1 => fill.n1_number.pick(fill.n1.0, fill.n1.1),
            Tag::Det2 => fill.det2.expect("Det2 filled"),
            Tag::N2 => {
                let ((s, p), n) = fill.n2.expect("N2 filled");
                n.pick(s, p)
            }
            Tag::Comp => fill.comp.expect("Comp filled"),
            Tag::P => fill.prep.expect("P filled"),
            Tag::Conj => fill.conj.expect("Conj filled"),
            Tag::V => {
                let (s, p, _) = fill.verb.expect("V filled");
                verb_number.pick(s, p)
            }
            Tag::CompVP => fill.verb.and_then(|v| v.2).expect("CompVP filled"),
        };
        let span = spans.entry(slot).or_default();
        for tok in text.split_whitespace() {
            span.push(preamble.len());
            preamble.push(tok.to_string());
        }
    }
    if capitalize {
        if let Some(first) = preamble.first_mut() {
            *first = capitalize_first(first);
        }
    }
    let (sg, pl) = fill.target;
    let (target_correct, target_incorrect) = match fill.n1_number {
        Number::Singular => (sg, pl),
        Number::Plural => (pl, sg),
    };
    TestCase {
        template: template.id,
        preamble,
        spans,
        target_correct: target_correct.to_string(),
        target_incorrect: target_incorrect.to_string(),
        n1_number: fill.n1_number,
    }
}

/// Instantiates `template` over every lexicon combination and both numbers of each noun.
///
/// N2 ranges over nouns other than N1's. Coordination templates never reuse the
/// preamble verb as target. Every emitted token must be in `vocab`.
pub fn generate_cases(
    template: &Template,
    lexicon: &Lexicon,
    options: &GenerateOptions,
    vocab: &Vocabulary,
) -> Result<Vec<TestCase>> {
    lexicon.validate()?;
    if lexicon.determiners.is_empty() {
        return Err(Error::InvalidArgument("lexicon has no determiners".into()));
    }
    let det2s = opt_list(template.has(Tag::Det2), &lexicon.determiners);
    let comps = opt_list(template.has(Tag::Comp), &lexicon.complementizers);
    let preps = opt_list(template.has(Tag::P), &lexicon.prepositions);
    let conjs = opt_list(template.has(Tag::Conj), &lexicon.conjunctions);
    let verbs: Vec<Option<(usize, VerbForms)>> = match template.verb_class {
        Some(class) => lexicon
            .verbs_for(class)
            .into_iter()
            .enumerate()
            .map(Some)
            .collect(),
        None => vec![None],
    };
    let targets = lexicon.verbs_for(template.target_class);
    if let Some((s, _, _)) = targets.iter().find(|(s, p, _)| s == p) {
        return Err(Error::InvalidArgument(format!(
            "target verb `{s}` has identical singular and plural forms"
        )));
    }
    let n2_choices: Vec<Option<(usize, Number)>> = if template.has(Tag::N2) {
        (0..lexicon.nouns.len())
            .flat_map(|i| Number::BOTH.into_iter().map(move |n| Some((i, n))))
            .collect()
    } else {
        vec![None]
    };
    let excluded: HashSet<&str> = options.exclude_words.iter().map(String::as_str).collect();

    let mut cases = Vec::new();
    for det1 in &lexicon.determiners {
        for (n1_idx, (n1s, n1p)) in lexicon.nouns.iter().enumerate() {
            for n1_number in Number::BOTH {
                for &det2 in &det2s {
                    for &n2 in &n2_choices {
                        if matches!(n2, Some((i, _)) if i == n1_idx) {
                            continue;
                        }
                        let n2 = n2.map(|(i, n)| {
                            let (s, p) = &lexicon.nouns[i];
                            ((s.as_str(), p.as_str()), n)
                        });
                        for &comp in &comps {
                            for &prep in &preps {
                                for &conj in &conjs {
                                    for &verb in &verbs {
                                        for (t_idx, &(ts, tp, _)) in targets.iter().enumerate() {
                                            if template.target_differs_from_verb
                                                && matches!(verb, Some((v, _)) if v == t_idx)
                                            {
                                                continue;
                                            }
                                            let fill = Fill {
                                                det1,
                                                n1: (n1s, n1p),
                                                n1_number,
                                                det2,
                                                n2,
                                                comp,
                                                prep,
                                                conj,
                                                verb: verb.map(|(_, v)| v),
                                                target: (ts, tp),
                                            };
                                            let case =
                                                build_case(template, &fill, options.capitalize);
                                            if !excluded.is_empty()
                                                && excluded.iter().any(|w| case.contains_word(w))
                                            {
                                                continue;
                                            }
                                            cases.push(case);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    if options.dedupe {
        let mut seen = HashSet::new();
        cases.retain(|c| {
            seen.insert((
                c.preamble.clone(),
                c.target_correct.clone(),
                c.target_incorrect.clone(),
            ))
        });
    }

    let missing: BTreeSet<&str> = cases
        .iter()
        .flat_map(|c| {
            c.preamble
                .iter()
                .chain([&c.target_correct, &c.target_incorrect])
        })
        .map(String::as_str)
        .filter(|t| !vocab.contains(t))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingWords(
            missing.into_iter().map(str::to_owned).collect(),
        ));
    }
    Ok(cases)
}
