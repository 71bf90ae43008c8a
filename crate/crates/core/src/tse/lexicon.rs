// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::template::VerbClass;

/// A (singular, plural) word pair.
pub type NumberPair = (String, String);

/// `(singular, plural, continuation)`.
pub type VerbForms<'a> = (&'a str, &'a str, Option<&'a str>);

/// Word lists used to instantiate templates.
///
/// JSON keys follow the field names. `transitive_verbs` and
/// `complement_verbs` are optional and fall back to `verbs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub nouns: Vec<NumberPair>,
    pub verbs: Vec<NumberPair>,
    /// `[singular, plural, continuation]`.
    pub lvp_verbs: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitive_verbs: Option<Vec<NumberPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement_verbs: Option<Vec<NumberPair>>,
    pub determiners: Vec<String>,
    pub prepositions: Vec<String>,
    pub complementizers: Vec<String>,
    pub conjunctions: Vec<String>,
}

fn pairs(list: &[(&str, &str)]) -> Vec<NumberPair> {
    list.iter()
        .map(|(s, p)| (s.to_string(), p.to_string()))
        .collect()
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl Default for Lexicon {
    /// A desk-scale lexicon built from the example sentences of the agreement templates.
    fn default() -> Self {
        Self {
            nouns: pairs(&[
                ("senator", "senators"),
                ("manager", "managers"),
                ("skater", "skaters"),
                ("surgeon", "surgeons"),
                ("customer", "customers"),
            ]),
            verbs: pairs(&[
                ("laughs", "laugh"),
                ("smiles", "smile"),
                ("swims", "swim"),
                ("sleeps", "sleep"),
                ("waits", "wait"),
            ]),
            lvp_verbs: [
                ("knows", "know", "many different foreign languages"),
                ("likes", "like", "to watch television shows"),
                ("is", "are", "twenty three years old"),
                ("enjoys", "enjoy", "playing tennis with colleagues"),
                ("writes", "write", "in a journal every day"),
            ]
            .iter()
            .map(|(s, p, c)| (s.to_string(), p.to_string(), c.to_string()))
            .collect(),
            transitive_verbs: Some(pairs(&[
                ("admires", "admire"),
                ("hates", "hate"),
                ("likes", "like"),
                ("loves", "love"),
            ])),
            complement_verbs: Some(pairs(&[("said", "said"), ("thinks", "think")])),
            determiners: words(&["the"]),
            prepositions: words(&["in front of", "next to"]),
            complementizers: words(&["that"]),
            conjunctions: words(&["and"]),
        }
    }
}

impl Lexicon {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let lex: Lexicon =
            serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
        lex.validate()?;
        Ok(lex)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nouns.is_empty() {
            return Err(Error::InvalidArgument("lexicon has no noun pairs".into()));
        }
        if self.verbs.is_empty() {
            return Err(Error::InvalidArgument("lexicon has no verb pairs".into()));
        }
        let all = self
            .nouns
            .iter()
            .chain(&self.verbs)
            .chain(self.transitive_verbs.iter().flatten())
            .chain(self.complement_verbs.iter().flatten());
        for (s, p) in all {
            if s.split_whitespace().count() != 1 || p.split_whitespace().count() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "noun and verb forms must be single tokens: ({s}, {p})"
                )));
            }
        }
        Ok(())
    }

    /// Verb forms usable in a slot class.
    pub fn verbs_for(&self, class: VerbClass) -> Vec<VerbForms<'_>> {
        fn plain(list: &[NumberPair]) -> Vec<VerbForms<'_>> {
            list.iter()
                .map(|(s, p)| (s.as_str(), p.as_str(), None))
                .collect()
        }
        match class {
            VerbClass::Intransitive => plain(&self.verbs),
            VerbClass::Transitive => plain(self.transitive_verbs.as_deref().unwrap_or(&self.verbs)),
            VerbClass::Complement => plain(self.complement_verbs.as_deref().unwrap_or(&self.verbs)),
            VerbClass::LongVp => self
                .lvp_verbs
                .iter()
                .map(|(s, p, c)| (s.as_str(), p.as_str(), Some(c.as_str())))
                .collect(),
        }
    }

    /// Every whitespace-separated token any template could emit, plus capitalized determiners.
    pub fn all_tokens(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut add = |s: &str| {
            for t in s.split_whitespace() {
                out.insert(t.to_string());
            }
        };
        for (s, p) in self
            .nouns
            .iter()
            .chain(&self.verbs)
            .chain(self.transitive_verbs.iter().flatten())
            .chain(self.complement_verbs.iter().flatten())
        {
            add(s);
            add(p);
        }
        for (s, p, c) in &self.lvp_verbs {
            add(s);
            add(p);
            add(c);
        }
        for w in self
            .prepositions
            .iter()
            .chain(&self.complementizers)
            .chain(&self.conjunctions)
        {
            add(w);
        }
        for d in &self.determiners {
            add(d);
            add(&super::generate::capitalize_first(d));
        }
        out
    }
}
