// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

pub const UNK_TOKEN: &str = "<unk>";

/// Case-sensitive token ↔ id bijection. Id 0 is always `<unk>`.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    unk_id: usize,
}

/// Result of mapping whitespace-separated text to ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tokenized {
    pub tokens: Vec<String>,
    pub ids: Vec<usize>,
    /// Tokens that were not in the vocabulary and were mapped to `<unk>`.
    pub oov: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary from tokens in id order. The first token must be `<unk>`.
    pub fn from_tokens<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        match tokens.first() {
            None => return Err(Error::Vocabulary("vocabulary is empty".into())),
            Some(first) if first != UNK_TOKEN => {
                return Err(Error::Vocabulary(format!(
                    "first token must be `{UNK_TOKEN}`, found `{first}`"
                )))
            }
            _ => {}
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (id, tok) in tokens.iter().enumerate() {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(Error::Vocabulary(format!(
                    "token on line {} is empty or contains whitespace",
                    id + 1
                )));
            }
            if let Some(prev) = index.insert(tok.clone(), id) {
                return Err(Error::Vocabulary(format!(
                    "duplicate token `{tok}` on lines {} and {}",
                    prev + 1,
                    id + 1
                )));
            }
        }
        Ok(Self {
            tokens,
            index,
            unk_id: 0,
        })
    }

    /// Reads a UTF-8 file with one token per line; line number (from 0) is the id.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.strip_suffix('\n').unwrap_or(text);
        Self::from_tokens(text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)))
    }

    /// One token per line, newline-terminated.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for t in &self.tokens {
            out.push_str(t);
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_file_string()).map_err(|e| Error::io(path, e))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn unk_id(&self) -> usize {
        self.unk_id
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn token(&self, id: usize) -> Option<&str> {
        self.tokens.get(id).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Splits on whitespace and maps each token case-sensitively; unknown tokens map to `<unk>`.
    pub fn tokenize(&self, text: &str) -> Result<Tokenized> {
        let tokens: Vec<String> = text.split_whitespace().map(str::to_owned).collect();
        if tokens.is_empty() {
            return Err(Error::EmptyInput("text contains no tokens"));
        }
        let mut oov = Vec::new();
        let ids = tokens
            .iter()
            .map(|t| {
                self.id(t).unwrap_or_else(|| {
                    oov.push(t.clone());
                    self.unk_id
                })
            })
            .collect();
        Ok(Tokenized { tokens, ids, oov })
    }
}
