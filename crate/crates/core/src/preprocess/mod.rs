//! Tweet normalization.
//!
//! The classical path (for TF-IDF models) is
//! `strip_artifacts → demojize → fold_ascii → tokenize_filter_stem`. Emoji are
//! translated before folding because folding would delete them. The light
//! path (for subword models) only runs `strip_artifacts`.

mod artifacts;
mod emoticons;
pub mod stem;

use std::collections::HashSet;
use std::fs;
use std::ops::Deref;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

pub use artifacts::{normalize_whitespace, strip_artifacts};
pub use emoticons::{demojize, EmoticonLexicon};

use crate::error::{Error, Result};

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

/// Ordered tokens produced by the classical path.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenList(pub Vec<String>);

impl Deref for TokenList {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl AsRef<[String]> for TokenList {
    fn as_ref(&self) -> &[String] {
        &self.0
    }
}

impl From<Vec<String>> for TokenList {
    fn from(v: Vec<String>) -> Self {
        TokenList(v)
    }
}

impl<'a> From<Vec<&'a str>> for TokenList {
    fn from(v: Vec<&'a str>) -> Self {
        TokenList(v.into_iter().map(str::to_string).collect())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn parse(source: &str) -> Self {
        Stopwords(
            source
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&src))
    }

    /// The vendored NLTK English list (179 words).
    pub fn bundled() -> &'static Stopwords {
        static WORDS: OnceLock<Stopwords> = OnceLock::new();
        WORDS.get_or_init(|| Stopwords::parse(BUNDLED_STOPWORDS))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for Stopwords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stopwords(iter.into_iter().map(Into::into).collect())
    }
}

/// NFKD-decomposes, strips combining marks and drops whatever is still not ASCII.
pub fn fold_ascii(text: &str) -> String {
    text.nfkd()
        .filter(|c| !is_combining_mark(*c))
        .filter(char::is_ascii)
        .collect()
}

/// Lowercases, splits on `[^a-z0-9']+`, removes apostrophes and stopwords, stems.
///
/// Stopwords are checked on the raw token (so `don't` matches), after
/// apostrophe removal, and again on the stem, so no stopword survives.
pub fn tokenize_filter_stem(text: &str, stopwords: &Stopwords) -> TokenList {
    let lower = text.to_ascii_lowercase();
    let mut out = Vec::new();
    for raw in lower.split(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit() || c == '\'')) {
        if raw.is_empty() || stopwords.contains(raw) {
            continue;
        }
        let word: String = raw.chars().filter(|&c| c != '\'').collect();
        if word.is_empty() || stopwords.contains(&word) {
            continue;
        }
        let stemmed = stem::stem(&word);
        if !stemmed.is_empty() && !stopwords.contains(&stemmed) {
            out.push(stemmed);
        }
    }
    TokenList(out)
}

/// Holds the lexicons used by both preprocessing paths.
#[derive(Debug, Clone, Copy)]
pub struct Preprocessor<'a> {
    pub lexicon: &'a EmoticonLexicon,
    pub stopwords: &'a Stopwords,
}

impl Default for Preprocessor<'static> {
    fn default() -> Self {
        Self {
            lexicon: EmoticonLexicon::bundled(),
            stopwords: Stopwords::bundled(),
        }
    }
}

impl Preprocessor<'_> {
    pub fn classical(&self, text: &str) -> TokenList {
        let stripped = strip_artifacts(text);
        let words = demojize(&stripped, self.lexicon);
        tokenize_filter_stem(&fold_ascii(&words), self.stopwords)
    }

    pub fn light(&self, text: &str) -> String {
        preprocess_light(text)
    }
}

/// Classical pipeline with the bundled lexicons and stopwords.
pub fn preprocess_classical(text: &str) -> TokenList {
    Preprocessor::default().classical(text)
}

/// Artifact stripping only; casing and emoji are kept for subword tokenizers.
pub fn preprocess_light(text: &str) -> String {
    strip_artifacts(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_examples() {
        assert_eq!(fold_ascii("café"), "cafe");
        assert_eq!(fold_ascii("naïve résumé"), "naive resume");
        assert_eq!(fold_ascii("日本"), "");
        assert_eq!(fold_ascii("ﬁne"), "fine");
    }

    #[test]
    fn tokenize_examples() {
        let sw: Stopwords = ["i", "am", "the"].into_iter().collect();
        assert_eq!(
            tokenize_filter_stem("I am running quickly", &sw).0,
            vec!["run", "quick"]
        );
        assert!(tokenize_filter_stem("", &sw).is_empty());
        assert!(tokenize_filter_stem("the the the", &sw).is_empty());
    }

    #[test]
    fn apostrophe_stopwords() {
        let sw = Stopwords::bundled();
        assert!(tokenize_filter_stem("don't won't shouldn't", sw).is_empty());
        assert_eq!(tokenize_filter_stem("it's Bob's dog", sw).0, vec!["bob", "dog"]);
    }

    #[test]
    fn bundled_stopword_count() {
        assert_eq!(Stopwords::bundled().len(), 179);
    }

    #[test]
    fn classical_golden() {
        assert_eq!(
            preprocess_classical("@a http://x 😀 I am HAPPY!!").0,
            vec!["grin", "face", "happi"]
        );
        assert!(preprocess_classical("").is_empty());
    }

    #[test]
    fn light_examples() {
        assert_eq!(preprocess_light("@bob 😀 GREAT"), "😀 GREAT");
        assert_eq!(preprocess_light("see http://a.io"), "see");
        assert_eq!(preprocess_light("plain"), "plain");
    }
}
