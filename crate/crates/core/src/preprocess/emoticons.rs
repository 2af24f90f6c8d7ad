//! Emoji and western-emoticon lexicons, and their translation into words.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const BUNDLED_EMOJI: &str = include_str!("../../data/emoji_en.tsv");
const BUNDLED_WESTERN: &str = include_str!("../../data/emoticons_western.tsv");

#[derive(Debug, Clone, Default)]
pub struct EmoticonLexicon {
    unicode_map: HashMap<String, String>,
    /// Longest emoji key, in chars.
    unicode_max_chars: usize,
    /// Western emoticons sorted longest-first (ties broken lexicographically).
    western: Vec<(String, String)>,
}

/// Parses `key<TAB>phrase` lines. Lines without a tab that start with `#` are
/// comments; blank lines are skipped.
fn parse_tsv(source: &str, origin: &Path) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || (line.starts_with('#') && !line.contains('\t')) {
            continue;
        }
        let Some((key, phrase)) = line.split_once('\t') else {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: n + 1,
                message: "expected key<TAB>phrase".into(),
            });
        };
        let phrase = phrase.trim();
        if key.is_empty()
            || phrase.is_empty()
            || !phrase.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b' ')
        {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: n + 1,
                message: format!("invalid mapping {key:?} -> {phrase:?} (phrase must be lowercase ASCII words)"),
            });
        }
        out.push((key.to_string(), phrase.to_string()));
    }
    Ok(out)
}

impl EmoticonLexicon {
    pub fn new(unicode: Vec<(String, String)>, western: Vec<(String, String)>) -> Self {
        let unicode_max_chars = unicode.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let unicode_map = unicode.into_iter().collect();
        let mut western: Vec<(String, String)> = western
            .into_iter()
            .collect::<HashMap<_, _>>()
            .into_iter()
            .collect();
        western.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Self {
            unicode_map,
            unicode_max_chars,
            western,
        }
    }

    pub fn from_tsv(unicode_src: &str, western_src: &str) -> Result<Self> {
        Ok(Self::new(
            parse_tsv(unicode_src, Path::new("<emoji lexicon>"))?,
            parse_tsv(western_src, Path::new("<emoticon lexicon>"))?,
        ))
    }

    pub fn from_files(unicode_path: impl AsRef<Path>, western_path: impl AsRef<Path>) -> Result<Self> {
        let (u, w) = (unicode_path.as_ref(), western_path.as_ref());
        let us = fs::read_to_string(u).map_err(|e| Error::io(u, e))?;
        let ws = fs::read_to_string(w).map_err(|e| Error::io(w, e))?;
        Ok(Self::new(parse_tsv(&us, u)?, parse_tsv(&ws, w)?))
    }

    /// The vendored CLDR emoji names and western emoticon table.
    pub fn bundled() -> &'static EmoticonLexicon {
        static LEXICON: OnceLock<EmoticonLexicon> = OnceLock::new();
        LEXICON.get_or_init(|| {
            EmoticonLexicon::from_tsv(BUNDLED_EMOJI, BUNDLED_WESTERN).expect("bundled lexicons are valid")
        })
    }

    pub fn unicode_len(&self) -> usize {
        self.unicode_map.len()
    }

    pub fn western_len(&self) -> usize {
        self.western.len()
    }

    pub fn unicode_phrase(&self, key: &str) -> Option<&str> {
        self.unicode_map.get(key).map(String::as_str)
    }

    pub fn unicode_keys(&self) -> impl Iterator<Item = &str> {
        self.unicode_map.keys().map(String::as_str)
    }
}

/// Codepoints that only occur as (parts of) emoji and are dropped when no
/// lexicon entry covers them.
fn is_emoji_codepoint(c: char) -> bool {
    matches!(c as u32,
        0x1F000..=0x1FAFF
        | 0x2600..=0x27BF
        | 0x2B00..=0x2BFF
        | 0x2300..=0x23FF
        | 0x2190..=0x21FF
        | 0x200D
        | 0x20E3
        | 0xFE0E..=0xFE0F
        | 0xE0020..=0xE007F
        | 0x3030 | 0x303D | 0x3297 | 0x3299
    )
}

/// Replaces emoji and western emoticons with their word phrases.
///
/// Emoji are matched longest-sequence-first anywhere in the text; unmatched
/// emoji codepoints are removed. Western emoticons are matched longest-first
/// at token starts and must be followed by whitespace, the end of the text or
/// a non-alphanumeric character. Whitespace is normalized.
pub fn demojize(text: &str, lexicon: &EmoticonLexicon) -> String {
    let unicode_done = replace_unicode(text, lexicon);
    let western_done = replace_western(&unicode_done, lexicon);
    super::artifacts::normalize_whitespace(&western_done)
}

fn replace_unicode(text: &str, lexicon: &EmoticonLexicon) -> String {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let candidate = !c.is_ascii() || chars.get(i + 1).is_some_and(|&(_, n)| !n.is_ascii());
        let mut matched = false;
        if candidate && lexicon.unicode_max_chars > 0 {
            let max = lexicon.unicode_max_chars.min(chars.len() - i);
            for len in (1..=max).rev() {
                let end = chars.get(i + len).map_or(text.len(), |&(p, _)| p);
                if let Some(phrase) = lexicon.unicode_map.get(&text[start..end]) {
                    out.push(' ');
                    out.push_str(phrase);
                    out.push(' ');
                    i += len;
                    matched = true;
                    break;
                }
            }
        }
        if !matched {
            if !is_emoji_codepoint(c) {
                out.push(c);
            }
            i += 1;
        }
    }
    out
}

fn replace_western(text: &str, lexicon: &EmoticonLexicon) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    let mut at_token_start = true;
    while let Some(c) = rest.chars().next() {
        if at_token_start && !c.is_whitespace() {
            let hit = lexicon.western.iter().find(|(key, _)| {
                rest.starts_with(key.as_str())
                    && rest[key.len()..]
                        .chars()
                        .next()
                        .is_none_or(|n| n.is_whitespace() || !n.is_ascii_alphanumeric())
            });
            if let Some((key, phrase)) = hit {
                out.push(' ');
                out.push_str(phrase);
                out.push(' ');
                rest = &rest[key.len()..];
                continue;
            }
        }
        at_token_start = c.is_whitespace();
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}
