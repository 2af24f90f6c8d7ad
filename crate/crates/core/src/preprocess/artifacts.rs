use std::sync::OnceLock;

use regex::Regex;

fn url_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\b(?:https?://|www\.)\S*").unwrap())
}

fn user_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"@\w+").unwrap())
}

const URL_TRAILING: &[char] = &['.', ',', '!', '?', ';', ':', '\'', '"', ')', ']', '}', '>'];

/// Collapses whitespace runs to one space and trims both ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Removes links, `@user` mentions and `#` symbols (keeping the hashtag word).
///
/// Links are `http://`, `https://` and bare `www.` forms running to the next
/// whitespace, minus any trailing punctuation. Each `#` becomes a space, so
/// `#a#b` yields `a b`. Whitespace is normalized.
pub fn strip_artifacts(text: &str) -> String {
    let no_urls = url_regex().replace_all(text, |caps: &regex::Captures<'_>| {
        let m = &caps[0];
        let kept = m.trim_end_matches(URL_TRAILING);
        format!(" {}", &m[kept.len()..])
    });
    let no_users = user_regex().replace_all(&no_urls, " ");
    normalize_whitespace(&no_users.replace('#', " "))
}
