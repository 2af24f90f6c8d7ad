//! Snowball English (Porter2) stemmer, NLTK flavour.
//!
//! Follows NLTK's `EnglishStemmer`: words of length ≤ 2 are returned as-is,
//! the NLTK exceptional-forms table applies, and only the `gener`, `commun`
//! and `arsen` prefixes adjust R1. Input is expected to be lowercase ASCII;
//! anything else is returned unchanged.

const DOUBLES: [&[u8]; 9] = [b"bb", b"dd", b"ff", b"gg", b"mm", b"nn", b"pp", b"rr", b"tt"];
const LI_ENDING: &[u8] = b"cdeghkmnrt";

const SPECIAL_WORDS: &[(&str, &str)] = &[
    ("skis", "ski"),
    ("skies", "sky"),
    ("dying", "die"),
    ("lying", "lie"),
    ("tying", "tie"),
    ("idly", "idl"),
    ("gently", "gentl"),
    ("ugly", "ugli"),
    ("early", "earli"),
    ("only", "onli"),
    ("singly", "singl"),
    ("sky", "sky"),
    ("news", "news"),
    ("howe", "howe"),
    ("atlas", "atlas"),
    ("cosmos", "cosmos"),
    ("bias", "bias"),
    ("andes", "andes"),
    ("inning", "inning"),
    ("innings", "inning"),
    ("outing", "outing"),
    ("outings", "outing"),
    ("canning", "canning"),
    ("cannings", "canning"),
    ("herring", "herring"),
    ("herrings", "herring"),
    ("earring", "earring"),
    ("earrings", "earring"),
    ("proceed", "proceed"),
    ("proceeds", "proceed"),
    ("proceeded", "proceed"),
    ("proceeding", "proceed"),
    ("exceed", "exceed"),
    ("exceeds", "exceed"),
    ("exceeded", "exceed"),
    ("exceeding", "exceed"),
    ("succeed", "succeed"),
    ("succeeds", "succeed"),
    ("succeeded", "succeed"),
    ("succeeding", "succeed"),
];

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

/// Stems a single lowercase ASCII word.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|c| c.is_ascii_lowercase() || c == b'\'') {
        return word.to_string();
    }
    if let Some((_, s)) = SPECIAL_WORDS.iter().find(|(w, _)| *w == word) {
        return s.to_string();
    }
    let mut w = Word::new(word.trim_start_matches('\''));
    if w.b.is_empty() {
        return String::new();
    }
    w.step0();
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5();
    w.finish()
}

struct Word {
    b: Vec<u8>,
    r1: String,
    r2: String,
}

/// Position after the first non-vowel that follows a vowel.
fn region_start(b: &[u8], from: usize) -> usize {
    for i in from + 1..b.len() {
        if !is_vowel(b[i]) && is_vowel(b[i - 1]) {
            return i + 1;
        }
    }
    b.len()
}

fn chop(s: &mut String, n: usize) {
    let keep = s.len().saturating_sub(n);
    s.truncate(keep);
}

fn replace_suffix(s: &mut String, old_len: usize, new: &str) {
    chop(s, old_len);
    s.push_str(new);
}

impl Word {
    fn new(word: &str) -> Self {
        let mut b = word.as_bytes().to_vec();
        if b[0] == b'y' {
            b[0] = b'Y';
        }
        for i in 1..b.len() {
            if b[i] == b'y' && is_vowel(b[i - 1]) {
                b[i] = b'Y';
            }
        }
        let (r1_start, r2_start) = if b.starts_with(b"gener") || b.starts_with(b"arsen") {
            let r1 = 5;
            (r1, nltk_r2_in(&b, r1))
        } else if b.starts_with(b"commun") {
            let r1 = 6;
            (r1, nltk_r2_in(&b, r1))
        } else {
            let r1 = region_start(&b, 0);
            let r2 = if r1 < b.len() { region_start(&b, r1) } else { b.len() };
            (r1, r2)
        };
        let tail = |start: usize| String::from_utf8_lossy(&b[start.min(b.len())..]).into_owned();
        let (r1, r2) = (tail(r1_start), tail(r2_start));
        Self { b, r1, r2 }
    }

    fn ends(&self, suffix: &str) -> bool {
        self.b.ends_with(suffix.as_bytes())
    }

    fn len(&self) -> usize {
        self.b.len()
    }

    fn at_back(&self, back: usize) -> u8 {
        self.b[self.b.len() - back]
    }

    /// Removes `n` bytes from the word and both regions.
    fn cut(&mut self, n: usize) {
        let keep = self.b.len().saturating_sub(n);
        self.b.truncate(keep);
        chop(&mut self.r1, n);
        chop(&mut self.r2, n);
    }

    fn contains_vowel(bytes: &[u8]) -> bool {
        bytes.iter().copied().any(is_vowel)
    }

    fn step0(&mut self) {
        for suffix in ["'s'", "'s", "'"] {
            if self.ends(suffix) {
                self.cut(suffix.len());
                break;
            }
        }
    }

    fn step1a(&mut self) {
        for suffix in ["sses", "ied", "ies", "us", "ss", "s"] {
            if !self.ends(suffix) {
                continue;
            }
            match suffix {
                "sses" => self.cut(2),
                "ied" | "ies" => {
                    if self.len() - suffix.len() > 1 {
                        self.cut(2);
                    } else {
                        self.cut(1);
                    }
                }
                "s" => {
                    let n = self.len();
                    if n >= 2 && Self::contains_vowel(&self.b[..n - 2]) {
                        self.cut(1);
                    }
                }
                _ => {}
            }
            break;
        }
    }

    fn step1b(&mut self) {
        for suffix in ["eedly", "ingly", "edly", "eed", "ing", "ed"] {
            if !self.ends(suffix) {
                continue;
            }
            if suffix == "eed" || suffix == "eedly" {
                if self.r1.ends_with(suffix) {
                    self.b.truncate(self.b.len() - suffix.len());
                    self.b.extend_from_slice(b"ee");
                    if self.r1.len() >= suffix.len() {
                        replace_suffix(&mut self.r1, suffix.len(), "ee");
                    } else {
                        self.r1.clear();
                    }
                    if self.r2.len() >= suffix.len() {
                        replace_suffix(&mut self.r2, suffix.len(), "ee");
                    } else {
                        self.r2.clear();
                    }
                }
                break;
            }
            let stem_len = self.len() - suffix.len();
            if !Self::contains_vowel(&self.b[..stem_len]) {
                break;
            }
            self.cut(suffix.len());
            if self.ends("at") || self.ends("bl") || self.ends("iz") {
                self.b.push(b'e');
                self.r1.push('e');
                if self.len() > 5 || self.r1.len() >= 3 {
                    self.r2.push('e');
                }
            } else if DOUBLES.iter().any(|d| self.b.ends_with(d)) {
                self.cut(1);
            } else if self.r1.is_empty() && self.ends_short_syllable() {
                self.b.push(b'e');
            }
            break;
        }
    }

    fn ends_short_syllable(&self) -> bool {
        let n = self.len();
        if n >= 3 {
            let (a, b, c) = (self.b[n - 3], self.b[n - 2], self.b[n - 1]);
            !is_vowel(c) && !matches!(c, b'w' | b'x' | b'Y') && is_vowel(b) && !is_vowel(a)
        } else {
            n == 2 && is_vowel(self.b[0]) && !is_vowel(self.b[1])
        }
    }

    fn step1c(&mut self) {
        let n = self.len();
        if n > 2 && matches!(self.b[n - 1], b'y' | b'Y') && !is_vowel(self.b[n - 2]) {
            self.b[n - 1] = b'i';
            for r in [&mut self.r1, &mut self.r2] {
                if r.is_empty() {
                    continue;
                }
                r.pop();
                r.push('i');
            }
        }
    }

    fn step2(&mut self) {
        const SUFFIXES: [&str; 24] = [
            "ization", "ational", "fulness", "ousness", "iveness", "tional", "biliti", "lessli",
            "entli", "ation", "alism", "aliti", "ousli", "iviti", "fulli", "enci", "anci",
            "abli", "izer", "ator", "alli", "bli", "ogi", "li",
        ];
        let Some(suffix) = SUFFIXES.iter().copied().find(|s| self.ends(s)) else {
            return;
        };
        if !self.r1.ends_with(suffix) {
            return;
        }
        let n = suffix.len();
        match suffix {
            "tional" => self.cut(2),
            "enci" | "anci" | "abli" => self.replace(1, "e"),
            "entli" => self.cut(2),
            "izer" | "ization" => self.replace_r2_or(n, "ize", ""),
            "ational" | "ation" | "ator" => self.replace_r2_or(n, "ate", "e"),
            "alism" | "aliti" | "alli" => self.replace_r2_or(n, "al", ""),
            "fulness" => self.cut(4),
            "ousli" | "ousness" => self.replace_r2_or(n, "ous", ""),
            "iveness" | "iviti" => self.replace_r2_or(n, "ive", "e"),
            "biliti" | "bli" => self.replace_r2_or(n, "ble", ""),
            "ogi" => {
                if self.at_back(4) == b'l' {
                    self.cut(1);
                }
            }
            "fulli" | "lessli" => self.cut(2),
            "li" => {
                if self.len() >= 3 && LI_ENDING.contains(&self.at_back(3)) {
                    self.cut(2);
                }
            }
            _ => unreachable!(),
        }
    }

    /// Replaces the last `n` bytes with `new`; R1 is known to hold the suffix.
    fn replace(&mut self, n: usize, new: &str) {
        self.b.truncate(self.b.len() - n);
        self.b.extend_from_slice(new.as_bytes());
        replace_suffix(&mut self.r1, n, new);
        if self.r2.len() >= n {
            replace_suffix(&mut self.r2, n, new);
        } else {
            self.r2.clear();
        }
    }

    fn replace_r2_or(&mut self, n: usize, new: &str, r2_fallback: &str) {
        let r2_long = self.r2.len() >= n;
        self.replace(n, new);
        if !r2_long {
            self.r2 = r2_fallback.to_string();
        }
    }

    fn step3(&mut self) {
        const SUFFIXES: [&str; 9] = [
            "ational", "tional", "alize", "icate", "iciti", "ative", "ical", "ness", "ful",
        ];
        let Some(suffix) = SUFFIXES.iter().copied().find(|s| self.ends(s)) else {
            return;
        };
        if !self.r1.ends_with(suffix) {
            return;
        }
        let n = suffix.len();
        match suffix {
            "tional" => self.cut(2),
            "ational" => self.replace_r2_or(n, "ate", ""),
            "alize" => self.cut(3),
            "icate" | "iciti" | "ical" => self.replace_r2_or(n, "ic", ""),
            "ful" | "ness" => self.cut(n),
            "ative" => {
                if self.r2.ends_with(suffix) {
                    self.cut(n);
                }
            }
            _ => unreachable!(),
        }
    }

    fn step4(&mut self) {
        const SUFFIXES: [&str; 18] = [
            "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism", "ate", "iti",
            "ous", "ive", "ize", "ion", "al", "er", "ic",
        ];
        let Some(suffix) = SUFFIXES.iter().copied().find(|s| self.ends(s)) else {
            return;
        };
        if !self.r2.ends_with(suffix) {
            return;
        }
        if suffix == "ion" {
            if self.len() >= 4 && matches!(self.at_back(4), b's' | b't') {
                self.cut(3);
            }
        } else {
            self.cut(suffix.len());
        }
    }

    fn step5(&mut self) {
        let n = self.len();
        if self.r2.ends_with('l') && n >= 2 && self.b[n - 2] == b'l' {
            self.b.pop();
        } else if self.r2.ends_with('e') {
            self.b.pop();
        } else if self.r1.ends_with('e')
            && n >= 4
            && (is_vowel(self.b[n - 2])
                || matches!(self.b[n - 2], b'w' | b'x' | b'Y')
                || !is_vowel(self.b[n - 3])
                || is_vowel(self.b[n - 4]))
        {
            self.b.pop();
        }
    }

    fn finish(self) -> String {
        self.b
            .into_iter()
            .map(|c| if c == b'Y' { 'y' } else { c as char })
            .collect()
    }
}

/// R2 for the prefix-exception words: searched inside R1 only.
fn nltk_r2_in(b: &[u8], r1: usize) -> usize {
    let r1_part = &b[r1.min(b.len())..];
    for i in 1..r1_part.len() {
        if !is_vowel(r1_part[i]) && is_vowel(r1_part[i - 1]) {
            return r1 + i + 1;
        }
    }
    b.len()
}
