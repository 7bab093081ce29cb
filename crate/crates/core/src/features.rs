//! Morphological and contextual features of a token position, and the
//! sparse feature vocabulary shared by CRF training and decoding.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::corpus::{Tag, TaggedCorpus, Token, START};
use crate::error::{Error, Result};

/// A feature string of the form `name=value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureKey(String);

impl FeatureKey {
    fn new(name: &str, value: &str) -> Self {
        let mut s = String::with_capacity(name.len() + value.len() + 1);
        s.push_str(name);
        s.push('=');
        s.push_str(value);
        Self(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Which feature families [`extract`] emits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureConfig {
    pub use_word: bool,
    pub use_first_last: bool,
    pub use_hyphen: bool,
    pub use_digit_window: bool,
    pub use_alnum: bool,
    /// Prefix lengths in codepoints, each in 1..=3.
    pub prefix_lengths: Vec<usize>,
    /// Suffix lengths in codepoints, each in 1..=3.
    pub suffix_lengths: Vec<usize>,
    pub use_prev_tag: bool,
    pub use_prev2_tag: bool,
    pub min_count: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            use_word: true,
            use_first_last: true,
            use_hyphen: true,
            use_digit_window: true,
            use_alnum: true,
            prefix_lengths: vec![1, 2, 3],
            suffix_lengths: vec![1, 2, 3],
            use_prev_tag: true,
            use_prev2_tag: false,
            min_count: 1,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        _ => Err(Error::param(format!("{key}: expected true/false, got {value:?}"))),
    }
}

fn parse_lengths(key: &str, value: &str) -> Result<Vec<usize>> {
    let mut lengths = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.parse::<usize>() {
            Ok(n @ 1..=3) if !lengths.contains(&n) => lengths.push(n),
            _ => return Err(Error::param(format!("{key}: invalid length list {value:?}"))),
        }
    }
    lengths.sort_unstable();
    Ok(lengths)
}

impl FeatureConfig {
    /// Lexical identity only: current word, sentence boundaries and both
    /// previous-tag features, with no morphology.
    pub fn word_only() -> Self {
        Self {
            use_word: true,
            use_first_last: true,
            use_hyphen: false,
            use_digit_window: false,
            use_alnum: false,
            prefix_lengths: vec![],
            suffix_lengths: vec![],
            use_prev_tag: true,
            use_prev2_tag: true,
            min_count: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let any = self.use_word
            || self.use_first_last
            || self.use_hyphen
            || self.use_digit_window
            || self.use_alnum
            || !self.prefix_lengths.is_empty()
            || !self.suffix_lengths.is_empty()
            || self.use_prev_tag
            || self.use_prev2_tag;
        if !any {
            return Err(Error::param("feature config enables no feature family"));
        }
        if self.prefix_lengths.iter().chain(&self.suffix_lengths).any(|&n| !(1..=3).contains(&n)) {
            return Err(Error::param("affix lengths must lie in 1..=3"));
        }
        Ok(())
    }

    /// Flat `key=value` lines.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        format!(
            "use_word={}\nuse_first_last={}\nuse_hyphen={}\nuse_digit_window={}\nuse_alnum={}\n\
             prefix_lengths={}\nsuffix_lengths={}\nuse_prev_tag={}\nuse_prev2_tag={}\nmin_count={}\n",
            self.use_word,
            self.use_first_last,
            self.use_hyphen,
            self.use_digit_window,
            self.use_alnum,
            join(&self.prefix_lengths),
            join(&self.suffix_lengths),
            self.use_prev_tag,
            self.use_prev2_tag,
            self.min_count,
        )
    }

    /// Applies one `key=value` setting. Returns `Ok(false)` for keys that do
    /// not belong to the feature configuration.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool> {
        match key {
            "use_word" => self.use_word = parse_bool(key, value)?,
            "use_first_last" => self.use_first_last = parse_bool(key, value)?,
            "use_hyphen" => self.use_hyphen = parse_bool(key, value)?,
            "use_digit_window" => self.use_digit_window = parse_bool(key, value)?,
            "use_alnum" => self.use_alnum = parse_bool(key, value)?,
            "prefix_lengths" => self.prefix_lengths = parse_lengths(key, value)?,
            "suffix_lengths" => self.suffix_lengths = parse_lengths(key, value)?,
            "use_prev_tag" => self.use_prev_tag = parse_bool(key, value)?,
            "use_prev2_tag" => self.use_prev2_tag = parse_bool(key, value)?,
            "min_count" => {
                self.min_count = value
                    .parse()
                    .map_err(|_| Error::param(format!("min_count: invalid value {value:?}")))?
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::param(format!("expected key=value, got {line:?}")))?;
            if !config.set(key.trim(), value.trim())? {
                return Err(Error::param(format!("unknown feature setting {key:?}")));
            }
        }
        config.validate()?;
        Ok(config)
    }
}

const HYPHENS: [char; 7] = ['-', '\u{2010}', '\u{2011}', '\u{2012}', '\u{2013}', '\u{2212}', '\u{FE63}'];

fn is_digit_word(word: &str) -> bool {
    // `is_numeric` covers the Ethiopic numerals U+1369..U+137C
    word.chars().all(char::is_numeric)
}

fn tag_value(tag: Option<&Tag>) -> &str {
    tag.map_or(START, Tag::as_str)
}

pub(crate) fn prev_tag_key(tag: &str) -> FeatureKey {
    FeatureKey::new("t-1", tag)
}

pub(crate) fn prev2_tag_key(tag: &str) -> FeatureKey {
    FeatureKey::new("t-2", tag)
}

/// Features of position `i` that depend on the words alone.
pub(crate) fn observation_features(sentence: &[Token], i: usize, config: &FeatureConfig, out: &mut Vec<FeatureKey>) {
    let word = sentence[i].as_str();
    if config.use_word {
        out.push(FeatureKey::new("w0", word));
    }
    if config.use_first_last {
        if i == 0 {
            out.push(FeatureKey::new("first", "1"));
        }
        if i + 1 == sentence.len() {
            out.push(FeatureKey::new("last", "1"));
        }
    }
    if config.use_hyphen && word.contains(HYPHENS) {
        out.push(FeatureKey::new("hyphen", "1"));
    }
    if config.use_digit_window {
        let window = [(i.checked_sub(1), "digit-1"), (Some(i), "digit0"), (Some(i + 1), "digit+1")];
        for (pos, name) in window {
            if let Some(w) = pos.and_then(|p| sentence.get(p)) {
                if is_digit_word(w.as_str()) {
                    out.push(FeatureKey::new(name, "1"));
                }
            }
        }
    }
    if config.use_alnum && word.chars().all(char::is_alphanumeric) {
        out.push(FeatureKey::new("alnum", "1"));
    }
    if !config.prefix_lengths.is_empty() || !config.suffix_lengths.is_empty() {
        let chars: Vec<(usize, char)> = word.char_indices().collect();
        let n = chars.len();
        for &len in &config.prefix_lengths {
            if len <= n {
                let end = chars.get(len).map_or(word.len(), |&(b, _)| b);
                out.push(FeatureKey::new(&format!("pre{len}"), &word[..end]));
            }
        }
        for &len in &config.suffix_lengths {
            if len <= n {
                let start = chars[n - len].0;
                out.push(FeatureKey::new(&format!("suf{len}"), &word[start..]));
            }
        }
    }
}

/// Features of position `i` given the tags of the two preceding positions
/// (`None` stands for the sentence start).
pub fn extract(
    sentence: &[Token],
    i: usize,
    prev_tag: Option<&Tag>,
    prev2_tag: Option<&Tag>,
    config: &FeatureConfig,
) -> Result<Vec<FeatureKey>> {
    if i >= sentence.len() {
        return Err(Error::param(format!(
            "position {i} out of range for a sentence of length {}",
            sentence.len()
        )));
    }
    let mut out = Vec::with_capacity(16);
    observation_features(sentence, i, config, &mut out);
    if config.use_prev_tag {
        out.push(prev_tag_key(tag_value(prev_tag)));
    }
    if config.use_prev2_tag {
        out.push(prev2_tag_key(tag_value(prev2_tag)));
    }
    Ok(out)
}

/// Bidirectional map between feature keys and dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureIndex {
    keys: Vec<FeatureKey>,
    ids: HashMap<FeatureKey, usize>,
    frozen: bool,
}

impl FeatureIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `key` and returns its id; a frozen index only looks up.
    pub fn register(&mut self, key: FeatureKey) -> Option<usize> {
        if let Some(&id) = self.ids.get(&key) {
            return Some(id);
        }
        if self.frozen {
            return None;
        }
        let id = self.keys.len();
        self.keys.push(key.clone());
        self.ids.insert(key, id);
        Some(id)
    }

    pub fn get(&self, key: &str) -> Option<usize> {
        // FeatureKey borrows as str through its inner String
        self.ids.get(key).copied()
    }

    pub fn key(&self, id: usize) -> &FeatureKey {
        &self.keys[id]
    }

    pub fn keys(&self) -> &[FeatureKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Rebuilds a frozen index from keys listed in id order.
    pub fn from_keys(keys: Vec<String>) -> Result<Self> {
        let mut index = Self::new();
        for key in keys {
            let key = FeatureKey(key);
            if index.ids.contains_key(&key) {
                return Err(Error::format(format!("duplicate feature key {key}")));
            }
            index.register(key);
        }
        index.freeze();
        Ok(index)
    }
}

impl std::borrow::Borrow<str> for FeatureKey {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Counts the features of every gold position (previous tags taken from the
/// gold annotation) and registers those seen at least `max(1, min_count)`
/// times, ids in lexicographic key order. The result is frozen.
pub fn build_index(corpus: &TaggedCorpus, config: &FeatureConfig) -> FeatureIndex {
    let mut counts: BTreeMap<FeatureKey, usize> = BTreeMap::new();
    for sentence in corpus.sentences() {
        let tokens = sentence.tokens();
        let tags = sentence.tags();
        for i in 0..tokens.len() {
            let prev = i.checked_sub(1).map(|p| &tags[p]);
            let prev2 = i.checked_sub(2).map(|p| &tags[p]);
            for key in extract(tokens, i, prev, prev2, config).expect("position in range") {
                *counts.entry(key).or_default() += 1;
            }
        }
    }
    let threshold = config.min_count.max(1);
    let mut index = FeatureIndex::new();
    for (key, count) in counts {
        if count >= threshold {
            index.register(key);
        }
    }
    index.freeze();
    index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_vertical;

    fn toks(words: &[&str]) -> Vec<Token> {
        words.iter().map(|w| Token::new(*w).unwrap()).collect()
    }

    fn keys(v: &[FeatureKey]) -> Vec<&str> {
        v.iter().map(FeatureKey::as_str).collect()
    }

    #[test]
    fn hyphenated_single_word() {
        let s = toks(&["ab-cd"]);
        let f = extract(&s, 0, None, None, &FeatureConfig::default()).unwrap();
        let f = keys(&f);
        for k in ["w0=ab-cd", "first=1", "last=1", "hyphen=1", "pre1=a", "pre2=ab", "suf1=d", "suf2=cd", "t-1=START"] {
            assert!(f.contains(&k), "missing {k} in {f:?}");
        }
        assert!(!f.contains(&"alnum=1"));
    }

    #[test]
    fn digit_window() {
        let s = toks(&["12", "x"]);
        let c = FeatureConfig::default();
        assert!(keys(&extract(&s, 0, None, None, &c).unwrap()).contains(&"digit0=1"));
        let f1 = extract(&s, 1, None, None, &c).unwrap();
        assert!(keys(&f1).contains(&"digit-1=1"));
        assert!(!keys(&f1).contains(&"digit0=1"));
        let s = toks(&["ሰው", "፲፪"]);
        assert!(keys(&extract(&s, 0, None, None, &c).unwrap()).contains(&"digit+1=1"));
    }

    #[test]
    fn single_codepoint_word() {
        let f = extract(&toks(&["ነ"]), 0, None, None, &FeatureConfig::default()).unwrap();
        let f = keys(&f);
        assert!(f.contains(&"pre1=ነ") && f.contains(&"suf1=ነ"));
        assert!(!f.iter().any(|k| k.starts_with("pre2") || k.starts_with("pre3")));
        assert!(!f.iter().any(|k| k.starts_with("suf2") || k.starts_with("suf3")));
    }

    #[test]
    fn ethiopic_affixes_are_codepoints() {
        let f = extract(&toks(&["ኢትዮጵያ"]), 0, None, None, &FeatureConfig::default()).unwrap();
        let f = keys(&f);
        assert!(f.contains(&"suf1=ያ"));
        assert!(f.contains(&"suf3=ዮጵያ"));
        assert!(f.contains(&"pre2=ኢት"));
        assert!(f.contains(&"alnum=1"));
    }

    #[test]
    fn tag_context() {
        let s = toks(&["a", "b", "c"]);
        let n = Tag::new("N").unwrap();
        let v = Tag::new("V").unwrap();
        let mut c = FeatureConfig::default();
        c.use_prev2_tag = true;
        let f = extract(&s, 2, Some(&v), Some(&n), &c).unwrap();
        assert!(keys(&f).ends_with(&["t-1=V", "t-2=N"]));
        let f = extract(&s, 1, Some(&n), None, &c).unwrap();
        assert!(keys(&f).ends_with(&["t-1=N", "t-2=START"]));
    }

    #[test]
    fn out_of_range() {
        assert!(extract(&toks(&["a"]), 1, None, None, &FeatureConfig::default()).is_err());
    }

    #[test]
    fn at_most_sixteen_keys() {
        let mut c = FeatureConfig::default();
        c.use_prev2_tag = true;
        let s = toks(&["1", "12-3", "4"]);
        // a middle word can't be both first and last; a single-word sentence can
        for (s, i) in [(s.clone(), 1), (toks(&["12-3"]), 0)] {
            assert!(extract(&s, i, None, None, &c).unwrap().len() <= 16);
        }
    }

    #[test]
    fn index_word_only() {
        let corpus = parse_vertical("a\tN\n").unwrap();
        let index = build_index(&corpus, &FeatureConfig::word_only());
        let got: Vec<_> = index.keys().iter().map(FeatureKey::as_str).collect();
        assert_eq!(got, ["first=1", "last=1", "t-1=START", "t-2=START", "w0=a"]);
        assert!(index.is_frozen());
    }

    #[test]
    fn min_count_drops_singletons() {
        let corpus = parse_vertical("a\tN\nb\tN\n\na\tN\n").unwrap();
        let mut config = FeatureConfig::word_only();
        config.min_count = 2;
        let index = build_index(&corpus, &config);
        assert!(index.get("w0=a").is_some());
        assert!(index.get("w0=b").is_none());
    }

    #[test]
    fn frozen_index_does_not_grow() {
        let corpus = parse_vertical("a\tN\n").unwrap();
        let mut index = build_index(&corpus, &FeatureConfig::default());
        let n = index.len();
        assert_eq!(index.register(FeatureKey::new("w0", "zzz")), None);
        assert_eq!(index.len(), n);
    }

    #[test]
    fn config_text_round_trip() {
        let mut c = FeatureConfig::default();
        c.prefix_lengths = vec![1, 3];
        c.min_count = 4;
        c.use_alnum = false;
        assert_eq!(FeatureConfig::from_text(&c.to_text()).unwrap(), c);
        assert!(FeatureConfig::from_text("bogus=1").is_err());
        assert!(FeatureConfig::from_text("prefix_lengths=4").is_err());
    }

    #[test]
    fn nothing_enabled_is_invalid() {
        let c = FeatureConfig {
            use_word: false,
            use_first_last: false,
            use_hyphen: false,
            use_digit_window: false,
            use_alnum: false,
            prefix_lengths: vec![],
            suffix_lengths: vec![],
            use_prev_tag: false,
            use_prev2_tag: false,
            min_count: 1,
        };
        assert!(c.validate().is_err());
    }
}
