//! Corpus data model: tokens, tags, tag inventories and tagged sentences,
//! together with the file formats, raw-text tokenizer, tagset remapping,
//! fold splitting and corpus statistics built on top of them.

mod folds;
mod format;
mod remap;
mod stats;
mod tokenize;

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

pub use folds::{kfold, split_known_unknown, FoldSpec, TokenPos, TokenSplit};
pub use format::{parse_slash, parse_tagset, parse_vertical, write_slash, write_tagset, write_vertical};
pub use remap::{parse_remap_rules, remap, RemapRule, SuffixCondition};
pub use stats::{stats, CorpusStats};
pub use tokenize::tokenize_raw;

/// Sentinel for positions before the start of a sentence.
pub const START: &str = "START";
/// Sentinel for positions after the end of a sentence.
pub const END: &str = "END";

/// A single word of a sentence. Never empty and never contains whitespace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn new(surface: impl Into<String>) -> Result<Self> {
        let surface = surface.into();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(surface));
        }
        Ok(Self(surface))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of Unicode codepoints.
    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Token {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A part-of-speech label such as `N`, `NS` or `PUNC`.
///
/// Tags are uppercase ASCII letters optionally followed by digits or
/// hyphens. The sentinel names `START` and `END` are reserved.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(String);

impl Tag {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let valid_head = chars.next().is_some_and(|c| c.is_ascii_uppercase());
        let valid_tail = chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '-');
        if !valid_head || !valid_tail || name == START || name == END {
            return Err(Error::InvalidTag(name));
        }
        Ok(Self(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Tag {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// An ordered, duplicate-free list of tags. The position of a tag in the
/// list is its integer id.
#[derive(Clone, Debug)]
pub struct TagInventory {
    name: String,
    tags: Vec<Tag>,
    ids: HashMap<Tag, usize>,
}

impl TagInventory {
    pub fn new(name: impl Into<String>, tags: Vec<Tag>) -> Result<Self> {
        if tags.is_empty() {
            return Err(Error::InvalidInventory("inventory has no tags".into()));
        }
        let mut ids = HashMap::with_capacity(tags.len());
        for (i, tag) in tags.iter().enumerate() {
            if ids.insert(tag.clone(), i).is_some() {
                return Err(Error::InvalidInventory(format!("duplicate tag {tag}")));
            }
        }
        Ok(Self {
            name: name.into(),
            tags,
            ids,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn id(&self, tag: &str) -> Option<usize> {
        self.ids.get(tag).copied()
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.ids.contains_key(tag)
    }

    pub fn tag(&self, id: usize) -> &Tag {
        &self.tags[id]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl PartialEq for TagInventory {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.tags == other.tags
    }
}

impl Eq for TagInventory {}

/// A sentence with one tag per token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSentence {
    tokens: Vec<Token>,
    tags: Vec<Tag>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<Token>, tags: Vec<Tag>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::param("sentence has no tokens"));
        }
        if tokens.len() != tags.len() {
            return Err(Error::param(format!(
                "sentence has {} tokens but {} tags",
                tokens.len(),
                tags.len()
            )));
        }
        Ok(Self { tokens, tags })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Token, &Tag)> {
        self.tokens.iter().zip(&self.tags)
    }

    /// Same tokens, different tags.
    pub fn retagged(&self, tags: Vec<Tag>) -> Result<Self> {
        Self::new(self.tokens.clone(), tags)
    }
}

/// A list of tagged sentences over a tag inventory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedCorpus {
    sentences: Vec<TaggedSentence>,
    inventory: TagInventory,
}

impl TaggedCorpus {
    pub fn new(sentences: Vec<TaggedSentence>, inventory: TagInventory) -> Result<Self> {
        if sentences.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        for sentence in &sentences {
            if let Some(tag) = sentence.tags().iter().find(|t| !inventory.contains(t.as_str())) {
                return Err(Error::InvalidInventory(format!(
                    "tag {tag} is not a member of inventory {:?}",
                    inventory.name()
                )));
            }
        }
        Ok(Self {
            sentences,
            inventory,
        })
    }

    /// Builds a corpus whose inventory lists the distinct tags in order of
    /// first appearance.
    pub fn with_inferred_inventory(sentences: Vec<TaggedSentence>, name: &str) -> Result<Self> {
        if sentences.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut seen = HashSet::new();
        let mut tags = Vec::new();
        for tag in sentences.iter().flat_map(|s| s.tags()) {
            if seen.insert(tag) {
                tags.push(tag.clone());
            }
        }
        let inventory = TagInventory::new(name, tags)?;
        Ok(Self {
            sentences,
            inventory,
        })
    }

    pub fn sentences(&self) -> &[TaggedSentence] {
        &self.sentences
    }

    pub fn inventory(&self) -> &TagInventory {
        &self.inventory
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(TaggedSentence::len).sum()
    }

    /// Sub-corpus made of the given sentence indices, keeping the inventory.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let sentences = indices.iter().map(|&i| self.sentences[i].clone()).collect();
        Self::new(sentences, self.inventory.clone())
    }

    /// Tag ids of every sentence, in inventory order.
    pub fn tag_ids(&self) -> Vec<Vec<usize>> {
        self.sentences
            .iter()
            .map(|s| {
                s.tags()
                    .iter()
                    .map(|t| self.inventory.id(t.as_str()).expect("tag in inventory"))
                    .collect()
            })
            .collect()
    }
}
