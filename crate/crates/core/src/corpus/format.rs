use super::{Tag, TagInventory, TaggedCorpus, TaggedSentence, Token};
use crate::error::{Error, Result};

/// Inventory name given to corpora whose tagset is inferred while parsing.
const INFERRED: &str = "corpus";

fn parse_pair(token: &str, tag: &str, line: usize, column: usize) -> Result<(Token, Tag)> {
    if token.is_empty() {
        return Err(Error::parse(line, column, "empty token"));
    }
    if tag.is_empty() {
        return Err(Error::parse(line, column, "empty tag"));
    }
    let token = Token::new(token).map_err(|_| Error::parse(line, column, format!("invalid token {token:?}")))?;
    let tag = Tag::new(tag).map_err(|_| Error::parse(line, column, format!("invalid tag {tag:?}")))?;
    Ok((token, tag))
}

fn finish_sentence(tokens: &mut Vec<Token>, tags: &mut Vec<Tag>, out: &mut Vec<TaggedSentence>) {
    if !tokens.is_empty() {
        let s = TaggedSentence::new(std::mem::take(tokens), std::mem::take(tags)).expect("non-empty, equal lengths");
        out.push(s);
    }
}

/// Parses the vertical format: one `token<TAB>tag` pair per line, sentences
/// separated by blank lines.
pub fn parse_vertical(text: &str) -> Result<TaggedCorpus> {
    let mut sentences = Vec::new();
    let mut tokens = Vec::new();
    let mut tags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            finish_sentence(&mut tokens, &mut tags, &mut sentences);
            continue;
        }
        let Some((token, tag)) = line.split_once('\t') else {
            return Err(Error::parse(i + 1, 1, "expected `token<TAB>tag`"));
        };
        let tag_column = token.chars().count() + 2;
        let (token, tag) = parse_pair(token, tag, i + 1, if token.is_empty() { 1 } else { tag_column })?;
        tokens.push(token);
        tags.push(tag);
    }
    finish_sentence(&mut tokens, &mut tags, &mut sentences);
    TaggedCorpus::with_inferred_inventory(sentences, INFERRED)
}

/// Parses the slash format: one sentence per line, whitespace-separated
/// `word/TAG` items. The last `/` of an item separates word from tag.
pub fn parse_slash(text: &str) -> Result<TaggedCorpus> {
    let mut sentences = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut tokens = Vec::new();
        let mut tags = Vec::new();
        let mut column = 1;
        let mut rest = raw;
        loop {
            let trimmed = rest.trim_start();
            column += rest[..rest.len() - trimmed.len()].chars().count();
            if trimmed.is_empty() {
                break;
            }
            let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
            let item = &trimmed[..end];
            let Some((word, tag)) = item.rsplit_once('/') else {
                return Err(Error::parse(i + 1, column, format!("item {item:?} has no `/` separator")));
            };
            let (token, tag) = parse_pair(word, tag, i + 1, column)?;
            tokens.push(token);
            tags.push(tag);
            column += item.chars().count();
            rest = &trimmed[end..];
        }
        finish_sentence(&mut tokens, &mut tags, &mut sentences);
    }
    TaggedCorpus::with_inferred_inventory(sentences, INFERRED)
}

pub fn write_vertical(corpus: &TaggedCorpus) -> String {
    let mut out = String::new();
    for sentence in corpus.sentences() {
        for (token, tag) in sentence.pairs() {
            out.push_str(token.as_str());
            out.push('\t');
            out.push_str(tag.as_str());
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

pub fn write_slash(corpus: &TaggedCorpus) -> String {
    let mut out = String::new();
    for sentence in corpus.sentences() {
        for (i, (token, tag)) in sentence.pairs().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(token.as_str());
            out.push('/');
            out.push_str(tag.as_str());
        }
        out.push('\n');
    }
    out
}

/// Parses a tagset file: one tag per line, `#` starts a comment.
pub fn parse_tagset(text: &str, name: &str) -> Result<TagInventory> {
    let mut tags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tag = Tag::new(line).map_err(|_| Error::parse(i + 1, 1, format!("invalid tag {line:?}")))?;
        if tags.contains(&tag) {
            return Err(Error::parse(i + 1, 1, format!("duplicate tag {line:?}")));
        }
        tags.push(tag);
    }
    TagInventory::new(name, tags)
}

pub fn write_tagset(inventory: &TagInventory) -> String {
    let mut out = format!("# {}\n", inventory.name());
    for tag in inventory.tags() {
        out.push_str(tag.as_str());
        out.push('\n');
    }
    out
}
