//! Versioned text container used by every model file.
//!
//! ```text
//! seqtag-model 1
//! kind crf
//! @ inventory 3
//! ...three lines...
//! @ weights 2
//! ...two lines...
//! ```
//!
//! Each section header announces its line count, so section bodies may hold
//! arbitrary text (including lines that look like headers).

use crate::corpus::{Tag, TagInventory};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "seqtag-model";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelFile {
    kind: String,
    sections: Vec<(String, Vec<String>)>,
}

impl ModelFile {
    pub fn new(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            sections: Vec::new(),
        }
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn push(&mut self, name: &str, lines: Vec<String>) {
        debug_assert!(lines.iter().all(|l| !l.contains('\n')));
        self.sections.push((name.to_string(), lines));
    }

    pub fn section(&self, name: &str) -> Result<&[String]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, lines)| lines.as_slice())
            .ok_or_else(|| Error::format(format!("missing section `{name}`")))
    }

    /// Parses the `key=value` lines of a section.
    pub fn settings(&self, name: &str) -> Result<Vec<(&str, &str)>> {
        self.section(name)?
            .iter()
            .map(|l| {
                l.split_once('=')
                    .ok_or_else(|| Error::format(format!("section `{name}`: expected key=value, got {l:?}")))
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{MAGIC} {FORMAT_VERSION}\nkind {}\n", self.kind);
        for (name, lines) in &self.sections {
            out.push_str(&format!("@ {name} {}\n", lines.len()));
            for line in lines {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let version = header
            .strip_prefix(MAGIC)
            .map(str::trim)
            .ok_or_else(|| Error::format("not a seqtag model file"))?;
        if version != FORMAT_VERSION.to_string() {
            return Err(Error::format(format!(
                "unsupported model format version {version} (this build reads version {FORMAT_VERSION})"
            )));
        }
        let kind = lines
            .next()
            .and_then(|l| l.strip_prefix("kind "))
            .ok_or_else(|| Error::format("missing model kind"))?;
        let mut file = Self::new(kind.trim());
        while let Some(line) = lines.next() {
            if line.is_empty() {
                continue;
            }
            let mut parts = line.strip_prefix("@ ").unwrap_or_default().split(' ');
            let (Some(name), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::format(format!("expected section header, got {line:?}")));
            };
            let count: usize = count
                .parse()
                .map_err(|_| Error::format(format!("bad line count in header {line:?}")))?;
            let mut body = Vec::with_capacity(count);
            for _ in 0..count {
                let l = lines
                    .next()
                    .ok_or_else(|| Error::format(format!("section `{name}` is truncated")))?;
                body.push(l.to_string());
            }
            file.push(name, body);
        }
        Ok(file)
    }
}

/// Decimal with 17 significant digits; parses back to the same bits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::format(format!("invalid number {s:?}")))
}

pub fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::format(format!("invalid count {s:?}")))
}

pub fn setting<'a>(settings: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    settings
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::format(format!("missing setting `{key}`")))
}

/// Inventory section body: the name, then one tag per line.
pub fn inventory_lines(inventory: &TagInventory) -> Vec<String> {
    std::iter::once(inventory.name().to_string())
        .chain(inventory.tags().iter().map(ToString::to_string))
        .collect()
}

pub fn parse_inventory(lines: &[String]) -> Result<TagInventory> {
    let (name, tags) = lines.split_first().ok_or_else(|| Error::format("empty inventory section"))?;
    let tags = tags.iter().map(|t| Tag::new(t.as_str())).collect::<Result<Vec<_>>>()?;
    TagInventory::new(name.as_str(), tags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_tricky_lines() {
        let mut f = ModelFile::new("brill");
        f.push("baseline", vec!["@ fake 3".into(), "[x]\tN".into()]);
        f.push("empty", vec![]);
        let parsed = ModelFile::parse(&f.to_text()).unwrap();
        assert_eq!(parsed, f);
        assert_eq!(parsed.section("baseline").unwrap()[0], "@ fake 3");
        assert!(parsed.section("nope").is_err());
    }

    #[test]
    fn version_mismatch() {
        let err = ModelFile::parse("seqtag-model 99\nkind crf\n").unwrap_err();
        assert!(err.to_string().contains("version"));
        assert!(ModelFile::parse("hello\n").is_err());
    }

    #[test]
    fn floats_round_trip_bitwise() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 123456.789, -0.0, f64::MIN_POSITIVE] {
            assert_eq!(parse_f64(&fmt_f64(v)).unwrap().to_bits(), v.to_bits());
        }
    }
}
