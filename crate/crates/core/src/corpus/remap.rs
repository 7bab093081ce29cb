use std::fmt;

use super::{Tag, TagInventory, TaggedCorpus, TaggedSentence, Token};
use crate::error::{Error, Result};

/// Condition a token surface must meet for a remap rule to fire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuffixCondition {
    Always,
    /// Surface ends with this string, compared by codepoints.
    ///
    /// A suffix that starts with an Ethiopic vowel carrier (the `አ` row,
    /// e.g. `ኦች`) also matches when the vowel has fused with the preceding
    /// consonant into a single syllable of the same vowel order, so `ኦች`
    /// matches `ቤቶች` (`ቤት` + `ኦች`).
    Suffix(String),
}

const ETHIOPIC_SYLLABLES: std::ops::RangeInclusive<u32> = 0x1200..=0x135A;
const VOWEL_CARRIERS: std::ops::RangeInclusive<u32> = 0x12A0..=0x12A7;

fn vowel_order(c: char) -> Option<u32> {
    let cp = c as u32;
    ETHIOPIC_SYLLABLES.contains(&cp).then_some((cp - 0x1200) % 8)
}

impl SuffixCondition {
    pub fn matches(&self, token: &Token) -> bool {
        match self {
            Self::Always => true,
            Self::Suffix(suffix) => {
                let surface = token.as_str();
                if surface.ends_with(suffix.as_str()) {
                    return true;
                }
                let mut pattern = suffix.chars();
                let Some(carrier) = pattern.next().filter(|c| VOWEL_CARRIERS.contains(&(*c as u32))) else {
                    return false;
                };
                let rest = pattern.as_str();
                let Some(stem) = surface.strip_suffix(rest) else {
                    return false;
                };
                let mut stem = stem.chars();
                match (stem.next_back(), stem.next_back()) {
                    (Some(fused), Some(_)) => vowel_order(fused) == vowel_order(carrier),
                    _ => false,
                }
            }
        }
    }
}

/// Rewrites `source` to `target` when the token satisfies `condition`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemapRule {
    pub source: Tag,
    pub condition: SuffixCondition,
    pub target: Tag,
}

impl fmt::Display for RemapRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pattern = match &self.condition {
            SuffixCondition::Always => "*",
            SuffixCondition::Suffix(s) => s.as_str(),
        };
        write!(f, "{} {} -> {}", self.source, pattern, self.target)
    }
}

/// Parses a rule file of `SOURCE<TAB>suffix-or-*<TAB>TARGET` lines. A
/// leading `*` on a suffix is ignored, so `*ዎች` and `ዎች` are equivalent.
pub fn parse_remap_rules(text: &str) -> Result<Vec<RemapRule>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [source, pattern, target] = fields[..] else {
            return Err(Error::parse(i + 1, 1, "expected `SOURCE<TAB>pattern<TAB>TARGET`"));
        };
        let source = Tag::new(source).map_err(|_| Error::parse(i + 1, 1, format!("invalid source tag {source:?}")))?;
        let target = Tag::new(target).map_err(|_| Error::parse(i + 1, 1, format!("invalid target tag {target:?}")))?;
        let condition = match pattern.trim_start_matches('*') {
            "" => SuffixCondition::Always,
            suffix => SuffixCondition::Suffix(suffix.to_string()),
        };
        rules.push(RemapRule {
            source,
            condition,
            target,
        });
    }
    Ok(rules)
}

/// Rewrites every tag of `corpus` with the first matching rule; pairs that
/// no rule matches keep their tag. The result carries the `target`
/// inventory.
pub fn remap(corpus: &TaggedCorpus, rules: &[RemapRule], target: &TagInventory) -> Result<TaggedCorpus> {
    let mut sentences = Vec::with_capacity(corpus.len());
    for sentence in corpus.sentences() {
        let mut tags = Vec::with_capacity(sentence.len());
        for (token, tag) in sentence.pairs() {
            let rule = rules.iter().find(|r| r.source == *tag && r.condition.matches(token));
            let new_tag = rule.map_or(tag, |r| &r.target);
            if !target.contains(new_tag.as_str()) {
                let rule = rule.map_or_else(|| format!("identity {tag}"), ToString::to_string);
                return Err(Error::InventoryViolation {
                    rule,
                    tag: new_tag.to_string(),
                });
            }
            tags.push(new_tag.clone());
        }
        sentences.push(TaggedSentence::new(sentence.tokens().to_vec(), tags)?);
    }
    TaggedCorpus::new(sentences, target.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_vertical;

    fn inventory(tags: &[&str]) -> TagInventory {
        TagInventory::new("t", tags.iter().map(|t| Tag::new(*t).unwrap()).collect()).unwrap()
    }

    fn tags_of(c: &TaggedCorpus) -> Vec<&str> {
        c.sentences().iter().flat_map(|s| s.tags()).map(Tag::as_str).collect()
    }

    #[test]
    fn plural_suffix_rules() {
        let corpus = parse_vertical("ቤቶች\tN\nቤት\tN\nልጆች\tN\nበሮች\tN\nእናቶች\tN\nአባቶችን\tN\nቤቶች\tV\n").unwrap();
        let rules = parse_remap_rules("N\tዎች\tNS\nN\tኦች\tNS\n").unwrap();
        let out = remap(&corpus, &rules, &inventory(&["N", "NS", "V"])).unwrap();
        assert_eq!(tags_of(&out), ["NS", "N", "NS", "NS", "NS", "N", "V"]);
    }

    #[test]
    fn vowel_carrier_suffix_matching() {
        let cond = SuffixCondition::Suffix("ኦች".into());
        let tok = |s: &str| Token::new(s).unwrap();
        assert!(cond.matches(&tok("ቤቶች")));
        assert!(cond.matches(&tok("ኦች")));
        assert!(!cond.matches(&tok("ቶች")));
        assert!(!cond.matches(&tok("ቤታች")));
        let lit = SuffixCondition::Suffix("ዎች".into());
        assert!(lit.matches(&tok("ቢሮዎች")));
        assert!(!lit.matches(&tok("ቤቶች")));
    }

    #[test]
    fn empty_rules_relabel_inventory_only() {
        let corpus = parse_vertical("a\tN\nb\tV\n\nc\tN\n").unwrap();
        let target = inventory(&["N", "V", "NS"]);
        let out = remap(&corpus, &[], &target).unwrap();
        assert_eq!(out.inventory(), &target);
        for (a, b) in corpus.sentences().iter().zip(out.sentences()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn violation_names_the_rule() {
        let corpus = parse_vertical("ልጆች\tN\n").unwrap();
        let rules = parse_remap_rules("N\t*\tNX\n").unwrap();
        match remap(&corpus, &rules, &inventory(&["N"])) {
            Err(Error::InventoryViolation { rule, tag }) => {
                assert_eq!(rule, "N * -> NX");
                assert_eq!(tag, "NX");
            }
            other => panic!("{other:?}"),
        }
        match remap(&corpus, &[], &inventory(&["V"])) {
            Err(Error::InventoryViolation { rule, .. }) => assert_eq!(rule, "identity N"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn first_match_wins() {
        let corpus = parse_vertical("ልጆች\tN\n").unwrap();
        let rules = parse_remap_rules("N\tች\tNS\nN\t*\tNP\n").unwrap();
        let out = remap(&corpus, &rules, &inventory(&["N", "NS", "NP"])).unwrap();
        assert_eq!(out.sentences()[0].tags()[0].as_str(), "NS");
    }

    #[test]
    fn rule_file_errors() {
        assert!(parse_remap_rules("N\tx\n").is_err());
        assert!(parse_remap_rules("n\tx\tNS\n").is_err());
        assert_eq!(parse_remap_rules("# c\n\nN\t*ዎች\tNS\n").unwrap()[0].condition, SuffixCondition::Suffix("ዎች".into()));
    }
}
