use super::{Tag, TaggedCorpus};

/// Tag distribution of a corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusStats {
    pub sentences: usize,
    pub tokens: usize,
    /// Tags that occur at least once, by descending count; equal counts keep
    /// inventory order.
    pub counts: Vec<(Tag, usize)>,
}

impl CorpusStats {
    pub fn count(&self, tag: &str) -> usize {
        self.counts.iter().find(|(t, _)| t.as_str() == tag).map_or(0, |(_, c)| *c)
    }

    /// `tag,count` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tag,count\n");
        for (tag, count) in &self.counts {
            out.push_str(&format!("{tag},{count}\n"));
        }
        out
    }
}

pub fn stats(corpus: &TaggedCorpus) -> CorpusStats {
    let inventory = corpus.inventory();
    let mut per_tag = vec![0usize; inventory.len()];
    for ids in corpus.tag_ids() {
        for id in ids {
            per_tag[id] += 1;
        }
    }
    let mut order: Vec<usize> = (0..inventory.len()).filter(|&i| per_tag[i] > 0).collect();
    order.sort_by(|&a, &b| per_tag[b].cmp(&per_tag[a]).then(a.cmp(&b)));
    CorpusStats {
        sentences: corpus.len(),
        tokens: corpus.token_count(),
        counts: order.into_iter().map(|i| (inventory.tag(i).clone(), per_tag[i])).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_vertical, remap, TagInventory};

    #[test]
    fn counts_and_csv() {
        let c = parse_vertical("a\tN\nb\tN\nc\tV\n").unwrap();
        let s = stats(&c);
        assert_eq!(s.tokens, 3);
        assert_eq!(s.sentences, 1);
        assert_eq!(s.count("N"), 2);
        assert_eq!(s.count("V"), 1);
        assert_eq!(s.to_csv(), "tag,count\nN,2\nV,1\n");
    }

    #[test]
    fn unused_tags_absent() {
        let c = parse_vertical("a\tN\n").unwrap();
        let inv = TagInventory::new("x", vec![Tag::new("V").unwrap(), Tag::new("N").unwrap()]).unwrap();
        let c = remap(&c, &[], &inv).unwrap();
        assert_eq!(stats(&c).to_csv(), "tag,count\nN,1\n");
    }
}
