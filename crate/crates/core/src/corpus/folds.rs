use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TaggedCorpus;
use crate::error::{Error, Result};

/// Assignment of sentence indices to cross-validation folds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldSpec {
    k: usize,
    seed: u64,
    assignment: Vec<usize>,
}

impl FoldSpec {
    /// Shuffles `0..n` with a ChaCha8 stream seeded by `seed` and deals the
    /// permuted indices round-robin into `k` folds.
    pub fn new(n: usize, k: usize, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::param(format!("k must be at least 2, got {k}")));
        }
        if k > n {
            return Err(Error::param(format!("k={k} exceeds the number of sentences ({n})")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut assignment = vec![0; n];
        for (slot, &sentence) in order.iter().enumerate() {
            assignment[sentence] = slot % k;
        }
        Ok(Self { k, seed, assignment })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn fold_of(&self, sentence: usize) -> usize {
        self.assignment[sentence]
    }

    /// Sentence indices of fold `fold`, ascending.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    /// Sentence indices outside fold `fold`, ascending.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

pub fn kfold(corpus: &TaggedCorpus, k: usize, seed: u64) -> Result<FoldSpec> {
    FoldSpec::new(corpus.len(), k, seed)
}

/// A token position: sentence index and index within the sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenPos {
    pub sentence: usize,
    pub position: usize,
}

/// Test-token positions split by whether their surface occurs in training.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSplit {
    pub known: Vec<TokenPos>,
    pub unknown: Vec<TokenPos>,
}

impl TokenSplit {
    pub fn total(&self) -> usize {
        self.known.len() + self.unknown.len()
    }
}

pub fn split_known_unknown(train: &TaggedCorpus, test: &TaggedCorpus) -> TokenSplit {
    let vocabulary: HashSet<&str> = train
        .sentences()
        .iter()
        .flat_map(|s| s.tokens())
        .map(|t| t.as_str())
        .collect();
    let mut split = TokenSplit::default();
    for (s, sentence) in test.sentences().iter().enumerate() {
        for (p, token) in sentence.tokens().iter().enumerate() {
            let pos = TokenPos {
                sentence: s,
                position: p,
            };
            if vocabulary.contains(token.as_str()) {
                split.known.push(pos);
            } else {
                split.unknown.push(pos);
            }
        }
    }
    split
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_vertical;

    #[test]
    fn parameter_errors() {
        assert!(FoldSpec::new(10, 1, 0).is_err());
        assert!(FoldSpec::new(3, 4, 0).is_err());
    }

    #[test]
    fn two_folds_of_three() {
        let mut sizes = FoldSpec::new(3, 2, 7).unwrap().fold_sizes();
        sizes.sort();
        assert_eq!(sizes, [1, 2]);
    }

    #[test]
    fn equal_split_of_elrcqb_sentence_count() {
        let spec = FoldSpec::new(33_940, 10, 42).unwrap();
        assert!(spec.fold_sizes().iter().all(|&s| s == 3_394));
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = FoldSpec::new(100, 10, 42).unwrap();
        assert_eq!(a, FoldSpec::new(100, 10, 42).unwrap());
        assert_ne!(a.assignment(), FoldSpec::new(100, 10, 43).unwrap().assignment());
    }

    #[test]
    fn known_unknown() {
        let train = parse_vertical("abc\tN\n").unwrap();
        let test = parse_vertical("abc\tN\nxyz\tN\n").unwrap();
        let split = split_known_unknown(&train, &test);
        assert_eq!(split.known, [TokenPos { sentence: 0, position: 0 }]);
        assert_eq!(split.unknown, [TokenPos { sentence: 0, position: 1 }]);
        let all = split_known_unknown(&test, &test);
        assert_eq!(all.known.len(), 2);
        assert!(all.unknown.is_empty());
    }
}
