use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::corpus::{parse_vertical, TaggedSentence};

fn corpus(text: &str) -> TaggedCorpus {
    parse_vertical(text).unwrap()
}

fn tokens(words: &[&str]) -> Vec<Token> {
    words.iter().map(|w| Token::new(*w).unwrap()).collect()
}

fn random_corpus(rng: &mut ChaCha8Rng, sentences: usize, max_len: usize, vocab: usize, tags: usize) -> TaggedCorpus {
    let tag_names: Vec<Tag> = (0..tags).map(|i| Tag::new(format!("T{i}")).unwrap()).collect();
    let sentences = (0..sentences)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            let toks = (0..len)
                .map(|_| Token::new(format!("w{}", rng.random_range(0..vocab))).unwrap())
                .collect();
            let tg = (0..len).map(|_| tag_names[rng.random_range(0..tags)].clone()).collect();
            TaggedSentence::new(toks, tg).unwrap()
        })
        .collect();
    TaggedCorpus::new(sentences, TagInventory::new("rand", tag_names).unwrap()).unwrap()
}

/// Scores a tag sequence straight from the model's probability tables.
fn path_score(model: &TntModel, words: &[Token], tags: &[usize]) -> f64 {
    let (start, end) = (model.start_symbol(), model.end_symbol());
    let (mut a, mut b) = (start, start);
    let mut score = 0.0;
    for (w, &c) in words.iter().zip(tags) {
        score += model.transition_prob(a, b, c).ln() + model.log_emission(w.as_str(), c);
        (a, b) = (b, c);
    }
    score + model.transition_prob(a, b, end).ln()
}

fn exhaustive(model: &TntModel, words: &[Token]) -> (Vec<usize>, f64) {
    let t = model.inventory().len();
    let mut best = (vec![], f64::NEG_INFINITY);
    let mut seq = vec![0; words.len()];
    loop {
        let s = path_score(model, words, &seq);
        if s > best.1 {
            best = (seq.clone(), s);
        }
        let mut i = 0;
        while i < seq.len() && seq[i] + 1 == t {
            seq[i] = 0;
            i += 1;
        }
        if i == seq.len() {
            return best;
        }
        seq[i] += 1;
    }
}

#[test]
fn deleted_interpolation_hand_trace() {
    // Trigram counts, with S the start pad and E the end closure:
    //   SSN 2, SNV 1, NVE 2, SNN 1, NNV 1, SSV 1, SVE 1
    // Leave-one-out ratios (unigram, bigram, trigram) and winner:
    //   SSN (2/8, 1/2, 1/2) bigram +2   SNV (2/8, 1/2, 0) bigram +1
    //   NVE (2/8, 1, 1)     bigram +2   SNN (2/8, 0, 0)   unigram +1
    //   NNV (2/8, 1/2, 0)   bigram +1   SSV (2/8, 0, 0)   unigram +1
    //   SVE (2/8, 1, 0)     bigram +1
    let c = corpus("a\tN\nb\tV\n\na\tN\nc\tN\nb\tV\n\nd\tV\n");
    let model = train_tnt(&c, &TntConfig::default()).unwrap();
    assert_eq!(model.lambdas(), [2.0 / 9.0, 7.0 / 9.0, 0.0]);
}

#[test]
fn single_sentence_trigram_is_ml() {
    let c = corpus("a\tN\nb\tV\n");
    let model = train_tnt(&c, &TntConfig::default()).unwrap();
    let (n, v) = (c.inventory().id("N").unwrap(), c.inventory().id("V").unwrap());
    let s = model.start_symbol();
    assert_eq!(model.ml_trigram(s, n, v), Some(1.0));
    assert_eq!(model.ml_trigram(v, v, n), None);
    let l = model.lambdas();
    assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    assert!(model.transition_prob(v, v, n) > 0.0);
}

fn assert_distributions(model: &TntModel) {
    let t = model.inventory().len();
    let outcomes: Vec<usize> = (0..t).chain([model.end_symbol()]).collect();
    for a in 0..=t {
        for b in 0..=t {
            let sum: f64 = outcomes.iter().map(|&c| model.transition_prob(a, b, c)).sum();
            assert!((sum - 1.0).abs() <= 1e-10, "context ({a},{b}) sums to {sum}");
        }
    }
    for tag in 0..t {
        if model.tag_probabilities()[tag] == 0.0 {
            continue;
        }
        let sum: f64 = model.vocabulary().map(|(w, _)| model.emission_prob(w, tag)).sum();
        assert!((sum - 1.0).abs() <= 1e-10);
    }
    for (sfx, dist) in model.suffix_distributions() {
        assert!((dist.iter().sum::<f64>() - 1.0).abs() <= 1e-10, "suffix {sfx:?}");
    }
    assert!((model.tag_probabilities().iter().sum::<f64>() - 1.0).abs() <= 1e-10);
    assert!((model.lambdas().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    assert!(model.lambdas().iter().all(|&l| l >= 0.0));
}

#[test]
fn distributions_are_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let tags = rng.random_range(1..=5);
        let n = rng.random_range(1..=20);
        let c = random_corpus(&mut rng, n, 6, 12, tags);
        assert_distributions(&train_tnt(&c, &TntConfig::default()).unwrap());
    }
}

#[test]
fn beam_decode_matches_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let tags = rng.random_range(1..=3);
        let n = rng.random_range(2..=12);
        let c = random_corpus(&mut rng, n, 5, 8, tags);
        let mut model = train_tnt(&c, &TntConfig::default()).unwrap();
        model.set_beam(tags * tags).unwrap();
        for _ in 0..5 {
            let len = rng.random_range(1..=4);
            let words: Vec<Token> = (0..len)
                .map(|_| Token::new(format!("w{}", rng.random_range(0..10))).unwrap())
                .collect();
            let decoded = model.tag_ids(&words).unwrap();
            let (_, best) = exhaustive(&model, &words);
            let got = path_score(&model, &words, &decoded);
            assert!((got - best).abs() <= 1e-9 || got == best, "{got} vs {best}");
        }
    }
}

#[test]
fn narrow_beam_still_tags() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = random_corpus(&mut rng, 30, 6, 10, 4);
    let mut model = train_tnt(&c, &TntConfig::default()).unwrap();
    model.set_beam(1).unwrap();
    for s in c.sentences() {
        assert_eq!(model.tag(s.tokens()).unwrap().len(), s.len());
    }
    assert!(model.set_beam(0).is_err());
}

#[test]
fn deterministic_corpus_is_reproduced() {
    let c = corpus("the\tD\ndog\tN\nruns\tV\n\na\tD\ncat\tN\nsleeps\tV\n\ncat\tN\nsleeps\tV\n");
    let model = train_tnt(&c, &TntConfig::default()).unwrap();
    for s in c.sentences() {
        assert_eq!(model.tag(s.tokens()).unwrap(), s.tags());
    }
}

#[test]
fn fallback_tiers() {
    let c = corpus(
        "x\tN\n\nx\tN\n\nx\tN\n\nx\tV\n\n\
         walking\tV\n\ntalking\tV\n\nsinging\tV\n\nhouse\tN\n\ntree\tN\n\nstone\tN\n\nriver\tN\n",
    );
    let model = train_tnt(&c, &TntConfig::default()).unwrap();
    assert_eq!(model.fallback_tag("x").as_str(), "N");
    assert_eq!(model.fallback_tag("qqq").as_str(), "N");
    assert_eq!(model.fallback_tag("jumping").as_str(), "V");
    assert_eq!(model.tag(&tokens(&["jumping"])).unwrap()[0].as_str(), "V");
}

#[test]
fn suffix_switch_off_uses_top_tag() {
    let c = corpus("walking\tV\n\ntalking\tV\n\nhouse\tN\n\ntree\tN\n\nstone\tN\n");
    let config = TntConfig {
        use_suffix_model: false,
        ..TntConfig::default()
    };
    let model = train_tnt(&c, &config).unwrap();
    assert_eq!(model.tag(&tokens(&["jumping"])).unwrap()[0].as_str(), "N");
}

#[test]
fn tagging_is_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = random_corpus(&mut rng, 40, 6, 15, 4);
    let model = train_tnt(&c, &TntConfig::default()).unwrap();
    let alphabet: Vec<char> = "aብc😀ሀ-9ĳ".chars().collect();
    for _ in 0..200 {
        let len = rng.random_range(1..=8);
        let words: Vec<Token> = (0..len)
            .map(|_| {
                let n = rng.random_range(1..=6);
                Token::new((0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect::<String>()).unwrap()
            })
            .collect();
        assert_eq!(model.tag(&words).unwrap().len(), len);
    }
    assert!(model.tag(&[]).is_err());
}

#[test]
fn training_is_deterministic_and_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let c = random_corpus(&mut rng, 25, 6, 15, 4);
    let a = train_tnt(&c, &TntConfig::default()).unwrap();
    let b = train_tnt(&c, &TntConfig::default()).unwrap();
    assert_eq!(a, b);
    let text = a.to_model_file().to_text();
    assert_eq!(text, b.to_model_file().to_text());
    let reloaded = TntModel::from_model_file(&ModelFile::parse(&text).unwrap()).unwrap();
    assert_eq!(reloaded, a);
    assert_eq!(reloaded.to_model_file().to_text(), text);
}

#[test]
fn rejects_bad_config() {
    let c = corpus("a\tN\n");
    assert!(c.subset(&[]).is_err());
    let bad = TntConfig {
        beam: 0,
        ..TntConfig::default()
    };
    assert!(train_tnt(&c, &bad).is_err());
}
