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

fn tags(names: &[&str]) -> Vec<Tag> {
    names.iter().map(|t| Tag::new(*t).unwrap()).collect()
}

fn random_corpus(rng: &mut ChaCha8Rng, sentences: usize, vocab: usize, ntags: usize) -> TaggedCorpus {
    let names: Vec<Tag> = (0..ntags).map(|i| Tag::new(format!("T{i}")).unwrap()).collect();
    let sentences = (0..sentences)
        .map(|_| {
            let len = rng.random_range(1..=7);
            let toks = (0..len)
                .map(|_| Token::new(format!("w{}", rng.random_range(0..vocab))).unwrap())
                .collect();
            let tg = (0..len).map(|_| names[rng.random_range(0..ntags)].clone()).collect();
            TaggedSentence::new(toks, tg).unwrap()
        })
        .collect();
    TaggedCorpus::new(sentences, TagInventory::new("rand", names).unwrap()).unwrap()
}

/// Independent interpreter working from the textual rule encoding.
fn interpret(rules: &[Rule], words: &[Token], start: &[Tag]) -> Vec<String> {
    let mut cur: Vec<String> = start.iter().map(|t| t.to_string()).collect();
    for rule in rules {
        let enc = rule.encoding();
        let (head, cond) = enc.split_once(" | ").unwrap();
        let (from, to) = head.split_once(" -> ").unwrap();
        let (name, params) = cond.split_once('(').unwrap();
        let params = &params[..params.len() - 1];
        let mut tag = None;
        let mut word = None;
        for part in params.splitn(2, ',') {
            if let Some(t) = part.strip_prefix("tag=") {
                tag = Some(t.to_string());
            } else if let Some(w) = part.strip_prefix("word=") {
                word = Some(w.to_string());
            }
        }
        let before = cur.clone();
        let n = before.len() as i64;
        let t_at = |i: i64| if i >= 0 && i < n { Some(before[i as usize].clone()) } else { None };
        let w_at = |i: i64| if i >= 0 && i < n { Some(words[i as usize].to_string()) } else { None };
        for p in 0..n {
            if before[p as usize] != from {
                continue;
            }
            let hit = match name {
                "prev_tag" => t_at(p - 1) == tag,
                "next_tag" => t_at(p + 1) == tag,
                "prev_2_tags" => t_at(p - 1) == tag || t_at(p - 2) == tag,
                "next_2_tags" => t_at(p + 1) == tag || t_at(p + 2) == tag,
                "prev_tag_word" => t_at(p - 1) == tag && w_at(p) == word,
                "next_tag_word" => t_at(p + 1) == tag && w_at(p) == word,
                "prev_word" => w_at(p - 1) == word,
                "next_word" => w_at(p + 1) == word,
                "cur_word" => w_at(p) == word,
                other => panic!("unknown template {other}"),
            };
            if hit {
                cur[p as usize] = to.to_string();
            }
        }
    }
    cur
}

#[test]
fn baseline_majority_and_default() {
    let c = corpus("w\tN\n\nw\tN\n\nw\tV\n\nz\tV\n\nz\tV\n\nq\tV\n");
    let b = train_baseline(&c).unwrap();
    assert_eq!(b.tag_word("w").as_str(), "N");
    assert_eq!(b.tag_word("unseen").as_str(), "V");
    assert_eq!(b.default_tag().as_str(), "V");
}

#[test]
fn baseline_ties_go_to_lower_id() {
    let c = corpus("w\tN\n\nw\tV\n");
    assert_eq!(train_baseline(&c).unwrap().tag_word("w").as_str(), "N");
}

#[test]
fn empty_rules_are_identity() {
    let words = tokens(&["a", "b"]);
    let mut t = tags(&["A", "B"]);
    apply_rules(&[], &words, &mut t);
    assert_eq!(t, tags(&["A", "B"]));
}

#[test]
fn sweep_reads_pre_sweep_tags() {
    let rule = Rule {
        from: Tag::new("A").unwrap(),
        to: Tag::new("B").unwrap(),
        condition: Condition::PrevTag(Tag::new("A").unwrap()),
        score: 1,
    };
    let words = tokens(&["x", "y", "z"]);
    let mut t = tags(&["A", "A", "A"]);
    apply_rules(&[rule], &words, &mut t);
    assert_eq!(t, tags(&["A", "B", "B"]));
}

#[test]
fn single_systematic_error_rule() {
    // Baseline says N for x (3 N vs 2 V). Candidate scores at the two
    // errors, with bad counts from correct N positions:
    //   prev_tag(N)              2 - 1 (c after N)   = 1
    //   prev_2_tags(N)           2 - 1               = 1
    //   prev_word(a)             2 - 1               = 1
    //   prev_tag_word(N,x)       2 - 0               = 2
    //   cur_word(x)              2 - 3               = -1
    let c = corpus(
        "a\tN\nx\tV\n\na\tN\nx\tV\n\nx\tN\nb\tD\n\nx\tN\nb\tD\n\nx\tN\nb\tD\n\na\tN\nc\tN\n",
    );
    let (model, outcome) = train_brill(&c, &BrillConfig::default()).unwrap();
    assert_eq!(outcome.errors, vec![2, 0]);
    assert_eq!(model.rules().len(), 1);
    assert_eq!(model.rules()[0].to_string(), "N -> V | prev_tag_word(tag=N,word=x) | 2");
    for s in c.sentences() {
        assert_eq!(model.tag(s.tokens()).unwrap(), s.tags());
    }
}

#[test]
fn perfect_baseline_learns_nothing() {
    let c = corpus("the\tD\ndog\tN\n\na\tD\ncat\tN\n");
    let (model, outcome) = train_brill(&c, &BrillConfig::default()).unwrap();
    assert!(model.rules().is_empty());
    assert_eq!(outcome.errors, vec![0]);
    assert_eq!(model.tag(&tokens(&["the", "cat"])).unwrap(), tags(&["D", "N"]));
}

#[test]
fn errors_drop_by_rule_scores_and_replay_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..25 {
        let c = random_corpus(&mut rng, 25, 8, 3);
        let config = BrillConfig {
            min_score: 1,
            max_rules: 40,
            ..BrillConfig::default()
        };
        let (model, outcome) = train_brill(&c, &config).unwrap();
        assert_eq!(outcome.errors.len(), outcome.rules.len() + 1);
        for (i, rule) in outcome.rules.iter().enumerate() {
            assert!(rule.score >= config.min_score);
            assert_eq!(outcome.errors[i] - outcome.errors[i + 1], rule.score as usize);
        }
        for (s, annotated) in c.sentences().iter().zip(&outcome.annotation) {
            let mut t = model.baseline().tag(s.tokens());
            apply_rules(model.rules(), s.tokens(), &mut t);
            assert_eq!(&t, annotated);
            assert_eq!(model.tag(s.tokens()).unwrap(), t);
        }
    }
}

#[test]
fn tagging_matches_independent_interpreter() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..10 {
        let c = random_corpus(&mut rng, 30, 10, 3);
        let config = BrillConfig {
            min_score: 1,
            ..BrillConfig::default()
        };
        let (model, _) = train_brill(&c, &config).unwrap();
        for _ in 0..20 {
            let len = rng.random_range(1..=8);
            let words: Vec<Token> = (0..len)
                .map(|_| Token::new(format!("w{}", rng.random_range(0..12))).unwrap())
                .collect();
            let expected = interpret(model.rules(), &words, &model.baseline().tag(&words));
            let got: Vec<String> = model.tag(&words).unwrap().iter().map(|t| t.to_string()).collect();
            assert_eq!(got, expected);
        }
    }
}

#[test]
fn learning_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let c = random_corpus(&mut rng, 40, 10, 4);
    let a = train_brill(&c, &BrillConfig::default()).unwrap();
    let b = train_brill(&c, &BrillConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rule_lines_round_trip() {
    for cond in [
        Condition::PrevTag(Tag::new("N").unwrap()),
        Condition::NextTwoTags(Tag::new("V-X").unwrap()),
        Condition::PrevTagWord(Tag::new("N").unwrap(), "a,b)".into()),
        Condition::NextTagWord(Tag::new("N").unwrap(), "tag=x".into()),
        Condition::CurWord("ቤቶች".into()),
        Condition::PrevWord("x|y".into()),
        Condition::NextWord("(".into()),
    ] {
        let rule = Rule {
            from: Tag::new("N").unwrap(),
            to: Tag::new("V").unwrap(),
            condition: cond,
            score: 7,
        };
        assert_eq!(Rule::parse(&rule.to_string()).unwrap(), rule);
    }
    assert!(Rule::parse("N -> N | cur_word(word=a) | 1").is_err());
    assert!(Rule::parse("N -> V | bogus(word=a) | 1").is_err());
    assert!(Rule::parse("N -> V | prev_tag(word=a) | 1").is_err());
    assert!(Rule::parse("N -> V | cur_word(word=a)").is_err());
}

#[test]
fn model_file_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let c = random_corpus(&mut rng, 30, 10, 3);
    let (model, _) = train_brill(&c, &BrillConfig::default()).unwrap();
    let text = model.to_model_file().to_text();
    let back = BrillModel::from_model_file(&ModelFile::parse(&text).unwrap()).unwrap();
    assert_eq!(back, model);
    assert_eq!(back.to_model_file().to_text(), text);
}

#[test]
fn config_validation() {
    let c = corpus("a\tN\n");
    let empty = BrillConfig {
        templates: vec![],
        ..BrillConfig::default()
    };
    assert!(train_brill(&c, &empty).is_err());
    let zero = BrillConfig {
        min_score: 0,
        ..BrillConfig::default()
    };
    assert!(train_brill(&c, &zero).is_err());
    let none = BrillConfig {
        max_rules: 0,
        ..BrillConfig::default()
    };
    assert!(train_brill(&c, &none).unwrap().0.rules().is_empty());
}

/// A rule can create contexts that make a later rule more valuable, so
/// accepted scores are not monotone in general.
#[test]
fn scores_can_increase_down_the_list() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut increases = 0;
    for _ in 0..30 {
        let c = random_corpus(&mut rng, 30, 8, 3);
        let config = BrillConfig {
            min_score: 1,
            ..BrillConfig::default()
        };
        let (model, _) = train_brill(&c, &config).unwrap();
        increases += model.rules().windows(2).filter(|w| w[1].score > w[0].score).count();
    }
    assert!(increases > 0);
}
