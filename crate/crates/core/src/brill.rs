//! Transformation-based tagging: a most-frequent-tag baseline followed by an
//! ordered list of contextual rewrite rules learned greedily from errors.
//!
//! A rule is applied in one sweep. Its conditions read the tags as they were
//! before the sweep, so a rewrite never triggers another within the same
//! sweep.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::corpus::{Tag, TagInventory, TaggedCorpus, Token};
use crate::error::{Error, Result};
use crate::modelfile::{inventory_lines, parse_inventory, setting, ModelFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Template {
    PrevTag,
    NextTag,
    PrevTwoTags,
    NextTwoTags,
    PrevTagWord,
    NextTagWord,
    PrevWord,
    NextWord,
    CurWord,
}

impl Template {
    pub const ALL: [Template; 9] = [
        Template::PrevTag,
        Template::NextTag,
        Template::PrevTwoTags,
        Template::NextTwoTags,
        Template::PrevTagWord,
        Template::NextTagWord,
        Template::PrevWord,
        Template::NextWord,
        Template::CurWord,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Template::PrevTag => "prev_tag",
            Template::NextTag => "next_tag",
            Template::PrevTwoTags => "prev_2_tags",
            Template::NextTwoTags => "next_2_tags",
            Template::PrevTagWord => "prev_tag_word",
            Template::NextTagWord => "next_tag_word",
            Template::PrevWord => "prev_word",
            Template::NextWord => "next_word",
            Template::CurWord => "cur_word",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.id() == id)
            .ok_or_else(|| Error::param(format!("unknown rule template `{id}`")))
    }
}

/// What a rule requires of the context around the rewritten position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Tag at position -1.
    PrevTag(Tag),
    NextTag(Tag),
    /// Tag at -1 or -2.
    PrevTwoTags(Tag),
    NextTwoTags(Tag),
    /// Tag at -1 and the current word.
    PrevTagWord(Tag, String),
    NextTagWord(Tag, String),
    PrevWord(String),
    NextWord(String),
    CurWord(String),
}

impl Condition {
    pub fn template(&self) -> Template {
        match self {
            Condition::PrevTag(_) => Template::PrevTag,
            Condition::NextTag(_) => Template::NextTag,
            Condition::PrevTwoTags(_) => Template::PrevTwoTags,
            Condition::NextTwoTags(_) => Template::NextTwoTags,
            Condition::PrevTagWord(..) => Template::PrevTagWord,
            Condition::NextTagWord(..) => Template::NextTagWord,
            Condition::PrevWord(_) => Template::PrevWord,
            Condition::NextWord(_) => Template::NextWord,
            Condition::CurWord(_) => Template::CurWord,
        }
    }

    /// Whether the condition holds at `p`; positions outside the sentence
    /// never match.
    pub fn matches(&self, tokens: &[Token], tags: &[Tag], p: usize) -> bool {
        let tag_at = |offset: isize| {
            p.checked_add_signed(offset)
                .and_then(|i| tags.get(i))
        };
        let word_at = |offset: isize| {
            p.checked_add_signed(offset)
                .and_then(|i| tokens.get(i))
                .map(Token::as_str)
        };
        match self {
            Condition::PrevTag(t) => tag_at(-1) == Some(t),
            Condition::NextTag(t) => tag_at(1) == Some(t),
            Condition::PrevTwoTags(t) => tag_at(-1) == Some(t) || tag_at(-2) == Some(t),
            Condition::NextTwoTags(t) => tag_at(1) == Some(t) || tag_at(2) == Some(t),
            Condition::PrevTagWord(t, w) => tag_at(-1) == Some(t) && word_at(0) == Some(w),
            Condition::NextTagWord(t, w) => tag_at(1) == Some(t) && word_at(0) == Some(w),
            Condition::PrevWord(w) => word_at(-1) == Some(w),
            Condition::NextWord(w) => word_at(1) == Some(w),
            Condition::CurWord(w) => word_at(0) == Some(w),
        }
    }

    fn params(&self) -> (Option<&Tag>, Option<&str>) {
        match self {
            Condition::PrevTag(t) | Condition::NextTag(t) | Condition::PrevTwoTags(t) | Condition::NextTwoTags(t) => {
                (Some(t), None)
            }
            Condition::PrevTagWord(t, w) | Condition::NextTagWord(t, w) => (Some(t), Some(w)),
            Condition::PrevWord(w) | Condition::NextWord(w) | Condition::CurWord(w) => (None, Some(w)),
        }
    }

    fn build(template: Template, tag: Option<Tag>, word: Option<String>) -> Result<Self> {
        let need_tag = || tag.clone().ok_or_else(|| Error::format(format!("{} needs a tag", template.id())));
        let need_word = || word.clone().ok_or_else(|| Error::format(format!("{} needs a word", template.id())));
        Ok(match template {
            Template::PrevTag => Condition::PrevTag(need_tag()?),
            Template::NextTag => Condition::NextTag(need_tag()?),
            Template::PrevTwoTags => Condition::PrevTwoTags(need_tag()?),
            Template::NextTwoTags => Condition::NextTwoTags(need_tag()?),
            Template::PrevTagWord => Condition::PrevTagWord(need_tag()?, need_word()?),
            Template::NextTagWord => Condition::NextTagWord(need_tag()?, need_word()?),
            Template::PrevWord => Condition::PrevWord(need_word()?),
            Template::NextWord => Condition::NextWord(need_word()?),
            Template::CurWord => Condition::CurWord(need_word()?),
        })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = match self.params() {
            (Some(t), Some(w)) => vec![format!("tag={t}"), format!("word={w}")],
            (Some(t), None) => vec![format!("tag={t}")],
            (None, Some(w)) => vec![format!("word={w}")],
            (None, None) => vec![],
        };
        write!(f, "{}({})", self.template().id(), params.join(","))
    }
}

/// `from -> to` wherever `condition` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub from: Tag,
    pub to: Tag,
    pub condition: Condition,
    /// Net errors fixed on the training annotation when learned.
    pub score: i64,
}

impl Rule {
    /// Canonical text without the score; also the tie-break key in learning.
    pub fn encoding(&self) -> String {
        format!("{} -> {} | {}", self.from, self.to, self.condition)
    }

    pub fn parse(line: &str) -> Result<Self> {
        let bad = || Error::format(format!("malformed rule line {line:?}"));
        let parts: Vec<&str> = line.split(" | ").collect();
        let [head, cond, score] = parts.as_slice() else {
            return Err(bad());
        };
        let (from, to) = head.split_once(" -> ").ok_or_else(bad)?;
        let (template, params) = cond.split_once('(').ok_or_else(bad)?;
        let params = params.strip_suffix(')').ok_or_else(bad)?;
        let template = Template::from_id(template).map_err(|e| Error::format(e.to_string()))?;
        let (mut tag, mut word) = (None, None);
        let mut rest = params;
        if let Some(r) = rest.strip_prefix("tag=") {
            let (t, r) = r.split_once(',').unwrap_or((r, ""));
            tag = Some(Tag::new(t)?);
            rest = r;
        }
        if let Some(w) = rest.strip_prefix("word=") {
            word = Some(w.to_string());
        } else if !rest.is_empty() {
            return Err(bad());
        }
        let rule = Self {
            from: Tag::new(from)?,
            to: Tag::new(to)?,
            condition: Condition::build(template, tag, word)?,
            score: score.trim().parse().map_err(|_| bad())?,
        };
        if rule.from == rule.to {
            return Err(Error::format(format!("rule rewrites a tag to itself: {line:?}")));
        }
        Ok(rule)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.encoding(), self.score)
    }
}

/// Rewrites `tags` in place with each rule in order.
pub fn apply_rules(rules: &[Rule], tokens: &[Token], tags: &mut [Tag]) {
    let mut hits = Vec::new();
    for rule in rules {
        hits.clear();
        hits.extend((0..tags.len()).filter(|&p| tags[p] == rule.from && rule.condition.matches(tokens, tags, p)));
        for &p in &hits {
            tags[p] = rule.to.clone();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineTagger {
    words: BTreeMap<String, Tag>,
    default: Tag,
}

impl BaselineTagger {
    pub fn default_tag(&self) -> &Tag {
        &self.default
    }

    pub fn tag_word(&self, word: &str) -> &Tag {
        self.words.get(word).unwrap_or(&self.default)
    }

    pub fn tag(&self, tokens: &[Token]) -> Vec<Tag> {
        tokens.iter().map(|t| self.tag_word(t.as_str()).clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Most frequent tag per word, ties to the lower tag id.
pub fn train_baseline(corpus: &TaggedCorpus) -> Result<BaselineTagger> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = corpus.inventory().len();
    let mut counts: HashMap<&str, Vec<u64>> = HashMap::new();
    let mut totals = vec![0u64; n];
    for (sentence, ids) in corpus.sentences().iter().zip(corpus.tag_ids()) {
        for (token, t) in sentence.tokens().iter().zip(ids) {
            counts.entry(token.as_str()).or_insert_with(|| vec![0; n])[t] += 1;
            totals[t] += 1;
        }
    }
    let best = |c: &[u64]| {
        let mut b = 0;
        for t in 1..c.len() {
            if c[t] > c[b] {
                b = t;
            }
        }
        corpus.inventory().tag(b).clone()
    };
    Ok(BaselineTagger {
        words: counts.iter().map(|(w, c)| (w.to_string(), best(c))).collect(),
        default: best(&totals),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrillConfig {
    pub templates: Vec<Template>,
    pub max_rules: usize,
    pub min_score: i64,
}

impl Default for BrillConfig {
    fn default() -> Self {
        Self {
            templates: Template::ALL.to_vec(),
            max_rules: 300,
            min_score: 2,
        }
    }
}

impl BrillConfig {
    pub fn validate(&self) -> Result<()> {
        if self.templates.is_empty() {
            return Err(Error::param("at least one rule template is required"));
        }
        if self.min_score < 1 {
            return Err(Error::param(format!("min_score must be at least 1, got {}", self.min_score)));
        }
        Ok(())
    }

    fn lines(&self) -> Vec<String> {
        vec![
            format!("templates={}", self.templates.iter().map(|t| t.id()).collect::<Vec<_>>().join(",")),
            format!("max_rules={}", self.max_rules),
            format!("min_score={}", self.min_score),
        ]
    }

    fn from_settings(settings: &[(&str, &str)]) -> Result<Self> {
        let templates = setting(settings, "templates")?
            .split(',')
            .map(Template::from_id)
            .collect::<Result<Vec<_>>>()?;
        let num = |key: &str| -> Result<i64> {
            setting(settings, key)?
                .parse()
                .map_err(|_| Error::format(format!("invalid value for `{key}`")))
        };
        Ok(Self {
            templates,
            max_rules: num("max_rules")?.max(0) as usize,
            min_score: num("min_score")?,
        })
    }
}

/// Compact conditions over interned tags and words, used while learning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Cond {
    PrevTag(u32),
    NextTag(u32),
    PrevTwoTags(u32),
    NextTwoTags(u32),
    PrevTagWord(u32, u32),
    NextTagWord(u32, u32),
    PrevWord(u32),
    NextWord(u32),
    CurWord(u32),
}

/// Conditions of `template` that hold at position `p`.
fn instantiate(template: Template, words: &[u32], tags: &[u32], p: usize, out: &mut Vec<Cond>) {
    let n = tags.len();
    let (prev, next) = (p.checked_sub(1), (p + 1 < n).then_some(p + 1));
    match template {
        Template::PrevTag => out.extend(prev.map(|i| Cond::PrevTag(tags[i]))),
        Template::NextTag => out.extend(next.map(|i| Cond::NextTag(tags[i]))),
        Template::PrevTwoTags => {
            let window: Vec<u32> = [p.checked_sub(1), p.checked_sub(2)].into_iter().flatten().map(|i| tags[i]).collect();
            for (k, &t) in window.iter().enumerate() {
                if !window[..k].contains(&t) {
                    out.push(Cond::PrevTwoTags(t));
                }
            }
        }
        Template::NextTwoTags => {
            let window: Vec<u32> = [p + 1, p + 2].into_iter().filter(|&i| i < n).map(|i| tags[i]).collect();
            for (k, &t) in window.iter().enumerate() {
                if !window[..k].contains(&t) {
                    out.push(Cond::NextTwoTags(t));
                }
            }
        }
        Template::PrevTagWord => out.extend(prev.map(|i| Cond::PrevTagWord(tags[i], words[p]))),
        Template::NextTagWord => out.extend(next.map(|i| Cond::NextTagWord(tags[i], words[p]))),
        Template::PrevWord => out.extend(prev.map(|i| Cond::PrevWord(words[i]))),
        Template::NextWord => out.extend(next.map(|i| Cond::NextWord(words[i]))),
        Template::CurWord => out.push(Cond::CurWord(words[p])),
    }
}

fn cond_matches(cond: Cond, words: &[u32], tags: &[u32], p: usize) -> bool {
    let n = tags.len();
    let tag = |i: Option<usize>| i.filter(|&i| i < n).map(|i| tags[i]);
    let word = |i: Option<usize>| i.filter(|&i| i < n).map(|i| words[i]);
    let (prev, next, prev2, next2) = (p.checked_sub(1), Some(p + 1), p.checked_sub(2), Some(p + 2));
    match cond {
        Cond::PrevTag(t) => tag(prev) == Some(t),
        Cond::NextTag(t) => tag(next) == Some(t),
        Cond::PrevTwoTags(t) => tag(prev) == Some(t) || tag(prev2) == Some(t),
        Cond::NextTwoTags(t) => tag(next) == Some(t) || tag(next2) == Some(t),
        Cond::PrevTagWord(t, w) => tag(prev) == Some(t) && words[p] == w,
        Cond::NextTagWord(t, w) => tag(next) == Some(t) && words[p] == w,
        Cond::PrevWord(w) => word(prev) == Some(w),
        Cond::NextWord(w) => word(next) == Some(w),
        Cond::CurWord(w) => words[p] == w,
    }
}

/// Result of rule learning on a training corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnOutcome {
    pub rules: Vec<Rule>,
    /// Training annotation after the last accepted rule.
    pub annotation: Vec<Vec<Tag>>,
    /// Training error count before learning and after each accepted rule.
    pub errors: Vec<usize>,
}

/// Greedy error-driven rule learning from the baseline annotation.
pub fn learn_rules(corpus: &TaggedCorpus, baseline: &BaselineTagger, config: &BrillConfig) -> Result<LearnOutcome> {
    config.validate()?;
    let inventory = corpus.inventory();
    let mut word_ids: HashMap<&str, u32> = HashMap::new();
    let mut word_names: Vec<&str> = Vec::new();
    let words: Vec<Vec<u32>> = corpus
        .sentences()
        .iter()
        .map(|s| {
            s.tokens()
                .iter()
                .map(|t| {
                    *word_ids.entry(t.as_str()).or_insert_with(|| {
                        word_names.push(t.as_str());
                        (word_names.len() - 1) as u32
                    })
                })
                .collect()
        })
        .collect();
    let gold: Vec<Vec<u32>> = corpus
        .tag_ids()
        .into_iter()
        .map(|s| s.into_iter().map(|t| t as u32).collect())
        .collect();
    let tag_id = |t: &Tag| {
        inventory
            .id(t.as_str())
            .map(|i| i as u32)
            .ok_or_else(|| Error::InvalidTag(t.to_string()))
    };
    let mut cur: Vec<Vec<u32>> = corpus
        .sentences()
        .iter()
        .map(|s| baseline.tag(s.tokens()).iter().map(tag_id).collect())
        .collect::<Result<_>>()?;
    let count_errors = |cur: &[Vec<u32>]| -> usize {
        cur.iter()
            .zip(&gold)
            .map(|(c, g)| c.iter().zip(g).filter(|(a, b)| a != b).count())
            .sum()
    };
    let to_condition = |c: Cond| -> Condition {
        let tag = |t: u32| inventory.tag(t as usize).clone();
        let word = |w: u32| word_names[w as usize].to_string();
        match c {
            Cond::PrevTag(t) => Condition::PrevTag(tag(t)),
            Cond::NextTag(t) => Condition::NextTag(tag(t)),
            Cond::PrevTwoTags(t) => Condition::PrevTwoTags(tag(t)),
            Cond::NextTwoTags(t) => Condition::NextTwoTags(tag(t)),
            Cond::PrevTagWord(t, w) => Condition::PrevTagWord(tag(t), word(w)),
            Cond::NextTagWord(t, w) => Condition::NextTagWord(tag(t), word(w)),
            Cond::PrevWord(w) => Condition::PrevWord(word(w)),
            Cond::NextWord(w) => Condition::NextWord(word(w)),
            Cond::CurWord(w) => Condition::CurWord(word(w)),
        }
    };

    let mut rules = Vec::new();
    let mut errors = vec![count_errors(&cur)];
    let mut scratch = Vec::new();
    while rules.len() < config.max_rules {
        let mut good: HashMap<(u32, u32, Cond), i64> = HashMap::new();
        for s in 0..cur.len() {
            for p in 0..cur[s].len() {
                let (c, g) = (cur[s][p], gold[s][p]);
                if c == g {
                    continue;
                }
                for &template in &config.templates {
                    scratch.clear();
                    instantiate(template, &words[s], &cur[s], p, &mut scratch);
                    for &cond in &scratch {
                        *good.entry((c, g, cond)).or_default() += 1;
                    }
                }
            }
        }
        if good.is_empty() {
            break;
        }
        let mut bad: HashMap<(u32, Cond), i64> = good.keys().map(|&(f, _, c)| ((f, c), 0)).collect();
        for s in 0..cur.len() {
            for p in 0..cur[s].len() {
                let c = cur[s][p];
                if c != gold[s][p] {
                    continue;
                }
                for &template in &config.templates {
                    scratch.clear();
                    instantiate(template, &words[s], &cur[s], p, &mut scratch);
                    for &cond in &scratch {
                        if let Some(b) = bad.get_mut(&(c, cond)) {
                            *b += 1;
                        }
                    }
                }
            }
        }
        let mut best_score = i64::MIN;
        let mut tied: Vec<(u32, u32, Cond)> = Vec::new();
        for (&(from, to, cond), &g) in &good {
            let score = g - bad[&(from, cond)];
            if score > best_score {
                best_score = score;
                tied.clear();
            }
            if score == best_score {
                tied.push((from, to, cond));
            }
        }
        if best_score < config.min_score {
            break;
        }
        let (from, to, cond) = tied
            .into_iter()
            .map(|(f, t, c)| {
                let rule = Rule {
                    from: inventory.tag(f as usize).clone(),
                    to: inventory.tag(t as usize).clone(),
                    condition: to_condition(c),
                    score: best_score,
                };
                (rule.encoding(), (f, t, c))
            })
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, key)| key)
            .expect("a best candidate exists");
        for s in 0..cur.len() {
            let hits: Vec<usize> = (0..cur[s].len())
                .filter(|&p| cur[s][p] == from && cond_matches(cond, &words[s], &cur[s], p))
                .collect();
            for p in hits {
                cur[s][p] = to;
            }
        }
        let rule = Rule {
            from: inventory.tag(from as usize).clone(),
            to: inventory.tag(to as usize).clone(),
            condition: to_condition(cond),
            score: best_score,
        };
        log::debug!("rule {}: {rule}", rules.len() + 1);
        rules.push(rule);
        errors.push(count_errors(&cur));
    }
    let annotation = cur
        .iter()
        .map(|s| s.iter().map(|&t| inventory.tag(t as usize).clone()).collect())
        .collect();
    Ok(LearnOutcome {
        rules,
        annotation,
        errors,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrillModel {
    inventory: TagInventory,
    config: BrillConfig,
    baseline: BaselineTagger,
    rules: Vec<Rule>,
}

impl BrillModel {
    pub fn new(inventory: TagInventory, config: BrillConfig, baseline: BaselineTagger, rules: Vec<Rule>) -> Result<Self> {
        let check = |t: &Tag| {
            if inventory.contains(t.as_str()) {
                Ok(())
            } else {
                Err(Error::InvalidTag(t.to_string()))
            }
        };
        check(&baseline.default)?;
        baseline.words.values().try_for_each(check)?;
        for rule in &rules {
            check(&rule.from)?;
            check(&rule.to)?;
            if let (Some(t), _) = rule.condition.params() {
                check(t)?;
            }
        }
        Ok(Self {
            inventory,
            config,
            baseline,
            rules,
        })
    }

    pub fn inventory(&self) -> &TagInventory {
        &self.inventory
    }

    pub fn config(&self) -> &BrillConfig {
        &self.config
    }

    pub fn baseline(&self) -> &BaselineTagger {
        &self.baseline
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn tag(&self, sentence: &[Token]) -> Result<Vec<Tag>> {
        if sentence.is_empty() {
            return Err(Error::param("cannot tag an empty sentence"));
        }
        let mut tags = self.baseline.tag(sentence);
        apply_rules(&self.rules, sentence, &mut tags);
        Ok(tags)
    }

    pub fn to_model_file(&self) -> ModelFile {
        let mut file = ModelFile::new("brill");
        file.push("inventory", inventory_lines(&self.inventory));
        file.push("config", self.config.lines());
        file.push(
            "baseline",
            std::iter::once(format!("default={}", self.baseline.default))
                .chain(self.baseline.words.iter().map(|(w, t)| format!("{w}\t{t}")))
                .collect(),
        );
        file.push("rules", self.rules.iter().map(ToString::to_string).collect());
        file
    }

    pub fn from_model_file(file: &ModelFile) -> Result<Self> {
        if file.kind() != "brill" {
            return Err(Error::format(format!("expected a brill model, found `{}`", file.kind())));
        }
        let inventory = parse_inventory(file.section("inventory")?)?;
        let config = BrillConfig::from_settings(&file.settings("config")?)?;
        let lines = file.section("baseline")?;
        let (header, rows) = lines.split_first().ok_or_else(|| Error::format("empty baseline section"))?;
        let default = Tag::new(
            header
                .strip_prefix("default=")
                .ok_or_else(|| Error::format("baseline section must start with default=TAG"))?,
        )?;
        let words = rows
            .iter()
            .map(|l| {
                let (w, t) = l
                    .split_once('\t')
                    .ok_or_else(|| Error::format(format!("malformed baseline line {l:?}")))?;
                Ok((w.to_string(), Tag::new(t)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let rules = file.section("rules")?.iter().map(|l| Rule::parse(l)).collect::<Result<Vec<_>>>()?;
        Self::new(inventory, config, BaselineTagger { words, default }, rules)
            .map_err(|e| Error::format(e.to_string()))
    }
}

/// Baseline training plus rule learning.
pub fn train_brill(corpus: &TaggedCorpus, config: &BrillConfig) -> Result<(BrillModel, LearnOutcome)> {
    let baseline = train_baseline(corpus)?;
    let outcome = learn_rules(corpus, &baseline, config)?;
    log::info!(
        "learned {} rules, training errors {} -> {}",
        outcome.rules.len(),
        outcome.errors[0],
        outcome.errors.last().copied().unwrap_or(0)
    );
    let model = BrillModel::new(corpus.inventory().clone(), config.clone(), baseline, outcome.rules.clone())?;
    Ok((model, outcome))
}

#[cfg(test)]
mod tests;
