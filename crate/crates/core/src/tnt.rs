//! Trigram HMM tagger with deleted interpolation, suffix-based unknown-word
//! estimates and beam search.
//!
//! Transition outcomes range over the tags plus an end symbol, and contexts
//! over the tags plus a start symbol. Every sentence is padded with two
//! start symbols and closed with one end symbol.

use std::collections::{BTreeMap, HashMap};

use crate::corpus::{Tag, TagInventory, TaggedCorpus, Token, END, START};
use crate::error::{Error, Result};
use crate::modelfile::{fmt_f64, inventory_lines, parse_f64, parse_inventory, setting, ModelFile};

#[derive(Clone, Debug, PartialEq)]
pub struct TntConfig {
    /// Longest suffix, in codepoints, used for unknown words.
    pub max_suffix: usize,
    /// Words seen at most this often feed the suffix model.
    pub rare_threshold: u64,
    /// Successive-abstraction weight; derived from the tag distribution when
    /// unset.
    pub theta: Option<f64>,
    /// Number of trigram states kept per position.
    pub beam: usize,
    /// When off, unknown words take the most frequent training tag.
    pub use_suffix_model: bool,
}

impl Default for TntConfig {
    fn default() -> Self {
        Self {
            max_suffix: 4,
            rare_threshold: 10,
            theta: None,
            beam: 1000,
            use_suffix_model: true,
        }
    }
}

impl TntConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beam == 0 {
            return Err(Error::param("beam width must be at least 1"));
        }
        if let Some(theta) = self.theta {
            if !theta.is_finite() || theta < 0.0 {
                return Err(Error::param(format!("theta must be finite and non-negative, got {theta}")));
            }
        }
        Ok(())
    }

    fn lines(&self) -> Vec<String> {
        vec![
            format!("max_suffix={}", self.max_suffix),
            format!("rare_threshold={}", self.rare_threshold),
            format!("theta={}", self.theta.map_or_else(|| "auto".to_string(), fmt_f64)),
            format!("beam={}", self.beam),
            format!("use_suffix_model={}", self.use_suffix_model),
        ]
    }

    fn from_settings(settings: &[(&str, &str)]) -> Result<Self> {
        let num = |key: &str| -> Result<u64> {
            setting(settings, key)?
                .parse()
                .map_err(|_| Error::format(format!("invalid value for `{key}`")))
        };
        let theta = match setting(settings, "theta")? {
            "auto" => None,
            v => Some(parse_f64(v)?),
        };
        let config = Self {
            max_suffix: num("max_suffix")? as usize,
            rare_threshold: num("rare_threshold")?,
            theta,
            beam: num("beam")? as usize,
            use_suffix_model: setting(settings, "use_suffix_model")?
                .parse()
                .map_err(|_| Error::format("invalid value for `use_suffix_model`"))?,
        };
        config.validate().map_err(|e| Error::format(e.to_string()))?;
        Ok(config)
    }
}

/// Raw counts a model is built from.
#[derive(Clone, Debug, Default, PartialEq)]
struct Counts {
    unigram: Vec<u64>,
    bigram: Vec<u64>,
    trigram: Vec<u64>,
    emissions: BTreeMap<String, Vec<(usize, u64)>>,
    suffixes: BTreeMap<String, Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TntModel {
    inventory: TagInventory,
    config: TntConfig,
    counts: Counts,
    lambdas: [f64; 3],
    total: u64,
    context1: Vec<u64>,
    context2: Vec<u64>,
    trans: Vec<f64>,
    log_trans: Vec<f64>,
    tag_prob: Vec<f64>,
    theta: f64,
    suffix_dist: HashMap<String, Vec<f64>>,
    top_tag: usize,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

fn suffix(chars: &[char], len: usize) -> String {
    chars[chars.len() - len..].iter().collect()
}

fn symbol_id(inventory: &TagInventory, name: &str) -> Result<usize> {
    match name {
        START => Ok(inventory.len()),
        END => Ok(inventory.len() + 1),
        _ => inventory
            .id(name)
            .ok_or_else(|| Error::format(format!("unknown tag `{name}` in model"))),
    }
}

impl TntModel {
    fn symbols(&self) -> usize {
        self.inventory.len() + 2
    }

    /// Symbol id of the sentence-start padding.
    pub fn start_symbol(&self) -> usize {
        self.inventory.len()
    }

    /// Symbol id of the sentence-end closure.
    pub fn end_symbol(&self) -> usize {
        self.inventory.len() + 1
    }

    pub fn inventory(&self) -> &TagInventory {
        &self.inventory
    }

    pub fn config(&self) -> &TntConfig {
        &self.config
    }

    /// Interpolation weights for the unigram, bigram and trigram estimates.
    pub fn lambdas(&self) -> [f64; 3] {
        self.lambdas
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn set_beam(&mut self, beam: usize) -> Result<()> {
        if beam == 0 {
            return Err(Error::param("beam width must be at least 1"));
        }
        self.config.beam = beam;
        Ok(())
    }

    fn symbol_name(&self, s: usize) -> &str {
        match s {
            _ if s == self.start_symbol() => START,
            _ if s == self.end_symbol() => END,
            _ => self.inventory.tag(s).as_str(),
        }
    }

    /// Maximum-likelihood trigram estimate, `None` for an unseen context.
    pub fn ml_trigram(&self, a: usize, b: usize, c: usize) -> Option<f64> {
        let s = self.symbols();
        let ctx = self.context2[a * s + b];
        (ctx > 0).then(|| self.counts.trigram[(a * s + b) * s + c] as f64 / ctx as f64)
    }

    /// Interpolated `P(c | a, b)`; contexts range over tags and the start
    /// symbol, outcomes over tags and the end symbol.
    pub fn transition_prob(&self, a: usize, b: usize, c: usize) -> f64 {
        let s = self.symbols();
        self.trans[(a * s + b) * s + c]
    }

    fn interpolate(&self, a: usize, b: usize, c: usize) -> f64 {
        let s = self.symbols();
        let p1 = self.counts.unigram[c] as f64 / self.total as f64;
        let p2 = (self.context1[b] > 0).then(|| self.counts.bigram[b * s + c] as f64 / self.context1[b] as f64);
        let p3 = self.ml_trigram(a, b, c);
        let parts = [Some(p1), p2, p3];
        let weight: f64 = parts.iter().zip(self.lambdas).filter(|(p, _)| p.is_some()).map(|(_, l)| l).sum();
        if weight > 0.0 {
            parts
                .iter()
                .zip(self.lambdas)
                .filter_map(|(p, l)| p.map(|p| l * p))
                .sum::<f64>()
                / weight
        } else {
            parts.iter().rev().find_map(|p| *p).unwrap_or(p1)
        }
    }

    pub fn is_known(&self, word: &str) -> bool {
        self.counts.emissions.contains_key(word)
    }

    /// `P(word | tag)` for training words; zero for unknown words.
    pub fn emission_prob(&self, word: &str, tag: usize) -> f64 {
        let tag_count = self.counts.unigram[tag];
        self.counts
            .emissions
            .get(word)
            .and_then(|ts| ts.iter().find(|(t, _)| *t == tag))
            .map_or(0.0, |(_, c)| *c as f64 / tag_count as f64)
    }

    /// Training words and their per-tag counts.
    pub fn vocabulary(&self) -> impl Iterator<Item = (&str, &[(usize, u64)])> {
        self.counts.emissions.iter().map(|(w, ts)| (w.as_str(), ts.as_slice()))
    }

    /// Unconditional tag probabilities over training tokens.
    pub fn tag_probabilities(&self) -> &[f64] {
        &self.tag_prob
    }

    /// Smoothed `P(tag | suffix)` for the longest suffix of `word` seen among
    /// rare training words, and that suffix's length.
    pub fn suffix_distribution(&self, word: &str) -> (&[f64], usize) {
        let chars: Vec<char> = word.chars().collect();
        for len in (0..=self.config.max_suffix.min(chars.len())).rev() {
            if let Some(dist) = self.suffix_dist.get(&suffix(&chars, len)) {
                return (dist, len);
            }
        }
        (&self.suffix_dist[""], 0)
    }

    /// Stored suffix distributions keyed by suffix.
    pub fn suffix_distributions(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.suffix_dist.iter().map(|(s, d)| (s.as_str(), d.as_slice()))
    }

    /// The emission log-score the decoder uses; `-inf` marks a tag the word
    /// cannot take.
    pub fn log_emission(&self, word: &str, tag: usize) -> f64 {
        if self.is_known(word) {
            return self.emission_prob(word, tag).ln();
        }
        if !self.config.use_suffix_model {
            return if tag == self.top_tag { 0.0 } else { f64::NEG_INFINITY };
        }
        let (dist, _) = self.suffix_distribution(word);
        if self.tag_prob[tag] > 0.0 && dist[tag] > 0.0 {
            (dist[tag] / self.tag_prob[tag]).ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn candidates(&self, word: &str) -> Vec<(usize, f64)> {
        let out: Vec<(usize, f64)> = (0..self.inventory.len())
            .map(|t| (t, self.log_emission(word, t)))
            .filter(|(_, e)| *e > f64::NEG_INFINITY)
            .collect();
        if out.is_empty() {
            vec![(self.top_tag, 0.0)]
        } else {
            out
        }
    }

    /// Most frequent tag of a training word, else the argmax of its longest
    /// seen suffix, else the most frequent training tag.
    pub fn fallback_tag(&self, word: &str) -> &Tag {
        if let Some(ts) = self.counts.emissions.get(word) {
            let mut best = ts[0];
            for &(t, c) in &ts[1..] {
                if c > best.1 {
                    best = (t, c);
                }
            }
            return self.inventory.tag(best.0);
        }
        let (dist, len) = self.suffix_distribution(word);
        if len > 0 {
            return self.inventory.tag(argmax(dist.iter().copied()));
        }
        self.inventory.tag(self.top_tag)
    }

    pub fn tag(&self, sentence: &[Token]) -> Result<Vec<Tag>> {
        Ok(self
            .tag_ids(sentence)?
            .into_iter()
            .map(|t| self.inventory.tag(t).clone())
            .collect())
    }

    /// Beam Viterbi over `(previous tag, tag)` states.
    pub fn tag_ids(&self, sentence: &[Token]) -> Result<Vec<usize>> {
        if sentence.is_empty() {
            return Err(Error::param("cannot tag an empty sentence"));
        }
        #[derive(Clone, Copy)]
        struct State {
            prev: usize,
            cur: usize,
            score: f64,
            back: usize,
        }
        let s = self.symbols();
        let start = self.start_symbol();
        let lt = |a: usize, b: usize, c: usize| self.log_trans[(a * s + b) * s + c];
        let mut history: Vec<Vec<State>> = Vec::with_capacity(sentence.len());
        let mut states = vec![State {
            prev: start,
            cur: start,
            score: 0.0,
            back: 0,
        }];
        for token in sentence {
            let cands = self.candidates(token.as_str());
            let mut slot: BTreeMap<(usize, usize), State> = BTreeMap::new();
            for (pi, p) in states.iter().enumerate() {
                for &(b, e) in &cands {
                    let score = p.score + lt(p.prev, p.cur, b) + e;
                    let entry = slot.entry((p.cur, b)).or_insert(State {
                        prev: p.cur,
                        cur: b,
                        score: f64::NEG_INFINITY,
                        back: pi,
                    });
                    if score > entry.score {
                        entry.score = score;
                        entry.back = pi;
                    }
                }
            }
            let mut next: Vec<State> = slot.into_values().collect();
            if next.len() > self.config.beam {
                let mut order: Vec<usize> = (0..next.len()).collect();
                order.sort_by(|&x, &y| next[y].score.total_cmp(&next[x].score).then(x.cmp(&y)));
                order.truncate(self.config.beam);
                order.sort_unstable();
                next = order.into_iter().map(|i| next[i]).collect();
            }
            history.push(std::mem::replace(&mut states, next));
        }
        let end = self.end_symbol();
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, st) in states.iter().enumerate() {
            let score = st.score + lt(st.prev, st.cur, end);
            if score > best_score {
                best = i;
                best_score = score;
            }
        }
        let mut tags = vec![0; sentence.len()];
        let mut idx = best;
        for i in (0..sentence.len()).rev() {
            let st = states[idx];
            tags[i] = st.cur;
            idx = st.back;
            states = history.pop().unwrap_or_default();
        }
        Ok(tags)
    }

    fn assemble(inventory: TagInventory, config: TntConfig, counts: Counts, lambdas: Option<[f64; 3]>) -> Self {
        let t = inventory.len();
        let s = t + 2;
        let total = counts.unigram.iter().sum();
        let mut context1 = vec![0; s];
        let mut context2 = vec![0; s * s];
        for a in 0..s {
            for b in 0..s {
                context1[a] += counts.bigram[a * s + b];
                for c in 0..s {
                    context2[a * s + b] += counts.trigram[(a * s + b) * s + c];
                }
            }
        }
        let tag_total: u64 = counts.unigram[..t].iter().sum();
        let tag_prob: Vec<f64> = counts.unigram[..t].iter().map(|&c| c as f64 / tag_total as f64).collect();
        let seen: Vec<f64> = tag_prob.iter().copied().filter(|&p| p > 0.0).collect();
        let theta = config.theta.unwrap_or_else(|| {
            if seen.len() < 2 {
                return 0.0;
            }
            let mean = seen.iter().sum::<f64>() / seen.len() as f64;
            (seen.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (seen.len() - 1) as f64).sqrt()
        });
        let top_tag = argmax(counts.unigram[..t].iter().map(|&c| c as f64));

        let mut model = Self {
            inventory,
            config,
            counts,
            lambdas: [0.0; 3],
            total,
            context1,
            context2,
            trans: vec![0.0; s * s * s],
            log_trans: vec![f64::NEG_INFINITY; s * s * s],
            tag_prob,
            theta,
            suffix_dist: HashMap::new(),
            top_tag,
        };
        model.lambdas = lambdas.unwrap_or_else(|| model.deleted_interpolation());
        for a in 0..=t {
            for b in 0..=t {
                for c in (0..t).chain([t + 1]) {
                    let p = model.interpolate(a, b, c);
                    let i = (a * s + b) * s + c;
                    model.trans[i] = p;
                    model.log_trans[i] = p.ln();
                }
            }
        }
        model.build_suffix_distributions();
        model
    }

    /// For every trigram, credit its count to the order whose leave-one-out
    /// estimate is largest. Ties go to the lower order.
    fn deleted_interpolation(&self) -> [f64; 3] {
        let s = self.symbols();
        let mut acc = [0u64; 3];
        for a in 0..s {
            for b in 0..s {
                for c in 0..s {
                    let f = self.counts.trigram[(a * s + b) * s + c];
                    if f == 0 {
                        continue;
                    }
                    let cases = [
                        ratio(self.counts.unigram[c] as f64 - 1.0, self.total as f64 - 1.0),
                        ratio(self.counts.bigram[b * s + c] as f64 - 1.0, self.context1[b] as f64 - 1.0),
                        ratio(f as f64 - 1.0, self.context2[a * s + b] as f64 - 1.0),
                    ];
                    acc[argmax(cases)] += f;
                }
            }
        }
        let sum: u64 = acc.iter().sum();
        acc.map(|x| x as f64 / sum as f64)
    }

    fn build_suffix_distributions(&mut self) {
        let t = self.inventory.len();
        let normalize = |counts: &[u64]| -> Vec<f64> {
            let total: u64 = counts.iter().sum();
            counts.iter().map(|&c| ratio(c as f64, total as f64)).collect()
        };
        let base = self
            .counts
            .suffixes
            .get("")
            .map_or_else(|| self.tag_prob.clone(), |c| normalize(c));
        let mut dist: HashMap<String, Vec<f64>> = HashMap::new();
        dist.insert(String::new(), base);
        let mut keys: Vec<&String> = self.counts.suffixes.keys().filter(|k| !k.is_empty()).collect();
        keys.sort_by_key(|k| k.chars().count());
        let theta = self.theta;
        for key in keys {
            let parent: String = key.chars().skip(1).collect();
            let ml = normalize(&self.counts.suffixes[key]);
            let smoothed = (0..t)
                .map(|i| (ml[i] + theta * dist[&parent][i]) / (1.0 + theta))
                .collect();
            dist.insert(key.clone(), smoothed);
        }
        self.suffix_dist = dist;
    }

    pub fn to_model_file(&self) -> ModelFile {
        let s = self.symbols();
        let mut file = ModelFile::new("tnt");
        file.push("inventory", inventory_lines(&self.inventory));
        file.push("config", self.config.lines());
        file.push("lambdas", self.lambdas.iter().map(|&l| fmt_f64(l)).collect());
        let nonzero = |table: &[u64], arity: usize| -> Vec<String> {
            table
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, c)| {
                    let mut syms = Vec::with_capacity(arity);
                    let mut rest = i;
                    for _ in 0..arity {
                        syms.push(self.symbol_name(rest % s));
                        rest /= s;
                    }
                    syms.reverse();
                    format!("{}\t{c}", syms.join("\t"))
                })
                .collect()
        };
        file.push("unigram", nonzero(&self.counts.unigram, 1));
        file.push("bigram", nonzero(&self.counts.bigram, 2));
        file.push("trigram", nonzero(&self.counts.trigram, 3));
        file.push(
            "emissions",
            self.counts
                .emissions
                .iter()
                .flat_map(|(w, ts)| ts.iter().map(move |(t, c)| format!("{w}\t{}\t{c}", self.inventory.tag(*t))))
                .collect(),
        );
        file.push(
            "suffixes",
            self.counts
                .suffixes
                .iter()
                .flat_map(|(sfx, cs)| {
                    cs.iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(move |(t, c)| format!("{sfx}\t{}\t{c}", self.inventory.tag(t)))
                })
                .collect(),
        );
        file
    }

    pub fn from_model_file(file: &ModelFile) -> Result<Self> {
        if file.kind() != "tnt" {
            return Err(Error::format(format!("expected a tnt model, found `{}`", file.kind())));
        }
        let inventory = parse_inventory(file.section("inventory")?)?;
        let config = TntConfig::from_settings(&file.settings("config")?)?;
        let lambdas: Vec<f64> = file.section("lambdas")?.iter().map(|l| parse_f64(l)).collect::<Result<_>>()?;
        let lambdas: [f64; 3] = lambdas
            .try_into()
            .map_err(|_| Error::format("expected three interpolation weights"))?;
        let t = inventory.len();
        let s = t + 2;
        let mut counts = Counts {
            unigram: vec![0; s],
            bigram: vec![0; s * s],
            trigram: vec![0; s * s * s],
            ..Counts::default()
        };
        let fields = |line: &str, n: usize, section: &str| -> Result<Vec<String>> {
            let parts: Vec<String> = line.split('\t').map(String::from).collect();
            if parts.len() != n {
                return Err(Error::format(format!("section `{section}`: malformed line {line:?}")));
            }
            Ok(parts)
        };
        let count = |v: &str| -> Result<u64> { v.parse().map_err(|_| Error::format(format!("invalid count {v:?}"))) };
        for (name, arity) in [("unigram", 1), ("bigram", 2), ("trigram", 3)] {
            for line in file.section(name)? {
                let parts = fields(line, arity + 1, name)?;
                let mut idx = 0;
                for p in &parts[..arity] {
                    idx = idx * s + symbol_id(&inventory, p)?;
                }
                let table = match arity {
                    1 => &mut counts.unigram,
                    2 => &mut counts.bigram,
                    _ => &mut counts.trigram,
                };
                table[idx] = count(&parts[arity])?;
            }
        }
        let tag_id = |name: &str| -> Result<usize> {
            inventory
                .id(name)
                .ok_or_else(|| Error::format(format!("unknown tag `{name}` in model")))
        };
        for line in file.section("emissions")? {
            let parts = fields(line, 3, "emissions")?;
            counts
                .emissions
                .entry(parts[0].clone())
                .or_default()
                .push((tag_id(&parts[1])?, count(&parts[2])?));
        }
        for line in file.section("suffixes")? {
            let parts = fields(line, 3, "suffixes")?;
            counts.suffixes.entry(parts[0].clone()).or_insert_with(|| vec![0; t])[tag_id(&parts[1])?] =
                count(&parts[2])?;
        }
        if counts.unigram.iter().sum::<u64>() == 0 {
            return Err(Error::format("tnt model has no counts"));
        }
        Ok(Self::assemble(inventory, config, counts, Some(lambdas)))
    }
}

pub fn train_tnt(corpus: &TaggedCorpus, config: &TntConfig) -> Result<TntModel> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let t = corpus.inventory().len();
    let s = t + 2;
    let (start, end) = (t, t + 1);
    let mut counts = Counts {
        unigram: vec![0; s],
        bigram: vec![0; s * s],
        trigram: vec![0; s * s * s],
        ..Counts::default()
    };
    let mut word_freq: HashMap<&str, u64> = HashMap::new();
    for (sentence, ids) in corpus.sentences().iter().zip(corpus.tag_ids()) {
        let (mut a, mut b) = (start, start);
        for c in ids.iter().copied().chain([end]) {
            counts.unigram[c] += 1;
            counts.bigram[b * s + c] += 1;
            counts.trigram[(a * s + b) * s + c] += 1;
            (a, b) = (b, c);
        }
        for (token, &tag) in sentence.tokens().iter().zip(&ids) {
            *word_freq.entry(token.as_str()).or_default() += 1;
            let entry = counts.emissions.entry(token.as_str().to_string()).or_default();
            match entry.iter_mut().find(|(x, _)| *x == tag) {
                Some((_, c)) => *c += 1,
                None => entry.push((tag, 1)),
            }
        }
    }
    for ts in counts.emissions.values_mut() {
        ts.sort_unstable();
    }
    for (sentence, ids) in corpus.sentences().iter().zip(corpus.tag_ids()) {
        for (token, &tag) in sentence.tokens().iter().zip(&ids) {
            if word_freq[token.as_str()] > config.rare_threshold {
                continue;
            }
            let chars: Vec<char> = token.as_str().chars().collect();
            for len in 0..=config.max_suffix.min(chars.len()) {
                counts.suffixes.entry(suffix(&chars, len)).or_insert_with(|| vec![0; t])[tag] += 1;
            }
        }
    }
    let model = TntModel::assemble(corpus.inventory().clone(), config.clone(), counts, None);
    log::info!(
        "trained TnT: {} words, lambdas {:?}, theta {:.4}",
        model.counts.emissions.len(),
        model.lambdas,
        model.theta
    );
    Ok(model)
}

#[cfg(test)]
mod tests;
