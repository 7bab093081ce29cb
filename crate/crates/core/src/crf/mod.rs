//! Linear-chain conditional random field.
//!
//! A model scores a tag sequence `t` for a sentence `w` as
//!
//! ```text
//! score(t | w) = sum_i psi(i, t_i) + trans(START, t_1) + sum_i trans(t_i, t_i+1) + trans(t_k, END)
//! ```
//!
//! where `psi(i, t)` sums the state weights of the features that fire at
//! position `i`, and `P(t | w) = exp(score) / Z(w)`. Training minimizes the
//! negative log-likelihood plus `c2 * |w|^2` with L-BFGS, switching to the
//! orthant-wise variant when `c1 > 0` adds `c1 * |w|_1`.
//!
//! `t-1=<tag>` features are folded into the transition table, which keeps
//! them exact under first-order inference. `t-2=<tag>` features, when
//! enabled, are read from the gold annotation during training and from the
//! Viterbi back-pointers during decoding; the exact inference routines
//! ([`CrfModel::lattice`] and friends) leave them out.

mod lattice;
mod objective;

use std::collections::HashSet;
use std::time::Instant;

pub use lattice::{log_sum_exp, Lattice, Marginals};
pub use objective::{nll_and_gradient, CrfObjective};

use objective::{effective_transitions, observation_ids, state_scores, tag_context_ids};

use crate::corpus::{Tag, TagInventory, TaggedCorpus, Token};
use crate::error::{Error, Result};
use crate::features::{build_index, FeatureConfig, FeatureIndex};
use crate::modelfile::{fmt_f64, inventory_lines, parse_f64, parse_inventory, parse_usize, setting, ModelFile};
use crate::optimize::{lbfgs_minimize, LbfgsConfig, Termination, Trace};

/// Training hyper-parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    /// L1 coefficient.
    pub c1: f64,
    /// L2 coefficient.
    pub c2: f64,
    pub max_iterations: usize,
    /// Number of L-BFGS correction pairs.
    pub memory: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c1: 0.064,
            c2: 0.002,
            max_iterations: 200,
            memory: 10,
            epsilon: 1e-5,
            seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 >= 0.0 && self.c1.is_finite()) || !(self.c2 >= 0.0 && self.c2.is_finite()) {
            return Err(Error::param("c1 and c2 must be finite and non-negative"));
        }
        if !(self.epsilon > 0.0) || self.max_iterations == 0 || self.memory == 0 {
            return Err(Error::param("epsilon, max_iterations and memory must be positive"));
        }
        Ok(())
    }

    fn lines(&self) -> Vec<String> {
        vec![
            format!("c1={}", fmt_f64(self.c1)),
            format!("c2={}", fmt_f64(self.c2)),
            format!("max_iterations={}", self.max_iterations),
            format!("memory={}", self.memory),
            format!("epsilon={}", fmt_f64(self.epsilon)),
            format!("seed={}", self.seed),
        ]
    }

    fn from_settings(settings: &[(&str, &str)]) -> Result<Self> {
        Ok(Self {
            c1: parse_f64(setting(settings, "c1")?)?,
            c2: parse_f64(setting(settings, "c2")?)?,
            max_iterations: parse_usize(setting(settings, "max_iterations")?)?,
            memory: parse_usize(setting(settings, "memory")?)?,
            epsilon: parse_f64(setting(settings, "epsilon")?)?,
            seed: setting(settings, "seed")?
                .parse()
                .map_err(|_| Error::format("invalid seed"))?,
        })
    }
}

/// Condensed record of a training run, stored with the model.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSummary {
    pub iterations: usize,
    pub initial_objective: f64,
    pub final_objective: f64,
    pub termination: String,
}

impl TrainingSummary {
    fn from_trace(trace: &Trace) -> Self {
        Self {
            iterations: trace.iterations.len(),
            initial_objective: trace.initial_objective,
            final_objective: trace.final_objective(),
            termination: match trace.termination {
                Termination::GradientInf => "gradient-inf",
                Termination::GradientRelative => "gradient-relative",
                Termination::MaxIterations => "max-iterations",
            }
            .to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrfModel {
    inventory: TagInventory,
    feature_config: FeatureConfig,
    index: FeatureIndex,
    /// `F x T`, row-major by feature.
    state_weights: Vec<f64>,
    /// `(T+1) x (T+1)`; row `T` is the start, column `T` the end.
    trans_weights: Vec<f64>,
    train_config: TrainConfig,
    summary: Option<TrainingSummary>,
    /// `t-1` feature ids per tag (and start), folded into transitions.
    prev_tag_ids: Vec<Option<usize>>,
    prev2_tag_ids: Vec<Option<usize>>,
}

impl CrfModel {
    /// Assembles a model from explicit weights.
    pub fn from_weights(
        inventory: TagInventory,
        feature_config: FeatureConfig,
        index: FeatureIndex,
        state_weights: Vec<f64>,
        trans_weights: Vec<f64>,
    ) -> Result<Self> {
        let t = inventory.len();
        if state_weights.len() != index.len() * t {
            return Err(Error::param(format!(
                "state weights have length {}, expected {} x {}",
                state_weights.len(),
                index.len(),
                t
            )));
        }
        if trans_weights.len() != (t + 1) * (t + 1) {
            return Err(Error::param("transition weights must be (T+1) x (T+1)"));
        }
        if state_weights.iter().chain(&trans_weights).any(|w| !w.is_finite()) {
            return Err(Error::param("weights must be finite"));
        }
        let prev_tag_ids = if feature_config.use_prev_tag {
            tag_context_ids(inventory.tags(), &index, false)
        } else {
            vec![None; t + 1]
        };
        let prev2_tag_ids = if feature_config.use_prev2_tag {
            tag_context_ids(inventory.tags(), &index, true)
        } else {
            vec![None; t + 1]
        };
        Ok(Self {
            inventory,
            feature_config,
            index,
            state_weights,
            trans_weights,
            train_config: TrainConfig::default(),
            summary: None,
            prev_tag_ids,
            prev2_tag_ids,
        })
    }

    pub fn inventory(&self) -> &TagInventory {
        &self.inventory
    }

    pub fn feature_config(&self) -> &FeatureConfig {
        &self.feature_config
    }

    pub fn index(&self) -> &FeatureIndex {
        &self.index
    }

    pub fn train_config(&self) -> &TrainConfig {
        &self.train_config
    }

    pub fn summary(&self) -> Option<&TrainingSummary> {
        self.summary.as_ref()
    }

    pub fn state_weights(&self) -> &[f64] {
        &self.state_weights
    }

    pub fn trans_weights(&self) -> &[f64] {
        &self.trans_weights
    }

    /// Concatenated parameter vector as used by [`CrfObjective`].
    pub fn weights(&self) -> Vec<f64> {
        let mut w = self.state_weights.clone();
        w.extend_from_slice(&self.trans_weights);
        w
    }

    /// Weight of feature `key` firing with `tag`, if both are known.
    pub fn feature_weight(&self, key: &str, tag: &str) -> Option<f64> {
        let f = self.index.get(key)?;
        let t = self.inventory.id(tag)?;
        Some(self.state_weights[f * self.inventory.len() + t])
    }

    fn effective_transitions(&self) -> Vec<f64> {
        effective_transitions(&self.state_weights, &self.trans_weights, self.inventory.len(), &self.prev_tag_ids)
    }

    /// Log-potentials of `sentence`. Features absent from the index
    /// contribute nothing.
    pub fn lattice(&self, sentence: &[Token]) -> Result<Lattice> {
        if sentence.is_empty() {
            return Err(Error::param("cannot score an empty sentence"));
        }
        let features = observation_ids(sentence, &self.index, &self.feature_config);
        let state = state_scores(&self.state_weights, self.inventory.len(), &features);
        Ok(Lattice::from_parts(self.inventory.len(), state, self.effective_transitions()))
    }

    fn tag_ids(&self, tags: &[Tag]) -> Result<Vec<usize>> {
        tags.iter()
            .map(|t| {
                self.inventory
                    .id(t.as_str())
                    .ok_or_else(|| Error::param(format!("tag {t} is not in the model inventory")))
            })
            .collect()
    }

    pub fn sequence_score(&self, sentence: &[Token], tags: &[Tag]) -> Result<f64> {
        let ids = self.tag_ids(tags)?;
        self.lattice(sentence)?.sequence_score(&ids)
    }

    pub fn log_partition(&self, sentence: &[Token]) -> Result<f64> {
        Ok(self.lattice(sentence)?.log_partition())
    }

    pub fn marginals(&self, sentence: &[Token]) -> Result<Marginals> {
        Ok(self.lattice(sentence)?.marginals())
    }

    /// Exact first-order argmax and its score.
    pub fn viterbi(&self, sentence: &[Token]) -> Result<(Vec<Tag>, f64)> {
        let (ids, score) = self.lattice(sentence)?.viterbi();
        Ok((ids.into_iter().map(|i| self.inventory.tag(i).clone()).collect(), score))
    }

    /// Best tag sequence for `sentence`.
    pub fn tag(&self, sentence: &[Token]) -> Result<Vec<Tag>> {
        let ids = if self.feature_config.use_prev2_tag {
            self.decode_with_second_order_context(sentence)?
        } else {
            self.lattice(sentence)?.viterbi().0
        };
        Ok(ids.into_iter().map(|i| self.inventory.tag(i).clone()).collect())
    }

    /// Viterbi where the `t-2` feature of each candidate edge `a -> b` reads
    /// the tag that the best path into `a` came from.
    fn decode_with_second_order_context(&self, sentence: &[Token]) -> Result<Vec<usize>> {
        let lattice = self.lattice(sentence)?;
        let n = self.inventory.len();
        let start = n;
        let t2 = |context: usize, b: usize| {
            self.prev2_tag_ids[context].map_or(0.0, |f| self.state_weights[f * n + b])
        };
        let len = lattice.len();
        let mut delta: Vec<f64> = (0..n)
            .map(|t| lattice.trans(start, t) + lattice.state(0, t) + t2(start, t))
            .collect();
        let mut back = vec![0usize; len * n];
        let mut next = vec![0.0; n];
        for i in 1..len {
            for b in 0..n {
                let mut best = 0;
                let mut best_score = f64::NEG_INFINITY;
                for a in 0..n {
                    let context = if i == 1 { start } else { back[(i - 1) * n + a] };
                    let s = delta[a] + lattice.trans(a, b) + t2(context, b);
                    if s > best_score {
                        best = a;
                        best_score = s;
                    }
                }
                back[i * n + b] = best;
                next[b] = best_score + lattice.state(i, b);
            }
            std::mem::swap(&mut delta, &mut next);
        }
        let mut last = 0;
        for t in 1..n {
            if delta[t] + lattice.trans(t, n) > delta[last] + lattice.trans(last, n) {
                last = t;
            }
        }
        let mut tags = vec![0; len];
        tags[len - 1] = last;
        for i in (1..len).rev() {
            tags[i - 1] = back[i * n + tags[i]];
        }
        Ok(tags)
    }

    pub fn to_model_file(&self) -> ModelFile {
        let n = self.inventory.len();
        let mut file = ModelFile::new("crf");
        file.push("inventory", inventory_lines(&self.inventory));
        file.push("features", self.feature_config.to_text().lines().map(String::from).collect());
        file.push("train", self.train_config.lines());
        file.push("index", self.index.keys().iter().map(|k| k.as_str().to_string()).collect());
        file.push(
            "state-weights",
            self.state_weights
                .chunks(n)
                .map(|row| row.iter().map(|&w| fmt_f64(w)).collect::<Vec<_>>().join(" "))
                .collect(),
        );
        file.push(
            "transition-weights",
            self.trans_weights
                .chunks(n + 1)
                .map(|row| row.iter().map(|&w| fmt_f64(w)).collect::<Vec<_>>().join(" "))
                .collect(),
        );
        let summary = self.summary.as_ref().map_or_else(Vec::new, |s| {
            vec![
                format!("iterations={}", s.iterations),
                format!("initial_objective={}", fmt_f64(s.initial_objective)),
                format!("final_objective={}", fmt_f64(s.final_objective)),
                format!("termination={}", s.termination),
            ]
        });
        file.push("trace", summary);
        file
    }

    pub fn from_model_file(file: &ModelFile) -> Result<Self> {
        if file.kind() != "crf" {
            return Err(Error::format(format!("expected a crf model, found `{}`", file.kind())));
        }
        let inventory = parse_inventory(file.section("inventory")?)?;
        let feature_config = FeatureConfig::from_text(&file.section("features")?.join("\n"))?;
        let train_config = TrainConfig::from_settings(&file.settings("train")?)?;
        let index = FeatureIndex::from_keys(file.section("index")?.to_vec())?;
        let parse_rows = |name: &str, width: usize| -> Result<Vec<f64>> {
            let mut out = Vec::new();
            for line in file.section(name)? {
                let row = line.split(' ').map(parse_f64).collect::<Result<Vec<_>>>()?;
                if row.len() != width {
                    return Err(Error::format(format!("section `{name}`: expected {width} values per row")));
                }
                out.extend(row);
            }
            Ok(out)
        };
        let n = inventory.len();
        let state = parse_rows("state-weights", n)?;
        let trans = parse_rows("transition-weights", n + 1)?;
        let mut model = Self::from_weights(inventory, feature_config, index, state, trans)
            .map_err(|e| Error::format(e.to_string()))?;
        model.train_config = train_config;
        let trace = file.settings("trace")?;
        if !trace.is_empty() {
            model.summary = Some(TrainingSummary {
                iterations: parse_usize(setting(&trace, "iterations")?)?,
                initial_objective: parse_f64(setting(&trace, "initial_objective")?)?,
                final_objective: parse_f64(setting(&trace, "final_objective")?)?,
                termination: setting(&trace, "termination")?.to_string(),
            });
        }
        Ok(model)
    }
}

/// The corpus relabelled with only the inventory tags that occur in it.
fn observed_labels(corpus: &TaggedCorpus) -> Result<TaggedCorpus> {
    let seen: HashSet<&Tag> = corpus.sentences().iter().flat_map(|s| s.tags()).collect();
    let tags: Vec<Tag> = corpus.inventory().tags().iter().filter(|t| seen.contains(t)).cloned().collect();
    let labels = TagInventory::new(corpus.inventory().name(), tags)?;
    TaggedCorpus::new(corpus.sentences().to_vec(), labels)
}

/// Trains a CRF on `corpus`. The label set is the tags that occur in the
/// corpus. Weights start at zero. The objective is
/// evaluated on the current rayon pool; results do not depend on its size.
pub fn train_crf(corpus: &TaggedCorpus, fconfig: &FeatureConfig, tconfig: &TrainConfig) -> Result<(CrfModel, Trace)> {
    fconfig.validate()?;
    tconfig.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let started = Instant::now();
    let observed = observed_labels(corpus)?;
    let corpus = &observed;
    let index = build_index(corpus, fconfig);
    let objective = CrfObjective::new(corpus, &index, fconfig, tconfig.c2);
    log::info!(
        "training CRF: {} sentences, {} features, {} tags, {} parameters",
        corpus.len(),
        index.len(),
        corpus.inventory().len(),
        objective.dimension()
    );
    let lbfgs = LbfgsConfig {
        memory: tconfig.memory,
        max_iterations: tconfig.max_iterations,
        epsilon: tconfig.epsilon,
        l1: tconfig.c1,
        ..LbfgsConfig::default()
    };
    let x0 = vec![0.0; objective.dimension()];
    let (x, trace) = lbfgs_minimize(|w, g| objective.evaluate_parallel(w, g), &x0, &lbfgs)?;
    log::info!(
        "CRF training finished after {} iterations ({:?}), objective {:.6}, {:.2?}",
        trace.iterations.len(),
        trace.termination,
        trace.final_objective(),
        started.elapsed()
    );
    let split = index.len() * corpus.inventory().len();
    let (state, trans) = x.split_at(split);
    let mut model = CrfModel::from_weights(
        corpus.inventory().clone(),
        fconfig.clone(),
        index,
        state.to_vec(),
        trans.to_vec(),
    )?;
    model.train_config = tconfig.clone();
    model.summary = Some(TrainingSummary::from_trace(&trace));
    Ok((model, trace))
}
