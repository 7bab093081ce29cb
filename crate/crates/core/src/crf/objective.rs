use std::collections::HashMap;

use rayon::prelude::*;

use super::lattice::Lattice;
use crate::corpus::{TaggedCorpus, Token, START};
use crate::features::{observation_features, prev2_tag_key, prev_tag_key, FeatureConfig, FeatureIndex};
use crate::error::{Error, Result};

/// Sentences per work unit of the parallel objective. Fixed so that the
/// summation order, and therefore every bit of the result, does not depend
/// on the number of threads.
const CHUNK: usize = 32;
/// Chunks whose partial results are held in memory at once.
const WAVE: usize = 64;

/// Observation feature ids of every position of a sentence.
pub(crate) fn observation_ids(sentence: &[Token], index: &FeatureIndex, config: &FeatureConfig) -> Vec<Vec<u32>> {
    let mut keys = Vec::with_capacity(16);
    (0..sentence.len())
        .map(|i| {
            keys.clear();
            observation_features(sentence, i, config, &mut keys);
            keys.iter().filter_map(|k| index.get(k.as_str())).map(|id| id as u32).collect()
        })
        .collect()
}

/// Feature ids of `t-1=<tag>` (`t-2=<tag>` when `second` is set) for every
/// tag id and, at index `T`, for the start sentinel.
pub(crate) fn tag_context_ids(
    tags: &[crate::corpus::Tag],
    index: &FeatureIndex,
    second: bool,
) -> Vec<Option<usize>> {
    let key = |name: &str| {
        if second {
            prev2_tag_key(name)
        } else {
            prev_tag_key(name)
        }
    };
    tags.iter()
        .map(|t| t.as_str())
        .chain(std::iter::once(START))
        .map(|name| index.get(key(name).as_str()))
        .collect()
}

/// Transition table with the `t-1` feature weights folded in. A `t-1=a`
/// feature firing with tag `b` scores exactly like the transition `a -> b`,
/// so both parameterizations share one table during inference.
pub(crate) fn effective_transitions(
    state_weights: &[f64],
    trans_weights: &[f64],
    num_tags: usize,
    prev_tag_ids: &[Option<usize>],
) -> Vec<f64> {
    let mut table = trans_weights.to_vec();
    for (from, id) in prev_tag_ids.iter().enumerate() {
        if let Some(f) = id {
            for to in 0..num_tags {
                table[from * (num_tags + 1) + to] += state_weights[f * num_tags + to];
            }
        }
    }
    table
}

pub(crate) fn state_scores(state_weights: &[f64], num_tags: usize, features: &[Vec<u32>]) -> Vec<f64> {
    let mut state = vec![0.0; features.len() * num_tags];
    for (i, ids) in features.iter().enumerate() {
        let row = &mut state[i * num_tags..(i + 1) * num_tags];
        for &f in ids {
            let w = &state_weights[f as usize * num_tags..(f as usize + 1) * num_tags];
            for (r, v) in row.iter_mut().zip(w) {
                *r += v;
            }
        }
    }
    state
}

/// One training sentence: per-position feature ids and gold tag ids.
#[derive(Clone, Debug)]
pub(crate) struct Instance {
    pub features: Vec<Vec<u32>>,
    pub gold: Vec<usize>,
}

trait StateSink {
    fn add_row(&mut self, feature: u32, values: &[f64], gold: usize);
}

struct DenseSink<'a> {
    grad: &'a mut [f64],
    num_tags: usize,
}

impl StateSink for DenseSink<'_> {
    fn add_row(&mut self, feature: u32, values: &[f64], gold: usize) {
        let base = feature as usize * self.num_tags;
        for (g, v) in self.grad[base..base + self.num_tags].iter_mut().zip(values) {
            *g += v;
        }
        self.grad[base + gold] -= 1.0;
    }
}

/// Gradient rows touched by one chunk, in first-touch order.
struct SparseSink {
    num_tags: usize,
    slots: HashMap<u32, usize>,
    features: Vec<u32>,
    rows: Vec<f64>,
}

impl StateSink for SparseSink {
    fn add_row(&mut self, feature: u32, values: &[f64], gold: usize) {
        let n = self.num_tags;
        let slot = *self.slots.entry(feature).or_insert_with(|| {
            self.features.push(feature);
            self.rows.extend(std::iter::repeat_n(0.0, n));
            self.features.len() - 1
        });
        let row = &mut self.rows[slot * n..(slot + 1) * n];
        for (g, v) in row.iter_mut().zip(values) {
            *g += v;
        }
        row[gold] -= 1.0;
    }
}

struct Partial {
    value: f64,
    trans: Vec<f64>,
    state: SparseSink,
}

/// Regularized negative log-likelihood of a corpus under a linear-chain CRF.
///
/// The parameter vector is the `F x T` state-weight table (row-major by
/// feature) followed by the `(T+1) x (T+1)` transition table.
pub struct CrfObjective {
    num_tags: usize,
    num_features: usize,
    prev_tag_ids: Vec<Option<usize>>,
    instances: Vec<Instance>,
    c2: f64,
}

impl CrfObjective {
    pub fn new(corpus: &TaggedCorpus, index: &FeatureIndex, config: &FeatureConfig, c2: f64) -> Self {
        let inventory = corpus.inventory();
        let prev_tag_ids = if config.use_prev_tag {
            tag_context_ids(inventory.tags(), index, false)
        } else {
            vec![None; inventory.len() + 1]
        };
        let prev2_ids = config
            .use_prev2_tag
            .then(|| tag_context_ids(inventory.tags(), index, true));
        let instances = corpus
            .sentences()
            .iter()
            .zip(corpus.tag_ids())
            .map(|(sentence, gold)| {
                let mut features = observation_ids(sentence.tokens(), index, config);
                if let Some(ids) = &prev2_ids {
                    // second-order context is read from the gold annotation
                    for (i, row) in features.iter_mut().enumerate() {
                        let context = i.checked_sub(2).map_or(inventory.len(), |p| gold[p]);
                        if let Some(f) = ids[context] {
                            row.push(f as u32);
                        }
                    }
                }
                Instance { features, gold }
            })
            .collect();
        Self {
            num_tags: inventory.len(),
            num_features: index.len(),
            prev_tag_ids,
            instances,
            c2,
        }
    }

    pub fn dimension(&self) -> usize {
        self.num_features * self.num_tags + (self.num_tags + 1) * (self.num_tags + 1)
    }

    pub fn num_sentences(&self) -> usize {
        self.instances.len()
    }

    fn split<'a>(&self, weights: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        weights.split_at(self.num_features * self.num_tags)
    }

    /// Adds one sentence's gradient; returns `log Z - gold score`.
    fn accumulate(&self, inst: &Instance, state_w: &[f64], effective: &[f64], sink: &mut impl StateSink, trans_grad: &mut [f64]) -> f64 {
        let n = self.num_tags;
        let lattice = Lattice::from_parts(n, state_scores(state_w, n, &inst.features), effective.to_vec());
        let marginals = lattice.marginals();
        let gold_score = lattice.sequence_score(&inst.gold).expect("gold tags in range");
        let len = inst.gold.len();
        let mut node = vec![0.0; n];
        for (i, ids) in inst.features.iter().enumerate() {
            for (t, v) in node.iter_mut().enumerate() {
                *v = marginals.node(i, t);
            }
            for &f in ids {
                sink.add_row(f, &node, inst.gold[i]);
            }
        }
        let width = n + 1;
        for t in 0..n {
            trans_grad[n * width + t] += marginals.node(0, t);
            trans_grad[t * width + n] += marginals.node(len - 1, t);
        }
        trans_grad[n * width + inst.gold[0]] -= 1.0;
        trans_grad[inst.gold[len - 1] * width + n] -= 1.0;
        for i in 0..len - 1 {
            for a in 0..n {
                for b in 0..n {
                    trans_grad[a * width + b] += marginals.edge(i, a, b);
                }
            }
            trans_grad[inst.gold[i] * width + inst.gold[i + 1]] -= 1.0;
        }
        marginals.log_partition() - gold_score
    }

    /// Adds the effective-transition gradient to both parameter blocks and
    /// the L2 term to everything.
    fn finish(&self, weights: &[f64], mut value: f64, trans_grad: &[f64], grad: &mut [f64]) -> f64 {
        let n = self.num_tags;
        let offset = self.num_features * n;
        for (g, v) in grad[offset..].iter_mut().zip(trans_grad) {
            *g += v;
        }
        for (from, id) in self.prev_tag_ids.iter().enumerate() {
            if let Some(f) = id {
                for to in 0..n {
                    grad[f * n + to] += trans_grad[from * (n + 1) + to];
                }
            }
        }
        if self.c2 > 0.0 {
            for (g, w) in grad.iter_mut().zip(weights) {
                value += self.c2 * w * w;
                *g += 2.0 * self.c2 * w;
            }
        }
        value
    }

    fn check(&self, weights: &[f64], grad: &[f64]) {
        assert_eq!(weights.len(), self.dimension(), "weight vector has the wrong dimension");
        assert_eq!(grad.len(), self.dimension(), "gradient buffer has the wrong dimension");
    }

    /// Objective value; writes the gradient into `grad`. Sentences are
    /// summed one after another.
    pub fn evaluate(&self, weights: &[f64], grad: &mut [f64]) -> f64 {
        self.check(weights, grad);
        let (state_w, trans_w) = self.split(weights);
        let effective = effective_transitions(state_w, trans_w, self.num_tags, &self.prev_tag_ids);
        grad.fill(0.0);
        let mut trans_grad = vec![0.0; trans_w.len()];
        let mut value = 0.0;
        {
            let mut sink = DenseSink {
                grad: &mut *grad,
                num_tags: self.num_tags,
            };
            for inst in &self.instances {
                value += self.accumulate(inst, state_w, &effective, &mut sink, &mut trans_grad);
            }
        }
        self.finish(weights, value, &trans_grad, grad)
    }

    /// Same quantity as [`CrfObjective::evaluate`], computed over fixed-size
    /// chunks of sentences on the current rayon pool. Chunk results are
    /// combined in chunk order, so the output is identical for any thread
    /// count.
    pub fn evaluate_parallel(&self, weights: &[f64], grad: &mut [f64]) -> f64 {
        self.check(weights, grad);
        let (state_w, trans_w) = self.split(weights);
        let effective = effective_transitions(state_w, trans_w, self.num_tags, &self.prev_tag_ids);
        grad.fill(0.0);
        let mut trans_grad = vec![0.0; trans_w.len()];
        let mut value = 0.0;
        let chunks: Vec<&[Instance]> = self.instances.chunks(CHUNK).collect();
        for wave in chunks.chunks(WAVE) {
            let partials: Vec<Partial> = wave
                .par_iter()
                .map(|chunk| {
                    let mut partial = Partial {
                        value: 0.0,
                        trans: vec![0.0; trans_w.len()],
                        state: SparseSink {
                            num_tags: self.num_tags,
                            slots: HashMap::new(),
                            features: Vec::new(),
                            rows: Vec::new(),
                        },
                    };
                    for inst in *chunk {
                        partial.value += self.accumulate(inst, state_w, &effective, &mut partial.state, &mut partial.trans);
                    }
                    partial
                })
                .collect();
            for partial in partials {
                value += partial.value;
                for (g, v) in trans_grad.iter_mut().zip(&partial.trans) {
                    *g += v;
                }
                let n = self.num_tags;
                for (slot, &f) in partial.state.features.iter().enumerate() {
                    let base = f as usize * n;
                    for (g, v) in grad[base..base + n].iter_mut().zip(&partial.state.rows[slot * n..(slot + 1) * n]) {
                        *g += v;
                    }
                }
            }
        }
        self.finish(weights, value, &trans_grad, grad)
    }
}

/// Objective value and gradient of `weights` on `corpus`, with the L2
/// coefficient `c2`. The L1 term is left to the optimizer.
pub fn nll_and_gradient(
    weights: &[f64],
    corpus: &TaggedCorpus,
    index: &FeatureIndex,
    config: &FeatureConfig,
    c2: f64,
) -> Result<(f64, Vec<f64>)> {
    let objective = CrfObjective::new(corpus, index, config, c2);
    if weights.len() != objective.dimension() {
        return Err(Error::param(format!(
            "weight vector has length {}, expected {}",
            weights.len(),
            objective.dimension()
        )));
    }
    let mut grad = vec![0.0; weights.len()];
    let value = objective.evaluate(weights, &mut grad);
    Ok((value, grad))
}
