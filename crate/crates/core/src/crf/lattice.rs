use crate::error::{Error, Result};

/// `log(sum(exp(v)))` without overflow; `-inf` for an empty or all `-inf`
/// input.
pub fn log_sum_exp(values: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.into_iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Above this combined score range the scaled recursions could underflow.
const SCALED_LIMIT: f64 = 600.0;

/// Log-potentials of a first-order chain over one sentence.
///
/// `state(i, t)` scores tag `t` at position `i`. Transitions are a
/// `(T+1) x (T+1)` table: rows are the previous tag with row `T` standing
/// for the sentence start, columns the next tag with column `T` standing for
/// the sentence end.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    num_tags: usize,
    len: usize,
    state: Vec<f64>,
    trans: Vec<f64>,
}

/// Posterior node and edge probabilities of a lattice.
#[derive(Clone, Debug)]
pub struct Marginals {
    num_tags: usize,
    len: usize,
    log_z: f64,
    node: Vec<f64>,
    edge: Vec<f64>,
}

impl Marginals {
    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    /// `P(t_i = t | sentence)`.
    pub fn node(&self, i: usize, t: usize) -> f64 {
        self.node[i * self.num_tags + t]
    }

    /// `P(t_i = a, t_{i+1} = b | sentence)` for `i < len - 1`.
    pub fn edge(&self, i: usize, a: usize, b: usize) -> f64 {
        self.edge[(i * self.num_tags + a) * self.num_tags + b]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl Lattice {
    pub fn new(num_tags: usize, state: Vec<f64>, trans: Vec<f64>) -> Result<Self> {
        if num_tags == 0 {
            return Err(Error::param("lattice needs at least one tag"));
        }
        if state.is_empty() || state.len() % num_tags != 0 {
            return Err(Error::param("state scores must be a non-empty len x T table"));
        }
        if trans.len() != (num_tags + 1) * (num_tags + 1) {
            return Err(Error::param("transition table must be (T+1) x (T+1)"));
        }
        if state.iter().chain(&trans).any(|v| !v.is_finite()) {
            return Err(Error::param("lattice scores must be finite"));
        }
        Ok(Self {
            num_tags,
            len: state.len() / num_tags,
            state,
            trans,
        })
    }

    /// Unchecked constructor for internal callers that already hold
    /// consistent shapes.
    pub(crate) fn from_parts(num_tags: usize, state: Vec<f64>, trans: Vec<f64>) -> Self {
        debug_assert_eq!(trans.len(), (num_tags + 1) * (num_tags + 1));
        Self {
            num_tags,
            len: state.len() / num_tags,
            state,
            trans,
        }
    }

    pub fn num_tags(&self) -> usize {
        self.num_tags
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn state(&self, i: usize, t: usize) -> f64 {
        self.state[i * self.num_tags + t]
    }

    /// Transition score; `from == T` is the start, `to == T` the end.
    #[inline]
    pub fn trans(&self, from: usize, to: usize) -> f64 {
        self.trans[from * (self.num_tags + 1) + to]
    }

    fn start(&self) -> usize {
        self.num_tags
    }

    /// Unnormalized log-score of a complete tag sequence.
    pub fn sequence_score(&self, tags: &[usize]) -> Result<f64> {
        if tags.len() != self.len {
            return Err(Error::param(format!("expected {} tags, got {}", self.len, tags.len())));
        }
        if let Some(&t) = tags.iter().find(|&&t| t >= self.num_tags) {
            return Err(Error::param(format!("tag id {t} out of range")));
        }
        let mut score = self.trans(self.start(), tags[0]);
        for (i, &t) in tags.iter().enumerate() {
            score += self.state(i, t);
            if i > 0 {
                score += self.trans(tags[i - 1], t);
            }
        }
        Ok(score + self.trans(tags[self.len - 1], self.num_tags))
    }

    /// Forward log-scores `alpha(i, t)`: log-sum over prefixes ending in `t`
    /// at `i`, including the state score at `i`.
    pub fn forward(&self) -> Vec<f64> {
        let n = self.num_tags;
        let mut alpha = vec![0.0; self.len * n];
        for t in 0..n {
            alpha[t] = self.trans(self.start(), t) + self.state(0, t);
        }
        for i in 1..self.len {
            let (prev, cur) = alpha.split_at_mut(i * n);
            let prev = &prev[(i - 1) * n..];
            for b in 0..n {
                cur[b] = log_sum_exp((0..n).map(|a| prev[a] + self.trans(a, b))) + self.state(i, b);
            }
        }
        alpha
    }

    /// Backward log-scores `beta(i, t)`: log-sum over suffixes after `i`
    /// given `t` at `i`, including the end transition.
    pub fn backward(&self) -> Vec<f64> {
        let n = self.num_tags;
        let mut beta = vec![0.0; self.len * n];
        let last = self.len - 1;
        for t in 0..n {
            beta[last * n + t] = self.trans(t, n);
        }
        for i in (0..last).rev() {
            let (cur, next) = beta.split_at_mut((i + 1) * n);
            let cur = &mut cur[i * n..];
            for a in 0..n {
                cur[a] = log_sum_exp((0..n).map(|b| self.trans(a, b) + self.state(i + 1, b) + next[b]));
            }
        }
        beta
    }

    /// Log of the sum of `exp(sequence_score)` over all tag sequences.
    pub fn log_partition(&self) -> f64 {
        let alpha = self.forward();
        let last = (self.len - 1) * self.num_tags;
        log_sum_exp((0..self.num_tags).map(|t| alpha[last + t] + self.trans(t, self.num_tags)))
    }

    /// The same quantity as [`Lattice::log_partition`], from the backward
    /// recursion.
    pub fn log_partition_backward(&self) -> f64 {
        let beta = self.backward();
        log_sum_exp((0..self.num_tags).map(|t| self.trans(self.start(), t) + self.state(0, t) + beta[t]))
    }

    /// Node and edge posteriors with the log partition.
    pub fn marginals(&self) -> Marginals {
        let spread = |v: &[f64]| {
            let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            hi - lo
        };
        let state_spread = self.state.chunks(self.num_tags).map(spread).fold(0.0, f64::max);
        if spread(&self.trans) + state_spread < SCALED_LIMIT {
            self.marginals_scaled()
        } else {
            self.marginals_log()
        }
    }

    /// Forward-backward in probability space with per-position
    /// normalization.
    fn marginals_scaled(&self) -> Marginals {
        let n = self.num_tags;
        let len = self.len;
        let width = n + 1;
        let m_trans = self.trans.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp_trans: Vec<f64> = self.trans.iter().map(|t| (t - m_trans).exp()).collect();
        let mut psi = vec![0.0; len * n];
        let mut log_z = 0.0;
        for i in 0..len {
            let row = &self.state[i * n..(i + 1) * n];
            let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for t in 0..n {
                psi[i * n + t] = (row[t] - m).exp();
            }
            log_z += m + m_trans;
        }
        let mut alpha = vec![0.0; len * n];
        let mut scale = vec![0.0; len];
        for t in 0..n {
            alpha[t] = exp_trans[n * width + t] * psi[t];
        }
        for i in 0..len {
            if i > 0 {
                let (prev, cur) = alpha.split_at_mut(i * n);
                let prev = &prev[(i - 1) * n..];
                let cur = &mut cur[..n];
                cur.fill(0.0);
                for (a, &p) in prev.iter().enumerate() {
                    let row = &exp_trans[a * width..a * width + n];
                    for (c, &e) in cur.iter_mut().zip(row) {
                        *c += p * e;
                    }
                }
                for (c, &s) in cur.iter_mut().zip(&psi[i * n..]) {
                    *c *= s;
                }
            }
            let c: f64 = alpha[i * n..(i + 1) * n].iter().sum();
            for v in &mut alpha[i * n..(i + 1) * n] {
                *v /= c;
            }
            scale[i] = c;
            log_z += c.ln();
        }
        let last = (len - 1) * n;
        let end: f64 = (0..n).map(|t| alpha[last + t] * exp_trans[t * width + n]).sum();
        log_z += end.ln() + m_trans;
        let mut beta = vec![0.0; len * n];
        for t in 0..n {
            beta[last + t] = exp_trans[t * width + n] / end;
        }
        let mut weighted = vec![0.0; n];
        for i in (0..len - 1).rev() {
            for b in 0..n {
                weighted[b] = psi[(i + 1) * n + b] * beta[(i + 1) * n + b] / scale[i + 1];
            }
            for a in 0..n {
                let row = &exp_trans[a * width..a * width + n];
                beta[i * n + a] = row.iter().zip(&weighted).map(|(e, w)| e * w).sum();
            }
        }
        let node = alpha.iter().zip(&beta).map(|(a, b)| a * b).collect();
        let mut edge = vec![0.0; (len - 1) * n * n];
        for i in 0..len - 1 {
            for b in 0..n {
                weighted[b] = psi[(i + 1) * n + b] * beta[(i + 1) * n + b] / scale[i + 1];
            }
            for a in 0..n {
                let from = alpha[i * n + a];
                let row = &exp_trans[a * width..a * width + n];
                let out = &mut edge[(i * n + a) * n..(i * n + a + 1) * n];
                for ((o, e), w) in out.iter_mut().zip(row).zip(&weighted) {
                    *o = from * e * w;
                }
            }
        }
        Marginals {
            num_tags: n,
            len,
            log_z,
            node,
            edge,
        }
    }

    fn marginals_log(&self) -> Marginals {
        let n = self.num_tags;
        let alpha = self.forward();
        let beta = self.backward();
        let last = (self.len - 1) * n;
        let log_z = log_sum_exp((0..n).map(|t| alpha[last + t] + self.trans(t, n)));
        let node = alpha.iter().zip(&beta).map(|(a, b)| (a + b - log_z).exp()).collect();
        let mut edge = vec![0.0; (self.len - 1) * n * n];
        for i in 0..self.len - 1 {
            for a in 0..n {
                let from = alpha[i * n + a] - log_z;
                for b in 0..n {
                    let to = self.trans(a, b) + self.state(i + 1, b) + beta[(i + 1) * n + b];
                    edge[(i * n + a) * n + b] = (from + to).exp();
                }
            }
        }
        Marginals {
            num_tags: n,
            len: self.len,
            log_z,
            node,
            edge,
        }
    }

    /// Highest-scoring tag sequence and its score. Ties go to the lower tag
    /// id at every decision.
    pub fn viterbi(&self) -> (Vec<usize>, f64) {
        let n = self.num_tags;
        let mut delta: Vec<f64> = (0..n).map(|t| self.trans(self.start(), t) + self.state(0, t)).collect();
        let mut back = vec![0usize; self.len * n];
        let mut next = vec![0.0; n];
        for i in 1..self.len {
            for b in 0..n {
                let mut best = 0;
                let mut best_score = delta[0] + self.trans(0, b);
                for a in 1..n {
                    let s = delta[a] + self.trans(a, b);
                    if s > best_score {
                        best = a;
                        best_score = s;
                    }
                }
                back[i * n + b] = best;
                next[b] = best_score + self.state(i, b);
            }
            std::mem::swap(&mut delta, &mut next);
        }
        let mut best = 0;
        let mut best_score = delta[0] + self.trans(0, n);
        for t in 1..n {
            let s = delta[t] + self.trans(t, n);
            if s > best_score {
                best = t;
                best_score = s;
            }
        }
        let mut tags = vec![0; self.len];
        tags[self.len - 1] = best;
        for i in (1..self.len).rev() {
            tags[i - 1] = back[i * n + tags[i]];
        }
        (tags, best_score)
    }
}
