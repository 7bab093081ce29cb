//! Limited-memory BFGS minimization with an orthant-wise variant for an
//! added L1 penalty.
//!
//! The search direction comes from the two-loop recursion over the last `m`
//! displacement/gradient-change pairs. Steps are accepted by Armijo
//! backtracking. With `l1 > 0` the method minimizes `f(x) + l1 * |x|_1`: it
//! steers by the pseudo-gradient of the penalized objective, constrains the
//! direction to agree with it, and projects every trial point back onto the
//! orthant of the current iterate.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("objective or gradient is not finite at iteration {iteration}")]
    NonFinite { iteration: usize },

    /// Backtracking failed to find an acceptable step. `x` is the best point
    /// found so far and `value` its penalized objective.
    #[error("line search stalled at iteration {iteration} (objective {value})")]
    Stalled { iteration: usize, x: Vec<f64>, value: f64 },

    #[error("invalid optimizer setting: {0}")]
    Config(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LbfgsConfig {
    /// Number of correction pairs kept.
    pub memory: usize,
    pub max_iterations: usize,
    /// Convergence threshold on the (pseudo-)gradient.
    pub epsilon: f64,
    /// L1 coefficient; zero runs plain L-BFGS.
    pub l1: f64,
    /// Sufficient-decrease constant of the Armijo condition.
    pub armijo: f64,
    /// Step shrink factor per backtracking trial.
    pub shrink: f64,
    pub max_backtracks: usize,
}

impl Default for LbfgsConfig {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iterations: 200,
            epsilon: 1e-5,
            l1: 0.0,
            armijo: 1e-4,
            shrink: 0.5,
            max_backtracks: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// `|g|_inf <= epsilon`.
    GradientInf,
    /// `|g|_2 / max(1, |x|_2) <= epsilon`.
    GradientRelative,
    MaxIterations,
}

/// One accepted iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Penalized objective after the step.
    pub objective: f64,
    pub grad_inf: f64,
    pub step: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub initial_objective: f64,
    pub iterations: Vec<IterationRecord>,
    pub termination: Termination,
}

impl Trace {
    pub fn final_objective(&self) -> f64 {
        self.iterations.last().map_or(self.initial_objective, |r| r.objective)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn l1_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// Pseudo-gradient of `f + l1 * |x|_1`: the minimum-norm subgradient.
fn pseudo_gradient(x: &[f64], g: &[f64], l1: f64, out: &mut [f64]) {
    for ((o, &xi), &gi) in out.iter_mut().zip(x).zip(g) {
        *o = if xi > 0.0 {
            gi + l1
        } else if xi < 0.0 {
            gi - l1
        } else if gi + l1 < 0.0 {
            gi + l1
        } else if gi - l1 > 0.0 {
            gi - l1
        } else {
            0.0
        };
    }
}

struct History {
    pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)>,
    capacity: usize,
}

impl History {
    fn new(capacity: usize) -> Self {
        Self {
            pairs: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    fn push(&mut self, s: Vec<f64>, y: Vec<f64>) {
        let sy = dot(&s, &y);
        // curvature pairs that would break positive definiteness are skipped
        if sy <= 1e-10 * dot(&y, &y).max(f64::MIN_POSITIVE) {
            return;
        }
        if self.pairs.len() == self.capacity {
            self.pairs.pop_front();
        }
        self.pairs.push_back((s, y, 1.0 / sy));
    }

    fn clear(&mut self) {
        self.pairs.clear();
    }

    /// `-H g` by the two-loop recursion.
    fn direction(&self, g: &[f64]) -> Vec<f64> {
        let mut q: Vec<f64> = g.to_vec();
        let mut alpha = vec![0.0; self.pairs.len()];
        for (k, (s, y, rho)) in self.pairs.iter().enumerate().rev() {
            let a = rho * dot(s, &q);
            alpha[k] = a;
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= a * yi;
            }
        }
        if let Some((s, y, _)) = self.pairs.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        }
        for (k, (s, y, rho)) in self.pairs.iter().enumerate() {
            let b = rho * dot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (alpha[k] - b) * si;
            }
        }
        q.iter_mut().for_each(|v| *v = -*v);
        q
    }
}

/// Minimizes `f(x) + config.l1 * |x|_1` from `x0`.
///
/// `objective(x, grad)` returns the smooth part `f(x)` and writes its
/// gradient into `grad`.
pub fn lbfgs_minimize<F>(mut objective: F, x0: &[f64], config: &LbfgsConfig) -> Result<(Vec<f64>, Trace), OptimizeError>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    if config.memory == 0 || config.max_backtracks == 0 {
        return Err(OptimizeError::Config("memory and max_backtracks must be positive".into()));
    }
    if !(config.epsilon > 0.0) || !(config.l1 >= 0.0) || !(0.0 < config.shrink && config.shrink < 1.0) {
        return Err(OptimizeError::Config("epsilon > 0, l1 >= 0 and 0 < shrink < 1 required".into()));
    }
    let n = x0.len();
    let l1 = config.l1;
    let orthant_wise = l1 > 0.0;

    let mut x = x0.to_vec();
    let mut g = vec![0.0; n];
    let smooth = objective(&x, &mut g);
    let mut value = smooth + l1 * l1_norm(&x);
    if !value.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(OptimizeError::NonFinite { iteration: 0 });
    }
    let mut pg = vec![0.0; n];
    let steer = |x: &[f64], g: &[f64], pg: &mut Vec<f64>| {
        if orthant_wise {
            pseudo_gradient(x, g, l1, pg);
        } else {
            pg.copy_from_slice(g);
        }
    };
    steer(&x, &g, &mut pg);

    let mut trace = Trace {
        initial_objective: value,
        iterations: Vec::new(),
        termination: Termination::MaxIterations,
    };
    let converged = |x: &[f64], pg: &[f64]| -> Option<Termination> {
        if norm_inf(pg) <= config.epsilon {
            Some(Termination::GradientInf)
        } else if dot(pg, pg).sqrt() / dot(x, x).sqrt().max(1.0) <= config.epsilon {
            Some(Termination::GradientRelative)
        } else {
            None
        }
    };
    if let Some(t) = converged(&x, &pg) {
        trace.termination = t;
        return Ok((x, trace));
    }

    let mut history = History::new(config.memory);
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];

    for iteration in 1..=config.max_iterations {
        let mut d = history.direction(&pg);
        if orthant_wise {
            for (di, &pgi) in d.iter_mut().zip(&pg) {
                if *di * pgi >= 0.0 {
                    *di = 0.0;
                }
            }
        }
        let mut slope = dot(&pg, &d);
        if !(slope < 0.0) {
            // not a descent direction: restart from steepest descent
            history.clear();
            d = pg.iter().map(|v| -v).collect();
            slope = dot(&pg, &d);
        }
        let orthant: Vec<f64> = if orthant_wise {
            x.iter()
                .zip(&pg)
                .map(|(&xi, &pgi)| if xi != 0.0 { xi.signum() } else { -pgi.signum() })
                .collect()
        } else {
            Vec::new()
        };

        let mut step = if history.pairs.is_empty() {
            1.0 / dot(&d, &d).sqrt()
        } else {
            1.0
        };
        let mut accepted = None;
        for trial in 1..=config.max_backtracks {
            for i in 0..n {
                let mut xi = x[i] + step * d[i];
                if orthant_wise && xi * orthant[i] <= 0.0 {
                    xi = 0.0;
                }
                x_new[i] = xi;
            }
            let smooth = objective(&x_new, &mut g_new);
            let trial_value = smooth + l1 * l1_norm(&x_new);
            if !trial_value.is_finite() || g_new.iter().any(|v| !v.is_finite()) {
                if trial_value.is_nan() || g_new.iter().any(|v| v.is_nan()) {
                    return Err(OptimizeError::NonFinite { iteration });
                }
                step *= config.shrink;
                continue;
            }
            let decrease = if orthant_wise {
                let moved: f64 = (0..n).map(|i| pg[i] * (x_new[i] - x[i])).sum();
                config.armijo * moved
            } else {
                config.armijo * step * slope
            };
            if trial_value <= value + decrease {
                accepted = Some((trial_value, trial));
                break;
            }
            step *= config.shrink;
        }
        let Some((new_value, evaluations)) = accepted else {
            return Err(OptimizeError::Stalled { iteration, x, value });
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        history.push(s, y);
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        value = new_value;
        steer(&x, &g, &mut pg);

        let grad_inf = norm_inf(&pg);
        log::debug!("iteration {iteration}: objective {value:.6e}, |g|inf {grad_inf:.3e}, step {step:.3e}");
        trace.iterations.push(IterationRecord {
            iteration,
            objective: value,
            grad_inf,
            step,
            evaluations,
        });
        if let Some(t) = converged(&x, &pg) {
            trace.termination = t;
            return Ok((x, trace));
        }
    }
    Ok((x, trace))
}
