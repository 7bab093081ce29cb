use rayon::prelude::*;

use super::{evaluate, EvalReport};
use crate::corpus::{kfold, split_known_unknown, TaggedCorpus};
use crate::error::{Error, Result};
use crate::tagger::{train, TaggerKind, TaggerSettings};

/// Data sizes of one fold, in tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldStats {
    pub train_words: usize,
    pub test_known: usize,
    pub test_unknown: usize,
    pub test_total: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoldResult {
    /// Zero-based fold index.
    pub fold: usize,
    /// Corpus indices of the sentences tested in this fold.
    pub test_sentences: Vec<usize>,
    pub stats: FoldStats,
    pub report: EvalReport,
}

/// Means of the fold accuracies.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AccuracyTriple {
    pub known: f64,
    pub unknown: f64,
    pub overall: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValReport {
    pub tagger: TaggerKind,
    pub tagset: String,
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    /// Unweighted mean over folds.
    pub macro_mean: AccuracyTriple,
    /// Pooled over all test tokens.
    pub micro: AccuracyTriple,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

impl CrossValReport {
    fn new(tagger: TaggerKind, tagset: String, k: usize, seed: u64, folds: Vec<FoldResult>) -> Self {
        let macro_mean = AccuracyTriple {
            known: mean(folds.iter().map(|f| f.report.known_accuracy())),
            unknown: mean(folds.iter().map(|f| f.report.unknown_accuracy())),
            overall: mean(folds.iter().map(|f| f.report.overall_accuracy())),
        };
        let sum = |g: fn(&EvalReport) -> usize| folds.iter().map(|f| g(&f.report)).sum::<usize>();
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let micro = AccuracyTriple {
            known: ratio(sum(EvalReport::known_correct), sum(EvalReport::known)),
            unknown: ratio(sum(EvalReport::unknown_correct), sum(EvalReport::unknown)),
            overall: ratio(sum(EvalReport::correct), sum(EvalReport::total)),
        };
        Self {
            tagger,
            tagset,
            k,
            seed,
            folds,
            macro_mean,
            micro,
        }
    }

    /// Mean of each statistics column.
    pub fn mean_stats(&self) -> [f64; 4] {
        let col = |g: fn(&FoldStats) -> usize| mean(self.folds.iter().map(|f| g(&f.stats) as f64));
        [
            col(|s| s.train_words),
            col(|s| s.test_known),
            col(|s| s.test_unknown),
            col(|s| s.test_total),
        ]
    }

    /// Fold with the highest overall accuracy; ties go to the earlier fold.
    pub fn best_fold(&self) -> &FoldResult {
        let mut best = &self.folds[0];
        for f in &self.folds[1..] {
            if f.report.overall_accuracy() > best.report.overall_accuracy() {
                best = f;
            }
        }
        best
    }
}

/// Trains on all folds but one and tests on the held-out fold, for every
/// fold. Folds run in parallel; results are ordered by fold.
pub fn cross_validate(corpus: &TaggedCorpus, k: usize, seed: u64, settings: &TaggerSettings) -> Result<CrossValReport> {
    let spec = kfold(corpus, k, seed)?;
    let folds = (0..k)
        .into_par_iter()
        .map(|fold| {
            let run = || -> Result<FoldResult> {
                let test_sentences = spec.test_indices(fold);
                let train_set = corpus.subset(&spec.train_indices(fold))?;
                let test_set = corpus.subset(&test_sentences)?;
                let split = split_known_unknown(&train_set, &test_set);
                log::info!("fold {}/{k}: training {} on {} sentences", fold + 1, settings.kind, train_set.len());
                let (model, _) = train(&train_set, settings)?;
                let predicted = model.tag_corpus(&test_set)?;
                let report = evaluate(&test_set, &predicted, &split.known)?;
                Ok(FoldResult {
                    fold,
                    test_sentences,
                    stats: FoldStats {
                        train_words: train_set.token_count(),
                        test_known: split.known.len(),
                        test_unknown: split.unknown.len(),
                        test_total: split.total(),
                    },
                    report,
                })
            };
            run().map_err(|e| Error::Fold {
                fold: fold + 1,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossValReport::new(
        settings.kind,
        corpus.inventory().name().to_string(),
        k,
        seed,
        folds,
    ))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    Overall,
    Known,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub metric: Metric,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            c1: vec![0.0, 0.001, 0.004, 0.016, 0.064, 0.256],
            c2: vec![0.0, 0.001, 0.002, 0.004, 0.016, 0.064, 0.256],
            metric: Metric::Overall,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.c1.is_empty() || self.c2.is_empty() {
            return Err(Error::param("grid must contain at least one c1 and one c2 value"));
        }
        if let Some(v) = self.c1.iter().chain(&self.c2).find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::param(format!("grid values must be finite and non-negative, got {v}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub c1: f64,
    pub c2: f64,
    pub score: f64,
    pub report: CrossValReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridResult {
    /// One row per `(c1, c2)` pair, `c1` varying slowest.
    pub rows: Vec<GridRow>,
    pub best: usize,
}

impl GridResult {
    pub fn best_row(&self) -> &GridRow {
        &self.rows[self.best]
    }
}

/// Cross-validates the CRF at every grid point and picks the best by the
/// grid's metric. Ties go to the smaller `c1 + c2`, then the smaller `c1`.
pub fn grid_search(
    corpus: &TaggedCorpus,
    k: usize,
    seed: u64,
    settings: &TaggerSettings,
    grid: &GridSpec,
) -> Result<GridResult> {
    grid.validate()?;
    let mut rows = Vec::with_capacity(grid.c1.len() * grid.c2.len());
    for &c1 in &grid.c1 {
        for &c2 in &grid.c2 {
            let mut point = settings.clone();
            point.kind = TaggerKind::Crf;
            point.crf.c1 = c1;
            point.crf.c2 = c2;
            let report = cross_validate(corpus, k, seed, &point).map_err(|e| Error::GridPoint {
                c1,
                c2,
                source: Box::new(e),
            })?;
            let score = match grid.metric {
                Metric::Overall => report.macro_mean.overall,
                Metric::Known => report.macro_mean.known,
                Metric::Unknown => report.macro_mean.unknown,
            };
            log::info!("grid point c1={c1} c2={c2}: {score:.6}");
            rows.push(GridRow { c1, c2, score, report });
        }
    }
    let mut best = 0;
    for (i, row) in rows.iter().enumerate().skip(1) {
        let b = &rows[best];
        let better = row.score > b.score
            || (row.score == b.score
                && (row.c1 + row.c2 < b.c1 + b.c2 || (row.c1 + row.c2 == b.c1 + b.c2 && row.c1 < b.c1)));
        if better {
            best = i;
        }
    }
    Ok(GridResult { rows, best })
}
