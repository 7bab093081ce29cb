//! Scoring, cross-validation, grid search and report rendering.

mod crossval;
mod report;

use std::collections::HashSet;

use crate::corpus::{Tag, TaggedCorpus, TokenPos};
use crate::error::{Error, Result};

pub use crossval::{
    cross_validate, grid_search, AccuracyTriple, CrossValReport, FoldResult, FoldStats, GridResult, GridRow, GridSpec,
    Metric,
};
pub use report::{
    accuracy_csv, confusion_csv, fold_accuracy_csv, grid_csv, metrics_text, percent, prf_csv, report_text, statistics_csv,
};

#[derive(Clone, Debug, PartialEq)]
pub struct TagMetrics {
    pub tag: Tag,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold occurrences.
    pub support: usize,
    /// Predicted occurrences.
    pub predicted: usize,
    /// False when the tag was never predicted; precision is then reported
    /// as 0.
    pub precision_defined: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    labels: Vec<Tag>,
    /// Gold label by predicted label.
    confusion: Vec<Vec<usize>>,
    total: usize,
    correct: usize,
    known: usize,
    known_correct: usize,
    per_tag: Vec<TagMetrics>,
    weighted: Averages,
    macro_avg: Averages,
}

fn rate(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    /// Gold inventory tags followed by any extra predicted tags.
    pub fn labels(&self) -> &[Tag] {
        &self.labels
    }

    pub fn confusion(&self) -> &[Vec<usize>] {
        &self.confusion
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn correct(&self) -> usize {
        self.correct
    }

    pub fn known(&self) -> usize {
        self.known
    }

    pub fn unknown(&self) -> usize {
        self.total - self.known
    }

    pub fn known_correct(&self) -> usize {
        self.known_correct
    }

    pub fn unknown_correct(&self) -> usize {
        self.correct - self.known_correct
    }

    pub fn overall_accuracy(&self) -> f64 {
        rate(self.correct, self.total)
    }

    /// Zero when there are no known tokens.
    pub fn known_accuracy(&self) -> f64 {
        rate(self.known_correct, self.known)
    }

    /// Zero when there are no unknown tokens.
    pub fn unknown_accuracy(&self) -> f64 {
        rate(self.unknown_correct(), self.unknown())
    }

    pub fn per_tag(&self) -> &[TagMetrics] {
        &self.per_tag
    }

    pub fn metrics(&self, tag: &str) -> Option<&TagMetrics> {
        self.per_tag.iter().find(|m| m.tag.as_str() == tag)
    }

    /// Support-weighted averages over gold tags.
    pub fn weighted(&self) -> Averages {
        self.weighted
    }

    /// Unweighted averages over tags that occur in gold or predictions.
    pub fn macro_avg(&self) -> Averages {
        self.macro_avg
    }
}

/// Scores `predicted` against `gold`. Positions listed in `known` count as
/// known words; all others as unknown.
pub fn evaluate(gold: &TaggedCorpus, predicted: &[Vec<Tag>], known: &[TokenPos]) -> Result<EvalReport> {
    if predicted.len() != gold.len() {
        return Err(Error::param(format!(
            "predicted {} sentences for {} gold sentences",
            predicted.len(),
            gold.len()
        )));
    }
    for (i, (g, p)) in gold.sentences().iter().zip(predicted).enumerate() {
        if g.len() != p.len() {
            return Err(Error::param(format!(
                "sentence {}: predicted {} tags for {} tokens",
                i + 1,
                p.len(),
                g.len()
            )));
        }
    }
    let mut labels: Vec<Tag> = gold.inventory().tags().to_vec();
    for tag in predicted.iter().flatten() {
        if !labels.contains(tag) {
            labels.push(tag.clone());
        }
    }
    let index = |t: &Tag| labels.iter().position(|l| l == t).expect("label collected above");
    let known: HashSet<TokenPos> = known.iter().copied().collect();
    let n = labels.len();
    let mut confusion = vec![vec![0usize; n]; n];
    let (mut total, mut correct, mut known_total, mut known_correct) = (0, 0, 0, 0);
    for (s, (g, p)) in gold.sentences().iter().zip(predicted).enumerate() {
        for (i, (gt, pt)) in g.tags().iter().zip(p).enumerate() {
            let hit = gt == pt;
            confusion[index(gt)][index(pt)] += 1;
            total += 1;
            correct += usize::from(hit);
            if known.contains(&TokenPos {
                sentence: s,
                position: i,
            }) {
                known_total += 1;
                known_correct += usize::from(hit);
            }
        }
    }
    let per_tag: Vec<TagMetrics> = (0..n)
        .map(|t| {
            let diag = confusion[t][t];
            let support: usize = confusion[t].iter().sum();
            let predicted: usize = confusion.iter().map(|row| row[t]).sum();
            let precision = rate(diag, predicted);
            let recall = rate(diag, support);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            TagMetrics {
                tag: labels[t].clone(),
                precision,
                recall,
                f1,
                support,
                predicted,
                precision_defined: predicted > 0,
            }
        })
        .collect();
    let mut weighted = Averages::default();
    for m in &per_tag {
        let w = m.support as f64;
        weighted.precision += w * m.precision;
        weighted.recall += w * m.recall;
        weighted.f1 += w * m.f1;
    }
    if total > 0 {
        weighted.precision /= total as f64;
        weighted.recall /= total as f64;
        weighted.f1 /= total as f64;
    }
    let active: Vec<&TagMetrics> = per_tag.iter().filter(|m| m.support > 0 || m.predicted > 0).collect();
    let mut macro_avg = Averages::default();
    if !active.is_empty() {
        let k = active.len() as f64;
        macro_avg.precision = active.iter().map(|m| m.precision).sum::<f64>() / k;
        macro_avg.recall = active.iter().map(|m| m.recall).sum::<f64>() / k;
        macro_avg.f1 = active.iter().map(|m| m.f1).sum::<f64>() / k;
    }
    Ok(EvalReport {
        labels,
        confusion,
        total,
        correct,
        known: known_total,
        known_correct,
        per_tag,
        weighted,
        macro_avg,
    })
}

/// Confusion matrix restricted to the most frequent gold tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionTable {
    /// Row and column labels; the last is `OTHER` when tags were folded.
    pub labels: Vec<String>,
    pub cells: Vec<Vec<usize>>,
}

impl ConfusionTable {
    pub fn total(&self) -> usize {
        self.cells.iter().flatten().sum()
    }
}

pub const OTHER: &str = "OTHER";

/// Keeps the `top_n` tags with the largest gold support (ties in label
/// order) and folds the rest into an `OTHER` row and column.
pub fn render_confusion(report: &EvalReport, top_n: usize) -> Result<ConfusionTable> {
    if top_n == 0 {
        return Err(Error::param("top_n must be at least 1"));
    }
    let n = report.labels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| report.per_tag[b].support.cmp(&report.per_tag[a].support).then(a.cmp(&b)));
    let folded = top_n < n;
    let kept = &order[..top_n.min(n)];
    let width = kept.len() + usize::from(folded);
    let mut slot = vec![width - 1; n];
    for (i, &t) in kept.iter().enumerate() {
        slot[t] = i;
    }
    let mut cells = vec![vec![0; width]; width];
    for g in 0..n {
        for p in 0..n {
            cells[slot[g]][slot[p]] += report.confusion[g][p];
        }
    }
    let mut labels: Vec<String> = kept.iter().map(|&t| report.labels[t].to_string()).collect();
    if folded {
        labels.push(OTHER.to_string());
    }
    Ok(ConfusionTable { labels, cells })
}
