use std::fmt::Write;

use super::{ConfusionTable, CrossValReport, EvalReport, GridResult};

/// A rate as a percentage with three decimals.
pub fn percent(rate: f64) -> String {
    format!("{:.3}", rate * 100.0)
}

/// Per-fold data sizes with an average row.
pub fn statistics_csv(cv: &CrossValReport) -> String {
    let mut out = String::from("fold,train_words,test_known,test_unknown,test_total\n");
    for f in &cv.folds {
        let s = f.stats;
        writeln!(
            out,
            "{},{},{},{},{}",
            f.fold + 1,
            s.train_words,
            s.test_known,
            s.test_unknown,
            s.test_total
        )
        .unwrap();
    }
    let m = cv.mean_stats();
    writeln!(out, "average,{:.1},{:.1},{:.1},{:.1}", m[0], m[1], m[2], m[3]).unwrap();
    out
}

/// Known, unknown and overall accuracy averaged over folds (macro) and
/// pooled over tokens (micro).
pub fn accuracy_csv(cv: &CrossValReport) -> String {
    let mut out = String::from("tagger,tagset,average,known_words,unknown_words,overall\n");
    for (name, a) in [("macro", cv.macro_mean), ("micro", cv.micro)] {
        writeln!(
            out,
            "{},{},{name},{},{},{}",
            cv.tagger,
            cv.tagset,
            percent(a.known),
            percent(a.unknown),
            percent(a.overall)
        )
        .unwrap();
    }
    out
}

pub fn fold_accuracy_csv(cv: &CrossValReport) -> String {
    let mut out = String::from("fold,known_words,unknown_words,overall\n");
    for f in &cv.folds {
        let r = &f.report;
        writeln!(
            out,
            "{},{},{},{}",
            f.fold + 1,
            percent(r.known_accuracy()),
            percent(r.unknown_accuracy()),
            percent(r.overall_accuracy())
        )
        .unwrap();
    }
    out
}

/// Precision, recall and F1 per tag that occurs in gold or predictions,
/// followed by weighted and macro averages.
pub fn prf_csv(report: &EvalReport) -> String {
    let mut out = String::from("tag,precision,recall,f1-score,support,precision_defined\n");
    for m in report.per_tag().iter().filter(|m| m.support > 0 || m.predicted > 0) {
        writeln!(
            out,
            "{},{:.4},{:.4},{:.4},{},{}",
            m.tag, m.precision, m.recall, m.f1, m.support, m.precision_defined
        )
        .unwrap();
    }
    for (name, a) in [("weighted avg", report.weighted()), ("macro avg", report.macro_avg())] {
        writeln!(
            out,
            "{name},{:.4},{:.4},{:.4},{},true",
            a.precision,
            a.recall,
            a.f1,
            report.total()
        )
        .unwrap();
    }
    out
}

/// Gold tags as rows, predicted tags as columns.
pub fn confusion_csv(table: &ConfusionTable) -> String {
    let mut out = String::from("gold\\predicted");
    for l in &table.labels {
        write!(out, ",{l}").unwrap();
    }
    out.push('\n');
    for (label, row) in table.labels.iter().zip(&table.cells) {
        out.push_str(label);
        for c in row {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Headline numbers of a cross-validation run as `key=value` lines.
pub fn metrics_text(cv: &CrossValReport) -> String {
    let mut out = String::new();
    let best = cv.best_fold();
    let lines = [
        ("tagger", cv.tagger.to_string()),
        ("tagset", cv.tagset.clone()),
        ("k", cv.k.to_string()),
        ("seed", cv.seed.to_string()),
        ("macro_known_accuracy", percent(cv.macro_mean.known)),
        ("macro_unknown_accuracy", percent(cv.macro_mean.unknown)),
        ("macro_overall_accuracy", percent(cv.macro_mean.overall)),
        ("micro_known_accuracy", percent(cv.micro.known)),
        ("micro_unknown_accuracy", percent(cv.micro.unknown)),
        ("micro_overall_accuracy", percent(cv.micro.overall)),
        ("best_fold", (best.fold + 1).to_string()),
        ("best_fold_overall_accuracy", percent(best.report.overall_accuracy())),
    ];
    for (k, v) in lines {
        writeln!(out, "{k}={v}").unwrap();
    }
    out
}

/// Metrics of a single evaluation as `key=value` lines.
pub fn report_text(report: &EvalReport) -> String {
    let w = report.weighted();
    let m = report.macro_avg();
    let lines = [
        ("tokens", report.total().to_string()),
        ("known_tokens", report.known().to_string()),
        ("unknown_tokens", report.unknown().to_string()),
        ("known_accuracy", percent(report.known_accuracy())),
        ("unknown_accuracy", percent(report.unknown_accuracy())),
        ("overall_accuracy", percent(report.overall_accuracy())),
        ("weighted_precision", format!("{:.4}", w.precision)),
        ("weighted_recall", format!("{:.4}", w.recall)),
        ("weighted_f1", format!("{:.4}", w.f1)),
        ("macro_precision", format!("{:.4}", m.precision)),
        ("macro_recall", format!("{:.4}", m.recall)),
        ("macro_f1", format!("{:.4}", m.f1)),
    ];
    let mut out = String::new();
    for (k, v) in lines {
        writeln!(out, "{k}={v}").unwrap();
    }
    out
}

/// One row per grid point with its mean accuracies; the selected pair is
/// marked.
pub fn grid_csv(grid: &GridResult) -> String {
    let mut out = String::from("c1,c2,score,known_words,unknown_words,overall,selected\n");
    for (i, row) in grid.rows.iter().enumerate() {
        let m = row.report.macro_mean;
        writeln!(
            out,
            "{},{},{:.6},{},{},{},{}",
            row.c1,
            row.c2,
            row.score,
            percent(m.known),
            percent(m.unknown),
            percent(m.overall),
            i == grid.best
        )
        .unwrap();
    }
    out
}
