//! Precision, recall and confusion of predicted labels against a reference.
//!
//! Blocking/bubble pairs count toward accuracy but get no row in the
//! per-label table, and the pooled "overall" precision and recall are taken
//! over route labels only.

mod report;

pub use report::{render_report, ReportFormat};

use crate::classify::MatchResult;
use crate::ingest::RouteId;
use crate::jsonl::{self, JsonlError};
use crate::label::Label;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no labeled pairs to score")]
    Empty,
    #[error("unknown report format {0:?} (expected text, json or svg)")]
    UnknownFormat(String),
    #[error("{side} contains {id} more than once")]
    Duplicate { side: &'static str, id: RouteId },
    #[error(transparent)]
    Jsonl(#[from] JsonlError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One line of a reference label file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceLabel {
    #[serde(flatten)]
    pub id: RouteId,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    #[serde(flatten)]
    pub id: RouteId,
    pub predicted: Label,
    pub reference: Label,
}

pub fn read_references<R: BufRead>(source: R) -> Result<Vec<ReferenceLabel>, EvalError> {
    Ok(jsonl::read(source)?)
}

pub fn write_references<W: Write>(sink: W, labels: &[ReferenceLabel]) -> Result<(), EvalError> {
    Ok(jsonl::write(sink, labels)?)
}

/// Predictions paired with references by route id, plus whatever did not
/// pair up on either side.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Joined {
    pub pairs: Vec<LabeledPair>,
    pub unmatched_predictions: Vec<RouteId>,
    pub unmatched_references: Vec<RouteId>,
}

impl Joined {
    pub fn is_complete(&self) -> bool {
        self.unmatched_predictions.is_empty() && self.unmatched_references.is_empty()
    }
}

/// Pairs are returned sorted by id.
pub fn join(predictions: &[MatchResult], references: &[ReferenceLabel]) -> Result<Joined, EvalError> {
    let mut refs: HashMap<RouteId, Label> = HashMap::with_capacity(references.len());
    for r in references {
        if refs.insert(r.id, r.label).is_some() {
            return Err(EvalError::Duplicate {
                side: "reference labels",
                id: r.id,
            });
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Joined::default();
    for p in predictions {
        if !seen.insert(p.id) {
            return Err(EvalError::Duplicate {
                side: "predictions",
                id: p.id,
            });
        }
        match refs.get(&p.id) {
            Some(&reference) => out.pairs.push(LabeledPair {
                id: p.id,
                predicted: p.label,
                reference,
            }),
            None => out.unmatched_predictions.push(p.id),
        }
    }
    out.unmatched_references = refs.keys().filter(|id| !seen.contains(id)).copied().collect();
    out.pairs.sort_by_key(|p| p.id);
    out.unmatched_predictions.sort();
    out.unmatched_references.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelStats {
    /// 0 when nothing was predicted as this label (see `precision_undefined`).
    pub precision: f64,
    /// 0 when the label never occurs in the reference.
    pub recall: f64,
    /// Reference occurrences.
    pub count: u64,
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

impl LabelStats {
    fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let (precision, precision_undefined) = ratio(tp, tp + fp);
        let (recall, recall_undefined) = ratio(tp, tp + fn_);
        LabelStats {
            precision,
            recall,
            count: tp + fn_,
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            precision_undefined,
            recall_undefined,
        }
    }
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

/// Reference labels down the rows, predictions across the columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Confusion {
    pub labels: Vec<Label>,
    pub counts: Vec<Vec<u64>>,
    /// Each row divided by its total; all-zero rows stay zero.
    pub normalized: Vec<Vec<f64>>,
}

impl Confusion {
    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_total(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }
}

/// Labels are every label seen on either side, in alphabetical order.
pub fn confusion(pairs: &[LabeledPair]) -> Confusion {
    let labels: Vec<Label> = pairs
        .iter()
        .flat_map(|p| [p.reference, p.predicted])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<Label, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let n = labels.len();
    let mut counts = vec![vec![0u64; n]; n];
    for p in pairs {
        counts[index[&p.reference]][index[&p.predicted]] += 1;
    }
    let normalized = counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            row.iter()
                .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
                .collect()
        })
        .collect();
    Confusion {
        labels,
        counts,
        normalized,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Route labels only; blocking/bubble is left out of the table.
    pub per_label: BTreeMap<Label, LabelStats>,
    pub confusion: Confusion,
    /// Pooled over the route labels in `per_label`.
    pub overall_precision: f64,
    pub overall_recall: f64,
    /// Unweighted mean over labels whose value is defined.
    pub macro_precision: f64,
    pub macro_recall: f64,
    /// Exact matches over all pairs, blocking/bubble included.
    pub accuracy: f64,
    pub total: u64,
}

impl EvalReport {
    /// Sum of reference counts over the table rows.
    pub fn table_count(&self) -> u64 {
        self.per_label.values().map(|s| s.count).sum()
    }
}

pub fn score(pairs: &[LabeledPair]) -> Result<EvalReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::Empty);
    }
    let confusion = confusion(pairs);
    let n = confusion.labels.len();
    let mut per_label = BTreeMap::new();
    let (mut tp_sum, mut fp_sum, mut fn_sum) = (0, 0, 0);
    for (i, &label) in confusion.labels.iter().enumerate() {
        if label == Label::BlockingBubble {
            continue;
        }
        let tp = confusion.counts[i][i];
        let fp = (0..n).map(|r| confusion.counts[r][i]).sum::<u64>() - tp;
        let fn_ = confusion.row_total(i) - tp;
        tp_sum += tp;
        fp_sum += fp;
        fn_sum += fn_;
        per_label.insert(label, LabelStats::from_counts(tp, fp, fn_));
    }
    let mean = |values: Vec<f64>| {
        if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        }
    };
    let macro_precision = mean(
        per_label
            .values()
            .filter(|s| !s.precision_undefined)
            .map(|s| s.precision)
            .collect(),
    );
    let macro_recall = mean(
        per_label
            .values()
            .filter(|s| !s.recall_undefined)
            .map(|s| s.recall)
            .collect(),
    );
    let total = pairs.len() as u64;
    Ok(EvalReport {
        per_label,
        overall_precision: ratio(tp_sum, tp_sum + fp_sum).0,
        overall_recall: ratio(tp_sum, tp_sum + fn_sum).0,
        macro_precision,
        macro_recall,
        accuracy: confusion.trace() as f64 / total as f64,
        total,
        confusion,
    })
}

#[cfg(test)]
mod tests;
