//! Imbalance-aware evaluation: confusion counts with explicit unknown
//! accounting, precision lift against the base rate, and precision at k over
//! ranked predictions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground-truth state of one key. Unknown labels are tallied separately and
/// never counted as positives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthLabel {
    Positive,
    Negative,
    Unknown,
}

/// The four confusion cells over keys with known labels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision(&self) -> Option<f64> {
        let denom = self.tp + self.fp;
        (denom > 0).then(|| self.tp as f64 / denom as f64)
    }

    pub fn recall(&self) -> Option<f64> {
        let denom = self.tp + self.fn_;
        (denom > 0).then(|| self.tp as f64 / denom as f64)
    }

    pub fn accuracy(&self) -> Option<f64> {
        let denom = self.total();
        (denom > 0).then(|| (self.tp + self.tn) as f64 / denom as f64)
    }
}

/// Tallies predictions against labels. Every predicted key must have a label
/// entry; unknown labels are excluded from the four cells and counted
/// separately.
pub fn confusion(
    predictions: &BTreeMap<String, bool>,
    labels: &BTreeMap<String, TruthLabel>,
) -> Result<(ConfusionCounts, u64)> {
    let mut counts = ConfusionCounts::default();
    let mut unknown = 0u64;
    for (key, &predicted) in predictions {
        let label = labels
            .get(key)
            .ok_or_else(|| Error::MissingLabel(key.clone()))?;
        match (label, predicted) {
            (TruthLabel::Unknown, _) => unknown += 1,
            (TruthLabel::Positive, true) => counts.tp += 1,
            (TruthLabel::Positive, false) => counts.fn_ += 1,
            (TruthLabel::Negative, true) => counts.fp += 1,
            (TruthLabel::Negative, false) => counts.tn += 1,
        }
    }
    Ok((counts, unknown))
}

/// Precision divided by the data set's positive base rate.
pub fn precision_lift(precision: f64, base_rate: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&precision) {
        return Err(Error::invalid(format!(
            "precision {precision} outside [0, 1]"
        )));
    }
    if !(base_rate > 0.0) || base_rate > 1.0 {
        return Err(Error::invalid(format!(
            "base_rate {base_rate} outside (0, 1]"
        )));
    }
    Ok(precision / base_rate)
}

/// Precision over the top k of a ranking, with unknown-label rows counted as
/// non-positive and reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionAtK {
    pub k: usize,
    pub precision: f64,
    pub positives_in_top_k: u64,
    pub unknown_in_top_k: u64,
}

/// Fraction of the top `k` ranked keys whose label is positive. Requires
/// 1 <= k <= ranked length and a label entry for every inspected key.
pub fn precision_at_k(
    ranked: &[String],
    labels: &BTreeMap<String, TruthLabel>,
    k: usize,
) -> Result<PrecisionAtK> {
    if k == 0 || k > ranked.len() {
        return Err(Error::invalid(format!(
            "k = {k} outside 1..={}",
            ranked.len()
        )));
    }
    let mut positives = 0u64;
    let mut unknown = 0u64;
    for key in &ranked[..k] {
        match labels
            .get(key)
            .ok_or_else(|| Error::MissingLabel(key.clone()))?
        {
            TruthLabel::Positive => positives += 1,
            TruthLabel::Negative => {}
            TruthLabel::Unknown => unknown += 1,
        }
    }
    Ok(PrecisionAtK {
        k,
        precision: positives as f64 / k as f64,
        positives_in_top_k: positives,
        unknown_in_top_k: unknown,
    })
}

/// Label population totals over the evaluated keys.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTotals {
    pub positives: u64,
    pub negatives: u64,
    pub unknown: u64,
}

/// The evaluation report emitted as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub counts: ConfusionCounts,
    pub unknown_predictions: u64,
    pub label_totals: LabelTotals,
    pub precision: Option<f64>,
    /// Reported only when the caller declares the label set complete;
    /// otherwise recall is unknowable and omitted.
    pub recall: Option<f64>,
    pub labels_complete: bool,
    pub accuracy: Option<f64>,
    pub base_rate: Option<f64>,
    pub precision_lift: Option<f64>,
    pub precision_at_k: Vec<PrecisionAtK>,
}

/// Evaluates a ranking plus thresholded predictions in one pass, computing
/// the confusion cells, base rate (overridable), lift, and precision at
/// k in {1, 10, 100} where the ranking is long enough.
pub fn evaluate(
    ranked: &[String],
    predictions: &BTreeMap<String, bool>,
    labels: &BTreeMap<String, TruthLabel>,
    labels_complete: bool,
    base_rate_override: Option<f64>,
) -> Result<EvalReport> {
    let (counts, unknown_predictions) = confusion(predictions, labels)?;
    let mut totals = LabelTotals::default();
    for key in predictions.keys() {
        match labels[key] {
            TruthLabel::Positive => totals.positives += 1,
            TruthLabel::Negative => totals.negatives += 1,
            TruthLabel::Unknown => totals.unknown += 1,
        }
    }
    let base_rate = match base_rate_override {
        Some(rate) => {
            if !(rate > 0.0) || rate > 1.0 {
                return Err(Error::invalid(format!("base_rate {rate} outside (0, 1]")));
            }
            Some(rate)
        }
        None => {
            let known = totals.positives + totals.negatives;
            (known > 0 && totals.positives > 0).then(|| totals.positives as f64 / known as f64)
        }
    };
    let precision = counts.precision();
    let lift = match (precision, base_rate) {
        (Some(p), Some(b)) => Some(precision_lift(p, b)?),
        _ => None,
    };
    let mut at_k = Vec::new();
    for k in [1usize, 10, 100] {
        if k <= ranked.len() {
            at_k.push(precision_at_k(ranked, labels, k)?);
        }
    }
    Ok(EvalReport {
        counts,
        unknown_predictions,
        label_totals: totals,
        precision,
        recall: labels_complete.then(|| counts.recall()).flatten(),
        labels_complete,
        accuracy: counts.accuracy(),
        base_rate,
        precision_lift: lift,
        precision_at_k: at_k,
    })
}
