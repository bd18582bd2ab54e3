use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};

/// Evaluation summary. Binary fields are `None` for classification tasks and
/// vice versa; `auc` is also `None` when only one class is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_examples: usize,
    pub binary_accuracy: Option<f64>,
    pub auc: Option<f64>,
    pub brier: Option<f64>,
    pub mae: Option<f64>,
    pub categorical_accuracy: Option<f64>,
}

fn check_lengths(left: usize, right: usize) -> Result<()> {
    if left != right || left == 0 {
        return Err(VrenError::LengthMismatch { left, right });
    }
    Ok(())
}

/// Mann-Whitney rank statistic with average ranks for tied scores, which
/// gives tied positive/negative pairs half credit.
pub fn auc(probs: &[f64], labels: &[u8]) -> Option<f64> {
    let n_pos = labels.iter().filter(|&&y| y == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[a].total_cmp(&probs[b]));
    // Sum of doubled ranks keeps tie averages integral.
    let mut pos_rank2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && probs[order[j + 1]] == probs[order[i]] {
            j += 1;
        }
        // Ranks i+1..=j+1 averaged, doubled: (i + j + 2).
        let rank2 = (i + j + 2) as u128;
        for &k in &order[i..=j] {
            if labels[k] == 1 {
                pos_rank2 += rank2;
            }
        }
        i = j + 1;
    }
    let base2 = (n_pos * (n_pos + 1)) as u128;
    let u2 = pos_rank2 - base2;
    Some(u2 as f64 / (2.0 * n_pos as f64 * n_neg as f64))
}

pub fn evaluate_binary(probs: &[f64], labels: &[u8]) -> Result<EvalReport> {
    check_lengths(probs.len(), labels.len())?;
    if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(VrenError::BadDistribution(format!("probability {p} is outside [0, 1]")));
    }
    if let Some(y) = labels.iter().find(|&&y| y > 1) {
        return Err(VrenError::BadDistribution(format!("binary label {y} is not 0 or 1")));
    }
    let n = probs.len() as f64;
    let mut correct = 0usize;
    let mut sq = 0.0;
    let mut abs = 0.0;
    for (&p, &y) in probs.iter().zip(labels) {
        let predicted = u8::from(p >= 0.5);
        correct += usize::from(predicted == y);
        let err = p - f64::from(y);
        sq += err * err;
        abs += err.abs();
    }
    Ok(EvalReport {
        n_examples: probs.len(),
        binary_accuracy: Some(100.0 * correct as f64 / n),
        auc: auc(probs, labels),
        brier: Some(sq / n),
        mae: Some(abs / n),
        categorical_accuracy: None,
    })
}

/// Index of the largest value, lowest index on ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub fn evaluate_categorical(dists: &[Vec<f64>], labels: &[usize]) -> Result<EvalReport> {
    check_lengths(dists.len(), labels.len())?;
    for d in dists {
        let sum: f64 = d.iter().sum();
        if (sum - 1.0).abs() > 1e-6 || d.iter().any(|p| *p < 0.0) {
            return Err(VrenError::BadDistribution(format!("distribution sums to {sum}")));
        }
    }
    let correct = dists.iter().zip(labels).filter(|(d, &y)| argmax(d) == y).count();
    Ok(EvalReport {
        n_examples: dists.len(),
        binary_accuracy: None,
        auc: None,
        brier: None,
        mae: None,
        categorical_accuracy: Some(100.0 * correct as f64 / dists.len() as f64),
    })
}
