use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};
use crate::rng::Rng;

/// Match ids assigned to each partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSplit {
    pub train: Vec<String>,
    pub validation: Vec<String>,
    pub test: Vec<String>,
}

/// Seeded match-level partition: one validation match, about 13% of matches
/// (at least one) for test, the rest for training. Ids are shuffled with a
/// Fisher-Yates pass over the sorted, de-duplicated input so the result does
/// not depend on input order.
pub fn split_by_match(ids: &[String], seed: u64) -> Result<MatchSplit> {
    let mut ids: Vec<String> = ids.to_vec();
    ids.sort();
    ids.dedup();
    let n = ids.len();
    if n < 3 {
        return Err(VrenError::EmptyScope(format!(
            "a train/validation/test split needs at least 3 matches, got {n}"
        )));
    }
    Rng::new(seed).shuffle(&mut ids);
    let n_test = ((n as f64 * 0.13).round() as usize).clamp(1, n - 2);
    let test = ids.split_off(n - n_test);
    let validation = ids.split_off(ids.len() - 1);
    Ok(MatchSplit {
        train: ids,
        validation,
        test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("m{i:02}")).collect()
    }

    #[test]
    fn fifteen_matches() {
        let s = split_by_match(&ids(15), 1).unwrap();
        assert_eq!((s.train.len(), s.validation.len(), s.test.len()), (12, 1, 2));
    }

    #[test]
    fn partitions_are_disjoint_and_complete() {
        let s = split_by_match(&ids(20), 5).unwrap();
        let mut all: Vec<String> = s.train.iter().chain(&s.validation).chain(&s.test).cloned().collect();
        all.sort();
        assert_eq!(all, ids(20));
    }

    #[test]
    fn deterministic_and_order_free() {
        let mut rev = ids(10);
        rev.reverse();
        assert_eq!(split_by_match(&ids(10), 3).unwrap(), split_by_match(&rev, 3).unwrap());
    }

    #[test]
    fn too_few_matches() {
        assert_eq!(split_by_match(&ids(2), 0).unwrap_err().code(), "E_EMPTY_SCOPE");
    }
}
