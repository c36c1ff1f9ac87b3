//! Precision, recall and F-measure of a clustering against class labels.

use std::collections::HashMap;
use std::hash::Hash;

use crate::ahc::Assignment;
use crate::error::{Error, Result};

/// Co-occurrence counts of clusters (rows) and classes (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<usize>>,
    cluster_sizes: Vec<usize>,
    class_sizes: Vec<usize>,
    total: usize,
}

impl ContingencyTable {
    pub fn clusters(&self) -> usize {
        self.cluster_sizes.len()
    }

    pub fn classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// Objects of class `l` in cluster `k`.
    pub fn count(&self, k: usize, l: usize) -> usize {
        self.counts[k][l]
    }

    pub fn cluster_size(&self, k: usize) -> usize {
        self.cluster_sizes[k]
    }

    pub fn class_size(&self, l: usize) -> usize {
        self.class_sizes[l]
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

/// Builds the table. Classes are numbered by first appearance in `labels`.
pub fn contingency<L: Eq + Hash>(assignment: &Assignment, labels: &[L]) -> Result<ContingencyTable> {
    if assignment.len() != labels.len() {
        return Err(Error::invalid(format!(
            "assignment covers {} objects but {} labels were given",
            assignment.len(),
            labels.len()
        )));
    }
    let mut class_of = HashMap::new();
    let classes: Vec<usize> = labels
        .iter()
        .map(|l| {
            let next = class_of.len();
            *class_of.entry(l).or_insert(next)
        })
        .collect();
    let (k, l) = (assignment.k(), class_of.len());
    let mut counts = vec![vec![0usize; l]; k];
    let mut cluster_sizes = vec![0usize; k];
    let mut class_sizes = vec![0usize; l];
    for (&c, &cls) in assignment.labels().iter().zip(&classes) {
        counts[c][cls] += 1;
        cluster_sizes[c] += 1;
        class_sizes[cls] += 1;
    }
    Ok(ContingencyTable { counts, cluster_sizes, class_sizes, total: labels.len() })
}

/// Like [`contingency`] for optionally-labelled objects; any missing label is an error.
pub fn contingency_partial<L: Eq + Hash>(assignment: &Assignment, labels: &[Option<L>]) -> Result<ContingencyTable> {
    let present: Vec<&L> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| l.as_ref().ok_or_else(|| Error::invalid(format!("object {i} has no label"))))
        .collect::<Result<_>>()?;
    contingency(assignment, &present)
}

/// `n_kl / n_k`.
pub fn precision(n_kl: usize, n_k: usize) -> Result<f64> {
    ratio(n_kl, n_k)
}

/// `n_kl / n_l`.
pub fn recall(n_kl: usize, n_l: usize) -> Result<f64> {
    ratio(n_kl, n_l)
}

fn ratio(part: usize, whole: usize) -> Result<f64> {
    if whole == 0 {
        return Err(Error::invalid("empty cluster or class"));
    }
    if part > whole {
        return Err(Error::invalid(format!("{part} of {whole} objects")));
    }
    Ok(part as f64 / whole as f64)
}

/// Harmonic mean of precision and recall of cluster `k` for class `l`,
/// zero when they share no objects.
pub fn f_pair(k: usize, l: usize, table: &ContingencyTable) -> f64 {
    let n_kl = table.count(k, l);
    if n_kl == 0 {
        return 0.0;
    }
    let pr = n_kl as f64 / table.cluster_size(k) as f64;
    let re = n_kl as f64 / table.class_size(l) as f64;
    2.0 * re * pr / (re + pr)
}

/// Class-size weighted best-match F-measure: `sum_l (n_l / N) max_k F(k, l)`.
pub fn dataset_f_measure(table: &ContingencyTable) -> f64 {
    if table.total() == 0 {
        return 0.0;
    }
    let weighted: f64 = (0..table.classes())
        .map(|l| {
            let best = (0..table.clusters()).map(|k| f_pair(k, l, table)).fold(0.0, f64::max);
            table.class_size(l) as f64 * best
        })
        .sum();
    weighted / table.total() as f64
}

/// Convenience: F-measure of `assignment` against `labels`.
pub fn f_measure<L: Eq + Hash>(assignment: &Assignment, labels: &[L]) -> Result<f64> {
    contingency(assignment, labels).map(|t| dataset_f_measure(&t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(labels: &[usize]) -> Assignment {
        Assignment::new(labels.to_vec()).unwrap()
    }

    #[test]
    fn diagonal_table() {
        let t = contingency(&assign(&[0, 0, 0, 1, 1, 1]), &["a", "a", "a", "b", "b", "b"]).unwrap();
        assert_eq!((t.count(0, 0), t.count(0, 1), t.count(1, 0), t.count(1, 1)), (3, 0, 0, 3));
        assert_eq!(dataset_f_measure(&t), 1.0);
    }

    #[test]
    fn single_cluster_row() {
        let t = contingency(&assign(&[0; 6]), &[1, 2, 2, 3, 3, 3]).unwrap();
        assert_eq!((0..3).map(|l| t.count(0, l)).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(t.total(), 6);
    }

    #[test]
    fn precision_recall() {
        assert_eq!(precision(5, 10).unwrap(), 0.5);
        assert_eq!(precision(7, 7).unwrap(), 1.0);
        assert_eq!(recall(0, 4).unwrap(), 0.0);
        assert!(precision(1, 0).is_err());
        assert!(recall(3, 2).is_err());
    }

    #[test]
    fn f_pair_cases() {
        // Cluster 0 holds both classes (pr = 0.5, re = 1 for each).
        let t = contingency(&assign(&[0, 0, 0, 0, 1]), &["x", "x", "y", "y", "z"]).unwrap();
        assert!((f_pair(0, 0, &t) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f_pair(1, 2, &t), 1.0);
        assert_eq!(f_pair(1, 0, &t), 0.0);
    }

    #[test]
    fn one_cluster_two_classes() {
        let t = contingency(&assign(&[0; 6]), &["a", "a", "a", "b", "b", "b"]).unwrap();
        assert!((dataset_f_measure(&t) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_but_relabelled() {
        let labels = [7, 7, 3, 9, 3, 9, 9];
        let clusters = assign(&[2, 2, 0, 1, 0, 1, 1]);
        assert_eq!(f_measure(&clusters, &labels).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        assert!(contingency(&assign(&[0, 1]), &["a"]).is_err());
        assert!(contingency_partial(&assign(&[0, 1]), &[Some("a"), None]).is_err());
        assert!(contingency_partial(&assign(&[0, 1]), &[Some("a"), Some("b")]).is_ok());
    }
}
