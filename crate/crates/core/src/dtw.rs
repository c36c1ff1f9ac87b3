//! Dynamic time warping between variable-length segments.
//!
//! The alignment uses the symmetric step set {(1,1), (1,0), (0,1)} with both
//! endpoints anchored, no slope weights and no warping window.

use serde::{Deserialize, Serialize};

use crate::data::Segment;
use crate::error::{Error, Result};

/// Local cost between two aligned frames.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalCost {
    #[default]
    Euclidean,
    SquaredEuclidean,
}

/// A non-negative DTW distance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DtwDistance(f64);

impl DtwDistance {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<DtwDistance> for f64 {
    fn from(d: DtwDistance) -> f64 {
        d.0
    }
}

/// DTW configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dtw {
    pub cost: LocalCost,
    /// Divide the accumulated cost by `len(a) + len(b)`.
    pub normalize: bool,
}

/// Euclidean distance between two frames.
pub fn frame_cost(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    Ok(squared_euclidean(x, y).sqrt())
}

/// DTW distance with the default configuration.
pub fn dtw_distance(a: &Segment, b: &Segment) -> Result<DtwDistance> {
    Dtw::default().distance(a, b)
}

#[inline]
fn squared_euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum()
}

impl Dtw {
    pub fn distance(&self, a: &Segment, b: &Segment) -> Result<DtwDistance> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        // Iterate rows over the longer sequence so the rolling rows are
        // sized by the shorter one.
        let (rows, cols) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let total = match self.cost {
            LocalCost::Euclidean => accumulate(rows, cols, |x, y| squared_euclidean(x, y).sqrt()),
            LocalCost::SquaredEuclidean => accumulate(rows, cols, squared_euclidean),
        };
        let value = if self.normalize { total / (a.len() + b.len()) as f64 } else { total };
        Ok(DtwDistance(value))
    }
}

fn accumulate<F>(rows: &Segment, cols: &Segment, cost: F) -> f64
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let m = cols.len();
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0f64; m];

    let x0 = rows.frame(0);
    cur[0] = cost(x0, cols.frame(0));
    for j in 1..m {
        cur[j] = cost(x0, cols.frame(j)) + cur[j - 1];
    }
    for i in 1..rows.len() {
        std::mem::swap(&mut prev, &mut cur);
        let x = rows.frame(i);
        cur[0] = cost(x, cols.frame(0)) + prev[0];
        for j in 1..m {
            let best = prev[j - 1].min(prev[j]).min(cur[j - 1]);
            cur[j] = cost(x, cols.frame(j)) + best;
        }
    }
    cur[m - 1]
}
