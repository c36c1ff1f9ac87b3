//! Knee detection on a dendrogram's merge-height curve (the L method).
//!
//! Two least-squares lines are fitted to the points left and right of every
//! candidate split `c`; the split with the smallest size-weighted RMSE wins.

use crate::error::{Error, Result};

/// Points `(c, y)` with `c` running over consecutive integers from 2.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationCurve {
    heights: Vec<f64>,
}

impl EvaluationCurve {
    /// `heights[k]` is the value at `c = k + 2`.
    pub fn from_heights(heights: Vec<f64>) -> Self {
        EvaluationCurve { heights }
    }

    pub fn new(points: Vec<(usize, f64)>) -> Result<Self> {
        for (k, &(x, y)) in points.iter().enumerate() {
            if x != k + 2 {
                return Err(Error::invalid(format!("curve point {k} has x = {x}, expected {}", k + 2)));
            }
            if y.is_nan() || y < 0.0 {
                return Err(Error::invalid(format!("curve value {y} at x = {x} is negative")));
            }
        }
        Ok(EvaluationCurve { heights: points.into_iter().map(|(_, y)| y).collect() })
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Largest x on the curve.
    pub fn last_x(&self) -> usize {
        self.heights.len() + 1
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = (usize, f64)> + '_ {
        self.heights.iter().enumerate().map(|(k, &y)| (k + 2, y))
    }

    fn truncated(&self, last_x: usize) -> EvaluationCurve {
        EvaluationCurve { heights: self.heights[..last_x - 1].to_vec() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rmse: f64,
}

/// Ordinary least-squares line through `points`.
pub fn fit_line(points: &[(f64, f64)]) -> Result<LineFit> {
    let m = points.len();
    if m < 2 {
        return Err(Error::invalid(format!("a line fit needs at least 2 points, got {m}")));
    }
    let mf = m as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / mf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / mf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::invalid("a line fit needs at least two distinct x values"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(LineFit { slope, intercept, rmse: (sse / mf).sqrt() })
}

/// Outcome of knee selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Knee {
    pub k: usize,
    /// Set when the curve was too short and `k` is the fallback of 2.
    pub fallback: bool,
}

/// Relative tolerance under which two objective values count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Minimum number of points kept by the iterative refinement.
const MIN_REFINE_CUTOFF: usize = 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LMethod {
    /// Repeatedly re-run on the curve truncated at twice the current knee
    /// until the knee stops moving left.
    pub refine: bool,
}

/// Single-pass L method.
pub fn l_method(curve: &EvaluationCurve) -> Knee {
    LMethod::default().select(curve)
}

impl LMethod {
    pub fn select(&self, curve: &EvaluationCurve) -> Knee {
        if curve.len() < 4 {
            log::debug!("evaluation curve of {} points is too short, using 2 clusters", curve.len());
            return Knee { k: 2, fallback: true };
        }
        if !self.refine {
            return Knee { k: single_pass(curve), fallback: false };
        }
        let mut cutoff = curve.last_x();
        let mut current = cutoff;
        loop {
            let last = current;
            current = single_pass(&curve.truncated(cutoff));
            let next = (2 * current).max(MIN_REFINE_CUTOFF).min(curve.last_x());
            if current >= last || next >= cutoff {
                break;
            }
            cutoff = next;
        }
        Knee { k: current, fallback: false }
    }
}

/// The weighted RMSE objective at split `c` of a curve ending at `b`.
pub fn split_objective(curve: &EvaluationCurve, c: usize) -> Result<f64> {
    let b = curve.last_x();
    if c < 3 || c + 2 > b {
        return Err(Error::invalid(format!("split {c} leaves fewer than 2 points on a side of [2, {b}]")));
    }
    let pts: Vec<(f64, f64)> = curve.points().map(|(x, y)| (x as f64, y)).collect();
    let split = c - 1;
    let left = fit_line(&pts[..split])?;
    let right = fit_line(&pts[split..])?;
    let span = (b - 1) as f64;
    Ok((c - 1) as f64 / span * left.rmse + (b - c) as f64 / span * right.rmse)
}

fn single_pass(curve: &EvaluationCurve) -> usize {
    let b = curve.last_x();
    let scale = curve.heights().iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let tol = TIE_TOLERANCE * scale;
    let mut best_c = 3;
    let mut best = f64::INFINITY;
    for c in 3..=b - 2 {
        let obj = split_objective(curve, c).expect("split within range");
        if obj < best - tol {
            best = obj;
            best_c = c;
        }
    }
    best_c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let pts: Vec<_> = (0..6).map(|x| (x as f64, 2.0 * x as f64 + 1.0)).collect();
        let f = fit_line(&pts).unwrap();
        assert_eq!((f.slope, f.intercept, f.rmse), (2.0, 1.0, 0.0));
    }

    #[test]
    fn two_points_interpolate() {
        let f = fit_line(&[(3.0, -1.0), (7.0, 4.5)]).unwrap();
        assert!(f.rmse < 1e-15);
        assert!(fit_line(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn short_curve_falls_back() {
        let curve = EvaluationCurve::from_heights(vec![9.0, 4.0, 1.0]);
        assert_eq!(l_method(&curve), Knee { k: 2, fallback: true });
        assert_eq!(l_method(&EvaluationCurve::from_heights(vec![])).k, 2);
    }

    #[test]
    fn four_points_use_the_only_split() {
        let curve = EvaluationCurve::from_heights(vec![9.0, 4.0, 1.0, 0.5]);
        assert_eq!(l_method(&curve), Knee { k: 3, fallback: false });
    }

    #[test]
    fn linear_curve_picks_smallest_split() {
        let curve = EvaluationCurve::from_heights((2..40).map(|x| 200.0 - 3.0 * x as f64).collect());
        assert_eq!(l_method(&curve).k, 3);
    }

    #[test]
    fn curve_validation() {
        assert!(EvaluationCurve::new(vec![(2, 1.0), (3, 0.5)]).is_ok());
        assert!(EvaluationCurve::new(vec![(2, 1.0), (4, 0.5)]).is_err());
        assert!(EvaluationCurve::new(vec![(2, -1.0)]).is_err());
    }

    #[test]
    fn refinement_moves_knee_left() {
        // A long flat tail dilutes the single-pass fit; refinement zooms in.
        let mut h: Vec<f64> = (2..=8).map(|x| 1000.0 - 120.0 * x as f64).collect();
        h.extend((9..=400).map(|x| 50.0 - 0.1 * x as f64).map(|y| y.max(0.0)));
        let curve = EvaluationCurve::from_heights(h);
        let plain = l_method(&curve).k;
        let refined = LMethod { refine: true }.select(&curve).k;
        assert!(refined <= plain);
        assert!((7..=10).contains(&refined), "refined knee {refined}");
    }
}
