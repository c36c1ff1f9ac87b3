//! Labelled synthetic sequence data.
//!
//! Each class is a random template sequence; members are copies of their
//! template with random monotone time warping (frame deletion and
//! duplication) and per-frame Gaussian jitter.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Segment};
use crate::error::{Error, Result};

/// How many members each class receives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassSizes {
    /// Every class gets the same count.
    Fixed(usize),
    /// Sizes spaced geometrically from `min` (first class) to `max` (last).
    Skewed { min: usize, max: usize },
}

impl ClassSizes {
    pub fn sizes(&self, classes: usize) -> Vec<usize> {
        match *self {
            ClassSizes::Fixed(n) => vec![n; classes],
            ClassSizes::Skewed { min, max } => {
                if classes == 1 {
                    return vec![max];
                }
                let ratio = max as f64 / min as f64;
                (0..classes)
                    .map(|l| {
                        let t = l as f64 / (classes - 1) as f64;
                        (min as f64 * ratio.powf(t)).round() as usize
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub classes: usize,
    pub sizes: ClassSizes,
    pub dim: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Standard deviation of the per-frame Gaussian noise.
    pub jitter: f64,
    /// Per-frame probability of a warp event, split evenly between deleting
    /// and duplicating the frame.
    pub warp: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            classes: 10,
            sizes: ClassSizes::Fixed(20),
            dim: 4,
            min_len: 6,
            max_len: 16,
            jitter: 0.15,
            warp: 0.2,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.classes < 2 {
            return Err(Error::invalid("at least 2 classes are required"));
        }
        match self.sizes {
            ClassSizes::Fixed(0) => return Err(Error::invalid("classes need at least one member")),
            ClassSizes::Skewed { min, max } if min == 0 || max < min => {
                return Err(Error::invalid(format!("invalid class size range {min}..{max}")))
            }
            _ => {}
        }
        if self.dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if self.min_len == 0 || self.max_len < self.min_len {
            return Err(Error::invalid(format!("invalid template length range {}..{}", self.min_len, self.max_len)));
        }
        if self.jitter < 0.0 || !self.jitter.is_finite() {
            return Err(Error::invalid("jitter must be a finite non-negative number"));
        }
        if !(0.0..1.0).contains(&self.warp) {
            return Err(Error::invalid("warp must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Generates the dataset described by `spec`. Segment order is shuffled;
/// labels are the class index as a string.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let noise = Normal::new(0.0, spec.jitter).map_err(|e| Error::invalid(e.to_string()))?;

    let templates: Vec<Vec<Vec<f64>>> = (0..spec.classes)
        .map(|_| {
            let len = rng.gen_range(spec.min_len..=spec.max_len);
            (0..len).map(|_| (0..spec.dim).map(|_| unit.sample(&mut rng)).collect()).collect()
        })
        .collect();

    let mut members: Vec<(usize, Vec<Vec<f64>>)> = Vec::new();
    for (class, size) in spec.sizes.sizes(spec.classes).into_iter().enumerate() {
        for _ in 0..size {
            let mut frames = Vec::new();
            for frame in &templates[class] {
                let u: f64 = if spec.warp > 0.0 { rng.gen() } else { 1.0 };
                let copies = if u < spec.warp / 2.0 {
                    0
                } else if u < spec.warp {
                    2
                } else {
                    1
                };
                for _ in 0..copies {
                    frames.push(frame.clone());
                }
            }
            if frames.is_empty() {
                frames.push(templates[class][0].clone());
            }
            if spec.jitter > 0.0 {
                for f in &mut frames {
                    f.iter_mut().for_each(|v| *v += noise.sample(&mut rng));
                }
            }
            members.push((class, frames));
        }
    }
    members.shuffle(&mut rng);

    let segments = members
        .into_iter()
        .enumerate()
        .map(|(id, (class, frames))| Segment::new(id as u64, Some(class.to_string()), frames))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(segments)
}
