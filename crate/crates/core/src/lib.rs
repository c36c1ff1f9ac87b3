//! Multi-stage agglomerative hierarchical clustering of variable-length
//! vector sequences with a hard cap on subset occupancy.
//!
//! Full Ward clustering needs all `N(N-1)/2` pairwise distances. This crate
//! clusters independent subsets instead, re-clusters the subset medoids to
//! redistribute the data, and iterates. Subsets that grow past a cap `beta`
//! are split, which bounds the largest distance matrix ever built.
//!
//! * [`dtw`]: dynamic time warping between sequences.
//! * [`matrix`]: condensed pairwise matrices, built in parallel.
//! * [`ahc`]: Ward linkage by nearest-neighbour chain, dendrogram cuts.
//! * [`lmethod`]: cluster-count selection on the merge-height curve.
//! * [`mahc`]: the iterative procedure and its individual steps.
//! * [`eval`]: F-measure against ground-truth classes.
//! * [`synth`], [`io`], [`cli`]: data generation, file formats, command line.
//!
//! ```
//! use mahc::mahc::{run, MahcConfig};
//! use mahc::synth::{generate_synthetic, SyntheticSpec};
//!
//! let data = generate_synthetic(&SyntheticSpec::default()).unwrap();
//! let config = MahcConfig { p0: 2, beta: 60, max_iters: 3, ..MahcConfig::default() };
//! let out = run(&data, &config).unwrap();
//! assert!(out.stats[1..].iter().all(|row| row.max_occupancy <= 60));
//! ```

pub mod ahc;
pub mod cli;
pub mod data;
pub mod dtw;
mod error;
pub mod eval;
pub mod io;
pub mod lmethod;
pub mod mahc;
pub mod matrix;
pub mod parallel;
pub mod synth;

pub use ahc::{Assignment, Dendrogram, Merge};
pub use data::{Dataset, Segment, SubsetView};
pub use error::{Error, Result};
