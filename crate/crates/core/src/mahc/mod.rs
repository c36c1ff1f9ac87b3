//! Multi-stage agglomerative clustering with an occupancy cap.
//!
//! Each iteration clusters every subset independently, represents each
//! resulting cluster by its medoid, clusters the medoids into as many groups
//! as there are subsets and redistributes the data accordingly. When size
//! management is on, any redistributed subset larger than `beta` is split
//! evenly before the next iteration, so no distance matrix over more than
//! `beta` objects is built after the first iteration.

mod partition;
mod stages;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ahc::{ward_ahc, Assignment, Dendrogram};
use crate::data::{Dataset, SubsetView};
use crate::dtw::Dtw;
use crate::error::{Error, Result};
use crate::eval::f_measure;
use crate::lmethod::LMethod;
use crate::matrix::build_in_pool;
use crate::parallel::with_workers;

pub use partition::{initial_partition, split};
pub use stages::{
    compute_medoids, finalize, refine, regroup_medoids, stage_one, ClusterSettings, Finalized, MedoidGrouping,
    SubsetClustering,
};

/// Parameters of a multi-stage run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MahcConfig {
    /// Number of subsets in the initial division.
    pub p0: usize,
    /// Largest subset allowed after a split step.
    pub beta: usize,
    /// Apply the split step. Off reproduces plain multi-stage clustering.
    pub manage_size: bool,
    /// Iteration budget, counting the first.
    pub max_iters: usize,
    /// Stop once the subset count is unchanged for this many consecutive
    /// iterations (checked from the fourth iteration on). 0 disables.
    pub convergence_window: usize,
    pub seed: u64,
    pub workers: usize,
    /// Final cluster count; defaults to the medoid count of the last pass.
    pub final_k: Option<usize>,
    /// Square DTW values before Ward linkage.
    pub ward_on_squared: bool,
    pub l_refine: bool,
    pub dtw: Dtw,
}

impl Default for MahcConfig {
    fn default() -> Self {
        MahcConfig {
            p0: 4,
            beta: 1000,
            manage_size: true,
            max_iters: 10,
            convergence_window: 2,
            seed: 0,
            workers: 1,
            final_k: None,
            ward_on_squared: false,
            l_refine: false,
            dtw: Dtw::default(),
        }
    }
}

impl MahcConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.p0 == 0 || self.p0 > n {
            return Err(Error::invalid(format!("p0 = {} must be in [1, {n}]", self.p0)));
        }
        if self.beta < 2 {
            return Err(Error::invalid(format!("beta = {} must be at least 2", self.beta)));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers must be at least 1"));
        }
        if self.final_k == Some(0) {
            return Err(Error::invalid("final_k must be at least 1"));
        }
        Ok(())
    }

    pub fn settings(&self) -> ClusterSettings {
        ClusterSettings {
            dtw: self.dtw,
            ward_on_squared: self.ward_on_squared,
            l_method: LMethod { refine: self.l_refine },
        }
    }
}

/// One row of the per-iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub iteration: usize,
    /// Number of subsets clustered in this iteration.
    pub subsets: usize,
    pub max_occupancy: usize,
    pub min_occupancy: usize,
    /// Medoid count, the sum of per-subset cluster counts.
    pub medoids: usize,
    /// Cluster count a finalize at this iteration would use.
    pub k_estimate: usize,
    pub f_measure: Option<f64>,
    pub seconds: f64,
    /// Largest subset produced by the refine step before splitting. `None`
    /// for the final iteration.
    pub refined_max_occupancy: Option<usize>,
}

/// Snapshot of the last completed iteration.
#[derive(Debug, Clone)]
pub struct MahcState {
    pub iteration: usize,
    pub subsets: Vec<Vec<usize>>,
    pub dendrograms: Vec<Option<Dendrogram>>,
    pub k_per_subset: Vec<usize>,
    pub medoids: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct MahcOutcome {
    pub assignment: Assignment,
    pub k: usize,
    pub stats: Vec<IterationStats>,
    /// Stopped because the subset count settled rather than on budget.
    pub converged: bool,
    pub state: MahcState,
    pub warnings: Vec<String>,
}

fn check_partition(subsets: &[Vec<usize>], n: usize, step: &str) -> Result<()> {
    let mut seen = vec![false; n];
    for s in subsets {
        if s.is_empty() {
            return Err(Error::invariant(format!("{step} produced an empty subset")));
        }
        for &i in s {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invariant(format!("{step} produced overlapping subsets")));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::invariant(format!("{step} lost objects")));
    }
    Ok(())
}

fn occupancy(subsets: &[Vec<usize>]) -> (usize, usize) {
    let max = subsets.iter().map(Vec::len).max().unwrap_or(0);
    let min = subsets.iter().map(Vec::len).min().unwrap_or(0);
    (max, min)
}

/// Runs the full iterative procedure on `dataset`.
pub fn run(dataset: &Dataset, config: &MahcConfig) -> Result<MahcOutcome> {
    config.validate(dataset.len())?;
    with_workers(config.workers, || run_in_pool(dataset, config))?
}

fn run_in_pool(dataset: &Dataset, config: &MahcConfig) -> Result<MahcOutcome> {
    let n = dataset.len();
    let settings = config.settings();
    let labels = dataset.labels();
    let mut warnings = Vec::new();
    let mut stats: Vec<IterationStats> = Vec::new();

    let mut subsets = initial_partition(n, config.p0, config.seed)?;
    // Only the initial division may exceed beta; its size is set by p0.
    let initial_cap = subsets[0].len().max(config.beta);

    for iteration in 0.. {
        let started = Instant::now();
        check_partition(&subsets, n, "partitioning")?;
        let cap = match (config.manage_size, iteration) {
            (false, _) => None,
            (true, 0) => Some(initial_cap),
            (true, _) => Some(config.beta),
        };
        let views = subsets
            .iter()
            .map(|s| SubsetView::new(dataset, s.clone()))
            .collect::<Result<Vec<_>>>()?;
        let results = stage_one(&views, &settings, cap)?;

        let mut medoids = Vec::new();
        let mut clusters = Vec::new();
        for (view, r) in views.iter().zip(&results) {
            if r.medoids.len() != r.k || r.assignment.k() != r.k {
                return Err(Error::invariant("cluster count and medoid count disagree"));
            }
            let members = r.clusters(view);
            for (m, c) in r.medoids.iter().zip(&members) {
                if c.binary_search(m).is_err() {
                    return Err(Error::invariant(format!("medoid {m} is not in its cluster")));
                }
            }
            medoids.extend_from_slice(&r.medoids);
            clusters.extend(members);
        }
        let s: usize = results.iter().map(|r| r.k).sum();
        if s != medoids.len() {
            return Err(Error::invariant("medoid count differs from the sum of cluster counts"));
        }
        let fallbacks = results.iter().filter(|r| r.knee_fallback).count();
        if fallbacks > 0 {
            log::debug!("iteration {iteration}: {fallbacks} subsets used the 2-cluster fallback");
        }

        let k_estimate = config.final_k.unwrap_or(s).min(s);
        let (max_occupancy, min_occupancy) = occupancy(&subsets);
        let p_now = subsets.len();

        let last = iteration + 1 >= config.max_iters;
        let converged = !last && iteration > 2 && settled(&stats, p_now, config.convergence_window);
        let done = last || converged;

        let flat = if done || labels.is_some() {
            Some(finalize(dataset, &medoids, &clusters, k_estimate, &settings)?)
        } else {
            None
        };
        let f = match (&labels, &flat) {
            (Some(l), Some(fin)) => Some(f_measure(&fin.assignment, l)?),
            _ => None,
        };

        let mut row = IterationStats {
            iteration,
            subsets: p_now,
            max_occupancy,
            min_occupancy,
            medoids: s,
            k_estimate,
            f_measure: f,
            seconds: 0.0,
            refined_max_occupancy: None,
        };

        if done {
            row.seconds = started.elapsed().as_secs_f64();
            log_row(&row);
            stats.push(row);
            let fin = flat.expect("finalized on the last iteration");
            if config.final_k.is_some_and(|k| k > s) {
                warnings.push(format!("final K {} clamped to {s} medoids", config.final_k.unwrap_or(0)));
            }
            let state = MahcState {
                iteration,
                subsets,
                dendrograms: results.iter().map(|r| r.dendrogram.clone()).collect(),
                k_per_subset: results.iter().map(|r| r.k).collect(),
                medoids,
            };
            return Ok(MahcOutcome { assignment: fin.assignment, k: fin.k, stats, converged, state, warnings });
        }

        let grouping = regroup_medoids(dataset, &medoids, p_now, &settings)?;
        if grouping.short {
            warnings.push(format!("iteration {iteration}: {s} medoids for {p_now} groups"));
        }
        let refined = refine(&clusters, &grouping.groups)?;
        check_partition(&refined, n, "refine")?;
        row.refined_max_occupancy = Some(occupancy(&refined).0);

        subsets = if config.manage_size {
            let split_seed = partition::stream_seed(config.seed, 2, iteration as u64);
            let out = split(refined, config.beta, split_seed)?;
            if let Some(big) = out.iter().map(Vec::len).find(|&len| len > config.beta) {
                return Err(Error::invariant(format!("split left a subset of {big} > beta = {}", config.beta)));
            }
            out
        } else {
            refined
        };
        row.seconds = started.elapsed().as_secs_f64();
        log_row(&row);
        stats.push(row);
    }
    unreachable!("the iteration loop only exits by returning")
}

/// The subset count has been `p_now` for `window` consecutive iterations.
fn settled(history: &[IterationStats], p_now: usize, window: usize) -> bool {
    window > 0
        && history.len() >= window
        && history[history.len() - window..].iter().all(|r| r.subsets == p_now)
}

fn log_row(row: &IterationStats) {
    log::info!(
        "iteration {}: P = {}, occupancy {}..{}, S = {}, F = {}",
        row.iteration,
        row.subsets,
        row.min_occupancy,
        row.max_occupancy,
        row.medoids,
        row.f_measure.map_or_else(|| "-".to_string(), |f| format!("{f:.4}")),
    );
}

/// Result of a single full AHC over the whole dataset.
#[derive(Debug, Clone)]
pub struct BaselineOutcome {
    pub assignment: Assignment,
    pub k: usize,
    pub dendrogram: Dendrogram,
    pub f_measure: Option<f64>,
    pub seconds: f64,
}

/// Plain Ward AHC over the whole dataset, cut at `final_k` or at the
/// L-method knee.
pub fn full_ahc(dataset: &Dataset, config: &MahcConfig) -> Result<BaselineOutcome> {
    if config.workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    if dataset.len() < 2 {
        return Err(Error::invalid("full AHC needs at least 2 segments"));
    }
    let started = Instant::now();
    let settings = config.settings();
    let dendrogram = with_workers(config.workers, || {
        build_in_pool(&dataset.full_view(), &settings.distance(), None)
            .and_then(|raw| ward_ahc(settings.linkage_input(&raw)))
    })??;
    let k = match config.final_k {
        Some(k) => k.min(dataset.len()),
        None => settings.l_method.select(&dendrogram.merge_height_curve()).k,
    };
    let assignment = dendrogram.cut(k)?;
    let f_measure = dataset.labels().map(|l| f_measure(&assignment, &l)).transpose()?;
    Ok(BaselineOutcome { assignment, k, dendrogram, f_measure, seconds: started.elapsed().as_secs_f64() })
}

#[cfg(test)]
mod tests;
