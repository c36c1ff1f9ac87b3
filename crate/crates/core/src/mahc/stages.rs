//! The individual steps of one multi-stage iteration.

use rayon::prelude::*;

use crate::ahc::{ward_ahc, Assignment, Dendrogram};
use crate::data::{Dataset, Segment, SubsetView};
use crate::dtw::Dtw;
use crate::error::{Error, Result};
use crate::lmethod::LMethod;
use crate::matrix::{build_in_pool, CondensedMatrix};

/// Settings shared by every step that computes distances or dendrograms.
#[derive(Debug, Clone, Copy)]
pub struct ClusterSettings {
    pub dtw: Dtw,
    pub ward_on_squared: bool,
    pub l_method: LMethod,
}

impl ClusterSettings {
    pub(crate) fn distance(&self) -> impl Fn(&Segment, &Segment) -> Result<f64> + Sync + '_ {
        move |a, b| self.dtw.distance(a, b).map(f64::from)
    }

    pub(crate) fn linkage_input(&self, raw: &CondensedMatrix) -> CondensedMatrix {
        if self.ward_on_squared {
            raw.clone().squared()
        } else {
            raw.clone()
        }
    }
}

/// First-stage clustering of one subset.
#[derive(Debug, Clone)]
pub struct SubsetClustering {
    /// `None` for single-member subsets, which skip clustering.
    pub dendrogram: Option<Dendrogram>,
    /// Cluster count chosen by the L method.
    pub k: usize,
    /// The L method fell back to 2 clusters on a short curve.
    pub knee_fallback: bool,
    /// Cluster id per subset member, in member order.
    pub assignment: Assignment,
    /// One medoid (dataset position) per cluster, in cluster order.
    pub medoids: Vec<usize>,
}

impl SubsetClustering {
    /// Members (dataset positions) of each cluster.
    pub fn clusters(&self, view: &SubsetView<'_>) -> Vec<Vec<usize>> {
        self.assignment
            .clusters()
            .into_iter()
            .map(|c| c.into_iter().map(|m| view.position(m)).collect())
            .collect()
    }
}

/// Clusters every subset independently: distance matrix, Ward AHC, L-method
/// cluster count, cut, then medoids. Runs on the current rayon pool; results
/// are in subset order. `cap` rejects any subset whose matrix would exceed it.
pub fn stage_one(
    subsets: &[SubsetView<'_>],
    settings: &ClusterSettings,
    cap: Option<usize>,
) -> Result<Vec<SubsetClustering>> {
    subsets.par_iter().map(|view| cluster_subset(view, settings, cap)).collect()
}

fn cluster_subset(view: &SubsetView<'_>, settings: &ClusterSettings, cap: Option<usize>) -> Result<SubsetClustering> {
    match view.len() {
        0 => Err(Error::invariant("empty subset reached stage one")),
        1 => Ok(SubsetClustering {
            dendrogram: None,
            k: 1,
            knee_fallback: false,
            assignment: Assignment::new(vec![0])?,
            medoids: vec![view.position(0)],
        }),
        _ => {
            let raw = build_in_pool(view, &settings.distance(), cap)?;
            let dendrogram = ward_ahc(settings.linkage_input(&raw))?;
            let knee = settings.l_method.select(&dendrogram.merge_height_curve());
            let k = knee.k.min(view.len());
            let assignment = dendrogram.cut(k)?;
            let medoids = compute_medoids(view, &assignment, &raw);
            Ok(SubsetClustering { dendrogram: Some(dendrogram), k, knee_fallback: knee.fallback, assignment, medoids })
        }
    }
}

/// For each cluster, the member with the smallest summed distance to the
/// rest of its cluster, read from `matrix` (indexed by view member). Ties go
/// to the smallest dataset position. Returns dataset positions.
pub fn compute_medoids(view: &SubsetView<'_>, assignment: &Assignment, matrix: &CondensedMatrix) -> Vec<usize> {
    assignment
        .clusters()
        .into_iter()
        .map(|members| {
            let mut best = members[0];
            let mut best_sum = f64::INFINITY;
            for &i in &members {
                let sum: f64 = members.iter().filter(|&&j| j != i).map(|&j| matrix.at(i, j)).sum();
                if sum < best_sum {
                    best = i;
                    best_sum = sum;
                }
            }
            view.position(best)
        })
        .collect()
}

/// Outcome of clustering the medoids into a target number of groups.
#[derive(Debug, Clone)]
pub struct MedoidGrouping {
    /// Group id per medoid, in medoid order; ids follow first appearance.
    pub groups: Assignment,
    /// Fewer medoids than requested groups: every medoid is its own group.
    pub short: bool,
}

/// Clusters the medoid segments into `target` groups with Ward AHC over
/// their DTW matrix.
pub fn regroup_medoids(
    dataset: &Dataset,
    medoids: &[usize],
    target: usize,
    settings: &ClusterSettings,
) -> Result<MedoidGrouping> {
    let s = medoids.len();
    if target == 0 {
        return Err(Error::invalid("medoids cannot be grouped into 0 groups"));
    }
    if s < target {
        log::warn!("only {s} medoids for {target} groups; keeping each medoid alone");
    }
    if s <= target {
        return Ok(MedoidGrouping { groups: Assignment::from_keys(0..s), short: s < target });
    }
    let view = SubsetView::new(dataset, medoids.to_vec())?;
    let raw = build_in_pool(&view, &settings.distance(), None)?;
    let cut = ward_ahc(settings.linkage_input(&raw))?.cut(target)?;
    // The view is sorted by position; map back to medoid order.
    let member = |pos: usize| view.indices().binary_search(&pos).expect("medoid is a view member");
    Ok(MedoidGrouping {
        groups: Assignment::from_keys(medoids.iter().map(|&m| cut.cluster_of(member(m)))),
        short: false,
    })
}

/// Moves every member of each first-stage cluster into the subset named by
/// its medoid's group. `clusters` lists members in medoid order.
pub fn refine(clusters: &[Vec<usize>], grouping: &Assignment) -> Result<Vec<Vec<usize>>> {
    if clusters.len() != grouping.len() {
        return Err(Error::invariant(format!(
            "{} clusters but {} grouped medoids",
            clusters.len(),
            grouping.len()
        )));
    }
    let mut subsets = vec![Vec::new(); grouping.k()];
    for (members, &g) in clusters.iter().zip(grouping.labels()) {
        subsets[g].extend_from_slice(members);
    }
    subsets.iter_mut().for_each(|s| s.sort_unstable());
    Ok(subsets)
}

/// Final flat clustering.
#[derive(Debug, Clone)]
pub struct Finalized {
    pub assignment: Assignment,
    /// Number of clusters actually produced.
    pub k: usize,
    /// The requested K exceeded the medoid count and was clamped.
    pub clamped: bool,
}

/// Groups the medoids into `k` clusters and lets every object inherit the
/// group of its first-stage cluster's medoid. Cluster ids follow the
/// smallest member position.
pub fn finalize(
    dataset: &Dataset,
    medoids: &[usize],
    clusters: &[Vec<usize>],
    k: usize,
    settings: &ClusterSettings,
) -> Result<Finalized> {
    let s = medoids.len();
    if k == 0 || s == 0 {
        return Err(Error::invalid(format!("cannot finalize {s} medoids into {k} clusters")));
    }
    let clamped = k > s;
    if clamped {
        log::warn!("requested {k} clusters but only {s} medoids exist; using {s}");
    }
    let k = k.min(s);
    let grouping = regroup_medoids(dataset, medoids, k, settings)?.groups;
    let mut group_of = vec![usize::MAX; dataset.len()];
    for (members, &g) in clusters.iter().zip(grouping.labels()) {
        for &m in members {
            group_of[m] = g;
        }
    }
    if group_of.contains(&usize::MAX) {
        return Err(Error::invariant("first-stage clusters do not cover the dataset"));
    }
    let assignment = Assignment::from_keys(group_of);
    if assignment.k() != k {
        return Err(Error::invariant(format!("finalize produced {} clusters, expected {k}", assignment.k())));
    }
    Ok(Finalized { assignment, k, clamped })
}
