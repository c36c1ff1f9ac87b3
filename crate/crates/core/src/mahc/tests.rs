use super::*;
use crate::data::Segment;
use crate::synth::{generate_synthetic, ClassSizes, SyntheticSpec};

fn points(xs: &[f64]) -> Dataset {
    Dataset::new(
        xs.iter()
            .enumerate()
            .map(|(i, &x)| Segment::from_flat(i as u64, None, 1, vec![x]).unwrap())
            .collect(),
    )
    .unwrap()
}

fn settings() -> ClusterSettings {
    MahcConfig::default().settings()
}

#[test]
fn stage_one_on_a_pair_splits_it() {
    let ds = points(&[0.0, 4.0]);
    let r = stage_one(&[ds.full_view()], &settings(), None).unwrap();
    assert_eq!(r[0].k, 2);
    assert!(r[0].knee_fallback);
    assert_eq!(r[0].assignment.labels(), &[0, 1]);
    assert_eq!(r[0].medoids, vec![0, 1]);
}

#[test]
fn stage_one_singleton_subset() {
    let ds = points(&[0.0, 4.0, 5.0]);
    let views = [ds.view(vec![1]).unwrap(), ds.view(vec![0, 2]).unwrap()];
    let r = stage_one(&views, &settings(), None).unwrap();
    assert_eq!((r[0].k, r[0].medoids.clone()), (1, vec![1]));
    assert!(r[0].dendrogram.is_none());
    assert_eq!(r[1].medoids, vec![0, 2]);
}

#[test]
fn stage_one_respects_cap() {
    let ds = points(&[0.0, 1.0, 2.0, 3.0]);
    let err = stage_one(&[ds.full_view()], &settings(), Some(3)).unwrap_err();
    assert!(matches!(err, Error::CapExceeded { size: 4, cap: 3 }));
}

#[test]
fn medoid_of_three_points() {
    let ds = points(&[0.0, 1.0, 5.0]);
    let view = ds.full_view();
    let m = crate::matrix::build_matrix(&view, |a, b| Ok((a.frame(0)[0] - b.frame(0)[0]).abs()), 1).unwrap();
    let one = Assignment::new(vec![0, 0, 0]).unwrap();
    assert_eq!(compute_medoids(&view, &one, &m), vec![1]);
    let split = Assignment::new(vec![0, 1, 0]).unwrap();
    // Ties inside {0, 5} go to the smaller position.
    assert_eq!(compute_medoids(&view, &split, &m), vec![0, 1]);
}

#[test]
fn regroup_edge_cases() {
    let ds = points(&[0.0, 1.0, 10.0, 11.0, 30.0]);
    let medoids = [4, 0, 2];
    let same = regroup_medoids(&ds, &medoids, 3, &settings()).unwrap();
    assert_eq!(same.groups.labels(), &[0, 1, 2]);
    assert!(!same.short);
    let short = regroup_medoids(&ds, &medoids, 5, &settings()).unwrap();
    assert!(short.short);
    assert_eq!(short.groups.k(), 3);
    let one = regroup_medoids(&ds, &medoids, 1, &settings()).unwrap();
    assert_eq!(one.groups.labels(), &[0, 0, 0]);
}

#[test]
fn regroup_separates_super_classes() {
    let ds = points(&[0.0, 0.5, 1.0, 100.0, 100.5, 101.0]);
    let medoids = [3, 0, 4, 1, 5, 2];
    let g = regroup_medoids(&ds, &medoids, 2, &settings()).unwrap().groups;
    assert_eq!(g.labels(), &[0, 1, 0, 1, 0, 1]);
}

#[test]
fn refine_cases() {
    let clusters = vec![vec![0, 3], vec![1], vec![2, 4]];
    let all = refine(&clusters, &Assignment::new(vec![0, 0, 0]).unwrap()).unwrap();
    assert_eq!(all, vec![vec![0, 1, 2, 3, 4]]);
    let moved = refine(&clusters, &Assignment::new(vec![0, 1, 0]).unwrap()).unwrap();
    assert_eq!(moved, vec![vec![0, 2, 3, 4], vec![1]]);
    assert!(refine(&clusters, &Assignment::new(vec![0, 1]).unwrap()).is_err());
}

#[test]
fn finalize_identity_and_root() {
    let ds = points(&[0.0, 1.0, 10.0, 11.0, 30.0]);
    let medoids = [0, 2, 4];
    let clusters = vec![vec![0, 1], vec![2, 3], vec![4]];
    let same = finalize(&ds, &medoids, &clusters, 3, &settings()).unwrap();
    assert_eq!(same.assignment.labels(), &[0, 0, 1, 1, 2]);
    let root = finalize(&ds, &medoids, &clusters, 1, &settings()).unwrap();
    assert_eq!(root.assignment.labels(), &[0; 5]);
    let clamped = finalize(&ds, &medoids, &clusters, 9, &settings()).unwrap();
    assert!(clamped.clamped);
    assert_eq!(clamped.k, 3);
}

fn small_labelled(seed: u64) -> Dataset {
    generate_synthetic(&SyntheticSpec {
        classes: 6,
        sizes: ClassSizes::Skewed { min: 8, max: 40 },
        seed,
        ..SyntheticSpec::default()
    })
    .unwrap()
}

#[test]
fn single_subset_run_is_full_ahc() {
    let ds = small_labelled(5);
    let config = MahcConfig { p0: 1, beta: ds.len(), max_iters: 1, ..MahcConfig::default() };
    let out = run(&ds, &config).unwrap();
    let base = full_ahc(&ds, &config).unwrap();
    assert_eq!(out.stats.len(), 1);
    assert_eq!(out.k, out.state.k_per_subset[0]);
    assert_eq!(out.k, base.k);
    assert_eq!(out.assignment, base.assignment);
}

#[test]
fn managed_run_keeps_invariants() {
    let ds = small_labelled(6);
    let n = ds.len();
    let config = MahcConfig { p0: 2, beta: 25, max_iters: 5, seed: 3, ..MahcConfig::default() };
    let out = run(&ds, &config).unwrap();
    assert_eq!(out.stats[0].max_occupancy, n.div_ceil(2));
    for row in &out.stats[1..] {
        assert!(row.max_occupancy <= 25, "{row:?}");
        assert!(row.min_occupancy >= 1);
    }
    assert_eq!(out.state.k_per_subset.iter().sum::<usize>(), out.state.medoids.len());
    assert_eq!(out.k, out.stats.last().unwrap().medoids);
    assert!(out.stats.iter().all(|r| r.f_measure.is_some()));
}

#[test]
fn plain_run_stops_on_settled_subset_count() {
    let ds = small_labelled(7);
    let config = MahcConfig { p0: 3, manage_size: false, max_iters: 10, ..MahcConfig::default() };
    let out = run(&ds, &config).unwrap();
    // P never changes without splitting, so the first admissible check succeeds.
    assert_eq!(out.stats.len(), 4);
    assert!(out.converged);
    let fixed = run(&ds, &MahcConfig { convergence_window: 0, max_iters: 6, ..config }).unwrap();
    assert_eq!(fixed.stats.len(), 6);
    assert!(!fixed.converged);
}

#[test]
fn final_k_override() {
    let ds = small_labelled(8);
    let config = MahcConfig { p0: 2, beta: 60, max_iters: 2, final_k: Some(6), ..MahcConfig::default() };
    let out = run(&ds, &config).unwrap();
    assert_eq!(out.k, 6);
    assert_eq!(out.assignment.k(), 6);
}

#[test]
fn config_validation() {
    let ds = points(&[0.0, 1.0, 2.0]);
    for bad in [
        MahcConfig { p0: 4, ..MahcConfig::default() },
        MahcConfig { p0: 0, ..MahcConfig::default() },
        MahcConfig { p0: 1, beta: 1, ..MahcConfig::default() },
        MahcConfig { p0: 1, max_iters: 0, ..MahcConfig::default() },
        MahcConfig { p0: 1, workers: 0, ..MahcConfig::default() },
    ] {
        assert!(run(&ds, &bad).is_err(), "{bad:?}");
    }
}
