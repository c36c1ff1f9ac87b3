//! Scores a few hand-made clusterings of the same ten labelled objects and
//! prints the contingency table of the last one.
//!
//! ```bash
//! cargo run --example evaluate_clustering
//! ```

use mahc::eval::{contingency, dataset_f_measure, f_pair};
use mahc::Assignment;

fn main() -> mahc::Result<()> {
    let labels = ["a", "a", "a", "a", "b", "b", "b", "c", "c", "c"];
    let cases = [
        ("perfect", vec![0, 0, 0, 0, 1, 1, 1, 2, 2, 2]),
        ("one cluster", vec![0; 10]),
        ("singletons", (0..10).collect()),
        ("class a split", vec![0, 0, 3, 3, 1, 1, 1, 2, 2, 2]),
        ("b and c merged", vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1]),
    ];
    for (name, clusters) in &cases {
        let table = contingency(&Assignment::from_keys(clusters.iter().copied()), &labels)?;
        println!("{name:<16} F = {:.4}", dataset_f_measure(&table));
    }

    let (_, last) = cases.last().expect("cases are listed");
    let table = contingency(&Assignment::from_keys(last.iter().copied()), &labels)?;
    println!("\ncluster  class  n_kl  n_k  n_l  F(k,l)");
    for k in 0..table.clusters() {
        for l in 0..table.classes() {
            println!(
                "{k:>7} {l:>6} {:>5} {:>4} {:>4}  {:.4}",
                table.count(k, l),
                table.cluster_size(k),
                table.class_size(l),
                f_pair(k, l, &table)
            );
        }
    }
    Ok(())
}
