//! Ward clustering of a small labelled set: prints the merge list as CSV and
//! the clusters at a few cuts.
//!
//! ```bash
//! cargo run --example ward_dendrogram > merges.csv
//! ```

use mahc::ahc::ward_ahc;
use mahc::dtw::dtw_distance;
use mahc::eval::f_measure;
use mahc::matrix::build_matrix;
use mahc::synth::{generate_synthetic, ClassSizes, SyntheticSpec};

fn main() -> mahc::Result<()> {
    let spec = SyntheticSpec { classes: 4, sizes: ClassSizes::Fixed(6), jitter: 0.1, seed: 3, ..SyntheticSpec::default() };
    let data = generate_synthetic(&spec)?;
    let labels = data.labels().expect("synthetic data is labelled");

    let matrix = build_matrix(&data.full_view(), |a, b| dtw_distance(a, b).map(f64::from), 2)?;
    let dendrogram = ward_ahc(matrix)?;
    dendrogram.write_csv(std::io::stdout().lock())?;

    for k in [2, 4, 8] {
        let cut = dendrogram.cut(k)?;
        eprintln!("K = {k}: F = {:.3}", f_measure(&cut, &labels)?);
        for (c, members) in cut.clusters().iter().enumerate() {
            let names: Vec<&str> = members.iter().map(|&m| labels[m]).collect();
            eprintln!("  cluster {c}: classes {names:?}");
        }
    }
    Ok(())
}
