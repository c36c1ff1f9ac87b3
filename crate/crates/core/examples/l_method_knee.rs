//! Picks the number of clusters from a dendrogram's merge-height curve, once
//! with the single-pass L method and once with iterative refinement.
//!
//! ```bash
//! cargo run --release --example l_method_knee -- [classes]
//! ```

use mahc::lmethod::{split_objective, LMethod};
use mahc::mahc::{full_ahc, MahcConfig};
use mahc::synth::{generate_synthetic, ClassSizes, SyntheticSpec};

fn main() -> mahc::Result<()> {
    let classes = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let spec = SyntheticSpec { classes, sizes: ClassSizes::Fixed(15), jitter: 0.1, seed: 2, ..SyntheticSpec::default() };
    let data = generate_synthetic(&spec)?;
    let baseline = full_ahc(&data, &MahcConfig { final_k: Some(1), ..MahcConfig::default() })?;
    let curve = baseline.dendrogram.merge_height_curve();

    println!("true classes: {classes}");
    println!("   c      height   objective");
    for (c, h) in curve.points().take(2 * classes + 4) {
        let obj = split_objective(&curve, c).map_or_else(|_| "-".to_string(), |o| format!("{o:.4}"));
        println!("{c:>4} {h:>11.4} {obj:>11}");
    }
    let single = LMethod { refine: false }.select(&curve);
    let refined = LMethod { refine: true }.select(&curve);
    println!("single pass knee: {}", single.k);
    println!("refined knee:     {}", refined.k);
    Ok(())
}
