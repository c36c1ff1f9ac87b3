//! DTW distances between a short motif and warped, shifted and unrelated
//! versions of it.
//!
//! ```bash
//! cargo run --example dtw_alignment
//! ```

use mahc::dtw::{dtw_distance, Dtw, LocalCost};
use mahc::Segment;

fn main() -> mahc::Result<()> {
    let motif = vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![2.0, 1.0], vec![1.0, 0.5], vec![0.0, 0.0]];
    let slow: Vec<Vec<f64>> = motif.iter().flat_map(|f| [f.clone(), f.clone()]).collect();
    let shifted: Vec<Vec<f64>> = motif.iter().map(|f| f.iter().map(|v| v + 0.3).collect()).collect();
    let other = vec![vec![3.0, -2.0], vec![2.5, -1.0], vec![3.0, -2.0]];

    let a = Segment::new(0, None, motif)?;
    let candidates = [
        ("same motif at half speed", Segment::new(1, None, slow)?),
        ("motif shifted by 0.3", Segment::new(2, None, shifted)?),
        ("unrelated sequence", Segment::new(3, None, other)?),
    ];

    let normalized = Dtw { normalize: true, ..Dtw::default() };
    let squared = Dtw { cost: LocalCost::SquaredEuclidean, normalize: false };
    println!("{:<26} {:>10} {:>12} {:>10}", "candidate", "dtw", "normalized", "squared");
    for (name, b) in &candidates {
        println!(
            "{name:<26} {:>10.4} {:>12.4} {:>10.4}",
            dtw_distance(&a, b)?.value(),
            normalized.distance(&a, b)?.value(),
            squared.distance(&a, b)?.value(),
        );
    }
    Ok(())
}
