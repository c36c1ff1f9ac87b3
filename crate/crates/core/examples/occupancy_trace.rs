//! Per-iteration subset occupancy with and without the occupancy cap. Without
//! it the largest subset grows past the initial size; with it no subset
//! exceeds `beta` after the first iteration.
//!
//! ```bash
//! cargo run --release --example occupancy_trace -- [p0] [beta]
//! ```

use mahc::mahc::{run, MahcConfig};
use mahc::synth::{generate_synthetic, ClassSizes, SyntheticSpec};

fn main() -> mahc::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let p0 = args.first().copied().unwrap_or(4);
    let beta = args.get(1).copied().unwrap_or(150);
    let spec = SyntheticSpec { classes: 15, sizes: ClassSizes::Skewed { min: 15, max: 150 }, seed: 9, ..SyntheticSpec::default() };
    let data = generate_synthetic(&spec)?;
    let n = data.len();
    println!("N = {n}, P0 = {p0}, initial occupancy {}, beta = {beta}", n.div_ceil(p0));

    for (name, manage) in [("plain", false), ("capped", true)] {
        let config = MahcConfig { p0, beta, manage_size: manage, max_iters: 8, convergence_window: 0, ..MahcConfig::default() };
        let out = run(&data, &config)?;
        println!("\n{name}");
        println!("  iter     P  max_occ  min_occ  refined_max");
        for r in &out.stats {
            let refined = r.refined_max_occupancy.map_or_else(|| "-".to_string(), |m| m.to_string());
            println!("  {:>4} {:>5} {:>8} {:>8} {:>12}", r.iteration, r.subsets, r.max_occupancy, r.min_occupancy, refined);
        }
    }
    Ok(())
}
