//! Full AHC against plain and size-managed multi-stage clustering on a
//! skewed labelled synthetic set.
//!
//! ```bash
//! cargo run --release --example synthetic_parity -- [jitter] [warp] [seed]
//! ```

use mahc::mahc::{full_ahc, run, MahcConfig};
use mahc::synth::{generate_synthetic, ClassSizes, SyntheticSpec};

fn main() -> mahc::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let spec = SyntheticSpec {
        classes: 20,
        sizes: ClassSizes::Skewed { min: 26, max: 260 },
        dim: 4,
        min_len: 6,
        max_len: 16,
        jitter: args.first().copied().unwrap_or(0.15),
        warp: args.get(1).copied().unwrap_or(0.2),
        seed: args.get(2).copied().unwrap_or(1.0) as u64,
    };
    let data = generate_synthetic(&spec)?;
    let n = data.len();
    println!("{n} segments, {} classes", spec.classes);

    let base = MahcConfig { p0: 4, beta: n.div_ceil(4), max_iters: 5, convergence_window: 0, workers: 4, ..MahcConfig::default() };
    let ahc = full_ahc(&data, &base)?;
    println!("full AHC: K = {}, F = {:.4}, {:.2}s", ahc.k, ahc.f_measure.unwrap_or(0.0), ahc.seconds);
    let at_l = full_ahc(&data, &MahcConfig { final_k: Some(spec.classes), ..base.clone() })?;
    println!("full AHC at K = L: F = {:.4}", at_l.f_measure.unwrap_or(0.0));

    for (name, manage) in [("MAHC", false), ("MAHC+M", true)] {
        let out = run(&data, &MahcConfig { manage_size: manage, ..base.clone() })?;
        println!("{name}: final K = {}", out.k);
        println!("  iter     P  max_occ  min_occ     S  F-measure");
        for r in &out.stats {
            println!(
                "  {:>4} {:>5} {:>8} {:>8} {:>5}  {:.4}",
                r.iteration,
                r.subsets,
                r.max_occupancy,
                r.min_occupancy,
                r.medoids,
                r.f_measure.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
