//! The file-based workflow of the command line, through the library: write a
//! segment file, load it, cluster, and write assignment and stats CSVs.
//!
//! ```bash
//! cargo run --release --example file_pipeline -- [out_dir]
//! ```

use std::path::PathBuf;

use mahc::io::{load_segments, read_assignment, save_segments, write_assignment, write_stats};
use mahc::mahc::{run, MahcConfig};
use mahc::synth::{generate_synthetic, ClassSizes, SyntheticSpec};

fn main() -> mahc::Result<()> {
    let out: PathBuf = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("mahc-pipeline"), PathBuf::from);
    std::fs::create_dir_all(&out)?;

    let spec = SyntheticSpec { classes: 6, sizes: ClassSizes::Fixed(30), seed: 4, ..SyntheticSpec::default() };
    let segments = out.join("segments.jsonl");
    save_segments(&generate_synthetic(&spec)?, &segments)?;

    let data = load_segments(&segments)?;
    let config = MahcConfig { p0: 3, beta: 50, max_iters: 5, ..MahcConfig::default() };
    let result = run(&data, &config)?;
    write_assignment(&data, &result.assignment, out.join("assignment.csv"))?;
    write_stats(&result.stats, out.join("stats.csv"))?;

    let back = read_assignment(&data, out.join("assignment.csv"))?;
    assert_eq!(back, result.assignment);
    println!("{} segments -> {} clusters", data.len(), result.k);
    println!("outputs in {}", out.display());
    print!("{}", std::fs::read_to_string(out.join("stats.csv"))?);
    Ok(())
}
