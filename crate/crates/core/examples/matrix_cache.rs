//! Builds a DTW matrix in parallel, stores it in the binary dump format and
//! reads it back.
//!
//! ```bash
//! cargo run --release --example matrix_cache -- [workers]
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::time::Instant;

use mahc::dtw::dtw_distance;
use mahc::matrix::{build_matrix, CondensedMatrix};
use mahc::synth::{generate_synthetic, SyntheticSpec};

fn main() -> mahc::Result<()> {
    let workers = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let data = generate_synthetic(&SyntheticSpec { classes: 20, seed: 1, ..SyntheticSpec::default() })?;
    let started = Instant::now();
    let matrix = build_matrix(&data.full_view(), |a, b| dtw_distance(a, b).map(f64::from), workers)?;
    println!("{} pairs over {} segments in {:.3}s", matrix.values().len(), data.len(), started.elapsed().as_secs_f64());

    let dir = std::env::temp_dir().join("mahc-matrix-cache");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("dtw.bin");
    matrix.write_to(BufWriter::new(File::create(&path)?))?;
    let loaded = CondensedMatrix::read_from(BufReader::new(File::open(&path)?))?;
    println!("wrote {} bytes to {}", std::fs::metadata(&path)?.len(), path.display());
    println!("reloaded matrix identical: {}", loaded == matrix);
    println!("d(0, 1) = {:.4}", loaded.get(0, 1)?);
    Ok(())
}
