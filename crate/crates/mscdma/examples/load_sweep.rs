//! Output SINR versus system load at two excess bandwidths (the shipped
//! fig3 config): the asynchronous advantage widens as the load grows.

use mscdma::cli::{cmd_sinr_sweep, ExperimentConfig};
use std::collections::BTreeMap;
use std::path::Path;

fn main() -> mscdma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/fig3_load.toml");
    let cfg = ExperimentConfig::from_path(&path)?;
    let csv = cmd_sinr_sweep(&cfg)?;

    // arrange rows into per-scenario curves
    let mut curves: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for row in &csv.rows {
        curves
            .entry(row[1].clone())
            .or_default()
            .push((row[0].parse().unwrap(), row[4].parse().unwrap()));
    }
    println!("rank-8 Wiener SINR (dB) vs load, 10 dB SNR\n");
    print!("{:>8}", "load");
    for name in curves.keys() {
        print!(" {name:>22}");
    }
    println!();
    let loads: Vec<f64> = curves
        .values()
        .next()
        .unwrap()
        .iter()
        .map(|p| p.0)
        .collect();
    for (i, load) in loads.iter().enumerate() {
        print!("{load:>8.3}");
        for pts in curves.values() {
            print!(" {:>22.3}", pts[i].1);
        }
        println!();
    }
    Ok(())
}
