//! Output SINR versus bandwidth (the shipped fig2 config): asynchronous
//! sinc and root-raised-cosine systems against the synchronous reference.
//! Prints the CSV that `mscdma sinr-sweep` would emit.

use mscdma::cli::{cmd_sinr_sweep, ExperimentConfig};
use std::path::Path;

fn main() -> mscdma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/fig2_bandwidth.toml");
    let cfg = ExperimentConfig::from_path(&path)?;
    let csv = cmd_sinr_sweep(&cfg)?;
    print!("{}", csv.to_text());
    Ok(())
}
