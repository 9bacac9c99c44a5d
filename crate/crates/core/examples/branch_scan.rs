//! Sweep μ across the synchronous Hopf point of a ring, record the
//! oscillation amplitude at each step and estimate the onset.
//!
//! ```sh
//! cargo run --release --example branch_scan -- out/scan
//! ```

use std::path::PathBuf;

use slnet::dynamics::SystemParams;
use slnet::graph::NetworkTopology;
use slnet::scan::{onset_estimate, run_scan, Perturbation, ScanConfig};

fn main() -> slnet::error::Result<()> {
    let template = SystemParams::uniform(0.0, 1.0, 0.05, NetworkTopology::ring(6, 2)?)?;
    let grid: Vec<f64> = (0..=12).map(|k| -0.1 + 0.025 * k as f64).collect();
    let mut cfg = ScanConfig::new(grid, template);
    cfg.perturbation = Perturbation::Synchronous { scale: 1e-2 };
    cfg.transient_t = 100.0;

    let result = run_scan(&cfg)?;
    print!("{}", result.to_csv());
    println!("onset estimate = {:.6}", onset_estimate(&result.points)?);

    if let Some(dir) = std::env::args().nth(1).map(PathBuf::from) {
        for path in result.write_to(&dir)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
