//! Integrate a ring of oscillators from spread-out phases and report how
//! far it synchronized.
//!
//! ```sh
//! cargo run --release --example ring_synchronization
//! ```

use slnet::dynamics::{integrate, InitialCondition, Radii, Scheme, SystemParams};
use slnet::graph::NetworkTopology;
use slnet::metrics::sync_report;

fn main() -> slnet::error::Result<()> {
    let topology = NetworkTopology::ring(6, 2)?;
    let params = SystemParams::uniform(1.0, 1.0, 0.02, topology)?;
    let initial =
        InitialCondition::Polar { radii: Radii::Constant(0.5), phase_range: (0.3, 2.8), seed: 2024 }.build(6)?;

    let traj = integrate(&initial, &params, 200.0, Scheme::Rk4 { dt: 1e-3 }, 0.05)?;
    let report = sync_report(&traj, 0.2)?;

    println!("final amplitudes: {:?}", traj.final_state().amplitudes());
    print!("{}", report.to_summary());
    println!("completely synchronized (1e-6): {}", report.completely_synchronized(1e-6));
    Ok(())
}
