//! Evaluate every sufficient condition for a small all-to-all network and
//! compare the predictions with an actual run.
//!
//! ```sh
//! cargo run --release --example certificates
//! ```

use slnet::certificates::certify_all;
use slnet::dynamics::{integrate, InitialCondition, Radii, Scheme, SystemParams};
use slnet::graph::NetworkTopology;
use slnet::metrics::{phase_spread, sync_report};

fn main() -> slnet::error::Result<()> {
    let params = SystemParams::uniform(1.0, 0.0, 0.1, NetworkTopology::complete(3)?)?;
    let initial = InitialCondition::Polar { radii: Radii::Constant(0.5), phase_range: (0.2, 1.3), seed: 7 }.build(3)?;

    for cert in certify_all(&initial, &params)? {
        println!("{}", cert.to_report());
    }

    let traj = integrate(&initial, &params, 200.0, Scheme::Rk4 { dt: 1e-3 }, 0.05)?;
    let skip = traj.len() / 4;
    println!("min amplitude after transient = {:.6}", traj.min_amplitude(skip));
    println!("initial phase spread = {:.6}", phase_spread(&initial.principal_phases()));
    println!("final state = {}", sync_report(&traj, 0.2)?.state.label());
    Ok(())
}
