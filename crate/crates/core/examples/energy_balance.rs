//! With identical zero frequencies the dynamics are a gradient flow. Track
//! the energy functional along a run together with its balance residual.
//!
//! ```sh
//! cargo run --release --example energy_balance
//! ```

use slnet::dynamics::{integrate, InitialCondition, Radii, Scheme, SystemParams};
use slnet::graph::NetworkTopology;
use slnet::metrics::energy_functional;

fn main() -> slnet::error::Result<()> {
    let params = SystemParams::uniform(1.0, 0.0, 0.1, NetworkTopology::ring(8, 2)?)?;
    let initial = InitialCondition::Polar { radii: Radii::Constant(0.4), phase_range: (0.0, 2.0), seed: 3 }.build(8)?;
    let traj = integrate(&initial, &params, 20.0, Scheme::Rk4 { dt: 1e-3 }, 1e-3)?;
    let energy = energy_functional(&traj)?;

    println!("{:>8} {:>14} {:>14}", "t", "H", "residual");
    for k in (0..energy.times.len()).step_by(2000) {
        println!("{:>8.3} {:>14.8} {:>14.3e}", energy.times[k], energy.h[k], energy.balance_residual[k]);
    }
    println!("final relative residual = {:.3e}", energy.final_relative_residual());
    Ok(())
}
