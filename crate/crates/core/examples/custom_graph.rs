//! Build a network from an edge list, inspect its Laplacian spectrum and
//! simulate it with heterogeneous frequencies.
//!
//! ```sh
//! cargo run --release --example custom_graph
//! ```

use slnet::certificates::certify_all;
use slnet::dynamics::{integrate, InitialCondition, Radii, Scheme, SystemParams};
use slnet::graph::NetworkTopology;
use slnet::metrics::sync_report;

const STAR_PLUS_TAIL: &str = "\
# hub 1 with three leaves, leaf 4 continues to 5
1 2
1 3
1 4
4 5
";

fn main() -> slnet::error::Result<()> {
    let topology = NetworkTopology::parse_edge_list(STAR_PLUS_TAIL)?;
    let spectrum = topology.spectrum();
    println!("degrees = {:?}", topology.degrees());
    println!("laplacian eigenvalues = {:?}", spectrum.eigenvalues);
    println!("lambda2 = {:.6}, lambda_max = {:.6}", spectrum.lambda2, spectrum.lambda_max);

    let omega = vec![1.0, 1.05, 0.95, 1.0, 1.1];
    let params = SystemParams::new(0.5, omega, 0.3, topology)?;
    let initial =
        InitialCondition::Polar { radii: Radii::Constant(0.7), phase_range: (0.0, 1.0), seed: 11 }.build(5)?;
    for cert in certify_all(&initial, &params)? {
        println!("{}: satisfied = {}", cert.kind, cert.satisfied);
    }

    let traj = integrate(&initial, &params, 150.0, Scheme::rkf45_default(), 0.1)?;
    print!("{}", sync_report(&traj, 0.2)?.to_summary());
    Ok(())
}
