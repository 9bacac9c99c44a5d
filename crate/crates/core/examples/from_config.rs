//! Drive an experiment from an inline TOML configuration with a command
//! line style override, as the `slnet` binary does.
//!
//! ```sh
//! cargo run --release --example from_config -- params.c=0.05
//! ```

use slnet::config::ExperimentConfig;
use slnet::dynamics::integrate;
use slnet::metrics::sync_report;

const CONFIG: &str = r#"
seed = 42

[topology]
kind = "ring"
n = 10
s = 3

[params]
mu = 1.0
omega = 1.0
c = 0.02

[initial]
kind = "polar"
radii = 0.5
phase_range = [0.0, 2.0]

[integrator]
scheme = "rkf45"

[run]
t_end = 100.0
sample_every = 0.1
"#;

fn main() -> slnet::error::Result<()> {
    let overrides: Vec<String> = std::env::args().skip(1).collect();
    let cfg = ExperimentConfig::from_toml(CONFIG, &overrides)?;
    let params = cfg.system_params()?;
    let initial = cfg.initial_condition(params.n_nodes())?.build(params.n_nodes())?;

    let traj = integrate(&initial, &params, cfg.run.t_end, cfg.integrator.scheme(), cfg.run.sample_every)?;
    let report = sync_report(&traj, cfg.run.tail_fraction)?;
    println!("c = {}, state = {}", params.c, report.state.label());
    Ok(())
}
