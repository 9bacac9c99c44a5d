//! Command-line front end.
//!
//! Every subcommand reads an optional TOML config (see [`crate::config`]),
//! applies flag overrides, writes its artifacts into the output directory
//! and prints a short summary. Exit codes: 0 ok, 2 config or parameter
//! error, 3 runtime failure (divergence, failed validation, i/o).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::certificates::{
    check_antideath, check_degree_sync, check_origin_unstable, check_robust_sync, Certificate, CertificateKind,
};
use crate::config::ExperimentConfig;
use crate::dynamics::{integrate, OscillatorState, Scheme, SystemParams, Trajectory};
use crate::error::Error;
use crate::hopf::{normal_form, PartialsMethod};
use crate::metrics::{diagnostics_csv, energy_functional, phase_spread, sync_report, DEFAULT_SYNC_TOLERANCE};
use crate::scan::{onset_estimate, run_scan};
use crate::spectral::{
    build_jacobian_blocks, classify_criticalities, compute_blocks_m, mu_critical, ring_jacobian, ring_spectral_report,
    verify_diagonalization, RingSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Largest acceptable diagonalization residual under `--validate`.
const DIAGONALIZATION_LIMIT: f64 = 1e-10;
/// Largest acceptable analytic/finite-difference gap under `--validate`.
const HOPF_FD_LIMIT: f64 = 1e-6;
/// Largest acceptable per-sample state change, relative to `max(|z|, 1)`,
/// when the integrator is refined under `simulate --validate`.
const REFINEMENT_LIMIT: f64 = 1e-6;
/// Share of a validation run treated as transient.
const VALIDATION_TRANSIENT: f64 = 0.25;

#[derive(Debug, Parser)]
#[command(name = "slnet", version, about = "Stuart-Landau network simulation and bifurcation analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML experiment config.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Random seed (overrides seed).
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Run the confirming check for this command.
    #[arg(long)]
    pub validate: bool,
    /// Override any config key, e.g. `--set params.c=0.1`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the network and report synchronization diagnostics.
    Simulate(Common),
    /// Evaluate the sufficient-condition certificates; --validate simulates.
    Certify(Common),
    /// Block decomposition of the Jacobian at the origin (ring topologies).
    Spectrum(Common),
    /// Critical values μ_j of the origin grouped by degeneracy.
    CriticalValues {
        #[command(flatten)]
        common: Common,
        /// Ring size N (instead of a config)
        #[arg(long)]
        n: Option<usize>,
        /// Ring coupling range s
        #[arg(long)]
        s: Option<usize>,
        /// Coupling strength c
        #[arg(long)]
        c: Option<f64>,
    },
    /// Hopf normal-form coefficients at μ = 0.
    Hopf {
        #[command(flatten)]
        common: Common,
        /// Common frequency ω (nonzero); defaults to params.omega
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<f64>,
    },
    /// Sweep μ and record branch amplitudes.
    Scan(Common),
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Parameter(_)
            | Error::Disconnected { .. }
            | Error::UnsupportedTopology(_)
            | Error::Contract(_) => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn runtime(message: String) -> Failure {
    Failure { code: EXIT_RUNTIME, message }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Simulate(common) => cmd_simulate(&common),
        Command::Certify(common) => cmd_certify(&common),
        Command::Spectrum(common) => cmd_spectrum(&common),
        Command::CriticalValues { common, n, s, c } => cmd_critical_values(&common, n, s, c),
        Command::Hopf { common, omega } => cmd_hopf(&common, omega),
        Command::Scan(common) => cmd_scan(&common),
    }
}

fn load_config(common: &Common) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path, &common.set)?,
        None => ExperimentConfig::from_toml("", &common.set)?,
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    Ok(cfg)
}

fn write_artifact(dir: &Path, name: &str, body: &str) -> CmdResult {
    std::fs::create_dir_all(dir).map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn simulate(cfg: &ExperimentConfig, params: &SystemParams, init: &OscillatorState) -> Result<Trajectory, Failure> {
    Ok(integrate(init, params, cfg.run.t_end, cfg.integrator.scheme(), cfg.run.sample_every)?)
}

fn cmd_simulate(common: &Common) -> CmdResult {
    let cfg = load_config(common)?;
    let params = cfg.system_params()?;
    let init = cfg.initial_condition(params.n_nodes())?.build(params.n_nodes())?;
    let traj = simulate(&cfg, &params, &init)?;
    let report = sync_report(&traj, cfg.run.tail_fraction)?;
    let mut notes = Vec::new();
    let energy = if params.omega.iter().all(|w| *w == 0.0) {
        match energy_functional(&traj) {
            Ok(e) => Some(e),
            Err(e @ (Error::PhaseUndefined { .. } | Error::Domain { .. })) => {
                notes.push(format!("energy functional skipped: {e}"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let csv = match traj.to_csv(true) {
        Ok(csv) => csv,
        Err(e @ (Error::PhaseUndefined { .. } | Error::Undersampled { .. })) => {
            notes.push(format!("polar columns omitted: {e}"));
            traj.to_csv(false)?
        }
        Err(e) => return Err(e.into()),
    };

    let dir = &cfg.output.dir;
    write_artifact(dir, "trajectory.csv", &csv)?;
    write_artifact(dir, "diagnostics.csv", &diagnostics_csv(&traj, energy.as_ref())?)?;
    let mut summary = report.to_summary();
    if let Some(e) = &energy {
        summary.push_str(&format!("energy_final = {}\n", e.final_h()));
        summary.push_str(&format!("energy_relative_residual = {:e}\n", e.final_relative_residual()));
    }
    for note in &notes {
        summary.push_str(&format!("note = {note}\n"));
    }
    write_artifact(dir, "sync_report.txt", &summary)?;
    print!("{summary}");

    if common.validate {
        let refined = match cfg.integrator.scheme() {
            Scheme::Rk4 { dt } => Scheme::Rk4 { dt: dt / 2.0 },
            Scheme::Rkf45 { atol, rtol } => Scheme::Rkf45 { atol: atol / 32.0, rtol: rtol / 32.0 },
        };
        let check = integrate(&init, &params, cfg.run.t_end, refined, cfg.run.sample_every)?;
        let gap = traj
            .states
            .iter()
            .zip(&check.states)
            .map(|(a, b)| a.z.iter().zip(&b.z).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / a.norm().max(1.0))
            .fold(0.0, f64::max);
        println!("refined-integrator trajectory gap = {gap:e}");
        if gap > REFINEMENT_LIMIT {
            return Err(runtime(format!("trajectory moves by {gap:e} under integrator refinement")));
        }
    }
    Ok(())
}

fn certificate_report(cert: &std::result::Result<Certificate, Error>, kind: CertificateKind) -> String {
    match cert {
        Ok(c) => c.to_report(),
        Err(e) => format!("[{kind}]\nnot applicable: {e}\n"),
    }
}

fn cmd_certify(common: &Common) -> CmdResult {
    let cfg = load_config(common)?;
    let params = cfg.system_params()?;
    let init = cfg.initial_condition(params.n_nodes())?.build(params.n_nodes())?;
    let certs = [
        (CertificateKind::AntiDeath, check_antideath(&init, &params)),
        (CertificateKind::OriginUnstable, Ok(check_origin_unstable(&params))),
        (CertificateKind::RobustSync, check_robust_sync(&init, &params)),
        (CertificateKind::DegreeSync, check_degree_sync(&init, &params)),
    ];
    let mut text = String::new();
    for (kind, cert) in &certs {
        text.push_str(&certificate_report(cert, *kind));
        text.push('\n');
    }
    write_artifact(&cfg.output.dir, "certificates.txt", &text)?;
    print!("{text}");

    if common.validate {
        let traj = simulate(&cfg, &params, &init)?;
        let (lines, ok) = validate_certificates(&certs, &traj, &cfg)?;
        write_artifact(&cfg.output.dir, "validation.txt", &lines)?;
        print!("{lines}");
        if !ok {
            return Err(runtime("simulation contradicts a satisfied certificate".into()));
        }
    }
    Ok(())
}

fn validate_certificates(
    certs: &[(CertificateKind, std::result::Result<Certificate, Error>)],
    traj: &Trajectory,
    cfg: &ExperimentConfig,
) -> Result<(String, bool), Failure> {
    let mut out = String::from("[validation]\n");
    let mut ok = true;
    let t0 = traj.times[0] + VALIDATION_TRANSIENT * (traj.times.last().unwrap() - traj.times[0]);
    let start = traj.times.partition_point(|&t| t < t0);
    let report = sync_report(traj, cfg.run.tail_fraction)?;
    for (kind, cert) in certs {
        let Ok(cert) = cert else { continue };
        if !cert.satisfied {
            out.push_str(&format!("{kind}: not satisfied, nothing to confirm\n"));
            continue;
        }
        let verdict = match kind {
            CertificateKind::AntiDeath => {
                let r_star = cert.witness("r_star").unwrap_or(0.0);
                let sqrt_mu = traj.params.mu.sqrt();
                let lo = traj.min_amplitude(start);
                let hi = traj.states[start..].iter().flat_map(|s| s.amplitudes()).fold(0.0, f64::max);
                let good = lo > r_star * (1.0 - 1e-3) && hi < sqrt_mu * (1.0 + 1e-6);
                (good, format!("min r = {lo}, max r = {hi}, bounds ({r_star}, {sqrt_mu})"))
            }
            CertificateKind::OriginUnstable => {
                let lo = traj.min_amplitude(start);
                (lo > 0.0, format!("min r after transient = {lo}"))
            }
            CertificateKind::RobustSync | CertificateKind::DegreeSync => {
                if report.completely_synchronized(DEFAULT_SYNC_TOLERANCE) {
                    (true, format!("state = {}", report.state.label()))
                } else {
                    // finite runs only see the spread shrink
                    let first = phase_spread(&traj.states[0].principal_phases());
                    let last = phase_spread(&traj.final_state().principal_phases());
                    let word = if last < first { "still converging" } else { "not converging" };
                    (last < first, format!("{word}, phase spread {first:e} -> {last:e}; extend run.t_end"))
                }
            }
        };
        ok &= verdict.0;
        let word = if verdict.0 { "confirmed" } else { "NOT confirmed" };
        out.push_str(&format!("{kind}: {word} ({})\n", verdict.1));
    }
    Ok((out, ok))
}

fn cmd_spectrum(common: &Common) -> CmdResult {
    let cfg = load_config(common)?;
    let params = cfg.system_params()?;
    let report = compute_blocks_m(&params)?;
    let jac = build_jacobian_blocks(&params)?;
    let residual = verify_diagonalization(&jac, &report)?;
    write_artifact(&cfg.output.dir, "spectrum.csv", &report.to_csv())?;
    let mut text = report.criticality.to_summary();
    text.push_str(&format!("block_route_agreement = {:e}\n", report.route_agreement));
    text.push_str(&format!("reconstruction_residual = {:e}\n", residual.reconstruction));
    text.push_str(&format!("eigenpair_residual = {:e}\n", residual.eigenpairs));
    write_artifact(&cfg.output.dir, "spectrum.txt", &text)?;
    print!("{text}");
    if common.validate && residual.max() >= DIAGONALIZATION_LIMIT {
        return Err(runtime(format!(
            "diagonalization residual {:e} exceeds {DIAGONALIZATION_LIMIT:e}",
            residual.max()
        )));
    }
    Ok(())
}

fn cmd_critical_values(common: &Common, n: Option<usize>, s: Option<usize>, c: Option<f64>) -> CmdResult {
    let cfg = load_config(common)?;
    let (cfg_n, cfg_s) = match &cfg.topology {
        Some(crate::config::TopologySpec::Ring { n, s }) => (Some(*n), Some(*s)),
        Some(crate::config::TopologySpec::Complete { n }) => (Some(*n), Some(n / 2)),
        _ => (None, None),
    };
    let missing =
        |what: &str| Failure { code: EXIT_CONFIG, message: format!("critical-values needs {what} (flag or config)") };
    let n = n.or(cfg_n).ok_or_else(|| missing("--n"))?;
    let s = s.or(cfg_s).ok_or_else(|| missing("--s"))?;
    let c = c.or(cfg.params.as_ref().map(|p| p.c)).ok_or_else(|| missing("--c"))?;
    let table = classify_criticalities(n, s, c)?;
    write_artifact(&cfg.output.dir, "critical_values.csv", &table.to_markers_csv())?;
    print!("{}", table.to_summary());

    if common.validate {
        // at μ = 0 block j has eigenvalues −μ_j ± i, so each μ_j is read back numerically
        let report = ring_spectral_report(n, s, 0.0, 1.0, c)?;
        let residual = verify_diagonalization(&ring_jacobian(RingSpec::new(n, s)?, 0.0, 1.0, c), &report)?;
        let mut gap = report.route_agreement.max(residual.max());
        for j in 2..=n {
            let [lambda, _] = report.eigenvalues(j);
            gap = gap.max((lambda.re + mu_critical(j, n, s, c)?).abs());
        }
        println!("numeric diagonalization gap = {gap:e}");
        if gap >= DIAGONALIZATION_LIMIT {
            return Err(runtime(format!("critical values disagree with the numeric spectrum by {gap:e}")));
        }
    }
    Ok(())
}

fn cmd_hopf(common: &Common, omega: Option<f64>) -> CmdResult {
    let cfg = load_config(common)?;
    let from_cfg = match cfg.params.as_ref().map(|p| &p.omega) {
        Some(crate::config::ScalarOrList::Scalar(w)) => Some(*w),
        Some(crate::config::ScalarOrList::List(_)) => {
            return Err(Failure { code: EXIT_CONFIG, message: "hopf needs a single scalar omega".into() })
        }
        None => None,
    };
    let omega = omega
        .or(from_cfg)
        .ok_or_else(|| Failure { code: EXIT_CONFIG, message: "hopf needs --omega (flag or params.omega)".into() })?;
    let coeffs = normal_form(omega, cfg.hopf.method())?;
    write_artifact(&cfg.output.dir, "hopf.txt", &coeffs.to_summary())?;
    print!("{}", coeffs.to_table());
    if common.validate {
        let exact = normal_form(omega, PartialsMethod::Analytic)?;
        let gap = [
            (coeffs.g11 - exact.g11).norm(),
            (coeffs.g02 - exact.g02).norm(),
            (coeffs.g20 - exact.g20).norm(),
            (coeffs.g21 - exact.g21).norm(),
            (coeffs.c1 - exact.c1).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        println!("analytic vs finite-difference gap = {gap:e}");
        if gap > HOPF_FD_LIMIT {
            return Err(runtime(format!("finite-difference coefficients off by {gap:e}")));
        }
    }
    Ok(())
}

fn cmd_scan(common: &Common) -> CmdResult {
    let cfg = load_config(common)?;
    let scan_cfg = cfg.scan_config()?;
    let result = run_scan(&scan_cfg)?;
    result.write_to(&cfg.output.dir)?;
    print!("{}", result.to_csv());
    let onset = onset_estimate(&result.points);
    match &onset {
        Ok(mu) => println!("onset estimate = {mu}"),
        Err(e) => println!("onset estimate unavailable: {e}"),
    }
    if let Some(markers) = &result.markers {
        print!("{}", markers.to_summary());
    }

    if common.validate {
        let spacing = scan_cfg.mu_grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let onset = onset.map_err(|e| runtime(format!("no onset to validate: {e}")))?;
        println!("onset vs synchronous Hopf point mu = 0: {onset:e} (grid spacing {spacing:e})");
        if onset.abs() > spacing {
            return Err(runtime(format!("onset {onset} is more than one grid step from mu = 0")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_mapping() {
        assert_eq!(Failure::from(Error::Parse("x".into())).code, EXIT_CONFIG);
        assert_eq!(Failure::from(Error::Disconnected { components: 2 }).code, EXIT_CONFIG);
        assert_eq!(Failure::from(Error::Divergence { time: 1.0 }).code, EXIT_RUNTIME);
        assert_eq!(Failure::from(Error::Io("x".into())).code, EXIT_RUNTIME);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["slnet", "frobnicate"]), EXIT_CONFIG);
        assert_eq!(run(["slnet", "hopf", "--omega"]), EXIT_CONFIG);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["slnet", "--help"]), EXIT_OK);
    }

    #[test]
    fn hopf_zero_frequency_is_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        assert_eq!(run(["slnet", "hopf", "--omega", "0", "--out", out]), EXIT_CONFIG);
        assert_eq!(run(["slnet", "hopf", "--omega", "-2", "--out", out, "--validate"]), EXIT_OK);
    }
}
