//! Synchronization diagnostics, the energy-type functional, and
//! exponential rate fitting.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::dynamics::{fmt_f64, principal_angle, rhs_polar, OscillatorState, Trajectory, PHASE_FLOOR};
use crate::error::{Error, Result};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.2;
pub const MIN_TAIL_SAMPLES: usize = 100;
/// Rate fits use samples whose spread lies in this band.
pub const FIT_BAND: (f64, f64) = (1e-10, 1e-2);
pub const FIT_MIN_POINTS: usize = 50;
pub const FIT_MIN_R_SQUARED: f64 = 0.99;
/// Largest final amplitude still counted as amplitude death.
pub const DECAY_THRESHOLD: f64 = 1e-3;
/// Spread below which a diagnostic counts as synchronized.
pub const DEFAULT_SYNC_TOLERANCE: f64 = 1e-4;

/// `min_m |α − β + 2πm|`, in `[0, π]`.
pub fn circular_distance(alpha: f64, beta: f64) -> f64 {
    let d = (alpha - beta).rem_euclid(TAU);
    d.min(TAU - d).max(0.0)
}

/// Largest pairwise circular distance among the phases.
pub fn phase_spread(phases: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, &a) in phases.iter().enumerate() {
        for &b in &phases[i + 1..] {
            worst = worst.max(circular_distance(a, b));
        }
    }
    worst
}

/// `max_j v_j − min_j v_j`, i.e. the largest pairwise `|v_j − v_k|`.
pub fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// `R = (Σ_j |z_j|²)^{1/2}`.
pub fn state_norm_r(state: &OscillatorState) -> f64 {
    state.norm()
}

/// Circular mean of the phases in `[0, 2π)`.
pub fn circular_mean(phases: &[f64]) -> f64 {
    let s: Complex64 = phases.iter().map(|&t| Complex64::from_polar(1.0, t)).sum();
    principal_angle(s.arg())
}

/// Final value and worst value over the tail window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadStat {
    pub final_value: f64,
    pub tail_max: f64,
}

impl SpreadStat {
    fn over(values: impl Iterator<Item = f64>) -> Self {
        let mut last = 0.0;
        let mut worst = 0.0_f64;
        for v in values {
            last = v;
            worst = worst.max(v);
        }
        Self { final_value: last, tail_max: worst }
    }
}

/// Least-squares fit of `log(spread) = a − rate·t`.
#[derive(Debug, Clone, PartialEq)]
pub enum RateFit {
    Established { rate: f64, r_squared: f64, points: usize },
    NotEstablished { reason: String },
}

impl RateFit {
    pub fn rate(&self) -> Option<f64> {
        match self {
            RateFit::Established { rate, .. } => Some(*rate),
            RateFit::NotEstablished { .. } => None,
        }
    }
}

/// Coarse outcome of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncState {
    /// All amplitudes ended below the decay threshold.
    Decayed,
    /// Amplitudes, rates and phases all aligned.
    Complete,
    /// Amplitudes and rates aligned, phases not.
    FrequencyAmplitude,
    NotSynchronized,
}

impl SyncState {
    pub fn label(&self) -> &'static str {
        match self {
            SyncState::Decayed => "decayed",
            SyncState::Complete => "complete",
            SyncState::FrequencyAmplitude => "frequency-amplitude",
            SyncState::NotSynchronized => "none",
        }
    }
}

/// Measured synchronization diagnostics for one trajectory.
///
/// Phase-dependent entries are `None` when some amplitude in the tail
/// window falls below the phase floor.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncReport {
    pub tail_start: f64,
    pub tail_samples: usize,
    pub amplitude_spread: SpreadStat,
    pub phase_spread: Option<SpreadStat>,
    pub amplitude_rate_spread: Option<SpreadStat>,
    pub phase_rate_spread: Option<SpreadStat>,
    /// `max_j |ṙ_j|` and `max_j |θ̇_j|` at the final sample.
    pub final_max_amplitude_rate: Option<f64>,
    pub final_max_phase_rate: Option<f64>,
    pub common_phase_estimate: Option<f64>,
    /// `max_j |r_j − √μ|` at the final sample (μ > 0 only).
    pub amplitude_target_error: Option<f64>,
    pub final_max_amplitude: f64,
    pub exp_rate: RateFit,
    pub state: SyncState,
}

impl SyncReport {
    pub fn frequency_amplitude_synchronized(&self, tol: f64) -> bool {
        self.amplitude_spread.final_value < tol
            && self.amplitude_rate_spread.is_some_and(|s| s.final_value < tol)
            && self.phase_rate_spread.is_some_and(|s| s.final_value < tol)
    }

    pub fn completely_synchronized(&self, tol: f64) -> bool {
        self.frequency_amplitude_synchronized(tol) && self.phase_spread.is_some_and(|s| s.final_value < tol)
    }

    /// Key–value summary, one `key = value` per line.
    pub fn to_summary(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), fmt_f64);
        let stat = |out: &mut String, key: &str, s: Option<SpreadStat>| {
            let _ = writeln!(out, "{key}.final = {}", opt(s.map(|s| s.final_value)));
            let _ = writeln!(out, "{key}.tail_max = {}", opt(s.map(|s| s.tail_max)));
        };
        let _ = writeln!(out, "state = {}", self.state.label());
        let _ = writeln!(out, "tail_start = {}", fmt_f64(self.tail_start));
        let _ = writeln!(out, "tail_samples = {}", self.tail_samples);
        stat(&mut out, "amplitude_spread", Some(self.amplitude_spread));
        stat(&mut out, "phase_spread", self.phase_spread);
        stat(&mut out, "amplitude_rate_spread", self.amplitude_rate_spread);
        stat(&mut out, "phase_rate_spread", self.phase_rate_spread);
        let _ = writeln!(out, "final_max_amplitude_rate = {}", opt(self.final_max_amplitude_rate));
        let _ = writeln!(out, "final_max_phase_rate = {}", opt(self.final_max_phase_rate));
        let _ = writeln!(out, "common_phase_estimate = {}", opt(self.common_phase_estimate));
        let _ = writeln!(out, "amplitude_target_error = {}", opt(self.amplitude_target_error));
        let _ = writeln!(out, "final_max_amplitude = {}", fmt_f64(self.final_max_amplitude));
        match &self.exp_rate {
            RateFit::Established { rate, r_squared, points } => {
                let _ = writeln!(out, "exp_rate = {}", fmt_f64(*rate));
                let _ = writeln!(out, "exp_rate.r_squared = {}", fmt_f64(*r_squared));
                let _ = writeln!(out, "exp_rate.points = {points}");
            }
            RateFit::NotEstablished { reason } => {
                let _ = writeln!(out, "exp_rate = not established ({reason})");
            }
        }
        let tol = DEFAULT_SYNC_TOLERANCE;
        let _ = writeln!(out, "frequency_amplitude_sync = {}", self.frequency_amplitude_synchronized(tol));
        let _ = writeln!(out, "complete_sync = {}", self.completely_synchronized(tol));
        out
    }
}

/// Phase spread per sample; `None` where some amplitude is below the floor.
pub fn phase_spread_series(traj: &Trajectory) -> Vec<Option<f64>> {
    traj.states
        .iter()
        .map(|s| {
            if s.z.iter().any(|z| !(z.norm() > PHASE_FLOOR)) {
                None
            } else {
                Some(phase_spread(&s.principal_phases()))
            }
        })
        .collect()
}

pub fn amplitude_spread_series(traj: &Trajectory) -> Vec<f64> {
    traj.states.iter().map(|s| spread(&s.amplitudes())).collect()
}

/// Fit `log y = a − rate·t` over samples with `y` in [`FIT_BAND`].
pub fn fit_exponential_rate(times: &[f64], values: &[Option<f64>]) -> RateFit {
    let (lo, hi) = FIT_BAND;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter_map(|(&t, v)| v.filter(|v| (lo..=hi).contains(v)).map(|v| (t, v.ln())))
        .collect();
    if pts.len() < FIT_MIN_POINTS {
        return RateFit::NotEstablished { reason: format!("{} samples in fit band, need {FIT_MIN_POINTS}", pts.len()) };
    }
    let n = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for &(t, y) in &pts {
        stt += (t - mean_t) * (t - mean_t);
        sty += (t - mean_t) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if stt == 0.0 || syy == 0.0 {
        return RateFit::NotEstablished { reason: "degenerate fit window".into() };
    }
    let slope = sty / stt;
    let r_squared = sty * sty / (stt * syy);
    if r_squared <= FIT_MIN_R_SQUARED {
        return RateFit::NotEstablished { reason: format!("fit quality R^2 = {r_squared:.4}") };
    }
    RateFit::Established { rate: -slope, r_squared, points: pts.len() }
}

/// Synchronization diagnostics over the final `tail_fraction` of `traj`.
///
/// Rates ṙ, θ̇ come from the polar vector field at each sampled state.
pub fn sync_report(traj: &Trajectory, tail_fraction: f64) -> Result<SyncReport> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Parameter(format!("tail fraction must be in (0, 1], got {tail_fraction}")));
    }
    let t0 = traj.times[0];
    let t_end = *traj.times.last().unwrap();
    let tail_start = t_end - tail_fraction * (t_end - t0);
    let start = traj.times.partition_point(|&t| t < tail_start);
    let tail_samples = traj.len() - start;
    if tail_samples < MIN_TAIL_SAMPLES {
        return Err(Error::Parameter(format!(
            "tail window holds {tail_samples} samples, need at least {MIN_TAIL_SAMPLES}"
        )));
    }
    let tail = &traj.states[start..];
    let params = &traj.params;

    let amplitude_spread = SpreadStat::over(tail.iter().map(|s| spread(&s.amplitudes())));
    let phase_defined = tail.iter().all(|s| s.z.iter().all(|z| z.norm() > PHASE_FLOOR));

    let mut phase_spread_stat = None;
    let mut amplitude_rate_spread = None;
    let mut phase_rate_spread = None;
    let mut final_max_amplitude_rate = None;
    let mut final_max_phase_rate = None;
    let mut common_phase_estimate = None;
    if phase_defined {
        phase_spread_stat = Some(SpreadStat::over(tail.iter().map(|s| phase_spread(&s.principal_phases()))));
        let mut dr_spreads = Vec::with_capacity(tail.len());
        let mut dth_spreads = Vec::with_capacity(tail.len());
        let mut last_rates = None;
        for s in tail {
            let (dr, dth) = rhs_polar(&s.amplitudes(), &s.principal_phases(), params)?;
            dr_spreads.push(spread(&dr));
            dth_spreads.push(spread(&dth));
            last_rates = Some((dr, dth));
        }
        amplitude_rate_spread = Some(SpreadStat::over(dr_spreads.into_iter()));
        phase_rate_spread = Some(SpreadStat::over(dth_spreads.into_iter()));
        let (dr, dth) = last_rates.unwrap();
        final_max_amplitude_rate = Some(dr.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
        final_max_phase_rate = Some(dth.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
        common_phase_estimate = Some(circular_mean(&traj.final_state().principal_phases()));
    }

    let final_amps = traj.final_state().amplitudes();
    let final_max_amplitude = final_amps.iter().copied().fold(0.0, f64::max);
    let amplitude_target_error = (params.mu > 0.0).then(|| {
        let target = params.mu.sqrt();
        final_amps.iter().fold(0.0_f64, |m, r| m.max((r - target).abs()))
    });

    let exp_rate = fit_exponential_rate(&traj.times, &phase_spread_series(traj));

    let mut report = SyncReport {
        tail_start,
        tail_samples,
        amplitude_spread,
        phase_spread: phase_spread_stat,
        amplitude_rate_spread,
        phase_rate_spread,
        final_max_amplitude_rate,
        final_max_phase_rate,
        common_phase_estimate,
        amplitude_target_error,
        final_max_amplitude,
        exp_rate,
        state: SyncState::NotSynchronized,
    };
    report.state = if final_max_amplitude < DECAY_THRESHOLD {
        SyncState::Decayed
    } else if report.completely_synchronized(DEFAULT_SYNC_TOLERANCE) {
        SyncState::Complete
    } else if report.frequency_amplitude_synchronized(DEFAULT_SYNC_TOLERANCE) {
        SyncState::FrequencyAmplitude
    } else {
        SyncState::NotSynchronized
    };
    Ok(report)
}

/// Energy functional samples along a co-rotating trajectory.
///
/// `h` is `∫₀ᵗ Σ_j (ṙ_j² + (r_j θ̇_j)²) ds` by trapezoidal quadrature.
/// `term_i_integral` integrates `Σ_j (μ − r_j² − c d_j) r_j ṙ_j` the same
/// way. `term_ii_integral` is the closed form
/// `P(t) − P(0)` with `P = (c/2) Σ_j Σ_k a_jk r_j r_k cos(θ_k − θ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRecord {
    pub times: Vec<f64>,
    pub h: Vec<f64>,
    pub term_i_integral: Vec<f64>,
    pub term_ii_integral: Vec<f64>,
    /// Trapezoidal integral of the second term, for comparison with the
    /// closed form.
    pub term_ii_quadrature: Vec<f64>,
    pub balance_residual: Vec<f64>,
}

impl EnergyRecord {
    pub fn final_h(&self) -> f64 {
        *self.h.last().unwrap()
    }

    pub fn final_residual(&self) -> f64 {
        *self.balance_residual.last().unwrap()
    }

    /// Residual relative to `max(H, 1)` at the final sample.
    pub fn final_relative_residual(&self) -> f64 {
        self.final_residual() / self.final_h().max(1.0)
    }
}

/// Evaluate the energy functional and its balance identity.
///
/// Requires ω ≡ 0 (pass a co-rotating trajectory) and all amplitudes above
/// the phase floor.
pub fn energy_functional(traj: &Trajectory) -> Result<EnergyRecord> {
    let params = &traj.params;
    if params.omega.iter().any(|&w| w != 0.0) {
        return Err(Error::Contract("energy functional needs ω ≡ 0; convert with Trajectory::to_co_rotating".into()));
    }
    let topo = &params.topology;
    let n = params.n_nodes();
    let degrees = topo.degrees();

    let mut h_rate = Vec::with_capacity(traj.len());
    let mut i_rate = Vec::with_capacity(traj.len());
    let mut ii_rate = Vec::with_capacity(traj.len());
    let mut potential = Vec::with_capacity(traj.len());
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let r = s.amplitudes();
        if let Some(j) = r.iter().position(|&v| !(v > PHASE_FLOOR)) {
            return Err(Error::PhaseUndefined { node: j + 1, time: *t, amplitude: r[j] });
        }
        let theta = s.principal_phases();
        let (dr, dth) = rhs_polar(&r, &theta, params)?;
        let mut h = 0.0;
        let mut i_term = 0.0;
        let mut ii_term = 0.0;
        let mut p = 0.0;
        for j in 0..n {
            h += dr[j] * dr[j] + (r[j] * dth[j]).powi(2);
            i_term += (params.mu - r[j] * r[j] - params.c * degrees[j] as f64) * r[j] * dr[j];
            for &k in topo.neighbors(j) {
                let (sn, cs) = (theta[k] - theta[j]).sin_cos();
                ii_term += r[k] * dr[j] * cs + r[k] * r[j] * sn * dth[j];
                p += r[j] * r[k] * cs;
            }
        }
        h_rate.push(h);
        i_rate.push(i_term);
        ii_rate.push(params.c * ii_term);
        potential.push(0.5 * params.c * p);
    }

    let h = cumulative_trapezoid(&traj.times, &h_rate);
    let term_i_integral = cumulative_trapezoid(&traj.times, &i_rate);
    let term_ii_quadrature = cumulative_trapezoid(&traj.times, &ii_rate);
    let term_ii_integral: Vec<f64> = potential.iter().map(|p| p - potential[0]).collect();
    let balance_residual =
        h.iter().zip(&term_i_integral).zip(&term_ii_integral).map(|((h, a), b)| (h - a - b).abs()).collect();
    Ok(EnergyRecord {
        times: traj.times.clone(),
        h,
        term_i_integral,
        term_ii_integral,
        term_ii_quadrature,
        balance_residual,
    })
}

fn cumulative_trapezoid(t: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..f.len() {
        acc += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
        out.push(acc);
    }
    out
}

/// Per-sample CSV: `t,phase_spread,amplitude_spread` plus `H,residual`
/// when an energy record for the same samples is supplied.
pub fn diagnostics_csv(traj: &Trajectory, energy: Option<&EnergyRecord>) -> Result<String> {
    if let Some(e) = energy {
        if e.times.len() != traj.len() {
            return Err(Error::Parameter("energy record does not match trajectory samples".into()));
        }
    }
    let phase = phase_spread_series(traj);
    let amp = amplitude_spread_series(traj);
    let mut out = String::from("t,phase_spread,amplitude_spread");
    if energy.is_some() {
        out.push_str(",H,residual");
    }
    out.push('\n');
    for i in 0..traj.len() {
        let ph = phase[i].map_or_else(|| "nan".to_string(), fmt_f64);
        let _ = write!(out, "{},{},{}", fmt_f64(traj.times[i]), ph, fmt_f64(amp[i]));
        if let Some(e) = energy {
            let _ = write!(out, ",{},{}", fmt_f64(e.h[i]), fmt_f64(e.balance_residual[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Largest phase across nodes, used for envelope checks on unwrapped phases.
pub fn phase_envelope(unwrapped: &[Vec<f64>], sample: usize) -> (f64, f64) {
    unwrapped
        .iter()
        .map(|node| node[sample])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, InitialCondition, Radii, Scheme, SystemParams};
    use crate::graph::NetworkTopology;
    use std::f64::consts::PI;

    #[test]
    fn circular_distance_examples() {
        assert!(circular_distance(0.0, TAU).abs() < 1e-15);
        assert!((circular_distance(0.0, PI) - PI).abs() < 1e-15);
        let expected = (0.1 - 6.2 + TAU).abs();
        assert!((circular_distance(0.1, 6.2) - expected).abs() < 1e-12);
        assert!((circular_distance(0.1, 6.2) - 0.183185).abs() < 1e-6);
    }

    #[test]
    fn spreads() {
        assert_eq!(spread(&[0.5, 0.2, 0.9]), 0.9 - 0.2);
        assert!((phase_spread(&[0.1, 6.2, 0.0]) - circular_distance(0.1, 6.2)).abs() < 1e-15);
        assert_eq!(phase_spread(&[1.0]), 0.0);
    }

    #[test]
    fn norm_r() {
        assert_eq!(state_norm_r(&OscillatorState::zeros(4)), 0.0);
        let mu: f64 = 0.7;
        let s = OscillatorState::from_polar(&[mu.sqrt(); 5], &[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((state_norm_r(&s) - (5.0 * mu).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rate_fit_recovers_synthetic_rate() {
        let times: Vec<f64> = (0..400).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<Option<f64>> = times.iter().map(|t| Some(1e-2 * (-0.35 * t).exp())).collect();
        match fit_exponential_rate(&times, &vals) {
            RateFit::Established { rate, r_squared, .. } => {
                assert!((rate - 0.35).abs() < 1e-10);
                assert!(r_squared > 0.999999);
            }
            other => panic!("{other:?}"),
        }
        let flat: Vec<Option<f64>> = times.iter().map(|_| Some(0.5)).collect();
        assert!(matches!(fit_exponential_rate(&times, &flat), RateFit::NotEstablished { .. }));
    }

    #[test]
    fn synchronous_start_stays_synchronized() {
        let p = SystemParams::uniform(1.0, 1.0, 0.1, NetworkTopology::ring(5, 1).unwrap()).unwrap();
        let init = InitialCondition::Synchronous(Complex64::new(0.3, 0.2)).build(5).unwrap();
        let traj = integrate(&init, &p, 10.0, Scheme::default(), 0.01).unwrap();
        let r = sync_report(&traj, 0.2).unwrap();
        assert!(r.amplitude_spread.tail_max < 1e-9);
        assert!(r.phase_spread.unwrap().tail_max < 1e-9);
        assert!(r.amplitude_rate_spread.unwrap().tail_max < 1e-9);
        assert!(r.phase_rate_spread.unwrap().tail_max < 1e-9);
        assert!(phase_spread_series(&traj).iter().all(|v| v.unwrap() < 1e-9));
    }

    #[test]
    fn uncoupled_distinct_frequencies_do_not_lock() {
        let g = NetworkTopology::complete(2).unwrap();
        let p = SystemParams::new(1.0, vec![1.0, 1.4], 0.0, g).unwrap();
        let init =
            InitialCondition::Polar { radii: Radii::Constant(1.0), phase_range: (0.0, 1.0), seed: 3 }.build(2).unwrap();
        let traj = integrate(&init, &p, 20.0, Scheme::default(), 0.01).unwrap();
        let r = sync_report(&traj, 0.2).unwrap();
        assert!((r.phase_rate_spread.unwrap().final_value - 0.4).abs() < 1e-9);
        assert!(!r.completely_synchronized(1e-4));
        assert_eq!(r.state, SyncState::NotSynchronized);
    }

    #[test]
    fn short_tail_is_rejected() {
        let p = SystemParams::uniform(1.0, 1.0, 0.1, NetworkTopology::complete(3).unwrap()).unwrap();
        let init = InitialCondition::Synchronous(Complex64::new(0.3, 0.2)).build(3).unwrap();
        let traj = integrate(&init, &p, 1.0, Scheme::default(), 0.01).unwrap();
        assert!(matches!(sync_report(&traj, 0.2), Err(Error::Parameter(_))));
    }

    #[test]
    fn decayed_run_flags_phase_metrics_undefined() {
        let p = SystemParams::uniform(-1.0, 1.0, 0.0, NetworkTopology::complete(3).unwrap()).unwrap();
        let init = InitialCondition::Synchronous(Complex64::new(0.1, 0.0)).build(3).unwrap();
        let traj = integrate(&init, &p, 40.0, Scheme::default(), 0.05).unwrap();
        let r = sync_report(&traj, 0.2).unwrap();
        assert_eq!(r.state, SyncState::Decayed);
        assert!(r.phase_spread.is_none());
        assert!(r.amplitude_target_error.is_none());
    }

    #[test]
    fn energy_is_zero_on_synchronized_equilibrium() {
        let p = SystemParams::uniform(1.0, 0.0, 0.1, NetworkTopology::complete(3).unwrap()).unwrap();
        let init = InitialCondition::Synchronous(Complex64::from_polar(1.0, 0.4)).build(3).unwrap();
        let traj = integrate(&init, &p, 5.0, Scheme::default(), 0.01).unwrap();
        let e = energy_functional(&traj).unwrap();
        assert!(e.h.iter().all(|&h| h.abs() < 1e-20));
    }

    #[test]
    fn energy_requires_zero_frequency() {
        let p = SystemParams::uniform(1.0, 1.0, 0.1, NetworkTopology::complete(3).unwrap()).unwrap();
        let init = InitialCondition::Synchronous(Complex64::new(0.5, 0.0)).build(3).unwrap();
        let traj = integrate(&init, &p, 1.0, Scheme::default(), 0.1).unwrap();
        assert!(matches!(energy_functional(&traj), Err(Error::Contract(_))));
        assert!(energy_functional(&traj.to_co_rotating().unwrap()).is_ok());
    }

    #[test]
    fn energy_nondecreasing_and_balanced() {
        let p = SystemParams::uniform(1.0, 0.0, 0.1, NetworkTopology::complete(3).unwrap()).unwrap();
        let init =
            InitialCondition::Polar { radii: Radii::List(vec![0.3, 0.5, 0.8]), phase_range: (0.2, 1.3), seed: 11 }
                .build(3)
                .unwrap();
        let traj = integrate(&init, &p, 20.0, Scheme::default(), 0.001).unwrap();
        let e = energy_functional(&traj).unwrap();
        assert!(e.h.windows(2).all(|w| w[1] >= w[0]));
        assert!(e.final_relative_residual() < 1e-6, "{}", e.final_relative_residual());
    }

    #[test]
    fn diagnostics_csv_header() {
        let p = SystemParams::uniform(1.0, 0.0, 0.1, NetworkTopology::complete(3).unwrap()).unwrap();
        let init = InitialCondition::Synchronous(Complex64::new(0.5, 0.0)).build(3).unwrap();
        let traj = integrate(&init, &p, 0.1, Scheme::default(), 0.05).unwrap();
        let e = energy_functional(&traj).unwrap();
        let csv = diagnostics_csv(&traj, Some(&e)).unwrap();
        assert!(csv.starts_with("t,phase_spread,amplitude_spread,H,residual\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
