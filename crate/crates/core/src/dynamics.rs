//! Stuart–Landau network vector field and trajectory integration.
//!
//! The network evolves as
//!
//! ```text
//! ż_j = (μ + iω_j) z_j − |z_j|² z_j + c Σ_k a_jk (z_k − z_j)
//! ```
//!
//! Integration runs in complex coordinates. The polar form `(r_j, θ_j)` is
//! a diagnostic view and is undefined wherever r_j = 0.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::NetworkTopology;

/// Below this amplitude a phase is reported as undefined.
pub const PHASE_FLOOR: f64 = 1e-8;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SAMPLE_EVERY: f64 = 0.01;

const RKF45_SAFETY: f64 = 0.9;
const RKF45_MIN_STEP: f64 = 1e-8;
const RKF45_MAX_STEP: f64 = 0.1;

/// Everything that defines one network instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub mu: f64,
    pub omega: Vec<f64>,
    pub c: f64,
    pub topology: NetworkTopology,
}

impl SystemParams {
    pub fn new(mu: f64, omega: Vec<f64>, c: f64, topology: NetworkTopology) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Parameter(format!("mu must be finite, got {mu}")));
        }
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::Parameter(format!("coupling c must be finite and >= 0, got {c}")));
        }
        if omega.len() != topology.n_nodes() {
            return Err(Error::Parameter(format!(
                "{} natural frequencies given for {} nodes",
                omega.len(),
                topology.n_nodes()
            )));
        }
        if let Some(w) = omega.iter().find(|w| !w.is_finite()) {
            return Err(Error::Parameter(format!("natural frequency {w} is not finite")));
        }
        Ok(Self { mu, omega, c, topology })
    }

    /// Identical natural frequency ω at every node.
    pub fn uniform(mu: f64, omega: f64, c: f64, topology: NetworkTopology) -> Result<Self> {
        let n = topology.n_nodes();
        Self::new(mu, vec![omega; n], c, topology)
    }

    pub fn n_nodes(&self) -> usize {
        self.topology.n_nodes()
    }

    pub fn identical_frequencies(&self) -> bool {
        self.omega.windows(2).all(|w| w[0] == w[1])
    }

    /// The shared frequency when all ω_j coincide.
    pub fn common_frequency(&self) -> Option<f64> {
        self.identical_frequencies().then(|| self.omega[0])
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..self.clone() }
    }

    /// Same network with the common frequency removed (θ_j ↦ θ_j − ωt).
    pub fn co_rotating(&self) -> Result<Self> {
        if !self.identical_frequencies() {
            return Err(Error::Contract("co-rotating frame needs identical natural frequencies".into()));
        }
        Ok(Self { omega: vec![0.0; self.n_nodes()], ..self.clone() })
    }
}

/// Complex oscillator states `z_j = x_j + i y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorState {
    pub z: Vec<Complex64>,
}

impl OscillatorState {
    pub fn new(z: Vec<Complex64>) -> Self {
        Self { z }
    }

    pub fn zeros(n: usize) -> Self {
        Self { z: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn from_polar(r: &[f64], theta: &[f64]) -> Result<Self> {
        if r.len() != theta.len() {
            return Err(Error::Parameter(format!("{} amplitudes but {} phases", r.len(), theta.len())));
        }
        Ok(Self { z: r.iter().zip(theta).map(|(&r, &t)| Complex64::from_polar(r, t)).collect() })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.z.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.z.iter().map(|z| z.norm()).collect()
    }

    /// Principal phases in `[0, 2π)`.
    pub fn principal_phases(&self) -> Vec<f64> {
        self.z.iter().map(|z| principal_angle(z.arg())).collect()
    }

    /// Global phase shift `z ↦ e^{iφ} z`.
    pub fn rotated(&self, phi: f64) -> Self {
        let rot = Complex64::from_polar(1.0, phi);
        Self { z: self.z.iter().map(|z| z * rot).collect() }
    }

    /// Euclidean norm `R = (Σ |z_j|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.z.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Map an angle onto `[0, 2π)`.
pub fn principal_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn wrap_to_pi(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Write the network vector field at `z` into `out`.
pub fn rhs_complex_into(z: &[Complex64], params: &SystemParams, out: &mut [Complex64]) {
    let topo = &params.topology;
    for j in 0..z.len() {
        let zj = z[j];
        let local = Complex64::new(params.mu - zj.norm_sqr(), params.omega[j]) * zj;
        let coupling: Complex64 = topo.neighbors(j).iter().map(|&k| z[k] - zj).sum();
        out[j] = local + coupling * params.c;
    }
}

/// Network vector field in complex coordinates.
pub fn rhs_complex(state: &OscillatorState, params: &SystemParams) -> OscillatorState {
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    rhs_complex_into(&state.z, params, &mut out);
    OscillatorState { z: out }
}

/// Amplitude and phase rates `(ṙ, θ̇)` of the polar form. Requires every
/// `r_j > 0`.
pub fn rhs_polar(r: &[f64], theta: &[f64], params: &SystemParams) -> Result<(Vec<f64>, Vec<f64>)> {
    if let Some((j, &v)) = r.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::Domain { node: j + 1, value: v });
    }
    let topo = &params.topology;
    let n = r.len();
    let mut dr = Vec::with_capacity(n);
    let mut dtheta = Vec::with_capacity(n);
    for j in 0..n {
        let mut radial = 0.0;
        let mut angular = 0.0;
        for &k in topo.neighbors(j) {
            let (s, c) = (theta[k] - theta[j]).sin_cos();
            radial += r[k] * c - r[j];
            angular += r[k] / r[j] * s;
        }
        dr.push((params.mu - r[j] * r[j]) * r[j] + params.c * radial);
        dtheta.push(params.omega[j] + params.c * angular);
    }
    Ok((dr, dtheta))
}

/// Polar rates at a complex state, evaluated from the complex vector field:
/// `ṙ = Re(z̄ ż)/r`, `θ̇ = Im(z̄ ż)/r²`.
pub fn polar_rates(state: &OscillatorState, params: &SystemParams) -> Result<(Vec<f64>, Vec<f64>)> {
    let dz = rhs_complex(state, params);
    let mut dr = Vec::with_capacity(state.len());
    let mut dtheta = Vec::with_capacity(state.len());
    for (j, (z, dz)) in state.z.iter().zip(&dz.z).enumerate() {
        let r2 = z.norm_sqr();
        if !(r2 > 0.0) {
            return Err(Error::Domain { node: j + 1, value: r2.sqrt() });
        }
        let p = z.conj() * dz;
        dr.push(p.re / r2.sqrt());
        dtheta.push(p.im / r2);
    }
    Ok((dr, dtheta))
}

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Classical fixed-step Runge–Kutta; the step is shrunk so that it
    /// divides every sampling interval evenly.
    Rk4 { dt: f64 },
    /// Runge–Kutta–Fehlberg 4(5) with per-component mixed tolerance.
    Rkf45 { atol: f64, rtol: f64 },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::Rk4 { dt: DEFAULT_DT }
    }
}

impl Scheme {
    pub fn rkf45_default() -> Self {
        Scheme::Rkf45 { atol: DEFAULT_TOLERANCE, rtol: DEFAULT_TOLERANCE }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Scheme::Rk4 { dt } if !(dt > 0.0 && dt.is_finite()) => {
                Err(Error::Parameter(format!("RK4 step must be positive, got {dt}")))
            }
            Scheme::Rkf45 { atol, rtol } if !(atol > 0.0 && rtol > 0.0) => {
                Err(Error::Parameter(format!("RKF45 tolerances must be positive, got atol={atol}, rtol={rtol}")))
            }
            _ => Ok(()),
        }
    }
}

/// Sampled solution of the network ODE.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<OscillatorState>,
    pub params: SystemParams,
}

impl Trajectory {
    /// Wrap externally produced samples, checking ordering and finiteness.
    pub fn new(times: Vec<f64>, states: Vec<OscillatorState>, params: SystemParams) -> Result<Self> {
        if times.len() != states.len() || times.is_empty() {
            return Err(Error::Parameter(format!("{} times for {} states", times.len(), states.len())));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("sample times must be strictly increasing".into()));
        }
        let n = params.n_nodes();
        for (t, s) in times.iter().zip(&states) {
            if s.len() != n {
                return Err(Error::Parameter(format!("state with {} nodes, expected {n}", s.len())));
            }
            if !s.is_finite() {
                return Err(Error::Divergence { time: *t });
            }
        }
        Ok(Self { times, states, params })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &OscillatorState {
        self.states.last().expect("trajectory is never empty")
    }

    /// `r_j(t)` indexed `[sample][node]`.
    pub fn amplitudes(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(OscillatorState::amplitudes).collect()
    }

    /// Smallest amplitude over all nodes and samples from index `from` on.
    pub fn min_amplitude(&self, from: usize) -> f64 {
        self.states[from..].iter().flat_map(|s| s.z.iter().map(|z| z.norm())).fold(f64::INFINITY, f64::min)
    }

    /// Restrict to samples with `t >= t0`.
    pub fn tail_from(&self, t0: f64) -> Trajectory {
        let start = self.times.partition_point(|&t| t < t0).min(self.len() - 1);
        Trajectory {
            times: self.times[start..].to_vec(),
            states: self.states[start..].to_vec(),
            params: self.params.clone(),
        }
    }

    /// View the trajectory in the frame rotating with the common frequency:
    /// `z_j ↦ e^{−iωt} z_j`, ω set to zero in the parameters.
    pub fn to_co_rotating(&self) -> Result<Trajectory> {
        let omega = self
            .params
            .common_frequency()
            .ok_or_else(|| Error::Contract("co-rotating frame needs identical natural frequencies".into()))?;
        let states = self.times.iter().zip(&self.states).map(|(&t, s)| s.rotated(-omega * t)).collect();
        Ok(Trajectory { times: self.times.clone(), states, params: self.params.co_rotating()? })
    }

    pub fn unwrap_phases(&self) -> Result<Vec<Vec<f64>>> {
        unwrap_phases(self)
    }

    /// CSV with header `t,x_1,y_1,…,x_N,y_N` and, when `with_polar`,
    /// trailing `r_1..r_N,theta_1..theta_N` (unwrapped phases). Values use
    /// 17 significant digits.
    pub fn to_csv(&self, with_polar: bool) -> Result<String> {
        let n = self.params.n_nodes();
        let phases = if with_polar { Some(self.unwrap_phases()?) } else { None };
        let mut out = String::from("t");
        for j in 1..=n {
            let _ = write!(out, ",x_{j},y_{j}");
        }
        if with_polar {
            for j in 1..=n {
                let _ = write!(out, ",r_{j}");
            }
            for j in 1..=n {
                let _ = write!(out, ",theta_{j}");
            }
        }
        out.push('\n');
        for (i, (t, s)) in self.times.iter().zip(&self.states).enumerate() {
            let _ = write!(out, "{}", fmt_f64(*t));
            for z in &s.z {
                let _ = write!(out, ",{},{}", fmt_f64(z.re), fmt_f64(z.im));
            }
            if let Some(phases) = &phases {
                for z in &s.z {
                    let _ = write!(out, ",{}", fmt_f64(z.norm()));
                }
                for node in phases {
                    let _ = write!(out, ",{}", fmt_f64(node[i]));
                }
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Full double precision (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Integrate from `initial` to `t_end`, recording a sample every
/// `sample_every` time units (plus `t_end` itself).
pub fn integrate(
    initial: &OscillatorState,
    params: &SystemParams,
    t_end: f64,
    scheme: Scheme,
    sample_every: f64,
) -> Result<Trajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Parameter(format!("t_end must be positive, got {t_end}")));
    }
    if !(sample_every > 0.0 && sample_every.is_finite()) {
        return Err(Error::Parameter(format!("sample_every must be positive, got {sample_every}")));
    }
    if initial.len() != params.n_nodes() {
        return Err(Error::Parameter(format!(
            "initial state has {} nodes, network has {}",
            initial.len(),
            params.n_nodes()
        )));
    }
    scheme.validate()?;
    if !initial.is_finite() {
        return Err(Error::Divergence { time: 0.0 });
    }

    let sample_times = sample_grid(t_end, sample_every);
    let mut stepper = Stepper::new(params, initial.len());
    let mut z = initial.z.clone();
    let mut t = 0.0;
    let mut times = Vec::with_capacity(sample_times.len());
    let mut states = Vec::with_capacity(sample_times.len());
    times.push(0.0);
    states.push(initial.clone());
    let mut h_adaptive = match scheme {
        Scheme::Rkf45 { .. } => 1e-3_f64.clamp(RKF45_MIN_STEP, RKF45_MAX_STEP),
        Scheme::Rk4 { .. } => 0.0,
    };

    for &target in &sample_times[1..] {
        match scheme {
            Scheme::Rk4 { dt } => {
                let span = target - t;
                let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
                let h = span / steps as f64;
                for i in 0..steps {
                    stepper.rk4(&mut z, h);
                    if !z.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
                        return Err(Error::Divergence { time: t + (i + 1) as f64 * h });
                    }
                }
            }
            Scheme::Rkf45 { atol, rtol } => {
                let mut tc = t;
                while tc < target {
                    let remaining = target - tc;
                    let last = h_adaptive >= remaining;
                    let h = if last { remaining } else { h_adaptive };
                    let err = stepper.rkf45_trial(&z, h, atol, rtol);
                    if !err.is_finite() {
                        return Err(Error::Divergence { time: tc + h });
                    }
                    let accept = err <= 1.0 || h <= RKF45_MIN_STEP;
                    let factor = if err == 0.0 { 5.0 } else { (RKF45_SAFETY * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if accept {
                        stepper.commit(&mut z);
                        tc = if last { target } else { tc + h };
                        if !last || factor < 1.0 {
                            h_adaptive = (h * factor).clamp(RKF45_MIN_STEP, RKF45_MAX_STEP);
                        }
                    } else {
                        h_adaptive = (h * factor).clamp(RKF45_MIN_STEP, RKF45_MAX_STEP);
                    }
                }
            }
        }
        t = target;
        let state = OscillatorState { z: z.clone() };
        if !state.is_finite() {
            return Err(Error::Divergence { time: t });
        }
        times.push(t);
        states.push(state);
    }
    Ok(Trajectory { times, states, params: params.clone() })
}

fn sample_grid(t_end: f64, every: f64) -> Vec<f64> {
    let count = (t_end / every + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|i| i as f64 * every).collect();
    let last = *grid.last().unwrap();
    if (t_end - last).abs() <= 1e-9 * every {
        *grid.last_mut().unwrap() = t_end;
    } else if last < t_end {
        grid.push(t_end);
    }
    grid
}

/// Scratch buffers for the Runge–Kutta stages.
struct Stepper<'a> {
    params: &'a SystemParams,
    k: [Vec<Complex64>; 6],
    tmp: Vec<Complex64>,
    candidate: Vec<Complex64>,
}

// Fehlberg tableau
const A2: [f64; 1] = [1.0 / 4.0];
const A3: [f64; 2] = [3.0 / 32.0, 9.0 / 32.0];
const A4: [f64; 3] = [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0];
const A5: [f64; 4] = [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0];
const A6: [f64; 5] = [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0];
const B4: [f64; 6] = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0];
const B5: [f64; 6] = [16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0];

impl<'a> Stepper<'a> {
    fn new(params: &'a SystemParams, n: usize) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); n];
        Self { params, k: std::array::from_fn(|_| zero.clone()), tmp: zero.clone(), candidate: zero }
    }

    fn stage(&mut self, z: &[Complex64], h: f64, coeffs: &[f64], into: usize) {
        for i in 0..z.len() {
            let mut acc = z[i];
            for (s, &a) in coeffs.iter().enumerate() {
                if a != 0.0 {
                    acc += self.k[s][i] * (h * a);
                }
            }
            self.tmp[i] = acc;
        }
        let (tmp, k) = (&self.tmp, &mut self.k[into]);
        rhs_complex_into(tmp, self.params, k);
    }

    fn rk4(&mut self, z: &mut [Complex64], h: f64) {
        rhs_complex_into(z, self.params, &mut self.k[0]);
        self.stage(z, h, &[0.5], 1);
        self.stage(z, h, &[0.0, 0.5], 2);
        self.stage(z, h, &[0.0, 0.0, 1.0], 3);
        for i in 0..z.len() {
            z[i] += (self.k[0][i] + self.k[1][i] * 2.0 + self.k[2][i] * 2.0 + self.k[3][i]) * (h / 6.0);
        }
    }

    /// Compute a Fehlberg step into `candidate` (fifth-order solution) and
    /// return the scaled error norm.
    fn rkf45_trial(&mut self, z: &[Complex64], h: f64, atol: f64, rtol: f64) -> f64 {
        rhs_complex_into(z, self.params, &mut self.k[0]);
        self.stage(z, h, &A2, 1);
        self.stage(z, h, &A3, 2);
        self.stage(z, h, &A4, 3);
        self.stage(z, h, &A5, 4);
        self.stage(z, h, &A6, 5);
        let mut err = 0.0_f64;
        for i in 0..z.len() {
            let mut hi = Complex64::new(0.0, 0.0);
            let mut lo = Complex64::new(0.0, 0.0);
            for s in 0..6 {
                hi += self.k[s][i] * B5[s];
                lo += self.k[s][i] * B4[s];
            }
            let next = z[i] + hi * h;
            let e = (hi - lo) * h;
            let scale_re = atol + rtol * z[i].re.abs().max(next.re.abs());
            let scale_im = atol + rtol * z[i].im.abs().max(next.im.abs());
            err = err.max((e.re / scale_re).abs()).max((e.im / scale_im).abs());
            self.candidate[i] = next;
        }
        err
    }

    fn commit(&self, z: &mut [Complex64]) {
        z.copy_from_slice(&self.candidate);
    }
}

/// Continuous phase series per node, indexed `[node][sample]`.
///
/// The increment between consecutive samples is the wrapped difference of
/// principal angles. It is only trusted when the vector field predicts a
/// per-sample increment below π; otherwise the trajectory is reported as
/// undersampled.
pub fn unwrap_phases(traj: &Trajectory) -> Result<Vec<Vec<f64>>> {
    let n = traj.params.n_nodes();
    let mut series: Vec<Vec<f64>> = vec![Vec::with_capacity(traj.len()); n];
    let mut prev_rates: Option<Vec<f64>> = None;
    for (i, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        for (j, z) in s.z.iter().enumerate() {
            let r = z.norm();
            if !(r > PHASE_FLOOR) {
                return Err(Error::PhaseUndefined { node: j + 1, time: *t, amplitude: r });
            }
        }
        let (_, rates) = polar_rates(s, &traj.params)?;
        for (j, z) in s.z.iter().enumerate() {
            let raw = z.arg();
            if i == 0 {
                series[j].push(principal_angle(raw));
                continue;
            }
            let prev = *series[j].last().unwrap();
            let dt = t - traj.times[i - 1];
            let predicted = 0.5 * (prev_rates.as_ref().unwrap()[j] + rates[j]) * dt;
            let step = wrap_to_pi(raw - prev);
            if predicted.abs() >= PI || (step - predicted).abs() > PI / 2.0 {
                return Err(Error::Undersampled { node: j + 1, time: *t, jump: predicted });
            }
            series[j].push(prev + step);
        }
        prev_rates = Some(rates);
    }
    Ok(series)
}

/// Initial amplitudes for a polar initial condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Radii {
    Constant(f64),
    List(Vec<f64>),
}

/// How the starting state is chosen.
///
/// Random phases come from ChaCha8 seeded with `seed` through
/// `SeedableRng::seed_from_u64`; node j (in order) receives
/// `θ_j = a + (b − a)·u_j` where `u_j ∈ [0, 1)` is the generator's next
/// 53-bit uniform double. The same seed always yields the same state.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Explicit(Vec<Complex64>),
    Polar {
        radii: Radii,
        phase_range: (f64, f64),
        seed: u64,
    },
    /// Every node at the same point `z`.
    Synchronous(Complex64),
}

impl InitialCondition {
    pub fn build(&self, n: usize) -> Result<OscillatorState> {
        match self {
            InitialCondition::Explicit(z) => {
                if z.len() != n {
                    return Err(Error::Parameter(format!(
                        "explicit initial state has {} entries for {n} nodes",
                        z.len()
                    )));
                }
                Ok(OscillatorState { z: z.clone() })
            }
            InitialCondition::Synchronous(z) => Ok(OscillatorState { z: vec![*z; n] }),
            InitialCondition::Polar { radii, phase_range: (a, b), seed } => {
                let r = match radii {
                    Radii::Constant(r) => vec![*r; n],
                    Radii::List(list) if list.len() == n => list.clone(),
                    Radii::List(list) => {
                        return Err(Error::Parameter(format!("{} initial radii for {n} nodes", list.len())))
                    }
                };
                if r.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
                    return Err(Error::Parameter("initial radii must be finite and >= 0".into()));
                }
                if !(a.is_finite() && b.is_finite() && a <= b) {
                    return Err(Error::Parameter(format!("bad phase interval ({a}, {b})")));
                }
                let theta = seeded_phases(n, (*a, *b), *seed);
                OscillatorState::from_polar(&r, &theta)
            }
        }
    }
}

/// `n` phases drawn uniformly from `[a, b)` with the documented generator.
pub fn seeded_phases(n: usize, (a, b): (f64, f64), seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            a + (b - a) * u
        })
        .collect()
}
