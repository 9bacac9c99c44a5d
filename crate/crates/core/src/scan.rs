//! Parameter sweeps in μ: simulated branch amplitudes plus the analytic
//! critical-value markers of the origin.
//!
//! Each grid point integrates from a small perturbation of the origin,
//! discards a transient and records the largest value of the observable
//! over a measurement window. Grid points run in parallel; results keep the
//! grid order.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{fmt_f64, integrate, InitialCondition, Radii, Scheme, SystemParams};
use crate::error::{Error, Result};
use crate::metrics::{sync_report, SyncState};
use crate::spectral::{classify_criticalities, HopfCriticalityTable, RingSpec};

/// Amplitudes below this count as decayed.
pub const AMPLITUDE_THRESHOLD: f64 = 1e-3;
/// Upper bound on the μ-adapted transient `50/|μ|`.
pub const TRANSIENT_CAP: f64 = 5000.0;
/// Points above threshold used by [`onset_estimate`].
pub const ONSET_FIT_POINTS: usize = 5;

/// Starting state near the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    /// Every node at radius `scale` with seeded uniform phases in `[0, 2π)`.
    Random { scale: f64, seed: u64 },
    /// Every node at the same point `(scale, 0)`.
    Synchronous { scale: f64 },
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation::Random { scale: 1e-3, seed: 0 }
    }
}

impl Perturbation {
    pub fn initial_condition(&self) -> InitialCondition {
        match *self {
            Perturbation::Random { scale, seed } => InitialCondition::Polar {
                radii: Radii::Constant(scale),
                phase_range: (0.0, std::f64::consts::TAU),
                seed,
            },
            Perturbation::Synchronous { scale } => InitialCondition::Synchronous(Complex64::new(scale, 0.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coordinate {
    #[default]
    X,
    Y,
    Amplitude,
}

/// Quantity whose maximum over the measurement window is recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observable {
    /// 1-based node index.
    pub node: usize,
    pub coordinate: Coordinate,
}

impl Default for Observable {
    fn default() -> Self {
        Self { node: 1, coordinate: Coordinate::X }
    }
}

impl Observable {
    fn value(&self, z: Complex64) -> f64 {
        match self.coordinate {
            Coordinate::X => z.re,
            Coordinate::Y => z.im,
            Coordinate::Amplitude => z.norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub mu_grid: Vec<f64>,
    /// μ of the template is ignored.
    pub params_template: SystemParams,
    /// Minimum transient; each point uses `max(transient_t, min(50/|μ|, cap))`.
    pub transient_t: f64,
    pub measure_t: f64,
    pub perturbation: Perturbation,
    pub observable: Observable,
    pub scheme: Scheme,
    /// Sampling interval inside the measurement window.
    pub sample_every: f64,
}

impl ScanConfig {
    pub fn new(mu_grid: Vec<f64>, params_template: SystemParams) -> Self {
        Self {
            mu_grid,
            params_template,
            transient_t: 200.0,
            measure_t: 20.0,
            perturbation: Perturbation::default(),
            observable: Observable::default(),
            scheme: Scheme::Rk4 { dt: 0.01 },
            sample_every: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu_grid.is_empty() {
            return Err(Error::Parameter("μ grid is empty".into()));
        }
        if self.mu_grid.iter().any(|m| !m.is_finite()) {
            return Err(Error::Parameter("μ grid contains non-finite values".into()));
        }
        if self.mu_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter("μ grid must be strictly increasing".into()));
        }
        for (name, v) in
            [("transient_t", self.transient_t), ("measure_t", self.measure_t), ("sample_every", self.sample_every)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        let n = self.params_template.n_nodes();
        if !(1..=n).contains(&self.observable.node) {
            return Err(Error::Parameter(format!("observable node {} outside 1..={n}", self.observable.node)));
        }
        let scale = match self.perturbation {
            Perturbation::Random { scale, .. } | Perturbation::Synchronous { scale } => scale,
        };
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Parameter(format!("perturbation scale must be positive, got {scale}")));
        }
        Ok(())
    }

    /// Transient length used at `mu`.
    pub fn transient_for(&self, mu: f64) -> f64 {
        let adapted = if mu == 0.0 { TRANSIENT_CAP } else { (50.0 / mu.abs()).min(TRANSIENT_CAP) };
        self.transient_t.max(adapted)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchClass {
    Synchronous,
    NonSynchronous,
    Decayed,
    /// Integration blew up; amplitude is +∞.
    Divergent,
}

impl BranchClass {
    pub fn label(&self) -> &'static str {
        match self {
            BranchClass::Synchronous => "synchronous",
            BranchClass::NonSynchronous => "non-synchronous",
            BranchClass::Decayed => "decayed",
            BranchClass::Divergent => "divergent",
        }
    }
}

impl fmt::Display for BranchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub mu: f64,
    pub amplitude: f64,
    pub classification: BranchClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub points: Vec<BranchPoint>,
    /// Critical values of the origin, when the topology is a ring with
    /// identical frequencies and c > 0.
    pub markers: Option<HopfCriticalityTable>,
}

impl ScanResult {
    /// `mu,amplitude,classification`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu,amplitude,classification\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", fmt_f64(p.mu), fmt_f64(p.amplitude), p.classification);
        }
        out
    }

    /// Two-column `mu amplitude` files, one per observed branch class, plus
    /// `markers.dat` when markers exist.
    pub fn branch_files(&self) -> Vec<(String, String)> {
        let mut files = Vec::new();
        for class in [BranchClass::Synchronous, BranchClass::NonSynchronous, BranchClass::Decayed] {
            let pts: Vec<&BranchPoint> = self.points.iter().filter(|p| p.classification == class).collect();
            if pts.is_empty() {
                continue;
            }
            let mut body = String::from("# mu amplitude\n");
            for p in pts {
                let _ = writeln!(body, "{} {}", fmt_f64(p.mu), fmt_f64(p.amplitude));
            }
            files.push((format!("branch_{}.dat", class.label()), body));
        }
        if let Some(table) = &self.markers {
            let mut body = String::from("# mu_crit amplitude\n");
            for e in &table.entries {
                let _ = writeln!(body, "{} {}", fmt_f64(e.mu), fmt_f64(0.0));
            }
            files.push(("markers.dat".into(), body));
        }
        files
    }

    /// Write `scan.csv`, `markers.csv` and the branch files into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: &str, body: &str| -> Result<()> {
            let path = dir.join(name);
            std::fs::write(&path, body)?;
            written.push(path);
            Ok(())
        };
        put("scan.csv", &self.to_csv())?;
        if let Some(table) = &self.markers {
            put("markers.csv", &table.to_markers_csv())?;
        }
        for (name, body) in self.branch_files() {
            put(&name, &body)?;
        }
        Ok(written)
    }
}

fn scan_point(cfg: &ScanConfig, mu: f64) -> Result<BranchPoint> {
    let params = cfg.params_template.with_mu(mu);
    let init = cfg.perturbation.initial_condition().build(params.n_nodes())?;
    let transient = cfg.transient_for(mu);
    let divergent = BranchPoint { mu, amplitude: f64::INFINITY, classification: BranchClass::Divergent };

    let warm = match integrate(&init, &params, transient, cfg.scheme, transient) {
        Ok(t) => t,
        Err(Error::Divergence { .. }) => return Ok(divergent),
        Err(e) => return Err(e),
    };
    let measured = match integrate(warm.final_state(), &params, cfg.measure_t, cfg.scheme, cfg.sample_every) {
        Ok(t) => t,
        Err(Error::Divergence { .. }) => return Ok(divergent),
        Err(e) => return Err(e),
    };
    let node = cfg.observable.node - 1;
    let amplitude =
        measured.states.iter().map(|s| cfg.observable.value(s.z[node])).fold(f64::NEG_INFINITY, f64::max).max(0.0);
    let peak = measured.states.iter().flat_map(|s| s.z.iter().map(|z| z.norm())).fold(0.0, f64::max);
    let classification = if peak < AMPLITUDE_THRESHOLD {
        BranchClass::Decayed
    } else {
        match sync_report(&measured, 1.0)?.state {
            SyncState::Complete | SyncState::FrequencyAmplitude => BranchClass::Synchronous,
            SyncState::Decayed => BranchClass::Decayed,
            SyncState::NotSynchronized => BranchClass::NonSynchronous,
        }
    };
    Ok(BranchPoint { mu, amplitude, classification })
}

/// Simulate every grid point and attach the critical-value markers.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let points = cfg.mu_grid.par_iter().map(|&mu| scan_point(cfg, mu)).collect::<Result<Vec<_>>>()?;
    let params = &cfg.params_template;
    let markers = match RingSpec::from_params(params) {
        Ok(ring) if params.identical_frequencies() && params.c > 0.0 => {
            Some(classify_criticalities(ring.n, ring.s, params.c)?)
        }
        _ => None,
    };
    Ok(ScanResult { points, markers })
}

/// Onset μ from the first decayed-to-oscillating bracket.
///
/// Fits `amplitude² = aμ + b` by least squares over up to
/// [`ONSET_FIT_POINTS`] consecutive above-threshold points after the
/// bracket and returns `−b/a`.
pub fn onset_estimate(points: &[BranchPoint]) -> Result<f64> {
    let mut pts: Vec<&BranchPoint> =
        points.iter().filter(|p| p.classification != BranchClass::Divergent && p.amplitude.is_finite()).collect();
    pts.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    let above = |p: &BranchPoint| p.amplitude >= AMPLITUDE_THRESHOLD;
    let start = pts
        .windows(2)
        .position(|w| !above(w[0]) && above(w[1]))
        .ok_or_else(|| Error::Estimation("no decayed-to-oscillating bracket in the scan".into()))?
        + 1;
    let fit: Vec<(f64, f64)> = pts[start..]
        .iter()
        .take_while(|p| above(p))
        .take(ONSET_FIT_POINTS)
        .map(|p| (p.mu, p.amplitude * p.amplitude))
        .collect();
    let (a, b) = if fit.len() == 1 {
        // single point: line through the last decayed point at amplitude² = 0
        let lo = pts[start - 1].mu;
        let (m, y) = fit[0];
        let a = y / (m - lo);
        (a, -a * lo)
    } else {
        let n = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let a = sxy / sxx;
        (a, my - a * mx)
    };
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Estimation(format!("amplitude² does not grow with μ (slope {a})")));
    }
    Ok(-b / a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NetworkTopology;

    fn template() -> SystemParams {
        SystemParams::uniform(0.0, 1.0, 0.05, NetworkTopology::ring(6, 2).unwrap()).unwrap()
    }

    fn synthetic(mus: &[f64], shift: f64) -> Vec<BranchPoint> {
        mus.iter()
            .map(|&mu| {
                let a = (mu - shift).max(0.0).sqrt();
                BranchPoint {
                    mu,
                    amplitude: a,
                    classification: if a < AMPLITUDE_THRESHOLD {
                        BranchClass::Decayed
                    } else {
                        BranchClass::Synchronous
                    },
                }
            })
            .collect()
    }

    #[test]
    fn onset_on_synthetic_branch() {
        let mus: Vec<f64> = (0..20).map(|k| 0.02 * k as f64).collect();
        let onset = onset_estimate(&synthetic(&mus, 0.1)).unwrap();
        assert!((onset - 0.1).abs() < 0.005, "{onset}");
    }

    #[test]
    fn onset_single_point_bracket() {
        let pts = synthetic(&[-0.1, 0.0, 0.05], 0.0);
        let onset = onset_estimate(&pts[..]).unwrap();
        assert!(onset.abs() < 1e-12);
    }

    #[test]
    fn onset_without_bracket_fails() {
        let zeros: Vec<BranchPoint> = [0.0, 0.1, 0.2]
            .iter()
            .map(|&mu| BranchPoint { mu, amplitude: 0.0, classification: BranchClass::Decayed })
            .collect();
        assert!(matches!(onset_estimate(&zeros), Err(Error::Estimation(_))));
        let all_up = synthetic(&[0.1, 0.2], -1.0);
        assert!(onset_estimate(&all_up).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = ScanConfig::new(vec![0.1, 0.0], template());
        assert!(cfg.validate().is_err());
        cfg.mu_grid = vec![];
        assert!(cfg.validate().is_err());
        cfg.mu_grid = vec![0.1];
        cfg.measure_t = 0.0;
        assert!(cfg.validate().is_err());
        cfg.measure_t = 10.0;
        cfg.observable.node = 7;
        assert!(cfg.validate().is_err());
        cfg.observable.node = 6;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn transient_adapts_to_mu() {
        let cfg = ScanConfig::new(vec![0.1], template());
        assert_eq!(cfg.transient_for(0.01), 5000.0);
        assert_eq!(cfg.transient_for(0.5), 200.0);
        assert_eq!(cfg.transient_for(0.0), TRANSIENT_CAP);
    }

    #[test]
    fn scan_points_below_and_above_onset() {
        let mut cfg = ScanConfig::new(vec![-0.05, 0.04], template());
        cfg.perturbation = Perturbation::Synchronous { scale: 1e-3 };
        let res = run_scan(&cfg).unwrap();
        let (lo, hi) = (res.points[0], res.points[1]);
        assert_eq!(lo.classification, BranchClass::Decayed);
        assert!(lo.amplitude < 1e-4);
        assert_eq!(hi.classification, BranchClass::Synchronous);
        assert!((hi.amplitude - 0.2).abs() / 0.2 < 0.05, "{}", hi.amplitude);
        let markers = res.markers.unwrap();
        assert_eq!(markers.entries.len(), 3);
    }

    #[test]
    fn scan_is_deterministic() {
        let mut cfg = ScanConfig::new(vec![0.1], template());
        cfg.transient_t = 50.0;
        cfg.measure_t = 5.0;
        cfg.perturbation = Perturbation::Random { scale: 1e-2, seed: 11 };
        assert_eq!(run_scan(&cfg).unwrap().to_csv(), run_scan(&cfg).unwrap().to_csv());
    }

    #[test]
    fn divergence_is_flagged() {
        // RK4 with dt = 1 is unstable at radius 50
        let mut cfg = ScanConfig::new(vec![0.5], template());
        cfg.perturbation = Perturbation::Synchronous { scale: 50.0 };
        cfg.scheme = Scheme::Rk4 { dt: 1.0 };
        cfg.sample_every = 1.0;
        let res = run_scan(&cfg).unwrap();
        assert_eq!(res.points[0].classification, BranchClass::Divergent);
        assert!(res.to_csv().contains("divergent"));
    }

    #[test]
    fn output_files() {
        let pts = synthetic(&[-0.1, 0.1], 0.0);
        let res = ScanResult { points: pts, markers: Some(classify_criticalities(6, 2, 0.05).unwrap()) };
        let dir = tempfile::tempdir().unwrap();
        let written = res.write_to(dir.path()).unwrap();
        let names: Vec<String> =
            written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
        assert_eq!(names, ["scan.csv", "markers.csv", "branch_synchronous.dat", "branch_decayed.dat", "markers.dat"]);
        let markers = std::fs::read_to_string(dir.path().join("markers.csv")).unwrap();
        assert!(markers.starts_with("mu_crit,modes,simple\n"));
        assert!(markers.contains(",2 4 6,false"));
    }
}
