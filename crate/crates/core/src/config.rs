//! TOML experiment configuration.
//!
//! ```toml
//! seed = 7
//!
//! [topology]
//! kind = "ring"          # "ring" (n, s) | "complete" (n) | "edge-list" (path)
//! n = 6
//! s = 2
//!
//! [params]
//! mu = 1.0
//! omega = 1.0            # or one value per node
//! c = 0.02
//!
//! [initial]
//! kind = "polar"         # "polar" | "explicit" (x, y) | "synchronous" (x, y)
//! radii = 0.5            # or one value per node
//! phase_range = [0.3, 2.8]
//!
//! [integrator]
//! scheme = "rk4"         # "rk4" (dt) | "rkf45" (atol, rtol)
//! dt = 1e-3
//!
//! [run]
//! t_end = 200.0
//! sample_every = 0.01
//! tail_fraction = 0.2
//!
//! [output]
//! dir = "out"
//!
//! [scan]
//! mu_min = -0.05
//! mu_max = 0.15
//! mu_step = 0.01         # or mu_grid = [...]
//! perturbation = "synchronous"
//!
//! [hopf]
//! method = "finite-difference"
//! h = 1e-3
//! ```
//!
//! Unknown keys are rejected. Any key can be overridden with a dotted
//! `path=value` assignment whose right-hand side is parsed as a TOML value.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::dynamics::{
    InitialCondition, Radii, Scheme, SystemParams, DEFAULT_DT, DEFAULT_SAMPLE_EVERY, DEFAULT_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::graph::NetworkTopology;
use crate::hopf::{PartialsMethod, DEFAULT_FD_STEP};
use crate::metrics::DEFAULT_TAIL_FRACTION;
use crate::scan::{Coordinate, Observable, Perturbation, ScanConfig};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ScalarOrList {
    Scalar(f64),
    List(Vec<f64>),
}

impl ScalarOrList {
    pub fn expand(&self, n: usize, what: &str) -> Result<Vec<f64>> {
        match self {
            ScalarOrList::Scalar(v) => Ok(vec![*v; n]),
            ScalarOrList::List(v) if v.len() == n => Ok(v.clone()),
            ScalarOrList::List(v) => Err(Error::Parameter(format!("{what} lists {} values for {n} nodes", v.len()))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TopologySpec {
    Ring {
        n: usize,
        s: usize,
    },
    Complete {
        n: usize,
    },
    /// 1-based edge list; relative paths resolve against the config file.
    EdgeList {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub mu: f64,
    pub omega: ScalarOrList,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    /// Phases drawn from `phase_range` with the config seed.
    Polar {
        radii: ScalarOrList,
        phase_range: [f64; 2],
    },
    Explicit {
        x: Vec<f64>,
        y: Vec<f64>,
    },
    Synchronous {
        x: f64,
        y: f64,
    },
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_tol() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IntegratorSpec {
    Rk4 {
        #[serde(default = "default_dt")]
        dt: f64,
    },
    Rkf45 {
        #[serde(default = "default_tol")]
        atol: f64,
        #[serde(default = "default_tol")]
        rtol: f64,
    },
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        IntegratorSpec::Rk4 { dt: DEFAULT_DT }
    }
}

impl IntegratorSpec {
    pub fn scheme(&self) -> Scheme {
        match *self {
            IntegratorSpec::Rk4 { dt } => Scheme::Rk4 { dt },
            IntegratorSpec::Rkf45 { atol, rtol } => Scheme::Rkf45 { atol, rtol },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub t_end: f64,
    pub sample_every: f64,
    pub tail_fraction: f64,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self { t_end: 100.0, sample_every: DEFAULT_SAMPLE_EVERY, tail_fraction: DEFAULT_TAIL_FRACTION }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    #[default]
    Random,
    Synchronous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CoordinateSpec {
    #[default]
    X,
    Y,
    Amplitude,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    pub mu_grid: Option<Vec<f64>>,
    pub mu_min: Option<f64>,
    pub mu_max: Option<f64>,
    pub mu_step: Option<f64>,
    pub transient_t: f64,
    pub measure_t: f64,
    pub perturbation: PerturbationKind,
    pub scale: f64,
    pub node: usize,
    pub coordinate: CoordinateSpec,
    pub dt: f64,
    pub sample_every: f64,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            mu_grid: None,
            mu_min: None,
            mu_max: None,
            mu_step: None,
            transient_t: 200.0,
            measure_t: 20.0,
            perturbation: PerturbationKind::Random,
            scale: 1e-3,
            node: 1,
            coordinate: CoordinateSpec::X,
            dt: 0.01,
            sample_every: 0.01,
        }
    }
}

impl ScanSpec {
    pub fn grid(&self) -> Result<Vec<f64>> {
        match (&self.mu_grid, self.mu_min, self.mu_max, self.mu_step) {
            (Some(g), None, None, None) => Ok(g.clone()),
            (None, Some(lo), Some(hi), Some(step)) => {
                if !(step > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
                    return Err(Error::Parameter(format!("bad μ range {lo}..{hi} step {step}")));
                }
                let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|k| lo + k as f64 * step).collect())
            }
            _ => Err(Error::Parameter("[scan] needs either mu_grid or all of mu_min, mu_max, mu_step".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum HopfMethodSpec {
    Analytic,
    #[default]
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HopfSpec {
    pub method: HopfMethodSpec,
    pub h: f64,
}

impl Default for HopfSpec {
    fn default() -> Self {
        Self { method: HopfMethodSpec::FiniteDifference, h: DEFAULT_FD_STEP }
    }
}

impl HopfSpec {
    pub fn method(&self) -> PartialsMethod {
        match self.method {
            HopfMethodSpec::Analytic => PartialsMethod::Analytic,
            HopfMethodSpec::FiniteDifference => PartialsMethod::FiniteDifference { h: self.h },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub topology: Option<TopologySpec>,
    pub params: Option<ParamsSpec>,
    pub initial: Option<InitialSpec>,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub output: OutputSpec,
    pub scan: Option<ScanSpec>,
    #[serde(default)]
    pub hopf: HopfSpec,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Set `path = value` inside a TOML table, creating intermediate tables.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("override `{assignment}` is not of the form key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').map(str::trim).collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Parse(format!("bad override key `{path}`")));
    }
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let (last, parents) = keys.split_last().expect("nonempty key path");
    let mut cur = table;
    for k in parents {
        let entry = cur.entry(k.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| Error::Parse(format!("override `{path}`: `{k}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

impl ExperimentConfig {
    /// Parse TOML text after applying `key=value` overrides.
    pub fn from_toml(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: Self =
            toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text, overrides)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn topology(&self) -> Result<NetworkTopology> {
        match self.topology.as_ref().ok_or_else(|| Error::Parameter("missing [topology] section".into()))? {
            TopologySpec::Ring { n, s } => NetworkTopology::ring(*n, *s),
            TopologySpec::Complete { n } => NetworkTopology::complete(*n),
            TopologySpec::EdgeList { path } => {
                NetworkTopology::load_edge_list(self.resolve(path)).map_err(|e| match e {
                    Error::Io(msg) => Error::Parse(msg),
                    e => e,
                })
            }
        }
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        let p = self.params.as_ref().ok_or_else(|| Error::Parameter("missing [params] section".into()))?;
        let topology = self.topology()?;
        let omega = p.omega.expand(topology.n_nodes(), "params.omega")?;
        SystemParams::new(p.mu, omega, p.c, topology)
    }

    pub fn initial_condition(&self, n: usize) -> Result<InitialCondition> {
        let section = self.initial.as_ref().ok_or_else(|| Error::Parameter("missing [initial] section".into()))?;
        Ok(match section {
            InitialSpec::Polar { radii, phase_range } => {
                let radii = match radii {
                    ScalarOrList::Scalar(r) => Radii::Constant(*r),
                    ScalarOrList::List(_) => Radii::List(radii.expand(n, "initial.radii")?),
                };
                InitialCondition::Polar { radii, phase_range: (phase_range[0], phase_range[1]), seed: self.seed }
            }
            InitialSpec::Explicit { x, y } => {
                if x.len() != y.len() {
                    return Err(Error::Parameter("initial.x and initial.y differ in length".into()));
                }
                InitialCondition::Explicit(x.iter().zip(y).map(|(&x, &y)| Complex64::new(x, y)).collect())
            }
            InitialSpec::Synchronous { x, y } => InitialCondition::Synchronous(Complex64::new(*x, *y)),
        })
    }

    pub fn scan_config(&self) -> Result<ScanConfig> {
        let section = self.scan.as_ref().ok_or_else(|| Error::Parameter("missing [scan] section".into()))?;
        let mut cfg = ScanConfig::new(section.grid()?, self.system_params()?);
        cfg.transient_t = section.transient_t;
        cfg.measure_t = section.measure_t;
        cfg.perturbation = match section.perturbation {
            PerturbationKind::Random => Perturbation::Random { scale: section.scale, seed: self.seed },
            PerturbationKind::Synchronous => Perturbation::Synchronous { scale: section.scale },
        };
        cfg.observable = Observable {
            node: section.node,
            coordinate: match section.coordinate {
                CoordinateSpec::X => Coordinate::X,
                CoordinateSpec::Y => Coordinate::Y,
                CoordinateSpec::Amplitude => Coordinate::Amplitude,
            },
        };
        cfg.scheme = Scheme::Rk4 { dt: section.dt };
        cfg.sample_every = section.sample_every;
        cfg.validate()?;
        Ok(cfg)
    }
}
