//! Checkable sufficient conditions for oscillation persistence and
//! synchronization.
//!
//! Each check returns a [`Certificate`] listing every clause with its
//! operands and margin. Unsatisfied clauses are reported, never raised.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};

use crate::dynamics::{fmt_f64, OscillatorState, SystemParams};
use crate::error::{Error, Result};
use crate::metrics::spread;

/// Absolute tolerance of the r* bisection.
pub const R_STAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Amplitudes stay in (r*, √μ): no amplitude death.
    AntiDeath,
    /// The origin `z = 0` is linearly unstable.
    OriginUnstable,
    /// Complete synchronization from phases in (0, π).
    RobustSync,
    /// Complete synchronization from phases in (0, π/2) with μ > c·d_max.
    DegreeSync,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::AntiDeath => "anti-death",
            CertificateKind::OriginUnstable => "origin-unstable",
            CertificateKind::RobustSync => "robust-sync",
            CertificateKind::DegreeSync => "degree-sync",
        })
    }
}

/// One inequality `lhs <relation> rhs`. `rhs` is `None` when the right-hand
/// side does not exist (e.g. r* when c ≥ c*); such clauses never hold.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub id: &'static str,
    pub statement: &'static str,
    pub lhs: f64,
    pub relation: &'static str,
    pub rhs: Option<f64>,
    /// Signed slack; positive when the clause holds.
    pub margin: Option<f64>,
    pub holds: bool,
}

impl Clause {
    fn less(id: &'static str, statement: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { id, statement, lhs, relation: "<", rhs: Some(rhs), margin: Some(rhs - lhs), holds: lhs < rhs }
    }

    fn less_eq(id: &'static str, statement: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { id, statement, lhs, relation: "<=", rhs: Some(rhs), margin: Some(rhs - lhs), holds: lhs <= rhs }
    }

    fn greater(id: &'static str, statement: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { id, statement, lhs, relation: ">", rhs: Some(rhs), margin: Some(lhs - rhs), holds: lhs > rhs }
    }
}

/// Named numeric values backing a verdict, in report order.
pub type Witnesses = Vec<(&'static str, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub satisfied: bool,
    pub clauses: Vec<Clause>,
    /// Named quantities the clauses depend on, in evaluation order.
    pub witnesses: Witnesses,
    pub violated_clauses: Vec<&'static str>,
}

impl Certificate {
    fn new(kind: CertificateKind, clauses: Vec<Clause>, witnesses: Witnesses) -> Self {
        debug_assert!(witnesses.iter().all(|(_, v)| v.is_finite()));
        let violated_clauses: Vec<_> = clauses.iter().filter(|c| !c.holds).map(|c| c.id).collect();
        Self { kind, satisfied: violated_clauses.is_empty(), clauses, witnesses, violated_clauses }
    }

    pub fn witness(&self, name: &str) -> Option<f64> {
        self.witnesses.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    /// Plain-text report: one block per certificate, one line per clause.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[{}]", self.kind);
        let _ = writeln!(out, "satisfied = {}", self.satisfied);
        for c in &self.clauses {
            let rhs = c.rhs.map_or_else(|| "undefined".into(), fmt_f64);
            let margin = c.margin.map_or_else(|| "undefined".into(), fmt_f64);
            let _ = writeln!(
                out,
                "clause {} : {} : {} {} {} : margin = {} : {}",
                c.id,
                c.statement,
                fmt_f64(c.lhs),
                c.relation,
                rhs,
                margin,
                if c.holds { "holds" } else { "VIOLATED" }
            );
        }
        for (name, v) in &self.witnesses {
            let _ = writeln!(out, "witness {name} = {}", fmt_f64(*v));
        }
        out
    }
}

/// Coupling threshold `c* = 2μ / (3 √(3N) λ_max)`.
pub fn c_star(mu: f64, n: usize, lambda_max: f64) -> Result<f64> {
    if !(mu > 0.0) || n == 0 || !(lambda_max > 0.0) {
        return Err(Error::Parameter(format!(
            "c* needs mu > 0, N >= 1, lambda_max > 0 (got mu={mu}, N={n}, lambda_max={lambda_max})"
        )));
    }
    Ok(2.0 * mu / (3.0 * (3.0 * n as f64).sqrt() * lambda_max))
}

/// Smallest positive root of `μx − x³ = c √(Nμ) λ_max`, by bisection on
/// `[0, √(μ/3)]` where the cubic is increasing.
///
/// `c = 0` returns 0 (the root degenerates to 0⁺).
pub fn r_star(mu: f64, n: usize, c: f64, lambda_max: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(Error::Parameter(format!("coupling must be >= 0, got {c}")));
    }
    let threshold = c_star(mu, n, lambda_max)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    if c >= threshold {
        return Err(Error::NoRoot(format!("c = {c} is not below c* = {threshold}")));
    }
    let rhs = c * (n as f64 * mu).sqrt() * lambda_max;
    let f = |x: f64| mu * x - x * x * x - rhs;
    let (mut lo, mut hi) = (0.0, (mu / 3.0).sqrt());
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > R_STAR_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn lambda_max(params: &SystemParams) -> f64 {
    params.topology.spectrum().lambda_max
}

fn antideath_parts(initial: &OscillatorState, params: &SystemParams) -> Result<(Vec<Clause>, Witnesses)> {
    if !(params.mu > 0.0) {
        return Err(Error::Parameter(format!("anti-death condition needs mu > 0, got {}", params.mu)));
    }
    if initial.len() != params.n_nodes() {
        return Err(Error::Parameter("initial state size does not match the network".into()));
    }
    let n = params.n_nodes();
    let lmax = lambda_max(params);
    let cs = c_star(params.mu, n, lmax)?;
    let radii = initial.amplitudes();
    let sum_sq: f64 = radii.iter().map(|r| r * r).sum();
    let min_r = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let energy_cap = n as f64 * params.mu;

    let mut witnesses = vec![("lambda_max", lmax), ("c_star", cs)];
    let mut clauses = vec![
        Clause::less("i", "c < c_star", params.c, cs),
        Clause::less_eq("ii", "sum r_j(0)^2 <= N mu", sum_sq, energy_cap),
    ];
    match r_star(params.mu, n, params.c, lmax) {
        Ok(rs) => {
            witnesses.push(("r_star", rs));
            clauses.push(Clause::greater("iii", "min r_j(0) > r_star", min_r, rs));
        }
        Err(_) => clauses.push(Clause {
            id: "iii",
            statement: "min r_j(0) > r_star (r_star undefined for c >= c_star)",
            lhs: min_r,
            relation: ">",
            rhs: None,
            margin: None,
            holds: false,
        }),
    }
    witnesses.push(("sqrt_mu", params.mu.sqrt()));
    Ok((clauses, witnesses))
}

/// Anti-amplitude-death certificate: (i) c < c*, (ii) Σ r_j(0)² ≤ Nμ,
/// (iii) every r_j(0) > r*. When satisfied, r* < r_j(t) < √μ eventually.
pub fn check_antideath(initial: &OscillatorState, params: &SystemParams) -> Result<Certificate> {
    let (clauses, witnesses) = antideath_parts(initial, params)?;
    Ok(Certificate::new(CertificateKind::AntiDeath, clauses, witnesses))
}

/// Origin instability: μ > c·λ_max.
pub fn check_origin_unstable(params: &SystemParams) -> Certificate {
    let spectrum = params.topology.spectrum();
    let bound = params.c * spectrum.lambda_max;
    let min_growth = spectrum.eigenvalues.iter().map(|l| params.mu - params.c * l).fold(f64::INFINITY, f64::min);
    Certificate::new(
        CertificateKind::OriginUnstable,
        vec![Clause::greater("unstable", "mu > c lambda_max", params.mu, bound)],
        vec![("lambda_max", spectrum.lambda_max), ("margin", params.mu - bound), ("min_growth_rate", min_growth)],
    )
}

fn frequency_clause(params: &SystemParams) -> Clause {
    let w_spread = spread(&params.omega);
    Clause {
        id: "identical_frequencies",
        statement: "omega_j identical",
        lhs: w_spread,
        relation: "==",
        rhs: Some(0.0),
        margin: Some(-w_spread),
        holds: params.identical_frequencies(),
    }
}

fn phase_clauses(initial: &OscillatorState, upper: f64, upper_statement: &'static str) -> (Vec<Clause>, f64, f64) {
    let phases = initial.principal_phases();
    let lo = phases.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = phases.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (
        vec![
            Clause::greater("phase_lower", "min theta_j(0) > 0", lo, 0.0),
            Clause::less("phase_upper", upper_statement, hi, upper),
        ],
        lo,
        hi,
    )
}

/// Topology-robust synchronization: anti-death clauses, principal initial
/// phases in (0, π), identical frequencies.
pub fn check_robust_sync(initial: &OscillatorState, params: &SystemParams) -> Result<Certificate> {
    let (mut clauses, mut witnesses) = antideath_parts(initial, params)?;
    let (phase, lo, hi) = phase_clauses(initial, PI, "max theta_j(0) < pi");
    clauses.extend(phase);
    clauses.push(frequency_clause(params));
    witnesses.push(("theta_min", lo));
    witnesses.push(("theta_max", hi));
    Ok(Certificate::new(CertificateKind::RobustSync, clauses, witnesses))
}

/// Synchronization under μ > c·d_max with principal initial phases in
/// (0, π/2) and identical frequencies. No c*/r* clauses are involved; the
/// amplitude floor `min{min r_j(0), √(μ − c d_max)}` is reported instead.
pub fn check_degree_sync(initial: &OscillatorState, params: &SystemParams) -> Result<Certificate> {
    if initial.len() != params.n_nodes() {
        return Err(Error::Parameter("initial state size does not match the network".into()));
    }
    let d_max = params.topology.d_max() as f64;
    let bound = params.c * d_max;
    let mut clauses = vec![Clause::greater("mu_gt_c_dmax", "mu > c d_max", params.mu, bound)];
    let (phase, lo, hi) = phase_clauses(initial, FRAC_PI_2, "max theta_j(0) < pi/2");
    clauses.extend(phase);
    clauses.push(frequency_clause(params));
    let mut witnesses = vec![("d_max", d_max), ("margin", params.mu - bound), ("theta_min", lo), ("theta_max", hi)];
    if params.mu > bound {
        let min_r = initial.amplitudes().into_iter().fold(f64::INFINITY, f64::min);
        witnesses.push(("amplitude_floor", min_r.min((params.mu - bound).sqrt())));
    }
    Ok(Certificate::new(CertificateKind::DegreeSync, clauses, witnesses))
}

/// All four certificates in report order.
pub fn certify_all(initial: &OscillatorState, params: &SystemParams) -> Result<Vec<Certificate>> {
    Ok(vec![
        check_antideath(initial, params)?,
        check_origin_unstable(params),
        check_robust_sync(initial, params)?,
        check_degree_sync(initial, params)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NetworkTopology;

    fn k3(mu: f64, c: f64) -> SystemParams {
        SystemParams::uniform(mu, 1.0, c, NetworkTopology::complete(3).unwrap()).unwrap()
    }

    fn polar(r: &[f64], theta: &[f64]) -> OscillatorState {
        OscillatorState::from_polar(r, theta).unwrap()
    }

    #[test]
    fn c_star_values() {
        assert!((c_star(1.0, 3, 3.0).unwrap() - 2.0 / 27.0).abs() < 1e-15);
        assert!((c_star(2.0, 3, 3.0).unwrap() - 2.0 * c_star(1.0, 3, 3.0).unwrap()).abs() < 1e-15);
        assert!((c_star(1.0, 6, 6.0).unwrap() - 0.0261891).abs() < 1e-7);
        assert!(c_star(0.0, 3, 3.0).is_err());
        assert!(c_star(1.0, 3, 0.0).is_err());
    }

    #[test]
    fn r_star_example() {
        let rs = r_star(1.0, 3, 0.01, 3.0).unwrap();
        let rhs = 0.01 * 3f64.sqrt() * 3.0;
        assert!((rs - rs.powi(3) - rhs).abs() < 1e-12);
        assert!((rs - 0.05211).abs() < 1e-5);
        assert_eq!(r_star(1.0, 3, 0.0, 3.0).unwrap(), 0.0);
        assert!(matches!(r_star(1.0, 3, 0.1, 3.0), Err(Error::NoRoot(_))));
    }

    #[test]
    fn antideath_examples() {
        let init = polar(&[0.5; 3], &[0.3, 2.0, 4.0]);
        let cert = check_antideath(&init, &k3(1.0, 0.01)).unwrap();
        assert!(cert.satisfied, "{}", cert.to_report());

        let cert = check_antideath(&init, &k3(1.0, 0.1)).unwrap();
        assert!(!cert.satisfied);
        assert!(cert.violated_clauses.contains(&"i"));
        assert!(cert.witness("r_star").is_none());

        let init = polar(&[0.5, 0.5, 0.01], &[0.3, 2.0, 4.0]);
        let cert = check_antideath(&init, &k3(1.0, 0.01)).unwrap();
        assert_eq!(cert.violated_clauses, vec!["iii"]);
    }

    #[test]
    fn antideath_energy_clause() {
        let init = polar(&[1.2; 3], &[0.0; 3]);
        let cert = check_antideath(&init, &k3(1.0, 0.01)).unwrap();
        assert_eq!(cert.violated_clauses, vec!["ii"]);
    }

    #[test]
    fn antideath_zero_coupling_edge() {
        let cert = check_antideath(&polar(&[0.2; 3], &[0.0; 3]), &k3(1.0, 0.0)).unwrap();
        assert!(cert.satisfied);
        assert_eq!(cert.witness("r_star"), Some(0.0));
        let cert = check_antideath(&polar(&[0.2, 0.0, 0.2], &[0.0; 3]), &k3(1.0, 0.0)).unwrap();
        assert_eq!(cert.violated_clauses, vec!["iii"]);
    }

    #[test]
    fn origin_instability() {
        let cert = check_origin_unstable(&k3(1.0, 0.1));
        assert!(cert.satisfied);
        assert!((cert.witness("margin").unwrap() - 0.7).abs() < 1e-12);
        assert!((cert.witness("min_growth_rate").unwrap() - 0.7).abs() < 1e-10);
        // exactly critical
        assert!(!check_origin_unstable(&k3(0.3, 0.1)).satisfied);
        assert!(check_origin_unstable(&k3(0.5, 0.0)).satisfied);
    }

    #[test]
    fn robust_sync_examples() {
        let p = SystemParams::uniform(1.0, 1.0, 0.02, NetworkTopology::ring(6, 2).unwrap()).unwrap();
        let theta = [0.3, 0.8, 1.4, 2.0, 2.5, 2.79];
        let cert = check_robust_sync(&polar(&[0.5; 6], &theta), &p).unwrap();
        assert!(cert.satisfied, "{}", cert.to_report());

        let mut theta0 = theta;
        theta0[2] = 0.0;
        let cert = check_robust_sync(&polar(&[0.5; 6], &theta0), &p).unwrap();
        assert_eq!(cert.violated_clauses, vec!["phase_lower"]);

        let g = NetworkTopology::ring(6, 2).unwrap();
        let p2 = SystemParams::new(1.0, vec![1.0, 1.1, 1.0, 1.0, 1.0, 1.0], 0.02, g).unwrap();
        let cert = check_robust_sync(&polar(&[0.5; 6], &theta), &p2).unwrap();
        assert_eq!(cert.violated_clauses, vec!["identical_frequencies"]);
    }

    #[test]
    fn degree_sync_examples() {
        let p = k3(1.0, 0.1);
        let init = polar(&[0.5; 3], &[0.2, 0.7, 1.29]);
        let cert = check_degree_sync(&init, &p).unwrap();
        assert!(cert.satisfied);
        assert!((cert.witness("amplitude_floor").unwrap() - 0.5).abs() < 1e-15);

        // mu == c d_max
        let cert = check_degree_sync(&init, &k3(0.2, 0.1)).unwrap();
        assert_eq!(cert.violated_clauses, vec!["mu_gt_c_dmax"]);

        let cert = check_degree_sync(&polar(&[0.5; 3], &[0.2, FRAC_PI_2, 1.0]), &p).unwrap();
        assert_eq!(cert.violated_clauses, vec!["phase_upper"]);
    }

    #[test]
    fn report_lists_every_clause() {
        let cert = check_robust_sync(&polar(&[0.5; 3], &[0.3, 0.4, 0.5]), &k3(1.0, 0.01)).unwrap();
        let text = cert.to_report();
        assert!(text.starts_with("[robust-sync]\nsatisfied = true\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("clause ")).count(), 6);
        assert!(text.contains("witness c_star = "));
    }
}
