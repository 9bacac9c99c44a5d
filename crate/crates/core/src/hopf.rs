//! Hopf normal form of the synchronous reduced system at μ = 0.
//!
//! On the synchronous manifold every node obeys
//!
//! ```text
//! F1(x, y) = μx − ωy − x(x² + y²)
//! F2(x, y) = ωx + μy − y(x² + y²)
//! ```
//!
//! whose linearization carries `λ(μ) = μ ± iω`. The first Lyapunov-type
//! coefficient `C1(0)` follows from the second and third partials of
//! `(F1, F2)` at the origin.

use std::fmt::{self, Write as _};

use num_complex::Complex64;

use crate::dynamics::fmt_f64;
use crate::error::{Error, Result};

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Accepted finite-difference step range.
pub const FD_STEP_RANGE: (f64, f64) = (1e-5, 1e-2);
/// |p2| or |ζ2| below this counts as zero.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Vector field of the reduced system.
pub fn reduced_rhs(x: f64, y: f64, mu: f64, omega: f64) -> (f64, f64) {
    let r2 = x * x + y * y;
    (mu * x - omega * y - x * r2, omega * x + mu * y - y * r2)
}

/// Second and third partials of one scalar component at the origin.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Partials {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
    pub xxx: f64,
    pub xxy: f64,
    pub xyy: f64,
    pub yyy: f64,
}

impl Partials {
    fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("xx", self.xx),
            ("xy", self.xy),
            ("yy", self.yy),
            ("xxx", self.xxx),
            ("xxy", self.xxy),
            ("xyy", self.xyy),
            ("yyy", self.yyy),
        ]
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries().iter().zip(other.entries()).map(|(a, b)| (a.1 - b.1).abs()).fold(0.0, f64::max)
    }

    fn richardson(coarse: &Self, fine: &Self) -> Self {
        let r = |c: f64, f: f64| (4.0 * f - c) / 3.0;
        Self {
            xx: r(coarse.xx, fine.xx),
            xy: r(coarse.xy, fine.xy),
            yy: r(coarse.yy, fine.yy),
            xxx: r(coarse.xxx, fine.xxx),
            xxy: r(coarse.xxy, fine.xxy),
            xyy: r(coarse.xyy, fine.xyy),
            yyy: r(coarse.yyy, fine.yyy),
        }
    }
}

/// Partials of `F1` and `F2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PartialsTable {
    pub f1: Partials,
    pub f2: Partials,
}

impl PartialsTable {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.f1.max_abs_diff(&other.f1).max(self.f2.max_abs_diff(&other.f2))
    }

    /// `F1_xx = …` lines.
    pub fn to_summary(&self) -> String {
        let mut out = String::new();
        for (name, p) in [("F1", &self.f1), ("F2", &self.f2)] {
            for (d, v) in p.entries() {
                let _ = writeln!(out, "{name}_{d} = {}", fmt_f64(v));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartialsMethod {
    Analytic,
    /// Central differences with Richardson refinement over (h, h/2).
    FiniteDifference {
        h: f64,
    },
}

impl Default for PartialsMethod {
    fn default() -> Self {
        PartialsMethod::FiniteDifference { h: DEFAULT_FD_STEP }
    }
}

/// Second and third partials of the reduced field at the origin.
pub fn partials_at_origin(mu: f64, omega: f64, method: PartialsMethod) -> Result<PartialsTable> {
    match method {
        PartialsMethod::Analytic => {
            // only the cubic terms survive past first order
            Ok(PartialsTable {
                f1: Partials { xxx: -6.0, xyy: -2.0, ..Partials::default() },
                f2: Partials { xxy: -2.0, yyy: -6.0, ..Partials::default() },
            })
        }
        PartialsMethod::FiniteDifference { h } => {
            if !(FD_STEP_RANGE.0..=FD_STEP_RANGE.1).contains(&h) {
                return Err(Error::Parameter(format!(
                    "finite-difference step {h} outside [{}, {}]",
                    FD_STEP_RANGE.0, FD_STEP_RANGE.1
                )));
            }
            Ok(fd_partials(|x, y| reduced_rhs(x, y, mu, omega), h))
        }
    }
}

/// Central-difference partials at the origin of any planar field, refined
/// once by Richardson extrapolation.
pub fn fd_partials(f: impl Fn(f64, f64) -> (f64, f64), h: f64) -> PartialsTable {
    let coarse = stencil(&f, h);
    let fine = stencil(&f, h / 2.0);
    PartialsTable { f1: Partials::richardson(&coarse.f1, &fine.f1), f2: Partials::richardson(&coarse.f2, &fine.f2) }
}

fn stencil(f: &impl Fn(f64, f64) -> (f64, f64), h: f64) -> PartialsTable {
    let component = |k: usize| {
        let g = |x: f64, y: f64| {
            let v = f(x, y);
            if k == 0 {
                v.0
            } else {
                v.1
            }
        };
        let d_xx = |y: f64| (g(h, y) - 2.0 * g(0.0, y) + g(-h, y)) / (h * h);
        let d_yy = |x: f64| (g(x, h) - 2.0 * g(x, 0.0) + g(x, -h)) / (h * h);
        Partials {
            xx: d_xx(0.0),
            yy: d_yy(0.0),
            xy: (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h),
            xxx: (g(2.0 * h, 0.0) - 2.0 * g(h, 0.0) + 2.0 * g(-h, 0.0) - g(-2.0 * h, 0.0)) / (2.0 * h.powi(3)),
            yyy: (g(0.0, 2.0 * h) - 2.0 * g(0.0, h) + 2.0 * g(0.0, -h) - g(0.0, -2.0 * h)) / (2.0 * h.powi(3)),
            xxy: (d_xx(h) - d_xx(-h)) / (2.0 * h),
            xyy: (d_yy(h) - d_yy(-h)) / (2.0 * h),
        }
    };
    PartialsTable { f1: component(0), f2: component(1) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Supercritical,
    Subcritical,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Undetermined,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Supercritical => "supercritical",
            Classification::Subcritical => "subcritical",
            Classification::Degenerate => "degenerate",
        })
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopfCoefficients {
    pub omega: f64,
    pub g11: Complex64,
    pub g02: Complex64,
    pub g20: Complex64,
    pub g21: Complex64,
    pub c1: Complex64,
    /// `λ'(0)` of the critical pair.
    pub lambda_prime: Complex64,
    pub p2: f64,
    pub zeta2: f64,
    pub t2: f64,
    pub classification: Classification,
    pub stability: Stability,
}

impl HopfCoefficients {
    /// Key–value export, one coefficient per line.
    pub fn to_summary(&self) -> String {
        let c = |z: Complex64| {
            let sign = if z.im.is_sign_negative() { '-' } else { '+' };
            format!("{} {sign} {}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
        };
        let mut out = String::new();
        let _ = writeln!(out, "omega = {}", fmt_f64(self.omega));
        for (k, v) in [("g11", self.g11), ("g02", self.g02), ("g20", self.g20), ("g21", self.g21), ("C1_0", self.c1)] {
            let _ = writeln!(out, "{k} = {}", c(v));
        }
        let _ = writeln!(out, "re_lambda_prime = {}", fmt_f64(self.lambda_prime.re));
        let _ = writeln!(out, "im_lambda_prime = {}", fmt_f64(self.lambda_prime.im));
        let _ = writeln!(out, "p2 = {}", fmt_f64(self.p2));
        let _ = writeln!(out, "zeta2 = {}", fmt_f64(self.zeta2));
        let _ = writeln!(out, "T2 = {}", fmt_f64(self.t2));
        let _ = writeln!(out, "classification = {}", self.classification);
        let _ = writeln!(out, "stability = {}", self.stability);
        out
    }

    /// Compact human-readable table.
    pub fn to_table(&self) -> String {
        let c = |z: Complex64| format!("{:+.6} {:+.6}i", z.re, z.im);
        let mut out = String::new();
        let _ = writeln!(out, "Hopf normal form at mu = 0, omega = {}", self.omega);
        let _ = writeln!(out, "  g11     {}", c(self.g11));
        let _ = writeln!(out, "  g02     {}", c(self.g02));
        let _ = writeln!(out, "  g20     {}", c(self.g20));
        let _ = writeln!(out, "  g21     {}", c(self.g21));
        let _ = writeln!(out, "  C1(0)   {}", c(self.c1));
        let _ = writeln!(out, "  lambda'(0) {}", c(self.lambda_prime));
        let _ = writeln!(out, "  p2      {:+.6}", self.p2);
        let _ = writeln!(out, "  zeta2   {:+.6}", self.zeta2);
        let _ = writeln!(out, "  T2      {:+.6}", self.t2);
        let _ = writeln!(out, "  {} Hopf bifurcation, {} periodic orbits", self.classification, self.stability);
        out
    }
}

/// Normal-form coefficients from a partials table.
pub fn coefficients_from_partials(p: &PartialsTable, omega: f64, lambda_prime: Complex64) -> Result<HopfCoefficients> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Parameter(format!("normal form needs a nonzero finite ω, got {omega}")));
    }
    if lambda_prime.re == 0.0 {
        return Err(Error::Parameter("transversality fails: Re λ'(0) = 0".into()));
    }
    let (f1, f2) = (&p.f1, &p.f2);
    let g11 = Complex64::new(f1.xx + f1.yy, f2.xx + f2.yy) / 4.0;
    let g02 = Complex64::new(f1.xx - f1.yy - 2.0 * f2.xy, f2.xx - f2.yy + 2.0 * f1.xy) / 4.0;
    let g20 = Complex64::new(f1.xx - f1.yy + 2.0 * f2.xy, f2.xx - f2.yy - 2.0 * f1.xy) / 4.0;
    let g21 = Complex64::new(f1.xxx + f1.xyy + f2.xxy + f2.yyy, f2.xxx + f2.xyy - f1.xxy - f1.yyy) / 8.0;
    let bracket = g20 * g11 - 2.0 * g11.norm_sqr() - g02.norm_sqr() / 3.0;
    let c1 = Complex64::new(0.0, 1.0 / (2.0 * omega)) * bracket + g21 / 2.0;
    let p2 = -c1.re / lambda_prime.re;
    let zeta2 = 2.0 * c1.re;
    let t2 = -(c1.im + p2 * lambda_prime.im) / omega;
    let classification = if p2 > DEGENERACY_TOLERANCE {
        Classification::Supercritical
    } else if p2 < -DEGENERACY_TOLERANCE {
        Classification::Subcritical
    } else {
        Classification::Degenerate
    };
    let stability = if zeta2 < -DEGENERACY_TOLERANCE {
        Stability::Stable
    } else if zeta2 > DEGENERACY_TOLERANCE {
        Stability::Unstable
    } else {
        Stability::Undetermined
    };
    Ok(HopfCoefficients { omega, g11, g02, g20, g21, c1, lambda_prime, p2, zeta2, t2, classification, stability })
}

/// Coefficients of the synchronous Hopf point at μ = 0.
pub fn normal_form(omega: f64, method: PartialsMethod) -> Result<HopfCoefficients> {
    if omega == 0.0 {
        return Err(Error::Parameter("normal form needs ω ≠ 0".into()));
    }
    let partials = partials_at_origin(0.0, omega, method)?;
    // λ(μ) = μ + iω
    coefficients_from_partials(&partials, omega, Complex64::new(1.0, 0.0))
}
