//! Networks of diffusively coupled Stuart-Landau oscillators
//!
//! ```text
//! ż_j = (μ + iω_j) z_j − |z_j|² z_j + c Σ_k a_jk (z_k − z_j)
//! ```
//!
//! on an undirected connected graph. The crate covers:
//!
//! - [`graph`]: topologies, Laplacians and their spectra
//! - [`dynamics`]: vector fields, RK4 / RKF45 integration, trajectories
//! - [`metrics`]: synchronization diagnostics and the energy balance
//! - [`certificates`]: checkable sufficient conditions for persistence and synchronization
//! - [`spectral`]: Fourier block diagonalization of the Jacobian at the origin on rings
//! - [`hopf`]: normal-form coefficients of the synchronous Hopf point
//! - [`scan`]: μ sweeps with branch amplitudes and critical-value markers
//! - [`config`] and [`cli`]: the TOML-driven `slnet` command
//!
//! ```
//! use slnet::spectral::classify_criticalities;
//!
//! let table = classify_criticalities(6, 2, 0.05).unwrap();
//! assert_eq!(table.entries[1].modes, vec![2, 4, 6]);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod certificates;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod hopf;
pub mod linalg;
pub mod metrics;
pub mod scan;
pub mod spectral;
