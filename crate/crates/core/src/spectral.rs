//! Linear stability of the origin for s-nearest-neighbour rings.
//!
//! Linearizing the network at `z = 0` in `(x_j, y_j)` coordinates gives a
//! 2N×2N block-circulant Jacobian `bcirc(A_1, …, A_N)` with 2×2 blocks. The
//! unitary `F_N ⊗ F_2` brings it to `diag(M_1, …, M_N)` where
//!
//! ```text
//! M_1 = [[μ, ω], [−ω, μ]]
//! M_j = [[μ − μ_j, ω], [−ω, μ − μ_j]]          (j = 2..N)
//! μ_j = 2c (s − sin(s(j−1)π/N) cos((s+1)(j−1)π/N) / sin((j−1)π/N))
//! ```
//!
//! so block j carries the pair `(μ − μ_j) ± iω` and turns critical at
//! `μ = μ_j`. Mode indices are 1-based throughout this module, matching the
//! Fourier block numbering.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::dynamics::{fmt_f64, SystemParams};
use crate::error::{Error, Result};
use crate::graph::TopologyKind;
use crate::linalg::{ComplexMatrix, RealMatrix};

/// Tolerance for merging numerically equal critical values.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;
/// Allowed disagreement between the closed-form and DFT-built blocks.
pub const BLOCK_AGREEMENT_TOLERANCE: f64 = 1e-10;

/// Row-major 2×2 real block.
pub type Mat2 = [[f64; 2]; 2];

fn scaled_identity(v: f64) -> Mat2 {
    [[v, 0.0], [0.0, v]]
}

/// Eigenvalues of a real 2×2 block, larger imaginary part first.
pub fn block_eigenvalues(m: &Mat2) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = Complex64::new(tr * tr / 4.0 - det, 0.0).sqrt();
    let half = Complex64::new(tr / 2.0, 0.0);
    [half + disc, half - disc]
}

/// Unitary DFT matrix `F_n[j][k] = w^{jk}/√n`, `w = e^{−2πi/n}` (0-based).
pub fn fourier_matrix(n: usize) -> ComplexMatrix {
    assert!(n >= 1, "Fourier matrix order must be positive");
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| {
        // reduce the exponent first so large products keep full accuracy
        let e = (j * k) % n;
        Complex64::from_polar(scale, -2.0 * PI * e as f64 / n as f64)
    })
}

/// Ring geometry: N nodes, each linked to its neighbours within distance s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingSpec {
    pub n: usize,
    pub s: usize,
}

impl RingSpec {
    pub fn new(n: usize, s: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("ring needs N >= 3, got {n}")));
        }
        if s < 1 || s > n / 2 {
            return Err(Error::Parameter(format!("ring coupling range s = {s} outside 1..={}", n / 2)));
        }
        Ok(Self { n, s })
    }

    pub fn from_params(params: &SystemParams) -> Result<Self> {
        let topo = &params.topology;
        match (topo.kind(), topo.ring_range()) {
            (TopologyKind::Ring { .. } | TopologyKind::Complete, Some(s)) => Self::new(topo.n_nodes(), s),
            _ => Err(Error::UnsupportedTopology(format!("{topo} is not an s-nearest-neighbour ring"))),
        }
    }

    pub fn is_all_to_all(&self) -> bool {
        self.s == self.n / 2
    }

    /// Node degree: 2s, or N − 1 when all-to-all.
    pub fn degree(&self) -> usize {
        if self.is_all_to_all() {
            self.n - 1
        } else {
            2 * self.s
        }
    }

    /// Whether two nodes `offset` apart on the ring are coupled.
    pub fn linked(&self, offset: usize) -> bool {
        let d = offset % self.n;
        let d = d.min(self.n - d);
        (1..=self.s).contains(&d)
    }

    /// Partner index `N + 2 − j` of mode j (j = 2..N).
    pub fn partner(&self, j: usize) -> usize {
        self.n + 2 - j
    }

    /// Self-paired mode `1 + N/2` for even N.
    pub fn unpaired_index(&self) -> Option<usize> {
        self.n.is_multiple_of(2).then_some(1 + self.n / 2)
    }

    /// Mode pairs `{j, N+2−j}`, `j < N+2−j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (2..=self.n).filter(|&j| j < self.partner(j)).map(|j| (j, self.partner(j))).collect()
    }
}

/// Critical value μ_j of mode j ∈ 2..N for the (N, s) ring with coupling c.
///
/// All-to-all rings return `N·c` for every j.
pub fn mu_critical(j: usize, n: usize, s: usize, c: f64) -> Result<f64> {
    let ring = RingSpec::new(n, s)?;
    if !(2..=n).contains(&j) {
        return Err(Error::Parameter(format!("mode index j = {j} outside 2..={n}")));
    }
    if ring.is_all_to_all() {
        return Ok(n as f64 * c);
    }
    Ok(mu_critical_formula(j, n, s, c))
}

/// Direct evaluation of the sine/cosine ratio formula, valid for every
/// s ≤ (N−1)/2 (including odd all-to-all).
pub fn mu_critical_formula(j: usize, n: usize, s: usize, c: f64) -> f64 {
    let base = (j - 1) as f64 * PI / n as f64;
    let denom = base.sin();
    debug_assert!(denom != 0.0, "sin((j-1)π/N) vanishes only for j = 1");
    let ratio = (s as f64 * base).sin() * ((s + 1) as f64 * base).cos() / denom;
    2.0 * c * (s as f64 - ratio)
}

/// The Jacobian at the origin as a block-circulant matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCirculantJacobian {
    pub n: usize,
    /// `A_1..A_N`, stored 0-based.
    pub blocks: Vec<Mat2>,
    /// Full 2N×2N matrix, block (j, k) = `A_{1 + ((k−j) mod N)}`.
    pub assembled: RealMatrix,
}

impl BlockCirculantJacobian {
    pub fn from_blocks(blocks: Vec<Mat2>) -> Self {
        let n = blocks.len();
        let assembled = RealMatrix::from_fn(2 * n, 2 * n, |r, c| {
            let (bj, bk) = (r / 2, c / 2);
            blocks[(bk + n - bj) % n][r % 2][c % 2]
        });
        Self { n, blocks, assembled }
    }

    pub fn block(&self, k: usize) -> &Mat2 {
        &self.blocks[k - 1]
    }
}

/// Jacobian blocks at the origin for a ring network with identical ω.
pub fn build_jacobian_blocks(params: &SystemParams) -> Result<BlockCirculantJacobian> {
    let ring = RingSpec::from_params(params)?;
    let omega = params
        .common_frequency()
        .ok_or_else(|| Error::Parameter("block-circulant linearization needs identical natural frequencies".into()))?;
    Ok(ring_jacobian(ring, params.mu, omega, params.c))
}

pub fn ring_jacobian(ring: RingSpec, mu: f64, omega: f64, c: f64) -> BlockCirculantJacobian {
    let diag = mu - ring.degree() as f64 * c;
    let mut blocks = vec![[[diag, -omega], [omega, diag]]];
    for offset in 1..ring.n {
        blocks.push(scaled_identity(if ring.linked(offset) { c } else { 0.0 }));
    }
    BlockCirculantJacobian::from_blocks(blocks)
}

/// Modes sharing one critical value.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalEntry {
    pub mu: f64,
    /// Contributing 1-based mode indices, ascending.
    pub modes: Vec<usize>,
    /// Number of purely imaginary eigenvalue pairs `±iω` at this μ.
    pub imaginary_pairs: usize,
    pub simple: bool,
}

/// Sorted critical values of the origin with their contributing modes.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfCriticalityTable {
    pub ring: RingSpec,
    pub c: f64,
    pub entries: Vec<CriticalEntry>,
}

impl HopfCriticalityTable {
    /// Entry index containing mode j.
    pub fn class_of(&self, j: usize) -> Option<usize> {
        self.entries.iter().position(|e| e.modes.contains(&j))
    }

    /// Entries other than the synchronous μ = 0 one.
    pub fn additional(&self) -> &[CriticalEntry] {
        &self.entries[1..]
    }

    /// Text summary in the style of a bifurcation-diagram caption.
    pub fn to_summary(&self) -> String {
        let RingSpec { n, s } = self.ring;
        let mut out = String::new();
        let _ = writeln!(out, "ring N={n} s={s} c={}", self.c);
        if let Some(js) = self.ring.unpaired_index() {
            if !self.ring.is_all_to_all() {
                let _ = writeln!(out, "unpaired index j* = {js}");
            }
        }
        for e in &self.entries {
            let names: Vec<String> = e.modes.iter().map(|j| format!("mu_{j}")).collect();
            let kind = if e.modes == [1] {
                "simple Hopf bifurcation (synchronous mode)".to_string()
            } else if e.simple {
                "simple".to_string()
            } else if self.ring.is_all_to_all() {
                format!("highly degenerate ({} pairs of purely imaginary eigenvalues)", e.imaginary_pairs)
            } else {
                format!("not simple ({} pairs of purely imaginary eigenvalues)", e.imaginary_pairs)
            };
            let _ = writeln!(out, "{} = {:.6}: {}", names.join(" = "), e.mu, kind);
        }
        out
    }

    /// `mu_crit,modes,simple` rows (modes separated by spaces).
    pub fn to_markers_csv(&self) -> String {
        let mut out = String::from("mu_crit,modes,simple\n");
        for e in &self.entries {
            let modes: Vec<String> = e.modes.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{},{},{}", fmt_f64(e.mu), modes.join(" "), e.simple);
        }
        out
    }
}

/// Group modes 2..N by equal μ_j (within [`DEGENERACY_TOLERANCE`]) and flag
/// which critical points are simple.
pub fn classify_criticalities(n: usize, s: usize, c: f64) -> Result<HopfCriticalityTable> {
    let ring = RingSpec::new(n, s)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Parameter(format!("critical values need c > 0, got {c}")));
    }
    let mut modes: Vec<(usize, f64)> = (2..=n).map(|j| Ok((j, mu_critical(j, n, s, c)?))).collect::<Result<_>>()?;
    modes.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut entries = vec![CriticalEntry { mu: 0.0, modes: vec![1], imaginary_pairs: 1, simple: true }];
    let mut group: Vec<(usize, f64)> = Vec::new();
    let flush = |group: &mut Vec<(usize, f64)>, entries: &mut Vec<CriticalEntry>| {
        if group.is_empty() {
            return;
        }
        let mut idx: Vec<usize> = group.iter().map(|g| g.0).collect();
        idx.sort_unstable();
        let mu = group.iter().map(|g| g.1).sum::<f64>() / group.len() as f64;
        entries.push(CriticalEntry { mu, imaginary_pairs: idx.len(), simple: idx.len() == 1, modes: idx });
        group.clear();
    };
    for m in modes {
        if let Some(first) = group.first() {
            if (m.1 - first.1).abs() > DEGENERACY_TOLERANCE {
                flush(&mut group, &mut entries);
            }
        }
        group.push(m);
    }
    flush(&mut group, &mut entries);
    Ok(HopfCriticalityTable { ring, c, entries })
}

/// Block decomposition of the Jacobian at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub ring: RingSpec,
    pub mu: f64,
    pub omega: f64,
    pub c: f64,
    /// Closed-form `M_1..M_N` (0-based storage).
    pub m_blocks: Vec<Mat2>,
    /// `M_1..M_N` from the DFT of the Jacobian blocks.
    pub m_numeric: Vec<ComplexMatrix>,
    /// Largest entrywise gap between the two routes.
    pub route_agreement: f64,
    /// `μ_1 := 0, μ_2, …, μ_N` (0-based storage).
    pub mu_crit: Vec<f64>,
    pub pairs: Vec<(usize, usize)>,
    pub unpaired_index: Option<usize>,
    pub criticality: HopfCriticalityTable,
}

impl SpectralReport {
    pub fn block(&self, j: usize) -> &Mat2 {
        &self.m_blocks[j - 1]
    }

    pub fn mu_j(&self, j: usize) -> f64 {
        self.mu_crit[j - 1]
    }

    /// `λ_j^± = (μ − μ_j) ± iω`.
    pub fn eigenvalues(&self, j: usize) -> [Complex64; 2] {
        let re = self.mu - self.mu_j(j);
        [Complex64::new(re, self.omega), Complex64::new(re, -self.omega)]
    }

    /// `j,mu_j,pair_partner,degeneracy_class,simple`; j = 1 has no partner
    /// (`-`), the even-N unpaired index lists itself.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,mu_j,pair_partner,degeneracy_class,simple\n");
        for j in 1..=self.ring.n {
            let partner = if j == 1 { "-".to_string() } else { self.ring.partner(j).to_string() };
            let class = self.criticality.class_of(j).expect("every mode is classified");
            let simple = self.criticality.entries[class].simple;
            let _ = writeln!(out, "{j},{},{partner},{class},{simple}", fmt_f64(self.mu_j(j)));
        }
        out
    }
}

fn closed_form_block(mu: f64, omega: f64, mu_j: f64) -> Mat2 {
    [[mu - mu_j, omega], [-omega, mu - mu_j]]
}

/// `M_j = Σ_k w^{(j−1)(k−1)} F_2^* A_k F_2`, the DFT route to the blocks.
///
/// The forward kernel `w = e^{−2πi/N}` matches the inverse-kernel form only
/// for symmetric block sequences (`A_{1+ℓ} = A_{N+1−ℓ}`), which every
/// undirected ring satisfies.
pub fn dft_blocks(jac: &BlockCirculantJacobian) -> Vec<ComplexMatrix> {
    let n = jac.n;
    let f2 = fourier_matrix(2);
    let f2_adj = f2.adjoint();
    let b: Vec<ComplexMatrix> = jac
        .blocks
        .iter()
        .map(|a| {
            let a = RealMatrix::from_fn(2, 2, |r, c| a[r][c]).to_complex();
            f2_adj.matmul(&a).matmul(&f2)
        })
        .collect();
    (0..n)
        .map(|j| {
            let mut m = ComplexMatrix::zeros(2, 2);
            for (k, bk) in b.iter().enumerate() {
                let w = Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % n) as f64 / n as f64);
                for r in 0..2 {
                    for c in 0..2 {
                        m[(r, c)] += w * bk[(r, c)];
                    }
                }
            }
            m
        })
        .collect()
}

/// Compute the blocks `M_j` both in closed form and through the DFT, and
/// require them to agree within [`BLOCK_AGREEMENT_TOLERANCE`].
pub fn compute_blocks_m(params: &SystemParams) -> Result<SpectralReport> {
    let ring = RingSpec::from_params(params)?;
    let jac = build_jacobian_blocks(params)?;
    let omega = params.common_frequency().expect("checked by build_jacobian_blocks");
    spectral_report(ring, &jac, params.mu, omega, params.c)
}

/// Same as [`compute_blocks_m`] from bare ring parameters.
pub fn ring_spectral_report(n: usize, s: usize, mu: f64, omega: f64, c: f64) -> Result<SpectralReport> {
    let ring = RingSpec::new(n, s)?;
    let jac = ring_jacobian(ring, mu, omega, c);
    spectral_report(ring, &jac, mu, omega, c)
}

fn spectral_report(
    ring: RingSpec,
    jac: &BlockCirculantJacobian,
    mu: f64,
    omega: f64,
    c: f64,
) -> Result<SpectralReport> {
    let mut mu_crit = vec![0.0];
    for j in 2..=ring.n {
        mu_crit.push(mu_critical(j, ring.n, ring.s, c)?);
    }
    let m_blocks: Vec<Mat2> = mu_crit.iter().map(|&mj| closed_form_block(mu, omega, mj)).collect();
    let m_numeric = dft_blocks(jac);
    let mut route_agreement = 0.0_f64;
    for (closed, numeric) in m_blocks.iter().zip(&m_numeric) {
        for r in 0..2 {
            for col in 0..2 {
                route_agreement = route_agreement.max((numeric[(r, col)] - closed[r][col]).norm());
            }
        }
    }
    if route_agreement > BLOCK_AGREEMENT_TOLERANCE {
        return Err(Error::Consistency(format!("closed-form and DFT blocks differ by {route_agreement:e}")));
    }
    // c = 0 makes every mode critical at μ = 0; the table needs c > 0
    let criticality = if c > 0.0 {
        classify_criticalities(ring.n, ring.s, c)?
    } else {
        HopfCriticalityTable {
            ring,
            c,
            entries: vec![CriticalEntry {
                mu: 0.0,
                modes: (1..=ring.n).collect(),
                imaginary_pairs: ring.n,
                simple: ring.n == 1,
            }],
        }
    };
    Ok(SpectralReport {
        ring,
        mu,
        omega,
        c,
        m_blocks,
        m_numeric,
        route_agreement,
        mu_crit,
        pairs: ring.pairs(),
        unpaired_index: ring.unpaired_index(),
        criticality,
    })
}

/// Residuals of the Fourier block diagonalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalizationResidual {
    /// `‖A − (F_N⊗F_2)* diag(M) (F_N⊗F_2)‖_max`.
    pub reconstruction: f64,
    /// Largest `‖A v − λ v‖_∞` over the analytic eigenpairs.
    pub eigenpairs: f64,
}

impl DiagonalizationResidual {
    pub fn max(&self) -> f64 {
        self.reconstruction.max(self.eigenpairs)
    }
}

/// Rebuild the Jacobian from the closed-form blocks and check every
/// analytic eigenpair `λ_j^±` with eigenvector `(F_N⊗F_2)* (e_j ⊗ (1, ±i)/√2)`.
pub fn verify_diagonalization(
    jac: &BlockCirculantJacobian,
    report: &SpectralReport,
) -> Result<DiagonalizationResidual> {
    let n = jac.n;
    if report.ring.n != n {
        return Err(Error::Parameter(format!("Jacobian has {n} blocks but report describes N = {}", report.ring.n)));
    }
    let u = fourier_matrix(n).kron(&fourier_matrix(2));
    let u_adj = u.adjoint();
    let mut d = ComplexMatrix::zeros(2 * n, 2 * n);
    for (j, m) in report.m_blocks.iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                d[(2 * j + r, 2 * j + c)] = Complex64::new(m[r][c], 0.0);
            }
        }
    }
    let rebuilt = u_adj.matmul(&d).matmul(&u);
    let a = jac.assembled.to_complex();
    let reconstruction = rebuilt.max_abs_diff(&a);

    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut eigenpairs = 0.0_f64;
    for j in 1..=n {
        let lambdas = report.eigenvalues(j);
        for (lambda, sign) in lambdas.iter().zip([1.0, -1.0]) {
            let mut x = vec![Complex64::new(0.0, 0.0); 2 * n];
            x[2 * (j - 1)] = Complex64::new(inv_sqrt2, 0.0);
            x[2 * (j - 1) + 1] = Complex64::new(0.0, sign * inv_sqrt2);
            let v = u_adj.mul_vec(&x);
            let av = a.mul_vec(&v);
            let worst = av.iter().zip(&v).map(|(av, v)| (av - lambda * v).norm()).fold(0.0, f64::max);
            eigenpairs = eigenpairs.max(worst);
        }
    }
    Ok(DiagonalizationResidual { reconstruction, eigenpairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NetworkTopology;

    fn ring_params(n: usize, s: usize, mu: f64, omega: f64, c: f64) -> SystemParams {
        SystemParams::uniform(mu, omega, c, NetworkTopology::ring(n, s).unwrap()).unwrap()
    }

    #[test]
    fn fourier_small_orders() {
        let f1 = fourier_matrix(1);
        assert_eq!(f1[(0, 0)], Complex64::new(1.0, 0.0));
        let f2 = fourier_matrix(2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (idx, v) in [((0, 0), h), ((0, 1), h), ((1, 0), h), ((1, 1), -h)] {
            assert!((f2[idx] - Complex64::new(v, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn fourier_unitary() {
        for n in 1..=32 {
            let f = fourier_matrix(n);
            let err = f.adjoint().matmul(&f).max_abs_diff(&ComplexMatrix::identity(n));
            assert!(err < 1e-12, "n = {n}: {err:e}");
        }
    }

    #[test]
    fn jacobian_blocks_ring_6_2() {
        let jac = build_jacobian_blocks(&ring_params(6, 2, 1.0, 1.0, 0.05)).unwrap();
        let a1 = jac.block(1);
        assert!((a1[0][0] - 0.8).abs() < 1e-15 && (a1[1][1] - 0.8).abs() < 1e-15);
        assert_eq!((a1[0][1], a1[1][0]), (-1.0, 1.0));
        for k in [2, 3, 5, 6] {
            assert_eq!(jac.block(k), &scaled_identity(0.05));
        }
        assert_eq!(jac.block(4), &scaled_identity(0.0));
    }

    #[test]
    fn jacobian_blocks_all_to_all_even() {
        let jac = build_jacobian_blocks(&ring_params(6, 3, 1.0, 1.0, 0.05)).unwrap();
        assert!((jac.block(1)[0][0] - 0.75).abs() < 1e-15);
        for k in 2..=6 {
            assert_eq!(jac.block(k), &scaled_identity(0.05));
        }
    }

    #[test]
    fn assembled_matches_coupling_structure() {
        let p = ring_params(7, 2, 0.3, 1.2, 0.1);
        let jac = build_jacobian_blocks(&p).unwrap();
        let topo = &p.topology;
        for j in 0..7 {
            for k in 0..7 {
                let expected: Mat2 =
                    if j == k { *jac.block(1) } else { scaled_identity(0.1 * f64::from(topo.adjacency(j, k))) };
                for r in 0..2 {
                    for c in 0..2 {
                        assert_eq!(jac.assembled[(2 * j + r, 2 * k + c)], expected[r][c]);
                    }
                }
            }
        }
    }

    #[test]
    fn non_ring_is_rejected() {
        let g = NetworkTopology::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = SystemParams::uniform(1.0, 1.0, 0.1, g).unwrap();
        assert!(matches!(build_jacobian_blocks(&p), Err(Error::UnsupportedTopology(_))));
        // K_N is accepted as the all-to-all ring
        let p = SystemParams::uniform(1.0, 1.0, 0.1, NetworkTopology::complete(5).unwrap()).unwrap();
        assert_eq!(RingSpec::from_params(&p).unwrap(), RingSpec { n: 5, s: 2 });
    }

    #[test]
    fn ring_6_2_blocks() {
        let report = compute_blocks_m(&ring_params(6, 2, 0.3, 1.0, 0.05)).unwrap();
        let m3 = report.block(3);
        assert!(m3[0][0].abs() < 1e-15 && m3[1][1].abs() < 1e-15);
        assert_eq!((m3[0][1], m3[1][0]), (1.0, -1.0));
        assert_eq!(report.block(1), &[[0.3, 1.0], [-1.0, 0.3]]);
        assert!(report.route_agreement < 1e-10);
    }

    #[test]
    fn odd_all_to_all_blocks() {
        let (mu, c) = (0.4, 0.05);
        let report = compute_blocks_m(&ring_params(7, 3, mu, 1.0, c)).unwrap();
        for j in 2..=7 {
            let m = report.block(j);
            assert!((m[0][0] - (mu - 7.0 * c)).abs() < 1e-15);
        }
        for j in 2..=7 {
            assert!((mu_critical_formula(j, 7, 3, c) - 7.0 * c).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_critical_values() {
        assert!((mu_critical(2, 6, 2, 0.05).unwrap() - 0.2).abs() < 1e-12);
        assert!((mu_critical(2, 7, 2, 0.05).unwrap() - 0.159903).abs() < 1e-6);
        for j in 2..=6 {
            assert!((mu_critical(j, 6, 3, 0.05).unwrap() - 0.3).abs() < 1e-15);
        }
        assert!(mu_critical(1, 6, 2, 0.05).is_err());
        assert!(mu_critical(7, 6, 2, 0.05).is_err());
        assert!(mu_critical(2, 6, 4, 0.05).is_err());
    }

    #[test]
    fn classify_ring_6_2() {
        let t = classify_criticalities(6, 2, 0.05).unwrap();
        assert_eq!(t.entries.len(), 3);
        assert_eq!(t.entries[0].modes, vec![1]);
        assert!(t.entries[0].simple);
        assert_eq!(t.entries[1].modes, vec![2, 4, 6]);
        assert!((t.entries[1].mu - 0.2).abs() < 1e-12);
        assert!(!t.entries[1].simple);
        assert_eq!(t.entries[2].modes, vec![3, 5]);
        assert!((t.entries[2].mu - 0.3).abs() < 1e-12);
        assert!(!t.entries[2].simple);
    }

    #[test]
    fn classify_odd_ring_has_only_pairs() {
        let t = classify_criticalities(7, 2, 0.05).unwrap();
        assert!(t.additional().iter().all(|e| !e.simple && e.modes.len() == 2));
    }

    #[test]
    fn classify_even_all_to_all() {
        let t = classify_criticalities(8, 4, 0.05).unwrap();
        assert_eq!(t.entries.len(), 2);
        assert_eq!(t.entries[1].imaginary_pairs, 7);
        assert!(t.to_summary().contains("highly degenerate"));
    }

    #[test]
    fn classify_needs_positive_coupling() {
        assert!(classify_criticalities(6, 2, 0.0).is_err());
    }

    #[test]
    fn simple_unpaired_mode_exists_for_some_rings() {
        // N = 8, s = 1: μ_5 = 2c(1 − cos π) = 4c is hit only by j* = 5
        let t = classify_criticalities(8, 1, 0.1).unwrap();
        let e = &t.entries[t.class_of(5).unwrap()];
        assert_eq!(e.modes, vec![5]);
        assert!(e.simple);
    }

    #[test]
    fn pairs_and_unpaired() {
        let r = RingSpec::new(6, 2).unwrap();
        assert_eq!(r.pairs(), vec![(2, 6), (3, 5)]);
        assert_eq!(r.unpaired_index(), Some(4));
        let r = RingSpec::new(7, 2).unwrap();
        assert_eq!(r.pairs(), vec![(2, 7), (3, 6), (4, 5)]);
        assert_eq!(r.unpaired_index(), None);
    }

    #[test]
    fn diagonalization_residual_small() {
        let p = ring_params(6, 2, 0.37, 1.3, 0.08);
        let jac = build_jacobian_blocks(&p).unwrap();
        let report = compute_blocks_m(&p).unwrap();
        let res = verify_diagonalization(&jac, &report).unwrap();
        assert!(res.max() < 1e-10, "{res:?}");

        let jac = ring_jacobian(RingSpec::new(12, 5).unwrap(), 0.2, 0.7, 0.03);
        let report = ring_spectral_report(12, 5, 0.2, 0.7, 0.03).unwrap();
        assert!(verify_diagonalization(&jac, &report).unwrap().max() < 1e-10);
    }

    #[test]
    fn diagonalization_of_scalar_jacobian() {
        // ω = c = 0: A = μ I
        let jac = ring_jacobian(RingSpec::new(5, 1).unwrap(), 0.6, 0.0, 0.0);
        assert_eq!(jac.assembled, {
            let mut m = RealMatrix::identity(10);
            for i in 0..10 {
                m[(i, i)] = 0.6;
            }
            m
        });
        let report = ring_spectral_report(5, 1, 0.6, 0.0, 0.0).unwrap();
        assert!(verify_diagonalization(&jac, &report).unwrap().max() < 1e-14);
    }

    #[test]
    fn block_eigenvalues_of_rotation_block() {
        let [a, b] = block_eigenvalues(&[[0.2, 1.5], [-1.5, 0.2]]);
        assert!((a - Complex64::new(0.2, 1.5)).norm() < 1e-14);
        assert!((b - Complex64::new(0.2, -1.5)).norm() < 1e-14);
    }

    #[test]
    fn csv_rows() {
        let report = ring_spectral_report(6, 2, 0.1, 1.0, 0.05).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,mu_j,pair_partner,degeneracy_class,simple");
        assert!(lines[1].starts_with("1,0.0000000000000000e0,-,0,true"));
        assert!(lines[4].starts_with("4,") && lines[4].ends_with(",4,1,false"));
        assert_eq!(lines.len(), 7);
    }
}
