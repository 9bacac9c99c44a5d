//! Network topologies and combinatorial Laplacian spectra.
//!
//! Nodes are indexed from 0 internally. Anything user-facing (edge-list
//! files, reports, error messages) uses 1-based node labels.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, RealMatrix};

/// How a topology was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyKind {
    /// s-nearest-neighbour ring.
    Ring {
        s: usize,
    },
    Complete,
    Custom,
}

/// Simple undirected connected graph with binary edges.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    n: usize,
    adjacency: Vec<u8>,
    neighbors: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    kind: TopologyKind,
}

impl NetworkTopology {
    /// Ring where node j is linked to every node within ring distance `s`.
    ///
    /// `s = ⌊N/2⌋` gives the all-to-all graph.
    pub fn ring(n: usize, s: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("ring needs N >= 3, got {n}")));
        }
        if s < 1 || s > n / 2 {
            return Err(Error::Parameter(format!("ring coupling range s = {s} outside 1..={}", n / 2)));
        }
        let mut adjacency = vec![0u8; n * n];
        for j in 0..n {
            for k in 0..n {
                let d = j.abs_diff(k);
                let ring_distance = d.min(n - d);
                if (1..=s).contains(&ring_distance) {
                    adjacency[j * n + k] = 1;
                }
            }
        }
        Self::from_adjacency(n, adjacency, TopologyKind::Ring { s })
    }

    /// Complete graph K_N (all ones off the diagonal).
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("complete graph needs N >= 2, got {n}")));
        }
        let adjacency = (0..n * n).map(|i| u8::from(i / n != i % n)).collect();
        Self::from_adjacency(n, adjacency, TopologyKind::Complete)
    }

    /// Custom graph from 0-based undirected edges. Duplicates are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("graph needs at least one node".into()));
        }
        let mut adjacency = vec![0u8; n * n];
        for &(j, k) in edges {
            if j >= n || k >= n {
                return Err(Error::Parameter(format!("edge ({}, {}) references a node outside 1..={n}", j + 1, k + 1)));
            }
            if j == k {
                return Err(Error::Parameter(format!("self-loop at node {}", j + 1)));
            }
            adjacency[j * n + k] = 1;
            adjacency[k * n + j] = 1;
        }
        Self::from_adjacency(n, adjacency, TopologyKind::Custom)
    }

    /// Parse an edge-list text: one `j k` pair per line, 1-based,
    /// whitespace-separated, `#` starts a comment. N is the largest label.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected two node labels, got {:?}", lineno + 1, line)));
            }
            let mut parse = |f: &str| -> Result<usize> {
                let v: usize =
                    f.parse().map_err(|_| Error::Parse(format!("line {}: bad node label {f:?}", lineno + 1)))?;
                if v == 0 {
                    return Err(Error::Parse(format!("line {}: node labels are 1-based", lineno + 1)));
                }
                n = n.max(v);
                Ok(v - 1)
            };
            let j = parse(fields[0])?;
            let k = parse(fields[1])?;
            edges.push((j, k));
        }
        if edges.is_empty() {
            return Err(Error::Parse("edge list contains no edges".into()));
        }
        Self::from_edges(n, &edges)
    }

    pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse_edge_list(&text)
    }

    fn from_adjacency(n: usize, adjacency: Vec<u8>, kind: TopologyKind) -> Result<Self> {
        let neighbors: Vec<Vec<usize>> =
            (0..n).map(|j| (0..n).filter(|&k| adjacency[j * n + k] == 1).collect()).collect();
        let degrees = neighbors.iter().map(Vec::len).collect();
        let topo = Self { n, adjacency, neighbors, degrees, kind };
        let components = topo.count_components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(topo)
    }

    fn count_components(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut components = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(j) = queue.pop_front() {
                for &k in &self.neighbors[j] {
                    if !seen[k] {
                        seen[k] = true;
                        queue.push_back(k);
                    }
                }
            }
        }
        components
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    /// `a_jk` as 0 or 1.
    pub fn adjacency(&self, j: usize, k: usize) -> u8 {
        self.adjacency[j * self.n + k]
    }

    pub fn neighbors(&self, j: usize) -> &[usize] {
        &self.neighbors[j]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn d_max(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// True when every pair of distinct nodes is linked.
    pub fn is_all_to_all(&self) -> bool {
        self.degrees.iter().all(|&d| d + 1 == self.n)
    }

    /// Ring coupling range when this is (or coincides with) an s-nearest ring.
    pub fn ring_range(&self) -> Option<usize> {
        match self.kind {
            TopologyKind::Ring { s } => Some(s),
            TopologyKind::Complete if self.n >= 3 => Some(self.n / 2),
            _ => None,
        }
    }

    pub fn adjacency_matrix(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |j, k| f64::from(self.adjacency(j, k)))
    }

    /// Combinatorial Laplacian `L = D − A`.
    pub fn laplacian(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |j, k| {
            if j == k {
                self.degrees[j] as f64
            } else {
                -f64::from(self.adjacency(j, k))
            }
        })
    }

    /// 1-based edge list (j < k), one pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for j in 0..self.n {
            for &k in &self.neighbors[j] {
                if j < k {
                    out.push_str(&format!("{} {}\n", j + 1, k + 1));
                }
            }
        }
        out
    }
}

impl fmt::Display for NetworkTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TopologyKind::Ring { s } => write!(f, "ring(N={}, s={})", self.n, s),
            TopologyKind::Complete => write!(f, "complete(N={})", self.n),
            TopologyKind::Custom => write!(f, "custom(N={}, d_max={})", self.n, self.d_max()),
        }
    }
}

/// Sorted Laplacian eigenvalues with the two extracted quantities the
/// certificates use.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Algebraic connectivity; zero (up to rounding) for disconnected graphs.
    pub lambda2: f64,
    pub lambda_max: f64,
}

/// Full spectrum of a symmetric Laplacian via Jacobi rotations.
pub fn laplacian_spectrum(laplacian: &RealMatrix) -> Result<LaplacianSpectrum> {
    let eig = jacobi_eigen(laplacian)?;
    let eigenvalues = eig.values;
    let lambda2 = eigenvalues.get(1).copied().unwrap_or(0.0);
    let lambda_max = eigenvalues.last().copied().unwrap_or(0.0);
    Ok(LaplacianSpectrum { eigenvalues, lambda2, lambda_max })
}

impl NetworkTopology {
    pub fn spectrum(&self) -> LaplacianSpectrum {
        laplacian_spectrum(&self.laplacian()).expect("graph Laplacian is symmetric")
    }
}
