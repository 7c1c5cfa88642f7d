//! Adjacency spectra, the `θ / φ / ψ` parametrization of eigenvalues, the
//! Ramanujan classification and density-hypothesis statistics.
//!
//! Every nontrivial eigenvalue is written `λ = 2√p cos θ`. Inside the Ramanujan
//! interval `θ ∈ [0, π]` is real; above it `θ = iφ log p` and below it
//! `θ = π + iψ log p`, with `φ, ψ ∈ (0, 1/2]`.
//!
//! Bipartite graphs carry the eigenvalue `-d`. It is excluded from the
//! nontrivial bound `λ` and from exceptional counts, and reports record that
//! exclusion through [`Classification::excluded_trivial_negative`].

mod jacobi;

pub use jacobi::{jacobi_eigen, Eigen};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Graph;
use crate::math::{abs, acos, acosh, cosh, log, pow, sqrt};

/// Eigenvalues within this distance of `±2√p` count as non-exceptional.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Default tolerance for [`Spectrum::classify`].
pub const RAMANUJAN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralError {
    TooLarge { n: usize, limit: usize },
    NoConvergence { sweeps: usize },
    DegreeMismatch { p: u64, degree: usize },
    MissingVectors,
    InvalidInput(String),
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::TooLarge { n, limit } => {
                write!(f, "n = {n} exceeds the dense eigensolver limit {limit}")
            }
            SpectralError::NoConvergence { sweeps } => {
                write!(f, "Jacobi iteration did not converge in {sweeps} sweeps")
            }
            SpectralError::DegreeMismatch { p, degree } => {
                write!(f, "p = {p} does not match degree {degree} (need p = d - 1)")
            }
            SpectralError::MissingVectors => write!(f, "eigenvectors were not computed"),
            SpectralError::InvalidInput(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for SpectralError {}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    pub want_vectors: bool,
    pub dense_limit: usize,
    pub max_sweeps: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            want_vectors: false,
            dense_limit: 5000,
            max_sweeps: 100,
        }
    }
}

impl EigenOptions {
    pub fn with_vectors() -> Self {
        EigenOptions {
            want_vectors: true,
            ..Self::default()
        }
    }
}

/// Position of one eigenvalue relative to the Ramanujan interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    /// `λ = 2√p cos θ`, `θ ∈ [0, π]`.
    Real(f64),
    /// `λ = 2√p cosh(φ ln p) > 2√p`.
    Above(f64),
    /// `λ = -2√p cosh(ψ ln p) < -2√p`.
    Below(f64),
}

impl Angle {
    /// Argument `λ / (2√p)` of the Chebyshev polynomials, recovered from the
    /// angle.
    pub fn chebyshev_arg(self, p: u64) -> f64 {
        let lp = log(p as f64);
        match self {
            Angle::Real(theta) => crate::math::cos(theta),
            Angle::Above(phi) => cosh(phi * lp),
            Angle::Below(psi) => -cosh(psi * lp),
        }
    }

    /// `φ` or `ψ` for exceptional eigenvalues.
    pub fn exceptional(self) -> Option<f64> {
        match self {
            Angle::Real(_) => None,
            Angle::Above(v) | Angle::Below(v) => Some(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub is_ramanujan: bool,
    /// `max_{j != 0} |λ_j|`, without `-d` on bipartite graphs.
    pub lambda_bound: f64,
    pub ramanujan_bound: f64,
    pub bipartite: bool,
    /// Whether `-d` was dropped from the maximum.
    pub excluded_trivial_negative: bool,
    pub tol: f64,
}

/// Full adjacency spectrum, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    n: usize,
    degree: usize,
    eigenvalues: Vec<f64>,
    /// Row-major, entry `x * n + j` is `f_j(x)`.
    eigenvectors: Option<Vec<f64>>,
    bipartite: bool,
    sweeps: usize,
}

/// Convergence threshold on the off-diagonal norm for an `n`-vertex
/// `d`-regular adjacency matrix.
pub fn eigen_tolerance(n: usize, d: usize) -> f64 {
    1e-12 * (n * d) as f64
}

/// Dense Jacobi eigendecomposition of the adjacency matrix.
pub fn eigendecompose(g: &Graph, opts: &EigenOptions) -> Result<Spectrum, SpectralError> {
    let n = g.n();
    if n > opts.dense_limit {
        return Err(SpectralError::TooLarge {
            n,
            limit: opts.dense_limit,
        });
    }
    let tol = eigen_tolerance(n, g.degree());
    let eig = jacobi_eigen(
        g.adjacency_matrix(),
        n,
        opts.want_vectors,
        tol,
        opts.max_sweeps,
    )
    .ok_or(SpectralError::NoConvergence {
        sweeps: opts.max_sweeps,
    })?;
    let mut spec = Spectrum::from_unsorted(g.degree(), eig.values, eig.vectors);
    spec.bipartite = g.is_bipartite();
    spec.sweeps = eig.sweeps;
    Ok(spec)
}

impl Spectrum {
    fn from_unsorted(degree: usize, values: Vec<f64>, vectors: Option<Vec<f64>>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            values[j]
                .partial_cmp(&values[i])
                .expect("eigenvalues are finite")
                .then(i.cmp(&j))
        });
        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = vectors.map(|v| {
            let mut out = alloc::vec![0.0; n * n];
            for (new, &old) in order.iter().enumerate() {
                for x in 0..n {
                    out[x * n + new] = v[x * n + old];
                }
            }
            // orient the top eigenvector positively
            if n > 0 && (0..n).map(|x| out[x * n]).sum::<f64>() < 0.0 {
                for x in 0..n {
                    out[x * n] = -out[x * n];
                }
            }
            out
        });
        Spectrum {
            n,
            degree,
            eigenvalues,
            eigenvectors,
            bipartite: false,
            sweeps: 0,
        }
    }

    /// Spectrum from eigenvalues alone (e.g. synthetic spectra). The graph is
    /// taken to be bipartite when the smallest eigenvalue is `-degree`.
    pub fn from_eigenvalues(degree: usize, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.is_empty() {
            return Err(SpectralError::InvalidInput("empty spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::InvalidInput("non-finite eigenvalue".into()));
        }
        let mut spec = Self::from_unsorted(degree, values, None);
        let last = spec.eigenvalues[spec.n - 1];
        spec.bipartite = spec.n > 1 && abs(last + degree as f64) <= BOUNDARY_TOL;
        Ok(spec)
    }

    /// Rebuilds a saved spectrum. `vectors`, if present, is row-major with
    /// entry `x * n + j` belonging to `values[j]`.
    pub fn from_saved(
        degree: usize,
        values: Vec<f64>,
        vectors: Option<Vec<f64>>,
        bipartite: bool,
    ) -> Result<Self, SpectralError> {
        let n = values.len();
        if vectors.as_ref().is_some_and(|v| v.len() != n * n) {
            return Err(SpectralError::InvalidInput(alloc::format!(
                "expected {} eigenvector entries",
                n * n
            )));
        }
        if vectors.is_some() && values.windows(2).any(|w| w[0] < w[1]) {
            return Err(SpectralError::InvalidInput(
                "eigenvalues with vectors must be in descending order".into(),
            ));
        }
        let mut spec = Self::from_eigenvalues(degree, values)?;
        spec.eigenvectors = vectors;
        spec.bipartite = bipartite;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-major eigenvectors, entry `x * n + j` is `f_j(x)`.
    pub fn vectors(&self) -> Option<&[f64]> {
        self.eigenvectors.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn has_vectors(&self) -> bool {
        self.eigenvectors.is_some()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartite
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// `f_j(x)`.
    #[inline]
    pub fn vector_entry(&self, j: usize, x: usize) -> Option<f64> {
        self.eigenvectors.as_ref().map(|v| v[x * self.n + j])
    }

    /// The values `f_0(x), ..., f_{n-1}(x)`.
    pub fn vector_row(&self, x: usize) -> Result<&[f64], SpectralError> {
        let v = self
            .eigenvectors
            .as_ref()
            .ok_or(SpectralError::MissingVectors)?;
        Ok(&v[x * self.n..(x + 1) * self.n])
    }

    /// Index of the bipartite eigenvalue `-d`, which is left out of `λ` and of
    /// exceptional counts.
    pub fn trivial_negative_index(&self) -> Option<usize> {
        (self.bipartite && self.n > 1).then_some(self.n - 1)
    }

    /// Nontrivial indices: all `j != 0`, minus the bipartite `-d`.
    pub fn nontrivial(&self) -> impl Iterator<Item = usize> + '_ {
        let skip = self.trivial_negative_index();
        (1..self.n).filter(move |&j| Some(j) != skip)
    }

    pub fn lambda_bound(&self) -> f64 {
        self.nontrivial()
            .map(|j| abs(self.eigenvalues[j]))
            .fold(0.0, f64::max)
    }

    fn check_p(&self, p: u64) -> Result<(), SpectralError> {
        if p as usize + 1 != self.degree || p < 2 {
            return Err(SpectralError::DegreeMismatch {
                p,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// `θ_j` (or `φ_j`, `ψ_j`) for every eigenvalue. Index 0 is `φ_0 = 1/2`.
    pub fn parametrize_thetas(&self, p: u64) -> Result<Vec<Angle>, SpectralError> {
        self.check_p(p)?;
        let two_sqrt_p = 2.0 * sqrt(p as f64);
        let lp = log(p as f64);
        let angles = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &lam)| {
                if j == 0 {
                    return Angle::Above(0.5);
                }
                let u = lam / two_sqrt_p;
                if abs(lam) <= two_sqrt_p + BOUNDARY_TOL {
                    Angle::Real(acos(u.clamp(-1.0, 1.0)))
                } else if lam > 0.0 {
                    Angle::Above(acosh(u) / lp)
                } else {
                    Angle::Below(acosh(-u) / lp)
                }
            })
            .collect();
        Ok(angles)
    }

    /// `φ'_j` for each exceptional nontrivial eigenvalue, in index order.
    pub fn exceptional_params(&self, p: u64) -> Result<Vec<f64>, SpectralError> {
        let angles = self.parametrize_thetas(p)?;
        Ok(self
            .nontrivial()
            .filter_map(|j| angles[j].exceptional())
            .collect())
    }

    pub fn classify(&self, p: u64, tol: f64) -> Result<Classification, SpectralError> {
        self.check_p(p)?;
        let bound = 2.0 * sqrt(p as f64);
        let lambda = self.lambda_bound();
        Ok(Classification {
            is_ramanujan: lambda <= bound + tol,
            lambda_bound: lambda,
            ramanujan_bound: bound,
            bipartite: self.bipartite,
            excluded_trivial_negative: self.trivial_negative_index().is_some(),
            tol,
        })
    }

    /// `M(α) = #{j : φ_j ≥ α} + #{j : ψ_j ≥ α}` over nontrivial exceptional
    /// eigenvalues, for each `α` in the grid.
    pub fn density_curve(&self, p: u64, alphas: &[f64]) -> Result<DensityCurve, SpectralError> {
        let params = self.exceptional_params(p)?;
        if alphas.iter().any(|&a| !(0.0..0.5).contains(&a)) {
            return Err(SpectralError::InvalidInput(
                "density grid must lie in [0, 1/2)".into(),
            ));
        }
        let counts: Vec<usize> = alphas
            .iter()
            .map(|&a| params.iter().filter(|&&v| v >= a).count())
            .collect();
        let ln_n = log(self.n as f64);
        let exponents = counts
            .iter()
            .map(|&m| (m > 0 && self.n > 1).then(|| log(m as f64) / ln_n))
            .collect();
        Ok(DensityCurve {
            alphas: alphas.to_vec(),
            counts,
            exponents,
        })
    }

    /// `I_n = Σ p^{-(1/2 - φ'_j) 2t}` over nontrivial exceptional eigenvalues.
    pub fn i_n_sum(&self, p: u64, t: u32) -> Result<f64, SpectralError> {
        let params = self.exceptional_params(p)?;
        let pf = p as f64;
        Ok(crate::math::sum(
            params
                .iter()
                .map(|&v| pow(pf, -(0.5 - v) * 2.0 * f64::from(t))),
        ))
    }

    /// `max |<f_i, f_j> - δ_ij|` over all pairs.
    pub fn orthonormality_defect(&self) -> Result<f64, SpectralError> {
        let v = self
            .eigenvectors
            .as_ref()
            .ok_or(SpectralError::MissingVectors)?;
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let dot = crate::math::sum((0..n).map(|x| v[x * n + i] * v[x * n + j]));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(abs(dot - target));
            }
        }
        Ok(worst)
    }

    /// `max_x |Σ_j f_j(x)^2 - 1|`.
    pub fn completeness_defect(&self) -> Result<f64, SpectralError> {
        let mut worst = 0.0f64;
        for x in 0..self.n {
            let row = self.vector_row(x)?;
            let s = crate::math::sum(row.iter().map(|f| f * f));
            worst = worst.max(abs(s - 1.0));
        }
        Ok(worst)
    }
}

/// Exceptional-eigenvalue counts `M(α, X)` on a grid of `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCurve {
    pub alphas: Vec<f64>,
    pub counts: Vec<usize>,
    /// `log_n M(α)` where `M(α) > 0`.
    pub exponents: Vec<Option<f64>>,
}
