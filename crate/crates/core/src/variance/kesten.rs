//! Gauss–Legendre quadrature against the Kesten (Plancherel) measure
//!
//! `dν_p = 2(p+1) sin²θ / (π [(√p + 1/√p)² - 4 cos²θ]) dθ` on `[0, π]`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::{abs, cos, sin, KahanSum};

pub const DEFAULT_NODES: usize = 4096;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `m`-point rule; nodes are the roots of `P_m`, found by Newton's method
    /// from the usual cosine guesses.
    pub fn new(m: usize) -> Self {
        assert!(m > 0, "need at least one node");
        let mut nodes = alloc::vec![0.0; m];
        let mut weights = alloc::vec![0.0; m];
        let mf = m as f64;
        for i in 0..m.div_ceil(2) {
            let mut z = cos(PI * (i as f64 + 0.75) / (mf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(m, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if abs(dz) <= 1e-16 * abs(z).max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre(m, z);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[m - 1 - i] = z;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(P_m(z), P_m'(z))` by the Bonnet recurrence.
fn legendre(m: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let mf = m as f64;
    (p1, mf * (z * p1 - p0) / (z * z - 1.0))
}

/// Density of `ν_p` with respect to `dθ`.
pub fn kesten_density(p: u64, theta: f64) -> f64 {
    let pf = p as f64;
    let s = crate::math::sqrt(pf) + 1.0 / crate::math::sqrt(pf);
    let c = cos(theta);
    let sn = sin(theta);
    2.0 * (pf + 1.0) * sn * sn / (PI * (s * s - 4.0 * c * c))
}

/// Quadrature nodes on `[0, π]` with the Kesten density folded into the
/// weights.
#[derive(Clone, Debug)]
pub struct KestenQuadrature {
    pub p: u64,
    pub thetas: Vec<f64>,
    pub weights: Vec<f64>,
}

impl KestenQuadrature {
    pub fn new(p: u64, nodes: usize) -> Self {
        Self::from_rule(p, &GaussLegendre::new(nodes))
    }

    /// Reuses a precomputed rule (it does not depend on `p`).
    pub fn from_rule(p: u64, rule: &GaussLegendre) -> Self {
        assert!(p >= 2, "the Kesten measure needs p >= 2");
        let (thetas, weights) = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| {
                let theta = 0.5 * PI * (x + 1.0);
                (theta, 0.5 * PI * w * kesten_density(p, theta))
            })
            .unzip();
        KestenQuadrature { p, thetas, weights }
    }

    /// `∫_0^π f(θ) dν_p(θ)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = KahanSum::new();
        for (&theta, &w) in self.thetas.iter().zip(&self.weights) {
            acc.add(w * f(theta));
        }
        acc.value()
    }

    /// `ν_p([0, π])`, which should be 1.
    pub fn total_mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }
}

/// `∫ f dν_p` with the default node count.
pub fn kesten_integral(p: u64, f: impl FnMut(f64) -> f64) -> f64 {
    KestenQuadrature::new(p, DEFAULT_NODES).integrate(f)
}
