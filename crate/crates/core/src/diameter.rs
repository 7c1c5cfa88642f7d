//! Almost-diameter and diameter bounds from first-kind Chebyshev polynomials.
//!
//! For an `(n, d, λ)` graph put `b = d/λ + √((d/λ)² - 1)`. Testing the row
//! `x` of `P(A)` with `P(z) = T_ℓ(z/λ)` shows that at most `4n² / b^{2ℓ}`
//! vertices lie further than `ℓ` from `x`; with `ℓ = ½ log_b n + ξ` that is
//! the fraction `4 / b^{2ξ}`. A polynomial has integer degree, so the
//! argument only covers integer `ℓ`. Reports carry both the real-`ξ` form and
//! the integer-degree form the argument proves.

use alloc::vec::Vec;

use crate::cheby::{cheb_scalar, cheb_t, ChebKind};
use crate::graph::Graph;
use crate::math::{floor, log, log_base, pow, sq, sqrt};
use crate::spectral::{SpectralError, Spectrum, RAMANUJAN_TOL};
use crate::Status;

pub const DEFAULT_XI_GRID: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

/// `b = r + √(r² - 1)` for `r = d/λ`; `None` unless `λ < d`.
pub fn expansion_base(d: f64, lambda: f64) -> Option<f64> {
    let r = d / lambda;
    (lambda > 0.0 && r > 1.0).then(|| r + sqrt(r * r - 1.0))
}

/// A test polynomial `z ↦ F_ℓ(z / scale)` for one of the Chebyshev families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledPoly {
    pub kind: ChebKind,
    pub degree: u32,
    pub scale: f64,
    /// Branching factor for the `P`, `Q`, `R` families.
    pub p: u64,
}

impl ScaledPoly {
    /// `T_ℓ(z / λ)`.
    pub fn first_kind(degree: u32, lambda: f64) -> Self {
        ScaledPoly {
            kind: ChebKind::T,
            degree,
            scale: lambda,
            p: 0,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        cheb_scalar(self.kind, self.degree, self.p, z / self.scale)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma31Check {
    pub x: usize,
    /// `(P(λ_0)/n)² 𝒩_x(ℓ(P))`.
    pub lhs: f64,
    /// `W(P, x) = Σ_{j≠0} P(λ_j)² f_j(x)²`, when eigenvectors are available.
    pub middle: Option<f64>,
    /// `max_{j≠0} P(λ_j)²`.
    pub rhs: f64,
    pub status: Status,
}

/// `(P(λ_0)/n)² 𝒩_x(ℓ(P)) <= max_{j≠0} |P(λ_j)|²`.
pub fn lemma31_check(
    g: &Graph,
    spec: &Spectrum,
    poly: &ScaledPoly,
    x: usize,
) -> Result<Lemma31Check, SpectralError> {
    let n = g.n() as f64;
    let lam = spec.eigenvalues();
    let tail = g.distance_tail_count(x, f64::from(poly.degree)) as f64;
    let top = poly.eval(lam[0]) / n;
    let lhs = top * top * tail;
    let rhs = lam[1..]
        .iter()
        .map(|&l| sq(poly.eval(l)))
        .fold(0.0, f64::max);
    let middle = if spec.has_vectors() {
        let f = spec.vector_row(x)?;
        Some(crate::math::sum(
            (1..lam.len()).map(|j| sq(poly.eval(lam[j]) * f[j])),
        ))
    } else {
        None
    };
    Ok(Lemma31Check {
        x,
        lhs,
        middle,
        rhs,
        status: Status::from_bool(lhs <= rhs * (1.0 + 1e-9)),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma32Check {
    pub ell: u32,
    /// `T_ℓ(λ_0/λ)`.
    pub lhs: f64,
    /// `b^ℓ / 2`.
    pub rhs: f64,
    pub status: Status,
}

/// `T_ℓ(r) >= b^ℓ / 2` for `r = λ_0/λ >= 1`.
pub fn lemma32_check(ratio: f64, ell: u32) -> Lemma32Check {
    let b = ratio + sqrt((ratio * ratio - 1.0).max(0.0));
    let lhs = cheb_t(ell, ratio);
    let rhs = pow(b, f64::from(ell)) / 2.0;
    Lemma32Check {
        ell,
        lhs,
        rhs,
        status: if ratio < 1.0 {
            Status::Inapplicable("ratio below 1")
        } else {
            Status::from_bool(lhs >= rhs * (1.0 - 1e-12))
        },
    }
}

/// Distance layer sizes from every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceTable {
    n: usize,
    /// `layers[x][k] = #{y : dist(x, y) = k}`.
    layers: Vec<Vec<usize>>,
}

impl DistanceTable {
    pub fn compute(g: &Graph) -> Self {
        Self::from_layers(
            g.n(),
            (0..g.n())
                .map(|x| g.bfs_distances(x).layer_sizes())
                .collect(),
        )
    }

    pub fn from_layers(n: usize, layers: Vec<Vec<usize>>) -> Self {
        DistanceTable { n, layers }
    }

    /// `𝒩_x(ℓ) = #{y : dist(x, y) > ℓ}`, unreachable vertices included.
    pub fn tail(&self, x: usize, ell: f64) -> usize {
        if ell < 0.0 {
            return self.n;
        }
        let within: usize = self.layers[x].iter().take(floor(ell) as usize + 1).sum();
        self.n - within
    }

    /// `max_x 𝒩_x(ℓ)`.
    pub fn max_tail(&self, ell: f64) -> usize {
        (0..self.layers.len())
            .map(|x| self.tail(x, ell))
            .max()
            .unwrap_or(0)
    }

    /// `max_x #{y : |dist(x, y) - c| > f}`.
    pub fn max_off_center(&self, c: f64, f: f64) -> usize {
        self.layers
            .iter()
            .map(|layer| {
                let reached: usize = layer.iter().sum();
                let near: usize = layer
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| crate::math::abs(k as f64 - c) <= f)
                    .map(|(_, &m)| m)
                    .sum();
                self.n - reached + (reached - near)
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest finite distance, or `None` if some pair is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for layer in &self.layers {
            if layer.iter().sum::<usize>() != self.n {
                return None;
            }
            best = best.max(layer.len() - 1);
        }
        Some(best)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct XiRow {
    pub xi: f64,
    /// `½ log_b n + ξ`.
    pub ell: f64,
    /// `max_x 𝒩_x(ℓ) / n`.
    pub tail_fraction: f64,
    /// `4 / b^{2ξ}`.
    pub bound: f64,
    pub status: Status,
    /// `4n / b^{2⌊ℓ⌋}`, what the degree-`⌊ℓ⌋` polynomial proves.
    pub integer_bound: f64,
    pub integer_status: Status,
    /// Ramanujan form: `max_x 𝒩_x(log_p n + ξ)/n <= 4/p^ξ`.
    pub corollary: Option<CorollaryRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryRow {
    /// `log_p n + ξ`.
    pub ell: f64,
    pub tail_fraction: f64,
    /// `4 / p^ξ`.
    pub bound: f64,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterReport {
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    pub b: Option<f64>,
    pub is_ramanujan: bool,
    /// `-d` left out of `λ` (bipartite graphs).
    pub excluded_trivial_negative: bool,
    pub rows: Vec<XiRow>,
    /// Smallest grid `ξ` with `4 b^{-2ξ} < 1/2`.
    pub xi_star: Option<f64>,
    pub diameter_measured: Option<usize>,
    /// `log_b n + 2ξ*`.
    pub diameter_bound: Option<f64>,
    pub diameter_status: Status,
}

const BIPARTITE: &str = "bipartite: -d is a nontrivial eigenvalue of modulus d";

/// Measured distance tails against the almost-diameter bounds on a grid of `ξ`.
pub fn almost_diameter_report(
    g: &Graph,
    spec: &Spectrum,
    xi_grid: &[f64],
) -> Result<DiameterReport, SpectralError> {
    almost_diameter_report_with(g, spec, xi_grid, &DistanceTable::compute(g))
}

/// As [`almost_diameter_report`], reusing precomputed distances.
pub fn almost_diameter_report_with(
    g: &Graph,
    spec: &Spectrum,
    xi_grid: &[f64],
    table: &DistanceTable,
) -> Result<DiameterReport, SpectralError> {
    let n = g.n();
    let nf = n as f64;
    let d = g.degree();
    let p = g.p();
    let class = spec.classify(p, RAMANUJAN_TOL)?;
    let lambda = class.lambda_bound;
    let b = expansion_base(d as f64, lambda);
    let gate = if class.bipartite {
        Some(BIPARTITE)
    } else if b.is_none() {
        Some("lambda is not below d")
    } else {
        None
    };
    let log_p_n = log_base(nf, p as f64);
    let rows = xi_grid
        .iter()
        .map(|&xi| {
            let (ell, bound, integer_bound) = match b {
                Some(b) => {
                    let ell = 0.5 * log_base(nf, b) + xi;
                    (
                        ell,
                        4.0 / pow(b, 2.0 * xi),
                        4.0 * nf / pow(b, 2.0 * floor(ell)),
                    )
                }
                None => (f64::NAN, f64::INFINITY, f64::INFINITY),
            };
            let tail_fraction = if ell.is_nan() {
                f64::NAN
            } else {
                table.max_tail(ell) as f64 / nf
            };
            let judge = |ok: bool| match gate {
                Some(why) => Status::Inapplicable(why),
                None => Status::from_bool(ok),
            };
            let corollary = class.is_ramanujan.then(|| {
                let ell = log_p_n + xi;
                let tail_fraction = table.max_tail(ell) as f64 / nf;
                let bound = 4.0 / pow(p as f64, xi);
                CorollaryRow {
                    ell,
                    tail_fraction,
                    bound,
                    status: if class.bipartite {
                        Status::Inapplicable(BIPARTITE)
                    } else {
                        Status::from_bool(tail_fraction <= bound)
                    },
                }
            });
            XiRow {
                xi,
                ell,
                tail_fraction,
                bound,
                status: judge(tail_fraction <= bound),
                integer_bound,
                integer_status: judge(tail_fraction <= integer_bound),
                corollary,
            }
        })
        .collect();
    let xi_star = b.and_then(|b| {
        xi_grid
            .iter()
            .copied()
            .filter(|&xi| 4.0 / pow(b, 2.0 * xi) < 0.5)
            .fold(None, |acc: Option<f64>, xi| {
                Some(acc.map_or(xi, |a| a.min(xi)))
            })
    });
    let diameter_measured = table.diameter();
    let diameter_bound = b.zip(xi_star).map(|(b, xi)| log(nf) / log(b) + 2.0 * xi);
    let diameter_status = match (gate, diameter_measured, diameter_bound) {
        (Some(why), ..) => Status::Inapplicable(why),
        (None, Some(m), Some(bound)) => Status::from_bool(m as f64 <= bound),
        (None, None, _) => Status::Inapplicable("disconnected"),
        (None, _, None) => Status::Inapplicable("no grid xi with 4 b^(-2 xi) < 1/2"),
    };
    Ok(DiameterReport {
        n,
        d,
        lambda,
        b,
        is_ramanujan: class.is_ramanujan,
        excluded_trivial_negative: class.excluded_trivial_negative,
        rows,
        xi_star,
        diameter_measured,
        diameter_bound,
        diameter_status,
    })
}

/// `max_x #{y : |dist(x, y) - log_p n| > f} / n` and the Ramanujan bound
/// `4 p^{-f}` it is compared with.
pub fn concentration_readout(g: &Graph, table: &DistanceTable, f: f64) -> (f64, f64) {
    let n = g.n() as f64;
    let c = log_base(n, g.p() as f64);
    (
        table.max_off_center(c, f) as f64 / n,
        4.0 * pow(g.p() as f64, -f),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fixture, Fixture};
    use crate::spectral::{eigendecompose, EigenOptions};

    fn setup(f: Fixture) -> (Graph, Spectrum) {
        let g = fixture(f);
        let s = eigendecompose(&g, &EigenOptions::with_vectors()).unwrap();
        (g, s)
    }

    #[test]
    fn base_for_ramanujan_bound_is_sqrt_p() {
        let b = expansion_base(6.0, 2.0 * sqrt(5.0)).unwrap();
        assert!((b - sqrt(5.0)).abs() < 1e-12);
        assert_eq!(expansion_base(3.0, 3.0), None);
    }

    #[test]
    fn lemma31_small_cases() {
        let (g, s) = setup(Fixture::K4);
        let c = lemma31_check(&g, &s, &ScaledPoly::first_kind(1, 1.0), 0).unwrap();
        assert!(c.status.is_pass());
        let c0 = lemma31_check(&g, &s, &ScaledPoly::first_kind(0, 1.0), 0).unwrap();
        assert!((c0.lhs - 3.0 / 16.0).abs() < 1e-15 && c0.rhs == 1.0);
        let (g, s) = setup(Fixture::Petersen);
        for ell in 0..4 {
            for x in 0..g.n() {
                let c = lemma31_check(&g, &s, &ScaledPoly::first_kind(ell, 2.0), x).unwrap();
                let mid = c.middle.unwrap();
                assert!(c.lhs <= mid + 1e-12 && mid <= c.rhs + 1e-12, "{c:?}");
            }
        }
    }

    #[test]
    fn lemma32_cases() {
        assert!(lemma32_check(1.7, 0).status.is_pass());
        assert!(lemma32_check(1.7, 1).status.is_pass());
        let r = 6.0 / (2.0 * sqrt(5.0));
        let c = lemma32_check(r, 10);
        assert!(c.status.is_pass() && c.lhs > c.rhs);
        assert!(matches!(
            lemma32_check(0.5, 3).status,
            Status::Inapplicable(_)
        ));
    }

    #[test]
    fn distance_table_matches_bfs() {
        let g = fixture(Fixture::Petersen);
        let t = DistanceTable::compute(&g);
        assert_eq!(t.diameter(), Some(2));
        assert_eq!(t.tail(0, 1.0), 6);
        assert_eq!(t.tail(0, 1.5), 6);
        assert_eq!(t.tail(0, 0.5), 9);
        assert_eq!(t.tail(0, 2.0), 0);
        for x in 0..10 {
            for &ell in &[0.0, 0.7, 1.0, 2.3] {
                assert_eq!(t.tail(x, ell), g.distance_tail_count(x, ell));
            }
        }
        // |dist - 1| > 0.5 leaves the source and the six at distance 2
        assert_eq!(t.max_off_center(1.0, 0.5), 7);
    }

    #[test]
    fn petersen_report() {
        let (g, s) = setup(Fixture::Petersen);
        let r = almost_diameter_report(&g, &s, &DEFAULT_XI_GRID).unwrap();
        assert!(r.is_ramanujan);
        assert!(r
            .rows
            .iter()
            .all(|row| row.status.is_pass() && row.integer_status.is_pass()));
        assert!(r
            .rows
            .iter()
            .all(|row| row.corollary.as_ref().unwrap().status.is_pass()));
        assert_eq!(r.xi_star, Some(2.0));
        assert!(r.diameter_status.is_pass());
    }

    #[test]
    fn k4_real_xi_form_fails_at_half() {
        // b = 3 + 2√2, ℓ = ½ log_b 4 + ½ ≈ 0.89 < 1, so all three neighbours
        // count as far: 3/4 > 4/b.
        let (g, s) = setup(Fixture::K4);
        let r = almost_diameter_report(&g, &s, &[0.5, 1.0]).unwrap();
        assert!(r.rows[0].status.is_fail());
        assert!((r.rows[0].tail_fraction - 0.75).abs() < 1e-15);
        assert!(r.rows[0].integer_status.is_pass());
        assert!(r.rows[1].status.is_pass());
    }

    #[test]
    fn bipartite_is_reported_not_judged() {
        let (g, s) = setup(Fixture::Heawood);
        let r = almost_diameter_report(&g, &s, &DEFAULT_XI_GRID).unwrap();
        assert!(r.excluded_trivial_negative);
        assert!(r
            .rows
            .iter()
            .all(|row| matches!(row.status, Status::Inapplicable(_))));
        assert!(r.rows[0].tail_fraction > 0.0);
    }
}
