//! Variance of walk-count rows around their mean, computed from the counts
//! and from the eigen-expansion, and the bounds the mixing argument needs.
//!
//! For a polynomial `P`, `W(P, x) = Σ_y (P(A)(x, y) - P(λ_0)/n)²`, which the
//! spectral theorem turns into `Σ_{j≠0} P(λ_j)² f_j(x)²`. For `P = Q_t` the
//! mean is `Q_t(d)/n = N(t)/n`. Averaging over `x` gives
//! `W_2(t) = (1/n) Σ_{j≠0} Q_t(λ_j)² = p^t μ_X(R_t²)` with
//! `μ_X = (1/n) Σ_{j≠0} δ_{θ_j}`.

mod kesten;

pub use kesten::{kesten_density, kesten_integral, GaussLegendre, KestenQuadrature, DEFAULT_NODES};

use alloc::vec::Vec;

use crate::cheby::{cheb_u, r_at, walk_total, WalkError};
use crate::graph::Graph;
use crate::math::{floor, log_base, pow, sq, KahanSum};
use crate::mixing::{girth_ratio, start_stats, MixError};
use crate::spectral::{Angle, SpectralError, Spectrum, RAMANUJAN_TOL};
use crate::Status;

/// `W(Q_t, x) = Σ_y (K_t(x, y) - N(t)/n)²` from the exact counts.
pub fn variance_direct(g: &Graph, x: usize, t: u32) -> Result<f64, WalkError> {
    match start_stats(g, x, t, t) {
        Ok(s) => Ok(s[0].w),
        Err(MixError::Walk(e)) => Err(e),
        Err(e) => unreachable!("single-step range is valid: {e}"),
    }
}

/// `Q_t(λ_j)` for every `j`, through `p^{t/2} R_t(θ_j)`.
fn q_values(spec: &Spectrum, p: u64, t: u32) -> Result<Vec<f64>, SpectralError> {
    let scale = pow(p as f64, f64::from(t) / 2.0);
    Ok(spec
        .parametrize_thetas(p)?
        .into_iter()
        .map(|a| scale * r_at(t, p, a))
        .collect())
}

/// `W(Q_t, x) = Σ_{j≠0} Q_t(λ_j)² f_j(x)²`.
pub fn variance_spectral_at(
    spec: &Spectrum,
    p: u64,
    t: u32,
    x: usize,
) -> Result<f64, SpectralError> {
    let q = q_values(spec, p, t)?;
    let f = spec.vector_row(x)?;
    Ok(crate::math::sum((1..spec.n()).map(|j| {
        let v = q[j] * f[j];
        v * v
    })))
}

/// `W(Q_t, x)` for every `x`.
pub fn variance_spectral_all(spec: &Spectrum, p: u64, t: u32) -> Result<Vec<f64>, SpectralError> {
    let q = q_values(spec, p, t)?;
    (0..spec.n())
        .map(|x| {
            let f = spec.vector_row(x)?;
            Ok(crate::math::sum((1..spec.n()).map(|j| {
                let v = q[j] * f[j];
                v * v
            })))
        })
        .collect()
}

/// `μ_X(R_t²) = (1/n) Σ_{j≠0} R_t(θ_j)²`.
pub fn mu_r2(spec: &Spectrum, p: u64, t: u32) -> Result<f64, SpectralError> {
    let angles = spec.parametrize_thetas(p)?;
    let s: KahanSum = angles[1..].iter().map(|&a| sq(r_at(t, p, a))).collect();
    Ok(s.value() / spec.n() as f64)
}

/// `W_2(t) = p^t μ_X(R_t²)`, from eigenvalues alone.
pub fn w2_spectral(spec: &Spectrum, p: u64, t: u32) -> Result<f64, SpectralError> {
    Ok(pow(p as f64, f64::from(t)) * mu_r2(spec, p, t)?)
}

/// `W_2(t) = (1/n) Σ_x W(Q_t, x)` from the exact counts.
pub fn w2_direct(g: &Graph, t: u32) -> Result<f64, WalkError> {
    let mut acc = KahanSum::new();
    for x in 0..g.n() {
        acc.add(variance_direct(g, x, t)?);
    }
    Ok(acc.value() / g.n() as f64)
}

/// Why the Ramanujan-only lemmas do not apply, if they don't.
fn ramanujan_gate(spec: &Spectrum, p: u64) -> Result<Option<&'static str>, SpectralError> {
    let class = spec.classify(p, RAMANUJAN_TOL)?;
    Ok(if class.bipartite {
        Some("bipartite: -d has no real angle")
    } else if !class.is_ramanujan {
        Some("not Ramanujan")
    } else if spec
        .parametrize_thetas(p)?
        .iter()
        .skip(1)
        .any(|a| !matches!(a, Angle::Real(_)))
    {
        Some("exceptional eigenvalues present")
    } else {
        None
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma42Check {
    pub ell: u32,
    /// `max_x Σ_{j≠0} U_ℓ(cos θ_j)² f_j(x)²`.
    pub value: f64,
    pub worst_x: usize,
    /// `p/(p-1)`, the sharper constant the proof actually reaches.
    pub sharper_bound: f64,
    pub within_sharper: bool,
    pub status: Status,
}

/// `max_x Σ_{j≠0} U_ℓ(cos θ_j)² f_j(x)² <= 2` for `ℓ <= g/5` on
/// non-bipartite Ramanujan graphs.
pub fn check_lemma42(g: &Graph, spec: &Spectrum, ell: u32) -> Result<Lemma42Check, SpectralError> {
    let p = g.p();
    let mut check = Lemma42Check {
        ell,
        value: f64::NAN,
        worst_x: 0,
        sharper_bound: p as f64 / (p as f64 - 1.0),
        within_sharper: false,
        status: Status::Pass,
    };
    if let Some(why) = ramanujan_gate(spec, p)? {
        check.status = Status::Inapplicable(why);
        return Ok(check);
    }
    if g.girth().is_some_and(|girth| 5 * ell as usize > girth) {
        check.status = Status::Inapplicable("ell exceeds girth/5");
        return Ok(check);
    }
    let angles = spec.parametrize_thetas(p)?;
    let u: Vec<f64> = angles
        .iter()
        .map(|&a| cheb_u(ell, a.chebyshev_arg(p)))
        .collect();
    let (mut best, mut worst_x) = (f64::NEG_INFINITY, 0);
    for x in 0..spec.n() {
        let f = spec.vector_row(x)?;
        let s = crate::math::sum((1..spec.n()).map(|j| sq(u[j] * f[j])));
        if s > best {
            best = s;
            worst_x = x;
        }
    }
    check.value = best;
    check.worst_x = worst_x;
    check.within_sharper = best <= check.sharper_bound + 1e-9;
    check.status = Status::from_bool(best <= 2.0 + 1e-9);
    Ok(check)
}

/// `p^t (t+1)²`.
pub fn last5_bound(p: u64, t: u32) -> f64 {
    let tf = f64::from(t);
    pow(p as f64, tf) * (tf + 1.0) * (tf + 1.0)
}

/// `12 (10/δ + 1)² p^t`.
pub fn lemma44_bound(p: u64, t: u32, delta: f64) -> f64 {
    12.0 * sq(10.0 / delta + 1.0) * pow(p as f64, f64::from(t))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma44Check {
    pub t: u32,
    pub delta: f64,
    /// `max_x W(Q_t, x)` from the exact counts.
    pub w_max: f64,
    pub worst_x: usize,
    pub bound: f64,
    pub status: Status,
    pub bound_last5: f64,
    pub status_last5: Status,
}

/// `max_x W(Q_t, x)` against `12(10/δ+1)² p^t` (for
/// `log_p n <= t <= 2 log_p n`) and against `p^t (t+1)²` (for
/// `t <= 2 log_p n`), on non-bipartite Ramanujan graphs.
pub fn check_lemma44(g: &Graph, spec: &Spectrum, t: u32) -> Result<Lemma44Check, MixError> {
    let p = g.p();
    let n = g.n();
    let delta = girth_ratio(g).unwrap_or(f64::INFINITY);
    let log_n = log_base(n as f64, p as f64);
    let mut check = Lemma44Check {
        t,
        delta,
        w_max: f64::NAN,
        worst_x: 0,
        bound: lemma44_bound(p, t, delta),
        status: Status::Pass,
        bound_last5: last5_bound(p, t),
        status_last5: Status::Pass,
    };
    if let Some(why) = ramanujan_gate(spec, p)? {
        check.status = Status::Inapplicable(why);
        check.status_last5 = Status::Inapplicable(why);
        return Ok(check);
    }
    let tf = f64::from(t);
    let (mut best, mut worst_x) = (f64::NEG_INFINITY, 0);
    for x in 0..n {
        let w = start_stats(g, x, t, t)?[0].w;
        if w > best {
            best = w;
            worst_x = x;
        }
    }
    check.w_max = best;
    check.worst_x = worst_x;
    check.status = if tf < log_n || tf > 2.0 * log_n {
        Status::Inapplicable("t outside [log_p n, 2 log_p n]")
    } else {
        Status::from_bool(best <= check.bound * (1.0 + 1e-9))
    };
    check.status_last5 = if tf > 2.0 * log_n {
        Status::Inapplicable("t beyond 2 log_p n")
    } else {
        Status::from_bool(best <= check.bound_last5 * (1.0 + 1e-9))
    };
    Ok(check)
}

/// One line of the `W_2(t) ~ N(t)` table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureRow {
    pub t: u32,
    pub w2: f64,
    pub n_t: u64,
    /// `W_2(t) / N(t)`.
    pub ratio: f64,
    pub mu_r2: f64,
    /// `ν_p(R_t²) = (p+1)/p`.
    pub kesten_r2: f64,
    /// `Σ_{j≠0} Q_t(λ_j)²` without the `1/n`, i.e. `n W_2(t)`.
    pub w2_unnormalized: f64,
    /// `p (t+1)² / (p+1)`, the ceiling on `ratio` implied by `p^t (t+1)²`.
    pub ratio_envelope: f64,
}

/// Rows for `t_min..=t_max`; empirical only.
pub fn conjecture_report(
    spec: &Spectrum,
    p: u64,
    t_min: u32,
    t_max: u32,
) -> Result<Vec<ConjectureRow>, SpectralError> {
    let pf = p as f64;
    (t_min.max(1)..=t_max)
        .map(|t| {
            let mu = mu_r2(spec, p, t)?;
            let w2 = pow(pf, f64::from(t)) * mu;
            let n_t = walk_total(p, t)
                .ok_or_else(|| SpectralError::InvalidInput(alloc::format!("N({t}) overflows")))?;
            let tf = f64::from(t);
            Ok(ConjectureRow {
                t,
                w2,
                n_t,
                ratio: w2 / n_t as f64,
                mu_r2: mu,
                kesten_r2: (pf + 1.0) / pf,
                w2_unnormalized: w2 * spec.n() as f64,
                ratio_envelope: pf * (tf + 1.0) * (tf + 1.0) / (pf + 1.0),
            })
        })
        .collect()
}

/// `⌊2 log_p n⌋`.
pub fn two_log_range(n: usize, p: u64) -> u32 {
    floor(2.0 * log_base(n as f64, p as f64)) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fixture, Fixture};
    use crate::spectral::{eigendecompose, EigenOptions};

    fn spec(f: Fixture) -> (Graph, Spectrum) {
        let g = fixture(f);
        let s = eigendecompose(&g, &EigenOptions::with_vectors()).unwrap();
        (g, s)
    }

    #[test]
    fn k4_variance_both_routes() {
        let (g, s) = spec(Fixture::K4);
        // row (0,2,2,2), mean N/n = 6/4
        assert_eq!(variance_direct(&g, 0, 2).unwrap(), 3.0);
        assert!((variance_spectral_at(&s, 2, 2, 0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn routes_agree_on_fixtures() {
        for f in Fixture::ALL {
            let (g, s) = spec(f);
            for t in 1..=12 {
                let spectral = variance_spectral_all(&s, 2, t).unwrap();
                for (x, &ws) in spectral.iter().enumerate() {
                    let wd = variance_direct(&g, x, t).unwrap();
                    assert!((wd - ws).abs() <= 1e-8 * wd.max(1.0), "{f} x={x} t={t}");
                }
                let w2 = w2_direct(&g, t).unwrap();
                let w2s = w2_spectral(&s, 2, t).unwrap();
                assert!((w2 - w2s).abs() <= 1e-8 * w2.max(1.0));
            }
        }
    }

    #[test]
    fn first_step_trace_identity() {
        for f in [Fixture::Petersen, Fixture::K4] {
            let (g, s) = spec(f);
            let d = g.degree() as f64;
            let n = g.n() as f64;
            let w2 = w2_spectral(&s, 2, 1).unwrap();
            assert!((w2 - (d - d * d / n)).abs() < 1e-12);
            let rows = conjecture_report(&s, 2, 1, 3).unwrap();
            assert!((rows[0].ratio - (1.0 - d / n)).abs() < 1e-12);
            assert_eq!(rows[0].n_t, 3);
        }
    }

    #[test]
    fn lemma42_on_small_fixtures() {
        let (g, s) = spec(Fixture::Petersen);
        let c0 = check_lemma42(&g, &s, 0).unwrap();
        assert!(c0.status.is_pass() && c0.value <= 1.0 + 1e-12);
        let c1 = check_lemma42(&g, &s, 1).unwrap();
        assert!(c1.status.is_pass(), "{c1:?}");
        assert!(matches!(
            check_lemma42(&g, &s, 2).unwrap().status,
            Status::Inapplicable(_)
        ));
        let (h, sh) = spec(Fixture::Heawood);
        assert!(matches!(
            check_lemma42(&h, &sh, 1).unwrap().status,
            Status::Inapplicable(_)
        ));
    }

    #[test]
    fn lemma44_gating() {
        let (g, s) = spec(Fixture::Petersen);
        // log_2 10 = 3.32, so t = 4..=6 is in range
        let c = check_lemma44(&g, &s, 5).unwrap();
        assert!(c.status.is_pass() && c.status_last5.is_pass(), "{c:?}");
        let c = check_lemma44(&g, &s, 2).unwrap();
        assert!(matches!(c.status, Status::Inapplicable(_)));
        assert!(c.status_last5.is_pass());
    }

    #[test]
    fn bounds() {
        assert_eq!(last5_bound(2, 3), 128.0);
        assert!((lemma44_bound(5, 2, 10.0) - 12.0 * 4.0 * 25.0).abs() < 1e-12);
        assert_eq!(two_log_range(660, 5), 8);
    }
}
