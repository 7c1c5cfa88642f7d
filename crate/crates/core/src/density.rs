//! Cutoff at `(1 + η) log_p n` from the density of exceptional eigenvalues.
//!
//! On a homogeneous graph `W(Q_t, x)` is the same for every start, so it
//! equals its average `(p^t/n) Σ_{j≠0} R_t(θ_j)²`. Bounding the tempered
//! terms by `(t+1)²` and the exceptional ones through `φ'_j` gives
//!
//! `W <= p^t (t+1)² + 3p² (p^t/n) Σ p^{2tφ'_j}`,
//!
//! and the ℓ² bound turns this into
//! `d_x(t) <= ½ (n p^{-t} (t+1)² + 3p² I_n)^{1/2}`.

use alloc::vec::Vec;

use crate::cheby::r_at;
use crate::graph::Graph;
use crate::math::{ceil, log_base, pow, sq, sqrt, KahanSum};
use crate::mixing::{mixing_profile, MixError, MixingProfile, Starts};
use crate::spectral::{DensityCurve, Spectrum, RAMANUJAN_TOL};
use crate::Status;

pub const DEFAULT_ETA_GRID: [f64; 3] = [0.25, 0.5, 1.0];
pub const DEFAULT_ALPHA_GRID: [f64; 5] = [0.0, 0.1, 0.2, 0.3, 0.4];

const SLACK: f64 = 1e-9;

/// `⌈(1 + η) log_p n⌉`.
pub fn cutoff_time(n: usize, p: u64, eta: f64) -> u32 {
    ceil((1.0 + eta) * log_base(n as f64, p as f64)).max(0.0) as u32
}

/// The terms of the bound at one `t`, from the exceptional parameters alone.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityBound {
    pub t: u32,
    /// `Σ p^{-(1/2 - φ'_j) 2t}`.
    pub i_n: f64,
    /// `p^t (t+1)² + (p^t/n) Σ ((p-1)/p p^{(t+2)φ'} + (2/p) p^{tφ'})²`.
    pub v3_sharp: f64,
    /// `p^t (t+1)² + 3p² (p^t/n) Σ p^{2tφ'}`.
    pub v3: f64,
    /// `n p^{-t} (t+1)²`.
    pub first_term: f64,
    /// `3p² I_n`.
    pub second_term: f64,
    /// `½ (first_term + second_term)^{1/2}`.
    pub bound: f64,
}

impl DensityBound {
    pub fn evaluate(n: usize, p: u64, t: u32, exceptional: &[f64]) -> Self {
        let (nf, pf, tf) = (n as f64, p as f64, f64::from(t));
        let pt = pow(pf, tf);
        let tempered = pt * sq(tf + 1.0);
        let mut i_n = KahanSum::new();
        let mut sharp = KahanSum::new();
        let mut loose = KahanSum::new();
        for &phi in exceptional {
            i_n.add(pow(pf, -(0.5 - phi) * 2.0 * tf));
            sharp.add(sq(
                (pf - 1.0) / pf * pow(pf, (tf + 2.0) * phi) + 2.0 / pf * pow(pf, tf * phi)
            ));
            loose.add(pow(pf, 2.0 * tf * phi));
        }
        let i_n = i_n.value();
        let first_term = nf / pt * sq(tf + 1.0);
        let second_term = 3.0 * pf * pf * i_n;
        DensityBound {
            t,
            i_n,
            v3_sharp: tempered + pt / nf * sharp.value(),
            v3: tempered + 3.0 * pf * pf * pt / nf * loose.value(),
            first_term,
            second_term,
            bound: 0.5 * sqrt(first_term + second_term),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityRow {
    pub eta: f64,
    pub t: u32,
    /// Same value as the mixing profile at `t`.
    pub d_max: f64,
    pub argmax: usize,
    /// `max_x W(Q_t, x)` over the profile's starts, from the counts.
    pub w_max: f64,
    /// `(p^t/n) Σ_{j≠0} R_t(θ_j)²`, the start-averaged variance.
    pub v2: f64,
    pub terms: DensityBound,
    /// `d_max <= ½ (n p^{-t}(t+1)² + 3p² I_n)^{1/2}`.
    pub status: Status,
    /// Every link of `4d² <= nW/N² <= nv2/N² <= nv3/N² <= 4 bound²`.
    pub chain_status: Status,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityCutoffReport {
    pub n: usize,
    pub p: u64,
    pub lambda: f64,
    pub is_ramanujan: bool,
    pub bipartite: bool,
    pub homogeneous: bool,
    /// `max φ'_j` over nontrivial exceptional eigenvalues.
    pub max_exceptional: Option<f64>,
    /// `½ - max φ'_j`, or `½` with no exceptional eigenvalues.
    pub delta1: f64,
    pub density: DensityCurve,
    pub d_max_is_lower_bound: bool,
    pub rows: Vec<DensityRow>,
}

/// `t` values needed for a grid of `η`, as an inclusive range.
pub fn cutoff_range(n: usize, p: u64, eta_grid: &[f64]) -> (u32, u32) {
    let ts = eta_grid.iter().map(|&e| cutoff_time(n, p, e));
    let lo = ts.clone().min().unwrap_or(0);
    (lo, ts.max().unwrap_or(0))
}

/// Measured `d_max` at `⌈(1 + η) log_p n⌉` against the density bound.
pub fn density_cutoff_report(
    g: &Graph,
    spec: &Spectrum,
    eta_grid: &[f64],
    starts: Starts,
) -> Result<DensityCutoffReport, MixError> {
    let (lo, hi) = cutoff_range(g.n(), g.p(), eta_grid);
    let profile = mixing_profile(g, lo, hi, starts, true)?;
    density_cutoff_report_with(g, spec, eta_grid, &profile)
}

/// As [`density_cutoff_report`], from a profile that covers every `t` and
/// kept its per-start detail.
pub fn density_cutoff_report_with(
    g: &Graph,
    spec: &Spectrum,
    eta_grid: &[f64],
    profile: &MixingProfile,
) -> Result<DensityCutoffReport, MixError> {
    let n = g.n();
    let p = g.p();
    let class = spec.classify(p, RAMANUJAN_TOL)?;
    let exceptional = spec.exceptional_params(p)?;
    let max_exceptional = exceptional.iter().copied().reduce(f64::max);
    let angles = spec.parametrize_thetas(p)?;
    let homogeneous = g.is_homogeneous();
    let gate = if class.bipartite {
        Some("bipartite: the walk is periodic")
    } else if class.lambda_bound >= g.degree() as f64 {
        Some("not an expander")
    } else {
        None
    };
    let detail = profile.per_start.as_ref();
    let rows = eta_grid
        .iter()
        .map(|&eta| {
            let t = cutoff_time(n, p, eta);
            let need = MixError::RangeTooShort {
                need: t,
                t_max: profile.t_max,
            };
            let rec = profile.record(t).ok_or(need.clone())?;
            let k = (t - profile.t_min) as usize;
            let w_max = match detail {
                Some(rows) => rows.iter().map(|r| r[k].w).fold(0.0, f64::max),
                None => sq(2.0 * rec.l2_bound * rec.n_t as f64) / n as f64,
            };
            let pt = pow(p as f64, f64::from(t));
            let r2: KahanSum = angles[1..].iter().map(|&a| sq(r_at(t, p, a))).collect();
            let v2 = pt / n as f64 * r2.value();
            let terms = DensityBound::evaluate(n, p, t, &exceptional);
            let scale = n as f64 / sq(rec.n_t as f64);
            let le = |a: f64, b: f64| a <= b * (1.0 + SLACK) + SLACK;
            let chain = [
                le(4.0 * sq(rec.d_max), scale * w_max),
                !homogeneous || le(w_max, v2),
                le(v2, terms.v3_sharp),
                le(terms.v3_sharp, terms.v3),
                le(scale * terms.v3, 4.0 * sq(terms.bound)),
            ];
            let judge = |ok: bool| match gate {
                Some(why) => Status::Inapplicable(why),
                None if !homogeneous => Status::Inapplicable("not homogeneous"),
                None => Status::from_bool(ok),
            };
            Ok(DensityRow {
                eta,
                t,
                d_max: rec.d_max,
                argmax: rec.argmax,
                w_max,
                v2,
                status: judge(rec.d_max <= terms.bound * (1.0 + SLACK)),
                chain_status: judge(chain.iter().all(|&c| c)),
                terms,
            })
        })
        .collect::<Result<Vec<_>, MixError>>()?;
    Ok(DensityCutoffReport {
        n,
        p,
        lambda: class.lambda_bound,
        is_ramanujan: class.is_ramanujan,
        bipartite: class.bipartite,
        homogeneous,
        max_exceptional,
        delta1: 0.5 - max_exceptional.unwrap_or(0.0),
        density: spec.density_curve(p, &DEFAULT_ALPHA_GRID)?,
        d_max_is_lower_bound: profile.d_max_is_lower_bound,
        rows,
    })
}
