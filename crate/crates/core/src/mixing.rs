//! Total-variation distance of the non-backtracking walk from uniform.
//!
//! With `N = N(t)` and `K = K_t(x, ·)`, every quantity is computed from the
//! integer differences `nK(y) - N`:
//!
//! * `d_x(t) = Σ|nK - N| / (2Nn)`, exact up to the final division;
//! * `‖P^t_x - U‖² = Σ(nK - N)² / (N²n²)`;
//! * `W(Q_t, x) = Σ(K - N/n)² = Σ(nK - N)² / n²`.

use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cheby::{max_safe_t, NbWalk, WalkError};
use crate::graph::Graph;
use crate::math::{ceil, log_base, sqrt, KahanSum};
use crate::spectral::{SpectralError, Spectrum, RAMANUJAN_TOL};
use crate::variance::variance_spectral_at;
use crate::Status;

/// Starts sampled for `d_mean`/`d2` on large graphs.
pub const DEFAULT_SAMPLE: usize = 64;
/// Graphs up to this size always use every start.
pub const SAMPLE_THRESHOLD: usize = 2048;

#[derive(Clone, Debug, PartialEq)]
pub enum MixError {
    Walk(WalkError),
    Spectral(SpectralError),
    EmptyRange {
        t_min: u32,
        t_max: u32,
    },
    /// No `t` in the profile has `d(t) <= eta`.
    NotReached {
        eta: f64,
        t_max: u32,
    },
    /// The profile does not reach the length a check needs.
    RangeTooShort {
        need: u32,
        t_max: u32,
    },
}

impl fmt::Display for MixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixError::Walk(e) => write!(f, "{e}"),
            MixError::Spectral(e) => write!(f, "{e}"),
            MixError::EmptyRange { t_min, t_max } => {
                write!(f, "empty time range [{t_min}, {t_max}]")
            }
            MixError::NotReached { eta, t_max } => write!(
                f,
                "d(t) stays above {eta} up to t = {t_max}; try a larger --t-max"
            ),
            MixError::RangeTooShort { need, t_max } => {
                write!(f, "profile ends at t = {t_max} but t = {need} is needed")
            }
        }
    }
}

impl core::error::Error for MixError {}

impl From<WalkError> for MixError {
    fn from(e: WalkError) -> Self {
        MixError::Walk(e)
    }
}

impl From<SpectralError> for MixError {
    fn from(e: SpectralError) -> Self {
        MixError::Spectral(e)
    }
}

/// Distances of one row `K_t(x, ·)` from uniform.
#[derive(Clone, Debug, PartialEq)]
pub struct StartStats {
    pub source: usize,
    pub t: u32,
    /// `Σ_y |n K(y) - N|`; `d_x = tv_numer / (2Nn)`.
    pub tv_numer: u128,
    pub tv: f64,
    /// `‖P^t_x - U‖₂²`.
    pub l2: f64,
    /// `W(Q_t, x) = Σ_y (K(y) - N/n)²`.
    pub w: f64,
}

/// Distances of the row `counts` (summing to `total`) from uniform.
pub fn row_stats(source: usize, t: u32, counts: &[u64], total: u64) -> StartStats {
    let n = counts.len() as i128;
    let big_n = total as i128;
    let mut abs_sum: u128 = 0;
    let mut sq = KahanSum::new();
    for &c in counts {
        let diff = n * c as i128 - big_n;
        abs_sum += diff.unsigned_abs();
        let df = diff as f64;
        sq.add(df * df);
    }
    let nf = n as f64;
    let nt = total as f64;
    StartStats {
        source,
        t,
        tv_numer: abs_sum,
        tv: abs_sum as f64 / (2.0 * nt * nf),
        l2: sq.value() / (nt * nt * nf * nf),
        w: sq.value() / (nf * nf),
    }
}

/// `d_x(t) = ½ Σ_y |K(y)/N - 1/n|` of one walk row.
pub fn tv_from_row(row: &crate::cheby::WalkRow) -> f64 {
    row_stats(row.source(), row.t(), row.counts(), row.total()).tv
}

/// Stats for `t_min..=t_max` from start `x`.
pub fn start_stats(
    g: &Graph,
    x: usize,
    t_min: u32,
    t_max: u32,
) -> Result<Vec<StartStats>, MixError> {
    check_range(g, t_min, t_max)?;
    let mut walk = NbWalk::new(g, x)?;
    let mut out = Vec::with_capacity((t_max - t_min + 1) as usize);
    walk.advance_to(t_min)?;
    loop {
        out.push(row_stats(x, walk.t(), walk.counts(), walk.total()));
        if walk.t() == t_max {
            return Ok(out);
        }
        walk.advance()?;
    }
}

fn check_range(g: &Graph, t_min: u32, t_max: u32) -> Result<(), MixError> {
    if t_min > t_max {
        return Err(MixError::EmptyRange { t_min, t_max });
    }
    let safe = max_safe_t(g.p());
    if t_max > safe {
        return Err(WalkError::Overflow {
            t: t_max,
            max_safe_t: safe,
        }
        .into());
    }
    Ok(())
}

/// Which start vertices a profile looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Starts {
    All,
    /// A seeded uniform sample of `count` starts, used only when
    /// `n > SAMPLE_THRESHOLD`; smaller graphs use every start.
    Sample {
        count: usize,
        seed: u64,
    },
}

impl Default for Starts {
    fn default() -> Self {
        Starts::Sample {
            count: DEFAULT_SAMPLE,
            seed: 0,
        }
    }
}

impl Starts {
    /// Sorted start vertices, and whether they are a proper sample.
    pub fn resolve(self, n: usize) -> (Vec<usize>, bool) {
        match self {
            Starts::Sample { count, seed } if n > SAMPLE_THRESHOLD && count < n => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut v = rand::seq::index::sample(&mut rng, n, count).into_vec();
                v.sort_unstable();
                (v, true)
            }
            _ => ((0..n).collect(), false),
        }
    }
}

/// Summary over starts at one `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixingRecord {
    pub t: u32,
    pub d_max: f64,
    /// A start attaining `d_max` (the smallest such index).
    pub argmax: usize,
    /// `Σ_y |nK - N|` at `argmax`, so `d_max = d_max_numer / (2Nn)` exactly.
    pub d_max_numer: u128,
    pub d_mean: f64,
    /// `(1/#starts) Σ_x ‖P^t_x - U‖²`.
    pub d2: f64,
    /// Average of `W(Q_t, x)` over the starts, i.e. `W_2(t)` for all starts.
    pub w2: f64,
    pub n_t: u64,
    /// `max(0, 1 - N(t)/n)`.
    pub lower_bound: f64,
    /// `max_x ½ (n W(Q_t, x))^{1/2} / N(t)`, the ℓ² bound on `d_max`.
    pub l2_bound: f64,
}

impl MixingRecord {
    /// Exact check of `d(t) >= 1 - N(t)/n`; `None` when `N(t) > n`.
    pub fn lowercut_holds(&self, n: usize) -> Option<bool> {
        let (n, big_n) = (n as u128, u128::from(self.n_t));
        (big_n <= n).then(|| self.d_max_numer >= 2 * big_n * (n - big_n))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingProfile {
    pub n: usize,
    pub p: u64,
    pub t_min: u32,
    pub t_max: u32,
    pub records: Vec<MixingRecord>,
    pub starts: Vec<usize>,
    /// `d_max` comes from a sample of starts and only bounds `d(t)` from below.
    pub d_max_is_lower_bound: bool,
    /// The graph is bipartite, so the walk is periodic and `d(t) >= 1/2`.
    pub bipartite_warning: bool,
    /// `per_start[i][k]` is start `starts[i]` at `t_min + k`, when kept.
    pub per_start: Option<Vec<Vec<StartStats>>>,
}

impl MixingProfile {
    /// Assembles a profile from per-start stats over `t_min..=t_max`, given
    /// in the order of `starts`.
    pub fn from_stats(
        g: &Graph,
        t_min: u32,
        t_max: u32,
        starts: Vec<usize>,
        sampled: bool,
        per_start: Vec<Vec<StartStats>>,
        keep_detail: bool,
    ) -> Self {
        let n = g.n();
        let p = g.p();
        let len = (t_max - t_min + 1) as usize;
        let count = per_start.len() as f64;
        let records = (0..len)
            .map(|k| {
                let mut best: Option<&StartStats> = None;
                let (mut mean, mut d2, mut w2) =
                    (KahanSum::new(), KahanSum::new(), KahanSum::new());
                let mut l2_bound = 0.0f64;
                for rows in &per_start {
                    let s = &rows[k];
                    if best.is_none_or(|b| s.tv_numer > b.tv_numer) {
                        best = Some(s);
                    }
                    mean.add(s.tv);
                    d2.add(s.l2);
                    w2.add(s.w);
                    l2_bound = l2_bound.max(0.5 * sqrt(n as f64 * s.l2));
                }
                let best = best.expect("at least one start");
                let n_t = crate::cheby::walk_total(p, best.t).expect("range is overflow-safe");
                MixingRecord {
                    t: best.t,
                    d_max: best.tv,
                    argmax: best.source,
                    d_max_numer: best.tv_numer,
                    d_mean: mean.value() / count,
                    d2: d2.value() / count,
                    w2: w2.value() / count,
                    n_t,
                    lower_bound: (1.0 - n_t as f64 / n as f64).max(0.0),
                    l2_bound,
                }
            })
            .collect();
        MixingProfile {
            n,
            p,
            t_min,
            t_max,
            records,
            starts,
            d_max_is_lower_bound: sampled,
            bipartite_warning: g.is_bipartite(),
            per_start: keep_detail.then_some(per_start),
        }
    }

    pub fn record(&self, t: u32) -> Option<&MixingRecord> {
        t.checked_sub(self.t_min)
            .and_then(|k| self.records.get(k as usize))
    }
}

/// Profile over `t_min..=t_max`, one start at a time.
pub fn mixing_profile(
    g: &Graph,
    t_min: u32,
    t_max: u32,
    starts: Starts,
    keep_detail: bool,
) -> Result<MixingProfile, MixError> {
    check_range(g, t_min, t_max)?;
    let (starts, sampled) = starts.resolve(g.n());
    let per_start = starts
        .iter()
        .map(|&x| start_stats(g, x, t_min, t_max))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MixingProfile::from_stats(
        g,
        t_min,
        t_max,
        starts,
        sampled,
        per_start,
        keep_detail,
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixResult {
    pub eta: f64,
    pub t_mix: u32,
    pub d_at_t_mix: f64,
    /// `t_mix` equals the start of the profile, which was above 0, so the
    /// true mixing time may be smaller.
    pub censored_below: bool,
    /// Inherited from a sampled profile: `t_mix` is then a lower bound.
    pub sampled: bool,
}

/// Smallest `t` in the profile with `d_max(t) <= eta`.
pub fn t_mix(profile: &MixingProfile, eta: f64) -> Result<MixResult, MixError> {
    let rec = profile
        .records
        .iter()
        .find(|r| r.d_max <= eta)
        .ok_or(MixError::NotReached {
            eta,
            t_max: profile.t_max,
        })?;
    Ok(MixResult {
        eta,
        t_mix: rec.t,
        d_at_t_mix: rec.d_max,
        censored_below: rec.t == profile.t_min && rec.t > 0,
        sampled: profile.d_max_is_lower_bound,
    })
}

/// `log_p n + 2 log_p ε^{-1} + 2 log_p(2 + 20/δ)`.
pub fn theorem1_bound(n: usize, p: u64, eps: f64, delta: f64) -> f64 {
    let pf = p as f64;
    log_base(n as f64, pf) + 2.0 * log_base(1.0 / eps, pf) + 2.0 * log_base(2.0 + 20.0 / delta, pf)
}

/// `2 (1 + 10/δ) (n / p^t)^{1/2}`, the bound on `d_x(t)` for
/// `log_p n <= t <= 2 log_p n` on Ramanujan graphs of girth `>= δ log_p n`.
pub fn theorem1_envelope(n: usize, p: u64, delta: f64, t: u32) -> f64 {
    2.0 * (1.0 + 10.0 / delta) * sqrt(n as f64 / crate::math::pow(p as f64, f64::from(t)))
}

/// Girth ratio `δ = g / log_p n`.
pub fn girth_ratio(g: &Graph) -> Option<f64> {
    let girth = g.girth()?;
    Some(girth as f64 / log_base(g.n() as f64, g.p() as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem1Check {
    pub eps: f64,
    pub delta: f64,
    pub bound: f64,
    pub bound_ceil: u32,
    pub t_mix_observed: Option<u32>,
    pub d_at_bound: Option<f64>,
    pub status: Status,
}

/// Compares the observed `t_mix(ε)` with the mixing-time bound for Ramanujan
/// graphs of girth ratio `δ`, using every start.
pub fn check_theorem1_bound(
    g: &Graph,
    spec: &Spectrum,
    eps: f64,
) -> Result<Theorem1Check, MixError> {
    let p = g.p();
    let class = spec.classify(p, RAMANUJAN_TOL)?;
    let delta = girth_ratio(g).unwrap_or(f64::INFINITY);
    let bound = theorem1_bound(g.n(), p, eps, delta);
    let bound_ceil = ceil(bound).max(0.0) as u32;
    let mut check = Theorem1Check {
        eps,
        delta,
        bound,
        bound_ceil,
        t_mix_observed: None,
        d_at_bound: None,
        status: Status::Inapplicable("not Ramanujan"),
    };
    if !class.is_ramanujan {
        return Ok(check);
    }
    if class.bipartite {
        check.status = Status::Inapplicable("bipartite: the walk is periodic");
        return Ok(check);
    }
    let t_max = bound_ceil.min(max_safe_t(p));
    let profile = mixing_profile(g, 0, t_max, Starts::All, false)?;
    check.d_at_bound = profile.record(bound_ceil).map(|r| r.d_max);
    check.t_mix_observed = t_mix(&profile, eps).ok().map(|r| r.t_mix);
    check.status = Status::from_bool(check.t_mix_observed.is_some());
    Ok(check)
}

#[derive(Clone, Debug, PartialEq)]
pub struct L2Check {
    pub t: u32,
    /// Start with the largest `lhs / rhs`.
    pub worst_x: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub status: Status,
}

/// Per-start check of `4 d_x(t)² <= n W(Q_t, x) / ((p+1)² p^{2t-2})`, with
/// `W` taken from the eigen-expansion rather than the walk counts.
pub fn check_l2_bound(g: &Graph, spec: &Spectrum, t: u32) -> Result<L2Check, MixError> {
    let p = g.p();
    let n = g.n();
    let n_t = crate::cheby::walk_total(p, t).ok_or(WalkError::Overflow {
        t,
        max_safe_t: max_safe_t(p),
    })? as f64;
    let mut worst: Option<(f64, usize, f64, f64)> = None;
    let mut ok = true;
    for x in 0..n {
        let s = start_stats(g, x, t, t)?;
        let lhs = 4.0 * s[0].tv * s[0].tv;
        let w = variance_spectral_at(spec, p, t, x)?;
        let rhs = n as f64 * w / (n_t * n_t);
        ok &= lhs <= rhs * (1.0 + 1e-9);
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        if worst.is_none_or(|(r, ..)| ratio > r) {
            worst = Some((ratio, x, lhs, rhs));
        }
    }
    let (_, worst_x, lhs, rhs) = worst.expect("graphs are non-empty");
    Ok(L2Check {
        t,
        worst_x,
        lhs,
        rhs,
        status: Status::from_bool(ok),
    })
}
