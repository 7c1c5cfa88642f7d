use rayon::prelude::*;
use rcw_core::cheby::cheb_r;
use rcw_core::cheby::{max_safe_t, walk_total};
use rcw_core::density::{cutoff_range, density_cutoff_report_with, DensityCutoffReport};
use rcw_core::diameter::{
    almost_diameter_report_with, concentration_readout, expansion_base, lemma32_check,
};
use rcw_core::math::{ceil, log_base};
use rcw_core::mixing::{t_mix, MixError, MixingProfile};
use rcw_core::spectral::RAMANUJAN_TOL;
use rcw_core::variance::{
    check_lemma42, check_lemma44, conjecture_report, two_log_range, variance_spectral_all,
    KestenQuadrature, DEFAULT_NODES,
};
use rcw_core::{Graph, Status};
use serde::Serialize;

use super::Ctx;
use crate::args::{ConjectureArgs, DensityArgs, DiameterArgs, MixArgs, SpectrumArgs, VarianceArgs};
use crate::error::{CliError, Result};
use crate::io::{emit, write_csv, SpectrumFile};
use crate::manifest::RunManifest;
use crate::par;
use crate::report::*;

pub fn spectrum(ctx: &mut Ctx, a: SpectrumArgs) -> Result<i32> {
    let g = ctx.graph(&a.input.graph)?;
    let spec = ctx.spectrum(None, &g, a.vectors)?;
    let file = SpectrumFile::from_spectrum(&spec, g.p(), Some(ctx.manifest.finish()))?;
    emit(a.input.output.as_deref(), &crate::json::to_string(&file))?;
    Ok(0)
}

fn default_t_max(g: &Graph) -> u32 {
    let t = ceil(2.0 * log_base(g.n() as f64, g.p() as f64)) as u32 + 2;
    t.min(max_safe_t(g.p()))
}

#[derive(Serialize)]
struct MixRow {
    t: u32,
    d_max: f64,
    argmax: usize,
    d_mean: f64,
    d2: f64,
    w2: f64,
    #[serde(rename = "N_t")]
    n_t: u64,
    lower_bound: f64,
    l2_bound: f64,
    lower_cutoff: Check,
    l2: Check,
}

#[derive(Serialize)]
struct CsvMixRow {
    t: u32,
    d_max: f64,
    d_mean: f64,
    d2: f64,
    #[serde(rename = "N_t")]
    n_t: u64,
    lower_bound: f64,
}

#[derive(Serialize)]
struct TMixOut {
    eta: f64,
    t_mix: Option<u32>,
    d_at_t_mix: Option<f64>,
    /// `t_mix` is the first `t` of the profile, so the true value may be smaller.
    censored_below: bool,
    /// Computed from sampled starts: only a lower bound on the true value.
    lower_bound_only: bool,
}

#[derive(Serialize)]
struct MixOut {
    manifest: RunManifest,
    graph: GraphInfo,
    starts: usize,
    sampled: bool,
    bipartite_warning: bool,
    records: Vec<MixRow>,
    t_mix: Vec<TMixOut>,
}

fn mix_rows(profile: &MixingProfile) -> Vec<MixRow> {
    profile
        .records
        .iter()
        .map(|r| {
            let lower_cutoff = match r.lowercut_holds(profile.n) {
                Some(ok) => Check::new(LOWER_CUTOFF, &Status::from_bool(ok)),
                None => Check::new(LOWER_CUTOFF, &Status::Inapplicable("N(t) > n")),
            }
            .with(r.d_max, r.lower_bound);
            // the ℓ² bound computed from the same counts holds by Cauchy–Schwarz
            let l2 = Check::new(
                L2_BOUND,
                &Status::from_bool(r.d_max <= r.l2_bound * (1.0 + 1e-12)),
            )
            .with(r.d_max, r.l2_bound);
            MixRow {
                t: r.t,
                d_max: r.d_max,
                argmax: r.argmax,
                d_mean: r.d_mean,
                d2: r.d2,
                w2: r.w2,
                n_t: r.n_t,
                lower_bound: r.lower_bound,
                l2_bound: r.l2_bound,
                lower_cutoff,
                l2,
            }
        })
        .collect()
}

pub fn mix(ctx: &mut Ctx, a: MixArgs) -> Result<i32> {
    let g = ctx.graph(&a.input.graph)?;
    let t_max = a.t_max.unwrap_or_else(|| default_t_max(&g));
    let starts = a.starts.starts();
    let profile = par::profile(&g, a.t_min, t_max, starts, false).map_err(mix_error)?;
    if profile.d_max_is_lower_bound {
        ctx.manifest.seed(a.starts.seed);
    }
    let t_mix = a
        .eta
        .iter()
        .map(|&eta| match t_mix(&profile, eta) {
            Ok(r) => TMixOut {
                eta,
                t_mix: Some(r.t_mix),
                d_at_t_mix: Some(r.d_at_t_mix),
                censored_below: r.censored_below,
                lower_bound_only: r.sampled,
            },
            Err(_) => TMixOut {
                eta,
                t_mix: None,
                d_at_t_mix: None,
                censored_below: false,
                lower_bound_only: profile.d_max_is_lower_bound,
            },
        })
        .collect();
    if let Some(path) = &a.csv {
        let rows: Vec<CsvMixRow> = profile
            .records
            .iter()
            .map(|r| CsvMixRow {
                t: r.t,
                d_max: r.d_max,
                d_mean: r.d_mean,
                d2: r.d2,
                n_t: r.n_t,
                lower_bound: r.lower_bound,
            })
            .collect();
        write_csv(path, &rows)?;
    }
    let out = MixOut {
        manifest: ctx.manifest.finish(),
        graph: GraphInfo::of(&g),
        starts: profile.starts.len(),
        sampled: profile.d_max_is_lower_bound,
        bipartite_warning: profile.bipartite_warning,
        records: mix_rows(&profile),
        t_mix,
    };
    emit(a.input.output.as_deref(), &crate::json::to_string(&out))?;
    Ok(0)
}

fn mix_error(e: MixError) -> CliError {
    match e {
        MixError::EmptyRange { .. } | MixError::Walk(_) => CliError::Usage(e.to_string()),
        _ => CliError::compute(e),
    }
}

#[derive(Serialize)]
struct VarianceRow {
    x: usize,
    w_direct: f64,
    w_spectral: f64,
}

#[derive(Serialize)]
struct LemmaURow {
    ell: u32,
    value: f64,
    sharper_bound: f64,
    check: Check,
}

#[derive(Serialize)]
struct VarianceOut {
    manifest: RunManifest,
    graph: GraphInfo,
    t: u32,
    #[serde(rename = "N_t")]
    n_t: u64,
    mean: f64,
    routes: Check,
    rows: Vec<VarianceRow>,
    w2_direct: f64,
    w2_spectral: f64,
    tempered: Check,
    girth: Check,
    delta: f64,
    tempered_u_sum: Vec<LemmaURow>,
}

/// `|a - b| / max(|a|, 1)`; the direct value is exact up to one division.
pub fn route_gap(direct: f64, spectral: f64) -> f64 {
    (direct - spectral).abs() / direct.abs().max(1.0)
}

pub fn variance(ctx: &mut Ctx, a: VarianceArgs) -> Result<i32> {
    let g = ctx.graph(&a.input.graph)?;
    let spec = ctx.spectrum(a.spectrum.as_deref(), &g, true)?;
    let p = g.p();
    let t = a.t;
    let n_t = walk_total(p, t)
        .filter(|_| t <= max_safe_t(p))
        .ok_or_else(|| CliError::Usage(format!("t = {t} overflows exact counts")))?;
    let direct: Vec<f64> = (0..g.n())
        .into_par_iter()
        .map(|x| rcw_core::variance::variance_direct(&g, x, t))
        .collect::<std::result::Result<_, _>>()
        .map_err(CliError::compute)?;
    let spectral = variance_spectral_all(&spec, p, t).map_err(CliError::compute)?;
    let gap = direct
        .iter()
        .zip(&spectral)
        .map(|(&d, &s)| route_gap(d, s))
        .fold(0.0, f64::max);
    let n = g.n() as f64;
    let l44 = check_lemma44(&g, &spec, t).map_err(CliError::compute)?;
    let max_ell = g.girth().map_or(0, |girth| girth / 5) as u32;
    let tempered_u_sum = (0..=max_ell)
        .map(|ell| {
            let c = check_lemma42(&g, &spec, ell).map_err(CliError::compute)?;
            Ok(LemmaURow {
                ell,
                value: c.value,
                sharper_bound: c.sharper_bound,
                check: Check::new(TEMPERED_U_SUM, &c.status).with(c.value, 2.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = VarianceOut {
        manifest: ctx.manifest.finish(),
        graph: GraphInfo::of(&g),
        t,
        n_t,
        mean: n_t as f64 / n,
        routes: Check::new(VARIANCE_ROUTES, &Status::from_bool(gap <= 1e-8)).with(gap, 1e-8),
        w2_direct: direct.iter().sum::<f64>() / n,
        w2_spectral: spectral.iter().sum::<f64>() / n,
        rows: direct
            .iter()
            .zip(&spectral)
            .enumerate()
            .map(|(x, (&w_direct, &w_spectral))| VarianceRow {
                x,
                w_direct,
                w_spectral,
            })
            .collect(),
        tempered: Check::new(VARIANCE_TEMPERED, &l44.status_last5).with(l44.w_max, l44.bound_last5),
        girth: Check::new(VARIANCE_GIRTH, &l44.status).with(l44.w_max, l44.bound),
        delta: l44.delta,
        tempered_u_sum,
    };
    emit(a.input.output.as_deref(), &crate::json::to_string(&out))?;
    Ok(0)
}

#[derive(Serialize)]
struct ConjectureCsvRow {
    t: u32,
    #[serde(rename = "W2")]
    w2: f64,
    #[serde(rename = "Nt")]
    n_t: u64,
    ratio: f64,
    #[serde(rename = "muR2")]
    mu_r2: f64,
    #[serde(rename = "kestenR2")]
    kesten_r2: f64,
}

#[derive(Serialize)]
struct ConjectureRowOut {
    t: u32,
    w2: f64,
    #[serde(rename = "N_t")]
    n_t: u64,
    ratio: f64,
    mu_r2: f64,
    kesten_r2: f64,
    w2_unnormalized: f64,
    envelope: Check,
}

#[derive(Serialize)]
struct ConjectureOut {
    manifest: RunManifest,
    graph: GraphInfo,
    claim: &'static str,
    first_step: Check,
    rows: Vec<ConjectureRowOut>,
}

pub fn conjecture(ctx: &mut Ctx, a: ConjectureArgs) -> Result<i32> {
    let g = ctx.graph(&a.input.graph)?;
    let spec = ctx.spectrum(a.spectrum.as_deref(), &g, false)?;
    let p = g.p();
    let t_max = a.t_max.unwrap_or_else(|| two_log_range(g.n(), p)).max(1);
    let rows = conjecture_report(&spec, p, 1, t_max).map_err(CliError::compute)?;
    let quad = KestenQuadrature::new(p, DEFAULT_NODES);
    let kesten: Vec<f64> = rows
        .iter()
        .map(|r| quad.integrate(|th| cheb_r(r.t, p, th.cos()).powi(2)))
        .collect();
    let d = g.degree() as f64;
    let first = 1.0 - d / g.n() as f64;
    let r1 = rows[0].ratio;
    let out = ConjectureOut {
        manifest: ctx.manifest.finish(),
        graph: GraphInfo::of(&g),
        claim: CONJECTURE,
        first_step: Check::new(
            CONJECTURE_FIRST,
            &Status::from_bool((r1 - first).abs() <= 1e-12),
        )
        .with(r1, first),
        rows: rows
            .iter()
            .zip(&kesten)
            .map(|(r, &k)| ConjectureRowOut {
                t: r.t,
                w2: r.w2,
                n_t: r.n_t,
                ratio: r.ratio,
                mu_r2: r.mu_r2,
                kesten_r2: k,
                w2_unnormalized: r.w2_unnormalized,
                envelope: Check::new(
                    CONJECTURE_ENVELOPE,
                    &Status::from_bool(r.w2 >= 0.0 && r.ratio <= r.ratio_envelope * (1.0 + 1e-9)),
                )
                .with(r.ratio, r.ratio_envelope),
            })
            .collect(),
    };
    if let Some(path) = &a.csv {
        let csv: Vec<ConjectureCsvRow> = rows
            .iter()
            .zip(&kesten)
            .map(|(r, &k)| ConjectureCsvRow {
                t: r.t,
                w2: r.w2,
                n_t: r.n_t,
                ratio: r.ratio,
                mu_r2: r.mu_r2,
                kesten_r2: k,
            })
            .collect();
        write_csv(path, &csv)?;
    }
    emit(a.input.output.as_deref(), &crate::json::to_string(&out))?;
    Ok(0)
}

#[derive(Serialize)]
struct XiOut {
    xi: f64,
    ell: f64,
    tail_fraction: f64,
    real_xi: Check,
    integer_degree: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    ramanujan: Option<Check>,
}

#[derive(Serialize)]
struct GrowthOut {
    ell: u32,
    check: Check,
}

#[derive(Serialize)]
struct ConcentrationOut {
    f: f64,
    check: Check,
}

#[derive(Serialize)]
struct DiameterOut {
    manifest: RunManifest,
    graph: GraphInfo,
    lambda: f64,
    b: Option<f64>,
    is_ramanujan: bool,
    excluded_trivial_negative: bool,
    rows: Vec<XiOut>,
    xi_star: Option<f64>,
    diameter: Option<usize>,
    diameter_check: Check,
    chebyshev_growth: Vec<GrowthOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    concentration: Option<ConcentrationOut>,
}

pub fn diameter(ctx: &mut Ctx, a: DiameterArgs) -> Result<i32> {
    let g = ctx.graph(&a.input.graph)?;
    let spec = ctx.spectrum(a.spectrum.as_deref(), &g, false)?;
    let table = par::distance_table(&g);
    let r = almost_diameter_report_with(&g, &spec, &a.xi, &table).map_err(CliError::compute)?;
    let d = g.degree() as f64;
    let growth = match expansion_base(d, r.lambda) {
        Some(_) => (0..=10)
            .map(|ell| {
                let c = lemma32_check(d / r.lambda, ell);
                GrowthOut {
                    ell,
                    check: Check::new(CHEB_GROWTH, &c.status).with(c.lhs, c.rhs),
                }
            })
            .collect(),
        None => Vec::new(),
    };
    let concentration = a.f.map(|f| {
        let (frac, bound) = concentration_readout(&g, &table, f);
        let status = match spec.classify(g.p(), RAMANUJAN_TOL) {
            Ok(c) if c.is_ramanujan && !c.bipartite => Status::from_bool(frac <= bound),
            _ => Status::Inapplicable("not a non-bipartite Ramanujan graph"),
        };
        ConcentrationOut {
            f,
            check: Check::new(DISTANCE_CONCENTRATION, &status).with(frac, bound),
        }
    });
    let out = DiameterOut {
        manifest: ctx.manifest.finish(),
        graph: GraphInfo::of(&g),
        lambda: r.lambda,
        b: r.b,
        is_ramanujan: r.is_ramanujan,
        excluded_trivial_negative: r.excluded_trivial_negative,
        rows: r
            .rows
            .iter()
            .map(|row| XiOut {
                xi: row.xi,
                ell: row.ell,
                tail_fraction: row.tail_fraction,
                real_xi: Check::new(ALMOST_DIAMETER, &row.status)
                    .with(row.tail_fraction, row.bound),
                integer_degree: Check::new(ALMOST_DIAMETER_INT, &row.integer_status)
                    .with(row.tail_fraction, row.integer_bound),
                ramanujan: row.corollary.as_ref().map(|c| {
                    Check::new(ALMOST_DIAMETER_RAM, &c.status).with(c.tail_fraction, c.bound)
                }),
            })
            .collect(),
        xi_star: r.xi_star,
        diameter: r.diameter_measured,
        diameter_check: {
            let c = Check::new(DIAMETER_BOUND, &r.diameter_status);
            match (r.diameter_measured, r.diameter_bound) {
                (Some(m), Some(b)) => c.with(m as f64, b),
                _ => c,
            }
        },
        chebyshev_growth: growth,
        concentration,
    };
    emit(a.input.output.as_deref(), &crate::json::to_string(&out))?;
    Ok(0)
}

#[derive(Serialize)]
struct DensityRowOut {
    eta: f64,
    t: u32,
    d_max: f64,
    argmax: usize,
    w_max: f64,
    v2: f64,
    v3_sharp: f64,
    v3: f64,
    i_n: f64,
    first_term: f64,
    second_term: f64,
    bound: Check,
    chain: Check,
}

#[derive(Serialize)]
struct DensityOut {
    manifest: RunManifest,
    graph: GraphInfo,
    lambda: f64,
    is_ramanujan: bool,
    homogeneous: bool,
    max_exceptional: Option<f64>,
    delta1: f64,
    density_alphas: Vec<f64>,
    density_counts: Vec<usize>,
    density_exponents: Vec<Option<f64>>,
    d_max_is_lower_bound: bool,
    rows: Vec<DensityRowOut>,
}

fn density_rows(r: &DensityCutoffReport) -> Vec<DensityRowOut> {
    r.rows
        .iter()
        .map(|row| DensityRowOut {
            eta: row.eta,
            t: row.t,
            d_max: row.d_max,
            argmax: row.argmax,
            w_max: row.w_max,
            v2: row.v2,
            v3_sharp: row.terms.v3_sharp,
            v3: row.terms.v3,
            i_n: row.terms.i_n,
            first_term: row.terms.first_term,
            second_term: row.terms.second_term,
            bound: Check::new(DENSITY_CUTOFF, &row.status).with(row.d_max, row.terms.bound),
            chain: Check::new(DENSITY_CHAIN, &row.chain_status),
        })
        .collect()
}

pub fn density(ctx: &mut Ctx, a: DensityArgs) -> Result<i32> {
    let mut g = ctx.graph(&a.input.graph)?;
    if a.homogeneous {
        g = g.with_homogeneous(true);
    }
    let spec = ctx.spectrum(a.spectrum.as_deref(), &g, false)?;
    let (lo, hi) = cutoff_range(g.n(), g.p(), &a.eta);
    let profile = par::profile(&g, lo, hi, a.starts.starts(), true).map_err(mix_error)?;
    if profile.d_max_is_lower_bound {
        ctx.manifest.seed(a.starts.seed);
    }
    let r = density_cutoff_report_with(&g, &spec, &a.eta, &profile).map_err(CliError::compute)?;
    let out = DensityOut {
        manifest: ctx.manifest.finish(),
        graph: GraphInfo::of(&g),
        lambda: r.lambda,
        is_ramanujan: r.is_ramanujan,
        homogeneous: r.homogeneous,
        max_exceptional: r.max_exceptional,
        delta1: r.delta1,
        density_alphas: r.density.alphas.clone(),
        density_counts: r.density.counts.clone(),
        density_exponents: r.density.exponents.clone(),
        d_max_is_lower_bound: r.d_max_is_lower_bound,
        rows: density_rows(&r),
    };
    emit(a.input.output.as_deref(), &crate::json::to_string(&out))?;
    Ok(0)
}
