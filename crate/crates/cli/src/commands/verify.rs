//! Every check, on built-in fixtures.

use rayon::prelude::*;
use rcw_core::cheby::{
    apply_q_spectrally, cheb_r, p_row, walk_row, walk_row_bruteforce, walk_total,
};
use rcw_core::density::{density_cutoff_report, DEFAULT_ETA_GRID};
use rcw_core::diameter::{
    almost_diameter_report, expansion_base, lemma31_check, lemma32_check, ScaledPoly,
    DEFAULT_XI_GRID,
};
use rcw_core::gen::{fixture, Fixture};
use rcw_core::math::log_base;
use rcw_core::mixing::{check_l2_bound, check_theorem1_bound, mixing_profile, Starts};
use rcw_core::spectral::{eigen_tolerance, eigendecompose, EigenOptions};
use rcw_core::variance::{
    check_lemma42, check_lemma44, two_log_range, variance_direct, variance_spectral_all,
    KestenQuadrature, DEFAULT_NODES,
};
use rcw_core::{Graph, Spectrum, Status};
use serde::Serialize;

use super::analysis::route_gap;
use super::Ctx;
use crate::args::VerifyArgs;
use crate::error::{CliError, Result};
use crate::manifest::RunManifest;
use crate::report::*;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerifyRow {
    pub fixture: String,
    pub detail: String,
    #[serde(flatten)]
    pub check: Check,
}

impl VerifyRow {
    /// Short name of the claim, e.g. `lower_cutoff`.
    pub fn name(&self) -> &'static str {
        self.check
            .claim
            .split(':')
            .next()
            .unwrap_or(self.check.claim)
    }
}

/// Pass unless any case failed; inapplicable only if every case was.
fn combine<I: IntoIterator<Item = Status>>(cases: I) -> Status {
    let mut seen_pass = false;
    let mut why = None;
    for s in cases {
        match s {
            Status::Fail => return Status::Fail,
            Status::Pass => seen_pass = true,
            Status::Inapplicable(w) => why = why.or(Some(w)),
        }
    }
    match (seen_pass, why) {
        (false, Some(w)) => Status::Inapplicable(w),
        _ => Status::Pass,
    }
}

struct Rows {
    fixture: String,
    rows: Vec<VerifyRow>,
}

impl Rows {
    fn push(&mut self, claim: &'static str, status: Status, detail: String) -> &mut Check {
        self.rows.push(VerifyRow {
            fixture: self.fixture.clone(),
            detail,
            check: Check::new(claim, &status),
        });
        &mut self.rows.last_mut().expect("just pushed").check
    }
}

fn walk_checks(out: &mut Rows, g: &Graph, spec: &Spectrum) -> Result<()> {
    let p = g.p();
    let mut exact = true;
    let mut worst = 0.0f64;
    for x in 0..g.n() {
        for t in 0..=8 {
            let fast = walk_row(g, x, t).map_err(CliError::compute)?;
            let slow = walk_row_bruteforce(g, x, t).map_err(CliError::compute)?;
            exact &= fast == slow;
            if t >= 1 {
                let q = apply_q_spectrally(spec, p, t, x).map_err(CliError::compute)?;
                for (y, &v) in q.iter().enumerate() {
                    worst = worst.max((v - fast.counts()[y] as f64).abs());
                }
            }
        }
    }
    out.push(
        WALK_COUNTS,
        Status::from_bool(exact),
        "recurrence = enumeration, t <= 8".into(),
    );
    out.push(
        WALK_COUNTS,
        Status::from_bool(worst <= 1e-6),
        "spectral, 1 <= t <= 8".into(),
    )
    .set(worst, 1e-6);

    let mut ok = true;
    for x in 0..g.n() {
        for ell in 0..=10u32 {
            let lhs = p_row(g, x, ell).map_err(CliError::compute)?;
            let mut rhs = vec![0u64; g.n()];
            for j in 0..=ell / 2 {
                let row = walk_row(g, x, ell - 2 * j).map_err(CliError::compute)?;
                for (r, &c) in rhs.iter_mut().zip(row.counts()) {
                    *r += c;
                }
            }
            ok &= lhs == rhs;
        }
    }
    out.push(P_IDENTITY, Status::from_bool(ok), "l <= 10".into());
    Ok(())
}

fn variance_checks(out: &mut Rows, g: &Graph, spec: &Spectrum) -> Result<()> {
    let p = g.p();
    let mut gap = 0.0f64;
    for t in 1..=12 {
        let spectral = variance_spectral_all(spec, p, t).map_err(CliError::compute)?;
        for (x, &ws) in spectral.iter().enumerate() {
            let wd = variance_direct(g, x, t).map_err(CliError::compute)?;
            gap = gap.max(route_gap(wd, ws));
        }
    }
    out.push(
        VARIANCE_ROUTES,
        Status::from_bool(gap <= 1e-8),
        "1 <= t <= 12".into(),
    )
    .set(gap, 1e-8);

    let n = g.n() as f64;
    let d = g.degree() as f64;
    let ortho = spec.orthonormality_defect().map_err(CliError::compute)?;
    let complete = spec.completeness_defect().map_err(CliError::compute)?;
    let trace: f64 = spec.eigenvalues().iter().sum();
    let trace2: f64 = spec.eigenvalues().iter().map(|l| l * l).sum();
    let ok = ortho <= 1e-8
        && complete <= 1e-8
        && trace.abs() <= n * eigen_tolerance(g.n(), g.degree())
        && (trace2 - n * d).abs() <= 1e-6 * n * d;
    out.push(
        SPECTRAL_INVARIANTS,
        Status::from_bool(ok),
        format!("orthonormality {ortho:.1e}, completeness {complete:.1e}"),
    );

    let top = two_log_range(g.n(), p);
    let tempered = (1..=top)
        .map(|t| check_lemma44(g, spec, t).map(|c| c.status_last5))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(CliError::compute)?;
    out.push(
        VARIANCE_TEMPERED,
        combine(tempered),
        format!("1 <= t <= {top}"),
    );
    let lo = log_base(g.n() as f64, p as f64).ceil() as u32;
    let girth = (lo..=top)
        .map(|t| check_lemma44(g, spec, t).map(|c| c.status))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(CliError::compute)?;
    out.push(
        VARIANCE_GIRTH,
        combine(girth),
        format!("{lo} <= t <= {top}"),
    );

    let max_ell = g.girth().map_or(0, |girth| girth / 5) as u32;
    let u = (0..=max_ell)
        .map(|ell| check_lemma42(g, spec, ell).map(|c| c.status))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(CliError::compute)?;
    out.push(TEMPERED_U_SUM, combine(u), format!("l <= {max_ell}"));
    Ok(())
}

fn mixing_checks(out: &mut Rows, g: &Graph, spec: &Spectrum) -> Result<()> {
    let p = g.p();
    let mut t_top = 0;
    while walk_total(p, t_top + 1).is_some_and(|nt| nt as usize <= g.n()) {
        t_top += 1;
    }
    let prof = mixing_profile(g, 0, t_top, Starts::All, false).map_err(CliError::compute)?;
    let ok = prof
        .records
        .iter()
        .all(|r| r.lowercut_holds(g.n()).unwrap_or(true));
    out.push(
        LOWER_CUTOFF,
        Status::from_bool(ok),
        format!("exact, 0 <= t <= {t_top}"),
    );

    let l2 = (1..=8)
        .map(|t| check_l2_bound(g, spec, t).map(|c| c.status))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(CliError::compute)?;
    out.push(
        L2_BOUND,
        combine(l2),
        "spectral W, every x, 1 <= t <= 8".into(),
    );

    let t1 = check_theorem1_bound(g, spec, 0.25).map_err(CliError::compute)?;
    let c = out.push(
        RAMANUJAN_MIXING,
        t1.status.clone(),
        format!("eps = 0.25, delta = {:.3}", t1.delta),
    );
    if let Some(obs) = t1.t_mix_observed {
        c.set(f64::from(obs), t1.bound);
    }
    Ok(())
}

fn diameter_checks(out: &mut Rows, g: &Graph, spec: &Spectrum) -> Result<()> {
    let r = almost_diameter_report(g, spec, &DEFAULT_XI_GRID).map_err(CliError::compute)?;
    let d = g.degree() as f64;
    let mut poly = Vec::new();
    for ell in 0..=4 {
        for x in 0..g.n() {
            let c = lemma31_check(g, spec, &ScaledPoly::first_kind(ell, r.lambda), x)
                .map_err(CliError::compute)?;
            poly.push(c.status);
        }
    }
    out.push(
        POLY_TAIL,
        combine(poly),
        "P = T_l(z/lambda), l <= 4, every x".into(),
    );
    if expansion_base(d, r.lambda).is_some() {
        let growth = (0..=10).map(|ell| lemma32_check(d / r.lambda, ell).status);
        out.push(CHEB_GROWTH, combine(growth), "l <= 10".into());
    }
    for row in &r.rows {
        let detail = format!("xi = {}", row.xi);
        out.push(ALMOST_DIAMETER, row.status.clone(), detail.clone())
            .set(row.tail_fraction, row.bound);
        out.push(
            ALMOST_DIAMETER_INT,
            row.integer_status.clone(),
            detail.clone(),
        )
        .set(row.tail_fraction, row.integer_bound);
        if let Some(c) = &row.corollary {
            out.push(ALMOST_DIAMETER_RAM, c.status.clone(), detail)
                .set(c.tail_fraction, c.bound);
        }
    }
    let c = out.push(
        DIAMETER_BOUND,
        r.diameter_status.clone(),
        format!("xi* = {:?}", r.xi_star),
    );
    if let (Some(m), Some(b)) = (r.diameter_measured, r.diameter_bound) {
        c.set(m as f64, b);
    }
    Ok(())
}

fn density_checks(out: &mut Rows, g: &Graph, spec: &Spectrum) -> Result<()> {
    let r = density_cutoff_report(g, spec, &DEFAULT_ETA_GRID, Starts::All)
        .map_err(CliError::compute)?;
    for row in &r.rows {
        let detail = format!("eta = {}, t = {}", row.eta, row.t);
        out.push(DENSITY_CUTOFF, row.status.clone(), detail.clone())
            .set(row.d_max, row.terms.bound);
        out.push(DENSITY_CHAIN, row.chain_status.clone(), detail);
    }
    Ok(())
}

/// Every check on one fixture, in a fixed order.
pub fn verify_fixture(f: Fixture) -> Result<Vec<VerifyRow>> {
    let g = fixture(f);
    let spec = eigendecompose(&g, &EigenOptions::with_vectors()).map_err(CliError::compute)?;
    let mut out = Rows {
        fixture: f.name().into(),
        rows: Vec::new(),
    };
    walk_checks(&mut out, &g, &spec)?;
    variance_checks(&mut out, &g, &spec)?;
    mixing_checks(&mut out, &g, &spec)?;
    diameter_checks(&mut out, &g, &spec)?;
    density_checks(&mut out, &g, &spec)?;
    Ok(out.rows)
}

/// Kesten-measure identities for one `p`.
pub fn kesten_rows(p: u64) -> Vec<VerifyRow> {
    let q = KestenQuadrature::new(p, DEFAULT_NODES);
    let r = |t: u32| move |th: f64| cheb_r(t, p, th.cos());
    let mass = q.total_mass();
    let target = (p as f64 + 1.0) / p as f64;
    let norm_gap = (1..=50)
        .map(|t| (q.integrate(|th| r(t)(th).powi(2)) - target).abs())
        .fold(0.0, f64::max);
    let mut cross = 0.0f64;
    for t in 2..=20 {
        for s in 1..t {
            cross = cross.max(q.integrate(|th| r(s)(th) * r(t)(th)).abs());
        }
    }
    let fixture = format!("kesten p={p}");
    let row = |claim, ok: bool, value, bound, detail: &str| VerifyRow {
        fixture: fixture.clone(),
        detail: detail.into(),
        check: Check::new(claim, &Status::from_bool(ok)).with(value, bound),
    };
    vec![
        row(
            KESTEN_MASS,
            (mass - 1.0).abs() <= 1e-10,
            mass,
            1.0,
            "total mass",
        ),
        row(
            KESTEN_NORM,
            norm_gap <= 1e-8,
            norm_gap,
            1e-8,
            "1 <= t <= 50, max deviation",
        ),
        row(
            KESTEN_ORTHO,
            cross <= 1e-8,
            cross,
            1e-8,
            "1 <= s < t <= 20, max |integral|",
        ),
    ]
}

#[derive(Serialize)]
struct VerifyOut {
    manifest: RunManifest,
    rows: Vec<VerifyRow>,
    failed: usize,
}

pub fn run(ctx: &mut Ctx, a: VerifyArgs) -> Result<i32> {
    let per_fixture = a
        .fixtures
        .par_iter()
        .map(|&f| verify_fixture(f))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<VerifyRow> = per_fixture.into_iter().flatten().collect();
    let mut ps: Vec<u64> = a.fixtures.iter().map(|&f| fixture(f).p()).collect();
    ps.sort_unstable();
    ps.dedup();
    for p in ps {
        rows.extend(kesten_rows(p));
    }
    let failed = rows.iter().filter(|r| r.check.failed()).count();
    for r in &rows {
        let numbers = match (r.check.value, r.check.bound) {
            (Some(v), Some(b)) => format!("  [{v:.6e} vs {b:.6e}]"),
            _ => String::new(),
        };
        let reason = r
            .check
            .reason
            .map(|w| format!("  ({w})"))
            .unwrap_or_default();
        println!(
            "{:<12} {:<12} {:<34} {}{}{}",
            r.fixture,
            r.check.status.to_uppercase(),
            r.name(),
            r.detail,
            numbers,
            reason
        );
    }
    println!("{} rows, {} failed", rows.len(), failed);
    if let Some(path) = &a.output {
        let out = VerifyOut {
            manifest: ctx.manifest.finish(),
            rows,
            failed,
        };
        crate::io::emit(Some(path), &crate::json::to_string(&out))?;
    }
    Ok(if failed > 0 { 1 } else { 0 })
}
