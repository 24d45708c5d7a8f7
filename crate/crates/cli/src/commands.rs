//! The six subcommands.

use crate::config::{parse_f64_list, parse_usize_list, resolve, resolve_required, FileConfig};
use crate::report::{config_json, fmt_float, write_json, write_plot_script, CsvReport};
use crate::UsageError;
use anyhow::{anyhow, Result};
use gapflow::bmo::{bmo_seminorm, h1_embedding_check, interpolation_check, BallStrategy};
use gapflow::catalog::CatalogFunction;
use gapflow::drag::{collision_regime, DragModel, DragTable};
use gapflow::fall::{simulate_fall, DragSource, FallClass, FallParams};
use gapflow::field::{
    dh_velocity, pressure_gradient, pressure_with_tol, stokes_residual, velocity,
    velocity_gradient,
};
use gapflow::fit::{fit_power_law, log_spaced, R_SQUARED_FLOOR};
use gapflow::geometry::{gamma, lemma10_classify, lemma10_integral_with_tol, Lemma10Regime};
use gapflow::norms::GapNorms;
use gapflow::{GapPoint, RoughProfile};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::json;
use std::path::{Path, PathBuf};

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn profile_for(alpha: f64) -> Result<RoughProfile> {
    RoughProfile::with_alpha(alpha).map_err(|e| usage(e.to_string()))
}

fn alphas_from(raw: Option<String>, file: &FileConfig) -> Result<Vec<f64>> {
    let raw = match raw {
        Some(r) => r,
        None => file
            .get("alpha")
            .map(|s| s.to_string())
            .ok_or_else(|| usage("missing required --alpha list"))?,
    };
    let list = parse_f64_list(&raw).map_err(|e| usage(e.to_string()))?;
    if list.is_empty() {
        return Err(usage("alpha list must not be empty"));
    }
    Ok(list)
}

fn json_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

// ------------------------------------------------------------------
// lemma10

#[derive(clap::Args, Debug)]
pub struct Lemma10Args {
    /// Numerator exponent p >= 0
    #[arg(long)]
    p: Option<f64>,
    /// Denominator exponent q > 0
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated cusp exponents
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

pub fn cmd_lemma10(args: Lemma10Args) -> Result<()> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let p = resolve_required::<f64>(args.p, &file, "p").map_err(|e| usage(e.to_string()))?;
    let q = resolve_required::<f64>(args.q, &file, "q").map_err(|e| usage(e.to_string()))?;
    let alphas = alphas_from(args.alpha, &file)?;
    let h_min = resolve(args.h_min, &file, "h-min", 1e-7)?;
    let h_max = resolve(args.h_max, &file, "h-max", 1e-3)?;
    let samples = resolve(args.samples, &file, "samples", 25usize)?;
    let tol = resolve(args.tol, &file, "tol", 1e-8)?;
    let out = resolve(args.out, &file, "out", PathBuf::from("lemma10.csv"))?;
    if !(h_min > 0.0 && h_min < h_max) || samples < 3 {
        return Err(usage("need 0 < h-min < h-max and at least 3 samples"));
    }

    let alpha_str = alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
    let config: Vec<(&str, String)> = vec![
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("alpha", alpha_str),
        ("h-min", fmt_float(h_min)),
        ("h-max", fmt_float(h_max)),
        ("samples", samples.to_string()),
        ("tol", fmt_float(tol)),
        ("out", out.display().to_string()),
    ];
    let mut csv = CsvReport::new("lemma10", &config, &["alpha", "p", "q", "h", "value", "error_est"]);
    let hs = log_spaced(h_min, h_max, samples);
    let mut summaries = Vec::new();
    for &alpha in &alphas {
        let profile = profile_for(alpha)?;
        let regime = lemma10_classify(p, q, &profile).map_err(|e| usage(e.to_string()))?;
        let rows: Vec<(f64, f64, f64)> = hs
            .par_iter()
            .map(|&h| {
                let est = lemma10_integral_with_tol(p, q, &profile, h, tol)?;
                Ok((h, est.value, est.error))
            })
            .collect::<gapflow::Result<Vec<_>>>()?;
        for &(h, v, e) in &rows {
            csv.row(&[
                alpha.to_string(),
                p.to_string(),
                q.to_string(),
                fmt_float(h),
                fmt_float(v),
                fmt_float(e),
            ]);
        }
        let samples_fit: Vec<(f64, f64)> = rows.iter().map(|&(h, v, _)| (h, v)).collect();
        let fit = fit_power_law(&samples_fit, (h_min, h_max))?;
        let (regime_name, theory) = match regime {
            Lemma10Regime::PowerLaw { exponent } => ("power_law", Some(exponent)),
            Lemma10Regime::Logarithmic => ("logarithmic", None),
            Lemma10Regime::Bounded => ("bounded", None),
        };
        println!(
            "alpha {alpha}: {regime_name} fitted {:.4} (theory {}, r2 {:.6})",
            fit.exponent,
            theory.map_or("n/a".into(), |t| format!("{t:.4}")),
            fit.r_squared
        );
        summaries.push(json!({
            "alpha": alpha,
            "p": p,
            "q": q,
            "regime": regime_name,
            "theory_exponent": theory,
            "fitted_exponent": fit.exponent,
            "prefactor": fit.prefactor,
            "r_squared": fit.r_squared,
            "trustworthy": fit.is_trustworthy(),
        }));
    }
    csv.write(&out)?;
    write_json(&json_path(&out), &json!({ "config": config_json(&config), "fits": summaries }))?;
    if let Some(script) = &args.plot_script {
        write_plot_script(script, &out, "lemma10 model integral", 4, &[(5, "value")], true)?;
    }
    Ok(())
}

// ------------------------------------------------------------------
// field-probe

#[derive(clap::Args, Debug)]
pub struct FieldProbeArgs {
    #[arg(long)]
    alpha: Option<String>,
    /// Gap distance to probe at
    #[arg(long)]
    h: Option<f64>,
    /// Number of random interior probe points
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

struct ProbeStats {
    max_abs_div: f64,
    max_rel_grad_fd: f64,
    max_rel_dh_fd: f64,
    max_rel_residual_fd: f64,
    max_rel_pressure_grad_fd: f64,
    probes: Vec<serde_json::Value>,
}

fn probe_interior(
    profile: &RoughProfile,
    h: f64,
    mu: f64,
    count: usize,
    seed: u64,
) -> Result<ProbeStats> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let delta = profile.delta();
    let mut stats = ProbeStats {
        max_abs_div: 0.0,
        max_rel_grad_fd: 0.0,
        max_rel_dh_fd: 0.0,
        max_rel_residual_fd: 0.0,
        max_rel_pressure_grad_fd: 0.0,
        probes: Vec::with_capacity(count),
    };
    for _ in 0..count {
        let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
        let x1 = sign * delta * rng.gen_range(0.05..0.9);
        let g = gamma(profile, h, x1)?;
        let x2 = g * rng.gen_range(0.1..0.9);
        let pt = GapPoint::new(x1, x2);

        let w = velocity(profile, h, pt)?;
        let grad = velocity_gradient(profile, h, pt)?;
        let dh = dh_velocity(profile, h, pt)?;
        let res = stokes_residual(profile, h, pt, mu)?;
        let q = pressure_with_tol(profile, h, pt, 1e-12)?;
        let dq = pressure_gradient(profile, h, pt)?;

        let div = grad[0][0] + grad[1][1];
        stats.max_abs_div = stats.max_abs_div.max(div.abs());

        // finite-difference oracles
        let e1 = 1e-5 * x1.abs();
        let e2 = 1e-5 * g;
        let ev = |x1: f64, x2: f64| velocity(profile, h, GapPoint::new(x1, x2)).unwrap();
        let wxp = ev(x1 + e1, x2);
        let wxm = ev(x1 - e1, x2);
        let wyp = ev(x1, x2 + e2);
        let wym = ev(x1, x2 - e2);
        let grad_scale = grad.iter().flatten().fold(1e-300_f64, |m, v| m.max(v.abs()));
        for k in 0..2 {
            let fd1 = (wxp[k] - wxm[k]) / (2.0 * e1);
            let fd2 = (wyp[k] - wym[k]) / (2.0 * e2);
            stats.max_rel_grad_fd = stats
                .max_rel_grad_fd
                .max(((grad[0][k] - fd1) / grad_scale).abs())
                .max(((grad[1][k] - fd2) / grad_scale).abs());
        }

        let eh = 1e-5 * h;
        let whp = velocity(profile, h + eh, pt)?;
        let whm = velocity(profile, h - eh, pt)?;
        let dh_scale = dh.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
        for k in 0..2 {
            let fd = (whp[k] - whm[k]) / (2.0 * eh);
            stats.max_rel_dh_fd = stats.max_rel_dh_fd.max(((dh[k] - fd) / dh_scale).abs());
        }

        let eq1 = 1e-5 * x1.abs();
        let eq2 = 1e-5 * g;
        let qf = |pt: GapPoint| pressure_with_tol(profile, h, pt, 1e-12).unwrap();
        let fdq = [
            (qf(GapPoint::new(x1 + eq1, x2)) - qf(GapPoint::new(x1 - eq1, x2))) / (2.0 * eq1),
            (qf(GapPoint::new(x1, x2 + eq2)) - qf(GapPoint::new(x1, x2 - eq2))) / (2.0 * eq2),
        ];
        let dq_scale = dq.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
        for k in 0..2 {
            stats.max_rel_pressure_grad_fd = stats
                .max_rel_pressure_grad_fd
                .max(((dq[k] - fdq[k]) / dq_scale).abs());
        }

        let er1 = 2e-4 * x1.abs().min(g);
        let er2 = 2e-4 * g;
        let w0 = ev(x1, x2);
        let rxp = ev(x1 + er1, x2);
        let rxm = ev(x1 - er1, x2);
        let ryp = ev(x1, x2 + er2);
        let rym = ev(x1, x2 - er2);
        let res_scale = res.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
        for k in 0..2 {
            let lap = (rxp[k] - 2.0 * w0[k] + rxm[k]) / (er1 * er1)
                + (ryp[k] - 2.0 * w0[k] + rym[k]) / (er2 * er2);
            let fd = mu * lap - mu * dq[k];
            stats.max_rel_residual_fd =
                stats.max_rel_residual_fd.max(((res[k] - fd) / res_scale).abs());
        }

        stats.probes.push(json!({
            "x1": x1,
            "x2": x2,
            "w": w,
            "grad_w": grad,
            "dh_w": dh,
            "q": q,
            "residual": res,
            "div": div,
        }));
    }
    Ok(stats)
}

pub fn cmd_field_probe(args: FieldProbeArgs) -> Result<()> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let alphas = alphas_from(args.alpha, &file)?;
    let h = resolve(args.h, &file, "h", 1e-3)?;
    let probes = resolve(args.probes, &file, "probes", 100usize)?;
    let mu = resolve(args.mu, &file, "mu", 1.0)?;
    let seed = resolve(args.seed, &file, "seed", 0u64)?;
    let out = resolve(args.out, &file, "out", PathBuf::from("field_probe.json"))?;
    if !(h > 0.0) || !(mu > 0.0) {
        return Err(usage("need positive h and mu"));
    }

    let alpha_str = alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
    let config: Vec<(&str, String)> = vec![
        ("alpha", alpha_str),
        ("h", fmt_float(h)),
        ("probes", probes.to_string()),
        ("mu", fmt_float(mu)),
        ("seed", seed.to_string()),
        ("out", out.display().to_string()),
    ];

    let mut runs = Vec::new();
    let mut ok = true;
    for &alpha in &alphas {
        let profile = profile_for(alpha)?;
        // boundary contract at 100 stations
        let mut max_top = 0.0_f64;
        let mut max_wall = 0.0_f64;
        for k in 0..100 {
            let x1 = profile.delta() * (-0.99 + 1.98 * (k as f64 + 0.5) / 100.0);
            let g = gamma(&profile, h, x1)?;
            let top = velocity(&profile, h, GapPoint::new(x1, g))?;
            let wall = velocity(&profile, h, GapPoint::new(x1, 0.0))?;
            max_top = max_top.max(top[0].abs()).max((top[1] - 1.0).abs());
            max_wall = max_wall.max(wall[0].abs()).max(wall[1].abs());
        }
        let stats = probe_interior(&profile, h, mu, probes, seed)?;
        let pass = max_top <= 1e-12
            && max_wall <= 1e-12
            && stats.max_abs_div <= 1e-10
            && stats.max_rel_grad_fd <= 1e-4
            && stats.max_rel_dh_fd <= 1e-4
            && stats.max_rel_residual_fd <= 1e-4
            && stats.max_rel_pressure_grad_fd <= 1e-4;
        ok &= pass;
        println!(
            "alpha {alpha}: boundary dev {max_top:.2e}/{max_wall:.2e}, div {:.2e}, FD rel (grad {:.2e}, dh {:.2e}, res {:.2e}, dq {:.2e}) => {}",
            stats.max_abs_div,
            stats.max_rel_grad_fd,
            stats.max_rel_dh_fd,
            stats.max_rel_residual_fd,
            stats.max_rel_pressure_grad_fd,
            if pass { "ok" } else { "FAIL" }
        );
        runs.push(json!({
            "alpha": alpha,
            "h": h,
            "boundary": { "max_dev_body": max_top, "max_dev_wall": max_wall },
            "checks": {
                "max_abs_div": stats.max_abs_div,
                "max_rel_grad_fd": stats.max_rel_grad_fd,
                "max_rel_dh_fd": stats.max_rel_dh_fd,
                "max_rel_residual_fd": stats.max_rel_residual_fd,
                "max_rel_pressure_grad_fd": stats.max_rel_pressure_grad_fd,
            },
            "pass": pass,
            "probes": stats.probes,
        }));
    }
    write_json(&out, &json!({ "config": config_json(&config), "runs": runs }))?;
    if ok {
        Ok(())
    } else {
        Err(anyhow!("field probe cross-checks failed (see {})", out.display()))
    }
}

// ------------------------------------------------------------------
// sweep-norms

#[derive(clap::Args, Debug)]
pub struct SweepNormsArgs {
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

pub fn cmd_sweep_norms(args: SweepNormsArgs) -> Result<()> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let alphas = alphas_from(args.alpha, &file)?;
    let h_min = resolve(args.h_min, &file, "h-min", 1e-7)?;
    let h_max = resolve(args.h_max, &file, "h-max", 1e-3)?;
    let samples = resolve(args.samples, &file, "samples", 25usize)?;
    let tol = resolve(args.tol, &file, "tol", 1e-8)?;
    let out = resolve(args.out, &file, "out", PathBuf::from("sweep_norms.csv"))?;
    if !(h_min > 0.0 && h_min < h_max) || samples < 3 {
        return Err(usage("need 0 < h-min < h-max and at least 3 samples"));
    }

    let alpha_str = alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
    let config: Vec<(&str, String)> = vec![
        ("alpha", alpha_str),
        ("h-min", fmt_float(h_min)),
        ("h-max", fmt_float(h_max)),
        ("samples", samples.to_string()),
        ("tol", fmt_float(tol)),
        ("out", out.display().to_string()),
    ];
    let mut csv = CsvReport::new(
        "sweep-norms",
        &config,
        &["alpha", "h", "l2_w", "l2_grad_w", "weighted_sup", "weighted_dh"],
    );
    let hs = log_spaced(h_min, h_max, samples);
    let mut fits = Vec::new();
    let mut all_trustworthy = true;
    for &alpha in &alphas {
        let profile = profile_for(alpha)?;
        let norms = GapNorms::with_tol(profile, tol)?;
        let reports = hs
            .par_iter()
            .map(|&h| norms.prop8(h))
            .collect::<gapflow::Result<Vec<_>>>()?;
        for r in &reports {
            csv.row(&[
                alpha.to_string(),
                fmt_float(r.h),
                fmt_float(r.l2_w),
                fmt_float(r.l2_grad_w),
                fmt_float(r.weighted_sup),
                fmt_float(r.weighted_dh),
            ]);
        }
        let grad: Vec<(f64, f64)> = reports.iter().map(|r| (r.h, r.l2_grad_w)).collect();
        let fit = fit_power_law(&grad, (h_min, h_max))?;
        let target = -3.0 * alpha / (2.0 * (1.0 + alpha));
        let ratio = |get: fn(&gapflow::norms::Prop8Report) -> f64| {
            let lo = reports.iter().map(|r| get(r)).fold(f64::MAX, f64::min);
            let hi = reports.iter().map(|r| get(r)).fold(f64::MIN, f64::max);
            hi / lo
        };
        all_trustworthy &= fit.is_trustworthy();
        println!(
            "alpha {alpha}: l2_grad_w fitted {:.4}, target {:.4}, r2 {:.6}; bounded ratios l2_w {:.3} sup {:.3} dh {:.3}",
            fit.exponent,
            target,
            fit.r_squared,
            ratio(|r| r.l2_w),
            ratio(|r| r.weighted_sup),
            ratio(|r| r.weighted_dh),
        );
        fits.push(json!({
            "alpha": alpha,
            "grad_exponent_fitted": fit.exponent,
            "grad_exponent_theory": target,
            "r_squared": fit.r_squared,
            "l2_w_max_over_min": ratio(|r| r.l2_w),
            "weighted_sup_max_over_min": ratio(|r| r.weighted_sup),
            "weighted_dh_max_over_min": ratio(|r| r.weighted_dh),
            "outer_const": norms.outer_const(),
        }));
    }
    csv.write(&out)?;
    write_json(&json_path(&out), &json!({ "config": config_json(&config), "fits": fits }))?;
    if let Some(script) = &args.plot_script {
        write_plot_script(
            script,
            &out,
            "gap norms",
            2,
            &[(3, "l2_w"), (4, "l2_grad_w"), (5, "weighted_sup"), (6, "weighted_dh")],
            true,
        )?;
    }
    if !all_trustworthy {
        return Err(anyhow!("a gradient-norm fit fell below r^2 = {R_SQUARED_FLOOR}"));
    }
    Ok(())
}

// ------------------------------------------------------------------
// drag-table

#[derive(clap::Args, Debug)]
pub struct DragTableArgs {
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

pub fn cmd_drag_table(args: DragTableArgs) -> Result<()> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let alphas = alphas_from(args.alpha, &file)?;
    let h_min = resolve(args.h_min, &file, "h-min", 1e-7)?;
    let h_max = resolve(args.h_max, &file, "h-max", 1e-3)?;
    let samples = resolve(args.samples, &file, "samples", 25usize)?;
    let tol = resolve(args.tol, &file, "tol", 1e-8)?;
    let mu = resolve(args.mu, &file, "mu", 1.0)?;
    let out = resolve(args.out, &file, "out", PathBuf::from("drag_table.csv"))?;
    if !(h_min > 0.0 && h_min < h_max) || samples < 4 || !(mu > 0.0) {
        return Err(usage("need 0 < h-min < h-max, at least 4 samples and positive mu"));
    }

    let alpha_str = alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
    let config: Vec<(&str, String)> = vec![
        ("alpha", alpha_str),
        ("h-min", fmt_float(h_min)),
        ("h-max", fmt_float(h_max)),
        ("samples", samples.to_string()),
        ("tol", fmt_float(tol)),
        ("mu", fmt_float(mu)),
        ("out", out.display().to_string()),
    ];
    let mut csv = CsvReport::new(
        "drag-table",
        &config,
        &["alpha", "h", "dirichlet", "pairing", "n", "reynolds", "N"],
    );
    let hs = log_spaced(h_min, h_max, samples);
    let mut fits = Vec::new();
    let mut all_ok = true;
    for &alpha in &alphas {
        let profile = profile_for(alpha)?;
        let model = DragModel::with_tol(profile, mu, tol)?;
        let rows = hs
            .par_iter()
            .map(|&h| model.coefficient(h))
            .collect::<gapflow::Result<Vec<_>>>()?;
        let table = DragTable::from_samples(
            rows.iter().map(|r| r.h).collect(),
            rows.iter().map(|r| r.n).collect(),
        )?;
        for r in &rows {
            csv.row(&[
                alpha.to_string(),
                fmt_float(r.h),
                fmt_float(r.dirichlet),
                fmt_float(r.pairing),
                fmt_float(r.n),
                fmt_float(r.reynolds),
                fmt_float(table.potential(r.h, h_max)),
            ]);
        }
        let beta = 3.0 * alpha / (1.0 + alpha);
        let n_fit = fit_power_law(
            &rows.iter().map(|r| (r.h, r.n)).collect::<Vec<_>>(),
            (h_min, h_max),
        )?;
        let rey_fit = fit_power_law(
            &rows.iter().map(|r| (r.h, r.reynolds)).collect::<Vec<_>>(),
            (h_min, h_max),
        )?;
        all_ok &= n_fit.is_trustworthy() && rey_fit.is_trustworthy();
        println!(
            "alpha {alpha}: n fitted {:.4}, reynolds fitted {:.4}, target {:.4} (r2 {:.6}/{:.6})",
            n_fit.exponent, rey_fit.exponent, -beta, n_fit.r_squared, rey_fit.r_squared
        );
        fits.push(json!({
            "alpha": alpha,
            "beta_theory": beta,
            "n_exponent_fitted": n_fit.exponent,
            "reynolds_exponent_fitted": rey_fit.exponent,
            "n_r_squared": n_fit.r_squared,
            "reynolds_r_squared": rey_fit.r_squared,
            "table_beta_fit": table.beta_fit(),
        }));
    }
    csv.write(&out)?;
    write_json(&json_path(&out), &json!({ "config": config_json(&config), "fits": fits }))?;
    if let Some(script) = &args.plot_script {
        write_plot_script(
            script,
            &out,
            "drag coefficient",
            2,
            &[(5, "n"), (6, "reynolds")],
            true,
        )?;
    }
    if !all_ok {
        return Err(anyhow!("a drag fit fell below r^2 = {R_SQUARED_FLOOR}"));
    }
    Ok(())
}

// ------------------------------------------------------------------
// fall

#[derive(clap::Args, Debug)]
pub struct FallArgs {
    /// Cusp exponent: drives a computed drag table
    #[arg(long)]
    alpha: Option<f64>,
    /// Power-law drag prefactor (with --beta, replaces --alpha)
    #[arg(long)]
    k: Option<f64>,
    /// Power-law drag exponent
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    h0: Option<f64>,
    /// Driving force (rho_S - rho_F) g |S|
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    h_contact: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Lowest tabulated gap for the computed drag table
    #[arg(long)]
    table_h_min: Option<f64>,
    #[arg(long)]
    table_samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

pub fn cmd_fall(args: FallArgs) -> Result<()> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let alpha = match args.alpha {
        Some(a) => Some(a),
        None => file.get("alpha").map(|s| s.parse::<f64>()).transpose()
            .map_err(|_| usage("bad alpha in config"))?,
    };
    let k = resolve(args.k, &file, "k", f64::NAN)?;
    let beta = resolve(args.beta, &file, "beta", f64::NAN)?;
    let h0 = resolve(args.h0, &file, "h0", 1.0)?;
    let g_force = resolve(args.g, &file, "g", 1.0)?;
    let mu = resolve(args.mu, &file, "mu", 1.0)?;
    let h_contact = resolve(args.h_contact, &file, "h-contact", 1e-9 * h0)?;
    let rel_tol = resolve(args.rel_tol, &file, "rel-tol", 1e-6)?;
    let table_h_min = resolve(args.table_h_min, &file, "table-h-min", 1e-6 * h0)?;
    let table_samples = resolve(args.table_samples, &file, "table-samples", 25usize)?;
    let tol = resolve(args.tol, &file, "tol", 1e-8)?;
    let out = resolve(args.out, &file, "out", PathBuf::from("fall.csv"))?;

    let powerlaw = k.is_finite() && beta.is_finite();
    if powerlaw == alpha.is_some() {
        return Err(usage("give exactly one drag source: --alpha, or --k with --beta"));
    }

    let (profile, drag, source_desc) = if powerlaw {
        if !(k > 0.0 && beta >= 0.0) {
            return Err(usage("need k > 0 and beta >= 0"));
        }
        (
            RoughProfile::with_alpha(0.5).unwrap(),
            DragSource::PowerLaw { k, beta },
            format!("power_law k={k} beta={beta}"),
        )
    } else {
        let alpha = alpha.unwrap();
        let profile = profile_for(alpha)?;
        let model = DragModel::with_tol(profile, mu, tol)?;
        let table = model.table(table_h_min, h0, table_samples)?;
        let desc = format!("computed_table alpha={alpha} beta_fit={:.6}", table.beta_fit());
        (profile, DragSource::Table(table), desc)
    };
    // horizon: fifteen half-fall times unless overridden
    let t_half = drag.potential(0.5 * h0, h0).abs() / g_force;
    let t_max = resolve(args.t_max, &file, "t-max", 15.0 * t_half)?;

    let params = FallParams { profile, h0, g_force, mu, drag, h_contact, t_max };
    let traj = simulate_fall(&params, rel_tol)?;
    let classified = match traj.classified {
        FallClass::Collision => "Collision",
        FallClass::NoCollisionWithinHorizon => "NoCollisionWithinHorizon",
    };

    let config: Vec<(&str, String)> = vec![
        ("alpha", alpha.map_or("".into(), |a| a.to_string())),
        ("k", if k.is_finite() { fmt_float(k) } else { "".into() }),
        ("beta", if beta.is_finite() { fmt_float(beta) } else { "".into() }),
        ("h0", fmt_float(h0)),
        ("g", fmt_float(g_force)),
        ("mu", fmt_float(mu)),
        ("h-contact", fmt_float(h_contact)),
        ("t-max", fmt_float(t_max)),
        ("rel-tol", fmt_float(rel_tol)),
        ("table-h-min", fmt_float(table_h_min)),
        ("table-samples", table_samples.to_string()),
        ("tol", fmt_float(tol)),
        ("out", out.display().to_string()),
    ];
    let mut csv = CsvReport::new("fall", &config, &["t", "h", "hdot", "N_of_h", "R_model"]);
    let mut max_defect = 0.0_f64;
    for s in &traj.samples {
        let pot = params.drag.potential(s.h, h0);
        let defect = pot + g_force * s.t;
        max_defect = max_defect.max(defect.abs());
        csv.row(&[
            fmt_float(s.t),
            fmt_float(s.h),
            fmt_float(s.hdot),
            fmt_float(pot),
            fmt_float(defect),
        ]);
    }
    csv.write(&out)?;

    let last = traj.samples.last().unwrap();
    let regime = alpha.map(|a| collision_regime(a).unwrap());
    let summary = json!({
        "config": config_json(&config),
        "source": source_desc,
        "alpha": alpha,
        "beta": regime.map_or(beta, |r| r.beta),
        "beta_fit": params.drag.beta(),
        "classified": classified,
        "contact_time": traj.contact_time,
        "t_end": last.t,
        "h_end": last.h,
        "steps": traj.samples.len(),
        "max_energy_defect": max_defect,
    });
    write_json(&json_path(&out), &summary)?;
    println!(
        "{classified}: t_end {:.6e}, h_end {:.6e}, contact_time {:?}",
        last.t, last.h, traj.contact_time
    );
    if let Some(script) = &args.plot_script {
        write_plot_script(script, &out, "quasi-static fall", 1, &[(2, "h")], false)?;
    }
    Ok(())
}

// ------------------------------------------------------------------
// bmo-check

#[derive(clap::Args, Debug)]
pub struct BmoCheckArgs {
    /// Comma-separated grid resolutions (even, at least 8)
    #[arg(long)]
    resolutions: Option<String>,
    /// Comma-separated catalog names, or "all"
    #[arg(long)]
    functions: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn cmd_bmo_check(args: BmoCheckArgs) -> Result<()> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let resolutions_raw = args
        .resolutions
        .or_else(|| file.get("resolutions").map(|s| s.to_string()))
        .unwrap_or_else(|| "128,256,512".to_string());
    let resolutions = parse_usize_list(&resolutions_raw).map_err(|e| usage(e.to_string()))?;
    if resolutions.is_empty() || resolutions.iter().any(|n| *n < 8 || n % 2 != 0) {
        return Err(usage("resolutions must be even and at least 8"));
    }
    let functions_raw = args
        .functions
        .or_else(|| file.get("functions").map(|s| s.to_string()))
        .unwrap_or_else(|| "all".to_string());
    let functions: Vec<CatalogFunction> = if functions_raw.trim() == "all" {
        CatalogFunction::all().to_vec()
    } else {
        functions_raw
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                CatalogFunction::from_name(s.trim())
                    .ok_or_else(|| usage(format!("unknown catalog function '{s}'")))
            })
            .collect::<Result<_>>()?
    };
    let out = resolve(args.out, &file, "out", PathBuf::from("bmo_check.json"))?;

    let config: Vec<(&str, String)> = vec![
        ("resolutions", resolutions.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
        ("functions", functions.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")),
        ("out", out.display().to_string()),
    ];

    let mut blocks = Vec::new();
    for f in &functions {
        let mut rows = Vec::new();
        let mut semis = Vec::new();
        for &n in &resolutions {
            let grid = f.rasterize(n).map_err(|e| usage(e.to_string()))?;
            let rep = bmo_seminorm(&grid, &BallStrategy::dyadic(&grid))?;
            let l2 = gapflow::bmo::lp_norm(&grid, 2.0)?;
            let l4 = gapflow::bmo::lp_norm(&grid, 4.0)?;
            let interp = interpolation_check(&grid, 2.0, 0.5).ok();
            let h1 = h1_embedding_check(&grid).ok();
            let sandwich = rep.seminorm_inf <= rep.seminorm_mean
                && rep.seminorm_mean <= 2.0 * rep.seminorm_inf;
            semis.push(rep.seminorm_mean);
            rows.push(json!({
                "n": n,
                "seminorm_mean": rep.seminorm_mean,
                "seminorm_inf": rep.seminorm_inf,
                "sandwich_ok": sandwich || rep.seminorm_mean == 0.0,
                "argmax_ball": {
                    "center": rep.argmax_ball.center,
                    "radius": rep.argmax_ball.radius,
                },
                "l2": l2,
                "l4": l4,
                "interpolation_ratio_p2_theta_half": interp,
                "h1_embedding_ratio": h1,
            }));
        }
        let growth: Vec<Option<f64>> = semis
            .windows(2)
            .map(|w| if w[0] > 0.0 { Some(w[1] / w[0]) } else { None })
            .collect();
        println!(
            "{:12}: seminorms {:?}, growth {:?}",
            f.name(),
            semis.iter().map(|s| format!("{s:.4}")).collect::<Vec<_>>(),
            growth
                .iter()
                .map(|g| g.map_or("n/a".into(), |g| format!("{g:.4}")))
                .collect::<Vec<_>>()
        );
        blocks.push(json!({
            "name": f.name(),
            "bmo_class": f.is_bmo(),
            "rows": rows,
            "refinement_growth": growth,
        }));
    }
    write_json(&out, &json!({ "config": config_json(&config), "functions": blocks }))?;
    Ok(())
}
