//! Acceptance suite: the eleven headline checks, one test per criterion,
//! each printing a single PASS/FAIL line with its measured numbers.
//!
//! Run with `cargo test -p gapflow --test acceptance -- --nocapture` to
//! see the lines for passing criteria too (the harness always shows the
//! output of failing ones).

use gapflow::bmo::{bmo_seminorm, interpolation_check, BallStrategy};
use gapflow::catalog::CatalogFunction;
use gapflow::drag::{collision_regime, DragModel, DragTable, PairingBreakdown};
use gapflow::fall::{
    contact_time_closed_form, simulate_fall, ContactTime, DragSource, FallClass, FallParams,
};
use gapflow::field::{
    dh_velocity, pressure_gradient, stokes_residual, velocity, velocity_gradient,
};
use gapflow::fit::{fit_power_law, log_spaced, FIT_SAMPLES, FIT_WINDOW};
use gapflow::geometry::{gamma, lemma10_classify, lemma10_integral, Lemma10Regime};
use gapflow::norms::{GapNorms, Prop8Report};
use gapflow::{GapPoint, RoughProfile};
use rand::{Rng, SeedableRng};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn report(id: u32, desc: &str, pass: bool, details: &str) {
    println!(
        "[criterion {id:02}] {} — {desc}: {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {details}");
}

fn within_budget(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

// ---------------------------------------------------------------- shared sweeps

struct NormSweep {
    alpha: f64,
    reports: Vec<Prop8Report>,
}

fn norm_sweeps() -> &'static Vec<NormSweep> {
    static SWEEPS: OnceLock<Vec<NormSweep>> = OnceLock::new();
    SWEEPS.get_or_init(|| {
        let hs = log_spaced(FIT_WINDOW.0, FIT_WINDOW.1, FIT_SAMPLES);
        ALPHAS
            .iter()
            .map(|&alpha| {
                let norms = GapNorms::new(RoughProfile::with_alpha(alpha).unwrap()).unwrap();
                NormSweep {
                    alpha,
                    reports: hs.iter().map(|&h| norms.prop8(h).unwrap()).collect(),
                }
            })
            .collect()
    })
}

struct DragSweep {
    alpha: f64,
    hs: Vec<f64>,
    n: Vec<f64>,
    reynolds: Vec<f64>,
    pairings: Vec<PairingBreakdown>,
}

fn drag_sweeps() -> &'static Vec<DragSweep> {
    static SWEEPS: OnceLock<Vec<DragSweep>> = OnceLock::new();
    SWEEPS.get_or_init(|| {
        let hs = log_spaced(FIT_WINDOW.0, FIT_WINDOW.1, FIT_SAMPLES);
        ALPHAS
            .iter()
            .map(|&alpha| {
                let model = DragModel::new(RoughProfile::with_alpha(alpha).unwrap(), 1.0).unwrap();
                let mut n = Vec::new();
                let mut reynolds = Vec::new();
                let mut pairings = Vec::new();
                for &h in &hs {
                    let dirichlet = model.dirichlet_energy(h).unwrap();
                    let pairing = model.residual_pairing(h).unwrap();
                    n.push(dirichlet + pairing.by_parts);
                    reynolds.push(model.reynolds(h).unwrap());
                    pairings.push(pairing);
                }
                DragSweep { alpha, hs: hs.clone(), n, reynolds, pairings }
            })
            .collect()
    })
}

// ---------------------------------------------------------------- criteria

#[test]
fn criterion_01_lemma10_closed_form_oracle() {
    let start = Instant::now();
    let profile = RoughProfile::new(1.0, 1.0).unwrap();
    let mut worst = 0.0_f64;
    for &h in &[1.0, 1e-2, 1e-4, 1e-6, 1e-8] {
        let v = lemma10_integral(0.0, 1.0, &profile, h).unwrap();
        let exact = 2.0 * (1.0 / h.sqrt()).atan() / h.sqrt();
        worst = worst.max(((v - exact) / exact).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-8 && within_budget(elapsed, Duration::from_secs(1));
    report(
        1,
        "Lemma 10 arctan oracle at h in {1..1e-8}",
        pass,
        &format!("max relative error {worst:.3e} (tol 1e-8), runtime {elapsed:.2?} (< 1 s)"),
    );
}

#[test]
fn criterion_02_lemma10_regimes() {
    let start = Instant::now();
    // 12 triples (p, q, alpha): six power-law, three logarithmic, three bounded
    let power_law = [
        (0.0, 1.0, 1.0),
        (2.0, 3.0, 1.0),
        (2.0, 3.0, 0.5),
        (2.0, 3.0, 0.25),
        (1.0, 2.0, 1.0),
        (0.0, 2.0, 0.75),
    ];
    let logarithmic = [(1.0, 1.0, 1.0), (2.0, 2.0, 0.5), (0.25, 1.0, 0.25)];
    let bounded = [(2.0, 1.0, 1.0), (3.0, 1.0, 0.5), (1.5, 1.0, 0.25)];

    let mut lines = Vec::new();
    let mut pass = true;

    let hs = log_spaced(FIT_WINDOW.0, FIT_WINDOW.1, FIT_SAMPLES);
    for &(p, q, alpha) in &power_law {
        let profile = RoughProfile::with_alpha(alpha).unwrap();
        let expected = match lemma10_classify(p, q, &profile).unwrap() {
            Lemma10Regime::PowerLaw { exponent } => exponent,
            other => panic!("triple ({p},{q},{alpha}) classified {other:?}"),
        };
        let samples: Vec<(f64, f64)> = hs
            .iter()
            .map(|&h| (h, lemma10_integral(p, q, &profile, h).unwrap()))
            .collect();
        let fit = fit_power_law(&samples, FIT_WINDOW).unwrap();
        let ok = (fit.exponent - expected).abs() <= 0.02;
        pass &= ok;
        lines.push(format!(
            "PL({p},{q},{alpha}): {:.4} vs {expected:.4}{}",
            fit.exponent,
            if ok { "" } else { " <-- off" }
        ));
    }
    for &(p, q, alpha) in &logarithmic {
        let profile = RoughProfile::with_alpha(alpha).unwrap();
        assert_eq!(lemma10_classify(p, q, &profile).unwrap(), Lemma10Regime::Logarithmic);
        let ratios: Vec<f64> = hs
            .iter()
            .map(|&h| lemma10_integral(p, q, &profile, h).unwrap() / h.ln().abs())
            .collect();
        let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
        let ok = lo > 0.0 && hi / lo <= 3.0;
        pass &= ok;
        lines.push(format!(
            "LOG({p},{q},{alpha}): ratio band {:.3}{}",
            hi / lo,
            if ok { "" } else { " <-- off" }
        ));
    }
    for &(p, q, alpha) in &bounded {
        let profile = RoughProfile::with_alpha(alpha).unwrap();
        assert_eq!(lemma10_classify(p, q, &profile).unwrap(), Lemma10Regime::Bounded);
        // two decades of small h
        let vals: Vec<f64> = log_spaced(1e-7, 1e-5, 9)
            .into_iter()
            .map(|h| lemma10_integral(p, q, &profile, h).unwrap())
            .collect();
        let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
        let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
        let ok = hi / lo <= 1.5;
        pass &= ok;
        lines.push(format!(
            "BND({p},{q},{alpha}): band {:.4}{}",
            hi / lo,
            if ok { "" } else { " <-- off" }
        ));
    }
    let elapsed = start.elapsed();
    pass &= within_budget(elapsed, Duration::from_secs(30));
    report(
        2,
        "Lemma 10 trichotomy over 12 triples",
        pass,
        &format!("{}; runtime {elapsed:.2?} (< 30 s)", lines.join("; ")),
    );
}

#[test]
fn criterion_03_gradient_norm_exponent() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for sweep in norm_sweeps() {
        let samples: Vec<(f64, f64)> =
            sweep.reports.iter().map(|r| (r.h, r.l2_grad_w)).collect();
        let fit = fit_power_law(&samples, FIT_WINDOW).unwrap();
        let target = -3.0 * sweep.alpha / (2.0 * (1.0 + sweep.alpha));
        let ok = (fit.exponent - target).abs() <= 0.03 && fit.r_squared >= 0.999;
        pass &= ok;
        lines.push(format!(
            "alpha {}: {:.4} vs {target:.4} (r2 {:.6}){}",
            sweep.alpha,
            fit.exponent,
            fit.r_squared,
            if ok { "" } else { " <-- off" }
        ));
    }
    let elapsed = start.elapsed();
    pass &= within_budget(elapsed, Duration::from_secs(120));
    report(
        3,
        "gradient L2 exponent -3a/(2(1+a)) within 0.03",
        pass,
        &format!("{}; runtime {elapsed:.2?} (< 2 min)", lines.join("; ")),
    );
}

#[test]
fn criterion_04_bounded_norms() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for sweep in norm_sweeps() {
        let band = |get: fn(&Prop8Report) -> f64| {
            let hi = sweep.reports.iter().map(|r| get(r)).fold(f64::MIN, f64::max);
            let lo = sweep.reports.iter().map(|r| get(r)).fold(f64::MAX, f64::min);
            hi / lo
        };
        let bands = [band(|r| r.l2_w), band(|r| r.weighted_sup), band(|r| r.weighted_dh)];
        let ok = bands.iter().all(|b| *b <= 2.0);
        pass &= ok;
        lines.push(format!(
            "alpha {}: l2_w {:.3}, sup {:.3}, dh {:.3}{}",
            sweep.alpha,
            bands[0],
            bands[1],
            bands[2],
            if ok { "" } else { " <-- off" }
        ));
    }
    let elapsed = start.elapsed();
    report(
        4,
        "velocity L2 / weighted sup / weighted dh vary by at most 2x",
        pass,
        &format!("{}; runtime {elapsed:.2?}", lines.join("; ")),
    );
}

#[test]
fn criterion_05_drag_exponents_with_lubrication_oracle() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for sweep in drag_sweeps() {
        let beta = 3.0 * sweep.alpha / (1.0 + sweep.alpha);
        let n_fit = fit_power_law(
            &sweep.hs.iter().copied().zip(sweep.n.iter().copied()).collect::<Vec<_>>(),
            FIT_WINDOW,
        )
        .unwrap();
        let rey_fit = fit_power_law(
            &sweep.hs.iter().copied().zip(sweep.reynolds.iter().copied()).collect::<Vec<_>>(),
            FIT_WINDOW,
        )
        .unwrap();
        let ok = (n_fit.exponent + beta).abs() <= 0.05
            && (rey_fit.exponent + beta).abs() <= 0.05
            && (n_fit.exponent - rey_fit.exponent).abs() <= 0.05;
        pass &= ok;
        lines.push(format!(
            "alpha {}: n {:.4}, reynolds {:.4}, target {:.4}{}",
            sweep.alpha,
            n_fit.exponent,
            rey_fit.exponent,
            -beta,
            if ok { "" } else { " <-- off" }
        ));
    }
    let elapsed = start.elapsed();
    pass &= within_budget(elapsed, Duration::from_secs(180));
    report(
        5,
        "drag and lubrication exponents -3a/(1+a) within 0.05",
        pass,
        &format!("{}; runtime {elapsed:.2?} (< 3 min)", lines.join("; ")),
    );
}

// Note on the band check below: it encodes the expectation that the
// pairing tracks the gradient norm (ratio roughly constant over the
// sweep). The measured pairing of this construction has extra
// cancellation — its leading term is the d11*d22 cross term with
// exponent -a/(1+a), not the gradient-norm envelope -3a/(2(1+a)) — so
// the normalized ratio decays like h^{a/(2(1+a))} and the two-sided
// band opens beyond 5 for a > 1/2 over the four-decade window (measured
// 6.56 at a = 0.75 and 9.52 at a = 1.0, with the maximum at the
// large-h end). The upper bound the pairing must obey therefore holds
// with room to spare while this band assertion fails; it is kept
// as stated deliberately rather than loosened. The route-agreement half
// is the structural check and passes at ~1e-12.
#[test]
fn criterion_06_pairing_structure() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    let norms = norm_sweeps();
    for (sweep, nsweep) in drag_sweeps().iter().zip(norms) {
        // route agreement at every sweep point
        let worst_rel = sweep
            .pairings
            .iter()
            .map(|p| p.rel_err)
            .fold(0.0_f64, f64::max);
        let routes_ok = worst_rel <= 1e-3;
        // ratio |pairing| / ||grad w||_{L2} over the sweep
        let ratios: Vec<f64> = sweep
            .pairings
            .iter()
            .zip(&nsweep.reports)
            .map(|(p, r)| p.by_parts.abs() / r.l2_grad_w)
            .collect();
        let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
        let band = hi / lo;
        let band_ok = band <= 5.0;
        // the one-sided Prop 9 statement: no blow-up of the ratio as h -> 0
        // (the maximum sits at the large-h end of the window)
        let sup_at_large_h = ratios.last().copied().unwrap_or(f64::NAN);
        pass &= routes_ok && band_ok;
        lines.push(format!(
            "alpha {}: routes {:.2e}{}, ratio band {band:.2} (sup {hi:.3} at {} end){}",
            sweep.alpha,
            worst_rel,
            if routes_ok { "" } else { " <-- off" },
            if (hi - sup_at_large_h).abs() < 1e-12 * hi { "large-h" } else { "small-h" },
            if band_ok { "" } else { " <-- band > 5" }
        ));
    }
    let elapsed = start.elapsed();
    report(
        6,
        "pairing routes agree to 1e-3 and |pairing|/grad-norm band <= 5",
        pass,
        &format!("{}; runtime {elapsed:.2?}", lines.join("; ")),
    );
}

#[test]
fn criterion_07_collision_dichotomy() {
    let start = Instant::now();
    let h0 = 0.1;
    let g_force = 1.0;
    let mut lines = Vec::new();
    let mut pass = true;
    let mut worst: Duration = Duration::ZERO;
    for &alpha in &[0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 1.0] {
        let t0 = Instant::now();
        let profile = RoughProfile::with_alpha(alpha).unwrap();
        let model = DragModel::new(profile, 1.0).unwrap();
        let table = model.table(1e-6 * h0, h0, 25).unwrap();
        let t_half = table.potential(0.5 * h0, h0).abs() / g_force;
        let params = FallParams {
            profile,
            h0,
            g_force,
            mu: 1.0,
            drag: DragSource::Table(table),
            h_contact: FallParams::default_h_contact(h0),
            t_max: 15.0 * t_half,
        };
        let traj = simulate_fall(&params, 1e-6).unwrap();
        let expected = if collision_regime(alpha).unwrap().collides {
            FallClass::Collision
        } else {
            FallClass::NoCollisionWithinHorizon
        };
        let per_alpha = t0.elapsed();
        worst = worst.max(per_alpha);
        let ok = traj.classified == expected && within_budget(per_alpha, Duration::from_secs(60));
        pass &= ok;
        lines.push(format!(
            "alpha {alpha}: {:?}{}",
            traj.classified,
            if ok { "" } else { " <-- wrong" }
        ));
    }
    let elapsed = start.elapsed();
    report(
        7,
        "model dichotomy: contact iff alpha < 1/2 (critical 0.5 excluded)",
        pass,
        &format!(
            "{}; slowest alpha {worst:.2?} (< 1 min), total {elapsed:.2?}",
            lines.join("; ")
        ),
    );
}

#[test]
fn criterion_08_contact_time_oracle() {
    let start = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let k = rng.gen_range(0.1..10.0);
        let beta = rng.gen_range(0.0..0.9);
        let h0 = rng.gen_range(0.1..10.0);
        let g_force = rng.gen_range(0.1..10.0);
        let params = FallParams {
            profile: RoughProfile::with_alpha(0.5).unwrap(),
            h0,
            g_force,
            mu: 1.0,
            drag: DragSource::PowerLaw { k, beta },
            h_contact: FallParams::default_h_contact(h0),
            t_max: 1e9,
        };
        let expected = match contact_time_closed_form(k, beta, h0, g_force) {
            ContactTime::Finite(t) => t,
            ContactTime::Infinite => unreachable!("beta < 1"),
        };
        let got = simulate_fall(&params, 1e-7).unwrap().contact_time.unwrap();
        worst = worst.max(((got - expected) / expected).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-4;
    report(
        8,
        "simulated contact time vs separable-ODE closed form (10 random runs)",
        pass,
        &format!("max relative error {worst:.3e} (tol 1e-4); runtime {elapsed:.2?}"),
    );
}

#[test]
fn criterion_09_field_identities() {
    let start = Instant::now();
    let mut worst_div = 0.0_f64;
    let mut worst_grad = 0.0_f64;
    let mut worst_dh = 0.0_f64;
    let mut worst_res = 0.0_f64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for &alpha in &ALPHAS {
        let profile = RoughProfile::with_alpha(alpha).unwrap();
        for &h in &[1e-2, 1e-4] {
            for _ in 0..100 {
                let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
                let x1 = sign * rng.gen_range(0.05..0.9);
                let g = gamma(&profile, h, x1).unwrap();
                let x2 = g * rng.gen_range(0.1..0.9);
                let pt = GapPoint::new(x1, x2);

                let grad = velocity_gradient(&profile, h, pt).unwrap();
                worst_div = worst_div.max((grad[0][0] + grad[1][1]).abs());

                let e1 = 1e-5 * x1.abs();
                let e2 = 1e-5 * g;
                let ev = |x1: f64, x2: f64| velocity(&profile, h, GapPoint::new(x1, x2)).unwrap();
                let wxp = ev(x1 + e1, x2);
                let wxm = ev(x1 - e1, x2);
                let wyp = ev(x1, x2 + e2);
                let wym = ev(x1, x2 - e2);
                let gscale = grad.iter().flatten().fold(1e-300_f64, |m, v| m.max(v.abs()));
                for k in 0..2 {
                    let f1 = (wxp[k] - wxm[k]) / (2.0 * e1);
                    let f2 = (wyp[k] - wym[k]) / (2.0 * e2);
                    worst_grad = worst_grad
                        .max(((grad[0][k] - f1) / gscale).abs())
                        .max(((grad[1][k] - f2) / gscale).abs());
                }

                let dh = dh_velocity(&profile, h, pt).unwrap();
                let eh = 1e-5 * h;
                let whp = velocity(&profile, h + eh, pt).unwrap();
                let whm = velocity(&profile, h - eh, pt).unwrap();
                let dscale = dh.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
                for k in 0..2 {
                    let fd = (whp[k] - whm[k]) / (2.0 * eh);
                    worst_dh = worst_dh.max(((dh[k] - fd) / dscale).abs());
                }

                let res = stokes_residual(&profile, h, pt, 1.0).unwrap();
                let dq = pressure_gradient(&profile, h, pt).unwrap();
                let er1 = 2e-4 * x1.abs().min(g);
                let er2 = 2e-4 * g;
                let w0 = ev(x1, x2);
                let rxp = ev(x1 + er1, x2);
                let rxm = ev(x1 - er1, x2);
                let ryp = ev(x1, x2 + er2);
                let rym = ev(x1, x2 - er2);
                let rscale = res.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
                for k in 0..2 {
                    let lap = (rxp[k] - 2.0 * w0[k] + rxm[k]) / (er1 * er1)
                        + (ryp[k] - 2.0 * w0[k] + rym[k]) / (er2 * er2);
                    worst_res = worst_res.max(((res[k] - (lap - dq[k])) / rscale).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_div <= 1e-10 && worst_grad <= 1e-4 && worst_dh <= 1e-4 && worst_res <= 1e-4;
    report(
        9,
        "divergence-free and finite-difference field oracles",
        pass,
        &format!(
            "div {worst_div:.2e} (<= 1e-10), grad {worst_grad:.2e}, dh {worst_dh:.2e}, residual {worst_res:.2e} (<= 1e-4); runtime {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_10_bmo_discrimination() {
    let start = Instant::now();
    let resolutions = [128usize, 256, 512];
    let mut semis_log = Vec::new();
    let mut semis_inv = Vec::new();
    let mut sandwich_ok = true;
    for &n in &resolutions {
        for f in CatalogFunction::all() {
            let grid = f.rasterize(n).unwrap();
            let rep = bmo_seminorm(&grid, &BallStrategy::dyadic(&grid)).unwrap();
            if rep.seminorm_mean > 0.0 {
                sandwich_ok &= rep.seminorm_inf <= rep.seminorm_mean
                    && rep.seminorm_mean <= 2.0 * rep.seminorm_inf;
            }
            match f {
                CatalogFunction::LogAbs => semis_log.push(rep.seminorm_mean),
                CatalogFunction::InvSqrt => semis_inv.push(rep.seminorm_mean),
                _ => {}
            }
        }
    }
    let log_growth = semis_log[2] / semis_log[1];
    let inv_growth_1 = semis_inv[1] / semis_inv[0];
    let inv_growth_2 = semis_inv[2] / semis_inv[1];
    let elapsed = start.elapsed();
    let pass = log_growth <= 1.1
        && inv_growth_1 >= 1.3
        && inv_growth_2 >= 1.3
        && sandwich_ok
        && within_budget(elapsed, Duration::from_secs(120));
    report(
        10,
        "BMO separates log|x| from |x|^{-1/2}; median/mean sandwich holds",
        pass,
        &format!(
            "log growth 256->512 {log_growth:.4} (<= 1.1), inv_sqrt growth {inv_growth_1:.4}/{inv_growth_2:.4} (>= 1.3), sandwich {sandwich_ok}; runtime {elapsed:.2?} (< 2 min)"
        ),
    );
}

#[test]
fn criterion_11_interpolation_stability() {
    let start = Instant::now();
    // The inequality under test applies to BMO members; the constant is
    // degenerate by the operator's precondition and |x|^{-1/2} is not BMO.
    let family: Vec<CatalogFunction> = CatalogFunction::all()
        .into_iter()
        .filter(|f| f.is_bmo() && *f != CatalogFunction::Constant)
        .collect();
    let mut lines = Vec::new();
    let mut pass = true;
    for f in &family {
        let r256 = interpolation_check(&f.rasterize(256).unwrap(), 2.0, 0.5).unwrap();
        let r512 = interpolation_check(&f.rasterize(512).unwrap(), 2.0, 0.5).unwrap();
        let change = ((r512 - r256) / r256).abs();
        let ok = change <= 0.10;
        pass &= ok;
        lines.push(format!(
            "{}: {:.4} -> {:.4} ({:.2}%){}",
            f.name(),
            r256,
            r512,
            100.0 * change,
            if ok { "" } else { " <-- off" }
        ));
    }
    let elapsed = start.elapsed();
    report(
        11,
        "interpolation ratios stable within 10% from N=256 to N=512",
        pass,
        &format!("{}; runtime {elapsed:.2?}", lines.join("; ")),
    );
}
