//! Quasi-static fall of the body under constant load: `n(h) h' = -G`.
//!
//! Dropping the sublinear remainder from the energy balance turns the
//! descent into a separable scalar ODE. Whether the body reaches the wall
//! in finite time depends only on the integrability of the drag at
//! `h = 0`: for `n ~ K h^{-beta}` the contact time is
//! `K h0^{1-beta} / ((1-beta) G)` when `beta < 1` and infinite otherwise.
//!
//! The integrator is an adaptive Dormand–Prince 5(4) pair with the step
//! clamped so the gap never shrinks by more than a quarter per step, and
//! the error budget proportional to the per-step gap change so that the
//! accumulated drift scales linearly with the requested tolerance. A
//! contact event is located by bisecting the last step.

use crate::drag::DragTable;
use crate::error::{Error, Result};
use crate::geometry::RoughProfile;

/// Where the integrator gets its drag law from.
#[derive(Debug, Clone)]
pub enum DragSource {
    /// `n(h) = k h^{-beta}`.
    PowerLaw { k: f64, beta: f64 },
    /// Interpolated sweep table with power-law extrapolation below it.
    Table(DragTable),
}

impl DragSource {
    pub fn n(&self, h: f64) -> f64 {
        match self {
            DragSource::PowerLaw { k, beta } => k * h.powf(-beta),
            DragSource::Table(t) => t.n_at(h),
        }
    }

    /// `N(h) = int_{h0}^{h} n`, vanishing at `h0`.
    pub fn potential(&self, h: f64, h0: f64) -> f64 {
        match self {
            DragSource::PowerLaw { k, beta } => {
                if (beta - 1.0).abs() < 1e-12 {
                    k * (h / h0).ln()
                } else {
                    k * (h.powf(1.0 - beta) - h0.powf(1.0 - beta)) / (1.0 - beta)
                }
            }
            DragSource::Table(t) => t.potential(h, h0),
        }
    }

    /// Small-gap drag exponent (fitted one for tables).
    pub fn beta(&self) -> f64 {
        match self {
            DragSource::PowerLaw { beta, .. } => *beta,
            DragSource::Table(t) => t.beta_fit(),
        }
    }

    /// Remaining fall time from gap `h` to zero under load `g_force`,
    /// using the small-gap power law; `None` when the drag is not
    /// integrable there (`beta >= 1`).
    fn tail_time(&self, h: f64, g_force: f64) -> Option<f64> {
        let (k, beta) = match self {
            DragSource::PowerLaw { k, beta } => (*k, *beta),
            DragSource::Table(t) => (t.k_fit(), t.beta_fit()),
        };
        if beta < 1.0 {
            Some(k * h.powf(1.0 - beta) / ((1.0 - beta) * g_force))
        } else {
            None
        }
    }
}

/// Everything a fall run needs.
#[derive(Debug, Clone)]
pub struct FallParams {
    pub profile: RoughProfile,
    /// Initial gap, `> 0`.
    pub h0: f64,
    /// Net driving force `(rho_S - rho_F) g |S(0)| > 0`: the body is
    /// heavier than the fluid it displaces.
    pub g_force: f64,
    /// Fluid viscosity (already folded into the drag source; kept for
    /// reporting).
    pub mu: f64,
    pub drag: DragSource,
    /// Gap below which the run counts as contact; must sit below `h0`.
    pub h_contact: f64,
    /// Time horizon for the no-collision verdict.
    pub t_max: f64,
}

impl FallParams {
    /// Default contact threshold: `1e-9 h0` (a numerical zero; a true
    /// `h = 0` is unreachable in floating point when `beta >= 1`).
    pub fn default_h_contact(h0: f64) -> f64 {
        1e-9 * h0
    }

    fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0) {
            return Err(Error::domain(format!("initial gap must be positive, got {}", self.h0)));
        }
        if !(self.g_force > 0.0) {
            return Err(Error::domain(format!(
                "driving force must be positive (heavy body), got {}",
                self.g_force
            )));
        }
        if !(self.h_contact > 0.0 && self.h_contact < self.h0) {
            return Err(Error::domain(format!(
                "contact threshold must satisfy 0 < h_contact < h0, got {}",
                self.h_contact
            )));
        }
        if !(self.t_max > 0.0) {
            return Err(Error::domain(format!("horizon must be positive, got {}", self.t_max)));
        }
        Ok(())
    }
}

/// Verdict of a fall run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallClass {
    Collision,
    NoCollisionWithinHorizon,
}

/// One recorded integrator state.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub h: f64,
    pub hdot: f64,
}

/// Time series of the fall with the contact verdict.
#[derive(Debug, Clone)]
pub struct FallTrajectory {
    pub samples: Vec<TrajectorySample>,
    /// Present only for collisions: crossing time of `h_contact` plus the
    /// closed-form remainder down to `h = 0` when that is finite.
    pub contact_time: Option<f64>,
    pub classified: FallClass,
}

/// Finite or infinite contact time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContactTime {
    Finite(f64),
    Infinite,
}

/// Separable-ODE contact time for `n = K h^{-beta}`:
/// `K h0^{1-beta} / ((1-beta) G)` if `beta < 1`, infinite otherwise.
pub fn contact_time_closed_form(k: f64, beta: f64, h0: f64, g_force: f64) -> ContactTime {
    assert!(k > 0.0 && h0 > 0.0 && g_force > 0.0 && beta >= 0.0);
    if beta < 1.0 {
        ContactTime::Finite(k * h0.powf(1.0 - beta) / ((1.0 - beta) * g_force))
    } else {
        ContactTime::Infinite
    }
}

// Dormand–Prince 5(4) tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One 5(4) step of `h' = f(h)`: returns (5th-order value, error estimate).
fn dopri5_step<F: Fn(f64) -> f64>(f: &F, h: f64, dt: f64) -> (f64, f64) {
    let k1 = f(h);
    let k2 = f(h + dt * A2[0] * k1);
    let k3 = f(h + dt * (A3[0] * k1 + A3[1] * k2));
    let k4 = f(h + dt * (A4[0] * k1 + A4[1] * k2 + A4[2] * k3));
    let k5 = f(h + dt * (A5[0] * k1 + A5[1] * k2 + A5[2] * k3 + A5[3] * k4));
    let k6 = f(h + dt * (A6[0] * k1 + A6[1] * k2 + A6[2] * k3 + A6[3] * k4 + A6[4] * k5));
    let y5 = h + dt * (B5[0] * k1 + B5[2] * k3 + B5[3] * k4 + B5[4] * k5 + B5[5] * k6);
    let k7 = f(y5);
    let y4 = h
        + dt * (B4[0] * k1 + B4[2] * k3 + B4[3] * k4 + B4[4] * k5 + B4[5] * k6 + B4[6] * k7);
    (y5, (y5 - y4).abs())
}

/// Integrate the reduced fall until contact or the horizon.
pub fn simulate_fall(params: &FallParams, rel_tol: f64) -> Result<FallTrajectory> {
    params.validate()?;
    if !(rel_tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {rel_tol}")));
    }
    let g_force = params.g_force;
    let f = |h: f64| -g_force / params.drag.n(h.max(1e-300));

    let mut t = 0.0_f64;
    let mut h = params.h0;
    let mut samples = vec![TrajectorySample { t, h, hdot: f(h) }];

    let char_time = params.h0 / f(params.h0).abs();
    let mut dt = (0.01 * char_time).min(params.t_max);
    let dt_floor = 1e-14 * char_time.min(params.t_max);

    let mut contact: Option<(f64, f64)> = None; // (crossing time, gap there)
    while t < params.t_max {
        // clamp: per-step gap change at most a quarter of the gap, and do
        // not overrun the horizon
        let rate = f(h).abs();
        dt = dt.min(0.25 * h / rate).min(params.t_max - t).max(dt_floor);
        let (y5, err) = dopri5_step(&f, h, dt);
        let budget = rel_tol * (y5 - h).abs() + 1e-16 * h;
        if err <= budget || dt <= dt_floor * 2.0 {
            if err > budget {
                return Err(Error::StepUnderflow { t, h });
            }
            if y5 <= params.h_contact {
                let (t_cross, h_cross) = bisect_contact(&f, h, dt, params.h_contact);
                t += t_cross;
                h = h_cross;
                samples.push(TrajectorySample { t, h, hdot: f(h) });
                contact = Some((t, h));
                break;
            }
            t += dt;
            h = y5;
            samples.push(TrajectorySample { t, h, hdot: f(h) });
        }
        let fac = if err > 0.0 {
            (0.9 * (budget / err).powf(0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        dt *= fac;
        if dt < dt_floor {
            return Err(Error::StepUnderflow { t, h });
        }
    }

    match contact {
        Some((t_cross, h_cross)) => {
            let tail = params.drag.tail_time(h_cross, g_force).unwrap_or(0.0);
            Ok(FallTrajectory {
                samples,
                contact_time: Some(t_cross + tail),
                classified: FallClass::Collision,
            })
        }
        None => Ok(FallTrajectory {
            samples,
            contact_time: None,
            classified: FallClass::NoCollisionWithinHorizon,
        }),
    }
}

/// Bisect within one accepted step for the first `dt'` with
/// `h(dt') <= threshold`; returns `(dt', h(dt'))` with the gap at or just
/// below the threshold.
fn bisect_contact<F: Fn(f64) -> f64>(f: &F, h: f64, dt: f64, threshold: f64) -> (f64, f64) {
    let mut lo = 0.0_f64;
    let mut hi = dt;
    let mut h_hi = dopri5_step(f, h, dt).0;
    for _ in 0..200 {
        if hi - lo <= 1e-14 * dt {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let hm = dopri5_step(f, h, mid).0;
        if hm <= threshold {
            hi = mid;
            h_hi = hm;
        } else {
            lo = mid;
        }
    }
    (hi, h_hi)
}

/// Maximum energy-balance defect `|N(h(t)) + G t|` along a trajectory.
///
/// The reduced model is defined by a vanishing remainder, so this is a
/// direct measurement of the combined integrator and table error.
pub fn energy_audit(trajectory: &FallTrajectory, params: &FallParams) -> f64 {
    trajectory
        .samples
        .iter()
        .map(|s| (params.drag.potential(s.h, params.h0) + params.g_force * s.t).abs())
        .fold(0.0, f64::max)
}
