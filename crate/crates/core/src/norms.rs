//! Weighted `L^2` functionals of the gap field and their `h`-scaling.
//!
//! All integrals are tensor products: the `x1` direction uses the same
//! graded adaptive panels as the model integral, and each column
//! `[0, gamma_h(x1)]` uses a fixed 16-point Gauss rule, which is exact
//! because every integrand here is a polynomial of low degree in
//! `s = x2 / gamma_h`.
//!
//! The norms of the full construction also carry a contribution from the
//! smooth outer region, where the field is `h`-independent up to cutoff
//! plumbing. That contribution is modeled by a constant calibrated once
//! at the widest gap `h = delta`: it shifts the diverging quantities by
//! a relative amount that vanishes as `h -> 0` and leaves every fitted
//! exponent intact. Bounded quantities are reported gap-only.

use crate::error::Result;
use crate::field::{gamma_jet, stream_derivs_jet, GammaJet, StreamDerivs};
use crate::fit::log_spaced;
use crate::geometry::RoughProfile;
use crate::quad::{gauss16, graded_panels, integrate_panels, Estimate};
use crate::GapPoint;

/// The four gap functionals at one gap distance.
#[derive(Debug, Clone, Copy)]
pub struct Prop8Report {
    /// Gap distance the row was computed at.
    pub h: f64,
    /// `L^2` norm of the velocity over the gap; stays bounded.
    pub l2_w: f64,
    /// `L^2` norm of the velocity gradient (outer constant included);
    /// diverges like `h^{-3 alpha / (2 (1 + alpha))}`.
    pub l2_grad_w: f64,
    /// `sup_x1 gamma^{3/2} (int_0^gamma |grad w|^2 dx2)^{1/2}`; bounded.
    pub weighted_sup: f64,
    /// `(int int gamma^2 |dh w|^2)^{1/2}`; bounded.
    pub weighted_dh: f64,
    /// The modeled outer-region constant (gradient `L^2` at `h = delta`).
    pub outer_const: f64,
}

/// Gap-region quadrature context with the outer-region calibration.
pub struct GapNorms {
    profile: RoughProfile,
    tol: f64,
    outer_grad_sq: f64,
}

/// Default relative tolerance for the norm quadratures.
pub const NORMS_TOL: f64 = 1e-8;

/// Integrate an even column functional over the gap: `2 int_0^delta col`.
pub(crate) fn integrate_even_columns<F>(
    profile: &RoughProfile,
    h: f64,
    tol: f64,
    endpoint_exponent: Option<f64>,
    mut column: F,
) -> Result<Estimate>
where
    F: FnMut(&GammaJet, f64) -> f64,
{
    let panels = graded_panels(profile.balance_scale(h), profile.delta(), endpoint_exponent);
    let est = integrate_panels(
        |x1: f64| {
            let jet = gamma_jet(profile, h, x1).expect("quadrature nodes avoid the cusp line");
            column(&jet, x1)
        },
        &panels,
        tol,
        4000,
    )?;
    Ok(Estimate { value: 2.0 * est.value, error: 2.0 * est.error })
}

/// Column integral `int_0^gamma f(derivs, x2) dx2` by 16-point Gauss.
pub(crate) fn column_gauss<F>(jet: &GammaJet, x1: f64, mut f: F) -> f64
where
    F: FnMut(&StreamDerivs, f64) -> f64,
{
    gauss16(|x2| f(&stream_derivs_jet(jet, x1, x2), x2), 0.0, jet.g)
}

/// Squared Frobenius norm of the velocity gradient from the stack.
#[inline]
pub(crate) fn grad_sq(d: &StreamDerivs) -> f64 {
    d.d11 * d.d11 + 2.0 * d.d12 * d.d12 + d.d22 * d.d22
}

/// Squared Frobenius norm of the symmetric gradient `D(w)`.
#[inline]
pub(crate) fn sym_grad_sq(d: &StreamDerivs) -> f64 {
    let off = d.d11 - d.d22;
    2.0 * d.d12 * d.d12 + 0.5 * off * off
}

/// Squared velocity `|w|^2 = (d2 psi)^2 + (d1 psi)^2` from the stack.
#[inline]
fn w_sq(d: &StreamDerivs) -> f64 {
    d.d1 * d.d1 + d.d2 * d.d2
}

impl GapNorms {
    /// Context with the default tolerance; calibrates the outer constant.
    pub fn new(profile: RoughProfile) -> Result<Self> {
        GapNorms::with_tol(profile, NORMS_TOL)
    }

    pub fn with_tol(profile: RoughProfile, tol: f64) -> Result<Self> {
        let outer_grad_sq = integrate_even_columns(
            &profile,
            profile.delta(),
            tol,
            Some(profile.alpha()),
            |jet, x1| column_gauss(jet, x1, |d, _| grad_sq(d)),
        )?
        .value;
        Ok(GapNorms { profile, tol, outer_grad_sq })
    }

    pub fn profile(&self) -> &RoughProfile {
        &self.profile
    }

    /// The calibrated outer-region constant, as a gradient `L^2` value.
    pub fn outer_const(&self) -> f64 {
        self.outer_grad_sq.sqrt()
    }

    /// All four gap functionals at gap distance `h`.
    pub fn prop8(&self, h: f64) -> Result<Prop8Report> {
        let a = self.profile.alpha();
        let hint = Some(a);
        let l2_w_sq = integrate_even_columns(&self.profile, h, self.tol, hint, |jet, x1| {
            column_gauss(jet, x1, |d, _| w_sq(d))
        })?
        .value;
        let grad_l2_sq = integrate_even_columns(&self.profile, h, self.tol, hint, |jet, x1| {
            column_gauss(jet, x1, |d, _| grad_sq(d))
        })?
        .value;
        let weighted_dh_sq = integrate_even_columns(&self.profile, h, self.tol, hint, |jet, x1| {
            let g2 = jet.g * jet.g;
            column_gauss(jet, x1, |d, _| g2 * (d.dh1 * d.dh1 + d.dh2 * d.dh2))
        })?
        .value;
        let weighted_sup = self
            .weighted_sup_profile(h, 129)?
            .into_iter()
            .map(|(_, v)| v)
            .fold(0.0_f64, f64::max);
        Ok(Prop8Report {
            h,
            l2_w: l2_w_sq.sqrt(),
            l2_grad_w: (grad_l2_sq + self.outer_grad_sq).sqrt(),
            weighted_sup,
            weighted_dh: weighted_dh_sq.sqrt(),
            outer_const: self.outer_const(),
        })
    }

    /// Per-column weighted gradient norms
    /// `(x1, gamma^{3/2} (int_0^gamma |grad w|^2 dx2)^{1/2})` on a
    /// symmetric log-spaced grid of `n_x1` columns.
    pub fn weighted_sup_profile(&self, h: f64, n_x1: usize) -> Result<Vec<(f64, f64)>> {
        if n_x1 < 16 {
            return Err(crate::Error::Domain(format!(
                "need at least 16 sample columns, got {n_x1}"
            )));
        }
        let delta = self.profile.delta();
        let half = n_x1 / 2;
        let mags = log_spaced(delta * 1e-7, delta, half);
        let mut out = Vec::with_capacity(2 * half);
        for &m in mags.iter().rev() {
            out.push(-m);
        }
        for &m in &mags {
            out.push(m);
        }
        Ok(out
            .into_iter()
            .map(|x1| {
                let jet = gamma_jet(&self.profile, h, x1).expect("x1 != 0 on the grid");
                let col = column_gauss(&jet, x1, |d, _| grad_sq(d));
                (x1, jet.g.powf(1.5) * col.sqrt())
            })
            .collect())
    }
}

/// Tensor-product quadrature of an arbitrary pointwise integrand over the
/// gap region (both signs of `x1`; no parity assumed).
pub fn gap_integral<F>(integrand: F, profile: &RoughProfile, h: f64, tol: f64) -> Result<f64>
where
    F: Fn(GapPoint) -> f64,
{
    gap_integral_with_tol(integrand, profile, h, tol).map(|e| e.value)
}

/// As [`gap_integral`], returning the error estimate as well.
pub fn gap_integral_with_tol<F>(
    integrand: F,
    profile: &RoughProfile,
    h: f64,
    tol: f64,
) -> Result<Estimate>
where
    F: Fn(GapPoint) -> f64,
{
    if !(h > 0.0) {
        return Err(crate::Error::Domain(format!(
            "gap distance must be positive, got {h}"
        )));
    }
    let right = graded_panels(profile.balance_scale(h), profile.delta(), None);
    let mut panels = Vec::with_capacity(2 * right.len());
    for p in &right {
        panels.push(crate::quad::Panel { a: -p.b, b: -p.a, map: crate::quad::PanelMap::Identity });
    }
    panels.extend(right.iter().copied());
    let a = profile.alpha();
    integrate_panels(
        |x1: f64| {
            let g = h + x1.abs().powf(1.0 + a);
            gauss16(|x2| integrand(GapPoint::new(x1, x2)), 0.0, g)
        },
        &panels,
        tol,
        8000,
    )
}
