//! The explicit gap velocity field and its companion pressure.
//!
//! On the gap region the stream function is `psi = x1 * P(s)` with
//! `s = x2 / gamma_h(x1)` and the cubic blend `P(s) = 3 s^2 - 2 s^3`,
//! which interpolates the no-slip wall (`P(0) = P'(0) = 0`) to rigid
//! vertical motion of the body (`P(1) = 1`, `P'(1) = 0`). The velocity is
//! the perpendicular gradient `w = (-d2 psi, d1 psi)`, divergence-free by
//! construction, equal to `e2` on the body and `0` on the wall.
//!
//! All partial derivatives of `psi` through third order are hand-derived
//! in terms of `(x1, s, gamma, gamma', gamma'', gamma''')` and verified
//! against finite differences in the tests; no automatic differentiation
//! is involved. For `alpha < 1` the second and third `gamma` derivatives
//! blow up on the cusp line `x1 = 0`, and the operators that need them
//! report that instead of producing non-finite numbers.

use crate::error::{Error, Result};
use crate::geometry::{gamma, RoughProfile};
use crate::quad::{graded_panels, integrate_panels};

/// A point of the closed gap region `{|x1| <= delta, 0 <= x2 <= gamma_h}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub x1: f64,
    pub x2: f64,
}

impl GapPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        GapPoint { x1, x2 }
    }
}

/// Everything the field operators report at one gap point.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    /// Velocity `w`.
    pub w: [f64; 2],
    /// Velocity gradient; entry `[i][j]` is the derivative of `w_j` along
    /// `x_{i+1}`.
    pub grad_w: [[f64; 2]; 2],
    /// Gap-distance derivative of the velocity.
    pub dh_w: [f64; 2],
    /// Companion pressure (unit-viscosity normalization).
    pub q: f64,
    /// Stokes residual `mu (laplacian w - grad q)`.
    pub residual: [f64; 2],
}

/// Cubic blend and its derivatives.
#[inline]
fn blend(s: f64) -> (f64, f64, f64, f64) {
    let p = s * s * (3.0 - 2.0 * s);
    let dp = 6.0 * s * (1.0 - s);
    let d2p = 6.0 - 12.0 * s;
    let d3p = -12.0;
    (p, dp, d2p, d3p)
}

fn check_closed(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("gap distance must be positive, got {h}")));
    }
    if point.x1.abs() > profile.delta() {
        return Err(Error::domain(format!(
            "|x1| = {} outside the gap half-width {}",
            point.x1.abs(),
            profile.delta()
        )));
    }
    let g = gamma(profile, h, point.x1)?;
    if !(point.x2 >= 0.0 && point.x2 <= g) {
        return Err(Error::domain(format!(
            "x2 = {} outside the gap column [0, {g}]",
            point.x2
        )));
    }
    Ok(g)
}

/// Normalized stream-function profile `P(x2 / gamma_h)` in `[0, 1]`.
pub fn phi(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<f64> {
    let g = check_closed(profile, h, point)?;
    Ok(blend(point.x2 / g).0)
}

/// Gap velocity `w = (-d2 psi, d1 psi)` with `psi = x1 phi`.
///
/// Equals `(0, 1)` on the body boundary `x2 = gamma_h(x1)` and `(0, 0)`
/// on the wall `x2 = 0`.
pub fn velocity(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<[f64; 2]> {
    let g = check_closed(profile, h, point)?;
    Ok(velocity_unchecked(profile, g, point))
}

#[inline]
pub(crate) fn velocity_unchecked(profile: &RoughProfile, g: f64, point: GapPoint) -> [f64; 2] {
    let s = point.x2 / g;
    let (p, dp, _, _) = blend(s);
    let g1 = gamma_d1(profile, point.x1);
    // s_1 = -s gamma'/gamma, s_2 = 1/gamma
    let w1 = -point.x1 * dp / g;
    let w2 = p - point.x1 * s * g1 * dp / g;
    [w1, w2]
}

#[inline]
fn gamma_d1(profile: &RoughProfile, x1: f64) -> f64 {
    let a = profile.alpha();
    if a == 1.0 {
        2.0 * x1
    } else if x1 == 0.0 {
        0.0
    } else {
        (1.0 + a) * x1.signum() * x1.abs().powf(a)
    }
}

/// Stream-function partial derivatives at one gap point.
///
/// Field names index the differentiated variables: `d12` is the
/// `x1 x2` mixed partial of `psi = x1 P(s)`, `dh1`/`dh2` are the mixed
/// gap-distance derivatives that drive `dh_w`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StreamDerivs {
    pub d1: f64,
    pub d2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
    pub d111: f64,
    pub d112: f64,
    pub d122: f64,
    pub dh1: f64,
    pub dh2: f64,
}

/// Gap height and its first three `x1` derivatives at one column.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GammaJet {
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

/// Column geometry; errors on the cusp line when `alpha < 1`.
pub(crate) fn gamma_jet(profile: &RoughProfile, h: f64, x1: f64) -> Result<GammaJet> {
    let a = profile.alpha();
    if a == 1.0 {
        return Ok(GammaJet { g: h + x1 * x1, g1: 2.0 * x1, g2: 2.0, g3: 0.0 });
    }
    if x1 == 0.0 {
        return Err(Error::NonFiniteAtCusp { order: 2 });
    }
    let ax = x1.abs();
    let sg = x1.signum();
    Ok(GammaJet {
        g: h + ax.powf(1.0 + a),
        g1: (1.0 + a) * sg * ax.powf(a),
        g2: (1.0 + a) * a * ax.powf(a - 1.0),
        g3: (1.0 + a) * a * (a - 1.0) * sg * ax.powf(a - 2.0),
    })
}

/// Full derivative stack. Requires `gamma''`/`gamma'''`, hence errors on
/// the cusp line for `alpha < 1`.
pub(crate) fn stream_derivs(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<StreamDerivs> {
    let jet = gamma_jet(profile, h, point.x1)?;
    Ok(stream_derivs_jet(&jet, point.x1, point.x2))
}

/// Derivative stack from precomputed column geometry.
pub(crate) fn stream_derivs_jet(jet: &GammaJet, x1: f64, x2: f64) -> StreamDerivs {
    let GammaJet { g, g1, g2, g3 } = *jet;
    let s = x2 / g;
    // Partials of s(x1, x2, h) = x2 / gamma(x1, h).
    let s1 = -s * g1 / g;
    let s2 = 1.0 / g;
    let s11 = -s * g2 / g + 2.0 * s * g1 * g1 / (g * g);
    let s12 = -g1 / (g * g);
    let s111 = -s * g3 / g + 6.0 * s * g1 * g2 / (g * g) - 6.0 * s * g1 * g1 * g1 / (g * g * g);
    let s112 = -g2 / (g * g) + 2.0 * g1 * g1 / (g * g * g);
    let sh = -s / g;
    let sh1 = 2.0 * s * g1 / (g * g);
    let sh2 = -1.0 / (g * g);

    // psi = x1 P(s); chain rule through third order. s_22 = 0 throughout.
    let (p, dp, d2p, d3p) = blend(s);
    let a11 = d2p * s1 * s1 + dp * s11;
    let d1 = p + x1 * dp * s1;
    let d2 = x1 * dp * s2;
    let d11 = 2.0 * dp * s1 + x1 * a11;
    let d12 = dp * s2 + x1 * (d2p * s1 * s2 + dp * s12);
    let d22 = x1 * d2p * s2 * s2;
    let d111 = 3.0 * a11 + x1 * (d3p * s1 * s1 * s1 + 3.0 * d2p * s1 * s11 + dp * s111);
    let d112 = 2.0 * (d2p * s1 * s2 + dp * s12)
        + x1 * (d3p * s1 * s1 * s2 + 2.0 * d2p * s1 * s12 + d2p * s11 * s2 + dp * s112);
    let d122 = d2p * s2 * s2 + x1 * (d3p * s1 * s2 * s2 + 2.0 * d2p * s2 * s12);
    let dh1 = dp * sh + x1 * (d2p * s1 * sh + dp * sh1);
    let dh2 = x1 * (d2p * s2 * sh + dp * sh2);

    StreamDerivs { d1, d2, d11, d12, d22, d111, d112, d122, dh1, dh2 }
}

/// Analytic velocity gradient; entry `[i][j]` is `d_{x_{i+1}} w_{j+1}`.
///
/// The trace vanishes identically: both diagonal entries are the same
/// mixed partial of the stream function with opposite signs.
pub fn velocity_gradient(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<[[f64; 2]; 2]> {
    check_closed(profile, h, point)?;
    let d = stream_derivs(profile, h, point)?;
    Ok([[-d.d12, d.d11], [-d.d22, d.d12]])
}

/// Analytic gap-distance derivative of the velocity.
///
/// Uses `d gamma / d h = 1`; only first-order `gamma` derivatives enter,
/// so this is finite everywhere in the closed gap.
pub fn dh_velocity(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<[f64; 2]> {
    let g = check_closed(profile, h, point)?;
    let s = point.x2 / g;
    let (_p, dp, d2p, _) = blend(s);
    let g1 = gamma_d1(profile, point.x1);
    let x1 = point.x1;
    let s1 = -s * g1 / g;
    let s2 = 1.0 / g;
    let sh = -s / g;
    let sh1 = 2.0 * s * g1 / (g * g);
    let sh2 = -1.0 / (g * g);
    let dh1 = dp * sh + x1 * (d2p * s1 * sh + dp * sh1);
    let dh2 = x1 * (d2p * s2 * sh + dp * sh2);
    Ok([-dh2, dh1])
}

/// Default tolerance for the pressure column integral.
pub const PRESSURE_TOL: f64 = 1e-10;

/// Companion pressure `q = d21 psi + 12 int_0^{x1} t / gamma_h(t)^3 dt`
/// (unit viscosity).
///
/// The integral term is exactly what cancels `d222 psi` in the Stokes
/// residual, leaving the closed-form `(-2 d112 psi, d111 psi)`.
pub fn pressure(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<f64> {
    pressure_with_tol(profile, h, point, PRESSURE_TOL)
}

/// As [`pressure`] with an explicit quadrature tolerance.
pub fn pressure_with_tol(
    profile: &RoughProfile,
    h: f64,
    point: GapPoint,
    tol: f64,
) -> Result<f64> {
    let g = check_closed(profile, h, point)?;
    Ok(psi_d12(profile, g, point) + 12.0 * pressure_integral(profile, h, point.x1, tol)?)
}

/// Mixed partial `d12 psi`; needs only `gamma'`, so it is finite on the
/// whole closed gap, cusp line included.
#[inline]
fn psi_d12(profile: &RoughProfile, g: f64, point: GapPoint) -> f64 {
    let s = point.x2 / g;
    let (_p, dp, d2p, _) = blend(s);
    let g1 = gamma_d1(profile, point.x1);
    let s1 = -s * g1 / g;
    let s2 = 1.0 / g;
    let s12 = -g1 / (g * g);
    dp * s2 + point.x1 * (d2p * s1 * s2 + dp * s12)
}

/// `int_0^{x1} t / gamma_h(t)^3 dt`; even in `x1` because the integrand
/// is odd.
fn pressure_integral(profile: &RoughProfile, h: f64, x1: f64, tol: f64) -> Result<f64> {
    let b = x1.abs();
    if b == 0.0 {
        return Ok(0.0);
    }
    let a = profile.alpha();
    let split = profile.balance_scale(h).min(0.5 * b);
    let panels = graded_panels(split, b, None);
    let est = integrate_panels(
        |t: f64| t / (h + t.powf(1.0 + a)).powi(3),
        &panels,
        tol,
        4000,
    )?;
    Ok(est.value)
}

/// Analytic pressure gradient (unit viscosity).
pub fn pressure_gradient(profile: &RoughProfile, h: f64, point: GapPoint) -> Result<[f64; 2]> {
    let g = check_closed(profile, h, point)?;
    let d = stream_derivs(profile, h, point)?;
    let dq1 = d.d112 + 12.0 * point.x1 / (g * g * g);
    Ok([dq1, d.d122])
}

/// Stokes residual `mu (laplacian w - grad q)`.
///
/// With the companion pressure this collapses to the closed form
/// `mu (-2 d112 psi, d111 psi)`: the pressure integral term cancels
/// `d222 psi` in the first component, and the mixed partials cancel in
/// the second.
pub fn stokes_residual(
    profile: &RoughProfile,
    h: f64,
    point: GapPoint,
    mu: f64,
) -> Result<[f64; 2]> {
    if !(mu > 0.0) {
        return Err(Error::domain(format!("viscosity must be positive, got {mu}")));
    }
    check_closed(profile, h, point)?;
    let d = stream_derivs(profile, h, point)?;
    Ok([-2.0 * mu * d.d112, mu * d.d111])
}

/// Assemble every field quantity at one point.
pub fn sample(profile: &RoughProfile, h: f64, point: GapPoint, mu: f64) -> Result<FieldSample> {
    let g = check_closed(profile, h, point)?;
    if !(mu > 0.0) {
        return Err(Error::domain(format!("viscosity must be positive, got {mu}")));
    }
    let d = stream_derivs(profile, h, point)?;
    let w = velocity_unchecked(profile, g, point);
    Ok(FieldSample {
        w,
        grad_w: [[-d.d12, d.d11], [-d.d22, d.d12]],
        dh_w: [-d.dh2, d.dh1],
        q: d.d12 + 12.0 * pressure_integral(profile, h, point.x1, PRESSURE_TOL)?,
        residual: [-2.0 * mu * d.d112, mu * d.d111],
    })
}

/// `sample` restricted to what is finite everywhere (no gradient or
/// residual); usable on the cusp line for every `alpha`.
pub fn sample_first_order(
    profile: &RoughProfile,
    h: f64,
    point: GapPoint,
) -> Result<([f64; 2], [f64; 2], f64)> {
    let g = check_closed(profile, h, point)?;
    let w = velocity_unchecked(profile, g, point);
    let dh = dh_velocity(profile, h, point)?;
    let q = psi_d12(profile, g, point) + 12.0 * pressure_integral(profile, h, point.x1, PRESSURE_TOL)?;
    Ok((w, dh, q))
}
