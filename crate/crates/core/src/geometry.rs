//! Rough gap geometry and the model integral it controls.
//!
//! The gap between the falling body and the wall is
//! `gamma_h(x1) = h + |x1|^{1+alpha}` for `|x1| <= 2 delta`. Every norm
//! asymptotic downstream reduces to integrals of `|x1|^p / gamma_h^q`,
//! whose small-`h` behaviour splits into three regimes classified by the
//! sign of `p + 1 - q (1 + alpha)`.

use crate::error::{Error, Result};
use crate::quad::{graded_panels, integrate_panels, Estimate};

/// Cusp profile of the body's lower boundary: exponent and lateral extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughProfile {
    alpha: f64,
    delta: f64,
}

impl RoughProfile {
    /// A profile with cusp exponent `alpha` in (0, 1] and gap half-width
    /// `delta > 0`.
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!("alpha must be in (0, 1], got {alpha}")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("delta must be positive, got {delta}")));
        }
        Ok(RoughProfile { alpha, delta })
    }

    /// Unit-width profile, the configuration used throughout the tests.
    pub fn with_alpha(alpha: f64) -> Result<Self> {
        RoughProfile::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Lateral scale where the two terms of `gamma_h` balance,
    /// `h^{1/(1+alpha)}`.
    pub fn balance_scale(&self, h: f64) -> f64 {
        h.powf(1.0 / (1.0 + self.alpha))
    }
}

/// Gap height `gamma_h(x1) = h + |x1|^{1+alpha}`.
pub fn gamma(profile: &RoughProfile, h: f64, x1: f64) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(Error::domain(format!("gap distance must be nonnegative, got {h}")));
    }
    if !(x1.abs() <= 2.0 * profile.delta) {
        return Err(Error::domain(format!(
            "|x1| = {} exceeds the profile extent {}",
            x1.abs(),
            2.0 * profile.delta
        )));
    }
    Ok(h + x1.abs().powf(1.0 + profile.alpha))
}

/// A one-sided derivative value that may blow up on the cusp line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CuspDeriv {
    Finite(f64),
    NonFinite,
}

impl CuspDeriv {
    pub fn finite(self) -> Option<f64> {
        match self {
            CuspDeriv::Finite(v) => Some(v),
            CuspDeriv::NonFinite => None,
        }
    }
}

/// Derivatives of `gamma_h` with respect to `x1`, orders 1 to 3.
///
/// `gamma' = (1+alpha) sign(x1) |x1|^alpha` is continuous with
/// `gamma'(0) = 0`; for `alpha < 1` the higher orders diverge at the tip
/// and come back as [`CuspDeriv::NonFinite`]. For `alpha = 1` the profile
/// is a parabola and all orders are finite everywhere.
pub fn gamma_derivatives(profile: &RoughProfile, x1: f64, order: u8) -> Result<CuspDeriv> {
    if !(1..=3).contains(&order) {
        return Err(Error::domain(format!("derivative order must be 1..=3, got {order}")));
    }
    let a = profile.alpha;
    let ax = x1.abs();
    let sg = if x1 > 0.0 {
        1.0
    } else if x1 < 0.0 {
        -1.0
    } else {
        0.0
    };
    if a == 1.0 {
        return Ok(CuspDeriv::Finite(match order {
            1 => 2.0 * x1,
            2 => 2.0,
            _ => 0.0,
        }));
    }
    let v = match order {
        1 => {
            if x1 == 0.0 {
                0.0
            } else {
                (1.0 + a) * sg * ax.powf(a)
            }
        }
        2 => {
            if x1 == 0.0 {
                return Ok(CuspDeriv::NonFinite);
            }
            (1.0 + a) * a * ax.powf(a - 1.0)
        }
        _ => {
            if x1 == 0.0 {
                return Ok(CuspDeriv::NonFinite);
            }
            (1.0 + a) * a * (a - 1.0) * sg * ax.powf(a - 2.0)
        }
    };
    Ok(CuspDeriv::Finite(v))
}

/// Small-`h` regime of the model integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lemma10Regime {
    /// Diverges like `h^{(p+1)/(1+alpha) - q}`; the exponent is negative.
    PowerLaw { exponent: f64 },
    /// Diverges like `|ln h|`.
    Logarithmic,
    /// Stays bounded as `h -> 0`.
    Bounded,
}

/// Classify `int |x1|^p / gamma_h^q` by the sign of `p + 1 - q(1+alpha)`.
pub fn lemma10_classify(p: f64, q: f64, profile: &RoughProfile) -> Result<Lemma10Regime> {
    if !(p >= 0.0) {
        return Err(Error::domain(format!("p must be nonnegative, got {p}")));
    }
    if !(q > 0.0) {
        return Err(Error::domain(format!("q must be positive, got {q}")));
    }
    let one_plus_a = 1.0 + profile.alpha;
    let gap = p + 1.0 - q * one_plus_a;
    Ok(if gap < 0.0 {
        Lemma10Regime::PowerLaw { exponent: (p + 1.0) / one_plus_a - q }
    } else if gap == 0.0 {
        Lemma10Regime::Logarithmic
    } else {
        Lemma10Regime::Bounded
    })
}

/// Default relative tolerance for the model-integral quadrature.
pub const LEMMA10_TOL: f64 = 1e-8;

/// Numerically evaluate `int_{-delta}^{delta} |x1|^p / gamma_h(x1)^q dx1`.
pub fn lemma10_integral(p: f64, q: f64, profile: &RoughProfile, h: f64) -> Result<f64> {
    lemma10_integral_with_tol(p, q, profile, h, LEMMA10_TOL).map(|e| e.value)
}

/// As [`lemma10_integral`], with an explicit tolerance and error estimate.
pub fn lemma10_integral_with_tol(
    p: f64,
    q: f64,
    profile: &RoughProfile,
    h: f64,
    tol: f64,
) -> Result<Estimate> {
    if !(p >= 0.0) {
        return Err(Error::domain(format!("p must be nonnegative, got {p}")));
    }
    if !(q > 0.0) {
        return Err(Error::domain(format!("q must be positive, got {q}")));
    }
    if !(h > 0.0) {
        return Err(Error::domain(format!("gap distance must be positive, got {h}")));
    }
    let alpha = profile.alpha;
    // The integrand is even: integrate the right half and double.
    let hint = if p.fract() == 0.0 && p < 100.0 { None } else { Some(p) };
    let panels = graded_panels(profile.balance_scale(h), profile.delta, hint);
    let est = integrate_panels(
        |x: f64| x.powf(p) / (h + x.powf(1.0 + alpha)).powf(q),
        &panels,
        tol,
        4000,
    )?;
    Ok(Estimate { value: 2.0 * est.value, error: 2.0 * est.error })
}
