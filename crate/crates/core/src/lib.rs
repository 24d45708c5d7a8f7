//! Desk-scale numerics for a rough body settling onto a flat wall in a
//! viscous 2D flow.
//!
//! The crate evaluates the explicit divergence-free gap velocity field for
//! a cusped body profile `gamma_h(x1) = h + |x1|^{1+alpha}`, measures how
//! its energy norms blow up as the gap `h` closes, assembles the resulting
//! drag law `n(h) ~ h^{-3 alpha / (1 + alpha)}`, and integrates the reduced
//! quasi-static fall `n(h) h' = -G` to decide whether contact happens in
//! finite time (it does exactly when `alpha < 1/2`). A discrete
//! bounded-mean-oscillation toolkit for gridded functions rounds out the
//! function-space side.
//!
//! Modules:
//!
//! * [`geometry`] — the gap profile and the model integral
//!   `int |x1|^p / gamma_h^q` with its three small-`h` regimes;
//! * [`field`] — the gap velocity, its derivatives, companion pressure and
//!   Stokes residual, all in closed form;
//! * [`norms`] — weighted `L^2` functionals of the field over the gap and
//!   their scaling exponents;
//! * [`drag`] — the drag coefficient, its potential, a lubrication oracle
//!   and the collision dichotomy;
//! * [`fall`] — the quasi-static fall integrator with contact detection;
//! * [`bmo`] / [`catalog`] — discrete BMO seminorms and the analytic test
//!   functions they are exercised on;
//! * [`fit`] / [`quad`] — log–log exponent fits and graded adaptive
//!   quadrature shared by everything above.

pub mod error;
pub mod bmo;
pub mod catalog;
pub mod drag;
pub mod fall;
pub mod field;
pub mod fit;
pub mod geometry;
pub mod norms;
pub mod quad;

pub use error::{Error, Result};
pub use field::{FieldSample, GapPoint};
pub use fit::PowerLawFit;
pub use geometry::{CuspDeriv, Lemma10Regime, RoughProfile};
