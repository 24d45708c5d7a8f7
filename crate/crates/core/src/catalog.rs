//! Analytic test functions rasterized on the unit disk.
//!
//! The catalog spans the classes the BMO toolkit must tell apart:
//! trivially regular functions, the canonical unbounded BMO function
//! `log |x|`, and a negative power that is not BMO.

use crate::bmo::GridFunction;
use crate::error::{Error, Result};

/// Rasterize `f(x, y)` at `n x n` cell centers on `[-1, 1]^2`, masked to
/// the closed unit disk.
pub fn rasterize_disk(n: usize, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
    if n < 8 {
        return Err(Error::domain(format!("resolution must be at least 8, got {n}")));
    }
    if n % 2 != 0 {
        return Err(Error::domain(format!(
            "resolution must be even so no cell center sits on the origin, got {n}"
        )));
    }
    let spacing = 2.0 / n as f64;
    let mut mask = Vec::with_capacity(n * n);
    let mut values = Vec::with_capacity(n * n);
    for j in 0..n {
        let y = -1.0 + (j as f64 + 0.5) * spacing;
        for i in 0..n {
            let x = -1.0 + (i as f64 + 0.5) * spacing;
            let inside = x * x + y * y <= 1.0;
            mask.push(inside);
            values.push(if inside { f(x, y) } else { 0.0 });
        }
    }
    GridFunction::new(n, n, spacing, mask, values)
}

/// Built-in analytic test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFunction {
    Constant,
    Linear,
    Bump,
    /// `log |x|`: unbounded but BMO.
    LogAbs,
    /// `|x|^{-1/2}`: not BMO; its discrete seminorm grows under refinement.
    InvSqrt,
    /// `|x|^{0.3}`: bounded Hoelder function.
    Pow03,
    Oscillatory,
}

impl CatalogFunction {
    pub fn all() -> [CatalogFunction; 7] {
        [
            CatalogFunction::Constant,
            CatalogFunction::Linear,
            CatalogFunction::Bump,
            CatalogFunction::LogAbs,
            CatalogFunction::InvSqrt,
            CatalogFunction::Pow03,
            CatalogFunction::Oscillatory,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogFunction::Constant => "constant",
            CatalogFunction::Linear => "linear",
            CatalogFunction::Bump => "bump",
            CatalogFunction::LogAbs => "log_abs",
            CatalogFunction::InvSqrt => "inv_sqrt",
            CatalogFunction::Pow03 => "pow_0_3",
            CatalogFunction::Oscillatory => "oscillatory",
        }
    }

    pub fn from_name(name: &str) -> Option<CatalogFunction> {
        CatalogFunction::all().into_iter().find(|f| f.name() == name)
    }

    /// Whether the continuum function belongs to BMO of the disk (true
    /// for everything in the catalog except the negative power).
    pub fn is_bmo(&self) -> bool {
        !matches!(self, CatalogFunction::InvSqrt)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        match self {
            CatalogFunction::Constant => 1.0,
            CatalogFunction::Linear => x + 0.5 * y,
            CatalogFunction::Bump => {
                if r2 < 1.0 - 1e-12 {
                    (-1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            }
            CatalogFunction::LogAbs => 0.5 * r2.max(1e-300).ln(),
            CatalogFunction::InvSqrt => r2.max(1e-300).powf(-0.25),
            CatalogFunction::Pow03 => r2.powf(0.15),
            CatalogFunction::Oscillatory => {
                (3.0 * std::f64::consts::PI * x).sin() * (3.0 * std::f64::consts::PI * y).cos()
            }
        }
    }

    pub fn rasterize(&self, n: usize) -> Result<GridFunction> {
        rasterize_disk(n, |x, y| self.eval(x, y))
    }
}
