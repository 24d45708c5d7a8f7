//! Log–log least-squares estimation of scaling exponents.

use crate::error::{Error, Result};

/// Result of a log–log least-squares fit `value ~ prefactor * h^exponent`.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    /// Slope of `log value` against `log h`.
    pub exponent: f64,
    /// `exp(intercept)`, the fitted multiplier.
    pub prefactor: f64,
    /// Coefficient of determination in `[0, 1]`.
    pub r_squared: f64,
    /// The `(h_min, h_max)` window the fit was restricted to.
    pub window: (f64, f64),
}

/// Fits with `r_squared` below this are not trusted as exponent reports.
pub const R_SQUARED_FLOOR: f64 = 0.999;

impl PowerLawFit {
    /// Whether the fit is clean enough to quote its exponent.
    pub fn is_trustworthy(&self) -> bool {
        self.r_squared >= R_SQUARED_FLOOR
    }
}

/// Least-squares line through `(log h, log value)` inside `window`.
///
/// Samples with nonpositive `h` or `value`, non-finite entries, or `h`
/// outside the window are dropped. At least three samples with distinct
/// `h` must survive.
pub fn fit_power_law(samples: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let (h_min, h_max) = window;
    if !(h_min > 0.0 && h_min < h_max) {
        return Err(Error::domain(format!(
            "fit window must satisfy 0 < h_min < h_max, got ({h_min}, {h_max})"
        )));
    }
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(h, v)| {
            h.is_finite() && v.is_finite() && *h > 0.0 && *v > 0.0 && *h >= h_min && *h <= h_max
        })
        .map(|&(h, v)| (h.ln(), v.ln()))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    let n = pts.len();
    if n < 3 {
        return Err(Error::DegenerateFit { usable: n });
    }

    let nf = n as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &pts {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = syy - slope * sxy;
    // Constant data fits the zero-slope line perfectly.
    let r_squared = if syy <= f64::EPSILON * nf * mean_y.abs().max(1.0) {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };

    Ok(PowerLawFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        window,
    })
}

/// Log-spaced grid of `count` values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (la, lb) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (la + (lb - la) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Default sweep window for exponent fits: small enough for asymptotics,
/// large enough to keep `gamma^q` away from underflow.
pub const FIT_WINDOW: (f64, f64) = (1e-7, 1e-3);

/// Default number of sweep samples.
pub const FIT_SAMPLES: usize = 25;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovered() {
        let hs = log_spaced(1e-6, 1e-2, 20);
        let samples: Vec<(f64, f64)> = hs.iter().map(|&h| (h, 5.0 * h.powf(-1.5))).collect();
        let fit = fit_power_law(&samples, (1e-6, 1e-2)).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-10);
        assert!((fit.prefactor - 5.0).abs() < 1e-8);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert!(fit.is_trustworthy());
    }

    #[test]
    fn constant_data_has_zero_exponent() {
        let samples: Vec<(f64, f64)> = log_spaced(1e-4, 1e-1, 10)
            .into_iter()
            .map(|h| (h, 3.25))
            .collect();
        let fit = fit_power_law(&samples, (1e-4, 1e-1)).unwrap();
        assert!(fit.exponent.abs() < 1e-12);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let err = fit_power_law(&[(1e-3, 1.0), (1e-2, 2.0)], (1e-4, 1.0)).unwrap_err();
        assert_eq!(err, Error::DegenerateFit { usable: 2 });
        // duplicates collapse
        let err = fit_power_law(
            &[(1e-3, 1.0), (1e-3, 1.0), (1e-2, 2.0)],
            (1e-4, 1.0),
        )
        .unwrap_err();
        assert_eq!(err, Error::DegenerateFit { usable: 2 });
        // window filters everything out
        let err = fit_power_law(
            &[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)],
            (1e-6, 1e-3),
        )
        .unwrap_err();
        assert_eq!(err, Error::DegenerateFit { usable: 0 });
        // bad window
        assert!(fit_power_law(&[(1.0, 1.0)], (0.0, 1.0)).is_err());
    }

    #[test]
    fn nonpositive_values_dropped() {
        let mut samples: Vec<(f64, f64)> = log_spaced(1e-5, 1e-1, 12)
            .into_iter()
            .map(|h| (h, 2.0 * h.powf(0.5)))
            .collect();
        samples.push((1e-3, -4.0));
        samples.push((-1.0, 1.0));
        let fit = fit_power_law(&samples, (1e-5, 1e-1)).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-10);
    }
}
