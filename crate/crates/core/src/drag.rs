//! Drag coefficient of the gap field, its potential, and the collision
//! dichotomy.
//!
//! The drag functional is `n(h) = 2 mu int D(w_h) : D(w_h) + int (mu
//! laplacian w_h - grad q_h) . w_h`. Its Dirichlet part diverges like
//! `h^{-beta}` with `beta = 3 alpha / (1 + alpha)` while the residual
//! pairing grows only like the gradient norm `h^{-beta/2}`, so `n` is
//! positive at small gaps and inherits the Dirichlet exponent. The
//! antiderivative `N` of `n` stays finite at `h = 0` exactly when
//! `beta < 1`, i.e. `alpha < 1/2` — the collision criterion.
//!
//! The pairing is evaluated along two independent routes (direct 2D
//! quadrature of the residual, and the integrated-by-parts form whose
//! boundary piece runs along the body) and the two must agree; the
//! by-parts value is the one reported.

use crate::error::{Error, Result};
use crate::field::{gamma_jet, stream_derivs_jet};
use crate::fit::{fit_power_law, log_spaced};
use crate::geometry::{lemma10_integral_with_tol, RoughProfile};
use crate::norms::{column_gauss, integrate_even_columns, sym_grad_sq};
use crate::quad::gauss16;

/// One row of a drag sweep.
#[derive(Debug, Clone, Copy)]
pub struct DragSample {
    pub h: f64,
    /// `2 mu int_gap |D(w)|^2` plus the calibrated outer constant.
    pub dirichlet: f64,
    /// Residual pairing, by-parts evaluation.
    pub pairing: f64,
    /// Drag coefficient `dirichlet + pairing`.
    pub n: f64,
    /// Independent lubrication oracle `12 mu int x1^2 / gamma^3`.
    pub reynolds: f64,
}

/// Both evaluations of the residual pairing.
#[derive(Debug, Clone, Copy)]
pub struct PairingBreakdown {
    pub direct: f64,
    pub by_parts: f64,
    pub rel_err: f64,
}

/// Relative disagreement beyond which the two pairing routes are treated
/// as a failure rather than quadrature noise.
pub const PAIRING_CHECK_TOL: f64 = 1e-3;

/// Default quadrature tolerance for the drag functionals.
pub const DRAG_TOL: f64 = 1e-8;

/// Quadrature context for the drag functionals of one profile.
pub struct DragModel {
    profile: RoughProfile,
    mu: f64,
    tol: f64,
    /// Gap Dirichlet integral at `h = delta`, unit viscosity: the modeled
    /// outer-region contribution to `n`.
    outer_dirichlet: f64,
}

impl DragModel {
    pub fn new(profile: RoughProfile, mu: f64) -> Result<Self> {
        DragModel::with_tol(profile, mu, DRAG_TOL)
    }

    pub fn with_tol(profile: RoughProfile, mu: f64, tol: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::domain(format!("viscosity must be positive, got {mu}")));
        }
        let outer_dirichlet =
            2.0 * Self::dirichlet_gap(&profile, profile.delta(), tol)?;
        Ok(DragModel { profile, mu, tol, outer_dirichlet })
    }

    pub fn profile(&self) -> &RoughProfile {
        &self.profile
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    fn dirichlet_gap(profile: &RoughProfile, h: f64, tol: f64) -> Result<f64> {
        Ok(integrate_even_columns(profile, h, tol, Some(profile.alpha()), |jet, x1| {
            column_gauss(jet, x1, |d, _| sym_grad_sq(d))
        })?
        .value)
    }

    /// `2 mu int_gap |D(w_h)|^2` plus the outer constant; nonnegative and
    /// linear in `mu`.
    pub fn dirichlet_energy(&self, h: f64) -> Result<f64> {
        let gap = Self::dirichlet_gap(&self.profile, h, self.tol)?;
        Ok(self.mu * (2.0 * gap + self.outer_dirichlet))
    }

    /// The pairing `int (mu laplacian w - grad q) . w` over the gap,
    /// evaluated both directly and by parts.
    ///
    /// The by-parts form integrates `d11 psi` against the rotation part
    /// of the gradient plus a 1D boundary term along `x2 = gamma_h(x1)`
    /// and the two lateral edges `x1 = +-delta`, where the gap field does
    /// not vanish.
    pub fn residual_pairing(&self, h: f64) -> Result<PairingBreakdown> {
        let a = self.profile.alpha();
        let delta = self.profile.delta();

        // Direct: residual . w = mu (2 d112 d2 + d111 d1), column by column.
        // The integrand behaves like |x1|^{alpha-1} at the tip.
        let hint = if a < 1.0 { Some(a - 1.0) } else { None };
        let direct = integrate_even_columns(&self.profile, h, self.tol, hint, |jet, x1| {
            column_gauss(jet, x1, |d, _| 2.0 * d.d112 * d.d2 + d.d111 * d.d1)
        })?
        .value;

        // By parts: boundary term along the body. The fluid-outward normal
        // is (-gamma', 1)/sqrt(1+gamma'^2) and w = e2 there, so the line
        // element contributes -d11 gamma' dx1.
        let panels = crate::quad::graded_panels(self.profile.balance_scale(h), delta, None);
        let top = crate::quad::integrate_panels(
            |x1: f64| {
                let jet = gamma_jet(&self.profile, h, x1).expect("x1 != 0");
                let d = stream_derivs_jet(&jet, x1, jet.g);
                -d.d11 * jet.g1
            },
            &panels,
            self.tol,
            4000,
        )?
        .value
            * 2.0;
        // Lateral edges x1 = +-delta: the integrand d11 w2 is odd in x1,
        // so the two edges add up to twice the right one.
        let jet_edge = gamma_jet(&self.profile, h, delta)?;
        let side = 2.0
            * gauss16(
                |x2| {
                    let d = stream_derivs_jet(&jet_edge, delta, x2);
                    d.d11 * d.d1
                },
                0.0,
                jet_edge.g,
            );
        // Volume: d11 (2 d2 w1 - d1 w2) = d11 (-2 d22 - d11).
        let vol = integrate_even_columns(&self.profile, h, self.tol, Some(a), |jet, x1| {
            column_gauss(jet, x1, |d, _| d.d11 * (-2.0 * d.d22 - d.d11))
        })?
        .value;

        let by_parts = top + side + vol;
        let direct = self.mu * direct;
        let by_parts = self.mu * by_parts;
        let rel_err = (direct - by_parts).abs() / by_parts.abs().max(1e-300);
        if rel_err > PAIRING_CHECK_TOL {
            return Err(Error::CrossCheck {
                direct,
                by_parts,
                rel_err,
                tol: PAIRING_CHECK_TOL,
            });
        }
        Ok(PairingBreakdown { direct, by_parts, rel_err })
    }

    /// Independent lubrication oracle `12 mu int x1^2 / gamma_h^3 dx1`.
    pub fn reynolds(&self, h: f64) -> Result<f64> {
        let est = lemma10_integral_with_tol(2.0, 3.0, &self.profile, h, self.tol)?;
        Ok(12.0 * self.mu * est.value)
    }

    /// Full drag row at one gap distance.
    pub fn coefficient(&self, h: f64) -> Result<DragSample> {
        let dirichlet = self.dirichlet_energy(h)?;
        let pairing = self.residual_pairing(h)?.by_parts;
        let reynolds = self.reynolds(h)?;
        Ok(DragSample { h, dirichlet, pairing, n: dirichlet + pairing, reynolds })
    }

    /// Tabulate `n(h)` on a log grid (ascending in `h`).
    pub fn table(&self, h_min: f64, h_max: f64, count: usize) -> Result<DragTable> {
        if !(h_min > 0.0 && h_min < h_max) {
            return Err(Error::domain(format!(
                "table window must satisfy 0 < h_min < h_max, got ({h_min}, {h_max})"
            )));
        }
        if count < 4 {
            return Err(Error::domain(format!("table needs at least 4 samples, got {count}")));
        }
        let hs = log_spaced(h_min, h_max, count);
        let mut ns = Vec::with_capacity(count);
        for &h in &hs {
            let row = self.coefficient(h)?;
            if !(row.n > 0.0) {
                return Err(Error::domain(format!(
                    "drag coefficient must be positive for the log-log table; n({h}) = {}",
                    row.n
                )));
            }
            ns.push(row.n);
        }
        DragTable::from_samples(hs, ns)
    }
}

/// Tabulated drag curve with log–log interpolation.
///
/// Between nodes, `n` follows the local power law through the two
/// endpoints; below the lowest node it extrapolates with the exponent
/// fitted over the lowest decades, which is exact in the limit where the
/// drag is asymptotically a power law.
#[derive(Debug, Clone)]
pub struct DragTable {
    hs: Vec<f64>,
    ns: Vec<f64>,
    /// Node potentials relative to the top node: `pot[i] = int_{top}^{h_i} n`.
    pot: Vec<f64>,
    beta_fit: f64,
    k_fit: f64,
}

/// Integral of the power law through `(h_lo, n_lo)`-`(h_hi, n_hi)` over
/// `[a, b]` inside the segment.
fn seg_integral(h_lo: f64, n_lo: f64, h_hi: f64, n_hi: f64, a: f64, b: f64) -> f64 {
    let m = (n_hi / n_lo).ln() / (h_hi / h_lo).ln();
    let c = n_lo / h_lo.powf(m);
    if (m + 1.0).abs() > 1e-9 {
        c * (b.powf(m + 1.0) - a.powf(m + 1.0)) / (m + 1.0)
    } else {
        c * (b / a).ln()
    }
}

impl DragTable {
    /// Build from precomputed `(h, n)` samples, ascending in `h`, `n > 0`.
    pub fn from_samples(hs: Vec<f64>, ns: Vec<f64>) -> Result<Self> {
        if hs.len() != ns.len() || hs.len() < 4 {
            return Err(Error::domain("drag table needs at least 4 aligned samples"));
        }
        if hs.windows(2).any(|w| !(w[0] < w[1])) || ns.iter().any(|n| !(*n > 0.0)) {
            return Err(Error::domain(
                "drag table needs strictly increasing h and positive n",
            ));
        }
        // Exponent of the small-h asymptote, fitted over the lowest two
        // decades (or the whole table if it is shorter than that).
        let lo = hs[0];
        let hi = (lo * 100.0).min(*hs.last().unwrap());
        let samples: Vec<(f64, f64)> = hs.iter().copied().zip(ns.iter().copied()).collect();
        let fit = fit_power_law(&samples, (lo, hi))
            .or_else(|_| fit_power_law(&samples, (lo, *hs.last().unwrap())))?;
        let beta_fit = -fit.exponent;
        let k_fit = ns[0] * hs[0].powf(beta_fit);

        let mut pot = vec![0.0; hs.len()];
        for i in (0..hs.len() - 1).rev() {
            pot[i] = pot[i + 1] - seg_integral(hs[i], ns[i], hs[i + 1], ns[i + 1], hs[i], hs[i + 1]);
        }
        Ok(DragTable { hs, ns, pot, beta_fit, k_fit })
    }

    /// Fitted small-`h` exponent (`n ~ k h^{-beta}` below the table).
    pub fn beta_fit(&self) -> f64 {
        self.beta_fit
    }

    pub fn k_fit(&self) -> f64 {
        self.k_fit
    }

    pub fn h_range(&self) -> (f64, f64) {
        (self.hs[0], *self.hs.last().unwrap())
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.hs.iter().copied().zip(self.ns.iter().copied())
    }

    /// Interpolated drag at `h > 0` (power-law extrapolation below the
    /// table, constant-slope continuation above).
    pub fn n_at(&self, h: f64) -> f64 {
        assert!(h > 0.0, "drag is only defined for positive gaps");
        if h <= self.hs[0] {
            return self.k_fit * h.powf(-self.beta_fit);
        }
        let last = self.hs.len() - 1;
        if h >= self.hs[last] {
            let (h0, n0, h1, n1) = (self.hs[last - 1], self.ns[last - 1], self.hs[last], self.ns[last]);
            let m = (n1 / n0).ln() / (h1 / h0).ln();
            return n1 * (h / h1).powf(m);
        }
        let i = self.hs.partition_point(|&x| x <= h) - 1;
        let m = (self.ns[i + 1] / self.ns[i]).ln() / (self.hs[i + 1] / self.hs[i]).ln();
        self.ns[i] * (h / self.hs[i]).powf(m)
    }

    /// Potential relative to the top node: `int_{h_top}^{h} n(s) ds <= 0`.
    fn potential_raw(&self, h: f64) -> f64 {
        assert!(h > 0.0);
        let last = self.hs.len() - 1;
        if h >= self.hs[last] {
            // extend with the last segment's power law
            return seg_integral(
                self.hs[last - 1],
                self.ns[last - 1],
                self.hs[last],
                self.ns[last],
                self.hs[last],
                h,
            );
        }
        if h <= self.hs[0] {
            let tail = if (self.beta_fit - 1.0).abs() < 1e-9 {
                self.k_fit * (self.hs[0] / h).ln()
            } else {
                self.k_fit * (self.hs[0].powf(1.0 - self.beta_fit) - h.powf(1.0 - self.beta_fit))
                    / (1.0 - self.beta_fit)
            };
            return self.pot[0] - tail;
        }
        let i = self.hs.partition_point(|&x| x <= h) - 1;
        self.pot[i + 1]
            - seg_integral(self.hs[i], self.ns[i], self.hs[i + 1], self.ns[i + 1], h, self.hs[i + 1])
    }

    /// `N(h) = int_{h0}^{h} n(s) ds`, vanishing at `h0`.
    pub fn potential(&self, h: f64, h0: f64) -> f64 {
        if h == h0 {
            return 0.0;
        }
        self.potential_raw(h) - self.potential_raw(h0)
    }
}

/// The drag potential `N(h) = int_{h0}^{h} n(s) ds` with `N(h0) = 0`,
/// computed from a fresh log grid of drag samples.
pub fn drag_potential(profile: &RoughProfile, h: f64, h0: f64, mu: f64) -> Result<f64> {
    if !(h > 0.0 && h <= h0) {
        return Err(Error::domain(format!("need 0 < h <= h0, got h = {h}, h0 = {h0}")));
    }
    if h == h0 {
        return Ok(0.0);
    }
    let model = DragModel::new(*profile, mu)?;
    let decades = (h0 / h).log10();
    let count = 25.max((6.0 * decades).ceil() as usize);
    let table = model.table(h, h0, count)?;
    Ok(table.potential(h, h0))
}

/// Collision verdict for a cusp exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeVerdict {
    /// Drag blow-up exponent `3 alpha / (1 + alpha)`.
    pub beta: f64,
    /// Contact in finite time happens iff `beta < 1`, i.e. `alpha < 1/2`.
    pub collides: bool,
}

/// The dichotomy: the drag is integrable at `h = 0` iff `alpha < 1/2`.
/// The critical case `alpha = 1/2` has `beta = 1` (logarithmic potential)
/// and does not collide.
pub fn collision_regime(alpha: f64) -> Result<RegimeVerdict> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha must be in (0, 1], got {alpha}")));
    }
    let beta = 3.0 * alpha / (1.0 + alpha);
    Ok(RegimeVerdict { beta, collides: beta < 1.0 })
}

/// No-touchdown exponent for strong solutions with `W^{1,p}` regularity:
/// `2 - (p+1)/((1+alpha) p) - 1/p`. Increasing in `p` with limit
/// `2 - 1/(1+alpha)`; it reaches 1 at `p0 = (2 + alpha)/alpha`.
pub fn starovoitov_beta(alpha: f64, p: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha must be in (0, 1], got {alpha}")));
    }
    if !(p > 1.0) {
        return Err(Error::domain(format!("integrability exponent must exceed 1, got {p}")));
    }
    Ok(2.0 - (p + 1.0) / ((1.0 + alpha) * p) - 1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::{fit_power_law, log_spaced};

    #[test]
    fn dirichlet_linear_in_viscosity() {
        let profile = RoughProfile::with_alpha(0.5).unwrap();
        let m1 = DragModel::new(profile, 1.0).unwrap();
        let m2 = DragModel::new(profile, 2.0).unwrap();
        let h = 1e-4;
        let d1 = m1.dirichlet_energy(h).unwrap();
        let d2 = m2.dirichlet_energy(h).unwrap();
        assert!(d1 > 0.0);
        assert!(((d2 - 2.0 * d1) / d2).abs() < 1e-12);
    }

    #[test]
    fn pairing_cross_check_agrees() {
        let model = DragModel::new(RoughProfile::with_alpha(0.75).unwrap(), 1.0).unwrap();
        let p = model.residual_pairing(1e-3).unwrap();
        assert!(
            p.rel_err <= 1e-3,
            "direct {} vs by-parts {} (rel {})",
            p.direct,
            p.by_parts,
            p.rel_err
        );
    }

    #[test]
    fn reynolds_exponent_is_minus_beta() {
        for &alpha in &[0.5, 1.0] {
            let model = DragModel::new(RoughProfile::with_alpha(alpha).unwrap(), 1.0).unwrap();
            let samples: Vec<(f64, f64)> = log_spaced(1e-7, 1e-3, 13)
                .into_iter()
                .map(|h| (h, model.reynolds(h).unwrap()))
                .collect();
            let fit = fit_power_law(&samples, (1e-7, 1e-3)).unwrap();
            let beta = 3.0 * alpha / (1.0 + alpha);
            assert!(
                (fit.exponent + beta).abs() < 0.02,
                "alpha {alpha}: {} vs {}",
                fit.exponent,
                -beta
            );
        }
    }

    #[test]
    fn coefficient_positive_and_dominated_by_dirichlet() {
        let model = DragModel::new(RoughProfile::with_alpha(0.25).unwrap(), 1.0).unwrap();
        let mut prev_ratio = f64::INFINITY;
        for &h in &[1e-3, 1e-5, 1e-7] {
            let row = model.coefficient(h).unwrap();
            assert!(row.n > 0.0, "n({h}) = {}", row.n);
            let ratio = row.pairing.abs() / row.dirichlet;
            assert!(ratio < prev_ratio * 1.5, "pairing not subordinate at h = {h}");
            prev_ratio = ratio;
        }
    }

    #[test]
    fn table_interpolates_and_extrapolates() {
        // synthetic exact power law: interpolation must be exact
        let hs = log_spaced(1e-6, 1e-2, 9);
        let ns: Vec<f64> = hs.iter().map(|h| 3.0 * h.powf(-1.2)).collect();
        let table = DragTable::from_samples(hs, ns).unwrap();
        assert!((table.beta_fit() - 1.2).abs() < 1e-9);
        for &h in &[4.3e-6_f64, 1e-4, 9e-3, 1e-8, 5e-2] {
            let expect = 3.0 * h.powf(-1.2);
            assert!(((table.n_at(h) - expect) / expect).abs() < 1e-9, "h = {h}");
        }
        // potential against the closed form k (h^{1-b} - h0^{1-b})/(1-b)
        let (k, b, h0) = (3.0_f64, 1.2_f64, 1e-2_f64);
        for &h in &[1e-3_f64, 1e-5, 1e-7] {
            let exact = k * (h.powf(1.0 - b) - h0.powf(1.0 - b)) / (1.0 - b);
            let got = table.potential(h, h0);
            assert!(((got - exact) / exact).abs() < 1e-9, "h = {h}: {got} vs {exact}");
        }
        assert_eq!(table.potential(h0, h0), 0.0);
    }

    #[test]
    fn potential_decreases_as_the_gap_closes() {
        let profile = RoughProfile::with_alpha(0.75).unwrap();
        let model = DragModel::new(profile, 1.0).unwrap();
        let table = model.table(1e-6, 1e-2, 25).unwrap();
        let hs = log_spaced(1e-6, 1e-2, 9);
        for w in hs.windows(2) {
            let lo = table.potential(w[0], 1e-2);
            let hi = table.potential(w[1], 1e-2);
            assert!(lo < hi, "N({}) = {lo} should sit below N({}) = {hi}", w[0], w[1]);
        }
    }

    #[test]
    fn regime_verdicts() {
        let v = collision_regime(1.0).unwrap();
        assert_eq!(v, RegimeVerdict { beta: 1.5, collides: false });
        let v = collision_regime(0.5).unwrap();
        assert!((v.beta - 1.0).abs() < 1e-15 && !v.collides);
        let v = collision_regime(0.25).unwrap();
        assert!((v.beta - 0.6).abs() < 1e-15 && v.collides);
        assert!(collision_regime(0.0).is_err());
        assert!(collision_regime(1.5).is_err());
    }

    #[test]
    fn starovoitov_formula() {
        assert!((starovoitov_beta(1.0, 2.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((starovoitov_beta(1.0, 4.0).unwrap() - 1.125).abs() < 1e-15);
        assert!((starovoitov_beta(1.0, 1e12).unwrap() - 1.5).abs() < 1e-10);
        // monotone in p
        let mut prev = f64::NEG_INFINITY;
        for &p in &[1.5, 2.0, 4.0, 16.0, 256.0] {
            let b = starovoitov_beta(0.6, p).unwrap();
            assert!(b > prev);
            prev = b;
        }
        // p0 = (2 + alpha)/alpha is where beta crosses 1
        for &alpha in &[0.25, 1.0] {
            let p0 = (2.0 + alpha) / alpha;
            assert!((starovoitov_beta(alpha, p0).unwrap() - 1.0).abs() < 1e-12);
            assert!(starovoitov_beta(alpha, p0 + 1.0).unwrap() > 1.0);
        }
        assert!(starovoitov_beta(1.0, 1.0).is_err());
    }
}
