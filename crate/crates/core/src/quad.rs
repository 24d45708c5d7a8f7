//! Adaptive 1D quadrature on graded panels.
//!
//! The integrands in this crate concentrate their variation near a known
//! point (the gap tip `x1 = 0`) and may carry an algebraic endpoint
//! singularity `x^e` with `e > -1`. The strategy is:
//!
//! * split the integration range into panels graded toward the tip
//!   (uniform inside the balance scale, log-spaced outside),
//! * optionally map the innermost panel by `x = a + w * u^m` so that an
//!   `x^e` endpoint factor becomes `u^{m(e+1)-1}`, tame enough for
//!   polynomial rules,
//! * run a global adaptive Gauss–Kronrod 7-15 loop over all panels until
//!   the summed error estimate meets the requested relative tolerance.

use crate::error::{Error, Result};
use std::collections::BinaryHeap;

/// 15-point Kronrod abscissae on [-1, 1] (nonnegative half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights; abscissae are `XGK[1]`, `XGK[3]`, `XGK[5]`, `XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 16-point Gauss–Legendre abscissae on [-1, 1] (nonnegative half).
const XG16: [f64; 8] = [
    0.095012509837637440185319335424958,
    0.281603550779258913230460501460496,
    0.458016777657227386342419442983578,
    0.617876244402643748446671764048791,
    0.755404408355003033895101194847442,
    0.865631202387831743880467897712393,
    0.944575023073232576077988415534608,
    0.989400934991649932596154173450333,
];

/// 16-point Gauss–Legendre weights matching `XG16`.
const WG16: [f64; 8] = [
    0.189450610455068496285396723208283,
    0.182603415044923588866763667969220,
    0.169156519395002538189312079030360,
    0.149595988816576732081501730547478,
    0.124628971255533872052476282192016,
    0.095158511682492784809925107602246,
    0.062253523938647892862843836994378,
    0.027152459411754094851780572456018,
];

/// Fixed 16-point Gauss–Legendre rule on `[a, b]`.
///
/// Exact for polynomials up to degree 31, which covers every column
/// integrand assembled from the cubic blend profile.
pub fn gauss16<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        let d = half * XG16[i];
        acc += WG16[i] * (f(c - d) + f(c + d));
    }
    acc * half
}

/// Gauss–Kronrod 7-15 on `[a, b]`: returns (value, error estimate).
fn qk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = f(center);
    let mut res_kronrod = f_center * WGK[7];
    let mut res_gauss = f_center * WG[3];
    let mut res_abs = res_kronrod.abs();

    let mut fv = [0.0_f64; 15];
    fv[7] = f_center;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * sum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;

    // QUADPACK-style error rescaling.
    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Change of variables applied to one panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PanelMap {
    /// Integrate `f(x)` directly over `[a, b]`.
    Identity,
    /// Integrate over `u` in `[0, 1]` with `x = a + (b - a) u^m`.
    ///
    /// An integrand factor `(x - a)^e` becomes `u^{m(e+1)-1}` after the
    /// Jacobian, so choosing `m >= 2/(e+1)` leaves at least a `u^1` zero.
    Power { m: f64 },
}

/// One integration panel `[a, b]` with an optional endpoint map at `a`.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub map: PanelMap,
}

impl Panel {
    pub fn plain(a: f64, b: f64) -> Self {
        Panel { a, b, map: PanelMap::Identity }
    }

    /// Panel with the power map chosen for an `(x - a)^e` endpoint factor.
    pub fn singular(a: f64, b: f64, exponent: f64) -> Self {
        let m = (2.0 / (exponent + 1.0)).ceil().clamp(1.0, 64.0);
        if m <= 1.0 {
            Panel::plain(a, b)
        } else {
            Panel { a, b, map: PanelMap::Power { m } }
        }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug)]
struct Interval {
    // In map coordinates: `u` for mapped panels, `x` for plain ones.
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    map: PanelMap,
    // Physical panel origin and width, used by the power map.
    origin: f64,
    width: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval_interval<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    map: PanelMap,
    origin: f64,
    width: f64,
) -> Interval {
    let (value, error) = match map {
        PanelMap::Identity => qk15(f, lo, hi),
        PanelMap::Power { m } => {
            let mut g = |u: f64| {
                let um1 = u.powf(m - 1.0);
                let x = origin + width * (um1 * u);
                f(x) * width * m * um1
            };
            qk15(&mut g, lo, hi)
        }
    };
    Interval { lo, hi, value, error, map, origin, width }
}

/// Adaptive Gauss–Kronrod over a set of panels.
///
/// Refines the worst panel globally until the summed error estimate is
/// below `rel_tol` times the accumulated value (with a tiny absolute
/// floor so that an exactly-zero integral terminates). Errors out with
/// the achieved estimate if `max_splits` subdivisions are not enough.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    panels: &[Panel],
    rel_tol: f64,
    max_splits: usize,
) -> Result<Estimate> {
    if rel_tol <= 0.0 {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    let mut heap: BinaryHeap<Interval> = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    for p in panels {
        if !(p.a < p.b) {
            continue;
        }
        let iv = match p.map {
            PanelMap::Identity => eval_interval(&mut f, p.a, p.b, p.map, 0.0, 0.0),
            PanelMap::Power { .. } => eval_interval(&mut f, 0.0, 1.0, p.map, p.a, p.b - p.a),
        };
        value += iv.value;
        error += iv.error;
        heap.push(iv);
    }
    if heap.is_empty() {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }

    let tolerance = |v: f64| rel_tol * v.abs() + 1e-300;
    let mut splits = 0;
    while error > tolerance(value) {
        if splits >= max_splits {
            return Err(Error::Tolerance { requested: rel_tol, achieved: error / value.abs().max(1e-300) });
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // The dominant interval is already at floating-point resolution.
            return Err(Error::Tolerance { requested: rel_tol, achieved: error / value.abs().max(1e-300) });
        }
        value -= worst.value;
        error -= worst.error;
        let left = eval_interval(&mut f, worst.lo, mid, worst.map, worst.origin, worst.width);
        let right = eval_interval(&mut f, mid, worst.hi, worst.map, worst.origin, worst.width);
        value += left.value + right.value;
        error += left.error + right.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
    }
    Ok(Estimate { value, error })
}

/// Panels for `[0, delta]` graded at the balance scale `split`.
///
/// Inside `[0, split]` the grading is uniform (four panels); outside,
/// panels grow geometrically by a factor of four up to `delta`. When an
/// endpoint exponent is supplied the innermost region becomes a single
/// power-mapped panel instead, which is the only way to resolve an
/// `x^{e}` factor with `e < 0` to full tolerance.
pub fn graded_panels(split: f64, delta: f64, endpoint_exponent: Option<f64>) -> Vec<Panel> {
    let split = split.clamp(delta * 1e-12, 0.5 * delta);
    let mut panels = Vec::new();
    match endpoint_exponent {
        Some(e) if e < 2.0 => panels.push(Panel::singular(0.0, split, e)),
        _ => {
            let n = 4;
            for k in 0..n {
                let a = split * k as f64 / n as f64;
                let b = split * (k + 1) as f64 / n as f64;
                panels.push(Panel::plain(a, b));
            }
        }
    }
    let mut a = split;
    while a < delta {
        let b = (a * 4.0).min(delta);
        panels.push(Panel::plain(a, b));
        a = b;
    }
    panels
}
