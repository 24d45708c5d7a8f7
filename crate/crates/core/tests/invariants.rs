//! Slower cross-module invariants that do not fit a single unit test:
//! the drag exponent triangle, the subordination of the pairing, and the
//! two behaviours of the drag potential at the origin.

use gapflow::drag::{DragModel, DragTable};
use gapflow::fit::{fit_power_law, log_spaced, FIT_WINDOW};
use gapflow::RoughProfile;

fn model(alpha: f64) -> DragModel {
    DragModel::new(RoughProfile::with_alpha(alpha).unwrap(), 1.0).unwrap()
}

#[test]
fn dirichlet_pairing_and_oracle_share_the_drag_exponent() {
    for &alpha in &[0.25, 0.5, 0.75, 1.0] {
        let m = model(alpha);
        let beta = 3.0 * alpha / (1.0 + alpha);
        let hs = log_spaced(FIT_WINDOW.0, FIT_WINDOW.1, 17);
        let mut dirichlet = Vec::new();
        let mut n = Vec::new();
        let mut reynolds = Vec::new();
        for &h in &hs {
            let row = m.coefficient(h).unwrap();
            dirichlet.push((h, row.dirichlet));
            n.push((h, row.n));
            reynolds.push((h, row.reynolds));
        }
        for (name, samples) in [("dirichlet", dirichlet), ("n", n), ("reynolds", reynolds)] {
            let fit = fit_power_law(&samples, FIT_WINDOW).unwrap();
            assert!(
                (fit.exponent + beta).abs() <= 0.05,
                "alpha {alpha} {name}: fitted {} vs {}",
                fit.exponent,
                -beta
            );
        }
    }
}

#[test]
fn pairing_is_subordinate_to_the_dirichlet_term() {
    // |pairing| / dirichlet shrinks as the gap closes; monotone over the
    // last decade of the sweep.
    for &alpha in &[0.25, 1.0] {
        let m = model(alpha);
        let hs = log_spaced(1e-7, 1e-6, 6);
        let ratios: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let row = m.coefficient(h).unwrap();
                row.pairing.abs() / row.dirichlet
            })
            .collect();
        for w in ratios.windows(2) {
            assert!(
                w[0] < w[1],
                "alpha {alpha}: subordination ratio not shrinking toward h -> 0: {ratios:?}"
            );
        }
        // and it is small outright at the bottom of the window
        assert!(ratios[0] < 0.05, "alpha {alpha}: {ratios:?}");
    }
}

#[test]
fn potential_diverges_at_the_stated_rate_for_steep_cusps() {
    // beta = 9/7 > 1: |N(h)| grows like h^{1-beta} as h -> 0
    let m = model(0.75);
    let table = m.table(1e-8, 1e-3, 31).unwrap();
    let beta = 3.0 * 0.75 / 1.75;
    let samples: Vec<(f64, f64)> = log_spaced(1e-8, 1e-6, 9)
        .into_iter()
        .map(|h| (h, table.potential(h, 1e-3).abs()))
        .collect();
    let fit = fit_power_law(&samples, (1e-8, 1e-6)).unwrap();
    assert!(
        (fit.exponent - (1.0 - beta)).abs() <= 0.1,
        "fitted {} vs {}",
        fit.exponent,
        1.0 - beta
    );
}

#[test]
fn potential_has_a_finite_limit_for_shallow_cusps() {
    // beta = 0.6 < 1: N is Cauchy at the origin
    let m = model(0.25);
    let table = m.table(1e-7, 1e-3, 25).unwrap();
    let n_at = |h: f64| table.potential(h, 1e-3);
    let d1 = (n_at(1e-6) - n_at(1e-5)).abs();
    let d2 = (n_at(1e-7) - n_at(1e-6)).abs();
    let d3 = (n_at(1e-8) - n_at(1e-7)).abs();
    assert!(d2 < d1 && d3 < d2, "tail differences not contracting: {d1} {d2} {d3}");
    assert!(
        (n_at(1e-8) - n_at(1e-5)).abs() <= 0.2 * n_at(1e-5).abs(),
        "tail too heavy for a finite limit"
    );
}

#[test]
fn drag_potential_operator_contract() {
    use gapflow::drag::drag_potential;
    let profile = RoughProfile::with_alpha(0.5).unwrap();
    let h0 = 1e-3;
    assert_eq!(drag_potential(&profile, h0, h0, 1.0).unwrap(), 0.0);
    let n1 = drag_potential(&profile, 1e-4, h0, 1.0).unwrap();
    let n2 = drag_potential(&profile, 1e-5, h0, 1.0).unwrap();
    assert!(n2 < n1 && n1 < 0.0);
    assert!(drag_potential(&profile, 2e-3, h0, 1.0).is_err());
}

#[test]
fn drag_table_positivity_gate() {
    // a synthetic table with a nonpositive sample must be rejected
    let hs = log_spaced(1e-6, 1e-3, 6);
    let mut ns: Vec<f64> = hs.iter().map(|h| h.powf(-1.0)).collect();
    ns[2] = 0.0;
    assert!(DragTable::from_samples(hs, ns).is_err());
}
