// Scratch probe used while calibrating spec tolerances; not part of the
// public surface.
use gapflow::drag::{collision_regime, DragModel};
use gapflow::fall::{simulate_fall, DragSource, FallClass, FallParams};
use gapflow::RoughProfile;
use std::time::Instant;

fn main() {
    let h0 = 0.1;
    let g_force = 1.0;
    for &alpha in &[0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 1.0] {
        let t0 = Instant::now();
        let profile = RoughProfile::with_alpha(alpha).unwrap();
        let model = DragModel::new(profile, 1.0).unwrap();
        let table = model.table(1e-6 * h0, h0, 25).unwrap();
        let t_half = table.potential(0.5 * h0, h0).abs() / g_force;
        let t_max = 20.0 * t_half;
        let params = FallParams {
            profile,
            h0,
            g_force,
            mu: 1.0,
            drag: DragSource::Table(table.clone()),
            h_contact: FallParams::default_h_contact(h0),
            t_max,
        };
        let traj = simulate_fall(&params, 1e-6).unwrap();
        let verdict = collision_regime(alpha).unwrap();
        let expected = if verdict.collides { FallClass::Collision } else { FallClass::NoCollisionWithinHorizon };
        let last = traj.samples.last().unwrap();
        println!(
            "alpha {alpha}: beta_fit {:.4} class {:?} (expected {:?}) contact {:?} t_end/t_half {:.2} h_end {:.3e} steps {} [{:?}]",
            table.beta_fit(),
            traj.classified,
            expected,
            traj.contact_time,
            last.t / t_half,
            last.h,
            traj.samples.len(),
            t0.elapsed()
        );
        assert_eq!(traj.classified, expected, "alpha {alpha}");
    }
    println!("dichotomy OK");
}
