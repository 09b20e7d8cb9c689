//! Catalog-wide trajectory invariants: grid convergence of both propagation
//! paths and the weak-vs-strong drive envelope comparison for the chain.

use qsl_core::propagator::{Method, TimeGrid};
use qsl_core::scenarios::{build_catalog, catalog_names, interacting_chain_scenario};

/// Halving dt moves the final state of every catalog scenario by less than
/// 1e-9, for both propagation paths.
#[test]
fn catalog_step_halving_converges() {
    for name in catalog_names() {
        let scenario = build_catalog(name, &[]).unwrap();
        let fine = build_catalog(
            name,
            &[("steps".to_string(), (scenario.grid.steps() * 2).to_string())],
        )
        .unwrap();
        for method in [Method::SuperopExpm, Method::DirectRk4] {
            let coarse_traj = scenario.run(method).unwrap();
            let fine_traj = fine.run(method).unwrap();
            let diff = coarse_traj
                .final_state()
                .matrix()
                .max_abs_diff(fine_traj.final_state().matrix())
                .unwrap();
            assert!(
                diff < 1e-9,
                "{name} ({method:?}): final state moved {diff:.3e} on halving dt"
            );
        }
    }
}

/// Weak and strong drive barely change the normalized deviation envelope of
/// the chain compared to its distance from the bound curve (checked at
/// half-unit sample times for 3- and 4-site chains; the 5-site case runs in
/// the acceptance suite).
#[test]
fn chain_envelope_is_drive_insensitive() {
    let gamma = 1.0;
    let seeds: Vec<u64> = (1..=5).collect();
    let sample_times: Vec<f64> = (0..=10).map(|j| 0.5 * j as f64).collect();

    for m in [3usize, 4] {
        let envelope = |v0: f64, steps: usize| -> Vec<f64> {
            let grid = TimeGrid::new(0.0, 5.0, steps).unwrap();
            let stride = steps / 10;
            let mut env = vec![f64::INFINITY; sample_times.len()];
            for &seed in &seeds {
                let mut scenario = interacting_chain_scenario(m, v0, gamma, seed).unwrap();
                scenario.grid = grid.clone();
                let traj = scenario.run(Method::DirectRk4).unwrap();
                let devs = traj.purity_deviation.as_ref().unwrap();
                for (j, e) in env.iter_mut().enumerate() {
                    *e = e.min(devs[j * stride] / devs[0]);
                }
            }
            env
        };

        let weak = envelope(0.1, 1000);
        let strong = envelope(10.0, 6500);
        let rate = 4.0 * gamma * m as f64;
        for (j, &t) in sample_times.iter().enumerate() {
            let bound = (-rate * t).exp();
            let drive_gap = (weak[j] - strong[j]).abs();
            let bound_gap = (weak[j] - bound).abs();
            assert!(
                drive_gap <= bound_gap + 1e-12,
                "m = {m}, t = {t}: drive gap {drive_gap:.3e} exceeds bound gap {bound_gap:.3e}"
            );
        }
    }
}
