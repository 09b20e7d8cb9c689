//! The self-checking harness: propagate every scenario through both numerical
//! paths, compare them entrywise, and verify that no declared bound is
//! violated. Negative-control fixtures (tagged in scenario metadata) corrupt
//! one ingredient on purpose and must make the harness fail with the matching
//! exit code.

use qsl_core::bounds::{hilbert_hs_rate, hilbert_sp_rate, liouville_bound_cumulative};
use qsl_core::lindblad::ReferenceState;
use qsl_core::liouville::{build_superoperator, unit_skew_spectral_norm};
use qsl_core::propagator::{evolve_direct, evolve_superop, evolve_superop_with, Trajectory};
use qsl_core::scenarios::Scenario;

use crate::Failure;

/// Two propagation paths must agree entrywise to this tolerance.
pub const ORACLE_TOL: f64 = 1e-8;

/// A trajectory may exceed a log-purity bound by at most this much.
pub const BOUND_TOL: f64 = 1e-7;

/// The purity floor may be undercut by at most this much.
pub const FLOOR_TOL: f64 = 1e-9;

/// Deviations smaller than this are treated as identically zero and skipped
/// in the logarithmic checks.
const DEVIATION_NOISE: f64 = 1e-18;

#[derive(Debug)]
pub struct CompareReport {
    pub name: String,
    /// Largest entrywise state difference between the two paths.
    pub max_discrepancy: f64,
    /// Smallest margin (bound - |log ratio|) over all bound checks; negative
    /// means a violation.
    pub worst_bound_slack: f64,
    pub oracle_mismatch: bool,
    pub bound_violation: bool,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        !self.oracle_mismatch && !self.bound_violation
    }
}

/// Run both paths and all bound checks for one scenario.
pub fn compare_scenario(scenario: &Scenario) -> Result<CompareReport, Failure> {
    let gen = scenario.propagation_generator();

    let superop_traj = match scenario.metadata_value("fixture") {
        Some("superop-sign") => {
            // Corruption under test: the superoperator is replaced by -𝓗†,
            // which flips the sign of its Hermitian part while keeping the
            // dissipative skew part. States stay physical; the entrywise
            // comparison against the direct path must catch this.
            let builder = |t: f64| -> qsl_core::Result<qsl_core::ComplexMatrix> {
                let h = build_superoperator(gen, t)?;
                Ok(h.matrix().adjoint().scale_re(-1.0))
            };
            evolve_superop_with(&builder, &scenario.initial, &scenario.grid)
        }
        _ => evolve_superop(gen, &scenario.initial, &scenario.grid),
    }
    .map_err(Failure::from_core)?;

    let mut direct_traj =
        evolve_direct(gen, &scenario.initial, &scenario.grid).map_err(Failure::from_core)?;

    let max_discrepancy = superop_traj
        .max_state_diff(&direct_traj)
        .map_err(Failure::from_core)?;

    // Bound validity is judged on the honest direct path against the bounds
    // of the *declared* generator.
    if !matches!(scenario.reference, ReferenceState::Origin) {
        direct_traj
            .attach_reference(&scenario.reference)
            .map_err(Failure::from_core)?;
    }
    direct_traj
        .attach_bound_curves(&scenario.generator)
        .map_err(Failure::from_core)?;

    let worst_bound_slack = worst_slack(&scenario.generator, &direct_traj)?;

    Ok(CompareReport {
        name: scenario.name.clone(),
        max_discrepancy,
        worst_bound_slack,
        oracle_mismatch: max_discrepancy > ORACLE_TOL,
        bound_violation: worst_bound_slack < 0.0,
    })
}

/// Smallest margin over every applicable check: the three log-purity bounds,
/// the deviation bounds when a reference is attached, and the purity floor.
fn worst_slack(
    gen: &qsl_core::lindblad::LindbladGenerator,
    traj: &Trajectory,
) -> Result<f64, Failure> {
    let times = traj.times();
    let liou = liouville_bound_cumulative(gen, &times).map_err(Failure::from_core)?;
    let unit = unit_skew_spectral_norm(gen).map_err(Failure::from_core)?;
    let sp_rate = hilbert_sp_rate(gen).map_err(Failure::from_core)?;
    let hs_rate = hilbert_hs_rate(gen);

    // liou[k] = unit * ∫γ; rescale the same integral for the Hilbert bounds.
    let scaled = |k: usize, rate: f64| {
        if unit > 0.0 {
            liou[k] / unit * rate
        } else {
            0.0
        }
    };

    let mut worst = f64::INFINITY;
    let p0 = traj.purity[0];
    for (k, p) in traj.purity.iter().enumerate() {
        let change = (p / p0).ln().abs();
        worst = worst.min(liou[k] + BOUND_TOL - change);
        worst = worst.min(scaled(k, sp_rate) + BOUND_TOL - change);
        worst = worst.min(scaled(k, hs_rate) + BOUND_TOL - change);
    }

    if let Some(devs) = &traj.purity_deviation {
        let d0 = devs[0];
        if d0 > DEVIATION_NOISE {
            for (k, d) in devs.iter().enumerate() {
                if *d <= DEVIATION_NOISE {
                    continue;
                }
                let change = (d / d0).ln().abs();
                worst = worst.min(liou[k] + BOUND_TOL - change);
                worst = worst.min(scaled(k, sp_rate) + BOUND_TOL - change);
                worst = worst.min(scaled(k, hs_rate) + BOUND_TOL - change);
            }
        }
    }

    if let Some(floor) = &traj.purity_floor {
        for (p, f) in traj.purity.iter().zip(floor) {
            worst = worst.min(p - f + FLOOR_TOL);
        }
    }

    Ok(worst)
}
