//! State-independent speed-limit bounds on purity change.
//!
//! All four bounds limit |ln P(t_f) / P(t_i)| (equivalently the change of the
//! second-order Rényi entropy -ln P), and apply verbatim to the purity
//! deviation tr[(ρ - ρ_s)²] for any reference solution ρ_s:
//!
//! - Hilbert/HS:       4 ∫ γ(t) Σ_k ‖A_k‖₂²  dt
//! - Hilbert/spectral: 4 ∫ γ(t) Σ_k ‖A_k‖sp² dt
//! - Liouville:          ∫ ‖𝓗 - 𝓗†‖sp dt
//!
//! The ordering liouville ≤ hilbert_sp ≤ hilbert_hs always holds. For
//! dephasing channels the maximally mixed state is stationary and the
//! deviation bound rearranges into a purity floor:
//! P(t_f) ≥ 1/N + (P(t_i) - 1/N) e^{-liouville}.
//!
//! Integrals use trapezoid quadrature. The skew part is linear in the
//! prefactor and independent of the Hamiltonian, so the integrand factorizes
//! as γ(t) times a constant norm; the norm is diagonalized once.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::spectral_norm;
use crate::error::{Error, Result};
use crate::lindblad::LindbladGenerator;
use crate::liouville::unit_skew_spectral_norm;

/// Default number of trapezoid panels for the norm integrals.
pub const DEFAULT_QUADRATURE_STEPS: usize = 1000;

/// Which of the three log-purity bounds to read from a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    HilbertHs,
    HilbertSp,
    Liouville,
}

/// What quantity a report's bounds are applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppliesTo {
    Purity,
    PurityDeviation,
}

/// The three bound values over a time interval.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub interval: (f64, f64),
    /// Bound on |Δ ln P| from the HS norms of the jump operators.
    pub hilbert_hs: f64,
    /// Tightened Hilbert-space bound using spectral norms.
    pub hilbert_sp: f64,
    /// Liouville-space bound from the skew-part spectral norm.
    pub liouville: f64,
    pub applies_to: AppliesTo,
    pub quadrature_steps: usize,
}

impl BoundReport {
    pub fn bound(&self, kind: BoundKind) -> f64 {
        match kind {
            BoundKind::HilbertHs => self.hilbert_hs,
            BoundKind::HilbertSp => self.hilbert_sp,
            BoundKind::Liouville => self.liouville,
        }
    }

    /// liouville ≤ hilbert_sp ≤ hilbert_hs within `tol`.
    pub fn ordering_holds(&self, tol: f64) -> bool {
        self.liouville <= self.hilbert_sp + tol && self.hilbert_sp <= self.hilbert_hs + tol
    }
}

fn check_interval(t_start: f64, t_end: f64) -> Result<()> {
    if !(t_end >= t_start) {
        return Err(Error::ReversedInterval { t_start, t_end });
    }
    Ok(())
}

/// Trapezoid integral of the prefactor over [t_start, t_end].
fn prefactor_integral(
    gen: &LindbladGenerator,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<f64> {
    check_interval(t_start, t_end)?;
    if t_end == t_start {
        return Ok(0.0);
    }
    let steps = steps.max(1);
    let h = (t_end - t_start) / steps as f64;
    let mut sum = 0.5 * (gen.prefactor_at(t_start)? + gen.prefactor_at(t_end)?);
    for k in 1..steps {
        sum += gen.prefactor_at(t_start + k as f64 * h)?;
    }
    Ok(sum * h)
}

/// 4 Σ_k ‖A_k‖₂² (HS norms squared), the rate of the loosest bound.
pub fn hilbert_hs_rate(gen: &LindbladGenerator) -> f64 {
    4.0 * gen
        .jump_ops()
        .iter()
        .map(|a| {
            let n = a.hs_norm();
            n * n
        })
        .sum::<f64>()
}

/// 4 Σ_k ‖A_k‖sp² (spectral norms squared).
pub fn hilbert_sp_rate(gen: &LindbladGenerator) -> Result<f64> {
    let mut sum = 0.0;
    for a in gen.jump_ops() {
        let n = spectral_norm(a)?;
        sum += n * n;
    }
    Ok(4.0 * sum)
}

/// Bound 4 ∫ γ(t) Σ_k ‖A_k‖₂² dt.
pub fn hilbert_hs_bound(
    gen: &LindbladGenerator,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<f64> {
    Ok(hilbert_hs_rate(gen) * prefactor_integral(gen, t_start, t_end, steps)?)
}

/// Bound 4 ∫ γ(t) Σ_k ‖A_k‖sp² dt.
pub fn hilbert_sp_bound(
    gen: &LindbladGenerator,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<f64> {
    Ok(hilbert_sp_rate(gen)? * prefactor_integral(gen, t_start, t_end, steps)?)
}

/// Bound ∫ ‖𝓗 - 𝓗†‖sp dt.
pub fn liouville_bound(
    gen: &LindbladGenerator,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<f64> {
    Ok(unit_skew_spectral_norm(gen)? * prefactor_integral(gen, t_start, t_end, steps)?)
}

/// All three bounds over one interval.
pub fn evaluate_bounds(
    gen: &LindbladGenerator,
    t_start: f64,
    t_end: f64,
    steps: usize,
    applies_to: AppliesTo,
) -> Result<BoundReport> {
    let integral = prefactor_integral(gen, t_start, t_end, steps)?;
    Ok(BoundReport {
        interval: (t_start, t_end),
        hilbert_hs: hilbert_hs_rate(gen) * integral,
        hilbert_sp: hilbert_sp_rate(gen)? * integral,
        liouville: unit_skew_spectral_norm(gen)? * integral,
        applies_to,
        quadrature_steps: steps,
    })
}

/// Running Liouville bound B(t_k) = ∫_{t_0}^{t_k} ‖𝓗 - 𝓗†‖sp dt evaluated
/// cumulatively on a time grid (trapezoid between consecutive grid points).
pub fn liouville_bound_cumulative(gen: &LindbladGenerator, times: &[f64]) -> Result<Vec<f64>> {
    let rate = unit_skew_spectral_norm(gen)?;
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    let mut prev_t = match times.first() {
        Some(&t) => t,
        None => return Ok(out),
    };
    let mut prev_g = gen.prefactor_at(prev_t)?;
    out.push(0.0);
    for &t in &times[1..] {
        check_interval(prev_t, t)?;
        let g = gen.prefactor_at(t)?;
        acc += 0.5 * (g + prev_g) * (t - prev_t);
        out.push(rate * acc);
        prev_t = t;
        prev_g = g;
    }
    Ok(out)
}

/// Purity interval implied by a log-purity bound B: [P_i e^{-B}, min(1, P_i e^{B})].
pub fn purity_bound_interval(
    report: &BoundReport,
    kind: BoundKind,
    p_initial: f64,
) -> Result<(f64, f64)> {
    if !(p_initial > 0.0 && p_initial <= 1.0) {
        return Err(Error::InvalidParameter {
            what: alloc::format!("initial purity {p_initial} outside (0, 1]"),
        });
    }
    let b = report.bound(kind);
    Ok((p_initial * (-b).exp(), (p_initial * b.exp()).min(1.0)))
}

/// Deviation interval [PD_i e^{-B}, PD_i e^{B}]; no cap at 1 because the
/// deviation is a squared distance, not a purity.
pub fn purity_deviation_bound_interval(
    report: &BoundReport,
    kind: BoundKind,
    pd_initial: f64,
) -> Result<(f64, f64)> {
    if pd_initial < 0.0 {
        return Err(Error::InvalidParameter {
            what: alloc::format!("initial purity deviation {pd_initial} is negative"),
        });
    }
    let b = report.bound(kind);
    Ok((pd_initial * (-b).exp(), pd_initial * b.exp()))
}

/// Commutator-norm tolerance of the dephasing classification.
pub const DEPHASING_TOL: f64 = 1e-10;

/// Numerical dephasing check: every jump operator normal, all jumps mutually
/// commuting, and all jumps commuting with the Hamiltonian. Time-dependent
/// Hamiltonians are sampled at the ends and midpoint of the interval.
pub fn check_dephasing(gen: &LindbladGenerator, t_start: f64, t_end: f64) -> Result<()> {
    let comm_norm = |x: &crate::matrix::ComplexMatrix,
                     y: &crate::matrix::ComplexMatrix|
     -> Result<f64> { Ok(x.matmul(y)?.sub(&y.matmul(x)?)?.hs_norm()) };

    let jumps = gen.jump_ops();
    let mut worst: f64 = 0.0;
    for (i, a) in jumps.iter().enumerate() {
        worst = worst.max(comm_norm(a, &a.adjoint())?);
        for b in &jumps[i + 1..] {
            worst = worst.max(comm_norm(a, b)?);
        }
    }
    for &t in &[t_start, 0.5 * (t_start + t_end), t_end] {
        let h = gen.hamiltonian_at(t)?;
        for a in jumps {
            worst = worst.max(comm_norm(a, &h)?);
        }
    }
    if worst > DEPHASING_TOL {
        return Err(Error::NotDephasing {
            commutator_norm: worst,
        });
    }
    Ok(())
}

/// Purity floor for dephasing channels:
/// 1/N + (P_i - 1/N) e^{-liouville bound}. The maximally mixed state is
/// stationary for dephasing dynamics, so the deviation bound on P - 1/N
/// yields a floor on the purity itself.
pub fn dephasing_purity_floor(
    gen: &LindbladGenerator,
    p_initial: f64,
    dim: usize,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<f64> {
    check_dephasing(gen, t_start, t_end)?;
    let inv_n = 1.0 / dim as f64;
    if p_initial < inv_n - 1e-12 {
        return Err(Error::InvalidParameter {
            what: alloc::format!("initial purity {p_initial} below 1/N = {inv_n}"),
        });
    }
    let b = liouville_bound(gen, t_start, t_end, steps)?;
    Ok(inv_n + (p_initial - inv_n) * (-b).exp())
}

/// Floor value from a precomputed running bound (for per-grid-point curves).
pub fn purity_floor_from_bound(p_initial: f64, dim: usize, bound: f64) -> f64 {
    let inv_n = 1.0 / dim as f64;
    inv_n + (p_initial - inv_n) * (-bound).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{random_density, Prefactor};
    use crate::matrix::{ComplexMatrix, C64};
    use crate::ops::{pauli_x, pauli_z};
    use alloc::boxed::Box;
    use alloc::vec;

    fn half_z_dephasing() -> LindbladGenerator {
        LindbladGenerator::new(ComplexMatrix::zeros(2, 2), vec![pauli_z().scale_re(0.5)]).unwrap()
    }

    #[test]
    fn qubit_dephasing_bounds() {
        let gen = half_z_dephasing();
        let steps = DEFAULT_QUADRATURE_STEPS;
        assert!((hilbert_hs_bound(&gen, 0.0, 1.0, steps).unwrap() - 2.0).abs() < 1e-12);
        assert!((hilbert_sp_bound(&gen, 0.0, 1.0, steps).unwrap() - 1.0).abs() < 1e-12);
        assert!((liouville_bound(&gen, 0.0, 1.0, steps).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_jump_operators_give_zero_bounds() {
        let gen = LindbladGenerator::new(pauli_x(), vec![]).unwrap();
        let report =
            evaluate_bounds(&gen, 0.0, 3.0, DEFAULT_QUADRATURE_STEPS, AppliesTo::Purity).unwrap();
        assert_eq!(report.hilbert_hs, 0.0);
        assert_eq!(report.hilbert_sp, 0.0);
        assert_eq!(report.liouville, 0.0);
    }

    #[test]
    fn unitary_diagonal_dephasing_rates() {
        // A = diag(e^{iφ_j}): HS rate 4N, spectral rate 4 independent of N.
        for n in [2usize, 4, 8] {
            let phases: vec::Vec<C64> = (0..n)
                .map(|k| {
                    let p = 0.37 + 1.1 * k as f64;
                    C64::new(p.cos(), p.sin())
                })
                .collect();
            let a = ComplexMatrix::diagonal(&phases);
            let gen = LindbladGenerator::new(ComplexMatrix::zeros(n, n), vec![a]).unwrap();
            let dt = 2.0;
            let hs = hilbert_hs_bound(&gen, 0.0, dt, 100).unwrap();
            let sp = hilbert_sp_bound(&gen, 0.0, dt, 100).unwrap();
            assert!((hs - 4.0 * n as f64 * dt).abs() < 1e-9);
            assert!((sp - 4.0 * dt).abs() < 1e-9);
            assert!(liouville_bound(&gen, 0.0, dt, 100).unwrap() <= 4.0 * dt + 1e-9);
        }
    }

    #[test]
    fn scaled_unitary_jump_rate() {
        // A = c·U with U unitary: spectral bound rate 4|c|².
        let c_scale = 0.8;
        let gen = LindbladGenerator::new(
            ComplexMatrix::zeros(2, 2),
            vec![pauli_x().scale_re(c_scale)],
        )
        .unwrap();
        let b = hilbert_sp_bound(&gen, 0.0, 1.0, 10).unwrap();
        assert!((b - 4.0 * c_scale * c_scale).abs() < 1e-12);
    }

    #[test]
    fn ghz_local_dephasing_liouville_rate() {
        // Three full-σz site operators at γ = 1: skew norm 12 from brute-force
        // diagonalization of the 64x64 skew part.
        let m = 3usize;
        let dim = 1 << m;
        let jumps: vec::Vec<ComplexMatrix> = (0..m)
            .map(|s| crate::ops::embed_site(&pauli_z(), s, m).unwrap())
            .collect();
        let gen = LindbladGenerator::new(ComplexMatrix::zeros(dim, dim), jumps).unwrap();
        let dt = 0.7;
        assert!((liouville_bound(&gen, 0.0, dt, 50).unwrap() - 12.0 * dt).abs() < 1e-9);
    }

    #[test]
    fn time_constant_bound_is_norm_times_interval() {
        let gen = half_z_dephasing();
        for dt in [0.1, 1.0, 4.5] {
            let b = liouville_bound(&gen, 1.0, 1.0 + dt, 777).unwrap();
            assert!((b - dt).abs() < 1e-12);
        }
    }

    #[test]
    fn reversed_interval_rejected() {
        let gen = half_z_dephasing();
        assert!(matches!(
            liouville_bound(&gen, 1.0, 0.0, 10),
            Err(Error::ReversedInterval { .. })
        ));
    }

    #[test]
    fn purity_interval_examples() {
        let mk = |b: f64| BoundReport {
            interval: (0.0, 1.0),
            hilbert_hs: b,
            hilbert_sp: b,
            liouville: b,
            applies_to: AppliesTo::Purity,
            quadrature_steps: 1,
        };
        let (lo, hi) = purity_bound_interval(&mk(0.0), BoundKind::Liouville, 0.7).unwrap();
        assert_eq!((lo, hi), (0.7, 0.7));
        let (lo, hi) = purity_bound_interval(&mk(1.0), BoundKind::Liouville, 1.0).unwrap();
        assert!((lo - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(hi, 1.0);
        let (lo, hi) = purity_bound_interval(&mk(2.0f64.ln()), BoundKind::Liouville, 0.5).unwrap();
        assert!((lo - 0.25).abs() < 1e-15);
        assert!((hi - 1.0).abs() < 1e-15);
        assert!(purity_bound_interval(&mk(1.0), BoundKind::Liouville, 0.0).is_err());
        assert!(purity_bound_interval(&mk(1.0), BoundKind::Liouville, 1.5).is_err());
    }

    #[test]
    fn deviation_interval_examples() {
        let report = BoundReport {
            interval: (0.0, 1.0),
            hilbert_hs: 1.0,
            hilbert_sp: 1.0,
            liouville: 1.0,
            applies_to: AppliesTo::PurityDeviation,
            quadrature_steps: 1,
        };
        let (lo, hi) = purity_deviation_bound_interval(&report, BoundKind::Liouville, 0.0).unwrap();
        assert_eq!((lo, hi), (0.0, 0.0));
        // No cap at 1.
        let (_, hi) = purity_deviation_bound_interval(&report, BoundKind::Liouville, 0.9).unwrap();
        assert!(hi > 1.0);
        assert!(purity_deviation_bound_interval(&report, BoundKind::Liouville, -0.1).is_err());
    }

    #[test]
    fn dephasing_floor_examples() {
        let gen = half_z_dephasing();
        let floor = dephasing_purity_floor(&gen, 1.0, 2, 0.0, 1.0, 1000).unwrap();
        assert!((floor - (0.5 + 0.5 * (-1.0f64).exp())).abs() < 1e-12);
        // P_i = 1/N stays pinned at 1/N.
        let floor = dephasing_purity_floor(&gen, 0.5, 2, 0.0, 3.0, 1000).unwrap();
        assert!((floor - 0.5).abs() < 1e-12);
        // Zero-width interval returns P_i.
        let floor = dephasing_purity_floor(&gen, 0.83, 2, 2.0, 2.0, 1000).unwrap();
        assert!((floor - 0.83).abs() < 1e-12);
    }

    #[test]
    fn non_commuting_hamiltonian_fails_dephasing_check() {
        let gen = LindbladGenerator::new(pauli_x(), vec![pauli_z().scale_re(0.5)]).unwrap();
        assert!(matches!(
            dephasing_purity_floor(&gen, 1.0, 2, 0.0, 1.0, 100),
            Err(Error::NotDephasing { .. })
        ));
        // σz commutes with σz-dephasing: passes.
        let gen = LindbladGenerator::new(pauli_z(), vec![pauli_z().scale_re(0.5)]).unwrap();
        assert!(dephasing_purity_floor(&gen, 1.0, 2, 0.0, 1.0, 100).is_ok());
    }

    #[test]
    fn bound_ordering_on_random_generators() {
        for n in [2usize, 3, 4] {
            for seed in 0..40u64 {
                let base = 9000 + seed * 17 + n as u64;
                let h = {
                    let g = random_density(n, base);
                    g.matrix().add(&g.matrix().adjoint()).unwrap().scale_re(1.2)
                };
                let jumps: vec::Vec<ComplexMatrix> = (0..=(seed % 3) as usize)
                    .map(|k| {
                        random_density(n, base + 31 + k as u64)
                            .matrix()
                            .sub(&ComplexMatrix::identity(n).scale_re(0.21))
                            .unwrap()
                            .scale(C64::new(0.4, -0.6))
                    })
                    .collect();
                let gen = LindbladGenerator::new(h, jumps).unwrap();
                let report = evaluate_bounds(&gen, 0.0, 1.0, 50, AppliesTo::Purity).unwrap();
                assert!(report.ordering_holds(1e-9), "ordering violated: {report:?}");
            }
        }
    }

    #[test]
    fn quadrature_converges_for_smooth_prefactors() {
        let mk = |steps: usize| {
            let gen =
                LindbladGenerator::new(ComplexMatrix::zeros(2, 2), vec![pauli_z().scale_re(0.5)])
                    .unwrap()
                    .with_prefactor(Prefactor::TimeDependent(Box::new(|t: f64| {
                        1.0 + 0.2 * t.sin()
                    })));
            liouville_bound(&gen, 0.0, 5.0, steps).unwrap()
        };
        let coarse = mk(DEFAULT_QUADRATURE_STEPS);
        let fine = mk(2 * DEFAULT_QUADRATURE_STEPS);
        assert!((coarse - fine).abs() < 1e-6);
    }
}
