//! Density matrices and the Lindblad generator.
//!
//! The master equation implemented here is
//!
//!   dρ/dt = -i[H(t), ρ] + γ(t) Σ_k (A_k ρ A_k† - ½{A_k†A_k, ρ})
//!
//! with a real non-negative dissipator prefactor γ(t) (default 1) and
//! constant jump operators A_k whose scale carries the rate. Hamiltonians may
//! be time dependent through a callback evaluated on grid points.

use alloc::borrow::Cow;
use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::eigen::{hermitian_eigenvalues, HERMITICITY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, I, ONE};
use crate::ops::projector;

/// Most negative admissible eigenvalue of a density matrix. Integrator
/// roundoff produces tiny negative eigenvalues; anything larger signals a bug.
pub const PSD_TOL: f64 = -1e-9;

/// Tolerance on |tr ρ - 1|.
pub const TRACE_TOL: f64 = 1e-10;

/// A valid quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix as a density matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotDensityMatrix {
                reason: format!("not square: {}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let dev = matrix.hermiticity_deviation()?;
        if dev > HERMITICITY_TOL {
            return Err(Error::NotDensityMatrix {
                reason: format!("hermiticity deviation {dev:.3e}"),
            });
        }
        let tr = matrix.trace()?;
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::NotDensityMatrix {
                reason: format!("trace {} + {}i, expected 1", tr.re, tr.im),
            });
        }
        let min_eig = hermitian_eigenvalues(&matrix)?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < PSD_TOL {
            return Err(Error::NotDensityMatrix {
                reason: format!("negative eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    /// Projector onto basis state |k⟩.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        let m = crate::ops::matrix_unit(dim, k, k)?;
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Purity tr(ρ²); equals the squared HS norm for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        let n = self.matrix.hs_norm();
        n * n
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }
}

/// Squared Euclidean distance tr[(ρ - ρ_s)²] between two states.
pub fn purity_deviation(rho: &DensityMatrix, reference: &DensityMatrix) -> Result<f64> {
    if rho.dim() != reference.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: reference.dim(),
        });
    }
    let diff = rho.matrix().sub(reference.matrix())?;
    let n = diff.hs_norm();
    Ok(n * n)
}

/// Reference solution for purity-deviation bounds.
///
/// `Origin` is the zero matrix (a trivial solution of the linear equation of
/// motion), so its purity deviation is the plain purity. `MaximallyMixed` and
/// `Explicit` must be stationary under the scenario's generator when a
/// deviation bound is claimed; `propagator::verify_stationary` checks this.
#[derive(Debug, Clone)]
pub enum ReferenceState {
    Origin,
    MaximallyMixed,
    Explicit(DensityMatrix),
}

impl ReferenceState {
    /// The reference as a density matrix; `None` for the origin.
    pub fn resolve(&self, dim: usize) -> Option<DensityMatrix> {
        match self {
            ReferenceState::Origin => None,
            ReferenceState::MaximallyMixed => Some(DensityMatrix::maximally_mixed(dim)),
            ReferenceState::Explicit(state) => Some(state.clone()),
        }
    }

    /// tr[(ρ - ρ_s)²] against this reference.
    pub fn deviation(&self, rho: &DensityMatrix) -> Result<f64> {
        match self.resolve(rho.dim()) {
            None => Ok(rho.purity()),
            Some(state) => purity_deviation(rho, &state),
        }
    }
}

/// System Hamiltonian, possibly driven.
pub enum Hamiltonian {
    Constant(ComplexMatrix),
    TimeDependent(Box<dyn Fn(f64) -> ComplexMatrix + Send + Sync>),
}

/// Real non-negative scale applied to the whole dissipator.
pub enum Prefactor {
    Constant(f64),
    TimeDependent(Box<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// Hamiltonian plus jump operators plus dissipator prefactor.
pub struct LindbladGenerator {
    dim: usize,
    hamiltonian: Hamiltonian,
    jump_ops: Vec<ComplexMatrix>,
    /// Cached Σ_k A_k† A_k.
    gram_sum: ComplexMatrix,
    prefactor: Prefactor,
}

impl LindbladGenerator {
    /// Generator with a constant Hamiltonian and unit prefactor.
    pub fn new(hamiltonian: ComplexMatrix, jump_ops: Vec<ComplexMatrix>) -> Result<Self> {
        hamiltonian.check_hermitian(HERMITICITY_TOL)?;
        Self::build(
            Hamiltonian::Constant(hamiltonian),
            jump_ops,
            Prefactor::Constant(1.0),
        )
    }

    /// Generator with a driven Hamiltonian H(t); the callback is validated
    /// (Hermiticity, dimension) each time it is sampled.
    pub fn new_time_dependent(
        dim: usize,
        hamiltonian: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'static,
        jump_ops: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                what: "dim must be positive".into(),
            });
        }
        let h = Hamiltonian::TimeDependent(Box::new(hamiltonian));
        Self::build_with_dim(dim, h, jump_ops, Prefactor::Constant(1.0))
    }

    pub fn with_prefactor(mut self, prefactor: Prefactor) -> Self {
        self.prefactor = prefactor;
        self
    }

    fn build(
        hamiltonian: Hamiltonian,
        jump_ops: Vec<ComplexMatrix>,
        prefactor: Prefactor,
    ) -> Result<Self> {
        let dim = match &hamiltonian {
            Hamiltonian::Constant(h) => h.rows(),
            Hamiltonian::TimeDependent(_) => unreachable!("constant path"),
        };
        Self::build_with_dim(dim, hamiltonian, jump_ops, prefactor)
    }

    fn build_with_dim(
        dim: usize,
        hamiltonian: Hamiltonian,
        jump_ops: Vec<ComplexMatrix>,
        prefactor: Prefactor,
    ) -> Result<Self> {
        let mut gram_sum = ComplexMatrix::zeros(dim, dim);
        for a in &jump_ops {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.rows(),
                });
            }
            let gram = a.adjoint().matmul(a)?;
            gram_sum.add_scaled_assign(&gram, ONE)?;
        }
        Ok(Self {
            dim,
            hamiltonian,
            jump_ops,
            gram_sum,
            prefactor,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jump_ops(&self) -> &[ComplexMatrix] {
        &self.jump_ops
    }

    /// Σ_k A_k† A_k, fixed at construction.
    pub fn gram_sum(&self) -> &ComplexMatrix {
        &self.gram_sum
    }

    /// True when neither the Hamiltonian nor the prefactor depends on time.
    pub fn is_time_independent(&self) -> bool {
        matches!(self.hamiltonian, Hamiltonian::Constant(_))
            && matches!(self.prefactor, Prefactor::Constant(_))
    }

    pub fn hamiltonian_at(&self, t: f64) -> Result<Cow<'_, ComplexMatrix>> {
        match &self.hamiltonian {
            Hamiltonian::Constant(h) => Ok(Cow::Borrowed(h)),
            Hamiltonian::TimeDependent(f) => {
                let h = f(t);
                if h.rows() != self.dim || h.cols() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: h.rows(),
                    });
                }
                h.check_hermitian(HERMITICITY_TOL)?;
                Ok(Cow::Owned(h))
            }
        }
    }

    pub fn prefactor_at(&self, t: f64) -> Result<f64> {
        let value = match &self.prefactor {
            Prefactor::Constant(g) => *g,
            Prefactor::TimeDependent(f) => f(t),
        };
        if !(value >= 0.0) {
            return Err(Error::NegativePrefactor { t, value });
        }
        Ok(value)
    }
}

/// Right-hand side of the master equation:
/// dρ/dt = -i[H, ρ] + γ(t) Σ_k (A_k ρ A_k† - ½{A_k†A_k, ρ}).
pub fn apply_generator(
    gen: &LindbladGenerator,
    rho: &ComplexMatrix,
    t: f64,
) -> Result<ComplexMatrix> {
    if rho.rows() != gen.dim() || rho.cols() != gen.dim() {
        return Err(Error::DimensionMismatch {
            expected: gen.dim(),
            found: rho.rows(),
        });
    }

    let h = gen.hamiltonian_at(t)?;
    let h_rho = h.matmul(rho)?;
    let rho_h = rho.matmul(&h)?;
    // -i[H, ρ]
    let mut out = h_rho.sub(&rho_h)?.scale(-I);

    let gamma = gen.prefactor_at(t)?;
    if gamma != 0.0 && !gen.jump_ops().is_empty() {
        let g = C64::new(gamma, 0.0);
        for a in gen.jump_ops() {
            let a_rho = a.matmul(rho)?;
            let sandwich = a_rho.matmul(&a.adjoint())?;
            out.add_scaled_assign(&sandwich, g)?;
        }
        let c_rho = gen.gram_sum().matmul(rho)?;
        let rho_c = rho.matmul(gen.gram_sum())?;
        out.add_scaled_assign(&c_rho, C64::new(-0.5 * gamma, 0.0))?;
        out.add_scaled_assign(&rho_c, C64::new(-0.5 * gamma, 0.0))?;
    }
    Ok(out)
}

/// Which subsystem `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a bipartite state with dim = dim_a * dim_b.
pub fn partial_trace(
    rho: &DensityMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<DensityMatrix> {
    if dim_a * dim_b != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: dim_a * dim_b,
        });
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(dim_a, dim_a);
            for i in 0..dim_a {
                for j in 0..dim_a {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..dim_b {
                        acc += m.get(i * dim_b + b, j * dim_b + b);
                    }
                    out.set(i, j, acc);
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(dim_b, dim_b);
            for a in 0..dim_b {
                for b in 0..dim_b {
                    let mut acc = C64::new(0.0, 0.0);
                    for i in 0..dim_a {
                        acc += m.get(i * dim_b + a, i * dim_b + b);
                    }
                    out.set(a, b, acc);
                }
            }
            out
        }
    };
    DensityMatrix::new(out)
}

/// Zero the off-diagonal entries (erase coherences in the computational basis).
pub fn diagonal_projection(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        out.set(i, i, C64::new(rho.matrix().get(i, i).re, 0.0));
    }
    DensityMatrix::from_matrix_unchecked(out)
}

pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (0.5f64).powi(53);
    let u2 = (rng.next_u64() >> 11) as f64 * (0.5f64).powi(53);
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

pub(crate) fn uniform_01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (0.5f64).powi(53)
}

/// Haar-distributed pure state |ψ⟩⟨ψ| (normalized complex Gaussian vector).
/// Deterministic for a given seed.
pub fn random_pure_state(dim: usize, seed: u64) -> DensityMatrix {
    assert!(dim >= 2, "random states need dim >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi: Vec<C64> = (0..dim)
        .map(|_| C64::new(standard_normal(&mut rng), standard_normal(&mut rng)))
        .collect();
    DensityMatrix::from_matrix_unchecked(projector(&psi))
}

/// Random full-rank mixed state G G† / tr(G G†) with complex Gaussian G.
/// Deterministic for a given seed.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    assert!(dim >= 2, "random states need dim >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g.set(
                i,
                j,
                C64::new(standard_normal(&mut rng), standard_normal(&mut rng)),
            );
        }
    }
    let gg = g.matmul(&g.adjoint()).expect("square");
    let tr = gg.trace().expect("square").re;
    DensityMatrix::from_matrix_unchecked(gg.scale_re(1.0 / tr))
}
