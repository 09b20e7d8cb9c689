//! Liouville space: density matrices as vectors, generators as superoperators.
//!
//! Vectorization is row-major, matching the index map α = (row-1)·N + column
//! (0-based: α = row·N + col). Under this convention vec(XρY) = (X ⊗ Yᵗ) vec(ρ),
//! and the master equation becomes the Schrödinger-like form
//!
//!   i d|ρ⟩/dt = 𝓗 |ρ⟩,
//!
//! with
//!
//!   𝓗 = (H ⊗ I - I ⊗ Hᵗ)
//!       + i γ(t) Σ_k [ A_k ⊗ A_k* - ½(A_k†A_k) ⊗ I - ½ I ⊗ (A_k†A_k)ᵗ ].
//!
//! The Hamiltonian contributes a Hermitian part only; the skew-Hermitian part
//! 𝓗 - 𝓗† stems entirely from the jump operators and is what drives purity
//! change. Its spectral norm is the Liouville-space speed-limit rate.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::{hermitian_eigen, hermitian_eigenvalues};
use crate::error::{Error, Result};
use crate::lindblad::{apply_generator, DensityMatrix, LindbladGenerator};
use crate::matrix::{ComplexMatrix, C64, I};

/// A density matrix reshaped into a length-N² vector (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleVector {
    n: usize,
    elems: Vec<C64>,
}

impl LiouvilleVector {
    /// Wrap a raw coefficient vector; the length must be a perfect square.
    pub fn new(elems: Vec<C64>) -> Result<Self> {
        let len = elems.len();
        let n = isqrt(len);
        if n * n != len || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: len,
            });
        }
        Ok(Self { n, elems })
    }

    /// Hilbert-space dimension N (the vector has N² entries).
    pub fn hilbert_dim(&self) -> usize {
        self.n
    }

    pub fn elems(&self) -> &[C64] {
        &self.elems
    }

    /// ⟨v|w⟩ with conjugation on the left argument.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.elems.len() != other.elems.len() {
            return Err(Error::DimensionMismatch {
                expected: self.elems.len(),
                found: other.elems.len(),
            });
        }
        Ok(self
            .elems
            .iter()
            .zip(&other.elems)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// ⟨v|v⟩ = tr(ρ†ρ); equals the purity when v = vec(ρ) for a state ρ.
    pub fn norm_sqr(&self) -> f64 {
        self.elems.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn isqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Reshape a square matrix into its Liouville vector (row-major stacking).
pub fn vectorize(rho: &ComplexMatrix) -> Result<LiouvilleVector> {
    if !rho.is_square() {
        return Err(Error::NotSquare {
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    Ok(LiouvilleVector {
        n: rho.rows(),
        elems: rho.entries().to_vec(),
    })
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &LiouvilleVector) -> ComplexMatrix {
    ComplexMatrix::from_vec(v.n, v.n, v.elems.clone())
}

/// The Liouville-space generator 𝓗 at a fixed time, N² x N².
pub struct SuperOperator {
    hilbert_dim: usize,
    matrix: ComplexMatrix,
    built_at: f64,
}

impl SuperOperator {
    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn built_at(&self) -> f64 {
        self.built_at
    }

    /// 𝓗 - 𝓗† (unhalved), the skew-Hermitian part responsible for purity
    /// change. Returns the full difference because that is the operator whose
    /// spectral norm enters the bounds.
    pub fn skew_part(&self) -> ComplexMatrix {
        self.matrix
            .sub(&self.matrix.adjoint())
            .expect("square by construction")
    }
}

/// Assemble 𝓗 for a generator at time t.
pub fn build_superoperator(gen: &LindbladGenerator, t: f64) -> Result<SuperOperator> {
    let n = gen.dim();
    let h = gen.hamiltonian_at(t)?;
    let gamma = gen.prefactor_at(t)?;

    let mut m = hamiltonian_part(&h)?;
    let diss = dissipator_part(gen)?;
    m.add_scaled_assign(&diss, C64::new(0.0, gamma))?;

    Ok(SuperOperator {
        hilbert_dim: n,
        matrix: m,
        built_at: t,
    })
}

/// H ⊗ I - I ⊗ Hᵗ (Hermitian for Hermitian H).
fn hamiltonian_part(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = h.rows();
    let id = ComplexMatrix::identity(n);
    h.kron(&id).sub(&id.kron(&h.transpose()))
}

/// Σ_k A_k ⊗ A_k* - ½ C ⊗ I - ½ I ⊗ Cᵗ with C = Σ_k A_k†A_k.
/// The full dissipator contribution to 𝓗 is i·γ(t) times this.
fn dissipator_part(gen: &LindbladGenerator) -> Result<ComplexMatrix> {
    let n = gen.dim();
    let nn = n * n;
    let mut d = ComplexMatrix::zeros(nn, nn);
    if gen.jump_ops().is_empty() {
        return Ok(d);
    }
    for a in gen.jump_ops() {
        let sandwich = a.kron(&a.conj());
        d.add_scaled_assign(&sandwich, C64::new(1.0, 0.0))?;
    }
    let id = ComplexMatrix::identity(n);
    let c = gen.gram_sum();
    d.add_scaled_assign(&c.kron(&id), C64::new(-0.5, 0.0))?;
    d.add_scaled_assign(&id.kron(&c.transpose()), C64::new(-0.5, 0.0))?;
    Ok(d)
}

/// Spectral norm of 𝓗 - 𝓗† at time t: the largest |λ| over the (real)
/// eigenvalues of the Hermitian matrix i(𝓗 - 𝓗†).
pub fn skew_spectral_norm(gen: &LindbladGenerator, t: f64) -> Result<f64> {
    let superop = build_superoperator(gen, t)?;
    skew_norm_of(&superop)
}

fn skew_norm_of(superop: &SuperOperator) -> Result<f64> {
    let hermitian = superop.skew_part().scale(I);
    let vals = hermitian_eigenvalues(&hermitian)?;
    Ok(vals.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// Skew spectral norm of the dissipator at unit prefactor. Because the skew
/// part is linear in γ(t) and independent of the Hamiltonian,
/// `skew_spectral_norm(gen, t) = prefactor(t) * unit_skew_spectral_norm(gen)`;
/// bound quadratures use this factorization instead of re-diagonalizing at
/// every quadrature node.
pub fn unit_skew_spectral_norm(gen: &LindbladGenerator) -> Result<f64> {
    let d = dissipator_part(gen)?;
    // skew(𝓗) with γ = 1 and H dropped is i(D + D†); multiply by i for the
    // Hermitian matrix whose extremal eigenvalue is the norm.
    let skew_times_i = d.add(&d.adjoint())?.scale_re(-1.0);
    let vals = hermitian_eigenvalues(&skew_times_i)?;
    Ok(vals.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// All singular values of 𝓗 - 𝓗† (the |eigenvalues| of i(𝓗 - 𝓗†)),
/// sorted ascending.
pub fn skew_singular_values(gen: &LindbladGenerator, t: f64) -> Result<Vec<f64>> {
    let superop = build_superoperator(gen, t)?;
    let hermitian = superop.skew_part().scale(I);
    let mut vals: Vec<f64> = hermitian_eigenvalues(&hermitian)?
        .into_iter()
        .map(|v| v.abs())
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Search the kernel of 𝓗(t) for a stationary density matrix: take the
/// eigenvector of 𝓗†𝓗 with the smallest eigenvalue, Hermitize, normalize the
/// trace, and accept only if it validates as a state and annihilates the
/// generator to within 1e-9. Returns `None` when the kernel element does not
/// correspond to a physical state (degenerate or traceless kernels).
pub fn stationary_state(gen: &LindbladGenerator, t: f64) -> Result<Option<DensityMatrix>> {
    let superop = build_superoperator(gen, t)?;
    let m = superop.matrix();
    let gram = m.adjoint().matmul(m)?;
    let (_, vectors) = hermitian_eigen(&gram)?;
    let nn = gen.dim() * gen.dim();
    let kernel: Vec<C64> = (0..nn).map(|i| vectors.get(i, 0)).collect();
    let candidate = devectorize(&LiouvilleVector::new(kernel)?);
    let hermitized = candidate.add(&candidate.adjoint())?.scale_re(0.5);
    let tr = hermitized.trace()?.re;
    if tr.abs() < 1e-6 {
        return Ok(None);
    }
    let normalized = hermitized.scale_re(1.0 / tr);
    let state = match DensityMatrix::new(normalized) {
        Ok(s) => s,
        Err(_) => return Ok(None),
    };
    let residual = apply_generator(gen, state.matrix(), t)?.hs_norm();
    if residual < 1e-9 {
        Ok(Some(state))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::random_density;
    use crate::matrix::ZERO;
    use crate::ops::{pauli_x, pauli_z, sigma_minus, sigma_plus};
    use alloc::vec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vectorize_is_row_major() {
        let m = ComplexMatrix::from_rows(&[&[(1.0, 0.0), (2.0, 0.0)], &[(3.0, 0.0), (4.0, 0.0)]])
            .unwrap();
        let v = vectorize(&m).unwrap();
        let expect = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        assert_eq!(v.elems(), expect);
        assert_eq!(devectorize(&v), m);
    }

    #[test]
    fn vector_norm_is_purity() {
        let mm = ComplexMatrix::identity(2).scale_re(0.5);
        let v = vectorize(&mm).unwrap();
        assert!((v.norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn devectorize_rejects_non_square_length() {
        assert!(LiouvilleVector::new(vec![ZERO; 5]).is_err());
    }

    #[test]
    fn vec_of_sandwich_is_kron_action() {
        // vec(XρY) = (X ⊗ Yᵗ) vec(ρ)
        let x = pauli_x();
        let y = crate::ops::pauli_y();
        for seed in 0..5 {
            let rho = random_density(2, seed);
            let lhs = vectorize(&x.matmul(rho.matrix()).unwrap().matmul(&y).unwrap()).unwrap();
            let op = x.kron(&y.transpose());
            let rhs = op.matvec(vectorize(rho.matrix()).unwrap().elems()).unwrap();
            for (a, b) in lhs.elems().iter().zip(&rhs) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hamiltonian_only_superoperator() {
        let gen = LindbladGenerator::new(pauli_z(), vec![]).unwrap();
        let superop = build_superoperator(&gen, 0.0).unwrap();
        let expect =
            ComplexMatrix::diagonal(&[c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)]);
        assert!(superop.matrix().max_abs_diff(&expect).unwrap() < 1e-15);
        assert!(superop.matrix().is_hermitian(1e-12));
        assert!(superop.skew_part().max_abs() < 1e-12);
    }

    #[test]
    fn half_sigma_z_dephasing_superoperator() {
        // A = σz/2, H = 0. Fixing the generator so that the superoperator
        // action reproduces dρ/dt = (σzρσz - ρ)/4 gives
        // 𝓗 = (i/4)(σz⊗σz - I) and skew part (i/2)(σz⊗σz - I).
        let gen = LindbladGenerator::new(ComplexMatrix::zeros(2, 2), vec![pauli_z().scale_re(0.5)])
            .unwrap();
        let superop = build_superoperator(&gen, 0.0).unwrap();
        let zz_minus_i = pauli_z()
            .kron(&pauli_z())
            .sub(&ComplexMatrix::identity(4))
            .unwrap();
        let expect = zz_minus_i.scale(c(0.0, 0.25));
        assert!(superop.matrix().max_abs_diff(&expect).unwrap() < 1e-15);

        let skew = superop.skew_part();
        assert!(skew.max_abs_diff(&zz_minus_i.scale(c(0.0, 0.5))).unwrap() < 1e-15);
        // Purely skew: 𝓗† = -𝓗.
        assert!(
            superop
                .matrix()
                .add(&superop.matrix().adjoint())
                .unwrap()
                .max_abs()
                < 1e-15
        );
        assert!((skew_spectral_norm(&gen, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skew_part_is_independent_of_hamiltonian() {
        for seed in 0..10u64 {
            let h = {
                let g = random_density(3, seed + 50);
                g.matrix().scale_re(2.0)
            };
            let a = random_density(3, seed + 90).matrix().clone();
            let with_h = LindbladGenerator::new(h, vec![a.clone()]).unwrap();
            let without_h = LindbladGenerator::new(ComplexMatrix::zeros(3, 3), vec![a]).unwrap();
            let s1 = build_superoperator(&with_h, 0.0).unwrap().skew_part();
            let s2 = build_superoperator(&without_h, 0.0).unwrap().skew_part();
            assert!(s1.max_abs_diff(&s2).unwrap() < 1e-12);
            // Skew-Hermitian: (𝓗-𝓗†)† = -(𝓗-𝓗†).
            assert!(s1.add(&s1.adjoint()).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn superoperator_action_matches_direct_application() {
        // The defining consistency check, swept over random generators and
        // states: devectorize(-i 𝓗 vec(ρ)) = dρ/dt from the master equation.
        let mut checked = 0;
        for n in [2usize, 3, 4] {
            for seed in 0..67u64 {
                let base = seed * 13 + n as u64 * 1000;
                let h = {
                    let g = random_density(n, base + 1);
                    let sym = g.matrix().add(&g.matrix().adjoint()).unwrap();
                    sym.scale_re(1.5)
                };
                let n_jumps = 1 + (seed % 3) as usize;
                let jumps: vec::Vec<ComplexMatrix> = (0..n_jumps)
                    .map(|k| {
                        let g = random_density(n, base + 10 + k as u64);
                        g.matrix()
                            .sub(&ComplexMatrix::identity(n).scale_re(1.0 / n as f64))
                            .unwrap()
                            .scale(c(0.7, 0.3))
                    })
                    .collect();
                let gen = LindbladGenerator::new(h, jumps).unwrap();
                let rho = random_density(n, base + 99);

                let direct = apply_generator(&gen, rho.matrix(), 0.0).unwrap();
                let superop = build_superoperator(&gen, 0.0).unwrap();
                let v = vectorize(rho.matrix()).unwrap();
                let hv = superop.matrix().matvec(v.elems()).unwrap();
                let via_superop = devectorize(
                    &LiouvilleVector::new(hv.iter().map(|z| z * c(0.0, -1.0)).collect()).unwrap(),
                );
                assert!(
                    via_superop.max_abs_diff(&direct).unwrap() < 1e-12,
                    "superoperator action disagrees at n = {n}, seed = {seed}"
                );
                checked += 1;
            }
        }
        assert!(checked >= 200);
    }

    #[test]
    fn skew_norm_scales_linearly_in_prefactor() {
        let gen = LindbladGenerator::new(pauli_x(), vec![pauli_z().scale_re(0.5)]).unwrap();
        let base = skew_spectral_norm(&gen, 0.0).unwrap();
        let scaled = LindbladGenerator::new(pauli_x(), vec![pauli_z().scale_re(0.5)])
            .unwrap()
            .with_prefactor(crate::lindblad::Prefactor::Constant(2.5));
        assert!((skew_spectral_norm(&scaled, 0.0).unwrap() - 2.5 * base).abs() < 1e-10);
        assert!((unit_skew_spectral_norm(&scaled).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn no_jumps_means_zero_skew_norm() {
        let gen = LindbladGenerator::new(pauli_x(), vec![]).unwrap();
        assert_eq!(skew_spectral_norm(&gen, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn local_dephasing_norm_scales_with_site_count() {
        // M copies of the same single-site channel: the skew norm is M times
        // the single-site value (brute force up to M = 4).
        let single = {
            let gen =
                LindbladGenerator::new(ComplexMatrix::zeros(2, 2), vec![pauli_z().scale_re(0.5)])
                    .unwrap();
            skew_spectral_norm(&gen, 0.0).unwrap()
        };
        for m in 2..=4usize {
            let dim = 1 << m;
            let jumps: vec::Vec<ComplexMatrix> = (0..m)
                .map(|site| crate::ops::embed_site(&pauli_z().scale_re(0.5), site, m).unwrap())
                .collect();
            let gen = LindbladGenerator::new(ComplexMatrix::zeros(dim, dim), jumps).unwrap();
            let norm = skew_spectral_norm(&gen, 0.0).unwrap();
            assert!(
                (norm - m as f64 * single).abs() < 1e-9,
                "M = {m}: {norm} vs {}",
                m as f64 * single
            );
        }
    }

    #[test]
    fn unitary_diagonal_dephasing_norm_is_max_phase_gap() {
        // A = diag(e^{iφ_j}): brute-force skew norm equals max_{ij} |e^{iφ_i} - e^{iφ_j}|².
        let phases = [0.3, 1.9, 4.4, 5.6];
        let diag: vec::Vec<C64> = phases.iter().map(|&p| c(p.cos(), p.sin())).collect();
        let a = ComplexMatrix::diagonal(&diag);
        let gen = LindbladGenerator::new(ComplexMatrix::zeros(4, 4), vec![a]).unwrap();
        let norm = skew_spectral_norm(&gen, 0.0).unwrap();
        let mut expect = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                expect = expect.max((diag[i] - diag[j]).norm_sqr());
            }
        }
        assert!((norm - expect).abs() < 1e-12);
        assert!(norm <= 4.0 + 1e-12);
    }

    #[test]
    fn stationary_state_of_amplitude_damping() {
        // Pure decay to |1⟩⟨1| (σ- = |1⟩⟨0| pumps population downward).
        let gen = LindbladGenerator::new(ComplexMatrix::zeros(2, 2), vec![sigma_minus()]).unwrap();
        let ss = stationary_state(&gen, 0.0)
            .unwrap()
            .expect("unique steady state");
        assert!((ss.matrix().get(1, 1).re - 1.0).abs() < 1e-9);

        let gen_up =
            LindbladGenerator::new(ComplexMatrix::zeros(2, 2), vec![sigma_plus()]).unwrap();
        let ss = stationary_state(&gen_up, 0.0)
            .unwrap()
            .expect("unique steady state");
        assert!((ss.matrix().get(0, 0).re - 1.0).abs() < 1e-9);
    }
}
