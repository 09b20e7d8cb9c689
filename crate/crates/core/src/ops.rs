//! Standard operators: Pauli matrices, ladder operators, matrix units, and
//! Kronecker embeddings onto multi-qubit registers.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]]).unwrap()
}

/// Raising operator |0⟩⟨1|.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 0.0)]]).unwrap()
}

/// Lowering operator |1⟩⟨0|.
pub fn sigma_minus() -> ComplexMatrix {
    sigma_plus().adjoint()
}

/// Matrix unit E_{rc} of size n x n (single unit entry at row r, column c).
pub fn matrix_unit(n: usize, r: usize, c: usize) -> Result<ComplexMatrix> {
    if r >= n || c >= n {
        return Err(Error::InvalidParameter {
            what: alloc::format!("matrix_unit index ({r},{c}) out of range for dim {n}"),
        });
    }
    let mut m = ComplexMatrix::zeros(n, n);
    m.set(r, c, ONE);
    Ok(m)
}

/// Embed a single-qubit operator at `site` of an `m`-qubit register
/// (site 0 is the most significant factor).
pub fn embed_site(op: &ComplexMatrix, site: usize, m: usize) -> Result<ComplexMatrix> {
    if site >= m {
        return Err(Error::InvalidParameter {
            what: alloc::format!("site {site} out of range for {m} qubits"),
        });
    }
    let mut out = ComplexMatrix::identity(1);
    for k in 0..m {
        if k == site {
            out = out.kron(op);
        } else {
            out = out.kron(&ComplexMatrix::identity(2));
        }
    }
    Ok(out)
}

/// Kronecker product of Pauli factors given as a string over {I, X, Y, Z}.
pub fn pauli_string(spec: &str) -> Result<ComplexMatrix> {
    if spec.is_empty() {
        return Err(Error::InvalidParameter {
            what: "empty Pauli string".into(),
        });
    }
    let mut out = ComplexMatrix::identity(1);
    for ch in spec.chars() {
        let factor = match ch {
            'I' | 'i' => ComplexMatrix::identity(2),
            'X' | 'x' => pauli_x(),
            'Y' | 'y' => pauli_y(),
            'Z' | 'z' => pauli_z(),
            other => {
                return Err(Error::InvalidParameter {
                    what: alloc::format!("unknown Pauli factor '{other}'"),
                })
            }
        };
        out = out.kron(&factor);
    }
    Ok(out)
}

/// Projector |ψ⟩⟨ψ| from a (not necessarily normalized) state vector.
pub fn projector(psi: &[C64]) -> ComplexMatrix {
    let n = psi.len();
    let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(psi[i] * psi[j].conj() / norm_sqr);
        }
    }
    ComplexMatrix::from_vec(n, n, entries)
}
