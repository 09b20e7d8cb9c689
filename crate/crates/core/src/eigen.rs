//! Hermitian eigensolver and spectral norm.
//!
//! Cyclic Jacobi rotations on complex Hermitian matrices: deterministic,
//! quadratically convergent, and accurate enough that eigenvalues can be
//! frozen into golden tests. No randomized or blocked methods.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};

/// Entrywise tolerance for accepting a matrix as Hermitian. Inputs are
/// constructed analytically, so larger deviations signal a bug upstream.
pub const HERMITICITY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    a.check_hermitian(HERMITICITY_TOL)?;
    let (vals, _) = jacobi(a.clone(), false);
    Ok(vals)
}

/// Eigenvalues (ascending) and matching eigenvectors (as matrix columns).
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    a.check_hermitian(HERMITICITY_TOL)?;
    let (vals, vecs) = jacobi(a.clone(), true);
    Ok((vals, vecs.expect("vectors requested")))
}

/// Largest singular value, computed as sqrt of the largest eigenvalue of a†a.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let gram = a.adjoint().matmul(a)?;
    // a†a is Hermitian by construction; skip the tolerance gate and go
    // straight to the solver.
    let (vals, _) = jacobi(gram, false);
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    Ok(top.sqrt())
}

/// Cyclic Jacobi on a Hermitian matrix (not re-checked here). Consumes the
/// working copy; returns eigenvalues ascending and, optionally, eigenvectors.
fn jacobi(mut a: ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = a.rows();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let frob = a.hs_norm();
    let stop = 1e-14 * frob.max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }

    let mut vals: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i).re, i)).collect();
    vals.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));

    let sorted: Vec<f64> = vals.iter().map(|&(x, _)| x).collect();
    let vecs = v.map(|v| {
        let mut out = ComplexMatrix::zeros(n, n);
        for (new_col, &(_, old_col)) in vals.iter().enumerate() {
            for k in 0..n {
                out.set(k, new_col, v.get(k, old_col));
            }
        }
        out
    });
    (sorted, vecs)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += 2.0 * a.get(i, j).norm_sqr();
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry: A ← U† A U with
/// U = diag(1, e^{-iφ}) · G(θ), where φ = arg(A_pq) and θ is the classic
/// symmetric-Jacobi angle for the phase-stripped 2x2 block.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a.get(p, q);
    let beta = apq.norm();
    if beta == 0.0 {
        return;
    }
    let phase = apq / beta; // e^{iφ}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;

    let tau = (aqq - app) / (2.0 * beta);
    let t = if tau.abs() > 1e150 {
        1.0 / (2.0 * tau)
    } else if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column factors of U in the (p, q) plane:
    //   U[:,p] = (c, -s·e^{-iφ}),  U[:,q] = (s, c·e^{-iφ}).
    let n = a.rows();
    let se = phase.conj() * s; // s·e^{-iφ}
    let ce = phase.conj() * c; // c·e^{-iφ}

    // A ← A·U (all rows).
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * se);
        a.set(k, q, akp * s + akq * ce);
    }
    // A ← U†·A (all columns).
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * se.conj());
        a.set(q, k, apk * s + aqk * ce.conj());
    }

    // The block is diagonalized exactly; pin it to kill rounding residue.
    a.set(p, q, ZERO);
    a.set(q, p, ZERO);
    let new_pp = a.get(p, p).re;
    let new_qq = a.get(q, q).re;
    a.set(p, p, C64::new(new_pp, 0.0));
    a.set(q, q, C64::new(new_qq, 0.0));

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v.get(k, p);
            let vkq = v.get(k, q);
            v.set(k, p, vkp * c - vkq * se);
            v.set(k, q, vkp * s + vkq * ce);
        }
    }
}
