//! Matrix exponential by scaling and squaring with Padé approximants,
//! following the Higham (2005) order selection and θ thresholds.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.53939833006323e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential of a square complex matrix.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let norm = a.one_norm();

    if norm <= THETA_9 {
        let coeffs: &[f64] = if norm <= THETA_3 {
            &B3
        } else if norm <= THETA_5 {
            &B5
        } else if norm <= THETA_7 {
            &B7
        } else {
            &B9
        };
        let (u, v) = pade_low_order(a, coeffs)?;
        return pade_solve(&u, &v);
    }

    // Order 13 with scaling: exp(A) = exp(A / 2^s)^(2^s).
    let s = ((norm / THETA_13).log2().ceil().max(0.0)) as u32;
    let scaled = a.scale_re((0.5f64).powi(s as i32));
    let (u, v) = pade_13(&scaled)?;
    let mut x = pade_solve(&u, &v)?;
    for _ in 0..s {
        x = x.matmul(&x)?;
    }
    debug_assert_eq!(x.rows(), n);
    Ok(x)
}

/// U and V for orders 3..9: U = A Σ b_{2k+1} A^{2k}, V = Σ b_{2k} A^{2k}.
fn pade_low_order(a: &ComplexMatrix, b: &[f64]) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.rows();
    let m = b.len() - 1; // Padé order
    let a2 = a.matmul(a)?;
    let mut powers: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(n)];
    for _ in 0..(m / 2) {
        let next = powers.last().unwrap().matmul(&a2)?;
        powers.push(next);
    }

    let mut u_inner = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < m {
            u_inner.add_scaled_assign(p, C64::new(b[2 * k + 1], 0.0))?;
        }
        v.add_scaled_assign(p, C64::new(b[2 * k], 0.0))?;
    }
    Ok((a.matmul(&u_inner)?, v))
}

fn pade_13(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.rows();
    let b = &B13;
    let a2 = a.matmul(a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;
    let id = ComplexMatrix::identity(n);

    let mut w1 = ComplexMatrix::zeros(n, n);
    w1.add_scaled_assign(&a6, C64::new(b[13], 0.0))?;
    w1.add_scaled_assign(&a4, C64::new(b[11], 0.0))?;
    w1.add_scaled_assign(&a2, C64::new(b[9], 0.0))?;
    let mut w = a6.matmul(&w1)?;
    w.add_scaled_assign(&a6, C64::new(b[7], 0.0))?;
    w.add_scaled_assign(&a4, C64::new(b[5], 0.0))?;
    w.add_scaled_assign(&a2, C64::new(b[3], 0.0))?;
    w.add_scaled_assign(&id, C64::new(b[1], 0.0))?;
    let u = a.matmul(&w)?;

    let mut z1 = ComplexMatrix::zeros(n, n);
    z1.add_scaled_assign(&a6, C64::new(b[12], 0.0))?;
    z1.add_scaled_assign(&a4, C64::new(b[10], 0.0))?;
    z1.add_scaled_assign(&a2, C64::new(b[8], 0.0))?;
    let mut v = a6.matmul(&z1)?;
    v.add_scaled_assign(&a6, C64::new(b[6], 0.0))?;
    v.add_scaled_assign(&a4, C64::new(b[4], 0.0))?;
    v.add_scaled_assign(&a2, C64::new(b[2], 0.0))?;
    v.add_scaled_assign(&id, C64::new(b[0], 0.0))?;
    Ok((u, v))
}

/// Solve (V - U) X = (V + U) for the Padé ratio.
fn pade_solve(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lhs = v.sub(u)?;
    let rhs = v.add(u)?;
    lu_solve(lhs, rhs)
}

/// Solve A X = B with partial-pivoted LU; consumes A as workspace.
pub(crate) fn lu_solve(mut a: ComplexMatrix, mut b: ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.rows(),
        });
    }
    let m = b.cols();

    for k in 0..n {
        let (pivot, pmag) = (k..n)
            .map(|i| (i, a.get(i, k).norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pmag == 0.0 {
            return Err(Error::InvalidParameter {
                what: "singular matrix in LU solve".into(),
            });
        }
        if pivot != k {
            swap_rows(&mut a, pivot, k);
            swap_rows(&mut b, pivot, k);
        }
        let diag = a.get(k, k);
        for i in (k + 1)..n {
            let factor = a.get(i, k) / diag;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in (k + 1)..n {
                let upd = a.get(k, j) * factor;
                let cur = a.get(i, j);
                a.set(i, j, cur - upd);
            }
            for j in 0..m {
                let upd = b.get(k, j) * factor;
                let cur = b.get(i, j);
                b.set(i, j, cur - upd);
            }
        }
    }

    // Back substitution.
    for k in (0..n).rev() {
        let diag = a.get(k, k);
        for j in 0..m {
            let mut acc = b.get(k, j);
            for i in (k + 1)..n {
                acc -= a.get(k, i) * b.get(i, j);
            }
            b.set(k, j, acc / diag);
        }
    }
    Ok(b)
}

fn swap_rows(m: &mut ComplexMatrix, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    let cols = m.cols();
    for j in 0..cols {
        let a = m.get(r1, j);
        let b = m.get(r2, j);
        m.set(r1, j, b);
        m.set(r2, j, a);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::pauli_x;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = ComplexMatrix::zeros(4, 4);
        let e = expm(&z).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(4)).unwrap() < 1e-15);
    }

    #[test]
    fn expm_diagonal() {
        let d = ComplexMatrix::diagonal(&[c(0.3, 0.0), c(-1.2, 0.7), c(0.0, -2.0)]);
        let e = expm(&d).unwrap();
        for (i, z) in [c(0.3, 0.0), c(-1.2, 0.7), c(0.0, -2.0)]
            .into_iter()
            .enumerate()
        {
            assert!((e.get(i, i) - z.exp()).norm() < 1e-14);
        }
        assert!(e.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn expm_pauli_rotation() {
        // exp(-iθ σx) = cos θ I - i sin θ σx at θ = 0.3
        let theta = 0.3;
        let arg = pauli_x().scale(c(0.0, -theta));
        let e = expm(&arg).unwrap();
        let expect = ComplexMatrix::identity(2)
            .scale_re(theta.cos())
            .add(&pauli_x().scale(c(0.0, -theta.sin())))
            .unwrap();
        assert!(e.max_abs_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn expm_inverse_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut unit = || ((rng.next_u64() >> 11) as f64 * (0.5f64).powi(53)) * 2.0 - 1.0;
        for n in [2usize, 3, 5, 8] {
            let mut a = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a.set(i, j, c(unit(), unit()));
                }
            }
            // Keep hs_norm ≤ 5 per the contract.
            let a = a.scale_re(4.0 / a.hs_norm().max(1.0));
            let e = expm(&a).unwrap();
            let einv = expm(&a.scale_re(-1.0)).unwrap();
            let prod = e.matmul(&einv).unwrap();
            assert!(
                prod.max_abs_diff(&ComplexMatrix::identity(n)).unwrap() < 1e-10,
                "exp(a) exp(-a) != I at n = {n}"
            );
        }
    }

    #[test]
    fn expm_large_norm_uses_scaling() {
        // diag entries well past θ13 force the squaring phase.
        let d = ComplexMatrix::diagonal(&[c(9.0, 0.0), c(-11.0, 3.0)]);
        let e = expm(&d).unwrap();
        assert!((e.get(0, 0) - c(9.0, 0.0).exp()).norm() / c(9.0, 0.0).exp().norm() < 1e-12);
        assert!((e.get(1, 1) - c(-11.0, 3.0).exp()).norm() < 1e-12);
    }

    #[test]
    fn expm_rejects_non_square() {
        assert!(matches!(
            expm(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn lu_solves_linear_systems() {
        let a = ComplexMatrix::from_rows(&[&[(2.0, 0.0), (1.0, 1.0)], &[(0.0, -1.0), (3.0, 0.0)]])
            .unwrap();
        let x = ComplexMatrix::from_rows(&[&[(1.0, 2.0)], &[(0.5, -0.5)]]).unwrap();
        let b = a.matmul(&x).unwrap();
        let solved = lu_solve(a, b).unwrap();
        assert!(solved.max_abs_diff(&x).unwrap() < 1e-13);
    }
}
