//! Cyclic Jacobi for Hermitian eigenproblems and one-sided Jacobi for singular
//! values. Both are meant for the tiny dense matrices of this crate (side <= ~100).

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, HERMITIAN_TOL, ZERO};

/// Sweep stops once the off-diagonal Frobenius mass drops below this fraction of
/// the matrix norm.
pub const JACOBI_REL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`. Each column
    /// has its first nonzero component real and positive.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }
}

/// Rotation `G` on the (p, q) plane that zeroes the (p, q) entry of `G^dagger A G`,
/// given `a_pp`, `a_qq` (real) and `a_pq`. Returns (c, s, e^{-i theta}) with
/// `G_pp = c, G_pq = s, G_qp = -s e^{-i theta}, G_qq = c e^{-i theta}`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let mag = apq.norm();
    let phase_conj = (apq / mag).conj();
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase_conj)
}

/// Multiplies columns p, q of `m` (row-major, `n` columns) by the rotation on the right.
fn rotate_columns(m: &mut [C64], rows: usize, n: usize, p: usize, q: usize, rot: (f64, f64, C64)) {
    let (c, s, ph) = rot;
    for k in 0..rows {
        let xp = m[k * n + p];
        let xq = m[k * n + q];
        m[k * n + p] = xp * c - xq * ph * s;
        m[k * n + q] = xp * s + xq * ph * c;
    }
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.rows();
    // exact Hermitian copy
    let mut a: Vec<C64> = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    })
    .entries()
    .to_vec();
    let mut v = ComplexMatrix::identity(n).entries().to_vec();

    let norm = a.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
    let mut converged = norm == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_REL_TOL * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == ZERO {
                    continue;
                }
                let rot = jacobi_rotation(a[p * n + p].re, a[q * n + q].re, apq);
                // A <- A G
                rotate_columns(&mut a, n, n, p, q, rot);
                // A <- G^dagger A, rows p and q
                let (c, s, ph) = rot;
                let phc = ph.conj();
                for k in 0..n {
                    let xp = a[p * n + k];
                    let xq = a[q * n + k];
                    a[p * n + k] = xp * c - xq * phc * s;
                    a[q * n + k] = xp * s + xq * phc * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                rotate_columns(&mut v, n, n, p, q, rot);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: Vec<C64> = (0..n).map(|k| v[k * n + src]).collect();
        fix_phase(&mut col);
        for (k, z) in col.into_iter().enumerate() {
            vectors[(k, dst)] = z;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Rotates the global phase so the first component with modulus above 1e-12
/// becomes real and positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let ph = (z / z.norm()).conj();
        for x in v.iter_mut() {
            *x *= ph;
        }
    }
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.values)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?[0])
}

pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tol)
}

/// Singular values in descending order, by one-sided (Hestenes) Jacobi.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    // Work on the orientation with at least as many rows as columns.
    let a = if m.rows() >= m.cols() { m.clone() } else { m.dagger() };
    let (rows, n) = (a.rows(), a.cols());
    let mut w = a.entries().to_vec();
    let eps = f64::EPSILON * rows as f64;
    let floor = f64::EPSILON * w.iter().map(|z| z.norm_sqr()).sum::<f64>();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..rows {
                    let xp = w[k * n + p];
                    let xq = w[k * n + q];
                    alpha += xp.norm_sqr();
                    beta += xq.norm_sqr();
                    gamma += xp.conj() * xq;
                }
                if gamma.norm() <= floor || gamma.norm() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, rows, n, p, q, rot);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| (0..rows).map(|k| w[k * n + j].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Reassembles `sum_i lambda_i v_i v_i^dagger`.
pub fn reconstruct(e: &HermitianEigen) -> ComplexMatrix {
    let n = e.vectors.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, &lam) in e.values.iter().enumerate() {
        let v = e.vector(i);
        out = &out + &ComplexMatrix::projector(&v).scale_real(lam);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let m = ComplexMatrix::diagonal(&[C64::new(3.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let ev = hermitian_eigenvalues(&real(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_eigenvectors() {
        // sigma_y: eigenvalues -1, 1
        let m = ComplexMatrix::from_vec(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])
            .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        for i in 0..2 {
            let v = e.vector(i);
            let mv = m.mul_vec(&v);
            for k in 0..2 {
                assert!((mv[k] - v[k] * e.values[i]).norm() < 1e-14);
            }
            assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
        }
        assert!(reconstruct(&e).max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&ComplexMatrix::identity(4), 1e-12).unwrap());
        assert!(!is_psd(&real(&[&[1.0, 0.0], &[0.0, -1.0]]), 1e-12).unwrap());
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        assert_eq!(singular_values(&ComplexMatrix::zeros(2, 3)).unwrap(), vec![0.0; 2]);
    }

    #[test]
    fn singular_values_of_known_matrices() {
        let m = real(&[&[3.0, 0.0], &[4.0, 5.0]]);
        // sigma = sqrt(45), sqrt(5)
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 45f64.sqrt()).abs() < 1e-13);
        assert!((sv[1] - 5f64.sqrt()).abs() < 1e-13);
        // wide: same as transposed
        let sv2 = singular_values(&m.transpose()).unwrap();
        assert!((sv2[0] - sv[0]).abs() < 1e-13 && (sv2[1] - sv[1]).abs() < 1e-13);
        let rect = real(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 2.0]]);
        assert_eq!(singular_values(&rect).unwrap(), vec![2.0, 1.0]);
    }
}
