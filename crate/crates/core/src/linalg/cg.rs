use crate::error::{FemError, Result};
use crate::linalg::CsrMatrix;
use crate::Real;

#[derive(Clone, Copy, Debug)]
pub struct CgReport {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients for a symmetric positive definite matrix.
///
/// Stops when `||b - Ax|| <= rtol ||b||`. The recursive residual is replaced by
/// the true one whenever it claims convergence.
pub fn conjugate_gradient<T: Real>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    rtol: T,
    max_iter: usize,
) -> Result<CgReport> {
    let n = b.len();
    let dinv: Vec<T> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > T::zero() { T::one() / d } else { T::one() })
        .collect();
    let bnorm = dot(b, b).sqrt();
    if bnorm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return Ok(CgReport {
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let target = rtol * bnorm;
    let mut ax = a.matvec(x);
    let mut r: Vec<T> = (0..n).map(|i| b[i] - ax[i]).collect();
    let mut z: Vec<T> = (0..n).map(|i| dinv[i] * r[i]).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![T::zero(); n];
    let mut it = 0;
    loop {
        let rnorm = dot(&r, &r).sqrt();
        if rnorm <= target {
            a.matvec_into(x, &mut ax);
            let true_r: Vec<T> = (0..n).map(|i| b[i] - ax[i]).collect();
            let tn = dot(&true_r, &true_r).sqrt();
            if tn <= target * T::lit(10.0) {
                return Ok(CgReport {
                    iterations: it,
                    relative_residual: (tn / bnorm).to_f64_lossy(),
                });
            }
            r = true_r;
            z = (0..n).map(|i| dinv[i] * r[i]).collect();
            p = z.clone();
            rz = dot(&r, &z);
        }
        if it >= max_iter {
            return Err(FemError::NonConvergence {
                iterations: it,
                residual: (rnorm / bnorm).to_f64_lossy(),
            });
        }
        a.matvec_into(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > T::zero()) {
            return Err(FemError::NonConvergence {
                iterations: it,
                residual: (rnorm / bnorm).to_f64_lossy(),
            });
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] = x[i] + alpha * p[i];
            r[i] = r[i] - alpha * q[i];
            z[i] = dinv[i] * r[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        it += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_1d_laplacian() {
        let n = 50;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, t);
        let xt: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.matvec(&xt);
        let mut x = vec![0.0; n];
        let rep = conjugate_gradient(&a, &b, &mut x, 1e-12, 500).unwrap();
        assert!(rep.iterations <= n + 5);
        for (u, v) in x.iter().zip(&xt) {
            assert!((u - v).abs() < 1e-9);
        }
    }
}
