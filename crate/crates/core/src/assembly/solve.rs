use serde::Serialize;

use crate::error::{FemError, Result};
use crate::linalg::{conjugate_gradient, BandedLu, CsrMatrix};
use crate::Real;

/// Structure of an assembled system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SystemKind {
    /// Symmetric positive definite (primal, after boundary elimination).
    Spd,
    /// `[[M, -B^T], [-B, 0]]` with `n_flux` flux and `n_pressure` pressure unknowns.
    Saddle { n_flux: usize, n_pressure: usize },
}

#[derive(Clone, Debug)]
pub struct SparseSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
    pub kind: SystemKind,
}

impl<T: Real> SparseSystem<T> {
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    /// `max |A - A^T|` relative to `max |A|`, below `1e-12`.
    pub fn is_symmetric(&self) -> bool {
        let scale = self
            .matrix
            .triplets()
            .fold(T::zero(), |m, (_, _, v)| m.max(v.abs()));
        self.matrix.asymmetry() <= T::lit(1e-12) * scale.max(T::min_positive_value())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolveMethod {
    ConjugateGradient,
    BandedLu,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Relative residual target for conjugate gradients.
    pub rtol: f64,
    /// Iteration cap as a multiple of the system size.
    pub max_iter_factor: usize,
    /// Forces the method; by default SPD systems use CG and saddle systems banded LU.
    pub method: Option<SolveMethod>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rtol: 1e-12,
            max_iter_factor: 50,
            method: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport<T> {
    #[serde(skip)]
    pub solution: Vec<T>,
    pub method: SolveMethod,
    pub iterations: usize,
    pub bandwidth: Option<usize>,
    /// `||b - A x|| / ||b||`, recomputed by multiplication.
    pub relative_residual: f64,
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

fn residual<T: Real>(a: &CsrMatrix<T>, x: &[T], b: &[T]) -> Vec<T> {
    a.matvec(x).iter().zip(b).map(|(&ax, &bi)| bi - ax).collect()
}

/// Solves an assembled system.
pub fn solve<T: Real>(sys: &SparseSystem<T>, opts: &SolverOptions) -> Result<SolveReport<T>> {
    let n = sys.len();
    let method = opts.method.unwrap_or(match sys.kind {
        SystemKind::Spd => SolveMethod::ConjugateGradient,
        SystemKind::Saddle { .. } => SolveMethod::BandedLu,
    });
    if n == 0 {
        return Ok(SolveReport {
            solution: Vec::new(),
            method,
            iterations: 0,
            bandwidth: None,
            relative_residual: 0.0,
        });
    }
    let bnorm = norm(&sys.rhs);
    let rel = |x: &[T]| {
        if bnorm == T::zero() {
            norm(x).to_f64_lossy()
        } else {
            (norm(&residual(&sys.matrix, x, &sys.rhs)) / bnorm).to_f64_lossy()
        }
    };
    match method {
        SolveMethod::ConjugateGradient => {
            let mut x = vec![T::zero(); n];
            let cg = conjugate_gradient(
                &sys.matrix,
                &sys.rhs,
                &mut x,
                T::lit(opts.rtol),
                opts.max_iter_factor * n,
            );
            match cg {
                Ok(rep) => Ok(SolveReport {
                    relative_residual: rel(&x),
                    solution: x,
                    method,
                    iterations: rep.iterations,
                    bandwidth: None,
                }),
                Err(e @ FemError::NonConvergence { .. }) if opts.method.is_none() => {
                    log::warn!("{e}; falling back to banded LU");
                    banded(sys, rel)
                }
                Err(e) => Err(e),
            }
        }
        SolveMethod::BandedLu => banded(sys, rel),
    }
}

fn banded<T: Real>(sys: &SparseSystem<T>, rel: impl Fn(&[T]) -> f64) -> Result<SolveReport<T>> {
    // symmetric diagonal scaling D^-1/2 A D^-1/2
    let d: Vec<T> = sys
        .matrix
        .diagonal()
        .into_iter()
        .map(|v| if v.abs() > T::zero() { T::one() / v.abs().sqrt() } else { T::one() })
        .collect();
    let scaled = CsrMatrix::from_triplets(
        sys.len(),
        sys.len(),
        sys.matrix.triplets().map(|(i, j, v)| (i, j, d[i] * v * d[j])).collect(),
    );
    let lu = BandedLu::factor(&scaled)?;
    let solve_scaled = |b: &[T]| -> Vec<T> {
        let sb: Vec<T> = b.iter().zip(&d).map(|(&v, &di)| v * di).collect();
        lu.solve(&sb).iter().zip(&d).map(|(&v, &di)| v * di).collect()
    };
    let mut x = solve_scaled(&sys.rhs);
    // one step of iterative refinement
    let r = residual(&sys.matrix, &x, &sys.rhs);
    let dx = solve_scaled(&r);
    x.iter_mut().zip(&dx).for_each(|(a, &d)| *a = *a + d);
    let res = rel(&x);
    if !res.is_finite() || res > 1e-6 {
        return Err(FemError::NonConvergence {
            iterations: 1,
            residual: res,
        });
    }
    Ok(SolveReport {
        solution: x,
        method: SolveMethod::BandedLu,
        iterations: 1,
        bandwidth: Some(lu.bandwidth()),
        relative_residual: res,
    })
}
