use crate::error::{FemError, Result};
use crate::linalg::{reverse_cuthill_mckee, CsrMatrix};
use crate::Real;

/// LU factorization with partial pivoting of a sparse matrix after
/// bandwidth-reducing reordering.
///
/// Handles indefinite systems such as saddle-point matrices with a zero block.
#[derive(Clone, Debug)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    width: usize,
    // row i stores columns i - kl ..= i + kl + ku
    band: Vec<T>,
    pivots: Vec<usize>,
    perm: Vec<usize>,
}

impl<T: Real> BandedLu<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        assert_eq!(n, a.ncols());
        let mut adj = vec![Vec::new(); n];
        for (i, j, _) in a.triplets() {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        let perm = reverse_cuthill_mckee(&adj);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let (mut kl, mut ku) = (0usize, 0usize);
        for (i, j, _) in a.triplets() {
            let (pi, pj) = (inv[i], inv[j]);
            if pi > pj {
                kl = kl.max(pi - pj);
            } else {
                ku = ku.max(pj - pi);
            }
        }
        let width = 2 * kl + ku + 1;
        let mut band = vec![T::zero(); n * width];
        let mut amax = T::zero();
        for (i, j, v) in a.triplets() {
            let (pi, pj) = (inv[i], inv[j]);
            band[pi * width + pj + kl - pi] = band[pi * width + pj + kl - pi] + v;
            amax = amax.max(v.abs());
        }
        let tiny = amax * T::epsilon() * T::lit(1e-3);
        let mut pivots = vec![0; n];
        let idx = |r: usize, c: usize| r * width + c + kl - r;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = band[idx(k, k)].abs();
            for i in k + 1..=last {
                let v = band[idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > tiny) {
                return Err(FemError::SingularFactorization { row: k });
            }
            pivots[k] = p;
            let cmax = (k + kl + ku).min(n - 1);
            if p != k {
                for c in k..=cmax {
                    band.swap(idx(k, c), idx(p, c));
                }
            }
            let piv = band[idx(k, k)];
            for i in k + 1..=last {
                let f = band[idx(i, k)] / piv;
                band[idx(i, k)] = f;
                if f == T::zero() {
                    continue;
                }
                for c in k + 1..=cmax {
                    band[idx(i, c)] = band[idx(i, c)] - f * band[idx(k, c)];
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            width,
            band,
            pivots,
            perm,
        })
    }

    pub fn bandwidth(&self) -> usize {
        self.width
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let (n, kl, w) = (self.n, self.kl, self.width);
        let ku2 = w - 1 - kl;
        let idx = |r: usize, c: usize| r * w + c + kl - r;
        let mut y: Vec<T> = self.perm.iter().map(|&o| b[o]).collect();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                y.swap(k, p);
            }
            let yk = y[k];
            for i in k + 1..=(k + kl).min(n.saturating_sub(1)) {
                y[i] = y[i] - self.band[idx(i, k)] * yk;
            }
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for c in i + 1..=(i + ku2).min(n - 1) {
                s = s - self.band[idx(i, c)] * y[c];
            }
            y[i] = s / self.band[idx(i, i)];
        }
        let mut x = vec![T::zero(); n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}
