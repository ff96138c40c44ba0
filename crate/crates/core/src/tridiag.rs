//! Symmetric tridiagonal matrices and the Thomas algorithm.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Symmetric tridiagonal matrix stored as main and off diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSym {
    pub main: Vec<f64>,
    pub off: Vec<f64>,
}

impl TridiagonalSym {
    pub fn new(main: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if main.is_empty() {
            return Err(Error::Empty);
        }
        if off.len() + 1 != main.len() {
            return Err(Error::LengthMismatch {
                expected: main.len() - 1,
                got: off.len(),
            });
        }
        Ok(Self { main, off })
    }

    /// Toeplitz matrix with constant diagonals.
    pub fn constant(n: usize, diag: f64, off: f64) -> Result<Self> {
        Self::new(vec![diag; n], vec![off; n.saturating_sub(1)])
    }

    pub fn len(&self) -> usize {
        self.main.len()
    }

    pub fn is_empty(&self) -> bool {
        self.main.is_empty()
    }

    /// `y = T x`
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(y.len(), n);
        for i in 0..n {
            let mut s = self.main[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        self.apply(x, &mut y);
        y
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> crate::dense::DenseMatrix {
        let n = self.len();
        let mut m = crate::dense::DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.main[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.off[i];
                m[(i + 1, i)] = self.off[i];
            }
        }
        m
    }

    /// LU factors for repeated solves. No pivoting: intended for diagonally
    /// dominant matrices such as finite element mass matrices.
    pub fn factor(&self) -> TridiagLu {
        let n = self.len();
        let mut upper = vec![0.0; n.saturating_sub(1)];
        let mut inv_pivot = vec![0.0; n];
        let mut pivot = self.main[0];
        inv_pivot[0] = 1.0 / pivot;
        for i in 1..n {
            upper[i - 1] = self.off[i - 1] * inv_pivot[i - 1];
            pivot = self.main[i] - self.off[i - 1] * upper[i - 1];
            inv_pivot[i] = 1.0 / pivot;
        }
        TridiagLu {
            lower: self.off.clone(),
            upper,
            inv_pivot,
        }
    }

    /// Solves `T x = rhs` with the Thomas algorithm.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.is_empty() {
            return Err(Error::Empty);
        }
        if rhs.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        self.factor().solve_in_place(&mut x);
        Ok(x)
    }
}

/// Factored tridiagonal matrix, `T = L U` with unit upper bidiagonal `U`.
#[derive(Debug, Clone)]
pub struct TridiagLu {
    lower: Vec<f64>,
    upper: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl TridiagLu {
    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        x[0] *= self.inv_pivot[0];
        for i in 1..n {
            x[i] = (x[i] - self.lower[i - 1] * x[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            x[i] -= self.upper[i] * x[i + 1];
        }
    }

    /// Solves along a strided fiber `x[offset + k * stride]`, `k = 0..n`.
    pub(crate) fn solve_strided(&self, x: &mut [f64], offset: usize, stride: usize) {
        let n = self.len();
        let at = |k: usize| offset + k * stride;
        x[at(0)] *= self.inv_pivot[0];
        for i in 1..n {
            x[at(i)] = (x[at(i)] - self.lower[i - 1] * x[at(i - 1)]) * self.inv_pivot[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            x[at(i)] -= self.upper[i] * x[at(i + 1)];
        }
    }
}
