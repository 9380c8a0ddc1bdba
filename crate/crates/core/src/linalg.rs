//! Small dense solves for the per-mode interface systems and a tridiagonal
//! solver for the finite-difference oracle.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Solves the dense system `A x = b` by LU with partial pivoting.
pub fn solve_dense(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    let n = a.nrows();
    let lu = a.lu();
    // reject numerically singular pivots before solving
    let u = lu.u();
    let max_pivot = (0..n).map(|i| u[(i, i)].abs()).fold(0.0, f64::max);
    let min_pivot = (0..n)
        .map(|i| u[(i, i)].abs())
        .fold(f64::INFINITY, f64::min);
    if !(max_pivot > 0.0) || min_pivot <= max_pivot * 1e3 * f64::EPSILON {
        return Err(Error::SingularSystem(format!(
            "{n}x{n} system with pivot ratio {:e}",
            min_pivot / max_pivot
        )));
    }
    lu.solve(&b)
        .ok_or_else(|| Error::SingularSystem(format!("{n}x{n} LU solve failed")))
}

/// Tridiagonal system with rows `lower[i]·x[i-1] + diag[i]·x[i] + upper[i]·x[i+1] = rhs[i]`.
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, Default)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl Tridiagonal {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            lower: Vec::with_capacity(n),
            diag: Vec::with_capacity(n),
            upper: Vec::with_capacity(n),
            rhs: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn push_row(&mut self, lower: f64, diag: f64, upper: f64, rhs: f64) {
        self.lower.push(lower);
        self.diag.push(diag);
        self.upper.push(upper);
        self.rhs.push(rhs);
    }

    /// Thomas algorithm. Fails on a vanishing pivot.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let scale = self.diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
        let tiny = scale * 1e-14;
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0];
        if pivot.abs() <= tiny {
            return Err(Error::SingularSystem("zero pivot in row 0".into()));
        }
        c[0] = self.upper[0] / pivot;
        d[0] = self.rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.lower[i] * c[i - 1];
            if pivot.abs() <= tiny {
                return Err(Error::SingularSystem(format!("zero pivot in row {i}")));
            }
            c[i] = if i + 1 < n {
                self.upper[i] / pivot
            } else {
                0.0
            };
            d[i] = (self.rhs[i] - self.lower[i] * d[i - 1]) / pivot;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        Ok(x)
    }
}
