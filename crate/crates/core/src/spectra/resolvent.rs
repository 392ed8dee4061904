//! Complex LU with partial pivoting, used for the resolvent
//! `R(z) = (M - zI)^{-1}` independently of the eigensolver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::point::UpperPoint;

/// Absolute residual tolerance on `(M - zI) R - I`.
pub const RESOLVENT_RESIDUAL_TOL: f64 = 1e-8;

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Row-major data of length `n * n`.
    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n, "complex matrix data length");
        Self { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

pub(crate) struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

fn factor(mut a: Vec<Complex64>, n: usize) -> Result<Lu> {
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (piv, mag) =
            (k..n)
                .map(|r| (r, a[r * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag == 0.0 {
            return Err(Error::IllConditioned {
                residual: f64::INFINITY,
                tolerance: RESOLVENT_RESIDUAL_TOL,
            });
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            perm.swap(k, piv);
        }
        let pivot = a[k * n + k];
        for r in k + 1..n {
            let f = a[r * n + k] / pivot;
            a[r * n + k] = f;
            if f != Complex64::new(0.0, 0.0) {
                for c in k + 1..n {
                    let u = a[k * n + c];
                    a[r * n + c] -= f * u;
                }
            }
        }
    }
    Ok(Lu { n, lu: a, perm })
}

impl Lu {
    /// Solves `A x = e_col`.
    pub(crate) fn solve_unit(&self, col: usize) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self
            .perm
            .iter()
            .map(|&p| Complex64::new(if p == col { 1.0 } else { 0.0 }, 0.0))
            .collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}

fn shifted(m: &SymMatrix, z: Complex64) -> Vec<Complex64> {
    let n = m.order();
    let mut a: Vec<Complex64> = m.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for i in 0..n {
        a[i * n + i] -= z;
    }
    a
}

/// LU factors of `M - zI` for column-wise solves.
pub(crate) fn factor_shifted(m: &SymMatrix, z: UpperPoint) -> Result<Lu> {
    factor(shifted(m, z.z()), m.order())
}

/// `(M - zI)^{-1}` by solving against each identity column, with a residual
/// check of the full product.
pub fn resolvent(m: &SymMatrix, z: UpperPoint) -> Result<ComplexMatrix> {
    let n = m.order();
    let a = shifted(m, z.z());
    let lu = factor(a.clone(), n)?;
    let mut inv = ComplexMatrix::zeros(n);
    for col in 0..n {
        let x = lu.solve_unit(col);
        for (r, v) in x.into_iter().enumerate() {
            inv.data[r * n + col] = v;
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(if i == j { -1.0 } else { 0.0 }, 0.0);
            for k in 0..n {
                s += a[i * n + k] * inv.data[k * n + j];
            }
            worst = worst.max(s.norm());
        }
    }
    if worst > RESOLVENT_RESIDUAL_TOL {
        return Err(Error::IllConditioned {
            residual: worst,
            tolerance: RESOLVENT_RESIDUAL_TOL,
        });
    }
    Ok(inv)
}
