//! Dense LU with partial pivoting for the small element systems.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Row-major LU factors of a square matrix, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(n: usize, mut a: Vec<f64>) -> Result<Self> {
        assert!(n <= crate::MAX_ORDER + 4, "dense solver is sized for element systems");
        assert_eq!(a.len(), n * n, "matrix storage does not match dimension");
        let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::SingularMatrix);
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .unwrap();
            if a[pivot * n + col].abs() <= scale * 1e-15 {
                return Err(Error::SingularMatrix);
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                perm.swap(pivot, col);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / d;
                a[r * n + col] = factor;
                for c in col + 1..n {
                    a[r * n + c] -= factor * a[col * n + c];
                }
            }
        }
        Ok(Self { n, lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`, overwriting `b` with `x`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        let mut x = [0.0; crate::MAX_ORDER + 4];
        let x = &mut x[..n];
        for (r, &p) in self.perm.iter().enumerate() {
            x[r] = b[p];
        }
        for r in 0..n {
            let mut acc = x[r];
            for c in 0..r {
                acc -= self.lu[r * n + c] * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in r + 1..n {
                acc -= self.lu[r * n + c] * x[c];
            }
            x[r] = acc / self.lu[r * n + r];
        }
        b.copy_from_slice(x);
    }

    /// Explicit inverse, row-major.
    pub fn inverse(&self) -> Vec<f64> {
        let n = self.n;
        let mut inv = alloc::vec![0.0; n * n];
        let mut col = alloc::vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|v| *v = 0.0);
            col[j] = 1.0;
            self.solve_in_place(&mut col);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        inv
    }
}

/// Max absolute row sum.
pub fn norm_inf(n: usize, a: &[f64]) -> f64 {
    (0..n)
        .map(|r| a[r * n..(r + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Infinity-norm condition number of a row-major matrix.
pub fn condition_number(n: usize, a: &[f64]) -> Result<f64> {
    let lu = Lu::new(n, a.to_vec())?;
    Ok(norm_inf(n, a) * norm_inf(n, &lu.inverse()))
}
