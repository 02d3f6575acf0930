//! Thomas elimination for complex tridiagonal systems.
//!
//! [`TridiagonalLu`] factors the matrix once so that repeated solves with the
//! same operator (one per Crank-Nicolson step) cost one forward and one backward
//! sweep.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// LU factors of a tridiagonal matrix with sub-diagonal `lower`, diagonal `diag`
/// and super-diagonal `upper`.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<Complex64>,
    /// `upper[i] / pivot[i]`
    ratio: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
}

impl TridiagonalLu {
    pub fn new(lower: &[Complex64], diag: &[Complex64], upper: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(Error::DimensionMismatch(format!(
                "diag {n}, lower {}, upper {}",
                lower.len(),
                upper.len()
            )));
        }
        let mut ratio = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); n];
        let mut prev_ratio = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let pivot = if i == 0 {
                diag[0]
            } else {
                diag[i] - lower[i - 1] * prev_ratio
            };
            if pivot.norm() == 0.0 || !pivot.is_finite() {
                return Err(Error::SingularPivot(i));
            }
            inv_pivot[i] = pivot.inv();
            if i + 1 < n {
                ratio[i] = upper[i] * inv_pivot[i];
                prev_ratio = ratio[i];
            }
        }
        Ok(Self {
            lower: lower.to_vec(),
            ratio,
            inv_pivot,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Solves into `out` with the right-hand side produced row by row by `rhs`,
    /// so that forming it and the forward sweep share one pass.
    pub fn solve_with(&self, out: &mut [Complex64], mut rhs: impl FnMut(usize) -> Complex64) -> Result<()> {
        let n = self.len();
        if out.len() != n {
            return Err(Error::DimensionMismatch(format!("output {} for order {n}", out.len())));
        }
        let mut prev = rhs(0) * self.inv_pivot[0];
        out[0] = prev;
        for i in 1..n {
            prev = (rhs(i) - self.lower[i - 1] * prev) * self.inv_pivot[i];
            out[i] = prev;
        }
        let mut next = out[n - 1];
        for i in (0..n - 1).rev() {
            next = out[i] - self.ratio[i] * next;
            out[i] = next;
        }
        Ok(())
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [Complex64]) -> Result<()> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch(format!("rhs {} for order {n}", rhs.len())));
        }
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i - 1] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.ratio[i] * rhs[i + 1];
        }
        Ok(())
    }
}

/// One-shot solve of a tridiagonal system.
pub fn solve(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let lu = TridiagonalLu::new(lower, diag, upper)?;
    let mut x = rhs.to_vec();
    lu.solve_in_place(&mut x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Dense Gaussian elimination with partial pivoting.
    fn dense_solve(mut m: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
        let n = b.len();
        for col in 0..n {
            let p = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
            m.swap(col, p);
            b.swap(col, p);
            for row in col + 1..n {
                let f = m[row][col] / m[col][col];
                for k in col..n {
                    let v = m[col][k];
                    m[row][k] -= f * v;
                }
                let v = b[col];
                b[row] -= f * v;
            }
        }
        let mut x = vec![c(0.0, 0.0); n];
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
            x[i] = (b[i] - s) / m[i][i];
        }
        x
    }

    fn dense(lower: &[Complex64], diag: &[Complex64], upper: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = diag.len();
        let mut m = vec![vec![c(0.0, 0.0); n]; n];
        for i in 0..n {
            m[i][i] = diag[i];
            if i + 1 < n {
                m[i][i + 1] = upper[i];
                m[i + 1][i] = lower[i];
            }
        }
        m
    }

    #[test]
    fn small_system_by_hand() {
        // [2 1 0; 1 2 1; 0 1 2] x = [4 8 8] -> x = [1 2 3]
        let one = vec![c(1.0, 0.0); 2];
        let diag = vec![c(2.0, 0.0); 3];
        let x = solve(&one, &diag, &one, &[c(4.0, 0.0), c(8.0, 0.0), c(8.0, 0.0)]).unwrap();
        for (xi, e) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((xi - c(e, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_shapes_and_singular_pivots() {
        let d = vec![c(1.0, 0.0); 3];
        assert!(matches!(TridiagonalLu::new(&d[..1], &d, &d[..2]), Err(Error::DimensionMismatch(_))));
        let zero = vec![c(0.0, 0.0); 3];
        assert_eq!(TridiagonalLu::new(&zero[..2], &zero, &zero[..2]).unwrap_err(), Error::SingularPivot(0));
        let two = vec![c(2.0, 0.0); 3];
        let lu = TridiagonalLu::new(&d[..2], &two, &d[..2]).unwrap();
        assert!(lu.solve_in_place(&mut [c(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn streamed_rhs_matches_slice_solve() {
        let lower: Vec<_> = (0..6).map(|i| c(0.1 * i as f64, -0.2)).collect();
        let upper: Vec<_> = (0..6).map(|i| c(-0.3, 0.05 * i as f64)).collect();
        let diag: Vec<_> = (0..7).map(|i| c(2.0 + i as f64, 1.0)).collect();
        let rhs: Vec<_> = (0..7).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        let lu = TridiagonalLu::new(&lower, &diag, &upper).unwrap();
        let mut out = vec![c(0.0, 0.0); 7];
        lu.solve_with(&mut out, |i| rhs[i]).unwrap();
        assert_eq!(out, solve(&lower, &diag, &upper, &rhs).unwrap());
    }

    proptest! {
        #[test]
        fn matches_dense_elimination(
            n in 1usize..40,
            seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4 * 40),
        ) {
            // Diagonally dominant, like the Crank-Nicolson operator.
            let take = |offset: usize, len: usize| -> Vec<Complex64> {
                (0..len).map(|i| { let (re, im) = seed[offset + i]; c(re, im) }).collect()
            };
            let lower = take(0, n.saturating_sub(1));
            let upper = take(40, n.saturating_sub(1));
            let diag: Vec<Complex64> = take(80, n).iter().map(|z| z + c(3.0, 1.0)).collect();
            let rhs = take(120, n);
            let x = solve(&lower, &diag, &upper, &rhs).unwrap();
            let expected = dense_solve(dense(&lower, &diag, &upper), rhs);
            for (a, b) in x.iter().zip(&expected) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
