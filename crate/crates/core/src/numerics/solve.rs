use serde::Serialize;

use super::matrix::{inf_norm, Matrix};
use crate::error::{Error, Result};

/// Pivots smaller than this are treated as exact zeros.
pub const SINGULAR_PIVOT: f64 = 1e-13;
/// Relative residual accepted from the direct solver.
pub const DIRECT_RESIDUAL: f64 = 1e-9;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Direct,
    Neumann,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub method: SolveMethod,
    /// ∞-norm of `b - A x` (direct) or `b + K x - x` (Neumann).
    pub residual: f64,
    pub iterations: usize,
}

/// LU factorisation with partial pivoting, `P A = L U`, stored in place.
struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &Matrix) -> Result<Lu> {
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            // lowest row index wins ties
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best >= SINGULAR_PIVOT) {
                return Err(Error::SingularSystem {
                    column: k,
                    pivot: best,
                });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= factor * u;
                    }
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }
}

fn residual(a: &Matrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.mul_vec(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

/// Solve `A x = b` by LU with partial pivoting, followed by up to two
/// rounds of iterative refinement.
pub fn lu_solve(a: &Matrix, b: &[f64]) -> Result<SolveReport> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: a.cols(),
        });
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let lu = Lu::factor(a)?;
    let mut x = lu.solve(b);
    let bound = DIRECT_RESIDUAL * inf_norm(b).max(1.0);
    let mut r = residual(a, &x, b);
    let mut refinements = 0;
    while inf_norm(&r) > bound * 1e-3 && refinements < 2 {
        let dx = lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
        r = residual(a, &x, b);
        refinements += 1;
    }
    let res = inf_norm(&r);
    if !(res <= bound) {
        return Err(Error::IllConditioned {
            residual: res,
            bound,
        });
    }
    Ok(SolveReport {
        solution: x,
        method: SolveMethod::Direct,
        residual: res,
        iterations: 1 + refinements,
    })
}

/// Fixed-point iteration `x <- b + K x` starting from `x = b`.
///
/// Returns the first iterate whose own residual `‖b + Kx - x‖∞` is within
/// `tol`; `iterations` counts matrix-vector products.
pub fn neumann_solve(k: &Matrix, b: &[f64], tol: f64, max_iter: usize) -> Result<SolveReport> {
    if !k.is_square() || b.len() != k.rows() {
        return Err(Error::DimensionMismatch {
            expected: k.rows(),
            got: b.len(),
        });
    }
    let mut x = b.to_vec();
    let mut res = f64::INFINITY;
    for it in 1..=max_iter {
        let kx = k.mul_vec(&x);
        let next: Vec<f64> = b.iter().zip(&kx).map(|(bi, v)| bi + v).collect();
        res = next
            .iter()
            .zip(&x)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if res <= tol {
            return Ok(SolveReport {
                solution: x,
                method: SolveMethod::Neumann,
                residual: res,
                iterations: it,
            });
        }
        if !res.is_finite() {
            break;
        }
        x = next;
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3(weight: f64) -> Matrix {
        // m_{1<-0}, m_{2<-1}, m_{0<-2}
        let mut m = Matrix::zeros(3, 3);
        m[(1, 0)] = weight;
        m[(2, 1)] = weight;
        m[(0, 2)] = weight;
        m
    }

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.5, -2.0, 3.25, 0.0];
        let rep = lu_solve(&Matrix::identity(4), &b).unwrap();
        assert_eq!(rep.solution, b);
        assert_eq!(rep.method, SolveMethod::Direct);
    }

    #[test]
    fn cycle_fixed_point_matches_scalar_oracle() {
        // x = 90 + 0.81 x  =>  x = 90 / 0.19
        let a = cycle3(0.81).identity_minus();
        let rep = lu_solve(&a, &[90.0; 3]).unwrap();
        for x in rep.solution {
            assert!((x - 90.0 / 0.19).abs() < 1e-9);
        }
        assert!((90.0_f64 / 0.19 - 473.684_210_526_315_8).abs() < 1e-9);
    }

    #[test]
    fn unit_cycle_is_singular() {
        let a = cycle3(1.0).identity_minus();
        assert!(matches!(
            lu_solve(&a, &[1.0; 3]),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn non_square_rejected() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(
            lu_solve(&a, &[0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let a = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 1.0]]);
        let rep = lu_solve(&a, &[4.0, 5.0]).unwrap();
        assert!((rep.solution[0] - 1.0).abs() < 1e-15);
        assert!((rep.solution[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn neumann_zero_kernel_is_one_step() {
        let b = vec![3.0, 4.0];
        let rep = neumann_solve(&Matrix::zeros(2, 2), &b, 1e-12, 10).unwrap();
        assert_eq!(rep.solution, b);
        assert_eq!(rep.iterations, 1);
    }

    #[test]
    fn neumann_agrees_with_lu_on_cycle() {
        let k = cycle3(0.81);
        let b = [90.0; 3];
        let it = neumann_solve(&k, &b, 1e-11, DEFAULT_MAX_ITER).unwrap();
        let direct = lu_solve(&k.identity_minus(), &b).unwrap();
        for (a, d) in it.solution.iter().zip(&direct.solution) {
            assert!((a - d).abs() < 1e-9);
        }
    }

    #[test]
    fn neumann_iteration_count_follows_geometric_rate() {
        // residual after m products is 0.81^m for b = 1; first m with
        // 0.81^m <= 1e-12 is 132, and log(1e-12)/log(0.81) = 131.13
        let rep = neumann_solve(&cycle3(0.81), &[1.0; 3], 1e-12, DEFAULT_MAX_ITER).unwrap();
        let predicted = (1e-12_f64).ln() / 0.81_f64.ln();
        assert!((rep.iterations as f64 - predicted).abs() <= 5.0);
        assert_eq!(rep.iterations, 132);
    }

    #[test]
    fn neumann_reports_divergence() {
        let err = neumann_solve(&cycle3(1.5), &[1.0; 3], 1e-12, 200).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
