//! Preconditioned conjugate gradient for singular Laplacian systems.
//!
//! The right-hand side and every iterate are kept in the zero-sum subspace,
//! where L_G is nonsingular for connected G.

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    /// Jacobi: scale by the inverse weighted degree.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveConfig {
    pub rel_residual_tol: f64,
    /// `None` means 10·n.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            rel_residual_tol: 1e-10,
            max_iterations: None,
            preconditioner: Preconditioner::Diagonal,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_residual_tol > 0.0 && self.rel_residual_tol < 1.0) {
            return Err(Error::Input(format!(
                "relative residual tolerance must lie in (0, 1), got {}",
                self.rel_residual_tol
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::Input("max_iterations must be positive".into()));
        }
        Ok(())
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iterations.unwrap_or(10 * n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// ‖L z − b‖₂ / ‖b‖₂ recomputed from the returned z, with b projected.
    pub final_rel_residual: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub z: Vec<f64>,
    pub stats: SolveStats,
}

/// x − mean(x)·1.
pub fn project_span1_orthogonal(x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    project_in_place(&mut y);
    y
}

pub(crate) fn project_in_place(x: &mut [f64]) {
    if x.is_empty() {
        return;
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Solves L_G z = P b for the zero-sum z, where P removes the mean of b.
///
/// Non-convergence is not an error here: the returned stats carry
/// `converged = false` and the caller decides.
pub fn cg_solve(g: &Graph, b: &[f64], cfg: &SolveConfig) -> Result<Solution> {
    cfg.validate()?;
    let n = g.n();
    if b.len() != n {
        return Err(Error::Input(format!(
            "right-hand side has length {}, expected {n}",
            b.len()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("right-hand side has non-finite entries".into()));
    }
    g.require_connected()?;

    let b = project_span1_orthogonal(b);
    let b_norm = norm(&b);
    if b_norm == 0.0 {
        return Ok(Solution {
            z: vec![0.0; n],
            stats: SolveStats {
                iterations: 0,
                final_rel_residual: 0.0,
                converged: true,
            },
        });
    }

    let inv_diag: Vec<f64> = match cfg.preconditioner {
        Preconditioner::Diagonal => g.degrees().iter().map(|d| 1.0 / d).collect(),
        Preconditioner::None => vec![1.0; n],
    };
    let precondition = |r: &[f64], z: &mut Vec<f64>| {
        z.iter_mut()
            .zip(r.iter().zip(&inv_diag))
            .for_each(|(zi, (ri, di))| *zi = ri * di);
        project_in_place(z);
    };

    let tol = cfg.rel_residual_tol * b_norm;
    let cap = cfg.iteration_cap(n);
    let mut x = vec![0.0; n];
    let mut r = b.clone();
    let mut z = vec![0.0; n];
    let mut ap = vec![0.0; n];
    precondition(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cap {
        iterations += 1;
        g.laplacian_apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        axpy(alpha, &p, &mut x);
        project_in_place(&mut x);
        axpy(-alpha, &ap, &mut r);
        project_in_place(&mut r);

        if norm(&r) <= tol {
            // confirm against the true residual; replace it if the recurrence drifted
            let true_r = residual(g, &x, &b);
            if norm(&true_r) <= tol {
                converged = true;
                break;
            }
            r = true_r;
            precondition(&r, &mut z);
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
            continue;
        }

        precondition(&r, &mut z);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }

    let final_rel_residual = norm(&residual(g, &x, &b)) / b_norm;
    Ok(Solution {
        z: x,
        stats: SolveStats {
            iterations,
            final_rel_residual,
            converged: converged && final_rel_residual <= cfg.rel_residual_tol,
        },
    })
}

fn residual(g: &Graph, x: &[f64], b: &[f64]) -> Vec<f64> {
    let mut lx = vec![0.0; x.len()];
    g.laplacian_apply(x, &mut lx);
    b.iter().zip(&lx).map(|(bi, li)| bi - li).collect()
}
