//! Exact reference values by exhaustive cut enumeration, and a dense
//! eigen-solver for the Laplacian pencil.
//!
//! Enumeration walks the 2^(n-1) - 1 cuts whose side S contains vertex 0, so
//! every unordered cut {S, S̄} is visited once. Minimizers are reported as the
//! cut with the lowest bitmask among ties, independent of the execution mode.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{CutSet, Edge, Graph};

pub const DEFAULT_MAX_N: usize = 20;
/// Largest vertex count accepted by the enumeration guard.
pub const HARD_MAX_N: usize = 30;
/// Largest vertex count accepted by the dense pencil solver.
pub const DENSE_MAX_N: usize = 64;

/// Guard for exhaustive enumeration, plus the schedule used to run it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleLimit {
    max_n: usize,
    execution: Execution,
}

impl Default for OracleLimit {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_MAX_N,
            execution: Execution::default(),
        }
    }
}

impl OracleLimit {
    pub fn new(max_n: usize) -> Result<Self> {
        if !(2..=HARD_MAX_N).contains(&max_n) {
            return Err(Error::Input(format!(
                "enumeration guard must lie in [2, {HARD_MAX_N}], got {max_n}"
            )));
        }
        Ok(Self {
            max_n,
            execution: Execution::default(),
        })
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn execution(&self) -> Execution {
        self.execution
    }

    fn admit(&self, g: &Graph) -> Result<()> {
        if g.n() < 2 {
            return Err(Error::Input("cuts need at least two vertices".into()));
        }
        if g.n() > self.max_n {
            return Err(Error::Limit {
                n: g.n(),
                max_n: self.max_n,
            });
        }
        g.require_connected()
    }
}

/// Optimal value together with one minimizing cut.
#[derive(Clone, Debug, PartialEq)]
pub struct CutValue {
    pub value: f64,
    pub cut: CutSet,
}

/// Same summation order as [`Graph::cut_capacity`], so results agree bitwise.
#[inline]
pub(crate) fn mask_capacity(edges: &[Edge], mask: u64) -> f64 {
    edges
        .iter()
        .filter(|e| ((mask >> e.u) ^ (mask >> e.v)) & 1 == 1)
        .map(|e| e.w)
        .sum()
}

#[inline]
fn mask_volume(degrees: &[f64], mask: u64) -> f64 {
    degrees
        .iter()
        .enumerate()
        .filter(|(u, _)| (mask >> u) & 1 == 1)
        .map(|(_, d)| d)
        .sum()
}

/// Masks of the cuts whose S contains vertex 0, in increasing order.
#[inline]
fn rooted_mask(k: u64) -> u64 {
    1 | (k << 1)
}

fn rooted_count(n: usize) -> u64 {
    (1u64 << (n - 1)) - 1
}

fn min_over_rooted_cuts<F>(n: usize, exec: Execution, ratio: F) -> Result<CutValue>
where
    F: Fn(u64) -> Option<f64> + Sync + Send,
{
    let (value, k) = exec::min_by_index(exec, 0..rooted_count(n), |k| ratio(rooted_mask(k)))
        .ok_or_else(|| Error::Input("no admissible cut".into()))?;
    Ok(CutValue {
        value,
        cut: CutSet::from_mask(n, rooted_mask(k))?,
    })
}

/// φ(G) = min_S cap(S, S̄) / min{vol(S), vol(S̄)}.
pub fn conductance_exact(g: &Graph, limit: &OracleLimit) -> Result<CutValue> {
    limit.admit(g)?;
    let n = g.n();
    let full = (1u64 << n) - 1;
    let (edges, deg) = (g.edges(), g.degrees());
    min_over_rooted_cuts(n, limit.execution, |mask| {
        let cap = mask_capacity(edges, mask);
        let vol = mask_volume(deg, mask).min(mask_volume(deg, full & !mask));
        Some(cap / vol)
    })
}

/// φ(G, H) = min over cuts with cap_H > 0 of cap_G / cap_H.
pub fn generalized_conductance_exact(g: &Graph, h: &Graph, limit: &OracleLimit) -> Result<CutValue> {
    check_pair(g, h)?;
    limit.admit(g)?;
    let (ge, he) = (g.edges(), h.edges());
    min_over_rooted_cuts(g.n(), limit.execution, |mask| {
        let cap_h = mask_capacity(he, mask);
        (cap_h > 0.0).then(|| mask_capacity(ge, mask) / cap_h)
    })
}

/// h(G) = min_S cap(S, S̄) / min{|S|, |S̄|}.
pub fn isoperimetric_exact(g: &Graph, limit: &OracleLimit) -> Result<CutValue> {
    limit.admit(g)?;
    let n = g.n() as u32;
    let edges = g.edges();
    min_over_rooted_cuts(g.n(), limit.execution, |mask| {
        let size = mask.count_ones();
        Some(mask_capacity(edges, mask) / f64::from(size.min(n - size)))
    })
}

/// μ_{s,t}: minimum capacity over cuts with s ∈ S and t ∉ S.
pub fn min_st_cut_exact(g: &Graph, s: usize, t: usize, limit: &OracleLimit) -> Result<CutValue> {
    if s == t {
        return Err(Error::Input(format!("s and t must differ (both {s})")));
    }
    if s >= g.n() || t >= g.n() {
        return Err(Error::Input(format!(
            "terminals ({s},{t}) out of range for n = {}",
            g.n()
        )));
    }
    limit.admit(g)?;
    let n = g.n();
    let free: Vec<usize> = (0..n).filter(|&u| u != s && u != t).collect();
    // deposit the bits of k into the free positions; order-preserving in k
    let to_mask = |k: u64| -> u64 {
        free.iter()
            .enumerate()
            .filter(|(i, _)| (k >> i) & 1 == 1)
            .fold(1u64 << s, |m, (_, &u)| m | (1u64 << u))
    };
    let edges = g.edges();
    let (value, k) = exec::min_by_index(limit.execution, 0..(1u64 << free.len()), |k| {
        Some(mask_capacity(edges, to_mask(k)))
    })
    .expect("at least one s-t cut exists");
    Ok(CutValue {
        value,
        cut: CutSet::from_mask(n, to_mask(k))?,
    })
}

fn check_pair(g: &Graph, h: &Graph) -> Result<()> {
    if g.n() != h.n() {
        return Err(Error::Input(format!(
            "graphs have different vertex counts ({} vs {})",
            g.n(),
            h.n()
        )));
    }
    if h.m() == 0 {
        return Err(Error::Input("second graph has no edges".into()));
    }
    Ok(())
}

fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n(), g.n());
    for e in g.edges() {
        l[(e.u, e.u)] += e.w;
        l[(e.v, e.v)] += e.w;
        l[(e.u, e.v)] -= e.w;
        l[(e.v, e.u)] -= e.w;
    }
    l
}

/// Orthonormal basis (as columns) of the complement of the all-ones vector:
/// columns 2..n of the Householder reflector mapping 1/√n to e_1.
fn constant_complement_basis(n: usize) -> DMatrix<f64> {
    let c = 1.0 / (n as f64).sqrt();
    let mut v = vec![c; n];
    v[0] -= 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    DMatrix::from_fn(n, n - 1, |i, j| {
        let col = j + 1;
        let delta = if i == col { 1.0 } else { 0.0 };
        delta - 2.0 * v[i] * v[col] / vv
    })
}

/// λ(G, H): smallest generalized eigenvalue of (L_G, L_H) on the complement
/// of the constant vector, by dense Cholesky and symmetric eigendecomposition.
///
/// With the reduced pencil (A, B), A = R Rᵀ, the largest eigenvalue μ of
/// R⁻¹ B R⁻ᵀ gives λ = 1/μ. Independent of the iterative solver.
pub fn pencil_eigen_dense(g: &Graph, h: &Graph) -> Result<f64> {
    check_pair(g, h)?;
    let n = g.n();
    if n > DENSE_MAX_N {
        return Err(Error::Limit {
            n,
            max_n: DENSE_MAX_N,
        });
    }
    if n < 2 {
        return Err(Error::Input("pencil needs at least two vertices".into()));
    }
    g.require_connected()?;
    let q = constant_complement_basis(n);
    let a = q.transpose() * dense_laplacian(g) * &q;
    let b = q.transpose() * dense_laplacian(h) * &q;
    let chol = a
        .cholesky()
        .ok_or_else(|| Error::Numerical("reduced L_G is not positive definite".into()))?;
    let r = chol.l();
    let x = r
        .solve_lower_triangular(&b)
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let c = r
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let mu = SymmetricEigen::new(c).eigenvalues.max();
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::Degenerate(format!(
            "second Laplacian vanishes on the constant complement (largest eigenvalue {mu})"
        )));
    }
    Ok(1.0 / mu)
}

/// Second-smallest eigenvalue of the normalized Laplacian D^{-1/2} L D^{-1/2}.
pub fn normalized_laplacian_lambda2(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Input("need at least two vertices".into()));
    }
    if n > DENSE_MAX_N {
        return Err(Error::Limit {
            n,
            max_n: DENSE_MAX_N,
        });
    }
    g.require_connected()?;
    let s: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    let l = dense_laplacian(g);
    let m = DMatrix::from_fn(n, n, |i, j| s[i] * l[(i, j)] * s[j]);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev[1])
}
