//! Inverse power iteration for the smallest generalized eigenvalue of the
//! Laplacian pencil (L_G, L_H), with independent seeded restarts.
//!
//! Each round applies L_G⁺ L_H: multiply by L_H, then solve with L_G by
//! conjugate gradient. Iterates live in the zero-sum subspace; the reported
//! vector is shifted to satisfy xᵀd = 0, which leaves every Laplacian
//! Rayleigh quotient unchanged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::Graph;
use crate::solver::{self, cg_solve, SolveConfig, SolveStats};

/// Fresh starting vectors allowed per trial when L_H annihilates the iterate.
pub const MAX_RESAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenConfig {
    /// Relative accuracy target ε.
    pub epsilon: f64,
    /// Failure probability p; the number of trials is ⌈log₂(1/p)⌉.
    pub failure_prob: f64,
    /// `None` means max(100, ⌈10·ln(n)/ε⌉).
    pub max_rounds: Option<usize>,
    pub seed: u64,
    pub stagnation_tol: f64,
    pub execution: Execution,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            failure_prob: 0.01,
            max_rounds: None,
            seed: 0,
            stagnation_tol: 1e-12,
            execution: Execution::default(),
        }
    }
}

impl EigenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Input(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.failure_prob > 0.0 && self.failure_prob < 1.0) {
            return Err(Error::Input(format!(
                "failure probability must lie in (0, 1), got {}",
                self.failure_prob
            )));
        }
        if self.max_rounds == Some(0) {
            return Err(Error::Input("max_rounds must be positive".into()));
        }
        if !(self.stagnation_tol >= 0.0) {
            return Err(Error::Input("stagnation tolerance must be non-negative".into()));
        }
        Ok(())
    }

    pub fn trials(&self) -> usize {
        ((1.0 / self.failure_prob).log2().ceil() as usize).max(1)
    }

    pub fn round_cap(&self, n: usize) -> usize {
        self.max_rounds.unwrap_or_else(|| {
            let budget = (10.0 * (n as f64).ln() / self.epsilon).ceil() as usize;
            budget.max(100)
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilEigenResult {
    pub lambda_estimate: f64,
    /// Unit 2-norm, xᵀd = 0.
    pub x: Vec<f64>,
    pub rounds_used: usize,
    /// Independent trials run.
    pub restarts_used: usize,
    /// Index of the trial that produced the result.
    pub best_trial: usize,
    /// Starting vectors redrawn in the winning trial.
    pub resamples: usize,
    /// Rayleigh quotient after each round of the winning trial.
    pub trace: Vec<f64>,
    /// Statistics of the last inner solve of the winning trial.
    pub last_solve: SolveStats,
    pub seed: u64,
}

/// xᵀL_G x / xᵀL_H x.
pub fn rayleigh(g: &Graph, h: &Graph, x: &[f64]) -> Result<f64> {
    if g.n() != h.n() {
        return Err(Error::Input("graphs have different vertex counts".into()));
    }
    let qh = h.laplacian_quadform(x)?;
    if !(qh > 0.0) {
        return Err(Error::Degenerate("x lies in the null space of L_H".into()));
    }
    Ok(g.laplacian_quadform(x)? / qh)
}

/// x − c·1 with c = xᵀd / 1ᵀd, so that the result is orthogonal to the degree vector.
pub fn d_orthogonalize(g: &Graph, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != g.n() {
        return Err(Error::Input(format!(
            "vector has length {}, expected {}",
            x.len(),
            g.n()
        )));
    }
    if x.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::Degenerate(
            "constant vector has no d-orthogonal representative".into(),
        ));
    }
    if !(g.total_volume() > 0.0) {
        return Err(Error::Input("graph has no edges".into()));
    }
    let c = solver::dot(x, g.degrees()) / g.total_volume();
    Ok(x.iter().map(|v| v - c).collect())
}

fn normalize(x: &mut [f64]) -> bool {
    let nrm = solver::norm(x);
    if nrm > 0.0 && nrm.is_finite() {
        x.iter_mut().for_each(|v| *v /= nrm);
        true
    } else {
        false
    }
}

struct Trial {
    lambda: f64,
    y: Vec<f64>,
    rounds: usize,
    resamples: usize,
    trace: Vec<f64>,
    last_solve: SolveStats,
}

enum TrialFailure {
    /// Every starting vector was annihilated by L_H.
    Exhausted,
    Fatal(Error),
}

fn run_trial(
    g: &Graph,
    h: &Graph,
    cfg: &EigenConfig,
    solve_cfg: &SolveConfig,
    index: usize,
) -> std::result::Result<Trial, TrialFailure> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let cap = cfg.round_cap(n);
    let annihilation = 1e-14 * h.max_degree();
    let mut hy = vec![0.0; n];
    let mut resamples = 0;

    'restart: loop {
        if resamples > MAX_RESAMPLES {
            return Err(TrialFailure::Exhausted);
        }
        let mut y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        solver::project_in_place(&mut y);
        if !normalize(&mut y) {
            resamples += 1;
            continue;
        }
        let mut trace = Vec::new();
        let mut prev: Option<f64> = None;
        for round in 1..=cap {
            h.laplacian_apply(&y, &mut hy);
            if solver::norm(&hy) < annihilation * solver::norm(&y) {
                resamples += 1;
                continue 'restart;
            }
            let sol = cg_solve(g, &hy, solve_cfg).map_err(TrialFailure::Fatal)?;
            if !sol.stats.converged {
                return Err(TrialFailure::Fatal(Error::Numerical(format!(
                    "inner solve did not converge (relative residual {:e} after {} iterations)",
                    sol.stats.final_rel_residual, sol.stats.iterations
                ))));
            }
            let last_solve = sol.stats;
            y = sol.z;
            solver::project_in_place(&mut y);
            if !normalize(&mut y) {
                resamples += 1;
                continue 'restart;
            }
            let shifted = d_orthogonalize(g, &y).map_err(TrialFailure::Fatal)?;
            let lambda = match rayleigh(g, h, &shifted) {
                Ok(l) => l,
                Err(Error::Degenerate(_)) => {
                    resamples += 1;
                    continue 'restart;
                }
                Err(e) => return Err(TrialFailure::Fatal(e)),
            };
            trace.push(lambda);
            let stalled = prev.is_some_and(|p| (lambda - p).abs() <= cfg.stagnation_tol * lambda);
            if stalled || round == cap {
                return Ok(Trial {
                    lambda,
                    y,
                    rounds: round,
                    resamples,
                    trace,
                    last_solve,
                });
            }
            prev = Some(lambda);
        }
        unreachable!("the round loop returns on its last iteration");
    }
}

/// Approximates λ(G, H) = min_{xᵀd=0} xᵀL_G x / xᵀL_H x.
///
/// Runs ⌈log₂(1/p)⌉ independently seeded trials (optionally in parallel) and
/// keeps the smallest Rayleigh quotient, breaking ties toward the lower trial
/// index. Output is identical for every execution mode.
pub fn inverse_power_minimize(
    g: &Graph,
    h: &Graph,
    cfg: &EigenConfig,
    solve_cfg: &SolveConfig,
) -> Result<PencilEigenResult> {
    cfg.validate()?;
    solve_cfg.validate()?;
    if g.n() != h.n() {
        return Err(Error::Input(format!(
            "graphs have different vertex counts ({} vs {})",
            g.n(),
            h.n()
        )));
    }
    if g.n() < 2 {
        return Err(Error::Input("pencil needs at least two vertices".into()));
    }
    if h.m() == 0 {
        return Err(Error::Input("second graph has no edges".into()));
    }
    g.require_connected()?;

    let trials = cfg.trials();
    let outcomes = exec::map_indices(cfg.execution, trials, |t| run_trial(g, h, cfg, solve_cfg, t));

    let mut best: Option<(usize, Trial)> = None;
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(trial) => {
                if best.as_ref().is_none_or(|(_, b)| trial.lambda < b.lambda) {
                    best = Some((t, trial));
                }
            }
            Err(TrialFailure::Fatal(e)) => return Err(e),
            Err(TrialFailure::Exhausted) => {}
        }
    }
    let (best_trial, trial) = best.ok_or_else(|| {
        Error::Numerical(format!(
            "all {trials} trials failed: L_H annihilated every starting vector"
        ))
    })?;

    let mut x = d_orthogonalize(g, &trial.y)?;
    if !normalize(&mut x) {
        return Err(Error::Numerical("final iterate vanished".into()));
    }
    let lambda_estimate = rayleigh(g, h, &x)?;
    Ok(PencilEigenResult {
        lambda_estimate,
        x,
        rounds_used: trial.rounds,
        restarts_used: trials,
        best_trial,
        resamples: trial.resamples,
        trace: trial.trace,
        last_solve: trial.last_solve,
        seed: cfg.seed,
    })
}
