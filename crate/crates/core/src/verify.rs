//! Executable checks of the generalized Cheeger inequality, the classical
//! sweep inequality, and the cut-problem reductions, assembled into reports.
//!
//! Every check records both sides of its inequality together with the
//! quantities they were computed from, so a report can be re-verified offline.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::Graph;
use crate::oracles::{self, OracleLimit};
use crate::pencil::{self, EigenConfig, PencilEigenResult};
use crate::solver::{self, SolveConfig};
use crate::sweep::{self, OrderingMode};

/// Relative slack tolerated on the deficient side of every inequality.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Relative tolerance for the s-t identity.
pub const ST_IDENTITY_TOLERANCE: f64 = 1e-12;
/// Random test vectors with xᵀL_H x below this are redrawn.
pub const MIN_H_QUADFORM: f64 = 1e-12;
const MAX_REDRAWS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// One contributing quantity of a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Detail {
    Int(u64),
    Real(f64),
    Flag(bool),
    Text(String),
}

impl From<f64> for Detail {
    fn from(v: f64) -> Self {
        Detail::Real(v)
    }
}
impl From<u64> for Detail {
    fn from(v: u64) -> Self {
        Detail::Int(v)
    }
}
impl From<usize> for Detail {
    fn from(v: usize) -> Self {
        Detail::Int(v as u64)
    }
}
impl From<bool> for Detail {
    fn from(v: bool) -> Self {
        Detail::Flag(v)
    }
}
impl From<&str> for Detail {
    fn from(v: &str) -> Self {
        Detail::Text(v.to_owned())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// lhs − rhs for ≥, rhs − lhs for ≤, −|lhs − rhs| for =.
    pub slack: f64,
    pub pass: bool,
    pub details: BTreeMap<String, Detail>,
}

impl CheckResult {
    /// Evaluates `lhs relation rhs`, passing when the slack relative to
    /// max(|lhs|, |rhs|) is at least −`tolerance`.
    pub fn evaluate(
        name: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tolerance: f64,
        details: impl IntoIterator<Item = (&'static str, Detail)>,
    ) -> Self {
        let slack = match relation {
            Relation::Ge => lhs - rhs,
            Relation::Le => rhs - lhs,
            Relation::Eq => 0.0 - (lhs - rhs).abs(),
        };
        let scale = lhs.abs().max(rhs.abs());
        let relative = if slack >= 0.0 {
            0.0
        } else if scale > 0.0 {
            slack / scale
        } else {
            f64::NEG_INFINITY
        };
        let pass = relative >= -tolerance;
        let mut details: BTreeMap<String, Detail> =
            details.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
        details.insert("tolerance".into(), Detail::Real(tolerance));
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation,
            slack,
            pass,
            details,
        }
    }

    pub fn detail(&self, key: &str) -> Option<&Detail> {
        self.details.get(key)
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.details.get(key)? {
            Detail::Real(v) => Some(*v),
            Detail::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GraphDescriptor {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GraphDescriptor {
    pub fn of(g: &Graph) -> Self {
        Self {
            n: g.n(),
            m: g.m(),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub graphs: Vec<GraphDescriptor>,
    pub checks: Vec<CheckResult>,
    pub overall_pass: bool,
}

impl VerificationReport {
    /// Orders checks by name (sample indices are zero-padded into names), so
    /// the report does not depend on how the checks were scheduled.
    pub fn new(graphs: Vec<GraphDescriptor>, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let overall_pass = checks.iter().all(|c| c.pass);
        Self {
            graphs,
            checks,
            overall_pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn normal_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Standard-normal vector, d-orthogonalized, redrawn while xᵀL_H x < 1e−12.
pub fn random_d_orthogonal(g: &Graph, h: &Graph, seed: u64, index: usize) -> Result<Vec<f64>> {
    let mut rng = sample_rng(seed, index);
    for _ in 0..MAX_REDRAWS {
        let raw = normal_vector(&mut rng, g.n());
        let x = match pencil::d_orthogonalize(g, &raw) {
            Ok(x) => x,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        if h.laplacian_quadform(&x)? >= MIN_H_QUADFORM {
            return Ok(x);
        }
    }
    Err(Error::Numerical(
        "could not draw a test vector outside the null space of L_H".into(),
    ))
}

/// Projects `y` orthogonal to D^{1/2}·1 and scales it to unit norm; `None`
/// when nothing is left after projection.
pub fn project_normalized_null(g: &Graph, y: &[f64]) -> Option<Vec<f64>> {
    let s: Vec<f64> = g.degrees().iter().map(|d| d.sqrt()).collect();
    let coef = solver::dot(y, &s) / solver::dot(&s, &s);
    let mut z: Vec<f64> = y.iter().zip(&s).map(|(yi, si)| yi - coef * si).collect();
    let nrm = solver::norm(&z);
    let scale = solver::norm(y).max(f64::MIN_POSITIVE);
    if !(nrm > 1e-12 * scale) {
        return None;
    }
    z.iter_mut().for_each(|v| *v /= nrm);
    Some(z)
}

fn indexed(name: &str, i: usize) -> String {
    format!("{name}#{i:06}")
}

/// Oracle guard, tolerance and schedule shared by all checks.
#[derive(Clone, Copy, Debug)]
pub struct Verifier {
    pub limit: OracleLimit,
    pub tolerance: f64,
    pub execution: Execution,
}

impl Default for Verifier {
    fn default() -> Self {
        Self {
            limit: OracleLimit::default(),
            tolerance: DEFAULT_TOLERANCE,
            execution: Execution::default(),
        }
    }
}

impl Verifier {
    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self.limit = self.limit.with_execution(execution);
        self
    }

    fn phi_demand(&self, g: &Graph) -> Result<f64> {
        Ok(oracles::generalized_conductance_exact(g, &g.demand_graph()?, &self.limit)?.value)
    }

    /// λ(G,H) ≥ φ(G,D_G)·φ(G,H)/4 and ≥ φ(G)·φ(G,H)/8, then the same lower
    /// bound for the Rayleigh quotient of `x_samples` random d-orthogonal vectors.
    pub fn check_generalized_cheeger(
        &self,
        g: &Graph,
        h: &Graph,
        x_samples: usize,
        seed: u64,
    ) -> Result<Vec<CheckResult>> {
        let phi_gh = oracles::generalized_conductance_exact(g, h, &self.limit)?.value;
        let phi_gd = self.phi_demand(g)?;
        let phi_g = oracles::conductance_exact(g, &self.limit)?.value;
        let lambda = oracles::pencil_eigen_dense(g, h)?;
        let bound = phi_gd * phi_gh / 4.0;
        let tol = self.tolerance;

        let mut checks = vec![
            CheckResult::evaluate(
                "theorem.eigenvalue",
                lambda,
                Relation::Ge,
                bound,
                tol,
                [
                    ("lambda_oracle", lambda.into()),
                    ("phi_g_dg", phi_gd.into()),
                    ("phi_g_h", phi_gh.into()),
                    ("divisor", 4.0.into()),
                ],
            ),
            CheckResult::evaluate(
                "theorem.abstract",
                lambda,
                Relation::Ge,
                phi_g * phi_gh / 8.0,
                tol,
                [
                    ("lambda_oracle", lambda.into()),
                    ("phi_g", phi_g.into()),
                    ("phi_g_h", phi_gh.into()),
                    ("divisor", 8.0.into()),
                ],
            ),
        ];
        let samples = exec::map_indices(self.execution, x_samples, |i| -> Result<CheckResult> {
            let x = random_d_orthogonal(g, h, seed, i)?;
            let r = pencil::rayleigh(g, h, &x)?;
            Ok(CheckResult::evaluate(
                indexed("theorem.any_vector", i),
                r,
                Relation::Ge,
                bound,
                tol,
                [
                    ("rayleigh", r.into()),
                    ("phi_g_dg", phi_gd.into()),
                    ("phi_g_h", phi_gh.into()),
                    ("divisor", 4.0.into()),
                    ("sample", i.into()),
                    ("seed", seed.into()),
                ],
            ))
        });
        for s in samples {
            checks.push(s?);
        }
        Ok(checks)
    }

    /// Best generalized sweep cut of `x` ≤ 4·rayleigh(x)/φ(G,D_G). Whether the
    /// bound also held without the factor 4 is recorded, not asserted.
    pub fn check_sweep_guarantee(&self, g: &Graph, h: &Graph, x: &[f64]) -> Result<CheckResult> {
        let x = pencil::d_orthogonalize(g, x)?;
        let r = pencil::rayleigh(g, h, &x)?;
        let sw = sweep::generalized_sweep(g, h, &x)?;
        let phi_gd = self.phi_demand(g)?;
        let bound = 4.0 * r / phi_gd;
        let unit_bound = r / phi_gd;
        Ok(CheckResult::evaluate(
            "sweep.guarantee",
            sw.best_value,
            Relation::Le,
            bound,
            self.tolerance,
            [
                ("sweep_value", sw.best_value.into()),
                ("sweep_prefix", sw.best_index.into()),
                ("rayleigh", r.into()),
                ("phi_g_dg", phi_gd.into()),
                ("factor", 4.0.into()),
                ("factor_one_bound", unit_bound.into()),
                (
                    "factor_one_holds",
                    (sw.best_value <= unit_bound * (1.0 + self.tolerance)).into(),
                ),
            ],
        ))
    }

    /// The classical sweep inequality for one vector; `None` when `y` lies
    /// entirely along D^{1/2}·1.
    pub fn mihail_check_vector(&self, g: &Graph, y: &[f64], index: usize) -> Result<Option<CheckResult>> {
        if y.len() != g.n() {
            return Err(Error::Input(format!(
                "vector has length {}, expected {}",
                y.len(),
                g.n()
            )));
        }
        let Some(y) = project_normalized_null(g, y) else {
            return Ok(None);
        };
        let q = g.normalized_quadform(&y)?;
        let scaled = sweep::conductance_sweep(g, &y, OrderingMode::DegreeScaled)?;
        let raw = sweep::conductance_sweep(g, &y, OrderingMode::Raw)?;
        let phi = scaled.best_value;
        Ok(Some(CheckResult::evaluate(
            indexed("mihail", index),
            q,
            Relation::Ge,
            phi * phi / 2.0,
            self.tolerance,
            [
                ("normalized_quadform", q.into()),
                ("sweep_conductance", phi.into()),
                ("raw_sweep_conductance", raw.best_value.into()),
                ("sample", index.into()),
            ],
        )))
    }

    /// `y_samples` random unit vectors orthogonal to D^{1/2}·1.
    pub fn check_mihail(&self, g: &Graph, y_samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
        g.require_connected()?;
        let checks = exec::map_indices(self.execution, y_samples, |i| -> Result<CheckResult> {
            let mut rng = sample_rng(seed, i);
            for _ in 0..MAX_REDRAWS {
                let y = normal_vector(&mut rng, g.n());
                if let Some(mut c) = self.mihail_check_vector(g, &y, i)? {
                    c.details.insert("seed".into(), seed.into());
                    return Ok(c);
                }
            }
            Err(Error::Numerical(
                "projection annihilated every sampled vector".into(),
            ))
        });
        checks.into_iter().collect()
    }

    /// Demand-graph sandwich, K_n sandwich and the s-t identity for all pairs.
    pub fn check_reductions(&self, g: &Graph) -> Result<Vec<CheckResult>> {
        let mut checks = self.check_sandwiches(g)?;
        checks.extend(self.check_st_identity(g)?);
        Ok(checks)
    }

    /// φ(G) ≤ φ(G,D_G) ≤ 2φ(G) and h(G) ≤ φ(G,K_n) ≤ 2h(G).
    pub fn check_sandwiches(&self, g: &Graph) -> Result<Vec<CheckResult>> {
        let tol = self.tolerance;
        let phi = oracles::conductance_exact(g, &self.limit)?.value;
        let phi_d = self.phi_demand(g)?;
        let iso = oracles::isoperimetric_exact(g, &self.limit)?.value;
        let phi_k =
            oracles::generalized_conductance_exact(g, &Graph::kn_identity(g.n())?, &self.limit)?.value;

        let demand = || [("phi_g", Detail::from(phi)), ("phi_g_dg", phi_d.into())];
        let kn = || [("isoperimetric", Detail::from(iso)), ("phi_g_kn", phi_k.into())];
        Ok(vec![
            CheckResult::evaluate("reductions.demand.lower", phi_d, Relation::Ge, phi, tol, demand()),
            CheckResult::evaluate(
                "reductions.demand.upper",
                phi_d,
                Relation::Le,
                2.0 * phi,
                tol,
                demand(),
            ),
            CheckResult::evaluate("reductions.kn.lower", phi_k, Relation::Ge, iso, tol, kn()),
            CheckResult::evaluate("reductions.kn.upper", phi_k, Relation::Le, 2.0 * iso, tol, kn()),
        ])
    }

    /// μ_{s,t} = φ(G, G_{s,t}) for every pair s < t.
    pub fn check_st_identity(&self, g: &Graph) -> Result<Vec<CheckResult>> {
        let n = g.n();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t))).collect();
        let mut checks = Vec::with_capacity(pairs.len());
        for &(s, t) in &pairs {
            let mu = oracles::min_st_cut_exact(g, s, t, &self.limit)?.value;
            let via =
                oracles::generalized_conductance_exact(g, &Graph::st_edge(n, s, t)?, &self.limit)?.value;
            checks.push(CheckResult::evaluate(
                format!("reductions.st_identity#{s:04}-{t:04}"),
                mu,
                Relation::Eq,
                via,
                ST_IDENTITY_TOLERANCE,
                [
                    ("mu_st", mu.into()),
                    ("phi_g_gst", via.into()),
                    ("s", s.into()),
                    ("t", t.into()),
                ],
            ));
        }
        Ok(checks)
    }

    /// λ_oracle·(1 − tol) ≤ λ_iterative ≤ (1 + ε)·λ_oracle.
    pub fn check_eigensolver(
        &self,
        g: &Graph,
        h: &Graph,
        cfg: &EigenConfig,
        solve_cfg: &SolveConfig,
    ) -> Result<(Vec<CheckResult>, PencilEigenResult)> {
        let oracle = oracles::pencil_eigen_dense(g, h)?;
        let result = pencil::inverse_power_minimize(g, h, cfg, solve_cfg)?;
        let lam = result.lambda_estimate;
        let details = || {
            [
                ("lambda_iterative", Detail::from(lam)),
                ("lambda_oracle", oracle.into()),
                ("epsilon", cfg.epsilon.into()),
                ("failure_prob", cfg.failure_prob.into()),
                ("seed", cfg.seed.into()),
                ("rounds", result.rounds_used.into()),
                ("restarts", result.restarts_used.into()),
                ("inner_residual", result.last_solve.final_rel_residual.into()),
            ]
        };
        let checks = vec![
            CheckResult::evaluate(
                "eigensolver.upper",
                lam,
                Relation::Le,
                (1.0 + cfg.epsilon) * oracle,
                self.tolerance,
                details(),
            ),
            CheckResult::evaluate(
                "eigensolver.lower",
                lam,
                Relation::Ge,
                oracle,
                self.tolerance,
                details(),
            ),
        ];
        Ok((checks, result))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }
    fn edge() -> Graph {
        Graph::new(2, [(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn evaluate_relations() {
        let c = CheckResult::evaluate("a", 1.0, Relation::Ge, 0.5, 1e-9, []);
        assert!(c.pass && c.slack == 0.5);
        let c = CheckResult::evaluate("a", 1.0, Relation::Le, 0.5, 1e-9, []);
        assert!(!c.pass && c.slack == -0.5);
        let c = CheckResult::evaluate("a", 1.0, Relation::Ge, 1.0 + 1e-12, 1e-9, []);
        assert!(c.pass);
        let c = CheckResult::evaluate("a", 1.0, Relation::Eq, 1.0 + 1e-10, 1e-12, []);
        assert!(!c.pass);
        let c = CheckResult::evaluate("a", f64::NAN, Relation::Ge, 1.0, 1e-9, []);
        assert!(!c.pass);
        assert_eq!(c.real("tolerance"), Some(1e-9));
    }

    #[test]
    fn theorem_examples() {
        let v = Verifier::default();
        let p = path3();
        let checks = v
            .check_generalized_cheeger(&p, &p.demand_graph().unwrap(), 5, 1)
            .unwrap();
        assert!(checks.iter().all(|c| c.pass));
        assert!((checks[0].lhs - 1.0).abs() < 1e-12);
        assert!((checks[0].rhs - 4.0 / 9.0).abs() < 1e-12);
        assert_eq!(checks.len(), 7);

        let e = edge();
        let checks = v
            .check_generalized_cheeger(&e, &e.demand_graph().unwrap(), 3, 1)
            .unwrap();
        assert!((checks[0].lhs - 2.0).abs() < 1e-12 && checks[0].rhs == 1.0);

        let checks = v
            .check_generalized_cheeger(&p, &Graph::st_edge(3, 0, 2).unwrap(), 3, 1)
            .unwrap();
        assert!((checks[0].lhs - 0.5).abs() < 1e-12);
        assert!((checks[0].rhs - 1.0 / 3.0).abs() < 1e-12);
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn sweep_guarantee_path_demand() {
        let v = Verifier::default();
        let p = path3();
        let c = v
            .check_sweep_guarantee(&p, &p.demand_graph().unwrap(), &[1.0, 0.0, -1.0])
            .unwrap();
        assert!(c.pass);
        assert!((c.lhs - 4.0 / 3.0).abs() < 1e-12);
        assert!((c.rhs - 3.0).abs() < 1e-12);
    }

    #[test]
    fn mihail_examples() {
        let v = Verifier::default();
        let p = path3();
        let c = v.mihail_check_vector(&p, &[1.0, 0.0, -1.0], 0).unwrap().unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-12 && (c.rhs - 0.5).abs() < 1e-12 && c.pass);
        let c = v.mihail_check_vector(&edge(), &[1.0, -1.0], 0).unwrap().unwrap();
        assert!((c.lhs - 2.0).abs() < 1e-12 && c.pass);
        let null: Vec<f64> = p.degrees().iter().map(|d| d.sqrt()).collect();
        assert!(v.mihail_check_vector(&p, &null, 0).unwrap().is_none());
    }

    #[test]
    fn reductions_path() {
        let checks = Verifier::default().check_reductions(&path3()).unwrap();
        assert!(checks.iter().all(|c| c.pass));
        let demand = checks
            .iter()
            .find(|c| c.name == "reductions.demand.lower")
            .unwrap();
        assert!((demand.lhs - 4.0 / 3.0).abs() < 1e-12);
        let kn = checks.iter().find(|c| c.name == "reductions.kn.lower").unwrap();
        assert!((kn.lhs - 1.5).abs() < 1e-12 && kn.rhs == 1.0);
        let st = checks
            .iter()
            .find(|c| c.name == "reductions.st_identity#0000-0002")
            .unwrap();
        assert_eq!((st.lhs, st.rhs), (1.0, 1.0));
    }

    #[test]
    fn eigensolver_examples() {
        let v = Verifier::default();
        let p = path3();
        let cfg = EigenConfig {
            seed: 1,
            ..EigenConfig::default()
        };
        for (h, oracle) in [
            (p.demand_graph().unwrap(), 1.0),
            (Graph::st_edge(3, 0, 2).unwrap(), 0.5),
        ] {
            let (checks, res) = v
                .check_eigensolver(&p, &h, &cfg, &SolveConfig::default())
                .unwrap();
            assert!(checks.iter().all(|c| c.pass), "{checks:?}");
            assert!(res.lambda_estimate <= 1.05 * oracle);
        }
    }

    #[test]
    fn report_orders_and_aggregates() {
        let a = CheckResult::evaluate("b#000001", 1.0, Relation::Ge, 0.0, 1e-9, []);
        let b = CheckResult::evaluate("a", 0.0, Relation::Ge, 1.0, 1e-9, []);
        let c = CheckResult::evaluate("b#000000", 1.0, Relation::Ge, 0.0, 1e-9, []);
        let r = VerificationReport::new(vec![], vec![a, b, c]);
        let names: Vec<_> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["a", "b#000000", "b#000001"]);
        assert!(!r.overall_pass);
        assert_eq!(r.failures().count(), 1);
    }
}
