//! Generalized conductance cuts for pairs of weighted graphs.
//!
//! For graphs G and H on the same vertex set the generalized conductance is
//!
//! ```text
//! φ(G, H) = min_S cap_G(S, S̄) / cap_H(S, S̄)
//! ```
//!
//! and its continuous relaxation λ(G, H) is the smallest nontrivial
//! generalized eigenvalue of L_G x = λ L_H x. The crate provides
//!
//! - [`graph`]: weighted graphs, Laplacian quadratic forms, cut capacities and
//!   the demand, K_n-identity and s-t edge constructions,
//! - [`oracles`]: exhaustive exact values of φ(G), φ(G, H), h(G), μ_{s,t} and
//!   a dense solver for λ(G, H),
//! - [`solver`]: Jacobi-preconditioned CG for singular Laplacian systems,
//! - [`pencil`]: inverse power iteration with seeded restarts for λ(G, H),
//! - [`sweep`]: sweep cuts from arbitrary vectors,
//! - [`verify`]: executable checks of the generalized Cheeger inequality
//!   λ(G, H) ≥ φ(G, D_G)·φ(G, H)/4 and related bounds.
//!
//! Enumeration, restart trials and sampled checks run on rayon when the
//! `parallel` feature is enabled (the default); see [`Execution`].
//!
//! ```
//! use gcheeger_core::{oracles, Graph};
//!
//! let path = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
//! let st = Graph::st_edge(3, 0, 2).unwrap();
//! let phi = oracles::generalized_conductance_exact(&path, &st, &Default::default()).unwrap();
//! assert_eq!(phi.value, 1.0);
//! let lambda = oracles::pencil_eigen_dense(&path, &st).unwrap();
//! assert!((lambda - 0.5).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod pencil;
pub mod solver;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use generate::{generate, Family, Weights};
pub use graph::{CutSet, Edge, Graph};
pub use oracles::{CutValue, OracleLimit};
pub use pencil::{inverse_power_minimize, EigenConfig, PencilEigenResult};
pub use solver::{cg_solve, Preconditioner, SolveConfig, SolveStats};
pub use sweep::{OrderingMode, SweepResult};
pub use verify::{CheckResult, VerificationReport, Verifier};
