//! Seeded benchmark graph families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Upper bound on G(n, p) resamples while looking for a connected draw.
pub const MAX_GNP_RETRIES: usize = 1000;

/// Lower and upper (exclusive) bound of randomly drawn edge weights.
pub const WEIGHT_RANGE: (f64, f64) = (0.5, 2.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Grid { rows: usize, cols: usize },
    Gnp { n: usize, p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weights {
    /// Every edge has weight 1.
    Unit,
    /// Weights drawn uniformly from [`WEIGHT_RANGE`].
    Uniform,
}

impl Family {
    /// Unit weights for the structured families, random weights for G(n, p).
    pub fn default_weights(&self) -> Weights {
        match self {
            Family::Gnp { .. } => Weights::Uniform,
            _ => Weights::Unit,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Cycle { .. } => "cycle",
            Family::Complete { .. } => "complete",
            Family::Grid { .. } => "grid",
            Family::Gnp { .. } => "gnp",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Input(format!("{}: {msg}", self.name())));
        match *self {
            Family::Path { n } | Family::Complete { n } if n < 2 => bad("n must be at least 2"),
            Family::Cycle { n } if n < 3 => bad("n must be at least 3"),
            Family::Grid { rows, cols } if rows == 0 || cols == 0 || rows * cols < 2 => {
                bad("grid needs at least two cells")
            }
            Family::Gnp { n, .. } if n < 2 => bad("n must be at least 2"),
            Family::Gnp { p, .. } if !(p > 0.0 && p <= 1.0) => bad("p must lie in (0, 1]"),
            _ => Ok(()),
        }
    }
}

/// Builds a connected graph of the given family. Output is a pure function of
/// `(family, weights, seed)`.
pub fn generate(family: Family, weights: Weights, seed: u64) -> Result<Graph> {
    family.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = match family {
        Family::Path { n } => (0..n - 1).map(|u| (u, u + 1)).collect(),
        Family::Cycle { n } => (0..n).map(|u| (u, (u + 1) % n)).collect(),
        Family::Complete { n } => all_pairs(n).collect(),
        Family::Grid { rows, cols } => {
            let id = |r: usize, c: usize| r * cols + c;
            let mut pairs = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        pairs.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        pairs.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            pairs
        }
        Family::Gnp { n, p } => return gnp(n, p, weights, &mut rng),
    };
    let n = vertex_count(family);
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, draw_weight(weights, &mut rng)))
        .collect();
    Graph::new(n, edges)
}

fn vertex_count(family: Family) -> usize {
    match family {
        Family::Path { n } | Family::Cycle { n } | Family::Complete { n } | Family::Gnp { n, .. } => n,
        Family::Grid { rows, cols } => rows * cols,
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

fn draw_weight(weights: Weights, rng: &mut ChaCha8Rng) -> f64 {
    match weights {
        Weights::Unit => 1.0,
        Weights::Uniform => rng.random_range(WEIGHT_RANGE.0..WEIGHT_RANGE.1),
    }
}

fn gnp(n: usize, p: f64, weights: Weights, rng: &mut ChaCha8Rng) -> Result<Graph> {
    for _ in 0..MAX_GNP_RETRIES {
        let mut edges = Vec::new();
        for (u, v) in all_pairs(n) {
            if rng.random_bool(p) {
                edges.push((u, v, draw_weight(weights, rng)));
            }
        }
        if edges.is_empty() {
            continue;
        }
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected G({n}, {p}) sample within {MAX_GNP_RETRIES} attempts"
    )))
}
