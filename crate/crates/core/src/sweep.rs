//! Sweep cuts: the n − 1 prefixes of the vertices sorted by a vector.

use crate::error::{Error, Result};
use crate::graph::{CutSet, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepObjective {
    /// cap_G(S, S̄) / cap_H(S, S̄)
    Generalized,
    /// cap_G(S, S̄) / min{vol(S), vol(S̄)}
    Conductance,
}

/// Sort key for the conductance sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingMode {
    /// Sort by y(u).
    Raw,
    /// Sort by y(u) / √d(u).
    DegreeScaled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub objective: SweepObjective,
    /// Vertices in ascending key order, ties by vertex index.
    pub ordering: Vec<usize>,
    /// cap_G of the prefix of size k at index k − 1.
    pub prefix_caps_g: Vec<f64>,
    /// cap_H (generalized) or min-volume (conductance) of each prefix.
    pub prefix_denominators: Vec<f64>,
    /// Size of the best prefix, in 1..n.
    pub best_index: usize,
    pub best_value: f64,
}

impl SweepResult {
    /// The first `k` vertices of the ordering.
    pub fn prefix(&self, k: usize) -> CutSet {
        CutSet::from_vertices(self.ordering.len(), &self.ordering[..k]).expect("prefix sizes lie in 1..n")
    }

    pub fn best_cut(&self) -> CutSet {
        self.prefix(self.best_index)
    }

    pub fn best_cap_g(&self) -> f64 {
        self.prefix_caps_g[self.best_index - 1]
    }

    pub fn best_denominator(&self) -> f64 {
        self.prefix_denominators[self.best_index - 1]
    }
}

fn sort_order(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    order
}

fn check_vector(g: &Graph, x: &[f64]) -> Result<()> {
    if x.len() != g.n() {
        return Err(Error::Input(format!(
            "vector has length {}, expected {}",
            x.len(),
            g.n()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("vector has non-finite entries".into()));
    }
    if g.n() < 2 {
        return Err(Error::Input("sweeps need at least two vertices".into()));
    }
    Ok(())
}

/// Crossing weight of every prefix in one pass over the edges.
///
/// An edge whose endpoints sit at sorted positions a < b crosses exactly the
/// prefixes of size a+1..=b, so a difference array over prefix sizes suffices.
/// Prefixes crossed by no edge get an exact zero.
pub(crate) fn prefix_capacities(g: &Graph, ordering: &[usize]) -> Vec<f64> {
    let n = ordering.len();
    let mut pos = vec![0usize; n];
    for (i, &u) in ordering.iter().enumerate() {
        pos[u] = i;
    }
    let mut weight = vec![0.0; n + 1];
    let mut count = vec![0i64; n + 1];
    for e in g.edges() {
        let (a, b) = if pos[e.u] < pos[e.v] {
            (pos[e.u], pos[e.v])
        } else {
            (pos[e.v], pos[e.u])
        };
        weight[a + 1] += e.w;
        weight[b + 1] -= e.w;
        count[a + 1] += 1;
        count[b + 1] -= 1;
    }
    let (mut acc, mut crossing) = (0.0, 0i64);
    (1..n)
        .map(|k| {
            acc += weight[k];
            crossing += count[k];
            if crossing == 0 {
                0.0
            } else {
                acc
            }
        })
        .collect()
}

fn best_prefix(num: &[f64], den: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, (&a, &b)) in num.iter().zip(den).enumerate() {
        if b > 0.0 {
            let r = a / b;
            if best.is_none_or(|(_, v)| r < v) {
                best = Some((i + 1, r));
            }
        }
    }
    best
}

/// Best ratio cap_G / cap_H over the prefixes of `x` sorted ascending.
pub fn generalized_sweep(g: &Graph, h: &Graph, x: &[f64]) -> Result<SweepResult> {
    if g.n() != h.n() {
        return Err(Error::Input("graphs have different vertex counts".into()));
    }
    if h.m() == 0 {
        return Err(Error::Input("second graph has no edges".into()));
    }
    check_vector(g, x)?;
    let ordering = sort_order(x);
    let caps_g = prefix_capacities(g, &ordering);
    let caps_h = prefix_capacities(h, &ordering);
    let (best_index, best_value) = best_prefix(&caps_g, &caps_h).expect("an edge of H separates some prefix");
    Ok(SweepResult {
        objective: SweepObjective::Generalized,
        ordering,
        prefix_caps_g: caps_g,
        prefix_denominators: caps_h,
        best_index,
        best_value,
    })
}

/// Best conductance cap / min{vol(S), vol(S̄)} over the prefixes of `y`.
pub fn conductance_sweep(g: &Graph, y: &[f64], mode: OrderingMode) -> Result<SweepResult> {
    check_vector(g, y)?;
    g.require_connected()?;
    if y.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::Input("sweep vector is constant".into()));
    }
    let keys: Vec<f64> = match mode {
        OrderingMode::Raw => y.to_vec(),
        OrderingMode::DegreeScaled => y.iter().zip(g.degrees()).map(|(v, d)| v / d.sqrt()).collect(),
    };
    let ordering = sort_order(&keys);
    let n = ordering.len();
    let caps = prefix_capacities(g, &ordering);
    let deg = g.degrees();
    let mut head = vec![0.0; n + 1];
    let mut tail = vec![0.0; n + 1];
    for k in 0..n {
        head[k + 1] = head[k] + deg[ordering[k]];
        tail[n - k - 1] = tail[n - k] + deg[ordering[n - k - 1]];
    }
    let min_vol: Vec<f64> = (1..n).map(|k| head[k].min(tail[k])).collect();
    let (best_index, best_value) =
        best_prefix(&caps, &min_vol).expect("connected graph has positive volumes");
    Ok(SweepResult {
        objective: SweepObjective::Conductance,
        ordering,
        prefix_caps_g: caps,
        prefix_denominators: min_vol,
        best_index,
        best_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn generalized_path_demand() {
        let p = path3();
        let d = p.demand_graph().unwrap();
        let s = generalized_sweep(&p, &d, &[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(s.ordering, vec![2, 1, 0]);
        assert_eq!(s.prefix_caps_g, vec![1.0, 1.0]);
        assert_eq!(s.prefix_denominators, vec![0.75, 0.75]);
        assert_eq!(s.best_index, 1);
        assert_eq!(s.best_value, 4.0 / 3.0);
        assert_eq!(s.best_cut().vertices(), vec![2]);
    }

    #[test]
    fn generalized_same_graph_is_one() {
        let p = path3();
        let s = generalized_sweep(&p, &p, &[0.2, 0.9, -0.4]).unwrap();
        assert_eq!(s.best_value, 1.0);
    }

    #[test]
    fn excludes_prefixes_without_h_edges() {
        let p = path3();
        let st = Graph::st_edge(3, 0, 2).unwrap();
        // ordering (0, 2, 1): prefix {0,2} does not separate s and t
        let s = generalized_sweep(&p, &st, &[0.0, 2.0, 1.0]).unwrap();
        assert_eq!(s.prefix_denominators, vec![1.0, 0.0]);
        assert_eq!(s.best_index, 1);
    }

    #[test]
    fn constant_vector_uses_index_order() {
        let p = path3();
        let s = generalized_sweep(&p, &p.demand_graph().unwrap(), &[1.0; 3]).unwrap();
        assert_eq!(s.ordering, vec![0, 1, 2]);
        assert!(conductance_sweep(&p, &[1.0; 3], OrderingMode::Raw).is_err());
    }

    #[test]
    fn conductance_examples() {
        let p = path3();
        for mode in [OrderingMode::Raw, OrderingMode::DegreeScaled] {
            let s = conductance_sweep(&p, &[1.0, 0.0, -1.0], mode).unwrap();
            assert_eq!(s.best_value, 1.0);
            assert_eq!(s.best_cut().vertices(), vec![2]);
        }
        let e = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(
            conductance_sweep(&e, &[1.0, -1.0], OrderingMode::Raw)
                .unwrap()
                .best_value,
            1.0
        );
        let c4 = Graph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]).unwrap();
        let s = conductance_sweep(&c4, &[-1.0, -1.0, 1.0, 1.0], OrderingMode::Raw).unwrap();
        assert_eq!(s.best_value, 0.5);
        assert_eq!(s.best_cut().vertices(), vec![0, 1]);
    }

    #[test]
    fn input_validation() {
        let p = path3();
        assert!(generalized_sweep(&p, &p, &[1.0, 2.0]).is_err());
        assert!(generalized_sweep(&p, &p, &[1.0, f64::NAN, 0.0]).is_err());
        assert!(generalized_sweep(&p, &Graph::new(3, []).unwrap(), &[1.0, 2.0, 3.0]).is_err());
    }
}
