//! Weighted undirected graphs, their Laplacian quadratic forms and cuts.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// An undirected edge stored canonically with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Immutable weighted undirected graph on vertices `0..n`.
///
/// Edges are kept sorted by `(u, v)` with `u < v`, no duplicates and strictly
/// positive finite weights. Degrees (weighted) and the total volume are derived
/// once at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    degrees: Vec<f64>,
    total_volume: f64,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Endpoint order is normalized;
    /// self-loops, duplicate pairs, out-of-range endpoints and non-positive or
    /// non-finite weights are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::Input("graph must have at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::Input(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::Input(format!("edge ({a},{b}) out of range for n = {n}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Input(format!(
                    "edge ({a},{b}) has non-positive weight {w}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u, v, w });
        }
        list.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = list.windows(2).find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v)) {
            return Err(Error::Input(format!(
                "duplicate edge ({},{})",
                pair[0].u, pair[0].v
            )));
        }
        let mut degrees = vec![0.0; n];
        for e in &list {
            degrees[e.u] += e.w;
            degrees[e.v] += e.w;
        }
        let total_volume = degrees.iter().sum();
        Ok(Self {
            n,
            edges: list,
            degrees,
            total_volume,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn degree(&self, u: usize) -> f64 {
        self.degrees[u]
    }

    /// vol(V): sum of all degrees, i.e. twice the total edge weight.
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees.iter().copied().fold(0.0, f64::max)
    }

    /// Connectivity over the stored (positive-weight) edges.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "vector has length {len}, graph has {} vertices",
                self.n
            )))
        }
    }

    /// x^T L x = Σ w(u,v) (x_u − x_v)².
    pub fn laplacian_quadform(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        Ok(self.quadform_unchecked(x))
    }

    pub(crate) fn quadform_unchecked(&self, x: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                let diff = x[e.u] - x[e.v];
                e.w * diff * diff
            })
            .sum()
    }

    /// y^T D^{-1/2} L D^{-1/2} y.
    pub fn normalized_quadform(&self, y: &[f64]) -> Result<f64> {
        self.check_len(y.len())?;
        if let Some(u) = self.degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::Input(format!("vertex {u} has zero degree")));
        }
        let z: Vec<f64> = y.iter().zip(&self.degrees).map(|(yi, d)| yi / d.sqrt()).collect();
        Ok(self.quadform_unchecked(&z))
    }

    /// out = L x. Panics on length mismatch; callers validate first.
    pub fn laplacian_apply(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.n);
        out.iter_mut().for_each(|o| *o = 0.0);
        for e in &self.edges {
            let flow = e.w * (x[e.u] - x[e.v]);
            out[e.u] += flow;
            out[e.v] -= flow;
        }
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn cut_capacity(&self, s: &CutSet) -> f64 {
        assert_eq!(s.n(), self.n, "cut and graph sizes differ");
        self.edges
            .iter()
            .filter(|e| s.contains(e.u) != s.contains(e.v))
            .map(|e| e.w)
            .sum()
    }

    /// vol(S) = Σ_{u∈S} d(u).
    pub fn volume(&self, s: &CutSet) -> f64 {
        assert_eq!(s.n(), self.n, "cut and graph sizes differ");
        s.vertices().into_iter().map(|u| self.degrees[u]).sum()
    }

    /// The demand graph: complete graph with w(u,v) = d(u) d(v) / vol(V).
    pub fn demand_graph(&self) -> Result<Graph> {
        if self.n < 2 {
            return Err(Error::Input("demand graph needs at least two vertices".into()));
        }
        self.require_connected()?;
        let vol = self.total_volume;
        let d = &self.degrees;
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .map(|(u, v)| (u, v, d[u] * d[v] / vol));
        Graph::new(self.n, edges)
    }

    /// Complete graph with every edge weighted 1/n; its Laplacian acts as the
    /// identity on vectors orthogonal to the all-ones vector.
    pub fn kn_identity(n: usize) -> Result<Graph> {
        if n < 2 {
            return Err(Error::Input("K_n needs n >= 2".into()));
        }
        let w = 1.0 / n as f64;
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, w))))
    }

    /// Graph on `n` vertices whose only edge is the unit edge (s, t).
    pub fn st_edge(n: usize, s: usize, t: usize) -> Result<Graph> {
        if s == t {
            return Err(Error::Input(format!("s and t must differ (both {s})")));
        }
        Graph::new(n, [(s, t, 1.0)])
    }
}

/// A nonempty proper subset S of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutSet {
    members: Vec<bool>,
}

impl CutSet {
    pub fn new(members: Vec<bool>) -> Result<Self> {
        let inside = members.iter().filter(|&&b| b).count();
        if inside == 0 || inside == members.len() {
            return Err(Error::Input("cut must be a nonempty proper subset".into()));
        }
        Ok(Self { members })
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self> {
        let mut members = vec![false; n];
        for &u in vertices {
            if u >= n {
                return Err(Error::Input(format!("vertex {u} out of range for n = {n}")));
            }
            members[u] = true;
        }
        Self::new(members)
    }

    /// Bit `i` of `mask` set means vertex `i` is in S.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::Input("bitmask cuts support at most 64 vertices".into()));
        }
        Self::new((0..n).map(|i| (mask >> i) & 1 == 1).collect())
    }

    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members[u]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Members of S in ascending order.
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.members[u]).collect()
    }

    pub fn complement(&self) -> CutSet {
        CutSet {
            members: self.members.iter().map(|b| !b).collect(),
        }
    }

    /// Characteristic vector x_S.
    pub fn indicator(&self) -> Vec<f64> {
        self.members.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    pub fn membership(&self) -> &[bool] {
        &self.members
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
    fn rejects_malformed_edges() {
        assert!(Graph::new(3, [(1, 1, 1.0)]).is_err());
        assert!(Graph::new(3, [(0, 3, 1.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, 0.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, -1.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, f64::NAN)]).is_err());
        assert!(Graph::new(3, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(Graph::new(0, []).is_err());
    }

    #[test]
    fn canonical_edge_order_and_degrees() {
        let g = Graph::new(3, [(2, 1, 2.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(g.edges()[0], Edge { u: 0, v: 1, w: 1.0 });
        assert_eq!(g.edges()[1], Edge { u: 1, v: 2, w: 2.0 });
        assert_eq!(g.degrees(), &[1.0, 3.0, 2.0]);
        assert_eq!(g.total_volume(), 6.0);
    }

    #[test]
    fn connectivity() {
        assert!(edge().is_connected());
        assert!(!Graph::new(3, [(0, 1, 1.0)]).unwrap().is_connected());
        assert!(path3().is_connected());
    }

    #[test]
    fn quadforms() {
        let p = path3();
        assert_eq!(p.laplacian_quadform(&[1.0, 0.0, -1.0]).unwrap(), 2.0);
        assert_eq!(p.laplacian_quadform(&[3.5; 3]).unwrap(), 0.0);
        assert_eq!(edge().laplacian_quadform(&[1.0, -1.0]).unwrap(), 4.0);
        assert!(p.laplacian_quadform(&[1.0]).is_err());

        assert_eq!(edge().normalized_quadform(&[1.0, -1.0]).unwrap(), 4.0);
        let nq = p.normalized_quadform(&[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(nq, 2.0);
        let null: Vec<f64> = p.degrees().iter().map(|d| d.sqrt()).collect();
        assert!(p.normalized_quadform(&null).unwrap().abs() < 1e-15);
        let iso = Graph::new(3, [(0, 1, 1.0)]).unwrap();
        assert!(iso.normalized_quadform(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn capacities_and_volumes() {
        let p = path3();
        let s0 = CutSet::from_vertices(3, &[0]).unwrap();
        let s1 = CutSet::from_vertices(3, &[1]).unwrap();
        let s01 = CutSet::from_vertices(3, &[0, 1]).unwrap();
        assert_eq!(p.cut_capacity(&s0), 1.0);
        assert_eq!(p.cut_capacity(&s1), 2.0);
        assert_eq!(edge().cut_capacity(&CutSet::from_vertices(2, &[0]).unwrap()), 1.0);
        assert_eq!(p.volume(&s1), 2.0);
        assert_eq!(p.volume(&s01), 3.0);
        assert_eq!(p.volume(&s01) + p.volume(&s01.complement()), 4.0);
    }

    #[test]
    fn cutset_validation() {
        assert!(CutSet::from_vertices(3, &[]).is_err());
        assert!(CutSet::from_vertices(3, &[0, 1, 2]).is_err());
        assert!(CutSet::from_vertices(3, &[5]).is_err());
        assert_eq!(CutSet::from_mask(3, 0b101).unwrap().vertices(), vec![0, 2]);
    }

    #[test]
    fn demand_graph_weights() {
        let d = edge().demand_graph().unwrap();
        assert_eq!(d.edges(), &[Edge { u: 0, v: 1, w: 0.5 }]);

        let d = path3().demand_graph().unwrap();
        let w: Vec<_> = d.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        assert_eq!(w, vec![(0, 1, 0.5), (0, 2, 0.25), (1, 2, 0.5)]);
        let s0 = CutSet::from_vertices(3, &[0]).unwrap();
        assert_eq!(d.cut_capacity(&s0), 0.75);

        assert!(Graph::new(1, []).unwrap().demand_graph().is_err());
        assert_eq!(
            Graph::new(3, [(0, 1, 1.0)]).unwrap().demand_graph(),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn kn_identity_graph() {
        let k2 = Graph::kn_identity(2).unwrap();
        assert_eq!(k2.edges(), &[Edge { u: 0, v: 1, w: 0.5 }]);
        let k3 = Graph::kn_identity(3).unwrap();
        assert!((k3.laplacian_quadform(&[1.0, 0.0, -1.0]).unwrap() - 2.0).abs() < 1e-15);
        let s0 = CutSet::from_vertices(3, &[0]).unwrap();
        assert!((k3.cut_capacity(&s0) - 2.0 / 3.0).abs() < 1e-15);
        assert!(Graph::kn_identity(1).is_err());
    }

    #[test]
    fn st_edge_graph() {
        let st = Graph::st_edge(3, 0, 2).unwrap();
        assert_eq!(st.edges(), &[Edge { u: 0, v: 2, w: 1.0 }]);
        let sep = CutSet::from_vertices(3, &[0, 1]).unwrap();
        let non = CutSet::from_vertices(3, &[1]).unwrap();
        assert_eq!(st.cut_capacity(&sep), 1.0);
        assert_eq!(st.cut_capacity(&non), 0.0);
        assert_eq!(Graph::st_edge(2, 0, 1).unwrap(), edge());
        assert!(Graph::st_edge(3, 1, 1).is_err());
    }
}
