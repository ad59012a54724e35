//! Finite quasi-median graph engine.
//!
//! A [`QMGraph`] is a finite connected simple graph with a basepoint,
//! per-vertex distances from it, and a certified-interior margin: structural
//! claims are exact for configurations at distance at most
//! `radius - certified_interior` from the basepoint. Balls truncated from
//! infinite graphs carry margin 2; graphs that are closed under their
//! generating multiplication (or arbitrary finite inputs) carry margin 0.

mod axioms;
mod cayley;
mod cliques;
mod gates;
mod hyperplanes;
mod paths;

pub use axioms::{check_quasi_median, QmReport};
pub use cayley::{algebraic_hyperplane, cayley_ball, AlgebraicHyperplane, CayleyBall};
pub use cliques::{cliques, is_median, CliqueDesc};
pub use gates::{gate, is_gated, GatedReport};
pub use hyperplanes::{hyperplanes, Hyperplane, HyperplaneSet, Windowed};
pub use paths::{geodesic_swap, path_reduce, PathMove};

use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Finite connected simple graph with basepoint distances and a certified
/// interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMGraph {
    labels: Vec<String>,
    adj: Vec<BTreeSet<usize>>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    basepoint: usize,
    dist: Vec<u32>,
    radius: u32,
    certified_interior: u32,
}

impl QMGraph {
    /// Build and validate from an edge list. `certified_interior` is clamped
    /// to the radius.
    pub fn from_edges(
        labels: Vec<String>,
        edge_list: &[(usize, usize)],
        basepoint: usize,
        certified_interior: u32,
    ) -> Result<QMGraph> {
        let n = labels.len();
        if basepoint >= n {
            return Err(Error::invalid("basepoint out of range"));
        }
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edge_list {
            if u >= n || v >= n {
                return Err(Error::invalid("edge endpoint out of range"));
            }
            if u == v {
                return Err(Error::invalid("loops are not allowed"));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let mut edges: Vec<(usize, usize)> = vec![];
        for (u, nbrs) in adj.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        let edge_index: HashMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let dist = bfs(&adj, basepoint);
        if dist.contains(&u32::MAX) {
            return Err(Error::invalid("graph is not connected"));
        }
        let radius = dist.iter().copied().max().unwrap_or(0);
        Ok(QMGraph {
            labels,
            adj,
            edges,
            edge_index,
            basepoint,
            dist,
            radius,
            certified_interior: certified_interior.min(radius),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn certified_interior(&self) -> u32 {
        self.certified_interior
    }

    pub fn dist_from_base(&self, v: usize) -> u32 {
        self.dist[v]
    }

    /// True when structural claims about `v` are exact, i.e. `v` is far enough
    /// from the truncation boundary.
    pub fn certified(&self, v: usize) -> bool {
        self.dist[v] + self.certified_interior <= self.radius
    }

    pub fn certified_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.certified(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// BFS distances from `v` (in this finite graph).
    pub fn bfs_from(&self, v: usize) -> Vec<u32> {
        bfs(&self.adj, v)
    }

    /// BFS distances from `v` inside the subgraph induced on `within`.
    pub fn bfs_within(&self, v: usize, within: &BTreeSet<usize>) -> HashMap<usize, u32> {
        let mut dist = HashMap::new();
        if !within.contains(&v) {
            return dist;
        }
        dist.insert(v, 0u32);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            for &y in &self.adj[x] {
                if within.contains(&y) && !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// One BFS geodesic from `u` to `v` (deterministic: least-index parents).
    pub fn geodesic(&self, u: usize, v: usize) -> Vec<usize> {
        let mut parent: Vec<Option<usize>> = vec![None; self.vertex_count()];
        let mut dist = vec![u32::MAX; self.vertex_count()];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &y in &self.adj[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Is `path` a valid edge path in the graph?
    pub fn validate_path(&self, path: &[usize]) -> Result<()> {
        for w in path.windows(2) {
            if !self.is_edge(w[0], w[1]) {
                return Err(Error::invalid(format!("({}, {}) is not an edge", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// Induced 4-cycles (a, b, c, d) through the ordered corner path a-b-c:
    /// vertices d adjacent to both a and c with d != b, d not adjacent to b,
    /// and a not adjacent to c.
    pub fn square_completions(&self, a: usize, b: usize, c: usize) -> Vec<usize> {
        if a == c || self.is_edge(a, c) {
            return vec![];
        }
        self.adj[a]
            .intersection(&self.adj[c])
            .copied()
            .filter(|&d| d != b && !self.is_edge(d, b))
            .collect()
    }
}

fn bfs(adj: &[BTreeSet<usize>], from: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Complete graph on `n` labelled vertices (test/fixture helper).
pub fn complete_graph(n: usize) -> QMGraph {
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = vec![];
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    QMGraph::from_edges(labels, &edges, 0, 0).unwrap()
}

/// Cycle graph on `n` vertices.
pub fn cycle_graph(n: usize) -> QMGraph {
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    QMGraph::from_edges(labels, &edges, 0, 0).unwrap()
}

/// Complete bipartite graph K_{3,2}: parts {0,1,2} and {3,4}.
pub fn k32_graph() -> QMGraph {
    let labels = (0..5).map(|i| format!("v{i}")).collect();
    let mut edges = vec![];
    for a in 0..3 {
        for b in 3..5 {
            edges.push((a, b));
        }
    }
    QMGraph::from_edges(labels, &edges, 0, 0).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_graph_queries() {
        let g = cycle_graph(4);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.radius(), 2);
        assert!(g.certified(2));
        assert_eq!(g.geodesic(0, 2).len(), 3);
        assert!(g.edge_id(1, 0).is_some());
        assert!(g.edge_id(0, 2).is_none());
    }

    #[test]
    fn square_completions_are_induced() {
        let c4 = cycle_graph(4);
        assert_eq!(c4.square_completions(0, 1, 2), vec![3]);
        let k4 = complete_graph(4);
        // Chorded: no induced squares.
        assert!(k4.square_completions(0, 1, 2).is_empty());
    }

    #[test]
    fn disconnected_rejected() {
        let err = QMGraph::from_edges(vec!["a".into(), "b".into(), "c".into()], &[(0, 1)], 0, 0);
        assert!(err.is_err());
    }
}
