//! Gates and gatedness via the local criterion: a connected induced subgraph
//! is gated iff it is locally convex and contains its triangles.

use super::QMGraph;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Serialize)]
pub enum GatedFailure {
    Empty,
    NotConnected,
    /// Triangle (a, b, c) with edge (a, b) in Y and apex c outside.
    MissingTriangle(usize, usize, usize),
    /// Induced square (a, b, c, d) with corner path a-b-c in Y and d outside.
    NotLocallyConvex(usize, usize, usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct GatedReport {
    pub gated: bool,
    pub failure: Option<GatedFailure>,
}

/// Apply the two-condition gatedness criterion to the vertex set `y`.
pub fn is_gated(g: &QMGraph, y: &BTreeSet<usize>) -> GatedReport {
    if y.is_empty() {
        return GatedReport {
            gated: false,
            failure: Some(GatedFailure::Empty),
        };
    }
    // Connectivity of the induced subgraph.
    let start = *y.iter().next().unwrap();
    if g.bfs_within(start, y).len() != y.len() {
        return GatedReport {
            gated: false,
            failure: Some(GatedFailure::NotConnected),
        };
    }
    // Contains its triangles.
    for &a in y {
        for &b in g.neighbors(a) {
            if b <= a || !y.contains(&b) {
                continue;
            }
            for &c in g.neighbors(a).intersection(g.neighbors(b)) {
                if !y.contains(&c) {
                    return GatedReport {
                        gated: false,
                        failure: Some(GatedFailure::MissingTriangle(a, b, c)),
                    };
                }
            }
        }
    }
    // Locally convex: induced squares with two adjacent sides in Y lie in Y.
    for &b in y {
        let nbrs: Vec<usize> = g.neighbors(b).iter().copied().filter(|v| y.contains(v)).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                for d in g.square_completions(a, b, c) {
                    if !y.contains(&d) {
                        return GatedReport {
                            gated: false,
                            failure: Some(GatedFailure::NotLocallyConvex(a, b, c, d)),
                        };
                    }
                }
            }
        }
    }
    GatedReport {
        gated: true,
        failure: None,
    }
}

/// Gate (projection) of `x` in the gated set `y`: the unique nearest vertex
/// through which geodesics to all of `y` pass. Fails with `NotGated` when the
/// local criterion or the geodesic property does not hold.
pub fn gate(g: &QMGraph, x: usize, y: &BTreeSet<usize>) -> Result<usize> {
    let rep = is_gated(g, y);
    if !rep.gated {
        return Err(Error::NotGated(format!("{:?}", rep.failure)));
    }
    if y.contains(&x) {
        return Ok(x);
    }
    let dist = g.bfs_from(x);
    let best = *y
        .iter()
        .min_by_key(|&&v| (dist[v], v))
        .expect("non-empty gated set");
    let dy = g.bfs_from(best);
    for &z in y {
        if dist[z] != dist[best] + dy[z] {
            return Err(Error::NotGated(format!(
                "no gate for vertex {x}: candidate {best} misses {z}"
            )));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmgraph::{complete_graph, cycle_graph};

    #[test]
    fn k3_cases() {
        let g = complete_graph(3);
        let single: BTreeSet<usize> = [0].into();
        assert!(is_gated(&g, &single).gated);
        // A single edge of K3 misses its triangle.
        let edge: BTreeSet<usize> = [0, 1].into();
        let rep = is_gated(&g, &edge);
        assert!(!rep.gated);
        assert!(matches!(rep.failure, Some(GatedFailure::MissingTriangle(..))));
        // Gate of another vertex in {v}.
        assert_eq!(gate(&g, 1, &single).unwrap(), 0);
        assert_eq!(gate(&g, 0, &single).unwrap(), 0);
    }

    #[test]
    fn c4_cases() {
        let g = cycle_graph(4);
        // Two adjacent edges of a 4-cycle are not locally convex.
        let corner: BTreeSet<usize> = [0, 1, 2].into();
        let rep = is_gated(&g, &corner);
        assert!(!rep.gated);
        assert!(matches!(rep.failure, Some(GatedFailure::NotLocallyConvex(..))));
        // A single edge is gated; the gate of the opposite vertex is the nearer endpoint.
        let edge: BTreeSet<usize> = [0, 1].into();
        assert!(is_gated(&g, &edge).gated);
        assert_eq!(gate(&g, 2, &edge).unwrap(), 1);
        assert_eq!(gate(&g, 3, &edge).unwrap(), 0);
    }
}
