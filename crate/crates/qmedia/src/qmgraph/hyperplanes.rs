//! Hyperplanes: equivalence classes of edges under the same-triangle /
//! opposite-in-an-induced-square relations, with carriers, sectors and the
//! transversality/tangency predicates.

use super::QMGraph;
use crate::groups::Dsu;
use serde::Serialize;
use std::collections::BTreeSet;

/// One hyperplane of a finite graph.
#[derive(Debug, Clone, Serialize)]
pub struct Hyperplane {
    pub id: usize,
    /// Edge ids in the class.
    pub edges: BTreeSet<usize>,
    /// Vertices spanned by the edges.
    pub carrier: BTreeSet<usize>,
    /// Connected components of the graph minus this hyperplane's edges,
    /// ordered by minimal vertex.
    pub sectors: Vec<BTreeSet<usize>>,
    /// Carrier fully inside the certified region?
    pub window_exact: bool,
}

/// A value computed on a truncated window: `exact` records whether every
/// carrier involved stayed inside the certified region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Windowed<T> {
    pub value: T,
    pub exact: bool,
}

/// All hyperplanes of a graph plus derived indices.
#[derive(Debug, Clone)]
pub struct HyperplaneSet {
    pub hyperplanes: Vec<Hyperplane>,
    /// Edge id -> hyperplane id.
    pub of_edge: Vec<usize>,
    /// Vertex -> sector index, per hyperplane.
    pub sector_of: Vec<Vec<usize>>,
    /// Unordered pairs of hyperplane ids with edges spanning an induced square.
    transverse: BTreeSet<(usize, usize)>,
}

impl HyperplaneSet {
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn get(&self, id: usize) -> &Hyperplane {
        &self.hyperplanes[id]
    }

    /// Sector index of `v` w.r.t. hyperplane `j`.
    pub fn sector_index(&self, j: usize, v: usize) -> usize {
        self.sector_of[j][v]
    }

    /// Hyperplane dual to the edge (u, v), if the edge exists.
    pub fn dual_to(&self, g: &QMGraph, u: usize, v: usize) -> Option<usize> {
        g.edge_id(u, v).map(|e| self.of_edge[e])
    }

    /// Two edges of J1 and J2 span an induced square.
    pub fn transverse(&self, j1: usize, j2: usize) -> Windowed<bool> {
        let key = if j1 < j2 { (j1, j2) } else { (j2, j1) };
        Windowed {
            value: self.transverse.contains(&key),
            exact: self.hyperplanes[j1].window_exact && self.hyperplanes[j2].window_exact,
        }
    }

    /// Not transverse, but carriers intersect.
    pub fn tangent(&self, j1: usize, j2: usize) -> Windowed<bool> {
        let t = self.transverse(j1, j2);
        if t.value {
            return Windowed { value: false, exact: t.exact };
        }
        let h1 = &self.hyperplanes[j1];
        let h2 = &self.hyperplanes[j2];
        let meet = h1.carrier.intersection(&h2.carrier).next().is_some();
        Windowed {
            value: meet && j1 != j2,
            exact: t.exact,
        }
    }

    /// Tangency witnessed inside the certified region: the carriers share a
    /// certified vertex and no square exists there. Sound on truncated balls
    /// (a transverse pair meeting at a certified vertex would span its square
    /// within the ball), unlike plain [`Self::tangent`] whose non-transverse
    /// leg can be a truncation artifact at the boundary.
    pub fn tangent_certified(&self, g: &QMGraph, j1: usize, j2: usize) -> bool {
        if j1 == j2 || self.transverse(j1, j2).value {
            return false;
        }
        self.hyperplanes[j1]
            .carrier
            .intersection(&self.hyperplanes[j2].carrier)
            .any(|&v| g.certified(v))
    }

    /// Fibers of a hyperplane: connected components of its carrier after
    /// removing the hyperplane's own edges (carrier ∩ sector pieces).
    pub fn fibers(&self, g: &QMGraph, j: usize) -> Vec<BTreeSet<usize>> {
        let h = &self.hyperplanes[j];
        let verts: Vec<usize> = h.carrier.iter().copied().collect();
        let pos: std::collections::HashMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = Dsu::new(verts.len());
        for (&v, &i) in &pos {
            for &w in g.neighbors(v) {
                if let Some(&k) = pos.get(&w) {
                    let e = g.edge_id(v, w).unwrap();
                    if !h.edges.contains(&e) {
                        dsu.union(i, k);
                    }
                }
            }
        }
        dsu.classes()
            .into_iter()
            .map(|cls| cls.into_iter().map(|i| verts[i]).collect())
            .collect()
    }
}

/// Compute the hyperplanes of `g`. Classes are sorted by minimal edge id, so
/// ids are stable for a fixed graph.
pub fn hyperplanes(g: &QMGraph) -> HyperplaneSet {
    let ne = g.edge_count();
    let mut dsu = Dsu::new(ne);
    // Triangles: any two edges of a triangle are equivalent.
    for (eid, &(a, b)) in g.edges().iter().enumerate() {
        for &c in g.neighbors(a).intersection(g.neighbors(b)) {
            dsu.union(eid, g.edge_id(a, c).unwrap());
            dsu.union(eid, g.edge_id(b, c).unwrap());
        }
    }
    // Induced squares: opposite sides are equivalent.
    for b in 0..g.vertex_count() {
        let nbrs: Vec<usize> = g.neighbors(b).iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                for d in g.square_completions(a, b, c) {
                    dsu.union(g.edge_id(a, b).unwrap(), g.edge_id(c, d).unwrap());
                    dsu.union(g.edge_id(b, c).unwrap(), g.edge_id(a, d).unwrap());
                }
            }
        }
    }
    let classes = dsu.classes();
    let mut of_edge = vec![0usize; ne];
    for (id, cls) in classes.iter().enumerate() {
        for &e in cls {
            of_edge[e] = id;
        }
    }
    // Transverse pairs: adjacent sides of each induced square.
    let mut transverse = BTreeSet::new();
    for b in 0..g.vertex_count() {
        let nbrs: Vec<usize> = g.neighbors(b).iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                if !g.square_completions(a, b, c).is_empty() {
                    let j1 = of_edge[g.edge_id(a, b).unwrap()];
                    let j2 = of_edge[g.edge_id(b, c).unwrap()];
                    let key = if j1 < j2 { (j1, j2) } else { (j2, j1) };
                    transverse.insert(key);
                }
            }
        }
    }
    // Sectors per hyperplane.
    let n = g.vertex_count();
    let mut hyps = Vec::with_capacity(classes.len());
    let mut sector_of = Vec::with_capacity(classes.len());
    for (id, cls) in classes.iter().enumerate() {
        let edge_set: BTreeSet<usize> = cls.iter().copied().collect();
        let mut carrier = BTreeSet::new();
        for &e in &edge_set {
            let (u, v) = g.edge(e);
            carrier.insert(u);
            carrier.insert(v);
        }
        let mut vdsu = Dsu::new(n);
        for (eid, &(u, v)) in g.edges().iter().enumerate() {
            if !edge_set.contains(&eid) {
                vdsu.union(u, v);
            }
        }
        let comps = vdsu.classes();
        let mut sec_of = vec![0usize; n];
        for (si, comp) in comps.iter().enumerate() {
            for &v in comp {
                sec_of[v] = si;
            }
        }
        let window_exact = carrier.iter().all(|&v| g.certified(v));
        hyps.push(Hyperplane {
            id,
            edges: edge_set,
            carrier,
            sectors: comps.into_iter().map(|c| c.into_iter().collect()).collect(),
            window_exact,
        });
        sector_of.push(sec_of);
    }
    HyperplaneSet {
        hyperplanes: hyps,
        of_edge,
        sector_of,
        transverse,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmgraph::{complete_graph, cycle_graph, QMGraph};

    #[test]
    fn k3_single_hyperplane() {
        let g = complete_graph(3);
        let hs = hyperplanes(&g);
        assert_eq!(hs.len(), 1);
        assert_eq!(hs.get(0).edges.len(), 3);
        assert_eq!(hs.get(0).sectors.len(), 3);
    }

    #[test]
    fn c4_two_hyperplanes() {
        let g = cycle_graph(4);
        let hs = hyperplanes(&g);
        assert_eq!(hs.len(), 2);
        for h in &hs.hyperplanes {
            assert_eq!(h.edges.len(), 2);
            assert_eq!(h.sectors.len(), 2);
        }
        assert!(hs.transverse(0, 1).value);
        assert!(!hs.tangent(0, 1).value);
    }

    #[test]
    fn path_hyperplanes_tangent() {
        // Path of length 2: two hyperplanes sharing the middle vertex.
        let g = QMGraph::from_edges(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (1, 2)],
            0,
            0,
        )
        .unwrap();
        let hs = hyperplanes(&g);
        assert_eq!(hs.len(), 2);
        assert!(!hs.transverse(0, 1).value);
        assert!(hs.tangent(0, 1).value);
    }

    #[test]
    fn k4_one_hyperplane_not_self_transverse() {
        let g = complete_graph(4);
        let hs = hyperplanes(&g);
        assert_eq!(hs.len(), 1);
        assert!(!hs.transverse(0, 0).value);
    }
}
