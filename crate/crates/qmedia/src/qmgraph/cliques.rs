//! Maximal clique enumeration (Bron–Kerbosch with pivoting) and the
//! unique-median predicate.

use super::QMGraph;
use serde::Serialize;
use std::collections::BTreeSet;

/// A maximal complete subgraph. `label` is filled by the Cayley/groupoid ball
/// wrappers (the Γ-vertex or factor the clique corresponds to).
#[derive(Debug, Clone, Serialize)]
pub struct CliqueDesc {
    pub vertices: BTreeSet<usize>,
    pub label: Option<String>,
}

fn bron_kerbosch(
    g: &QMGraph,
    r: &mut BTreeSet<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<BTreeSet<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    // Pivot: maximum degree in P ∪ X.
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&v| g.neighbors(v).len())
        .unwrap();
    let candidates: Vec<usize> = p.iter().copied().filter(|v| !g.neighbors(pivot).contains(v)).collect();
    for v in candidates {
        let nbrs = g.neighbors(v);
        r.insert(v);
        bron_kerbosch(
            g,
            r,
            p.intersection(nbrs).copied().collect(),
            x.intersection(nbrs).copied().collect(),
            out,
        );
        r.remove(&v);
        p.remove(&v);
        x.insert(v);
    }
}

/// All maximal cliques, sorted by vertex list.
pub fn cliques(g: &QMGraph) -> Vec<CliqueDesc> {
    let mut out = vec![];
    let mut r = BTreeSet::new();
    let p: BTreeSet<usize> = (0..g.vertex_count()).collect();
    bron_kerbosch(g, &mut r, p, BTreeSet::new(), &mut out);
    out.sort_by(|a, b| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()));
    out.into_iter().map(|vertices| CliqueDesc { vertices, label: None }).collect()
}

/// Every triple of certified vertices has a unique median in the graph.
pub fn is_median(g: &QMGraph) -> bool {
    let certified = g.certified_vertices();
    let dists: Vec<Vec<u32>> = (0..g.vertex_count()).map(|v| g.bfs_from(v)).collect();
    for (i, &x) in certified.iter().enumerate() {
        for (j, &y) in certified.iter().enumerate().skip(i) {
            for &z in certified.iter().skip(j) {
                let mut medians = 0;
                for m in 0..g.vertex_count() {
                    if dists[x][y] == dists[x][m] + dists[m][y]
                        && dists[x][z] == dists[x][m] + dists[m][z]
                        && dists[y][z] == dists[y][m] + dists[m][z]
                    {
                        medians += 1;
                        if medians > 1 {
                            break;
                        }
                    }
                }
                if medians != 1 {
                    return false;
                }
            }
        }
    }
    true
}
