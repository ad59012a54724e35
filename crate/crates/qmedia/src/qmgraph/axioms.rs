//! Quasi-median axiom checker: forbidden induced K4- and K3,2, triangle and
//! quadrangle conditions, restricted to the certified region.

use super::QMGraph;
use serde::Serialize;

/// Verdict per axiom with the first witness found (scan order is
/// deterministic). A configuration is only considered when all its named
/// vertices are certified; completing vertices (z, w) may lie anywhere.
#[derive(Debug, Clone, Serialize)]
pub struct QmReport {
    pub pass: bool,
    /// Whole graph certified (no truncation window)?
    pub exact: bool,
    pub certified_vertices: usize,
    /// Induced K4 minus an edge: (x, y, z, w) with z, w the non-adjacent pair.
    pub k4_minus: Option<(usize, usize, usize, usize)>,
    /// Induced K3,2: ((x, y), (a, b, c)) with x,y the degree-3 part.
    #[allow(clippy::type_complexity)]
    pub k32: Option<((usize, usize), (usize, usize, usize))>,
    /// Triangle condition failure (a, x, y).
    pub triangle: Option<(usize, usize, usize)>,
    /// Quadrangle condition failure (a, x, y, z).
    pub quadrangle: Option<(usize, usize, usize, usize)>,
}

impl QmReport {
    pub fn passing(&self) -> bool {
        self.pass
    }
}

/// Check the quasi-median axioms on the certified region of `g`.
pub fn check_quasi_median(g: &QMGraph) -> QmReport {
    let n = g.vertex_count();
    let certified: Vec<bool> = (0..n).map(|v| g.certified(v)).collect();

    // K4-: an edge (x, y) with two non-adjacent common neighbours.
    let mut k4_minus = None;
    'k4: for &(x, y) in g.edges() {
        if !certified[x] || !certified[y] {
            continue;
        }
        let common: Vec<usize> = g.neighbors(x).intersection(g.neighbors(y)).copied().collect();
        for (i, &z) in common.iter().enumerate() {
            if !certified[z] {
                continue;
            }
            for &w in &common[i + 1..] {
                if certified[w] && !g.is_edge(z, w) {
                    k4_minus = Some((x, y, z, w));
                    break 'k4;
                }
            }
        }
    }

    // K3,2: non-adjacent x, y with three pairwise non-adjacent common neighbours.
    let mut k32 = None;
    'k32: for x in 0..n {
        if !certified[x] {
            continue;
        }
        for y in x + 1..n {
            if !certified[y] || g.is_edge(x, y) {
                continue;
            }
            let common: Vec<usize> = g
                .neighbors(x)
                .intersection(g.neighbors(y))
                .copied()
                .filter(|&v| certified[v])
                .collect();
            if common.len() < 3 {
                continue;
            }
            for i in 0..common.len() {
                for j in i + 1..common.len() {
                    if g.is_edge(common[i], common[j]) {
                        continue;
                    }
                    for k in j + 1..common.len() {
                        if !g.is_edge(common[i], common[k]) && !g.is_edge(common[j], common[k]) {
                            k32 = Some(((x, y), (common[i], common[j], common[k])));
                            break 'k32;
                        }
                    }
                }
            }
        }
    }

    // Triangle and quadrangle conditions share the per-apex BFS.
    let mut triangle = None;
    let mut quadrangle = None;
    for a in 0..n {
        if !certified[a] {
            continue;
        }
        let d = g.bfs_from(a);
        if triangle.is_none() {
            'tri: for &(x, y) in g.edges() {
                if !certified[x] || !certified[y] || d[x] != d[y] || d[x] == 0 {
                    continue;
                }
                let ok = g
                    .neighbors(x)
                    .intersection(g.neighbors(y))
                    .any(|&z| d[z] + 1 == d[x]);
                if !ok {
                    triangle = Some((a, x, y));
                    break 'tri;
                }
            }
        }
        if quadrangle.is_none() {
            'quad: for z in 0..n {
                if !certified[z] || d[z] < 2 {
                    continue;
                }
                let nbrs: Vec<usize> = g.neighbors(z).iter().copied().collect();
                for (i, &x) in nbrs.iter().enumerate() {
                    if !certified[x] || d[x] + 1 != d[z] {
                        continue;
                    }
                    for &y in &nbrs[i + 1..] {
                        if !certified[y] || d[y] + 1 != d[z] {
                            continue;
                        }
                        let ok = g
                            .neighbors(x)
                            .intersection(g.neighbors(y))
                            .any(|&w| w != z && d[w] + 2 == d[z]);
                        if !ok {
                            quadrangle = Some((a, x, y, z));
                            break 'quad;
                        }
                    }
                }
            }
        }
    }

    let pass = k4_minus.is_none() && k32.is_none() && triangle.is_none() && quadrangle.is_none();
    QmReport {
        pass,
        exact: g.certified_interior() == 0,
        certified_vertices: certified.iter().filter(|&&c| c).count(),
        k4_minus,
        k32,
        triangle,
        quadrangle,
    }
}
