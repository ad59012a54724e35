//! The Psi graph (the target of the embedding for specialness-passing
//! specs), coverings of abstract graphs, and spec pullbacks.

use super::transition::TransitionGraph;
use super::{AbstractGraph, Arrow, RAGGSpec};
use crate::groups::{Dsu, FiniteGroup};
use crate::words::GPPresentation;
use crate::{Budget, Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy)]
pub struct PsiOptions {
    /// Literal reading of the construction: one Z2 vertex per arrow instead
    /// of one per arrow pair.
    pub vertex_per_arrow: bool,
    /// Order of the groups attached to arrow vertices (>= 2).
    pub arrow_group_order: usize,
}

impl Default for PsiOptions {
    fn default() -> Self {
        PsiOptions {
            vertex_per_arrow: false,
            arrow_group_order: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiMeta {
    /// Transition-graph node -> Psi vertex (factor class).
    pub class_of_node: Vec<usize>,
    /// Arrow-pair (or arrow) -> Psi vertex.
    pub arrow_vertices: Vec<usize>,
}

/// Build the graph Psi and its vertex groups: factor classes under the
/// transition identifications, plus one small-group vertex per arrow pair
/// joined to the classes of the embedded factors.
pub fn build_psi(
    spec: &RAGGSpec,
    opts: &PsiOptions,
    budget: &Budget,
) -> Result<(GPPresentation, PsiMeta)> {
    let conditions = super::check_conditions(spec, budget)?;
    if !conditions.pass {
        return Err(Error::ConditionsFailed(format!(
            "conditions (i)-(iv) do not all hold: {:?}",
            conditions.passed()
        )));
    }
    if opts.arrow_group_order < 2 {
        return Err(Error::invalid("arrow groups must be non-trivial"));
    }
    let tg = TransitionGraph::build(spec);
    let mut dsu = Dsu::new(tg.nodes.len());
    for (n, edges) in tg.edges.iter().enumerate() {
        for (_, to, _) in edges {
            dsu.union(n, *to);
        }
    }
    let classes = dsu.classes();
    let mut class_of_node = vec![0usize; tg.nodes.len()];
    for (ci, cls) in classes.iter().enumerate() {
        for &n in cls {
            class_of_node[n] = ci;
        }
    }
    // Vertex names and groups from each class's minimal node.
    let mut names: Vec<String> = vec![];
    let mut groups: Vec<FiniteGroup> = vec![];
    for cls in &classes {
        let (u, f) = tg.nodes[cls[0]];
        let vp = &spec.vertex_products[u];
        names.push(format!("{}.{}", spec.graph.vertex_names[u], vp.vertex_name(f)));
        groups.push(vp.group(f).clone());
    }
    // Class-level edges from each vertex product.
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (u, vp) in spec.vertex_products.iter().enumerate() {
        for (f1, f2) in vp.edges() {
            let c1 = class_of_node[tg.node_index[&(u, f1)]];
            let c2 = class_of_node[tg.node_index[&(u, f2)]];
            if c1 == c2 {
                return Err(Error::ConditionsFailed(format!(
                    "factor classes of adjacent factors {} and {} coincide; Psi is not simplicial",
                    vp.vertex_name(f1),
                    vp.vertex_name(f2)
                )));
            }
            edges.insert((c1.min(c2), c1.max(c2)));
        }
    }
    // Arrow vertices.
    let arrow_ids: Vec<usize> = if opts.vertex_per_arrow {
        (0..spec.arrow_count()).collect()
    } else {
        spec.pair_min_arrows()
    };
    let mut arrow_vertices = vec![];
    for &e in &arrow_ids {
        let vid = names.len();
        names.push(format!("t.{}", spec.graph.arrows[e].id));
        groups.push(FiniteGroup::cyclic(opts.arrow_group_order));
        let src = spec.graph.arrows[e].source;
        for &f in &spec.embeddings[e].vertex_map {
            let c = class_of_node[tg.node_index[&(src, f)]];
            edges.insert((c.min(vid), c.max(vid)));
        }
        arrow_vertices.push(vid);
    }
    let edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    let psi = GPPresentation::new(format!("psi[{}]", spec.name), names, &edge_list, groups)?;
    Ok((
        psi,
        PsiMeta {
            class_of_node,
            arrow_vertices,
        },
    ))
}

/// A covering of abstract graphs: a graph morphism that is a local bijection
/// on stars.
#[derive(Debug, Clone, Serialize)]
pub struct GraphCover {
    pub total: AbstractGraph,
    /// Total vertex -> base vertex.
    pub vertex_map: Vec<usize>,
    /// Total arrow -> base arrow.
    pub arrow_map: Vec<usize>,
}

impl GraphCover {
    pub fn sheets(&self, base: &AbstractGraph) -> usize {
        self.total.vertex_count() / base.vertex_count().max(1)
    }

    pub fn validate(&self, base: &AbstractGraph) -> Result<()> {
        self.total.validate()?;
        if self.vertex_map.len() != self.total.vertex_count()
            || self.arrow_map.len() != self.total.arrows.len()
        {
            return Err(Error::NotACovering("map arity mismatch".into()));
        }
        for (e, a) in self.total.arrows.iter().enumerate() {
            let img = self.arrow_map[e];
            if img >= base.arrows.len() {
                return Err(Error::NotACovering(format!("arrow {} maps out of range", a.id)));
            }
            let b = &base.arrows[img];
            if self.vertex_map[a.source] != b.source || self.vertex_map[a.target] != b.target {
                return Err(Error::NotACovering(format!(
                    "arrow {} does not commute with source/target",
                    a.id
                )));
            }
            if self.arrow_map[a.bar] != b.bar {
                return Err(Error::NotACovering(format!(
                    "arrow {} does not commute with bar",
                    a.id
                )));
            }
        }
        // Local bijection on stars.
        for v in 0..self.total.vertex_count() {
            let base_star = base.star(self.vertex_map[v]);
            let mut seen = BTreeSet::new();
            let star = self.total.star(v);
            if star.len() != base_star.len() {
                return Err(Error::NotACovering(format!(
                    "star of vertex {} has wrong size",
                    self.total.vertex_names[v]
                )));
            }
            for e in star {
                if !seen.insert(self.arrow_map[e]) {
                    return Err(Error::NotACovering(format!(
                        "star of vertex {} is not injective",
                        self.total.vertex_names[v]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Pull a spec back along a covering: vertex and edge data are copied from
/// the base through the covering maps.
pub fn pullback_cover(spec: &RAGGSpec, cover: &GraphCover) -> Result<RAGGSpec> {
    cover.validate(&spec.graph)?;
    let vertex_products = cover
        .vertex_map
        .iter()
        .map(|&v| spec.vertex_products[v].clone())
        .collect();
    // Pairs of the total graph.
    let mut pair_of_arrow = vec![usize::MAX; cover.total.arrows.len()];
    let mut edge_products = vec![];
    let mut next_pair = 0usize;
    for e in 0..cover.total.arrows.len() {
        if pair_of_arrow[e] != usize::MAX {
            continue;
        }
        let bar = cover.total.arrows[e].bar;
        pair_of_arrow[e] = next_pair;
        pair_of_arrow[bar] = next_pair;
        edge_products.push(spec.edge_products[spec.pair_of_arrow[cover.arrow_map[e]]].clone());
        next_pair += 1;
    }
    let embeddings = cover
        .arrow_map
        .iter()
        .map(|&e| spec.embeddings[e].clone())
        .collect();
    Ok(RAGGSpec {
        name: format!("{}^{}", spec.name, cover.sheets(&spec.graph)),
        graph: cover.total.clone(),
        vertex_products,
        edge_products,
        pair_of_arrow,
        embeddings,
    })
}

/// The canonical bipartite double cover: vertices (v, i), arrows (e, i) from
/// (s(e), i) to (t(e), 1-i), with bar((e, i)) = (bar(e), 1-i).
pub fn canonical_double_cover(spec: &RAGGSpec) -> (RAGGSpec, GraphCover) {
    let g = &spec.graph;
    let nv = g.vertex_count();
    let na = g.arrows.len();
    let vertex_names: Vec<String> = (0..2)
        .flat_map(|i| g.vertex_names.iter().map(move |n| format!("{n}.{i}")))
        .collect();
    let mut arrows = vec![];
    let mut arrow_map = vec![];
    for i in 0..2usize {
        for (e, a) in g.arrows.iter().enumerate() {
            arrows.push(Arrow {
                id: format!("{}.{i}", a.id),
                bar: (1 - i) * na + a.bar,
                source: i * nv + a.source,
                target: (1 - i) * nv + a.target,
            });
            arrow_map.push(e);
        }
    }
    let total = AbstractGraph { vertex_names, arrows };
    let vertex_map: Vec<usize> = (0..2).flat_map(|_| 0..nv).collect();
    let cover = GraphCover {
        total,
        vertex_map,
        arrow_map,
    };
    let mut pulled = pullback_cover(spec, &cover).expect("double cover is a covering");
    pulled.name = format!("{}_double", spec.name);
    (pulled, cover)
}

/// Identity cover of a spec's graph.
pub fn identity_cover(spec: &RAGGSpec) -> GraphCover {
    GraphCover {
        total: spec.graph.clone(),
        vertex_map: (0..spec.graph.vertex_count()).collect(),
        arrow_map: (0..spec.graph.arrows.len()).collect(),
    }
}
