//! Right-angled graphs of groups: validated specifications, fundamental
//! groupoid normal forms, path morphisms, the specialness criterion, the Psi
//! graph, finite covers, and the groupoid Cayley ball.

mod ball;
mod groupoid;
mod psi;
mod transition;

pub mod fixtures;

pub use ball::{
    frak_x_ball, link_membership, orbits_by_terminus, ragg_factor_oracle, x_action, FactorOracle,
    FrakXBall, XEdgeLabel,
};
pub use groupoid::{
    compose, factor_element, groupoid_inverse, groupoid_normalize, right_mul_arrow,
    right_mul_factor, GroupoidElement, GroupoidGen,
};
pub use psi::{
    build_psi, canonical_double_cover, identity_cover, pullback_cover, GraphCover, PsiMeta,
    PsiOptions,
};
pub use transition::{
    check_conditions, path_morphism, phi_group, validate_witness_walk, ConditionsReport, PhiGroup,
    TransitionGraph,
};

use crate::words::GPPresentation;
use crate::{Error, Result};
use serde::Serialize;

/// One arrow of an abstract graph. `bar` is the index of the reversed arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub id: String,
    pub bar: usize,
    pub source: usize,
    pub target: usize,
}

/// Abstract graph: vertices, arrows with a fixed-point-free involution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractGraph {
    pub vertex_names: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl AbstractGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn arrow_id(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == name)
    }

    /// Arrows leaving `v`.
    pub fn star(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&e| self.arrows[e].source == v).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        for (i, a) in self.arrows.iter().enumerate() {
            if a.source >= n || a.target >= n {
                return Err(Error::invalid(format!("arrow {} endpoint out of range", a.id)));
            }
            if a.bar >= self.arrows.len() {
                return Err(Error::invalid(format!("arrow {} bar out of range", a.id)));
            }
            if a.bar == i {
                return Err(Error::invalid(format!("bar({}) = {} is a fixed point", a.id, a.id)));
            }
            let b = &self.arrows[a.bar];
            if b.bar != i {
                return Err(Error::invalid(format!("bar is not an involution at {}", a.id)));
            }
            if a.target != b.source || a.source != b.target {
                return Err(Error::invalid(format!(
                    "t({}) != s(bar {}) for arrow {}",
                    a.id, a.id, a.id
                )));
            }
        }
        Ok(())
    }
}

/// A graphical embedding of an edge product into a vertex product: an
/// injective graph map with induced image, plus one group isomorphism per
/// edge-product factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphicalEmbedding {
    /// Edge-product Γ-vertex -> vertex-product Γ-vertex.
    pub vertex_map: Vec<usize>,
    /// Per edge-product Γ-vertex: element bijection onto the target factor.
    pub factor_isos: Vec<Vec<usize>>,
}

/// A right-angled graph of groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RAGGSpec {
    pub name: String,
    pub graph: AbstractGraph,
    /// Per abstract vertex.
    pub vertex_products: Vec<GPPresentation>,
    /// Per arrow pair (indexed by pair id).
    pub edge_products: Vec<GPPresentation>,
    /// Arrow -> pair index; pair_of_arrow[e] == pair_of_arrow[bar e].
    pub pair_of_arrow: Vec<usize>,
    /// Per arrow.
    pub embeddings: Vec<GraphicalEmbedding>,
}

impl RAGGSpec {
    pub fn arrow_count(&self) -> usize {
        self.graph.arrows.len()
    }

    pub fn pair_count(&self) -> usize {
        self.edge_products.len()
    }

    pub fn edge_product_of_arrow(&self, e: usize) -> &GPPresentation {
        &self.edge_products[self.pair_of_arrow[e]]
    }

    /// Vertex-product Γ-vertices in the image of ι_e.
    pub fn image_factors(&self, e: usize) -> std::collections::BTreeSet<usize> {
        self.embeddings[e].vertex_map.iter().copied().collect()
    }

    /// The minimal arrow of each unoriented pair, in pair order.
    pub fn pair_min_arrows(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.pair_count()];
        for e in 0..self.arrow_count() {
            let p = self.pair_of_arrow[e];
            out[p] = out[p].min(e);
        }
        out
    }
}

/// Per-invariant validation report with witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub issues: Vec<String>,
}

/// Check all structural invariants of a RAGG specification.
pub fn validate_ragg(spec: &RAGGSpec) -> ValidationReport {
    let mut issues = vec![];
    if let Err(e) = spec.graph.validate() {
        issues.push(e.to_string());
    }
    let nv = spec.graph.vertex_count();
    let na = spec.arrow_count();
    if spec.vertex_products.len() != nv {
        issues.push("one vertex product per abstract vertex required".into());
    }
    if spec.pair_of_arrow.len() != na || spec.embeddings.len() != na {
        issues.push("one pair index and one embedding per arrow required".into());
    }
    for e in 0..na.min(spec.pair_of_arrow.len()) {
        let bar = spec.graph.arrows[e].bar;
        if bar < spec.pair_of_arrow.len() && spec.pair_of_arrow[e] != spec.pair_of_arrow[bar] {
            issues.push(format!(
                "arrow {} and its bar disagree on the shared edge product",
                spec.graph.arrows[e].id
            ));
        }
        if spec.pair_of_arrow[e] >= spec.edge_products.len() {
            issues.push(format!("arrow {} has no edge product", spec.graph.arrows[e].id));
            continue;
        }
        let ep = spec.edge_product_of_arrow(e);
        let arrow = &spec.graph.arrows[e];
        let vp = &spec.vertex_products[arrow.source];
        let emb = &spec.embeddings[e];
        if emb.vertex_map.len() != ep.vertex_count() || emb.factor_isos.len() != ep.vertex_count() {
            issues.push(format!("embedding of arrow {} has wrong arity", arrow.id));
            continue;
        }
        // Injective with induced image.
        let mut seen = std::collections::BTreeSet::new();
        for (&fx, x) in emb.vertex_map.iter().zip(0..) {
            if fx >= vp.vertex_count() {
                issues.push(format!("arrow {}: image vertex out of range", arrow.id));
                continue;
            }
            if !seen.insert(fx) {
                issues.push(format!("arrow {}: vertex map not injective", arrow.id));
            }
            let _ = x;
        }
        for x in 0..ep.vertex_count() {
            for y in x + 1..ep.vertex_count() {
                let (fx, fy) = (emb.vertex_map[x], emb.vertex_map[y]);
                if fx >= vp.vertex_count() || fy >= vp.vertex_count() {
                    continue;
                }
                if ep.adjacent(x, y) != vp.adjacent(fx, fy) {
                    issues.push(format!(
                        "arrow {}: image of edge-product vertices ({}, {}) is not induced",
                        arrow.id,
                        ep.vertex_name(x),
                        ep.vertex_name(y)
                    ));
                }
            }
        }
        // Factor isomorphisms.
        for x in 0..ep.vertex_count() {
            let iso = &emb.factor_isos[x];
            let src = ep.group(x);
            let fx = emb.vertex_map[x];
            if fx >= vp.vertex_count() {
                continue;
            }
            let dst = vp.group(fx);
            if iso.len() != src.order() || src.order() != dst.order() {
                issues.push(format!(
                    "arrow {}: factor {} iso has wrong size",
                    arrow.id,
                    ep.vertex_name(x)
                ));
                continue;
            }
            let mut hit = vec![false; iso.len()];
            let mut bad = false;
            for &v in iso {
                if v >= iso.len() || hit[v] {
                    bad = true;
                    break;
                }
                hit[v] = true;
            }
            if bad || iso[0] != 0 {
                issues.push(format!(
                    "arrow {}: factor {} map is not a bijection fixing the identity",
                    arrow.id,
                    ep.vertex_name(x)
                ));
                continue;
            }
            'hom: for a in 0..src.order() {
                for b in 0..src.order() {
                    if iso[src.mul(a, b)] != dst.mul(iso[a], iso[b]) {
                        issues.push(format!(
                            "arrow {}: factor {} map is not a homomorphism (witness {a}, {b})",
                            arrow.id,
                            ep.vertex_name(x)
                        ));
                        break 'hom;
                    }
                }
            }
        }
    }
    ValidationReport {
        valid: issues.is_empty(),
        issues,
    }
}
