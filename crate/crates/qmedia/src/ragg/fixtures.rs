//! Bundled right-angled graph-of-groups specifications used by the test
//! suites and the fixture corpus.

use super::{AbstractGraph, Arrow, GraphicalEmbedding, RAGGSpec};
use crate::groups::FiniteGroup;
use crate::words::GPPresentation;

fn identity_iso(order: usize) -> Vec<usize> {
    (0..order).collect()
}

/// One vertex with product A x A, one loop pair sending the edge group A to
/// the left factor and then to the right factor.
pub fn a_rtimes(a_order: usize) -> RAGGSpec {
    let za = FiniteGroup::cyclic(a_order);
    let vp = GPPresentation::new(
        "AxA",
        vec!["L".into(), "R".into()],
        &[(0, 1)],
        vec![za.clone(), za.clone()],
    )
    .unwrap();
    let ep = GPPresentation::new("A", vec!["A".into()], &[], vec![za]).unwrap();
    RAGGSpec {
        name: format!("a_rtimes_z{a_order}"),
        graph: AbstractGraph {
            vertex_names: vec!["u".into()],
            arrows: vec![
                Arrow { id: "e".into(), bar: 1, source: 0, target: 0 },
                Arrow { id: "ebar".into(), bar: 0, source: 0, target: 0 },
            ],
        },
        vertex_products: vec![vp],
        edge_products: vec![ep],
        pair_of_arrow: vec![0, 0],
        embeddings: vec![
            GraphicalEmbedding { vertex_map: vec![0], factor_isos: vec![identity_iso(a_order)] },
            GraphicalEmbedding { vertex_map: vec![1], factor_isos: vec![identity_iso(a_order)] },
        ],
    }
}

/// Two vertices with product A x B, one arrow pair gluing the A factors and
/// one gluing the B factors.
pub fn a_box_b(a_order: usize, b_order: usize) -> RAGGSpec {
    let za = FiniteGroup::cyclic(a_order);
    let zb = FiniteGroup::cyclic(b_order);
    let vp = GPPresentation::new(
        "AxB",
        vec!["A".into(), "B".into()],
        &[(0, 1)],
        vec![za.clone(), zb.clone()],
    )
    .unwrap();
    let ep_a = GPPresentation::new("A", vec!["A".into()], &[], vec![za]).unwrap();
    let ep_b = GPPresentation::new("B", vec!["B".into()], &[], vec![zb]).unwrap();
    RAGGSpec {
        name: format!("a_box_b_z{a_order}_z{b_order}"),
        graph: AbstractGraph {
            vertex_names: vec!["u0".into(), "u1".into()],
            arrows: vec![
                Arrow { id: "eA".into(), bar: 1, source: 0, target: 1 },
                Arrow { id: "eAbar".into(), bar: 0, source: 1, target: 0 },
                Arrow { id: "eB".into(), bar: 3, source: 0, target: 1 },
                Arrow { id: "eBbar".into(), bar: 2, source: 1, target: 0 },
            ],
        },
        vertex_products: vec![vp.clone(), vp],
        edge_products: vec![ep_a, ep_b],
        pair_of_arrow: vec![0, 0, 1, 1],
        embeddings: vec![
            GraphicalEmbedding { vertex_map: vec![0], factor_isos: vec![identity_iso(a_order)] },
            GraphicalEmbedding { vertex_map: vec![0], factor_isos: vec![identity_iso(a_order)] },
            GraphicalEmbedding { vertex_map: vec![1], factor_isos: vec![identity_iso(b_order)] },
            GraphicalEmbedding { vertex_map: vec![1], factor_isos: vec![identity_iso(b_order)] },
        ],
    }
}

/// The canonical (bipartite) double cover of `a_rtimes(a_order)`; A-box-A in
/// the crosswise labelling the cover produces.
pub fn a_box_a_cover(a_order: usize) -> RAGGSpec {
    let (spec, _) = super::canonical_double_cover(&a_rtimes(a_order));
    spec
}

/// HNN extension of the graph product over the edge a-b (both Z2) identifying
/// G_a with G_b: one vertex, one loop pair.
pub fn hnn_base() -> RAGGSpec {
    let z2 = FiniteGroup::cyclic(2);
    let vp = GPPresentation::new(
        "ab",
        vec!["a".into(), "b".into()],
        &[(0, 1)],
        vec![z2.clone(), z2.clone()],
    )
    .unwrap();
    let ep = GPPresentation::new("Gu", vec!["x".into()], &[], vec![z2]).unwrap();
    RAGGSpec {
        name: "hnn_ab".into(),
        graph: AbstractGraph {
            vertex_names: vec!["c".into()],
            arrows: vec![
                Arrow { id: "t".into(), bar: 1, source: 0, target: 0 },
                Arrow { id: "tbar".into(), bar: 0, source: 0, target: 0 },
            ],
        },
        vertex_products: vec![vp],
        edge_products: vec![ep],
        pair_of_arrow: vec![0, 0],
        embeddings: vec![
            GraphicalEmbedding { vertex_map: vec![0], factor_isos: vec![identity_iso(2)] },
            GraphicalEmbedding { vertex_map: vec![1], factor_isos: vec![identity_iso(2)] },
        ],
    }
}

/// Index-two cover of the HNN example: two vertex copies with crossed
/// identifications.
pub fn hnn_cover() -> RAGGSpec {
    let (spec, _) = super::canonical_double_cover(&hnn_base());
    spec
}

/// Finite one-vertex truncation of the G•H shift presentation: factors
/// g0..g2, h0..h2 with g_n and h_m commuting iff n >= m; the loop includes the
/// n,m <= 1 subproduct by inclusion and by the index shift.
pub fn g_bullet_h_base() -> RAGGSpec {
    let z2 = FiniteGroup::cyclic(2);
    let names = ["g0", "g1", "g2", "h0", "h1", "h2"];
    let mut edges = vec![];
    for n in 0..3usize {
        for m in 0..3usize {
            if n >= m {
                edges.push((n, 3 + m));
            }
        }
    }
    let vp = GPPresentation::new(
        "half_graph",
        names.iter().map(|s| s.to_string()).collect(),
        &edges,
        vec![z2.clone(); 6],
    )
    .unwrap();
    let sub_names = ["g0", "g1", "h0", "h1"];
    let mut sub_edges = vec![];
    for n in 0..2usize {
        for m in 0..2usize {
            if n >= m {
                sub_edges.push((n, 2 + m));
            }
        }
    }
    let ep = GPPresentation::new(
        "half_graph_window",
        sub_names.iter().map(|s| s.to_string()).collect(),
        &sub_edges,
        vec![z2; 4],
    )
    .unwrap();
    RAGGSpec {
        name: "g_bullet_h_base".into(),
        graph: AbstractGraph {
            vertex_names: vec!["w".into()],
            arrows: vec![
                Arrow { id: "t".into(), bar: 1, source: 0, target: 0 },
                Arrow { id: "tbar".into(), bar: 0, source: 0, target: 0 },
            ],
        },
        vertex_products: vec![vp],
        edge_products: vec![ep],
        pair_of_arrow: vec![0, 0],
        embeddings: vec![
            // Inclusion g0, g1, h0, h1.
            GraphicalEmbedding {
                vertex_map: vec![0, 1, 3, 4],
                factor_isos: vec![identity_iso(2); 4],
            },
            // Shift g_n -> g_{n+1}, h_m -> h_{m+1}.
            GraphicalEmbedding {
                vertex_map: vec![1, 2, 4, 5],
                factor_isos: vec![identity_iso(2); 4],
            },
        ],
    }
}

/// The two-vertex encoding of G•H (bipartite double cover of the truncated
/// shift spec).
pub fn g_bullet_h() -> RAGGSpec {
    let (mut spec, _) = super::canonical_double_cover(&g_bullet_h_base());
    spec.name = "g_bullet_h".into();
    spec
}

/// One Z3 factor with a loop inducing inversion: Phi(G) = Z2.
pub fn phi_z3_inversion() -> RAGGSpec {
    let z3 = FiniteGroup::cyclic(3);
    let vp = GPPresentation::new("Z3", vec!["g".into()], &[], vec![z3.clone()]).unwrap();
    let ep = GPPresentation::new("Z3e", vec!["g".into()], &[], vec![z3]).unwrap();
    RAGGSpec {
        name: "phi_z3_inversion".into(),
        graph: AbstractGraph {
            vertex_names: vec!["u".into()],
            arrows: vec![
                Arrow { id: "e".into(), bar: 1, source: 0, target: 0 },
                Arrow { id: "ebar".into(), bar: 0, source: 0, target: 0 },
            ],
        },
        vertex_products: vec![vp],
        edge_products: vec![ep],
        pair_of_arrow: vec![0, 0],
        embeddings: vec![
            GraphicalEmbedding { vertex_map: vec![0], factor_isos: vec![vec![0, 1, 2]] },
            GraphicalEmbedding { vertex_map: vec![0], factor_isos: vec![vec![0, 2, 1]] },
        ],
    }
}
