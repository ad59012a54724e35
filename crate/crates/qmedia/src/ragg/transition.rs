//! The factor-transition graph: path morphisms, the automorphism groups
//! Phi(G), and the four-condition specialness criterion.

use super::RAGGSpec;
use crate::groups::{permutation_image, FiniteGroup, Permutation};
use crate::{Budget, Result};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// Nodes are (abstract vertex, factor) pairs; a directed edge per arrow e
/// with the factor in the image of ι_e, carrying the element isomorphism
/// φ_e = ι_{bar e} ∘ ι_e⁻¹. Every edge is reversible (via the bar arrow), so
/// reachability is symmetric.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    /// (abstract vertex, Γ_u-vertex).
    pub nodes: Vec<(usize, usize)>,
    pub node_index: HashMap<(usize, usize), usize>,
    /// Per node: (arrow, target node, element iso).
    pub edges: Vec<Vec<(usize, usize, Vec<usize>)>>,
}

impl TransitionGraph {
    pub fn build(spec: &RAGGSpec) -> TransitionGraph {
        let mut nodes = vec![];
        for (u, vp) in spec.vertex_products.iter().enumerate() {
            for f in 0..vp.vertex_count() {
                nodes.push((u, f));
            }
        }
        let node_index: HashMap<(usize, usize), usize> =
            nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut edges = vec![vec![]; nodes.len()];
        for e in 0..spec.arrow_count() {
            let arrow = &spec.graph.arrows[e];
            let emb = &spec.embeddings[e];
            let emb_bar = &spec.embeddings[arrow.bar];
            for x in 0..emb.vertex_map.len() {
                let from = node_index[&(arrow.source, emb.vertex_map[x])];
                let to = node_index[&(arrow.target, emb_bar.vertex_map[x])];
                // φ_e on elements: iso_bar ∘ iso⁻¹.
                let iso = &emb.factor_isos[x];
                let iso_bar = &emb_bar.factor_isos[x];
                let mut inv = vec![0usize; iso.len()];
                for (a, &v) in iso.iter().enumerate() {
                    inv[v] = a;
                }
                let composed: Vec<usize> = (0..iso.len()).map(|v| iso_bar[inv[v]]).collect();
                edges[from].push((e, to, composed));
            }
        }
        TransitionGraph {
            nodes,
            node_index,
            edges,
        }
    }

    /// BFS reachability with arrow-walk witnesses from one node.
    pub fn reach_from(&self, start: usize) -> HashMap<usize, Vec<usize>> {
        let mut out = HashMap::new();
        out.insert(start, vec![]);
        let mut queue = VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            for (e, to, _) in &self.edges[n] {
                if !out.contains_key(to) {
                    let mut walk = out[&n].clone();
                    walk.push(*e);
                    out.insert(*to, walk);
                    queue.push_back(*to);
                }
            }
        }
        out
    }
}

/// Follow a walk of arrows from a factor node, composing the carried
/// isomorphisms. `None` when the factor leaves the embedding images (the
/// morphism is empty).
pub fn path_morphism(
    spec: &RAGGSpec,
    tg: &TransitionGraph,
    start: (usize, usize),
    walk: &[usize],
) -> Option<((usize, usize), Vec<usize>)> {
    let mut node = *tg.node_index.get(&start)?;
    let order = spec.vertex_products[start.0].group(start.1).order();
    let mut iso: Vec<usize> = (0..order).collect();
    for &e in walk {
        let (_, to, step) = tg.edges[node].iter().find(|(a, _, _)| *a == e)?;
        iso = iso.iter().map(|&v| step[v]).collect();
        node = *to;
    }
    Some((tg.nodes[node], iso))
}

/// Phi(G): the automorphisms of the factor induced by closed walks, as a
/// permutation closure on the factor's elements.
#[derive(Debug, Clone)]
pub struct PhiGroup {
    pub group: FiniteGroup,
    pub autos: Vec<Permutation>,
    /// One witness closed walk per generating automorphism.
    pub witness_walks: Vec<Vec<usize>>,
}

pub fn phi_group(
    spec: &RAGGSpec,
    tg: &TransitionGraph,
    node: (usize, usize),
    budget: &Budget,
) -> Result<PhiGroup> {
    let start = tg.node_index[&node];
    let order = spec.vertex_products[node.0].group(node.1).order();
    // Spanning tree of the component with accumulated isos and walks.
    let mut tree_iso: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut tree_walk: HashMap<usize, Vec<usize>> = HashMap::new();
    tree_iso.insert(start, (0..order).collect());
    tree_walk.insert(start, vec![]);
    let mut queue = VecDeque::from([start]);
    let mut component = vec![start];
    while let Some(n) = queue.pop_front() {
        for (e, to, step) in &tg.edges[n] {
            if !tree_iso.contains_key(to) {
                let iso: Vec<usize> = tree_iso[&n].iter().map(|&v| step[v]).collect();
                let mut walk = tree_walk[&n].clone();
                walk.push(*e);
                tree_iso.insert(*to, iso);
                tree_walk.insert(*to, walk);
                component.push(*to);
                queue.push_back(*to);
            }
        }
    }
    // Every component edge yields a closed-walk generator
    // ψ_target⁻¹ ∘ φ_e ∘ ψ_source.
    let mut gens: Vec<Permutation> = vec![];
    let mut walks: Vec<Vec<usize>> = vec![];
    for &n in &component {
        for (e, to, step) in &tg.edges[n] {
            let psi_n = &tree_iso[&n];
            let psi_t = &tree_iso[to];
            let mut psi_t_inv = vec![0usize; order];
            for (a, &v) in psi_t.iter().enumerate() {
                psi_t_inv[v] = a;
            }
            let auto: Vec<usize> = (0..order).map(|v| psi_t_inv[step[psi_n[v]]]).collect();
            let perm = Permutation::new(auto).expect("composition of bijections");
            if !perm.is_identity() && !gens.contains(&perm) {
                let mut walk = tree_walk[&n].clone();
                walk.push(*e);
                // Close up via the reversed tree walk of the target.
                for &te in tree_walk[to].iter().rev() {
                    walk.push(spec.graph.arrows[te].bar);
                }
                gens.push(perm);
                walks.push(walk);
            }
        }
    }
    if gens.is_empty() {
        gens.push(Permutation::identity(order));
        walks.push(vec![]);
    }
    let closure = permutation_image(&gens, budget.closure)?;
    Ok(PhiGroup {
        group: closure.group,
        autos: closure.perms,
        witness_walks: walks,
    })
}

/// Witness for a condition (i) failure: a closed walk moving a factor.
#[derive(Debug, Clone, Serialize)]
pub struct WanderingFactor {
    pub vertex: usize,
    pub factor: usize,
    pub walk: Vec<usize>,
    pub image_factor: usize,
}

/// Witness for a condition (ii) failure.
#[derive(Debug, Clone, Serialize)]
pub struct CommutingTransfer {
    pub u: usize,
    pub v: usize,
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

/// Witness for a condition (iv) failure: a closed walk inducing a non-trivial
/// automorphism.
#[derive(Debug, Clone, Serialize)]
pub struct NonTrivialPhi {
    pub vertex: usize,
    pub factor: usize,
    pub walk: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionsReport {
    /// (i) every cycle sends each factor to itself or to nothing.
    pub c1: Option<WanderingFactor>,
    /// (ii) no commuting pair transfers onto a non-commuting pair.
    pub c2: Option<CommutingTransfer>,
    /// (iii) arrows have distinct endpoints; carries the offending arrow id.
    pub c3: Option<String>,
    /// (iv) Phi(G) trivial for every factor.
    pub c4: Option<NonTrivialPhi>,
    pub pass: bool,
}

impl ConditionsReport {
    pub fn passed(&self) -> [bool; 4] {
        [
            self.c1.is_none(),
            self.c2.is_none(),
            self.c3.is_none(),
            self.c4.is_none(),
        ]
    }
}

/// Decide the four specialness conditions, with explicit witnesses.
pub fn check_conditions(spec: &RAGGSpec, budget: &Budget) -> Result<ConditionsReport> {
    let tg = TransitionGraph::build(spec);
    let reach: Vec<HashMap<usize, Vec<usize>>> =
        (0..tg.nodes.len()).map(|n| tg.reach_from(n)).collect();

    // (i): a node (u, F) reaching (u, F') with F' != F.
    let mut c1 = None;
    'c1: for (n, &(u, f)) in tg.nodes.iter().enumerate() {
        for (&m, walk) in &reach[n] {
            let (mu, mf) = tg.nodes[m];
            if mu == u && mf != f {
                c1 = Some(WanderingFactor {
                    vertex: u,
                    factor: f,
                    walk: walk.clone(),
                    image_factor: mf,
                });
                break 'c1;
            }
        }
    }

    // (ii): A1 ~ A2 adjacent in Γ_u, B1, B2 distinct non-adjacent in Γ_v,
    // with walks A1 -> B1 and A2 -> B2.
    let mut c2 = None;
    'c2: for u in 0..spec.graph.vertex_count() {
        let gu = &spec.vertex_products[u];
        for a1 in 0..gu.vertex_count() {
            for a2 in 0..gu.vertex_count() {
                if a1 == a2 || !gu.adjacent(a1, a2) {
                    continue;
                }
                let n1 = tg.node_index[&(u, a1)];
                let n2 = tg.node_index[&(u, a2)];
                for v in 0..spec.graph.vertex_count() {
                    let gv = &spec.vertex_products[v];
                    for b1 in 0..gv.vertex_count() {
                        for b2 in 0..gv.vertex_count() {
                            if b1 == b2 || gv.adjacent(b1, b2) {
                                continue;
                            }
                            let m1 = tg.node_index[&(v, b1)];
                            let m2 = tg.node_index[&(v, b2)];
                            if let (Some(alpha), Some(beta)) =
                                (reach[n1].get(&m1), reach[n2].get(&m2))
                            {
                                c2 = Some(CommutingTransfer {
                                    u,
                                    v,
                                    a1,
                                    a2,
                                    b1,
                                    b2,
                                    alpha: alpha.clone(),
                                    beta: beta.clone(),
                                });
                                break 'c2;
                            }
                        }
                    }
                }
            }
        }
    }

    // (iii): loops in the abstract graph.
    let c3 = spec
        .graph
        .arrows
        .iter()
        .find(|a| a.source == a.target)
        .map(|a| a.id.clone());

    // (iv): non-trivial Phi(G).
    let mut c4 = None;
    for &(u, f) in &tg.nodes {
        let pg = phi_group(spec, &tg, (u, f), budget)?;
        if pg.group.order() > 1 {
            c4 = Some(NonTrivialPhi {
                vertex: u,
                factor: f,
                walk: pg.witness_walks[0].clone(),
            });
            break;
        }
    }

    let pass = c1.is_none() && c2.is_none() && c3.is_none() && c4.is_none();
    Ok(ConditionsReport { c1, c2, c3, c4, pass })
}

/// Validate a condition (i)/(iv) witness walk under the path morphism: the
/// walk must transport the factor as claimed.
pub fn validate_witness_walk(
    spec: &RAGGSpec,
    start: (usize, usize),
    walk: &[usize],
) -> Option<(usize, usize)> {
    let tg = TransitionGraph::build(spec);
    path_morphism(spec, &tg, start, walk).map(|(node, _)| node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ragg::fixtures;

    #[test]
    fn a_rtimes_fails_i_and_iii() {
        let spec = fixtures::a_rtimes(2);
        let rep = check_conditions(&spec, &Budget::default()).unwrap();
        assert!(!rep.pass);
        let w = rep.c1.as_ref().expect("condition (i) fails");
        // The witness walk really moves the factor.
        let end = validate_witness_walk(&spec, (w.vertex, w.factor), &w.walk).unwrap();
        assert_eq!(end, (w.vertex, w.image_factor));
        assert_ne!(w.factor, w.image_factor);
        assert!(rep.c3.is_some(), "condition (iii) fails (loop)");
        assert!(rep.c2.is_none());
        assert!(rep.c4.is_none());
    }

    #[test]
    fn a_box_b_passes_all() {
        for spec in [fixtures::a_box_b(2, 2), fixtures::a_box_b(2, 3), fixtures::a_box_a_cover(2)] {
            let rep = check_conditions(&spec, &Budget::default()).unwrap();
            assert!(rep.pass, "{}: {rep:?}", spec.name);
        }
    }

    #[test]
    fn hnn_cover_passes() {
        let rep = check_conditions(&fixtures::hnn_cover(), &Budget::default()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn g_bullet_h_fails() {
        let rep = check_conditions(&fixtures::g_bullet_h(), &Budget::default()).unwrap();
        assert!(!rep.pass);
        let w = rep.c1.as_ref().expect("the shift violates condition (i)");
        let spec = fixtures::g_bullet_h();
        let end = validate_witness_walk(&spec, (w.vertex, w.factor), &w.walk).unwrap();
        assert_eq!(end.0, w.vertex);
        assert_ne!(end.1, w.factor);
    }

    #[test]
    fn phi_group_inversion() {
        let spec = fixtures::phi_z3_inversion();
        let tg = TransitionGraph::build(&spec);
        let pg = phi_group(&spec, &tg, (0, 0), &Budget::default()).unwrap();
        assert_eq!(pg.group.order(), 2, "inversion generates Z2");
        let rep = check_conditions(&spec, &Budget::default()).unwrap();
        assert!(rep.c4.is_some());
        // The inversion witness walk transports the factor back to itself.
        let w = rep.c4.as_ref().unwrap();
        let end = validate_witness_walk(&spec, (w.vertex, w.factor), &w.walk).unwrap();
        assert_eq!(end, (w.vertex, w.factor));
    }

    #[test]
    fn path_morphism_examples() {
        let spec = fixtures::a_rtimes(2);
        let tg = TransitionGraph::build(&spec);
        // φ_e(A_L) = A_R.
        let (node, _) = path_morphism(&spec, &tg, (0, 0), &[0]).unwrap();
        assert_eq!(node, (0, 1));
        // φ_{e·e}(A_L) = empty (A_R is not in the image of ι_e).
        assert!(path_morphism(&spec, &tg, (0, 0), &[0, 0]).is_none());
        // φ_{e·ebar} is the identity on A_L.
        let (node, iso) = path_morphism(&spec, &tg, (0, 0), &[0, 1]).unwrap();
        assert_eq!(node, (0, 0));
        assert!(iso.iter().enumerate().all(|(i, &v)| i == v));
        // A-box-B: φ across the A-arrow moves the A factor between copies.
        let spec = fixtures::a_box_b(2, 2);
        let tg = TransitionGraph::build(&spec);
        let (node, _) = path_morphism(&spec, &tg, (0, 0), &[0]).unwrap();
        assert_eq!(node, (1, 0));
        assert!(path_morphism(&spec, &tg, (0, 1), &[0]).is_none(), "B dies through the A-arrow");
    }
}
