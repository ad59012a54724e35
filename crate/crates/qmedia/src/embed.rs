//! The embedding pipeline: from a special action on a ball to an injective
//! morphism into a graph product.
//!
//! Stages: orbit-hyperplane graph, vertex groups 𝔖(J_i) ⊕ K_i with a free
//! transitive extension on sectors, equivariant sector labelling, path labels
//! and the maps Phi / phi, the verification suite, and desk-scale
//! virtual-retract certificates.

use crate::action::{
    check_hyperplane_special, fundamental_domain_check, gen_word_inverse, orbits,
    rotative_stabiliser, sector_action, windowed_products, FdReport, GenWord, GroupAction,
    OrbitObjects, OrbitPartition, SectorAction,
};
use crate::groups::{direct_sum, FiniteGroup};
use crate::qmgraph::{is_gated, HyperplaneSet};
use crate::words::{
    inverse as word_inverse, is_graphically_reduced, multiply, reduce, GPPresentation, GPWord,
    ReducedWord, Syllable,
};
use crate::{Budget, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

#[derive(Debug, Clone)]
pub struct EmbedConfig {
    /// Basepoint for the sector labelling.
    pub x0: usize,
    /// Basepoint for the path labelling Phi.
    pub x1: usize,
    /// Extra elements added to every K_i beyond the orbit count.
    pub bigger_k: usize,
    /// Length bound for windowed stabiliser searches.
    pub stab_bound: usize,
    /// Seed for the sampled homomorphism/equivariance checks.
    pub seed: u64,
}

impl EmbedConfig {
    pub fn at_basepoint(graph_basepoint: usize) -> EmbedConfig {
        EmbedConfig {
            x0: graph_basepoint,
            x1: graph_basepoint,
            bigger_k: 0,
            stab_bound: 3,
            seed: 0x5eed_e4bd,
        }
    }
}

/// Everything the embedding construction produced.
#[derive(Debug, Clone)]
pub struct EmbeddingData {
    /// Hyperplane orbit partition (reps are minimal ids).
    pub orbit: OrbitPartition,
    /// Adjacency of the orbit-hyperplane graph on class indices.
    pub orbit_graph: Vec<BTreeSet<usize>>,
    /// Sector action per class (on the class representative).
    pub sector_actions: Vec<SectorAction>,
    /// K_i orders (orbit count + bigger_k).
    pub k_orders: Vec<usize>,
    /// G_i = 𝔖(J_i) ⊕ K_i per class.
    pub vertex_groups: Vec<FiniteGroup>,
    /// Per class: G_i element -> rep sector index (usize::MAX for the extra
    /// bigger-K elements that label no sector).
    pub beta: Vec<Vec<usize>>,
    /// Per class: rep sector index -> G_i element.
    pub beta_inv: Vec<BTreeMap<usize, usize>>,
    /// Per hyperplane: ball-sector index -> G_i element label, normalised so
    /// the x0-side sector label lies in the K_i part.
    pub sector_labels: Vec<Option<Vec<usize>>>,
    pub x0: usize,
    pub x1: usize,
    /// Target presentation (Γ, 𝒢).
    pub target: GPPresentation,
}

impl EmbeddingData {
    pub fn class_of(&self, hyperplane: usize) -> usize {
        self.orbit.class_of[hyperplane]
    }
}

fn hyperplane_of_edge(hyps: &HyperplaneSet, g: &crate::qmgraph::QMGraph, a: usize, b: usize) -> usize {
    hyps.of_edge[g.edge_id(a, b).expect("edge exists")]
}

/// Build the orbit-hyperplane graph: classes adjacent when they contain a
/// transverse pair (squares found anywhere in the ball are genuine).
pub fn orbit_hyperplane_graph(hyps: &HyperplaneSet, orb: &OrbitPartition) -> Vec<BTreeSet<usize>> {
    let k = orb.classes.len();
    let mut adj = vec![BTreeSet::new(); k];
    for j1 in 0..hyps.len() {
        for j2 in j1 + 1..hyps.len() {
            if hyps.transverse(j1, j2).value {
                let (c1, c2) = (orb.class_of[j1], orb.class_of[j2]);
                if c1 != c2 {
                    adj[c1].insert(c2);
                    adj[c2].insert(c1);
                }
            }
        }
    }
    adj
}

/// Per-class sector actions, K orders, vertex groups, and sector bijections.
pub type VertexGroupData = (Vec<SectorAction>, Vec<usize>, Vec<FiniteGroup>, Vec<Vec<usize>>);

/// Vertex groups G_i = 𝔖(J_i) ⊕ K_i with the sector bijection beta.
pub fn build_vertex_groups(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    orb: &OrbitPartition,
    cfg: &EmbedConfig,
    budget: &Budget,
) -> Result<VertexGroupData> {
    let mut sas = vec![];
    let mut k_orders = vec![];
    let mut groups = vec![];
    let mut betas = vec![];
    for &rep in &orb.reps {
        let sa = sector_action(act, hyps, rep, cfg.stab_bound, budget)?;
        let k_order = sa.orbit_count + cfg.bigger_k;
        let k_group = FiniteGroup::cyclic(k_order);
        let g_i = direct_sum(&sa.group, &k_group);
        // Basepoint sector per 𝔖-orbit: the minimal index; orbits sorted by
        // minimal member, indexing K_i elements 0..orbit_count.
        let orbits_sorted = sa.sector_orbits();
        let mut beta = vec![usize::MAX; g_i.order()];
        for (sigma, perm) in sa.assignment.iter().enumerate() {
            for (ki, orbit) in orbits_sorted.iter().enumerate() {
                let x_k = orbit[0];
                let e = sigma * k_order + ki;
                beta[e] = perm.apply(x_k);
            }
        }
        // Freeness of the extension: beta restricted to labelled elements is
        // injective exactly when 𝔖 acts freely.
        let mut seen = BTreeSet::new();
        for &s in beta.iter().filter(|&&s| s != usize::MAX) {
            if !seen.insert(s) {
                return Err(Error::PreconditionFailed(format!(
                    "sector action on representative {rep} is not free; no free transitive extension"
                )));
            }
        }
        sas.push(sa);
        k_orders.push(k_order);
        groups.push(g_i);
        betas.push(beta);
    }
    Ok((sas, k_orders, groups, betas))
}

/// Label the sectors of every hyperplane reachable by a window transport by
/// elements of its class group, normalised so that the x0-side label lies in
/// the K_i part (the claim-translate condition).
fn label_all_sectors(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    orb: &OrbitPartition,
    groups: &[FiniteGroup],
    k_orders: &[usize],
    betas: &[Vec<usize>],
    x0: usize,
) -> Result<Vec<Option<Vec<usize>>>> {
    let graph = act.graph();
    let mut out: Vec<Option<Vec<usize>>> = vec![None; hyps.len()];
    #[allow(clippy::needless_range_loop)]
    for j in 0..hyps.len() {
        let cls = orb.class_of[j];
        let rep = orb.reps[cls];
        let transport = &orb.transport_to_rep[j];
        let g_i = &groups[cls];
        let beta = &betas[cls];
        let beta_inv: BTreeMap<usize, usize> = beta
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != usize::MAX)
            .map(|(e, &s)| (s, e))
            .collect();
        let sectors = &hyps.hyperplanes[j].sectors;
        let mut raw = vec![usize::MAX; sectors.len()];
        for (si, sector) in sectors.iter().enumerate() {
            // Transport sample vertices (nearest the basepoint first) to the
            // representative's sectors.
            let mut samples: Vec<usize> = sector.iter().copied().collect();
            samples.sort_by_key(|&v| (graph.dist_from_base(v), v));
            let mut label: Option<usize> = None;
            for &v in samples.iter().take(24) {
                if let Some(iv) = act.apply_gen_word(transport, v) {
                    let rs = hyps.sector_of[rep][iv];
                    let e = *beta_inv.get(&rs).ok_or_else(|| Error::AmbiguousLabel {
                        hyperplane: j,
                        detail: format!("rep sector {rs} carries no group element"),
                    })?;
                    match label {
                        Some(l) if l != e => {
                            return Err(Error::AmbiguousLabel {
                                hyperplane: j,
                                detail: format!(
                                    "sector {si} transports onto two rep sectors ({l} vs {e})"
                                ),
                            })
                        }
                        _ => label = Some(e),
                    }
                }
            }
            match label {
                Some(e) => raw[si] = e,
                None => {
                    raw.clear();
                    break;
                }
            }
        }
        if raw.is_empty() {
            continue; // transport left the window; hyperplane stays unlabelled
        }
        // Normalise: the x0-side label must lie in {1} ⊕ K_i. Decompose the
        // raw x0 label as (sigma, kappa) and multiply the table by
        // (sigma, 0)⁻¹ on the left.
        let x0_sector = hyps.sector_of[j][x0];
        let t = raw[x0_sector];
        let k_order = k_orders[cls];
        let sigma_part = (t / k_order) * k_order; // (sigma, 0) encoded
        let adjust = g_i.inv(sigma_part);
        let table: Vec<usize> = raw.iter().map(|&e| g_i.mul(adjust, e)).collect();
        out[j] = Some(table);
    }
    Ok(out)
}

/// Construct the embedding data for a special action.
pub fn build_embedding(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    cfg: &EmbedConfig,
    budget: &Budget,
) -> Result<EmbeddingData> {
    let orb = orbits(act, OrbitObjects::Hyperplanes(hyps));
    let special = check_hyperplane_special(act.graph(), hyps, &orb);
    if !special.hyperplane_special {
        return Err(Error::PreconditionFailed(format!(
            "action is not hyperplane-special in the window: {:?}",
            special.witnesses.first()
        )));
    }
    let (sector_actions, k_orders, vertex_groups, betas) =
        build_vertex_groups(act, hyps, &orb, cfg, budget)?;
    for sa in &sector_actions {
        if !sa.free {
            return Err(Error::PreconditionFailed(format!(
                "sector action on hyperplane {} is not free: witness {:?}",
                sa.hyperplane, sa.free_witness
            )));
        }
    }
    let orbit_graph = orbit_hyperplane_graph(hyps, &orb);
    let sector_labels =
        label_all_sectors(act, hyps, &orb, &vertex_groups, &k_orders, &betas, cfg.x0)?;
    // Target presentation.
    let names: Vec<String> = (0..orb.classes.len()).map(|i| format!("o{i}")).collect();
    let edges: Vec<(usize, usize)> = orbit_graph
        .iter()
        .enumerate()
        .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
        .collect();
    let target = GPPresentation::new(
        format!("embed[{}]", act.graph().label(act.graph().basepoint())),
        names,
        &edges,
        vertex_groups.clone(),
    )?;
    let beta_inv = betas
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .filter(|(_, &s)| s != usize::MAX)
                .map(|(e, &s)| (s, e))
                .collect()
        })
        .collect();
    let data = EmbeddingData {
        orbit: orb,
        orbit_graph,
        sector_actions,
        k_orders,
        vertex_groups,
        beta: betas,
        beta_inv,
        sector_labels,
        x0: cfg.x0,
        x1: cfg.x1,
        target,
    };
    verify_label_invariance(act, hyps, &data)?;
    Ok(data)
}

/// Claim-level well-definedness: generators preserve edge labels wherever the
/// window allows the comparison.
fn verify_label_invariance(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    data: &EmbeddingData,
) -> Result<()> {
    let graph = act.graph();
    for gi in 0..act.generators.len() {
        let g = gi as i32 + 1;
        for &(a, b) in graph.edges() {
            let (ia, ib) = match (act.apply_gen(g, a), act.apply_gen(g, b)) {
                (Some(x), Some(y)) => (x, y),
                _ => continue,
            };
            let l1 = edge_label(data, hyps, graph, a, b);
            let l2 = edge_label(data, hyps, graph, ia, ib);
            if let (Some(s1), Some(s2)) = (l1, l2) {
                if s1 != s2 {
                    return Err(Error::AmbiguousLabel {
                        hyperplane: hyperplane_of_edge(hyps, graph, a, b),
                        detail: format!(
                            "generator {gi} changes the label of edge ({a}, {b}): {s1:?} vs {s2:?}"
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Label of the oriented edge (a, b): ℓ(S_a)⁻¹ ℓ(S_b) in the class group,
/// as a target syllable. None when the dual hyperplane is unlabelled.
pub fn edge_label(
    data: &EmbeddingData,
    hyps: &HyperplaneSet,
    graph: &crate::qmgraph::QMGraph,
    a: usize,
    b: usize,
) -> Option<Syllable> {
    let j = hyps.of_edge[graph.edge_id(a, b)?];
    let table = data.sector_labels[j].as_ref()?;
    let cls = data.orbit.class_of[j];
    let g_i = &data.vertex_groups[cls];
    let sa = table[hyps.sector_of[j][a]];
    let sb = table[hyps.sector_of[j][b]];
    // A corrupted or truncation-damaged table can label both sides equally;
    // the identity syllable is surfaced to the verification checks.
    let elt = g_i.mul(g_i.inv(sa), sb);
    Some(Syllable { vertex: cls, element: elt })
}

/// Label of an oriented path, as an unreduced target word.
pub fn label_path(
    data: &EmbeddingData,
    hyps: &HyperplaneSet,
    graph: &crate::qmgraph::QMGraph,
    path: &[usize],
) -> Result<GPWord> {
    let mut syls = vec![];
    for w in path.windows(2) {
        let syl = edge_label(data, hyps, graph, w[0], w[1]).ok_or_else(|| {
            Error::PreconditionFailed(format!(
                "edge ({}, {}) crosses an unlabelled hyperplane",
                w[0], w[1]
            ))
        })?;
        syls.push(syl);
    }
    Ok(GPWord(syls))
}

/// Phi(x): the label of a path from x1 to x, as a reduced target word.
pub fn phi_map(
    data: &EmbeddingData,
    hyps: &HyperplaneSet,
    graph: &crate::qmgraph::QMGraph,
    x: usize,
) -> Result<ReducedWord> {
    let path = graph.geodesic(data.x1, x);
    let word = label_path(data, hyps, graph, &path)?;
    Ok(reduce(&data.target, &word))
}

/// phi(g) = Phi(g · x1) for a generator word.
pub fn phi_hom(
    data: &EmbeddingData,
    act: &GroupAction,
    hyps: &HyperplaneSet,
    g: &GenWord,
) -> Result<ReducedWord> {
    let gx1 = act.apply_gen_word(g, data.x1).ok_or_else(|| {
        Error::PreconditionFailed("g·x1 leaves the window".into())
    })?;
    phi_map(data, hyps, act.graph(), gx1)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn new() -> CheckOutcome {
        CheckOutcome {
            pass: true,
            checked: 0,
            witness: None,
        }
    }

    fn fail(&mut self, witness: String) {
        if self.pass {
            self.pass = false;
            self.witness = Some(witness);
        }
    }
}

/// Verification suite for an embedding.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    /// Square flips, triangle shortenings and backtracks preserve labels.
    pub well_defined: CheckOutcome,
    /// Geodesic labels are graphically reduced in the target.
    pub reduced_labels: CheckOutcome,
    /// d(Phi x, Phi y) = d(x, y) on certified pairs.
    pub isometry: CheckOutcome,
    /// Phi(g x) = phi(g) Phi(x) on sampled pairs.
    pub equivariance: CheckOutcome,
    /// phi(gh) = phi(g) phi(h) on sampled pairs.
    pub homomorphism: CheckOutcome,
    /// Images of deep cliques are full target cliques (cosets Phi(x)·G_i).
    pub clique_images: CheckOutcome,
    /// Image of the certified region contains its triangles.
    pub contains_triangles: CheckOutcome,
    /// Image of the certified region is locally convex.
    pub locally_convex: CheckOutcome,
    /// Gated = triangles + local convexity.
    pub gated: bool,
    pub pass: bool,
}

/// Exhaustive desk-scale verification of the embedding claims on the
/// certified region.
pub fn verify_embedding(
    data: &EmbeddingData,
    act: &GroupAction,
    hyps: &HyperplaneSet,
    cfg: &EmbedConfig,
) -> Result<VerifyReport> {
    let graph = act.graph();
    let p = &data.target;
    let certified: Vec<usize> = graph.certified_vertices();
    let cert_set: BTreeSet<usize> = certified.iter().copied().collect();

    // Move-level well-definedness.
    let mut well_defined = CheckOutcome::new();
    {
        // Backtracks: ℓ(e)ℓ(e⁻¹) = 1.
        for &(a, b) in graph.edges() {
            if !cert_set.contains(&a) || !cert_set.contains(&b) {
                continue;
            }
            if let (Some(s1), Some(s2)) = (
                edge_label(data, hyps, graph, a, b),
                edge_label(data, hyps, graph, b, a),
            ) {
                well_defined.checked += 1;
                let g_i = &data.vertex_groups[s1.vertex];
                if s1.vertex != s2.vertex || g_i.mul(s1.element, s2.element) != 0 {
                    well_defined.fail(format!("backtrack at edge ({a}, {b})"));
                }
            }
        }
        // Triangles: ℓ(e)ℓ(f) = ℓ(e') in the class group.
        for &(a, b) in graph.edges() {
            if !cert_set.contains(&a) || !cert_set.contains(&b) {
                continue;
            }
            for &c in graph.neighbors(a).intersection(graph.neighbors(b)) {
                if !cert_set.contains(&c) {
                    continue;
                }
                if let (Some(s1), Some(s2), Some(s3)) = (
                    edge_label(data, hyps, graph, a, b),
                    edge_label(data, hyps, graph, b, c),
                    edge_label(data, hyps, graph, a, c),
                ) {
                    well_defined.checked += 1;
                    let same_vertex = s1.vertex == s2.vertex && s2.vertex == s3.vertex;
                    let g_i = &data.vertex_groups[s1.vertex];
                    if !same_vertex || g_i.mul(s1.element, s2.element) != s3.element {
                        well_defined.fail(format!("triangle ({a}, {b}, {c})"));
                    }
                }
            }
        }
        // Induced squares: ℓ(e)ℓ(f) = ℓ(f')ℓ(e') as group elements.
        for &b in &certified {
            let nbrs: Vec<usize> = graph.neighbors(b).iter().copied().collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &c in &nbrs[i + 1..] {
                    if !cert_set.contains(&a) || !cert_set.contains(&c) {
                        continue;
                    }
                    for d in graph.square_completions(a, b, c) {
                        let labels = (
                            edge_label(data, hyps, graph, a, b),
                            edge_label(data, hyps, graph, b, c),
                            edge_label(data, hyps, graph, a, d),
                            edge_label(data, hyps, graph, d, c),
                        );
                        if let (Some(s1), Some(s2), Some(s3), Some(s4)) = labels {
                            well_defined.checked += 1;
                            let left = reduce(p, &GPWord(vec![s1, s2]));
                            let right = reduce(p, &GPWord(vec![s3, s4]));
                            if left != right {
                                well_defined.fail(format!("square ({a}, {b}, {c}, {d})"));
                            }
                        }
                    }
                }
            }
        }
    }

    // Phi on the certified region.
    let mut phi: HashMap<usize, ReducedWord> = HashMap::new();
    for &x in &certified {
        phi.insert(x, phi_map(data, hyps, graph, x)?);
    }

    // Reduced geodesic labels + isometry on all certified pairs.
    let mut reduced_labels = CheckOutcome::new();
    let mut isometry = CheckOutcome::new();
    for (i, &x) in certified.iter().enumerate() {
        let dx = graph.bfs_from(x);
        for &y in certified.iter().skip(i + 1) {
            let path = graph.geodesic(x, y);
            let word = label_path(data, hyps, graph, &path)?;
            reduced_labels.checked += 1;
            let (ok, _) = is_graphically_reduced(p, &word);
            if !ok {
                reduced_labels.fail(format!("pair ({x}, {y})"));
            }
            isometry.checked += 1;
            let dist_target = reduce(p, &word).len() as u32;
            if dist_target != dx[y] {
                isometry.fail(format!(
                    "pair ({x}, {y}): target distance {dist_target}, ball distance {}",
                    dx[y]
                ));
            }
            // Cross-check against Phi differences.
            let diff = multiply(p, &word_inverse(p, &phi[&x]), &phi[&y]);
            if diff.len() as u32 != dx[y] {
                isometry.fail(format!("pair ({x}, {y}): Phi difference has wrong length"));
            }
        }
    }

    // Equivariance and homomorphism property on generators plus sampled words.
    let mut equivariance = CheckOutcome::new();
    let mut homomorphism = CheckOutcome::new();
    {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut words: Vec<GenWord> = (0..act.generators.len())
            .map(|i| vec![i as i32 + 1])
            .collect();
        for _ in 0..1000 {
            if act.generators.is_empty() {
                break;
            }
            let len = rng.gen_range(1..=3);
            let w: GenWord = (0..len)
                .map(|_| {
                    let gi = rng.gen_range(0..act.generators.len()) as i32 + 1;
                    if rng.gen_bool(0.5) {
                        gi
                    } else {
                        -gi
                    }
                })
                .collect();
            words.push(w);
        }
        for w in &words {
            if let Ok(phig) = phi_hom(data, act, hyps, w) {
                for &x in certified.iter() {
                    if let Some(gx) = act.apply_gen_word(w, x) {
                        if let Some(phix) = phi.get(&x) {
                            if let Some(phigx) = phi.get(&gx) {
                                equivariance.checked += 1;
                                let rhs = multiply(p, &phig, phix);
                                if &rhs != phigx {
                                    equivariance.fail(format!("g = {w:?}, x = {x}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        // phi(gh) = phi(g) phi(h) where all three stay in the window. A
        // generator word applies left to right as a map, so concatenating
        // w_g then w_h realises the group element h·g.
        for i in 0..words.len().min(40) {
            for k in 0..words.len().min(40) {
                let (g, h) = (&words[i], &words[k]);
                let mut word_hg = g.clone();
                word_hg.extend(h.iter().copied());
                if let (Ok(pg), Ok(ph), Ok(phg)) = (
                    phi_hom(data, act, hyps, g),
                    phi_hom(data, act, hyps, h),
                    phi_hom(data, act, hyps, &word_hg),
                ) {
                    homomorphism.checked += 1;
                    if multiply(p, &ph, &pg) != phg {
                        homomorphism.fail(format!("g = {g:?}, h = {h:?}"));
                    }
                }
            }
        }
    }

    // Deep region: one step inside the certified region, so that completing
    // vertices of squares/triangles stay certified. A complete (untruncated)
    // graph is deep everywhere.
    let deep: Vec<usize> = if graph.certified_interior() == 0 {
        certified.clone()
    } else {
        let deep_bound =
            (graph.radius() as i64 - graph.certified_interior() as i64 - 1).max(0) as u32;
        certified
            .iter()
            .copied()
            .filter(|&v| graph.dist_from_base(v) <= deep_bound)
            .collect()
    };
    let image: HashSet<&ReducedWord> = phi.values().collect();

    // Clique images are cliques (cosets Phi(x)·G_i).
    let mut clique_images = CheckOutcome::new();
    for clique in crate::qmgraph::cliques(graph) {
        if !clique.vertices.iter().all(|v| deep.contains(v)) {
            continue;
        }
        let mut it = clique.vertices.iter();
        let (&a, &b) = match (it.next(), it.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        let syl = match edge_label(data, hyps, graph, a, b) {
            Some(s) => s,
            None => continue,
        };
        let g_i = &data.vertex_groups[syl.vertex];
        clique_images.checked += 1;
        let image_words: BTreeSet<ReducedWord> =
            clique.vertices.iter().map(|v| phi[v].clone()).collect();
        let coset: BTreeSet<ReducedWord> = (0..g_i.order())
            .map(|e| {
                let base = &phi[&a];
                // Phi(a) * (label(a)⁻¹ * e) spans the coset Phi(a)·G_i.
                let sa = data.sector_labels[hyperplane_of_edge(hyps, graph, a, b)]
                    .as_ref()
                    .map(|t| t[hyps.sector_of[hyperplane_of_edge(hyps, graph, a, b)][a]])
                    .unwrap_or(0);
                let elt = g_i.mul(g_i.inv(sa), e);
                if elt == 0 {
                    return base.clone();
                }
                multiply(
                    p,
                    base,
                    &crate::words::word_from_syllables(
                        p,
                        &[Syllable { vertex: syl.vertex, element: elt }],
                    ),
                )
            })
            .collect();
        if image_words != coset {
            clique_images.fail(format!(
                "clique at {a}: image has {} vertices, coset {}",
                image_words.len(),
                coset.len()
            ));
        }
    }

    // Gatedness of the image within the window: triangles + local convexity,
    // verified algebraically in the target.
    let mut contains_triangles = CheckOutcome::new();
    let mut locally_convex = CheckOutcome::new();
    let all_target_syllables = p.all_syllables();
    for &(a, b) in graph.edges() {
        if !deep.contains(&a) || !deep.contains(&b) {
            continue;
        }
        let (wa, wb) = (&phi[&a], &phi[&b]);
        for &s in &all_target_syllables {
            let c = multiply(p, wa, &crate::words::word_from_syllables(p, &[s]));
            if &c == wb {
                continue;
            }
            // c adjacent to both wa and wb?
            let diff = multiply(p, &word_inverse(p, &c), wb);
            if diff.len() == 1 {
                contains_triangles.checked += 1;
                if !image.contains(&c) {
                    contains_triangles.fail(format!(
                        "triangle completion of edge ({a}, {b}) missing from image"
                    ));
                }
            }
        }
    }
    for &b in &deep {
        let nbrs: Vec<usize> = graph
            .neighbors(b)
            .iter()
            .copied()
            .filter(|v| deep.contains(v))
            .collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                let (wa, wb, wc) = (&phi[&a], &phi[&b], &phi[&c]);
                // Target square completions d of the corner wa - wb - wc.
                if multiply(p, &word_inverse(p, wa), wc).len() != 2 {
                    continue; // wa, wc adjacent or equal: no induced square
                }
                for &s in &all_target_syllables {
                    let d = multiply(p, wa, &crate::words::word_from_syllables(p, &[s]));
                    if &d == wb {
                        continue;
                    }
                    let d_to_c = multiply(p, &word_inverse(p, &d), wc);
                    let d_to_b = multiply(p, &word_inverse(p, &d), wb);
                    if d_to_c.len() == 1 && d_to_b.len() == 2 {
                        locally_convex.checked += 1;
                        if !image.contains(&d) {
                            locally_convex.fail(format!(
                                "square completion of corner ({a}, {b}, {c}) missing from image"
                            ));
                        }
                    }
                }
            }
        }
    }

    let gated = contains_triangles.pass && locally_convex.pass;
    let pass = well_defined.pass
        && reduced_labels.pass
        && isometry.pass
        && equivariance.pass
        && homomorphism.pass
        && clique_images.pass
        && gated;
    Ok(VerifyReport {
        well_defined,
        reduced_labels,
        isometry,
        equivariance,
        homomorphism,
        clique_images,
        contains_triangles,
        locally_convex,
        gated,
        pass,
    })
}

/// Desk-scale virtual-retract certificate for a subgroup H stabilising a
/// gated subgraph Y.
#[derive(Debug, Clone, Serialize)]
pub struct RetractCertificate {
    /// Hyperplanes tangent to Y (window list).
    pub jays: Vec<usize>,
    pub rotative_generator_count: usize,
    pub fd: FdReport,
    /// No non-trivial window element lies in both H and R.
    pub h_r_trivial: bool,
    pub pass: bool,
}

pub fn virtual_retract_certificate(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    h_gens: &[GenWord],
    y: &BTreeSet<usize>,
    stab_bound: usize,
    len_bound: usize,
    budget: &Budget,
) -> Result<RetractCertificate> {
    let graph = act.graph();
    let rep = is_gated(graph, y);
    if !rep.gated {
        return Err(Error::PreconditionFailed(format!(
            "Y is not gated: {:?}",
            rep.failure
        )));
    }
    for (i, h) in h_gens.iter().enumerate() {
        let map = act.gen_word_map(h);
        for &v in y {
            if let Some(iv) = map[v] {
                if !y.contains(&iv) {
                    return Err(Error::PreconditionFailed(format!(
                        "H generator {i} moves Y vertex {v} outside Y"
                    )));
                }
            }
        }
    }
    // Hyperplanes tangent to Y: carrier meets Y at a certified vertex, no
    // edge inside Y.
    let jays: Vec<usize> = (0..hyps.len())
        .filter(|&j| {
            let h = &hyps.hyperplanes[j];
            let meets = h.carrier.iter().any(|&v| y.contains(&v) && graph.certified(v));
            let crosses = h.edges.iter().any(|&e| {
                let (u, v) = graph.edge(e);
                y.contains(&u) && y.contains(&v)
            });
            meets && !crosses
        })
        .collect();
    let x0 = *y.iter().next().expect("Y non-empty");
    let fd = fundamental_domain_check(act, hyps, x0, &jays, stab_bound, len_bound, budget)?;
    // H ∩ R trivial within the window: compare realised maps.
    let mut r_maps: BTreeSet<Vec<Option<usize>>> = BTreeSet::new();
    {
        let pooled: Vec<GenWord> = jays
            .iter()
            .flat_map(|&j| rotative_stabiliser(act, hyps, j, stab_bound))
            .collect();
        let identity: Vec<Option<usize>> = (0..graph.vertex_count()).map(Some).collect();
        let mut frontier = vec![identity.clone()];
        let mut seen = BTreeSet::from([identity]);
        for _ in 0..len_bound {
            let mut next = vec![];
            for map in &frontier {
                for g in &pooled {
                    let m: Vec<Option<usize>> = map
                        .iter()
                        .map(|&mv| mv.and_then(|v| act.apply_gen_word(g, v)))
                        .collect();
                    if seen.insert(m.clone()) {
                        r_maps.insert(m.clone());
                        next.push(m);
                    }
                }
            }
            frontier = next;
        }
    }
    let mut h_r_trivial = true;
    {
        let h_act = GroupAction {
            space: crate::action::ActionSpace::Generic { graph: graph.clone() },
            generators: h_gens
                .iter()
                .enumerate()
                .map(|(i, w)| crate::action::Generator {
                    label: format!("h{i}"),
                    fwd: act.gen_word_map(w),
                    inv: act.gen_word_map(&gen_word_inverse(w)),
                })
                .collect(),
        };
        for (_, map) in windowed_products(&h_act, len_bound).into_iter().skip(1) {
            let nontrivial = map
                .iter()
                .enumerate()
                .any(|(v, &mv)| mv.is_some_and(|m| m != v));
            if nontrivial && r_maps.contains(&map) {
                h_r_trivial = false;
            }
        }
    }
    let pass = fd.pass && h_r_trivial;
    let rotative_generator_count = jays
        .iter()
        .map(|&j| rotative_stabiliser(act, hyps, j, stab_bound).len())
        .sum();
    Ok(RetractCertificate {
        jays,
        rotative_generator_count,
        fd,
        h_r_trivial,
        pass,
    })
}
