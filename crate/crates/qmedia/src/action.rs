//! Group actions on quasi-median balls: orbits with transports, stabilisers,
//! sector actions, specialness verdicts, rotative stabilisers, peripheral
//! collections, and the fundamental-domain verification.
//!
//! Actions are given by generator partial automorphisms of a finite ball.
//! Verdicts computed on truncated balls are flagged window-sound; exact
//! answers come from the algebraic layer available for full Cayley actions.

use crate::groups::{permutation_image, Dsu, FiniteGroup, Permutation};
use crate::qmgraph::{algebraic_hyperplane, CayleyBall, HyperplaneSet, QMGraph};
use crate::words::{inverse, multiply, ReducedWord, Syllable};
use crate::{Budget, Error, Result};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// A word over the action's generators: entry +k applies generator k-1,
/// entry -k its inverse; entries apply left to right.
pub type GenWord = Vec<i32>;

pub fn gen_word_inverse(w: &GenWord) -> GenWord {
    w.iter().rev().map(|&g| -g).collect()
}

/// One generator: a partial automorphism of the ball and its inverse.
#[derive(Debug, Clone)]
pub struct Generator {
    pub label: String,
    pub fwd: Vec<Option<usize>>,
    pub inv: Vec<Option<usize>>,
}

/// The underlying ball of an action.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum ActionSpace {
    /// Cayley ball of a graph product; `full` when the generators realise all
    /// syllables, enabling the exact algebraic layer.
    Cayley {
        ball: CayleyBall,
        gen_words: Vec<ReducedWord>,
        full: bool,
    },
    /// Any other labelled ball (groupoid balls, raw graphs).
    Generic { graph: QMGraph },
}

#[derive(Debug, Clone)]
pub struct GroupAction {
    pub space: ActionSpace,
    pub generators: Vec<Generator>,
}

impl GroupAction {
    pub fn graph(&self) -> &QMGraph {
        match &self.space {
            ActionSpace::Cayley { ball, .. } => &ball.graph,
            ActionSpace::Generic { graph } => graph,
        }
    }

    pub fn cayley(&self) -> Option<&CayleyBall> {
        match &self.space {
            ActionSpace::Cayley { ball, .. } => Some(ball),
            ActionSpace::Generic { .. } => None,
        }
    }

    pub fn is_full_cayley(&self) -> bool {
        matches!(&self.space, ActionSpace::Cayley { full: true, .. })
    }

    /// Apply one signed generator to a vertex.
    pub fn apply_gen(&self, g: i32, v: usize) -> Option<usize> {
        debug_assert!(g != 0);
        let idx = (g.unsigned_abs() as usize) - 1;
        if g > 0 {
            self.generators[idx].fwd[v]
        } else {
            self.generators[idx].inv[v]
        }
    }

    pub fn apply_gen_word(&self, w: &GenWord, mut v: usize) -> Option<usize> {
        for &g in w {
            v = self.apply_gen(g, v)?;
        }
        Some(v)
    }

    /// Composite partial map of a generator word.
    pub fn gen_word_map(&self, w: &GenWord) -> Vec<Option<usize>> {
        (0..self.graph().vertex_count())
            .map(|v| self.apply_gen_word(w, v))
            .collect()
    }

    /// For Cayley actions: the group element a generator word represents as a
    /// left multiplication. Entries apply left to right as maps, so the
    /// element is the product of the entry elements in reverse order.
    pub fn gen_word_element(&self, w: &GenWord) -> Option<ReducedWord> {
        let (ball, gen_words) = match &self.space {
            ActionSpace::Cayley { ball, gen_words, .. } => (ball, gen_words),
            ActionSpace::Generic { .. } => return None,
        };
        let p = &ball.presentation;
        let mut acc = ReducedWord::empty();
        for &g in w.iter().rev() {
            let idx = (g.unsigned_abs() as usize) - 1;
            let part = if g > 0 {
                gen_words[idx].clone()
            } else {
                inverse(p, &gen_words[idx])
            };
            acc = multiply(p, &acc, &part);
        }
        Some(acc)
    }

    /// Image of a hyperplane under a signed generator: the unique hyperplane
    /// containing the images of its edges, or None when undefined or
    /// inconsistent within the window.
    pub fn map_hyperplane(&self, hyps: &HyperplaneSet, g: i32, j: usize) -> Option<usize> {
        let graph = self.graph();
        let mut target: Option<usize> = None;
        for &e in &hyps.hyperplanes[j].edges {
            let (u, v) = graph.edge(e);
            if let (Some(iu), Some(iv)) = (self.apply_gen(g, u), self.apply_gen(g, v)) {
                let ie = graph.edge_id(iu, iv)?;
                let ij = hyps.of_edge[ie];
                match target {
                    Some(t) if t != ij => return None,
                    _ => target = Some(ij),
                }
            }
        }
        target
    }
}

fn left_mul_generator(ball: &CayleyBall, w: &ReducedWord) -> Generator {
    let p = &ball.presentation;
    Generator {
        label: w.display(p),
        fwd: ball.left_mul_map(w),
        inv: ball.left_mul_map(&inverse(p, w)),
    }
}

/// Left-multiplication action of the subgroup generated by `gen_words`.
pub fn action_from_subgroup(ball: CayleyBall, gen_words: Vec<ReducedWord>) -> GroupAction {
    let generators = gen_words.iter().map(|w| left_mul_generator(&ball, w)).collect();
    let full = {
        let singles: BTreeSet<&ReducedWord> = gen_words.iter().filter(|w| w.len() == 1).collect();
        ball.presentation.all_syllables().iter().all(|&s| {
            let w = crate::words::word_from_syllables(&ball.presentation, &[s]);
            singles.contains(&w)
        })
    };
    GroupAction {
        space: ActionSpace::Cayley { ball, gen_words, full },
        generators,
    }
}

/// The full graph-product action on its own ball (one generator per syllable).
pub fn full_cayley_action(ball: CayleyBall) -> GroupAction {
    let p = ball.presentation.clone();
    let words: Vec<ReducedWord> = p
        .all_syllables()
        .iter()
        .map(|&s| crate::words::word_from_syllables(&p, &[s]))
        .collect();
    action_from_subgroup(ball, words)
}

/// Generic action on an arbitrary graph from explicit partial maps.
pub fn action_from_maps(graph: QMGraph, generators: Vec<Generator>) -> Result<GroupAction> {
    for g in &generators {
        for &(u, v) in graph.edges() {
            if let (Some(iu), Some(iv)) = (g.fwd[u], g.fwd[v]) {
                if !graph.is_edge(iu, iv) {
                    return Err(Error::invalid(format!(
                        "generator {} does not preserve edge ({u}, {v})",
                        g.label
                    )));
                }
            }
        }
    }
    Ok(GroupAction {
        space: ActionSpace::Generic { graph },
        generators,
    })
}

/// Objects an action can be partitioned on.
pub enum OrbitObjects<'a> {
    Vertices,
    Edges,
    Hyperplanes(&'a HyperplaneSet),
}

/// Orbit partition with transport words to class representatives.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Representative (minimal id) per class.
    pub reps: Vec<usize>,
    /// Word sending object -> its representative.
    pub transport_to_rep: Vec<GenWord>,
    /// No generator move was undefined or inconsistent during the scan.
    pub window_exact: bool,
}

/// Orbit closure over generator images within domains; flagged window-sound.
pub fn orbits(act: &GroupAction, objects: OrbitObjects<'_>) -> OrbitPartition {
    let graph = act.graph();
    let count = match &objects {
        OrbitObjects::Vertices => graph.vertex_count(),
        OrbitObjects::Edges => graph.edge_count(),
        OrbitObjects::Hyperplanes(h) => h.len(),
    };
    let mut window_exact = true;
    let mut class_of = vec![usize::MAX; count];
    let mut transport: Vec<GenWord> = vec![GenWord::new(); count];
    let mut classes: Vec<Vec<usize>> = vec![];
    let mut reps = vec![];
    for start in 0..count {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        reps.push(start);
        class_of[start] = cid;
        let mut members = vec![start];
        let mut queue = vec![start];
        while let Some(o) = queue.pop() {
            for gi in 0..act.generators.len() {
                for sign in [1i32, -1] {
                    let g = sign * (gi as i32 + 1);
                    let moved = match &objects {
                        OrbitObjects::Vertices => act.apply_gen(g, o),
                        OrbitObjects::Edges => {
                            let (u, v) = graph.edge(o);
                            match (act.apply_gen(g, u), act.apply_gen(g, v)) {
                                (Some(iu), Some(iv)) => graph.edge_id(iu, iv),
                                _ => None,
                            }
                        }
                        OrbitObjects::Hyperplanes(h) => act.map_hyperplane(h, g, o),
                    };
                    match moved {
                        Some(o2) => {
                            if class_of[o2] == usize::MAX {
                                class_of[o2] = cid;
                                // Undo g, then follow o's transport.
                                let mut w = vec![-g];
                                w.extend(transport[o].iter().copied());
                                transport[o2] = w;
                                members.push(o2);
                                queue.push(o2);
                            }
                        }
                        None => window_exact = false,
                    }
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    OrbitPartition {
        classes,
        class_of,
        reps,
        transport_to_rep: transport,
        window_exact,
    }
}

/// All distinct partial maps realised by generator words of length <= bound,
/// paired with a shortest realising word. Deterministic order; the identity
/// map is entry 0.
pub fn windowed_products(act: &GroupAction, bound: usize) -> Vec<(GenWord, Vec<Option<usize>>)> {
    let n = act.graph().vertex_count();
    let identity: Vec<Option<usize>> = (0..n).map(Some).collect();
    let mut seen: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
    let mut out: Vec<(GenWord, Vec<Option<usize>>)> = vec![(GenWord::new(), identity.clone())];
    seen.insert(identity, 0);
    let mut layer_start = 0;
    for _ in 0..bound {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            let (word, map) = out[i].clone();
            for gi in 0..act.generators.len() {
                for sign in [1i32, -1] {
                    let g = sign * (gi as i32 + 1);
                    let next_map: Vec<Option<usize>> = map
                        .iter()
                        .map(|&mv| mv.and_then(|v| act.apply_gen(g, v)))
                        .collect();
                    if next_map.iter().all(Option::is_none) {
                        continue;
                    }
                    if !seen.contains_key(&next_map) {
                        let mut w = word.clone();
                        w.push(g);
                        seen.insert(next_map.clone(), out.len());
                        out.push((w, next_map));
                    }
                }
            }
        }
        layer_start = layer_end;
    }
    out
}

/// Generating set of the setwise stabiliser of hyperplane `j`.
///
/// Full Cayley actions use the exact formula stab(J) = g(G_u x <link u>)g⁻¹;
/// otherwise a windowed search over products of length <= `bound`.
pub fn stabiliser(act: &GroupAction, hyps: &HyperplaneSet, j: usize, bound: usize) -> Vec<GenWord> {
    if act.is_full_cayley() {
        if let Some(words) = algebraic_stab_words(act, hyps, j, false) {
            return words;
        }
    }
    windowed_products(act, bound)
        .into_iter()
        .skip(1)
        .filter(|(w, _)| {
            let mut exact = true;
            map_hyperplane_by_word(act, hyps, w, j, &mut exact) == Some(j)
        })
        .map(|(w, _)| w)
        .collect()
}

/// Rotative stabiliser: intersection of the setwise stabilisers of all
/// cliques dual to `j`.
pub fn rotative_stabiliser(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    j: usize,
    bound: usize,
) -> Vec<GenWord> {
    if act.is_full_cayley() {
        if let Some(words) = algebraic_stab_words(act, hyps, j, true) {
            return words;
        }
    }
    let graph = act.graph();
    let dual_cliques: Vec<BTreeSet<usize>> = crate::qmgraph::cliques(graph)
        .into_iter()
        .map(|c| c.vertices)
        .filter(|vs| {
            vs.iter().any(|&a| {
                vs.iter().any(|&b| {
                    a < b
                        && graph
                            .edge_id(a, b)
                            .is_some_and(|e| hyps.hyperplanes[j].edges.contains(&e))
                })
            })
        })
        .collect();
    windowed_products(act, bound)
        .into_iter()
        .skip(1)
        .filter(|(_, map)| {
            dual_cliques.iter().all(|c| {
                c.iter().all(|&v| match map[v] {
                    Some(iv) => c.contains(&iv),
                    None => false,
                })
            })
        })
        .map(|(w, _)| w)
        .collect()
}

/// Exact stabiliser generators for full Cayley actions, as generator words
/// (each algebraic word maps to a sequence of syllable generators).
fn algebraic_stab_words(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    j: usize,
    rotative: bool,
) -> Option<Vec<GenWord>> {
    let ball = act.cayley()?;
    let p = &ball.presentation;
    let &min_edge = hyps.hyperplanes[j].edges.iter().next()?;
    let (a, b) = ball.graph.edge(min_edge);
    let u = ball.edge_gamma_vertex(a, b);
    let alg = algebraic_hyperplane(p, ball.word_of(a), u);
    let words = if rotative {
        alg.rotative_generators(p)
    } else {
        alg.stabiliser_generators(p)
    };
    let syl_index: HashMap<Syllable, i32> = p
        .all_syllables()
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i as i32 + 1))
        .collect();
    // Reverse the syllables: generator words apply left to right as maps, so
    // the left multiplication by s1·s2·...·sn is the word [sn, ..., s1].
    Some(
        words
            .iter()
            .map(|w| w.syllables().iter().rev().map(|s| syl_index[s]).collect())
            .collect(),
    )
}

fn map_hyperplane_by_word(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    w: &GenWord,
    mut j: usize,
    exact: &mut bool,
) -> Option<usize> {
    for &g in w {
        match act.map_hyperplane(hyps, g, j) {
            Some(next) => j = next,
            None => {
                *exact = false;
                return None;
            }
        }
    }
    Some(j)
}

/// The action of stab(J) on the sectors of J.
#[derive(Debug, Clone)]
pub struct SectorAction {
    pub hyperplane: usize,
    pub sector_count: usize,
    /// 𝔖(J): image of the stabiliser in the permutation group of the sectors.
    pub group: FiniteGroup,
    /// Element index -> sector permutation.
    pub assignment: Vec<Permutation>,
    /// Element index -> realising generator word.
    pub element_words: Vec<GenWord>,
    pub orbit_count: usize,
    pub free: bool,
    /// (non-identity element, fixed sector), when not free.
    pub free_witness: Option<(usize, usize)>,
    pub window_exact: bool,
}

impl SectorAction {
    /// Orbits of 𝔖(J) on sectors, sorted by minimal sector index.
    pub fn sector_orbits(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.sector_count);
        for p in &self.assignment {
            for s in 0..self.sector_count {
                dsu.union(s, p.apply(s));
            }
        }
        dsu.classes()
    }
}

/// Permutation induced on the sectors of `j` by the partial map, if total and
/// consistent on the window.
pub fn sector_permutation(
    hyps: &HyperplaneSet,
    j: usize,
    map: &[Option<usize>],
) -> Option<Permutation> {
    let h = &hyps.hyperplanes[j];
    let k = h.sectors.len();
    let mut images = vec![usize::MAX; k];
    for (si, sector) in h.sectors.iter().enumerate() {
        let mut target = usize::MAX;
        for &v in sector {
            if let Some(iv) = map[v] {
                let ti = hyps.sector_of[j][iv];
                if target == usize::MAX {
                    target = ti;
                } else if target != ti {
                    return None; // inconsistent within window
                }
            }
        }
        if target == usize::MAX {
            return None; // no defined sample
        }
        images[si] = target;
    }
    Permutation::new(images).ok()
}

/// Build 𝔖(J) acting on the sectors of `j` from the stabiliser generators.
pub fn sector_action(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    j: usize,
    bound: usize,
    budget: &Budget,
) -> Result<SectorAction> {
    let stab = stabiliser(act, hyps, j, bound);
    let mut perms: Vec<Permutation> = vec![];
    let mut kept_words: Vec<GenWord> = vec![];
    let mut window_exact = hyps.hyperplanes[j].window_exact;
    for w in stab {
        let map = act.gen_word_map(&w);
        match sector_permutation(hyps, j, &map) {
            Some(p) => {
                if !perms.contains(&p) {
                    perms.push(p);
                    kept_words.push(w);
                }
            }
            None => window_exact = false,
        }
    }
    let sector_count = hyps.hyperplanes[j].sectors.len();
    if perms.is_empty() {
        perms.push(Permutation::identity(sector_count));
        kept_words.push(GenWord::new());
    }
    let closure = permutation_image(&perms, budget.closure)?;
    let element_words: Vec<GenWord> = closure
        .words
        .iter()
        .map(|w| {
            // A closure word [a, b] is the permutation P(b)∘P(a); generator
            // words concatenated in the same order compose maps identically.
            let mut gw = GenWord::new();
            for &pi in w {
                gw.extend(kept_words[pi].iter().copied());
            }
            gw
        })
        .collect();
    let mut free_witness = None;
    'free: for (ei, p) in closure.perms.iter().enumerate().skip(1) {
        for s in 0..sector_count {
            if p.apply(s) == s {
                free_witness = Some((ei, s));
                break 'free;
            }
        }
    }
    let mut dsu = Dsu::new(sector_count);
    for p in &closure.perms {
        for s in 0..sector_count {
            dsu.union(s, p.apply(s));
        }
    }
    let orbit_count = dsu.class_count();
    Ok(SectorAction {
        hyperplane: j,
        sector_count,
        group: closure.group,
        assignment: closure.perms,
        element_words,
        orbit_count,
        free: free_witness.is_none(),
        free_witness,
        window_exact,
    })
}

/// A specialness violation witness.
#[derive(Debug, Clone, Serialize)]
pub enum SpecialWitness {
    /// J and g·J are transverse or tangent (orbit-mate pair).
    OrbitPair {
        hyperplane: usize,
        translate: usize,
        transport: GenWord,
        transverse: bool,
    },
    /// J1 transverse to J2 while J1 tangent to a translate of J2.
    TransverseTangent {
        j1: usize,
        j2_transverse: usize,
        j2_tangent: usize,
    },
    /// 𝔖(J) fixes a sector: (rep hyperplane, element, sector).
    NonFreeSector {
        hyperplane: usize,
        element: usize,
        sector: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecialReport {
    pub hyperplane_special: bool,
    pub special: bool,
    pub witnesses: Vec<SpecialWitness>,
    pub window_exact: bool,
    pub scanned_hyperplanes: usize,
}

/// Scan for hyperplane-specialness violations within the window. Transverse
/// verdicts are genuine anywhere in the ball; tangency is only trusted when
/// the carriers meet at a certified vertex (see
/// [`HyperplaneSet::tangent_certified`]), so a pass means "no violation found
/// within the certified window".
pub fn check_hyperplane_special(
    graph: &QMGraph,
    hyps: &HyperplaneSet,
    orb: &OrbitPartition,
) -> SpecialReport {
    let mut witnesses = vec![];
    let n = hyps.len();
    // (a) A hyperplane and an orbit-mate must be neither transverse nor tangent.
    for j1 in 0..n {
        for j2 in j1 + 1..n {
            if orb.class_of[j1] != orb.class_of[j2] {
                continue;
            }
            let t = hyps.transverse(j1, j2).value;
            let tan = hyps.tangent_certified(graph, j1, j2);
            if t || tan {
                let mut transport = orb.transport_to_rep[j1].clone();
                transport.extend(gen_word_inverse(&orb.transport_to_rep[j2]));
                witnesses.push(SpecialWitness::OrbitPair {
                    hyperplane: j1,
                    translate: j2,
                    transport,
                    transverse: t,
                });
            }
        }
    }
    // (b) If J1 and J2 are transverse, J1 and g·J2 cannot be tangent.
    for j1 in 0..n {
        let transverse_classes: BTreeSet<usize> = (0..n)
            .filter(|&j2| j2 != j1 && hyps.transverse(j1, j2).value)
            .map(|j2| orb.class_of[j2])
            .collect();
        for j2t in 0..n {
            if j2t == j1 || !hyps.tangent_certified(graph, j1, j2t) {
                continue;
            }
            if transverse_classes.contains(&orb.class_of[j2t]) {
                let j2 = (0..n)
                    .find(|&x| {
                        x != j1
                            && orb.class_of[x] == orb.class_of[j2t]
                            && hyps.transverse(j1, x).value
                    })
                    .unwrap();
                witnesses.push(SpecialWitness::TransverseTangent {
                    j1,
                    j2_transverse: j2,
                    j2_tangent: j2t,
                });
            }
        }
    }
    let ok = witnesses.is_empty();
    SpecialReport {
        hyperplane_special: ok,
        special: ok,
        witnesses,
        window_exact: orb.window_exact,
        scanned_hyperplanes: n,
    }
}

/// Full specialness: hyperplane-special plus free sector actions on every
/// orbit representative.
pub fn check_special(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    bound: usize,
    budget: &Budget,
) -> Result<SpecialReport> {
    let orb = orbits(act, OrbitObjects::Hyperplanes(hyps));
    let mut report = check_hyperplane_special(act.graph(), hyps, &orb);
    for &rep in &orb.reps {
        let sa = sector_action(act, hyps, rep, bound, budget)?;
        if let Some((element, sector)) = sa.free_witness {
            report.special = false;
            report.witnesses.push(SpecialWitness::NonFreeSector {
                hyperplane: rep,
                element,
                sector,
            });
        }
    }
    report.special = report.special && report.hyperplane_special;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct RotativeReport {
    pub rotative: bool,
    pub window_exact: bool,
    /// The collection is invariant under all generators within the window.
    /// Informational: the fundamental-domain argument needs only the per-J
    /// conditions, and tangent collections of proper subgraphs are invariant
    /// only under the subgroup stabilising the subgraph.
    pub invariant_under_action: bool,
    pub failure: Option<String>,
}

/// Transitive and free rotative-stabiliser actions for every J in `jays`.
pub fn check_rotative(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    jays: &[usize],
    bound: usize,
    budget: &Budget,
) -> Result<RotativeReport> {
    let jay_set: BTreeSet<usize> = jays.iter().copied().collect();
    let mut window_exact = true;
    let mut invariant_under_action = true;
    for &j in jays {
        for gi in 0..act.generators.len() {
            for sign in [1i32, -1] {
                match act.map_hyperplane(hyps, sign * (gi as i32 + 1), j) {
                    Some(img) => {
                        if !jay_set.contains(&img) {
                            invariant_under_action = false;
                        }
                    }
                    None => window_exact = false,
                }
            }
        }
    }
    for &j in jays {
        let rot = rotative_stabiliser(act, hyps, j, bound);
        let mut perms = vec![];
        for w in &rot {
            let map = act.gen_word_map(w);
            match sector_permutation(hyps, j, &map) {
                Some(p) => perms.push(p),
                None => window_exact = false,
            }
        }
        let k = hyps.hyperplanes[j].sectors.len();
        if perms.is_empty() {
            perms.push(Permutation::identity(k));
        }
        let closure = permutation_image(&perms, budget.closure)?;
        let mut dsu = Dsu::new(k);
        for p in &closure.perms {
            for s in 0..k {
                dsu.union(s, p.apply(s));
            }
        }
        if dsu.class_count() != 1 {
            return Ok(RotativeReport {
                rotative: false,
                window_exact,
                invariant_under_action,
                failure: Some(format!("rotative stabiliser of {j} not transitive on sectors")),
            });
        }
        for (ei, p) in closure.perms.iter().enumerate().skip(1) {
            if (0..k).any(|s| p.apply(s) == s) {
                return Ok(RotativeReport {
                    rotative: false,
                    window_exact,
                    invariant_under_action,
                    failure: Some(format!("rotative stabiliser of {j} not free (element {ei})")),
                });
            }
        }
    }
    Ok(RotativeReport {
        rotative: true,
        window_exact,
        invariant_under_action,
        failure: None,
    })
}

/// No J1 in the collection separates `x0` from another J2: the x0-side sector
/// of J1 must meet N(J2).
pub fn is_peripheral(
    hyps: &HyperplaneSet,
    x0: usize,
    jays: &[usize],
) -> (bool, Option<(usize, usize)>) {
    for &j1 in jays {
        for &j2 in jays {
            if j1 == j2 {
                continue;
            }
            let s = hyps.sector_of[j1][x0];
            let meets = hyps.hyperplanes[j2]
                .carrier
                .iter()
                .any(|&v| hyps.sector_of[j1][v] == s);
            if !meets {
                return (false, Some((j1, j2)));
            }
        }
    }
    (true, None)
}

#[derive(Debug, Clone, Serialize)]
pub struct PeelStep {
    pub from: usize,
    pub hyperplane: usize,
    pub word: GenWord,
    pub to: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FdReport {
    pub y_size: usize,
    pub peeled: usize,
    pub peel_log: Vec<Vec<PeelStep>>,
    /// Vertices whose peeling left the window (neither success nor failure).
    pub window_blocked: usize,
    /// (word, y, image): a non-trivial R-word returning a Y-vertex to Y.
    pub return_violations: Vec<(GenWord, usize, usize)>,
    /// Certified vertices whose entering edge was not dual to a J in the
    /// collection.
    pub foreign_entries: Vec<usize>,
    pub pass: bool,
}

/// Verify that Y = ∩ { x0-side sectors of J, J in jays } is a fundamental
/// domain for the group generated by the rotative stabilisers, within the
/// window: (a) peel every certified vertex into Y, logging the moves, and
/// (b) no non-trivial product of at most `len_bound` rotative generators
/// returns a Y-vertex to a different Y-vertex.
pub fn fundamental_domain_check(
    act: &GroupAction,
    hyps: &HyperplaneSet,
    x0: usize,
    jays: &[usize],
    stab_bound: usize,
    len_bound: usize,
    budget: &Budget,
) -> Result<FdReport> {
    let graph = act.graph();
    let rot_report = check_rotative(act, hyps, jays, stab_bound, budget)?;
    if !rot_report.rotative {
        return Err(Error::PreconditionFailed(format!(
            "action is not rotative on the collection: {}",
            rot_report.failure.unwrap_or_default()
        )));
    }
    let (periph, pw) = is_peripheral(hyps, x0, jays);
    if !periph {
        return Err(Error::PreconditionFailed(format!(
            "collection is not x0-peripheral: witness {pw:?}"
        )));
    }
    // Trivial vertex stabilisers within the window.
    for (w, map) in windowed_products(act, len_bound.min(4)).into_iter().skip(1) {
        let nontrivial = map
            .iter()
            .enumerate()
            .any(|(v, &mv)| mv.is_some_and(|m| m != v));
        if !nontrivial {
            continue;
        }
        if let Some((v, _)) = map
            .iter()
            .enumerate()
            .find(|(v, &mv)| graph.certified(*v) && mv == Some(*v))
        {
            return Err(Error::PreconditionFailed(format!(
                "vertex stabiliser not trivial: word {w:?} fixes vertex {v}"
            )));
        }
    }

    let y: BTreeSet<usize> = (0..graph.vertex_count())
        .filter(|&v| jays.iter().all(|&j| hyps.sector_of[j][v] == hyps.sector_of[j][x0]))
        .collect();

    // Rotative generators and their sector permutations, per J.
    let mut rot_gens: HashMap<usize, Vec<(GenWord, Permutation)>> = HashMap::new();
    for &j in jays {
        let mut list = vec![];
        for w in rotative_stabiliser(act, hyps, j, stab_bound) {
            let map = act.gen_word_map(&w);
            if let Some(p) = sector_permutation(hyps, j, &map) {
                list.push((w, p));
            }
        }
        rot_gens.insert(j, list);
    }

    let mut peel_log = vec![];
    let mut peeled = 0usize;
    let mut window_blocked = 0usize;
    let mut foreign_entries = vec![];
    for v in 0..graph.vertex_count() {
        if !graph.certified(v) || y.contains(&v) {
            continue;
        }
        let mut steps = vec![];
        let mut cur = v;
        let mut guard = graph.radius() as usize * 2 + 4;
        let ok = loop {
            if y.contains(&cur) {
                break true;
            }
            if guard == 0 {
                break false;
            }
            guard -= 1;
            let d = graph.bfs_from(cur);
            let (_, target) = y.iter().map(|&t| (d[t], t)).min().expect("Y contains x0");
            let path = graph.geodesic(cur, target);
            let (p_last, q) = (path[path.len() - 2], path[path.len() - 1]);
            let j = hyps.of_edge[graph.edge_id(p_last, q).unwrap()];
            if !jays.contains(&j) {
                foreign_entries.push(v);
                break false;
            }
            let want = hyps.sector_of[j][x0];
            let have = hyps.sector_of[j][cur];
            match closure_search(&rot_gens[&j], have, want) {
                Some(word) => match act.apply_gen_word(&word, cur) {
                    Some(next) => {
                        steps.push(PeelStep {
                            from: cur,
                            hyperplane: j,
                            word,
                            to: next,
                        });
                        cur = next;
                    }
                    None => {
                        window_blocked += 1;
                        break false;
                    }
                },
                None => {
                    window_blocked += 1;
                    break false;
                }
            }
        };
        if ok {
            peeled += 1;
            peel_log.push(steps);
        }
    }

    // (b) R-words of bounded length do not move Y into itself non-trivially.
    let pooled: Vec<GenWord> = jays
        .iter()
        .flat_map(|j| rot_gens[j].iter().map(|(w, _)| w.clone()))
        .collect();
    let mut return_violations = vec![];
    let identity_map: Vec<Option<usize>> = (0..graph.vertex_count()).map(Some).collect();
    let mut seen_maps: BTreeSet<Vec<Option<usize>>> = BTreeSet::new();
    seen_maps.insert(identity_map.clone());
    let mut frontier: Vec<(GenWord, Vec<Option<usize>>)> = vec![(GenWord::new(), identity_map)];
    for _ in 0..len_bound {
        let mut next_frontier = vec![];
        for (word, map) in &frontier {
            for g in &pooled {
                let mut w = word.clone();
                w.extend(g.iter().copied());
                let m: Vec<Option<usize>> = map
                    .iter()
                    .map(|&mv| mv.and_then(|v| act.apply_gen_word(g, v)))
                    .collect();
                if seen_maps.insert(m.clone()) {
                    next_frontier.push((w, m));
                }
            }
        }
        for (word, map) in &next_frontier {
            let nontrivial = map
                .iter()
                .enumerate()
                .any(|(v, &mv)| mv.is_some_and(|m| m != v));
            if !nontrivial {
                continue;
            }
            for &yv in &y {
                if let Some(img) = map[yv] {
                    if img != yv && y.contains(&img) {
                        return_violations.push((word.clone(), yv, img));
                    }
                }
            }
        }
        frontier = next_frontier;
    }

    let pass = foreign_entries.is_empty() && return_violations.is_empty();
    Ok(FdReport {
        y_size: y.len(),
        peeled,
        peel_log,
        window_blocked,
        return_violations,
        foreign_entries,
        pass,
    })
}

/// Breadth-first search in the sector-permutation closure for a word sending
/// sector `from` to sector `to`.
fn closure_search(gens: &[(GenWord, Permutation)], from: usize, to: usize) -> Option<GenWord> {
    if from == to {
        return Some(GenWord::new());
    }
    let degree = gens.first().map(|(_, p)| p.degree())?;
    let mut seen = vec![false; degree];
    seen[from] = true;
    let mut queue = vec![(from, GenWord::new())];
    let mut qi = 0;
    while qi < queue.len() {
        let (s, word) = queue[qi].clone();
        qi += 1;
        for (w, p) in gens {
            let ns = p.apply(s);
            let mut full = word.clone();
            full.extend(w.iter().copied());
            if ns == to {
                return Some(full);
            }
            if !seen[ns] {
                seen[ns] = true;
                queue.push((ns, full));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::qmgraph::{cayley_ball, hyperplanes};
    use crate::words::{parse_word, reduce, GPPresentation};

    fn p4_z2() -> GPPresentation {
        GPPresentation::new(
            "P4_Z2",
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[(0, 1), (1, 2), (2, 3)],
            vec![FiniteGroup::cyclic(2); 4],
        )
        .unwrap()
    }

    fn single_z3() -> GPPresentation {
        GPPresentation::new("Z3", vec!["g".into()], &[], vec![FiniteGroup::cyclic(3)]).unwrap()
    }

    #[test]
    fn full_action_vertex_orbit() {
        let p = p4_z2();
        let ball = cayley_ball(&p, 3, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        assert!(act.is_full_cayley());
        let orb = orbits(&act, OrbitObjects::Vertices);
        assert_eq!(orb.classes.len(), 1, "left multiplication is transitive");
    }

    #[test]
    fn trivial_action_orbits() {
        let p = single_z3();
        let ball = cayley_ball(&p, 1, &Budget::default()).unwrap();
        let act = action_from_subgroup(ball, vec![]);
        let orb = orbits(&act, OrbitObjects::Vertices);
        assert_eq!(orb.classes.len(), 3);
    }

    #[test]
    fn cyclic_subgroup_action_order() {
        // gens = {ab} in RACG(P4): a, b commute, so ab has order 2.
        let p = p4_z2();
        let ball = cayley_ball(&p, 3, &Budget::default()).unwrap();
        let w = reduce(&p, &parse_word(&p, "a:1 b:1").unwrap());
        let act = action_from_subgroup(ball, vec![w]);
        assert!(!act.is_full_cayley());
        let sq = act.gen_word_element(&vec![1, 1]).unwrap();
        assert!(sq.is_empty(), "(ab)^2 = 1");
    }

    #[test]
    fn hyperplane_orbits_racg_p4() {
        let p = p4_z2();
        let ball = cayley_ball(&p, 3, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        let orb = orbits(&act, OrbitObjects::Hyperplanes(&hyps));
        // One orbit per generator letter.
        assert_eq!(orb.classes.len(), 4);
    }

    #[test]
    fn stabiliser_racg_p4() {
        let p = p4_z2();
        let ball = cayley_ball(&p, 4, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        let va = act
            .cayley()
            .unwrap()
            .vertex_of(&reduce(&p, &parse_word(&p, "a:1").unwrap()))
            .unwrap();
        let j = hyps.dual_to(act.graph(), 0, va).unwrap();
        let stab = stabiliser(&act, &hyps, j, 3);
        // Algebraic path: the star(a) = {a, b} syllables.
        let elements: BTreeSet<ReducedWord> =
            stab.iter().map(|w| act.gen_word_element(w).unwrap()).collect();
        let a = reduce(&p, &parse_word(&p, "a:1").unwrap());
        let b = reduce(&p, &parse_word(&p, "b:1").unwrap());
        assert!(elements.contains(&a));
        assert!(elements.contains(&b));
        assert_eq!(elements.len(), 2);
        // Windowed agreement: short stabilising products lie in <star(a)>.
        for (w, _) in windowed_products(&act, 2).into_iter().skip(1) {
            let mut exact = true;
            if map_hyperplane_by_word(&act, &hyps, &w, j, &mut exact) == Some(j) {
                let elt = act.gen_word_element(&w).unwrap();
                assert!(crate::words::parabolic_membership(&p, &elt, &p.star(0)));
            }
        }
        // Hyperplane dual to εG_b has stab gens {a, b, c} = star(b).
        let vb = act
            .cayley()
            .unwrap()
            .vertex_of(&reduce(&p, &parse_word(&p, "b:1").unwrap()))
            .unwrap();
        let jb = hyps.dual_to(act.graph(), 0, vb).unwrap();
        let stab_b: BTreeSet<ReducedWord> = stabiliser(&act, &hyps, jb, 3)
            .iter()
            .map(|w| act.gen_word_element(w).unwrap())
            .collect();
        assert_eq!(stab_b.len(), 3);
    }

    #[test]
    fn sector_action_racg_p4() {
        let p = p4_z2();
        let ball = cayley_ball(&p, 4, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        let va = act
            .cayley()
            .unwrap()
            .vertex_of(&reduce(&p, &parse_word(&p, "a:1").unwrap()))
            .unwrap();
        let j = hyps.dual_to(act.graph(), 0, va).unwrap();
        let sa = sector_action(&act, &hyps, j, 3, &Budget::default()).unwrap();
        assert_eq!(sa.group.order(), 2, "S(J) = Z2");
        assert!(sa.free);
        assert_eq!(sa.orbit_count, 1, "transitive on 2 sectors");
    }

    #[test]
    fn sector_action_z3() {
        let p = single_z3();
        let ball = cayley_ball(&p, 2, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        let sa = sector_action(&act, &hyps, 0, 2, &Budget::default()).unwrap();
        assert_eq!(sa.group.order(), 3);
        assert!(sa.free);
        assert_eq!(sa.orbit_count, 1);
        assert_eq!(sa.sector_count, 3);
    }

    #[test]
    fn trivial_group_sector_action() {
        let p = single_z3();
        let ball = cayley_ball(&p, 1, &Budget::default()).unwrap();
        let act = action_from_subgroup(ball, vec![]);
        let hyps = hyperplanes(act.graph());
        let sa = sector_action(&act, &hyps, 0, 2, &Budget::default()).unwrap();
        assert_eq!(sa.group.order(), 1);
        assert_eq!(sa.orbit_count, sa.sector_count);
    }

    #[test]
    fn full_racg_p4_is_special_in_window() {
        let p = p4_z2();
        let ball = cayley_ball(&p, 4, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        let report = check_special(&act, &hyps, 3, &Budget::default()).unwrap();
        assert!(report.hyperplane_special, "witnesses: {:?}", report.witnesses);
        assert!(report.special);
    }

    #[test]
    fn trivial_action_is_special() {
        let p = single_z3();
        let ball = cayley_ball(&p, 1, &Budget::default()).unwrap();
        let act = action_from_subgroup(ball, vec![]);
        let hyps = hyperplanes(act.graph());
        let report = check_special(&act, &hyps, 2, &Budget::default()).unwrap();
        assert!(report.special);
    }

    #[test]
    fn rotative_and_fundamental_domain_z3() {
        let p = single_z3();
        let ball = cayley_ball(&p, 1, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        assert_eq!(hyps.len(), 1);
        let rot = rotative_stabiliser(&act, &hyps, 0, 2);
        assert_eq!(rot.len(), 2, "gG_u g^-1 minus identity");
        let rr = check_rotative(&act, &hyps, &[0], 2, &Budget::default()).unwrap();
        assert!(rr.rotative);
        let (periph, _) = is_peripheral(&hyps, 0, &[0]);
        assert!(periph);
        let fd = fundamental_domain_check(&act, &hyps, 0, &[0], 2, 4, &Budget::default()).unwrap();
        assert_eq!(fd.y_size, 1, "Y = {{1}}");
        assert!(fd.pass, "violations: {:?}", fd.return_violations);
        assert_eq!(fd.peeled, 2, "both non-identity vertices peel in one step");
        assert!(fd.peel_log.iter().all(|steps| steps.len() == 1));
    }

    #[test]
    fn empty_collection_fundamental_domain() {
        let p = single_z3();
        let ball = cayley_ball(&p, 1, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        let fd = fundamental_domain_check(&act, &hyps, 0, &[], 2, 4, &Budget::default()).unwrap();
        assert_eq!(fd.y_size, 3, "Y is the whole ball");
        assert!(fd.pass);
    }

    #[test]
    fn edge_swap_action_self_tangent_witness() {
        use crate::qmgraph::QMGraph;
        // Z2 swapping the two edges of a path of length 2: the two tangent
        // hyperplanes form one orbit, a specialness violation.
        let g = QMGraph::from_edges(
            vec!["x".into(), "m".into(), "y".into()],
            &[(0, 1), (1, 2)],
            1,
            0,
        )
        .unwrap();
        let swap = Generator {
            label: "swap".into(),
            fwd: vec![Some(2), Some(1), Some(0)],
            inv: vec![Some(2), Some(1), Some(0)],
        };
        let act = action_from_maps(g, vec![swap]).unwrap();
        let hyps = hyperplanes(act.graph());
        let report = check_special(&act, &hyps, 2, &Budget::default()).unwrap();
        assert!(!report.hyperplane_special);
        assert!(matches!(
            report.witnesses.first(),
            Some(SpecialWitness::OrbitPair { transverse: false, .. })
        ));
    }

    #[test]
    fn clique_stabiliser_image_surjective() {
        // For graph products, stab(C) surjects onto S(J): the sector action
        // closure has exactly |G_u| elements, all realised by G_u syllables.
        let p = p4_z2();
        let ball = cayley_ball(&p, 4, &Budget::default()).unwrap();
        let act = full_cayley_action(ball);
        let hyps = hyperplanes(act.graph());
        let orb = orbits(&act, OrbitObjects::Hyperplanes(&hyps));
        for &rep in &orb.reps {
            let sa = sector_action(&act, &hyps, rep, 3, &Budget::default()).unwrap();
            let &e = hyps.hyperplanes[rep].edges.iter().next().unwrap();
            let (u, v) = act.graph().edge(e);
            let letter = act.cayley().unwrap().edge_gamma_vertex(u, v);
            assert_eq!(
                sa.group.order(),
                p.group(letter).order(),
                "index 1: the clique stabiliser fills S(J)"
            );
        }
    }

    #[test]
    fn peripheral_examples() {
        use crate::qmgraph::QMGraph;
        // Two tangent hyperplanes at the basepoint of a path: peripheral.
        let g = QMGraph::from_edges(
            vec!["x".into(), "m".into(), "y".into()],
            &[(0, 1), (1, 2)],
            1,
            0,
        )
        .unwrap();
        let hyps = hyperplanes(&g);
        let (ok, _) = is_peripheral(&hyps, 1, &[0, 1]);
        assert!(ok, "tangent at the basepoint");
        // Nested along a geodesic from an endpoint: not peripheral.
        let (ok, w) = is_peripheral(&hyps, 0, &[0, 1]);
        assert!(!ok);
        assert!(w.is_some());
    }
}
