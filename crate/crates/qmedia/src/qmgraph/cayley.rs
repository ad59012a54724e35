//! Cayley balls of graph products and their exact algebraic hyperplane
//! descriptors.
//!
//! Vertices are canonical reduced words of length at most `r`; two vertices
//! are adjacent iff they differ by one syllable. When the ball closes under
//! multiplication (finite graph product) the graph is the whole Cayley graph
//! and carries certified margin 0, otherwise margin 2.

use super::{CliqueDesc, Hyperplane, QMGraph};
use crate::budget::Budget;
use crate::words::{
    head, inverse, multiply, parabolic_membership, split_tail_parabolic, word_from_syllables,
    GPPresentation, ReducedWord, Syllable,
};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// A Cayley ball together with its word labels.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    pub graph: QMGraph,
    pub presentation: GPPresentation,
    pub words: Vec<ReducedWord>,
    index: HashMap<ReducedWord, usize>,
    /// The ball closed under multiplication (whole finite Cayley graph).
    pub complete: bool,
}

impl CayleyBall {
    pub fn vertex_of(&self, w: &ReducedWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn word_of(&self, v: usize) -> &ReducedWord {
        &self.words[v]
    }

    /// The single syllable s with label(u) * s = label(v).
    pub fn edge_syllable(&self, u: usize, v: usize) -> Syllable {
        let p = &self.presentation;
        let diff = multiply(p, &inverse(p, &self.words[u]), &self.words[v]);
        debug_assert_eq!(diff.len(), 1, "edge must differ by one syllable");
        diff.syllables()[0]
    }

    /// Γ-vertex labelling the clique through edge (u, v).
    pub fn edge_gamma_vertex(&self, u: usize, v: usize) -> usize {
        self.edge_syllable(u, v).vertex
    }

    /// Maximal cliques with their Γ-vertex labels.
    pub fn labelled_cliques(&self) -> Vec<CliqueDesc> {
        let mut cs = super::cliques(&self.graph);
        for c in &mut cs {
            let mut it = c.vertices.iter();
            if let (Some(&a), Some(&b)) = (it.next(), it.next()) {
                let gv = self.edge_gamma_vertex(a, b);
                c.label = Some(self.presentation.vertex_name(gv).to_string());
            }
        }
        cs
    }

    /// Left multiplication by `w` as a partial vertex map (None where the
    /// image leaves the ball).
    pub fn left_mul_map(&self, w: &ReducedWord) -> Vec<Option<usize>> {
        (0..self.words.len())
            .map(|v| {
                let img = multiply(&self.presentation, w, &self.words[v]);
                self.vertex_of(&img)
            })
            .collect()
    }
}

/// Build the Cayley ball of radius `r`.
pub fn cayley_ball(p: &GPPresentation, r: u32, budget: &Budget) -> Result<CayleyBall> {
    let syllables = p.all_syllables();
    let mut words: Vec<ReducedWord> = vec![ReducedWord::empty()];
    let mut index: HashMap<ReducedWord, usize> = HashMap::new();
    index.insert(ReducedWord::empty(), 0);
    let mut layer_start = 0;
    for _len in 1..=r {
        let layer_end = words.len();
        for wi in layer_start..layer_end {
            let base = words[wi].clone();
            for &s in &syllables {
                let next = multiply(p, &base, &word_from_syllables(p, &[s]));
                if next.len() as u32 > r {
                    continue;
                }
                if !index.contains_key(&next) {
                    if words.len() >= budget.ball_vertices {
                        return Err(Error::BudgetExceeded {
                            projected: words.len() + 1,
                            budget: budget.ball_vertices,
                        });
                    }
                    index.insert(next.clone(), words.len());
                    words.push(next);
                }
            }
        }
        layer_start = layer_end;
        if layer_start == words.len() {
            break; // no growth: the group is exhausted
        }
    }
    // Edges and completeness.
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut complete = true;
    for (vi, w) in words.iter().enumerate() {
        for &s in &syllables {
            let next = multiply(p, w, &word_from_syllables(p, &[s]));
            match index.get(&next) {
                Some(&ui) => {
                    let key = if vi < ui { (vi, ui) } else { (ui, vi) };
                    edges.insert(key);
                }
                None => complete = false,
            }
        }
    }
    let labels: Vec<String> = words.iter().map(|w| w.display(p)).collect();
    let edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    let interior = if complete { 0 } else { 2 };
    let graph = QMGraph::from_edges(labels, &edge_list, 0, interior)?;
    Ok(CayleyBall {
        graph,
        presentation: p.clone(),
        words,
        index,
        complete,
    })
}

/// Exact algebraic descriptor of the hyperplane dual to the clique g·G_u.
///
/// Canonical form: `base` is the minimal-length representative of the carrier
/// coset g·<star(u)> (strip all tail syllables in star(u)), so two cliques
/// dual to the same hyperplane produce equal descriptors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicHyperplane {
    pub gamma_vertex: usize,
    pub base: ReducedWord,
}

pub fn algebraic_hyperplane(p: &GPPresentation, g: &ReducedWord, u: usize) -> AlgebraicHyperplane {
    let star = p.star(u);
    let (base, _) = split_tail_parabolic(p, g, &star);
    AlgebraicHyperplane { gamma_vertex: u, base }
}

impl AlgebraicHyperplane {
    /// w lies in the carrier coset base·<star(u)>.
    pub fn carrier_contains(&self, p: &GPPresentation, w: &ReducedWord) -> bool {
        let rel = multiply(p, &inverse(p, &self.base), w);
        parabolic_membership(p, &rel, &p.star(self.gamma_vertex))
    }

    /// Fiber of a carrier vertex: the G_u-coordinate h with
    /// w ∈ base·h·<link(u)>. None when w is outside the carrier.
    pub fn fiber_of(&self, p: &GPPresentation, w: &ReducedWord) -> Option<usize> {
        if !self.carrier_contains(p, w) {
            return None;
        }
        Some(self.sector_of(p, w))
    }

    /// Sector of an arbitrary vertex: the G_u-element h such that the gate of
    /// w in the clique base·G_u is base·h. Extracted as the u-syllable movable
    /// to the front of base⁻¹·w.
    pub fn sector_of(&self, p: &GPPresentation, w: &ReducedWord) -> usize {
        let rel = multiply(p, &inverse(p, &self.base), w);
        head(p, &rel)
            .into_iter()
            .find(|s| s.vertex == self.gamma_vertex)
            .map_or(0, |s| s.element)
    }

    /// Generators of stab(J) = base·(G_u × <link(u)>)·base⁻¹, as group
    /// elements: base · s · base⁻¹ for each star syllable s.
    pub fn stabiliser_generators(&self, p: &GPPresentation) -> Vec<ReducedWord> {
        let base_inv = inverse(p, &self.base);
        let mut out = vec![];
        for v in p.star(self.gamma_vertex) {
            for e in 1..p.group(v).order() {
                let s = word_from_syllables(p, &[Syllable { vertex: v, element: e }]);
                out.push(multiply(p, &multiply(p, &self.base, &s), &base_inv));
            }
        }
        out
    }

    /// Rotative stabiliser base·G_u·base⁻¹ generators.
    pub fn rotative_generators(&self, p: &GPPresentation) -> Vec<ReducedWord> {
        let base_inv = inverse(p, &self.base);
        (1..p.group(self.gamma_vertex).order())
            .map(|e| {
                let s = word_from_syllables(p, &[Syllable { vertex: self.gamma_vertex, element: e }]);
                multiply(p, &multiply(p, &self.base, &s), &base_inv)
            })
            .collect()
    }

    /// Agreement with a ball hyperplane on the certified region: carriers
    /// coincide and ball sectors refine algebraic sectors.
    pub fn matches_ball_hyperplane(
        &self,
        ball: &CayleyBall,
        hyp: &Hyperplane,
        sector_of: &[usize],
    ) -> bool {
        let p = &ball.presentation;
        let g = &ball.graph;
        for v in 0..g.vertex_count() {
            if !g.certified(v) {
                continue;
            }
            let in_alg = self.carrier_contains(p, ball.word_of(v));
            let in_ball = hyp.carrier.contains(&v);
            if in_alg != in_ball {
                return false;
            }
        }
        // Same algebraic sector <=> same ball sector, on certified vertices.
        let mut rep_of_sector: HashMap<usize, usize> = HashMap::new();
        for (v, &sec) in sector_of.iter().enumerate() {
            if !g.certified(v) {
                continue;
            }
            let alg = self.sector_of(p, ball.word_of(v));
            match rep_of_sector.get(&sec) {
                Some(&a) if a != alg => return false,
                Some(_) => {}
                None => {
                    if rep_of_sector.values().any(|&a| a == alg) {
                        return false; // two ball sectors with one algebraic label
                    }
                    rep_of_sector.insert(sec, alg);
                }
            }
        }
        true
    }
}
