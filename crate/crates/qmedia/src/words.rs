//! Graph-product word calculus: elementary moves, graphically reduced words,
//! heap normal forms, tails, parabolic membership.
//!
//! A word is a sequence of syllables; each syllable is a non-identity element
//! of one vertex group of a [`GPPresentation`]. Reduction pushes syllables one
//! by one (cancellation/amalgamation through commuting interveners) and then
//! canonicalises to the lexicographically least member of the shuffle class,
//! i.e. the heap normal form.

use crate::groups::FiniteGroup;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A graph-product presentation: a simplicial graph plus one finite group of
/// order >= 2 per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GPPresentation {
    name: String,
    vertex_names: Vec<String>,
    adjacency: Vec<BTreeSet<usize>>,
    groups: Vec<FiniteGroup>,
}

impl GPPresentation {
    pub fn new(
        name: impl Into<String>,
        vertex_names: Vec<String>,
        edges: &[(usize, usize)],
        groups: Vec<FiniteGroup>,
    ) -> Result<GPPresentation> {
        let n = vertex_names.len();
        if groups.len() != n {
            return Err(Error::invalid("one group per vertex required"));
        }
        {
            let mut seen = BTreeSet::new();
            for v in &vertex_names {
                if !seen.insert(v.clone()) {
                    return Err(Error::invalid(format!("duplicate vertex name {v}")));
                }
            }
        }
        for g in &groups {
            if g.order() < 2 {
                return Err(Error::invalid("vertex groups must be non-trivial"));
            }
        }
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid("edge endpoint out of range"));
            }
            if u == v {
                return Err(Error::invalid("loops are not allowed"));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(GPPresentation {
            name: name.into(),
            vertex_names,
            adjacency,
            groups,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn group(&self, v: usize) -> &FiniteGroup {
        &self.groups[v]
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Neighbours of `v` in the presentation graph.
    pub fn link(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    /// `link(v)` together with `v` itself.
    pub fn star(&self, v: usize) -> BTreeSet<usize> {
        let mut s = self.adjacency[v].clone();
        s.insert(v);
        s
    }

    /// All syllables (v, e) with e non-identity, in canonical order.
    pub fn all_syllables(&self) -> Vec<Syllable> {
        let mut out = vec![];
        for v in 0..self.vertex_count() {
            for e in 1..self.groups[v].order() {
                out.push(Syllable { vertex: v, element: e });
            }
        }
        out
    }
}

/// A non-identity element of one vertex group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub vertex: usize,
    pub element: usize,
}

impl Syllable {
    pub fn validate(&self, p: &GPPresentation) -> Result<()> {
        if self.vertex >= p.vertex_count() {
            return Err(Error::invalid(format!("syllable vertex {} out of range", self.vertex)));
        }
        let order = p.group(self.vertex).order();
        if self.element == 0 || self.element >= order {
            return Err(Error::invalid(format!(
                "syllable element {} invalid for group of order {order}",
                self.element
            )));
        }
        Ok(())
    }
}

/// An arbitrary (possibly unreduced) word.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GPWord(pub Vec<Syllable>);

impl GPWord {
    pub fn validate(&self, p: &GPPresentation) -> Result<()> {
        self.0.iter().try_for_each(|s| s.validate(p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A graphically reduced word in heap (lexicographically least) normal form.
///
/// Constructed only by [`reduce`] and friends, so equality of `ReducedWord`s
/// is equality in the graph product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ReducedWord(Vec<Syllable>);

impl ReducedWord {
    pub fn empty() -> ReducedWord {
        ReducedWord(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_word(&self) -> GPWord {
        GPWord(self.0.clone())
    }

    /// Display against a presentation, e.g. `a:1 c:2`.
    pub fn display(&self, p: &GPPresentation) -> String {
        if self.0.is_empty() {
            return "ε".into();
        }
        self.0
            .iter()
            .map(|s| format!("{}:{}", p.vertex_name(s.vertex), s.element))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|s| format!("{}:{}", s.vertex, s.element)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Right-multiply the reduced buffer by one syllable, preserving reducedness.
fn push_syllable(p: &GPPresentation, buf: &mut Vec<Syllable>, s: Syllable) {
    if s.element == 0 {
        return;
    }
    for j in (0..buf.len()).rev() {
        if buf[j].vertex == s.vertex {
            let prod = p.group(s.vertex).mul(buf[j].element, s.element);
            if prod == 0 {
                buf.remove(j);
            } else {
                buf[j].element = prod;
            }
            return;
        }
        if !p.adjacent(buf[j].vertex, s.vertex) {
            break;
        }
    }
    buf.push(s);
}

/// Heap normal form: greedily emit, among syllables movable to the front, the
/// least (vertex, element).
fn canonicalize(p: &GPPresentation, mut syls: Vec<Syllable>) -> Vec<Syllable> {
    let mut out = Vec::with_capacity(syls.len());
    while !syls.is_empty() {
        let mut best: Option<(Syllable, usize)> = None;
        'cand: for i in 0..syls.len() {
            for j in 0..i {
                if !p.adjacent(syls[j].vertex, syls[i].vertex) {
                    continue 'cand;
                }
            }
            if best.is_none_or(|(b, _)| syls[i] < b) {
                best = Some((syls[i], i));
            }
        }
        let (s, i) = best.expect("non-empty word has a movable syllable");
        out.push(s);
        syls.remove(i);
    }
    out
}

/// Canonical graphically reduced form of `w`.
pub fn reduce(p: &GPPresentation, w: &GPWord) -> ReducedWord {
    let mut buf = Vec::with_capacity(w.len());
    for &s in &w.0 {
        push_syllable(p, &mut buf, s);
    }
    ReducedWord(canonicalize(p, buf))
}

/// Product of two reduced words, as a reduced word.
pub fn multiply(p: &GPPresentation, u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
    let mut buf = u.0.clone();
    for &s in &v.0 {
        push_syllable(p, &mut buf, s);
    }
    ReducedWord(canonicalize(p, buf))
}

/// Inverse of a reduced word.
pub fn inverse(p: &GPPresentation, w: &ReducedWord) -> ReducedWord {
    let syls: Vec<Syllable> = w
        .0
        .iter()
        .rev()
        .map(|s| Syllable {
            vertex: s.vertex,
            element: p.group(s.vertex).inv(s.element),
        })
        .collect();
    ReducedWord(canonicalize(p, syls))
}

/// Build a reduced word from raw syllables (they are multiplied in order).
pub fn word_from_syllables(p: &GPPresentation, syls: &[Syllable]) -> ReducedWord {
    reduce(p, &GPWord(syls.to_vec()))
}

/// One elementary move on a word, as reported by [`is_graphically_reduced`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    /// Swap syllables at positions (i, i+1) (they commute).
    Shuffle(usize),
    /// Merge syllables at positions (i, i+1) (same vertex).
    Amalgamate(usize),
    /// Delete the identity syllable at position i.
    Cancel(usize),
}

/// Reducedness test with an explicit shortening move sequence on failure.
pub fn is_graphically_reduced(p: &GPPresentation, w: &GPWord) -> (bool, Option<Vec<Move>>) {
    let r = reduce(p, w);
    if r.len() == w.len() {
        return (true, None);
    }
    // Find a meeting pair (i, j): same vertex, interveners all adjacent to it.
    let syls = &w.0;
    for i in 0..syls.len() {
        if syls[i].element == 0 {
            return (false, Some(vec![Move::Cancel(i)]));
        }
        'j: for j in i + 1..syls.len() {
            if syls[j].vertex == syls[i].vertex {
                for k in i + 1..j {
                    if !p.adjacent(syls[k].vertex, syls[i].vertex) {
                        continue 'j;
                    }
                }
                let mut moves: Vec<Move> = (i..j - 1).map(Move::Shuffle).collect();
                moves.push(Move::Amalgamate(j - 1));
                if p.group(syls[i].vertex).mul(syls[i].element, syls[j].element) == 0 {
                    moves.push(Move::Cancel(j - 1));
                }
                return (false, Some(moves));
            }
            if !p.adjacent(syls[j].vertex, syls[i].vertex) {
                break;
            }
        }
    }
    // reduce() shortened the word but no direct pair found: only possible for
    // words containing identity syllables, handled above.
    (false, None)
}

/// Apply one move to a raw syllable sequence (identity elements allowed
/// mid-sequence). Used to validate reported move sequences.
pub fn apply_move(p: &GPPresentation, syls: &mut Vec<Syllable>, m: Move) -> Result<()> {
    match m {
        Move::Shuffle(i) => {
            if i + 1 >= syls.len() || !p.adjacent(syls[i].vertex, syls[i + 1].vertex) {
                return Err(Error::invalid("invalid shuffle"));
            }
            syls.swap(i, i + 1);
        }
        Move::Amalgamate(i) => {
            if i + 1 >= syls.len() || syls[i].vertex != syls[i + 1].vertex {
                return Err(Error::invalid("invalid amalgamation"));
            }
            let v = syls[i].vertex;
            let prod = p.group(v).mul(syls[i].element, syls[i + 1].element);
            syls[i].element = prod;
            syls.remove(i + 1);
        }
        Move::Cancel(i) => {
            if i >= syls.len() || syls[i].element != 0 {
                return Err(Error::invalid("invalid cancellation"));
            }
            syls.remove(i);
        }
    }
    Ok(())
}

/// Syllables reachable as the final syllable of `w` by shufflings.
pub fn tail(p: &GPPresentation, w: &ReducedWord) -> BTreeSet<Syllable> {
    let syls = &w.0;
    let mut out = BTreeSet::new();
    'pos: for i in 0..syls.len() {
        for j in i + 1..syls.len() {
            if !p.adjacent(syls[j].vertex, syls[i].vertex) {
                continue 'pos;
            }
        }
        out.insert(syls[i]);
    }
    out
}

/// Syllables reachable as the first syllable of `w` by shufflings.
pub fn head(p: &GPPresentation, w: &ReducedWord) -> BTreeSet<Syllable> {
    let syls = &w.0;
    let mut out = BTreeSet::new();
    'pos: for i in 0..syls.len() {
        for j in 0..i {
            if !p.adjacent(syls[j].vertex, syls[i].vertex) {
                continue 'pos;
            }
        }
        out.insert(syls[i]);
    }
    out
}

/// True iff every syllable vertex of `w` lies in `s` (membership in the
/// parabolic subgroup generated by the vertex groups of `s`; correct for
/// reduced words).
pub fn parabolic_membership(_p: &GPPresentation, w: &ReducedWord, s: &BTreeSet<usize>) -> bool {
    w.0.iter().all(|syl| s.contains(&syl.vertex))
}

/// Decompose `w = t * s` with `s` in the parabolic subgroup over `allowed`
/// and no tail syllable of `t` in `allowed`. This is the transversal
/// decomposition used for carriers and RAGG coset splitting.
pub fn split_tail_parabolic(
    p: &GPPresentation,
    w: &ReducedWord,
    allowed: &BTreeSet<usize>,
) -> (ReducedWord, ReducedWord) {
    let mut t = w.0.clone();
    let mut s_rev: Vec<Syllable> = vec![];
    loop {
        let mut stripped = false;
        // Strip the least tail syllable in `allowed`; any order yields the
        // same decomposition, this one is deterministic.
        let mut candidate: Option<usize> = None;
        'pos: for i in 0..t.len() {
            if !allowed.contains(&t[i].vertex) {
                continue;
            }
            for j in i + 1..t.len() {
                if !p.adjacent(t[j].vertex, t[i].vertex) {
                    continue 'pos;
                }
            }
            if candidate.is_none_or(|c| t[i] < t[c]) {
                candidate = Some(i);
            }
        }
        if let Some(i) = candidate {
            s_rev.push(t.remove(i));
            stripped = true;
        }
        if !stripped {
            break;
        }
    }
    s_rev.reverse();
    (
        ReducedWord(canonicalize(p, t)),
        ReducedWord(canonicalize(p, s_rev)),
    )
}

/// Parse a word literal like `a:1 b:1 a:1` against a presentation. Empty or
/// whitespace-only input is the identity.
pub fn parse_word(p: &GPPresentation, text: &str) -> Result<GPWord> {
    let mut syls = vec![];
    for token in text.split_whitespace() {
        let (name, elt) = token
            .rsplit_once(':')
            .ok_or_else(|| Error::invalid(format!("bad syllable token `{token}`")))?;
        let vertex = p
            .vertex_id(name)
            .ok_or_else(|| Error::invalid(format!("unknown vertex `{name}`")))?;
        let element: usize = elt
            .parse()
            .map_err(|_| Error::invalid(format!("bad element index in `{token}`")))?;
        let s = Syllable { vertex, element };
        s.validate(p)?;
        syls.push(s);
    }
    Ok(GPWord(syls))
}
