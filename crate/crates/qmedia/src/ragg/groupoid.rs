//! Fundamental-groupoid normal forms.
//!
//! A normal word is g_1·e_1 ··· g_n·e_n·g_{n+1} where each g_i is a
//! transversal representative in G_{s(e_i)} (no tail syllable inside the
//! embedded edge product), the arrows form an oriented path, backtracks carry
//! a non-trivial middle, and g_{n+1} is arbitrary in the terminus group.
//! Normalisation pushes generators left to right through the defining
//! relation ι_e(g)·e = e·ι_{bar e}(g).

use super::RAGGSpec;
use crate::words::{
    inverse, multiply, reduce, split_tail_parabolic, word_from_syllables, GPWord, ReducedWord,
    Syllable,
};
use crate::{Error, Result};
use std::collections::BTreeSet;

/// A groupoid element in normal form, starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupoidElement {
    pub start: usize,
    /// (transversal representative, arrow) pairs.
    pub steps: Vec<(ReducedWord, usize)>,
    /// Final vertex-group element at the terminus.
    pub last: ReducedWord,
}

impl GroupoidElement {
    pub fn identity(vertex: usize) -> GroupoidElement {
        GroupoidElement {
            start: vertex,
            steps: vec![],
            last: ReducedWord::empty(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty() && self.last.is_empty()
    }

    pub fn terminus(&self, spec: &RAGGSpec) -> usize {
        match self.steps.last() {
            Some(&(_, e)) => spec.graph.arrows[e].target,
            None => self.start,
        }
    }

    /// Generator-length proxy: total syllables plus arrow count.
    pub fn weight(&self) -> usize {
        self.steps.iter().map(|(w, _)| w.len() + 1).sum::<usize>() + self.last.len()
    }

    pub fn display(&self, spec: &RAGGSpec) -> String {
        let mut parts = vec![];
        for (w, e) in &self.steps {
            if !w.is_empty() {
                parts.push(w.display(&spec.vertex_products[spec.graph.arrows[*e].source]));
            }
            parts.push(spec.graph.arrows[*e].id.clone());
        }
        if !self.last.is_empty() || parts.is_empty() {
            let t = self.terminus(spec);
            parts.push(self.last.display(&spec.vertex_products[t]));
        }
        format!("{}|{}", spec.graph.vertex_names[self.start], parts.join("."))
    }

    /// The three normal-form conditions hold.
    pub fn is_normal(&self, spec: &RAGGSpec) -> bool {
        let mut at = self.start;
        for (i, (w, e)) in self.steps.iter().enumerate() {
            let arrow = &spec.graph.arrows[*e];
            if arrow.source != at {
                return false;
            }
            let image: BTreeSet<usize> = spec.image_factors(*e);
            let vp = &spec.vertex_products[at];
            if crate::words::tail(vp, w).iter().any(|s| image.contains(&s.vertex)) {
                return false;
            }
            if i > 0 {
                let prev = self.steps[i - 1].1;
                if spec.graph.arrows[prev].bar == *e && w.is_empty() {
                    return false;
                }
            }
            at = arrow.target;
        }
        true
    }
}

/// A generator of the fundamental groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupoidGen {
    /// A vertex-group syllable (at whatever vertex the element has reached).
    Factor(Syllable),
    Arrow(usize),
}

/// Push forward a vertex-product word through ι_e⁻¹ then ι_{bar e}.
fn push_through(spec: &RAGGSpec, e: usize, w: &ReducedWord) -> ReducedWord {
    let arrow = &spec.graph.arrows[e];
    let emb = &spec.embeddings[e];
    let emb_bar = &spec.embeddings[arrow.bar];
    let target_vp = &spec.vertex_products[arrow.target];
    // Invert the per-factor maps of ι_e.
    let mut inv_vertex = std::collections::HashMap::new();
    for (x, &fx) in emb.vertex_map.iter().enumerate() {
        inv_vertex.insert(fx, x);
    }
    let syls: Vec<Syllable> = w
        .syllables()
        .iter()
        .map(|s| {
            let x = inv_vertex[&s.vertex];
            let iso = &emb.factor_isos[x];
            let back = iso.iter().position(|&v| v == s.element).expect("bijective iso");
            Syllable {
                vertex: emb_bar.vertex_map[x],
                element: emb_bar.factor_isos[x][back],
            }
        })
        .collect();
    word_from_syllables(target_vp, &syls)
}

/// Right-multiply by a syllable of the terminus vertex group.
pub fn right_mul_factor(spec: &RAGGSpec, elt: &GroupoidElement, s: Syllable) -> GroupoidElement {
    let t = elt.terminus(spec);
    let vp = &spec.vertex_products[t];
    let mut out = elt.clone();
    out.last = multiply(vp, &out.last, &word_from_syllables(vp, &[s]));
    out
}

/// Right-multiply by an arrow. Errors with `NotComposable` when the terminus
/// is not the arrow's source.
pub fn right_mul_arrow(spec: &RAGGSpec, elt: &GroupoidElement, e: usize) -> Result<GroupoidElement> {
    let t = elt.terminus(spec);
    let arrow = &spec.graph.arrows[e];
    if arrow.source != t {
        return Err(Error::NotComposable(elt.steps.len()));
    }
    let vp = &spec.vertex_products[t];
    let image: BTreeSet<usize> = spec.image_factors(e);
    let (rep, through) = split_tail_parabolic(vp, &elt.last, &image);
    let pushed = push_through(spec, e, &through);
    let mut out = elt.clone();
    // Backtrack with trivial middle: g_n·e_n·ι_e(h)·bar(e_n) collapses.
    if rep.is_empty() {
        if let Some(&(_, prev)) = out.steps.last() {
            if spec.graph.arrows[prev].bar == e {
                let (g_n, _) = out.steps.pop().unwrap();
                let back_vp = &spec.vertex_products[arrow.target];
                out.last = multiply(back_vp, &g_n, &pushed);
                return Ok(out);
            }
        }
    }
    out.steps.push((rep, e));
    out.last = pushed;
    Ok(out)
}

/// Normalise a generator word starting at `start`.
pub fn groupoid_normalize(
    spec: &RAGGSpec,
    start: usize,
    gens: &[GroupoidGen],
) -> Result<GroupoidElement> {
    let mut elt = GroupoidElement::identity(start);
    for (i, g) in gens.iter().enumerate() {
        match *g {
            GroupoidGen::Factor(s) => {
                let t = elt.terminus(spec);
                s.validate(&spec.vertex_products[t])
                    .map_err(|_| Error::NotComposable(i))?;
                elt = right_mul_factor(spec, &elt, s);
            }
            GroupoidGen::Arrow(e) => {
                elt = right_mul_arrow(spec, &elt, e).map_err(|_| Error::NotComposable(i))?;
            }
        }
    }
    Ok(elt)
}

/// Compose a·b (first a, then b). Requires terminus(a) = start(b).
pub fn compose(spec: &RAGGSpec, a: &GroupoidElement, b: &GroupoidElement) -> Result<GroupoidElement> {
    if a.terminus(spec) != b.start {
        return Err(Error::NotComposable(0));
    }
    let mut out = a.clone();
    for (w, e) in &b.steps {
        for &s in w.syllables() {
            out = right_mul_factor(spec, &out, s);
        }
        out = right_mul_arrow(spec, &out, *e)?;
    }
    for &s in b.last.syllables() {
        out = right_mul_factor(spec, &out, s);
    }
    Ok(out)
}

/// Inverse path: last⁻¹ · bar(e_n) · g_n⁻¹ ··· bar(e_1) · g_1⁻¹.
pub fn groupoid_inverse(spec: &RAGGSpec, a: &GroupoidElement) -> GroupoidElement {
    let t = a.terminus(spec);
    let mut gens: Vec<GroupoidGen> = vec![];
    let term_vp = &spec.vertex_products[t];
    for &s in inverse(term_vp, &a.last).syllables() {
        gens.push(GroupoidGen::Factor(s));
    }
    for (w, e) in a.steps.iter().rev() {
        gens.push(GroupoidGen::Arrow(spec.graph.arrows[*e].bar));
        let vp = &spec.vertex_products[spec.graph.arrows[*e].source];
        for &s in inverse(vp, w).syllables() {
            gens.push(GroupoidGen::Factor(s));
        }
    }
    groupoid_normalize(spec, t, &gens).expect("inverse path is composable")
}

/// Convenience: a single-factor element at `vertex`.
pub fn factor_element(spec: &RAGGSpec, vertex: usize, w: &GPWord) -> GroupoidElement {
    GroupoidElement {
        start: vertex,
        steps: vec![],
        last: reduce(&spec.vertex_products[vertex], w),
    }
}
