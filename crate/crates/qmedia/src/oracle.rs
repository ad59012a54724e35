//! Brute-force reference computations used as independent test oracles.
//!
//! Nothing here calls the production reduction path: closures are taken
//! directly over the elementary moves (cancellation, amalgamation, shuffling),
//! and canonical representatives are picked by exhaustive comparison.

use crate::words::{GPPresentation, GPWord, Syllable};
use crate::{Error, Result};
use std::collections::BTreeSet;

/// All words obtainable from `start` by elementary moves. Identity syllables
/// may appear transiently (after an amalgamation) and are removed by the
/// cancellation move. Moves never increase length, so the closure is finite.
pub fn elementary_closure(
    p: &GPPresentation,
    start: &[Syllable],
    budget: usize,
) -> Result<BTreeSet<Vec<Syllable>>> {
    let mut seen: BTreeSet<Vec<Syllable>> = BTreeSet::new();
    let mut queue: Vec<Vec<Syllable>> = vec![start.to_vec()];
    seen.insert(start.to_vec());
    while let Some(word) = queue.pop() {
        let push = |next: Vec<Syllable>, seen: &mut BTreeSet<Vec<Syllable>>, queue: &mut Vec<Vec<Syllable>>| -> Result<()> {
            if !seen.contains(&next) {
                if seen.len() >= budget {
                    return Err(Error::ClosureBudgetExceeded {
                        budget,
                        reached: seen.len() + 1,
                    });
                }
                seen.insert(next.clone());
                queue.push(next);
            }
            Ok(())
        };
        for i in 0..word.len() {
            // Cancellation.
            if word[i].element == 0 {
                let mut next = word.clone();
                next.remove(i);
                push(next, &mut seen, &mut queue)?;
            }
            if i + 1 < word.len() {
                // Amalgamation.
                if word[i].vertex == word[i + 1].vertex {
                    let mut next = word.clone();
                    next[i].element = p.group(word[i].vertex).mul(word[i].element, word[i + 1].element);
                    next.remove(i + 1);
                    push(next, &mut seen, &mut queue)?;
                }
                // Shuffling.
                if word[i].vertex != word[i + 1].vertex
                    && p.adjacent(word[i].vertex, word[i + 1].vertex)
                {
                    let mut next = word.clone();
                    next.swap(i, i + 1);
                    push(next, &mut seen, &mut queue)?;
                }
            }
        }
    }
    Ok(seen)
}

/// The canonical representative of a move closure: minimal length, then
/// lexicographically least by (vertex, element) sequences. By uniqueness of
/// graphically reduced words up to shuffling, the minimal-length stratum is a
/// single shuffle class.
pub fn canonical_of_closure(closure: &BTreeSet<Vec<Syllable>>) -> Vec<Syllable> {
    let min_len = closure.iter().map(Vec::len).min().unwrap_or(0);
    closure
        .iter()
        .filter(|w| w.len() == min_len)
        .min()
        .cloned()
        .unwrap_or_default()
}

/// Brute-force reduction oracle: canonical representative of the elementary
/// closure of `w`.
pub fn reduce_oracle(p: &GPPresentation, w: &GPWord, budget: usize) -> Result<Vec<Syllable>> {
    Ok(canonical_of_closure(&elementary_closure(p, &w.0, budget)?))
}

/// The shuffle class of a word (no cancellations or amalgamations).
pub fn shuffle_class(p: &GPPresentation, start: &[Syllable]) -> BTreeSet<Vec<Syllable>> {
    let mut seen: BTreeSet<Vec<Syllable>> = BTreeSet::new();
    let mut queue = vec![start.to_vec()];
    seen.insert(start.to_vec());
    while let Some(word) = queue.pop() {
        for i in 0..word.len().saturating_sub(1) {
            if word[i].vertex != word[i + 1].vertex && p.adjacent(word[i].vertex, word[i + 1].vertex) {
                let mut next = word.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
    }
    seen
}

/// All words over `p` of exactly length `len`, as raw syllable vectors.
pub fn all_words_of_length(p: &GPPresentation, len: usize) -> Vec<Vec<Syllable>> {
    let syls = p.all_syllables();
    let mut out: Vec<Vec<Syllable>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * syls.len());
        for w in &out {
            for &s in &syls {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out = next;
    }
    out
}
