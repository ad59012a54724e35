//! Path homotopy moves: backtrack removal, triangle shortening, square flips,
//! and the geodesic crossing-order swap.

use super::{HyperplaneSet, QMGraph};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PathMove {
    /// Remove edges i, i+1 (they backtrack).
    RemoveBacktrack(usize),
    /// Replace edges i, i+1 by the third triangle side.
    ShortenTriangle(usize),
    /// Replace the middle vertex of edges i, i+1 by the opposite square corner.
    FlipSquare(usize),
}

fn find_backtrack(path: &[usize]) -> Option<usize> {
    (0..path.len().saturating_sub(2)).find(|&i| path[i] == path[i + 2])
}

fn find_triangle(g: &QMGraph, path: &[usize]) -> Option<usize> {
    (0..path.len().saturating_sub(2))
        .find(|&i| path[i] != path[i + 2] && g.is_edge(path[i], path[i + 2]))
}

/// Apply one square flip at edge position `i`, choosing the least completing
/// corner (unique in a quasi-median graph).
fn flip_at(g: &QMGraph, path: &[usize], i: usize) -> Option<Vec<usize>> {
    let (a, b, c) = (path[i], path[i + 1], path[i + 2]);
    let d = g.square_completions(a, b, c).into_iter().min()?;
    let mut next = path.to_vec();
    next[i + 1] = d;
    Some(next)
}

/// Shorten and normalise a path using the three moves. Square flips are
/// searched breadth-first (bounded) to expose backtracks or triangles; the
/// move log records everything applied to the returned path.
pub fn path_reduce(g: &QMGraph, path: &[usize]) -> Result<(Vec<usize>, Vec<PathMove>)> {
    g.validate_path(path)?;
    let mut current = path.to_vec();
    let mut log: Vec<PathMove> = vec![];
    let flip_budget = 20_000usize;
    loop {
        if let Some(i) = find_backtrack(&current) {
            current.drain(i..i + 2);
            log.push(PathMove::RemoveBacktrack(i));
            continue;
        }
        if let Some(i) = find_triangle(g, &current) {
            current.remove(i + 1);
            log.push(PathMove::ShortenTriangle(i));
            continue;
        }
        // Flip search: BFS over sequences of square flips looking for a path
        // where a backtrack or triangle applies.
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(current.clone());
        let mut queue: Vec<(Vec<usize>, Vec<PathMove>)> = vec![(current.clone(), vec![])];
        let mut found: Option<(Vec<usize>, Vec<PathMove>)> = None;
        let mut qi = 0;
        while qi < queue.len() && seen.len() < flip_budget {
            let (p, moves) = queue[qi].clone();
            qi += 1;
            if find_backtrack(&p).is_some() || find_triangle(g, &p).is_some() {
                found = Some((p, moves));
                break;
            }
            for i in 0..p.len().saturating_sub(2) {
                if let Some(np) = flip_at(g, &p, i) {
                    if seen.insert(np.clone()) {
                        let mut nm = moves.clone();
                        nm.push(PathMove::FlipSquare(i));
                        queue.push((np, nm));
                    }
                }
            }
        }
        match found {
            Some((p, moves)) => {
                current = p;
                log.extend(moves);
            }
            None => break,
        }
    }
    Ok((current, log))
}

/// Swap the crossing order of the hyperplanes dual to edges `i`, `i+1` of a
/// geodesic by flipping their square. Errors with `NotTransverse` when the
/// duals are not transverse.
pub fn geodesic_swap(
    g: &QMGraph,
    hyps: &HyperplaneSet,
    geodesic: &[usize],
    i: usize,
) -> Result<Vec<usize>> {
    g.validate_path(geodesic)?;
    if i + 2 >= geodesic.len() {
        return Err(Error::invalid("swap position out of range"));
    }
    let e1 = g.edge_id(geodesic[i], geodesic[i + 1]).unwrap();
    let e2 = g.edge_id(geodesic[i + 1], geodesic[i + 2]).unwrap();
    let j1 = hyps.of_edge[e1];
    let j2 = hyps.of_edge[e2];
    if j1 == j2 || !hyps.transverse(j1, j2).value {
        return Err(Error::NotTransverse(e1, e2));
    }
    flip_at(g, geodesic, i).ok_or(Error::NotTransverse(e1, e2))
}
