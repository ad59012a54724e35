//! Finite-group arithmetic over multiplication tables.
//!
//! Elements are indices `0..order` and the identity is always index 0 after
//! canonicalisation. Groups of order at most [`ASSOC_EXHAUSTIVE_LIMIT`] get an
//! exhaustive associativity check; larger tables are spot-sampled and flagged.

use crate::error::NotAGroupReason;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Orders up to this bound get the cubic associativity check.
pub const ASSOC_EXHAUSTIVE_LIMIT: usize = 512;
const ASSOC_SAMPLES: usize = 100_000;

/// A finite group given by its full multiplication table.
///
/// Invariants (enforced by [`make_group`]): the table is a Latin square,
/// multiplication is associative, index 0 is a two-sided identity, and
/// `inverse` is the inversion map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// False when associativity was only spot-sampled (order > 512).
    assoc_exhaustive: bool,
}

impl FiniteGroup {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Identity element; always 0 for a canonicalised group.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn assoc_exhaustive(&self) -> bool {
        self.assoc_exhaustive
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Cyclic group of order `n` (n >= 1), named `Z<n>`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup {
            name: format!("Z{n}"),
            order: n,
            table,
            inverse,
            assoc_exhaustive: true,
        }
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }
}

/// Validate a multiplication table and return the canonicalised group.
///
/// The identity is located (or checked against `identity_hint`) and relabelled
/// to index 0.
pub fn make_group(
    name: impl Into<String>,
    table: Vec<Vec<usize>>,
    identity_hint: Option<usize>,
) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup(NotAGroupReason::NoIdentity));
    }
    for (r, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAGroup(NotAGroupReason::NotSquare));
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::NotAGroup(NotAGroupReason::EntryOutOfRange {
                    row: r,
                    col: c,
                    value: v,
                }));
            }
        }
    }
    // Latin square.
    for (r, row) in table.iter().enumerate() {
        let mut seen = vec![false; n];
        for &v in row {
            if seen[v] {
                return Err(Error::NotAGroup(NotAGroupReason::RowNotPermutation(r)));
            }
            seen[v] = true;
        }
    }
    for c in 0..n {
        let mut seen = vec![false; n];
        for row in &table {
            let v = row[c];
            if seen[v] {
                return Err(Error::NotAGroup(NotAGroupReason::ColumnNotPermutation(c)));
            }
            seen[v] = true;
        }
    }
    // Identity.
    let identity = match identity_hint {
        Some(e) => {
            let ok = e < n && (0..n).all(|x| table[e][x] == x && table[x][e] == x);
            if !ok {
                return Err(Error::NotAGroup(NotAGroupReason::BadIdentityHint(e)));
            }
            e
        }
        None => (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NotAGroup(NotAGroupReason::NoIdentity))?,
    };
    // Associativity.
    let assoc_exhaustive = n <= ASSOC_EXHAUSTIVE_LIMIT;
    if assoc_exhaustive {
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(NotAGroupReason::NonAssociative(a, b, c)));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for _ in 0..ASSOC_SAMPLES {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let c = rng.gen_range(0..n);
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return Err(Error::NotAGroup(NotAGroupReason::NonAssociative(a, b, c)));
            }
        }
    }
    // Relabel identity to 0.
    let table = if identity != 0 {
        let sigma = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        (0..n)
            .map(|a| (0..n).map(|b| sigma(table[sigma(a)][sigma(b)])).collect())
            .collect()
    } else {
        table
    };
    // Inverses (exist by the Latin-square property, but must be two-sided).
    let mut inverse = vec![0usize; n];
    for a in 0..n {
        let inv = (0..n)
            .find(|&b| table[a][b] == 0 && table[b][a] == 0)
            .ok_or(Error::NotAGroup(NotAGroupReason::NoInverse(a)))?;
        inverse[a] = inv;
    }
    Ok(FiniteGroup {
        name: name.into(),
        order: n,
        table,
        inverse,
        assoc_exhaustive,
    })
}

/// Direct sum G (+) K with element encoding (g, k) -> g * |K| + k.
pub fn direct_sum(g: &FiniteGroup, k: &FiniteGroup) -> FiniteGroup {
    let (ng, nk) = (g.order(), k.order());
    let n = ng * nk;
    let enc = |a: usize, b: usize| a * nk + b;
    let mut table = vec![vec![0usize; n]; n];
    for a in 0..ng {
        for b in 0..nk {
            for c in 0..ng {
                for d in 0..nk {
                    table[enc(a, b)][enc(c, d)] = enc(g.mul(a, c), k.mul(b, d));
                }
            }
        }
    }
    let inverse = (0..n)
        .map(|x| enc(g.inv(x / nk), k.inv(x % nk)))
        .collect();
    FiniteGroup {
        name: format!("{}(+){}", g.name(), k.name()),
        order: n,
        table,
        inverse,
        assoc_exhaustive: g.assoc_exhaustive && k.assoc_exhaustive,
    }
}

/// A permutation of `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::invalid("images are not a bijection"));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self.compose(other)` applies `other` first: (self∘other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: (0..self.degree()).map(|x| self.apply(other.apply(x))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// Transposition of two points.
    pub fn swap(degree: usize, a: usize, b: usize) -> Permutation {
        let mut images: Vec<usize> = (0..degree).collect();
        images.swap(a, b);
        Permutation { images }
    }
}

/// Closure of a set of permutations under composition, as a [`FiniteGroup`].
///
/// Returns the group (identity is element 0), the map input index -> element
/// index, and for every element a witness word over the input indices
/// (applied right to left, matching [`Permutation::compose`]).
#[derive(Debug)]
pub struct PermutationClosure {
    pub group: FiniteGroup,
    pub perms: Vec<Permutation>,
    pub input_map: Vec<usize>,
    pub words: Vec<Vec<usize>>,
}

pub fn permutation_image(gens: &[Permutation], budget: usize) -> Result<PermutationClosure> {
    let degree = gens.first().map_or(0, Permutation::degree);
    if gens.iter().any(|p| p.degree() != degree) {
        return Err(Error::invalid("permutations have mixed degrees"));
    }
    let id = Permutation::identity(degree);
    let mut elements: Vec<Permutation> = vec![id.clone()];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    index.insert(id, 0);
    let mut frontier = 0;
    while frontier < elements.len() {
        for (gi, g) in gens.iter().enumerate() {
            let next = g.compose(&elements[frontier]);
            if !index.contains_key(&next) {
                if elements.len() >= budget {
                    return Err(Error::ClosureBudgetExceeded {
                        budget,
                        reached: elements.len() + 1,
                    });
                }
                let mut w = words[frontier].clone();
                w.push(gi);
                index.insert(next.clone(), elements.len());
                words.push(w);
                elements.push(next);
            }
        }
        frontier += 1;
    }
    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            table[a][b] = index[&elements[a].compose(&elements[b])];
        }
    }
    let inverse = (0..n).map(|a| index[&elements[a].inverse()]).collect();
    let group = FiniteGroup {
        name: format!("perm[{degree}]"),
        order: n,
        table,
        inverse,
        // Permutation composition is associative by construction.
        assoc_exhaustive: true,
    };
    let input_map = gens.iter().map(|g| index[g]).collect();
    Ok(PermutationClosure {
        group,
        perms: elements,
        input_map,
        words,
    })
}

/// Subgroup generated by `gens`, with its index |G|/|H|.
pub fn subgroup_closure(g: &FiniteGroup, gens: &[usize]) -> (std::collections::BTreeSet<usize>, usize) {
    let mut set = std::collections::BTreeSet::new();
    set.insert(0usize);
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for &s in gens {
            for y in [g.mul(x, s), g.mul(x, g.inv(s))] {
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
    }
    let index = g.order() / set.len();
    (set, index)
}

/// Result of [`is_free_action`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeActionReport {
    pub free: bool,
    pub orbit_count: usize,
    /// On a non-free action: (non-identity element, fixed point).
    pub witness: Option<(usize, usize)>,
}

/// True iff no non-identity element of `g` fixes a point, given the
/// homomorphism `assignment: element index -> permutation`.
///
/// The assignment is validated pairwise (exhaustively for |G|^2 <= 10^6,
/// sampled above) and `NotAHomomorphism` carries a witness pair.
pub fn is_free_action(g: &FiniteGroup, assignment: &[Permutation]) -> Result<FreeActionReport> {
    if assignment.len() != g.order() {
        return Err(Error::invalid("assignment length != group order"));
    }
    let degree = assignment.first().map_or(0, Permutation::degree);
    if assignment.iter().any(|p| p.degree() != degree) {
        return Err(Error::invalid("assignment has mixed degrees"));
    }
    if !assignment[0].is_identity() {
        return Err(Error::NotAHomomorphism(0, 0));
    }
    let n = g.order();
    let check = |a: usize, b: usize| -> bool {
        assignment[g.mul(a, b)] == assignment[a].compose(&assignment[b])
    };
    if n * n <= 1_000_000 {
        for a in 0..n {
            for b in 0..n {
                if !check(a, b) {
                    return Err(Error::NotAHomomorphism(a, b));
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for _ in 0..ASSOC_SAMPLES {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if !check(a, b) {
                return Err(Error::NotAHomomorphism(a, b));
            }
        }
    }
    let mut witness = None;
    'outer: for (a, perm) in assignment.iter().enumerate().skip(1) {
        for p in 0..degree {
            if perm.apply(p) == p {
                witness = Some((a, p));
                break 'outer;
            }
        }
    }
    // Orbits of the whole group on the points.
    let mut dsu = Dsu::new(degree);
    for p in assignment {
        for x in 0..degree {
            dsu.union(x, p.apply(x));
        }
    }
    Ok(FreeActionReport {
        free: witness.is_none(),
        orbit_count: dsu.class_count(),
        witness,
    })
}

/// Small union-find, used here and by the hyperplane engine.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins, keeping class representatives minimal.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub fn class_count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }

    /// Classes sorted by their minimal member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..n {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n)
    }

    #[test]
    fn make_group_z2_z3() {
        let g = make_group("Z2", vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        let g3 = make_group("Z3", vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]], None).unwrap();
        assert_eq!(g3.order(), 3);
        assert_eq!(g3.inv(1), 2);
    }

    #[test]
    fn make_group_rejects_non_latin() {
        let err = make_group("bad", vec![vec![0, 1], vec![0, 1]], None).unwrap_err();
        match err {
            Error::NotAGroup(NotAGroupReason::RowNotPermutation(_))
            | Error::NotAGroup(NotAGroupReason::ColumnNotPermutation(_)) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn make_group_relabels_identity() {
        // Z2 with identity at index 1.
        let g = make_group("Z2'", vec![vec![1, 0], vec![0, 1]], None).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn make_group_round_trip() {
        for g in [z(2), z(3), direct_sum(&z(2), &z(2)), direct_sum(&z(3), &z(2))] {
            let again = make_group(g.name().to_string(), g.table().to_vec(), None).unwrap();
            assert_eq!(again, g);
        }
    }

    #[test]
    fn direct_sum_orders() {
        let g = direct_sum(&z(2), &z(2));
        assert_eq!(g.order(), 4);
        for a in 1..4 {
            assert_eq!(g.element_order(a), 2);
        }
        let h = direct_sum(&z(2), &z(1));
        assert_eq!(h.order(), 2);
        assert_eq!(h.table(), z(2).table());
        // Z3 (+) Z2 is cyclic of order 6: (1,1) = 1*2+1 = 3 has order 6.
        let c6 = direct_sum(&z(3), &z(2));
        assert_eq!(c6.order(), 6);
        assert_eq!(c6.element_order(3), 6);
    }

    #[test]
    fn permutation_image_cases() {
        let triv = permutation_image(&[Permutation::identity(3)], 1000).unwrap();
        assert_eq!(triv.group.order(), 1);

        let c = permutation_image(&[Permutation::swap(2, 0, 1)], 1000).unwrap();
        assert_eq!(c.group.order(), 2);
        assert_eq!(c.input_map, vec![1]);

        let three = Permutation::new(vec![1, 2, 0]).unwrap();
        let c3 = permutation_image(std::slice::from_ref(&three), 1000).unwrap();
        assert_eq!(c3.group.order(), 3);
        // Regular: no non-identity fixed point.
        let assign: Vec<Permutation> = c3.perms.clone();
        let rep = is_free_action(&c3.group, &assign).unwrap();
        assert!(rep.free);
        assert_eq!(rep.orbit_count, 1);
        // Witness words reconstruct the elements.
        for (i, w) in c3.words.iter().enumerate() {
            let mut p = Permutation::identity(3);
            for &gi in w {
                p = [three.clone()][gi].compose(&p);
            }
            assert_eq!(p, c3.perms[i]);
        }
    }

    #[test]
    fn permutation_image_order_divides_factorial() {
        let gens = vec![Permutation::swap(4, 0, 1), Permutation::new(vec![1, 2, 3, 0]).unwrap()];
        let c = permutation_image(&gens, 100_000).unwrap();
        assert_eq!(c.group.order(), 24);
        // Quotient map is a homomorphism on sampled pairs.
        for a in 0..c.perms.len() {
            for b in 0..c.perms.len() {
                let ab = c.perms[a].compose(&c.perms[b]);
                let prod = c.group.mul(a, b);
                assert_eq!(c.perms[prod], ab);
            }
        }
    }

    #[test]
    fn closure_budget() {
        let gens = vec![Permutation::swap(5, 0, 1), Permutation::new(vec![1, 2, 3, 4, 0]).unwrap()];
        let err = permutation_image(&gens, 10).unwrap_err();
        assert!(matches!(err, Error::ClosureBudgetExceeded { .. }));
    }

    #[test]
    fn subgroup_closures() {
        let (h, idx) = subgroup_closure(&z(3), &[]);
        assert_eq!(h.len(), 1);
        assert_eq!(idx, 3);
        let (h, idx) = subgroup_closure(&z(2), &[1]);
        assert_eq!(h.len(), 2);
        assert_eq!(idx, 1);
        let v4 = direct_sum(&z(2), &z(2));
        let (h, idx) = subgroup_closure(&v4, &[2]); // (1,0) = 1*2+0
        assert_eq!(h.len(), 2);
        assert_eq!(idx, 2);
    }

    #[test]
    fn free_action_cases() {
        // Trivial group on 3 points: free, 3 orbits.
        let rep = is_free_action(&z(1), &[Permutation::identity(3)]).unwrap();
        assert!(rep.free);
        assert_eq!(rep.orbit_count, 3);
        // Z2 swapping 2 points: free, 1 orbit.
        let rep = is_free_action(&z(2), &[Permutation::identity(2), Permutation::swap(2, 0, 1)]).unwrap();
        assert!(rep.free);
        assert_eq!(rep.orbit_count, 1);
        // Z2 fixing one of 3 points: not free, with witness.
        let rep = is_free_action(&z(2), &[Permutation::identity(3), Permutation::swap(3, 0, 1)]).unwrap();
        assert!(!rep.free);
        assert_eq!(rep.witness, Some((1, 2)));
        assert_eq!(rep.orbit_count, 2);
        // Non-homomorphism is rejected with a witness pair.
        let err = is_free_action(&z(2), &[Permutation::identity(3), Permutation::new(vec![1, 2, 0]).unwrap()])
            .unwrap_err();
        assert!(matches!(err, Error::NotAHomomorphism(..)));
    }
}
