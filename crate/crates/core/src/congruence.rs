//! Congruence lattices of chain algebras.
//!
//! Congruence classes of an ordered-monoid congruence on a chain are
//! convex, so a congruence is an interval partition of `0..n`: it is fully
//! described by where the cuts between adjacent ranks fall. Convexity plus
//! product compatibility already implies compatibility with meet and join,
//! so those never need separate checks (the naive checker in the tests
//! confirms this on small algebras).
//!
//! Product compatibility of an interval partition reduces to an `O(n^2)`
//! scan: it is enough that multiplying two adjacent equivalent elements by
//! any fixed element on either side lands in one block; general pairs
//! follow by walking adjacent steps and chaining transitivity.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::algebra::{ElementMap, FinOrdMonoid};
use crate::{caps, CapExceeded};

/// An interval partition of the chain `0..n`, canonically stored as the
/// block id of every rank (ids increase along the chain, starting at 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    block_of: Vec<usize>,
}

impl Congruence {
    /// The identity congruence (all blocks singletons).
    pub fn identity(n: usize) -> Self {
        Congruence { block_of: (0..n).collect() }
    }

    /// The full congruence (one block).
    pub fn full(n: usize) -> Self {
        Congruence { block_of: vec![0; n] }
    }

    /// Builds from cut positions: `cuts[g]` separates rank `g` from `g+1`.
    pub fn from_cuts(cuts: &[bool]) -> Self {
        let mut block_of = Vec::with_capacity(cuts.len() + 1);
        let mut id = 0;
        block_of.push(0);
        for &cut in cuts {
            if cut {
                id += 1;
            }
            block_of.push(id);
        }
        Congruence { block_of }
    }

    /// Builds from an arbitrary block assignment, which must be convex
    /// (equal ids only on contiguous ranks). Ids are re-canonicalized.
    pub fn from_block_assignment(block_of: &[usize]) -> Option<Self> {
        let n = block_of.len();
        if n == 0 {
            return None;
        }
        let mut cuts = vec![false; n - 1];
        for g in 0..n - 1 {
            cuts[g] = block_of[g] != block_of[g + 1];
        }
        let c = Congruence::from_cuts(&cuts);
        // Reject non-convex assignments: ids must not recur after a change.
        for a in 0..n {
            for b in a + 1..n {
                if (block_of[a] == block_of[b]) != (c.block_of[a] == c.block_of[b]) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn size(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, a: usize) -> usize {
        self.block_of[a]
    }

    pub fn block_assignment(&self) -> &[usize] {
        &self.block_of
    }

    pub fn block_count(&self) -> usize {
        self.block_of.last().map_or(0, |&b| b + 1)
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.size()
    }

    pub fn is_full(&self) -> bool {
        self.block_count() <= 1
    }

    /// Blocks as `(lo, hi)` rank intervals, in chain order.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        let mut lo = 0;
        for a in 1..=n {
            if a == n || self.block_of[a] != self.block_of[lo] {
                out.push((lo, a - 1));
                lo = a;
            }
        }
        out
    }

    fn cut_mask(&self) -> u64 {
        let mut mask = 0;
        for g in 0..self.size() - 1 {
            if self.block_of[g] != self.block_of[g + 1] {
                mask |= 1 << g;
            }
        }
        mask
    }

    /// Refinement order: `self <= other` when every block of `self` is
    /// inside a block of `other`.
    pub fn leq(&self, other: &Congruence) -> bool {
        assert_eq!(self.size(), other.size());
        let (a, b) = (self.cut_mask(), other.cut_mask());
        a & b == b
    }

    /// Lattice meet: intersection of the relations (union of cuts).
    pub fn meet(&self, other: &Congruence) -> Congruence {
        assert_eq!(self.size(), other.size());
        let n = self.size();
        let cuts: Vec<bool> = (0..n - 1)
            .map(|g| {
                self.block_of[g] != self.block_of[g + 1]
                    || other.block_of[g] != other.block_of[g + 1]
            })
            .collect();
        Congruence::from_cuts(&cuts)
    }

    /// Lattice join: for interval partitions, the transitive closure of the
    /// union is the partition keeping only the shared cuts.
    pub fn join(&self, other: &Congruence) -> Congruence {
        assert_eq!(self.size(), other.size());
        let n = self.size();
        let cuts: Vec<bool> = (0..n - 1)
            .map(|g| {
                self.block_of[g] != self.block_of[g + 1]
                    && other.block_of[g] != other.block_of[g + 1]
            })
            .collect();
        Congruence::from_cuts(&cuts)
    }

    /// Restriction to a sorted sub-carrier, as a canonical block pattern.
    pub fn restrict(&self, carrier: &[usize]) -> Vec<usize> {
        let mut pattern = Vec::with_capacity(carrier.len());
        let mut next_id = 0;
        let mut last_block = usize::MAX;
        for &x in carrier {
            let b = self.block_of[x];
            if b != last_block {
                last_block = b;
                pattern.push(next_id);
                next_id += 1;
            } else {
                let id = next_id - 1;
                pattern.push(id);
            }
        }
        pattern
    }
}

impl fmt::Display for Congruence {
    /// Blocks as semicolon-separated rank intervals, e.g. `0-0;1-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.blocks().iter().map(|(lo, hi)| format!("{lo}-{hi}")).collect();
        f.write_str(&parts.join(";"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a congruence")]
pub struct ParseCongruenceError(String);

impl FromStr for Congruence {
    type Err = ParseCongruenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCongruenceError(s.to_string());
        let mut intervals = Vec::new();
        for part in s.trim().split(';') {
            let (lo, hi) = part.split_once('-').ok_or_else(err)?;
            let lo: usize = lo.trim().parse().map_err(|_| err())?;
            let hi: usize = hi.trim().parse().map_err(|_| err())?;
            if lo > hi {
                return Err(err());
            }
            intervals.push((lo, hi));
        }
        let mut block_of = Vec::new();
        for (id, (lo, hi)) in intervals.iter().enumerate() {
            if *lo != block_of.len() {
                return Err(err());
            }
            block_of.extend(std::iter::repeat_n(id, hi - lo + 1));
        }
        if block_of.is_empty() {
            return Err(err());
        }
        Ok(Congruence { block_of })
    }
}

/// Whether the interval partition is product-compatible for `m`.
pub fn is_congruence(m: &FinOrdMonoid, c: &Congruence) -> bool {
    assert_eq!(c.size(), m.size());
    let n = m.size();
    for u in 0..n.saturating_sub(1) {
        if !c.related(u, u + 1) {
            continue;
        }
        for x in 0..n {
            if !c.related(m.mul(x, u), m.mul(x, u + 1)) {
                return false;
            }
            if !c.related(m.mul(u, x), m.mul(u + 1, x)) {
                return false;
            }
        }
    }
    true
}

/// The least congruence relating `a` and `b`: take the convex hull of the
/// pair as one block and repeatedly merge the hulls of blocks forced equal
/// by multiplication until stable.
pub fn principal_congruence(m: &FinOrdMonoid, a: usize, b: usize) -> Congruence {
    let n = m.size();
    assert!(a < n && b < n);
    // cuts[g] separates g from g+1.
    let mut cuts = vec![true; n.saturating_sub(1)];
    let (lo, hi) = (a.min(b), a.max(b));
    cuts[lo..hi].fill(false);
    let block_of = |cuts: &[bool], x: usize| -> usize {
        // Count cuts below x; cheap at these sizes.
        (0..x).filter(|&g| cuts[g]).count()
    };
    loop {
        let mut changed = false;
        for u in 0..n.saturating_sub(1) {
            if cuts[u] {
                continue;
            }
            for x in 0..n {
                for (p, q) in [
                    (m.mul(x, u), m.mul(x, u + 1)),
                    (m.mul(u, x), m.mul(u + 1, x)),
                ] {
                    if block_of(&cuts, p) != block_of(&cuts, q) {
                        for cut in &mut cuts[p.min(q)..p.max(q)] {
                            if *cut {
                                *cut = false;
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Congruence::from_cuts(&cuts)
}

/// All congruences, coarsest first (sorted by block count, then by block
/// assignment). Algebras up to [`caps::MAX_CONGRUENCE_ENUM`] elements are
/// handled by filtering all interval partitions; larger ones by closing
/// the principal congruences under join.
pub fn all_congruences(m: &FinOrdMonoid) -> Vec<Congruence> {
    let n = m.size();
    let mut found: Vec<Congruence> = if n <= caps::MAX_CONGRUENCE_ENUM {
        let gaps = n - 1;
        (0u64..1 << gaps)
            .map(|mask| {
                let cuts: Vec<bool> = (0..gaps).map(|g| mask >> g & 1 == 1).collect();
                Congruence::from_cuts(&cuts)
            })
            .filter(|c| is_congruence(m, c))
            .collect()
    } else {
        let mut set: BTreeSet<Congruence> = BTreeSet::new();
        set.insert(Congruence::identity(n));
        for a in 0..n {
            for b in a + 1..n {
                set.insert(principal_congruence(m, a, b));
            }
        }
        loop {
            let snapshot: Vec<Congruence> = set.iter().cloned().collect();
            let before = set.len();
            for i in 0..snapshot.len() {
                for j in i + 1..snapshot.len() {
                    set.insert(snapshot[i].join(&snapshot[j]));
                }
            }
            if set.len() == before {
                break;
            }
        }
        set.into_iter().collect()
    };
    found.sort_by_key(|c| (c.block_count(), c.block_of.clone()));
    found
}

/// Least congruence above the identity, when one exists.
///
/// The meet of all principal congruences on distinct pairs works: every
/// nontrivial congruence contains a principal one, so a nontrivial meet is
/// the least nontrivial congruence.
pub fn monolith(m: &FinOrdMonoid) -> Option<Congruence> {
    let n = m.size();
    let mut acc: Option<Congruence> = None;
    for a in 0..n {
        for b in a + 1..n {
            let p = principal_congruence(m, a, b);
            acc = Some(match acc {
                None => p,
                Some(c) => c.meet(&p),
            });
        }
    }
    acc.filter(|c| !c.is_identity())
}

/// Subdirect irreducibility: some least nontrivial congruence exists.
pub fn is_sdi(m: &FinOrdMonoid) -> bool {
    monolith(m).is_some()
}

/// Whether the congruence lattice is totally ordered by refinement.
pub fn con_is_chain(m: &FinOrdMonoid) -> bool {
    let cons = all_congruences(m);
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            if !cons[i].leq(&cons[j]) && !cons[j].leq(&cons[i]) {
                return false;
            }
        }
    }
    true
}

/// The quotient algebra (blocks in chain order) and the projection map.
pub fn quotient(m: &FinOrdMonoid, c: &Congruence) -> (FinOrdMonoid, ElementMap) {
    assert!(is_congruence(m, c), "not a congruence of this algebra");
    let blocks = c.blocks();
    let k = blocks.len();
    let mut table = vec![0; k * k];
    for (i, &(rep_i, _)) in blocks.iter().enumerate() {
        for (j, &(rep_j, _)) in blocks.iter().enumerate() {
            table[i * k + j] = c.block_of(m.mul(rep_i, rep_j));
        }
    }
    let q = FinOrdMonoid::from_parts_unchecked(k, c.block_of(m.unit()), table);
    let projection = ElementMap::new(m.size(), k, c.block_assignment().to_vec());
    (q, projection)
}

/// A homomorphic section of the projection: maps every element to a fixed
/// representative of its block (the least one, except the unit for the
/// unit's block). Its kernel is exactly the given congruence.
pub fn quotient_section(m: &FinOrdMonoid, c: &Congruence) -> ElementMap {
    assert!(is_congruence(m, c), "not a congruence of this algebra");
    let unit_block = c.block_of(m.unit());
    let reps: Vec<usize> = c
        .blocks()
        .iter()
        .enumerate()
        .map(|(id, &(lo, _))| if id == unit_block { m.unit() } else { lo })
        .collect();
    let image: Vec<usize> = (0..m.size()).map(|a| reps[c.block_of(a)]).collect();
    ElementMap::new(m.size(), m.size(), image)
}

/// The congruence induced by a map with convex fibers, if they are convex.
pub fn kernel_of_map(f: &ElementMap) -> Option<Congruence> {
    let mut block_of = Vec::with_capacity(f.source_size);
    let mut next_id = 0usize;
    for a in 0..f.source_size {
        if a > 0 && f.image[a] == f.image[a - 1] {
            let id = next_id - 1;
            block_of.push(id);
        } else {
            block_of.push(next_id);
            next_id += 1;
        }
    }
    // Non-adjacent equal images mean non-convex fibers.
    for a in 0..f.source_size {
        for b in a + 1..f.source_size {
            if (f.image[a] == f.image[b]) != (block_of[a] == block_of[b]) {
                return None;
            }
        }
    }
    Some(Congruence { block_of })
}

/// Congruence extension property: every congruence of every subalgebra is
/// the restriction of a congruence of `m`.
pub fn has_cep(m: &FinOrdMonoid) -> Result<bool, CapExceeded> {
    let n = m.size();
    if n > caps::MAX_CEP {
        return Err(CapExceeded {
            what: "congruence extension check size",
            limit: caps::MAX_CEP as u64,
            requested: n as u64,
        });
    }
    let full_cons = all_congruences(m);
    let others: Vec<usize> = (0..n).filter(|&x| x != m.unit()).collect();
    for mask in 0u64..1 << others.len() {
        let chosen: Vec<usize> = others
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let (sub, include) = m.generated_subalgebra(&chosen);
        let carrier = include.image;
        let restrictions: std::collections::HashSet<Vec<usize>> =
            full_cons.iter().map(|c| c.restrict(&carrier)).collect();
        for psi in all_congruences(&sub) {
            if !restrictions.contains(psi.block_assignment()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
