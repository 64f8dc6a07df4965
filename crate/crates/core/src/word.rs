//! The nested-sum calculus.
//!
//! Every finite idempotent ordered monoid is, in exactly one way, a nested
//! sum of copies of four building blocks, so algebras correspond to words
//! over a four-letter alphabet. This module implements the two directions
//! of that correspondence (`compose` / `decompose`, plus the independent
//! peeling algorithm `decompose_peel`), the word-level embedding order, and
//! the lifting of word embeddings back to element maps.
//!
//! Conventions: the first letter of a word is the outermost summand, i.e.
//! its non-unit elements absorb everything contributed by later letters.
//! Each letter contributes a negative element (below the unit), a positive
//! element (above it), or both; negative elements stack upward from the
//! bottom in letter order, positive elements stack downward from the top.

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::algebra::{ElementMap, FinOrdMonoid};

/// The four summands every algebra decomposes into.
///
/// `C2` is the 2-chain with absorbing bottom, `C2d` its order dual. `G3`
/// is the 3-chain whose non-unit elements are left-absorbing, `D3` its
/// opposite (right-absorbing). The derived `Ord` (declaration order) is
/// used only for deterministic enumeration; the embedding order is
/// [`component_leq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumComponent {
    C2,
    C2d,
    G3,
    D3,
}

pub const COMPONENTS: [SumComponent; 4] =
    [SumComponent::C2, SumComponent::C2d, SumComponent::G3, SumComponent::D3];

impl SumComponent {
    /// Number of non-unit elements the letter contributes.
    pub fn weight(self) -> usize {
        match self {
            SumComponent::C2 | SumComponent::C2d => 1,
            SumComponent::G3 | SumComponent::D3 => 2,
        }
    }

    pub fn has_negative(self) -> bool {
        !matches!(self, SumComponent::C2d)
    }

    pub fn has_positive(self) -> bool {
        !matches!(self, SumComponent::C2)
    }

    pub fn token(self) -> &'static str {
        match self {
            SumComponent::C2 => "C2",
            SumComponent::C2d => "C2d",
            SumComponent::G3 => "G3",
            SumComponent::D3 => "D3",
        }
    }
}

/// Letter-wise embedding order: a letter embeds into itself, and the
/// one-element letters embed into the two-element ones.
pub fn component_leq(a: SumComponent, b: SumComponent) -> bool {
    use SumComponent::*;
    a == b || (matches!(a, C2 | C2d) && matches!(b, G3 | D3))
}

/// A word over [`SumComponent`]; the empty word denotes the trivial algebra.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumWord(pub Vec<SumComponent>);

impl SumWord {
    pub fn new(letters: Vec<SumComponent>) -> Self {
        SumWord(letters)
    }

    pub fn empty() -> Self {
        SumWord(Vec::new())
    }

    pub fn letters(&self) -> &[SumComponent] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Size of the composed algebra: the unit plus the letter weights.
    pub fn size(&self) -> usize {
        1 + self.0.iter().map(|c| c.weight()).sum::<usize>()
    }

    /// Swaps each letter for its order dual; the letter order is unchanged.
    pub fn dual(&self) -> SumWord {
        use SumComponent::*;
        SumWord(
            self.0
                .iter()
                .map(|&c| match c {
                    C2 => C2d,
                    C2d => C2,
                    G3 => G3,
                    D3 => D3,
                })
                .collect(),
        )
    }

    /// Swaps each letter for its opposite (argument-swapped) algebra.
    pub fn opposite(&self) -> SumWord {
        use SumComponent::*;
        SumWord(
            self.0
                .iter()
                .map(|&c| match c {
                    C2 => C2,
                    C2d => C2d,
                    G3 => D3,
                    D3 => G3,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a sum word")]
pub struct ParseWordError(String);

impl FromStr for SumWord {
    type Err = ParseWordError;

    /// Accepts `+`-joined letter tokens, or `0` for the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(SumWord::empty());
        }
        let mut letters = Vec::new();
        for part in s.split('+') {
            let letter = match part.trim() {
                "C2" => SumComponent::C2,
                "C2d" => SumComponent::C2d,
                "G3" => SumComponent::G3,
                "D3" => SumComponent::D3,
                other => return Err(ParseWordError(other.to_string())),
            };
            letters.push(letter);
        }
        Ok(SumWord(letters))
    }
}

impl fmt::Display for SumWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let tokens: Vec<&str> = self.0.iter().map(|c| c.token()).collect();
        f.write_str(&tokens.join("+"))
    }
}

/// Where a non-unit element of a composed algebra came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Origin {
    letter: usize,
    positive: bool,
}

/// Letter index and sign of every rank of `compose(word)`; `None` at the unit.
fn origins(word: &SumWord) -> (Vec<Option<Origin>>, usize) {
    let n = word.size();
    let mut origin = vec![None; n];
    let mut next_neg = 0;
    for (i, &c) in word.0.iter().enumerate() {
        if c.has_negative() {
            origin[next_neg] = Some(Origin { letter: i, positive: false });
            next_neg += 1;
        }
    }
    let unit = next_neg;
    let mut next_pos = n - 1;
    for (i, &c) in word.0.iter().enumerate() {
        if c.has_positive() {
            origin[next_pos] = Some(Origin { letter: i, positive: true });
            next_pos -= 1;
        }
    }
    (origin, unit)
}

/// Builds the nested sum named by `word`.
///
/// Elements of earlier letters absorb elements of later ones on both
/// sides; within a letter the letter's own table applies (`G3` keeps the
/// left argument, `D3` the right one).
pub fn compose(word: &SumWord) -> FinOrdMonoid {
    let n = word.size();
    let (origin, unit) = origins(word);
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let p = match (origin[a], origin[b]) {
                (None, _) => b,
                (_, None) => a,
                (Some(oa), Some(ob)) => {
                    if oa.letter < ob.letter {
                        a
                    } else if ob.letter < oa.letter {
                        b
                    } else {
                        match word.0[oa.letter] {
                            SumComponent::C2 | SumComponent::C2d => a,
                            SumComponent::G3 => a,
                            SumComponent::D3 => b,
                        }
                    }
                }
            };
            table[a * n + b] = p;
        }
    }
    FinOrdMonoid::from_parts_unchecked(n, unit, table)
}

/// Green-style mutual absorption: `a` and `b` generate each other back.
pub fn green_d(m: &FinOrdMonoid, a: usize, b: usize) -> bool {
    m.mul(m.mul(a, b), a) == a && m.mul(m.mul(b, a), b) == b
}

/// Recovers the unique word with `compose(word) == *m`, by grouping the
/// non-unit elements into mutual-absorption classes and sorting the classes
/// outermost first.
pub fn decompose(m: &FinOrdMonoid) -> SumWord {
    let n = m.size();
    let unit = m.unit();
    let mut seen = vec![false; n];
    // Each class is (negative element, positive element) with at most one
    // of the two missing; classes never mix sides of the unit.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if a == unit || seen[a] {
            continue;
        }
        seen[a] = true;
        let mut class = vec![a];
        if let Some(b) = (a + 1..n).find(|&b| b != unit && !seen[b] && green_d(m, a, b)) {
            seen[b] = true;
            class.push(b);
        }
        classes.push(class);
    }
    // A class absorbs every class inside it: rep * other == rep.
    classes.sort_by(|x, y| {
        use std::cmp::Ordering;
        let (a, b) = (x[0], y[0]);
        if m.mul(a, b) == a {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    let letters = classes
        .iter()
        .map(|class| match class.as_slice() {
            [x] => {
                if *x < unit {
                    SumComponent::C2
                } else {
                    SumComponent::C2d
                }
            }
            [x, y] => {
                debug_assert!(*x < unit && unit < *y);
                if m.mul(*x, *y) == *x {
                    SumComponent::G3
                } else {
                    SumComponent::D3
                }
            }
            _ => unreachable!("absorption classes have at most two elements"),
        })
        .collect();
    SumWord(letters)
}

/// Independent decomposition that peels the outermost letter off the top
/// and bottom of the chain and recurses on the interior.
///
/// The products `bottom*top` and `top*bottom` decide among four cases:
/// both give the bottom (the bottom absorbs, peel `C2`), both give the top
/// (peel `C2d`), each keeps its left argument (peel `G3`), or each keeps
/// its right argument (peel `D3`).
pub fn decompose_peel(m: &FinOrdMonoid) -> SumWord {
    let mut letters = Vec::new();
    let mut current = m.clone();
    while current.size() > 1 {
        let top = current.size() - 1;
        let bt = current.mul(0, top);
        let tb = current.mul(top, 0);
        let (letter, removed): (SumComponent, &[usize]) = match (bt == 0, tb == 0) {
            (true, true) => (SumComponent::C2, &[0]),
            (false, false) => (SumComponent::C2d, &[top]),
            (true, false) => (SumComponent::G3, &[0, top]),
            (false, true) => (SumComponent::D3, &[0, top]),
        };
        letters.push(letter);
        let keep: Vec<usize> = (0..current.size()).filter(|x| !removed.contains(x)).collect();
        let keep: Vec<usize> = keep.into_iter().filter(|&x| x != current.unit()).collect();
        let (rest, _) = current.generated_subalgebra(&keep);
        current = rest;
    }
    SumWord(letters)
}

/// Whether the composed algebra is subdirectly irreducible: the word is
/// nonempty and no one-element letter immediately repeats.
pub fn word_is_sdi(word: &SumWord) -> bool {
    if word.is_empty() {
        return false;
    }
    word.0.windows(2).all(|w| {
        !(w[0] == w[1] && matches!(w[0], SumComponent::C2 | SumComponent::C2d))
    })
}

/// Greedy scattered-subword matching under [`component_leq`].
///
/// Returns the leftmost witness: strictly increasing positions `f` with
/// `w1[i]` embeddable into `w2[f(i)]`. Greedy matching is complete here,
/// so `None` means no witness exists at all.
pub fn word_embeds(w1: &SumWord, w2: &SumWord) -> Option<Vec<usize>> {
    let mut witness = Vec::with_capacity(w1.len());
    let mut next = 0;
    for &a in &w1.0 {
        let pos = (next..w2.len()).find(|&j| component_leq(a, w2.0[j]))?;
        witness.push(pos);
        next = pos + 1;
    }
    Some(witness)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness length {0} does not match word length {1}")]
    LengthMismatch(usize, usize),
    #[error("witness positions must be strictly increasing and in range")]
    NotIncreasing,
    #[error("letter {0} does not embed into its target letter")]
    Incompatible(usize),
}

/// Checks that `f` is a valid embedding witness from `w1` into `w2`.
pub fn check_witness(w1: &SumWord, w2: &SumWord, f: &[usize]) -> Result<(), WitnessError> {
    if f.len() != w1.len() {
        return Err(WitnessError::LengthMismatch(f.len(), w1.len()));
    }
    for (i, &pos) in f.iter().enumerate() {
        if pos >= w2.len() || (i > 0 && f[i - 1] >= pos) {
            return Err(WitnessError::NotIncreasing);
        }
        if !component_leq(w1.0[i], w2.0[pos]) {
            return Err(WitnessError::Incompatible(i));
        }
    }
    Ok(())
}

/// Lifts a word-level witness to the canonical element-level embedding
/// `compose(w1) → compose(w2)`: each letter's negative element goes to the
/// target letter's negative element, positive to positive, unit to unit.
pub fn lift_embedding(w1: &SumWord, w2: &SumWord, f: &[usize]) -> Result<ElementMap, WitnessError> {
    check_witness(w1, w2, f)?;
    let (source_origin, source_unit) = origins(w1);
    let (target_origin, target_unit) = origins(w2);
    let n1 = w1.size();
    let n2 = w2.size();
    let locate = |letter: usize, positive: bool| -> usize {
        target_origin
            .iter()
            .position(|o| *o == Some(Origin { letter, positive }))
            .expect("target letter has the required element")
    };
    let mut image = vec![0; n1];
    for a in 0..n1 {
        image[a] = match source_origin[a] {
            None => target_unit,
            Some(o) => locate(f[o.letter], o.positive),
        };
    }
    debug_assert_eq!(image[source_unit], target_unit);
    Ok(ElementMap::new(n1, n2, image))
}

/// The word-level witness induced by an element-level embedding, i.e. the
/// map sending each source letter to the letter its elements land in.
/// Returns `None` when `f` is not an embedding.
pub fn witness_of_embedding(
    source: &FinOrdMonoid,
    target: &FinOrdMonoid,
    f: &ElementMap,
) -> Option<Vec<usize>> {
    if !crate::algebra::check_map(source, target, f).is_embedding {
        return None;
    }
    let w1 = decompose(source);
    let w2 = decompose(target);
    let (source_origin, _) = origins(&w1);
    let (target_origin, _) = origins(&w2);
    let mut witness = vec![usize::MAX; w1.len()];
    for a in 0..source.size() {
        if let Some(o) = source_origin[a] {
            let to = target_origin[f.apply(a)]?.letter;
            if witness[o.letter] == usize::MAX {
                witness[o.letter] = to;
            } else if witness[o.letter] != to {
                return None;
            }
        }
    }
    check_witness(&w1, &w2, &witness).ok()?;
    Some(witness)
}
