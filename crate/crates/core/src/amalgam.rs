//! Spans of chain algebras at word level: compatibility, the direct
//! amalgam construction, verification, and bounded exhaustive searches.
//!
//! A span is a pair of embeddings out of one base word. The only
//! obstruction to amalgamating is a base position carried to a
//! left-absorbing letter on one side and a right-absorbing letter on the
//! other; a span avoiding that is merged positionwise, taking the larger
//! letter over each shared position.

use std::fmt;

use thiserror::Error;

use crate::algebra::{check_map, ElementMap};
use crate::word::{
    check_witness, component_leq, compose, lift_embedding, SumComponent, SumWord, WitnessError,
};
use crate::variety::{enumerate_words, WordFilter};
use crate::{caps, CapExceeded};

/// A scattered-subword embedding: strictly increasing positions with each
/// source letter below its target letter. Valid by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordEmbedding {
    pub source: SumWord,
    pub target: SumWord,
    pub positions: Vec<usize>,
}

impl WordEmbedding {
    pub fn new(
        source: SumWord,
        target: SumWord,
        positions: Vec<usize>,
    ) -> Result<Self, WitnessError> {
        check_witness(&source, &target, &positions)?;
        Ok(WordEmbedding { source, target, positions })
    }

    /// The canonical element-level embedding the witness induces.
    pub fn lift(&self) -> ElementMap {
        lift_embedding(&self.source, &self.target, &self.positions)
            .expect("witness validated on construction")
    }
}

impl fmt::Display for WordEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let positions: Vec<String> = self.positions.iter().map(usize::to_string).collect();
        write!(f, "{} -> {} at [{}]", self.source, self.target, positions.join(","))
    }
}

/// All embeddings of `w1` into `w2`, by backtracking, in lexicographic
/// order of their position vectors.
pub fn all_word_embeddings(
    w1: &SumWord,
    w2: &SumWord,
) -> Result<Vec<WordEmbedding>, CapExceeded> {
    for w in [w1, w2] {
        if w.size() > caps::MAX_EMBED_ENUM {
            return Err(CapExceeded {
                what: "word size for embedding enumeration",
                limit: caps::MAX_EMBED_ENUM as u64,
                requested: w.size() as u64,
            });
        }
    }
    let mut out = Vec::new();
    let mut positions = Vec::with_capacity(w1.len());
    fn extend(
        w1: &SumWord,
        w2: &SumWord,
        positions: &mut Vec<usize>,
        out: &mut Vec<WordEmbedding>,
    ) {
        let i = positions.len();
        if i == w1.len() {
            out.push(WordEmbedding {
                source: w1.clone(),
                target: w2.clone(),
                positions: positions.clone(),
            });
            return;
        }
        let start = positions.last().map_or(0, |&p| p + 1);
        for pos in start..w2.len() {
            if component_leq(w1.0[i], w2.0[pos]) {
                positions.push(pos);
                extend(w1, w2, positions, out);
                positions.pop();
            }
        }
    }
    extend(w1, w2, &mut positions, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("the two embeddings start from different base words")]
    BaseMismatch,
}

/// Two embeddings out of one base word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub left: WordEmbedding,
    pub right: WordEmbedding,
}

impl Span {
    pub fn new(left: WordEmbedding, right: WordEmbedding) -> Result<Self, SpanError> {
        if left.source != right.source {
            return Err(SpanError::BaseMismatch);
        }
        Ok(Span { left, right })
    }

    pub fn base(&self) -> &SumWord {
        &self.left.source
    }
}

/// The span embedding the one-negative-element chain into the
/// left-absorbing letter on one side and the right-absorbing letter on the
/// other; it has no amalgam among chain algebras.
pub fn forbidden_span_s1() -> Span {
    let base = SumWord::new(vec![SumComponent::C2]);
    Span {
        left: WordEmbedding::new(base.clone(), SumWord::new(vec![SumComponent::G3]), vec![0])
            .expect("letter embeds"),
        right: WordEmbedding::new(base, SumWord::new(vec![SumComponent::D3]), vec![0])
            .expect("letter embeds"),
    }
}

/// Dual of [`forbidden_span_s1`], over the one-positive-element chain.
pub fn forbidden_span_s2() -> Span {
    let base = SumWord::new(vec![SumComponent::C2d]);
    Span {
        left: WordEmbedding::new(base.clone(), SumWord::new(vec![SumComponent::G3]), vec![0])
            .expect("letter embeds"),
        right: WordEmbedding::new(base, SumWord::new(vec![SumComponent::D3]), vec![0])
            .expect("letter embeds"),
    }
}

/// First base position whose two images are the two different absorbing
/// letters, if any. Such a position restricts the span to one of the two
/// forbidden spans.
pub fn incompatibility_certificate(span: &Span) -> Option<usize> {
    use SumComponent::*;
    (0..span.base().len()).find(|&p| {
        let a = span.left.target.0[span.left.positions[p]];
        let b = span.right.target.0[span.right.positions[p]];
        matches!((a, b), (G3, D3) | (D3, G3))
    })
}

/// Whether the span avoids both forbidden restrictions.
pub fn is_compatible(span: &Span) -> bool {
    incompatibility_certificate(span).is_none()
}

/// A candidate amalgam: two embeddings into one result word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    pub j1: WordEmbedding,
    pub j2: WordEmbedding,
}

impl Amalgam {
    pub fn result(&self) -> &SumWord {
        &self.j1.target
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("span restricts to a forbidden mixed pair at base position {0}")]
pub struct IncompatibleSpan(pub usize);

/// Merges a compatible span over its shared positions: each base position
/// becomes the larger of its two image letters, and between consecutive
/// shared positions (and at either end) the unshared left positions come
/// before the unshared right ones.
pub fn amalgamate(span: &Span) -> Result<Amalgam, IncompatibleSpan> {
    if let Some(p) = incompatibility_certificate(span) {
        return Err(IncompatibleSpan(p));
    }
    let left = &span.left.target.0;
    let right = &span.right.target.0;
    let mut letters: Vec<SumComponent> = Vec::new();
    let mut j1 = vec![0usize; left.len()];
    let mut j2 = vec![0usize; right.len()];
    let mut next_left = 0;
    let mut next_right = 0;
    for p in 0..=span.base().len() {
        let (left_upto, right_upto) = if p < span.base().len() {
            (span.left.positions[p], span.right.positions[p])
        } else {
            (left.len(), right.len())
        };
        while next_left < left_upto {
            j1[next_left] = letters.len();
            letters.push(left[next_left]);
            next_left += 1;
        }
        while next_right < right_upto {
            j2[next_right] = letters.len();
            letters.push(right[next_right]);
            next_right += 1;
        }
        if p < span.base().len() {
            let fp = left_upto;
            let gp = right_upto;
            let merged =
                if component_leq(left[fp], right[gp]) { right[gp] } else { left[fp] };
            j1[fp] = letters.len();
            j2[gp] = letters.len();
            letters.push(merged);
            next_left = fp + 1;
            next_right = gp + 1;
        }
    }
    let result = SumWord::new(letters);
    let amalgam = Amalgam {
        j1: WordEmbedding::new(span.left.target.clone(), result.clone(), j1)
            .expect("merged letters dominate both images"),
        j2: WordEmbedding::new(span.right.target.clone(), result, j2)
            .expect("merged letters dominate both images"),
    };
    debug_assert!({
        let report = verify_amalgam(span, &amalgam);
        report.commutes && report.embeddings_valid
    });
    Ok(amalgam)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmalgamReport {
    pub commutes: bool,
    pub embeddings_valid: bool,
    /// The two images intersect exactly in the image of the base.
    pub strong: bool,
}

/// Element-level verification on the composed algebras: the square
/// commutes, both candidate maps are embeddings, and strongness.
pub fn verify_amalgam(span: &Span, amalgam: &Amalgam) -> AmalgamReport {
    let failed = AmalgamReport { commutes: false, embeddings_valid: false, strong: false };
    if amalgam.j1.source != span.left.target
        || amalgam.j2.source != span.right.target
        || amalgam.j1.target != amalgam.j2.target
    {
        return failed;
    }
    let base_alg = compose(span.base());
    let left_alg = compose(&span.left.target);
    let right_alg = compose(&span.right.target);
    let result_alg = compose(amalgam.result());

    let i1 = span.left.lift();
    let i2 = span.right.lift();
    let j1 = amalgam.j1.lift();
    let j2 = amalgam.j2.lift();
    let embeddings_valid = check_map(&left_alg, &result_alg, &j1).is_embedding
        && check_map(&right_alg, &result_alg, &j2).is_embedding;

    let via_left = i1.compose(&j1);
    let via_right = i2.compose(&j2);
    let commutes = via_left == via_right;

    let image1 = j1.image_set();
    let image2 = j2.image_set();
    let base_image: Vec<usize> = {
        let mut v: Vec<usize> = (0..base_alg.size()).map(|a| via_left.apply(a)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let intersection: Vec<usize> = image1
        .iter()
        .copied()
        .filter(|a| image2.binary_search(a).is_ok())
        .collect();
    let strong = commutes && intersection == base_image;

    AmalgamReport { commutes, embeddings_valid, strong }
}

/// Least position vector completing `fixed` to a full embedding witness of
/// `source` into `target`, if one exists.
fn complete_witness(
    source: &[SumComponent],
    target: &[SumComponent],
    fixed: &[Option<usize>],
) -> Option<Vec<usize>> {
    fn extend(
        source: &[SumComponent],
        target: &[SumComponent],
        fixed: &[Option<usize>],
        acc: &mut Vec<usize>,
    ) -> bool {
        let i = acc.len();
        if i == source.len() {
            return true;
        }
        let start = acc.last().map_or(0, |&p| p + 1);
        match fixed[i] {
            Some(pos) => {
                if pos >= start && component_leq(source[i], target[pos]) {
                    acc.push(pos);
                    if extend(source, target, fixed, acc) {
                        return true;
                    }
                    acc.pop();
                }
                false
            }
            None => {
                // The next anchored position bounds how far this letter
                // may be placed.
                let limit = fixed[i..]
                    .iter()
                    .flatten()
                    .next()
                    .copied()
                    .unwrap_or(target.len());
                for pos in start..limit {
                    if component_leq(source[i], target[pos]) {
                        acc.push(pos);
                        if extend(source, target, fixed, acc) {
                            return true;
                        }
                        acc.pop();
                    }
                }
                false
            }
        }
    }
    let mut acc = Vec::with_capacity(source.len());
    extend(source, target, fixed, &mut acc).then_some(acc)
}

/// Exhaustive amalgam search over all words of size at most `max_size`,
/// in (size, lexicographic) order, then over embeddings of the left word,
/// completing the right embedding around the commuting anchors. Returns
/// the first amalgam found; for the forbidden spans there is none at any
/// size.
pub fn search_amalgam(span: &Span, max_size: usize) -> Result<Option<Amalgam>, CapExceeded> {
    if max_size > caps::MAX_SEARCH_AMALGAM {
        return Err(CapExceeded {
            what: "amalgam search size",
            limit: caps::MAX_SEARCH_AMALGAM as u64,
            requested: max_size as u64,
        });
    }
    let left_word = &span.left.target;
    let right_word = &span.right.target;
    let count = |w: &SumWord, letter: SumComponent| {
        w.letters().iter().filter(|&&l| l == letter).count()
    };
    let min_size = left_word.size().max(right_word.size());
    for size in min_size..=max_size {
        for candidate in enumerate_words(size, WordFilter::All)? {
            let fits = [left_word, right_word].into_iter().all(|w| {
                candidate.len() >= w.len()
                    && count(&candidate, SumComponent::G3) >= count(w, SumComponent::G3)
                    && count(&candidate, SumComponent::D3) >= count(w, SumComponent::D3)
            });
            if !fits {
                continue;
            }
            for j1 in all_word_embeddings(left_word, &candidate)? {
                // Commuting forces the right embedding on base images.
                let mut fixed: Vec<Option<usize>> = vec![None; right_word.len()];
                for p in 0..span.base().len() {
                    fixed[span.right.positions[p]] =
                        Some(j1.positions[span.left.positions[p]]);
                }
                if let Some(positions) =
                    complete_witness(right_word.letters(), candidate.letters(), &fixed)
                {
                    let amalgam = Amalgam {
                        j1,
                        j2: WordEmbedding::new(
                            right_word.clone(),
                            candidate.clone(),
                            positions,
                        )
                        .expect("completion is a valid witness"),
                    };
                    debug_assert!({
                        let report = verify_amalgam(span, &amalgam);
                        report.commutes && report.embeddings_valid
                    });
                    return Ok(Some(amalgam));
                }
            }
        }
    }
    Ok(None)
}

/// A relaxed amalgam: a homomorphism from the left algebra and an
/// embedding of the right one agreeing over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneSidedSolution {
    /// Index into the candidate list.
    pub target: usize,
    pub hom: ElementMap,
    pub embedding: ElementMap,
}

/// Searches the candidate words in order for a homomorphism j1 out of the
/// left algebra and an embedding j2 of the right algebra with
/// `j1 . i1 = j2 . i2`, enumerating all element maps.
pub fn one_sided_amalgam_search(
    span: &Span,
    candidates: &[SumWord],
) -> Result<Option<OneSidedSolution>, CapExceeded> {
    let base_alg = compose(span.base());
    let left_alg = compose(&span.left.target);
    let right_alg = compose(&span.right.target);
    let i1 = span.left.lift();
    let i2 = span.right.lift();

    for (index, word) in candidates.iter().enumerate() {
        let target_alg = compose(word);
        let n = target_alg.size();
        for source in [&left_alg, &right_alg] {
            let mut total = 1u64;
            for _ in 0..source.size() {
                total = match total.checked_mul(n as u64) {
                    Some(t) if t <= caps::MAX_ONE_SIDED_MAPS => t,
                    _ => {
                        return Err(CapExceeded {
                            what: "element maps to enumerate",
                            limit: caps::MAX_ONE_SIDED_MAPS,
                            requested: (n as u64).saturating_pow(source.size() as u32),
                        })
                    }
                };
            }
        }
        let embeddings: Vec<ElementMap> = element_maps(right_alg.size(), n)
            .filter(|f| check_map(&right_alg, &target_alg, f).is_embedding)
            .collect();
        if embeddings.is_empty() {
            continue;
        }
        for hom in element_maps(left_alg.size(), n)
            .filter(|f| check_map(&left_alg, &target_alg, f).is_homomorphism)
        {
            let via_left = i1.compose(&hom);
            for j2 in &embeddings {
                if via_left == i2.compose(j2) {
                    debug_assert_eq!(via_left.source_size, base_alg.size());
                    return Ok(Some(OneSidedSolution {
                        target: index,
                        hom,
                        embedding: j2.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// All maps from a `source_size`-element chain into a `target_size`-element
/// chain, as image vectors in lexicographic order.
fn element_maps(source_size: usize, target_size: usize) -> impl Iterator<Item = ElementMap> {
    let mut image = vec![0usize; source_size];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = ElementMap::new(source_size, target_size, image.clone());
        let mut k = source_size;
        loop {
            if k == 0 {
                done = true;
                break;
            }
            k -= 1;
            image[k] += 1;
            if image[k] < target_size {
                break;
            }
            image[k] = 0;
        }
        Some(current)
    })
}
