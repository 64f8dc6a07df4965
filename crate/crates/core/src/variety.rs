//! Enumeration and counting of chain algebras, membership in finitely
//! generated subvarieties, the lattice of commutative subvarieties, and
//! amalgamation-property status.
//!
//! A finite chain algebra is a subdirect product of the subdirectly
//! irreducible quotients of its congruences, and a subdirectly irreducible
//! chain lies in the variety generated by a set of chains exactly when it
//! embeds into one of them. Together these reduce membership questions to
//! word computations: quotient words of the candidate on one side,
//! embeddings into the generators on the other.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::FinOrdMonoid;
use crate::congruence::{all_congruences, quotient};
use crate::term::{gamma, sigma, sigma_dual, Equation, Term};
use crate::word::{compose, decompose, word_embeds, word_is_sdi, SumComponent, SumWord, COMPONENTS};
use crate::{caps, CapExceeded};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordFilter {
    All,
    Sdi,
    Commutative,
    CommutativeSdi,
}

impl WordFilter {
    fn admits_letter(self, letter: SumComponent) -> bool {
        match self {
            WordFilter::All | WordFilter::Sdi => true,
            WordFilter::Commutative | WordFilter::CommutativeSdi => {
                matches!(letter, SumComponent::C2 | SumComponent::C2d)
            }
        }
    }

    fn admits_word(self, word: &SumWord) -> bool {
        match self {
            WordFilter::All | WordFilter::Commutative => true,
            WordFilter::Sdi | WordFilter::CommutativeSdi => word_is_sdi(word),
        }
    }
}

/// All words denoting algebras of exactly `size` elements that pass the
/// filter, in lexicographic order.
pub fn enumerate_words(size: usize, filter: WordFilter) -> Result<Vec<SumWord>, CapExceeded> {
    assert!(size >= 1);
    if size > caps::MAX_WORD_ENUM {
        return Err(CapExceeded {
            what: "word size to enumerate",
            limit: caps::MAX_WORD_ENUM as u64,
            requested: size as u64,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn extend(
        prefix: &mut Vec<SumComponent>,
        budget: usize,
        filter: WordFilter,
        out: &mut Vec<SumWord>,
    ) {
        if budget == 0 {
            let word = SumWord::new(prefix.clone());
            if filter.admits_word(&word) {
                out.push(word);
            }
            return;
        }
        for letter in COMPONENTS {
            if letter.weight() <= budget && filter.admits_letter(letter) {
                prefix.push(letter);
                extend(prefix, budget - letter.weight(), filter, out);
                prefix.pop();
            }
        }
    }
    extend(&mut prefix, size - 1, filter, &mut out);
    Ok(out)
}

/// Number of chain algebras of size `n`:
/// `I(1) = 1`, `I(2) = 2`, `I(n) = 2I(n-1) + 2I(n-2)`.
pub fn count_i(n: usize) -> u128 {
    assert!(n >= 1);
    // Seeding with I(0) = 0 makes the recurrence uniform from n = 2 on.
    let (mut prev, mut cur) = (0u128, 1u128);
    for _ in 2..=n {
        let next = 2 * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Number of subdirectly irreducible chain algebras of size `n` (the
/// recurrence counts the one-element algebra as 1 by convention):
/// `S(1) = 1`, `S(2) = 2`, `S(3) = 4`, `S(n) = S(n-1) + 2S(n-2) + 2S(n-3)`.
pub fn count_s(n: usize) -> u128 {
    assert!(n >= 1);
    let mut window = [1u128, 2, 4];
    if n <= 3 {
        return window[n - 1];
    }
    for _ in 4..=n {
        let next = window[2] + 2 * window[1] + 2 * window[0];
        window = [window[1], window[2], next];
    }
    window[2]
}

/// Number of commutative chain algebras of size `n`: `2^(n-1)`.
pub fn count_comm(n: usize) -> u128 {
    assert!(n >= 1);
    1u128 << (n - 1)
}

/// Every valid algebra of size `n`, found by trying all tables with
/// `table[a][b]` in `{a, b}` (the only candidates, since products of chain
/// algebras pick one of their arguments) over all unit positions.
/// Deduplicated by table equality and sorted; ranks make this canonical.
pub fn brute_force_enumerate(n: usize) -> Result<Vec<FinOrdMonoid>, CapExceeded> {
    assert!(n >= 1);
    if n > caps::MAX_BRUTE_FORCE {
        return Err(CapExceeded {
            what: "brute-force algebra size",
            limit: caps::MAX_BRUTE_FORCE as u64,
            requested: n as u64,
        });
    }
    let mut found = BTreeSet::new();
    for unit in 0..n {
        let free_cells: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && a != unit && b != unit)
            .collect();
        for mask in 0u64..1 << free_cells.len() {
            let mut table = vec![0usize; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] = if a == unit { b } else { a };
                }
            }
            for (i, &(a, b)) in free_cells.iter().enumerate() {
                table[a * n + b] = if mask >> i & 1 == 1 { b } else { a };
            }
            if let Ok(m) = FinOrdMonoid::new(n, unit, table) {
                found.insert(m);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Decompositions of all subdirectly irreducible quotients of the algebra
/// the word denotes.
pub fn sdi_quotient_words(word: &SumWord) -> Result<BTreeSet<SumWord>, CapExceeded> {
    if word.size() > caps::MAX_QUOTIENT_WORD {
        return Err(CapExceeded {
            what: "word size for quotient enumeration",
            limit: caps::MAX_QUOTIENT_WORD as u64,
            requested: word.size() as u64,
        });
    }
    let m = compose(word);
    let mut out = BTreeSet::new();
    for theta in all_congruences(&m) {
        let (q, _) = quotient(&m, &theta);
        let qw = decompose(&q);
        if word_is_sdi(&qw) {
            out.insert(qw);
        }
    }
    Ok(out)
}

/// Membership of the chain denoted by `word` in the variety generated by
/// the chains denoted by `generators`: every subdirectly irreducible
/// quotient must embed into some generator.
pub fn member(word: &SumWord, generators: &[SumWord]) -> Result<bool, CapExceeded> {
    for quotient_word in sdi_quotient_words(word)? {
        let embeds_somewhere = generators
            .iter()
            .any(|g| word_embeds(&quotient_word, g).is_some());
        if !embeds_somewhere {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The subdirectly irreducible words of the variety generated by the given
/// chains: exactly the subdirectly irreducible words embedding into some
/// generator, in lexicographic order.
pub fn sdi_words_of_variety(generators: &[SumWord]) -> Result<Vec<SumWord>, CapExceeded> {
    let max_size = generators.iter().map(SumWord::size).max().unwrap_or(1);
    let mut out = Vec::new();
    for size in 2..=max_size {
        for word in enumerate_words(size, WordFilter::Sdi)? {
            if generators.iter().any(|g| word_embeds(&word, g).is_some()) {
                out.push(word);
            }
        }
    }
    Ok(out)
}

/// The embedding-maximal elements of [`sdi_words_of_variety`]. Two
/// varieties generated by chains are equal exactly when these antichains
/// are equal.
pub fn maximal_sdi_words(generators: &[SumWord]) -> Result<Vec<SumWord>, CapExceeded> {
    let words = sdi_words_of_variety(generators)?;
    let maximal: Vec<SumWord> = words
        .iter()
        .filter(|w| {
            !words
                .iter()
                .any(|other| other != *w && word_embeds(w, other).is_some())
        })
        .cloned()
        .collect();
    Ok(maximal)
}

/// The subvarieties of the variety of commutative idempotent chain
/// algebras: every one is trivial, generated by one zig-zag chain, by its
/// order dual, by both, or is the whole variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CidVariety {
    Trivial,
    /// Generated by the chain `c_n`, n >= 2.
    VC(usize),
    /// Generated by the dual chain `c_n'`, n >= 2.
    VCd(usize),
    /// Generated by `c_n` and `c_n'` together, n >= 2.
    VJoin(usize),
    Full,
}

impl fmt::Display for CidVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CidVariety::Trivial => f.write_str("trivial"),
            CidVariety::VC(n) => write!(f, "V(C{n})"),
            CidVariety::VCd(n) => write!(f, "V(C{n}d)"),
            CidVariety::VJoin(n) => write!(f, "V(C{n},C{n}d)"),
            CidVariety::Full => f.write_str("CId"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("generator word `{0}` is not commutative")]
pub struct NotCommutative(pub SumWord);

/// Alternating word of the given length starting with `first`; these are
/// the decompositions of the zig-zag chains and their duals.
pub fn alternating_word(first: SumComponent, len: usize) -> SumWord {
    let other = match first {
        SumComponent::C2 => SumComponent::C2d,
        SumComponent::C2d => SumComponent::C2,
        _ => panic!("alternating words use the one-element letters"),
    };
    SumWord::new((0..len).map(|k| if k % 2 == 0 { first } else { other }).collect())
}

/// Longest alternating scattered subword starting with `first`. Each
/// maximal run of equal letters contributes at most one position, and
/// picking one per run is achievable, so the answer is the run count,
/// less one when the first run starts with the other letter.
fn longest_alternating(word: &SumWord, first: SumComponent) -> usize {
    let letters = word.letters();
    if letters.is_empty() {
        return 0;
    }
    let mut runs = 1;
    for k in 1..letters.len() {
        if letters[k] != letters[k - 1] {
            runs += 1;
        }
    }
    if letters[0] == first {
        runs
    } else {
        runs - 1
    }
}

/// Names the subvariety generated by commutative words.
pub fn cid_identify(generators: &[SumWord]) -> Result<CidVariety, NotCommutative> {
    for word in generators {
        if word
            .letters()
            .iter()
            .any(|&l| matches!(l, SumComponent::G3 | SumComponent::D3))
        {
            return Err(NotCommutative(word.clone()));
        }
    }
    // a-1 and b-1 are the longest alternating subwords starting with C2
    // and C2d; the corresponding zig-zag chains generate the variety.
    let a = 1 + generators
        .iter()
        .map(|w| longest_alternating(w, SumComponent::C2))
        .max()
        .unwrap_or(0);
    let b = 1 + generators
        .iter()
        .map(|w| longest_alternating(w, SumComponent::C2d))
        .max()
        .unwrap_or(0);
    Ok(match (a, b) {
        (1, 1) => CidVariety::Trivial,
        (a, b) if a == b => CidVariety::VJoin(a),
        (a, b) if a > b => CidVariety::VC(a),
        (_, b) => CidVariety::VCd(b),
    })
}

fn cid_maximal_words(v: CidVariety) -> Vec<SumWord> {
    match v {
        CidVariety::Trivial => vec![],
        CidVariety::VC(n) => vec![alternating_word(SumComponent::C2, n - 1)],
        CidVariety::VCd(n) => vec![alternating_word(SumComponent::C2d, n - 1)],
        CidVariety::VJoin(n) => vec![
            alternating_word(SumComponent::C2, n - 1),
            alternating_word(SumComponent::C2d, n - 1),
        ],
        CidVariety::Full => unreachable!("callers handle Full before asking for words"),
    }
}

/// Inclusion of commutative subvarieties, decided by embedding the
/// defining zig-zag words rather than by a lookup table.
pub fn cid_leq(v1: CidVariety, v2: CidVariety) -> bool {
    if v2 == CidVariety::Full {
        return true;
    }
    if v1 == CidVariety::Full {
        return false;
    }
    cid_maximal_words(v1).iter().all(|w| {
        cid_maximal_words(v2)
            .iter()
            .any(|upper| word_embeds(w, upper).is_some())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("the full commutative variety has no finite axiomatization in this family")]
pub struct NoFiniteAxiom;

/// The defining equation of a proper commutative subvariety, relative to
/// commutativity and idempotency.
pub fn cid_axiom(v: CidVariety) -> Result<Equation, NoFiniteAxiom> {
    match v {
        CidVariety::Trivial => Ok(Equation::eq(Term::var(1), Term::Unit)),
        CidVariety::VC(n) => Ok(if n % 2 == 0 { sigma(n as u32) } else { sigma_dual(n as u32) }),
        CidVariety::VCd(n) => Ok(if n % 2 == 0 { sigma_dual(n as u32) } else { sigma(n as u32) }),
        CidVariety::VJoin(n) => Ok(gamma(n as u32 + 1)),
        CidVariety::Full => Err(NoFiniteAxiom),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmalgamationStatus {
    Yes,
    No,
    /// Reserved for the named non-finitely-generated varieties reachable
    /// only through the symbolic command-line interface.
    OpenInPaper,
}

impl fmt::Display for AmalgamationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmalgamationStatus::Yes => f.write_str("yes"),
            AmalgamationStatus::No => f.write_str("no"),
            AmalgamationStatus::OpenInPaper => f.write_str("open"),
        }
    }
}

/// Whether the variety generated by the given chains has the amalgamation
/// property: exactly the trivial variety and the seven varieties whose
/// maximal subdirectly irreducible words are listed here.
pub fn amalgamation_status(generators: &[SumWord]) -> Result<AmalgamationStatus, CapExceeded> {
    use SumComponent::*;
    let antichain = maximal_sdi_words(generators)?;
    let amalgamable: [&[SumWord]; 8] = [
        &[],
        &[SumWord::new(vec![C2])],
        &[SumWord::new(vec![C2d])],
        &[SumWord::new(vec![C2]), SumWord::new(vec![C2d])],
        &[SumWord::new(vec![C2, C2d])],
        &[SumWord::new(vec![C2d, C2])],
        &[SumWord::new(vec![G3])],
        &[SumWord::new(vec![D3])],
    ];
    let yes = amalgamable.iter().any(|set| {
        set.len() == antichain.len() && set.iter().all(|w| antichain.contains(w))
    });
    Ok(if yes { AmalgamationStatus::Yes } else { AmalgamationStatus::No })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{make_cn, make_cnd, satisfies};
    use crate::word::SumComponent::*;

    #[test]
    fn word_counts_match_the_recurrences() {
        let expected_i = [1u128, 2, 6, 16, 44, 120, 328, 896];
        let expected_s = [1u128, 2, 4, 10, 22, 50, 114, 258];
        for n in 1..=8 {
            assert_eq!(count_i(n), expected_i[n - 1]);
            assert_eq!(count_s(n), expected_s[n - 1]);
            assert_eq!(count_comm(n), 1 << (n - 1));
            let all = enumerate_words(n, WordFilter::All).unwrap();
            assert_eq!(all.len() as u128, count_i(n));
            assert!(all.windows(2).all(|p| p[0] < p[1]));
            let comm = enumerate_words(n, WordFilter::Commutative).unwrap();
            assert_eq!(comm.len() as u128, count_comm(n));
            if n >= 2 {
                let sdi = enumerate_words(n, WordFilter::Sdi).unwrap();
                assert_eq!(sdi.len() as u128, count_s(n));
            }
        }
        assert_eq!(enumerate_words(1, WordFilter::Sdi).unwrap(), vec![]);
        assert!(enumerate_words(15, WordFilter::All).is_err());
    }

    #[test]
    fn closed_form_matches_count_i() {
        // (1 + sqrt(3))^n = a + b*sqrt(3) with integer a, b; I(n) = b.
        let (mut a, mut b) = (1u128, 0u128);
        for n in 1..=30usize {
            let (na, nb) = (a + 3 * b, a + b);
            a = na;
            b = nb;
            assert_eq!(count_i(n), b, "closed form differs at n = {n}");
        }
    }

    #[test]
    fn small_word_lists_are_exact() {
        assert_eq!(
            enumerate_words(2, WordFilter::All).unwrap(),
            vec![SumWord::new(vec![C2]), SumWord::new(vec![C2d])]
        );
        assert_eq!(
            enumerate_words(3, WordFilter::Commutative).unwrap(),
            vec![
                SumWord::new(vec![C2, C2]),
                SumWord::new(vec![C2, C2d]),
                SumWord::new(vec![C2d, C2]),
                SumWord::new(vec![C2d, C2d]),
            ]
        );
        assert_eq!(enumerate_words(4, WordFilter::Sdi).unwrap().len(), 10);
        assert_eq!(enumerate_words(1, WordFilter::All).unwrap(), vec![SumWord::empty()]);
    }

    #[test]
    fn brute_force_agrees_with_word_census() {
        for n in 1..=4 {
            let algebras = brute_force_enumerate(n).unwrap();
            assert_eq!(algebras.len() as u128, count_i(n));
            let mut decomposed: Vec<SumWord> =
                algebras.iter().map(decompose).collect();
            decomposed.sort();
            assert_eq!(decomposed, enumerate_words(n, WordFilter::All).unwrap());
        }
        assert!(brute_force_enumerate(7).is_err());
    }

    #[test]
    fn sdi_quotients_of_small_words() {
        let quotients = sdi_quotient_words(&SumWord::new(vec![C2, C2])).unwrap();
        assert_eq!(
            quotients.into_iter().collect::<Vec<_>>(),
            vec![SumWord::new(vec![C2])]
        );
        assert_eq!(sdi_quotient_words(&SumWord::empty()).unwrap().len(), 0);
        let self_sdi = SumWord::new(vec![G3, C2]);
        assert!(sdi_quotient_words(&self_sdi).unwrap().contains(&self_sdi));
    }

    #[test]
    fn membership_examples() {
        let c2 = SumWord::new(vec![C2]);
        let g3 = SumWord::new(vec![G3]);
        let d3 = SumWord::new(vec![D3]);
        assert_eq!(member(&c2, std::slice::from_ref(&g3)), Ok(true));
        assert_eq!(member(&g3, std::slice::from_ref(&d3)), Ok(false));
        assert_eq!(member(&d3, std::slice::from_ref(&g3)), Ok(false));
        assert_eq!(
            member(&SumWord::new(vec![C2, C2]), &[SumWord::new(vec![C2, C2d])]),
            Ok(true)
        );
        for word in enumerate_words(4, WordFilter::All).unwrap() {
            assert_eq!(member(&word, std::slice::from_ref(&word)), Ok(true));
        }
    }

    #[test]
    fn variety_identification() {
        assert_eq!(cid_identify(&[]), Ok(CidVariety::Trivial));
        assert_eq!(cid_identify(&[SumWord::empty()]), Ok(CidVariety::Trivial));
        assert_eq!(
            cid_identify(&[decompose(&make_cn(3))]),
            Ok(CidVariety::VC(3))
        );
        assert_eq!(
            cid_identify(&[decompose(&make_cnd(4))]),
            Ok(CidVariety::VCd(4))
        );
        assert_eq!(
            cid_identify(&[SumWord::new(vec![C2]), SumWord::new(vec![C2d])]),
            Ok(CidVariety::VJoin(2))
        );
        assert_eq!(
            cid_identify(&[SumWord::new(vec![C2, C2, C2d])]),
            Ok(CidVariety::VC(3))
        );
        assert!(cid_identify(&[SumWord::new(vec![G3])]).is_err());
    }

    #[test]
    fn variety_order_facts() {
        for m in 2..=8 {
            for n in 2..=8 {
                assert_eq!(cid_leq(CidVariety::VC(m), CidVariety::VC(n)), m <= n);
                assert_eq!(cid_leq(CidVariety::VCd(m), CidVariety::VCd(n)), m <= n);
                assert_eq!(cid_leq(CidVariety::VC(m), CidVariety::VCd(n)), m < n);
                assert_eq!(cid_leq(CidVariety::VC(m), CidVariety::VJoin(n)), m <= n);
                assert_eq!(cid_leq(CidVariety::VJoin(m), CidVariety::VC(n)), m < n);
                assert_eq!(
                    cid_leq(CidVariety::VJoin(m), CidVariety::VJoin(n)),
                    m <= n
                );
            }
            assert!(!cid_leq(CidVariety::VC(m), CidVariety::VC(m - 1)));
            assert!(cid_leq(CidVariety::Trivial, CidVariety::VC(m)));
            assert!(cid_leq(CidVariety::VC(m), CidVariety::Full));
            assert!(!cid_leq(CidVariety::Full, CidVariety::VC(m)));
        }
    }

    #[test]
    fn axioms_hold_exactly_on_the_named_generators() {
        // sigma-family axioms hold in the named chain and fail in its dual.
        for n in 2..=5usize {
            let axiom = cid_axiom(CidVariety::VC(n)).unwrap();
            assert_eq!(satisfies(&make_cn(n), &axiom), Ok(true));
            assert_eq!(satisfies(&make_cnd(n), &axiom), Ok(false));
            let dual_axiom = cid_axiom(CidVariety::VCd(n)).unwrap();
            assert_eq!(satisfies(&make_cnd(n), &dual_axiom), Ok(true));
            assert_eq!(satisfies(&make_cn(n), &dual_axiom), Ok(false));
        }
        assert_eq!(cid_axiom(CidVariety::VC(2)).unwrap(), sigma(2));
        assert_eq!(cid_axiom(CidVariety::VC(3)).unwrap(), sigma_dual(3));
        assert_eq!(cid_axiom(CidVariety::VJoin(2)).unwrap(), gamma(3));
        assert_eq!(
            cid_axiom(CidVariety::Trivial).unwrap().to_string(),
            "x1 = e"
        );
        assert_eq!(cid_axiom(CidVariety::Full), Err(NoFiniteAxiom));
    }

    #[test]
    fn maximal_words_form_the_expected_antichains() {
        let gens = vec![SumWord::new(vec![G3])];
        assert_eq!(maximal_sdi_words(&gens).unwrap(), vec![SumWord::new(vec![G3])]);
        let both = vec![SumWord::new(vec![G3]), SumWord::new(vec![D3])];
        assert_eq!(
            maximal_sdi_words(&both).unwrap(),
            vec![SumWord::new(vec![G3]), SumWord::new(vec![D3])]
        );
        let c4 = vec![decompose(&make_cn(4))];
        assert_eq!(
            maximal_sdi_words(&c4).unwrap(),
            vec![SumWord::new(vec![C2, C2d, C2])]
        );
    }

    #[test]
    fn amalgamation_verdicts() {
        let yes_cases: Vec<Vec<SumWord>> = vec![
            vec![],
            vec![SumWord::new(vec![C2])],
            vec![SumWord::new(vec![C2d])],
            vec![SumWord::new(vec![C2]), SumWord::new(vec![C2d])],
            vec![SumWord::new(vec![C2, C2d])],
            vec![SumWord::new(vec![C2d, C2])],
            vec![SumWord::new(vec![G3])],
            vec![SumWord::new(vec![D3])],
            // Non-SDI generators collapse to an amalgamable variety.
            vec![SumWord::new(vec![C2, C2])],
        ];
        for gens in &yes_cases {
            assert_eq!(amalgamation_status(gens), Ok(AmalgamationStatus::Yes));
        }
        let no_cases: Vec<Vec<SumWord>> = vec![
            vec![SumWord::new(vec![G3]), SumWord::new(vec![D3])],
            vec![decompose(&make_cn(4))],
            vec![SumWord::new(vec![G3, C2])],
            vec![SumWord::new(vec![C2, G3])],
        ];
        for gens in &no_cases {
            assert_eq!(amalgamation_status(gens), Ok(AmalgamationStatus::No));
        }
    }
}
