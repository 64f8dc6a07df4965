//! Generative and exhaustive cross-checks that complement the acceptance
//! suite: text round trips, the naive congruence oracle on random words,
//! duality transfer, and the element-level compatibility oracle.

use proptest::prelude::*;

use lmonoid::algebra::{check_map, ElementMap, FinOrdMonoid};
use lmonoid::amalgam::{all_word_embeddings, is_compatible, Span};
use lmonoid::congruence::{all_congruences, is_congruence, principal_congruence, quotient, Congruence};
use lmonoid::term::{
    gamma, satisfies, semilinearity, sigma, sigma_dual, Equation, Term,
};
use lmonoid::variety::{brute_force_enumerate, enumerate_words, member, WordFilter};
use lmonoid::word::{
    compose, decompose, decompose_peel, word_embeds, SumComponent, SumWord,
};

fn component_strategy() -> impl Strategy<Value = SumComponent> {
    prop_oneof![
        Just(SumComponent::C2),
        Just(SumComponent::C2d),
        Just(SumComponent::G3),
        Just(SumComponent::D3),
    ]
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = SumWord> {
    proptest::collection::vec(component_strategy(), 0..=max_len).prop_map(SumWord::new)
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(1u32..=4).prop_map(Term::var), Just(Term::Unit)];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::prod(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::meet(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::join(a, b)),
        ]
    })
}

/// The textbook congruence conditions, checked pair by pair with no
/// convexity shortcuts: compatibility with the product on both sides and
/// with the chain's min and max.
fn naive_is_congruence(m: &FinOrdMonoid, c: &Congruence) -> bool {
    let n = m.size();
    for a in 0..n {
        for b in 0..n {
            if !c.related(a, b) {
                continue;
            }
            for x in 0..n {
                if !c.related(m.mul(x, a), m.mul(x, b)) || !c.related(m.mul(a, x), m.mul(b, x)) {
                    return false;
                }
                if !c.related(a.min(x), b.min(x)) || !c.related(a.max(x), b.max(x)) {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn composition_round_trips_through_both_decompositions(w in word_strategy(6)) {
        let m = compose(&w);
        prop_assert_eq!(decompose(&m), w.clone());
        prop_assert_eq!(decompose_peel(&m), w);
    }

    #[test]
    fn word_text_round_trips(w in word_strategy(6)) {
        prop_assert_eq!(w.to_string().parse::<SumWord>().unwrap(), w);
    }

    #[test]
    fn algebra_text_round_trips(w in word_strategy(6)) {
        let m = compose(&w);
        prop_assert_eq!(FinOrdMonoid::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn term_text_round_trips(t in term_strategy()) {
        prop_assert_eq!(t.to_string().parse::<Term>().unwrap(), t);
    }

    #[test]
    fn equation_text_round_trips(s in term_strategy(), t in term_strategy(), leq in any::<bool>()) {
        let eq = if leq { Equation::leq(s, t) } else { Equation::eq(s, t) };
        prop_assert_eq!(eq.to_string().parse::<Equation>().unwrap(), eq);
    }

    #[test]
    fn interval_partitions_pass_the_fast_check_exactly_when_naively_compatible(
        w in word_strategy(7),
        mask in any::<u64>(),
    ) {
        let m = compose(&w);
        let cuts: Vec<bool> = (0..m.size() - 1).map(|i| mask >> i & 1 == 1).collect();
        let c = Congruence::from_cuts(&cuts);
        prop_assert_eq!(is_congruence(&m, &c), naive_is_congruence(&m, &c));
    }

    #[test]
    fn self_embedding_is_the_identity_witness(w in word_strategy(6)) {
        let f = word_embeds(&w, &w).unwrap();
        prop_assert_eq!(f, (0..w.len()).collect::<Vec<_>>());
    }
}

#[test]
fn product_distributes_over_min_and_max_everywhere() {
    let eq = semilinearity();
    for n in 1..=6usize {
        for m in brute_force_enumerate(n).unwrap() {
            assert!(satisfies(&m, &eq).unwrap());
        }
    }
}

#[test]
fn satisfaction_transfers_through_order_duality() {
    let equations: Vec<Equation> = vec![
        sigma(2),
        sigma(3),
        sigma(4),
        sigma_dual(3),
        gamma(3),
        "x1*x2 = x2*x1".parse().unwrap(),
        "x1 ^ x2 <= x1 v x2".parse().unwrap(),
    ];
    for n in 1..=6usize {
        for m in brute_force_enumerate(n).unwrap() {
            let dual = m.order_dual();
            for eq in &equations {
                assert_eq!(
                    satisfies(&m, eq).unwrap(),
                    satisfies(&dual, &eq.dual()).unwrap(),
                    "{eq} on a size-{n} algebra"
                );
            }
        }
    }
}

#[test]
fn absorbing_pairs_generate_the_same_principal_congruence_as_the_unit_pair() {
    for n in 2..=7usize {
        for w in enumerate_words(n, WordFilter::Sdi).unwrap() {
            let m = compose(&w);
            for a in 0..m.size() {
                for b in 0..m.size() {
                    if a != b && (m.mul(a, b) == a || m.mul(b, a) == a) {
                        assert_eq!(
                            principal_congruence(&m, a, b),
                            principal_congruence(&m, a, m.unit()),
                            "pair ({a},{b}) in {w}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn quotient_words_embed_into_the_original_word() {
    for n in 1..=6usize {
        for w in enumerate_words(n, WordFilter::All).unwrap() {
            let m = compose(&w);
            for c in all_congruences(&m) {
                let (q, _) = quotient(&m, &c);
                assert!(word_embeds(&decompose(&q), &w).is_some(), "{w} / {c}");
            }
        }
    }
}

#[test]
fn membership_is_reflexive_and_monotone_in_the_generator_set() {
    use SumComponent::*;
    for n in 1..=6usize {
        for w in enumerate_words(n, WordFilter::All).unwrap() {
            assert!(member(&w, std::slice::from_ref(&w)).unwrap(), "{w}");
        }
    }
    let gens1 = vec![SumWord::new(vec![C2, C2d])];
    let gens2 = vec![SumWord::new(vec![C2, C2d]), SumWord::new(vec![G3])];
    let gens3 = vec![
        SumWord::new(vec![C2, C2d]),
        SumWord::new(vec![G3]),
        SumWord::new(vec![D3, C2]),
    ];
    for n in 1..=5usize {
        for w in enumerate_words(n, WordFilter::All).unwrap() {
            let m1 = member(&w, &gens1).unwrap();
            let m2 = member(&w, &gens2).unwrap();
            let m3 = member(&w, &gens3).unwrap();
            assert!(!m1 || m2, "{w}");
            assert!(!m2 || m3, "{w}");
        }
    }
}

/// All element-level embeddings of `src` into `dst`, by exhausting maps.
fn element_embeddings(src: &FinOrdMonoid, dst: &FinOrdMonoid) -> Vec<ElementMap> {
    let mut found = Vec::new();
    let mut image = vec![0usize; src.size()];
    loop {
        let f = ElementMap::new(src.size(), dst.size(), image.clone());
        if check_map(src, dst, &f).is_embedding {
            found.push(f);
        }
        let mut i = src.size();
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            image[i] += 1;
            if image[i] < dst.size() {
                break;
            }
            image[i] = 0;
        }
    }
}

#[test]
fn word_compatibility_matches_element_level_restriction_search() {
    use SumComponent::*;
    let c2 = compose(&SumWord::new(vec![C2]));
    let c2d = compose(&SumWord::new(vec![C2d]));
    let g3 = compose(&SumWord::new(vec![G3]));
    let d3 = compose(&SumWord::new(vec![D3]));
    // The unique embeddings out of the two-element chains into the
    // absorbing letters.
    let c2_into_g3 = ElementMap::new(2, 3, vec![0, 1]);
    let c2_into_d3 = ElementMap::new(2, 3, vec![0, 1]);
    let c2d_into_g3 = ElementMap::new(2, 3, vec![1, 2]);
    let c2d_into_d3 = ElementMap::new(2, 3, vec![1, 2]);
    assert!(check_map(&c2, &g3, &c2_into_g3).is_embedding);
    assert!(check_map(&c2, &d3, &c2_into_d3).is_embedding);
    assert!(check_map(&c2d, &g3, &c2d_into_g3).is_embedding);
    assert!(check_map(&c2d, &d3, &c2d_into_d3).is_embedding);

    let words: Vec<SumWord> =
        (1..=4).flat_map(|n| enumerate_words(n, WordFilter::All).unwrap()).collect();

    for base in &words {
        let base_alg = compose(base);
        let mut arms = Vec::new();
        for target in &words {
            arms.extend(all_word_embeddings(base, target).unwrap());
        }
        for left in &arms {
            for right in &arms {
                let span = Span::new(left.clone(), right.clone()).unwrap();
                let left_alg = compose(&left.target);
                let right_alg = compose(&right.target);
                let i1 = left.lift();
                let i2 = right.lift();

                // Does the span restrict to one of the two forbidden spans,
                // in either arm order?
                let mut restricts = false;
                for (small, into_g3, into_d3) in [
                    (&c2, &c2_into_g3, &c2_into_d3),
                    (&c2d, &c2d_into_g3, &c2d_into_d3),
                ] {
                    let alphas = element_embeddings(small, &base_alg);
                    let betas_left = element_embeddings(&g3, &left_alg);
                    let gammas_right = element_embeddings(&d3, &right_alg);
                    let betas_right = element_embeddings(&g3, &right_alg);
                    let gammas_left = element_embeddings(&d3, &left_alg);
                    for alpha in &alphas {
                        let via_left = alpha.compose(&i1);
                        let via_right = alpha.compose(&i2);
                        let g3_left = betas_left.iter().any(|b| via_left == into_g3.compose(b));
                        let d3_right = gammas_right.iter().any(|g| via_right == into_d3.compose(g));
                        let g3_right = betas_right.iter().any(|b| via_right == into_g3.compose(b));
                        let d3_left = gammas_left.iter().any(|g| via_left == into_d3.compose(g));
                        if (g3_left && d3_right) || (g3_right && d3_left) {
                            restricts = true;
                        }
                    }
                }
                assert_eq!(is_compatible(&span), !restricts, "span over {base}");
            }
        }
    }
}
