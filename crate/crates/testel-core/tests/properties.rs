//! Property suites for the algebraic invariants: group laws and the word
//! metric, folding confluence and Schreier counts, the exponent-functional
//! homomorphism, Dehn reduction monotonicity, and the net/certificate
//! contracts. The word-problem oracle used against `is_trivial` is an
//! independent bounded rewriting search, not a second call into the
//! implementation.

use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;

use testel_core::density::{classify, Bucket};
use testel_core::stallings::{
    rewrite_in_schreier, schreier_generators, substitute, Endomorphism, SubgroupGraph,
};
use testel_core::surface::{
    dehn_reduce, exponent_sums, is_trivial, quotient_separate, QuotientBudget, SurfacePresentation,
    Verdict,
};
use testel_core::testel::{
    frattini_adjust, in_frattini, net_project_free, Certificate, FrattiniLayer, NonOrientableNet,
};
use testel_core::word::{ball, ball_size, sample_sphere, Letter, SphereIter, Word};

fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank as i32, prop::bool::ANY), 0..=max_len).prop_map(move |raw| {
        let codes: Vec<i32> = raw
            .into_iter()
            .map(|(i, pos)| if pos { i } else { -i })
            .collect();
        Word::from_codes(rank, &codes).unwrap()
    })
}

proptest! {
    #[test]
    fn reduction_is_idempotent(w in arb_word(3, 24)) {
        let again = Word::from_letters(3, w.letters().iter().copied()).unwrap();
        prop_assert_eq!(&again, &w);
    }

    #[test]
    fn multiplication_is_associative(
        u in arb_word(2, 12), v in arb_word(2, 12), w in arb_word(2, 12)
    ) {
        prop_assert_eq!(u.multiply(&v).multiply(&w), u.multiply(&v.multiply(&w)));
    }

    #[test]
    fn inversion_is_an_involution(w in arb_word(3, 20)) {
        prop_assert!(w.multiply(&w.inverse()).is_identity());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn word_metric_satisfies_the_axioms(
        u in arb_word(2, 12), v in arb_word(2, 12), w in arb_word(2, 12)
    ) {
        prop_assert_eq!(u.distance(&u), 0);
        prop_assert_eq!(u.distance(&v), v.distance(&u));
        prop_assert!(u.distance(&w) <= u.distance(&v) + v.distance(&w));
        prop_assert_eq!(u.distance(&v) == 0, u == v);
    }

    #[test]
    fn length_is_subadditive(u in arb_word(2, 15), v in arb_word(2, 15)) {
        let product = u.multiply(&v);
        prop_assert!(product.len() <= u.len() + v.len());
        prop_assert!(u.len().abs_diff(v.len()) <= product.len());
    }

    #[test]
    fn word_text_round_trips(w in arb_word(4, 16)) {
        let text = w.to_string();
        prop_assert_eq!(Word::parse(4, &text).unwrap(), w);
    }

    #[test]
    fn folding_is_confluent_under_generator_permutations(
        gens in prop::collection::vec(arb_word(2, 6), 1..4),
        queries in prop::collection::vec(arb_word(2, 8), 8),
        rotation in 0usize..4,
    ) {
        let graph = SubgroupGraph::build(2, &gens);
        let mut shuffled = gens.clone();
        let len = shuffled.len().max(1);
        shuffled.rotate_left(rotation % len);
        shuffled.reverse();
        let other = SubgroupGraph::build(2, &shuffled);
        // canonical numbering makes confluence literal graph equality
        prop_assert_eq!(&graph, &other);
        for q in &queries {
            prop_assert_eq!(graph.contains(q), other.contains(q));
        }
    }

    #[test]
    fn generators_and_their_products_are_members(
        gens in prop::collection::vec(arb_word(2, 5), 1..4),
        picks in prop::collection::vec((0usize..4, prop::bool::ANY), 0..6),
    ) {
        let graph = SubgroupGraph::build(2, &gens);
        for g in &gens {
            prop_assert!(graph.contains(g));
        }
        let mut product = Word::identity(2);
        for (i, invert) in picks {
            let g = &gens[i % gens.len()];
            product = if invert { product.multiply(&g.inverse()) } else { product.multiply(g) };
        }
        prop_assert!(graph.contains(&product));
    }

    #[test]
    fn surjectivity_is_stable_under_nielsen_postcomposition(
        img1 in arb_word(2, 3), img2 in arb_word(2, 3)
    ) {
        let phi = Endomorphism::new(vec![img1, img2]);
        let nielsen = Endomorphism::new(vec![
            Word::parse(2, "x1 x2").unwrap(),
            Word::generator(2, 2),
        ]);
        let composed = Endomorphism::new(
            phi.images().iter().map(|im| nielsen.apply(im)).collect(),
        );
        prop_assert_eq!(phi.is_surjective(), composed.is_surjective());
    }

    #[test]
    fn exponent_sums_form_a_homomorphism(u in arb_word(4, 12), v in arb_word(4, 12)) {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let su = exponent_sums(&u, Some(&pres), 0).unwrap();
        let sv = exponent_sums(&v, Some(&pres), 0).unwrap();
        let sprod = exponent_sums(&u.multiply(&v), Some(&pres), 0).unwrap();
        let sinv = exponent_sums(&u.inverse(), Some(&pres), 0).unwrap();
        for i in 0..4 {
            prop_assert_eq!(sprod.entries[i], su.entries[i] + sv.entries[i]);
            prop_assert_eq!(sinv.entries[i], -su.entries[i]);
        }
    }

    #[test]
    fn relator_conjugates_have_zero_functionals_and_reduce_away(g in arb_word(4, 8)) {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let conj = g.multiply(&pres.relator()).multiply(&g.inverse());
        let sums = exponent_sums(&conj, Some(&pres), 0).unwrap();
        prop_assert!(sums.is_zero());
        prop_assert!(dehn_reduce(&conj, &pres).is_identity());
    }

    #[test]
    fn dehn_reduction_is_monotone_and_a_fixpoint(w in arb_word(4, 24)) {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let reduced = dehn_reduce(&w, &pres);
        prop_assert!(reduced.len() <= w.len());
        prop_assert_eq!(dehn_reduce(&reduced, &pres), reduced);
    }

    #[test]
    fn quotient_witnesses_reverify(w in arb_word(4, 10)) {
        let pres = SurfacePresentation::orientable(2).unwrap();
        let budget = QuotientBudget { max_degree: 6, candidates_per_degree: 400 };
        if let Some(witness) = quotient_separate(&w, &pres, &budget) {
            prop_assert!(witness.verify(&pres, &w));
        }
    }

    #[test]
    fn adjustment_multiplier_is_short_and_lands_in_the_layer(
        w in arb_word(2, 10), p in prop::sample::select(vec![2u32, 3, 5])
    ) {
        let adj = frattini_adjust(&w, p, None).unwrap();
        prop_assert!(in_frattini(&adj.word, p, None).unwrap());
        let multiplier = w.inverse().multiply(&adj.word);
        prop_assert!(multiplier.len() as u64 <= (p as u64 - 1) * 2);
        prop_assert!(adj.cost(p) <= (p as u64 - 1) * 2);
    }

    #[test]
    fn free_net_results_satisfy_their_contract(w in arb_word(2, 8)) {
        let result = net_project_free(&w, 2).unwrap();
        prop_assert!(result.distance <= result.bound);
        prop_assert!(!result.output.is_identity());
        prop_assert!(in_frattini(&result.output, 2, None).unwrap());
        prop_assert_eq!(w.distance(&result.output) as u64, result.distance);
        prop_assert_eq!(result.bound, 4);
    }

    #[test]
    fn negative_certificates_reverify(w in arb_word(2, 5)) {
        if let (Bucket::Negative, Certificate::Negative { witness, .. }) =
            classify(&w, 1).unwrap()
        {
            prop_assert_eq!(witness.apply(&w), w);
            prop_assert!(!witness.is_surjective());
        }
    }
}

#[test]
fn ball_formula_agrees_with_enumeration_through_radius_eight() {
    for k in 0..=8usize {
        let counted = ball(2, k).count() as u64;
        assert_eq!(ball_size(2, k), counted.into(), "radius {k}");
    }
}

/// Random finite-index subgroups from permutation actions: the Schreier
/// generator count must follow Nielsen-Schreier, and rewriting followed by
/// evaluation must reproduce the element.
#[test]
fn schreier_counts_and_rewriting_on_random_covers() {
    for seed in 0..12u64 {
        let rank = 2 + (seed as usize) % 2;
        let degree = 3 + (seed as usize) % 4;
        // random bijections per generator, seeded via sphere sampling
        let perms: Vec<Vec<usize>> = (0..rank)
            .map(|i| {
                let mut perm: Vec<usize> = (0..degree).collect();
                let scramble = sample_sphere(2, 12, seed * 31 + i as u64);
                for (pos, l) in scramble.letters().iter().enumerate() {
                    perm.swap(pos % degree, l.ord() % degree);
                }
                perm
            })
            .collect();
        let graph = SubgroupGraph::from_action(rank, degree, |v, i| perms[i][v]).unwrap();
        let index = graph.index().expect("actions give coverings");
        let transversal = graph.schreier_transversal().unwrap();
        let gens = schreier_generators(&graph, &transversal).unwrap();
        assert_eq!(gens.len(), 1 + index * (rank - 1), "seed {seed}");

        // random products of generators rewrite and evaluate back
        for trial in 0..8u64 {
            let mut product = Word::identity(rank);
            let path = sample_sphere(2, 6, seed * 97 + trial);
            for l in path.letters() {
                let g = &gens[l.ord() % gens.len()];
                product = if l.is_positive() {
                    product.multiply(g)
                } else {
                    product.multiply(&g.inverse())
                };
            }
            let rewritten = rewrite_in_schreier(&graph, &transversal, &product).unwrap();
            assert_eq!(substitute(rank, &gens, &rewritten), product);
        }
    }
}

// ---------------------------------------------------------------------------
// word-problem oracle

/// Independent bounded rewriting search: breadth-first over all words
/// reachable by replacing a relator-conjugate prefix of length >= half with
/// the inverse of its complement (never growing the word), plus free
/// reduction. Sound because every move preserves the element; complete for
/// triviality at this length cap because a trivial word always admits a
/// strictly shrinking replacement.
fn rewriting_oracle_is_trivial(w: &Word, pres: &SurfacePresentation) -> bool {
    if w.is_identity() {
        return true;
    }
    let relator = pres.relator();
    let rl = relator.len();
    let half = rl / 2;
    let mut table: Vec<Vec<Letter>> = Vec::new();
    for base in [relator.clone(), relator.inverse()] {
        for shift in 0..rl {
            let mut conj: Vec<Letter> = Vec::with_capacity(rl);
            conj.extend_from_slice(&base.letters()[shift..]);
            conj.extend_from_slice(&base.letters()[..shift]);
            if !table.contains(&conj) {
                table.push(conj);
            }
        }
    }

    let cap = w.len();
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
    seen.insert(w.letters().to_vec());
    queue.push_back(w.letters().to_vec());
    while let Some(cur) = queue.pop_front() {
        assert!(
            seen.len() < 400_000,
            "oracle search blew past the desk budget"
        );
        for pos in 0..cur.len() {
            for entry in &table {
                let max = entry.len().min(cur.len() - pos);
                let mut h = 0;
                while h < max && entry[h] == cur[pos + h] {
                    h += 1;
                }
                // any split with h >= half keeps the length within the cap
                for take in half..=h {
                    if take == 0 {
                        continue;
                    }
                    let mut next: Vec<Letter> = Vec::with_capacity(cur.len() + rl);
                    next.extend_from_slice(&cur[..pos]);
                    for l in entry[take..].iter().rev() {
                        push_reduced(&mut next, l.inverse());
                    }
                    for &l in &cur[pos + take..] {
                        push_reduced(&mut next, l);
                    }
                    if next.is_empty() {
                        return true;
                    }
                    if next.len() <= cap && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    false
}

fn push_reduced(buf: &mut Vec<Letter>, l: Letter) {
    if buf.last().is_some_and(|&last| last == l.inverse()) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

#[test]
fn triviality_agrees_with_the_rewriting_oracle() {
    let pres = SurfacePresentation::orientable(2).unwrap();
    // 200 random words of length <= 20
    for seed in 0..200u64 {
        let len = (seed % 21) as usize;
        let w = sample_sphere(4, len, seed);
        let verdict = is_trivial(&w, &pres);
        let oracle = rewriting_oracle_is_trivial(&w, &pres);
        assert_ne!(verdict, Verdict::Unknown, "genus two is decidable");
        assert_eq!(verdict == Verdict::Yes, oracle, "word {w}");
    }
    // products of relator conjugates are trivial by construction
    for seed in 0..20u64 {
        let g1 = sample_sphere(4, (seed % 5) as usize, 1000 + seed);
        let g2 = sample_sphere(4, (seed % 4) as usize, 2000 + seed);
        let conj = |g: &Word, invert: bool| {
            let r = if invert {
                pres.relator().inverse()
            } else {
                pres.relator()
            };
            g.multiply(&r).multiply(&g.inverse())
        };
        let w = conj(&g1, seed % 2 == 0).multiply(&conj(&g2, seed % 3 == 0));
        assert_eq!(
            is_trivial(&w, &pres),
            Verdict::Yes,
            "built trivial from {g1}, {g2}"
        );
        assert!(rewriting_oracle_is_trivial(&w, &pres));
    }
}

#[test]
fn nonorientable_nets_respect_cost_and_functionals_on_random_words() {
    let net = NonOrientableNet::new(3).unwrap();
    let pres = SurfacePresentation::non_orientable(3).unwrap();
    for seed in 0..40u64 {
        let len = (seed % 7) as usize;
        let input = sample_sphere(3, len, 500 + seed);
        let result = net.project(&input).unwrap();
        assert!(result.distance <= 10, "cost for {input}");
        let sums = exponent_sums(&result.output, Some(&pres), 3).unwrap();
        assert!(sums.is_zero(), "functionals for {input}");
    }
}

#[test]
fn sphere_streams_partition_across_prefixes() {
    // the census fan-out contract: length-1 prefixes partition each sphere
    for k in 1..=6usize {
        let whole: Vec<Word> = SphereIter::new(2, k).collect();
        let mut sharded: Vec<Word> = Vec::new();
        for ord in 0..4 {
            let prefix = Word::from_letters(2, [Letter::from_ord(ord)]).unwrap();
            sharded.extend(SphereIter::with_prefix(&prefix, k));
        }
        assert_eq!(whole, sharded, "radius {k}");
    }
}

/// Dual route for the free second-layer test: the layer's coordinate vector
/// must agree with the exponent vector of the general Schreier rewriting
/// (for free groups the minimal generators are exactly the raw ones).
#[test]
fn layer_coordinates_agree_with_schreier_rewriting_in_the_free_case() {
    for p in [2u32, 3] {
        let layer = FrattiniLayer::new(None, 2, p).unwrap();
        let graph = layer.graph();
        let transversal = graph.schreier_transversal().unwrap();
        for seed in 0..60u64 {
            // random element of the kernel: adjust a random word into it
            let raw = sample_sphere(2, (seed % 9) as usize, 3000 + seed);
            let member = frattini_adjust(&raw, p, None).unwrap().word;
            let coords = layer.coordinates(&member).unwrap();
            let rewritten = rewrite_in_schreier(graph, &transversal, &member).unwrap();
            let mut expected = vec![0i64; layer.raw_count()];
            for l in rewritten.letters() {
                expected[l.index() - 1] += if l.is_positive() { 1 } else { -1 };
            }
            for (got, want) in coords.iter().zip(&expected) {
                assert_eq!(
                    *got as i64,
                    want.rem_euclid(p as i64),
                    "p = {p}, member {member}"
                );
            }
        }
    }
}

/// Layer coordinates are a homomorphism to (Z/p)^k and vanish on relator
/// conjugates, which is exactly what makes the layer-two test well defined
/// on the group rather than on words.
#[test]
fn layer_coordinates_are_homomorphic_and_kill_boundaries() {
    let pres = SurfacePresentation::orientable(2).unwrap();
    let p = 3u32;
    let layer = FrattiniLayer::new(Some(&pres), 4, p).unwrap();
    let member = |seed: u64| {
        let raw = sample_sphere(4, (seed % 7) as usize, seed);
        frattini_adjust(&raw, p, Some(&pres)).unwrap().word
    };
    for seed in 0..25u64 {
        let a = member(4000 + seed);
        let b = member(6000 + seed);
        let ca = layer.coordinates(&a).unwrap();
        let cb = layer.coordinates(&b).unwrap();
        let cab = layer.coordinates(&a.multiply(&b)).unwrap();
        for i in 0..ca.len() {
            assert_eq!(cab[i] as u32, (ca[i] as u32 + cb[i] as u32) % p, "additivity at {i}");
        }
        let cinv = layer.coordinates(&a.inverse()).unwrap();
        for i in 0..ca.len() {
            assert_eq!((ca[i] as u32 + cinv[i] as u32) % p, 0, "negation at {i}");
        }
        // conjugates of the relator rewrite into the boundary span
        let g = sample_sphere(4, (seed % 5) as usize, 8000 + seed);
        let conj = g.multiply(&pres.relator()).multiply(&g.inverse());
        assert_eq!(layer.in_second_layer(&conj), Ok(true), "boundary for {g}");
        // and multiplying a member by one never changes its coordinates
        let shifted = layer.coordinates(&a.multiply(&conj)).unwrap();
        assert_eq!(shifted, ca, "coordinates must be constant on cosets");
    }
}
