use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use werner_core::frames::{l1_distance, pinsker_lower_bound, Shape};
use werner_core::oracle::{depolarise_n, perm_operator, twirl, OracleCaps};
use werner_core::rational::{parse_rational, ratio, to_exact_string};
use werner_core::{
    enumerate_frames, rel_entropy, Permutation, ProbabilityPair, TensorOperator, YoungFrame,
};

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn operator(d: usize, n: usize) -> impl Strategy<Value = TensorOperator> {
    let dim = d.pow(n as u32);
    prop::collection::vec((0..dim, 0..dim, -6i64..=6, 1i64..=5), 0..3 * dim).prop_map(
        move |entries| {
            TensorOperator::from_entries(
                d,
                n,
                entries.into_iter().map(|(r, c, p, q)| (r, c, ratio(p, q))),
            )
            .unwrap()
        },
    )
}

fn frame() -> impl Strategy<Value = YoungFrame> {
    (1usize..=4, 0usize..=10).prop_flat_map(|(d, n)| {
        let frames = enumerate_frames(d, n).unwrap();
        prop::sample::select(frames)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_matches_word_action(
        (a, b) in (1usize..=7).prop_flat_map(|n| (permutation(n), permutation(n)))
    ) {
        let n = a.len();
        let word: Vec<u8> = (0..n as u8).collect();
        prop_assert_eq!(a.compose(&b).act_on_word(&word), a.act_on_word(&b.act_on_word(&word)));
        prop_assert_eq!(a.compose(&a.inverse()), Permutation::identity(n));
    }

    #[test]
    fn permutation_operators_are_a_representation(
        (s, t) in (1usize..=4).prop_flat_map(|n| (permutation(n), permutation(n)))
    ) {
        let caps = OracleCaps::default();
        let bs = perm_operator(&s, 2, &caps).unwrap();
        let bt = perm_operator(&t, 2, &caps).unwrap();
        let bst = perm_operator(&s.compose(&t), 2, &caps).unwrap();
        prop_assert_eq!(bs.matmul(&bt).unwrap(), bst);
        prop_assert_eq!(bs.transpose(), perm_operator(&s.inverse(), 2, &caps).unwrap());
    }

    #[test]
    fn frame_text_round_trips(f in frame()) {
        let text = f.to_string();
        prop_assert_eq!(YoungFrame::parse(&text, f.d()).unwrap(), f.clone());
        let short: Vec<String> = f.parts().iter().map(|r| r.to_string()).collect();
        prop_assert_eq!(YoungFrame::parse(&short.join(","), f.d()).unwrap(), f);
    }

    #[test]
    fn rationals_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let x = ratio(p, q);
        prop_assert_eq!(parse_rational(&to_exact_string(&x)).unwrap(), x);
    }

    #[test]
    fn pinsker_holds(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (r, s) = (ProbabilityPair::new(a).unwrap(), ProbabilityPair::new(b).unwrap());
        let d = rel_entropy(&r, &s);
        prop_assert!(d >= pinsker_lower_bound(&r, &s) - 1e-12);
        prop_assert!(d >= 0.0);
        prop_assert!((l1_distance(&r, &s) - 2.0 * (a - b).abs()).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(a in operator(2, 3), mask in 0u8..8) {
        let sites: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
        let reduced = a.partial_trace(&sites).unwrap();
        prop_assert_eq!(reduced.n(), 3 - sites.len());
        prop_assert_eq!(reduced.trace(), a.trace());
        prop_assert_eq!(reduced.insert_maximally_mixed(&sites).unwrap().trace(), a.trace());
    }

    #[test]
    fn twirl_is_an_invariant_projection(a in operator(2, 3), s in permutation(3)) {
        let caps = OracleCaps::default();
        let t = twirl(&a, &caps).unwrap();
        prop_assert_eq!(t.trace(), a.trace());
        prop_assert_eq!(twirl(&t, &caps).unwrap(), t.clone());
        prop_assert_eq!(t.conjugate_by(&s).unwrap(), t);
    }

    #[test]
    fn channel_preserves_trace(a in operator(3, 2), p in 0i64..=8) {
        let q = ratio(p, 8);
        let out = depolarise_n(&a, &q, &OracleCaps::default()).unwrap();
        prop_assert_eq!(out.trace(), a.trace());
        if q.is_zero() {
            prop_assert_eq!(out, a);
        } else if q == BigRational::one() {
            let mixed = TensorOperator::identity(3, 2).scale(&(a.trace() / ratio(9, 1)));
            prop_assert_eq!(out, mixed);
        }
    }
}
