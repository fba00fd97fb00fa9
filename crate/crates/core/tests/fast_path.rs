//! Worked examples where the combinatorial path is checked against the dense
//! oracle.

use num_traits::Zero;

use werner_core::oracle::{depolarise_n, twirl, OracleCaps, SchurWeylOracle};
use werner_core::rational::{int, ratio, to_f64};
use werner_core::spectral::{channel_output_spectrum, theorem2_bound, twirl_spectrum};
use werner_core::{alpha, dim_sym, Shape, TensorOperator, YoungFrame};

fn f(rows: &[usize], d: usize) -> YoungFrame {
    YoungFrame::new(rows, d).unwrap()
}

#[test]
fn single_row_four_sites_half_depolarised() {
    let oracle = SchurWeylOracle::new(2, 4, OracleCaps::default()).unwrap();
    let lambda = f(&[4, 0], 2);
    let q = ratio(1, 2);
    let dense = depolarise_n(&oracle.flat_state(&lambda).unwrap(), &q, oracle.caps()).unwrap();
    let fast = channel_output_spectrum(&lambda, &q, 2).unwrap();
    for (lp, w) in oracle.spectrum(&dense).unwrap() {
        assert_eq!(fast.get(&lp), w, "λ' = {lp}");
    }
    assert_eq!(fast.total(), int(1));
}

#[test]
fn one_site_twirl_support() {
    let oracle = SchurWeylOracle::new(2, 4, OracleCaps::default()).unwrap();
    let lambda = f(&[4, 0], 2);
    let a = twirl(
        &oracle.traced_with_mixed(&lambda, 1).unwrap(),
        oracle.caps(),
    )
    .unwrap();
    let support: Vec<YoungFrame> = oracle
        .spectrum(&a)
        .unwrap()
        .into_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(f, _)| f)
        .collect();
    assert_eq!(support, vec![f(&[4, 0], 2), f(&[3, 1], 2)]);
    let fast = twirl_spectrum(&lambda, 1, 2, false).unwrap();
    assert_eq!(fast.support(), support.iter().collect::<Vec<_>>());
}

#[test]
fn alpha_is_a_scaled_projector_overlap() {
    let caps = OracleCaps::default();
    let one = SchurWeylOracle::new(2, 1, caps).unwrap();
    let two = SchurWeylOracle::new(2, 2, caps).unwrap();
    let box1 = f(&[1], 2);
    let p1 = one.projector(&box1).unwrap();
    let product = p1.kron(p1).unwrap();
    for (lp, expected) in [(f(&[2], 2), int(3)), (f(&[1, 1], 2), int(1))] {
        let overlap = two.overlap(&lp, &product).unwrap();
        assert_eq!(overlap / int(dim_sym(&lp)), expected.clone());
        assert_eq!(alpha(&lp, &box1, &box1, 2), expected);
    }
}

/// `P_{(2,1)} ⊗ P_{(1)}` twirled: weights on `λ'` equal `dim F_λ' · α`.
#[test]
fn twirled_products_expand_in_alpha() {
    let caps = OracleCaps::default();
    let three = SchurWeylOracle::new(3, 3, caps).unwrap();
    let four = SchurWeylOracle::new(3, 4, caps).unwrap();
    let one = SchurWeylOracle::new(3, 1, caps).unwrap();
    let mu = f(&[2, 1], 3);
    let gamma = f(&[1], 3);
    let product = three
        .projector(&mu)
        .unwrap()
        .kron(one.projector(&gamma).unwrap())
        .unwrap();
    let t = twirl(&product, &caps).unwrap();
    for (lp, w) in four.spectrum(&t).unwrap() {
        assert_eq!(
            w,
            alpha(&lp, &mu, &gamma, 3) * int(dim_sym(&lp)),
            "λ' = {lp}"
        );
    }
}

#[test]
fn eight_site_bound_example() {
    let lambda = f(&[8, 0], 2);
    let lp = f(&[4, 4], 2);
    let oracle = SchurWeylOracle::new(2, 8, OracleCaps::default()).unwrap();
    let q = ratio(1, 4);
    let out = depolarise_n(&oracle.flat_state(&lambda).unwrap(), &q, oracle.caps()).unwrap();
    let measured = oracle.overlap(&lp, &out).unwrap();
    assert_eq!(
        measured,
        channel_output_spectrum(&lambda, &q, 2).unwrap().get(&lp)
    );
    assert!(to_f64(&measured) <= theorem2_bound(&lambda, &lp, 0.25, 8).unwrap());
}

#[test]
fn sweep_mode_moves_down_with_q() {
    let lambda = f(&[6, 0], 2);
    let mut last = usize::MAX;
    for i in 1..=9 {
        let t = channel_output_spectrum(&lambda, &ratio(i, 10), 2).unwrap();
        let first = t.mode().unwrap().row(0);
        assert!(first <= last, "q = {i}/10");
        last = first;
    }
}

#[test]
fn full_depolarisation_of_any_frame_is_uniform_over_the_space() {
    for (d, n) in [(2, 5), (3, 4)] {
        let oracle = SchurWeylOracle::new(d, n, OracleCaps::default()).unwrap();
        let dim = int((d as u64).pow(n as u32));
        for lambda in oracle.frames() {
            let out =
                depolarise_n(&oracle.flat_state(lambda).unwrap(), &int(1), oracle.caps()).unwrap();
            assert_eq!(
                out,
                TensorOperator::identity(d, n).scale(&(int(1) / dim.clone()))
            );
        }
    }
}
