mod common;

use common::*;
use proptest::prelude::*;

use recasym::rational::{int, ratio};
use recasym::recurrence::Frame;
use recasym::{frame_solve, residual_check, solve_expansion};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kappa_cancels(kappa in small_rational()) {
        check_kappa_independent(&kappa)?;
    }

    #[test]
    fn common_factor_is_irrelevant(q in multiplier()) {
        check_scale_invariant(&q)?;
    }

    #[test]
    fn shifted_factorials_follow_stirling(s in -3i64..=3, k in 1usize..8) {
        let rec = shifted_factorial(s);
        let frame = frame_solve(&rec).unwrap();
        prop_assert_eq!(&frame.beta, &int(1));
        prop_assert_eq!(&frame.c, &int(0));
        prop_assert_eq!(&frame.alpha, &(ratio(1, 2) + int(s)));
        let exp = solve_expansion(&rec, &frame, k).unwrap();
        prop_assert!(residual_check(&rec, &exp).unwrap() >= k);
    }
}

#[test]
fn solver_is_deterministic() {
    let f = a85_frame(ratio(-1, 4));
    let a = solve_expansion(&a85(), &f, 20).unwrap();
    let b = solve_expansion(&a85(), &f, 20).unwrap();
    assert_eq!(a, b);
}

#[test]
fn solved_frame_matches_supplied_frame() {
    let frame = frame_solve(&a85()).unwrap();
    assert_eq!(frame, Frame::new(ratio(1, 2), int(1), int(0), int(0)));
    let auto = solve_expansion(&a85(), &frame, 9).unwrap();
    let manual = solve_expansion(&a85(), &a85_frame(ratio(-1, 4)), 9).unwrap();
    assert_eq!(auto.coeffs(), manual.coeffs());
    assert_eq!(auto.coeffs(), a85_nine().as_slice());
}

#[test]
fn leading_five_agree_with_reference_display() {
    let exp = solve_expansion(&a85(), &a85_frame(ratio(-1, 4)), 9).unwrap();
    assert_eq!(&exp.coeffs()[..5], &reference_nine()[..5]);
    // the displayed a_6 ..= a_9 do not satisfy the recurrence
    assert_ne!(&exp.coeffs()[5..], &reference_nine()[5..]);
}

#[test]
fn self_consistency_across_orders() {
    let f = a85_frame(ratio(-1, 4));
    for k in [0, 1, 2, 5, 13, 30] {
        let e = solve_expansion(&a85(), &f, k).unwrap();
        assert_eq!(e.K(), k);
        assert!(residual_check(&a85(), &e).unwrap() >= k, "k = {k}");
    }
}

#[test]
fn deeper_solves_extend_shallow_ones() {
    let f = a85_frame(int(0));
    let deep = solve_expansion(&a85(), &f, 24).unwrap();
    let shallow = solve_expansion(&a85(), &f, 11).unwrap();
    assert_eq!(&deep.coeffs()[..11], shallow.coeffs());
}
