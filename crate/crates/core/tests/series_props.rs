mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn addition_commutes(a in laurent(), b in laurent()) {
        check_add_commutes(&a, &b)?;
    }

    #[test]
    fn addition_associates(a in laurent(), b in laurent(), c in laurent()) {
        check_add_associates(&a, &b, &c)?;
    }

    #[test]
    fn negation_cancels(a in laurent()) {
        check_additive_inverse(&a)?;
    }

    #[test]
    fn multiplication_commutes(a in laurent(), b in laurent()) {
        check_mul_commutes(&a, &b)?;
    }

    #[test]
    fn multiplication_associates(a in laurent(), b in laurent(), c in laurent()) {
        check_mul_associates(&a, &b, &c)?;
    }

    #[test]
    fn multiplication_distributes(a in laurent(), b in laurent(), c in laurent()) {
        check_distributes(&a, &b, &c)?;
    }

    #[test]
    fn inverse_is_two_sided(a in unit_led()) {
        check_invert(&a)?;
    }

    #[test]
    fn log_undoes_exp(s in small_positive()) {
        check_exp_log(&s)?;
    }

    #[test]
    fn exp_turns_sums_into_products(a in small_positive(), b in small_positive()) {
        check_exp_additive(&a, &b)?;
    }

    #[test]
    fn shifts_compose(s in power_series(), i in 0u32..4, j in 0u32..4) {
        check_shift_semigroup(&s, i, j)?;
    }

    #[test]
    fn shift_respects_products(a in power_series(), b in power_series(), j in 1u32..4) {
        check_shift_is_ring_map(&a, &b, j)?;
    }

    #[test]
    fn truncation_is_idempotent(a in laurent(), t in -4i64..12) {
        let once = a.truncate(t);
        prop_assert_eq!(once.truncate(t), once.clone());
        prop_assert!(once.truncation() <= a.truncation());
    }
}
