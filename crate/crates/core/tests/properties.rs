use proptest::prelude::*;

use instcone::bent::{nu, tau};
use instcone::knot::random_knot;
use instcone::surgery::{integer_surgery_dim, invariants, zero_surgery_dims};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_knots_validate(seed in any::<u64>()) {
        let k = random_knot(seed);
        prop_assert!(k.dim() <= 12);
        prop_assert!(k.validate().is_valid());
    }

    #[test]
    fn mirror_and_reverse_are_involutions(seed in any::<u64>()) {
        let k = random_knot(seed);
        prop_assert!(k.mirror().mirror().same_data(&k));
        prop_assert!(k.reverse().reverse().same_data(&k));
        prop_assert!(k.mirror().validate().is_valid());
        prop_assert!(k.reverse().validate().is_valid());
    }

    #[test]
    fn tau_and_nu_bounds(seed in any::<u64>()) {
        let k = random_knot(seed);
        let (t, n) = (tau(&k).unwrap(), nu(&k).unwrap());
        prop_assert!(t.abs() <= 2 * k.genus);
        prop_assert!(n == t || n == t + 2);
        prop_assert_eq!(tau(&k.mirror()).unwrap(), -t);
        prop_assert_eq!(tau(&k.reverse()).unwrap(), t);
    }

    #[test]
    fn surgery_dims_have_slope_parity(seed in any::<u64>(), n in -6i64..=6) {
        prop_assume!(n != 0);
        let k = random_knot(seed);
        let d = integer_surgery_dim(&k, n).unwrap();
        // The Euler characteristic of n-surgery is |n|.
        prop_assert!(d >= n.unsigned_abs() as usize);
        prop_assert_eq!((d as i64 - n).rem_euclid(2), 0);
        prop_assert_eq!(d, integer_surgery_dim(&k.mirror(), -n).unwrap());
    }

    #[test]
    fn affine_law_when_tau_nonzero(seed in any::<u64>(), n in -6i64..=6) {
        prop_assume!(n != 0);
        let k = random_knot(seed);
        let inv = invariants(&k).unwrap();
        if let (Some(ns), Some(r0)) = (inv.nu_sharp, inv.r0) {
            let d = integer_surgery_dim(&k, n).unwrap();
            prop_assert_eq!(d as i64, r0 as i64 + (n - ns).abs());
        }
    }

    #[test]
    fn zero_surgery_gradings_cover_the_genus(seed in any::<u64>()) {
        let k = random_knot(seed);
        let z = zero_surgery_dims(&k).unwrap();
        prop_assert!(z.contains_key(&0));
        for s in 1 - k.genus..=k.genus - 1 {
            prop_assert!(z.contains_key(&s));
        }
    }
}
