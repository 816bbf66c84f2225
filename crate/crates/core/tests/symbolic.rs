use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selfsim::abelian::{abelian_asymptotic_eq, fraction_point, Rational};
use selfsim::catalog;
use selfsim::contraction::{asymptotically_equivalent, nucleus};
use selfsim::invsemi::{apollonian_apply, penrose_table, random_admissible, Apollonian, OmegaTransform};
use selfsim::words::{omega_eq, LeftWord, OmegaWord};
use selfsim::Error;

fn left_word() -> impl Strategy<Value = LeftWord> {
    (prop::collection::vec(0u8..2, 1..4), prop::collection::vec(0u8..2, 0..8))
        .prop_map(|(t, s)| LeftWord::new(t, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn equivalence_deciders_agree(u in left_word(), v in left_word()) {
        let g = catalog::group("adding_machine").unwrap();
        let n = nucleus(&g, 1000).unwrap();
        let ds = catalog::dyadic();
        prop_assert_eq!(asymptotically_equivalent(&n, &u, &v).unwrap(), abelian_asymptotic_eq(&ds, &u, &v).unwrap());
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(u in left_word(), v in left_word()) {
        let g = catalog::group("grigorchuk").unwrap();
        let n = nucleus(&g, 1000).unwrap();
        prop_assert!(asymptotically_equivalent(&n, &u, &u).unwrap());
        prop_assert_eq!(asymptotically_equivalent(&n, &u, &v).unwrap(), asymptotically_equivalent(&n, &v, &u).unwrap());
    }

    #[test]
    fn fraction_points_are_prefix_sums(u in prop::collection::vec(0u8..2, 0..8), v in prop::collection::vec(0u8..2, 0..8)) {
        let ds = catalog::dragon();
        let mut uv = u.clone();
        uv.extend_from_slice(&v);
        let a_u = ds.matrix().pow(u.len());
        let tail = a_u.apply(&fraction_point(&ds, &v).unwrap());
        let want: Vec<Rational> = fraction_point(&ds, &u).unwrap().into_iter().zip(tail).map(|(x, y)| x + y).collect();
        prop_assert_eq!(fraction_point(&ds, &uv).unwrap(), want);
    }

    #[test]
    fn apollonian_inversions_are_involutions(seed in any::<u64>(), i in 0u8..4) {
        let ap = Apollonian::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_admissible(ap.sft(), 6, 3, &mut rng);
        let twice = apollonian_apply(i, &apollonian_apply(i, &w).unwrap()).unwrap();
        prop_assert!(omega_eq(&twice, &w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn penrose_maps_preserve_admissibility(seed in any::<u64>(), map in prop::sample::select(vec!["L", "M", "S"])) {
        let table = penrose_table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_admissible(table.sft(), 8, 4, &mut rng);
        match table.apply_map(map, &w) {
            Ok(img) => {
                prop_assert!(table.sft().is_admissible_omega(&img).unwrap());
                let back = table.apply_map(map, &img).unwrap();
                prop_assert!(omega_eq(&back, &w));
            }
            Err(Error::OutOfDomain { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn omega_words_compare_by_value() {
    let a = OmegaWord::new(vec![0, 1], vec![0, 1]).unwrap();
    let b = OmegaWord::periodic(vec![0, 1]).unwrap();
    assert!(omega_eq(&a, &b));
}
