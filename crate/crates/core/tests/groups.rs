use proptest::prelude::*;

use selfsim::catalog;
use selfsim::contraction::nucleus;
use selfsim::group::{Element, Gen, Group};
use selfsim::schreier::{covering_check, generator_set, level_schreier};

const MAX: usize = 1 << 16;

fn element(g: &Group, letters: &[(usize, bool)]) -> Element {
    Element::from_word(letters.iter().map(|&(i, inv)| {
        let s = Gen::new(i % g.num_generators());
        if inv {
            s.inv()
        } else {
            s
        }
    }))
}

fn word_strategy() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..8, any::<bool>()), 0..12)
}

fn tree_word(d: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..d as u8, 0..10)
}

proptest! {
    #[test]
    fn action_is_a_right_action(u in word_strategy(), v in word_strategy(), w in tree_word(2)) {
        let g = catalog::group("grigorchuk").unwrap();
        let (a, b) = (element(&g, &u), element(&g, &v));
        let ab = g.act(&a.mul(&b), &w).unwrap();
        prop_assert_eq!(ab, g.act(&b, &g.act(&a, &w).unwrap()).unwrap());
    }

    #[test]
    fn sections_compose(u in word_strategy(), v in tree_word(3), x in 0u8..3) {
        let g = catalog::group("fabrykowski_gupta").unwrap();
        let a = element(&g, &u);
        let mut vx = v.clone();
        vx.push(x);
        let deep = g.restriction(&g.restriction(&a, &v).unwrap(), &[x]).unwrap();
        prop_assert!(g.equal(&deep, &g.restriction(&a, &vx).unwrap()));
    }

    #[test]
    fn word_problem_agrees_with_level_action(u in word_strategy()) {
        let g = catalog::group("grigorchuk").unwrap();
        let a = element(&g, &u);
        if g.is_trivial(&a) {
            for n in 0..=8 {
                prop_assert!(g.act_level(&a, n, MAX).unwrap().is_identity());
            }
        }
        prop_assert!(g.is_trivial(&a.mul(&a.inverse())));
    }

    #[test]
    fn deep_sections_land_in_the_nucleus(u in word_strategy(), v in tree_word(2)) {
        let g = catalog::group("grigorchuk").unwrap();
        let n = nucleus(&g, 1000).unwrap();
        let a = element(&g, &u);
        let depth = 2 * u.len().max(1);
        let mut vertex = v.clone();
        vertex.resize(depth.max(v.len()), 0);
        prop_assert!(n.contains(&g, &g.restriction(&a, &vertex).unwrap()));
    }
}

#[test]
fn nucleus_is_closed_under_sections() {
    for name in ["adding_machine", "grigorchuk", "fabrykowski_gupta", "sierpinski_gasket", "img_z2_minus_1"] {
        let g = catalog::group(name).unwrap();
        let n = nucleus(&g, 1000).unwrap();
        for e in n.elements() {
            for x in 0..g.degree() as u8 {
                assert!(n.contains(&g, &g.restriction(e, &[x]).unwrap()), "{name}: {} at {x}", g.render(e));
            }
        }
        // Minimality: every element is a section of some element, with the cycle back to itself.
        for e in n.elements() {
            let reachable = (0..n.len()).any(|i| {
                (0..g.degree() as u8).any(|x| g.equal(&g.restriction(&n.elements()[i], &[x]).unwrap(), e))
            });
            assert!(reachable, "{name}: {} is not a section of the nucleus", g.render(e));
        }
    }
}

#[test]
fn schreier_graphs_are_regular_and_cover() {
    for name in ["adding_machine", "grigorchuk", "fabrykowski_gupta", "img_z2_minus_1", "lamplighter"] {
        let g = catalog::group(name).unwrap();
        let gens = generator_set(&g, None).unwrap();
        for n in 0..=5 {
            let graph = level_schreier(&g, &gens, n, MAX).unwrap();
            let size = g.degree().pow(n as u32);
            assert_eq!(graph.num_vertices(), size);
            assert_eq!(graph.edges().len(), size * gens.len());
            assert!((0..size).all(|v| graph.out_degree(v) == gens.len()));
            assert!(graph.simplicial().is_connected(), "{name} level {n} is not connected");
            if n < 5 {
                assert!(covering_check(&g, &gens, n, MAX).unwrap());
            }
        }
    }
}

#[test]
fn adding_machine_schreier_graphs_are_cycles() {
    let g = catalog::group("adding_machine").unwrap();
    let gens = generator_set(&g, None).unwrap();
    for n in 2..=8 {
        assert!(level_schreier(&g, &gens, n, 1 << 10).unwrap().simplicial().is_cycle());
    }
}
