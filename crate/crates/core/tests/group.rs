mod common;

use hexovoid::constructions::build_flag_hexagon;
use hexovoid::field::FiniteField;
use hexovoid::group::{aut_flag_hexagon_order, build_aut_flag_hexagon, Perm, PermGroup, StabChain};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn aut2() -> &'static PermGroup {
    static G: std::sync::OnceLock<PermGroup> = std::sync::OnceLock::new();
    G.get_or_init(|| {
        let f = FiniteField::of_order(2).unwrap();
        build_aut_flag_hexagon(&f, &build_flag_hexagon(&f)).unwrap()
    })
}

#[test]
fn canonicalization_suite_has_no_violations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rep = common::canonicalization_suite(&mut rng, 80, 12, aut2(), 7, 1000);
    assert!(rep.sets_checked >= 1000, "{rep:?}");
    assert_eq!(rep.violations(), 0, "{rep:?}");
}

#[test]
fn order_formula_matches_schreier_sims() {
    for (q, r) in [(2u32, 1u32), (3, 1), (4, 2), (5, 1)] {
        let f = FiniteField::of_order(q).unwrap();
        let g = build_aut_flag_hexagon(&f, &build_flag_hexagon(&f)).unwrap();
        assert_eq!(
            g.order(),
            aut_flag_hexagon_order(q as u64, r as u64),
            "q={q}"
        );
    }
}

#[test]
fn element_enumeration_matches_order() {
    let elems = aut2().chain().elements();
    assert_eq!(elems.len(), 336);
    let distinct: std::collections::HashSet<Vec<u32>> =
        elems.iter().map(|g| g.images().to_vec()).collect();
    assert_eq!(distinct.len(), 336);
}

#[test]
fn randomized_chain_agrees_with_deterministic() {
    let f = FiniteField::of_order(4).unwrap();
    let hex = build_flag_hexagon(&f);
    let det = build_aut_flag_hexagon(&f, &hex).unwrap();
    for seed in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rnd =
            PermGroup::with_randomized_chain(det.degree(), det.generators().to_vec(), &mut rng)
                .unwrap();
        assert_eq!(rnd.order(), 241920);
    }
}

#[test]
fn set_stabilizer_from_orbit() {
    let g = aut2();
    // a single flag: the orbit is all 21 flags
    let r = g.set_orbit_with_stabilizer(&[0], 1000).unwrap();
    assert_eq!(r.orbit_size, 21);
    assert_eq!(r.stabilizer_order, 16);
    for s in &r.stabilizer_gens {
        assert!(s.fixes(0));
        assert!(g.contains(s));
    }
    assert!(g.set_orbit_with_stabilizer(&[0, 1, 2, 3], 10).is_err());
}

#[test]
fn generators_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    aut2().save(&path).unwrap();
    let back = PermGroup::load(&path).unwrap();
    assert_eq!(back.order(), 336);
    std::fs::write(&path, r#"{"degree": 3, "generators": [[0, 0, 1]]}"#).unwrap();
    assert!(PermGroup::load(&path).is_err());
}

fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn composition_and_inverse(a in arb_perm(9), b in arb_perm(9), x in 0u32..9) {
        prop_assert_eq!(a.then(&b).apply(x), b.apply(a.apply(x)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert!(a.pow(a.order() as u32).is_identity());
    }

    #[test]
    fn chain_membership_is_exact(a in arb_perm(7), b in arb_perm(7), c in arb_perm(7)) {
        let g = PermGroup::new(7, vec![a.clone(), b.clone()]).unwrap();
        let chain = StabChain::new(7, &[a.clone(), b.clone()], &[]);
        prop_assert_eq!(chain.order(), g.order());
        prop_assert!(g.contains(&a.then(&b)));
        let elems = chain.elements();
        let brute = elems.iter().any(|e| e == &c);
        prop_assert_eq!(g.contains(&c), brute);
    }

    #[test]
    fn smallest_image_is_constant_on_orbits(set in proptest::sample::subsequence((0u32..35).collect::<Vec<_>>(), 0..12), seed in any::<u64>()) {
        let g = aut2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = g.random_element(&mut rng);
        let canon = g.smallest_image_set(&set);
        prop_assert_eq!(g.smallest_image_set(&h.apply_set(&set)), canon.clone());
        prop_assert_eq!(g.smallest_image_set(&canon), canon.clone());
        prop_assert!(canon <= set);
    }
}
