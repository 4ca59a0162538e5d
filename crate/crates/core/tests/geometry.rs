mod common;

use hexovoid::constructions::{build_dual_split_cayley, build_flag_hexagon, build_pg2};
use hexovoid::field::FiniteField;
use hexovoid::geometry::{load_geometry, save_geometry, validate_gp, Element, Geometry};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn metric_identities_exhaustive_on_h2_dual() {
    let h = build_dual_split_cayley(&FiniteField::of_order(2).unwrap()).unwrap();
    let n = h.geometry.num_vertices();
    let pairs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v)));
    assert_eq!(common::metric_violations(&h.geometry, pairs), 0);
}

#[test]
fn metric_identities_on_flag_hexagons() {
    for q in [2, 3, 4] {
        let g = build_flag_hexagon(&FiniteField::of_order(q).unwrap()).geometry;
        let n = g.num_vertices();
        let pairs = (0..n).step_by(7).flat_map(|u| (0..n).map(move |v| (u, v)));
        assert_eq!(common::metric_violations(&g, pairs), 0, "q={q}");
    }
}

#[test]
fn classical_geometries_validate() {
    for q in [2, 3, 4, 5] {
        let f = FiniteField::of_order(q).unwrap();
        let pg = validate_gp(&build_pg2(&f).geometry, 3);
        assert!(pg.is_valid, "PG(2,{q}): {:?}", pg.failure_reason);
        assert_eq!((pg.s, pg.t), (Some(q as usize), Some(q as usize)));
        let fh = validate_gp(&build_flag_hexagon(&f).geometry, 6);
        assert!(fh.is_valid, "H({q},1): {:?}", fh.failure_reason);
        assert_eq!((fh.s, fh.t), (Some(q as usize), Some(1)));
    }
}

#[test]
fn girth_and_diameter_from_independent_bfs() {
    let h = build_dual_split_cayley(&FiniteField::of_order(2).unwrap())
        .unwrap()
        .geometry;
    let n = h.num_vertices();
    let mut girth = u32::MAX;
    let mut diameter = 0;
    for s in 0..n {
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in h.neighbors(u) {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    girth = girth.min(dist[u] + dist[w] + 1);
                }
            }
        }
        diameter = diameter.max(*dist.iter().max().unwrap());
    }
    assert_eq!((girth, diameter), (12, 6));
    assert_eq!(h.diameter(), Some(6));
}

#[test]
fn pentagon_is_not_a_hexagon() {
    // ordinary pentagon: five points, five lines of two points
    let g = Geometry::new(
        "C5",
        5,
        (0..5)
            .map(|i| vec![i.min((i + 1) % 5), i.max((i + 1) % 5)])
            .collect(),
    )
    .unwrap();
    let r = validate_gp(&g, 6);
    assert!(!r.is_valid);
    assert!(validate_gp(&g, 5).is_valid);
}

#[test]
fn balls_in_h2_dual() {
    let h = build_dual_split_cayley(&FiniteField::of_order(2).unwrap())
        .unwrap()
        .geometry;
    // 1 + s(t+1) + s²t(t+1) + s³t²(t+1) points within distance 0..=3 of a point
    let sizes: Vec<usize> = (0..=3)
        .map(|i| h.ball(Element::Point(0), i).len())
        .collect();
    assert_eq!(sizes, vec![1, 7, 31, 63]);
    assert_eq!(
        h.ball(Element::Line(0), 0),
        h.line(0).iter().map(|&p| p as usize).collect::<Vec<_>>()
    );
}

#[test]
fn geometry_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h2.json");
    let h = build_dual_split_cayley(&FiniteField::of_order(2).unwrap())
        .unwrap()
        .geometry;
    save_geometry(&h, &path).unwrap();
    let back = load_geometry(&path).unwrap();
    assert!(back.same_incidence(&h));
    std::fs::write(&path, "{\"format_version\": 1, \"points\": 2}").unwrap();
    assert!(load_geometry(&path).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_pairs_of_h4_dual_satisfy_metric_identities(seed in any::<u64>()) {
        let h = h4();
        let n = h.num_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(usize, usize)> = (0..16).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        prop_assert_eq!(common::metric_violations(h, pairs.into_iter()), 0);
    }

    #[test]
    fn distances_are_symmetric(u in 0usize..126, v in 0usize..126) {
        let h = h2();
        prop_assert_eq!(h.delta_vertices(u, v), h.delta_vertices(v, u));
        prop_assert!(h.delta_vertices(u, v).unwrap() <= 6);
    }
}

fn h2() -> &'static Geometry {
    static G: std::sync::OnceLock<Geometry> = std::sync::OnceLock::new();
    G.get_or_init(|| {
        build_dual_split_cayley(&FiniteField::of_order(2).unwrap())
            .unwrap()
            .geometry
    })
}

fn h4() -> &'static Geometry {
    static G: std::sync::OnceLock<Geometry> = std::sync::OnceLock::new();
    G.get_or_init(|| {
        build_dual_split_cayley(&FiniteField::of_order(4).unwrap())
            .unwrap()
            .geometry
    })
}
