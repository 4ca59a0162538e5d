//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::VecDeque;

use hexovoid::geometry::Geometry;
use hexovoid::group::{Perm, PermGroup};
use rand::seq::SliceRandom;
use rand::Rng;

/// Point-graph distances from `x` by BFS over collinearity, ignoring the
/// incidence-graph machinery of the library.
pub fn collinearity_bfs(g: &Geometry, x: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.num_points()];
    dist[x] = Some(0);
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        let d = dist[y].unwrap();
        for &l in g.lines_through(y) {
            for &z in g.line(l as usize) {
                let z = z as usize;
                if dist[z].is_none() {
                    dist[z] = Some(d + 1);
                    queue.push_back(z);
                }
            }
        }
    }
    dist
}

/// Counts violations of `δ = 2d`, `δ = 2d + 1` and `δ = 2d + 2` for the
/// point-point, point-line and line-line pairs drawn from `pairs` (vertex ids).
pub fn metric_violations(g: &Geometry, pairs: impl Iterator<Item = (usize, usize)>) -> usize {
    use hexovoid::geometry::Element;
    let np = g.num_points();
    let mut cache: std::collections::HashMap<usize, Vec<Option<u32>>> = Default::default();
    let mut bad = 0;
    for (u, v) in pairs {
        let delta = g.delta_vertices(u, v);
        let (a, b) = (g.element(u), g.element(v));
        let d = match (a, b) {
            (Element::Point(x), Element::Point(y)) => {
                let row = cache.entry(x).or_insert_with(|| collinearity_bfs(g, x));
                row[y].map(|d| 2 * d)
            }
            (Element::Point(x), Element::Line(l)) | (Element::Line(l), Element::Point(x)) => {
                let row = cache.entry(x).or_insert_with(|| collinearity_bfs(g, x));
                g.line(l)
                    .iter()
                    .filter_map(|&y| row[y as usize])
                    .min()
                    .map(|d| 2 * d + 1)
            }
            (Element::Line(l1), Element::Line(l2)) => {
                if l1 == l2 {
                    Some(0)
                } else {
                    let mut best: Option<u32> = None;
                    for &x in g.line(l1) {
                        let row = cache
                            .entry(x as usize)
                            .or_insert_with(|| collinearity_bfs(g, x as usize));
                        for &y in g.line(l2) {
                            if let Some(d) = row[y as usize] {
                                best = Some(best.map_or(d, |b| b.min(d)));
                            }
                        }
                    }
                    best.map(|d| 2 * d + 2)
                }
            }
        };
        if d != delta {
            bad += 1;
        }
        let lib = match (a, b) {
            (Element::Point(x), Element::Point(y)) => g.point_distance(x, y).map(|d| 2 * d),
            (Element::Point(x), Element::Line(l)) | (Element::Line(l), Element::Point(x)) => {
                g.point_line_distance(x, l).map(|d| 2 * d + 1)
            }
            (Element::Line(l1), Element::Line(l2)) if l1 != l2 => {
                g.line_distance(l1, l2).unwrap().map(|d| 2 * d + 2)
            }
            _ => Some(0),
        };
        if lib != delta {
            bad += 1;
        }
        debug_assert!(u < g.num_vertices() && v < g.num_vertices() && np <= g.num_vertices());
    }
    bad
}

pub fn perm(images: Vec<u32>) -> Perm {
    Perm::from_images(images).unwrap()
}

fn cycle(n: usize, pts: &[u32]) -> Perm {
    let mut img: Vec<u32> = (0..n as u32).collect();
    for (i, &p) in pts.iter().enumerate() {
        img[p as usize] = pts[(i + 1) % pts.len()];
    }
    perm(img)
}

/// Symmetric group on `pts` inside degree `n`.
fn sym_on(n: usize, pts: &[u32]) -> Vec<Perm> {
    if pts.len() < 2 {
        return vec![];
    }
    vec![cycle(n, &pts[..2]), cycle(n, pts)]
}

/// A fixed family of small groups plus random ones, all of order at most
/// 10⁴ on at most 16 points.
pub fn small_groups<R: Rng>(rng: &mut R, random: usize) -> Vec<(String, PermGroup)> {
    let mut out = Vec::new();
    let mut push = |name: String, n: usize, gens: Vec<Perm>| {
        let g = PermGroup::new(n, gens).unwrap();
        assert!(g.order() <= 10_000, "{name} too large");
        out.push((name, g));
    };
    push("trivial(5)".into(), 5, vec![]);
    push(
        "C16".into(),
        16,
        vec![cycle(16, &(0..16).collect::<Vec<_>>())],
    );
    let mut refl: Vec<u32> = (0..12).map(|i| (12 - i) % 12).collect();
    refl.truncate(12);
    push(
        "D12".into(),
        12,
        vec![cycle(12, &(0..12).collect::<Vec<_>>()), perm(refl)],
    );
    let mut g = sym_on(9, &[0, 1, 2, 3]);
    g.extend(sym_on(9, &[4, 5, 6]));
    push("S4xS3".into(), 9, g);
    let mut g = sym_on(10, &[0, 1, 2, 3, 4]);
    g.extend(sym_on(10, &[5, 6, 7]));
    push("S5xS3".into(), 10, g);
    push("S7".into(), 7, sym_on(7, &[0, 1, 2, 3, 4, 5, 6]));
    // S2 wr S4 on 8 points: swap within pair 0, permute the four pairs
    let swap = cycle(8, &[0, 1]);
    let blocks4 = perm(vec![2, 3, 4, 5, 6, 7, 0, 1]);
    let blocks2 = perm(vec![2, 3, 0, 1, 4, 5, 6, 7]);
    push("S2wrS4".into(), 8, vec![swap, blocks4, blocks2]);
    // x -> x + 1 and x -> 2x on Z/7
    push(
        "C7:C3".into(),
        7,
        vec![
            cycle(7, &[0, 1, 2, 3, 4, 5, 6]),
            perm(vec![0, 2, 4, 6, 1, 3, 5]),
        ],
    );
    let mut made = 0;
    while made < random {
        let n = rng.random_range(4..=16usize);
        let k = rng.random_range(1..=2usize);
        let gens: Vec<Perm> = (0..k)
            .map(|_| {
                // sparse random permutations keep most groups small
                let m = rng.random_range(2..=n.min(6));
                let mut pts: Vec<u32> = (0..n as u32).collect();
                pts.shuffle(rng);
                cycle(n, &pts[..m])
            })
            .collect();
        let g = PermGroup::new(n, gens).unwrap();
        if g.order() <= 10_000 {
            out.push((format!("random#{made}(n={n},|G|={})", g.order()), g));
            made += 1;
        }
    }
    out
}

/// Least image of `set` over an explicit element list.
pub fn brute_min_image(elements: &[Perm], set: &[u32]) -> Vec<u32> {
    elements.iter().map(|g| g.apply_set(set)).min().unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    let k = rng.random_range(0..=n);
    let mut pts: Vec<u32> = (0..n as u32).collect();
    pts.shuffle(rng);
    pts.truncate(k);
    pts.sort_unstable();
    pts
}

#[derive(Debug, Default)]
pub struct SuiteReport {
    pub groups: usize,
    pub sets_checked: usize,
    pub brute_force_mismatches: usize,
    pub idempotence_failures: usize,
    pub orbit_constancy_checks: usize,
    pub orbit_constancy_failures: usize,
}

impl SuiteReport {
    pub fn violations(&self) -> usize {
        self.brute_force_mismatches + self.idempotence_failures + self.orbit_constancy_failures
    }
}

/// Brute-force agreement and idempotence over `sets_per_group` random sets
/// per small group, then orbit constancy of `big` under random elements.
pub fn canonicalization_suite<R: Rng>(
    rng: &mut R,
    sets_per_group: usize,
    random_groups: usize,
    big: &PermGroup,
    big_set_size: usize,
    big_elements: usize,
) -> SuiteReport {
    let mut rep = SuiteReport::default();
    for (_name, g) in small_groups(rng, random_groups) {
        rep.groups += 1;
        let elements = g.chain().elements();
        assert_eq!(elements.len() as u128, g.order());
        for _ in 0..sets_per_group {
            let set = random_subset(rng, g.degree());
            let canon = g.smallest_image_set(&set);
            rep.sets_checked += 1;
            if canon != brute_min_image(&elements, &set) {
                rep.brute_force_mismatches += 1;
            }
            if g.smallest_image_set(&canon) != canon {
                rep.idempotence_failures += 1;
            }
        }
    }
    let mut pts: Vec<u32> = (0..big.degree() as u32).collect();
    pts.shuffle(rng);
    pts.truncate(big_set_size);
    pts.sort_unstable();
    let canon = big.smallest_image_set(&pts);
    for _ in 0..big_elements {
        let h = big.random_element(rng);
        rep.orbit_constancy_checks += 1;
        if big.smallest_image_set(&h.apply_set(&pts)) != canon {
            rep.orbit_constancy_failures += 1;
        }
    }
    rep
}

/// Expected q = 4 class table: (stabilizer order, number of classes, point
/// orbit lengths, line orbit lengths).
pub const REFERENCE_Q4_TABLE: [(u64, usize, &str, &str); 13] = [
    (126, 1, "42^1 21^1 14^2 7^2", "14^3"),
    (84, 4, "28^1 14^4 7^3", "28^1 14^1"),
    (54, 1, "18^4 9^1 3^8", "18^1 6^4"),
    (42, 4, "14^3 7^9", "14^3"),
    (36, 2, "12^3 6^10 3^1 2^2 1^2", "12^1 6^4 2^3"),
    (18, 14, "6^13 3^7 2^2 1^2", "6^6 2^3"),
    (18, 2, "6^16 3^1 2^2 1^2", "6^6 2^3"),
    (12, 14, "4^19 2^13 1^3", "4^7 2^7"),
    (9, 3, "3^33 1^6", "3^12 1^6"),
    (6, 2, "2^42 1^21", "2^14 1^14"),
    (6, 43, "2^50 1^5", "2^21"),
    (6, 121, "2^48 1^9", "2^21"),
    (3, 139, "1^105", "1^42"),
];

/// (stabilizer order, count, point orbit lengths, line orbit lengths).
pub type Row = (u64, usize, Vec<(usize, usize)>, Vec<(usize, usize)>);

/// Table rows as a sorted multiset of comparable tuples.
pub fn reference_rows() -> Vec<Row> {
    let mut v: Vec<_> = REFERENCE_Q4_TABLE
        .iter()
        .map(|&(s, n, p, l)| {
            (
                s,
                n,
                hexovoid::pipeline::parse_lengths(p).unwrap(),
                hexovoid::pipeline::parse_lengths(l).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

pub fn table_rows(classes: &[hexovoid::pipeline::OvoidClass]) -> Vec<Row> {
    let mut v: Vec<_> = hexovoid::pipeline::class_table(classes)
        .into_iter()
        .map(|r| {
            (
                r.stabilizer_order,
                r.count,
                r.point_orbit_lengths,
                r.line_orbit_lengths,
            )
        })
        .collect();
    v.sort();
    v
}

pub fn stored_q4_classes() -> Vec<hexovoid::pipeline::OvoidClass> {
    hexovoid::pipeline::load_classes(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/classes_q4.json"
    ))
    .unwrap()
}
