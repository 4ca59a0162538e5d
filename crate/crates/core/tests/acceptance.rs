//! One PASS/FAIL line per acceptance criterion. Criteria 1 to 10 run by
//! default; 11 and 12 are long runs behind `--ignored`.

mod common;

use std::time::{Duration, Instant};

use hexovoid::constructions::{
    build_dual_split_cayley, build_flag_hexagon, build_pg2, enumerate_subhexagons,
};
use hexovoid::cover::{
    build_hitting_instance, export_lp, matching_instance, max_packing, permanent_ryser, LpMode,
    Matchings, PackingStatus,
};
use hexovoid::field::FiniteField;
use hexovoid::geometry::validate_gp;
use hexovoid::group::build_aut_flag_hexagon;
use hexovoid::pipeline::{
    classify_ovoids, counting_bound, extend_all, prove_nonexistence, ClassifyOptions,
    ExtensionStatus, HexContext, ProofOptions, Verdict,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C1_LIMIT: Duration = Duration::from_secs(120);
const C2_RANDOM_PAIRS: usize = 10_000;
const C3_LIMIT: Duration = Duration::from_secs(60);
const C4_LIMIT: Duration = Duration::from_secs(1);
const C5_LIMIT: Duration = Duration::from_secs(60);
const C6_LIMIT: Duration = Duration::from_secs(60);
const C7_MIN_SETS: usize = 1_000;
const C7_GROUP_ELEMENTS: usize = 1_000;
const C8_LIMIT: Duration = Duration::from_secs(600);
const C9_LIMIT: Duration = Duration::from_secs(3600);
const SEED: u64 = 20240101;

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn record(&mut self, id: u32, ok: bool, detail: String) {
        println!(
            "{} criterion {id:>2}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            self.failed.push(id);
        }
    }

    fn timed<T>(
        &mut self,
        id: u32,
        limit: Option<Duration>,
        f: impl FnOnce() -> (bool, String, T),
    ) -> T {
        let start = Instant::now();
        let (ok, detail, value) = f();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let limit_text = limit.map_or(String::new(), |l| {
            format!(" (limit {:.0}s)", l.as_secs_f64())
        });
        self.record(
            id,
            ok && in_time,
            format!("{detail}; {:.2}s{limit_text}", took.as_secs_f64()),
        );
        value
    }
}

#[test]
fn acceptance_criteria_1_to_10() {
    let mut rep = Report { failed: Vec::new() };
    let f2 = FiniteField::of_order(2).unwrap();
    let f4 = FiniteField::of_order(4).unwrap();

    let (h2, h4) = rep.timed(1, Some(C1_LIMIT), || {
        let h2 = build_dual_split_cayley(&f2).unwrap().geometry;
        let h4 = build_dual_split_cayley(&f4).unwrap().geometry;
        let (v2, v4) = (validate_gp(&h2, 6), validate_gp(&h4, 6));
        let ok = v2.is_valid
            && v4.is_valid
            && (v2.s, v2.t) == (Some(2), Some(2))
            && (v4.s, v4.t) == (Some(4), Some(4))
            && (h2.num_points(), h2.num_lines()) == (63, 63)
            && (h4.num_points(), h4.num_lines()) == (1365, 1365);
        let detail = format!(
            "H(2)^D {}/{} and H(4)^D {}/{} points/lines, hexagons of order (2,2),(4,4): {}",
            h2.num_points(),
            h2.num_lines(),
            h4.num_points(),
            h4.num_lines(),
            v2.is_valid && v4.is_valid
        );
        (ok, detail, (h2, h4))
    });

    rep.timed(2, None, || {
        let n2 = h2.num_vertices();
        let exhaustive = common::metric_violations(&h2, (0..n2).flat_map(|u| (0..n2).map(move |v| (u, v))));
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let n4 = h4.num_vertices();
        let pairs: Vec<(usize, usize)> =
            (0..C2_RANDOM_PAIRS).map(|_| (rng.random_range(0..n4), rng.random_range(0..n4))).collect();
        let sampled = common::metric_violations(&h4, pairs.into_iter());
        (
            exhaustive == 0 && sampled == 0,
            format!(
                "{} violations over all {} pairs of H(2)^D, {} over {C2_RANDOM_PAIRS} random pairs of H(4)^D",
                exhaustive,
                n2 * n2,
                sampled
            ),
            (),
        )
    });

    rep.timed(3, Some(C3_LIMIT), || {
        let p = permanent_ryser(&build_pg2(&f4).geometry.incidence_matrix()).unwrap();
        (
            p == BigUint::from(18_534_400u32),
            format!("per(PG(2,4)) = {p}"),
            (),
        )
    });

    let pg2 = build_pg2(&f2).geometry;
    let inc2 = pg2.incidence_matrix();
    rep.timed(4, Some(C4_LIMIT), || {
        let count = Matchings::new(&matching_instance(&pg2).unwrap())
            .unwrap()
            .count();
        let p = permanent_ryser(&inc2).unwrap();
        (
            BigUint::from(count) == p && count == 24,
            format!("DLX matchings {count}, Ryser {p}"),
            (),
        )
    });

    rep.timed(5, Some(C5_LIMIT), || {
        let census = enumerate_subhexagons(&h2, None).unwrap();
        let n = census.subhexagons.len();
        let uniform = census.per_point.iter().all(|&c| c == 12);
        let valid = census
            .subhexagons
            .iter()
            .all(|s| validate_gp(&s.geometry(&h2), 6).is_valid);
        (
            n == 36 && uniform && valid,
            format!("{n} subhexagons, each point in 12: {uniform}, all of order (2,1): {valid}"),
            (),
        )
    });

    let aut4 = rep.timed(6, Some(C6_LIMIT), || {
        let a2 = build_aut_flag_hexagon(&f2, &build_flag_hexagon(&f2)).unwrap();
        let a4 = build_aut_flag_hexagon(&f4, &build_flag_hexagon(&f4)).unwrap();
        let (o2, o4) = (a2.order(), a4.order());
        (
            o2 == 336 && o4 == 241920,
            format!("|Aut H(2,1)| = {o2}, |Aut H(4,1)| = {o4}"),
            a4,
        )
    });

    rep.timed(7, None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let s = common::canonicalization_suite(&mut rng, 80, 12, &aut4, 21, C7_GROUP_ELEMENTS);
        (
            s.violations() == 0 && s.sets_checked >= C7_MIN_SETS && s.orbit_constancy_checks >= C7_GROUP_ELEMENTS,
            format!(
                "{} sets on {} groups, {} brute-force mismatches, {} idempotence failures, {}/{} orbit-constancy failures",
                s.sets_checked,
                s.groups,
                s.brute_force_mismatches,
                s.idempotence_failures,
                s.orbit_constancy_failures,
                s.orbit_constancy_checks
            ),
            (),
        )
    });

    let ctx2 = HexContext::new(2).unwrap();
    rep.timed(8, Some(C8_LIMIT), || {
        let r = prove_nonexistence(&ctx2, &ProofOptions::default()).unwrap();
        let direct = r.direct_route.as_ref().map(|d| d.status);
        let orbit_sum: u64 = classify_ovoids(&ctx2, &ClassifyOptions::default(), &mut |_| Ok(()))
            .unwrap()
            .classes
            .iter()
            .map(|c| c.orbit_size)
            .sum();
        let ryser = permanent_ryser(&inc2).unwrap();
        let ok = r.verdict == Verdict::NoDistance2Ovoid
            && direct == Some(hexovoid::cover::SolveStatus::ExhaustedNoSolution)
            && r.extensions.iter().all(|e| e.status == ExtensionStatus::Infeasible)
            && BigUint::from(orbit_sum) == ryser;
        (
            ok,
            format!(
                "direct route {:?}, {} class(es) all infeasible, orbit sum {orbit_sum} vs {ryser} matchings",
                direct.unwrap(),
                r.num_classes
            ),
            (),
        )
    });

    rep.timed(9, Some(C9_LIMIT), || {
        let inst = build_hitting_instance(&h2, 2).unwrap();
        let out = max_packing(&inst, &[], None, None).unwrap();
        // re-verify the witness from the geometry: pairwise non-collinear
        let w = &out.best;
        let independent = w.iter().enumerate().all(|(i, &x)| {
            w[i + 1..]
                .iter()
                .all(|&y| h2.point_distance(x as usize, y as usize).unwrap() >= 2)
        });
        let ok = out.status == PackingStatus::Optimal
            && w.len() == 19
            && independent
            && inst.is_packing(w);
        (
            ok,
            format!(
                "maximum partial distance-2 ovoid {} ({:?}), witness re-verified: {independent}",
                w.len(),
                out.status
            ),
            (),
        )
    });

    rep.timed(10, None, || {
        let (b2, b4) = (counting_bound(2).bound, counting_bound(4).bound);
        (
            b2 == 18 && b4 == 260,
            format!("counting bound {b2} (q=2), {b4} (q=4)"),
            (),
        )
    });

    assert!(rep.failed.is_empty(), "failed criteria: {:?}", rep.failed);
}

#[test]
#[ignore = "long run: classifies and extends all q = 4 classes"]
fn acceptance_criteria_11_12() {
    let mut rep = Report { failed: Vec::new() };
    let ctx = HexContext::new(4).unwrap();
    let classification = rep.timed(11, None, || {
        let opts = ClassifyOptions {
            long_run: true,
            ..ClassifyOptions::default()
        };
        let c = classify_ovoids(&ctx, &opts, &mut |_| Ok(())).unwrap();
        let sum: u64 = c.classes.iter().map(|k| k.orbit_size).sum();
        let table_ok = common::table_rows(&c.classes) == common::reference_rows();
        (
            c.classes.len() == 350 && sum == 18_534_400 && table_ok,
            format!(
                "{} classes, orbit sum {sum}, table rows match reference: {table_ok}",
                c.classes.len()
            ),
            c,
        )
    });
    rep.timed(12, None, || {
        let results = extend_all(&ctx, &classification.classes, None).unwrap();
        let infeasible = results
            .iter()
            .filter(|r| r.status == ExtensionStatus::Infeasible)
            .count();
        let dir = tempfile::tempdir().unwrap();
        let inst = build_hitting_instance(&ctx.ambient.geometry, 2).unwrap();
        for (k, c) in classification.classes.iter().enumerate() {
            export_lp(
                &inst,
                &ctx.embed_points(&c.representative),
                LpMode::Exact,
                dir.path().join(format!("c{k}.lp")),
            )
            .unwrap();
        }
        let files = std::fs::read_dir(dir.path()).unwrap().count();
        (
            infeasible == 350 && files == 350,
            format!(
                "{infeasible}/350 classes infeasible by DLX, {files} exact-mode LP files written"
            ),
            (),
        )
    });
    assert!(rep.failed.is_empty(), "failed criteria: {:?}", rep.failed);
}
