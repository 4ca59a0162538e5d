use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::context::HexContext;
use crate::cover::{
    build_hitting_instance, matching_instance, permanent_ryser, HittingInstance, Matchings,
};
use crate::error::{Error, Result};
use crate::group::{orbit_length_multiset, orbits_under};

/// One orbit of distance-2 ovoids of H(q,1) under the class group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OvoidClass {
    /// Smallest image of the orbit, as sorted flag indices.
    pub representative: Vec<u32>,
    pub orbit_size: u64,
    /// Order of the set stabilizer in the full subhexagon stabilizer,
    /// including automorphisms that fix the subhexagon elementwise.
    pub stabilizer_order: u64,
    /// `[length, multiplicity]`, longest first.
    pub point_orbit_lengths: Vec<(usize, usize)>,
    pub line_orbit_lengths: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Required for q = 4.
    pub long_run: bool,
    /// Stop (inconclusively) after this many matchings.
    pub max_matchings: Option<u64>,
    pub batch_size: usize,
    /// Memory bound for set-orbit enumeration.
    pub max_orbit: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            long_run: false,
            max_matchings: None,
            batch_size: 1 << 14,
            max_orbit: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub q: u32,
    pub total_matchings: u64,
    pub matchings_examined: u64,
    /// Matchings not yet accounted for by a class orbit.
    pub remaining: u64,
    pub complete: bool,
    pub classes: Vec<OvoidClass>,
    pub seconds: f64,
}

/// Number of perfect matchings of PG(2,q)'s incidence graph.
pub fn total_matchings(ctx: &HexContext) -> Result<u64> {
    let perm = permanent_ryser(&ctx.flag_hex.plane.geometry.incidence_matrix())?;
    u64::try_from(perm).map_err(|_| Error::Resource("permanent does not fit in 64 bits".into()))
}

/// The exact-hitting instance of H(q,1) with j = 2 (its lines as blocks).
pub fn flag_instance(ctx: &HexContext) -> Result<HittingInstance> {
    let inst = matching_instance(&ctx.flag_hex.plane.geometry)?;
    debug_assert_eq!(
        inst.blocks(),
        build_hitting_instance(&ctx.flag_hex.geometry, 2)?.blocks(),
        "edges of PG(2,q) are numbered like the flags"
    );
    Ok(inst)
}

/// Builds the class record for a canonical ovoid.
pub fn describe_class(
    ctx: &HexContext,
    representative: Vec<u32>,
    max_orbit: usize,
) -> Result<OvoidClass> {
    let orbit = ctx
        .class_group
        .set_orbit_with_stabilizer(&representative, max_orbit)?;
    let np = ctx.num_flag_points();
    let orbits = orbits_under(&orbit.stabilizer_gens, ctx.class_group.degree());
    let (points, lines): (Vec<Vec<u32>>, Vec<Vec<u32>>) =
        orbits.into_iter().partition(|o| (o[0] as usize) < np);
    let stabilizer_order = u64::try_from(ctx.kernel_order as u128 * orbit.stabilizer_order)
        .map_err(|_| Error::Internal("stabilizer order overflow".into()))?;
    Ok(OvoidClass {
        representative,
        orbit_size: orbit.orbit_size,
        stabilizer_order,
        point_orbit_lengths: orbit_length_multiset(&points),
        line_orbit_lengths: orbit_length_multiset(&lines),
    })
}

/// Enumerates matchings, canonicalizes them, and collects new classes until
/// their orbits account for every matching. `on_new_class` sees the class
/// list after each addition (used for checkpointing).
pub fn classify_ovoids(
    ctx: &HexContext,
    opts: &ClassifyOptions,
    on_new_class: &mut dyn FnMut(&[OvoidClass]) -> Result<()>,
) -> Result<Classification> {
    if ctx.q > 2 && !opts.long_run {
        return Err(Error::Config(format!(
            "classification for q = {} is a long run; enable it explicitly",
            ctx.q
        )));
    }
    let start = Instant::now();
    let total = total_matchings(ctx)?;
    let inst = flag_instance(ctx)?;
    let mut matchings = Matchings::new(&inst)?;
    let mut remaining = total;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut classes: Vec<OvoidClass> = Vec::new();
    let mut examined = 0u64;
    let group = &ctx.class_group;
    'outer: while remaining > 0 {
        let room = opts
            .max_matchings
            .map_or(u64::MAX, |m| m.saturating_sub(examined));
        if room == 0 {
            break;
        }
        let take = (opts.batch_size as u64).min(room) as usize;
        let batch: Vec<Vec<u32>> = matchings.by_ref().take(take).collect();
        if batch.is_empty() {
            return Err(Error::Internal(format!(
                "matchings exhausted with {remaining} of {total} unaccounted for"
            )));
        }
        let canon: Vec<Vec<u32>> = batch
            .par_iter()
            .map(|m| group.smallest_image_set(m))
            .collect();
        for c in canon {
            examined += 1;
            if seen.contains(&c) {
                continue;
            }
            seen.insert(c.clone());
            let class = describe_class(ctx, c, opts.max_orbit)?;
            remaining = remaining.checked_sub(class.orbit_size).ok_or_else(|| {
                Error::Internal("class orbits exceed the number of matchings".into())
            })?;
            classes.push(class);
            on_new_class(&classes)?;
            if remaining == 0 {
                break 'outer;
            }
        }
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(Classification {
        q: ctx.q,
        total_matchings: total,
        matchings_examined: examined,
        remaining,
        complete: remaining == 0,
        classes,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Checks a class list loaded from disk: every representative is a
/// canonical ovoid, recorded orbit data is recomputed, and the orbits
/// account for all matchings. Returns the recomputed classes.
pub fn verify_classes(
    ctx: &HexContext,
    classes: &[OvoidClass],
    max_orbit: usize,
) -> Result<Vec<OvoidClass>> {
    let inst = flag_instance(ctx)?;
    let total = total_matchings(ctx)?;
    let checked: Vec<OvoidClass> = classes
        .par_iter()
        .map(|c| {
            if !inst.is_exact_hitting_set(&c.representative) {
                return Err(Error::Precondition(format!(
                    "representative {:?} is not a distance-2 ovoid of H({},1)",
                    c.representative, ctx.q
                )));
            }
            if ctx.class_group.smallest_image_set(&c.representative) != c.representative {
                return Err(Error::Precondition(format!(
                    "representative {:?} is not a smallest image",
                    c.representative
                )));
            }
            let fresh = describe_class(ctx, c.representative.clone(), max_orbit)?;
            if fresh != *c {
                return Err(Error::Precondition(format!(
                    "recorded orbit data for {:?} does not match recomputation",
                    c.representative
                )));
            }
            Ok(fresh)
        })
        .collect::<Result<_>>()?;
    let sum: u64 = checked.iter().map(|c| c.orbit_size).sum();
    let distinct: HashSet<&Vec<u32>> = checked.iter().map(|c| &c.representative).collect();
    if distinct.len() != checked.len() {
        return Err(Error::Precondition(
            "duplicate class representatives".into(),
        ));
    }
    if sum != total {
        return Err(Error::Precondition(format!(
            "class orbits cover {sum} matchings, expected {total}"
        )));
    }
    Ok(checked)
}

pub fn save_classes(path: impl AsRef<Path>, classes: &[OvoidClass]) -> Result<()> {
    let path = path.as_ref();
    let tmp = path.with_extension("json.partial");
    let text = serde_json::to_string_pretty(classes)?;
    std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn load_classes(path: impl AsRef<Path>) -> Result<Vec<OvoidClass>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })
}

/// Permanent of PG(2,q)'s incidence matrix, for reporting.
pub fn plane_permanent(q: u32) -> Result<BigUint> {
    let f = crate::field::FiniteField::of_order(q)?;
    permanent_ryser(
        &crate::constructions::build_pg2(&f)
            .geometry
            .incidence_matrix(),
    )
}
