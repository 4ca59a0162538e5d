use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::classify::{
    classify_ovoids, verify_classes, Classification, ClassifyOptions, OvoidClass,
};
use super::context::HexContext;
use crate::constructions::{subhexagon_count, subhexagons_per_point};
use crate::cover::{
    build_hitting_instance, dlx_solve, max_packing, HittingInstance, PackingOutcome, PackingStatus,
    SolveStatus,
};
use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExtensionStatus {
    Infeasible,
    Feasible { witness: Vec<u32> },
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionResult {
    pub representative: Vec<u32>,
    #[serde(flatten)]
    pub status: ExtensionStatus,
    pub nodes: u64,
    pub seconds: f64,
}

/// Size of a distance-2 ovoid in a hexagon of order (s, t): `1 + st + s²t²`.
pub fn ovoid_size(s: u64, t: u64) -> u64 {
    1 + s * t + s * s * t * t
}

/// The exact-hitting instance of H(q)^D with j = 2.
pub fn ambient_instance(ctx: &HexContext) -> Result<HittingInstance> {
    build_hitting_instance(&ctx.ambient.geometry, 2)
}

/// Tries to extend the class representative, carried into the fixed
/// subhexagon, to a distance-2 ovoid of H(q)^D.
pub fn extend_class(
    ctx: &HexContext,
    inst: &HittingInstance,
    representative: &[u32],
    budget: Option<u64>,
) -> Result<ExtensionResult> {
    if representative.len() != ctx.ovoid_size() {
        return Err(Error::Precondition(format!(
            "a distance-2 ovoid of H({q},1) has {} points, got {}",
            ctx.ovoid_size(),
            representative.len(),
            q = ctx.q
        )));
    }
    let start = Instant::now();
    let forced = ctx.embed_points(representative);
    let out = dlx_solve(inst, &forced, Some(1), budget)?;
    let q = ctx.q as u64;
    let status = match out.status {
        SolveStatus::SolutionFound => {
            let w = out.solutions.into_iter().next().expect("one solution");
            if !inst.is_exact_hitting_set(&w) || w.len() as u64 != ovoid_size(q, q) {
                return Err(Error::Internal("solver returned an invalid ovoid".into()));
            }
            ExtensionStatus::Feasible { witness: w }
        }
        SolveStatus::ExhaustedNoSolution => ExtensionStatus::Infeasible,
        SolveStatus::BudgetExceeded => ExtensionStatus::BudgetExceeded,
    };
    Ok(ExtensionResult {
        representative: representative.to_vec(),
        status,
        nodes: out.nodes_expanded,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Extends every class in parallel; output sorted by representative.
pub fn extend_all(
    ctx: &HexContext,
    classes: &[OvoidClass],
    budget: Option<u64>,
) -> Result<Vec<ExtensionResult>> {
    let inst = ambient_instance(ctx)?;
    let mut out: Vec<ExtensionResult> = classes
        .par_iter()
        .map(|c| extend_class(ctx, &inst, &c.representative, budget))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoDistance2Ovoid,
    OvoidFound,
    Inconclusive,
}

impl Verdict {
    pub fn is_established(self) -> bool {
        self != Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectRoute {
    pub status: SolveStatus,
    pub nodes: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Budgets {
    pub extension_nodes: Option<u64>,
    pub direct_nodes: Option<u64>,
    pub max_matchings: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofReport {
    pub tool_version: String,
    pub q: u32,
    pub manifest_hash: String,
    pub seed: Option<u64>,
    pub budgets: Budgets,
    pub kernel_order: u64,
    pub class_group_order: u64,
    pub total_matchings: u64,
    pub num_classes: usize,
    pub classification_complete: bool,
    pub direct_route: Option<DirectRoute>,
    pub extensions: Vec<ExtensionResult>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub setup_seconds: f64,
    pub classification_seconds: f64,
    pub extension_seconds: f64,
}

/// SHA-256 of the ambient hexagon's manifest JSON.
pub fn manifest_hash(ctx: &HexContext) -> Result<String> {
    let manifest = ctx.ambient.manifest(&ctx.field);
    let text = serde_json::to_string(&manifest)?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

#[derive(Clone, Debug)]
pub struct ProofOptions {
    pub classify: ClassifyOptions,
    /// Precomputed classes (verified before use) instead of classifying.
    pub classes: Option<Vec<OvoidClass>>,
    pub extension_budget: Option<u64>,
    pub direct_budget: Option<u64>,
    /// Also run the unforced search (q = 2 only).
    pub direct_route: bool,
    pub seed: Option<u64>,
}

impl Default for ProofOptions {
    fn default() -> Self {
        ProofOptions {
            classify: ClassifyOptions::default(),
            classes: None,
            extension_budget: None,
            direct_budget: None,
            direct_route: true,
            seed: None,
        }
    }
}

/// Obtains the classes either from `opts.classes` (verified) or by running
/// the classification.
pub fn obtain_classes(ctx: &HexContext, opts: &ProofOptions) -> Result<Classification> {
    match &opts.classes {
        Some(list) => {
            let start = Instant::now();
            let checked = verify_classes(ctx, list, opts.classify.max_orbit)?;
            let total = checked.iter().map(|c| c.orbit_size).sum();
            Ok(Classification {
                q: ctx.q,
                total_matchings: total,
                matchings_examined: 0,
                remaining: 0,
                complete: true,
                classes: checked,
                seconds: start.elapsed().as_secs_f64(),
            })
        }
        None => classify_ovoids(ctx, &opts.classify, &mut |_| Ok(())),
    }
}

/// Non-existence of distance-2 ovoids of H(q)^D by classification and
/// extension; for q = 2 also by direct exhaustion.
pub fn prove_nonexistence(ctx: &HexContext, opts: &ProofOptions) -> Result<ProofReport> {
    let mut notes = Vec::new();
    let inst = ambient_instance(ctx)?;
    let direct_route = if ctx.q == 2 && opts.direct_route {
        let start = Instant::now();
        let out = dlx_solve(&inst, &[], Some(1), opts.direct_budget)?;
        Some(DirectRoute {
            status: out.status,
            nodes: out.nodes_expanded,
            seconds: start.elapsed().as_secs_f64(),
        })
    } else {
        None
    };

    let classification = if ctx.q > 2 && !opts.classify.long_run && opts.classes.is_none() {
        notes
            .push("classification skipped: q = 4 needs the long-run flag or a classes file".into());
        None
    } else {
        Some(obtain_classes(ctx, opts)?)
    };

    let start = Instant::now();
    let extensions = match &classification {
        Some(c) => extend_all(ctx, &c.classes, opts.extension_budget)?,
        None => Vec::new(),
    };
    let extension_seconds = start.elapsed().as_secs_f64();

    let complete = classification.as_ref().is_some_and(|c| c.complete);
    let any_feasible = extensions
        .iter()
        .any(|e| matches!(e.status, ExtensionStatus::Feasible { .. }))
        || direct_route
            .as_ref()
            .is_some_and(|d| d.status == SolveStatus::SolutionFound);
    let all_infeasible = complete
        && extensions
            .iter()
            .all(|e| e.status == ExtensionStatus::Infeasible);
    let direct_ok = direct_route
        .as_ref()
        .is_none_or(|d| d.status == SolveStatus::ExhaustedNoSolution);
    let verdict = if any_feasible {
        Verdict::OvoidFound
    } else if all_infeasible && direct_ok {
        Verdict::NoDistance2Ovoid
    } else {
        Verdict::Inconclusive
    };
    if let Some(c) = &classification {
        if !c.complete {
            notes.push(format!(
                "classification incomplete: {} of {} matchings unaccounted for",
                c.remaining, c.total_matchings
            ));
        }
    }
    let budget_hits = extensions
        .iter()
        .filter(|e| e.status == ExtensionStatus::BudgetExceeded)
        .count();
    if budget_hits > 0 {
        notes.push(format!(
            "{budget_hits} class extensions exceeded the node budget"
        ));
    }
    Ok(ProofReport {
        tool_version: TOOL_VERSION.to_string(),
        q: ctx.q,
        manifest_hash: manifest_hash(ctx)?,
        seed: opts.seed,
        budgets: Budgets {
            extension_nodes: opts.extension_budget,
            direct_nodes: opts.direct_budget,
            max_matchings: opts.classify.max_matchings,
        },
        kernel_order: ctx.kernel_order,
        class_group_order: ctx.class_group.order() as u64,
        total_matchings: super::classify::total_matchings(ctx)?,
        num_classes: classification.as_ref().map_or(0, |c| c.classes.len()),
        classification_complete: complete,
        direct_route,
        extensions,
        verdict,
        notes,
        setup_seconds: ctx.setup_seconds,
        classification_seconds: classification.as_ref().map_or(0.0, |c| c.seconds),
        extension_seconds,
    })
}

/// Ingredients of the double count bounding partial ovoids that meet no
/// subhexagon in a full ovoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingBound {
    pub q: u64,
    pub subhexagons: u64,
    pub subhexagons_per_point: u64,
    /// Largest allowed intersection with a subhexagon: `q² + q`.
    pub max_intersection: u64,
    pub bound: u64,
}

/// `(q² − q + 1)(q² + q)`.
pub fn counting_bound(q: u64) -> CountingBound {
    let subhexagons = subhexagon_count(q);
    let per_point = subhexagons_per_point(q);
    let max_intersection = q * q + q;
    let bound = max_intersection * subhexagons / per_point;
    debug_assert_eq!(bound, (q * q - q + 1) * (q * q + q));
    CountingBound {
        q,
        subhexagons,
        subhexagons_per_point: per_point,
        max_intersection,
        bound,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassBound {
    pub representative: Vec<u32>,
    pub status: PackingStatus,
    /// Largest packing found containing the embedded representative.
    pub best_size: usize,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVerdict {
    Established,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub tool_version: String,
    pub q: u32,
    pub b: usize,
    pub counting_bound: CountingBound,
    pub per_class: Vec<ClassBound>,
    pub verdict: BoundVerdict,
    /// Largest packing seen anywhere, re-verified.
    pub witness: Vec<u32>,
    /// Unrestricted maximum packing, computed for q = 2 only.
    pub direct: Option<PackingOutcome>,
    pub budget_nodes: Option<u64>,
    pub seconds: f64,
}

/// No partial distance-2 ovoid of H(q)^D exceeds `b`: either some
/// subhexagon meets it in a full ovoid, which up to symmetry is a class
/// representative, or the counting bound applies.
pub fn partial_bound(
    ctx: &HexContext,
    classes: &[OvoidClass],
    b: usize,
    budget: Option<u64>,
) -> Result<BoundReport> {
    let cb = counting_bound(ctx.q as u64);
    if (b as u64) < cb.bound {
        return Err(Error::Precondition(format!(
            "candidate bound {b} is below the counting bound {}",
            cb.bound
        )));
    }
    let start = Instant::now();
    let inst = ambient_instance(ctx)?;
    let results: Vec<(ClassBound, Vec<u32>)> = classes
        .par_iter()
        .map(|c| {
            let forced = ctx.embed_points(&c.representative);
            let out = max_packing(&inst, &forced, Some(b), budget)?;
            if !inst.is_packing(&out.best) {
                return Err(Error::Internal(
                    "packing solver returned a non-packing".into(),
                ));
            }
            Ok((
                ClassBound {
                    representative: c.representative.clone(),
                    status: out.status,
                    best_size: out.best.len(),
                    nodes: out.nodes_expanded,
                },
                out.best,
            ))
        })
        .collect::<Result<_>>()?;
    let mut per_class = Vec::with_capacity(results.len());
    let mut witness: Vec<u32> = Vec::new();
    for (cb_row, best) in results {
        if best.len() > witness.len() {
            witness = best;
        }
        per_class.push(cb_row);
    }
    per_class.sort_by(|a, b| a.representative.cmp(&b.representative));
    let direct = if ctx.q == 2 {
        let out = max_packing(&inst, &[], None, budget)?;
        if !inst.is_packing(&out.best) {
            return Err(Error::Internal(
                "packing solver returned a non-packing".into(),
            ));
        }
        if out.best.len() > witness.len() {
            witness = out.best.clone();
        }
        Some(out)
    } else {
        None
    };
    let direct_refutes = direct.as_ref().is_some_and(|d| d.best.len() > b);
    let verdict = if direct_refutes || per_class.iter().any(|c| c.best_size > b) {
        BoundVerdict::Refuted
    } else if per_class
        .iter()
        .any(|c| c.status == PackingStatus::BudgetExceeded)
        || classes.is_empty()
    {
        BoundVerdict::Inconclusive
    } else {
        BoundVerdict::Established
    };
    Ok(BoundReport {
        tool_version: TOOL_VERSION.to_string(),
        q: ctx.q,
        b,
        counting_bound: cb,
        per_class,
        verdict,
        witness,
        direct,
        budget_nodes: budget,
        seconds: start.elapsed().as_secs_f64(),
    })
}
