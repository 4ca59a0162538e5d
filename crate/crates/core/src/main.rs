use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use hexovoid::constructions::{
    build_dual_split_cayley, build_flag_hexagon, build_pg2, enumerate_subhexagons,
    least_opposite_pair, subhexagon_closure, subhexagon_count, subhexagons_per_point,
};
use hexovoid::cover::{
    build_hitting_instance, dlx_solve, export_lp, load_point_set, permanent_ryser, LpMode,
    SolveStatus,
};
use hexovoid::field::FiniteField;
use hexovoid::geometry::{load_geometry, save_geometry, validate_gp};
use hexovoid::pipeline::{
    class_table, classify_ovoids, load_classes, partial_bound, prove_nonexistence, render_table,
    save_classes, total_matchings, verify_classes, BoundVerdict, Classification, ClassifyOptions,
    ExtensionStatus, HexContext, OvoidClass, ProofOptions, ProofReport, Verdict,
};
use hexovoid::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hexovoid",
    version,
    about = "Distance-2 ovoids of generalized hexagons"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized stabilizer-chain construction.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Pg2,
    Flaghex,
    Dualsplitcayley,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Packing,
}

#[derive(Args)]
struct ClassSource {
    /// Classes file produced by `classify`; verified before use.
    #[arg(long)]
    classes: Option<PathBuf>,
    /// Allow the q = 4 classification to run when no classes file is given.
    #[arg(long)]
    long_run: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a geometry and write it as JSON.
    Build {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the generalized n-gon axioms of a geometry file.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Number of perfect matchings of PG(2,q)'s incidence graph.
    Permanent {
        #[arg(long)]
        q: u32,
    },
    /// Subhexagons of order (q,1) in H(q)^D.
    Subhex {
        #[arg(long)]
        q: u32,
        /// Enumerate all of them and check the counts.
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        max_closures: Option<usize>,
    },
    /// Classify distance-2 ovoids of H(q,1), checkpointing to `--out`.
    Classify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        long_run: bool,
        #[arg(long)]
        out: PathBuf,
        /// Stop after this many matchings (result is then inconclusive).
        #[arg(long)]
        max_matchings: Option<u64>,
    },
    /// Try to extend every class to a distance-2 ovoid of H(q)^D.
    Extend {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        source: ClassSource,
        /// Option trials allowed per class.
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Decide whether H(q)^D has a distance-2 ovoid.
    Nonexistence {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        source: ClassSource,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
    /// Check that no partial distance-2 ovoid of H(q)^D exceeds `b` points.
    Bound {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        source: ClassSource,
        #[arg(long)]
        budget_nodes: Option<u64>,
        /// Write the largest packing found here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Group classes by stabilizer order and orbit-length profile.
    Table {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        classes: PathBuf,
        /// Recompute every class record before printing.
        #[arg(long)]
        verify: bool,
    },
    /// One LP file per class: the ambient instance with the class forced.
    ExportLp {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        classes: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a distance-j ovoid of any geometry file.
    OvoidCheck {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long)]
        j: u32,
        /// JSON array of points that must be in the ovoid.
        #[arg(long)]
        forced: Option<PathBuf>,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
}

/// Result of a subcommand: whether its verdict is established, a JSON
/// document and a text rendering.
struct Outcome {
    established: bool,
    json: serde_json::Value,
    text: String,
}

impl Outcome {
    fn done(json: serde_json::Value, text: String) -> Outcome {
        Outcome {
            established: true,
            json,
            text,
        }
    }
}

fn to_json(v: &impl Serialize) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n"
                }
                Format::Text => out.text,
            };
            // a closed pipe is not an error of the computation
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::from(if out.established { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Build { q, which, out } => build(*q, *which, out),
        Command::Validate { input, n } => validate(input, *n),
        Command::Permanent { q } => permanent(*q),
        Command::Subhex {
            q,
            enumerate,
            max_closures,
        } => subhex(*q, *enumerate, *max_closures),
        Command::Classify {
            q,
            long_run,
            out,
            max_matchings,
        } => classify(cli, *q, *long_run, out, *max_matchings),
        Command::Extend {
            q,
            source,
            budget_nodes,
        } => nonexistence(cli, *q, source, *budget_nodes, false),
        Command::Nonexistence {
            q,
            source,
            budget_nodes,
        } => nonexistence(cli, *q, source, *budget_nodes, true),
        Command::Bound {
            q,
            b,
            source,
            budget_nodes,
            witness_out,
        } => bound(cli, *q, *b, source, *budget_nodes, witness_out.as_deref()),
        Command::Table { q, classes, verify } => table(cli, *q, classes, *verify),
        Command::ExportLp {
            q,
            classes,
            mode,
            out,
        } => export(cli, *q, classes, *mode, out),
        Command::OvoidCheck {
            geometry,
            j,
            forced,
            budget_nodes,
        } => ovoid_check(geometry, *j, forced.as_deref(), *budget_nodes),
    }
}

fn build(q: u32, which: Which, out: &Path) -> Result<Outcome> {
    let f = FiniteField::of_order(q)?;
    let g = match which {
        Which::Pg2 => build_pg2(&f).geometry,
        Which::Flaghex => build_flag_hexagon(&f).geometry,
        Which::Dualsplitcayley => build_dual_split_cayley(&f)?.geometry,
    };
    save_geometry(&g, out)?;
    let json = json!({
        "name": g.name(),
        "points": g.num_points(),
        "lines": g.num_lines(),
        "out": out,
    });
    let text = format!(
        "{}: {} points, {} lines -> {}\n",
        g.name(),
        g.num_points(),
        g.num_lines(),
        out.display()
    );
    Ok(Outcome::done(json, text))
}

fn validate(input: &Path, n: u32) -> Result<Outcome> {
    let g = load_geometry(input)?;
    let report = validate_gp(&g, n);
    let text = match (&report.failure_reason, report.s, report.t) {
        (None, Some(s), Some(t)) if report.is_valid => {
            format!("{}: generalized {n}-gon of order ({s},{t})\n", g.name())
        }
        (reason, _, _) => format!(
            "{}: not a generalized {n}-gon: {}\n",
            g.name(),
            reason.as_deref().unwrap_or("unknown")
        ),
    };
    let json = to_json(&report)?;
    if !report.is_valid {
        // print the report, then fail
        eprint!("{text}");
        return Err(Error::Precondition(format!(
            "{} failed validation",
            input.display()
        )));
    }
    Ok(Outcome::done(json, text))
}

fn permanent(q: u32) -> Result<Outcome> {
    let f = FiniteField::of_order(q)?;
    let pg = build_pg2(&f);
    let p = permanent_ryser(&pg.geometry.incidence_matrix())?;
    Ok(Outcome::done(
        json!({ "q": q, "permanent": p.to_string() }),
        format!("{p}\n"),
    ))
}

fn subhex(q: u32, enumerate: bool, max_closures: Option<usize>) -> Result<Outcome> {
    let f = FiniteField::of_order(q)?;
    let h = build_dual_split_cayley(&f)?;
    let q64 = q as u64;
    let (expected_total, expected_per_point) = (subhexagon_count(q64), subhexagons_per_point(q64));
    let (l1, l2) = least_opposite_pair(&h.geometry)
        .ok_or_else(|| Error::Internal("no opposite lines".into()))?;
    let fixed = subhexagon_closure(&h.geometry, l1, l2)?;
    let mut json = json!({
        "q": q,
        "expected_subhexagons": expected_total,
        "expected_per_point": expected_per_point,
        "fixed_subhexagon": { "lines": [l1, l2], "points": fixed.points.len(), "num_lines": fixed.lines.len() },
    });
    let mut text = format!(
        "H({q})^D: {expected_total} subhexagons of order ({q},1) expected, {expected_per_point} through each point\n\
         closure of lines {l1},{l2}: {} points, {} lines\n",
        fixed.points.len(),
        fixed.lines.len()
    );
    if enumerate {
        let census = enumerate_subhexagons(&h.geometry, max_closures)?;
        let found = census.subhexagons.len() as u64;
        let per_point_ok = census
            .per_point
            .iter()
            .all(|&c| c as u64 == expected_per_point);
        json["enumerated"] = json!(found);
        json["per_point_uniform"] = json!(per_point_ok);
        text.push_str(&format!(
            "enumerated {found} subhexagons; every point in {expected_per_point}: {per_point_ok}\n"
        ));
        if found != expected_total || !per_point_ok {
            return Err(Error::Internal(format!(
                "census mismatch: {found} subhexagons found, {expected_total} expected"
            )));
        }
    }
    Ok(Outcome::done(json, text))
}

fn classify(
    cli: &Cli,
    q: u32,
    long_run: bool,
    out: &Path,
    max_matchings: Option<u64>,
) -> Result<Outcome> {
    let ctx = HexContext::with_seed(q, cli.seed)?;
    let opts = ClassifyOptions {
        long_run,
        max_matchings,
        ..ClassifyOptions::default()
    };
    let result = classify_ovoids(&ctx, &opts, &mut |classes| save_classes(out, classes))?;
    save_classes(out, &result.classes)?;
    let text = format!(
        "q={q}: {} classes, {} of {} matchings accounted for ({} examined){}\nwritten to {}\n",
        result.classes.len(),
        result.total_matchings - result.remaining,
        result.total_matchings,
        result.matchings_examined,
        if result.complete { "" } else { "; INCOMPLETE" },
        out.display()
    );
    let mut json = to_json(&result)?;
    json["classes"] = json!(result.classes.len());
    Ok(Outcome {
        established: result.complete,
        json,
        text,
    })
}

fn proof_options(
    cli: &Cli,
    q: u32,
    source: &ClassSource,
    budget: Option<u64>,
    direct: bool,
) -> Result<ProofOptions> {
    let classes = source.classes.as_ref().map(load_classes).transpose()?;
    Ok(ProofOptions {
        classify: ClassifyOptions {
            long_run: source.long_run || q == 2,
            ..ClassifyOptions::default()
        },
        classes,
        extension_budget: budget,
        direct_budget: budget,
        direct_route: direct,
        seed: cli.seed,
    })
}

fn render_proof(r: &ProofReport) -> String {
    let mut s = format!(
        "q={}: {} matchings, {} classes (complete: {})\n",
        r.q, r.total_matchings, r.num_classes, r.classification_complete
    );
    if let Some(d) = &r.direct_route {
        s.push_str(&format!(
            "direct search: {:?} after {} nodes\n",
            d.status, d.nodes
        ));
    }
    let (mut infeasible, mut feasible, mut over) = (0, 0, 0);
    for e in &r.extensions {
        match e.status {
            ExtensionStatus::Infeasible => infeasible += 1,
            ExtensionStatus::Feasible { .. } => feasible += 1,
            ExtensionStatus::BudgetExceeded => over += 1,
        }
    }
    s.push_str(&format!(
        "extensions: {infeasible} infeasible, {feasible} feasible, {over} over budget\n"
    ));
    for n in &r.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s.push_str(&format!(
        "verdict: {}\n",
        match r.verdict {
            Verdict::NoDistance2Ovoid => format!("H({})^D has no distance-2 ovoid", r.q),
            Verdict::OvoidFound => format!("H({})^D has a distance-2 ovoid", r.q),
            Verdict::Inconclusive => "inconclusive".to_string(),
        }
    ));
    s
}

fn nonexistence(
    cli: &Cli,
    q: u32,
    source: &ClassSource,
    budget: Option<u64>,
    direct: bool,
) -> Result<Outcome> {
    let ctx = HexContext::with_seed(q, cli.seed)?;
    let opts = proof_options(cli, q, source, budget, direct)?;
    let report = prove_nonexistence(&ctx, &opts)?;
    Ok(Outcome {
        established: report.verdict.is_established(),
        text: render_proof(&report),
        json: to_json(&report)?,
    })
}

/// Classes from a file (verified), or computed when allowed; `None` when the
/// q = 4 classification was not enabled.
fn classes_for(ctx: &HexContext, source: &ClassSource) -> Result<Option<Classification>> {
    let opts = ClassifyOptions {
        long_run: source.long_run || ctx.q == 2,
        ..ClassifyOptions::default()
    };
    match &source.classes {
        Some(path) => {
            let list = load_classes(path)?;
            let checked = verify_classes(ctx, &list, opts.max_orbit)?;
            let total = total_matchings(ctx)?;
            Ok(Some(Classification {
                q: ctx.q,
                total_matchings: total,
                matchings_examined: 0,
                remaining: 0,
                complete: true,
                classes: checked,
                seconds: 0.0,
            }))
        }
        None if opts.long_run => Ok(Some(classify_ovoids(ctx, &opts, &mut |_| Ok(()))?)),
        None => Ok(None),
    }
}

fn bound(
    cli: &Cli,
    q: u32,
    b: usize,
    source: &ClassSource,
    budget: Option<u64>,
    witness_out: Option<&Path>,
) -> Result<Outcome> {
    let ctx = HexContext::with_seed(q, cli.seed)?;
    let classification = classes_for(&ctx, source)?;
    let complete = classification.as_ref().is_some_and(|c| c.complete);
    let classes = classification.map(|c| c.classes).unwrap_or_default();
    let report = partial_bound(&ctx, &classes, b, budget)?;
    if let Some(path) = witness_out {
        hexovoid::cover::save_solution(path, &report.witness)?;
    }
    let established = complete && report.verdict != BoundVerdict::Inconclusive;
    let mut text = format!(
        "q={q}: counting bound {}; {} classes checked with target {b}\n",
        report.counting_bound.bound,
        report.per_class.len()
    );
    if let Some(d) = &report.direct {
        text.push_str(&format!(
            "unrestricted maximum packing: {} ({:?})\n",
            d.best.len(),
            d.status
        ));
    }
    text.push_str(&format!(
        "largest packing seen: {} points\n",
        report.witness.len()
    ));
    text.push_str(&format!(
        "verdict: {}\n",
        match (established, report.verdict) {
            (true, BoundVerdict::Established) =>
                format!("every partial distance-2 ovoid has at most {b} points"),
            (true, BoundVerdict::Refuted) =>
                format!("a partial distance-2 ovoid with more than {b} points exists"),
            _ => "inconclusive".to_string(),
        }
    ));
    Ok(Outcome {
        established,
        json: to_json(&report)?,
        text,
    })
}

fn table(cli: &Cli, q: u32, path: &Path, verify: bool) -> Result<Outcome> {
    let mut classes: Vec<OvoidClass> = load_classes(path)?;
    let f = FiniteField::of_order(q)?;
    let total = permanent_ryser(&build_pg2(&f).geometry.incidence_matrix())?;
    if verify {
        let ctx = HexContext::with_seed(q, cli.seed)?;
        classes = verify_classes(&ctx, &classes, ClassifyOptions::default().max_orbit)?;
    }
    let rows = class_table(&classes);
    let sum: u64 = classes.iter().map(|c| c.orbit_size).sum();
    let complete = total == sum.into();
    let text = format!(
        "{}{} classes, orbit sizes sum to {sum} of {total} matchings\n",
        render_table(&rows),
        classes.len()
    );
    Ok(Outcome {
        established: complete,
        json: json!({ "q": q, "classes": classes.len(), "orbit_sum": sum, "total_matchings": total.to_string(), "rows": rows }),
        text,
    })
}

fn export(cli: &Cli, q: u32, path: &Path, mode: Mode, out: &Path) -> Result<Outcome> {
    let ctx = HexContext::with_seed(q, cli.seed)?;
    let classes = load_classes(path)?;
    let inst = build_hitting_instance(&ctx.ambient.geometry, 2)?;
    std::fs::create_dir_all(out).map_err(|e| Error::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    let mode = match mode {
        Mode::Exact => LpMode::Exact,
        Mode::Packing => LpMode::Packing,
    };
    let mut files = Vec::with_capacity(classes.len());
    for (k, c) in classes.iter().enumerate() {
        if c.representative.len() != ctx.ovoid_size() {
            return Err(Error::Precondition(format!("class {k} has the wrong size")));
        }
        let file = out.join(format!("class_{k:03}.lp"));
        export_lp(&inst, &ctx.embed_points(&c.representative), mode, &file)?;
        files.push(file);
    }
    Ok(Outcome::done(
        json!({ "q": q, "files": files }),
        format!("wrote {} LP files to {}\n", files.len(), out.display()),
    ))
}

fn ovoid_check(path: &Path, j: u32, forced: Option<&Path>, budget: Option<u64>) -> Result<Outcome> {
    let g = load_geometry(path)?;
    let inst = build_hitting_instance(&g, j)?;
    let forced = forced.map(load_point_set).transpose()?.unwrap_or_default();
    let out = dlx_solve(&inst, &forced, Some(1), budget)?;
    let witness = out.solutions.first();
    let text = match (out.status, witness) {
        (SolveStatus::SolutionFound, Some(w)) => format!(
            "{}: distance-{j} ovoid with {} points: {w:?}\n",
            g.name(),
            w.len()
        ),
        (SolveStatus::ExhaustedNoSolution, _) => format!("{}: no distance-{j} ovoid\n", g.name()),
        _ => format!(
            "{}: inconclusive after {} nodes\n",
            g.name(),
            out.nodes_expanded
        ),
    };
    Ok(Outcome {
        established: out.status != SolveStatus::BudgetExceeded,
        json: json!({
            "geometry": g.name(),
            "j": j,
            "status": out.status,
            "witness": witness,
            "nodes": out.nodes_expanded,
        }),
        text,
    })
}
