//! Python bindings: `import pyhexovoid`.
//!
//! Structured reports cross the boundary as JSON strings.

use hexovoid::constructions::{build_dual_split_cayley, build_flag_hexagon, build_pg2};
use hexovoid::cover::permanent_ryser;
use hexovoid::field::FiniteField;
use hexovoid::geometry::validate_gp;
use hexovoid::group::{Perm, PermGroup};
use hexovoid::pipeline::{self, ClassifyOptions, HexContext, ProofOptions};
use hexovoid::Error;
use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Precondition(_) | Error::Parse { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json(v: &impl serde::Serialize) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Number of perfect matchings of PG(2,q)'s incidence graph.
#[pyfunction]
fn permanent(q: u32) -> PyResult<BigUint> {
    let f = FiniteField::of_order(q).map_err(py_err)?;
    permanent_ryser(&build_pg2(&f).geometry.incidence_matrix()).map_err(py_err)
}

/// `(points, lines, is_valid)` for `which` in {"pg2", "flaghex", "dualsplitcayley"}.
#[pyfunction]
fn build(q: u32, which: &str) -> PyResult<(usize, usize, bool)> {
    let f = FiniteField::of_order(q).map_err(py_err)?;
    let (g, n) = match which {
        "pg2" => (build_pg2(&f).geometry, 3),
        "flaghex" => (build_flag_hexagon(&f).geometry, 6),
        "dualsplitcayley" => (build_dual_split_cayley(&f).map_err(py_err)?.geometry, 6),
        other => return Err(PyValueError::new_err(format!("unknown geometry {other:?}"))),
    };
    Ok((g.num_points(), g.num_lines(), validate_gp(&g, n).is_valid))
}

/// `(q² − q + 1)(q² + q)`.
#[pyfunction]
fn counting_bound(q: u64) -> u64 {
    pipeline::counting_bound(q).bound
}

/// Lexicographically least image of `set` under the group generated by
/// `generators` (image lists on `0..degree`).
#[pyfunction]
fn smallest_image_set(
    degree: usize,
    generators: Vec<Vec<u32>>,
    set: Vec<u32>,
) -> PyResult<Vec<u32>> {
    let gens = generators
        .into_iter()
        .map(Perm::from_images)
        .collect::<Result<Vec<_>, _>>()
        .map_err(py_err)?;
    let g = PermGroup::new(degree, gens).map_err(py_err)?;
    if set.iter().any(|&x| x as usize >= degree) {
        return Err(PyValueError::new_err("set point outside the domain"));
    }
    Ok(g.smallest_image_set(&set))
}

/// Class list of distance-2 ovoids of H(q,1) as JSON; q = 4 needs `long_run`.
#[pyfunction]
#[pyo3(signature = (q, long_run = false))]
fn classify(py: Python<'_>, q: u32, long_run: bool) -> PyResult<String> {
    let c = py
        .detach(|| {
            let ctx = HexContext::new(q)?;
            let opts = ClassifyOptions {
                long_run,
                ..ClassifyOptions::default()
            };
            pipeline::classify_ovoids(&ctx, &opts, &mut |_| Ok(()))
        })
        .map_err(py_err)?;
    json(&c)
}

/// Non-existence report as JSON.
#[pyfunction]
#[pyo3(signature = (q, budget_nodes = None))]
fn nonexistence(py: Python<'_>, q: u32, budget_nodes: Option<u64>) -> PyResult<String> {
    let r = py
        .detach(|| {
            let ctx = HexContext::new(q)?;
            let opts = ProofOptions {
                extension_budget: budget_nodes,
                direct_budget: budget_nodes,
                ..ProofOptions::default()
            };
            pipeline::prove_nonexistence(&ctx, &opts)
        })
        .map_err(py_err)?;
    json(&r)
}

#[pymodule]
fn pyhexovoid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(permanent, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(counting_bound, m)?)?;
    m.add_function(wrap_pyfunction!(smallest_image_set, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(nonexistence, m)?)?;
    Ok(())
}
