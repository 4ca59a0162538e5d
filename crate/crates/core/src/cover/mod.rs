//! Exact hitting sets and packings over hypergraphs of point balls.
//!
//! A [`HittingInstance`] has points `0..universe_size` and a list of blocks.
//! An exact hitting set meets every block exactly once; a packing meets
//! every block at most once.

mod dlx;
mod lp;
mod packing;
mod permanent;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Element, Geometry};

pub use dlx::{dlx_solve, DlxSolver, Matchings, Step};
pub use lp::{export_lp, write_lp, LpMode};
pub use packing::{max_packing, PackingOutcome, PackingStatus};
pub use permanent::permanent_ryser;

#[derive(Clone, Debug)]
pub struct HittingInstance {
    universe_size: usize,
    blocks: Vec<Vec<u32>>,
    point_to_blocks: Vec<Vec<u32>>,
    origin: String,
}

impl HittingInstance {
    /// Validates and sorts each block.
    pub fn new(
        universe_size: usize,
        mut blocks: Vec<Vec<u32>>,
        origin: impl Into<String>,
    ) -> Result<Self> {
        let mut point_to_blocks = vec![Vec::new(); universe_size];
        for (k, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            if b.is_empty() {
                return Err(Error::Domain(format!("block {k} is empty")));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Domain(format!("block {k} repeats a point")));
            }
            if let Some(&p) = b.last().filter(|&&p| p as usize >= universe_size) {
                return Err(Error::Domain(format!(
                    "block {k} has point {p} outside universe of size {universe_size}"
                )));
            }
            for &p in b.iter() {
                point_to_blocks[p as usize].push(k as u32);
            }
        }
        Ok(HittingInstance {
            universe_size,
            blocks,
            point_to_blocks,
            origin: origin.into(),
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn blocks_of(&self, p: u32) -> &[u32] {
        &self.point_to_blocks[p as usize]
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// Every block is hit exactly once.
    pub fn is_exact_hitting_set(&self, set: &[u32]) -> bool {
        self.hit_counts(set)
            .is_some_and(|c| c.iter().all(|&n| n == 1))
    }

    /// Every block is hit at most once.
    pub fn is_packing(&self, set: &[u32]) -> bool {
        self.hit_counts(set)
            .is_some_and(|c| c.iter().all(|&n| n <= 1))
    }

    fn hit_counts(&self, set: &[u32]) -> Option<Vec<u32>> {
        let mut seen = vec![false; self.universe_size];
        let mut counts = vec![0u32; self.blocks.len()];
        for &p in set {
            if p as usize >= self.universe_size || std::mem::replace(&mut seen[p as usize], true) {
                return None;
            }
            for &b in &self.point_to_blocks[p as usize] {
                counts[b as usize] += 1;
            }
        }
        Some(counts)
    }

    /// Checks `forced` lies in the universe and no two of its points share a block.
    pub(crate) fn check_forced(&self, forced: &[u32]) -> Result<()> {
        let mut owner = vec![u32::MAX; self.blocks.len()];
        let mut seen = vec![false; self.universe_size];
        for &p in forced {
            if p as usize >= self.universe_size {
                return Err(Error::Precondition(format!(
                    "forced point {p} outside universe of size {}",
                    self.universe_size
                )));
            }
            if std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::Precondition(format!(
                    "forced point {p} listed twice"
                )));
            }
            for &b in &self.point_to_blocks[p as usize] {
                if owner[b as usize] != u32::MAX {
                    return Err(Error::Precondition(format!(
                        "forced points {} and {p} share block {b}",
                        owner[b as usize]
                    )));
                }
                owner[b as usize] = p;
            }
        }
        Ok(())
    }
}

/// Blocks for distance-`j` ovoids of a generalized 2d-gon: for even `j` the
/// balls `Γ≤(j-2)/2(ℓ)` around lines, for odd `j` the balls `Γ≤(j-1)/2(p)`
/// around points.
pub fn build_hitting_instance(g: &Geometry, j: u32) -> Result<HittingInstance> {
    let diameter = g
        .diameter()
        .ok_or_else(|| Error::Domain(format!("{} is disconnected", g.name())))?;
    let d = diameter / 2;
    if j < 2 || j > d {
        return Err(Error::Domain(format!(
            "distance parameter j = {j} outside 2..={d} for {}",
            g.name()
        )));
    }
    let to_u32 = |v: Vec<usize>| v.into_iter().map(|x| x as u32).collect::<Vec<u32>>();
    let blocks: Vec<Vec<u32>> = if j.is_multiple_of(2) {
        (0..g.num_lines())
            .map(|l| to_u32(g.ball(Element::Line(l), (j - 2) / 2)))
            .collect()
    } else {
        (0..g.num_points())
            .map(|p| to_u32(g.ball(Element::Point(p), (j - 1) / 2)))
            .collect()
    };
    HittingInstance::new(g.num_points(), blocks, format!("{}, j={j}", g.name()))
}

/// Perfect matchings of a geometry's incidence graph as exact hitting sets:
/// points of the instance are the incident pairs (point-major order), blocks
/// are the vertices (points first, then lines).
pub fn matching_instance(g: &Geometry) -> Result<HittingInstance> {
    if g.num_points() != g.num_lines() {
        return Err(Error::Domain(format!(
            "unbalanced incidence graph: {} points, {} lines",
            g.num_points(),
            g.num_lines()
        )));
    }
    let n = g.num_points();
    let mut blocks = vec![Vec::new(); 2 * n];
    let mut edge = 0u32;
    for p in 0..n {
        for &l in g.lines_through(p) {
            blocks[p].push(edge);
            blocks[n + l as usize].push(edge);
            edge += 1;
        }
    }
    HittingInstance::new(edge as usize, blocks, format!("matchings of {}", g.name()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    SolutionFound,
    ExhaustedNoSolution,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solutions: Vec<Vec<u32>>,
    pub nodes_expanded: u64,
    /// The whole search space was explored.
    pub complete: bool,
}

pub fn save_solution(path: impl AsRef<Path>, set: &[u32]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, serde_json::to_string(set)?).map_err(|e| Error::io(path, e))
}

pub fn load_point_set(path: impl AsRef<Path>) -> Result<Vec<u32>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })
}
