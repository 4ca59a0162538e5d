//! Dancing links over blocks (items) and points (options).
//!
//! The search is an explicit state machine so that solutions can be
//! streamed and the search resumed. Item choice: fewest remaining options,
//! lowest block index on ties. Options within an item are tried in
//! increasing point order.

use super::{HittingInstance, SolveOutcome, SolveStatus};
use crate::error::Result;

const ROOT: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    /// Choose an item at a new level (or report a solution).
    Descend,
    /// Try the current option of the top level.
    Try,
    /// Undo the top level's option and move to the next one.
    Next,
    Done,
}

/// One step of a resumable search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Solution(Vec<u32>),
    Exhausted,
    BudgetExceeded,
}

pub struct DlxSolver {
    l: Vec<u32>,
    r: Vec<u32>,
    u: Vec<u32>,
    d: Vec<u32>,
    col: Vec<u32>,
    row: Vec<u32>,
    size: Vec<u32>,
    forced: Vec<u32>,
    chosen: Vec<u32>,
    chosen_col: Vec<u32>,
    phase: Phase,
    nodes: u64,
}

impl DlxSolver {
    /// Covers the blocks of every forced point before any search.
    pub fn new(inst: &HittingInstance, forced: &[u32]) -> Result<DlxSolver> {
        inst.check_forced(forced)?;
        let ncols = inst.blocks().len();
        let nnodes = 1 + ncols + inst.blocks().iter().map(Vec::len).sum::<usize>();
        let mut s = DlxSolver {
            l: Vec::with_capacity(nnodes),
            r: Vec::with_capacity(nnodes),
            u: Vec::with_capacity(nnodes),
            d: Vec::with_capacity(nnodes),
            col: Vec::with_capacity(nnodes),
            row: Vec::with_capacity(nnodes),
            size: vec![0; ncols + 1],
            forced: forced.to_vec(),
            chosen: Vec::new(),
            chosen_col: Vec::new(),
            phase: Phase::Descend,
            nodes: 0,
        };
        for h in 0..=ncols {
            let h = h as u32;
            s.l.push(if h == 0 { ncols as u32 } else { h - 1 });
            s.r.push(if h as usize == ncols { 0 } else { h + 1 });
            s.u.push(h);
            s.d.push(h);
            s.col.push(h);
            s.row.push(u32::MAX);
        }
        for p in 0..inst.universe_size() as u32 {
            let blocks = inst.blocks_of(p);
            let first = s.l.len() as u32;
            let k = blocks.len() as u32;
            for (i, &b) in blocks.iter().enumerate() {
                let x = s.l.len() as u32;
                let c = b + 1;
                let i = i as u32;
                s.l.push(if i == 0 { first + k - 1 } else { x - 1 });
                s.r.push(if i + 1 == k { first } else { x + 1 });
                let last = s.u[c as usize];
                s.u.push(last);
                s.d.push(c);
                s.d[last as usize] = x;
                s.u[c as usize] = x;
                s.col.push(c);
                s.row.push(p);
                s.size[c as usize] += 1;
            }
        }
        for &p in forced {
            for &b in inst.blocks_of(p) {
                s.cover(b as usize + 1);
            }
        }
        Ok(s)
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.l[c] as usize, self.r[c] as usize);
        self.r[l] = r as u32;
        self.l[r] = l as u32;
        let mut i = self.d[c] as usize;
        while i != c {
            let mut j = self.r[i] as usize;
            while j != i {
                let (u, d) = (self.u[j] as usize, self.d[j] as usize);
                self.d[u] = d as u32;
                self.u[d] = u as u32;
                self.size[self.col[j] as usize] -= 1;
                j = self.r[j] as usize;
            }
            i = self.d[i] as usize;
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.u[c] as usize;
        while i != c {
            let mut j = self.l[i] as usize;
            while j != i {
                let (u, d) = (self.u[j] as usize, self.d[j] as usize);
                self.d[u] = j as u32;
                self.u[d] = j as u32;
                self.size[self.col[j] as usize] += 1;
                j = self.l[j] as usize;
            }
            i = self.u[i] as usize;
        }
        let (l, r) = (self.l[c] as usize, self.r[c] as usize);
        self.r[l] = c as u32;
        self.l[r] = c as u32;
    }

    fn choose_item(&self) -> usize {
        let mut best = self.r[ROOT] as usize;
        let mut j = best;
        while j != ROOT {
            if self.size[j] < self.size[best] {
                best = j;
                if self.size[j] == 0 {
                    break;
                }
            }
            j = self.r[j] as usize;
        }
        best
    }

    fn current_solution(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.forced.clone();
        v.extend(self.chosen.iter().map(|&x| self.row[x as usize]));
        v.sort_unstable();
        v
    }

    /// Runs until the next solution, exhaustion, or until `budget` more
    /// option trials have been spent.
    pub fn next_solution(&mut self, budget: Option<u64>) -> Step {
        let limit = budget.map(|b| self.nodes.saturating_add(b));
        loop {
            match self.phase {
                Phase::Done => return Step::Exhausted,
                Phase::Descend => {
                    if self.r[ROOT] as usize == ROOT {
                        self.phase = if self.chosen.is_empty() {
                            Phase::Done
                        } else {
                            Phase::Next
                        };
                        return Step::Solution(self.current_solution());
                    }
                    let c = self.choose_item();
                    self.cover(c);
                    self.chosen.push(self.d[c]);
                    self.chosen_col.push(c as u32);
                    self.phase = Phase::Try;
                }
                Phase::Try => {
                    let top = self.chosen.len() - 1;
                    let x = self.chosen[top] as usize;
                    let c = self.chosen_col[top] as usize;
                    if x == c {
                        self.uncover(c);
                        self.chosen.pop();
                        self.chosen_col.pop();
                        self.phase = if self.chosen.is_empty() {
                            Phase::Done
                        } else {
                            Phase::Next
                        };
                        continue;
                    }
                    if limit.is_some_and(|m| self.nodes >= m) {
                        return Step::BudgetExceeded;
                    }
                    self.nodes += 1;
                    let mut j = self.r[x] as usize;
                    while j != x {
                        self.cover(self.col[j] as usize);
                        j = self.r[j] as usize;
                    }
                    self.phase = Phase::Descend;
                }
                Phase::Next => {
                    let top = self.chosen.len() - 1;
                    let x = self.chosen[top] as usize;
                    let mut j = self.l[x] as usize;
                    while j != x {
                        self.uncover(self.col[j] as usize);
                        j = self.l[j] as usize;
                    }
                    self.chosen[top] = self.d[x];
                    self.phase = Phase::Try;
                }
            }
        }
    }
}

/// Exact hitting sets containing `forced`, at most `limit` of them, within
/// `budget` option trials in total.
pub fn dlx_solve(
    inst: &HittingInstance,
    forced: &[u32],
    limit: Option<usize>,
    budget: Option<u64>,
) -> Result<SolveOutcome> {
    let mut solver = DlxSolver::new(inst, forced)?;
    let mut solutions = Vec::new();
    let mut budget_hit = false;
    let mut complete = false;
    while limit.is_none_or(|m| solutions.len() < m) {
        let remaining = budget.map(|b| b.saturating_sub(solver.nodes()));
        match solver.next_solution(remaining) {
            Step::Solution(s) => {
                debug_assert!(inst.is_exact_hitting_set(&s));
                solutions.push(s);
            }
            Step::Exhausted => {
                complete = true;
                break;
            }
            Step::BudgetExceeded => {
                budget_hit = true;
                break;
            }
        }
    }
    let status = if !solutions.is_empty() {
        SolveStatus::SolutionFound
    } else if budget_hit {
        SolveStatus::BudgetExceeded
    } else if complete {
        SolveStatus::ExhaustedNoSolution
    } else {
        // limit of zero solutions requested
        SolveStatus::BudgetExceeded
    };
    Ok(SolveOutcome {
        status,
        solutions,
        nodes_expanded: solver.nodes(),
        complete,
    })
}

/// Stream of exact hitting sets, in deterministic search order.
pub struct Matchings {
    solver: DlxSolver,
}

impl Matchings {
    pub fn new(inst: &HittingInstance) -> Result<Matchings> {
        Ok(Matchings {
            solver: DlxSolver::new(inst, &[])?,
        })
    }

    pub fn nodes(&self) -> u64 {
        self.solver.nodes()
    }
}

impl Iterator for Matchings {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        match self.solver.next_solution(None) {
            Step::Solution(s) => Some(s),
            _ => None,
        }
    }
}
