//! Maximum packings by branch and bound.
//!
//! Two points conflict when they share a block, so each block is a clique of
//! the conflict graph. The bound covers the candidate points greedily by
//! blocks: a packing takes at most one point per covering block, so the
//! number of blocks used bounds the additional picks.

use serde::{Deserialize, Serialize};

use super::HittingInstance;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingStatus {
    /// `best` is a maximum packing.
    Optimal,
    /// No packing is larger than the target; `best` may be smaller.
    BoundEstablished,
    /// Budget ran out; nothing is established beyond `best` existing.
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingOutcome {
    pub status: PackingStatus,
    /// Largest packing found; contains the forced points.
    pub best: Vec<u32>,
    pub target: Option<usize>,
    pub nodes_expanded: u64,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: u32) {
        self.0[i as usize / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: u32) {
        self.0[i as usize / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and_count(&self, other: &Bits) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn first(&self) -> Option<u32> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k as u32 * 64 + w.trailing_zeros())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros();
                w &= w - 1;
                Some(k as u32 * 64 + t)
            })
        })
    }
}

struct Search<'a> {
    inst: &'a HittingInstance,
    block_bits: Vec<Bits>,
    conflicts: Vec<Bits>,
    best: Vec<u32>,
    floor: usize,
    nodes: u64,
    budget: Option<u64>,
}

struct OutOfBudget;

impl Search<'_> {
    fn threshold(&self) -> usize {
        self.best.len().max(self.floor)
    }

    /// Candidates in covering-block order with the running block count.
    fn cover_order(&self, cand: &Bits) -> (Vec<u32>, Vec<usize>) {
        let mut rest = cand.clone();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut k = 0;
        while let Some(v) = rest.first() {
            k += 1;
            let b = *self
                .inst
                .blocks_of(v)
                .iter()
                .max_by_key(|&&b| {
                    (
                        self.block_bits[b as usize].and_count(&rest),
                        std::cmp::Reverse(b),
                    )
                })
                .expect("candidates lie in some block");
            let class = self.block_bits[b as usize].and(&rest);
            for x in class.iter() {
                order.push(x);
                colors.push(k);
            }
            rest = rest.and_not(&class);
        }
        (order, colors)
    }

    fn expand(
        &mut self,
        current: &mut Vec<u32>,
        cand: Bits,
    ) -> std::result::Result<(), OutOfBudget> {
        if self.budget.is_some_and(|b| self.nodes >= b) {
            return Err(OutOfBudget);
        }
        self.nodes += 1;
        if current.len() > self.best.len() {
            self.best = current.clone();
            self.best.sort_unstable();
        }
        if cand.is_empty() {
            return Ok(());
        }
        let (order, colors) = self.cover_order(&cand);
        let mut cand = cand;
        for idx in (0..order.len()).rev() {
            if current.len() + colors[idx] <= self.threshold() {
                return Ok(());
            }
            let v = order[idx];
            current.push(v);
            let next = cand.and_not(&self.conflicts[v as usize]);
            self.expand(current, next)?;
            current.pop();
            cand.remove(v);
        }
        Ok(())
    }
}

/// Largest packing containing `forced`. With a target `b`, only packings of
/// size greater than `b` are sought, and exhausting the search establishes
/// that none exists.
pub fn max_packing(
    inst: &HittingInstance,
    forced: &[u32],
    target: Option<usize>,
    budget: Option<u64>,
) -> Result<PackingOutcome> {
    inst.check_forced(forced)?;
    let n = inst.universe_size();
    let block_bits: Vec<Bits> = inst
        .blocks()
        .iter()
        .map(|b| {
            let mut bits = Bits::empty(n);
            for &p in b {
                bits.insert(p);
            }
            bits
        })
        .collect();
    let conflicts: Vec<Bits> = (0..n as u32)
        .map(|p| {
            let mut bits = Bits::empty(n);
            bits.insert(p);
            for &b in inst.blocks_of(p) {
                for &x in &inst.blocks()[b as usize] {
                    bits.insert(x);
                }
            }
            bits
        })
        .collect();
    let mut cand = Bits::empty(n);
    for p in 0..n as u32 {
        cand.insert(p);
    }
    for &p in forced {
        cand = cand.and_not(&conflicts[p as usize]);
    }
    let mut forced_sorted = forced.to_vec();
    forced_sorted.sort_unstable();
    // points outside every block can always be added
    let free: Vec<u32> = cand
        .iter()
        .filter(|&p| inst.blocks_of(p).is_empty())
        .collect();
    for &p in &free {
        cand.remove(p);
    }
    let mut start = forced_sorted.clone();
    start.extend(&free);
    let mut search = Search {
        inst,
        block_bits,
        conflicts,
        best: start.clone(),
        floor: target.unwrap_or(0),
        nodes: 0,
        budget,
    };
    search.best.sort_unstable();
    let finished = search.expand(&mut start, cand).is_ok();
    let status = match (finished, target) {
        (false, _) => PackingStatus::BudgetExceeded,
        (true, Some(b)) if search.best.len() <= b => PackingStatus::BoundEstablished,
        (true, _) => PackingStatus::Optimal,
    };
    debug_assert!(inst.is_packing(&search.best));
    Ok(PackingOutcome {
        status,
        best: search.best,
        target,
        nodes_expanded: search.nodes,
    })
}
