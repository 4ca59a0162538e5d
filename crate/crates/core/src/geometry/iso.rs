//! Backtracking isomorphism search between incidence graphs.
//!
//! Vertices of the source are visited in BFS order so that every vertex after
//! the first has an already-mapped neighbour; its candidates are the
//! neighbours of that neighbour's image. A candidate is accepted only if its
//! incidence-graph distances to all mapped vertices agree with the source.
//! Candidates are tried lowest index first, so results are deterministic.

use std::collections::VecDeque;

use super::Geometry;
use crate::error::{Error, Result};

const UNMAPPED: usize = usize::MAX;

pub struct IsoSearch<'a> {
    from: &'a Geometry,
    to: &'a Geometry,
    /// Source vertices still to be mapped, in visiting order.
    order: Vec<usize>,
    /// For each entry of `order`, an adjacent source vertex mapped earlier.
    anchor: Vec<Option<usize>>,
    fixed: Vec<(usize, usize)>,
    nodes: u64,
}

impl<'a> IsoSearch<'a> {
    /// Prepares a search for type-preserving isomorphisms `from -> to`
    /// extending the vertex pairs in `fixed`.
    pub fn new(from: &'a Geometry, to: &'a Geometry, fixed: &[(usize, usize)]) -> Result<Self> {
        if from.num_points() != to.num_points() || from.num_lines() != to.num_lines() {
            return Err(Error::Domain(format!(
                "geometries differ in size: {}+{} vs {}+{}",
                from.num_points(),
                from.num_lines(),
                to.num_points(),
                to.num_lines()
            )));
        }
        let nv = from.num_vertices();
        let mut seen = vec![false; nv];
        let mut order = Vec::with_capacity(nv);
        let mut anchor = Vec::with_capacity(nv);
        let mut queue = VecDeque::new();
        for &(u, _) in fixed {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
        let mut next_root = 0;
        loop {
            while let Some(u) = queue.pop_front() {
                for &w in from.neighbors(u) {
                    let w = w as usize;
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                        anchor.push(Some(u));
                        queue.push_back(w);
                    }
                }
            }
            while next_root < nv && seen[next_root] {
                next_root += 1;
            }
            if next_root == nv {
                break;
            }
            seen[next_root] = true;
            order.push(next_root);
            anchor.push(None);
            queue.push_back(next_root);
        }
        Ok(IsoSearch {
            from,
            to,
            order,
            anchor,
            fixed: fixed.to_vec(),
            nodes: 0,
        })
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// First isomorphism in search order.
    pub fn first(&mut self) -> Option<Vec<usize>> {
        let mut found = None;
        self.run(|m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    /// Number of isomorphisms, stopping once `limit` are found.
    pub fn count(&mut self, limit: usize) -> usize {
        let mut n = 0;
        self.run(|_| {
            n += 1;
            n < limit
        });
        n
    }

    fn consistent(&self, map: &[usize], mapped: &[usize], v: usize, c: usize) -> bool {
        let row_from = self.from.delta_row(v);
        let row_to = self.to.delta_row(c);
        mapped.iter().all(|&w| row_from[w] == row_to[map[w]])
    }

    /// Depth-first search; `visit` returns whether to continue.
    fn run<F: FnMut(&[usize]) -> bool>(&mut self, mut visit: F) {
        let nv = self.from.num_vertices();
        let mut map = vec![UNMAPPED; nv];
        let mut used = vec![false; nv];
        let mut mapped: Vec<usize> = Vec::with_capacity(nv);

        for &(u, c) in &self.fixed.clone() {
            if u >= nv || c >= nv || self.from.is_point_vertex(u) != self.to.is_point_vertex(c) {
                return;
            }
            if map[u] != UNMAPPED {
                if map[u] != c {
                    return;
                }
                continue;
            }
            if used[c] || !self.consistent(&map, &mapped, u, c) {
                return;
            }
            map[u] = c;
            used[c] = true;
            mapped.push(u);
        }

        let depth_total = self.order.len();
        // per level: candidate list and next index to try
        let mut frames: Vec<(Vec<usize>, usize)> = Vec::with_capacity(depth_total);
        let candidates = |this: &Self, map: &[usize], used: &[bool], level: usize| -> Vec<usize> {
            let v = this.order[level];
            let is_point = this.from.is_point_vertex(v);
            let degree = this.from.neighbors(v).len();
            match this.anchor[level] {
                Some(a) => this
                    .to
                    .neighbors(map[a])
                    .iter()
                    .map(|&c| c as usize)
                    .filter(|&c| !used[c] && this.to.neighbors(c).len() == degree)
                    .collect(),
                None => (0..this.to.num_vertices())
                    .filter(|&c| {
                        !used[c]
                            && this.to.is_point_vertex(c) == is_point
                            && this.to.neighbors(c).len() == degree
                    })
                    .collect(),
            }
        };

        if depth_total == 0 {
            visit(&map);
            return;
        }
        frames.push((candidates(self, &map, &used, 0), 0));
        while !frames.is_empty() {
            let level = frames.len() - 1;
            let (cands, next) = &mut frames[level];
            let v = self.order[level];
            // undo the previous choice at this level
            if map[v] != UNMAPPED {
                used[map[v]] = false;
                map[v] = UNMAPPED;
                mapped.pop();
            }
            let mut chosen = None;
            while *next < cands.len() {
                let c = cands[*next];
                *next += 1;
                if !used[c] && self.consistent(&map, &mapped, v, c) {
                    chosen = Some(c);
                    break;
                }
            }
            let Some(c) = chosen else {
                frames.pop();
                continue;
            };
            self.nodes += 1;
            map[v] = c;
            used[c] = true;
            mapped.push(v);
            if level + 1 == depth_total {
                if !visit(&map) {
                    return;
                }
            } else {
                let next_cands = candidates(self, &map, &used, level + 1);
                frames.push((next_cands, 0));
            }
        }
    }
}

/// Some isomorphism `from -> to` (vertex map, points first then lines), verified incidence-exact.
pub fn find_isomorphism(from: &Geometry, to: &Geometry) -> Option<Vec<usize>> {
    let map = IsoSearch::new(from, to, &[]).ok()?.first()?;
    is_isomorphism(from, to, &map).then_some(map)
}

/// Checks that `map` is a type-preserving bijection preserving incidence both ways.
pub fn is_isomorphism(from: &Geometry, to: &Geometry, map: &[usize]) -> bool {
    let nv = from.num_vertices();
    if map.len() != nv || to.num_vertices() != nv || from.num_points() != to.num_points() {
        return false;
    }
    let mut hit = vec![false; nv];
    for (v, &c) in map.iter().enumerate() {
        if c >= nv || hit[c] || from.is_point_vertex(v) != to.is_point_vertex(c) {
            return false;
        }
        hit[c] = true;
    }
    (0..from.num_lines()).all(|l| {
        let image_line = map[from.num_points() + l] - to.num_points();
        let mut pts: Vec<u32> = from
            .line(l)
            .iter()
            .map(|&p| map[p as usize] as u32)
            .collect();
        pts.sort_unstable();
        pts == to.line(image_line)
    })
}
