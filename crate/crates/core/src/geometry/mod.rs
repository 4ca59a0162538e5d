//! Point-line geometries and their incidence-graph / point-graph metrics.
//!
//! Vertices of the incidence graph are numbered points first (`0..P`), then
//! lines (`P..P+L`). Distances are computed by breadth-first search from a
//! source and cached per source, so a query touching only a few sources never
//! materializes the whole distance matrix.

mod io;
mod iso;
mod validate;

use std::collections::VecDeque;
use std::sync::OnceLock;

pub use io::{load_geometry, parse_geometry, save_geometry, GeometryFile, GEOMETRY_FORMAT_VERSION};
pub use iso::{find_isomorphism, is_isomorphism, IsoSearch};
pub use validate::{validate_gp, GpReport};

use crate::error::{Error, Result};

/// Marker for an unreachable vertex in cached BFS rows.
const UNREACHABLE: u8 = u8::MAX;

/// Geometries at or below this many vertices get their distance matrix filled eagerly.
const EAGER_VERTEX_LIMIT: usize = 256;

/// A point or a line of a geometry.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Element {
    Point(usize),
    Line(usize),
}

#[derive(Debug, Clone)]
pub struct Geometry {
    name: String,
    num_points: usize,
    lines: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
    adjacency: Vec<Vec<u32>>,
    delta_rows: Vec<OnceLock<Box<[u8]>>>,
    point_rows: Vec<OnceLock<Box<[u8]>>>,
}

impl Geometry {
    /// Builds a geometry from its lines. Every line must be a strictly
    /// increasing list of point indices below `num_points`.
    pub fn new(name: impl Into<String>, num_points: usize, lines: Vec<Vec<u32>>) -> Result<Self> {
        for (k, line) in lines.iter().enumerate() {
            if let Some(&bad) = line.iter().find(|&&p| p as usize >= num_points) {
                return Err(Error::Domain(format!(
                    "line {k} contains point {bad}, but there are only {num_points} points"
                )));
            }
            if line.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain(format!(
                    "line {k} is not strictly increasing (duplicate or unsorted point)"
                )));
            }
        }
        let mut point_lines = vec![Vec::new(); num_points];
        for (k, line) in lines.iter().enumerate() {
            for &p in line {
                point_lines[p as usize].push(k as u32);
            }
        }
        let nv = num_points + lines.len();
        let mut adjacency = Vec::with_capacity(nv);
        for pl in &point_lines {
            adjacency.push(pl.iter().map(|&l| l + num_points as u32).collect());
        }
        for line in &lines {
            adjacency.push(line.clone());
        }
        let g = Geometry {
            name: name.into(),
            num_points,
            delta_rows: (0..nv).map(|_| OnceLock::new()).collect(),
            point_rows: (0..num_points).map(|_| OnceLock::new()).collect(),
            lines,
            point_lines,
            adjacency,
        };
        if nv <= EAGER_VERTEX_LIMIT {
            for v in 0..nv {
                g.delta_row(v);
            }
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }
    pub fn num_points(&self) -> usize {
        self.num_points
    }
    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }
    pub fn num_vertices(&self) -> usize {
        self.num_points + self.lines.len()
    }
    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }
    /// Points incident with line `l`, sorted.
    pub fn line(&self, l: usize) -> &[u32] {
        &self.lines[l]
    }
    /// Lines incident with point `p`, sorted.
    pub fn lines_through(&self, p: usize) -> &[u32] {
        &self.point_lines[p]
    }
    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.lines[l].binary_search(&(p as u32)).is_ok()
    }

    pub fn vertex(&self, e: Element) -> usize {
        match e {
            Element::Point(p) => p,
            Element::Line(l) => self.num_points + l,
        }
    }
    pub fn element(&self, v: usize) -> Element {
        if v < self.num_points {
            Element::Point(v)
        } else {
            Element::Line(v - self.num_points)
        }
    }
    pub fn is_point_vertex(&self, v: usize) -> bool {
        v < self.num_points
    }
    /// Incidence-graph neighbours of vertex `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    /// Cached BFS distances in the incidence graph from vertex `v`.
    /// Unreachable vertices hold `u8::MAX`.
    pub(crate) fn delta_row(&self, v: usize) -> &[u8] {
        self.delta_rows[v].get_or_init(|| bfs(v, self.num_vertices(), |u| &self.adjacency[u]))
    }

    fn point_row(&self, x: usize) -> &[u8] {
        self.point_rows[x].get_or_init(|| {
            let mut dist = vec![UNREACHABLE; self.num_points].into_boxed_slice();
            let mut queue = VecDeque::new();
            dist[x] = 0;
            queue.push_back(x);
            while let Some(y) = queue.pop_front() {
                let d = dist[y];
                for &l in &self.point_lines[y] {
                    for &z in &self.lines[l as usize] {
                        if dist[z as usize] == UNREACHABLE {
                            dist[z as usize] = d + 1;
                            queue.push_back(z as usize);
                        }
                    }
                }
            }
            dist
        })
    }

    /// Incidence-graph distance between two vertices; `None` if unreachable.
    pub fn delta_vertices(&self, u: usize, v: usize) -> Option<u32> {
        match self.delta_row(u)[v] {
            UNREACHABLE => None,
            d => Some(d as u32),
        }
    }

    /// Incidence-graph distance `δ(a, b)`; `None` if `b` is unreachable from `a`.
    pub fn delta(&self, a: Element, b: Element) -> Option<u32> {
        self.delta_vertices(self.vertex(a), self.vertex(b))
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() == 0 || !self.delta_row(0).contains(&UNREACHABLE)
    }

    /// Incidence-graph diameter; `None` if disconnected.
    pub fn diameter(&self) -> Option<u32> {
        let mut best = 0u8;
        for v in 0..self.num_vertices() {
            let row = self.delta_row(v);
            let m = *row.iter().max().unwrap_or(&0);
            if m == UNREACHABLE {
                return None;
            }
            best = best.max(m);
        }
        Some(best as u32)
    }

    /// Point-graph distance `d(x, y)`, computed by BFS on the collinearity graph.
    pub fn point_distance(&self, x: usize, y: usize) -> Option<u32> {
        let d = match self.point_row(x)[y] {
            UNREACHABLE => None,
            d => Some(d as u32),
        };
        debug_assert_eq!(
            d.map(|d| 2 * d),
            self.delta_vertices(x, y),
            "d(x,y) must equal δ(x,y)/2"
        );
        d
    }

    /// `d(x, ℓ) = min { d(x, y) : y on ℓ }`.
    pub fn point_line_distance(&self, x: usize, l: usize) -> Option<u32> {
        let row = self.point_row(x);
        let d = self.lines[l]
            .iter()
            .map(|&y| row[y as usize])
            .filter(|&d| d != UNREACHABLE)
            .min()
            .map(u32::from);
        debug_assert_eq!(
            d.map(|d| 2 * d + 1),
            self.delta(Element::Point(x), Element::Line(l)),
            "d(x,ℓ) must equal (δ(x,ℓ)-1)/2"
        );
        d
    }

    /// `d(ℓ, ℓ') = min { d(x, y) : x on ℓ, y on ℓ' }` for distinct lines.
    pub fn line_distance(&self, l1: usize, l2: usize) -> Result<Option<u32>> {
        if l1 == l2 {
            return Err(Error::Domain(
                "line-line point-graph distance is only defined for distinct lines".into(),
            ));
        }
        let d = self.lines[l1]
            .iter()
            .filter_map(|&x| self.point_line_distance(x as usize, l2))
            .min();
        debug_assert_eq!(
            d.map(|d| 2 * d + 2),
            self.delta(Element::Line(l1), Element::Line(l2)),
            "d(ℓ,ℓ') must equal (δ(ℓ,ℓ')-2)/2"
        );
        Ok(d)
    }

    /// `Γ≤i(a)`: the points at point-graph distance at most `radius` from a point or a line.
    pub fn ball(&self, a: Element, radius: u32) -> Vec<usize> {
        match a {
            Element::Point(x) => {
                let row = self.point_row(x);
                (0..self.num_points)
                    .filter(|&y| row[y] != UNREACHABLE && row[y] as u32 <= radius)
                    .collect()
            }
            Element::Line(l) => {
                let mut inside = vec![false; self.num_points];
                for &x in &self.lines[l] {
                    let row = self.point_row(x as usize);
                    for (y, &d) in row.iter().enumerate() {
                        if d != UNREACHABLE && d as u32 <= radius {
                            inside[y] = true;
                        }
                    }
                }
                (0..self.num_points).filter(|&y| inside[y]).collect()
            }
        }
    }

    /// The point-line dual: lines become points and vice versa.
    pub fn dual(&self) -> Geometry {
        let name = match self.name.strip_suffix("^D") {
            Some(base) => base.to_string(),
            None => format!("{}^D", self.name),
        };
        Geometry::new(name, self.lines.len(), self.point_lines.clone())
            .expect("transpose of a valid incidence structure is valid")
    }

    /// The sub-geometry on the given points and lines, with indices
    /// renumbered in the order given. Lines keep only their selected points.
    pub fn induced(&self, name: impl Into<String>, points: &[usize], lines: &[usize]) -> Geometry {
        let mut index = vec![u32::MAX; self.num_points];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i as u32;
        }
        let new_lines = lines
            .iter()
            .map(|&l| {
                let mut pts: Vec<u32> = self.lines[l]
                    .iter()
                    .map(|&p| index[p as usize])
                    .filter(|&i| i != u32::MAX)
                    .collect();
                pts.sort_unstable();
                pts
            })
            .collect();
        Geometry::new(name, points.len(), new_lines).expect("induced sub-geometry is valid")
    }

    /// 0/1 incidence matrix, rows indexed by points and columns by lines.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.lines.len()]; self.num_points];
        for (l, line) in self.lines.iter().enumerate() {
            for &p in line {
                m[p as usize][l] = 1;
            }
        }
        m
    }

    /// Whether both geometries have identical point counts and line lists.
    pub fn same_incidence(&self, other: &Geometry) -> bool {
        self.num_points == other.num_points && self.lines == other.lines
    }
}

fn bfs<'a, F>(source: usize, n: usize, adj: F) -> Box<[u8]>
where
    F: Fn(usize) -> &'a [u32],
{
    let mut dist = vec![UNREACHABLE; n].into_boxed_slice();
    let mut queue = VecDeque::with_capacity(n);
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let d = dist[u];
        for &w in adj(u) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = d + 1;
                queue.push_back(w as usize);
            }
        }
    }
    dist
}
