use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Element, Geometry, UNREACHABLE};

/// Outcome of checking the generalized n-gon axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpReport {
    pub is_valid: bool,
    pub n: u32,
    /// Points per line minus one, when all lines have the same size.
    pub s: Option<usize>,
    /// Lines per point minus one, when all points have the same degree.
    pub t: Option<usize>,
    pub regular: bool,
    pub connected: bool,
    pub diameter: Option<u32>,
    pub girth: Option<u32>,
    /// Point-graph axioms, only evaluated for even `n` on connected, regular input.
    pub axiom1_ok: Option<bool>,
    pub axiom2_ok: Option<bool>,
    pub failure_reason: Option<String>,
    pub failure_witness: Option<(Element, Element)>,
}

/// Checks whether `g` is a generalized `n`-gon: regular with `s+1` points per
/// line and `t+1` lines per point, incidence graph of diameter `n` and girth
/// `2n`. For `n = 2d` the two point-graph axioms are checked as well:
///
/// 1. for every line `ℓ` and point `x` there is a unique `x'` on `ℓ` with
///    `d(x, y) = d(x, x') + 1` for all other `y` on `ℓ`;
/// 2. for `d(x, y) = i < d` there is a unique neighbour of `y` at distance
///    `i - 1` from `x`.
pub fn validate_gp(g: &Geometry, n: u32) -> GpReport {
    let mut report = GpReport {
        is_valid: false,
        n,
        s: None,
        t: None,
        regular: false,
        connected: false,
        diameter: None,
        girth: None,
        axiom1_ok: None,
        axiom2_ok: None,
        failure_reason: None,
        failure_witness: None,
    };
    if g.num_points() == 0 || g.num_lines() == 0 {
        report.failure_reason = Some("geometry has no points or no lines".into());
        return report;
    }

    let line_size = g.line(0).len();
    let degree = g.lines_through(0).len();
    report.regular = true;
    if let Some(l) = (0..g.num_lines()).find(|&l| g.line(l).len() != line_size) {
        report.regular = false;
        report.failure_reason.get_or_insert(format!(
            "line {l} has {} points, line 0 has {line_size}",
            g.line(l).len()
        ));
        report
            .failure_witness
            .get_or_insert((Element::Line(0), Element::Line(l)));
    } else {
        report.s = line_size.checked_sub(1);
    }
    if let Some(p) = (0..g.num_points()).find(|&p| g.lines_through(p).len() != degree) {
        report.regular = false;
        report.failure_reason.get_or_insert(format!(
            "point {p} lies on {} lines, point 0 on {degree}",
            g.lines_through(p).len()
        ));
        report
            .failure_witness
            .get_or_insert((Element::Point(0), Element::Point(p)));
    } else {
        report.t = degree.checked_sub(1);
    }

    report.connected = g.is_connected();
    if !report.connected {
        let far = g
            .delta_row(0)
            .iter()
            .position(|&d| d == UNREACHABLE)
            .unwrap();
        report
            .failure_reason
            .get_or_insert("incidence graph is disconnected".into());
        report
            .failure_witness
            .get_or_insert((Element::Point(0), g.element(far)));
        return report;
    }

    let nv = g.num_vertices();
    let mut diameter = 0u32;
    let mut far_pair = (0, 0);
    for u in 0..nv {
        let row = g.delta_row(u);
        for (v, &d) in row.iter().enumerate() {
            if d as u32 > diameter {
                diameter = d as u32;
                far_pair = (u, v);
            }
        }
    }
    report.diameter = Some(diameter);
    let girth = girth(g);
    report.girth = girth;

    if diameter != n {
        report
            .failure_reason
            .get_or_insert(format!("diameter is {diameter}, expected {n}"));
        report
            .failure_witness
            .get_or_insert((g.element(far_pair.0), g.element(far_pair.1)));
    }
    if girth != Some(2 * n) {
        report
            .failure_reason
            .get_or_insert(format!("girth is {girth:?}, expected {}", 2 * n));
    }

    if n.is_multiple_of(2) && report.regular {
        let (a1, w1) = check_axiom1(g);
        let (a2, w2) = check_axiom2(g, n / 2);
        report.axiom1_ok = Some(a1);
        report.axiom2_ok = Some(a2);
        if let Some(w) = w1.or(w2) {
            report
                .failure_reason
                .get_or_insert("point-graph axiom violated".into());
            report.failure_witness.get_or_insert(w);
        }
    }

    report.is_valid = report.regular && diameter == n && girth == Some(2 * n);
    report
}

/// Girth of the incidence graph via BFS from every vertex; `None` if acyclic.
pub(crate) fn girth(g: &Geometry) -> Option<u32> {
    let nv = g.num_vertices();
    let mut best = u32::MAX;
    let mut dist = vec![u32::MAX; nv];
    let mut parent = vec![usize::MAX; nv];
    let mut queue = VecDeque::new();
    for s in 0..nv {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] >= best {
                break;
            }
            for &w in g.neighbors(u) {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best != u32::MAX).then_some(best)
}

fn check_axiom1(g: &Geometry) -> (bool, Option<(Element, Element)>) {
    for x in 0..g.num_points() {
        let row = g.point_row(x);
        for l in 0..g.num_lines() {
            let ds: Vec<u8> = g.line(l).iter().map(|&y| row[y as usize]).collect();
            let min = *ds.iter().min().unwrap();
            let at_min = ds.iter().filter(|&&d| d == min).count();
            let rest_ok = ds.iter().all(|&d| d == min || d == min + 1);
            if at_min != 1 || !rest_ok {
                return (false, Some((Element::Point(x), Element::Line(l))));
            }
        }
    }
    (true, None)
}

fn check_axiom2(g: &Geometry, d: u32) -> (bool, Option<(Element, Element)>) {
    let collinear: Vec<Vec<u32>> = (0..g.num_points())
        .map(|y| {
            let mut nb: Vec<u32> = g
                .lines_through(y)
                .iter()
                .flat_map(|&l| g.line(l as usize).iter().copied())
                .filter(|&z| z as usize != y)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    for x in 0..g.num_points() {
        let row = g.point_row(x);
        for y in 0..g.num_points() {
            let i = row[y] as u32;
            if i == 0 || i >= d {
                continue;
            }
            let closer = collinear[y]
                .iter()
                .filter(|&&z| row[z as usize] as u32 + 1 == i)
                .count();
            if closer != 1 {
                return (false, Some((Element::Point(x), Element::Point(y))));
            }
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::fano;

    #[test]
    fn fano_is_a_projective_plane() {
        let r = validate_gp(&fano(), 3);
        assert!(r.is_valid, "{r:?}");
        assert_eq!((r.s, r.t), (Some(2), Some(2)));
        assert_eq!(r.girth, Some(6));
        assert_eq!(r.axiom1_ok, None);
    }

    #[test]
    fn wrong_gonality_is_reported() {
        let r = validate_gp(&fano(), 4);
        assert!(!r.is_valid);
        assert_eq!(r.diameter, Some(3));
        assert!(r.failure_reason.is_some());
    }

    #[test]
    fn irregular_geometry_has_witness() {
        let mut lines = fano().lines().to_vec();
        lines[4].pop();
        let g = Geometry::new("broken", 7, lines).unwrap();
        let r = validate_gp(&g, 3);
        assert!(!r.is_valid);
        assert!(!r.regular);
        assert!(matches!(
            r.failure_witness,
            Some((Element::Line(0), Element::Line(4)))
        ));
    }

    #[test]
    fn ordinary_hexagon_is_a_thin_generalized_hexagon() {
        // 6-cycle as incidence graph: 3 points, 3 lines
        let g = Geometry::new("triangle", 3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let r = validate_gp(&g, 3);
        assert!(r.is_valid);
        assert_eq!((r.s, r.t), (Some(1), Some(1)));
    }

    #[test]
    fn acyclic_has_no_girth() {
        let g = Geometry::new("path", 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(girth(&g), None);
    }
}
