//! Coordinate models: PG(2,q), the flag hexagon H(q,1), the dual split
//! Cayley hexagon H(q)^D, and the H(q,1)-subhexagons of the latter.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{projective_points, Elem, FieldModel, FiniteField, Vec7};
use crate::geometry::{find_isomorphism, validate_gp, Geometry};

/// PG(2,q) with its coordinates. Points and lines are both indexed by the
/// lexicographic order of normalized coordinate vectors; a point `x` lies on
/// the line `u` iff `x · u = 0`.
#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    pub coords: Vec<Vec<Elem>>,
    pub index: HashMap<Vec<Elem>, usize>,
    pub geometry: Geometry,
}

pub fn build_pg2(f: &FiniteField) -> ProjectivePlane {
    let coords = projective_points(f, 3);
    let index: HashMap<Vec<Elem>, usize> = coords
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let lines = coords
        .iter()
        .map(|u| {
            coords
                .iter()
                .enumerate()
                .filter(|(_, x)| f.dot(x, u) == 0)
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    let geometry = Geometry::new(format!("PG(2,{})", f.q()), coords.len(), lines)
        .expect("PG(2,q) incidence lists are sorted");
    ProjectivePlane {
        coords,
        index,
        geometry,
    }
}

/// H(q,1): points are the flags `(x, u)` of PG(2,q) in lexicographic order;
/// lines `0..N` are the points of PG(2,q) and lines `N..2N` its lines.
#[derive(Clone, Debug)]
pub struct FlagHexagon {
    pub plane: ProjectivePlane,
    pub flags: Vec<(u32, u32)>,
    pub flag_index: HashMap<(u32, u32), u32>,
    pub geometry: Geometry,
}

pub fn build_flag_hexagon(f: &FiniteField) -> FlagHexagon {
    let plane = build_pg2(f);
    let n = plane.coords.len();
    let mut flags = Vec::new();
    for x in 0..n {
        for &u in plane.geometry.lines_through(x) {
            flags.push((x as u32, u));
        }
    }
    let flag_index: HashMap<(u32, u32), u32> = flags
        .iter()
        .enumerate()
        .map(|(i, &fl)| (fl, i as u32))
        .collect();
    let mut lines = vec![Vec::new(); 2 * n];
    for (i, &(x, u)) in flags.iter().enumerate() {
        lines[x as usize].push(i as u32);
        lines[n + u as usize].push(i as u32);
    }
    let geometry = Geometry::new(format!("H({},1)", f.q()), flags.len(), lines)
        .expect("flag lists are built in increasing order");
    FlagHexagon {
        plane,
        flags,
        flag_index,
        geometry,
    }
}

/// Index of `p_{ij}` (`i < j`) among the 21 Grassmann coordinates.
fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 7);
    // rows 0..i contribute 6 + 5 + ... entries
    i * (13 - i) / 2 + (j - i - 1)
}

/// The 21 Grassmann coordinates `p_ij = x_i y_j - x_j y_i`, `0 <= i < j <= 6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grassmann(pub [Elem; 21]);

impl Grassmann {
    /// `p_ij` for any `i != j`, with `p_ji = -p_ij`.
    pub fn get(&self, f: &FiniteField, i: usize, j: usize) -> Elem {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.0[pair_index(i, j)],
            std::cmp::Ordering::Greater => f.neg(self.0[pair_index(j, i)]),
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// The six linear conditions cutting out the points of H(q)^D among the
    /// totally singular lines of the quadric.
    pub fn satisfies_hexagon_conditions(&self, f: &FiniteField) -> bool {
        const PAIRS: [((usize, usize), (usize, usize)); 6] = [
            ((1, 2), (3, 4)),
            ((5, 4), (3, 2)),
            ((2, 0), (3, 5)),
            ((6, 5), (3, 0)),
            ((0, 1), (3, 6)),
            ((4, 6), (3, 1)),
        ];
        PAIRS
            .iter()
            .all(|&((a, b), (c, d))| self.get(f, a, b) == self.get(f, c, d))
    }
}

pub fn grassmann(f: &FiniteField, x: &Vec7, y: &Vec7) -> Result<Grassmann> {
    let mut p = [0; 21];
    for i in 0..7 {
        for j in i + 1..7 {
            p[pair_index(i, j)] = f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]));
        }
    }
    if p.iter().all(|&c| c == 0) {
        return Err(Error::Domain(
            "grassmann: vectors are linearly dependent".into(),
        ));
    }
    Ok(Grassmann(p))
}

/// Reduced row-echelon basis of the span of two independent vectors.
pub fn rref2(f: &FiniteField, x: &Vec7, y: &Vec7) -> Option<[Vec7; 2]> {
    let mut rows = [*x, *y];
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..7 {
        if r == 2 {
            break;
        }
        let Some(k) = (r..2).find(|&k| rows[k][col] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let s = f.inv(rows[r][col]);
        rows[r] = rows[r].map(|c| f.mul(s, c));
        let other = 1 - r;
        let factor = rows[other][col];
        if factor != 0 {
            let pivot_row = rows[r];
            for (x, &y) in rows[other].iter_mut().zip(pivot_row.iter()) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        pivots.push(col);
        r += 1;
    }
    (r == 2).then_some(rows)
}

/// H(q)^D: lines are the singular 1-spaces of `Q`, points the totally
/// singular 2-spaces whose Grassmann coordinates satisfy the hexagon
/// conditions. Both are numbered by the lexicographic order of their
/// normalized coordinates (RREF basis for 2-spaces).
#[derive(Clone, Debug)]
pub struct DualSplitCayley {
    pub field: FieldModel,
    pub line_coords: Vec<Vec7>,
    pub point_bases: Vec<[Vec7; 2]>,
    pub geometry: Geometry,
}

pub fn singular_points(f: &FiniteField) -> Vec<Vec7> {
    projective_points(f, 7)
        .into_iter()
        .map(|v| <Vec7>::try_from(v.as_slice()).expect("length 7"))
        .filter(|v| f.eval_quadric(v) == 0)
        .collect()
}

pub fn build_dual_split_cayley(f: &FiniteField) -> Result<DualSplitCayley> {
    if !matches!(f.q(), 2..=4) {
        return Err(Error::Config(format!(
            "H(q)^D is built for q in {{2, 3, 4}}, got q = {}",
            f.q()
        )));
    }
    let lines1 = singular_points(f);
    let line_index: HashMap<Vec7, usize> =
        lines1.iter().enumerate().map(|(i, v)| (*v, i)).collect();

    let mut spaces: HashSet<[Vec7; 2]> = HashSet::new();
    for (a, x) in lines1.iter().enumerate() {
        for y in &lines1[a + 1..] {
            if f.polar_form(x, y) != 0 {
                continue;
            }
            let g = grassmann(f, x, y)?;
            if !g.satisfies_hexagon_conditions(f) {
                continue;
            }
            spaces.insert(rref2(f, x, y).expect("distinct projective points are independent"));
        }
    }
    let mut point_bases: Vec<[Vec7; 2]> = spaces.into_iter().collect();
    point_bases.sort_unstable();

    let mut lines = vec![Vec::new(); lines1.len()];
    for (pi, [r0, r1]) in point_bases.iter().enumerate() {
        for (lam, mu) in projective_line_params(f) {
            let v: Vec7 = std::array::from_fn(|c| f.add(f.mul(lam, r0[c]), f.mul(mu, r1[c])));
            let v: Vec7 = f
                .normalize(&v)
                .expect("nonzero")
                .try_into()
                .expect("length 7");
            let li = *line_index.get(&v).ok_or_else(|| {
                Error::Internal("a point of H(q)^D contains a non-singular 1-space".into())
            })?;
            lines[li].push(pi as u32);
        }
    }
    for l in &mut lines {
        l.sort_unstable();
    }
    let geometry = Geometry::new(format!("H({})^D", f.q()), point_bases.len(), lines)?;
    Ok(DualSplitCayley {
        field: f.model(),
        line_coords: lines1,
        point_bases,
        geometry,
    })
}

/// Normalized `(λ, μ)` pairs: one per 1-space of a 2-space.
fn projective_line_params(f: &FiniteField) -> Vec<(Elem, Elem)> {
    let mut v = vec![(0, 1)];
    v.extend(f.elements().map(|mu| (1, mu)));
    v
}

/// Manifest written next to an exported H(q)^D geometry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HexagonManifest {
    pub q: u8,
    pub field: FieldModel,
    pub irreducible_polynomial: String,
    pub quadric: String,
    pub numbering: String,
    pub num_points: usize,
    pub num_lines: usize,
}

impl DualSplitCayley {
    pub fn manifest(&self, f: &FiniteField) -> HexagonManifest {
        HexagonManifest {
            q: f.q(),
            field: self.field.clone(),
            irreducible_polynomial: f.modulus_string(),
            quadric: "Q(x) = x0*x4 + x1*x5 + x2*x6 - x3^2".into(),
            numbering: "lines: singular 1-spaces in lexicographic order of normalized coordinates \
                        (first nonzero = 1); points: totally singular 2-spaces satisfying the \
                        Grassmann conditions, in lexicographic order of their reduced row-echelon \
                        basis; field elements indexed by base-p coefficient encoding"
                .into(),
            num_points: self.geometry.num_points(),
            num_lines: self.geometry.num_lines(),
        }
    }
}

/// A subhexagon of order (q, 1) of an ambient hexagon, as sorted index sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubHex {
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
}

impl SubHex {
    pub fn geometry(&self, ambient: &Geometry) -> Geometry {
        ambient.induced(
            format!("subhexagon of {}", ambient.name()),
            &self.points,
            &self.lines,
        )
    }

    pub fn contains_line(&self, l: usize) -> bool {
        self.lines.binary_search(&l).is_ok()
    }
}

/// The subhexagon generated by two opposite lines (`δ = 6`).
///
/// Closes `{ℓ1, ℓ2}` under two rules until stable: a line brings all its
/// points, and two members at distance below 6 bring the vertices of their
/// unique shortest path. The result is checked to be a generalized hexagon
/// of order `(s, 1)`.
pub fn subhexagon_closure(h: &Geometry, l1: usize, l2: usize) -> Result<SubHex> {
    closure_impl(h, l1, l2, None::<&mut rand::rngs::ThreadRng>)
}

/// Same closure with the worklist processed in random order.
pub fn subhexagon_closure_shuffled<R: Rng>(
    h: &Geometry,
    l1: usize,
    l2: usize,
    rng: &mut R,
) -> Result<SubHex> {
    closure_impl(h, l1, l2, Some(rng))
}

fn closure_impl<R: Rng>(
    h: &Geometry,
    l1: usize,
    l2: usize,
    mut rng: Option<&mut R>,
) -> Result<SubHex> {
    let p = h.num_points();
    let (v1, v2) = (p + l1, p + l2);
    if h.delta_vertices(v1, v2) != Some(6) {
        return Err(Error::Precondition(format!(
            "lines {l1} and {l2} are not opposite (δ = {:?}, need 6)",
            h.delta_vertices(v1, v2)
        )));
    }
    let nv = h.num_vertices();
    let mut inside = vec![false; nv];
    let mut members: Vec<usize> = Vec::new();
    let mut work: Vec<usize> = Vec::new();
    let add =
        |v: usize, inside: &mut Vec<bool>, members: &mut Vec<usize>, work: &mut Vec<usize>| {
            if !inside[v] {
                inside[v] = true;
                members.push(v);
                work.push(v);
            }
        };
    add(v1, &mut inside, &mut members, &mut work);
    add(v2, &mut inside, &mut members, &mut work);

    while !work.is_empty() {
        let pick = match rng.as_deref_mut() {
            Some(r) => r.random_range(0..work.len()),
            None => 0,
        };
        let v = work.swap_remove(pick);
        if !h.is_point_vertex(v) {
            for &x in h.neighbors(v) {
                add(x as usize, &mut inside, &mut members, &mut work);
            }
        }
        let row_v = h.delta_row(v);
        let snapshot = members.clone();
        for u in snapshot {
            let d = row_v[u];
            if u == v || d >= 6 {
                continue;
            }
            // walk from u towards v along the unique geodesic
            let mut cur = u;
            while cur != v {
                let dc = row_v[cur];
                let next = h
                    .neighbors(cur)
                    .iter()
                    .map(|&w| w as usize)
                    .find(|&w| row_v[w] + 1 == dc)
                    .expect("a BFS predecessor exists");
                add(next, &mut inside, &mut members, &mut work);
                cur = next;
            }
        }
    }

    let mut points: Vec<usize> = members.iter().copied().filter(|&v| v < p).collect();
    let mut lines: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&v| v >= p)
        .map(|v| v - p)
        .collect();
    points.sort_unstable();
    lines.sort_unstable();
    let sub = SubHex { points, lines };
    let report = validate_gp(&sub.geometry(h), 6);
    if !report.is_valid || report.t != Some(1) {
        return Err(Error::Internal(format!(
            "closure of lines {l1}, {l2} is not a hexagon of order (s,1): {} points, {} lines, {:?}",
            sub.points.len(),
            sub.lines.len(),
            report.failure_reason
        )));
    }
    Ok(sub)
}

/// The lexicographically least pair of opposite lines.
pub fn least_opposite_pair(h: &Geometry) -> Option<(usize, usize)> {
    let p = h.num_points();
    (0..h.num_lines()).find_map(|l1| {
        let row = h.delta_row(p + l1);
        (l1 + 1..h.num_lines())
            .find(|&l2| row[p + l2] == 6)
            .map(|l2| (l1, l2))
    })
}

/// All H(q,1)-subhexagons together with how many contain each point.
#[derive(Clone, Debug)]
pub struct SubhexCensus {
    pub subhexagons: Vec<SubHex>,
    pub per_point: Vec<usize>,
}

/// Enumerates all subhexagons of order `(s, 1)` by closing opposite line
/// pairs, skipping pairs already inside a found subhexagon. Returns
/// [`Error::BudgetExceeded`] once more than `max_closures` closures are needed.
pub fn enumerate_subhexagons(h: &Geometry, max_closures: Option<usize>) -> Result<SubhexCensus> {
    let p = h.num_points();
    let mut found: Vec<SubHex> = Vec::new();
    let mut by_line: Vec<Vec<usize>> = vec![Vec::new(); h.num_lines()];
    let mut closures = 0usize;
    for l1 in 0..h.num_lines() {
        let row = h.delta_row(p + l1);
        for l2 in l1 + 1..h.num_lines() {
            if row[p + l2] != 6 {
                continue;
            }
            if by_line[l1].iter().any(|&k| found[k].contains_line(l2)) {
                continue;
            }
            closures += 1;
            if max_closures.is_some_and(|m| closures > m) {
                return Err(Error::BudgetExceeded(format!(
                    "subhexagon enumeration stopped after {} closures with {} subhexagons found",
                    closures - 1,
                    found.len()
                )));
            }
            let sub = subhexagon_closure(h, l1, l2)?;
            let k = found.len();
            for &l in &sub.lines {
                by_line[l].push(k);
            }
            found.push(sub);
        }
    }
    found.sort();
    let mut per_point = vec![0usize; p];
    for s in &found {
        for &x in &s.points {
            per_point[x] += 1;
        }
    }
    Ok(SubhexCensus {
        subhexagons: found,
        per_point,
    })
}

/// Number of H(q,1)-subhexagons of H(q)^D: `q^3 (1+q)(q^2-q+1) / 2`.
pub fn subhexagon_count(q: u64) -> u64 {
    q.pow(3) * (1 + q) * (q * q - q + 1) / 2
}

/// Number of H(q,1)-subhexagons through a point of H(q)^D: `(1+q) q^3 / 2`.
pub fn subhexagons_per_point(q: u64) -> u64 {
    (1 + q) * q.pow(3) / 2
}

/// A vertex bijection from `abstract_hex` onto the subhexagon `sub` of
/// `ambient` (ambient vertex numbers), verified incidence-exact.
pub fn embed_isomorphism(
    abstract_hex: &Geometry,
    ambient: &Geometry,
    sub: &SubHex,
) -> Result<Vec<usize>> {
    let target = sub.geometry(ambient);
    let iso = find_isomorphism(abstract_hex, &target).ok_or_else(|| {
        Error::Internal("subhexagon is not isomorphic to the abstract flag hexagon".into())
    })?;
    let np = target.num_points();
    let map: Vec<usize> = iso
        .iter()
        .map(|&v| {
            if v < np {
                sub.points[v]
            } else {
                ambient.num_points() + sub.lines[v - np]
            }
        })
        .collect();
    // incidence must hold in the ambient geometry
    for l in 0..abstract_hex.num_lines() {
        let image = map[abstract_hex.num_points() + l] - ambient.num_points();
        for &x in abstract_hex.line(l) {
            if !ambient.incident(map[x as usize], image) {
                return Err(Error::Internal(
                    "embedding does not preserve incidence".into(),
                ));
            }
        }
    }
    Ok(map)
}
