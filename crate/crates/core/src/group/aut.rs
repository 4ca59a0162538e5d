//! Automorphisms of the flag hexagon H(q,1) induced by collineations and
//! the standard correlation of PG(2,q).
//!
//! Vertex numbering follows the flag hexagon: flags first, then the points
//! of PG(2,q), then its lines. A matrix `M` acts on point coordinates as
//! `x -> Mx` and on line coordinates as `u -> M^{-T} u`, which preserves
//! `x · u = 0`.

use super::perm::Perm;
use super::PermGroup;
use crate::constructions::FlagHexagon;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::geometry::is_isomorphism;

pub type Mat3 = [[Elem; 3]; 3];

/// |PΓL₃(q) ⋊ C₂| = 2r(q³−1)(q³−q)(q³−q²)/(q−1).
pub fn aut_flag_hexagon_order(q: u64, r: u64) -> u128 {
    let q = q as u128;
    2 * r as u128 * (q.pow(3) - 1) * (q.pow(3) - q) * (q.pow(3) - q * q) / (q - 1)
}

/// Named generators of Aut(H(q,1)).
#[derive(Clone, Debug)]
pub struct FlagHexGenerators {
    /// `I + E_ij` and `I + g E_ij` for all `i != j`; these generate SL₃(q).
    pub transvections: Vec<Perm>,
    /// `diag(g, 1, 1)` with `g` primitive.
    pub diagonal: Perm,
    /// Coordinatewise `x -> x^p`; absent over prime fields.
    pub frobenius: Option<Perm>,
    /// Point `x` to line `x` and back.
    pub duality: Perm,
}

impl FlagHexGenerators {
    pub fn all(&self) -> Vec<Perm> {
        let mut v = self.transvections.clone();
        v.push(self.diagonal.clone());
        v.extend(self.frobenius.clone());
        v.push(self.duality.clone());
        v
    }
}

fn mat_identity() -> Mat3 {
    let mut m = [[0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn mat_vec(f: &FiniteField, m: &Mat3, x: &[Elem]) -> Vec<Elem> {
    m.iter()
        .map(|row| (0..3).fold(0, |acc, j| f.add(acc, f.mul(row[j], x[j]))))
        .collect()
}

/// Inverse transpose via the cofactor matrix: `M^{-T} = cof(M) / det M`.
fn inverse_transpose(f: &FiniteField, m: &Mat3) -> Result<Mat3> {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]))
    };
    let others = |i: usize| match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut cof = [[0; 3]; 3];
    for (i, row) in cof.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let (r0, r1) = others(i);
            let (c0, c1) = others(j);
            let v = minor(r0, r1, c0, c1);
            *c = if (i + j) % 2 == 0 { v } else { f.neg(v) };
        }
    }
    let det = (0..3).fold(0, |acc, j| f.add(acc, f.mul(m[0][j], cof[0][j])));
    if det == 0 {
        return Err(Error::Domain("singular matrix".into()));
    }
    let d = f.inv(det);
    for row in cof.iter_mut() {
        for c in row.iter_mut() {
            *c = f.mul(*c, d);
        }
    }
    Ok(cof)
}

/// Vertex permutation from maps on PG(2,q) points and lines; with `swap`,
/// points go to lines and lines to points.
fn vertex_perm(
    hex: &FlagHexagon,
    point_map: &dyn Fn(usize) -> usize,
    line_map: &dyn Fn(usize) -> usize,
    swap: bool,
) -> Result<Perm> {
    let nf = hex.flags.len();
    let n = hex.plane.coords.len();
    let mut images = vec![0u32; nf + 2 * n];
    for (i, &(x, u)) in hex.flags.iter().enumerate() {
        let (a, b) = (point_map(x as usize) as u32, line_map(u as usize) as u32);
        let flag = if swap { (b, a) } else { (a, b) };
        images[i] = *hex
            .flag_index
            .get(&flag)
            .ok_or_else(|| Error::Internal(format!("map sends flag {i} to a non-flag")))?;
    }
    for x in 0..n {
        let (px, lx) = (point_map(x), line_map(x));
        if swap {
            images[nf + x] = (nf + n + px) as u32;
            images[nf + n + x] = (nf + lx) as u32;
        } else {
            images[nf + x] = (nf + px) as u32;
            images[nf + n + x] = (nf + n + lx) as u32;
        }
    }
    Perm::from_images(images).map_err(|e| Error::Internal(format!("induced map: {e}")))
}

fn coord_index(f: &FiniteField, hex: &FlagHexagon, v: &[Elem]) -> usize {
    let nv = f.normalize(v).expect("nonzero vector");
    hex.plane.index[&nv]
}

fn matrix_perm(f: &FiniteField, hex: &FlagHexagon, m: &Mat3) -> Result<Perm> {
    let mt = inverse_transpose(f, m)?;
    let coords = &hex.plane.coords;
    vertex_perm(
        hex,
        &|x| coord_index(f, hex, &mat_vec(f, m, &coords[x])),
        &|u| coord_index(f, hex, &mat_vec(f, &mt, &coords[u])),
        false,
    )
}

/// Collineation `x -> M x` composed with the correlation when `dual` holds.
pub fn collineation_perm(
    f: &FiniteField,
    hex: &FlagHexagon,
    m: &Mat3,
    frobenius_power: u32,
    dual: bool,
) -> Result<Perm> {
    let mut g = matrix_perm(f, hex, m)?;
    for _ in 0..frobenius_power {
        g = g.then(&frobenius_perm(f, hex)?);
    }
    if dual {
        g = g.then(&duality_perm(hex)?);
    }
    Ok(g)
}

fn frobenius_perm(f: &FiniteField, hex: &FlagHexagon) -> Result<Perm> {
    let coords = &hex.plane.coords;
    let frob = |x: usize| {
        let v: Vec<Elem> = coords[x].iter().map(|&c| f.frobenius(c)).collect();
        coord_index(f, hex, &v)
    };
    vertex_perm(hex, &frob, &frob, false)
}

fn duality_perm(hex: &FlagHexagon) -> Result<Perm> {
    vertex_perm(hex, &|x| x, &|u| u, true)
}

pub fn diag_matrix(g: Elem) -> Mat3 {
    let mut m = mat_identity();
    m[0][0] = g;
    m
}

pub fn flag_hexagon_generators(f: &FiniteField, hex: &FlagHexagon) -> Result<FlagHexGenerators> {
    let g = f.primitive_element();
    let mut transvections = Vec::new();
    let mut scalars = vec![1];
    if g != 1 {
        scalars.push(g);
    }
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for &s in &scalars {
                let mut m = mat_identity();
                m[i][j] = s;
                transvections.push(matrix_perm(f, hex, &m)?);
            }
        }
    }
    let gens = FlagHexGenerators {
        transvections,
        diagonal: matrix_perm(f, hex, &diag_matrix(g))?,
        frobenius: if f.r() > 1 {
            Some(frobenius_perm(f, hex)?)
        } else {
            None
        },
        duality: duality_perm(hex)?,
    };
    for p in gens.all() {
        if !is_isomorphism(&hex.geometry, &hex.geometry, &as_usize(&p)) {
            return Err(Error::Internal(
                "flag hexagon generator is not an automorphism".into(),
            ));
        }
    }
    Ok(gens)
}

pub(crate) fn as_usize(p: &Perm) -> Vec<usize> {
    p.images().iter().map(|&x| x as usize).collect()
}

/// Aut(H(q,1)) ≅ PΓL₃(q) ⋊ C₂ acting on the flag hexagon's vertices.
pub fn build_aut_flag_hexagon(f: &FiniteField, hex: &FlagHexagon) -> Result<PermGroup> {
    let gens = flag_hexagon_generators(f, hex)?;
    PermGroup::new(hex.geometry.num_vertices(), gens.all())
}
