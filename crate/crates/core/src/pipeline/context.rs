use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    build_dual_split_cayley, build_flag_hexagon, embed_isomorphism, least_opposite_pair,
    subhexagon_closure, DualSplitCayley, FlagHexagon, SubHex,
};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::geometry::IsoSearch;
use crate::group::{
    aut_flag_hexagon_order, build_aut_flag_hexagon, flag_hexagon_generators, Perm, PermGroup,
};

/// Kernel isomorphisms are counted up to this many.
const KERNEL_COUNT_LIMIT: usize = 1000;

/// A coset representative `diag(g^a, 1, 1) · φ^b · δ^c` of SL₃(q) in
/// Aut(H(q,1)), with `φ` the Frobenius map and `δ` the standard correlation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterElement {
    pub diagonal_power: u32,
    pub frobenius_power: u32,
    pub duality: bool,
    pub extends: bool,
}

/// Everything the pipeline needs for one field order: the abstract flag
/// hexagon and its group, the ambient H(q)^D, one fixed embedded subhexagon,
/// and the group induced on that subhexagon by its stabilizer.
pub struct HexContext {
    pub q: u32,
    pub field: FiniteField,
    pub flag_hex: FlagHexagon,
    /// Full Aut(H(q,1)).
    pub aut: PermGroup,
    pub ambient: DualSplitCayley,
    pub subhex: SubHex,
    /// Abstract vertex -> ambient vertex.
    pub embedding: Vec<usize>,
    /// Automorphisms of H(q,1) whose transport through the embedding extends
    /// to H(q)^D. Classes are taken under this group.
    pub class_group: PermGroup,
    /// Automorphisms of H(q)^D fixing the embedded subhexagon elementwise.
    pub kernel_order: u64,
    pub outer: Vec<OuterElement>,
    pub setup_seconds: f64,
}

impl HexContext {
    pub fn new(q: u32) -> Result<HexContext> {
        HexContext::with_seed(q, None)
    }

    /// With a seed, the class group's stabilizer chain is built by the
    /// randomized method (verified, so the group is the same either way).
    pub fn with_seed(q: u32, seed: Option<u64>) -> Result<HexContext> {
        if q != 2 && q != 4 {
            return Err(Error::Config(format!(
                "pipeline supports q in {{2, 4}}, got {q}"
            )));
        }
        let start = Instant::now();
        let field = FiniteField::of_order(q)?;
        let flag_hex = build_flag_hexagon(&field);
        let aut = build_aut_flag_hexagon(&field, &flag_hex)?;
        let expected = aut_flag_hexagon_order(q as u64, field.r() as u64);
        if aut.order() != expected {
            return Err(Error::Internal(format!(
                "Aut(H({q},1)) has order {} instead of {expected}",
                aut.order()
            )));
        }
        let ambient = build_dual_split_cayley(&field)?;
        let (l1, l2) = least_opposite_pair(&ambient.geometry)
            .ok_or_else(|| Error::Internal("no opposite line pair".into()))?;
        let subhex = subhexagon_closure(&ambient.geometry, l1, l2)?;
        let embedding = embed_isomorphism(&flag_hex.geometry, &ambient.geometry, &subhex)?;

        let mut ctx = HexContext {
            q,
            field,
            flag_hex,
            class_group: PermGroup::trivial(aut.degree()),
            aut,
            ambient,
            subhex,
            embedding,
            kernel_order: 0,
            outer: Vec::new(),
            setup_seconds: 0.0,
        };

        let fixed: Vec<(usize, usize)> = ctx.embedding.iter().map(|&v| (v, v)).collect();
        ctx.kernel_order = IsoSearch::new(&ctx.ambient.geometry, &ctx.ambient.geometry, &fixed)?
            .count(KERNEL_COUNT_LIMIT) as u64;

        let gens = flag_hexagon_generators(&ctx.field, &ctx.flag_hex)?;
        let mut class_gens = Vec::new();
        for t in &gens.transvections {
            if !ctx.extends(t)? {
                return Err(Error::Internal(
                    "a transvection of PG(2,q) does not extend to the ambient hexagon".into(),
                ));
            }
            class_gens.push(t.clone());
        }
        let index = gcd(3, q - 1);
        let g = ctx.field.primitive_element();
        for a in 0..index {
            for b in 0..ctx.field.r() as u32 {
                for c in [false, true] {
                    if a == 0 && b == 0 && !c {
                        continue;
                    }
                    let m = crate::group::diag_matrix(ctx.field.pow(g, a));
                    let p = crate::group::collineation_perm(&ctx.field, &ctx.flag_hex, &m, b, c)?;
                    let extends = ctx.extends(&p)?;
                    ctx.outer.push(OuterElement {
                        diagonal_power: a,
                        frobenius_power: b,
                        duality: c,
                        extends,
                    });
                    if extends {
                        class_gens.push(p);
                    }
                }
            }
        }
        ctx.class_group = match seed {
            Some(s) => PermGroup::with_randomized_chain(
                ctx.aut.degree(),
                class_gens,
                &mut ChaCha8Rng::seed_from_u64(s),
            )?,
            None => PermGroup::new(ctx.aut.degree(), class_gens)?,
        };
        ctx.setup_seconds = start.elapsed().as_secs_f64();
        Ok(ctx)
    }

    /// Whether the automorphism `sigma` of H(q,1), carried to the embedded
    /// subhexagon, is the restriction of an automorphism of H(q)^D.
    pub fn extends(&self, sigma: &Perm) -> Result<bool> {
        let fixed: Vec<(usize, usize)> = self
            .embedding
            .iter()
            .enumerate()
            .map(|(v, &e)| (e, self.embedding[sigma.apply(v as u32) as usize]))
            .collect();
        Ok(
            IsoSearch::new(&self.ambient.geometry, &self.ambient.geometry, &fixed)?
                .first()
                .is_some(),
        )
    }

    /// Order of the subhexagon stabilizer: kernel times induced group.
    pub fn stabilizer_group_order(&self) -> u128 {
        self.kernel_order as u128 * self.class_group.order()
    }

    pub fn num_flag_points(&self) -> usize {
        self.flag_hex.geometry.num_points()
    }

    /// Ambient point ids of abstract flag-hexagon points.
    pub fn embed_points(&self, points: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = points
            .iter()
            .map(|&p| self.embedding[p as usize] as u32)
            .collect();
        v.sort_unstable();
        v
    }

    /// Ovoid size of H(q,1): `q² + q + 1`.
    pub fn ovoid_size(&self) -> usize {
        (self.q * self.q + self.q + 1) as usize
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
