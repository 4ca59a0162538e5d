//! Permutation groups: stabilizer chains, orbits, set orbits with Schreier
//! stabilizers, smallest-image canonical forms, and the automorphism group of
//! the flag hexagon.

mod aut;
mod chain;
mod minimage;
mod perm;

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use aut::{
    aut_flag_hexagon_order, build_aut_flag_hexagon, collineation_perm, diag_matrix,
    flag_hexagon_generators, FlagHexGenerators, Mat3,
};
pub use chain::StabChain;
pub use perm::Perm;

use minimage::Canonizer;

/// A permutation group given by generators; the stabilizer chain and the
/// canonizer caches are built on first use, exactly once.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: OnceLock<StabChain>,
    canonizer: OnceLock<Canonizer>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain: self.chain.clone(),
            canonizer: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators.len())
            .finish()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetOrbitResult {
    pub orbit_size: u64,
    pub stabilizer_gens: Vec<Perm>,
    pub stabilizer_order: u128,
}

/// JSON form of a generating set.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsFile {
    pub degree: usize,
    pub generators: Vec<Perm>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Domain(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
            canonizer: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new()).expect("no generators")
    }

    /// Same group with its chain built by the randomized-then-verified method.
    pub fn with_randomized_chain<R: Rng>(
        degree: usize,
        generators: Vec<Perm>,
        rng: &mut R,
    ) -> Result<PermGroup> {
        let g = PermGroup::new(degree, generators)?;
        let chain = StabChain::new_randomized(degree, &g.generators, &[], rng);
        g.chain.set(chain).expect("fresh group");
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::new(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    /// Uniformly random element, as a product of random transversal elements.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let chain = self.chain();
        let mut g = Perm::identity(self.degree);
        for level in chain.levels.iter().rev() {
            let x = level.orbit[rng.random_range(0..level.orbit.len())];
            g = g.then(level.transversal[x as usize].as_ref().expect("orbit point"));
        }
        g
    }

    /// Sorted orbit of `x`.
    pub fn orbit(&self, x: u32) -> Vec<u32> {
        orbit_under(&self.generators, self.degree, x)
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        orbits_under(&self.generators, self.degree)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Subgroup fixing each of `points`.
    pub fn pointwise_stabilizer(&self, points: &[u32]) -> PermGroup {
        let chain = StabChain::new(self.degree, &self.generators, points);
        // the deduplicated prefix occupies the first base positions
        let mut prefix = points.to_vec();
        prefix.sort_unstable();
        prefix.dedup();
        let gens = chain.stabilizer_gens(prefix.len()).to_vec();
        PermGroup::new(self.degree, gens).expect("same degree")
    }

    /// Orbit of the set `set` under the group together with generators of
    /// its setwise stabilizer. `max_orbit` bounds the number of stored images.
    pub fn set_orbit_with_stabilizer(
        &self,
        set: &[u32],
        max_orbit: usize,
    ) -> Result<SetOrbitResult> {
        let mut start: Vec<u32> = set.to_vec();
        start.sort_unstable();
        start.dedup();
        if let Some(&x) = start.iter().find(|&&x| x as usize >= self.degree) {
            return Err(Error::Domain(format!(
                "point {x} outside degree {}",
                self.degree
            )));
        }
        let gens = &self.generators;
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = vec![start.clone()];
        let mut parent: Vec<(u32, u16)> = vec![(u32::MAX, 0)];
        index.insert(start.clone(), 0);
        let mut k = 0;
        while k < sets.len() {
            for (s, g) in gens.iter().enumerate() {
                let image = g.apply_set(&sets[k]);
                if !index.contains_key(&image) {
                    if sets.len() >= max_orbit {
                        return Err(Error::Resource(format!(
                            "set orbit exceeds the budget of {max_orbit} images"
                        )));
                    }
                    index.insert(image.clone(), sets.len() as u32);
                    sets.push(image);
                    parent.push((k as u32, s as u16));
                }
            }
            k += 1;
        }
        let orbit_size = sets.len() as u64;
        let group_order = self.order();
        if !group_order.is_multiple_of(orbit_size as u128) {
            return Err(Error::Internal(format!(
                "orbit size {orbit_size} does not divide group order {group_order}"
            )));
        }
        let target = group_order / orbit_size as u128;

        // u_i maps the start set to sets[i]
        let rep = |i: usize| -> Perm {
            let mut path = Vec::new();
            let mut j = i;
            while parent[j].0 != u32::MAX {
                path.push(parent[j].1);
                j = parent[j].0 as usize;
            }
            path.iter()
                .rev()
                .fold(Perm::identity(self.degree), |acc, &s| {
                    acc.then(&gens[s as usize])
                })
        };

        let mut stab_gens: Vec<Perm> = Vec::new();
        let mut stab = StabChain::new(self.degree, &[], &[]);
        'outer: for (i, set) in sets.iter().enumerate() {
            if stab.order() == target {
                break;
            }
            let mut u_i: Option<Perm> = None;
            for (s, g) in gens.iter().enumerate() {
                let image = g.apply_set(set);
                let j = index[&image] as usize;
                if parent[j] == (i as u32, s as u16) {
                    continue;
                }
                let ui = u_i.get_or_insert_with(|| rep(i));
                let h = ui.then(g).then(&rep(j).inverse());
                debug_assert_eq!(h.apply_set(&start), start);
                if !stab.contains(&h) {
                    stab_gens.push(h);
                    stab = StabChain::new(self.degree, &stab_gens, &[]);
                    if stab.order() == target {
                        break 'outer;
                    }
                }
            }
        }
        if stab.order() != target {
            return Err(Error::Internal(format!(
                "stabilizer order {} differs from |G|/orbit = {target}",
                stab.order()
            )));
        }
        Ok(SetOrbitResult {
            orbit_size,
            stabilizer_gens: stab_gens,
            stabilizer_order: target,
        })
    }

    /// Lexicographically least sorted set in the orbit of `set`.
    pub fn smallest_image_set(&self, set: &[u32]) -> Vec<u32> {
        self.canonizer
            .get_or_init(|| Canonizer::new(self.degree, &self.generators))
            .smallest_image(set)
    }

    pub fn to_file(&self) -> GeneratorsFile {
        GeneratorsFile {
            degree: self.degree,
            generators: self.generators.clone(),
        }
    }

    pub fn from_file(file: GeneratorsFile) -> Result<PermGroup> {
        PermGroup::new(file.degree, file.generators)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string(&self.to_file())?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<PermGroup> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: GeneratorsFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            msg: e.to_string(),
        })?;
        PermGroup::from_file(file)
    }
}

/// Sorted orbit of `x` under the group generated by `gens`.
pub fn orbit_under(gens: &[Perm], degree: usize, x: u32) -> Vec<u32> {
    let mut seen = vec![false; degree];
    seen[x as usize] = true;
    let mut orbit = vec![x];
    let mut k = 0;
    while k < orbit.len() {
        let y = orbit[k];
        k += 1;
        for g in gens {
            let z = g.apply(y);
            if !std::mem::replace(&mut seen[z as usize], true) {
                orbit.push(z);
            }
        }
    }
    orbit.sort_unstable();
    orbit
}

pub fn orbits_under(gens: &[Perm], degree: usize) -> Vec<Vec<u32>> {
    let mut done = vec![false; degree];
    let mut out = Vec::new();
    for x in 0..degree as u32 {
        if !done[x as usize] {
            let o = orbit_under(gens, degree, x);
            for &y in &o {
                done[y as usize] = true;
            }
            out.push(o);
        }
    }
    out
}

/// Orbit lengths as sorted `(length, multiplicity)` pairs, longest first.
pub fn orbit_length_multiset(orbits: &[Vec<u32>]) -> Vec<(usize, usize)> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for o in orbits {
        *counts.entry(o.len()).or_default() += 1;
    }
    let mut v: Vec<(usize, usize)> = counts.into_iter().collect();
    v.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
    v
}
