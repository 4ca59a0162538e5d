//! Stabilizer chains (base and strong generating set).
//!
//! Level `i` holds base point `b_i`, the strong generators fixing
//! `b_0..b_{i-1}`, and a transversal `u_x` with `u_x(b_i) = x` for every `x`
//! in the fundamental orbit.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::perm::Perm;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base: u32,
    pub gens: Vec<Perm>,
    pub orbit: Vec<u32>,
    /// Indexed by point; `Some(u)` iff the point lies in the fundamental orbit.
    pub transversal: Vec<Option<Perm>>,
    /// Inverses of the transversal elements, same indexing.
    pub inverse: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, base: u32, gens: Vec<Perm>) -> Level {
        let mut level = Level {
            base,
            gens,
            orbit: Vec::new(),
            transversal: Vec::new(),
            inverse: Vec::new(),
        };
        level.recompute(degree);
        level
    }

    fn recompute(&mut self, degree: usize) {
        let mut transversal: Vec<Option<Perm>> = vec![None; degree];
        transversal[self.base as usize] = Some(Perm::identity(degree));
        let mut orbit = vec![self.base];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for g in &self.gens {
                let y = g.apply(x);
                if transversal[y as usize].is_none() {
                    let u = transversal[x as usize]
                        .as_ref()
                        .expect("orbit point")
                        .then(g);
                    transversal[y as usize] = Some(u);
                    orbit.push(y);
                }
            }
        }
        self.inverse = transversal
            .iter()
            .map(|u| u.as_ref().map(Perm::inverse))
            .collect();
        self.orbit = orbit;
        self.transversal = transversal;
    }
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    pub(crate) levels: Vec<Level>,
}

impl StabChain {
    /// Deterministic Schreier–Sims. The base starts with `prefix`; further
    /// base points are the smallest points moved by the element that needs them.
    pub fn new(degree: usize, gens: &[Perm], prefix: &[u32]) -> StabChain {
        let mut chain = StabChain::seeded(degree, gens, prefix);
        chain.complete();
        chain
    }

    /// Randomized construction from random subproducts, then the deterministic
    /// completion pass, which verifies the chain and repairs it if needed.
    pub fn new_randomized<R: Rng>(
        degree: usize,
        gens: &[Perm],
        prefix: &[u32],
        rng: &mut R,
    ) -> StabChain {
        let mut chain = StabChain::seeded(degree, gens, prefix);
        let nontrivial: Vec<&Perm> = gens.iter().filter(|g| !g.is_identity()).collect();
        if !nontrivial.is_empty() {
            let mut consecutive = 0;
            let mut product = Perm::identity(degree);
            while consecutive < 20 {
                for _ in 0..8 {
                    let g = nontrivial.choose(rng).expect("nonempty");
                    product = product.then(g);
                }
                let (residue, depth) = chain.strip(&product, 0);
                if residue.is_identity() {
                    consecutive += 1;
                } else {
                    consecutive = 0;
                    chain.add_strong_generator(residue, depth);
                }
            }
        }
        chain.complete();
        chain
    }

    fn seeded(degree: usize, gens: &[Perm], prefix: &[u32]) -> StabChain {
        assert!(
            gens.iter().all(|g| g.degree() == degree),
            "generator degree mismatch"
        );
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<u32> = Vec::new();
        for &b in prefix {
            if !base.contains(&b) {
                base.push(b);
            }
        }
        for g in &gens {
            if base.iter().all(|&b| g.fixes(b)) {
                base.push(g.first_moved().expect("nontrivial"));
            }
        }
        let mut levels = Vec::with_capacity(base.len());
        for (i, &b) in base.iter().enumerate() {
            let s: Vec<Perm> = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&c| g.fixes(c)))
                .cloned()
                .collect();
            levels.push(Level::new(degree, b, s));
        }
        StabChain { degree, levels }
    }

    /// Adds a residue `y` of a sift from level 0 stopping at `depth` to
    /// levels `1..=depth`; `y` lies in the group generated at level 0.
    fn add_strong_generator(&mut self, y: Perm, depth: usize) {
        if depth == self.levels.len() {
            let b = y.first_moved().expect("nontrivial residue");
            self.levels.push(Level::new(self.degree, b, Vec::new()));
        }
        for l in 1..=depth {
            self.levels[l].gens.push(y.clone());
            self.levels[l].recompute(self.degree);
        }
    }

    /// Holt's deterministic completion loop.
    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'levels: while i >= 0 {
            let iu = i as usize;
            let nk = self.levels[iu].orbit.len();
            for k in 0..nk {
                let beta = self.levels[iu].orbit[k];
                let ngens = self.levels[iu].gens.len();
                for s in 0..ngens {
                    let level = &self.levels[iu];
                    let g = &level.gens[s];
                    let u_beta = level.transversal[beta as usize]
                        .as_ref()
                        .expect("orbit point");
                    let image = g.apply(beta);
                    let u_image_inv = level.inverse[image as usize].as_ref().expect("orbit point");
                    let h = u_beta.then(g).then(u_image_inv);
                    let (y, depth) = self.strip(&h, iu + 1);
                    if !y.is_identity() {
                        if depth == self.levels.len() {
                            let b = y.first_moved().expect("nontrivial residue");
                            self.levels.push(Level::new(self.degree, b, Vec::new()));
                        }
                        for l in iu + 1..=depth {
                            self.levels[l].gens.push(y.clone());
                            self.levels[l].recompute(self.degree);
                        }
                        i = depth as isize;
                        continue 'levels;
                    }
                }
            }
            i -= 1;
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it passed every level).
    pub(crate) fn strip(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.apply(level.base);
            match &level.inverse[beta as usize] {
                Some(u) => g = g.then(u),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.strip(g, 0).0.is_identity()
    }

    /// Strong generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_gens(&self, k: usize) -> &[Perm] {
        self.levels.get(k).map_or(&[], |l| &l.gens)
    }

    pub fn strong_generators(&self) -> &[Perm] {
        self.stabilizer_gens(0)
    }

    /// Fundamental orbit at level `k`.
    pub fn fundamental_orbit(&self, k: usize) -> &[u32] {
        &self.levels[k].orbit
    }

    /// Transversal element mapping the `k`-th base point to `x`.
    pub fn transversal(&self, k: usize, x: u32) -> Option<&Perm> {
        self.levels[k].transversal[x as usize].as_ref()
    }

    /// All group elements, by walking every transversal product.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for g in &out {
                for &x in &level.orbit {
                    let u = level.transversal[x as usize].as_ref().expect("orbit point");
                    next.push(g.then(u));
                }
            }
            out = next;
        }
        out
    }
}
