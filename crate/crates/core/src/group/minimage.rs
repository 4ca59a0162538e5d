//! Smallest image of a set under a permutation group.
//!
//! The image is built one point at a time. With `K` the pointwise stabilizer
//! of the points already placed, the next point is the least orbit minimum
//! of `K` over the unplaced elements of the candidate sets; each candidate
//! is then moved by a `K`-element onto that point. Candidate sets always
//! share the placed prefix and their unplaced elements all exceed it.
//! Stabilizers and orbit transversals are cached per prefix.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, RwLock};

use super::chain::StabChain;
use super::perm::Perm;

pub(crate) struct Canonizer {
    degree: usize,
    root: Arc<Node>,
}

struct Node {
    gens: Vec<Perm>,
    gens_inv: Vec<Perm>,
    /// Least point of each `K`-orbit, indexed by point.
    orbit_min: Vec<u32>,
    /// For an orbit minimum `m`: `w[x]` maps `x` to `m`.
    transversals: Mutex<HashMap<u32, Arc<Vec<Option<Perm>>>>>,
    children: RwLock<HashMap<u32, Arc<Node>>>,
}

impl Node {
    fn new(degree: usize, gens: Vec<Perm>) -> Node {
        let gens_inv = gens.iter().map(Perm::inverse).collect();
        let orbit_min = super::orbits_under(&gens, degree).into_iter().fold(
            vec![0u32; degree],
            |mut acc, o| {
                for &x in &o {
                    acc[x as usize] = o[0];
                }
                acc
            },
        );
        Node {
            gens,
            gens_inv,
            orbit_min,
            transversals: Mutex::new(HashMap::new()),
            children: RwLock::new(HashMap::new()),
        }
    }

    fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    fn transversal(&self, degree: usize, m: u32) -> Arc<Vec<Option<Perm>>> {
        if let Some(t) = self.transversals.lock().expect("poisoned").get(&m) {
            return Arc::clone(t);
        }
        let mut w: Vec<Option<Perm>> = vec![None; degree];
        w[m as usize] = Some(Perm::identity(degree));
        let mut queue = vec![m];
        let mut k = 0;
        while k < queue.len() {
            let y = queue[k];
            k += 1;
            for (g, g_inv) in self.gens.iter().zip(&self.gens_inv) {
                let z = g.apply(y);
                if w[z as usize].is_none() {
                    let wz = g_inv.then(w[y as usize].as_ref().expect("visited"));
                    w[z as usize] = Some(wz);
                    queue.push(z);
                }
            }
        }
        let t = Arc::new(w);
        self.transversals
            .lock()
            .expect("poisoned")
            .entry(m)
            .or_insert(t)
            .clone()
    }

    fn child(&self, degree: usize, m: u32) -> Arc<Node> {
        if let Some(c) = self.children.read().expect("poisoned").get(&m) {
            return Arc::clone(c);
        }
        let chain = StabChain::new(degree, &self.gens, &[m]);
        let node = Arc::new(Node::new(degree, chain.stabilizer_gens(1).to_vec()));
        self.children
            .write()
            .expect("poisoned")
            .entry(m)
            .or_insert(node)
            .clone()
    }
}

impl Canonizer {
    pub(crate) fn new(degree: usize, gens: &[Perm]) -> Canonizer {
        let gens = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        Canonizer {
            degree,
            root: Arc::new(Node::new(degree, gens)),
        }
    }

    pub(crate) fn smallest_image(&self, set: &[u32]) -> Vec<u32> {
        let mut start = set.to_vec();
        start.sort_unstable();
        start.dedup();
        let k = start.len();
        let mut states: Vec<Vec<u32>> = vec![start];
        let mut node = Arc::clone(&self.root);
        let mut placed = 0;
        while placed < k {
            if node.is_trivial() {
                return states.into_iter().min().expect("at least one state");
            }
            let m = states
                .iter()
                .flat_map(|t| t[placed..].iter().map(|&x| node.orbit_min[x as usize]))
                .min()
                .expect("unplaced points remain");
            let w = node.transversal(self.degree, m);
            let mut next: HashSet<Vec<u32>> = HashSet::new();
            for t in &states {
                for &x in &t[placed..] {
                    if node.orbit_min[x as usize] == m {
                        let image = w[x as usize].as_ref().expect("same orbit").apply_set(t);
                        debug_assert_eq!(image[placed], m);
                        next.insert(image);
                    }
                }
            }
            states = next.into_iter().collect();
            placed += 1;
            node = node.child(self.degree, m);
        }
        states.swap_remove(0)
    }
}
