//! Permutations acting on the right and a deterministic Schreier–Sims
//! stabilizer chain for computing orders of permutation groups.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A permutation of `{0, …, n-1}` acting on the right: `i^(gh) = (i^g)^h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation of `n` points from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let p = p as usize;
                if p >= n || used[p] {
                    return Err(Error::InvalidArgument(format!("bad cycle {cycle:?} on {n} points")));
                }
                used[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i as u32);
                i = self.images[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u128 {
        self.cycles().iter().fold(1u128, |acc, c| num_integer::lcm(acc, c.len() as u128))
    }

    fn first_moved(&self) -> Option<u32> {
        self.images.iter().enumerate().find(|(i, &j)| *i as u32 != j).map(|(i, _)| i as u32)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

struct Level {
    point: u32,
    gens: Vec<Permutation>,
    /// `transversal[β]` maps the base point to `β`, for `β` in the orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<u32>,
    checked: std::collections::HashSet<(u32, usize)>,
}

impl Level {
    fn new(point: u32, degree: usize) -> Self {
        let mut level = Level {
            point,
            gens: Vec::new(),
            transversal: vec![None; degree],
            orbit: Vec::new(),
            checked: Default::default(),
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        if self.orbit.is_empty() {
            self.transversal[self.point as usize] = Some(Permutation::identity(degree));
            self.orbit.push(self.point);
        }
        // Existing transversal elements stay valid; only extend.
        let mut k = 0;
        while k < self.orbit.len() {
            let beta = self.orbit[k];
            for g in &self.gens {
                let img = g.image(beta as usize);
                if self.transversal[img].is_none() {
                    let u = self.transversal[beta as usize].as_ref().unwrap().then(g);
                    self.transversal[img] = Some(u);
                    self.orbit.push(img as u32);
                }
            }
            k += 1;
        }
    }
}

/// A base and strong generating set built by the deterministic
/// Schreier–Sims algorithm; base points are chosen as the least moved point.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidArgument(format!("generator of degree {} in a group of degree {degree}", g.degree())));
        }
        let mut chain = StabilizerChain { degree, levels: Vec::new() };
        for g in generators.iter().filter(|g| !g.is_identity()) {
            chain.insert_initial(g.clone());
        }
        chain.complete();
        Ok(chain)
    }

    fn insert_initial(&mut self, g: Permutation) {
        let mut depth = 0;
        while depth < self.levels.len() && g.image(self.levels[depth].point as usize) == self.levels[depth].point as usize {
            depth += 1;
        }
        if depth == self.levels.len() {
            // g fixes every base point: extend the base
            let p = g.first_moved().unwrap();
            self.levels.push(Level::new(p, self.degree));
        }
        for level in &mut self.levels[..=depth] {
            level.gens.push(g.clone());
            level.rebuild_orbit();
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` when it got through).
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.image(level.point as usize);
            match &level.transversal[beta] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut found = None;
            'search: for k in 0..self.levels[iu].orbit.len() {
                let beta = self.levels[iu].orbit[k];
                for s in 0..self.levels[iu].gens.len() {
                    if self.levels[iu].checked.contains(&(beta, s)) {
                        continue;
                    }
                    let level = &self.levels[iu];
                    let gen = &level.gens[s];
                    let u_beta = level.transversal[beta as usize].as_ref().unwrap();
                    let img = gen.image(beta as usize);
                    let u_img = level.transversal[img].as_ref().unwrap();
                    let schreier = u_beta.then(gen).then(&u_img.inverse());
                    let (h, j) = self.sift(schreier, iu + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        found = Some((h, j));
                        break 'search;
                    }
                    self.levels[iu].checked.insert((beta, s));
                }
            }
            match found {
                Some((h, j)) => {
                    if j == self.levels.len() {
                        let p = h.first_moved().unwrap();
                        self.levels.push(Level::new(p, self.degree));
                    }
                    for level in &mut self.levels[iu + 1..=j] {
                        level.gens.push(h.clone());
                        level.rebuild_orbit();
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, j) = self.sift(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }
}

/// Order of the permutation group generated by `generators` on `degree` points.
pub fn group_order(degree: usize, generators: &[Permutation]) -> Result<BigUint> {
    Ok(StabilizerChain::new(degree, generators)?.order())
}
