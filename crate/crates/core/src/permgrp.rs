//! Permutations and permutation groups with a base and strong generating set.
//!
//! Points are `0..degree`. Groups act on the right: `g.then(&h)` applies `g`
//! first. The stabilizer chain is built with deterministic Schreier–Sims, and the
//! base is extended with the first moved point of each new strong generator.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list {0:?} is not a bijection")]
    InvalidPermutation(Vec<usize>),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("point set is not invariant under generator {0}")]
    NotInvariant(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a >= degree || b >= degree || touched[a] {
                    return Err(PermError::InvalidPermutation(cycle.to_vec()));
                }
                touched[a] = true;
                images[a] = b;
            }
        }
        Self::from_images(images)
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        if images.contains(&0) {
            return Err(PermError::InvalidPermutation(images.to_vec()));
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.degree()), |acc, _| acc.then(self))
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &j)| *i != j).map(|(i, _)| i)
    }

    /// Nontrivial cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// Cycle notation with points shifted by `offset`, "()" for the identity.
    pub fn cycle_string(&self, offset: usize) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let pts: Vec<String> = c.iter().map(|p| (p + offset).to_string()).collect();
                format!("({})", pts.join(" "))
            })
            .collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string(0))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string(0))
    }
}

#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    /// Indices into `strong_generators` fixing all earlier base points.
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// transversal[β] maps the base point to β.
    transversal: Vec<Option<Permutation>>,
}

#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    strong_generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        Self::with_base(degree, generators, &[])
    }

    /// Like [`new`](Self::new) but the base starts with `base_prefix`.
    pub fn with_base(
        degree: usize,
        generators: Vec<Permutation>,
        base_prefix: &[usize],
    ) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch { expected: degree, got: g.degree() });
            }
        }
        let mut group = PermGroup {
            degree,
            generators,
            strong_generators: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        };
        group.schreier_sims(base_prefix);
        Ok(group)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("no generators")
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]).unwrap());
            let cycle: Vec<usize> = (0..degree).collect();
            gens.push(Permutation::from_cycles(degree, &[&cycle]).unwrap());
        }
        Self::new(degree, gens).unwrap()
    }

    pub fn alternating(degree: usize) -> Self {
        let gens = (2..degree)
            .map(|k| Permutation::from_cycles(degree, &[&[0, 1, k]]).unwrap())
            .collect();
        Self::new(degree, gens).unwrap()
    }

    fn schreier_sims(&mut self, base_prefix: &[usize]) {
        let mut seen = HashSet::new();
        let mut strong: Vec<Permutation> = Vec::new();
        for g in &self.generators {
            if !g.is_identity() && seen.insert(g.clone()) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = base_prefix.to_vec();
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().expect("non-identity"));
            }
        }
        self.strong_generators = strong;
        self.levels = base
            .iter()
            .map(|&b| Level { base_point: b, gens: Vec::new(), orbit: Vec::new(), transversal: Vec::new() })
            .collect();
        for l in 0..self.levels.len() {
            self.rebuild_level(l);
        }

        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            match self.find_missing_generator(level) {
                None => i -= 1,
                Some((residue, j)) => {
                    self.strong_generators.push(residue.clone());
                    if j == self.levels.len() {
                        let b = residue.first_moved_point().expect("non-identity residue");
                        self.levels.push(Level {
                            base_point: b,
                            gens: Vec::new(),
                            orbit: Vec::new(),
                            transversal: Vec::new(),
                        });
                    }
                    for l in (level + 1)..=j {
                        self.rebuild_level(l);
                    }
                    // levels at or below `level` gain the generator but not new orbit points
                    let idx = self.strong_generators.len() - 1;
                    for l in 0..=level {
                        self.levels[l].gens.push(idx);
                    }
                    i = j as isize;
                }
            }
        }
        // base points that ended up with trivial orbits carry no information
        self.levels.retain(|l| l.orbit.len() > 1 || base_prefix.contains(&l.base_point));
        self.order = self
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
    }

    fn rebuild_level(&mut self, l: usize) {
        let prefix: Vec<usize> = self.levels[..l].iter().map(|lv| lv.base_point).collect();
        let gens: Vec<usize> = (0..self.strong_generators.len())
            .filter(|&s| prefix.iter().all(|&b| self.strong_generators[s].apply(b) == b))
            .collect();
        let b = self.levels[l].base_point;
        let mut transversal: Vec<Option<Permutation>> = vec![None; self.degree];
        transversal[b] = Some(Permutation::identity(self.degree));
        let mut orbit = vec![b];
        let mut k = 0;
        while k < orbit.len() {
            let beta = orbit[k];
            for &s in &gens {
                let g = &self.strong_generators[s];
                let gamma = g.apply(beta);
                if transversal[gamma].is_none() {
                    let u = transversal[beta].as_ref().unwrap().then(g);
                    transversal[gamma] = Some(u);
                    orbit.push(gamma);
                }
            }
            k += 1;
        }
        let level = &mut self.levels[l];
        level.gens = gens;
        level.orbit = orbit;
        level.transversal = transversal;
    }

    fn find_missing_generator(&self, level: usize) -> Option<(Permutation, usize)> {
        let lv = &self.levels[level];
        for &beta in &lv.orbit {
            let u_beta = lv.transversal[beta].as_ref().unwrap();
            for &s in &lv.gens {
                let g = &self.strong_generators[s];
                let image = g.apply(beta);
                let u_image = lv.transversal[image].as_ref().unwrap();
                let schreier = u_beta.then(g).then(&u_image.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (residue, j) = self.sift_from(schreier, level + 1);
                if !residue.is_identity() {
                    return Some((residue, j));
                }
            }
        }
        None
    }

    /// Sifts through levels `start..`; returns the residue and the level where it stopped.
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for l in start..self.levels.len() {
            let lv = &self.levels[l];
            let beta = g.apply(lv.base_point);
            match &lv.transversal[beta] {
                None => return (g, l),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong_generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Fundamental orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, PermError> {
        if g.degree() != self.degree {
            return Err(PermError::DegreeMismatch { expected: self.degree, got: g.degree() });
        }
        let (residue, _) = self.sift_from(g.clone(), 0);
        Ok(residue.is_identity())
    }

    /// Orbit of `point`, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = BTreeSet::from([point]);
        let mut queue = VecDeque::from([point]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.apply(x);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Orbits partitioning `0..degree`, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !done[p] {
                let o = self.orbit(p);
                for &x in &o {
                    done[x] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Point stabilizer, read off a stabilizer chain whose base starts at `point`.
    pub fn stabilizer(&self, point: usize) -> PermGroup {
        let chain = PermGroup::with_base(self.degree, self.strong_generators.clone(), &[point])
            .expect("strong generators have the group's degree");
        let gens: Vec<Permutation> = chain
            .strong_generators
            .iter()
            .filter(|g| g.apply(point) == point)
            .cloned()
            .collect();
        let rest: Vec<usize> = chain.base().into_iter().skip(1).collect();
        PermGroup::with_base(self.degree, gens, &rest).expect("same degree")
    }

    /// The group induced on an invariant point set, with points renumbered by
    /// their position in the sorted set.
    pub fn restrict(&self, points: &[usize]) -> Result<PermGroup, PermError> {
        let sorted: Vec<usize> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut position = vec![usize::MAX; self.degree];
        for (k, &p) in sorted.iter().enumerate() {
            position[p] = k;
        }
        let mut gens = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            let mut images = Vec::with_capacity(sorted.len());
            for &p in &sorted {
                let k = position[g.apply(p)];
                if k == usize::MAX {
                    return Err(PermError::NotInvariant(gi));
                }
                images.push(k);
            }
            gens.push(Permutation::from_images(images)?);
        }
        PermGroup::new(sorted.len(), gens)
    }

    /// All elements, as products of transversal elements. Intended for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut acc = vec![Permutation::identity(self.degree)];
        for lv in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * lv.orbit.len());
            for &beta in &lv.orbit {
                let u = lv.transversal[beta].as_ref().unwrap();
                for h in &acc {
                    next.push(h.then(u));
                }
            }
            acc = next;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn sym3() {
        let g = PermGroup::new(3, vec![perm(3, &[&[0, 1]]), perm(3, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(g.order_u64(), Some(6));
        assert!(g.contains(&perm(3, &[&[0, 1, 2]])).unwrap());
        assert_eq!(g.stabilizer(0).order_u64(), Some(2));
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::new(4, vec![Permutation::identity(4)]).unwrap();
        assert_eq!(g.order_u64(), Some(1));
        assert!(g.base().is_empty());
    }

    #[test]
    fn alternating_membership() {
        let a4 = PermGroup::alternating(4);
        assert_eq!(a4.order_u64(), Some(12));
        assert!(!a4.contains(&perm(4, &[&[0, 1]])).unwrap());
        assert!(a4.contains(&perm(4, &[&[0, 1], &[2, 3]])).unwrap());
    }

    #[test]
    fn degree_mismatch() {
        let g = PermGroup::symmetric(3);
        assert!(matches!(
            g.contains(&Permutation::identity(4)),
            Err(PermError::DegreeMismatch { expected: 3, got: 4 })
        ));
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn cyclic_orbit() {
        let g = PermGroup::new(4, vec![perm(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert_eq!(g.orbit(0), vec![0, 1, 2, 3]);
        assert_eq!(g.order_u64(), Some(4));
    }

    #[test]
    fn restrict_requires_invariance() {
        let g = PermGroup::new(5, vec![perm(5, &[&[0, 1, 2], &[3, 4]])]).unwrap();
        let r = g.restrict(&[3, 4]).unwrap();
        assert_eq!(r.order_u64(), Some(2));
        assert_eq!(g.restrict(&[0, 3]).unwrap_err(), PermError::NotInvariant(0));
    }

    #[test]
    fn large_symmetric_orders() {
        let s8 = PermGroup::symmetric(8);
        assert_eq!(s8.order_u64(), Some(40320));
        assert_eq!(s8.elements().len(), 40320);
        let a7 = PermGroup::alternating(7);
        assert_eq!(a7.order_u64(), Some(2520));
    }

    #[test]
    fn cycle_notation() {
        let p = perm(5, &[&[3, 1], &[0, 4, 2]]);
        assert_eq!(p.cycle_string(1), "(1 5 3)(2 4)");
        assert_eq!(Permutation::identity(3).cycle_string(0), "()");
        assert_eq!(p.order(), 6);
    }
}
