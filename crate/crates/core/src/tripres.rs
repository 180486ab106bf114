//! Triangle presentations: sets of index triples compatible with a pair set F.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fgroup::{FiniteGroup, SubgroupDatum};
use crate::linkgraph::refine::{automorphism_generators, find_isomorphism, Structure};
use crate::linkgraph::{aut_full, AutF, FSet};
use crate::permgrp::{PermGroup, Permutation};

pub type Triple = (usize, usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error("triple {0:?} out of range for n = {1}")]
    OutOfRange(Triple, usize),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("lambda condition fails at s = {0}")]
    LambdaConditionFailed(usize),
    #[error("lambda does not map S to S at s = {0}")]
    LambdaNotIntoS(usize),
    #[error("orbit with minimum {0} is not a length-3 orbit inside the subgroup")]
    OrbitNotInSubgroup(usize),
    #[error("coset representative {0} is not canonical")]
    UnknownCoset(usize),
    #[error("presentation is not compatible with F: {0}")]
    IncompatiblePresentation(String),
}

/// Rotation orbit representative: the lexicographically smallest rotation.
pub fn canonical_rotation((i, j, k): Triple) -> Triple {
    (i, j, k).min((j, k, i)).min((k, i, j))
}

pub fn rotations((i, j, k): Triple) -> [Triple; 3] {
    [(i, j, k), (j, k, i), (k, i, j)]
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrianglePresentation {
    n: usize,
    triples: BTreeSet<Triple>,
}

impl TrianglePresentation {
    /// The triples exactly as given (no rotation closure).
    pub fn new(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self, TriError> {
        let mut set = BTreeSet::new();
        for t in triples {
            if t.0 >= n || t.1 >= n || t.2 >= n {
                return Err(TriError::OutOfRange(t, n));
            }
            set.insert(t);
        }
        Ok(Self { n, triples: set })
    }

    /// The rotation closure of the given triples.
    pub fn closed(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self, TriError> {
        let t = Self::new(n, triples)?;
        Ok(t.rotation_closure())
    }

    pub fn empty(n: usize) -> Self {
        Self { n, triples: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: Triple) -> bool {
        self.triples.contains(&t)
    }

    pub fn rotation_closure(&self) -> Self {
        let triples = self.triples.iter().flat_map(|&t| rotations(t)).collect();
        Self { n: self.n, triples }
    }

    pub fn is_rotation_closed(&self) -> bool {
        self.triples.iter().all(|&(i, j, k)| self.triples.contains(&(j, k, i)))
    }

    /// One canonical rotation per orbit, sorted.
    pub fn canonical_reps(&self) -> Vec<Triple> {
        let reps: BTreeSet<Triple> = self.triples.iter().map(|&t| canonical_rotation(t)).collect();
        reps.into_iter().collect()
    }

    /// Whether every triple is the canonical rotation of its orbit.
    pub fn is_canonical_form(&self) -> bool {
        self.triples.iter().all(|&t| canonical_rotation(t) == t)
    }

    /// The k's completing the pair (i, j).
    pub fn thirds(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.triples.range((i, j, 0)..(i, j + 1, 0)).map(|t| t.2)
    }

    /// F = {(i, j) : (i, j, k) ∈ T for some k}.
    pub fn project_f(&self) -> FSet {
        FSet::new(self.n, self.triples.iter().map(|&(i, j, _)| (i, j))).expect("indices are in range")
    }

    /// σT, or σρT when `rho` is set, where ρT = {(j, i, k)}.
    pub fn act(&self, sigma: &Permutation, rho: bool) -> Self {
        let s = |x: usize| sigma.apply(x);
        let triples = self
            .triples
            .iter()
            .map(|&(i, j, k)| if rho { (s(j), s(i), s(k)) } else { (s(i), s(j), s(k)) })
            .collect();
        Self { n: self.n, triples }
    }

    /// σT with σ given by a relabeling of the index set.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Self {
        let triples = self.triples.iter().map(|&(i, j, k)| (f(i), f(j), f(k))).collect();
        Self { n: self.n, triples }
    }

    fn structure(&self) -> Structure {
        let n = self.n;
        let mut color = vec![0u64; n];
        let mut arcs = Vec::with_capacity(self.triples.len() * 6);
        for (t, &(i, j, k)) in self.triples.iter().enumerate() {
            let base = n + 4 * t;
            color.extend([1, 2, 3, 4]);
            for (slot, x) in [i, j, k].into_iter().enumerate() {
                arcs.push((base, base + 1 + slot));
                arcs.push((base + 1 + slot, x));
            }
        }
        Structure::new(color.len(), arcs, color)
    }
}

impl fmt::Display for TrianglePresentation {
    /// Table layout: one row per first coordinate, triples sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", table_text(self, 0))
    }
}

/// Rows grouped by first coordinate, labels shifted by `offset`.
pub fn table_text(t: &TrianglePresentation, offset: usize) -> String {
    let mut out = String::new();
    let mut row: Vec<String> = Vec::new();
    let mut current = None;
    for &(i, j, k) in &t.triples {
        if current != Some(i) && !row.is_empty() {
            out.push_str(&row.join(" "));
            out.push('\n');
            row.clear();
        }
        current = Some(i);
        row.push(format!("({},{},{})", i + offset, j + offset, k + offset));
    }
    if !row.is_empty() {
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// (i, j, k) ∈ T but (i, j) ∉ F.
    NotInF { triple: Triple },
    /// The pair (i, j) ∈ F does not have exactly one third index.
    NotUnique { pair: (usize, usize), thirds: Vec<usize> },
    /// (i, j, k) ∈ T but (j, k, i) ∉ T.
    NotRotationClosed { triple: Triple },
}

impl Violation {
    pub fn axiom(&self) -> u8 {
        match self {
            Violation::NotInF { .. } => 1,
            Violation::NotUnique { .. } => 2,
            Violation::NotRotationClosed { .. } => 3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInF { triple } => write!(f, "axiom 1: triple {triple:?} has its pair outside F"),
            Violation::NotUnique { pair, thirds } => {
                write!(f, "axiom 2: pair {pair:?} has {} completions {thirds:?}", thirds.len())
            }
            Violation::NotRotationClosed { triple } => {
                write!(f, "axiom 3: rotation of {triple:?} missing")
            }
        }
    }
}

/// All violations of the three compatibility axioms; empty means T is compatible with F.
pub fn verify(f: &FSet, t: &TrianglePresentation) -> Result<Vec<Violation>, TriError> {
    if f.n() != t.n {
        return Err(TriError::SizeMismatch(f.n(), t.n));
    }
    let mut out = Vec::new();
    for &(i, j, k) in &t.triples {
        if !f.contains(i, j) {
            out.push(Violation::NotInF { triple: (i, j, k) });
        }
    }
    for &(i, j) in f.pairs() {
        let thirds: Vec<usize> = t.thirds(i, j).collect();
        if thirds.len() != 1 {
            out.push(Violation::NotUnique { pair: (i, j), thirds });
        }
    }
    for &(i, j, k) in &t.triples {
        if !t.triples.contains(&(j, k, i)) {
            out.push(Violation::NotRotationClosed { triple: (i, j, k) });
        }
    }
    Ok(out)
}

pub fn is_compatible(f: &FSet, t: &TrianglePresentation) -> bool {
    matches!(verify(f, t), Ok(v) if v.is_empty())
}

/// Every presentation compatible with F, sorted.
///
/// Exact cover of the pairs of F by rotation orbits {(i,j),(j,k),(k,i)}; the
/// branching pair is always the one with fewest live options. Subtrees below the
/// first branching are explored in parallel.
pub fn enumerate_all(f: &FSet) -> Vec<TrianglePresentation> {
    let pairs: Vec<(usize, usize)> = f.pairs().iter().copied().collect();
    let pair_id: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(a, &p)| (p, a)).collect();
    let mut reps = BTreeSet::new();
    for &(i, j) in &pairs {
        for k in f.successors(j) {
            if f.contains(k, i) {
                reps.insert(canonical_rotation((i, j, k)));
            }
        }
    }
    let options: Vec<(Triple, Vec<usize>)> = reps
        .into_iter()
        .map(|t| {
            let mut cover: Vec<usize> = rotations(t).iter().map(|&(a, b, _)| pair_id[&(a, b)]).collect();
            cover.sort_unstable();
            cover.dedup();
            (t, cover)
        })
        .collect();
    let mut by_pair = vec![Vec::new(); pairs.len()];
    for (o, (_, cover)) in options.iter().enumerate() {
        for &p in cover {
            by_pair[p].push(o);
        }
    }
    let search = ExactCover { options: &options, by_pair: &by_pair };
    let mut covered = vec![false; pairs.len()];
    let mut solutions: Vec<Vec<usize>> = match search.branch_pair(&covered) {
        None => vec![Vec::new()],
        Some((_, live)) => live
            .par_iter()
            .flat_map_iter(|&o| {
                let mut cov = covered.clone();
                let mut chosen = vec![o];
                let mut out = Vec::new();
                search.place(o, &mut cov, true);
                search.solve(&mut cov, &mut chosen, &mut out);
                out
            })
            .collect(),
    };
    covered.clear();
    let mut result: Vec<TrianglePresentation> = solutions
        .drain(..)
        .map(|sol| {
            TrianglePresentation::closed(f.n(), sol.into_iter().map(|o| options[o].0)).expect("in range")
        })
        .collect();
    result.sort();
    result
}

struct ExactCover<'a> {
    options: &'a [(Triple, Vec<usize>)],
    by_pair: &'a [Vec<usize>],
}

impl ExactCover<'_> {
    fn live(&self, o: usize, covered: &[bool]) -> bool {
        self.options[o].1.iter().all(|&p| !covered[p])
    }

    /// The uncovered pair with the fewest live options (ties: smallest pair).
    fn branch_pair(&self, covered: &[bool]) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for p in 0..covered.len() {
            if covered[p] {
                continue;
            }
            let live: Vec<usize> = self.by_pair[p].iter().copied().filter(|&o| self.live(o, covered)).collect();
            let better = best.as_ref().is_none_or(|(_, b)| live.len() < b.len());
            if better {
                let empty = live.is_empty();
                best = Some((p, live));
                if empty {
                    break;
                }
            }
        }
        best
    }

    fn place(&self, o: usize, covered: &mut [bool], value: bool) {
        for &p in &self.options[o].1 {
            covered[p] = value;
        }
    }

    fn solve(&self, covered: &mut Vec<bool>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((_, live)) = self.branch_pair(covered) else {
            out.push(chosen.clone());
            return;
        };
        for o in live {
            self.place(o, covered, true);
            chosen.push(o);
            self.solve(covered, chosen, out);
            chosen.pop();
            self.place(o, covered, false);
        }
    }
}

/// Aut(T): Aut⁺(T) plus, when it exists, some σ with σρT = T.
#[derive(Debug, Clone)]
pub struct TStabilizer {
    pub plus: PermGroup,
    pub rho_extension: Option<Permutation>,
}

impl TStabilizer {
    pub fn order(&self) -> BigUint {
        let k: u32 = if self.rho_extension.is_some() { 2 } else { 1 };
        self.plus.order() * k
    }
}

fn restrict_to_indices(n: usize, g: &Permutation) -> Permutation {
    Permutation::from_images(g.images()[..n].to_vec()).expect("index vertices are preserved")
}

/// Aut⁺(T) = {σ : σT = T}, computed by refinement on the incidence structure of T.
pub fn aut_plus_t(t: &TrianglePresentation) -> PermGroup {
    let gens: Vec<Permutation> =
        automorphism_generators(&t.structure()).iter().map(|g| restrict_to_indices(t.n, g)).collect();
    PermGroup::new(t.n, gens).expect("degree n")
}

/// Some σ with σT₁ = T₂.
pub fn presentation_isomorphism(t1: &TrianglePresentation, t2: &TrianglePresentation) -> Option<Permutation> {
    if t1.n != t2.n || t1.len() != t2.len() {
        return None;
    }
    find_isomorphism(&t1.structure(), &t2.structure()).map(|g| restrict_to_indices(t1.n, &g))
}

pub fn stabilizer_of_t(f: &FSet, t: &TrianglePresentation) -> Result<TStabilizer, TriError> {
    let v = verify(f, t)?;
    if let Some(first) = v.first() {
        return Err(TriError::IncompatiblePresentation(first.to_string()));
    }
    let rho_t = t.act(&Permutation::identity(t.n), true);
    Ok(TStabilizer { plus: aut_plus_t(t), rho_extension: presentation_isomorphism(&rho_t, t) })
}

/// Witness that T₂ = σT₁ (`used_rho` false) or T₂ = σρT₁ (`used_rho` true).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TIsomorphism {
    pub sigma: Permutation,
    pub used_rho: bool,
}

pub fn isomorphic_t(t1: &TrianglePresentation, t2: &TrianglePresentation) -> Option<TIsomorphism> {
    if t1 == t2 {
        return Some(TIsomorphism { sigma: Permutation::identity(t1.n), used_rho: false });
    }
    if let Some(sigma) = presentation_isomorphism(t1, t2) {
        return Some(TIsomorphism { sigma, used_rho: false });
    }
    let rho_t1 = t1.act(&Permutation::identity(t1.n), true);
    presentation_isomorphism(&rho_t1, t2).map(|sigma| TIsomorphism { sigma, used_rho: true })
}

#[derive(Debug, Clone)]
pub struct ClassInfo {
    pub representative: TrianglePresentation,
    pub orbit_size: usize,
    pub aut_order: BigUint,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub aut_f: AutF,
    pub total: usize,
    pub classes: Vec<ClassInfo>,
}

/// Orbits of Aut(F) on the compatible presentations, with the counting identity
/// |orbit| · |Aut(T)| = |Aut(F)| checked for every class.
pub fn classify(f: &FSet) -> Result<Classification, TriError> {
    classify_list(f, enumerate_all(f))
}

pub fn classify_list(f: &FSet, all: Vec<TrianglePresentation>) -> Result<Classification, TriError> {
    let aut_f = aut_full(f);
    let mut movers: Vec<(Permutation, bool)> =
        aut_f.plus.generators().iter().map(|g| (g.clone(), false)).collect();
    if let Some(w) = &aut_f.rho_witness {
        movers.push((w.clone(), true));
    }
    let universe: HashSet<&TrianglePresentation> = all.iter().collect();
    let mut seen: HashSet<TrianglePresentation> = HashSet::new();
    let mut classes = Vec::new();
    let full_order = aut_f.order();
    for t in &all {
        if seen.contains(t) {
            continue;
        }
        let mut orbit = vec![t.clone()];
        seen.insert(t.clone());
        let mut queue = VecDeque::from([t.clone()]);
        while let Some(u) = queue.pop_front() {
            for (g, rho) in &movers {
                let v = u.act(g, *rho);
                if !universe.contains(&v) {
                    return Err(TriError::IncompatiblePresentation(
                        "enumeration is not closed under Aut(F)".into(),
                    ));
                }
                if seen.insert(v.clone()) {
                    orbit.push(v.clone());
                    queue.push_back(v);
                }
            }
        }
        let stab = stabilizer_of_t(f, t)?;
        let aut_order = stab.order();
        if BigUint::from(orbit.len()) * &aut_order != full_order {
            return Err(TriError::IncompatiblePresentation(format!(
                "counting identity fails: {} * {} != {}",
                orbit.len(),
                aut_order,
                full_order
            )));
        }
        orbit.sort();
        classes.push(ClassInfo { representative: orbit[0].clone(), orbit_size: orbit.len(), aut_order });
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(Classification { aut_f, total: all.len(), classes })
}

fn check_lambda(s: &[usize], lambda: &BTreeMap<usize, usize>) -> Result<(), TriError> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    for &x in s {
        match lambda.get(&x) {
            Some(y) if set.contains(y) => {}
            _ => return Err(TriError::LambdaNotIntoS(x)),
        }
    }
    Ok(())
}

/// T = {(x, xs, xsλ(s))}, valid when sλ(s)λ²(s) = 1 for every s ∈ S.
pub fn build_from_lambda(
    g: &FiniteGroup,
    s: &[usize],
    lambda: &BTreeMap<usize, usize>,
) -> Result<TrianglePresentation, TriError> {
    check_lambda(s, lambda)?;
    for &x in s {
        let l1 = lambda[&x];
        let l2 = lambda[&l1];
        if g.mul(g.mul(x, l1), l2) != g.identity() {
            return Err(TriError::LambdaConditionFailed(x));
        }
    }
    let triples = (0..g.order()).flat_map(|x| {
        s.iter().map(move |&t| {
            let xs = g.mul(x, t);
            (x, xs, g.mul(xs, lambda[&t]))
        })
    });
    let t = TrianglePresentation::closed(g.order(), triples)?;
    debug_assert!(is_compatible(&FSet::from_group(g, s), &t));
    Ok(t)
}

/// Orbits of λ on S, each sorted, listed by minimum.
pub fn lambda_orbits(s: &[usize], lambda: &BTreeMap<usize, usize>) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut sorted: Vec<usize> = s.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for &x in &sorted {
        if seen.contains(&x) {
            continue;
        }
        let mut orbit = vec![x];
        seen.insert(x);
        let mut y = lambda[&x];
        while y != x {
            orbit.push(y);
            seen.insert(y);
            y = lambda[&y];
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// κ keyed by (canonical coset representative, orbit minimum); missing entries are +1.
pub type Kappa = BTreeMap<(usize, usize), i8>;

/// T_κ: the G-invariant presentation with λ inverted along the selected
/// (coset, orbit) pairs for length-3 orbits inside H.
pub fn build_t_kappa(
    g: &FiniteGroup,
    s: &[usize],
    lambda: &BTreeMap<usize, usize>,
    h: &SubgroupDatum,
    kappa: &Kappa,
) -> Result<TrianglePresentation, TriError> {
    check_lambda(s, lambda)?;
    for &x in s {
        let l1 = lambda[&x];
        let l2 = lambda[&l1];
        if lambda[&l2] != x
            || g.mul(g.mul(x, l1), l2) != g.identity()
            || g.mul(g.mul(x, l2), l1) != g.identity()
        {
            return Err(TriError::LambdaConditionFailed(x));
        }
    }
    let eligible: BTreeSet<usize> = lambda_orbits(s, lambda)
        .into_iter()
        .filter(|o| o.len() == 3 && o.iter().all(|&x| h.contains(x)))
        .map(|o| o[0])
        .collect();
    for &(rep, omin) in kappa.keys() {
        if !eligible.contains(&omin) {
            return Err(TriError::OrbitNotInSubgroup(omin));
        }
        if rep >= g.order() || h.coset_rep(rep) != rep {
            return Err(TriError::UnknownCoset(rep));
        }
    }
    let orbit_min = |x: usize| lambda_orbits_min(x, lambda);
    let mut triples = Vec::with_capacity(g.order() * s.len());
    for x in 0..g.order() {
        let rep = h.coset_rep(x);
        for &t in s {
            let omin = orbit_min(t);
            let inverted = eligible.contains(&omin) && kappa.get(&(rep, omin)).copied().unwrap_or(1) < 0;
            let next = if inverted { lambda[&lambda[&t]] } else { lambda[&t] };
            let xs = g.mul(x, t);
            triples.push((x, xs, g.mul(xs, next)));
        }
    }
    let t = TrianglePresentation::new(g.order(), triples)?;
    let f = FSet::from_group(g, s);
    let v = verify(&f, &t)?;
    if let Some(first) = v.first() {
        return Err(TriError::IncompatiblePresentation(first.to_string()));
    }
    Ok(t)
}

fn lambda_orbits_min(x: usize, lambda: &BTreeMap<usize, usize>) -> usize {
    let mut m = x;
    let mut y = lambda[&x];
    while y != x {
        m = m.min(y);
        y = lambda[&y];
    }
    m
}

/// The permutation x ↦ gx of the group's index set.
pub fn left_translation(g: &FiniteGroup, a: usize) -> Permutation {
    Permutation::from_images((0..g.order()).map(|x| g.mul(a, x)).collect()).expect("translation is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgroup::{make_abelian, make_cyclic, subgroup};

    fn oct() -> (FSet, TrianglePresentation) {
        let f = FSet::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let t = TrianglePresentation::new(2, [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)]).unwrap();
        (f, t)
    }

    fn offdiag_f() -> FSet {
        FSet::new(4, (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))).unwrap()
    }

    fn one_based(n: usize, t: &[Triple]) -> TrianglePresentation {
        TrianglePresentation::new(n, t.iter().map(|&(a, b, c)| (a - 1, b - 1, c - 1))).unwrap()
    }

    fn offdiag_t1() -> TrianglePresentation {
        one_based(
            4,
            &[
                (1, 2, 3), (1, 3, 4), (1, 4, 2), (2, 1, 4), (2, 3, 1), (2, 4, 3),
                (3, 1, 2), (3, 2, 4), (3, 4, 1), (4, 1, 3), (4, 2, 1), (4, 3, 2),
            ],
        )
    }

    fn offdiag_t2() -> TrianglePresentation {
        one_based(
            4,
            &[
                (1, 2, 4), (1, 3, 2), (1, 4, 3), (2, 1, 3), (2, 3, 4), (2, 4, 1),
                (3, 1, 4), (3, 2, 1), (3, 4, 2), (4, 1, 2), (4, 2, 3), (4, 3, 1),
            ],
        )
    }

    #[test]
    fn octahedron_axioms() {
        let (f, t) = oct();
        assert!(verify(&f, &t).unwrap().is_empty());
        let mut broken = t.triples.clone();
        broken.remove(&(1, 1, 1));
        let v = verify(&f, &TrianglePresentation { n: 2, triples: broken }).unwrap();
        assert_eq!(v, vec![Violation::NotUnique { pair: (1, 1), thirds: vec![] }]);
        assert_eq!(t.act(&Permutation::identity(2), true), t);
        assert_eq!(t.canonical_reps(), vec![(0, 0, 1), (1, 1, 1)]);
    }

    #[test]
    fn offdiag_enumeration_and_groups() {
        let f = offdiag_f();
        let all = enumerate_all(&f);
        assert_eq!(all.len(), 2);
        assert!(all.contains(&offdiag_t1()) && all.contains(&offdiag_t2()));
        let w = isomorphic_t(&offdiag_t1(), &offdiag_t2()).unwrap();
        assert_eq!(offdiag_t1().act(&w.sigma, w.used_rho), offdiag_t2());
        let swap34 = Permutation::from_cycles(4, &[&[2, 3]]).unwrap();
        assert_eq!(offdiag_t1().act(&swap34, false), offdiag_t2());
        let st = stabilizer_of_t(&f, &offdiag_t1()).unwrap();
        assert_eq!(st.plus.order_u64(), Some(12));
        assert!(st.plus.generators().iter().all(|g| g.is_even()));
        assert_eq!(offdiag_t1().act(&swap34, true), offdiag_t1());
        assert_eq!(st.order(), 24u32.into());
        let c = classify(&f).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].orbit_size, 2);
    }

    #[test]
    fn stabilizer_matches_filtering() {
        let f = offdiag_f();
        let t = offdiag_t1();
        let plus = crate::linkgraph::aut_plus(&f);
        let filtered = plus.elements().into_iter().filter(|g| t.act(g, false) == t).count();
        assert_eq!(filtered as u64, aut_plus_t(&t).order_u64().unwrap());
    }

    #[test]
    fn line515_has_none() {
        let f = FSet::new(2, [(0, 0), (1, 0), (1, 1)]).unwrap();
        assert!(enumerate_all(&f).is_empty());
        assert!(classify(&f).unwrap().classes.is_empty());
        assert_eq!(enumerate_all(&FSet::empty(3)), vec![TrianglePresentation::empty(3)]);
    }

    #[test]
    fn z3_identity_lambda() {
        let g = make_cyclic(3).unwrap();
        let lambda = BTreeMap::from([(1, 1), (2, 2)]);
        let t = build_from_lambda(&g, &[1, 2], &lambda).unwrap();
        let expected = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)];
        assert_eq!(t.triples().iter().copied().collect::<Vec<_>>(), expected);
        let bad = BTreeMap::from([(1, 2), (2, 1)]);
        assert!(matches!(build_from_lambda(&g, &[1, 2], &bad), Err(TriError::LambdaConditionFailed(_))));
    }

    #[test]
    fn klein_four_matches_offdiag() {
        let g = make_abelian(&[2, 2]).unwrap();
        // (1,0) = 2, (1,1) = 3, (0,1) = 1
        let lambda = BTreeMap::from([(2, 1), (3, 2), (1, 3)]);
        let t = build_from_lambda(&g, &[1, 2, 3], &lambda).unwrap();
        assert!(isomorphic_t(&t, &offdiag_t1()).is_some());
        for a in 0..4 {
            assert_eq!(t.act(&left_translation(&g, a), false), t);
        }
    }

    #[test]
    fn kappa_all_plus_equals_lambda() {
        let g = make_cyclic(21).unwrap();
        let s = [7, 9, 14, 15, 18];
        let lambda: BTreeMap<usize, usize> = s.iter().map(|&x| (x, 4 * x % 21)).collect();
        let h = subgroup(&g, &[3]).unwrap();
        let plain = build_from_lambda(&g, &s, &lambda).unwrap();
        assert_eq!(build_t_kappa(&g, &s, &lambda, &h, &Kappa::new()).unwrap(), plain);
        let k = Kappa::from([((2, 9), -1)]);
        let t2 = build_t_kappa(&g, &s, &lambda, &h, &k).unwrap();
        assert!(t2.contains((2, 11, 8)) && t2.contains((5, 14, 11)));
        assert!(isomorphic_t(&plain, &t2).is_none());
        let bad = Kappa::from([((0, 7), -1)]);
        assert_eq!(build_t_kappa(&g, &s, &lambda, &h, &bad), Err(TriError::OrbitNotInSubgroup(7)));
        let f = FSet::from_group(&g, &s);
        assert_eq!(enumerate_all(&f).len(), 8);
        for a in h.members() {
            assert_eq!(t2.act(&left_translation(&g, *a), false), t2);
        }
    }
}
