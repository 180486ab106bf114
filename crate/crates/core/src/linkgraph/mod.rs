//! The bipartite link graph of a pair set F ⊆ {0..n}², its invariants, and the
//! symmetry groups Aut⁺(F), Aut(F).
//!
//! Internally vertices `0..n` are the point side and `n..2n` the line side; the
//! pair (i, j) contributes the edge {i, n + j}.

pub(crate) mod refine;

use std::collections::{BTreeSet, VecDeque};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fgroup::FiniteGroup;
use crate::permgrp::{PermGroup, Permutation};
use refine::{automorphism_generators, find_isomorphism, Structure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("pair ({0}, {1}) out of range for n = {2}")]
    OutOfRange(usize, usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// A set of ordered pairs on `{0..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FSet {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl FSet {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, LinkError> {
        let mut set = BTreeSet::new();
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(LinkError::OutOfRange(i, j, n));
            }
            set.insert((i, j));
        }
        Ok(Self { n, pairs: set })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, pairs: BTreeSet::new() }
    }

    /// F(G, S) = {(x, xs) : x ∈ G, s ∈ S}.
    pub fn from_group(g: &FiniteGroup, s: &[usize]) -> Self {
        let pairs = (0..g.order()).flat_map(|x| s.iter().map(move |&t| (x, g.mul(x, t))));
        Self { n: g.order(), pairs: pairs.collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    /// ρF = {(j, i)}.
    pub fn rho(&self) -> Self {
        Self { n: self.n, pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect() }
    }

    /// σF = {(σi, σj)}.
    pub fn apply(&self, sigma: &Permutation) -> Self {
        Self {
            n: self.n,
            pairs: self.pairs.iter().map(|&(i, j)| (sigma.apply(i), sigma.apply(j))).collect(),
        }
    }

    /// Out-neighbours of `i`, i.e. all j with (i, j) ∈ F.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.pairs.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    fn digraph(&self) -> Structure {
        let color = (0..self.n).map(|i| self.contains(i, i) as u64).collect();
        Structure::new(self.n, self.pairs.iter().copied(), color)
    }
}

/// Invariants reported by [`LinkGraph::metrics`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub vertices: usize,
    pub edges: usize,
    pub connected: bool,
    /// `None` for a forest.
    pub girth: Option<usize>,
    /// `None` when disconnected.
    pub diameter: Option<usize>,
    pub point_degrees: Vec<usize>,
    pub line_degrees: Vec<usize>,
    /// Common (point, line) degree when both sides are regular.
    pub biregular: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct LinkGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl LinkGraph {
    pub fn from_f(f: &FSet) -> Self {
        let n = f.n;
        let mut adj = vec![Vec::new(); 2 * n];
        for &(i, j) in &f.pairs {
            adj[i].push(n + j);
            adj[n + j].push(i);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        Self { n, adj, edges: f.len() }
    }

    /// Bipartite graph from explicit point/line incidences.
    pub fn from_incidences(points: usize, lines: usize, edges: &[(usize, usize)]) -> Result<Self, LinkError> {
        if points != lines {
            return Err(LinkError::SizeMismatch(points, lines));
        }
        Ok(Self::from_f(&FSet::new(points, edges.iter().copied())?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// The pair set this graph encodes.
    pub fn to_fset(&self) -> FSet {
        let pairs = (0..self.n).flat_map(|i| self.adj[i].iter().map(move |&l| (i, l - self.n)));
        FSet { n: self.n, pairs: pairs.collect() }
    }

    fn bfs(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.adj.len()];
        let mut count = 0;
        for s in 0..self.adj.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            for (v, d) in self.bfs(s).into_iter().enumerate() {
                if d != usize::MAX {
                    seen[v] = true;
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        let nv = self.adj.len();
        for s in 0..nv {
            let mut dist = vec![usize::MAX; nv];
            let mut parent = vec![usize::MAX; nv];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.adj.len() {
            let d = self.bfs(s).into_iter().max().unwrap_or(0);
            if d == usize::MAX {
                return None;
            }
            best = best.max(d);
        }
        Some(best)
    }

    pub fn metrics(&self) -> Metrics {
        let point_degrees: Vec<usize> = (0..self.n).map(|v| self.adj[v].len()).collect();
        let line_degrees: Vec<usize> = (self.n..2 * self.n).map(|v| self.adj[v].len()).collect();
        let regular = |d: &[usize]| match d.first() {
            Some(&x) if d.iter().all(|&y| y == x) => Some(x),
            _ => None,
        };
        let biregular = regular(&point_degrees).zip(regular(&line_degrees));
        let diameter = self.diameter();
        Metrics {
            vertices: self.vertex_count(),
            edges: self.edges,
            connected: diameter.is_some() && self.n > 0,
            girth: self.girth(),
            diameter,
            point_degrees,
            line_degrees,
            biregular,
        }
    }

    /// Eigenvalues of I − D^{-1/2} A D^{-1/2} in ascending order (isolated vertices contribute 0).
    pub fn laplacian_spectrum(&self) -> Vec<f64> {
        let nv = self.adj.len();
        let inv_sqrt: Vec<f64> = self
            .adj
            .iter()
            .map(|a| if a.is_empty() { 0.0 } else { 1.0 / (a.len() as f64).sqrt() })
            .collect();
        let m = DMatrix::from_fn(nv, nv, |i, j| {
            let diag = if i == j && !self.adj[i].is_empty() { 1.0 } else { 0.0 };
            let a = if self.adj[i].binary_search(&j).is_ok() { 1.0 } else { 0.0 };
            diag - a * inv_sqrt[i] * inv_sqrt[j]
        });
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Smallest nonzero normalized-Laplacian eigenvalue.
    pub fn spectral_gap(&self) -> Result<f64, LinkError> {
        if !self.is_connected() {
            return Err(LinkError::Disconnected);
        }
        Ok(self.laplacian_spectrum()[1])
    }

    /// Spectral gap strictly above 1/2.
    pub fn zuk_predicate(&self) -> Result<bool, LinkError> {
        Ok(self.spectral_gap()? > 0.5)
    }

    /// Connected, biregular, girth 2m and diameter m.
    pub fn is_generalized_mgon(&self, m: usize) -> bool {
        let met = self.metrics();
        met.connected && met.biregular.is_some() && met.girth == Some(2 * m) && met.diameter == Some(m)
    }

    fn structure(&self, swap_sides: bool) -> Structure {
        let n = self.n;
        let color = (0..2 * n).map(|v| ((v >= n) != swap_sides) as u64).collect();
        self.structure_with(color)
    }

    fn structure_with(&self, color: Vec<u64>) -> Structure {
        let arcs = self.adj.iter().enumerate().flat_map(|(u, a)| a.iter().map(move |&w| (u, w)));
        Structure::new(self.adj.len(), arcs, color)
    }

    /// Full automorphism group, side-swapping maps included.
    pub fn automorphisms(&self) -> PermGroup {
        let gens = automorphism_generators(&self.structure_with(vec![0; self.adj.len()]));
        PermGroup::new(self.adj.len(), gens).expect("automorphisms have the right degree")
    }

    /// One-line-per-edge text, 1-based: `i j+n`.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for &l in &self.adj[i] {
                out.push_str(&format!("{} {}\n", i + 1, l + 1));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<[usize; 2]> =
            (0..self.n).flat_map(|i| self.adj[i].iter().map(move |&l| [i + 1, l + 1])).collect();
        serde_json::json!({ "n": self.n, "vertices": 2 * self.n, "edges": edges })
    }
}

pub fn graph_automorphisms(g: &LinkGraph) -> PermGroup {
    g.automorphisms()
}

/// Aut⁺(F): permutations σ of `{0..n}` with σF = F.
pub fn aut_plus(f: &FSet) -> PermGroup {
    let gens = automorphism_generators(&f.digraph());
    debug_assert!(gens.iter().all(|g| &f.apply(g) == f));
    PermGroup::new(f.n, gens).expect("degree n")
}

/// Some σ with σF₁ = F₂.
pub fn diagonal_isomorphism(f1: &FSet, f2: &FSet) -> Option<Permutation> {
    if f1.n != f2.n || f1.len() != f2.len() {
        return None;
    }
    find_isomorphism(&f1.digraph(), &f2.digraph())
}

/// Aut(F) ≤ Sym(n) × Z/2.
#[derive(Debug, Clone)]
pub struct AutF {
    pub plus: PermGroup,
    /// σ with σρF = F, when one exists.
    pub rho_witness: Option<Permutation>,
    /// Aut(F) acting on the 2n link vertices: σ acts on both sides alike, ρ swaps
    /// point i with line i.
    pub on_link: PermGroup,
}

impl AutF {
    pub fn has_rho_part(&self) -> bool {
        self.rho_witness.is_some()
    }

    pub fn order(&self) -> num_bigint::BigUint {
        let k: u32 = if self.has_rho_part() { 2 } else { 1 };
        self.plus.order() * k
    }
}

fn lift(n: usize, sigma: &Permutation, swap: bool) -> Permutation {
    let images = (0..2 * n)
        .map(|v| {
            let (side, i) = if v < n { (0, v) } else { (1, v - n) };
            let side = side ^ swap as usize;
            side * n + sigma.apply(i)
        })
        .collect();
    Permutation::from_images(images).expect("lifted map is a bijection")
}

pub fn aut_full(f: &FSet) -> AutF {
    let plus = aut_plus(f);
    let rho_witness = diagonal_isomorphism(&f.rho(), f);
    let mut gens: Vec<Permutation> = plus.generators().iter().map(|g| lift(f.n, g, false)).collect();
    if let Some(w) = &rho_witness {
        gens.push(lift(f.n, w, true));
    }
    let on_link = PermGroup::new(2 * f.n, gens).expect("degree 2n");
    AutF { plus, rho_witness, on_link }
}

/// Element (σ₁, σ₂; e) of Sym(n) ≀ Z/2. Without swap it sends (i, j) to (σ₁i, σ₂j);
/// with swap to (σ₂j, σ₁i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    pub sigma1: Permutation,
    pub sigma2: Permutation,
    pub swap: bool,
}

impl WreathElement {
    pub fn apply(&self, f: &FSet) -> FSet {
        let pairs = f.pairs.iter().map(|&(i, j)| {
            let (a, b) = (self.sigma1.apply(i), self.sigma2.apply(j));
            if self.swap {
                (b, a)
            } else {
                (a, b)
            }
        });
        FSet { n: f.n, pairs: pairs.collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// F₂ = σF₁.
    Diagonal(Permutation),
    /// F₂ = σρF₁.
    DiagonalRho(Permutation),
    Wreath(WreathElement),
}

/// Diagonal equivalence (σ or σρ); with `wreath` also the weaker
/// Sym(n) ≀ Z/2 equivalence, i.e. a side-respecting graph isomorphism.
pub fn f_equivalent(f1: &FSet, f2: &FSet, wreath: bool) -> Option<Equivalence> {
    if let Some(s) = diagonal_isomorphism(f1, f2) {
        return Some(Equivalence::Diagonal(s));
    }
    if let Some(s) = diagonal_isomorphism(&f1.rho(), f2) {
        return Some(Equivalence::DiagonalRho(s));
    }
    if wreath {
        return wreath_equivalence(f1, f2).map(Equivalence::Wreath);
    }
    None
}

pub fn wreath_equivalence(f1: &FSet, f2: &FSet) -> Option<WreathElement> {
    if f1.n != f2.n || f1.len() != f2.len() {
        return None;
    }
    let n = f1.n;
    let (g1, g2) = (LinkGraph::from_f(f1), LinkGraph::from_f(f2));
    for swap in [false, true] {
        if let Some(phi) = find_isomorphism(&g1.structure(false), &g2.structure(swap)) {
            let pick = |v: usize| phi.apply(v) % n;
            let s1 = Permutation::from_images((0..n).map(pick).collect()).ok()?;
            let s2 = Permutation::from_images((n..2 * n).map(pick).collect()).ok()?;
            let w = WreathElement { sigma1: s1, sigma2: s2, swap };
            debug_assert_eq!(&w.apply(f1), f2);
            return Some(w);
        }
    }
    None
}
