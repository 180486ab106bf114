//! Partition refinement with backtracking for automorphisms and isomorphisms of
//! vertex-colored digraphs.
//!
//! The refinement splits cells by the counts of out- and in-neighbours in every
//! cell until the ordered partition is equitable. Cell order is derived only from
//! those counts, so the procedure commutes with relabeling and two structures can
//! be compared level by level through the refinement trace.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::permgrp::Permutation;

/// A vertex-colored digraph. Undirected graphs list every edge in both directions.
#[derive(Debug, Clone)]
pub(crate) struct Structure {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    arcs: HashSet<(usize, usize)>,
    color: Vec<u64>,
}

impl Structure {
    pub(crate) fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>, color: Vec<u64>) -> Self {
        assert_eq!(color.len(), n);
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        let mut set = HashSet::new();
        for (a, b) in arcs {
            if set.insert((a, b)) {
                out[a].push(b);
                inn[b].push(a);
            }
        }
        for v in out.iter_mut().chain(inn.iter_mut()) {
            v.sort_unstable();
        }
        Self { out, inn, arcs: set, color }
    }

    fn len(&self) -> usize {
        self.out.len()
    }

    /// Whether `map` sends this structure onto `other`.
    fn maps_onto(&self, other: &Structure, map: &[usize]) -> bool {
        self.arcs.len() == other.arcs.len()
            && (0..self.len()).all(|v| self.color[v] == other.color[map[v]])
            && self.arcs.iter().all(|&(a, b)| other.arcs.contains(&(map[a], map[b])))
    }
}

#[derive(Debug, Clone)]
struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Self {
        let mut cell_of = vec![0; n];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        Self { cells, cell_of }
    }

    fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    /// The non-singleton cell joined non-trivially to the most cells (first on ties).
    /// Joins are read off one representative, which suffices for equitable partitions.
    fn target_cell(&self, s: &Structure) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut counts = vec![0usize; self.cells.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.len() == 1 {
                continue;
            }
            let v = cell[0];
            let mut touched = Vec::new();
            for &w in s.out[v].iter().chain(&s.inn[v]) {
                let d = self.cell_of[w];
                if counts[d] == 0 {
                    touched.push(d);
                }
                counts[d] += 1;
            }
            let joins = touched.iter().filter(|&&d| counts[d] < self.cells[d].len()).count();
            for d in touched {
                counts[d] = 0;
            }
            if best.is_none_or(|(_, j)| joins > j) {
                best = Some((c, joins));
            }
        }
        best.map(|(c, _)| c)
    }

    fn individualize(&self, cell: usize, v: usize) -> Self {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        for (c, members) in self.cells.iter().enumerate() {
            if c == cell {
                cells.push(vec![v]);
                cells.push(members.iter().copied().filter(|&x| x != v).collect());
            } else {
                cells.push(members.clone());
            }
        }
        Self::from_cells(self.cell_of.len(), cells)
    }
}

/// Refines to an equitable partition and returns it with a relabeling-invariant trace.
fn refine(s: &Structure, mut part: Partition) -> (Partition, u64) {
    let mut hasher = DefaultHasher::new();
    loop {
        let k = part.cells.len();
        let mut new_cells: Vec<Vec<usize>> = Vec::with_capacity(k);
        for cell in &part.cells {
            if cell.len() == 1 {
                new_cells.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<(usize, u32, u32)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut counts: Vec<(usize, u32, u32)> = Vec::new();
                    let mut tally = |w: usize, dir: usize| {
                        let c = part.cell_of[w];
                        match counts.iter_mut().find(|e| e.0 == c) {
                            Some(e) => {
                                if dir == 0 {
                                    e.1 += 1
                                } else {
                                    e.2 += 1
                                }
                            }
                            None => counts.push(if dir == 0 { (c, 1, 0) } else { (c, 0, 1) }),
                        }
                    };
                    for &w in &s.out[v] {
                        tally(w, 0);
                    }
                    for &w in &s.inn[v] {
                        tally(w, 1);
                    }
                    counts.sort_unstable();
                    (counts, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    keyed[start].0.hash(&mut hasher);
                    (i - start).hash(&mut hasher);
                    new_cells.push(keyed[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        part = Partition::from_cells(part.cell_of.len(), new_cells);
        if part.cells.len() == k {
            break;
        }
    }
    for c in &part.cells {
        c.len().hash(&mut hasher);
    }
    (part, hasher.finish())
}

fn initial_partition(s: &Structure) -> Partition {
    let mut colors: Vec<u64> = s.color.clone();
    colors.sort_unstable();
    colors.dedup();
    let cells = colors
        .iter()
        .map(|&c| (0..s.len()).filter(|&v| s.color[v] == c).collect())
        .collect();
    Partition::from_cells(s.len(), cells)
}

struct PathStep {
    /// Refined partition at this depth, before individualizing.
    partition: Partition,
    trace: u64,
    cell: usize,
    chosen: usize,
}

/// The leftmost root-to-leaf path of the search tree of one structure.
struct FirstPath {
    steps: Vec<PathStep>,
    leaf: Vec<usize>,
    leaf_trace: u64,
    root_trace: u64,
}

impl FirstPath {
    fn new(s: &Structure) -> Self {
        let (mut part, mut trace) = refine(s, initial_partition(s));
        let root_trace = trace;
        let mut steps = Vec::new();
        while let Some(cell) = part.target_cell(s) {
            let chosen = part.cells[cell][0];
            let next = part.individualize(cell, chosen);
            steps.push(PathStep { partition: part, trace, cell, chosen });
            let (p, t) = refine(s, next);
            part = p;
            trace = t;
        }
        let leaf = part.cells.iter().map(|c| c[0]).collect();
        FirstPath { steps, leaf, leaf_trace: trace, root_trace }
    }

    fn trace_at(&self, depth: usize) -> u64 {
        if depth < self.steps.len() {
            self.steps[depth].trace
        } else {
            self.leaf_trace
        }
    }
}

/// Depth-first search below `part` (at `depth`) in the tree of `tgt` for a leaf
/// whose correspondence with the first leaf of `src` is an isomorphism.
fn search_leaf(
    src: &Structure,
    path: &FirstPath,
    tgt: &Structure,
    part: Partition,
    trace: u64,
    depth: usize,
) -> Option<Vec<usize>> {
    if trace != path.trace_at(depth) {
        return None;
    }
    if part.is_discrete() {
        if depth != path.steps.len() {
            return None;
        }
        let mut map = vec![0; src.len()];
        for (t, c) in part.cells.iter().enumerate() {
            map[path.leaf[t]] = c[0];
        }
        return src.maps_onto(tgt, &map).then_some(map);
    }
    let cell = part.target_cell(tgt)?;
    if depth >= path.steps.len() || cell != path.steps[depth].cell {
        return None;
    }
    for &u in &part.cells[cell] {
        let (next, t) = refine(tgt, part.individualize(cell, u));
        if let Some(m) = search_leaf(src, path, tgt, next, t, depth + 1) {
            return Some(m);
        }
    }
    None
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Generators of the automorphism group of `s`.
///
/// Works up the first path from the leaf: at depth i every vertex of the target
/// cell outside the known orbit of the chosen vertex is tried, and an automorphism
/// fixing the earlier chosen vertices is searched for. The generators found this
/// way generate the full group.
pub(crate) fn automorphism_generators(s: &Structure) -> Vec<Permutation> {
    let path = FirstPath::new(s);
    let mut gens: Vec<Permutation> = Vec::new();
    let mut orbits = UnionFind::new(s.len());
    for depth in (0..path.steps.len()).rev() {
        let step = &path.steps[depth];
        let mut failed: Vec<usize> = Vec::new();
        for &w in &step.partition.cells[step.cell] {
            if w == step.chosen || orbits.find(w) == orbits.find(step.chosen) {
                continue;
            }
            let rw = orbits.find(w);
            if failed.iter().any(|&f| orbits.find(f) == rw) {
                continue;
            }
            let (next, t) = refine(s, step.partition.individualize(step.cell, w));
            match search_leaf(s, &path, s, next, t, depth + 1) {
                Some(map) => {
                    let g = Permutation::from_images(map).expect("leaf correspondence is a bijection");
                    for v in 0..s.len() {
                        orbits.union(v, g.apply(v));
                    }
                    gens.push(g);
                }
                None => failed.push(w),
            }
        }
    }
    gens
}

/// A map sending `a` onto `b`, if one exists.
pub(crate) fn find_isomorphism(a: &Structure, b: &Structure) -> Option<Permutation> {
    if a.len() != b.len() || a.arcs.len() != b.arcs.len() {
        return None;
    }
    let mut ca = a.color.clone();
    let mut cb = b.color.clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return None;
    }
    let path = FirstPath::new(a);
    let (root, trace) = refine(b, initial_partition(b));
    if trace != path.root_trace {
        return None;
    }
    search_leaf(a, &path, b, root, trace, 0).map(|m| Permutation::from_images(m).expect("bijection"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgrp::PermGroup;

    fn undirected(n: usize, edges: &[(usize, usize)]) -> Structure {
        Structure::new(n, edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]), vec![0; n])
    }

    fn cycle(n: usize) -> Structure {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        undirected(n, &edges)
    }

    fn order(s: &Structure) -> u64 {
        let gens = automorphism_generators(s);
        for g in &gens {
            assert!(s.maps_onto(s, g.images()));
        }
        PermGroup::new(s.len(), gens).unwrap().order_u64().unwrap()
    }

    #[test]
    fn cycles_are_dihedral() {
        assert_eq!(order(&cycle(4)), 8);
        assert_eq!(order(&cycle(8)), 16);
        assert_eq!(order(&cycle(7)), 14);
    }

    #[test]
    fn petersen() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        assert_eq!(order(&undirected(10, &e)), 120);
    }

    #[test]
    fn complete_and_empty() {
        let mut e = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                e.push((i, j));
            }
        }
        assert_eq!(order(&undirected(5, &e)), 120);
        assert_eq!(order(&undirected(4, &[])), 24);
    }

    #[test]
    fn directed_cycle() {
        let s = Structure::new(5, (0..5).map(|i| (i, (i + 1) % 5)), vec![0; 5]);
        assert_eq!(order(&s), 5);
    }

    #[test]
    fn isomorphism_between_relabelings() {
        let a = cycle(6);
        let b = undirected(6, &[(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)]);
        let m = find_isomorphism(&a, &b).unwrap();
        assert!(a.maps_onto(&b, m.images()));
        let c = undirected(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert!(find_isomorphism(&a, &c).is_none());
    }
}
