//! The group ⟨a_1..a_n | a_i a_j a_k⟩ of a presentation: export, abelianization
//! and coset enumeration.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tripres::{TrianglePresentation, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExportError {
    #[error("cannot parse presentation: {0}")]
    Parse(String),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Gap,
    Magma,
    Json,
}

impl std::str::FromStr for Format {
    type Err = ExportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gap" => Ok(Format::Gap),
            "magma" => Ok(Format::Magma),
            "json" => Ok(Format::Json),
            other => Err(ExportError::UnknownFormat(other.into())),
        }
    }
}

/// n generators and one relator a_i a_j a_k per rotation orbit (0-based, canonical rotation).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub generators: usize,
    pub relators: Vec<Triple>,
}

impl PresentationDoc {
    pub fn from_t(t: &TrianglePresentation) -> Self {
        Self { generators: t.n(), relators: t.canonical_reps() }
    }

    pub fn to_t(&self) -> Result<TrianglePresentation, ExportError> {
        TrianglePresentation::closed(self.generators, self.relators.iter().copied())
            .map_err(|e| ExportError::Parse(e.to_string()))
    }
}

pub fn export_presentation(t: &TrianglePresentation, format: Format) -> String {
    let doc = PresentationDoc::from_t(t);
    let mut out = String::new();
    match format {
        Format::Gap => {
            let rels: Vec<String> = doc
                .relators
                .iter()
                .map(|&(i, j, k)| format!("F.{}*F.{}*F.{}", i + 1, j + 1, k + 1))
                .collect();
            writeln!(out, "F := FreeGroup({});", doc.generators).unwrap();
            writeln!(out, "G := F / [ {} ];", rels.join(", ")).unwrap();
        }
        Format::Magma => {
            let gens: Vec<String> = (1..=doc.generators).map(|i| format!("a{i}")).collect();
            let rels: Vec<String> =
                doc.relators.iter().map(|&(i, j, k)| format!("a{}*a{}*a{}", i + 1, j + 1, k + 1)).collect();
            let g = gens.join(",");
            writeln!(out, "G<{g}> := Group<{g} | {}>;", rels.join(", ")).unwrap();
        }
        Format::Json => {
            let rels: Vec<[usize; 3]> = doc.relators.iter().map(|&(i, j, k)| [i + 1, j + 1, k + 1]).collect();
            let v = serde_json::json!({ "generators": doc.generators, "relators": rels });
            writeln!(out, "{}", serde_json::to_string(&v).unwrap()).unwrap();
        }
    }
    out
}

fn parse_word(word: &str, prefix: &str, n: usize) -> Result<Triple, ExportError> {
    let letters: Vec<usize> = word
        .split('*')
        .map(|l| {
            let l = l.trim();
            l.strip_prefix(prefix)
                .and_then(|x| x.parse::<usize>().ok())
                .filter(|&x| x >= 1 && x <= n)
                .map(|x| x - 1)
                .ok_or_else(|| ExportError::Parse(format!("bad letter `{l}`")))
        })
        .collect::<Result<_, _>>()?;
    match letters[..] {
        [i, j, k] => Ok((i, j, k)),
        _ => Err(ExportError::Parse(format!("relator `{word}` does not have length 3"))),
    }
}

fn between<'a>(s: &'a str, open: &str, close: &str) -> Result<&'a str, ExportError> {
    let a = s.find(open).ok_or_else(|| ExportError::Parse(format!("missing `{open}`")))? + open.len();
    let b = s[a..].find(close).ok_or_else(|| ExportError::Parse(format!("missing `{close}`")))? + a;
    Ok(&s[a..b])
}

fn split_words(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|w| !w.is_empty())
}

/// Inverse of [`export_presentation`].
pub fn parse_presentation(text: &str, format: Format) -> Result<PresentationDoc, ExportError> {
    let bad_n = |e: std::num::ParseIntError| ExportError::Parse(e.to_string());
    let (generators, relators) = match format {
        Format::Gap => {
            let n: usize = between(text, "FreeGroup(", ")")?.trim().parse().map_err(bad_n)?;
            let rels = split_words(between(text, "[", "]")?)
                .map(|w| parse_word(w, "F.", n))
                .collect::<Result<Vec<_>, _>>()?;
            (n, rels)
        }
        Format::Magma => {
            let n = split_words(between(text, "G<", ">")?).count();
            let body = between(text, "|", ">;")?;
            let rels = split_words(body).map(|w| parse_word(w, "a", n)).collect::<Result<Vec<_>, _>>()?;
            (n, rels)
        }
        Format::Json => {
            #[derive(Deserialize)]
            struct Raw {
                generators: usize,
                relators: Vec<[usize; 3]>,
            }
            let raw: Raw = serde_json::from_str(text).map_err(|e| ExportError::Parse(e.to_string()))?;
            let n = raw.generators;
            let rels = raw
                .relators
                .iter()
                .map(|r| {
                    if r.iter().all(|&x| x >= 1 && x <= n) {
                        Ok((r[0] - 1, r[1] - 1, r[2] - 1))
                    } else {
                        Err(ExportError::Parse(format!("relator {r:?} out of range")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            (n, rels)
        }
    };
    Ok(PresentationDoc { generators, relators })
}

/// Z^free_rank ⊕ ⊕ Z/d_i with d_1 | d_2 | … and every d_i > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        write!(f, "torsion [{}], free rank {}", t.join(", "), self.free_rank)
    }
}

/// Relation matrix: one row per rotation orbit, e_i + e_j + e_k.
pub fn relation_matrix(t: &TrianglePresentation) -> Vec<Vec<BigInt>> {
    t.canonical_reps()
        .iter()
        .map(|&(i, j, k)| {
            let mut row = vec![BigInt::zero(); t.n()];
            for x in [i, j, k] {
                row[x] += 1;
            }
            row
        })
        .collect()
}

/// Diagonal of the Smith normal form (nonzero entries, in divisibility order).
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !m[r][c].is_zero() && pivot.is_none_or(|(pr, pc)| m[r][c].abs() < m[pr][pc].abs()) {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = m[r][t].div_floor(&m[t][t]);
                let pivot_row = m[t].clone();
                for c in t..cols {
                    let sub = &q * &pivot_row[c];
                    m[r][c] -= sub;
                }
                if !m[r][t].is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = m[t][c].div_floor(&m[t][t]);
                for r in t..rows {
                    let sub = &q * &m[r][t];
                    m[r][c] -= sub;
                }
                if !m[t][c].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // the pivot must divide every remaining entry
                let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| {
                    !m[r][c].is_multiple_of(&m[t][t])
                });
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            let add = m[r][c].clone();
                            m[t][c] += add;
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for r in t..rows {
                if !m[r][t].is_zero() && m[r][t].abs() < m[best.0][best.1].abs() {
                    best = (r, t);
                }
            }
            for c in t..cols {
                if !m[t][c].is_zero() && m[t][c].abs() < m[best.0][best.1].abs() {
                    best = (t, c);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            }
            if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

pub fn abelianization(t: &TrianglePresentation) -> AbelianInvariants {
    let diag = smith_diagonal(relation_matrix(t), t.n());
    let torsion = diag.iter().filter(|d| !d.is_one()).cloned().collect();
    AbelianInvariants { torsion, free_rank: t.n() - diag.len() }
}

/// Every relator has exponent sum 3, so a_l ↦ 1 defines a map onto Z/3.
pub fn exponent_sums_divisible_by_three(t: &TrianglePresentation) -> bool {
    relation_matrix(t).iter().all(|row| row.iter().sum::<BigInt>() == BigInt::from(3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Enumeration {
    /// Index of the subgroup.
    Index(usize),
    /// More than the allowed number of cosets were defined.
    Exceeded,
}

/// A letter: generator index and sign.
pub type Letter = (usize, bool);

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

const NONE: usize = usize::MAX;

struct CosetTable {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    max: usize,
    exceeded: bool,
}

impl CosetTable {
    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.cols + x] = v;
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        let d = self.parent.len();
        if d >= self.max {
            self.exceeded = true;
            return false;
        }
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        true
    }

    fn rep(&mut self, k: usize) -> usize {
        let mut l = k;
        while self.parent[l] != l {
            l = self.parent[l];
        }
        let mut m = k;
        while self.parent[m] != l {
            let next = self.parent[m];
            self.parent[m] = l;
            m = next;
        }
        l
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                if self.get(d, x ^ 1) == g {
                    self.set(d, x ^ 1, NONE);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.get(mu, x) != NONE {
                    let t = self.get(mu, x);
                    self.merge(nu, t, &mut queue);
                } else if self.get(nu, x ^ 1) != NONE {
                    let t = self.get(nu, x ^ 1);
                    self.merge(mu, t, &mut queue);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, x ^ 1, mu);
                }
            }
        }
    }

    /// Scans `word` from coset `a`, defining cosets as needed.
    fn scan_and_fill(&mut self, a: usize, word: &[usize]) {
        if word.is_empty() {
            return;
        }
        let (mut f, mut b) = (a, a);
        let (mut i, mut j) = (0usize, word.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.get(f, word[i]) != NONE {
                f = self.get(f, word[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != a {
                    self.coincidence(f, a);
                }
                return;
            }
            while j >= i as isize && self.get(b, word[j as usize] ^ 1) != NONE {
                b = self.get(b, word[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            }
            if j == i as isize {
                self.set(f, word[i], b);
                self.set(b, word[i] ^ 1, f);
                return;
            }
            if !self.define(f, word[i]) {
                return;
            }
        }
    }
}

fn letters_to_cols(w: &[Letter]) -> Vec<usize> {
    w.iter().map(|&(g, inv)| 2 * g + inv as usize).collect()
}

/// HLT coset enumeration of the subgroup generated by `subgroup` in the group of T.
pub fn todd_coxeter(t: &TrianglePresentation, subgroup: &[Vec<Letter>], max_cosets: usize) -> Enumeration {
    let relators: Vec<Vec<usize>> = t
        .canonical_reps()
        .iter()
        .map(|&(i, j, k)| vec![2 * i, 2 * j, 2 * k])
        .collect();
    enumerate_cosets(t.n(), &relators, subgroup, max_cosets)
}

/// HLT coset enumeration for arbitrary relators given as column words (2g or 2g+1).
pub fn enumerate_cosets(
    generators: usize,
    relators: &[Vec<usize>],
    subgroup: &[Vec<Letter>],
    max_cosets: usize,
) -> Enumeration {
    let cols = 2 * generators;
    let mut ct = CosetTable { cols, table: vec![NONE; cols], parent: vec![0], max: max_cosets.max(1), exceeded: false };
    for w in subgroup {
        ct.scan_and_fill(0, &letters_to_cols(w));
        if ct.exceeded {
            return Enumeration::Exceeded;
        }
    }
    let mut a = 0;
    while a < ct.parent.len() {
        for r in relators {
            if !ct.live(a) {
                break;
            }
            ct.scan_and_fill(a, r);
            if ct.exceeded {
                return Enumeration::Exceeded;
            }
        }
        for x in 0..cols {
            if ct.live(a) && ct.get(a, x) == NONE && !ct.define(a, x) {
                return Enumeration::Exceeded;
            }
        }
        a += 1;
    }
    Enumeration::Index((0..ct.parent.len()).filter(|&c| ct.live(c)).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oct() -> TrianglePresentation {
        TrianglePresentation::closed(2, [(0, 0, 1), (1, 1, 1)]).unwrap()
    }

    #[test]
    fn octahedron_group() {
        let t = oct();
        assert_eq!(todd_coxeter(&t, &[], 1000), Enumeration::Index(6));
        let ab = abelianization(&t);
        assert_eq!(ab.torsion, vec![BigInt::from(6)]);
        assert_eq!(ab.free_rank, 0);
        assert!(exponent_sums_divisible_by_three(&t));
        assert_eq!(
            export_presentation(&t, Format::Gap),
            "F := FreeGroup(2);\nG := F / [ F.1*F.1*F.2, F.2*F.2*F.2 ];\n"
        );
    }

    #[test]
    fn free_groups() {
        let t = TrianglePresentation::empty(1);
        assert_eq!(todd_coxeter(&t, &[vec![(0, false)]], 10), Enumeration::Index(1));
        assert_eq!(todd_coxeter(&t, &[], 10), Enumeration::Exceeded);
        let ab = abelianization(&TrianglePresentation::empty(2));
        assert_eq!((ab.torsion.len(), ab.free_rank), (0, 2));
    }

    #[test]
    fn known_groups() {
        // S3 = <a, b | a^2, b^3, (ab)^2>
        let rels = vec![vec![0, 0], vec![2, 2, 2], vec![0, 2, 0, 2]];
        assert_eq!(enumerate_cosets(2, &rels, &[], 100), Enumeration::Index(6));
        // index of <b> is 2
        assert_eq!(enumerate_cosets(2, &rels, &[vec![(1, false)]], 100), Enumeration::Index(2));
        // Z/2 x Z/3 as a quotient needing coincidences: <a | a^6, a^4>
        assert_eq!(enumerate_cosets(1, &[vec![0; 6], vec![0; 4]], &[], 100), Enumeration::Index(2));
    }

    #[test]
    fn smith_examples() {
        let m = |rows: &[&[i64]]| rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = smith_diagonal(m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let d = smith_diagonal(m(&[&[4, 0], &[0, 6]]), 2);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn heawood_presentation() {
        let t = crate::tables::golden(3).unwrap().presentation().unwrap();
        let doc = PresentationDoc::from_t(&t);
        assert_eq!((doc.generators, doc.relators.len()), (7, 7));
        // determinantal divisors of the relation matrix: 1, 1, 1, 1, 2, 4, 24
        let ab = abelianization(&t);
        assert_eq!(ab.torsion, vec![BigInt::from(2), BigInt::from(2), BigInt::from(6)]);
        assert_eq!(ab.free_rank, 0);
        assert_eq!(todd_coxeter(&t, &[], 100_000), Enumeration::Exceeded);
    }

    #[test]
    fn round_trips() {
        let t = TrianglePresentation::closed(3, [(0, 1, 2), (0, 2, 1), (1, 1, 1)]).unwrap();
        for f in [Format::Gap, Format::Magma, Format::Json] {
            let text = export_presentation(&t, f);
            let doc = parse_presentation(&text, f).unwrap();
            assert_eq!(doc.to_t().unwrap(), t, "{f:?}");
        }
    }
}
