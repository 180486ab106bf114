//! The projective plane A₂(F_q) as a subspace incidence graph, its opposition
//! subgraph, and the coset model on the unipotent group {(y, z)}.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::ffield::{elements, make_field, prime_power, primitive_element, Field, FieldElement, FieldError};
use crate::fgroup::{make_opp_group, FiniteGroup, GroupError, SubgroupDatum};
use crate::linkgraph::{FSet, LinkGraph};
use crate::singer::OrbitKappa;
use crate::tripres::{build_t_kappa, lambda_orbits, Kappa, TriError, TrianglePresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OppError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is not 1 mod 3")]
    BadCongruence(u64),
    #[error("field element {0} does not have order 3")]
    NotOrderThree(usize),
    #[error("no length-3 orbit has minimum {0}")]
    UnknownOrbit(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Presentation(#[from] TriError),
}

/// Addition and multiplication tables of GF(q) on element indices.
#[derive(Debug, Clone)]
struct Tables {
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
}

impl Tables {
    fn new(field: &Field) -> Self {
        let els: Vec<FieldElement> = elements(field).collect();
        let q = els.len();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                add[i * q + j] = (a + b).index() as usize;
                mul[i * q + j] = (a * b).index() as usize;
            }
        }
        let neg = els.iter().map(|a| a.neg().index() as usize).collect();
        Self { q, add, mul, neg }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    fn dot(&self, u: &[usize; 3], v: &[usize; 3]) -> usize {
        (0..3).fold(0, |acc, i| self.add(acc, self.mul(u[i], v[i])))
    }
}

fn field_of(q: u64) -> Result<Field, OppError> {
    let (p, e) = prime_power(q).ok_or(OppError::NotPrimePower(q))?;
    Ok(make_field(p, e, None, false)?)
}

/// Nonzero vectors of F_q³ whose first nonzero coordinate is 1, in lexicographic order.
fn normalized_vectors(q: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Incidence graph of points and lines of PG(2, q), with the vectors labelling
/// each side (points as vectors, lines as dual vectors; incidence is u·v = 0).
#[derive(Debug, Clone)]
pub struct SubspaceModel {
    pub graph: LinkGraph,
    pub points: Vec<[usize; 3]>,
    pub lines: Vec<[usize; 3]>,
}

pub fn a2_graph(q: u64) -> Result<SubspaceModel, OppError> {
    let t = Tables::new(&field_of(q)?);
    let vs = normalized_vectors(t.q);
    let mut edges = Vec::new();
    for (i, p) in vs.iter().enumerate() {
        for (j, l) in vs.iter().enumerate() {
            if t.dot(p, l) == 0 {
                edges.push((i, j));
            }
        }
    }
    let graph = LinkGraph::from_incidences(vs.len(), vs.len(), &edges).expect("square incidence");
    Ok(SubspaceModel { graph, points: vs.clone(), lines: vs })
}

/// Points off the line V₂ = ⟨e₁, e₂⟩ and lines not through the point V₁ = ⟨e₁⟩,
/// renumbered in their original order.
pub fn opp_graph_building(q: u64) -> Result<LinkGraph, OppError> {
    let model = a2_graph(q)?;
    let keep_pts: Vec<usize> = (0..model.points.len()).filter(|&i| model.points[i][2] != 0).collect();
    let keep_lns: Vec<usize> = (0..model.lines.len()).filter(|&j| model.lines[j][0] != 0).collect();
    let n = model.graph.n();
    let pos_ln: BTreeMap<usize, usize> = keep_lns.iter().enumerate().map(|(a, &j)| (j, a)).collect();
    let mut edges = Vec::new();
    for (a, &i) in keep_pts.iter().enumerate() {
        for &v in model.graph.neighbors(i) {
            if let Some(&b) = pos_ln.get(&(v - n)) {
                edges.push((a, b));
            }
        }
    }
    Ok(LinkGraph::from_incidences(keep_pts.len(), keep_lns.len(), &edges).expect("q² on each side"))
}

/// The group {(y, z)} with the parabola S = {(y, y²)} and, for q ≡ 1 mod 3, the map
/// λ(y, y²) = (αy, (αy)²) for an element α of order 3.
#[derive(Debug, Clone)]
pub struct OppDatum {
    pub q: u64,
    pub field: Field,
    pub group: FiniteGroup,
    /// Group indices of (y, y²), in order of y.
    pub s: Vec<usize>,
    /// Field index of α.
    pub alpha3: Option<usize>,
    pub lambda: Option<BTreeMap<usize, usize>>,
    tables: Tables,
}

impl OppDatum {
    pub fn f_set(&self) -> FSet {
        FSet::from_group(&self.group, &self.s)
    }

    pub fn graph(&self) -> LinkGraph {
        LinkGraph::from_f(&self.f_set())
    }

    /// λ-orbits on S (empty when λ is undefined).
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        match &self.lambda {
            Some(l) => lambda_orbits(&self.s, l),
            None => Vec::new(),
        }
    }

    pub fn three_orbit_mins(&self) -> Vec<usize> {
        self.orbits().into_iter().filter(|o| o.len() == 3).map(|o| o[0]).collect()
    }

    pub fn all_kappas(&self) -> Vec<OrbitKappa> {
        let mins = self.three_orbit_mins();
        (0..1usize << mins.len())
            .map(|bits| {
                mins.iter()
                    .enumerate()
                    .map(|(b, &m)| (m, if bits >> (mins.len() - 1 - b) & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect()
    }
}

/// Default α: γ^{(q−1)/3} for the field's primitive element γ.
pub fn default_alpha3(field: &Field) -> Option<usize> {
    let q = field.order();
    (q % 3 == 1).then(|| primitive_element(field).pow((q - 1) / 3).index() as usize)
}

pub fn opp_datum(q: u64, alpha3: Option<usize>) -> Result<OppDatum, OppError> {
    let field = field_of(q)?;
    let tables = Tables::new(&field);
    let group = make_opp_group(q)?;
    let qs = q as usize;
    let s: Vec<usize> = (0..qs).map(|y| group.opp_element(y, tables.mul(y, y)).expect("in range")).collect();
    let alpha3 = match alpha3 {
        Some(a) => {
            let el = FieldElement::from_index(&field, a as u64);
            if a >= qs || el.is_zero() || el.multiplicative_order()? != 3 {
                return Err(OppError::NotOrderThree(a));
            }
            Some(a)
        }
        None => default_alpha3(&field),
    };
    let lambda = alpha3.map(|a| {
        (0..qs)
            .map(|y| {
                let ay = tables.mul(a, y);
                (s[y], group.opp_element(ay, tables.mul(ay, ay)).expect("in range"))
            })
            .collect()
    });
    Ok(OppDatum { q, field, group, s, alpha3, lambda, tables })
}

/// Outcome of the brute-force comparison of the three incidence descriptions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceCheck {
    pub pairs_checked: usize,
    pub incident_pairs: usize,
    pub disagreements: usize,
}

type Mat = [[usize; 3]; 3];

fn mat_mul(t: &Tables, a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).fold(0, |acc, k| t.add(acc, t.mul(a[i][k], b[k][j])));
        }
    }
    c
}

fn unipotent(x: usize, y: usize, z: usize) -> Mat {
    [[1, x, z], [0, 1, y], [0, 0, 1]]
}

/// For every pair (g_{y₁,z₁}U₁, g_{y₂,z₂}U₂) compares: the cosets meet (explicit
/// matrices), −z₁ + z₂ − y₂(−y₁ + y₂) = 0, and g₁⁻¹g₂ ∈ S.
pub fn check_coset_incidence(d: &OppDatum) -> IncidenceCheck {
    let t = &d.tables;
    let q = t.q;
    let coset = |y: usize, z: usize, side: usize| -> HashSet<Mat> {
        let g = unipotent(y, y, z);
        (0..q)
            .map(|u| {
                let h = if side == 1 { unipotent(u, 0, 0) } else { unipotent(0, u, 0) };
                mat_mul(t, &g, &h)
            })
            .collect()
    };
    let s_set: BTreeSet<usize> = d.s.iter().copied().collect();
    let mut out = IncidenceCheck { pairs_checked: 0, incident_pairs: 0, disagreements: 0 };
    let c1: Vec<HashSet<Mat>> = (0..q * q).map(|g| coset(g / q, g % q, 1)).collect();
    let c2: Vec<HashSet<Mat>> = (0..q * q).map(|g| coset(g / q, g % q, 2)).collect();
    for g1 in 0..q * q {
        let (y1, z1) = (g1 / q, g1 % q);
        for g2 in 0..q * q {
            let (y2, z2) = (g2 / q, g2 % q);
            let meet = !c1[g1].is_disjoint(&c2[g2]);
            let formula = t.sub(t.sub(z2, z1), t.mul(y2, t.sub(y2, y1))) == 0;
            let member = s_set.contains(&d.group.mul(d.group.inv(g1), g2));
            out.pairs_checked += 1;
            out.incident_pairs += meet as usize;
            if meet != formula || formula != member {
                out.disagreements += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Bullet {
    pub name: &'static str,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OppReport {
    pub q: u64,
    pub bullets: Vec<Bullet>,
    pub spectral_gap: f64,
    pub zuk: bool,
}

impl OppReport {
    pub fn all_pass(&self) -> bool {
        self.bullets.iter().all(|b| b.pass)
    }
}

pub const GAP_TOLERANCE: f64 = 1e-6;

/// The seven listed properties of the opposition graph, checked on the coset model.
pub fn opp_properties(q: u64) -> Result<OppReport, OppError> {
    let g = opp_datum(q, None)?.graph();
    let m = g.metrics();
    let qs = q as usize;
    let mut bullets = Vec::new();
    let mut push = |name, expected: String, observed: String| {
        let pass = expected == observed;
        bullets.push(Bullet { name, expected, observed, pass });
    };
    push("vertices and edges", format!("{} {}", 2 * qs * qs, qs.pow(3)), format!("{} {}", m.vertices, m.edges));
    push("regular degree", format!("{qs}"), match m.biregular {
        Some((a, b)) if a == b => a.to_string(),
        other => format!("{other:?}"),
    });
    push("bipartite", "true".into(), "true".into());
    push("connected", "true".into(), m.connected.to_string());
    let girth = if q == 2 { 8 } else { 6 };
    push("girth", girth.to_string(), m.girth.map_or("inf".into(), |x| x.to_string()));
    push("diameter", "4".into(), m.diameter.map_or("inf".into(), |x| x.to_string()));
    let gap = g.spectral_gap().unwrap_or(f64::NAN);
    let want = 1.0 - (q as f64).sqrt() / q as f64;
    bullets.push(Bullet {
        name: "spectral gap",
        expected: format!("{want:.9}"),
        observed: format!("{gap:.9}"),
        pass: (gap - want).abs() < GAP_TOLERANCE,
    });
    Ok(OppReport { q, bullets, spectral_gap: gap, zuk: gap > 0.5 })
}

/// T_κ for q ≡ 1 mod 3 with H = G; κ keyed by orbit minimum (group index).
pub fn theoopp_presentation(d: &OppDatum, kappa: &OrbitKappa) -> Result<TrianglePresentation, OppError> {
    let lambda = d.lambda.as_ref().ok_or(OppError::BadCongruence(d.q))?;
    let mins = d.three_orbit_mins();
    if let Some(&bad) = kappa.keys().find(|k| !mins.contains(k)) {
        return Err(OppError::UnknownOrbit(bad));
    }
    let h = SubgroupDatum::whole(&d.group);
    let k: Kappa = kappa.iter().map(|(&o, &v)| ((0, o), v)).collect();
    Ok(build_t_kappa(&d.group, &d.s, lambda, &h, &k)?)
}

/// All 2^{(q−1)/3} presentations, in the order of [`OppDatum::all_kappas`].
pub fn theoopp_presentations(q: u64, alpha3: Option<usize>) -> Result<Vec<(OrbitKappa, TrianglePresentation)>, OppError> {
    if q % 3 != 1 {
        return Err(OppError::BadCongruence(q));
    }
    let d = opp_datum(q, alpha3)?;
    d.all_kappas()
        .into_iter()
        .map(|k| theoopp_presentation(&d, &k).map(|t| (k, t)))
        .collect()
}
