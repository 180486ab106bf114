//! Singer difference sets S = {l : Tr(α^l) = 0} ⊆ Z/(q²+q+1) and the
//! presentations T_κ built from multiplication by q.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::ffield::{make_field, prime_power, primitive_element, Field, FieldElement, FieldError};
use crate::fgroup::{make_cyclic, subgroup, FiniteGroup, GroupError, SubgroupDatum};
use crate::linkgraph::FSet;
use crate::tripres::{build_t_kappa, lambda_orbits, Kappa, TriError, TrianglePresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingerError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("group is not abelian")]
    NonAbelianGroup,
    #[error("no length-3 orbit has minimum {0}")]
    UnknownOrbit(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Presentation(#[from] TriError),
}

/// κ on the length-3 λ-orbits, keyed by orbit minimum; missing entries are +1.
pub type OrbitKappa = BTreeMap<usize, i8>;

#[derive(Debug, Clone)]
pub struct SingerDatum {
    pub q: u64,
    pub p: u64,
    pub e: usize,
    pub m: usize,
    pub group: FiniteGroup,
    /// Sorted.
    pub s: Vec<usize>,
    /// GF(q³) as an extension of the prime field.
    pub field: Field,
    pub alpha: FieldElement,
    pub lambda: BTreeMap<usize, usize>,
    /// All λ-orbits on S, each sorted, listed by minimum.
    pub orbits: Vec<Vec<usize>>,
}

impl SingerDatum {
    pub fn three_orbits(&self) -> Vec<&Vec<usize>> {
        self.orbits.iter().filter(|o| o.len() == 3).collect()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.orbits.iter().filter(|o| o.len() == 1).map(|o| o[0]).collect()
    }

    pub fn f_set(&self) -> FSet {
        FSet::from_group(&self.group, &self.s)
    }

    /// Minimum of the λ-orbit of s.
    pub fn orbit_of(&self, s: usize) -> Option<&Vec<usize>> {
        self.orbits.iter().find(|o| o.contains(&s))
    }

    /// Every κ on the length-3 orbits, in lexicographic order of the sign vectors
    /// (with + before −).
    pub fn all_kappas(&self) -> Vec<OrbitKappa> {
        let mins: Vec<usize> = self.three_orbits().iter().map(|o| o[0]).collect();
        (0..1usize << mins.len())
            .map(|bits| {
                mins.iter()
                    .enumerate()
                    .map(|(b, &m)| (m, if bits >> (mins.len() - 1 - b) & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect()
    }

    pub fn constant_kappa(&self, sign: i8) -> OrbitKappa {
        self.three_orbits().iter().map(|o| (o[0], sign)).collect()
    }
}

/// Singer datum of the plane over GF(q). GF(q³) uses the given modulus (degree 3e
/// over the prime field) or the default one; α is the class of x when primitive.
pub fn singer_datum(q: u64, modulus: Option<&[u64]>) -> Result<SingerDatum, SingerError> {
    let (p, e) = prime_power(q).ok_or(SingerError::NotPrimePower(q))?;
    let field = make_field(p, 3 * e, modulus, false)?;
    let alpha = primitive_element(&field);
    let m = (q * q + q + 1) as usize;
    let mut s = Vec::new();
    let mut cur = FieldElement::one(&field);
    for l in 0..m {
        if cur.trace_to_subfield(q)?.is_zero() {
            s.push(l);
        }
        cur = &cur * &alpha;
    }
    let lambda: BTreeMap<usize, usize> = s.iter().map(|&x| (x, (x as u64 * q % m as u64) as usize)).collect();
    let orbits = lambda_orbits(&s, &lambda);
    Ok(SingerDatum { q, p, e, m, group: make_cyclic(m)?, s, field, alpha, lambda, orbits })
}

/// R(q): (q+1)/3, q/3 or (q−1)/3 according to q mod 3.
pub fn r_of_q(q: u64) -> u64 {
    match q % 3 {
        2 => (q + 1) / 3,
        0 => q / 3,
        _ => (q - 1) / 3,
    }
}

fn check_orbit_kappa(d: &SingerDatum, kappa: &OrbitKappa) -> Result<(), SingerError> {
    let mins: Vec<usize> = d.three_orbits().iter().map(|o| o[0]).collect();
    match kappa.keys().find(|k| !mins.contains(k)) {
        Some(&bad) => Err(SingerError::UnknownOrbit(bad)),
        None => Ok(()),
    }
}

/// T_κ on Z/(q²+q+1) with H = G.
pub fn singer_t_kappa(d: &SingerDatum, kappa: &OrbitKappa) -> Result<TrianglePresentation, SingerError> {
    check_orbit_kappa(d, kappa)?;
    let h = SubgroupDatum::whole(&d.group);
    let k: Kappa = kappa.iter().map(|(&o, &v)| ((0, o), v)).collect();
    Ok(build_t_kappa(&d.group, &d.s, &d.lambda, &h, &k)?)
}

/// μρT: (i, j, k) ↦ (j⁻¹, i⁻¹, k⁻¹), rotation-closed.
pub fn murho_dual(g: &FiniteGroup, t: &TrianglePresentation) -> Result<TrianglePresentation, SingerError> {
    if !g.is_abelian() {
        return Err(SingerError::NonAbelianGroup);
    }
    if g.order() != t.n() {
        return Err(TriError::SizeMismatch(g.order(), t.n()).into());
    }
    let triples = t.triples().iter().map(|&(i, j, k)| (g.inv(j), g.inv(i), g.inv(k)));
    Ok(TrianglePresentation::closed(t.n(), triples)?)
}

/// The plane over GF(q²) seen with the subgroup H ≤ Z/(q⁴+q²+1) of order q²+q+1.
#[derive(Debug, Clone)]
pub struct QuadDatum {
    pub q: u64,
    /// Singer datum for q², so λ is multiplication by q².
    pub datum: SingerDatum,
    pub h: SubgroupDatum,
    /// S ∩ H, sorted.
    pub s_in_h: Vec<usize>,
    /// Length-3 λ-orbits contained in H.
    pub orbits_in_h: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadSummary {
    pub q: u64,
    pub group_order: usize,
    pub s: Vec<usize>,
    pub h_generator: usize,
    pub h_order: usize,
    pub s_in_h: Vec<usize>,
    pub orbits_in_h: Vec<Vec<usize>>,
    /// log₂ of the guaranteed family size: [G:H]·|O|.
    pub family_log2: usize,
}

impl QuadDatum {
    pub fn h_generator(&self) -> usize {
        (self.q * self.q - self.q + 1) as usize
    }

    /// [G:H]·|O|.
    pub fn family_log2(&self) -> usize {
        self.h.index() * self.orbits_in_h.len()
    }

    pub fn summary(&self) -> QuadSummary {
        QuadSummary {
            q: self.q,
            group_order: self.datum.m,
            s: self.datum.s.clone(),
            h_generator: self.h_generator(),
            h_order: self.h.order(),
            s_in_h: self.s_in_h.clone(),
            orbits_in_h: self.orbits_in_h.clone(),
            family_log2: self.family_log2(),
        }
    }

    /// T_κ with κ keyed by (canonical coset representative, orbit minimum).
    pub fn t_kappa(&self, kappa: &Kappa) -> Result<TrianglePresentation, SingerError> {
        let d = &self.datum;
        Ok(build_t_kappa(&d.group, &d.s, &d.lambda, &self.h, kappa)?)
    }

    /// Every κ on G/H × O, ordered like [`SingerDatum::all_kappas`].
    pub fn all_kappas(&self) -> Vec<Kappa> {
        let keys: Vec<(usize, usize)> = self
            .h
            .coset_reps()
            .iter()
            .flat_map(|&r| self.orbits_in_h.iter().map(move |o| (r, o[0])))
            .collect();
        (0..1usize << keys.len())
            .map(|bits| {
                keys.iter()
                    .enumerate()
                    .map(|(b, &k)| (k, if bits >> (keys.len() - 1 - b) & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect()
    }
}

pub fn quad_datum(q: u64, modulus: Option<&[u64]>) -> Result<QuadDatum, SingerError> {
    prime_power(q).ok_or(SingerError::NotPrimePower(q))?;
    let datum = singer_datum(q * q, modulus)?;
    let h = subgroup(&datum.group, &[(q * q - q + 1) as usize])?;
    let s_in_h: Vec<usize> = datum.s.iter().copied().filter(|&x| h.contains(x)).collect();
    let orbits_in_h = datum
        .orbits
        .iter()
        .filter(|o| o.len() == 3 && o.iter().all(|&x| h.contains(x)))
        .cloned()
        .collect();
    Ok(QuadDatum { q, datum, h, s_in_h, orbits_in_h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tripres::{is_compatible, left_translation};

    #[test]
    fn heawood_datum() {
        let d = singer_datum(2, Some(&[1, 1, 0, 1])).unwrap();
        assert_eq!(d.s, vec![1, 2, 4]);
        assert_eq!(d.orbits, vec![vec![1, 2, 4]]);
        let t = singer_t_kappa(&d, &d.constant_kappa(1)).unwrap();
        assert_eq!(t.len(), 21);
        assert!(t.contains((0, 1, 3)) && t.contains((6, 3, 4)));
        let neg = singer_t_kappa(&d, &d.constant_kappa(-1)).unwrap();
        assert_eq!(murho_dual(&d.group, &t).unwrap(), neg);
        assert_eq!(murho_dual(&d.group, &neg).unwrap(), t);
    }

    #[test]
    fn small_q_census() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let d = singer_datum(q, None).unwrap();
            assert_eq!(d.s.len() as u64, q + 1, "q = {q}");
            assert_eq!(d.three_orbits().len() as u64, r_of_q(q), "q = {q}");
            assert_eq!(d.s.contains(&0), q % 3 == 0);
            let third = d.m / 3;
            assert_eq!(d.s.contains(&third) && d.s.contains(&(d.m - third)), q % 3 == 1);
            assert!(is_compatible(&d.f_set(), &singer_t_kappa(&d, &OrbitKappa::new()).unwrap()));
        }
    }

    #[test]
    fn r_formula() {
        assert_eq!((r_of_q(2), r_of_q(3), r_of_q(7), r_of_q(64)), (1, 1, 2, 21));
    }

    #[test]
    fn quad_two() {
        let qd = quad_datum(2, None).unwrap();
        assert_eq!(qd.datum.s, vec![7, 9, 14, 15, 18]);
        assert_eq!(qd.s_in_h, vec![9, 15, 18]);
        assert_eq!(qd.h.order(), 7);
        assert_eq!(qd.family_log2(), 3);
        assert_eq!(qd.all_kappas().len(), 8);
        let t = qd.t_kappa(&Kappa::new()).unwrap();
        for a in [0, 5, 17] {
            assert_eq!(t.act(&left_translation(&qd.datum.group, a), false), t);
        }
    }

    #[test]
    fn quad_three() {
        let qd = quad_datum(3, None).unwrap();
        assert_eq!(qd.s_in_h.len(), 4);
        assert_eq!(qd.orbits_in_h.len() as u64, r_of_q(3));
    }

    #[test]
    fn unknown_orbit() {
        let d = singer_datum(2, None).unwrap();
        assert_eq!(singer_t_kappa(&d, &OrbitKappa::from([(2, -1)])), Err(SingerError::UnknownOrbit(2)));
    }
}
