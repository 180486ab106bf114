//! Explicit finite groups on indices `0..n`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{self, elements, FieldError, FieldElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order must be at least 1")]
    Empty,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element {0} is outside the group")]
    NoSuchElement(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// JSON descriptor: `{"kind": "cyclic", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum GroupDescriptor {
    Cyclic { m: usize },
    Abelian { moduli: Vec<usize> },
    Opp { q: u64 },
}

#[derive(Debug, Clone)]
enum Law {
    Cyclic(usize),
    /// Mixed radix, first coordinate most significant.
    Abelian(Vec<usize>),
    /// (y, z) with (y1, z1)(y2, z2) = (y1 + y2, z1 + z2 + y1 y2); tables index GF(q).
    Opp { q: usize, add: Vec<usize>, mul: Vec<usize>, neg: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    law: Law,
    descriptor: GroupDescriptor,
}

/// Z/m, additive, elements in natural order.
pub fn make_cyclic(m: usize) -> Result<FiniteGroup, GroupError> {
    if m == 0 {
        return Err(GroupError::Empty);
    }
    Ok(FiniteGroup { order: m, law: Law::Cyclic(m), descriptor: GroupDescriptor::Cyclic { m } })
}

/// Z/m1 x ... x Z/mk, elements in lexicographic order.
pub fn make_abelian(moduli: &[usize]) -> Result<FiniteGroup, GroupError> {
    if moduli.contains(&0) {
        return Err(GroupError::Empty);
    }
    let order = moduli.iter().product();
    Ok(FiniteGroup {
        order,
        law: Law::Abelian(moduli.to_vec()),
        descriptor: GroupDescriptor::Abelian { moduli: moduli.to_vec() },
    })
}

/// The group of matrices [[1,y,z],[0,1,y],[0,0,1]] over GF(q), elements (y, z)
/// in lexicographic order of field indices.
pub fn make_opp_group(q: u64) -> Result<FiniteGroup, GroupError> {
    let (p, e) = ffield::prime_power(q).ok_or(GroupError::NotPrimePower(q))?;
    let field = ffield::make_field(p, e, None, false)?;
    let els: Vec<FieldElement> = elements(&field).collect();
    let qs = q as usize;
    let mut add = vec![0; qs * qs];
    let mut mul = vec![0; qs * qs];
    for (i, a) in els.iter().enumerate() {
        for (j, b) in els.iter().enumerate() {
            add[i * qs + j] = (a + b).index() as usize;
            mul[i * qs + j] = (a * b).index() as usize;
        }
    }
    let neg = els.iter().map(|a| a.neg().index() as usize).collect();
    Ok(FiniteGroup {
        order: qs * qs,
        law: Law::Opp { q: qs, add, mul, neg },
        descriptor: GroupDescriptor::Opp { q },
    })
}

pub fn from_descriptor(d: &GroupDescriptor) -> Result<FiniteGroup, GroupError> {
    match d {
        GroupDescriptor::Cyclic { m } => make_cyclic(*m),
        GroupDescriptor::Abelian { moduli } => make_abelian(moduli),
        GroupDescriptor::Opp { q } => make_opp_group(*q),
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    fn digits(moduli: &[usize], mut x: usize) -> Vec<usize> {
        let mut d = vec![0; moduli.len()];
        for (slot, &m) in d.iter_mut().zip(moduli).rev() {
            *slot = x % m;
            x /= m;
        }
        d
    }

    fn undigits(moduli: &[usize], d: &[usize]) -> usize {
        d.iter().zip(moduli).fold(0, |acc, (&x, &m)| acc * m + x)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        match &self.law {
            Law::Cyclic(m) => (a + b) % m,
            Law::Abelian(moduli) => {
                let da = Self::digits(moduli, a);
                let db = Self::digits(moduli, b);
                let sum: Vec<usize> =
                    da.iter().zip(&db).zip(moduli).map(|((x, y), m)| (x + y) % m).collect();
                Self::undigits(moduli, &sum)
            }
            Law::Opp { q, add, mul, .. } => {
                let (y1, z1) = (a / q, a % q);
                let (y2, z2) = (b / q, b % q);
                let y = add[y1 * q + y2];
                let z = add[add[z1 * q + z2] * q + mul[y1 * q + y2]];
                y * q + z
            }
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.law {
            Law::Cyclic(m) => (m - a) % m,
            Law::Abelian(moduli) => {
                let d: Vec<usize> =
                    Self::digits(moduli, a).iter().zip(moduli).map(|(x, m)| (m - x) % m).collect();
                Self::undigits(moduli, &d)
            }
            Law::Opp { q, add, mul, neg } => {
                // (y, z)^{-1} = (-y, y^2 - z)
                let (y, z) = (a / q, a % q);
                (neg[y]) * q + add[mul[y * q + y] * q + neg[z]]
            }
        }
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Number of elements of each order.
    pub fn order_census(&self) -> BTreeMap<usize, usize> {
        let mut census = BTreeMap::new();
        for a in 0..self.order {
            *census.entry(self.element_order(a)).or_insert(0) += 1;
        }
        census
    }

    pub fn is_abelian(&self) -> bool {
        match self.law {
            Law::Cyclic(_) | Law::Abelian(_) => true,
            Law::Opp { .. } => {
                (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
            }
        }
    }

    /// Whether x -> x^{-1} is a homomorphism (it always reverses products).
    pub fn inversion_is_automorphism(&self) -> bool {
        (0..self.order).all(|a| {
            (0..self.order).all(|b| self.inv(self.mul(a, b)) == self.mul(self.inv(a), self.inv(b)))
        })
    }

    pub fn label(&self, a: usize) -> String {
        match &self.law {
            Law::Cyclic(_) => a.to_string(),
            Law::Abelian(moduli) => {
                let d: Vec<String> = Self::digits(moduli, a).iter().map(|x| x.to_string()).collect();
                format!("({})", d.join(","))
            }
            Law::Opp { q, .. } => format!("({},{})", a / q, a % q),
        }
    }

    /// Index of the opp-group element (y, z) given field indices.
    pub fn opp_element(&self, y: usize, z: usize) -> Option<usize> {
        match &self.law {
            Law::Opp { q, .. } if y < *q && z < *q => Some(y * q + z),
            _ => None,
        }
    }

    /// Exhaustive group-axiom check; used in tests and on small inputs.
    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        let id = self.identity();
        (0..n).all(|a| self.mul(a, id) == a && self.mul(id, a) == a && self.mul(a, self.inv(a)) == id)
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
            })
    }
}

/// A subgroup with its left cosets xH.
#[derive(Debug, Clone)]
pub struct SubgroupDatum {
    members: Vec<usize>,
    /// Coset id of every parent element; ids follow increasing minimal representative.
    coset_of: Vec<usize>,
    coset_reps: Vec<usize>,
}

/// Closure of the generators under multiplication.
pub fn subgroup(g: &FiniteGroup, generators: &[usize]) -> Result<SubgroupDatum, GroupError> {
    if let Some(&bad) = generators.iter().find(|&&x| x >= g.order()) {
        return Err(GroupError::NoSuchElement(bad));
    }
    let mut members = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in generators {
            let y = g.mul(x, s);
            if members.insert(y) {
                frontier.push(y);
            }
        }
    }
    let members: Vec<usize> = members.into_iter().collect();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut coset_reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = coset_reps.len();
        coset_reps.push(x);
        for &h in &members {
            coset_of[g.mul(x, h)] = id;
        }
    }
    Ok(SubgroupDatum { members, coset_of, coset_reps })
}

impl SubgroupDatum {
    pub fn whole(g: &FiniteGroup) -> Self {
        let all: Vec<usize> = (0..g.order()).collect();
        subgroup(g, &all).expect("elements are in range")
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    /// Canonical (minimal) representative of the coset of x.
    pub fn coset_rep(&self, x: usize) -> usize {
        self.coset_reps[self.coset_of[x]]
    }

    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        (0..g.order()).all(|x| {
            self.members.iter().all(|&h| self.contains(g.mul(g.mul(x, h), g.inv(x))))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic() {
        let z7 = make_cyclic(7).unwrap();
        assert_eq!(z7.mul(3, 5), 1);
        assert_eq!(make_cyclic(1).unwrap().order(), 1);
        assert!(make_cyclic(0).is_err());
        assert!(z7.check_axioms());
    }

    #[test]
    fn opp_group_products() {
        let g2 = make_opp_group(2).unwrap();
        let a = g2.opp_element(1, 0).unwrap();
        assert_eq!(g2.mul(a, a), g2.opp_element(0, 1).unwrap());
        assert_eq!(g2.element_order(a), 4);
        let g3 = make_opp_group(3).unwrap();
        let (x, y) = (g3.opp_element(1, 0).unwrap(), g3.opp_element(2, 0).unwrap());
        assert_eq!(g3.mul(x, y), g3.opp_element(0, 2).unwrap());
        for q in [2, 3, 4, 5] {
            let g = make_opp_group(q).unwrap();
            assert_eq!(g.identity(), g.opp_element(0, 0).unwrap());
            assert!(g.check_axioms());
            assert!(g.is_abelian());
            assert!(g.inversion_is_automorphism());
        }
    }

    #[test]
    fn opp_group_isomorphism_type() {
        // char 2: the matrix model has elements of order 4, so it is not (F_q)^2
        let g4 = make_opp_group(4).unwrap();
        assert_eq!(g4.order_census(), BTreeMap::from([(1, 1), (2, 3), (4, 12)]));
        let g3 = make_opp_group(3).unwrap();
        assert_eq!(g3.order_census(), BTreeMap::from([(1, 1), (3, 8)]));
    }

    #[test]
    fn subgroups_and_cosets() {
        let z21 = make_cyclic(21).unwrap();
        let h = subgroup(&z21, &[3]).unwrap();
        assert_eq!(h.members(), &[0, 3, 6, 9, 12, 15, 18]);
        assert_eq!(h.index(), 3);
        assert_eq!(h.coset_rep(20), 2);
        assert_eq!(subgroup(&z21, &[7]).unwrap().members(), &[0, 7, 14]);
        let z7 = make_cyclic(7).unwrap();
        let t = subgroup(&z7, &[0]).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.index(), 7);
        assert_eq!(subgroup(&z7, &[9]).unwrap_err(), GroupError::NoSuchElement(9));
    }

    #[test]
    fn klein_four() {
        let v = make_abelian(&[2, 2]).unwrap();
        assert_eq!(v.mul(2, 1), 3);
        assert_eq!(v.label(3), "(1,1)");
        assert!(v.check_axioms());
    }

    #[test]
    fn descriptor_json() {
        let d = make_cyclic(21).unwrap().descriptor().clone();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"kind":"cyclic","params":{"m":21}}"#);
        let back: GroupDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
