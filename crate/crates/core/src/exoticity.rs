//! The σ ∉ Q₀ test on the Singer link: Q₀ is the group induced on the
//! neighbourhood Λ of the point 0 by link automorphisms fixing that point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::linkgraph::{graph_automorphisms, LinkGraph};
use crate::permgrp::{PermError, PermGroup, Permutation};
use crate::singer::{OrbitKappa, SingerDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExoticError {
    #[error("|Q0| = {got}, expected {expected}")]
    OrderMismatch { expected: BigUint, got: BigUint },
    #[error("neighbourhood of the base point is not the line copy of S")]
    NeighbourhoodMismatch,
    #[error("a side-swapping automorphism fixes the base point")]
    SwapInStabilizer,
    #[error("no length-3 orbit has minimum {0}")]
    UnknownOrbit(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone)]
pub struct ExoticProbe {
    pub datum: SingerDatum,
    pub link: LinkGraph,
    /// Point-side vertex of 0 ∈ G.
    pub v1: usize,
    /// Line-side vertices n + s, s ∈ S, in increasing order.
    pub lambda_set: Vec<usize>,
    pub aut_order: BigUint,
    /// Acts on positions in `lambda_set`.
    pub q0: PermGroup,
}

/// e(q−1)q(q+1).
pub fn expected_q0_order(q: u64, e: usize) -> BigUint {
    BigUint::from(e) * BigUint::from(q - 1) * BigUint::from(q) * BigUint::from(q + 1)
}

pub fn build_probe(d: &SingerDatum) -> Result<ExoticProbe, ExoticError> {
    let link = LinkGraph::from_f(&d.f_set());
    let n = link.n();
    let v1 = 0;
    let lambda_set: Vec<usize> = d.s.iter().map(|&s| n + s).collect();
    if link.neighbors(v1) != lambda_set.as_slice() {
        return Err(ExoticError::NeighbourhoodMismatch);
    }
    let aut = graph_automorphisms(&link);
    let stab = aut.stabilizer(v1);
    if stab.strong_generators().iter().any(|g| (0..n).any(|v| g.apply(v) >= n)) {
        return Err(ExoticError::SwapInStabilizer);
    }
    let q0 = stab.restrict(&lambda_set)?;
    let expected = expected_q0_order(d.q, d.e);
    if q0.order() != &expected {
        return Err(ExoticError::OrderMismatch { expected, got: q0.order().clone() });
    }
    Ok(ExoticProbe { datum: d.clone(), link, v1, lambda_set, aut_order: aut.order().clone(), q0 })
}

/// σ: s ↦ λ^{κ(o(s))}(s) on positions of Λ; λ-fixed points stay fixed.
pub fn sigma_kappa(probe: &ExoticProbe, kappa: &OrbitKappa) -> Result<Permutation, ExoticError> {
    let d = &probe.datum;
    let mins: Vec<usize> = d.three_orbits().iter().map(|o| o[0]).collect();
    if let Some(&bad) = kappa.keys().find(|k| !mins.contains(k)) {
        return Err(ExoticError::UnknownOrbit(bad));
    }
    let images = d
        .s
        .iter()
        .map(|&s| {
            let orbit = d.orbit_of(s).expect("s lies in an orbit");
            let sign = if orbit.len() == 3 { kappa.get(&orbit[0]).copied().unwrap_or(1) } else { 1 };
            let t = if sign < 0 { d.lambda[&d.lambda[&s]] } else { d.lambda[&s] };
            d.s.binary_search(&t).expect("λ preserves S")
        })
        .collect();
    Ok(Permutation::from_images(images)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Exotic,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub q: u64,
    pub kappa: Vec<(usize, i8)>,
    /// Cycles of σ written with the elements of S.
    pub sigma_cycles: String,
    pub member: bool,
    pub verdict: Verdict,
    pub q0_order: String,
}

fn cycles_in_s(sigma: &Permutation, s: &[usize]) -> String {
    let cycles = sigma.cycles();
    if cycles.is_empty() {
        return "()".into();
    }
    cycles
        .iter()
        .map(|c| format!("({})", c.iter().map(|&i| s[i].to_string()).collect::<Vec<_>>().join(",")))
        .collect()
}

/// Exotic when σ ∉ Q₀, otherwise Inconclusive.
pub fn exotic_certificate(probe: &ExoticProbe, kappa: &OrbitKappa) -> Result<Certificate, ExoticError> {
    let sigma = sigma_kappa(probe, kappa)?;
    let member = probe.q0.contains(&sigma)?;
    let full: Vec<(usize, i8)> = probe
        .datum
        .three_orbits()
        .iter()
        .map(|o| (o[0], kappa.get(&o[0]).copied().unwrap_or(1)))
        .collect();
    Ok(Certificate {
        q: probe.datum.q,
        kappa: full,
        sigma_cycles: cycles_in_s(&sigma, &probe.datum.s),
        member,
        verdict: if member { Verdict::Inconclusive } else { Verdict::Exotic },
        q0_order: probe.q0.order().to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub q: u64,
    pub e: usize,
    pub r: u64,
    /// 2^R − e(q−1)q(q+1).
    pub exotic_kappa_lower: BigInt,
    /// exotic_kappa_lower / (2e(q−1)²q³(q+1)).
    pub qi_class_lower: BigRational,
    pub vacuous: bool,
}

impl Bounds {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "e": self.e,
            "r": self.r,
            "exotic_kappa_lower": self.exotic_kappa_lower.to_string(),
            "qi_class_lower": self.qi_class_lower.to_string(),
            "vacuous": self.vacuous,
        })
    }
}

pub fn theomain_bounds(q: u64, e: usize) -> Bounds {
    let r = crate::singer::r_of_q(q);
    let big = |x: u64| BigInt::from(x);
    let two_r = BigInt::one() << r as usize;
    let norm = big(e as u64) * big(q - 1) * big(q) * big(q + 1);
    let lower = two_r - norm;
    let denom = big(2) * big(e as u64) * big(q - 1).pow(2) * big(q).pow(3) * big(q + 1);
    let qi = BigRational::new(lower.clone(), denom);
    let vacuous = !lower.is_positive();
    Bounds { q, e, r, exotic_kappa_lower: lower, qi_class_lower: qi, vacuous }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singer::singer_datum;

    #[test]
    fn probe_two() {
        let d = singer_datum(2, None).unwrap();
        let p = build_probe(&d).unwrap();
        assert_eq!(p.q0.order_u64(), Some(6));
        assert_eq!(p.aut_order, 336u32.into());
        let s = sigma_kappa(&p, &d.constant_kappa(1)).unwrap();
        assert_eq!(s.images(), &[1, 2, 0]);
        let c = exotic_certificate(&p, &d.constant_kappa(-1)).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.sigma_cycles, "(1,4,2)");
    }

    #[test]
    fn quad_lambda_cycle() {
        let d = singer_datum(4, None).unwrap();
        let p = build_probe(&d).unwrap();
        assert_eq!(p.q0.order_u64(), Some(120));
        let c = exotic_certificate(&p, &OrbitKappa::new()).unwrap();
        assert_eq!(c.sigma_cycles, "(9,15,18)");
    }

    #[test]
    fn bounds() {
        let b = theomain_bounds(2, 1);
        assert_eq!(b.exotic_kappa_lower, BigInt::from(-4));
        assert!(b.vacuous);
        assert_eq!(theomain_bounds(3, 1).exotic_kappa_lower, BigInt::from(-22));
        let b = theomain_bounds(64, 6);
        assert_eq!(b.exotic_kappa_lower, BigInt::from(524672));
        assert!(!b.vacuous);
        assert_eq!(
            b.qi_class_lower,
            BigRational::new(524672.into(), BigInt::from(2u64 * 6 * 63 * 63 * 64 * 64 * 64 * 65))
        );
    }
}
