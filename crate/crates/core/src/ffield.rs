//! Exact arithmetic in GF(p^e).
//!
//! Elements are dense coefficient vectors over the prime field, reduced modulo a
//! monic irreducible polynomial. Cubic (and sextic) extensions used by the Singer
//! constructions are built directly as extensions of the prime field; the smaller
//! field embeds through [`SubfieldEmbedding`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial {0:?} is reducible over GF({1})")]
    ReduciblePolynomial(Vec<u64>, u64),
    #[error("polynomial {0:?} is not primitive over GF({1})")]
    NotPrimitive(Vec<u64>, u64),
    #[error("modulus must be monic of degree {degree} with coefficients below {p}, got {modulus:?}")]
    BadModulus { modulus: Vec<u64>, degree: usize, p: u64 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} is too large")]
    TooLarge { p: u64, e: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("GF({order}) is not a cubic extension of GF({q})")]
    DegreeMismatch { order: u64, q: u64 },
    #[error("zero has no multiplicative order")]
    ZeroElement,
}

pub type Field = Arc<FieldSpec>;

/// GF(p^e) presented as GF(p)[x] / (modulus).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    e: usize,
    /// Monic, low-to-high, length e + 1.
    modulus: Vec<u64>,
    order: u64,
    x_is_primitive: bool,
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    /// Number of elements, p^e.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Whether the class of x generates the multiplicative group.
    pub fn x_is_primitive(&self) -> bool {
        self.x_is_primitive
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) = GF({})[x]/({})", self.order, self.p, format_poly(&self.modulus))
    }
}

/// Renders a low-to-high coefficient list as a polynomial in x.
pub fn format_poly(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power q into (p, e). Returns `None` for anything else.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = prime_factors(q)[0];
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn checked_pow(p: u64, e: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
    }
    // keep N - 1 and products of two residues comfortably inside u64
    (acc < (1u64 << 62)).then_some(acc)
}

fn pow_mod_u64(mut b: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        k >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod_u64(a, p - 2, p)
}

/// Smallest generator of GF(p)^x.
pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&r| pow_mod_u64(g, (p - 1) / r, p) != 1))
        .expect("every prime field has a primitive root")
}

// ---- raw polynomial arithmetic over GF(p), low-to-high ----

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// a * b mod (modulus, p); operands have length `deg`.
fn mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * deg.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (deg..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        // modulus is monic: x^deg = -(lower terms)
        for t in 0..deg {
            let sub = c * modulus[t] % p;
            prod[k - deg + t] = (prod[k - deg + t] + p - sub) % p;
        }
        prod[k] = 0;
    }
    prod.truncate(deg);
    prod
}

fn powmod(base: &[u64], mut k: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let deg = modulus.len() - 1;
    let mut result = vec![0u64; deg];
    result[0] = 1 % p;
    let mut b = base.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            result = mulmod(&result, &b, modulus, p);
        }
        k >>= 1;
        if k > 0 {
            b = mulmod(&b, &b, modulus, p);
        }
    }
    result
}

fn x_poly(deg: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0u64; deg];
    if deg == 1 {
        // x reduced modulo x - c is c; only used with modulus x, where it is 0
        v[0] = 0;
    } else {
        v[1] = 1 % p;
    }
    v
}

/// Remainder of a by b (b nonzero, trimmed).
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (t, &bt) in b.iter().enumerate() {
            let sub = c * bt % p;
            r[shift + t] = (r[shift + t] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Irreducibility via gcd(f, x^{p^i} - x) = 1 for 1 <= i <= deg/2.
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    if deg == 1 {
        return true;
    }
    if modulus[0] == 0 {
        return false;
    }
    let x = x_poly(deg, p);
    let mut frob = x.clone();
    for _ in 1..=deg / 2 {
        frob = powmod(&frob, p, modulus, p);
        let mut diff = frob.clone();
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        let g = poly_gcd(modulus, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn x_has_full_order(modulus: &[u64], p: u64, order: u64) -> bool {
    let deg = modulus.len() - 1;
    if deg == 1 {
        // class of x is -modulus[0]
        let g = (p - modulus[0] % p) % p;
        if g == 0 {
            return false;
        }
        return prime_factors(p - 1).iter().all(|&r| p == 2 || pow_mod_u64(g, (p - 1) / r, p) != 1);
    }
    let n = order - 1;
    let x = x_poly(deg, p);
    let mut one = vec![0u64; deg];
    one[0] = 1;
    if powmod(&x, n, modulus, p) != one {
        return false;
    }
    prime_factors(n).iter().all(|&r| powmod(&x, n / r, modulus, p) != one)
}

fn eval_poly_at(poly: &[u64], point: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let deg = modulus.len() - 1;
    let mut acc = vec![0u64; deg];
    for &c in poly.iter().rev() {
        acc = mulmod(&acc, point, modulus, p);
        acc[0] = (acc[0] + c) % p;
    }
    acc
}

fn modulus_cache() -> &'static Mutex<HashMap<(u64, usize), Vec<u64>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Vec<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The default modulus of GF(p^n).
///
/// Degree 1 is the prime field with modulus x. Otherwise: the smallest
/// primitive polynomial, in the order where the coefficient list is read as
/// base-p digits with the constant term least significant, whose root x
/// satisfies x^((p^n-1)/(p^d-1)) = root of the default modulus of degree d for
/// every proper divisor d of n (degree 1 uses the smallest primitive root).
/// The subfield condition makes the default fields nest compatibly.
pub fn default_modulus(p: u64, n: usize) -> Result<Vec<u64>, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if n == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if n == 1 {
        return Ok(vec![0, 1]);
    }
    if let Some(m) = modulus_cache().lock().unwrap().get(&(p, n)) {
        return Ok(m.clone());
    }
    let order = checked_pow(p, n).ok_or(FieldError::TooLarge { p, e: n })?;
    let divisors: Vec<usize> = (1..n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut sub_moduli = Vec::new();
    for &d in &divisors {
        let sub = if d == 1 { Vec::new() } else { default_modulus(p, d)? };
        let sub_order = checked_pow(p, d).expect("subfield smaller than field");
        sub_moduli.push((d, sub, (order - 1) / (sub_order - 1)));
    }
    let g = smallest_primitive_root(p);
    let x = x_poly(n, p);
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    let found = 'search: loop {
        // increment the base-p counter formed by coeffs[0..n]
        let mut i = 0;
        loop {
            if i == n {
                unreachable!("a primitive polynomial always exists");
            }
            coeffs[i] += 1;
            if coeffs[i] == p {
                coeffs[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        if coeffs[0] == 0 {
            continue;
        }
        let compatible = sub_moduli.iter().all(|(d, sub, exp)| {
            let r = powmod(&x, *exp, &coeffs, p);
            if *d == 1 {
                r[0] == g && r[1..].iter().all(|&c| c == 0)
            } else {
                eval_poly_at(sub, &r, &coeffs, p).iter().all(|&c| c == 0)
            }
        });
        if compatible && x_has_full_order(&coeffs, p, order) {
            break 'search coeffs.clone();
        }
    };
    modulus_cache().lock().unwrap().insert((p, n), found.clone());
    Ok(found)
}

/// Builds GF(p^e). With `modulus = None` the default modulus is used.
/// A supplied modulus must be monic of degree e and irreducible; with
/// `require_primitive` its root must also generate the multiplicative group.
pub fn make_field(
    p: u64,
    e: usize,
    modulus: Option<&[u64]>,
    require_primitive: bool,
) -> Result<Field, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let order = checked_pow(p, e).ok_or(FieldError::TooLarge { p, e })?;
    let modulus = match modulus {
        None => default_modulus(p, e)?,
        Some(m) => {
            if m.len() != e + 1 || m[e] != 1 || m.iter().any(|&c| c >= p) {
                return Err(FieldError::BadModulus { modulus: m.to_vec(), degree: e, p });
            }
            if !is_irreducible(m, p) {
                return Err(FieldError::ReduciblePolynomial(m.to_vec(), p));
            }
            m.to_vec()
        }
    };
    let x_is_primitive = x_has_full_order(&modulus, p, order);
    if require_primitive && !x_is_primitive && e > 1 {
        return Err(FieldError::NotPrimitive(modulus, p));
    }
    Ok(Arc::new(FieldSpec { p, e, modulus, order, x_is_primitive }))
}

/// Element of a [`FieldSpec`].
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.coeffs))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.coeffs))
    }
}

impl FieldElement {
    pub fn zero(field: &Field) -> Self {
        Self { field: field.clone(), coeffs: vec![0; field.e] }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    /// Class of x in GF(p)[x]/(modulus). For the prime field this is 0.
    pub fn generator(field: &Field) -> Self {
        Self { field: field.clone(), coeffs: x_poly(field.e, field.p) }
    }

    pub fn from_int(field: &Field, c: u64) -> Self {
        let mut coeffs = vec![0; field.e];
        coeffs[0] = c % field.p;
        Self { field: field.clone(), coeffs }
    }

    /// Coefficients are reduced mod p; missing high coefficients are zero.
    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Self {
        assert!(coeffs.len() <= field.e, "too many coefficients for GF({})", field.order);
        let mut c = vec![0; field.e];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v % field.p;
        }
        Self { field: field.clone(), coeffs: c }
    }

    /// The element whose coefficients are the base-p digits of `index`.
    pub fn from_index(field: &Field, mut index: u64) -> Self {
        assert!(index < field.order);
        let mut coeffs = vec![0; field.e];
        for c in coeffs.iter_mut() {
            *c = index % field.p;
            index /= field.p;
        }
        Self { field: field.clone(), coeffs }
    }

    pub fn index(&self) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * self.field.p + c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.field.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % p).collect();
        Ok(Self { field: self.field.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.field.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + p - b) % p).collect();
        Ok(Self { field: self.field.clone(), coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let coeffs = mulmod(&self.coeffs, &other.coeffs, &self.field.modulus, self.field.p);
        Ok(Self { field: self.field.clone(), coeffs })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        Self { field: self.field.clone(), coeffs: self.coeffs.iter().map(|&a| (p - a) % p).collect() }
    }

    pub fn pow(&self, k: u64) -> Self {
        let coeffs = powmod(&self.coeffs, k, &self.field.modulus, self.field.p);
        Self { field: self.field.clone(), coeffs }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.field.order - 2))
    }

    /// Whether this element lies in the subfield of order `q`.
    pub fn in_subfield(&self, q: u64) -> bool {
        &self.pow(q) == self
    }

    /// x + x^q + x^{q^2}, the trace onto the subfield of order q of a cubic extension.
    pub fn trace_to_subfield(&self, q: u64) -> Result<Self, FieldError> {
        let order = self.field.order;
        let mismatch = FieldError::DegreeMismatch { order, q };
        let (pq, eq) = prime_power(q).ok_or(mismatch.clone())?;
        if pq != self.field.p || self.field.e != 3 * eq {
            return Err(mismatch);
        }
        let x1 = self.pow(q);
        let x2 = x1.pow(q);
        let t = &(self + &x1) + &x2;
        debug_assert!(t.in_subfield(q));
        Ok(t)
    }

    /// Primitive iff x^((N-1)/r) != 1 for every prime r dividing N - 1.
    pub fn is_primitive(&self) -> Result<bool, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let n = self.field.order - 1;
        if !self.pow(n).is_one() {
            return Ok(false);
        }
        Ok(prime_factors(n).iter().all(|&r| !self.pow(n / r).is_one()))
    }

    pub fn multiplicative_order(&self) -> Result<u64, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let mut ord = self.field.order - 1;
        for r in prime_factors(ord) {
            while ord.is_multiple_of(r) && self.pow(ord / r).is_one() {
                ord /= r;
            }
        }
        Ok(ord)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands belong to different fields")
            }
        }
        impl std::ops::$tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("operands belong to different fields")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

/// All elements of the field in index order.
pub fn elements(field: &Field) -> impl Iterator<Item = FieldElement> + '_ {
    (0..field.order).map(move |i| FieldElement::from_index(field, i))
}

/// The class of x when it is primitive, otherwise the primitive element of smallest index.
pub fn primitive_element(field: &Field) -> FieldElement {
    if field.e > 1 && field.x_is_primitive {
        return FieldElement::generator(field);
    }
    if field.order == 2 {
        return FieldElement::one(field);
    }
    elements(field)
        .skip(1)
        .find(|x| x.is_primitive().unwrap_or(false))
        .expect("finite fields have primitive elements")
}

/// An embedding of a small field into a larger one of the same characteristic,
/// fixed by the image of the small field's generator.
#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    small: Field,
    big: Field,
    image: FieldElement,
}

impl SubfieldEmbedding {
    /// Maps the small generator to x^((N-1)/(n-1)) when that annihilates the
    /// small modulus (true for default moduli), otherwise to the smallest root
    /// of the small modulus in the big field.
    pub fn new(small: &Field, big: &Field) -> Result<Self, FieldError> {
        if small.p != big.p || !big.e.is_multiple_of(small.e) {
            return Err(FieldError::DegreeMismatch { order: big.order, q: small.order });
        }
        let annihilates = |r: &FieldElement| {
            eval_poly_at(&small.modulus, &r.coeffs, &big.modulus, big.p).iter().all(|&c| c == 0)
        };
        let image = if small.e == 1 {
            FieldElement::zero(big)
        } else {
            let exp = (big.order - 1) / (small.order - 1);
            let candidate = FieldElement::generator(big).pow(exp);
            if annihilates(&candidate) {
                candidate
            } else {
                elements(big).find(|r| annihilates(r)).ok_or(FieldError::DegreeMismatch {
                    order: big.order,
                    q: small.order,
                })?
            }
        };
        assert!(annihilates(&image), "embedding image must be a root of the small modulus");
        Ok(Self { small: small.clone(), big: big.clone(), image })
    }

    pub fn embed(&self, a: &FieldElement) -> FieldElement {
        assert!(same_field(a.field(), &self.small));
        if self.small.e == 1 {
            return FieldElement::from_int(&self.big, a.coeffs[0]);
        }
        let coeffs = eval_poly_at(&a.coeffs, &self.image.coeffs, &self.big.modulus, self.big.p);
        FieldElement { field: self.big.clone(), coeffs }
    }

    /// Inverse of [`embed`](Self::embed) on the image; `None` outside it.
    pub fn pull_back(&self, b: &FieldElement) -> Option<FieldElement> {
        elements(&self.small).find(|a| &self.embed(a) == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> Field {
        make_field(2, 3, Some(&[1, 1, 0, 1]), true).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(make_field(2, 3, None, true).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(make_field(2, 1, None, false).unwrap().modulus(), &[0, 1]);
        assert_eq!(default_modulus(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 6).unwrap(), vec![1, 1, 0, 1, 1, 0, 1]);
    }

    #[test]
    fn default_cubic_over_gf3_matches_brute_force() {
        // brute-force oracle: all monic cubics in digit order, irreducible with x of order 26
        let mut found = None;
        'outer: for v in 0..27u64 {
            let m = vec![v % 3, (v / 3) % 3, v / 9, 1];
            if m[0] == 0 {
                continue;
            }
            // irreducible cubic <=> no roots
            if (0..3).any(|r| (m[0] + m[1] * r + m[2] * r * r + r * r * r) % 3 == 0) {
                continue;
            }
            let f = Arc::new(FieldSpec { p: 3, e: 3, modulus: m.clone(), order: 27, x_is_primitive: false });
            let x = FieldElement::generator(&f);
            let mut acc = FieldElement::one(&f);
            for k in 1..=26 {
                acc = &acc * &x;
                if acc.is_one() && k < 26 {
                    continue 'outer;
                }
            }
            // compatibility with GF(3): norm x^13 must be the primitive root 2
            if x.pow(13).coeffs() != [2, 0, 0] {
                continue;
            }
            found = Some(m);
            break;
        }
        assert_eq!(make_field(3, 3, None, true).unwrap().modulus(), found.unwrap().as_slice());
    }

    #[test]
    fn gf8_arithmetic() {
        let f = gf8();
        let a = FieldElement::generator(&f);
        let a2 = a.pow(2);
        assert_eq!(&a * &a2, FieldElement::from_coeffs(&f, &[1, 1, 0]));
        assert!(a.pow(7).is_one());
        let one = FieldElement::one(&f);
        for x in elements(&f) {
            assert_eq!(&x * &one, x);
        }
    }

    #[test]
    fn division_by_zero_and_mixed_fields() {
        let f = gf8();
        assert_eq!(FieldElement::zero(&f).inv(), Err(FieldError::DivisionByZero));
        let g = make_field(3, 2, None, true).unwrap();
        let r = FieldElement::one(&f).checked_add(&FieldElement::one(&g));
        assert_eq!(r, Err(FieldError::MixedFields));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(make_field(4, 1, None, false).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(
            make_field(2, 2, Some(&[1, 0, 1]), false),
            Err(FieldError::ReduciblePolynomial(..))
        ));
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
        assert!(matches!(
            make_field(2, 4, Some(&[1, 1, 1, 1, 1]), true),
            Err(FieldError::NotPrimitive(..))
        ));
        assert!(make_field(2, 4, Some(&[1, 1, 1, 1, 1]), false).is_ok());
    }

    #[test]
    fn traces_over_gf2_and_gf3() {
        let f = gf8();
        assert!(FieldElement::one(&f).trace_to_subfield(2).unwrap().is_one());
        assert!(FieldElement::generator(&f).trace_to_subfield(2).unwrap().is_zero());
        let g27 = make_field(3, 3, None, true).unwrap();
        assert!(FieldElement::one(&g27).trace_to_subfield(3).unwrap().is_zero());
        assert!(matches!(
            FieldElement::one(&f).trace_to_subfield(4),
            Err(FieldError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn primitivity() {
        let f = gf8();
        let a = FieldElement::generator(&f);
        assert!(a.is_primitive().unwrap());
        assert!(!FieldElement::one(&f).is_primitive().unwrap());
        assert!(a.pow(3).is_primitive().unwrap());
        assert_eq!(FieldElement::zero(&f).is_primitive(), Err(FieldError::ZeroElement));
        let g7 = make_field(7, 1, None, false).unwrap();
        assert_eq!(primitive_element(&g7).index(), 3);
    }

    #[test]
    fn trace_zero_count() {
        for q in [2u64, 3, 4, 5] {
            let (p, e) = prime_power(q).unwrap();
            let f = make_field(p, 3 * e, None, true).unwrap();
            let zeros = elements(&f).skip(1).filter(|x| x.trace_to_subfield(q).unwrap().is_zero()).count();
            assert_eq!(zeros as u64, q * q - 1, "q = {q}");
        }
    }

    #[test]
    fn embedding_annihilates_modulus() {
        let small = make_field(2, 2, None, true).unwrap();
        let big = make_field(2, 6, None, true).unwrap();
        let emb = SubfieldEmbedding::new(&small, &big).unwrap();
        for a in elements(&small) {
            for b in elements(&small) {
                assert_eq!(emb.embed(&(&a * &b)), &emb.embed(&a) * &emb.embed(&b));
                assert_eq!(emb.embed(&(&a + &b)), &emb.embed(&a) + &emb.embed(&b));
            }
            assert!(emb.embed(&a).in_subfield(4));
            assert_eq!(emb.pull_back(&emb.embed(&a)), Some(a));
        }
    }
}
