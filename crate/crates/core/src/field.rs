//! Exact arithmetic in `F_{p^e}`.
//!
//! A field is represented as `F_p[s] / (modulus)` where the modulus is the
//! canonical irreducible polynomial of degree `e`: the monic irreducible whose
//! coefficient tuple `(a_{e-1}, ..., a_0)` is lexicographically smallest. For
//! `e = 1` the modulus is the placeholder `x`. Because the modulus is a function
//! of `(p, e)` alone, two fields with the same `(p, e)` are interchangeable.
//!
//! Elements are ordered canonically by their *index*
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`, which is the lexicographic order on
//! `(c_{e-1}, ..., c_0)`. "Smallest" always refers to this order.

use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use crate::arith::{self, gcd, inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::poly::Poly;

pub(crate) type Coeffs = SmallVec<[u64; 8]>;

/// Immutable description of `F_{p^e}`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus, ascending coefficients, length `e + 1`.
    modulus: Vec<u64>,
    /// `-modulus[j] mod p` for `j < e`, the reduction rule for `s^e`.
    neg_tail: Vec<u64>,
    /// `p < 2^32`: products can be accumulated in `u128` without reduction.
    lazy: bool,
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    pub(crate) fn raw_zero(&self) -> Coeffs {
        smallvec![0; self.e as usize]
    }

    pub(crate) fn raw_one(&self) -> Coeffs {
        let mut c = self.raw_zero();
        c[0] = 1;
        c
    }

    pub(crate) fn raw_is_zero(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub(crate) fn raw_is_one(a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    pub(crate) fn raw_add(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let p = self.p;
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let s = x as u128 + y as u128;
                (if s >= p as u128 { s - p as u128 } else { s }) as u64
            })
            .collect()
    }

    pub(crate) fn raw_neg(&self, a: &[u64]) -> Coeffs {
        a.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect()
    }

    pub(crate) fn raw_sub(&self, a: &[u64], b: &[u64]) -> Coeffs {
        self.raw_add(a, &self.raw_neg(b))
    }

    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let p = self.p;
        let e = self.e as usize;
        if e == 1 {
            return smallvec![mul_mod(a[0], b[0], p)];
        }
        if self.lazy {
            let mut acc: SmallVec<[u128; 16]> = smallvec![0; 2 * e - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    acc[i + j] += x as u128 * y as u128;
                }
            }
            for k in (e..2 * e - 1).rev() {
                let c = (acc[k] % p as u128) as u64;
                if c != 0 {
                    for (j, &t) in self.neg_tail.iter().enumerate() {
                        acc[k - e + j] += c as u128 * t as u128;
                    }
                }
            }
            acc[..e].iter().map(|&v| (v % p as u128) as u64).collect()
        } else {
            let mut acc: SmallVec<[u64; 16]> = smallvec![0; 2 * e - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    acc[i + j] = (acc[i + j] as u128 + mul_mod(x, y, p) as u128)
                        .rem_euclid(p as u128) as u64;
                }
            }
            for k in (e..2 * e - 1).rev() {
                let c = acc[k];
                if c != 0 {
                    for (j, &t) in self.neg_tail.iter().enumerate() {
                        acc[k - e + j] = ((acc[k - e + j] as u128 + mul_mod(c, t, p) as u128)
                            % p as u128) as u64;
                    }
                }
            }
            acc[..e].iter().copied().collect()
        }
    }

    pub(crate) fn raw_pow(&self, a: &[u64], mut exp: u64) -> Coeffs {
        let mut base: Coeffs = a.iter().copied().collect();
        let mut acc = self.raw_one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.raw_mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.raw_mul(&base, &base);
            }
        }
        acc
    }

    pub(crate) fn raw_inv(&self, a: &[u64]) -> Result<Coeffs> {
        if Self::raw_is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        if self.e == 1 {
            return Ok(smallvec![inv_mod(a[0], self.p).expect("nonzero residue mod prime")]);
        }
        Ok(self.raw_pow(a, self.q - 2))
    }

    pub(crate) fn raw_from_index(&self, mut idx: u64) -> Coeffs {
        let mut c = self.raw_zero();
        for slot in c.iter_mut() {
            *slot = idx % self.p;
            idx /= self.p;
        }
        c
    }

    pub(crate) fn raw_index(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    /// Advances `a` to the element with the next index (odometer order).
    pub(crate) fn raw_increment(&self, a: &mut [u64]) {
        for c in a.iter_mut() {
            *c += 1;
            if *c < self.p {
                return;
            }
            *c = 0;
        }
    }
}

/// Shared handle to a [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p == other.p && self.e == other.e)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.e)
        }
    }
}

/// Builds `F_{p^e}` with its canonical modulus.
pub fn make_field(p: u64, e: u32) -> Result<Field> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 {
        return Err(Error::InvalidDegree);
    }
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= 1u64 << 63)
        .ok_or(Error::FieldTooLarge { p, e })?;
    let modulus = if e == 1 { vec![0, 1] } else { canonical_modulus(p, e)? };
    let neg_tail = modulus[..e as usize]
        .iter()
        .map(|&c| if c == 0 { 0 } else { p - c })
        .collect();
    Ok(Field(Arc::new(FieldSpec {
        p,
        e,
        q,
        modulus,
        neg_tail,
        lazy: p < 1 << 32,
    })))
}

fn canonical_modulus(p: u64, e: u32) -> Result<Vec<u64>> {
    let prime = make_field(p, 1)?;
    // The lower coefficients (a_0, ..., a_{e-1}) read as base-p digits of
    // `idx` give exactly the lexicographic order on (a_{e-1}, ..., a_0).
    let mut digits = vec![0u64; e as usize];
    loop {
        let mut coeffs: Vec<u64> = digits.clone();
        coeffs.push(1);
        // A zero constant term means x divides the candidate.
        if coeffs[0] != 0 && Poly::from_u64s(&prime, &coeffs).is_irreducible()? {
            return Ok(coeffs);
        }
        let mut k = 0;
        loop {
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
            k += 1;
            if k == digits.len() {
                return Err(Error::InvariantViolated(format!(
                    "no irreducible of degree {e} over F_{p}"
                )));
            }
        }
    }
}

impl Field {
    pub fn zero(&self) -> FieldElement {
        FieldElement::from_raw(self, self.raw_zero())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_raw(self, self.raw_one())
    }

    /// The image of an integer under `Z -> F_p -> F_{p^e}`.
    pub fn from_i64(&self, n: i64) -> FieldElement {
        let mut c = self.raw_zero();
        c[0] = n.rem_euclid(self.p as i64) as u64;
        FieldElement::from_raw(self, c)
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        let mut c = self.raw_zero();
        c[0] = n % self.p;
        FieldElement::from_raw(self, c)
    }

    /// Element with the given ascending coefficients in the generator `s`.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.e as usize {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.e
            )));
        }
        let mut c = self.raw_zero();
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v.rem_euclid(self.p as i64) as u64;
        }
        Ok(FieldElement::from_raw(self, c))
    }

    pub fn from_index(&self, idx: u64) -> FieldElement {
        FieldElement::from_raw(self, self.raw_from_index(idx % self.q))
    }

    /// The class of `s`, i.e. a root of the modulus (equals zero for prime fields).
    pub fn generator(&self) -> FieldElement {
        let mut c = self.raw_zero();
        if self.e > 1 {
            c[1] = 1;
        }
        FieldElement::from_raw(self, c)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }
}

#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    c: Coeffs,
}

impl FieldElement {
    pub(crate) fn from_raw(field: &Field, c: Coeffs) -> Self {
        debug_assert_eq!(c.len(), field.e as usize);
        FieldElement {
            field: field.clone(),
            c,
        }
    }

    pub(crate) fn raw(&self) -> &Coeffs {
        &self.c
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Ascending coefficients in the generator, each in `[0, p)`.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn index(&self) -> u64 {
        self.field.raw_index(&self.c)
    }

    pub fn is_zero(&self) -> bool {
        FieldSpec::raw_is_zero(&self.c)
    }

    pub fn is_one(&self) -> bool {
        FieldSpec::raw_is_one(&self.c)
    }

    /// The residue in `[0, p)` when the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u64> {
        self.c[1..].iter().all(|&c| c == 0).then_some(self.c[0])
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields {
                left: self.field.to_string(),
                right: other.field.to_string(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_raw(&self.field, self.field.raw_add(&self.c, &other.c)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_raw(&self.field, self.field.raw_sub(&self.c, &other.c)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_raw(&self.field, self.field.raw_mul(&self.c, &other.c)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let inv = self.field.raw_inv(&other.c)?;
        Ok(Self::from_raw(&self.field, self.field.raw_mul(&self.c, &inv)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self::from_raw(&self.field, self.field.raw_inv(&self.c)?))
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self::from_raw(&self.field, self.field.raw_pow(&self.c, exp))
    }

    pub fn pow_big(&self, exp: &BigUint) -> Self {
        let mut acc = self.field.one();
        for i in (0..exp.bits()).rev() {
            acc = &acc * &acc;
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// `x -> x^p`, the absolute Frobenius.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p)
    }

    /// True iff `self` is a `k`-th power in its field (zero included).
    pub fn is_kth_power(&self, k: u64) -> Result<bool> {
        if k == 0 {
            return Err(Error::NonPositiveExponent);
        }
        if self.is_zero() {
            return Ok(true);
        }
        let q1 = self.field.q - 1;
        Ok(self.pow(q1 / gcd(k, q1)).is_one())
    }

    /// Norm down to the subfield `target` (which must have the same
    /// characteristic and a degree dividing ours).
    pub fn norm_to_subfield(&self, target: &Field) -> Result<FieldElement> {
        let emb = Embedding::new(target, &self.field)?;
        let k = self.field.e / target.e;
        let mut acc = self.field.one();
        let mut conj = self.clone();
        for _ in 0..k {
            acc = &acc * &conj;
            conj = conj.pow(target.q);
        }
        emb.restrict(&acc)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.e.hash(state);
        self.c.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "s")?,
                (1, c) => write!(f, "{c}s")?,
                (i, 1) => write!(f, "s^{i}")?,
                (i, c) => write!(f, "{c}s^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field elements from different fields")
            }
        }

        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement::from_raw(&self.field, self.field.raw_neg(&self.c))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Deterministic element of exact multiplicative order `ell`: the smallest in
/// canonical order.
pub fn primitive_root_of_unity(field: &Field, ell: u64) -> Result<FieldElement> {
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let q1 = field.q - 1;
    if !q1.is_multiple_of(ell) {
        return Err(Error::NoRootOfUnity { ell, q: field.q });
    }
    let cofactor = q1 / ell;
    for idx in 2..field.q {
        let w = field.from_index(idx).pow(cofactor);
        if !w.is_one() {
            // `w` has order ell, and its powers are all such roots.
            let mut best = w.clone();
            let mut cur = w.clone();
            for _ in 2..ell {
                cur = &cur * &w;
                if cur.index() < best.index() {
                    best = cur.clone();
                }
            }
            return Ok(best);
        }
    }
    Err(Error::InvariantViolated("multiplicative group has no generator".into()))
}

/// Field embedding `F_{p^a} -> F_{p^b}` with `a | b`, sending the generator
/// of the subfield to the smallest root of its modulus in the ambient field.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub: Field,
    ambient: Field,
    gen_image: FieldElement,
    /// Images of `1, g, ..., g^{a-1}`.
    basis: Vec<FieldElement>,
}

impl Embedding {
    pub fn new(sub: &Field, ambient: &Field) -> Result<Self> {
        if sub.p != ambient.p {
            return Err(Error::MixedFields {
                left: sub.to_string(),
                right: ambient.to_string(),
            });
        }
        if !ambient.e.is_multiple_of(sub.e) {
            return Err(Error::DegreeNotDividing {
                sub: sub.e,
                ambient: ambient.e,
            });
        }
        let gen_image = if sub.e == 1 {
            ambient.zero()
        } else if sub == ambient {
            ambient.generator()
        } else {
            let modulus = Poly::from_u64s(ambient, sub.modulus());
            modulus
                .roots()?
                .into_iter()
                .next()
                .ok_or_else(|| Error::InvariantViolated("subfield modulus has no root".into()))?
        };
        let mut basis = Vec::with_capacity(sub.e as usize);
        let mut cur = ambient.one();
        for _ in 0..sub.e {
            basis.push(cur.clone());
            cur = &cur * &gen_image;
        }
        Ok(Embedding {
            sub: sub.clone(),
            ambient: ambient.clone(),
            gen_image,
            basis,
        })
    }

    pub fn sub(&self) -> &Field {
        &self.sub
    }

    pub fn ambient(&self) -> &Field {
        &self.ambient
    }

    pub fn generator_image(&self) -> &FieldElement {
        &self.gen_image
    }

    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        debug_assert!(x.field == self.sub);
        let mut acc = self.ambient.zero();
        for (b, &c) in self.basis.iter().zip(x.coeffs()) {
            if c != 0 {
                acc = &acc + &(b * &self.ambient.from_u64(c));
            }
        }
        acc
    }

    /// Inverse of [`Self::embed`] on its image.
    pub fn restrict(&self, y: &FieldElement) -> Result<FieldElement> {
        let p = self.sub.p;
        let a = self.sub.e as usize;
        let b = self.ambient.e as usize;
        // Solve sum_i c_i basis_i = y over F_p: b equations, a unknowns.
        let mut rows: Vec<Vec<u64>> = (0..b)
            .map(|r| {
                let mut row: Vec<u64> = self.basis.iter().map(|v| v.coeffs()[r]).collect();
                row.push(y.coeffs()[r]);
                row
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for col in 0..a {
            let Some(pr) = (r..b).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = inv_mod(rows[r][col], p).expect("nonzero pivot");
            for v in rows[r].iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
            for i in 0..b {
                if i != r && rows[i][col] != 0 {
                    let f = rows[i][col];
                    for j in 0..=a {
                        let t = mul_mod(f, rows[r][j], p);
                        rows[i][j] = (rows[i][j] + p - t) % p;
                    }
                }
            }
            pivot_cols.push(col);
            r += 1;
        }
        if rows[r..].iter().any(|row| row[a] != 0) {
            return Err(Error::NotInSubfield {
                p: self.sub.p,
                e: self.sub.e,
            });
        }
        let mut c = self.sub.raw_zero();
        for (i, &col) in pivot_cols.iter().enumerate() {
            c[col] = rows[i][a];
        }
        Ok(FieldElement::from_raw(&self.sub, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.q(), 5);
        assert_eq!(f5.modulus(), &[0, 1]);
        let f25 = make_field(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[2, 0, 1]);
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(5, 0).unwrap_err(), Error::InvalidDegree);
        assert!(matches!(make_field(3, 40), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn canonical_modulus_matches_enumeration() {
        // Oracle: first monic quadratic in canonical order with no root.
        let f5 = make_field(5, 1).unwrap();
        let mut expected = None;
        'outer: for a1 in 0..5i64 {
            for a0 in 0..5i64 {
                let has_root = f5.elements().any(|x| {
                    let v = &(&x * &x) + &(&(&f5.from_i64(a1) * &x) + &f5.from_i64(a0));
                    v.is_zero()
                });
                if !has_root {
                    expected = Some(vec![a0 as u64, a1 as u64, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(make_field(5, 2).unwrap().modulus(), expected.unwrap().as_slice());
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.from_u64(2).inv().unwrap(), f5.from_u64(3));
        let f25 = make_field(5, 2).unwrap();
        let zeta = f25.from_coeffs(&[2, 1]).unwrap();
        assert!(zeta.pow(3).is_one());
        let zeta_inv = f25.from_coeffs(&[2, 4]).unwrap();
        assert!((&zeta * &zeta_inv).is_one());
        assert_eq!(f5.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert!(matches!(f5.one().try_add(&f25.one()), Err(Error::MixedFields { .. })));
        assert_eq!(zeta.to_string(), "2+s");
    }

    #[test]
    fn roots_of_unity() {
        let f25 = make_field(5, 2).unwrap();
        assert_eq!(
            primitive_root_of_unity(&f25, 3).unwrap(),
            f25.from_coeffs(&[2, 1]).unwrap()
        );
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(
            primitive_root_of_unity(&f5, 3).unwrap_err(),
            Error::NoRootOfUnity { ell: 3, q: 5 }
        );
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(primitive_root_of_unity(&f7, 3).unwrap(), f7.from_u64(2));
    }

    #[test]
    fn norms() {
        let f5 = make_field(5, 1).unwrap();
        let f25 = make_field(5, 2).unwrap();
        let zeta = primitive_root_of_unity(&f25, 3).unwrap();
        assert!(zeta.norm_to_subfield(&f5).unwrap().is_one());
        let a = &f25.one() + &(&f25.from_u64(3) * &zeta);
        assert_eq!(a.norm_to_subfield(&f5).unwrap(), f5.from_u64(2));
        assert_eq!(f5.from_u64(4).norm_to_subfield(&f5).unwrap(), f5.from_u64(4));
        let f125 = make_field(5, 3).unwrap();
        assert!(matches!(
            f125.one().norm_to_subfield(&f25),
            Err(Error::DegreeNotDividing { .. })
        ));
    }

    #[test]
    fn kth_powers() {
        let f5 = make_field(5, 1).unwrap();
        assert!(!f5.from_u64(2).is_kth_power(2).unwrap());
        assert!(f5.from_u64(4).is_kth_power(2).unwrap());
        assert!(f5.zero().is_kth_power(7).unwrap());
        assert_eq!(f5.one().is_kth_power(0).unwrap_err(), Error::NonPositiveExponent);
    }

    #[test]
    fn embedding_round_trip() {
        let f9 = make_field(3, 2).unwrap();
        let f81 = make_field(3, 4).unwrap();
        let emb = Embedding::new(&f9, &f81).unwrap();
        for x in f9.elements() {
            for y in f9.elements() {
                assert_eq!(emb.embed(&(&x * &y)), &emb.embed(&x) * &emb.embed(&y));
            }
            assert_eq!(emb.restrict(&emb.embed(&x)).unwrap(), x);
        }
        assert!(emb.restrict(&f81.generator()).is_err());
    }
}
