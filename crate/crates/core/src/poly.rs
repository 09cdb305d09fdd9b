//! Univariate polynomials and rational functions over `F_{p^e}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement, FieldSpec};

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_u64s(field: &Field, coeffs: &[u64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field.one())
    }

    pub fn x(field: &Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field().clone();
        Self::new(&field, vec![c])
    }

    /// `x - a`.
    pub fn linear(a: &FieldElement) -> Self {
        let field = a.field().clone();
        Self::new(&field, vec![-a, field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`; only for bookkeeping.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
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
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            &self.field,
            (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect(),
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            &self.field,
            (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect(),
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let field = &self.field;
        let mut out = vec![field.raw_zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = field.raw_mul(a.coeffs(), b.coeffs());
                out[i + j] = field.raw_add(&out[i + j], &prod);
            }
        }
        Ok(Self::new(
            field,
            out.into_iter().map(|c| FieldElement::from_raw(field, c)).collect(),
        ))
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_same(divisor)?;
        let dl = divisor.degree().ok_or(Error::DivisionByZero)?;
        let field = &self.field;
        if self.coeffs.len() <= dl {
            return Ok((Self::zero(field), self.clone()));
        }
        let lc_inv = divisor.coeffs[dl].inv()?;
        let lc_inv = lc_inv.coeffs();
        let div: Vec<&[u64]> = divisor.coeffs.iter().map(|c| c.coeffs()).collect();
        let mut rem: Vec<_> = self.coeffs.iter().map(|c| c.raw().clone()).collect();
        let mut quot = vec![field.raw_zero(); rem.len() - dl];
        for k in (0..quot.len()).rev() {
            if FieldSpec::raw_is_zero(&rem[k + dl]) {
                continue;
            }
            let c = field.raw_mul(&rem[k + dl], lc_inv);
            for (j, d) in div.iter().enumerate().take(dl) {
                if !FieldSpec::raw_is_zero(d) {
                    let t = field.raw_mul(&c, d);
                    rem[k + j] = field.raw_sub(&rem[k + j], &t);
                }
            }
            rem[k + dl] = field.raw_zero();
            quot[k] = c;
        }
        rem.truncate(dl);
        let wrap = |v: Vec<_>| -> Vec<FieldElement> {
            v.into_iter().map(|c| FieldElement::from_raw(field, c)).collect()
        };
        Ok((Self::new(field, wrap(quot)), Self::new(field, wrap(rem))))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divmod(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvariantViolated("inexact polynomial division".into()))
        }
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.field.from_u64(i as u64))
                .collect(),
        )
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Self) -> Result<Self> {
        let base = self.rem(modulus)?;
        let mut acc = Self::one(&self.field).rem(modulus)?;
        for i in (0..exp.bits()).rev() {
            acc = (&acc * &acc).rem(modulus)?;
            if exp.bit(i) {
                acc = (&acc * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    fn pow_mod_u64(&self, exp: u64, modulus: &Self) -> Result<Self> {
        self.pow_mod(&BigUint::from(exp), modulus)
    }

    /// Horner evaluation at an element of this field or of an extension of it.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() == &self.field {
            return Ok(self.eval_same(x));
        }
        let emb = Embedding::new(&self.field, x.field())?;
        Ok(self.embed(&emb).eval_same(x))
    }

    fn eval_same(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Image of the polynomial under a field embedding.
    pub fn embed(&self, emb: &Embedding) -> Self {
        Self::new(
            emb.ambient(),
            self.coeffs.iter().map(|c| emb.embed(c)).collect(),
        )
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_same(inner)?;
        let mut acc = Self::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        Ok(acc)
    }

    /// Canonical index among polynomials of the same degree (coefficients
    /// read as base-q digits, constant term least significant).
    pub fn index(&self) -> u128 {
        let q = self.field.q() as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, c| acc.saturating_mul(q).saturating_add(c.index() as u128))
    }

    fn sort_key(&self) -> (usize, u128) {
        (self.deg(), self.index())
    }

    /// Monic polynomial of degree `d` whose lower coefficients are the base-q
    /// digits of `idx`.
    pub fn monic_from_index(field: &Field, d: usize, mut idx: u128) -> Self {
        let q = field.q() as u128;
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(field.from_index((idx % q) as u64));
            idx /= q;
        }
        coeffs.push(field.one());
        Self::new(field, coeffs)
    }

    /// `x^{q^k} mod self` for `k = 1..=n`, by repeated Frobenius powering.
    fn frobenius_powers(&self, n: usize) -> Result<Vec<Self>> {
        let q = self.field.q();
        let mut out = Vec::with_capacity(n);
        let mut h = Self::x(&self.field).rem(self)?;
        for _ in 0..n {
            h = h.pow_mod_u64(q, self)?;
            out.push(h.clone());
        }
        Ok(out)
    }

    /// Rabin's test: `x^{q^n} = x mod f` and `gcd(x^{q^{n/r}} - x, f) = 1`
    /// for every prime `r | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let powers = f.frobenius_powers(n)?;
        let x = Self::x(&self.field);
        if powers[n - 1] != x {
            return Ok(false);
        }
        for r in arith::prime_divisors(n as u64) {
            let h = &powers[n / r as usize - 1] - &x;
            if !h.gcd(&f)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.deg() == 0 {
            return Ok(true);
        }
        Ok(self.gcd(&self.derivative())?.is_one())
    }

    /// `g` with `g^p = self`; requires every exponent to be a multiple of `p`.
    fn pth_root(&self) -> Self {
        let p = self.field.p() as usize;
        let back = self.field.q() / self.field.p();
        Self::new(
            &self.field,
            self.coeffs.iter().step_by(p).map(|c| c.pow(back)).collect(),
        )
    }

    /// Squarefree decomposition `self = lc * prod g_i^{m_i}` with pairwise
    /// coprime squarefree monic `g_i`, valid in any characteristic.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, usize)>> {
        if self.is_zero() {
            return Err(Error::ConstantPolynomial);
        }
        let mut out = Vec::new();
        sff(&self.monic(), 1, &mut out)?;
        out.sort_by_key(|(g, k)| (*k, g.sort_key()));
        Ok(out)
    }

    /// Distinct roots in the coefficient field, in canonical order.
    pub fn roots(&self) -> Result<Vec<FieldElement>> {
        if self.is_zero() {
            return Err(Error::ConstantPolynomial);
        }
        if self.deg() == 0 {
            return Ok(Vec::new());
        }
        let f = self.monic();
        let x = Self::x(&self.field);
        let xq = x.pow_mod_u64(self.field.q(), &f)?;
        let g = (&xq - &x).gcd(&f)?;
        let mut roots: Vec<FieldElement> = if g.deg() == 0 {
            Vec::new()
        } else {
            g.equal_degree_split(1)?
                .into_iter()
                .map(|lin| -&lin.coeffs[0])
                .collect()
        };
        roots.sort_by_key(|r| r.index());
        Ok(roots)
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self) -> Result<Vec<(Self, usize)>> {
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = Self::x(&self.field);
        let mut h = x.rem(&f)?;
        let mut i = 1;
        while f.deg() >= 2 * i {
            h = h.pow_mod_u64(self.field.q(), &f)?;
            let g = (&h - &x).gcd(&f)?;
            if !g.is_one() {
                f = f.div_exact(&g)?;
                h = h.rem(&f)?;
                out.push((g, i));
            }
            i += 1;
        }
        if f.deg() > 0 {
            let d = f.deg();
            out.push((f, d));
        }
        Ok(out)
    }

    /// Splits a monic squarefree product of irreducibles of degree `d`.
    fn equal_degree_split(&self, d: usize) -> Result<Vec<Self>> {
        let n = self.deg();
        if n == d {
            return Ok(vec![self.clone()]);
        }
        let field = &self.field;
        let q = field.q();
        let odd = field.p() != 2;
        // Deterministic sweep over splitting polynomials of increasing index.
        let mut idx: u128 = q as u128;
        loop {
            let deg = (idx as f64).log(q as f64).floor() as usize;
            if deg >= n {
                return Err(Error::InvariantViolated("equal-degree split failed".into()));
            }
            let a = candidate_poly(field, idx);
            idx += 1;
            let t = if odd {
                // a^{(q^d - 1)/2} = (prod_j a^{q^j})^{(q-1)/2}
                let mut acc = Self::one(field);
                let mut conj = a.rem(self)?;
                for _ in 0..d {
                    acc = (&acc * &conj).rem(self)?;
                    conj = conj.pow_mod_u64(q, self)?;
                }
                &acc.pow_mod_u64((q - 1) / 2, self)? - &Self::one(field)
            } else {
                // Absolute trace to F_2: sum_{j < e d} a^{2^j}.
                let mut acc = Self::zero(field);
                let mut conj = a.rem(self)?;
                for _ in 0..(field.e() as usize * d) {
                    acc = &acc + &conj;
                    conj = (&conj * &conj).rem(self)?;
                }
                acc
            };
            let g = t.gcd(self)?;
            if g.deg() > 0 && g.deg() < n {
                let mut out = g.equal_degree_split(d)?;
                out.extend(self.div_exact(&g)?.equal_degree_split(d)?);
                return Ok(out);
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by degree and canonical index.
    pub fn factor(&self) -> Result<Vec<(Self, usize)>> {
        if self.deg() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let mut out = Vec::new();
        for (s, mult) in self.squarefree_decomposition()? {
            for (g, d) in s.distinct_degree()? {
                for irr in g.equal_degree_split(d)? {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by_key(|(g, k)| (g.sort_key(), *k));
        Ok(out)
    }

    /// Same polynomial viewed over an extension of its coefficient field.
    pub fn map_field(&self, target: &Field) -> Result<Self> {
        Ok(self.embed(&Embedding::new(&self.field, target)?))
    }
}

fn candidate_poly(field: &Field, mut idx: u128) -> Poly {
    let q = field.q() as u128;
    let mut coeffs = Vec::new();
    while idx > 0 {
        coeffs.push(field.from_index((idx % q) as u64));
        idx /= q;
    }
    Poly::new(field, coeffs)
}

fn sff(f: &Poly, scale: usize, out: &mut Vec<(Poly, usize)>) -> Result<()> {
    if f.deg() == 0 {
        return Ok(());
    }
    let p = f.field.p() as usize;
    let w0 = f.derivative();
    if w0.is_zero() {
        return sff(&f.pth_root(), scale * p, out);
    }
    let mut c = f.gcd(&w0)?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.div_exact(&y)?;
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w)?;
    }
    if !c.is_one() {
        sff(&c.pth_root(), scale * p, out)?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let coef = if cs.contains('+') { format!("({cs})") } else { cs };
            match i {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{coef}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomials over different fields")
            }
        }

        impl $trait<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Bound on the number of trial divisors the brute-force oracle may try.
pub const ORACLE_MAX_TRIALS: u128 = 1 << 24;
pub const ORACLE_MAX_DEGREE: usize = 8;

/// Brute-force factorization by trial division with every monic polynomial
/// of degree `<= deg f / 2`. Deliberately naive: it exists to certify the
/// fast algorithms, so it shares none of their machinery.
pub fn factor_oracle(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if n > ORACLE_MAX_DEGREE {
        return Err(Error::OracleBound(format!(
            "degree {n} > {ORACLE_MAX_DEGREE}"
        )));
    }
    let q = f.field().q() as u128;
    let trials: u128 = (1..=n / 2).map(|d| q.pow(d as u32)).sum();
    if trials > ORACLE_MAX_TRIALS {
        return Err(Error::OracleBound(format!(
            "{trials} trial divisors over F_{q}"
        )));
    }
    let field = f.field();
    let mut rem = f.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while 2 * d <= rem.deg() {
        let count = q.pow(d as u32);
        for idx in 0..count {
            let g = Poly::monic_from_index(field, d, idx);
            let mut k = 0;
            loop {
                let (quot, r) = rem.divmod(&g)?;
                if !r.is_zero() {
                    break;
                }
                rem = quot;
                k += 1;
            }
            if k > 0 {
                out.push((g, k));
            }
        }
        d += 1;
    }
    if rem.deg() >= 1 {
        out.push((rem, 1));
    }
    out.sort_by_key(|(g, k)| (g.sort_key(), *k));
    Ok(out)
}

/// Number of distinct irreducible factors of a squarefree polynomial via the
/// nullity of the Berlekamp matrix `Q - I`.
pub fn berlekamp_factor_count(f: &Poly) -> Result<usize> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    let field = f.field();
    let f = f.monic();
    let xq = Poly::x(field).pow_mod_u64(field.q(), &f)?;
    // Row i holds x^{iq} mod f.
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(n);
    let mut cur = Poly::one(field);
    for i in 0..n {
        let mut row: Vec<FieldElement> = (0..n).map(|j| cur.coeff(j)).collect();
        row[i] = &row[i] - &field.one();
        rows.push(row);
        cur = (&cur * &xq).rem(&f)?;
    }
    Ok(n - matrix_rank(rows))
}

fn matrix_rank(mut rows: Vec<Vec<FieldElement>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for i in (rank + 1)..nrows {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] * &inv;
            for j in col..ncols {
                let t = &factor * &rows[rank][j];
                rows[i][j] = &rows[i][j] - &t;
            }
        }
        rank += 1;
    }
    rank
}

fn determinant(mut m: Vec<Vec<FieldElement>>, field: &Field) -> FieldElement {
    let n = m.len();
    let mut det = field.one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return field.zero();
        };
        if pr != col {
            m.swap(pr, col);
            det = -&det;
        }
        let pivot = m[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.inv().expect("nonzero pivot");
        for i in (col + 1)..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] * &inv;
            for j in col..n {
                let t = &factor * &m[col][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    det
}

/// Resultant as the determinant of the Sylvester matrix.
pub fn resultant(f: &Poly, g: &Poly) -> Result<FieldElement> {
    f.check_same(g)?;
    let field = f.field();
    let (Some(n), Some(k)) = (f.degree(), g.degree()) else {
        return Ok(field.zero());
    };
    let size = n + k;
    if size == 0 {
        return Ok(field.one());
    }
    let mut m = vec![vec![field.zero(); size]; size];
    // k shifted copies of f, then n shifted copies of g; highest degree first.
    for r in 0..k {
        for (i, c) in f.coeffs.iter().enumerate() {
            m[r][r + n - i] = c.clone();
        }
    }
    for r in 0..n {
        for (i, c) in g.coeffs.iter().enumerate() {
            m[k + r][r + k - i] = c.clone();
        }
    }
    Ok(determinant(m, field))
}

/// `disc f = (-1)^{n(n-1)/2} lc^{n-2-k} Res(f, f')` with `k = deg f'`.
pub fn discriminant(f: &Poly) -> Result<FieldElement> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        other => return Err(Error::DegreeTooSmall(other.unwrap_or(0))),
    };
    let field = f.field();
    let df = f.derivative();
    let Some(k) = df.degree() else {
        return Ok(field.zero());
    };
    let res = resultant(f, &df)?;
    let lc = f.leading().expect("nonzero").clone();
    let exp = n as i64 - 2 - k as i64;
    let lc_pow = if exp >= 0 {
        lc.pow(exp as u64)
    } else {
        lc.inv()?.pow((-exp) as u64)
    };
    let sign = if (n * (n - 1) / 2) % 2 == 0 {
        field.one()
    } else {
        -&field.one()
    };
    Ok(&(&sign * &lc_pow) * &res)
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`:
/// `(1/d) sum_{c | d} mu(c) q^{d/c}`.
pub fn count_monic_irreducibles(q: u64, d: u64) -> BigUint {
    assert!(d >= 1, "degree must be positive");
    let qb = BigInt::from(q);
    let mut total = BigInt::zero();
    for c in arith::divisors(d) {
        let mu = arith::mobius(c);
        if mu != 0 {
            total += BigInt::from(mu) * num_traits::pow(qb.clone(), (d / c) as usize);
        }
    }
    (total / BigInt::from(d))
        .to_biguint()
        .expect("count is non-negative")
}

/// Rational function `num / den`, kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.check_same(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den)?;
        let (mut num, mut den) = if g.deg() > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        let lc_inv = den.leading().expect("nonzero").inv()?;
        num = num.scale(&lc_inv);
        den = den.scale(&lc_inv);
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let field = p.field().clone();
        RatFunc {
            num: p,
            den: Poly::one(&field),
        }
    }

    pub fn identity(field: &Field) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Self> {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn add_const(&self, c: &FieldElement) -> Result<Self> {
        Self::new(&self.num + &self.den.scale(c), self.den.clone())
    }

    /// `outer(inner(x))`.
    pub fn compose(&self, inner: &RatFunc) -> Result<Self> {
        self.num.check_same(&inner.num)?;
        let d = self.degree();
        let field = self.field();
        let mut a_pows = vec![Poly::one(field)];
        let mut b_pows = vec![Poly::one(field)];
        for i in 1..=d {
            a_pows.push(&a_pows[i - 1] * &inner.num);
            b_pows.push(&b_pows[i - 1] * &inner.den);
        }
        let homogenize = |p: &Poly| -> Poly {
            let mut acc = Poly::zero(field);
            for (i, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &(&a_pows[i] * &b_pows[d - i]).scale(c);
                }
            }
            acc
        };
        let num = homogenize(&self.num);
        let den = homogenize(&self.den);
        if den.is_zero() {
            return Err(Error::DegenerateComposition);
        }
        Self::new(num, den)
    }

    /// Value at `x`; `None` at a pole.
    pub fn eval(&self, x: &FieldElement) -> Result<Option<FieldElement>> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(x)?.try_div(&d)?))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field())
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
