//! Point counts of `Z^m = f(T)` over `F_{q^i}`, the L-polynomial, and the
//! class number `h = L(1)`.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{make_field, Embedding, Field, FieldElement, FieldSpec};
use crate::poly::Poly;
use crate::tower::{build_tower_from, KummerCurve, TowerSpec, DEFAULT_DEGREE_BOUND};

pub const DEFAULT_BUDGET: u128 = 1 << 32;
pub const DEFAULT_DEEP_BUDGET: u128 = 1 << 22;

#[derive(Clone, Debug)]
pub struct ZetaOptions {
    /// Cap on `sum_{i <= g} q^i`, the field elements visited for one curve.
    pub budget: u128,
    pub deep_check: bool,
    /// Cap on `q^i` for a single extra count under `deep_check`.
    pub deep_budget: u128,
    pub threads: Option<usize>,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        ZetaOptions {
            budget: DEFAULT_BUDGET,
            deep_check: false,
            deep_budget: DEFAULT_DEEP_BUDGET,
            threads: None,
        }
    }
}

/// Elements visited to count over `F_{q^i}` for `i = 1..=g`.
pub fn counting_work(q: u64, g: u64) -> u128 {
    let mut total: u128 = 0;
    let mut qi: u128 = 1;
    for _ in 0..g {
        qi = qi.saturating_mul(q as u128);
        total = total.saturating_add(qi);
    }
    total
}

/// Solutions of `y^d = u` in a field of size `big_q`, `u != 0`.
fn roots_of_power(u: &FieldElement, d: u64, big_q: u64) -> u64 {
    let g = arith::gcd(d, big_q - 1);
    if u.pow((big_q - 1) / g).is_one() {
        g
    } else {
        0
    }
}

fn multiplicity(poly: &Poly, t: &FieldElement) -> Result<(u64, Poly)> {
    let lin = Poly::linear(t);
    let mut cur = poly.clone();
    let mut k = 0;
    loop {
        let (quot, rem) = cur.divmod(&lin)?;
        if !rem.is_zero() {
            return Ok((k, cur));
        }
        cur = quot;
        k += 1;
    }
}

fn horner(spec: &FieldSpec, coeffs: &[crate::field::Coeffs], x: &[u64]) -> crate::field::Coeffs {
    let mut acc = spec.raw_zero();
    for c in coeffs.iter().rev() {
        acc = spec.raw_add(&spec.raw_mul(&acc, x), c);
    }
    acc
}

/// Degree-one places of the function field of `Z^m = f` over `F_{q^i}`,
/// from the tame Kummer splitting rule at each rational place of the `T`-line.
pub fn count_degree_one_places(curve: &KummerCurve, i: u32, threads: Option<usize>) -> Result<u64> {
    if i == 0 {
        return Err(Error::InvalidInput("extension degree must be positive".into()));
    }
    let base = curve.f().field();
    let big = make_field(base.p(), base.e() * i)?;
    let emb = Embedding::new(base, &big)?;
    let num = curve.f().num().embed(&emb);
    let den = curve.f().den().embed(&emb);
    let big_q = big.q();
    let m = curve.m();

    let g_m = arith::gcd(m, big_q - 1);
    let exp = (big_q - 1) / g_m;
    let raw_num: Vec<_> = num.coeffs().iter().map(|c| c.raw().clone()).collect();
    let raw_den: Vec<_> = den.coeffs().iter().map(|c| c.raw().clone()).collect();
    let spec: &FieldSpec = &big;

    let branch = |t: &FieldElement| -> Result<u64> {
        let nt = num.eval(t)?;
        let (v, unit) = if nt.is_zero() {
            let (k, rest) = multiplicity(&num, t)?;
            (k, rest.eval(t)?.try_div(&den.eval(t)?)?)
        } else {
            let (k, rest) = multiplicity(&den, t)?;
            (k, nt.try_div(&rest.eval(t)?)?)
        };
        Ok(roots_of_power(&unit, arith::gcd(m, v), big_q))
    };

    const CHUNK: u64 = 1 << 12;
    let chunks = big_q.div_ceil(CHUNK);
    let work = || -> Result<u64> {
        (0..chunks)
            .into_par_iter()
            .map(|c| -> Result<u64> {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(big_q);
                let mut x = spec.raw_from_index(start);
                let mut total = 0u64;
                for _ in start..end {
                    let n = horner(spec, &raw_num, &x);
                    let d = horner(spec, &raw_den, &x);
                    if FieldSpec::raw_is_zero(&n) || FieldSpec::raw_is_zero(&d) {
                        total += branch(&FieldElement::from_raw(&big, x.clone()))?;
                    } else {
                        // f(t) = n/d is an m-th power iff n d^{g-1} is a g-th power.
                        let w = spec.raw_mul(&n, &spec.raw_pow(&d, g_m - 1));
                        if FieldSpec::raw_is_one(&spec.raw_pow(&w, exp)) {
                            total += g_m;
                        }
                    }
                    spec.raw_increment(&mut x);
                }
                Ok(total)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    };
    let finite = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let v_inf = curve.v_infinity();
    let d_inf = arith::gcd(m, v_inf.unsigned_abs());
    let lc = num.leading().expect("nonzero").try_div(den.leading().expect("nonzero"))?;
    Ok(finite + roots_of_power(&lc, d_inf, big_q))
}

/// `L(u) = sum a_i u^i` with `a_0 = 1`, degree `2g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub q: u64,
    pub g: u64,
    pub coeffs: Vec<BigInt>,
}

impl Serialize for LPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

/// Builds `L` from `N_1..N_g` by Newton's identities and the functional
/// equation. Counts beyond `g` must match the resulting predictions.
pub fn l_polynomial(counts: &[u64], g: u64, q: u64) -> Result<LPolynomial> {
    let g_us = g as usize;
    if counts.len() < g_us {
        return Err(Error::InvalidInput(format!(
            "{} counts given, genus {g} needs {g}",
            counts.len()
        )));
    }
    let qb = BigInt::from(q);
    let s: Vec<BigInt> = counts[..g_us]
        .iter()
        .enumerate()
        .map(|(i, &n)| num_traits::pow(qb.clone(), i + 1) + 1 - BigInt::from(n))
        .collect();
    let mut a = vec![BigInt::one()];
    for k in 1..=g_us {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            acc -= &s[i - 1] * &a[k - i];
        }
        let kb = BigInt::from(k);
        if !(&acc % &kb).is_zero() {
            return Err(Error::InvariantViolated(format!(
                "Newton step {k} is not integral"
            )));
        }
        a.push(acc / kb);
    }
    for k in g_us + 1..=2 * g_us {
        let c = num_traits::pow(qb.clone(), k - g_us) * &a[2 * g_us - k];
        a.push(c);
    }
    let l = LPolynomial { q, g, coeffs: a };
    if counts.len() > g_us {
        let predicted = l.predicted_counts(counts.len())?;
        for (i, (&c, p)) in counts.iter().zip(&predicted).enumerate().skip(g_us) {
            if BigInt::from(c) != *p {
                return Err(Error::InvariantViolated(format!(
                    "N_{} = {c} but L predicts {p}",
                    i + 1
                )));
            }
        }
    }
    Ok(l)
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `N_1..N_k` implied by `L`.
    pub fn predicted_counts(&self, k: usize) -> Result<Vec<BigInt>> {
        let qb = BigInt::from(self.q);
        let coef = |j: usize| self.coeffs.get(j).cloned().unwrap_or_default();
        let mut s: Vec<BigInt> = Vec::with_capacity(k);
        for j in 1..=k {
            let mut acc = -BigInt::from(j) * coef(j);
            for i in 1..j {
                acc -= &s[i - 1] * coef(j - i);
            }
            s.push(acc);
        }
        Ok(s
            .iter()
            .enumerate()
            .map(|(i, sk)| num_traits::pow(qb.clone(), i + 1) + 1 - sk)
            .collect())
    }

    pub fn functional_equation_holds(&self) -> bool {
        let g = self.g as usize;
        self.coeffs.len() == 2 * g + 1
            && self.coeffs[0].is_one()
            && (0..=g).all(|i| {
                self.coeffs[2 * g - i] == num_traits::pow(BigInt::from(self.q), g - i) * &self.coeffs[i]
            })
    }

    /// `h(x)` with `T^{2g} L(1/T) = T^g h(T + q/T)`; the reciprocal roots
    /// of `L` lie on `|z| = sqrt q` iff `h` has all roots real in
    /// `[-2 sqrt q, 2 sqrt q]`.
    pub fn real_weil_polynomial(&self) -> Vec<BigInt> {
        let g = self.g as usize;
        let q = BigInt::from(self.q);
        // D_0 = 2, D_1 = x, D_{k+1} = x D_k - q D_{k-1}
        let mut d_prev: Vec<BigInt> = vec![BigInt::from(2)];
        let mut d_cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
        let mut h = vec![BigInt::zero(); g + 1];
        h[0] = self.coeffs[g].clone();
        for k in 1..=g {
            for (j, c) in d_cur.iter().enumerate() {
                h[j] += &self.coeffs[g - k] * c;
            }
            let mut next = vec![BigInt::zero(); d_cur.len() + 1];
            for (j, c) in d_cur.iter().enumerate() {
                next[j + 1] += c;
            }
            for (j, c) in d_prev.iter().enumerate() {
                next[j] -= &q * c;
            }
            d_prev = std::mem::replace(&mut d_cur, next);
        }
        h
    }

    /// Exact Weil check by Sturm sequences on the real Weil polynomial.
    pub fn weil_exact(&self) -> bool {
        if self.g == 0 {
            return true;
        }
        let h = rpoly(&self.real_weil_polynomial());
        let sf = squarefree_part(&h);
        // All roots real.
        if sturm_real_roots(&sf) != degree(&sf) {
            return false;
        }
        // Roots x_j of sf, mapped to y = x^2, must satisfy y <= 4q.
        let (even, odd) = split_parity(&sf);
        let y = rpoly_from_ints(&[0, 1]);
        let r = sub(&mul(&even, &even), &mul(&y, &mul(&odd, &odd)));
        let mut r = squarefree_part(&r);
        let bound = BigRational::from_integer(BigInt::from(4 * self.q));
        while eval(&r, &bound).is_zero() {
            let lin = vec![-bound.clone(), BigRational::one()];
            r = div(&r, &lin);
        }
        sturm_roots_above(&r, &bound) == 0
    }

    /// Largest `| |alpha| / sqrt q - 1 |` over numerically located reciprocal roots.
    pub fn max_root_deviation(&self) -> f64 {
        if self.g == 0 {
            return 0.0;
        }
        let h = rpoly(&self.real_weil_polynomial());
        let sf = squarefree_part(&h);
        let coeffs: Vec<f64> = sf.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let q = self.q as f64;
        let sq = q.sqrt();
        let mut worst: f64 = 0.0;
        for x in complex_roots(&coeffs) {
            let disc = (x * x - Complex64::new(4.0 * q, 0.0)).sqrt();
            for alpha in [(x + disc) / 2.0, (x - disc) / 2.0] {
                worst = worst.max((alpha.norm() / sq - 1.0).abs());
            }
        }
        worst
    }
}

type RPoly = Vec<BigRational>;

fn rpoly(c: &[BigInt]) -> RPoly {
    trim(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
}

fn rpoly_from_ints(c: &[i64]) -> RPoly {
    trim(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
}

fn trim(mut p: RPoly) -> RPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &RPoly) -> usize {
    p.len().saturating_sub(1)
}

fn sub(a: &RPoly, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn mul(a: &RPoly, b: &RPoly) -> RPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn divrem(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
    let mut r = a.clone();
    let db = degree(b);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lc = b.last().expect("nonzero divisor").clone();
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lc;
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

fn div(a: &RPoly, b: &RPoly) -> RPoly {
    divrem(a, b).0
}

fn derivative(p: &RPoly) -> RPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn gcd(a: &RPoly, b: &RPoly) -> RPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divrem(&a, &b).1;
        a = b;
        b = r;
    }
    a
}

fn squarefree_part(p: &RPoly) -> RPoly {
    let g = gcd(p, &derivative(p));
    if degree(&g) == 0 {
        p.clone()
    } else {
        div(p, &g)
    }
}

fn eval(p: &RPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn split_parity(p: &RPoly) -> (RPoly, RPoly) {
    let even = p.iter().step_by(2).cloned().collect();
    let odd = p.iter().skip(1).step_by(2).cloned().collect();
    (trim(even), trim(odd))
}

fn sturm_chain(p: &RPoly) -> Vec<RPoly> {
    let mut chain = vec![p.clone(), derivative(p)];
    while !chain.last().expect("nonempty").is_empty() {
        let n = chain.len();
        let r = divrem(&chain[n - 2], &chain[n - 1]).1;
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain.pop();
    chain
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_at_infinity(p: &RPoly, negative: bool) -> i8 {
    let s = sign(p.last().expect("nonzero"));
    if negative && degree(p) % 2 == 1 {
        -s
    } else {
        s
    }
}

fn sturm_real_roots(p: &RPoly) -> usize {
    if degree(p) == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    variations(chain.iter().map(|f| sign_at_infinity(f, true)))
        - variations(chain.iter().map(|f| sign_at_infinity(f, false)))
}

/// Distinct roots in `(a, inf)`, for `p(a) != 0`.
fn sturm_roots_above(p: &RPoly, a: &BigRational) -> usize {
    if degree(p) == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    variations(chain.iter().map(|f| sign(&eval(f, a))))
        - variations(chain.iter().map(|f| sign_at_infinity(f, false)))
}

/// Durand-Kerner iteration followed by Newton polishing.
fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lc = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c / lc, 0.0)).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let deriv = |z: Complex64| {
        monic
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, &c)| acc * z + c * i as f64)
    };
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * radius {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let d = deriv(*r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= eval(*r) / d;
        }
    }
    roots
}

pub fn class_number(l: &LPolynomial) -> Result<BigInt> {
    let h: BigInt = l.coeffs.iter().sum();
    if h < BigInt::one() {
        return Err(Error::InvariantViolated(format!("L(1) = {h} is not positive")));
    }
    Ok(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct DeepCheck {
    pub i: u32,
    pub predicted: String,
    pub counted: u64,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassNumberReport {
    pub n: u32,
    pub genus_riemann_hurwitz: u64,
    pub genus_l_degree_half: u64,
    pub counts: Vec<u64>,
    pub weil_bound_ok: bool,
    pub l_poly: LPolynomial,
    pub functional_equation: bool,
    pub weil_exact: bool,
    pub max_root_deviation: f64,
    #[serde(serialize_with = "ser_display")]
    pub h: BigInt,
    pub ell_divides: bool,
    pub deep: Vec<DeepCheck>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl ClassNumberReport {
    /// Every internal cross-check passed (independent of the divisibility verdict).
    pub fn consistent(&self) -> bool {
        self.genus_riemann_hurwitz == self.genus_l_degree_half
            && self.weil_bound_ok
            && self.functional_equation
            && self.weil_exact
            && self.max_root_deviation < 1e-6
            && self.deep.iter().all(|d| d.matches)
    }
}

/// `(N - Q - 1)^2 <= 4 g^2 Q`.
pub fn within_weil_bound(count: u64, big_q: u128, g: u64) -> bool {
    let dev = count as i128 - big_q as i128 - 1;
    let lhs = BigInt::from(dev) * BigInt::from(dev);
    lhs <= BigInt::from(4) * BigInt::from(g) * BigInt::from(g) * BigInt::from(big_q)
}

/// Counts, L-polynomial and class number for one curve.
pub fn curve_class_number(
    curve: &KummerCurve,
    ell: u64,
    n: u32,
    opts: &ZetaOptions,
) -> Result<ClassNumberReport> {
    let start = Instant::now();
    let field: &Field = curve.f().field();
    let q = field.q();
    let g = curve.genus()?;
    let required = counting_work(q, g);
    if required > opts.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    let mut counts = Vec::with_capacity(g as usize);
    for i in 1..=g as u32 {
        counts.push(count_degree_one_places(curve, i, opts.threads)?);
    }
    let weil_bound_ok = counts
        .iter()
        .enumerate()
        .all(|(i, &c)| within_weil_bound(c, (q as u128).pow(i as u32 + 1), g));
    let l_poly = l_polynomial(&counts, g, q)?;

    let mut deep = Vec::new();
    if opts.deep_check && g > 0 {
        let predicted = l_poly.predicted_counts(2 * g as usize)?;
        for i in g as u32 + 1..=2 * g as u32 {
            let size = (q as u128).checked_pow(i).unwrap_or(u128::MAX);
            if size > opts.deep_budget {
                break;
            }
            let counted = count_degree_one_places(curve, i, opts.threads)?;
            let p = &predicted[i as usize - 1];
            deep.push(DeepCheck {
                i,
                predicted: p.to_string(),
                counted,
                matches: BigInt::from(counted) == *p,
            });
        }
    }

    let h = class_number(&l_poly)?;
    let ell_divides = (&h % BigInt::from(ell)).is_zero();
    Ok(ClassNumberReport {
        n,
        genus_riemann_hurwitz: g,
        genus_l_degree_half: l_poly.degree() as u64 / 2,
        counts,
        weil_bound_ok,
        functional_equation: l_poly.functional_equation_holds(),
        weil_exact: l_poly.weil_exact(),
        max_root_deviation: l_poly.max_root_deviation(),
        l_poly,
        h,
        ell_divides,
        deep,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn tower_class_number(spec: &TowerSpec, opts: &ZetaOptions) -> Result<ClassNumberReport> {
    curve_class_number(&spec.curve, spec.ell, spec.n, opts)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LevelVerdict {
    Ok(Box<ClassNumberReport>),
    Budget { n: u32, genus: u64, required: String, budget: String },
}

/// Class numbers of `M_1, ..., M_depth`; levels beyond the budget are marked
/// and skipped.
pub fn indivisibility_verdict(spec: &TowerSpec, depth: u32, opts: &ZetaOptions) -> Result<Vec<LevelVerdict>> {
    let mut out = Vec::new();
    for n in 1..=depth {
        let level = build_tower_from(&spec.sys, &spec.gamma, n, DEFAULT_DEGREE_BOUND)?;
        match tower_class_number(&level, opts) {
            Ok(rep) => out.push(LevelVerdict::Ok(Box::new(rep))),
            Err(Error::BudgetExceeded { required, budget }) => out.push(LevelVerdict::Budget {
                n,
                genus: level.curve.genus()?,
                required: required.to_string(),
                budget: budget.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
