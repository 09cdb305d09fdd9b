//! Search for `gamma` with `X^m - (gamma + l zeta)` irreducible over `F_{q^2}`,
//! following the counting argument on the curves `y^2 + d = x^k`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Poly;
use crate::rikuna::RikunaSystem;

#[derive(Clone, Debug, Serialize)]
pub struct SquareCompletion {
    pub c: FieldElement,
    pub d: FieldElement,
}

/// `gamma^2 + l omega gamma + l^2 = (gamma - c)^2 + d`.
pub fn complete_square(sys: &RikunaSystem) -> Result<SquareCompletion> {
    let f = sys.base();
    if f.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let l = sys.ell_elem();
    let w = sys.omega();
    let half = f.from_u64(2).inv()?;
    let c = -&(&(&l * w) * &half);
    let d = &(&(&l * &l) * &(&f.from_u64(4) - &(w * w))) * &half.pow(2);
    let lhs = Poly::new(f, vec![&l * &l, &l * w, f.one()]);
    let shifted = Poly::new(f, vec![-&c, f.one()]);
    let rhs = &(&shifted * &shifted) + &Poly::constant(d.clone());
    if lhs != rhs {
        return Err(Error::InvariantViolated("square completion mismatch".into()));
    }
    if d.is_zero() {
        return Err(Error::InvariantViolated("d = 0".into()));
    }
    Ok(SquareCompletion { c, d })
}

/// Affine points of `y^2 + d = x^k` over `field`.
pub fn curve_count_nk(field: &Field, d: &FieldElement, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::NonPositiveExponent);
    }
    if field.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let mut count = 0;
    for x in field.elements() {
        let rhs = &x.pow(k) - d;
        count += if rhs.is_zero() {
            1
        } else if rhs.is_kth_power(2)? {
            2
        } else {
            0
        };
    }
    Ok(count)
}

fn power_set(field: &Field, k: u64) -> BTreeSet<u64> {
    field.elements().map(|x| x.pow(k).index()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorCount {
    pub k: u64,
    pub mobius: i64,
    pub n_k: u64,
    pub size_s_k: u64,
    /// `(N_k - q)^2 < k^2 q`.
    pub weil_ok: bool,
    /// `|N_k - q| <= (k - 1) sqrt q`, reported only.
    pub sharp_weil_ok: bool,
    /// `|#S_k - N_k / 2k| < 2`.
    pub s_k_ok: bool,
    /// `S_{p_1} cap ... cap S_{p_r} = S_k`, compared as sets.
    pub intersection_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerSetReport {
    pub q: u64,
    pub d: FieldElement,
    pub m: u64,
    pub primes: Vec<u64>,
    pub divisors: Vec<DivisorCount>,
    pub size_r_2: u64,
    pub size_t: u64,
    pub size_t_inclusion_exclusion: i64,
    pub size_t_complement: u64,
    #[serde(serialize_with = "ser_rational")]
    pub main_term: BigRational,
    pub error_bound: f64,
    pub error_bound_ok: bool,
    pub all_ok: bool,
    #[serde(skip)]
    pub t: BTreeSet<u64>,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// `|x| <= a sqrt(q) + b` for rational `x`, decided exactly.
pub(crate) fn within_sqrt_bound(x: &BigRational, a: u64, b: u64, q: u64) -> bool {
    let slack = x.abs() - BigRational::from_integer(BigInt::from(b));
    if !slack.is_positive() {
        return true;
    }
    let a = BigRational::from_integer(BigInt::from(a));
    &slack * &slack <= &a * &a * BigRational::from_integer(BigInt::from(q))
}

/// Builds `R_2`, every `S_k` for squarefree `k | m`, and `T`, and checks the
/// counting inequalities exactly.
pub fn power_sets(field: &Field, d: &FieldElement, m: u64) -> Result<PowerSetReport> {
    let q = field.q();
    if m < 2 {
        return Err(Error::InvalidInput(format!("m = {m} must exceed 1")));
    }
    let primes = arith::prime_divisors(m);
    if let Some(p) = primes.iter().find(|&&p| !(q - 1).is_multiple_of(p)) {
        return Err(Error::Hypothesis(format!("{p} does not divide q - 1 = {}", q - 1)));
    }
    let r2 = power_set(field, 2);
    let s_of = |k: u64| -> BTreeSet<u64> {
        let rk = power_set(field, k);
        r2.iter()
            .copied()
            .filter(|&eta| rk.contains(&(&field.from_index(eta) + d).index()))
            .collect()
    };
    let s_prime: Vec<(u64, BTreeSet<u64>)> = primes.iter().map(|&p| (p, s_of(p))).collect();

    let mut divisors = Vec::new();
    let mut ie: i64 = r2.len() as i64;
    for k in arith::squarefree_divisors(m) {
        let s_k = s_of(k);
        let n_k = curve_count_nk(field, d, k)?;
        let mu = arith::mobius(k);
        ie += mu * s_k.len() as i64;
        let mut inter: Option<BTreeSet<u64>> = None;
        for (p, s) in &s_prime {
            if k % p == 0 {
                inter = Some(match inter {
                    None => s.clone(),
                    Some(acc) => acc.intersection(s).copied().collect(),
                });
            }
        }
        let dev = n_k as i128 - q as i128;
        let weil_ok = dev * dev < (k as i128).pow(2) * q as i128;
        let sharp = BigRational::from_integer(BigInt::from(dev));
        let sharp_weil_ok = within_sqrt_bound(&sharp, k - 1, 0, q);
        let s_k_dev = 2 * k as i128 * s_k.len() as i128 - n_k as i128;
        divisors.push(DivisorCount {
            k,
            mobius: mu,
            n_k,
            size_s_k: s_k.len() as u64,
            weil_ok,
            sharp_weil_ok,
            s_k_ok: s_k_dev.abs() < 4 * k as i128,
            intersection_ok: inter.as_ref() == Some(&s_k),
        });
    }

    let t: BTreeSet<u64> = r2
        .iter()
        .copied()
        .filter(|eta| s_prime.iter().all(|(_, s)| !s.contains(eta)))
        .collect();
    let mut main_term = BigRational::new(BigInt::from(q), BigInt::from(2));
    for &p in &primes {
        main_term *= BigRational::new(BigInt::from(p - 1), BigInt::from(p));
    }
    let tt = primes.len() as u32;
    let error_bound = 2f64.powi(tt as i32 - 1) * (q as f64).sqrt() + 2f64.powi(tt as i32 + 1);
    // 2^{t-1} sqrt q + 2^{t+1}, multiplied through by 2 to stay integral.
    let diff = BigRational::from_integer(BigInt::from(t.len())) - &main_term;
    let doubled = &diff * BigRational::from_integer(BigInt::from(2));
    let error_bound_ok = within_sqrt_bound(&doubled, 1 << tt, 1 << (tt + 2), q);

    let size_r_2 = r2.len() as u64;
    let all_ok = size_r_2 == q.div_ceil(2)
        && ie == t.len() as i64
        && error_bound_ok
        && divisors
            .iter()
            .all(|c| c.weil_ok && c.s_k_ok && c.intersection_ok);
    Ok(PowerSetReport {
        q,
        d: d.clone(),
        m,
        primes,
        divisors,
        size_r_2,
        size_t: t.len() as u64,
        size_t_inclusion_exclusion: ie,
        size_t_complement: size_r_2 - t.len() as u64,
        main_term,
        error_bound,
        error_bound_ok,
        all_ok,
        t,
    })
}

/// Decides irreducibility of `x^m - a` over the field of `a`: no `a in k^p`
/// for a prime `p | m`, and `a not in -4 k^4` when `4 | m`.
pub fn lang_test(a: &FieldElement, m: u64) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::InvalidInput("lang_test needs a != 0".into()));
    }
    if m == 0 {
        return Err(Error::NonPositiveExponent);
    }
    for p in arith::prime_divisors(m) {
        if a.is_kth_power(p)? {
            return Ok(false);
        }
    }
    if m.is_multiple_of(4) && a.field().p() != 2 {
        let minus_four = a.field().from_i64(-4);
        if a.try_div(&minus_four)?.is_kth_power(4)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeWitness {
    pub p: u64,
    /// `(gamma - c)^2 + d`, the norm of `gamma + l zeta`, is not a `p`-th power in `F_q`.
    pub norm_not_power: bool,
    /// `gamma + l zeta` is not a `p`-th power in `F_{q^2}`.
    pub direct_not_power: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaCertificate {
    pub gamma: FieldElement,
    pub lambda: FieldElement,
    pub tau: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
    pub m: u64,
    pub witnesses: Vec<PrimeWitness>,
    pub direct_check: bool,
}

/// Smallest `gamma != 0` with `(gamma - c)^2 in T`, fully certified.
pub fn find_gamma(sys: &RikunaSystem, m: u64) -> Result<GammaCertificate> {
    let f = sys.base();
    let q = f.q();
    if m < 2 {
        return Err(Error::InvalidInput(format!("m = {m} must exceed 1")));
    }
    if arith::gcd(m, sys.ell()) != 1 {
        return Err(Error::Hypothesis(format!("l = {} divides m = {m}", sys.ell())));
    }
    let sc = complete_square(sys)?;
    let report = power_sets(f, &sc.d, m)?;
    if !report.all_ok {
        return Err(Error::InvariantViolated(format!(
            "counting inequalities fail for q = {q}, m = {m}"
        )));
    }
    let l_zeta = &sys.embedding().embed(&sys.ell_elem()) * sys.zeta();
    for gamma in f.elements().skip(1) {
        let lambda = &gamma - &sc.c;
        let tau = &lambda * &lambda;
        if !report.t.contains(&tau.index()) {
            continue;
        }
        let norm = &tau + &sc.d;
        let a = &sys.embedding().embed(&gamma) + &l_zeta;
        if a.norm_to_subfield(f)? != norm {
            return Err(Error::InvariantViolated("norm mismatch".into()));
        }
        let witnesses = report
            .primes
            .iter()
            .map(|&p| {
                Ok(PrimeWitness {
                    p,
                    norm_not_power: !norm.is_kth_power(p)?,
                    direct_not_power: !a.is_kth_power(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let direct_check = lang_test(&a, m)?;
        if !direct_check || witnesses.iter().any(|w| !w.norm_not_power || !w.direct_not_power) {
            return Err(Error::InvariantViolated(format!(
                "gamma = {gamma} lies in T but fails certification"
            )));
        }
        return Ok(GammaCertificate {
            gamma,
            lambda,
            tau,
            c: sc.c,
            d: sc.d,
            m,
            witnesses,
            direct_check,
        });
    }
    Err(Error::NoGamma { q, m })
}

/// Elements of `T` as field elements, for reporting.
pub fn t_elements(field: &Field, report: &PowerSetReport) -> Vec<FieldElement> {
    report.t.iter().map(|&i| field.from_index(i)).collect()
}
