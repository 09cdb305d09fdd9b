//! The size bound `q > (C + 4)^2`, the congruence progression for `q`, the
//! corollary inequalities, and the divisibility certificate for
//! `(q^{ne} - 1)/(q - 1)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::count_monic_irreducibles;

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn rat(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub t_ell: u32,
    pub m_1: u64,
    pub m_0: u64,
    pub t_rad: u32,
    pub phi_m0: u64,
}

/// `m = l^t m_1` with `l` coprime to `m_1`; `m_0` is the radical of `m_1`.
pub fn decompose_m(m: u64, ell: u64) -> Result<Decomposition> {
    if m <= 1 {
        return Err(Error::InvalidInput(format!("m = {m} must exceed 1")));
    }
    if ell == 2 || !arith::is_prime(ell) {
        return Err(Error::InvalidInput(format!("l = {ell} is not an odd prime")));
    }
    let mut m_1 = m;
    let mut t_ell = 0;
    while m_1.is_multiple_of(ell) {
        m_1 /= ell;
        t_ell += 1;
    }
    let m_0 = arith::radical(m_1);
    Ok(Decomposition {
        t_ell,
        m_1,
        m_0,
        t_rad: arith::prime_divisors(m_1).len() as u32,
        phi_m0: arith::euler_phi(m_0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub q: Option<u64>,
    pub ell: u64,
    pub m: u64,
    #[serde(flatten)]
    pub decomposition: Decomposition,
    #[serde(serialize_with = "ser_rational")]
    pub c: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub threshold: BigRational,
    pub threshold_f64: f64,
    pub residue: u64,
    pub modulus: u64,
    pub ell_prime: u64,
    pub crt_ok: bool,
    pub threshold_note: Option<String>,
    pub congruent_ell: Option<bool>,
    pub congruent_m0: Option<bool>,
    pub single_residue: Option<bool>,
    pub above_threshold: Option<bool>,
    pub admissible: Option<bool>,
}

/// Everything that depends on `(l, m)` alone.
pub fn admissibility_constants(ell: u64, m: u64) -> Result<AdmissibilityReport> {
    let dec = decompose_m(m, ell)?;
    let c = BigRational::from_integer(BigInt::from(1u64 << dec.t_rad)) * rat(dec.m_0, dec.phi_m0);
    let four = BigRational::from_integer(BigInt::from(4));
    let threshold = (&c + &four) * (&c + &four);
    let modulus = ell * dec.m_0;
    let ell_prime = arith::inv_mod(ell, dec.m_0).expect("l is prime to m_0");
    let residue = (2 * ell * ell_prime + modulus - 1) % modulus;
    let crt_ok = residue % ell == ell - 1 && residue % dec.m_0 == 1 % dec.m_0;
    let threshold_note = (ell == 3 && dec.m_0 == 2).then(|| {
        "(C+4)^2 = 64 for l = 3, m_0 = 2; a threshold of 16 quoted for this case does not follow from the formula"
            .to_string()
    });
    let threshold_f64 = ratio_f64(&threshold);
    Ok(AdmissibilityReport {
        q: None,
        ell,
        m,
        decomposition: dec,
        c,
        threshold,
        threshold_f64,
        residue,
        modulus,
        ell_prime,
        crt_ok,
        threshold_note,
        congruent_ell: None,
        congruent_m0: None,
        single_residue: None,
        above_threshold: None,
        admissible: None,
    })
}

/// `q` is admissible when `q = -1 mod l`, `q = 1 mod m_0` and `q > (C + 4)^2`.
pub fn is_admissible(q: u64, ell: u64, m: u64) -> Result<AdmissibilityReport> {
    arith::prime_power(q)?;
    let mut rep = admissibility_constants(ell, m)?;
    let m_0 = rep.decomposition.m_0;
    let congruent_ell = q % ell == ell - 1;
    let congruent_m0 = q % m_0 == 1 % m_0;
    let single = q % rep.modulus == rep.residue;
    if single != (congruent_ell && congruent_m0) {
        return Err(Error::InvariantViolated("residue disagrees with the congruence pair".into()));
    }
    let above = BigRational::from_integer(BigInt::from(q)) > rep.threshold;
    rep.q = Some(q);
    rep.congruent_ell = Some(congruent_ell);
    rep.congruent_m0 = Some(congruent_m0);
    rep.single_residue = Some(single);
    rep.above_threshold = Some(above);
    rep.admissible = Some(congruent_ell && congruent_m0 && above);
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub ell: u64,
    pub m_0: u64,
    pub kind: &'static str,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub rhs_f64: f64,
    #[serde(serialize_with = "ser_rational")]
    pub bound: BigRational,
    pub verdict: bool,
    /// `l m_0 >= (C + 4)^2`, equivalent to the verdict.
    pub direct: bool,
}

/// The corollary inequalities for squarefree `m_0 > 1`, as exact rationals.
pub fn corollary_checks(ell: u64, m_0: u64) -> Result<CorollaryReport> {
    if m_0 <= 1 || arith::radical(m_0) != m_0 {
        return Err(Error::InvalidInput(format!("m_0 = {m_0} is not squarefree and > 1")));
    }
    let primes = arith::prime_divisors(m_0);
    let t = primes.len() as u32;
    let phi = arith::euler_phi(m_0);
    let (kind, rhs, bound) = if t == 1 {
        let p = m_0;
        let rhs = rat(p, (p - 1) * (p - 1)) + rat(4, p - 1) + rat(4, p);
        ("prime", rhs, rat(ell, 4))
    } else {
        let rhs = rat(1u64 << (2 * t - 4), 1) * rat(m_0, phi * phi)
            + rat(1u64 << (t - 1), phi)
            + rat(1, m_0);
        ("composite", rhs, rat(ell, 16))
    };
    let verdict = rhs <= bound;
    let c = rat(1u64 << t, 1) * rat(m_0, phi);
    let four = rat(4, 1);
    let direct = rat(ell * m_0, 1) >= (&c + &four) * (&c + &four);
    if direct != verdict {
        return Err(Error::InvariantViolated("corollary verdict disagrees with the direct bound".into()));
    }
    Ok(CorollaryReport {
        ell,
        m_0,
        kind,
        rhs_f64: ratio_f64(&rhs),
        rhs,
        bound,
        verdict,
        direct,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Eq5Report {
    pub q: u64,
    pub ell: u64,
    pub n: u32,
    pub e: u64,
    pub total: String,
    pub first_factor: String,
    pub second_factor: String,
    pub ell_divides_second: bool,
    pub ell_divides_total: bool,
    pub irreducibles_of_degree_ne: String,
}

/// Certifies `l | (q^{ne} - 1)/(q - 1)` with `e` the order of `q` mod `l`.
pub fn eq5_certificate(q: u64, ell: u64, n: u32) -> Result<Eq5Report> {
    arith::prime_power(q)?;
    if ell == 2 || !arith::is_prime(ell) {
        return Err(Error::InvalidInput(format!("l = {ell} is not an odd prime")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if q.is_multiple_of(ell) {
        return Err(Error::Hypothesis(format!("l = {ell} divides q = {q}")));
    }
    if (q - 1).is_multiple_of(ell) {
        return Err(Error::Hypothesis(format!("l = {ell} divides q - 1 = {}", q - 1)));
    }
    let e = arith::multiplicative_order(q, ell).expect("q is prime to l");
    if !(1 < e && e < ell) {
        return Err(Error::InvariantViolated(format!("order {e} outside (1, l)")));
    }
    let qb = BigUint::from(q);
    let one = BigUint::one();
    let ne = n as u64 * e;
    let total_num = num_traits::pow(qb.clone(), ne as usize) - &one;
    let qe_minus = num_traits::pow(qb.clone(), e as usize) - &one;
    let q_minus = &qb - &one;
    let exact = |a: &BigUint, b: &BigUint| -> Result<BigUint> {
        let (quot, rem) = a.div_rem(b);
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::InvariantViolated("inexact factor".into()))
        }
    };
    let total = exact(&total_num, &q_minus)?;
    let first = exact(&total_num, &qe_minus)?;
    let second = exact(&qe_minus, &q_minus)?;
    if &first * &second != total {
        return Err(Error::InvariantViolated("factorization does not multiply out".into()));
    }
    let lb = BigUint::from(ell);
    let count = count_monic_irreducibles(q, ne);
    if count.is_zero() {
        return Err(Error::InvariantViolated("no irreducible of degree ne".into()));
    }
    Ok(Eq5Report {
        q,
        ell,
        n,
        e,
        ell_divides_second: (&second % &lb).is_zero(),
        ell_divides_total: (&total % &lb).is_zero(),
        total: total.to_string(),
        first_factor: first.to_string(),
        second_factor: second.to_string(),
        irreducibles_of_degree_ne: count.to_string(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub q: u64,
    pub admissible: bool,
}

/// Prime powers `q <= q_max` in the residue class of `(l, m)`.
pub fn enumerate_candidates(ell: u64, m: u64, q_max: u64) -> Result<Vec<Candidate>> {
    const Q_MAX_BOUND: u64 = 1 << 32;
    if q_max > Q_MAX_BOUND {
        return Err(Error::InvalidInput(format!("q_max {q_max} exceeds {Q_MAX_BOUND}")));
    }
    let rep = admissibility_constants(ell, m)?;
    let mut out = Vec::new();
    let mut q = rep.residue;
    while q <= q_max {
        if q >= 2 && arith::is_prime_power(q) {
            let above = BigRational::from_integer(BigInt::from(q)) > rep.threshold;
            out.push(Candidate { q, admissible: above });
        }
        q += rep.modulus;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        let d = |t_ell, m_1, m_0, t_rad, phi_m0| Decomposition { t_ell, m_1, m_0, t_rad, phi_m0 };
        assert_eq!(decompose_m(2, 3).unwrap(), d(0, 2, 2, 1, 1));
        assert_eq!(decompose_m(12, 3).unwrap(), d(1, 4, 2, 1, 1));
        assert_eq!(decompose_m(77, 3).unwrap(), d(0, 77, 77, 2, 60));
        assert!(decompose_m(1, 3).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let r = is_admissible(71, 3, 2).unwrap();
        assert_eq!(r.admissible, Some(true));
        let r = is_admissible(67, 3, 2).unwrap();
        assert_eq!(r.admissible, Some(false));
        let r = is_admissible(5, 3, 2).unwrap();
        assert_eq!(r.congruent_ell, Some(true));
        assert_eq!(r.congruent_m0, Some(true));
        assert_eq!(r.admissible, Some(false));
        assert_eq!(r.c, rat(4, 1));
        assert_eq!(r.threshold, rat(64, 1));
        assert_eq!((r.residue, r.modulus), (5, 6));
        assert!(r.threshold_note.is_some());
        assert_eq!(is_admissible(12, 3, 2).unwrap_err(), Error::NotPrimePower(12));
    }

    #[test]
    fn corollaries() {
        let c = corollary_checks(3, 13).unwrap();
        assert!(c.rhs < rat(74, 100) && c.verdict);
        let c = corollary_checks(3, 77).unwrap();
        assert_eq!(c.rhs, rat(77, 3600) + rat(2, 60) + rat(1, 77));
        assert!((c.rhs_f64 - 0.0677).abs() < 1e-4);
        assert!(c.verdict);
        assert!(!corollary_checks(3, 3).unwrap().verdict);
    }

    #[test]
    fn eq5() {
        let r = eq5_certificate(5, 3, 1).unwrap();
        assert_eq!((r.e, r.total.as_str()), (2, "6"));
        let r = eq5_certificate(5, 3, 2).unwrap();
        assert_eq!(r.total, "156");
        assert!(r.ell_divides_total);
        assert!(matches!(eq5_certificate(7, 3, 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn candidates() {
        let qs = |v: Vec<Candidate>| v.into_iter().map(|c| (c.q, c.admissible)).collect::<Vec<_>>();
        let small = [5, 11, 17, 23, 29, 41, 47].map(|q| (q, false)).to_vec();
        assert_eq!(qs(enumerate_candidates(3, 2, 50).unwrap()), small);
        let more = qs(enumerate_candidates(3, 2, 100).unwrap());
        assert_eq!(&more[7..], &[(53, false), (59, false), (71, true), (83, true), (89, true)]);
        assert_eq!(qs(enumerate_candidates(5, 2, 20).unwrap()), vec![(9, false), (19, false)]);
    }
}
