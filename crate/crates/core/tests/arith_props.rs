mod common;

use indivisible_core::admissibility::{corollary_checks, enumerate_candidates, is_admissible};
use indivisible_core::arith::{self, is_prime_power, radical};
use indivisible_core::gamma::power_sets;
use indivisible_core::tower::KummerCurve;
use indivisible_core::zeta::{count_degree_one_places, curve_class_number, l_polynomial, ZetaOptions};
use indivisible_core::{build_rikuna, lang_test, make_field, Poly, RatFunc};
use num_bigint::BigInt;
use proptest::prelude::*;

const ELLS: [u64; 5] = [3, 5, 7, 11, 13];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lang_test_matches_root_search(idx in 0usize..5, a in any::<u64>(), m in 2u64..13) {
        let (p, e) = [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)][idx];
        let f = make_field(p, e).unwrap();
        let a = f.from_index(1 + a % (f.q() - 1));
        prop_assert_eq!(lang_test(&a, m).unwrap(), common::binomial_irreducible(&a, m));
    }

    #[test]
    fn inclusion_exclusion_counts_t(idx in 0usize..4, d in any::<u64>()) {
        let (q, m) = [(13u64, 6u64), (31, 30), (25, 12), (61, 60)][idx];
        let (p, e) = arith::prime_power(q).unwrap();
        let f = make_field(p, e).unwrap();
        let d = f.from_index(1 + d % (q - 1));
        let rep = power_sets(&f, &d, m).unwrap();
        prop_assert_eq!(rep.size_t as i64, rep.size_t_inclusion_exclusion);
        prop_assert_eq!(rep.size_t + rep.size_t_complement, q.div_ceil(2));
        prop_assert!(rep.divisors.iter().all(|c| c.intersection_ok && c.weil_ok));
    }

    #[test]
    fn residue_class_is_the_congruence_pair(li in 0usize..5, m in 2u64..400, q in 2u64..5000) {
        let ell = ELLS[li];
        prop_assume!(m % ell != 0 && is_prime_power(q));
        let rep = is_admissible(q, ell, m).unwrap();
        let m_0 = radical(m);
        let pair = q % ell == ell - 1 && q % m_0 == 1 % m_0;
        prop_assert_eq!(rep.single_residue, Some(pair));
    }

    #[test]
    fn candidates_lie_in_the_progression(li in 0usize..5, m in 2u64..60) {
        let ell = ELLS[li];
        prop_assume!(m % ell != 0);
        let m_0 = radical(m);
        let list = enumerate_candidates(ell, m, 3000).unwrap();
        let brute: Vec<u64> = (2..=3000)
            .filter(|&q| is_prime_power(q) && q % ell == ell - 1 && q % m_0 == 1 % m_0)
            .collect();
        prop_assert_eq!(list.iter().map(|c| c.q).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn corollary_verdict_is_the_direct_bound(li in 0usize..5, m in 2u64..2000) {
        let ell = ELLS[li];
        prop_assume!(m % ell != 0 && radical(m) == m);
        let rep = corollary_checks(ell, m).unwrap();
        prop_assert_eq!(rep.verdict, rep.direct);
    }

    #[test]
    fn discriminant_identity_at_random_points(li in 0usize..3, pick in 0usize..2, u in any::<u64>()) {
        let (ell, qs) = [(3u64, [5u64, 17]), (5, [9, 19]), (7, [13, 27])][li];
        let sys = build_rikuna(qs[pick], ell).unwrap();
        let u0 = sys.ext().from_index(u % sys.ext().q());
        prop_assert!(sys.verify_discriminant(&u0).unwrap());
    }

    #[test]
    fn sigma_preserves_r_pointwise(pick in 0usize..3, x in any::<u64>()) {
        let (q, ell) = [(5u64, 3u64), (19, 5), (13, 7)][pick];
        let sys = build_rikuna(q, ell).unwrap();
        let x = sys.base().from_index(x % q);
        let sigma = sys.sigma().unwrap();
        if let Some(sx) = sigma.eval(&x).unwrap() {
            let (rx, rsx) = (sys.r().eval(&x).unwrap(), sys.r().eval(&sx).unwrap());
            prop_assert_eq!(rx, rsx);
        }
    }
}

fn small_curve(p: u64, m: u64, num: &[u64], den: &[u64]) -> Option<KummerCurve> {
    let f = make_field(p, 1).unwrap();
    let n = Poly::from_u64s(&f, num);
    let d = Poly::from_u64s(&f, den);
    if n.is_zero() || d.is_zero() {
        return None;
    }
    let r = RatFunc::new(n, d).ok()?;
    if r.num().deg() + r.den().deg() == 0 {
        return None;
    }
    KummerCurve::new(m, r).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn splitting_counter_matches_naive(pi in 0usize..3, m in 2u64..5,
                                      num in prop::collection::vec(0u64..13, 1..5),
                                      den in prop::collection::vec(0u64..13, 1..3), i in 1u32..3) {
        let p = [5u64, 7, 13][pi];
        prop_assume!(m % p != 0);
        let Some(curve) = small_curve(p, m, &num, &den) else { return Ok(()); };
        prop_assume!(p.pow(i) <= 200);
        prop_assert_eq!(count_degree_one_places(&curve, i, None).unwrap(), common::naive_count(&curve, i));
    }

    #[test]
    fn zeta_invariants(pi in 0usize..3, m in 2u64..4,
                       num in prop::collection::vec(0u64..13, 1..6),
                       den in prop::collection::vec(0u64..13, 1..3)) {
        let p = [5u64, 7, 11][pi];
        prop_assume!(m % p != 0);
        let Some(curve) = small_curve(p, m, &num, &den) else { return Ok(()); };
        let g = curve.genus().unwrap();
        prop_assume!(g <= 4 && p.pow(g as u32 + 1) <= 200_000);
        let opts = ZetaOptions { deep_check: true, deep_budget: 200_000, ..Default::default() };
        let rep = curve_class_number(&curve, 3, 1, &opts).unwrap();
        prop_assert!(rep.consistent(), "{:?}", rep);
        prop_assert_eq!(rep.l_poly.degree() as u64, 2 * g);
        let h: BigInt = rep.l_poly.coeffs.iter().sum();
        prop_assert_eq!(h, rep.h.clone());
        let predicted = rep.l_poly.predicted_counts(g as usize).unwrap();
        let counts: Vec<BigInt> = rep.counts.iter().map(|&c| BigInt::from(c)).collect();
        prop_assert_eq!(predicted, counts);
        for (i, &c) in rep.counts.iter().enumerate() {
            let qi = p.pow(i as u32 + 1) as i128;
            let dev = c as i128 - qi - 1;
            prop_assert!(dev * dev <= 4 * (g as i128).pow(2) * qi);
        }
    }

    #[test]
    fn counts_round_trip_through_l(pi in 0usize..2, num in prop::collection::vec(0u64..7, 4..6)) {
        let p = [5u64, 7][pi];
        let Some(curve) = small_curve(p, 2, &num, &[1]) else { return Ok(()); };
        let g = curve.genus().unwrap();
        prop_assume!(g >= 1);
        let counts: Vec<u64> = (1..=g as u32 + 1).map(|i| count_degree_one_places(&curve, i, None).unwrap()).collect();
        let l = l_polynomial(&counts, g, p).unwrap();
        prop_assert!(l.functional_equation_holds() && l.weil_exact());
        let mut bad = counts.clone();
        *bad.last_mut().unwrap() += 1;
        prop_assert!(l_polynomial(&bad, g, p).is_err());
    }
}
