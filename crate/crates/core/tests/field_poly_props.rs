use indivisible_core::poly::{discriminant, factor_oracle};
use indivisible_core::{make_field, Embedding, Field, FieldElement, Poly};
use proptest::prelude::*;

const FIELDS: [(u64, u32); 6] = [(2, 3), (3, 2), (5, 1), (5, 2), (7, 1), (13, 1)];

fn field(k: usize) -> Field {
    let (p, e) = FIELDS[k % FIELDS.len()];
    make_field(p, e).unwrap()
}

fn elem(f: &Field, i: u64) -> FieldElement {
    f.from_index(i % f.q())
}

fn poly(f: &Field, raw: &[u64]) -> Poly {
    Poly::new(f, raw.iter().map(|&i| elem(f, i)).collect())
}

proptest! {
    #[test]
    fn field_axioms(k in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(k);
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(a.pow(f.q()), a.clone());
        prop_assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(f.from_index(a.index()), a);
    }

    #[test]
    fn embedding_is_a_homomorphism(a in any::<u64>(), b in any::<u64>(), j in 2u32..4) {
        let sub = make_field(3, 2).unwrap();
        let amb = make_field(3, 2 * j).unwrap();
        let emb = Embedding::new(&sub, &amb).unwrap();
        let (a, b) = (elem(&sub, a), elem(&sub, b));
        prop_assert_eq!(emb.embed(&(&a * &b)), &emb.embed(&a) * &emb.embed(&b));
        prop_assert_eq!(emb.embed(&(&a + &b)), &emb.embed(&a) + &emb.embed(&b));
        prop_assert_eq!(emb.restrict(&emb.embed(&a)).unwrap(), a);
    }

    #[test]
    fn kth_powers_match_enumeration(k in 0usize..6, a in any::<u64>(), e in 1u64..7) {
        let f = field(k);
        let a = elem(&f, a);
        let brute = f.elements().any(|x| x.pow(e) == a);
        prop_assert_eq!(a.is_kth_power(e).unwrap(), brute);
    }

    #[test]
    fn division_identity(k in 0usize..6, a in prop::collection::vec(any::<u64>(), 0..9),
                         b in prop::collection::vec(any::<u64>(), 1..5)) {
        let f = field(k);
        let (a, b) = (poly(&f, &a), poly(&f, &b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a.clone());
        prop_assert!(r.is_zero() || r.deg() < b.deg());
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
    }

    #[test]
    fn factorization_reconstructs(k in 0usize..6, a in prop::collection::vec(any::<u64>(), 2..8)) {
        let f = field(k);
        let a = poly(&f, &a);
        prop_assume!(a.deg() >= 1);
        let factors = a.factor().unwrap();
        let mut prod = Poly::constant(a.leading().unwrap().clone());
        for (g, e) in &factors {
            prop_assert!(g.is_monic() && g.is_irreducible().unwrap());
            prod = &prod * &g.pow(*e as u64);
        }
        prop_assert_eq!(&prod, &a);
        let mut sq = Poly::constant(a.leading().unwrap().clone());
        for (g, e) in a.squarefree_decomposition().unwrap() {
            prop_assert!(g.is_squarefree().unwrap());
            sq = &sq * &g.pow(e as u64);
        }
        prop_assert_eq!(sq, a.clone());
        for r in a.roots().unwrap() {
            prop_assert!(a.eval(&r).unwrap().is_zero());
        }
        let brute: Vec<_> = f.elements().filter(|x| a.eval(x).unwrap().is_zero()).collect();
        prop_assert_eq!(a.roots().unwrap(), brute);
    }

    #[test]
    fn rabin_matches_trial_division(k in 0usize..6, a in prop::collection::vec(any::<u64>(), 2..6)) {
        let f = field(k);
        let a = poly(&f, &a);
        prop_assume!(a.deg() >= 1);
        let fac = factor_oracle(&a).unwrap();
        let oracle = fac.len() == 1 && fac[0].1 == 1;
        prop_assert_eq!(a.is_irreducible().unwrap(), oracle);
    }

    #[test]
    fn discriminant_vanishes_iff_repeated_factor(k in 0usize..6, a in prop::collection::vec(any::<u64>(), 3..7)) {
        let f = field(k);
        let a = poly(&f, &a).monic();
        prop_assume!(a.deg() >= 2);
        let d = discriminant(&a).unwrap();
        prop_assert_eq!(d.is_zero(), !a.is_squarefree().unwrap());
    }
}
