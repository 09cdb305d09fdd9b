//! Brute-force oracles shared by the integration targets. They deliberately
//! avoid the library's factoring and power-residue shortcuts.
#![allow(dead_code)]

use indivisible_core::arith::gcd;
use indivisible_core::tower::KummerCurve;
use indivisible_core::{make_field, Embedding, Field, FieldElement};

/// Number of `y` in the field of `u` with `y^d = u`, by enumeration.
pub fn count_roots(u: &FieldElement, d: u64) -> u64 {
    u.field().elements().filter(|y| &y.pow(d) == u).count() as u64
}

/// `x^m - a` is irreducible over the field of `a` iff it has no root in any
/// `F_{q^j}` with `j <= m/2` (a reducible polynomial has a factor of degree
/// at most `m/2`). Root existence is decided by enumeration for small
/// fields and by the cyclic-group criterion otherwise.
pub fn binomial_irreducible(a: &FieldElement, m: u64) -> bool {
    if m == 1 {
        return true;
    }
    let base = a.field();
    for j in 1..=m / 2 {
        let big = make_field(base.p(), base.e() * j as u32).unwrap();
        let a_big = Embedding::new(base, &big).unwrap().embed(a);
        let big_q = big.q();
        let has_root = if big_q <= 1 << 16 {
            big.elements().any(|x| x.pow(m) == a_big)
        } else {
            let g = gcd(m, big_q - 1);
            a_big.pow((big_q - 1) / g).is_one()
        };
        if has_root {
            return false;
        }
    }
    true
}

/// `x` is a square in its field, by enumeration.
pub fn is_square(x: &FieldElement) -> bool {
    x.field().elements().any(|y| &(&y * &y) == x)
}

fn eval(coeffs: &[FieldElement], x: &FieldElement, zero: &FieldElement) -> FieldElement {
    coeffs.iter().rev().fold(zero.clone(), |acc, c| &(&acc * x) + c)
}

/// Order of vanishing at `t` and the value of the cofactor there.
fn order_at(coeffs: &[FieldElement], t: &FieldElement, zero: &FieldElement) -> (u64, FieldElement) {
    let mut cur = coeffs.to_vec();
    let mut k = 0;
    loop {
        let v = eval(&cur, t, zero);
        if !v.is_zero() {
            return (k, v);
        }
        // synthetic division by (X - t)
        let n = cur.len();
        let mut quot = vec![zero.clone(); n - 1];
        let mut carry = zero.clone();
        for i in (1..n).rev() {
            carry = &(&carry * t) + &cur[i];
            quot[i - 1] = carry.clone();
        }
        cur = quot;
        k += 1;
    }
}

/// Degree-one places of `z^m = N/D` over `F_{q^i}`: affine pairs `(t, z)`
/// with `N(t) D(t) != 0` counted by enumerating `z`, plus the places over
/// zeros, poles and infinity from the local unit `u` and `d = gcd(m, v)`.
pub fn naive_count(curve: &KummerCurve, i: u32) -> u64 {
    let base: &Field = curve.f().field();
    let big = make_field(base.p(), base.e() * i).unwrap();
    let emb = Embedding::new(base, &big).unwrap();
    let num: Vec<FieldElement> = curve.f().num().coeffs().iter().map(|c| emb.embed(c)).collect();
    let den: Vec<FieldElement> = curve.f().den().coeffs().iter().map(|c| emb.embed(c)).collect();
    let zero = big.zero();
    let m = curve.m();
    let mth_powers: Vec<FieldElement> = big.elements().map(|z| z.pow(m)).collect();

    let mut total = 0;
    for t in big.elements() {
        let n = eval(&num, &t, &zero);
        let d = eval(&den, &t, &zero);
        if !n.is_zero() && !d.is_zero() {
            let f = &n * &d.inv().unwrap();
            total += mth_powers.iter().filter(|&z| z == &f).count() as u64;
        } else if n.is_zero() {
            let (v, rest) = order_at(&num, &t, &zero);
            total += count_roots(&(&rest * &d.inv().unwrap()), gcd(m, v));
        } else {
            let (v, rest) = order_at(&den, &t, &zero);
            total += count_roots(&(&n * &rest.inv().unwrap()), gcd(m, v));
        }
    }
    let v_inf = (den.len() as i64 - num.len() as i64).unsigned_abs();
    let u = num.last().unwrap() * &den.last().unwrap().inv().unwrap();
    total + count_roots(&u, gcd(m, v_inf))
}
