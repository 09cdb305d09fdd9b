//! Rikuna's cyclic polynomials `F(X, u) = P(X) - u Q(X)` and the map
//! `r = P / Q` whose iterates build the tower.

use rand::Rng;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{make_field, primitive_root_of_unity, Embedding, Field, FieldElement};
use crate::poly::{discriminant, Poly, RatFunc};

#[derive(Clone, Debug)]
pub struct RikunaSystem {
    ell: u64,
    base: Field,
    ext: Field,
    emb: Embedding,
    zeta: FieldElement,
    omega: FieldElement,
    p: Poly,
    q: Poly,
    r: RatFunc,
    disc_const: FieldElement,
}

/// Expands `P` and `Q` over `F_{q^2}` and descends them to `F_q`.
pub fn build_rikuna(q: u64, ell: u64) -> Result<RikunaSystem> {
    if ell == 2 || !arith::is_prime(ell) {
        return Err(Error::Hypothesis(format!("l = {ell} is not an odd prime")));
    }
    let (p, e) = arith::prime_power(q)?;
    if p == ell {
        return Err(Error::Hypothesis(format!("l = {ell} divides q = {q}")));
    }
    if q % ell != ell - 1 {
        return Err(Error::Hypothesis(format!(
            "q = {q} is {} mod {ell}, not -1",
            q % ell
        )));
    }
    let base = make_field(p, e)?;
    let ext = make_field(p, 2 * e)?;
    let emb = Embedding::new(&base, &ext)?;
    let zeta = primitive_root_of_unity(&ext, ell)?;
    let zeta_inv = zeta.inv()?;

    let a = Poly::linear(&zeta).pow(ell);
    let b = Poly::linear(&zeta_inv).pow(ell);
    let unit = (&zeta_inv - &zeta).inv()?;
    let p_ext = (&a.scale(&zeta_inv) - &b.scale(&zeta)).scale(&unit);
    let q_ext = (&a - &b).scale(&unit);

    let descend = |f: &Poly| -> Result<Poly> {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                if c.pow(q) != *c {
                    return Err(Error::InvariantViolated(format!(
                        "coefficient {c} is not fixed by Frobenius"
                    )));
                }
                emb.restrict(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&base, coeffs))
    };
    let pp = descend(&p_ext)?;
    let qq = descend(&q_ext)?;
    let omega = emb.restrict(&(&zeta + &zeta_inv))?;

    if pp.degree() != Some(ell as usize) || qq.degree() != Some(ell as usize - 1) {
        return Err(Error::InvariantViolated("unexpected degrees of P, Q".into()));
    }
    if !pp.gcd(&qq)?.is_one() {
        return Err(Error::InvariantViolated("P and Q share a factor".into()));
    }
    let min_poly = Poly::new(&base, vec![base.one(), -&omega, base.one()]);
    if !min_poly.is_irreducible()? {
        return Err(Error::InvariantViolated(
            "u^2 - omega u + 1 is reducible".into(),
        ));
    }
    let l = base.from_u64(ell);
    let four_minus = &base.from_u64(4) - &(&omega * &omega);
    let disc_const = &l.pow(ell) * &four_minus.pow((ell - 1) * (ell - 2) / 2);
    if disc_const.is_zero() {
        return Err(Error::InvariantViolated("discriminant constant vanishes".into()));
    }
    let r = RatFunc::new(pp.clone(), qq.clone())?;
    Ok(RikunaSystem {
        ell,
        base,
        ext,
        emb,
        zeta,
        omega,
        p: pp,
        q: qq,
        r,
        disc_const,
    })
}

impl RikunaSystem {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    /// The chosen primitive `l`-th root of unity in `F_{q^2}`.
    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    pub fn omega(&self) -> &FieldElement {
        &self.omega
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn r(&self) -> &RatFunc {
        &self.r
    }

    pub fn disc_const(&self) -> &FieldElement {
        &self.disc_const
    }

    /// `l` as an element of `F_q`.
    pub fn ell_elem(&self) -> FieldElement {
        self.base.from_u64(self.ell)
    }

    /// `u^2 - omega u + 1`.
    pub fn omega_quadratic(&self) -> Poly {
        Poly::new(
            &self.base,
            vec![self.base.one(), -&self.omega, self.base.one()],
        )
    }

    fn lift(&self, target: &Field) -> Result<(Poly, Poly)> {
        if target == &self.base {
            Ok((self.p.clone(), self.q.clone()))
        } else if target == &self.ext {
            Ok((self.p.embed(&self.emb), self.q.embed(&self.emb)))
        } else {
            let emb = Embedding::new(&self.base, target)?;
            Ok((self.p.embed(&emb), self.q.embed(&emb)))
        }
    }

    fn lift_elem(&self, x: &FieldElement, target: &Field) -> Result<FieldElement> {
        if x.field() == target {
            Ok(x.clone())
        } else if target == &self.ext {
            Ok(self.emb.embed(x))
        } else {
            Ok(Embedding::new(x.field(), target)?.embed(x))
        }
    }

    /// `P(X) - u0 Q(X)` over the field of `u0`.
    pub fn specialize_f(&self, u0: &FieldElement) -> Result<Poly> {
        let (p, q) = self.lift(u0.field())?;
        Ok(&p - &q.scale(u0))
    }

    /// Right-hand side of the discriminant identity at `u0`.
    pub fn predicted_discriminant(&self, u0: &FieldElement) -> Result<FieldElement> {
        let field = u0.field();
        let c = self.lift_elem(&self.disc_const, field)?;
        let w = self.lift_elem(&self.omega, field)?;
        let quad = &(&(u0 * u0) - &(&w * u0)) + &field.one();
        Ok(&c * &quad.pow(self.ell - 1))
    }

    /// Compares the resultant discriminant of `F(X, u0)` with the closed form.
    pub fn verify_discriminant(&self, u0: &FieldElement) -> Result<bool> {
        let lhs = discriminant(&self.specialize_f(u0)?)?;
        Ok(lhs == self.predicted_discriminant(u0)?)
    }

    /// The discriminant of `F(X, u)` is a polynomial of degree at most `2l - 1`
    /// in `u`, so agreement at `2l` distinct points proves the identity.
    pub fn certify_discriminant_identity(&self) -> Result<bool> {
        let needed = 2 * self.ell;
        let mut k = 2;
        let field = loop {
            let f = make_field(self.base.p(), self.base.e() * k)?;
            if f.q() >= needed {
                break f;
            }
            k *= 2;
        };
        for idx in 0..needed {
            if !self.verify_discriminant(&field.from_index(idx))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `X_j = r^{(j)}(T)`; refuses when `l^j` exceeds `degree_bound`.
    pub fn iterate_r(&self, j: u32, degree_bound: u64) -> Result<RatFunc> {
        let degree = self.ell.checked_pow(j).unwrap_or(u64::MAX);
        if degree > degree_bound {
            return Err(Error::DegreeBound {
                degree,
                bound: degree_bound,
            });
        }
        let mut x = RatFunc::identity(&self.base);
        for _ in 0..j {
            x = self.r.compose(&x)?;
        }
        Ok(x)
    }

    /// Checks `P(prev) - next Q(prev) = 0` with denominators cleared, where
    /// `P` and `Q` are homogenized to degree `l` independently of composition.
    pub fn satisfies_recursion(&self, prev: &RatFunc, next: &RatFunc) -> Result<bool> {
        let l = self.ell as usize;
        let (a, b) = (prev.num(), prev.den());
        let form = |f: &Poly| -> Poly {
            let mut acc = Poly::zero(&self.base);
            for (i, c) in f.coeffs().iter().enumerate() {
                acc = &acc + &(&a.pow(i as u64) * &b.pow((l - i) as u64)).scale(c);
            }
            acc
        };
        let lhs = &(&form(&self.p) * next.den()) - &(&form(&self.q) * next.num());
        Ok(lhs.is_zero())
    }

    /// Generator `X -> (X + 1) / (omega + 1 - X)` of the automorphism group
    /// of the cyclic cover defined by `r`.
    pub fn sigma(&self) -> Result<RatFunc> {
        let one = self.base.one();
        RatFunc::new(
            Poly::new(&self.base, vec![one.clone(), one.clone()]),
            Poly::new(&self.base, vec![&self.omega + &one, -&one]),
        )
    }

    /// Iterates `r` on an element, `None` when a pole is hit.
    pub fn r_iterate_at(&self, x: &FieldElement, times: u32) -> Result<Option<FieldElement>> {
        let mut cur = x.clone();
        for _ in 0..times {
            match self.r.eval(&cur)? {
                Some(v) => cur = v,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    pub fn structural_checks<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<StructuralReport> {
        let q_separable = self.q.is_squarefree()?;
        let zeta_p = self.p.eval(&self.zeta)?;
        let zeta_q = self.q.eval(&self.zeta)?;
        let r_fixes_zeta = zeta_p == &self.zeta * &zeta_q;
        let descent_ok = true; // enforced by construction

        let sigma = self.sigma()?;
        let mut s = RatFunc::identity(&self.base);
        let mut sigma_order = None;
        for k in 1..=self.ell {
            s = sigma.compose(&s)?;
            if s == RatFunc::identity(&self.base) {
                sigma_order = Some(k);
                break;
            }
        }
        let sigma_preserves_r = self.r.compose(&sigma)? == self.r;

        let discriminant_identity = self.certify_discriminant_identity()?;
        let mut random_disc_ok = true;
        for _ in 0..samples {
            let u0 = self.ext.from_index(rng.gen_range(0..self.ext.q()));
            random_disc_ok &= self.verify_discriminant(&u0)?;
        }

        let splitting = self.splitting_checks(3)?;
        let all_ok = q_separable
            && r_fixes_zeta
            && sigma_order == Some(self.ell)
            && sigma_preserves_r
            && discriminant_identity
            && random_disc_ok
            && splitting.iter().all(|s| s.ok());
        Ok(StructuralReport {
            q_separable,
            r_fixes_zeta,
            descent_ok,
            sigma_order,
            sigma_preserves_r,
            discriminant_identity,
            random_discriminant_samples: samples,
            random_discriminant_ok: random_disc_ok,
            splitting,
            all_ok,
        })
    }

    /// For the first `count` values `u0` in `F_q` with `F(X, u0)` irreducible,
    /// checks that it splits into `l` linear factors over `F_{q^l}` and that
    /// the roots form one orbit under the automorphism `sigma`.
    pub fn splitting_checks(&self, count: usize) -> Result<Vec<SplitCheck>> {
        let big = make_field(self.base.p(), self.base.e() * self.ell as u32)?;
        let emb = Embedding::new(&self.base, &big)?;
        let sigma = self.sigma()?;
        let sigma_big = (sigma.num().embed(&emb), sigma.den().embed(&emb));
        let mut out = Vec::new();
        for u0 in self.base.elements() {
            if out.len() >= count {
                break;
            }
            let f = self.specialize_f(&u0)?;
            if !f.is_irreducible()? {
                continue;
            }
            let fb = f.embed(&emb);
            let factors = fb.factor()?;
            let linear_factors = factors
                .iter()
                .filter(|(g, k)| g.degree() == Some(1) && *k == 1)
                .count();
            let roots = fb.roots()?;
            let mut orbit_ok = roots.len() == self.ell as usize;
            if orbit_ok {
                let mut x = roots[0].clone();
                let mut seen = vec![x.clone()];
                for _ in 1..self.ell {
                    let den = sigma_big.1.eval(&x)?;
                    if den.is_zero() {
                        orbit_ok = false;
                        break;
                    }
                    x = sigma_big.0.eval(&x)?.try_div(&den)?;
                    if seen.contains(&x) || !roots.contains(&x) {
                        orbit_ok = false;
                        break;
                    }
                    seen.push(x.clone());
                }
            }
            out.push(SplitCheck {
                u0: u0.to_string(),
                irreducible: true,
                linear_factors,
                expected_linear_factors: self.ell as usize,
                sigma_orbit: orbit_ok,
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitCheck {
    pub u0: String,
    pub irreducible: bool,
    pub linear_factors: usize,
    pub expected_linear_factors: usize,
    pub sigma_orbit: bool,
}

impl SplitCheck {
    fn ok(&self) -> bool {
        self.irreducible && self.sigma_orbit && self.linear_factors == self.expected_linear_factors
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralReport {
    pub q_separable: bool,
    pub r_fixes_zeta: bool,
    pub descent_ok: bool,
    pub sigma_order: Option<u64>,
    pub sigma_preserves_r: bool,
    pub discriminant_identity: bool,
    pub random_discriminant_samples: usize,
    pub random_discriminant_ok: bool,
    pub splitting: Vec<SplitCheck>,
    pub all_ok: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ell3_q5() {
        let sys = build_rikuna(5, 3).unwrap();
        let f = sys.base().clone();
        assert_eq!(sys.p(), &Poly::from_i64s(&f, &[4, 2, 0, 1]));
        assert_eq!(sys.q(), &Poly::from_i64s(&f, &[0, 3, 3]));
        assert_eq!(sys.omega(), &f.from_u64(4));
        assert_eq!(sys.zeta().to_string(), "2+s");
        assert_eq!(
            sys.specialize_f(&f.from_u64(3)).unwrap(),
            Poly::from_i64s(&f, &[4, 3, 1, 1])
        );
        assert_eq!(sys.specialize_f(&f.zero()).unwrap(), *sys.p());
    }

    #[test]
    fn hypotheses() {
        assert!(matches!(build_rikuna(7, 3), Err(Error::Hypothesis(_))));
        assert!(matches!(build_rikuna(9, 3), Err(Error::Hypothesis(_))));
        assert!(matches!(build_rikuna(5, 4), Err(Error::Hypothesis(_))));
        assert_eq!(build_rikuna(12, 5).unwrap_err(), Error::NotPrimePower(12));
    }

    #[test]
    fn discriminant_at_zeta_vanishes() {
        let sys = build_rikuna(5, 3).unwrap();
        let z = sys.zeta().clone();
        let f = sys.specialize_f(&z).unwrap();
        assert!(f.eval(&z).unwrap().is_zero());
        assert!(discriminant(&f).unwrap().is_zero());
        assert!(sys.verify_discriminant(&z).unwrap());
        assert!(sys.verify_discriminant(&sys.base().from_u64(3)).unwrap());
        assert!(sys.certify_discriminant_identity().unwrap());
    }

    #[test]
    fn iterates() {
        let sys = build_rikuna(5, 3).unwrap();
        let t = sys.base().clone();
        assert_eq!(sys.iterate_r(0, 100).unwrap(), RatFunc::identity(&t));
        assert_eq!(sys.iterate_r(1, 100).unwrap(), *sys.r());
        let x2 = sys.iterate_r(2, 100).unwrap();
        assert_eq!(x2.degree(), 9);
        assert!(sys.satisfies_recursion(sys.r(), &x2).unwrap());
        assert!(!sys.satisfies_recursion(&x2, sys.r()).unwrap());
        assert!(matches!(sys.iterate_r(3, 10), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn structure_ell3_q5() {
        let sys = build_rikuna(5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = sys.structural_checks(&mut rng, 10).unwrap();
        assert!(rep.all_ok, "{rep:?}");
        assert_eq!(rep.sigma_order, Some(3));
        let sigma2 = sys.sigma().unwrap().compose(&sys.sigma().unwrap()).unwrap();
        let f = sys.base().clone();
        // Shanks: x -> -1/(x+1)
        let shanks = RatFunc::new(Poly::from_i64s(&f, &[-1]), Poly::from_i64s(&f, &[1, 1])).unwrap();
        assert_eq!(sigma2, shanks);
    }
}
