//! The tower `M_n = F_q(T)(Z)` with `Z^m = l X_n + gamma`, `X_n = r^{(n)}(T)`,
//! and the structural checks on it.

use rand::Rng;
use serde::Serialize;

use crate::admissibility::decompose_m;
use crate::arith;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::gamma::{find_gamma, lang_test, GammaCertificate};
use crate::poly::{berlekamp_factor_count, discriminant, factor_oracle, Poly, RatFunc};
use crate::rikuna::{build_rikuna, RikunaSystem};

/// Default cap on `deg X_n = l^n`.
pub const DEFAULT_DEGREE_BOUND: u64 = 10_000;

/// Above this degree, branch data is reported by multiplicity bundles only.
const FACTOR_DEGREE_CAP: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct BranchData {
    /// Monic polynomial (a single place, or a product of places sharing `v`),
    /// or `"inf"`.
    pub locus: String,
    pub v: i64,
    pub d: u64,
    pub e: u64,
    /// Sum of the place degrees in this entry.
    pub degree: usize,
    /// Whether `locus` is one place (known only when it was factored).
    pub single_place: bool,
}

/// The superelliptic curve `Z^m = f(T)`.
#[derive(Clone, Debug)]
pub struct KummerCurve {
    m: u64,
    f: RatFunc,
}

impl KummerCurve {
    pub fn new(m: u64, f: RatFunc) -> Result<Self> {
        if m == 0 {
            return Err(Error::NonPositiveExponent);
        }
        if f.num().is_zero() {
            return Err(Error::InvalidInput("f must be nonzero".into()));
        }
        if m.is_multiple_of(f.field().p()) {
            return Err(Error::WildRamification);
        }
        // Z^m - f stays irreducible over the algebraic closure iff the
        // valuations of f share no factor with m.
        let curve = KummerCurve { m, f };
        let mut g = arith::gcd(m, curve.v_infinity().unsigned_abs());
        for b in curve.branch_bundles()? {
            g = arith::gcd(g, b.v.unsigned_abs());
        }
        if g != 1 {
            return Err(Error::Hypothesis(format!(
                "every valuation of f is divisible by {g}, so Z^{m} = f is not geometrically irreducible"
            )));
        }
        Ok(curve)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn f(&self) -> &RatFunc {
        &self.f
    }

    /// `v_inf(f) = deg den - deg num`.
    pub fn v_infinity(&self) -> i64 {
        self.f.den().deg() as i64 - self.f.num().deg() as i64
    }

    fn entry(&self, locus: String, v: i64, degree: usize, single_place: bool) -> BranchData {
        let d = arith::gcd(self.m, v.unsigned_abs());
        BranchData {
            locus,
            v,
            d,
            e: self.m / d,
            degree,
            single_place,
        }
    }

    fn infinity_entry(&self) -> Option<BranchData> {
        let v = self.v_infinity();
        (v != 0).then(|| self.entry("inf".into(), v, 1, true))
    }

    /// Places with `v != 0`, grouped by valuation via squarefree decomposition.
    pub fn branch_bundles(&self) -> Result<Vec<BranchData>> {
        let mut out = Vec::new();
        for (poly, sign) in [(self.f.num(), 1i64), (self.f.den(), -1)] {
            if poly.deg() == 0 {
                continue;
            }
            for (g, k) in poly.squarefree_decomposition()? {
                let single = g.deg() == 1;
                out.push(self.entry(g.to_string(), sign * k as i64, g.deg(), single));
            }
        }
        out.extend(self.infinity_entry());
        Ok(out)
    }

    /// Individual places with `v != 0`; `None` when the degree is too large
    /// to factor routinely.
    pub fn branch_places(&self) -> Result<Option<Vec<BranchData>>> {
        if self.f.degree() > FACTOR_DEGREE_CAP {
            return Ok(None);
        }
        let mut out = Vec::new();
        for (poly, sign) in [(self.f.num(), 1i64), (self.f.den(), -1)] {
            if poly.deg() == 0 {
                continue;
            }
            for (g, k) in poly.factor()? {
                out.push(self.entry(g.to_string(), sign * k as i64, g.deg(), true));
            }
        }
        out.extend(self.infinity_entry());
        Ok(Some(out))
    }

    /// Riemann-Hurwitz: `2g - 2 = -2m + sum (e_P - 1) deg P`.
    pub fn genus(&self) -> Result<u64> {
        let ram: u64 = self
            .branch_bundles()?
            .iter()
            .map(|b| (b.e - 1) * b.degree as u64)
            .sum();
        let two_g = 2 + ram as i128 - 2 * self.m as i128;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(Error::InvariantViolated(format!(
                "Riemann-Hurwitz gives 2g = {two_g}"
            )));
        }
        Ok((two_g / 2) as u64)
    }

    /// Number of geometric branch points (places with `e > 1` over the
    /// algebraic closure).
    pub fn geometric_branch_points(&self) -> Result<usize> {
        Ok(self
            .branch_bundles()?
            .iter()
            .filter(|b| b.e > 1)
            .map(|b| b.degree)
            .sum())
    }
}

#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub q: u64,
    pub ell: u64,
    pub m: u64,
    pub n: u32,
    pub sys: RikunaSystem,
    pub gamma: GammaCertificate,
    pub x_n: RatFunc,
    pub curve: KummerCurve,
}

/// Checks the hypotheses, finds `gamma` and materializes the level-`n` curve.
pub fn build_tower(q: u64, ell: u64, m: u64, n: u32, degree_bound: u64) -> Result<TowerSpec> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let sys = build_rikuna(q, ell)?;
    let dec = decompose_m(m, ell)?;
    if dec.t_ell != 0 {
        return Err(Error::Hypothesis(format!("l = {ell} divides m = {m}")));
    }
    if q % dec.m_0 != 1 {
        return Err(Error::Hypothesis(format!(
            "q = {q} is not 1 mod m_0 = {}",
            dec.m_0
        )));
    }
    let gamma = find_gamma(&sys, m)?;
    build_tower_from(&sys, &gamma, n, degree_bound)
}

/// Level-`n` tower for an existing system and certificate.
pub fn build_tower_from(
    sys: &RikunaSystem,
    gamma: &GammaCertificate,
    n: u32,
    degree_bound: u64,
) -> Result<TowerSpec> {
    let x_n = sys.iterate_r(n, degree_bound)?;
    let f = x_n.scale(&sys.ell_elem())?.add_const(&gamma.gamma)?;
    let curve = KummerCurve::new(gamma.m, f)?;
    Ok(TowerSpec {
        q: sys.base().q(),
        ell: sys.ell(),
        m: gamma.m,
        n,
        sys: sys.clone(),
        gamma: gamma.clone(),
        x_n,
        curve,
    })
}

impl TowerSpec {
    /// `(l^n - 1)(m - 1)`.
    pub fn expected_genus(&self) -> u64 {
        (self.ell.pow(self.n) - 1) * (self.m - 1)
    }

    /// `-gamma / l`.
    pub fn u_star(&self) -> Result<FieldElement> {
        Ok(-&self.gamma.gamma.try_div(&self.sys.ell_elem())?)
    }
}

/// `2 g_n - 2 = l^{n-1} (2 g_1 - 2) + (l^{n-1} - 1) 2m`.
pub fn genus_recursion_holds(ell: u64, m: u64, n: u32, g_1: u64, g_n: u64) -> bool {
    let k = ell.pow(n - 1) as i128;
    2 * g_n as i128 - 2 == k * (2 * g_1 as i128 - 2) + (k - 1) * 2 * m as i128
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: u32,
    pub p_i_irreducible: bool,
    pub oracle_agrees: bool,
    pub disc_samples: usize,
    pub disc_ok: bool,
    pub root_relation_ok: bool,
}

impl LevelReport {
    pub fn ok(&self) -> bool {
        self.p_i_irreducible && self.oracle_agrees && self.disc_ok && self.root_relation_ok
    }
}

/// Level `i` adjoins `X_{n-i}`, a root of `F(X, X_{n-i+1})`. The discriminant
/// identity is sampled at values of `X_{n-i+1}` at random points of `F_{q^2}`.
pub fn level_checks<R: Rng>(spec: &TowerSpec, i: u32, rng: &mut R, samples: usize) -> Result<LevelReport> {
    if i == 0 || i > spec.n {
        return Err(Error::InvalidInput(format!("level {i} outside 1..={}", spec.n)));
    }
    let sys = &spec.sys;
    let quad = sys.omega_quadratic();
    let p_i_irreducible = quad.is_irreducible()?;
    let fac = factor_oracle(&quad)?;
    let oracle_agrees = (fac.len() == 1 && fac[0].1 == 1) == p_i_irreducible;

    let ext = sys.ext();
    let lower = spec.n - i;
    let mut checked = 0;
    let mut disc_ok = true;
    let mut root_relation_ok = true;
    let mut attempts = 0;
    while checked < samples && attempts < 20 * samples.max(1) {
        attempts += 1;
        let t = ext.from_index(rng.gen_range(0..ext.q()));
        let Some(x) = sys.r_iterate_at(&t, lower)? else {
            continue;
        };
        let Some(u0) = sys.r_iterate_at(&x, 1)? else {
            continue;
        };
        disc_ok &= sys.verify_discriminant(&u0)?;
        root_relation_ok &= sys.specialize_f(&u0)?.eval(&x)?.is_zero();
        checked += 1;
    }
    Ok(LevelReport {
        level: i,
        p_i_irreducible,
        oracle_agrees,
        disc_samples: checked,
        disc_ok,
        root_relation_ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InertnessReport {
    pub level: u32,
    pub residue: String,
    pub zeta_fixed: bool,
    pub inert: bool,
    pub conjugate_inert: bool,
}

impl InertnessReport {
    pub fn ok(&self) -> bool {
        self.zeta_fixed && self.inert && self.inert == self.conjugate_inert
    }
}

/// The place `X_{n-i} = zeta` has residue field `F_{q^2}`, where
/// `l X_n + gamma` reduces to `l r^{(i)}(zeta) + gamma`. It is inert in
/// `M_i` exactly when `X^m` minus that residue is irreducible.
pub fn inertness_with_gamma(
    sys: &RikunaSystem,
    gamma: &FieldElement,
    m: u64,
    i: u32,
) -> Result<InertnessReport> {
    let emb = sys.embedding();
    let l = emb.embed(&sys.ell_elem());
    let g = emb.embed(gamma);
    let zeta = sys.zeta();
    let zeta_inv = zeta.inv()?;
    let z = sys.r_iterate_at(zeta, i)?;
    let z_conj = sys.r_iterate_at(&zeta_inv, i)?;
    let zeta_fixed = z.as_ref() == Some(zeta) && z_conj.as_ref() == Some(&zeta_inv);
    let residue = &(&l * z.as_ref().unwrap_or(zeta)) + &g;
    let residue_conj = &(&l * z_conj.as_ref().unwrap_or(&zeta_inv)) + &g;
    let inert = !residue.is_zero() && lang_test(&residue, m)?;
    let conjugate_inert = !residue_conj.is_zero() && lang_test(&residue_conj, m)?;
    Ok(InertnessReport {
        level: i,
        residue: residue.to_string(),
        zeta_fixed,
        inert,
        conjugate_inert,
    })
}

pub fn inertness_check(spec: &TowerSpec, i: u32) -> Result<InertnessReport> {
    if i == 0 || i > spec.n {
        return Err(Error::InvalidInput(format!("level {i} outside 1..={}", spec.n)));
    }
    inertness_with_gamma(&spec.sys, &spec.gamma.gamma, spec.m, i)
}

#[derive(Clone, Debug, Serialize)]
pub struct RamificationReport {
    pub numerator: String,
    pub denominator: String,
    pub disc: String,
    pub disc_formula: String,
    pub disc_matches_formula: bool,
    /// The same expression without the exponent `l - 1` on the norm factor;
    /// kept for comparison, it agrees only when that factor is 1.
    pub disc_formula_without_power: String,
    pub disc_nonzero: bool,
    pub numerator_roots: usize,
    pub denominator_roots: usize,
    pub coprime: bool,
    pub q_separable: bool,
    pub infinity_ramified: bool,
    pub distinct_branch_points: usize,
    pub q_z: String,
    pub q_z_degree: usize,
    pub q_z_irreducible: bool,
    pub q_z_oracle: String,
    pub q_z_oracle_agrees: bool,
    pub ell_not_dividing_2m: bool,
    pub conjugates_agree: bool,
    pub branch_places: Vec<BranchData>,
}

impl RamificationReport {
    pub fn ok(&self, ell: u64) -> bool {
        self.disc_matches_formula
            && self.disc_nonzero
            && self.numerator_roots == ell as usize
            && self.denominator_roots == ell as usize - 1
            && self.coprime
            && self.q_separable
            && self.infinity_ramified
            && self.distinct_branch_points == 2 * ell as usize
            && self.q_z_irreducible
            && self.q_z_oracle_agrees
            && self.ell_not_dividing_2m
            && self.conjugates_agree
    }
}

/// `(Z^m - gamma)^2 - l omega (Z^m - gamma) + l^2`.
pub fn q_z_polynomial(sys: &RikunaSystem, gamma: &FieldElement, m: u64) -> Poly {
    let f = sys.base();
    let mut w = vec![f.zero(); m as usize + 1];
    w[0] = -gamma;
    w[m as usize] = f.one();
    let w = Poly::new(f, w);
    let l = sys.ell_elem();
    &(&(&w * &w) - &w.scale(&(&l * sys.omega()))) + &Poly::constant(&l * &l)
}

/// Irreducibility of a squarefree polynomial by a method independent of
/// Rabin's test: trial division when small, else the Berlekamp nullity.
pub fn oracle_irreducible(f: &Poly) -> Result<(bool, &'static str)> {
    match factor_oracle(f) {
        Ok(fac) => Ok((fac.len() == 1 && fac[0].1 == 1, "trial-division")),
        Err(Error::OracleBound(_)) => Ok((
            f.is_squarefree()? && berlekamp_factor_count(f)? == 1,
            "berlekamp-nullity",
        )),
        Err(e) => Err(e),
    }
}

/// Ramification of `M_1 / F_q(T)`.
pub fn ramification_report_m1(spec: &TowerSpec) -> Result<RamificationReport> {
    let sys = &spec.sys;
    let ell = sys.ell();
    let f = sys.base();
    let gamma = &spec.gamma.gamma;
    let u_star = spec.u_star()?;
    let fs = sys.specialize_f(&u_star)?;
    let disc = discriminant(&fs)?;

    let l = sys.ell_elem();
    let w = sys.omega();
    let norm = &(&(gamma * gamma) + &(&(&l * w) * gamma)) + &(&l * &l);
    let const_part = &l.inv()?.pow(ell - 2)
        * &(&f.from_u64(4) - &(w * w)).pow((ell - 1) * (ell - 2) / 2);
    let formula = &const_part * &norm.pow(ell - 1);
    let formula_without_power = &const_part * &norm;

    let level1 = build_tower_from(sys, &spec.gamma, 1, DEFAULT_DEGREE_BOUND)?;
    let curve = &level1.curve;
    let num_matches = curve.f().num().monic() == fs.monic();
    let den_matches = curve.f().den().monic() == sys.q().monic();
    if !(num_matches && den_matches) {
        return Err(Error::InvariantViolated(
            "l r + gamma does not have numerator F(T, -gamma/l) over Q".into(),
        ));
    }
    let numerator_roots = if fs.is_squarefree()? { fs.deg() } else { 0 };
    let q_separable = sys.q().is_squarefree()?;
    let denominator_roots = if q_separable { sys.q().deg() } else { 0 };
    let coprime = fs.gcd(sys.q())?.is_one();
    let infinity_ramified = curve.v_infinity() == -1;

    let q_z = q_z_polynomial(sys, gamma, spec.m);
    let q_z_irreducible = q_z.is_irreducible()?;
    let (oracle_verdict, method) = oracle_irreducible(&q_z)?;

    let emb = sys.embedding();
    let lz = &emb.embed(&l) * sys.zeta();
    let lz_conj = &emb.embed(&l) * &sys.zeta().inv()?;
    let conj_a = lang_test(&(&lz + &emb.embed(gamma)), spec.m)?;
    let conj_b = lang_test(&(&lz_conj + &emb.embed(gamma)), spec.m)?;

    Ok(RamificationReport {
        numerator: fs.to_string(),
        denominator: sys.q().to_string(),
        disc: disc.to_string(),
        disc_formula: formula.to_string(),
        disc_matches_formula: disc == formula,
        disc_formula_without_power: formula_without_power.to_string(),
        disc_nonzero: !disc.is_zero(),
        numerator_roots,
        denominator_roots,
        coprime,
        q_separable,
        infinity_ramified,
        distinct_branch_points: curve.geometric_branch_points()?,
        q_z_degree: q_z.deg(),
        q_z: q_z.to_string(),
        q_z_irreducible,
        q_z_oracle: method.to_string(),
        q_z_oracle_agrees: oracle_verdict == q_z_irreducible,
        ell_not_dividing_2m: !(2 * spec.m).is_multiple_of(ell),
        conjugates_agree: conj_a == conj_b,
        branch_places: curve.branch_places()?.unwrap_or_default(),
    })
}

/// A simple zero of `f` gives a totally ramified place, which forces the
/// constant field of `Z^m = f` to stay `F_q`.
pub fn simple_zero_criterion(f: &RatFunc) -> Result<bool> {
    let num = f.num();
    Ok(num.deg() > 0 && num.is_squarefree()?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantFieldReport {
    pub specialization_squarefree: bool,
    pub curve_numerator_squarefree: bool,
    pub inert_all_levels: bool,
    pub geometric: bool,
}

pub fn constant_field_check(spec: &TowerSpec) -> Result<ConstantFieldReport> {
    let fs = spec.sys.specialize_f(&spec.u_star()?)?;
    let specialization_squarefree = fs.is_squarefree()?;
    let curve_numerator_squarefree = simple_zero_criterion(spec.curve.f())?;
    let mut inert_all_levels = true;
    for i in 1..=spec.n {
        inert_all_levels &= inertness_check(spec, i)?.ok();
    }
    Ok(ConstantFieldReport {
        specialization_squarefree,
        curve_numerator_squarefree,
        inert_all_levels,
        geometric: specialization_squarefree && curve_numerator_squarefree && inert_all_levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tower_5_3_2_1() {
        let spec = build_tower(5, 3, 2, 1, DEFAULT_DEGREE_BOUND).unwrap();
        let t = spec.sys.base().clone();
        let expected = RatFunc::new(
            Poly::from_i64s(&t, &[4, 3, 1, 1]),
            Poly::from_i64s(&t, &[0, 1, 1]),
        )
        .unwrap();
        assert_eq!(spec.curve.f(), &expected);
        assert_eq!(spec.curve.genus().unwrap(), 2);
        let places = spec.curve.branch_places().unwrap().unwrap();
        assert_eq!(places.len(), 4);
        assert!(places.iter().all(|p| p.e == 2));
        assert!(matches!(build_tower(7, 3, 2, 1, 100), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn genus_level_two() {
        let spec = build_tower(5, 3, 2, 2, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(spec.curve.genus().unwrap(), 8);
        assert!(genus_recursion_holds(3, 2, 2, 2, 8));
    }

    #[test]
    fn rejects_non_geometric_curves() {
        let f = make_field(5, 1).unwrap();
        let sq = RatFunc::from_poly(Poly::from_i64s(&f, &[1, 2, 1]));
        assert!(matches!(KummerCurve::new(2, sq.clone()), Err(Error::Hypothesis(_))));
        assert!(KummerCurve::new(3, sq).is_ok());
        let c = RatFunc::from_poly(Poly::from_i64s(&f, &[2]));
        assert!(KummerCurve::new(2, c).is_err());
    }

    #[test]
    fn rational_curve() {
        for q in [3, 5, 7] {
            let f = make_field(q, 1).unwrap();
            let c = KummerCurve::new(2, RatFunc::identity(&f)).unwrap();
            assert_eq!(c.genus().unwrap(), 0);
        }
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(
            KummerCurve::new(3, RatFunc::identity(&f3)).unwrap_err(),
            Error::WildRamification
        );
    }

    #[test]
    fn ramification_5_3_2() {
        let spec = build_tower(5, 3, 2, 1, DEFAULT_DEGREE_BOUND).unwrap();
        let rep = ramification_report_m1(&spec).unwrap();
        assert!(rep.ok(3), "{rep:?}");
        assert_eq!(rep.disc, "4");
        assert_eq!(rep.disc_formula_without_power, "2");
        let f = spec.sys.base().clone();
        assert_eq!(
            q_z_polynomial(&spec.sys, &spec.gamma.gamma, 2),
            Poly::from_i64s(&f, &[2, 0, 1, 0, 1])
        );
    }

    #[test]
    fn inertness() {
        let spec = build_tower(5, 3, 2, 2, DEFAULT_DEGREE_BOUND).unwrap();
        let a = inertness_check(&spec, 1).unwrap();
        let b = inertness_check(&spec, 2).unwrap();
        assert!(a.ok() && b.ok());
        assert_eq!(a.residue, b.residue);
        let bad = inertness_with_gamma(&spec.sys, &spec.sys.base().from_u64(3), 2, 1).unwrap();
        assert!(!bad.inert);
    }

    #[test]
    fn levels_and_constant_field() {
        let spec = build_tower(5, 3, 2, 2, DEFAULT_DEGREE_BOUND).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 1..=2 {
            let rep = level_checks(&spec, i, &mut rng, 20).unwrap();
            assert!(rep.ok() && rep.disc_samples == 20, "{rep:?}");
        }
        assert!(constant_field_check(&spec).unwrap().geometric);
        let f = spec.sys.base().clone();
        let square = RatFunc::new(
            Poly::from_i64s(&f, &[1, 2, 1]),
            Poly::from_i64s(&f, &[0, 1]),
        )
        .unwrap();
        assert!(!simple_zero_criterion(&square).unwrap());
    }
}
