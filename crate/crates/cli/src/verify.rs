use std::collections::BTreeMap;
use std::time::Instant;

use indivisible_core::admissibility::is_admissible;
use indivisible_core::arith;
use indivisible_core::rikuna::StructuralReport;
use indivisible_core::tower::{
    build_tower_from, constant_field_check, inertness_check, level_checks, ramification_report_m1,
    ConstantFieldReport, InertnessReport, LevelReport, RamificationReport, DEFAULT_DEGREE_BOUND,
};
use indivisible_core::zeta::{tower_class_number, ClassNumberReport, ZetaOptions};
use indivisible_core::{build_rikuna, find_gamma, AdmissibilityReport, Error, GammaCertificate, LPolynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub q: u64,
    pub ell: u64,
    pub m: u64,
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
    pub zeta: ZetaOptions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Budget,
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Budget | Status::Invalid => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub q: u64,
    pub ell: u64,
    pub m: u64,
    pub n: u32,
    pub deep_check: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Genus {
    pub riemann_hurwitz: Option<u64>,
    pub l_degree_half: Option<u64>,
    pub expected: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub input: Input,
    pub admissibility: Option<AdmissibilityReport>,
    pub gamma: Option<GammaCertificate>,
    pub rikuna_checks: Option<StructuralReport>,
    pub ramification: Option<RamificationReport>,
    pub levels: Vec<LevelReport>,
    pub inertness: Vec<InertnessReport>,
    pub constant_field: Option<ConstantFieldReport>,
    pub genus: Option<Genus>,
    pub l_poly: Option<LPolynomial>,
    pub class_number: Option<String>,
    pub ell_divides: Option<bool>,
    pub zeta: Option<ClassNumberReport>,
    pub status: Status,
    pub error: Option<String>,
    pub seed: u64,
    pub version: &'static str,
    pub timings_ms: BTreeMap<&'static str, u128>,
}

impl Certificate {
    fn new(p: &VerifyParams) -> Self {
        Certificate {
            input: Input {
                q: p.q,
                ell: p.ell,
                m: p.m,
                n: p.n,
                deep_check: p.zeta.deep_check,
            },
            admissibility: None,
            gamma: None,
            rikuna_checks: None,
            ramification: None,
            levels: Vec::new(),
            inertness: Vec::new(),
            constant_field: None,
            genus: None,
            l_poly: None,
            class_number: None,
            ell_divides: None,
            zeta: None,
            status: Status::Fail,
            error: None,
            seed: p.seed,
            version: env!("CARGO_PKG_VERSION"),
            timings_ms: BTreeMap::new(),
        }
    }

    fn stop(mut self, status: Status, msg: impl Into<String>) -> Self {
        self.status = status;
        self.error = Some(msg.into());
        self
    }

    fn stop_on(self, e: Error) -> Self {
        let status = classify(&e);
        self.stop(status, e.to_string())
    }
}

pub fn classify(e: &Error) -> Status {
    match e {
        Error::BudgetExceeded { .. } | Error::DegreeBound { .. } => Status::Budget,
        Error::NoGamma { .. }
        | Error::InvariantViolated(_)
        | Error::OracleBound(_)
        | Error::DegenerateComposition => Status::Fail,
        _ => Status::Invalid,
    }
}

fn check_input(p: &VerifyParams) -> Result<(), String> {
    arith::prime_power(p.q).map_err(|e| e.to_string())?;
    if p.ell == 2 || !arith::is_prime(p.ell) {
        return Err(format!("l = {} is not an odd prime", p.ell));
    }
    if p.m < 2 {
        return Err(format!("m = {} must exceed 1", p.m));
    }
    if p.n == 0 || p.n > 20 {
        return Err(format!("n = {} outside 1..=20", p.n));
    }
    Ok(())
}

macro_rules! stage {
    ($cert:ident, $name:literal, $e:expr) => {{
        let t = Instant::now();
        let r = $e;
        $cert.timings_ms.insert($name, t.elapsed().as_millis());
        match r {
            Ok(v) => v,
            Err(e) => return $cert.stop_on(e),
        }
    }};
}

/// Runs every stage in order; the first failing stage fixes the status.
pub fn run(p: &VerifyParams) -> Certificate {
    let total = Instant::now();
    let mut cert = run_stages(p);
    cert.timings_ms.insert("total", total.elapsed().as_millis());
    cert
}

fn run_stages(p: &VerifyParams) -> Certificate {
    let mut cert = Certificate::new(p);
    if let Err(msg) = check_input(p) {
        return cert.stop(Status::Invalid, msg);
    }
    let adm = stage!(cert, "admissibility", is_admissible(p.q, p.ell, p.m));
    let congruent_ell = adm.congruent_ell == Some(true);
    let congruent_m0 = adm.congruent_m0 == Some(true);
    let m_0 = adm.decomposition.m_0;
    let t_ell = adm.decomposition.t_ell;
    cert.admissibility = Some(adm);
    if !congruent_ell {
        let r = p.q % p.ell;
        return cert.stop(
            Status::Invalid,
            format!("q ≡ {r} (mod {}) violates q ≡ −1 (mod ℓ)", p.ell),
        );
    }
    if !congruent_m0 {
        let r = p.q % m_0;
        return cert.stop(Status::Invalid, format!("q ≡ {r} (mod {m_0}) violates q ≡ 1 (mod m_0)"));
    }
    if t_ell != 0 {
        return cert.stop(Status::Invalid, format!("ℓ = {} divides m = {}", p.ell, p.m));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let sys = stage!(cert, "rikuna", build_rikuna(p.q, p.ell));
    let structural = stage!(cert, "rikuna_checks", sys.structural_checks(&mut rng, p.samples));
    let structural_ok = structural.all_ok;
    cert.rikuna_checks = Some(structural);
    if !structural_ok {
        return cert.stop(Status::Fail, "structural checks on F(X, u) failed");
    }

    let gamma = stage!(cert, "gamma", find_gamma(&sys, p.m));
    cert.gamma = Some(gamma.clone());

    let spec = stage!(cert, "tower", build_tower_from(&sys, &gamma, p.n, DEFAULT_DEGREE_BOUND));
    let ram = stage!(cert, "ramification", ramification_report_m1(&spec));
    let ram_ok = ram.ok(p.ell);
    cert.ramification = Some(ram);

    let t = Instant::now();
    for i in 1..=p.n {
        match level_checks(&spec, i, &mut rng, p.samples) {
            Ok(r) => cert.levels.push(r),
            Err(e) => return cert.stop_on(e),
        }
        match inertness_check(&spec, i) {
            Ok(r) => cert.inertness.push(r),
            Err(e) => return cert.stop_on(e),
        }
    }
    cert.timings_ms.insert("levels", t.elapsed().as_millis());
    let cf = stage!(cert, "constant_field", constant_field_check(&spec));
    let cf_ok = cf.geometric;
    cert.constant_field = Some(cf);

    let g = stage!(cert, "genus", spec.curve.genus());
    cert.genus = Some(Genus {
        riemann_hurwitz: Some(g),
        l_degree_half: None,
        expected: spec.expected_genus(),
    });
    let checks_ok = ram_ok
        && cf_ok
        && cert.levels.iter().all(|l| l.ok())
        && cert.inertness.iter().all(|r| r.ok())
        && g == spec.expected_genus();
    if !checks_ok {
        return cert.stop(Status::Fail, "tower checks failed");
    }

    let rep = match tower_class_number(&spec, &p.zeta) {
        Ok(r) => r,
        Err(Error::BudgetExceeded { required, budget }) => {
            return cert.stop(
                Status::Budget,
                format!(
                    "genus {g}: point counting needs {required} field evaluations, budget is {budget}"
                ),
            )
        }
        Err(e) => return cert.stop_on(e),
    };
    cert.timings_ms.insert("zeta", rep.elapsed_ms);
    if let Some(genus) = cert.genus.as_mut() {
        genus.l_degree_half = Some(rep.genus_l_degree_half);
    }
    cert.l_poly = Some(rep.l_poly.clone());
    cert.class_number = Some(rep.h.to_string());
    cert.ell_divides = Some(rep.ell_divides);
    let consistent = rep.consistent();
    let divides = rep.ell_divides;
    cert.zeta = Some(rep);
    if !consistent {
        return cert.stop(Status::Fail, "zeta cross-checks failed");
    }
    if divides {
        return cert.stop(Status::Fail, format!("{} divides the class number", p.ell));
    }
    cert.status = Status::Ok;
    cert
}
