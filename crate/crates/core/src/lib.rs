//! Explicit towers of function fields over `F_q(T)` whose class numbers are
//! prime to a given odd prime `l`, with exact verification.

pub mod admissibility;
pub mod arith;
pub mod error;
pub mod field;
pub mod gamma;
pub mod poly;
pub mod rikuna;
pub mod tower;
pub mod zeta;

pub use error::{Error, Result};
pub use field::{make_field, primitive_root_of_unity, Embedding, Field, FieldElement};
pub use poly::{Poly, RatFunc};
pub use rikuna::{build_rikuna, RikunaSystem};
pub use gamma::{find_gamma, lang_test, GammaCertificate, PowerSetReport};
pub use admissibility::{decompose_m, is_admissible, AdmissibilityReport};
pub use tower::{build_tower, KummerCurve, TowerSpec};
pub use zeta::{
    class_number, count_degree_one_places, curve_class_number, indivisibility_verdict, l_polynomial,
    tower_class_number, ClassNumberReport, LPolynomial, LevelVerdict, ZetaOptions,
};
