use indivisible_core::admissibility::enumerate_candidates;
use indivisible_core::Result;
use serde::Serialize;

use crate::verify::{self, Status, VerifyParams};

pub const CSV_HEADER: &str = "q,ell,m,n,congruent,admissible,gamma,genus,h,ell_divides_h,status";

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub q: u64,
    pub ell: u64,
    pub m: u64,
    pub n: u32,
    pub congruent: bool,
    pub admissible: bool,
    pub gamma: Option<String>,
    pub genus: Option<u64>,
    pub h: Option<String>,
    pub ell_divides_h: Option<bool>,
    pub status: String,
    pub reason: Option<String>,
}

impl Row {
    pub fn csv(&self) -> String {
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.q,
            self.ell,
            self.m,
            self.n,
            self.congruent,
            self.admissible,
            opt(&self.gamma),
            self.genus.map(|g| g.to_string()).unwrap_or_default(),
            opt(&self.h),
            self.ell_divides_h.map(|b| b.to_string()).unwrap_or_default(),
            self.status
        )
    }

    pub fn failed(&self) -> bool {
        self.status == "FAIL"
    }
}

/// One row per candidate `q <= q_max` and level `n <= n_max`. Rows after a
/// budget refusal for the same `q` are marked without running.
pub fn survey(base: &VerifyParams, q_max: u64, n_max: u32) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for cand in enumerate_candidates(base.ell, base.m, q_max)? {
        let mut refused = false;
        for n in 1..=n_max {
            let mut row = Row {
                q: cand.q,
                ell: base.ell,
                m: base.m,
                n,
                congruent: true,
                admissible: cand.admissible,
                gamma: None,
                genus: None,
                h: None,
                ell_divides_h: None,
                status: "SKIPPED".into(),
                reason: None,
            };
            if refused {
                row.status = "BUDGET".into();
                row.reason = Some("a lower level already exceeded the budget".into());
                rows.push(row);
                continue;
            }
            let params = VerifyParams {
                q: cand.q,
                n,
                ..base.clone()
            };
            let cert = verify::run(&params);
            row.gamma = cert.gamma.as_ref().map(|g| g.gamma.to_string());
            row.genus = cert
                .genus
                .as_ref()
                .and_then(|g| g.riemann_hurwitz)
                .or_else(|| cert.gamma.as_ref().map(|_| (base.ell.pow(n) - 1) * (base.m - 1)));
            row.h = cert.class_number.clone();
            row.ell_divides_h = cert.ell_divides;
            row.status = match cert.status {
                Status::Ok => "OK",
                Status::Fail => "FAIL",
                Status::Budget => "BUDGET",
                Status::Invalid => "SKIPPED",
            }
            .into();
            row.reason = cert.error.clone();
            refused = cert.status == Status::Budget;
            rows.push(row);
        }
    }
    Ok(rows)
}
