use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indivisible_core::admissibility::{admissibility_constants, corollary_checks, is_admissible};
use indivisible_core::gamma::{complete_square, power_sets};
use indivisible_core::zeta::{ZetaOptions, DEFAULT_BUDGET, DEFAULT_DEEP_BUDGET};
use indivisible_core::{build_rikuna, find_gamma, Error};
use serde_json::{json, Value};

mod survey;
mod verify;

use verify::{Status, VerifyParams, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "indivisible", version, about = "Build and verify towers with class numbers prime to l")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for sampled checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for point counting; defaults to available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Count places beyond the genus and compare with the L-polynomial.
    #[arg(long)]
    deep_check: bool,
    /// Largest field size enumerated by a single deep check.
    #[arg(long, default_value_t = DEFAULT_DEEP_BUDGET)]
    deep_budget: u128,
    /// Cap on field evaluations for one class number.
    #[arg(long, env = "INDIV_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Sampled points per randomized check.
    #[arg(long, default_value_t = 16)]
    samples: usize,
}

impl Common {
    fn params(&self, q: u64, ell: u64, m: u64, n: u32) -> VerifyParams {
        VerifyParams {
            q,
            ell,
            m,
            n,
            seed: self.seed,
            samples: self.samples,
            zeta: ZetaOptions {
                budget: self.budget,
                deep_check: self.deep_check,
                deep_budget: self.deep_budget,
                threads: self.threads,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full pipeline for one tower level and emit a certificate.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u32,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate verdicts over every candidate q up to a bound.
    Survey {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long, default_value_t = 1)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Size bound, residue class and corollary inequalities for (l, m).
    Admissible {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Search for gamma over F_q.
    Gamma {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u64,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn invalid(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    2
}

fn cmd_verify(q: u64, ell: u64, m: u64, n: u32, json: Option<PathBuf>, common: &Common) -> u8 {
    let cert = verify::run(&common.params(q, ell, m, n));
    if let Err(e) = emit(&pretty(&cert), json.as_ref()) {
        return invalid(e);
    }
    match (&cert.status, &cert.error) {
        (Status::Ok, _) => eprintln!(
            "q={q} l={ell} m={m} n={n}: genus {}, h = {}, {ell} does not divide h",
            cert.genus.as_ref().and_then(|g| g.riemann_hurwitz).unwrap_or_default(),
            cert.class_number.as_deref().unwrap_or("?"),
        ),
        (_, Some(e)) => eprintln!("error: {e}"),
        _ => {}
    }
    cert.status.exit_code() as u8
}

fn cmd_survey(
    ell: u64,
    m: u64,
    q_max: u64,
    n_max: u32,
    format: Format,
    out: Option<PathBuf>,
    common: &Common,
) -> u8 {
    let rows = match survey::survey(&common.params(0, ell, m, 1), q_max, n_max) {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };
    let text = match format {
        Format::Csv => {
            let mut s = String::from(survey::CSV_HEADER);
            for r in &rows {
                s.push('\n');
                s.push_str(&r.csv());
            }
            s
        }
        Format::Json => pretty(&rows),
    };
    if let Err(e) = emit(&text, out.as_ref()) {
        return invalid(e);
    }
    u8::from(rows.iter().any(|r| r.failed()))
}

fn cmd_admissible(ell: u64, m: u64, q: Option<u64>) -> u8 {
    let rep = match q {
        Some(q) => is_admissible(q, ell, m),
        None => admissibility_constants(ell, m),
    };
    let rep = match rep {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };
    let m_0 = rep.decomposition.m_0;
    let corollary = if m_0 > 1 {
        match corollary_checks(ell, m_0) {
            Ok(c) => serde_json::to_value(c).expect("serializable"),
            Err(e) => return invalid(e),
        }
    } else {
        Value::Null
    };
    let mut v = serde_json::to_value(&rep).expect("serializable");
    v["corollary"] = corollary;
    println!("{}", pretty(&v));
    0
}

fn cmd_gamma(q: u64, ell: u64, m: u64) -> u8 {
    let sys = match build_rikuna(q, ell) {
        Ok(s) => s,
        Err(e) => return invalid(e),
    };
    match find_gamma(&sys, m) {
        Ok(cert) => {
            println!("{}", pretty(&cert));
            0
        }
        Err(Error::NoGamma { .. }) => {
            let report = complete_square(&sys).and_then(|sq| power_sets(sys.base(), &sq.d, m));
            let body = json!({
                "error": format!("no gamma exists for q = {q}, m = {m}"),
                "power_sets": report.ok(),
            });
            println!("{}", pretty(&body));
            1
        }
        Err(e) => match verify::classify(&e) {
            Status::Fail => {
                eprintln!("error: {e}");
                1
            }
            _ => invalid(e),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Verify { q, ell, m, n, json, common } => cmd_verify(q, ell, m, n, json, &common),
        Cmd::Survey {
            ell,
            m,
            q_max,
            n_max,
            format,
            out,
            common,
        } => cmd_survey(ell, m, q_max, n_max, format, out, &common),
        Cmd::Admissible { ell, m, q } => cmd_admissible(ell, m, q),
        Cmd::Gamma { q, ell, m } => cmd_gamma(q, ell, m),
    };
    ExitCode::from(code)
}
