//! `kosh`: eigenvalue tables, zeta values, single verifications and campaigns.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 root bracketing broke
//! down, 64 bad usage or input.

use clap::{Args, Parser, Subcommand, ValueEnum};
use koshliakov::campaign::{
    evaluate, run_campaign, threads_from_env, CampaignConfig, Case, Formula, DEFAULT_TABLE_SIZE,
};
use koshliakov::eigen::{eigen_table, Params};
use koshliakov::report::{to_jsonl, Tolerance, VerificationReport};
use koshliakov::zeta::{eta_p_integral, eta_p_series, zeta_p_series, zeta_p_via_functional_eq, ZetaValue};
use koshliakov::{Complex64, Error};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_BRACKET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "kosh", version, about = "Eigenvalue-node summation formulas: evaluation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the eigenvalues λ_1..λ_n with their residuals.
    Eigen {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate ζ_p or η_p.
    Zeta {
        kind: ZetaKind,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, value_enum)]
        method: Option<ZetaMethodArg>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long = "table-size", default_value_t = DEFAULT_TABLE_SIZE)]
        table_size: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check one identity on one set of inputs.
    Verify(VerifyArgs),
    /// Run a grid of checks from a TOML config (the standard grid if none is given).
    Campaign {
        config: Option<PathBuf>,
        /// Override the JSON lines output path.
        #[arg(long)]
        jsonl: Option<PathBuf>,
        /// Override the CSV summary path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ZetaKind {
    ZetaP,
    EtaP,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ZetaMethodArg {
    Series,
    Integral,
    FunctionalEq,
}

#[derive(Args)]
struct VerifyArgs {
    formula: String,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Test function preset, e.g. `exp:a=1`.
    #[arg(long = "fn")]
    function: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    w: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    n: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 1e-9)]
    atol: f64,
    #[arg(long, default_value_t = 1e-9)]
    rtol: f64,
    #[arg(long = "table-size", default_value_t = DEFAULT_TABLE_SIZE)]
    table_size: usize,
    /// Write the report to this file as one JSON line.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BracketFailure { .. } => EXIT_BRACKET,
        Error::InvalidParameter(_)
        | Error::Config(_)
        | Error::UnknownPreset(_)
        | Error::HypothesisViolation { .. }
        | Error::HypothesisUnmet { .. } => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("kosh: {e}");
    ExitCode::from(exit_code(&e))
}

fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.17e}", z.re)
    } else {
        format!("{:.17e}{:+.17e}i", z.re, z.im)
    }
}

fn cmd_eigen(p: f64, n_max: usize, json: bool) -> Result<(), Error> {
    let params = Params::new(p)?;
    let table = eigen_table(&params, n_max, 1e-15)?;
    if json {
        println!("{}", table.to_json());
    } else {
        println!("{:>6}  {:>24}  {:>10}", "n", "lambda", "residual");
        for r in &table.roots {
            println!("{:>6}  {:>24.17}  {:>10.3e}", r.n, r.lambda, r.residual);
        }
    }
    Ok(())
}

fn zeta_value(
    kind: ZetaKind,
    s: f64,
    p: f64,
    method: Option<ZetaMethodArg>,
    tol: f64,
    size: usize,
) -> Result<ZetaValue, Error> {
    let params = Params::new(p)?;
    let sc = Complex64::from(s);
    match (kind, method) {
        (ZetaKind::ZetaP, Some(ZetaMethodArg::Series)) | (ZetaKind::ZetaP, None) if s > 1.0 => {
            zeta_p_series(&params, sc, &eigen_table(&params, size, 1e-15)?, tol)
        }
        (ZetaKind::ZetaP, Some(ZetaMethodArg::FunctionalEq)) | (ZetaKind::ZetaP, None) => {
            let m = -(s + 1.0) / 2.0;
            if !(m >= 1.0 && m.fract() == 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "the functional equation gives ζ_p at s = −3, −5, …; got {s}"
                )));
            }
            zeta_p_via_functional_eq(&params, m as u32, tol)
        }
        (ZetaKind::EtaP, Some(ZetaMethodArg::Series)) => eta_p_series(&params, sc, tol),
        (ZetaKind::EtaP, Some(ZetaMethodArg::Integral)) | (ZetaKind::EtaP, None) => eta_p_integral(&params, sc, tol),
        (ZetaKind::ZetaP, Some(ZetaMethodArg::Series)) => {
            Err(Error::InvalidParameter(format!("the ζ_p series needs s > 1, got {s}")))
        }
        (ZetaKind::ZetaP, Some(ZetaMethodArg::Integral)) => {
            Err(Error::InvalidParameter("ζ_p has no integral method; use series or functional_eq".into()))
        }
        (ZetaKind::EtaP, Some(ZetaMethodArg::FunctionalEq)) => {
            Err(Error::InvalidParameter("η_p has no functional_eq method; use series or integral".into()))
        }
    }
}

fn print_report(r: &VerificationReport, json: bool) {
    if json {
        println!("{}", r.to_json());
    } else {
        let p = serde_json::to_string(&r.params).unwrap_or_default();
        println!(
            "{} p={p} {}: lhs={} rhs={} residual={:.3e} {}",
            r.formula_id,
            r.function_id,
            complex(r.lhs),
            complex(r.rhs),
            r.abs_residual,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<bool, Error> {
    let formula: Formula = a.formula.parse()?;
    let case = Case {
        formula: Some(formula),
        p: a.p,
        function: a.function,
        w: a.w,
        z: a.z,
        n: a.n,
        alpha: a.alpha,
        beta: a.beta,
        m: a.m,
    }
    .normalized()?;
    let tol = Tolerance::new(a.atol, a.rtol)?;
    let table = match (formula.uses_p(), case.p) {
        (true, Some(p)) => Some(eigen_table(&Params::new(p)?, a.table_size, 1e-15)?),
        _ => None,
    };
    let report = evaluate(&case, table.as_ref(), &tol)?;
    if let Some(path) = &a.report {
        std::fs::write(path, to_jsonl(std::slice::from_ref(&report)))
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    print_report(&report, a.json);
    Ok(report.pass)
}

fn cmd_campaign(config: Option<PathBuf>, jsonl: Option<PathBuf>, csv: Option<PathBuf>) -> Result<bool, Error> {
    let mut cfg = match &config {
        Some(path) => CampaignConfig::load(path)?,
        None => CampaignConfig::standard(),
    };
    if jsonl.is_some() {
        cfg.outputs.jsonl = jsonl;
    }
    if csv.is_some() {
        cfg.outputs.csv = csv;
    }
    let result = run_campaign(&cfg, threads_from_env())?;
    result.write_outputs(&cfg.outputs)?;
    println!("{:<18} {:>6} {:>6} {:>8}", "formula", "pass", "fail", "skipped");
    for (formula, [pass, fail, skip]) in result.matrix() {
        println!("{:<18} {pass:>6} {fail:>6} {skip:>8}", formula.name());
    }
    for (case, outcome) in &result.entries {
        match outcome {
            koshliakov::campaign::Outcome::Failed(e) => {
                eprintln!("error {}: {e}", serde_json::to_string(case).unwrap_or_default())
            }
            koshliakov::campaign::Outcome::Report(r) if !r.pass => print_report(r, false),
            _ => {}
        }
    }
    Ok(result.all_passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let verdict = match cli.command {
        Command::Eigen { p, n_max, json } => cmd_eigen(p, n_max, json).map(|()| true),
        Command::Zeta { kind, s, p, method, tol, table_size, json } => zeta_value(kind, s, p, method, tol, table_size)
            .map(|v| {
                if json {
                    let mut obj = serde_json::to_value(v).expect("zeta value serializes");
                    obj["p"] = serde_json::json!(p);
                    println!("{obj}");
                } else {
                    println!("{}", complex(v.value));
                }
                true
            }),
        Command::Verify(args) => cmd_verify(args),
        Command::Campaign { config, jsonl, csv } => cmd_campaign(config, jsonl, csv),
    };
    match verdict {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => fail(e),
    }
}
