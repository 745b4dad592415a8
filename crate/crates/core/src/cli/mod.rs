//! Command-line front end. Reserves on the command line are raw amounts
//! `(u1, u2)`; `table` takes normalized reserves.
//!
//! Exit codes: 0 success, 2 invalid input or model, 3 method does not
//! support the claim law or query, 4 numerical tolerance not met.

mod args;
pub mod format;

use std::fmt;
use std::io::Write;

use clap::Parser;
use num_complex::Complex64;
use rayon::prelude::*;

pub use args::{Cli, Command, RuinMethod, SimMethod};
use args::{McArgs, ModelSource, PdeArgs, RuinArgs, SimulateArgs};
use format::fmt_g;

use crate::closedform;
use crate::error::Error;
use crate::inversion::invert_2d;
use crate::mc::{self, McConfig};
use crate::model::{ClaimLaw, RiskModel};
use crate::onedim;
use crate::pde;
use crate::transform::psi_tilde;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl CliError {
    fn capability(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CAPABILITY,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnsupportedClaimLaw { .. } => EXIT_CAPABILITY,
        Error::ToleranceNotMet { .. } | Error::GridTooCoarse { .. } | Error::ConvergenceWarning(_) => EXIT_TOLERANCE,
        _ => EXIT_VALIDATION,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::validation(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = run_cli(&cli, &mut buf, stderr);
    let code = match &result {
        Ok(code) => *code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &buf),
        None => stdout.write_all(&buf),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_VALIDATION;
    }
    code
}

fn run_cli(cli: &Cli, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult<i32> {
    if !(cli.tol > 0.0) {
        return Err(CliError::validation(format!("--tol must be positive, got {}", cli.tol)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::validation(e.to_string()))?;
    let model = load_model(&cli.model)?;
    let report = model.validate();
    for w in &report.warnings {
        writeln!(err, "warning: {w}")?;
    }
    report.into_result()?;
    pool.install(|| dispatch(cli, &model, out))
}

fn load_model(src: &ModelSource) -> CliResult<RiskModel> {
    if let Some(path) = &src.model {
        return RiskModel::from_path(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())));
    }
    match (src.lambda, src.mu, &src.c) {
        (Some(lambda), Some(mu), Some(c)) => {
            let delta = src.delta.clone().unwrap_or_else(|| vec![1.0, 1.0]);
            Ok(RiskModel::exponential(lambda, mu, [c[0], c[1]], [delta[0], delta[1]]))
        }
        _ => Err(CliError::validation("no model: pass --model FILE or --lambda, --mu and --c")),
    }
}

fn dispatch(cli: &Cli, model: &RiskModel, out: &mut Vec<u8>) -> CliResult<i32> {
    match &cli.command {
        Command::Derive { json } => derive(model, *json, out),
        Command::Ruin(a) => ruin(model, a, cli.tol, out),
        Command::Transform { p, p_im, q, q_im } => transform(model, Complex64::new(*p, *p_im), Complex64::new(*q, *q_im), out),
        Command::Invert { u, euler_m } => invert(model, [u[0], u[1]], *euler_m, out),
        Command::Simulate(a) => simulate(model, a, out),
        Command::Pde(a) => pde_cmd(model, a, out),
        Command::Table { x1, x2 } => table(model, x1, x2, cli.tol, out),
    }
}

fn derive(model: &RiskModel, json: bool, out: &mut Vec<u8>) -> CliResult<i32> {
    let d = model.derive()?;
    let mut rows: Vec<(&str, String)> = vec![
        ("lambda", fmt_g(model.lambda)),
        ("p1", fmt_g(d.p1)),
        ("p2", fmt_g(d.p2)),
        ("rho", fmt_g(d.rho)),
        ("d", fmt_g(d.d)),
    ];
    if let Some(k) = &d.exponential {
        rows.extend([
            ("mu", fmt_g(k.mu)),
            ("gamma1", fmt_g(k.gamma[0])),
            ("gamma2", fmt_g(k.gamma[1])),
            ("gamma3", fmt_g(k.gamma3)),
            ("C1", fmt_g(k.lundberg[0])),
            ("C2", fmt_g(k.lundberg[1])),
            ("qPlusEnd", fmt_g(k.q_plus_end)),
            ("qMinusEnd", fmt_g(k.q_minus_end)),
            ("regime", k.regime.to_string()),
        ]);
    }
    if json {
        let mut obj = serde_json::Map::new();
        for (key, val) in &rows {
            let v = match val.parse::<f64>() {
                Ok(x) => serde_json::json!(x),
                Err(_) => serde_json::json!(val),
            };
            obj.insert(key.to_string(), v);
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&obj).expect("json map serializes"))?;
    } else {
        for (key, val) in rows {
            writeln!(out, "{key} = {val}")?;
        }
    }
    Ok(EXIT_OK)
}

fn reserves(u: &[f64]) -> CliResult<[f64; 2]> {
    for &x in u {
        if !(x >= 0.0) {
            return Err(Error::InvalidReserve(x).into());
        }
    }
    Ok([u[0], u[1]])
}

fn default_method(model: &RiskModel, s: f64) -> RuinMethod {
    match (&model.claim, s == 0.0) {
        (ClaimLaw::Exponential { .. }, true) => RuinMethod::Exact,
        (ClaimLaw::Exponential { .. }, false) => RuinMethod::Pde,
        _ => RuinMethod::Mc,
    }
}

struct Report {
    value: f64,
    error: f64,
    note: String,
}

fn ruin(model: &RiskModel, a: &RuinArgs, tol: f64, out: &mut Vec<u8>) -> CliResult<i32> {
    let u = reserves(&a.u)?;
    if !(a.s >= 0.0) {
        return Err(CliError::validation(format!("--s must be nonnegative, got {}", a.s)));
    }
    let method = a.method.unwrap_or_else(|| default_method(model, a.s));
    let (x1, x2) = model.normalize(u[0], u[1]);
    let lower = x2 <= x1;
    let r = match method {
        RuinMethod::Exact => ruin_exact(model, u, a.s, tol)?,
        RuinMethod::Invert => {
            if a.s != 0.0 {
                return Err(CliError::capability("numeric inversion covers s = 0 only"));
            }
            let k = model.exp_constants()?;
            let inv = invert_2d(&k, x1, x2, crate::inversion::DEFAULT_M)?;
            Report {
                value: 1.0 - inv.value,
                error: inv.discrepancy(),
                note: format!("euler_m={}", inv.m),
            }
        }
        RuinMethod::Pde => {
            let k = model.exp_constants()?;
            if lower {
                Report {
                    value: onedim::ruin_transform_exp(&k, x2, a.s)?,
                    error: 0.0,
                    note: "lower cone: one-company formula".into(),
                }
            } else {
                let grid = pde_grid_for(model, a.s, u, a.steps, a.grid_tol)?;
                Report {
                    value: grid.evaluate(u[0], u[1])?,
                    error: grid.error_estimate.unwrap_or(f64::NAN),
                    note: format!("steps={};rmax={}", grid.steps, fmt_g(grid.r_max)),
                }
            }
        }
        RuinMethod::Mc => ruin_mc(model, u, a.s, &a.mc)?,
    };
    writeln!(out, "method,u1,u2,s,value,error,note")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        method_name(method),
        fmt_g(u[0]),
        fmt_g(u[1]),
        fmt_g(a.s),
        fmt_g(r.value),
        fmt_g(r.error),
        r.note
    )?;
    Ok(EXIT_OK)
}

fn method_name(m: RuinMethod) -> &'static str {
    match m {
        RuinMethod::Exact => "exact",
        RuinMethod::Pde => "pde",
        RuinMethod::Mc => "mc",
        RuinMethod::Invert => "invert",
    }
}

fn ruin_exact(model: &RiskModel, u: [f64; 2], s: f64, tol: f64) -> CliResult<Report> {
    let (x1, x2) = model.normalize(u[0], u[1]);
    let lower = x2 <= x1;
    match &model.claim {
        ClaimLaw::Exponential { .. } => {
            let k = model.exp_constants()?;
            if s == 0.0 {
                let r = closedform::ruin(&k, x1, x2, tol)?;
                let mut note = r.survival.regime.to_string();
                if r.clipped {
                    note.push_str(";clipped");
                }
                Ok(Report {
                    value: r.value,
                    error: r.survival.quadrature_error,
                    note,
                })
            } else if lower {
                Ok(Report {
                    value: onedim::ruin_transform_exp(&k, x2, s)?,
                    error: 0.0,
                    note: "lower cone: one-company formula".into(),
                })
            } else {
                Err(CliError::capability(
                    "no exact discounted transform in the upper cone; use --method pde or mc",
                ))
            }
        }
        ClaimLaw::PhaseType { .. } if s == 0.0 && lower => Ok(Report {
            value: onedim::ruin_prob_phasetype(model, u[1])?,
            error: 0.0,
            note: "lower cone: one-company formula".into(),
        }),
        _ => Err(CliError::capability(format!(
            "exact method needs exponential claims (phase-type: lower cone, s = 0 only); model has {} claims",
            model.claim.kind()
        ))),
    }
}

fn ruin_mc(model: &RiskModel, u: [f64; 2], s: f64, a: &McArgs) -> CliResult<Report> {
    let cfg = McConfig::new(a.paths, a.seed);
    let (x1, x2) = model.normalize(u[0], u[1]);
    let conditional = s == 0.0 && x2 >= x1 && !matches!(model.claim, ClaimLaw::Empirical { .. });
    if conditional {
        let e = mc::conditional_survival(model, x1, x2, &cfg)?;
        return Ok(Report {
            value: 1.0 - e.mean,
            error: e.standard_error,
            note: format!("n={};seed={};{}", e.n, e.seed, e.meta),
        });
    }
    let e = mc::ruin_time_lt(model, u, s, a.horizon, &cfg)?;
    Ok(Report {
        value: e.mean,
        error: e.standard_error,
        note: format!("n={};seed={};{}", e.n, e.seed, e.meta),
    })
}

fn pde_grid_for(model: &RiskModel, s: f64, u: [f64; 2], steps: usize, grid_tol: f64) -> CliResult<pde::CharacteristicGrid> {
    let d = model.delta[0] * model.c[1] - model.delta[1] * model.c[0];
    let r = (model.c[1] * u[0] - model.c[0] * u[1]) / d;
    let r_max = (1.25 * r).max(1.0);
    Ok(pde::solve(model, s, r_max, steps, grid_tol)?)
}

fn transform(model: &RiskModel, p: Complex64, q: Complex64, out: &mut Vec<u8>) -> CliResult<i32> {
    let k = model.exp_constants()?;
    let v = psi_tilde(&k, p, q);
    writeln!(out, "p_re,p_im,q_re,q_im,value_re,value_im")?;
    writeln!(
        out,
        "{}",
        [p.re, p.im, q.re, q.im, v.re, v.im].map(fmt_g).join(",")
    )?;
    Ok(EXIT_OK)
}

fn invert(model: &RiskModel, u: [f64; 2], m: usize, out: &mut Vec<u8>) -> CliResult<i32> {
    let u = reserves(&u)?;
    let k = model.exp_constants()?;
    let (x1, x2) = model.normalize(u[0], u[1]);
    let r = invert_2d(&k, x1, x2, m)?;
    writeln!(out, "u1,u2,survival,ruin,check,discrepancy,m")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        fmt_g(u[0]),
        fmt_g(u[1]),
        fmt_g(r.value),
        fmt_g(1.0 - r.value),
        fmt_g(r.check),
        fmt_g(r.discrepancy()),
        r.m
    )?;
    Ok(EXIT_OK)
}

fn simulate(model: &RiskModel, a: &SimulateArgs, out: &mut Vec<u8>) -> CliResult<i32> {
    let u = reserves(&a.u)?;
    let cfg = McConfig::new(a.mc.paths, a.mc.seed);
    let e = match (a.method, a.s) {
        (SimMethod::Naive, None) => mc::simulate_joint_ruin(model, u, a.mc.horizon, &cfg)?,
        (SimMethod::Naive, Some(s)) => mc::ruin_time_lt(model, u, s, a.mc.horizon, &cfg)?,
        (SimMethod::Conditional, None) => {
            let (x1, x2) = model.normalize(u[0], u[1]);
            mc::conditional_survival(model, x1, x2, &cfg)?
        }
        (SimMethod::Fluid, None) => mc::simulate_joint_ruin_fluid(model, u, a.mc.horizon, &cfg)?,
        (_, Some(_)) => return Err(CliError::capability("--s is supported by the naive method only")),
    };
    writeln!(out, "estimate,stderr,n,seed,meta")?;
    writeln!(
        out,
        "{},{},{},{},{}",
        fmt_g(e.mean),
        fmt_g(e.standard_error),
        e.n,
        e.seed,
        e.meta
    )?;
    Ok(EXIT_OK)
}

fn pde_cmd(model: &RiskModel, a: &PdeArgs, out: &mut Vec<u8>) -> CliResult<i32> {
    let grid = if a.no_halving {
        pde::march(model, a.s, a.rmax, a.steps)?
    } else {
        pde::solve(model, a.s, a.rmax, a.steps, a.grid_tol)?
    };
    match &a.point {
        Some(p) => {
            if p.len() != 2 {
                return Err(CliError::validation("--point expects u1,u2"));
            }
            let u = reserves(p)?;
            let v = grid.evaluate(u[0], u[1])?;
            writeln!(out, "u1,u2,s,value,error_estimate")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_g(u[0]),
                fmt_g(u[1]),
                fmt_g(a.s),
                fmt_g(v),
                fmt_g(grid.error_estimate.unwrap_or(f64::NAN))
            )?;
        }
        None => grid.write_csv(out, fmt_g)?,
    }
    Ok(EXIT_OK)
}

fn linspace(range: &[String], name: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::validation(format!("--{name} expects LO HI N with 0 <= LO <= HI and N >= 1"));
    let lo: f64 = range[0].parse().map_err(|_| bad())?;
    let hi: f64 = range[1].parse().map_err(|_| bad())?;
    let n: usize = range[2].parse().map_err(|_| bad())?;
    if n == 0 || !(lo >= 0.0 && hi >= lo) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn table(model: &RiskModel, x1: &[String], x2: &[String], tol: f64, out: &mut Vec<u8>) -> CliResult<i32> {
    let k = model.exp_constants()?;
    let xs1 = linspace(x1, "x1")?;
    let xs2 = linspace(x2, "x2")?;
    let points: Vec<(f64, f64)> = xs1.iter().flat_map(|&a| xs2.iter().map(move |&b| (a, b))).collect();
    let rows: Vec<_> = points.par_iter().map(|&(a, b)| closedform::survival(&k, a, b, tol)).collect();
    writeln!(out, "x1,x2,survival,ruin,omega,quadratureError,regime,status")?;
    let mut code = EXIT_OK;
    for ((a, b), row) in points.iter().zip(rows) {
        match row {
            Ok(r) => writeln!(
                out,
                "{},{},{},{},{},{},{},ok",
                fmt_g(*a),
                fmt_g(*b),
                fmt_g(r.value),
                fmt_g((1.0 - r.value).clamp(0.0, 1.0)),
                fmt_g(r.omega),
                fmt_g(r.quadrature_error),
                r.regime
            )?,
            Err(Error::ToleranceNotMet { estimated, .. }) => {
                code = EXIT_TOLERANCE;
                writeln!(
                    out,
                    "{},{},nan,nan,nan,{},{},tolerance_not_met",
                    fmt_g(*a),
                    fmt_g(*b),
                    fmt_g(estimated),
                    k.regime
                )?
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(code)
}
