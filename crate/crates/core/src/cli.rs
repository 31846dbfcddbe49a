//! Command-line front end. Results go to stdout as JSON or CSV; errors go to
//! stderr as JSON.
//!
//! Exit codes: 0 success, 1 numeric or convergence failure, 2 usage or input
//! error, 3 enumeration cap exceeded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bayes::{decompose_exponential, estimate_conditional_variance, ObservedSample, DEFAULT_EXP_ORDER};
use crate::chaos::{covariance_integrals, polynomial_chaos, theta_erratum, TupleStatistic};
use crate::coeffs::{fmt_f64, pure_order_kernel, theta_limits, theta_oracle, theta_rows, theta_table};
use crate::error::{Error, Result};
use crate::hoeffding::degenerate_check;
use crate::jacobi::{jacobi_modified, jacobi_norm_identity, orthonormality_residual, solve_phi_system, BetaParams};
use crate::math::{hyp1f1, int, parse_rational, to_f64, Rational};
use crate::measures::{interior_grid, DiscreteBaseMeasure};
use crate::poly::SimplexPolynomial;
use crate::polya::{all_sequences, polya_joint_prob, sample_polya};
use crate::ustat::approx_error_report;
use crate::wright_fisher::{density_mass, transition_density, TransitionModel};

/// Default truncation order of the transition density.
pub const DEFAULT_WF_ORDER: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "dfchaos", version, about = "Chaos decompositions for Dirichlet–Ferguson functionals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Projection coefficient table for a window of length N.
    Coeffs(CoeffsArgs),
    /// Chaos decomposition of a polynomial functional.
    Decompose(DecomposeArgs),
    /// Modified Jacobi polynomial and its chaos kernel.
    Jacobi(JacobiArgs),
    /// Wright–Fisher transition density.
    Wf(WfArgs),
    /// Bayesian estimates.
    #[command(subcommand)]
    Bayes(BayesCommand),
    /// Best approximation by symmetric statistics of X_N.
    Approx(ApproxArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Draw a Pólya sequence.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    /// Base measure weights (comma separated) or the total mass alone.
    #[arg(long, value_parser = parse_measure)]
    pub alpha: DiscreteBaseMeasure,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Also report large-N limits up to this order.
    #[arg(long)]
    pub limits: Option<usize>,
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_parser = parse_measure)]
    pub alpha: DiscreteBaseMeasure,
    /// Polynomial functional as JSON.
    #[arg(long = "F")]
    pub f: Option<PathBuf>,
    /// Highest chaos order; defaults to the degree of F.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub out: Format,
}

#[derive(Debug, Args)]
pub struct JacobiArgs {
    #[arg(long, value_parser = parse_positive)]
    pub a1: Rational,
    #[arg(long, value_parser = parse_positive)]
    pub a0: Rational,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct WfArgs {
    #[arg(long, value_parser = parse_measure)]
    pub theta: DiscreteBaseMeasure,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = DEFAULT_WF_ORDER)]
    pub truncation: usize,
    /// Free coordinates of the target point.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Free coordinates of the starting point.
    #[arg(long = "gamma-prime", value_delimiter = ',')]
    pub gamma_prime: Option<Vec<f64>>,
    /// CSV of the density over an interior grid instead of a single value.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Subcommand)]
pub enum BayesCommand {
    /// Posterior estimate of the conditional variance of a statistic.
    Var(BayesVarArgs),
    /// Chaos decomposition of exp(λ D(C)).
    Exp(BayesExpArgs),
}

#[derive(Debug, Args)]
pub struct BayesVarArgs {
    #[arg(long, value_parser = parse_measure)]
    pub alpha: DiscreteBaseMeasure,
    #[arg(long, value_delimiter = ',')]
    pub obs: Vec<usize>,
    /// Value table over {1..K}^m as JSON.
    #[arg(long)]
    pub h: PathBuf,
}

#[derive(Debug, Args)]
pub struct BayesExpArgs {
    #[arg(long, value_parser = parse_measure)]
    pub alpha: DiscreteBaseMeasure,
    #[arg(long, value_delimiter = ',')]
    pub set: Vec<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = DEFAULT_EXP_ORDER)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[arg(long, value_parser = parse_measure)]
    pub alpha: DiscreteBaseMeasure,
    #[arg(long = "F")]
    pub f: Option<PathBuf>,
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo draws per competitor.
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_measure)]
    pub alpha: DiscreteBaseMeasure,
    /// Smaller orders and windows.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_measure)]
    pub alpha: DiscreteBaseMeasure,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

fn parse_measure(s: &str) -> std::result::Result<DiscreteBaseMeasure, String> {
    let weights = s.split(',').map(|w| parse_rational(w.trim())).collect::<Result<Vec<_>>>().map_err(|e| e.to_string())?;
    DiscreteBaseMeasure::new(weights).map_err(|e| e.to_string())
}

fn parse_positive(s: &str) -> std::result::Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if !r.is_positive() {
        return Err(format!("{s} is not positive"));
    }
    Ok(r)
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got {s}")),
    }
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn require<T>(v: Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing {flag}")))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_polynomial(path: &Path, alpha: &DiscreteBaseMeasure) -> Result<SimplexPolynomial<Rational>> {
    let p = SimplexPolynomial::from_json(&read_json(path)?, None)?;
    let k = alpha.atoms();
    if p.vars() == k {
        Ok(p)
    } else if p.vars() + 1 == k {
        Ok(p.from_free())
    } else {
        Err(Error::Input(format!("functional in {} variables, measure on {k} atoms", p.vars())))
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

/// Runs one parsed command and returns what it prints on stdout.
pub fn run(cli: &Cli) -> std::result::Result<String, Failure> {
    match &cli.command {
        Command::Coeffs(a) => run_coeffs(a),
        Command::Decompose(a) => run_decompose(a),
        Command::Jacobi(a) => run_jacobi(a),
        Command::Wf(a) => run_wf(a),
        Command::Bayes(BayesCommand::Var(a)) => {
            let h = TupleStatistic::<Rational>::from_json(&read_json(&a.h)?)?;
            let sample = ObservedSample::new(a.alpha.clone(), a.obs.clone())?;
            Ok(pretty(&estimate_conditional_variance(&h, &sample)?.to_json()))
        }
        Command::Bayes(BayesCommand::Exp(a)) => {
            let d = decompose_exponential(&a.alpha, &a.set, a.lambda, a.order)?;
            Ok(pretty(&d.to_json()))
        }
        Command::Approx(a) => {
            let path = require(a.f.as_ref(), "--F")?;
            let seed = require(a.seed, "--seed")?;
            let f = read_polynomial(path, &a.alpha)?;
            Ok(pretty(&approx_error_report(&f, &a.alpha, a.n, a.draws, seed)?.to_json()))
        }
        Command::Verify(a) => run_verify(a),
        Command::Sample(a) => {
            let seed = require(a.seed, "--seed")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = sample_polya(&a.alpha, a.n, &mut rng);
            Ok(match a.format {
                Format::Json => pretty(&json!({"seed": seed, "labels": s.labels, "counts": s.counts().counts()})),
                Format::Csv => {
                    let mut out = String::from("index,label\n");
                    for (i, l) in s.labels.iter().enumerate() {
                        writeln!(out, "{},{l}", i + 1).unwrap();
                    }
                    out
                }
            })
        }
    }
}

fn run_coeffs(a: &CoeffsArgs) -> std::result::Result<String, Failure> {
    let mass = a.alpha.total_mass();
    let table = theta_table(a.n, mass)?;
    let limits = a.limits.map(|k| theta_limits(k, mass, a.tol)).transpose()?;
    Ok(match a.format {
        Format::Csv => {
            let mut out = table.to_csv();
            if let Some(l) = limits {
                out.push_str("k,a,limit,last_change,n_used,converged\n");
                for e in &l.entries {
                    writeln!(out, "{},{},{},{},{},{}", e.k, e.a, fmt_f64(e.value), fmt_f64(e.last_change), e.n_used, e.converged).unwrap();
                }
            }
            out
        }
        Format::Json => {
            let mut v = json!({"table": table.to_json()});
            if let Some(l) = limits {
                v["limits"] = l.to_json();
                v["erratum"] = theta_erratum(mass, a.tol)?.to_json();
            }
            pretty(&v)
        }
    })
}

fn run_decompose(a: &DecomposeArgs) -> std::result::Result<String, Failure> {
    let path = require(a.f.as_ref(), "--F")?;
    let f = read_polynomial(path, &a.alpha)?;
    let order = a.order.unwrap_or(f.degree());
    let theta = theta_oracle(a.alpha.total_mass(), order.max(1))?;
    let d = polynomial_chaos(&f, &a.alpha, order, &theta)?;
    let variance: Vec<Value> = d.variance_terms()?.iter().map(|v| json!(crate::math::fmt_rational(v))).collect();
    Ok(match a.out {
        Format::Json => {
            let mut v = d.to_json();
            v["variance_terms"] = Value::Array(variance);
            pretty(&v)
        }
        Format::Csv => {
            let mut out = String::from("order,counts,value\n");
            for (i, h) in d.kernels.iter().enumerate() {
                for (m, x) in h.iter() {
                    let c: Vec<String> = m.counts().iter().map(|c| c.to_string()).collect();
                    writeln!(out, "{},{},{}", i + 1, c.join(" "), fmt_f64(to_f64(x))).unwrap();
                }
            }
            out
        }
    })
}

fn run_jacobi(a: &JacobiArgs) -> std::result::Result<String, Failure> {
    let params = BetaParams::exact(a.a1.clone(), a.a0.clone())?;
    let j = jacobi_modified(a.n, &params)?;
    let worst = (0..=a.n).map(|m| orthonormality_residual(a.n, m, &params)).fold(0.0, f64::max);
    let mut v = json!({
        "n": a.n,
        "coefficients": j.coeffs(),
        "orthonormality_residual": worst,
    });
    if a.n >= 1 {
        let (lhs, rhs) = jacobi_norm_identity(a.n, &params)?;
        v["norm_identity"] = json!({"lhs": lhs, "rhs": rhs});
    }
    v["kernel"] = solve_phi_system(a.n, &params)?.to_json();
    Ok(pretty(&v))
}

fn run_wf(a: &WfArgs) -> std::result::Result<String, Failure> {
    let model = TransitionModel::new(a.theta.clone(), a.truncation)?;
    let free = a.theta.atoms() - 1;
    let gp = match &a.gamma_prime {
        Some(g) => g.clone(),
        None => vec![1.0 / a.theta.atoms() as f64; free],
    };
    if a.table {
        let mut out = String::new();
        let cols: Vec<String> = (1..=free).map(|j| format!("gamma_{j}")).collect();
        writeln!(out, "{},density,tail_bound,negative", cols.join(",")).unwrap();
        let count = if free == 1 { 99 } else { 190 };
        for pt in interior_grid(a.theta.atoms(), count) {
            let g: Vec<f64> = pt[..free].iter().map(to_f64).collect();
            let d = transition_density(&model, a.t, &g, &gp)?;
            let gs: Vec<String> = g.iter().map(|x| fmt_f64(*x)).collect();
            writeln!(out, "{},{},{},{}", gs.join(","), fmt_f64(d.value), fmt_f64(d.tail_bound), d.negative).unwrap();
        }
        return Ok(out);
    }
    let g = require(a.gamma.clone(), "--gamma")?;
    let d = transition_density(&model, a.t, &g, &gp)?;
    Ok(pretty(&json!({
        "t": a.t,
        "truncation": a.truncation,
        "gamma": g,
        "gamma_prime": gp,
        "density": d.value,
        "stationary": d.stationary,
        "contributions": d.contributions,
        "tail_bound": d.tail_bound,
        "negative": d.negative,
        "mass": density_mass(&model, a.t, &gp)?,
    })))
}

struct Check {
    name: &'static str,
    residual: f64,
    tol: f64,
}

fn max_abs(values: impl IntoIterator<Item = Rational>) -> f64 {
    values.into_iter().map(|v| to_f64(&v.abs())).fold(0.0, f64::max)
}

fn verify_checks(alpha: &DiscreteBaseMeasure, quick: bool) -> Result<Vec<Check>> {
    let k = alpha.atoms();
    let mass = alpha.total_mass();
    let mut checks = Vec::new();

    let n = if quick { 4 } else { 6 };
    let total = all_sequences(n, k).map(|s| polya_joint_prob(alpha, &s)).collect::<Result<Vec<_>>>()?;
    let sum = total.into_iter().fold(Rational::zero(), |a, b| a + b);
    checks.push(Check { name: "polya_law_sums_to_one", residual: to_f64(&(sum - int(1)).abs()), tol: 0.0 });

    let big_n = if quick { 6 } else { 8 };
    let res = theta_table(big_n, mass)?.residuals()?;
    checks.push(Check { name: "coefficient_system_residuals", residual: max_abs(res.into_iter().map(|r| r.2)), tol: 0.0 });
    let first = (1..=if quick { 16 } else { 64 })
        .map(|nn| Ok(first_theta(nn, mass)? - (mass + int(1)) / (mass + int(nn as i64))))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check { name: "theta_11_closed_form", residual: max_abs(first), tol: 0.0 });

    let order = if quick { 3 } else { 4 };
    let theta = theta_oracle(mass, order)?;
    let mut recon = 0.0f64;
    let mut degen = 0.0f64;
    for j in 1..=k {
        let f = SimplexPolynomial::var(k, j).pow(order as u32);
        let d = polynomial_chaos(&f, alpha, order, &theta)?;
        recon = recon.max(d.to_polynomial().sub(&f).to_free().max_abs_coeff());
        for h in &d.kernels {
            degen = degen.max(degenerate_check(h, alpha)?);
        }
    }
    checks.push(Check { name: "chaos_reconstruction", residual: recon, tol: 0.0 });
    checks.push(Check { name: "chaos_kernels_degenerate", residual: degen, tol: 0.0 });

    let kernels = (1..=3.min(order)).map(|o| pure_order_kernel(&two_atom(alpha)?, o)).collect::<Result<Vec<_>>>()?;
    let two = two_atom(alpha)?;
    let mut iso = 0.0f64;
    for h in &kernels {
        for f in &kernels {
            let c = covariance_integrals(h, f, &two)?;
            iso = iso.max(to_f64(&(c.exact - c.predicted).abs()));
        }
    }
    checks.push(Check { name: "isometry", residual: iso, tol: 0.0 });

    let params = BetaParams::exact(two.weights()[0].clone(), two.weights()[1].clone())?;
    let nmax = if quick { 4 } else { 8 };
    let mut ortho = 0.0f64;
    for a in 0..=nmax {
        for b in 0..=nmax {
            ortho = ortho.max(orthonormality_residual(a, b, &params));
        }
    }
    checks.push(Check { name: "jacobi_orthonormality", residual: ortho, tol: 1e-10 });

    let theta3 = if k >= 3 { alpha.clone() } else { DiscreteBaseMeasure::from_ints(&[1, 1, 1])? };
    let model = TransitionModel::new(theta3.clone(), 3)?;
    let free = theta3.atoms() - 1;
    let r = SimplexPolynomial::var(free, 1).pow(2);
    let mut repro = 0.0f64;
    for pt in interior_grid(theta3.atoms(), if quick { 5 } else { 20 }) {
        let g = &pt[..free];
        let mut s = Rational::zero();
        for j in 0..=2 {
            s += model.q_pairing_exact(j, g, &r)?;
        }
        repro = repro.max(to_f64(&(s - &g[0] * &g[0]).abs()));
    }
    checks.push(Check { name: "wright_fisher_reproducing", residual: repro, tol: 1e-8 });

    let h = TupleStatistic::from_fn(1, k, |x| int((x[0] == 1) as i64));
    let sample = ObservedSample::new(alpha.clone(), vec![])?;
    let est = estimate_conditional_variance(&h, &sample)?;
    let classic = mass / (mass + int(1)) * &est.conditional_variance;
    checks.push(Check { name: "bayes_single_coordinate", residual: to_f64(&(est.estimate - classic).abs()), tol: 0.0 });

    let a_c = to_f64(&two.weights()[0]);
    let exp = decompose_exponential(&two, &[1], 1.0, if quick { 6 } else { 12 })?;
    let mean_gap = (exp.mean - hyp1f1(a_c, to_f64(mass), 1.0)?).abs();
    checks.push(Check { name: "exponential_mean", residual: mean_gap, tol: 1e-12 });
    Ok(checks)
}

/// `θ_N^{(1,1)}`; the full table is only built when `N = 1`.
fn first_theta(n: usize, mass: &Rational) -> Result<Rational> {
    if n == 1 {
        return Ok(theta_table(1, mass)?.theta(1, 1).clone());
    }
    Ok(theta_rows(n, 1, mass)?[0][0].clone())
}

/// `α` collapsed onto `{1}` and its complement.
fn two_atom(alpha: &DiscreteBaseMeasure) -> Result<DiscreteBaseMeasure> {
    if alpha.atoms() == 1 {
        return DiscreteBaseMeasure::new(vec![alpha.total_mass() / int(2), alpha.total_mass() / int(2)]);
    }
    let w1 = alpha.weight(1).clone();
    DiscreteBaseMeasure::new(vec![w1.clone(), alpha.total_mass() - w1])
}

fn run_verify(a: &VerifyArgs) -> std::result::Result<String, Failure> {
    let checks = verify_checks(&a.alpha, a.quick)?;
    let mut out = String::from("check\tresidual\ttolerance\tstatus\n");
    let mut ok = true;
    for c in &checks {
        let pass = c.residual <= c.tol;
        ok &= pass;
        writeln!(out, "{}\t{:.3e}\t{:.0e}\t{}", c.name, c.residual, c.tol, if pass { "PASS" } else { "FAIL" }).unwrap();
    }
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Run(Error::Numeric { message: "invariant suite failed".into(), partial: None }))
    }
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Domain(_) => "domain",
        Error::Input(_) => "input",
        Error::Numeric { .. } => "numeric",
        Error::Convergence(_) => "convergence",
        Error::Singular { .. } => "singular",
        Error::Resource { .. } => "resource",
        Error::Unvalidated(_) => "unvalidated",
    };
    let mut v = json!({"error": kind, "message": e.to_string()});
    if let Error::Numeric { partial: Some(p), .. } = e {
        v["partial"] = json!(p);
    }
    v
}

/// Exit code of a failed run.
pub fn exit_code(f: &Failure) -> i32 {
    match f {
        Failure::Usage(_) => 2,
        Failure::Run(Error::Input(_) | Error::Domain(_)) => 2,
        Failure::Run(Error::Resource { .. }) => 3,
        Failure::Run(_) => 1,
    }
}

/// Parses `args`, runs the command and writes its output; returns the exit code.
pub fn main_with_args<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => json!({"error": "usage", "message": m}),
                Failure::Run(e) => error_json(e),
            };
            let _ = writeln!(stderr, "{msg}");
            exit_code(&f)
        }
    }
}
