//! Command-line front end.
//!
//! ```text
//! semisens sensitivity --model wf --kappa 1 --degree 8 --t 1 --xi x --oracle
//! semisens wf-recursion --n 3 --kappa 1 --t 1
//! semisens validate errata
//! ```
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 numerical failure (an
//! oracle discrepancy above tolerance, a failed validation check, or a series
//! that did not converge). The engine tolerance defaults to `1e-12` and can
//! be overridden by the `SEMISENS_TOL` environment variable or `--tol`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::duality::{dirac, gaussian_moments, MomentFunctional};
use crate::error::{Error, Result};
use crate::models::{wf_basis, wf_family_with, wf_xi_sensitivity, WfDiffusion};
use crate::operator::GeneratorFamily;
use crate::oracle::{central_difference_sensitivity, OracleConfig};
use crate::polynomial::Polynomial;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::semigroup::DEFAULT_TOL;
use crate::sensitivity::{semigroup_sensitivity, SensitivityReport};
use crate::validate::{self, Scope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

pub const DEFAULT_DEGREE: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "semisens",
    version,
    about = "Parameter sensitivities of polynomial diffusion semigroups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sensitivities ∂/∂θ ⟨ξ | U_θ(t)* π₀⟩ at θ = 0 over a grid of ξ and t.
    Sensitivity(SensitivityArgs),
    /// Wright–Fisher quasi-eigenbasis recursion for ξ_n.
    WfRecursion(RecursionArgs),
    /// Run a validation suite.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Wf,
    Ou,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[arg(long, value_enum)]
    pub model: ModelName,
    /// Back-mutation rate κ for the Wright–Fisher model (`1`, `0.5`, `7/3`).
    #[arg(long)]
    pub kappa: Option<String>,
    /// Use the diffusion term ½x(1−x)∂² instead of x(1−x)∂².
    #[arg(long)]
    pub half_diffusion: bool,
    /// Family description for `--model custom`.
    #[arg(long)]
    pub family: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    /// Times; repeat the flag or separate with commas.
    #[arg(long = "t", required = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub times: Vec<f64>,
    /// Test functions: `x`, `1`, `x^k`, `xi<n>` (Wright–Fisher basis element)
    /// or a JSON coefficient array such as `[0, 1, "1/2"]`.
    #[arg(long = "xi", required = true)]
    pub xis: Vec<String>,
    #[arg(long, env = "SEMISENS_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Compare with the finite-difference oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Largest accepted oracle discrepancy before exiting with code 2.
    #[arg(long, default_value_t = 1e-6)]
    pub oracle_tol: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecursionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub kappa: String,
    #[arg(long = "t", allow_negative_numbers = true)]
    pub t: f64,
    /// Number of series terms; chosen from the tail bound when omitted.
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, env = "SEMISENS_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Largest accepted gap between the series and the generic engine.
    #[arg(long, default_value_t = 1e-8)]
    pub check_tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// all, stationarity, lemma, theorem, recursion or errata.
    pub scope: Scope,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Clone, Debug)]
pub enum Model {
    Wf {
        kappa: Rational,
        diffusion: WfDiffusion,
    },
    Ou,
    Custom {
        family: GeneratorFamily<f64>,
        pi0: Option<MomentFunctional<f64>>,
    },
}

/// Validated settings for the `sensitivity` command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: Model,
    pub degree: usize,
    pub times: Vec<f64>,
    pub xis: Vec<(String, Polynomial<f64>)>,
    pub tol: f64,
    pub oracle: Option<OracleConfig>,
    pub output: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Checks the arguments; warnings are returned alongside the config.
    pub fn from_args(args: &SensitivityArgs) -> Result<(Self, Vec<String>)> {
        let mut warnings = Vec::new();
        require_tol("tol", args.tol)?;
        require_tol("oracle-tol", args.oracle_tol)?;
        let model = match args.model {
            ModelName::Wf => {
                let text = args
                    .kappa
                    .as_deref()
                    .ok_or_else(|| Error::Parse("--model wf requires --kappa".into()))?;
                let diffusion = if args.half_diffusion {
                    WfDiffusion::Half
                } else {
                    WfDiffusion::Standard
                };
                Model::Wf {
                    kappa: parse_rational(text)?,
                    diffusion,
                }
            }
            ModelName::Ou => Model::Ou,
            ModelName::Custom => {
                let path = args
                    .family
                    .as_ref()
                    .ok_or_else(|| Error::Parse("--model custom requires --family".into()))?;
                let (family, pi0) = load_custom(&fs::read_to_string(path)?)?;
                Model::Custom { family, pi0 }
            }
        };
        if let Some(t) = args.times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t",
                value: t.to_string(),
                reason: "times must be finite and nonnegative",
            });
        }

        let mut degree = args.degree;
        let mut xis = Vec::with_capacity(args.xis.len());
        for spec in &args.xis {
            let xi = parse_xi(spec, &model)?;
            let d = xi.degree().unwrap_or(0);
            if d > degree {
                if spec.starts_with("xi") {
                    warnings.push(format!(
                        "{spec} needs degree {d}; raising the truncation degree from {degree}"
                    ));
                    degree = d;
                } else {
                    return Err(Error::DegreeOverflow {
                        degree: d,
                        truncation: degree,
                    });
                }
            }
            xis.push((spec.clone(), xi));
        }
        let oracle = args.oracle.then(|| OracleConfig {
            tol_report: args.oracle_tol,
            engine_tol: args.tol,
            ..OracleConfig::default()
        });
        Ok((
            RunConfig {
                model,
                degree,
                times: args.times.clone(),
                xis,
                tol: args.tol,
                oracle,
                output: args.format,
                out: args.out.clone(),
            },
            warnings,
        ))
    }

    pub fn family(&self) -> Result<GeneratorFamily<f64>> {
        Ok(match &self.model {
            Model::Wf { kappa, diffusion } => wf_family_with(kappa.clone(), *diffusion)?.to_f64(),
            Model::Ou => crate::models::ou_family(),
            Model::Custom { family, .. } => family.clone(),
        })
    }

    /// `δ₀` for Wright–Fisher, `N(0, 1/2)` for OU, the document's `pi0`
    /// (default `δ₀`) for custom families.
    pub fn pi0(&self) -> Result<MomentFunctional<f64>> {
        let n = self.degree;
        match &self.model {
            Model::Wf { .. } => Ok(dirac(0.0, n)),
            Model::Ou => gaussian_moments(0.0, 0.5, n),
            Model::Custom { pi0: Some(mu), .. } => mu.truncate(n),
            Model::Custom { pi0: None, .. } => Ok(dirac(0.0, n)),
        }
    }
}

fn require_tol(name: &'static str, tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value: tol.to_string(),
            reason: "tolerance must be positive and finite",
        });
    }
    Ok(())
}

/// Family JSON with an optional `"pi0"` entry: `{"dirac": a}`,
/// `{"moments": [...]}` or `{"gaussian": {"mean": m, "variance": v}}`.
pub fn load_custom(text: &str) -> Result<(GeneratorFamily<f64>, Option<MomentFunctional<f64>>)> {
    let mut doc: serde_json::Value = serde_json::from_str(text)?;
    let pi0 = doc.as_object_mut().and_then(|o| o.remove("pi0"));
    let family = GeneratorFamily::<f64>::from_json_value(&doc)?;
    let pi0 = match pi0 {
        None => None,
        Some(v) => Some(parse_pi0(&v)?),
    };
    Ok((family, pi0))
}

fn parse_pi0(v: &serde_json::Value) -> Result<MomentFunctional<f64>> {
    const LARGE: usize = 64;
    if let Some(a) = v.get("dirac") {
        return Ok(dirac(f64::from_json(a)?, LARGE));
    }
    if let Some(g) = v.get("gaussian") {
        let field = |k: &str| {
            g.get(k)
                .ok_or_else(|| Error::Parse(format!("pi0.gaussian needs `{k}`")))
                .and_then(f64::from_json)
        };
        return gaussian_moments(field("mean")?, field("variance")?, LARGE);
    }
    if v.get("moments").is_some() {
        return MomentFunctional::from_json(v);
    }
    Err(Error::Parse(
        "pi0 must be one of {\"dirac\"}, {\"moments\"}, {\"gaussian\"}".into(),
    ))
}

/// Parses a test-function spec; `xi<n>` needs the Wright–Fisher model.
pub fn parse_xi(spec: &str, model: &Model) -> Result<Polynomial<f64>> {
    let s = spec.trim();
    if s.starts_with('[') {
        let values: Vec<serde_json::Value> = serde_json::from_str(s)?;
        let coeffs = values.iter().map(f64::from_json).collect::<Result<Vec<_>>>()?;
        return Ok(Polynomial::from_coeffs(coeffs));
    }
    if let Some(rest) = s.strip_prefix("xi") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("`{spec}`: expected xi<n>")))?;
        let Model::Wf { kappa, .. } = model else {
            return Err(Error::Parse(format!("`{spec}`: basis elements need --model wf")));
        };
        return Ok(wf_basis(n, kappa.clone())?.xi.to_f64());
    }
    if s == "x" {
        return Ok(Polynomial::monomial(1));
    }
    if let Some(k) = s.strip_prefix("x^") {
        let k: usize = k.parse().map_err(|_| Error::Parse(format!("`{spec}`: bad exponent")))?;
        return Ok(Polynomial::monomial(k));
    }
    f64::parse_text(s).map(Polynomial::constant).map_err(|_| {
        Error::Parse(format!(
            "`{spec}` is not a test function (x, x^k, xi<n>, a number or a JSON array)"
        ))
    })
}

pub fn cmd_sensitivity(config: &RunConfig) -> Result<SensitivityReport> {
    SensitivityReport::compute(
        &config.family()?,
        &config.pi0()?,
        &config.xis,
        &config.times,
        config.degree,
        config.tol,
        config.oracle.as_ref(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub n: usize,
    pub kappa: String,
    pub t: f64,
    pub lambda: String,
    /// `γ_{n,m}` for `m = 2..=n`, exact.
    pub gammas: Vec<String>,
    /// `b_{n,k}` for `k = 0..=kmax` with `b_{n,0} = 0`, exact.
    pub bs: Vec<String>,
    pub kmax: usize,
    pub series_value: f64,
    pub tail_bound: f64,
    pub engine_value: f64,
    pub engine_discrepancy: f64,
    pub oracle_value: f64,
    pub oracle_discrepancy: f64,
}

pub fn cmd_wf_recursion(n: usize, kappa: &Rational, t: f64, kmax: Option<usize>, tol: f64) -> Result<RecursionReport> {
    let basis = wf_basis(n, kappa.clone())?;
    let series = wf_xi_sensitivity(n, kappa, t, kmax, tol)?;
    let bs = crate::models::wf_b_sequence(n, kappa.clone(), Rational::from_i64(0), series.kmax)?;
    let family = wf_family_with(kappa.clone(), WfDiffusion::Standard)?.to_f64();
    let pi0 = dirac(0.0, n);
    let xi = basis.xi.to_f64();
    let engine = semigroup_sensitivity(&family, &pi0, &xi, t, n, tol)?;
    let oracle = central_difference_sensitivity(
        &family,
        &pi0,
        &xi,
        t,
        n,
        &OracleConfig {
            engine_tol: tol,
            ..OracleConfig::default()
        },
    )?;
    Ok(RecursionReport {
        n,
        kappa: kappa.to_string(),
        t,
        lambda: basis.lambda.to_string(),
        gammas: (2..=n).map(|m| basis.gamma(m).to_string()).collect(),
        bs: bs.bs.iter().map(|b| b.to_string()).collect(),
        kmax: series.kmax,
        series_value: series.value,
        tail_bound: series.tail_bound,
        engine_value: engine,
        engine_discrepancy: (series.value - engine).abs(),
        oracle_value: oracle.value,
        oracle_discrepancy: (series.value - oracle.value).abs(),
    })
}

fn write_recursion_text(r: &RecursionReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "n = {}, kappa = {}, t = {}", r.n, r.kappa, r.t)?;
    writeln!(out, "lambda_{} = {}", r.n, r.lambda)?;
    for (i, g) in r.gammas.iter().enumerate() {
        writeln!(out, "gamma_{{{},{}}} = {}", r.n, i + 2, g)?;
    }
    for (k, b) in r.bs.iter().enumerate() {
        writeln!(out, "b_{{{},{}}} = {}", r.n, k, b)?;
    }
    writeln!(out, "kmax = {}", r.kmax)?;
    writeln!(out, "series = {}", r.series_value)?;
    writeln!(out, "tail_bound = {:e}", r.tail_bound)?;
    writeln!(out, "engine = {}", r.engine_value)?;
    writeln!(out, "engine_discrepancy = {:e}", r.engine_discrepancy)?;
    writeln!(out, "oracle = {}", r.oracle_value)?;
    writeln!(out, "oracle_discrepancy = {:e}", r.oracle_discrepancy)
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::SeriesNotConverged { .. }
        | Error::ScalingLimit { .. }
        | Error::TailBound { .. }
        | Error::NonFinite { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn emit(text: &[u8], out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text)?,
    }
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Sensitivity(args) => {
            let (config, warnings) = RunConfig::from_args(&args)?;
            for w in warnings {
                writeln!(stderr, "warning: {w}")?;
            }
            let report = cmd_sensitivity(&config)?;
            let bytes = match config.output {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf)?;
                    buf
                }
                OutputFormat::Json => {
                    let mut s = report.to_json()?;
                    s.push('\n');
                    s.into_bytes()
                }
            };
            emit(&bytes, config.out.as_ref(), stdout)?;
            if report.oracle_warning {
                writeln!(stderr, "warning: oracle differences did not shrink monotonically")?;
            }
            if let (Some(oracle), Some(d)) = (&config.oracle, report.max_abs_discrepancy) {
                if d > oracle.tol_report {
                    writeln!(stderr, "oracle discrepancy {d:e} exceeds {:e}", oracle.tol_report)?;
                    return Ok(EXIT_NUMERICAL);
                }
            }
            Ok(EXIT_OK)
        }
        Command::WfRecursion(args) => {
            require_tol("tol", args.tol)?;
            let kappa = parse_rational(&args.kappa)?;
            let report = cmd_wf_recursion(args.n, &kappa, args.t, args.kmax, args.tol)?;
            match args.format {
                ReportFormat::Text => write_recursion_text(&report, stdout)?,
                ReportFormat::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?,
            }
            if report.engine_discrepancy > args.check_tol {
                writeln!(
                    stderr,
                    "series and engine differ by {:e} (> {:e})",
                    report.engine_discrepancy, args.check_tol
                )?;
                return Ok(EXIT_NUMERICAL);
            }
            Ok(EXIT_OK)
        }
        Command::Validate(args) => {
            let report = validate::run(args.scope)?;
            match args.format {
                ReportFormat::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?,
                ReportFormat::Text if args.scope == Scope::Errata => {
                    let entries = report.errata.as_deref().unwrap_or_default();
                    writeln!(stdout, "{}", crate::errata::to_json(entries)?)?;
                    for c in &report.checks {
                        writeln!(stderr, "{c}")?;
                    }
                }
                ReportFormat::Text => {
                    for c in &report.checks {
                        writeln!(stdout, "{c}")?;
                    }
                }
            }
            if let Some(failure) = report.first_failure() {
                writeln!(stderr, "first failure: {failure}")?;
                return Ok(EXIT_NUMERICAL);
            }
            Ok(EXIT_OK)
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("semisens").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn xi_specs() {
        let wf = Model::Wf {
            kappa: Rational::from_i64(1),
            diffusion: WfDiffusion::Standard,
        };
        assert_eq!(parse_xi("x", &Model::Ou).unwrap(), Polynomial::monomial(1));
        assert_eq!(parse_xi("1", &Model::Ou).unwrap(), Polynomial::one());
        assert_eq!(parse_xi("x^3", &Model::Ou).unwrap(), Polynomial::monomial(3));
        assert_eq!(
            parse_xi("[0, 1, \"1/2\"]", &Model::Ou).unwrap(),
            Polynomial::from_coeffs(vec![0.0, 1.0, 0.5])
        );
        assert_eq!(
            parse_xi("xi3", &wf).unwrap(),
            Polynomial::from_coeffs(vec![0.0, 0.0, -1.2, 1.0])
        );
        assert!(parse_xi("xi3", &Model::Ou).is_err());
        assert!(parse_xi("sin(x)", &Model::Ou).is_err());
        assert!(parse_xi("x^a", &Model::Ou).is_err());
    }

    #[test]
    fn sensitivity_command() {
        let (code, out, _) = run_capture(&[
            "sensitivity",
            "--model",
            "wf",
            "--kappa",
            "1",
            "--degree",
            "8",
            "--t",
            "1",
            "--xi",
            "x",
        ]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((value - (1.0 - (-1.0f64).exp())).abs() <= 1e-12);

        let (code, out, _) = run_capture(&[
            "sensitivity",
            "--model",
            "ou",
            "--degree",
            "6",
            "--t",
            "0",
            "--xi",
            "x",
            "--xi",
            "x^2",
        ]);
        assert_eq!(code, 0);
        for row in out.lines().skip(1) {
            assert_eq!(row.split(',').nth(2).unwrap(), "0.0");
        }
    }

    #[test]
    fn config_errors_exit_1() {
        assert_eq!(
            run_capture(&["sensitivity", "--model", "wf", "--t", "1", "--xi", "x"]).0,
            1
        );
        assert_eq!(
            run_capture(&["sensitivity", "--model", "ou", "--t", "-1", "--xi", "x"]).0,
            1
        );
        assert_eq!(
            run_capture(&[
                "sensitivity",
                "--model",
                "ou",
                "--degree",
                "2",
                "--t",
                "1",
                "--xi",
                "x^3"
            ])
            .0,
            1
        );
        assert_eq!(
            run_capture(&["sensitivity", "--model", "wf", "--kappa", "0", "--t", "1", "--xi", "x"]).0,
            1
        );
        assert_eq!(run_capture(&["bogus"]).0, 1);
        assert_eq!(run_capture(&["validate", "nothing"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn basis_element_raises_degree() {
        let (code, _, err) = run_capture(&[
            "sensitivity",
            "--model",
            "wf",
            "--kappa",
            "1",
            "--degree",
            "2",
            "--t",
            "1",
            "--xi",
            "xi4",
        ]);
        assert_eq!(code, 0);
        assert!(err.contains("warning"));
    }

    #[test]
    fn custom_family_with_pi0() {
        let doc = r#"{"terms": [
            {"order": 1, "p_coeffs": [1], "q0": 0, "dq0": 1},
            {"order": 1, "p_coeffs": [0, 1], "q0": -1, "dq0": 0},
            {"order": 2, "p_coeffs": [1], "q0": "1/2", "dq0": 0}],
            "pi0": {"gaussian": {"mean": 0, "variance": 0.5}}}"#;
        let (family, pi0) = load_custom(doc).unwrap();
        assert_eq!(family.terms().len(), 3);
        assert_eq!(pi0.unwrap().moment(2), &0.5);
        assert!(load_custom(r#"{"terms": [], "pi0": {"bogus": 1}}"#).is_err());
    }

    #[test]
    fn recursion_command() {
        let (code, out, _) = run_capture(&["wf-recursion", "--n", "2", "--kappa", "1", "--t", "1"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("b_{2,1} = 2\n"));
        assert!(out.contains("b_{2,2} = -10\n"));
        let (_, out, _) = run_capture(&["wf-recursion", "--n", "3", "--kappa", "1", "--t", "1"]);
        assert!(out.contains("gamma_{3,2} = -6/5\n"));
    }

    #[test]
    fn env_tolerance_is_used() {
        let args = Cli::try_parse_from([
            "semisens",
            "sensitivity",
            "--model",
            "ou",
            "--t",
            "1",
            "--xi",
            "x",
            "--tol",
            "1e-9",
        ])
        .unwrap();
        let Command::Sensitivity(s) = args.command else {
            panic!()
        };
        assert_eq!(s.tol, 1e-9);
    }
}
