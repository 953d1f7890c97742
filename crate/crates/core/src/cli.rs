//! Command-line front end for the `gibbs` binary.
//!
//! Exit codes: 0 success, 1 malformed configuration, 2 field-spec schema
//! violation, 3 expression parse or evaluation error, 4 check failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::check;
use crate::dyadics::Tensor3;
use crate::error::FieldSpecError;
use crate::fields::{spec, BlackBoxField, PolyField, VectorField};
use crate::format;
use crate::ga::Vec3;
use crate::kinematics::{self, KinematicsReport};
use crate::notation::{audit_convention, parse_spanned, EvalContext, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_FIELD_SPEC: i32 = 2;
pub const EXIT_EXPRESSION: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

const DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Eval,
    Kinematics,
    Conventions,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// A fully parsed invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub field_path: Option<PathBuf>,
    pub point: Option<Vec3>,
    /// Named constant vectors, in command-line order.
    pub bindings: Vec<(String, Vec3)>,
    /// An expression, or `@path` for a file with one expression per line.
    pub expression: Option<String>,
    pub output: OutputFormat,
    pub fd_step: Option<f64>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            field_path: None,
            point: None,
            bindings: Vec::new(),
            expression: None,
            output: OutputFormat::Text,
            fd_step: None,
            seed: 0,
        }
    }

    /// The vector bound to `dr`, if any.
    pub fn dr(&self) -> Option<Vec3> {
        self.bindings.iter().rev().find(|(n, _)| n == "dr").map(|&(_, v)| v)
    }

    /// Parses command-line arguments, including the program name.
    pub fn from_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let (command, expression, opts) = match cli.command {
            Command::Eval { expression, opts } => (CommandKind::Eval, Some(expression), opts),
            Command::Kinematics(opts) => (CommandKind::Kinematics, None, opts),
            Command::Conventions(opts) => (CommandKind::Conventions, None, opts),
            Command::Check(opts) => (CommandKind::Check, None, opts),
        };
        Ok(RunConfig {
            command,
            field_path: opts.field,
            point: opts.point.map(|p| Vec3::new(p[0], p[1], p[2])),
            bindings: opts.bind.into_iter().map(|b| (b.name, b.value)).collect(),
            expression,
            output: opts.output,
            fd_step: opts.fd_step,
            seed: opts.seed,
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gibbs",
    version,
    about = "Gibbsian dyadics, gradient conventions and velocity-gradient kinematics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a notation expression at a point
    Eval {
        /// Expression such as "dr · (∇⊗v)", or @FILE with one expression per line
        expression: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Print gradient, strain-rate, rotation and vorticity at a point
    Kinematics(Options),
    /// Compare the Gibbs and alternative gradient conventions at a point
    Conventions(Options),
    /// Run the seeded identity suite
    Check(Options),
}

#[derive(Debug, Args)]
struct Options {
    /// Field spec file (JSON)
    #[arg(long, value_name = "PATH")]
    field: Option<PathBuf>,
    /// Evaluation point
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true)]
    point: Option<Vec<f64>>,
    /// Bind a constant vector, e.g. dr=0,1,0 (repeatable)
    #[arg(long, value_name = "NAME=X,Y,Z", value_parser = parse_binding)]
    bind: Vec<Binding>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    /// Differentiate by central differences with this step instead of exactly
    #[arg(long, value_name = "H")]
    fd_step: Option<f64>,
    /// Seed for randomized checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone)]
struct Binding {
    name: String,
    value: Vec3,
}

fn parse_binding(s: &str) -> Result<Binding, String> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=X,Y,Z, got {s:?}"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err("binding name is empty".into());
    }
    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated components, got {rest:?}"));
    }
    let mut xyz = [0.0; 3];
    for (slot, part) in xyz.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid number {:?} in binding {name}", part.trim()))?;
    }
    Ok(Binding {
        name: name.to_string(),
        value: xyz.into(),
    })
}

/// Exit code and captured output of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::from_args(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::fail(EXIT_CONFIG, text)
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match run_inner(cfg) {
        Ok(outcome) => outcome,
        Err(failure) => Outcome::fail(failure.0, failure.1),
    }
}

struct Failure(i32, String);

fn config_error(msg: impl Into<String>) -> Failure {
    Failure(EXIT_CONFIG, format!("error: {}", msg.into()))
}

fn field_spec_error(path: &std::path::Path, e: FieldSpecError) -> Failure {
    Failure(
        EXIT_FIELD_SPEC,
        format!(
            "error: invalid field spec {}: at pointer \"{}\": {}",
            path.display(),
            e.pointer,
            e.message
        ),
    )
}

fn run_inner(cfg: &RunConfig) -> Result<Outcome, Failure> {
    if let Some(h) = cfg.fd_step {
        if !(h.is_finite() && h > 0.0) {
            return Err(config_error(format!(
                "--fd-step must be positive and finite, got {h}"
            )));
        }
    }
    if let Some(p) = cfg.point {
        if !p.is_finite() {
            return Err(config_error("--point must be finite"));
        }
    }
    for (name, v) in &cfg.bindings {
        if !v.is_finite() {
            return Err(config_error(format!("binding {name} must be finite")));
        }
    }
    match cfg.command {
        CommandKind::Check => Ok(run_check(cfg)),
        CommandKind::Eval => {
            let expression = cfg
                .expression
                .as_deref()
                .ok_or_else(|| config_error("eval requires an expression"))?;
            let (field, x) = load(cfg)?;
            run_eval(cfg, field.as_ref(), x, expression).map(Outcome::ok)
        }
        CommandKind::Kinematics => {
            let (field, x) = load(cfg)?;
            run_kinematics(cfg, field.as_ref(), x).map(Outcome::ok)
        }
        CommandKind::Conventions => {
            let (field, x) = load(cfg)?;
            run_conventions(cfg, field.as_ref(), x).map(Outcome::ok)
        }
    }
}

/// Reads the field spec and point required by every field command.
fn load(cfg: &RunConfig) -> Result<(Box<dyn VectorField>, Vec3), Failure> {
    let path = cfg
        .field_path
        .as_deref()
        .ok_or_else(|| config_error("--field is required"))?;
    let x = cfg
        .point
        .ok_or_else(|| config_error("--point is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read field spec {}: {e}", path.display())))?;
    let poly = spec::parse_field_spec(&text).map_err(|e| field_spec_error(path, e))?;
    Ok((with_step(poly, cfg.fd_step)?, x))
}

fn with_step(poly: PolyField, step: Option<f64>) -> Result<Box<dyn VectorField>, Failure> {
    match step {
        None => Ok(Box::new(poly)),
        Some(h) => BlackBoxField::wrap(poly, h)
            .map(|f| Box::new(f) as Box<dyn VectorField>)
            .map_err(|e| config_error(e.to_string())),
    }
}

fn field_failure(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_FIELD_SPEC, format!("error: field evaluation failed: {e}"))
}

fn to_json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn run_check(cfg: &RunConfig) -> Outcome {
    let report = check::run_checks(cfg.seed);
    let stdout = match cfg.output {
        OutputFormat::Text => report.render_text(),
        OutputFormat::Json => to_json_text(&report),
    };
    Outcome {
        code: if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED },
        stdout,
        stderr: String::new(),
    }
}

struct Evaluated {
    source: String,
    value: Value,
    verdict: Option<Json>,
}

fn run_eval(
    cfg: &RunConfig,
    field: &dyn VectorField,
    x: Vec3,
    expression: &str,
) -> Result<String, Failure> {
    let mut ctx = EvalContext::new(field, x);
    for (name, value) in &cfg.bindings {
        ctx = ctx
            .bind(name, *value)
            .map_err(|e| config_error(format!("--bind {name}: {e}")))?;
    }

    let (sources, script) = match expression.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(format!("cannot read expression file {path}: {e}")))?;
            let lines: Vec<(usize, String)> = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .map(|(i, l)| (i + 1, l.to_string()))
                .collect();
            (lines, Some(path.to_string()))
        }
        None => (vec![(0, expression.to_string())], None),
    };

    let mut results = Vec::new();
    for (line, src) in sources {
        let value = evaluate_one(&ctx, &src).map_err(|(offset, message)| {
            let location = match &script {
                Some(path) => format!("{path}:{line}: "),
                None => String::new(),
            };
            let column = src[..offset].chars().count();
            Failure(
                EXIT_EXPRESSION,
                format!(
                    "error: {location}{message} at position {column}\n  {src}\n  {}^",
                    " ".repeat(column)
                ),
            )
        })?;
        let verdict = match value {
            Value::Tensor(t) => Some(
                serde_json::to_value(audit_convention(&t, field, x).map_err(field_failure)?)
                    .expect("plain data serializes"),
            ),
            _ => None,
        };
        results.push(Evaluated {
            source: src,
            value,
            verdict,
        });
    }

    Ok(match cfg.output {
        OutputFormat::Json => {
            let items: Vec<Json> = results
                .iter()
                .map(|r| {
                    let mut obj = json!({
                        "expression": r.source,
                        "point": x,
                        "result": r.value.to_json(),
                    });
                    if let Some(v) = &r.verdict {
                        obj["audit"] = v.clone();
                    }
                    obj
                })
                .collect();
            if script.is_some() {
                to_json_text(&items)
            } else {
                to_json_text(&items[0])
            }
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for r in &results {
                if script.is_some() {
                    let _ = writeln!(out, "{}", r.source);
                }
                let _ = writeln!(out, "{}", r.value);
                if let Some(v) = &r.verdict {
                    let _ = writeln!(out, "convention: {}", v["verdict"].as_str().unwrap_or(""));
                }
            }
            out
        }
    })
}

/// Parses and evaluates one expression; errors carry a byte offset.
fn evaluate_one(ctx: &EvalContext<'_>, src: &str) -> Result<Value, (usize, String)> {
    let (expr, span) = parse_spanned(src).map_err(|e| (e.offset(), e.to_string()))?;
    ctx.evaluate_traced(&expr)
        .map_err(|e| (span.locate(&e.path), e.to_string()))
}

fn vec_text(v: Vec3) -> String {
    Value::Vector(v).to_string()
}

/// Renders titled matrices next to each other.
fn side_by_side(blocks: &[(&str, Tensor3)]) -> String {
    let columns: Vec<Vec<String>> = blocks
        .iter()
        .map(|(title, t)| {
            let mut lines = vec![title.to_string()];
            lines.extend(t.render(DIGITS).lines().map(str::to_string));
            lines
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .map(|c| c.iter().map(|l| l.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in 0..4 {
        let mut line = String::new();
        for (col, width) in columns.iter().zip(&widths) {
            let cell = &col[row];
            line.push_str(cell);
            line.push_str(&" ".repeat(width - cell.chars().count() + 4));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn run_kinematics(cfg: &RunConfig, field: &dyn VectorField, x: Vec3) -> Result<String, Failure> {
    let r: KinematicsReport = kinematics::report(field, x).map_err(field_failure)?;
    Ok(match cfg.output {
        OutputFormat::Json => to_json_text(&r),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "point: {}\n", vec_text(r.point));
            out.push_str(&side_by_side(&[
                ("grad_gibbs = ∇⊗v", r.grad_gibbs),
                ("grad_alt = (∇⊗v)†", r.grad_alt),
            ]));
            out.push('\n');
            out.push_str(&side_by_side(&[
                ("d = ½[∇⊗v + (∇⊗v)†]", r.d),
                ("Ω = ½[∇⊗v - (∇⊗v)†]", r.omega),
            ]));
            let _ = writeln!(out);
            let _ = writeln!(out, "Ω bivector: {}", r.omega_bivector);
            let _ = writeln!(out, "vorticity: {}", vec_text(r.vorticity));
            let _ = writeln!(out, "divergence: {}", format::sig(r.divergence, DIGITS));
            out
        }
    })
}

#[derive(Serialize)]
struct ConventionsReport {
    point: Vec3,
    grad_gibbs: Tensor3,
    grad_alt: Tensor3,
    difference: Tensor3,
    omega: Tensor3,
    omega_transpose: Tensor3,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation: Option<RotationPair>,
}

/// `dr · Ω` against `Ω† · dr` and the mistaken `dr · Ω†`.
#[derive(Serialize)]
struct RotationPair {
    dr: Vec3,
    postfactor: Vec3,
    prefactor: Vec3,
    transposed_postfactor: Vec3,
}

fn run_conventions(cfg: &RunConfig, field: &dyn VectorField, x: Vec3) -> Result<String, Failure> {
    let g = field.grad_gibbs(x).map_err(field_failure)?;
    let zero = |t: Tensor3| Tensor3::from_fn(|i, j| t.get(i, j) + 0.0);
    let omega = zero(g.antisym());
    let report = ConventionsReport {
        point: x,
        grad_gibbs: zero(g),
        grad_alt: zero(g.transpose()),
        difference: zero(g - g.transpose()),
        omega,
        omega_transpose: zero(omega.transpose()),
        rotation: cfg.dr().map(|dr| RotationPair {
            dr,
            postfactor: Tensor3::postfactor(dr, &omega) + Vec3::ZERO,
            prefactor: Tensor3::prefactor(&omega.transpose(), dr) + Vec3::ZERO,
            transposed_postfactor: Tensor3::postfactor(dr, &omega.transpose()) + Vec3::ZERO,
        }),
    };
    Ok(match cfg.output {
        OutputFormat::Json => to_json_text(&report),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "point: {}\n", vec_text(x));
            out.push_str(&side_by_side(&[
                ("∇⊗v (Gibbs)", report.grad_gibbs),
                ("(∇⊗v)† (alternative)", report.grad_alt),
                ("∇⊗v - (∇⊗v)†", report.difference),
            ]));
            out.push('\n');
            out.push_str(&side_by_side(&[
                ("Ω (postfactor, dr·Ω)", report.omega),
                ("Ω† (prefactor, Ω†·dr)", report.omega_transpose),
            ]));
            if report.difference.max_abs() == 0.0 {
                let _ = writeln!(out, "\nthe gradient is symmetric: both conventions coincide");
            }
            if let Some(rot) = &report.rotation {
                let _ = writeln!(out);
                let _ = writeln!(out, "dr = {}", vec_text(rot.dr));
                let _ = writeln!(out, "dr·Ω   = {}", vec_text(rot.postfactor));
                let _ = writeln!(out, "Ω†·dr  = {}", vec_text(rot.prefactor));
                let _ = writeln!(out, "dr·Ω†  = {}", vec_text(rot.transposed_postfactor));
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binding_syntax() {
        let b = parse_binding("dr=0,1,-2.5").unwrap();
        assert_eq!(b.name, "dr");
        assert_eq!(b.value, Vec3::new(0.0, 1.0, -2.5));
        assert!(parse_binding("dr").is_err());
        assert!(parse_binding("=1,2,3").is_err());
        assert!(parse_binding("dr=1,2").is_err());
        assert!(parse_binding("dr=1,x,2").is_err());
    }

    #[test]
    fn flags_parse() {
        let cfg = RunConfig::from_args([
            "gibbs", "eval", "--field", "f.json", "--point", "-1", "0", "2.5", "--bind",
            "dr=0,1,0", "--bind", "a=1,1,1", "--output", "json", "--fd-step", "1e-4", "dr · v",
        ])
        .unwrap();
        assert_eq!(cfg.command, CommandKind::Eval);
        assert_eq!(cfg.point, Some(Vec3::new(-1.0, 0.0, 2.5)));
        assert_eq!(cfg.bindings.len(), 2);
        assert_eq!(cfg.dr(), Some(Vec3::unit(1)));
        assert_eq!(cfg.output, OutputFormat::Json);
        assert_eq!(cfg.fd_step, Some(1e-4));
        assert_eq!(cfg.expression.as_deref(), Some("dr · v"));
        assert_eq!(cfg.seed, 0);
    }

    #[test]
    fn config_errors_exit_one() {
        assert_eq!(main_with_args(["gibbs", "frobnicate"]).code, EXIT_CONFIG);
        assert_eq!(main_with_args(["gibbs", "kinematics"]).code, EXIT_CONFIG);
        assert_eq!(main_with_args(["gibbs", "check", "--seed", "x"]).code, EXIT_CONFIG);
        let mut cfg = RunConfig::new(CommandKind::Check);
        cfg.fd_step = Some(-1.0);
        assert_eq!(run(&cfg).code, EXIT_CONFIG);
    }

    #[test]
    fn help_exits_zero() {
        let out = main_with_args(["gibbs", "--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("kinematics"));
    }

    #[test]
    fn side_by_side_layout() {
        let s = side_by_side(&[("A", Tensor3::IDENTITY), ("B", Tensor3::ZERO)]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "[ 1  0  0 ]    [ 0  0  0 ]");
    }
}
