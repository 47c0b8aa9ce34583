//! Command-line front end. `run` returns the process exit code: 0 with a
//! result, 1 when nothing was found, 2 on usage or input errors.

use std::io::Write;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{RationalFunction, Var};
use crate::driver::{
    parametrize_polynomial, rationalize_root, rationalize_simultaneously, verify, DriverError, Options, Solution,
    VerifiedForm,
};
use crate::expr::{parse_polynomial, parse_rational_function, parse_root, substitutions_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const TIMEOUT_ENV: &str = "ROOTRAT_TIMEOUT";

#[derive(Parser, Debug)]
#[command(name = "rootrat", version, about = "Rational variable changes for square roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a variable change that makes R1*sqrt(R2) rational
    Rationalize {
        expr: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Rationally parametrize the hypersurface of a polynomial
    Parametrize {
        poly: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// One variable change for several roots at once
    Simultaneous {
        #[arg(required = true)]
        exprs: Vec<String>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check that substitutions VAR=VALUE make a root rational
    Verify {
        expr: String,
        substitutions: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run one task per line of a file
    Batch { path: String },
}

#[derive(Args, Debug, Clone, Default)]
struct Flags {
    /// Variables to change, comma-separated
    #[arg(long)]
    vars: Option<String>,
    /// Names for the new variables, comma-separated
    #[arg(long = "out-vars")]
    out_vars: Option<String>,
    #[arg(long)]
    multiple: bool,
    #[arg(long = "general-c")]
    general_c: bool,
    #[arg(long = "general-t")]
    general_t: bool,
    #[arg(long = "force-fdecomp")]
    force_fdecomp: bool,
    /// The triple "f1;f2;f3" of the decomposition
    #[arg(long, allow_hyphen_values = true)]
    fpolys: Option<String>,
    /// A finite point of multiplicity d-1, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Height bound of the rational point search
    #[arg(long)]
    height: Option<i64>,
    /// Time limit in seconds
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Driver(#[from] DriverError),
}

impl From<crate::expr::ExprError> for CliError {
    fn from(e: crate::expr::ExprError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn var_list(text: &str) -> Result<Vec<Var>, CliError> {
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for n in &names {
        if !n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(CliError::Usage(format!("invalid variable name `{n}`")));
        }
    }
    Ok(names.into_iter().map(Var::new).collect())
}

fn env_timeout() -> Result<Option<f64>, CliError> {
    match std::env::var(TIMEOUT_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{TIMEOUT_ENV} must be a number of seconds"))),
        Err(_) => Ok(None),
    }
}

impl Flags {
    fn options(&self) -> Result<Options, CliError> {
        let mut opts = Options {
            multiple_solutions: self.multiple,
            general_c: self.general_c,
            general_t: self.general_t,
            force_fdecomposition: self.force_fdecomp,
            ..Options::default()
        };
        opts.variables = self.vars.as_deref().map(var_list).transpose()?;
        opts.output_variables = self.out_vars.as_deref().map(var_list).transpose()?;
        if let Some(text) = &self.fpolys {
            let parts: Vec<&str> = text.split(';').collect();
            let [a, b, c] = parts.as_slice() else {
                return Err(CliError::Usage("--fpolys expects three polynomials separated by `;`".into()));
            };
            opts.f_polynomials = Some([parse_polynomial(a)?, parse_polynomial(b)?, parse_polynomial(c)?]);
        }
        if let Some(text) = &self.point {
            opts.point = Some(text.split(',').map(parse_rational_function).collect::<Result<_, _>>()?);
        }
        if let Some(h) = self.height {
            if h < 1 {
                return Err(CliError::Usage("--height must be positive".into()));
            }
            opts.height = h;
        }
        let secs = match self.timeout {
            Some(s) => Some(s),
            None => env_timeout()?,
        };
        if let Some(s) = secs {
            opts.timeout = Some(Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage("invalid timeout".into()))?);
        }
        Ok(opts)
    }
}

struct Report {
    input: String,
    results: Vec<Value>,
    plain: Vec<String>,
    empty_message: &'static str,
}

impl Report {
    fn new(input: &str, empty_message: &'static str) -> Self {
        Report { input: input.to_string(), results: Vec::new(), plain: Vec::new(), empty_message }
    }

    fn push_form(&mut self, form: &VerifiedForm) {
        self.results.push(json!({
            "substitutions": substitutions_json(&form.substitutions),
            "root_value": form.root_value.to_string(),
            "strategy": form.strategy.as_str(),
            "point": form.point.as_ref().map(|p| p.render()),
        }));
        self.plain.push(substitution_line(&form.substitutions));
        self.plain.push(format!("root = {}", form.root_value));
    }

    fn push_solution(&mut self, sol: &Solution) {
        let subst = sol.param.substitutions();
        self.results.push(json!({
            "substitutions": substitutions_json(&subst),
            "root_value": Value::Null,
            "strategy": sol.strategy.as_str(),
            "point": sol.param.point.as_ref().map(|p| p.render()),
        }));
        self.plain.push(substitution_line(&subst));
    }

    fn emit(&self, json_out: bool, out: &mut dyn Write) -> std::io::Result<i32> {
        let code = if self.results.is_empty() { EXIT_EMPTY } else { EXIT_OK };
        if json_out {
            let status = if self.results.is_empty() { "empty" } else { "ok" };
            let doc = json!({ "input": self.input, "results": self.results, "status": status });
            writeln!(out, "{doc}")?;
        } else if self.results.is_empty() {
            writeln!(out, "{}", self.empty_message)?;
        } else {
            for line in &self.plain {
                writeln!(out, "{line}")?;
            }
        }
        Ok(code)
    }
}

fn substitution_line(subst: &[(Var, RationalFunction)]) -> String {
    if subst.is_empty() {
        return "(no substitution)".into();
    }
    subst.iter().map(|(v, f)| format!("{v} -> {f}")).collect::<Vec<_>>().join(", ")
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("write failed: {e}"));
    match command {
        Command::Rationalize { expr, flags } => {
            let root = parse_root(&expr)?;
            let forms = rationalize_root(&root, &flags.options()?)?;
            let mut report = Report::new(&expr, "no rationalization found");
            forms.iter().for_each(|f| report.push_form(f));
            report.emit(flags.json, out).map_err(io)
        }
        Command::Parametrize { poly, flags } => {
            let p = parse_polynomial(&poly)?;
            let sols = parametrize_polynomial(&p, &flags.options()?)?;
            let mut report = Report::new(&poly, "no parametrization found");
            sols.iter().for_each(|s| report.push_solution(s));
            report.emit(flags.json, out).map_err(io)
        }
        Command::Simultaneous { exprs, flags } => {
            let roots = exprs.iter().map(|e| parse_root(e)).collect::<Result<Vec<_>, _>>()?;
            let forms = rationalize_simultaneously(&roots, &flags.options()?)?;
            let mut report = Report::new(&exprs.join("; "), "no simultaneous rationalization found");
            for f in forms.iter().flatten() {
                report.push_form(f);
            }
            report.emit(flags.json, out).map_err(io)
        }
        Command::Verify { expr, substitutions, json } => {
            let root = parse_root(&expr)?;
            let mut subst = Vec::new();
            for item in &substitutions {
                let (name, value) =
                    item.split_once('=').ok_or_else(|| CliError::Usage(format!("expected VAR=VALUE, got `{item}`")))?;
                let var = var_list(name)?.pop().ok_or_else(|| CliError::Usage("empty variable name".into()))?;
                subst.push((var, parse_rational_function(value)?));
            }
            let mut report = Report::new(&expr, "not rational under this substitution");
            if let Some(form) = verify(&root, &subst) {
                report.push_form(&form);
            }
            report.emit(json, out).map_err(io)
        }
        Command::Batch { path } => batch(&path, out),
    }
}

/// Parses and runs one command line; `args` excludes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("rootrat")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Driver(DriverError::TimedOut(e))) => {
            let _ = writeln!(err, "rootrat: {e}");
            EXIT_EMPTY
        }
        Err(e) => {
            let _ = writeln!(err, "rootrat: {e}");
            EXIT_USAGE
        }
    }
}

fn batch(path: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    let io = |e: std::io::Error| CliError::Usage(format!("write failed: {e}"));
    let (mut ok, mut empty, mut errored) = (0, 0, 0);
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(args) = shlex::split(line) else {
            errored += 1;
            writeln!(out, "line {}: error: unbalanced quotes", n + 1).map_err(io)?;
            continue;
        };
        if args.first().map(String::as_str) == Some("batch") {
            errored += 1;
            writeln!(out, "line {}: error: nested batch", n + 1).map_err(io)?;
            continue;
        }
        let (mut body, mut diag) = (Vec::new(), Vec::new());
        let code = run(&args, &mut body, &mut diag);
        let status = match code {
            EXIT_OK => {
                ok += 1;
                "ok".to_string()
            }
            EXIT_EMPTY => {
                empty += 1;
                "empty".to_string()
            }
            _ => {
                errored += 1;
                format!("error: {}", String::from_utf8_lossy(&diag).trim())
            }
        };
        writeln!(out, "line {}: {status}", n + 1).map_err(io)?;
        for l in String::from_utf8_lossy(&body).lines() {
            writeln!(out, "  {l}").map_err(io)?;
        }
    }
    writeln!(out, "succeeded: {ok}, failed: {empty}, errored: {errored}").map_err(io)?;
    Ok(if errored > 0 { EXIT_USAGE } else { EXIT_OK })
}
