//! `statcalc` command-line front end.
//!
//! [`run`] takes the argument vector and explicit streams so the whole CLI
//! can be driven from tests. Exit codes:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success                                   |
//! | 1    | usage error (flags, expressions, files)   |
//! | 2    | evaluation or domain error                |
//! | 3    | a DA-pair verdict failed (`dapair`)       |
//!
//! Errors go to standard error as a single line
//! `statcalc: error[CODE]: message`.

mod render;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use statcalc_core::derivative::{DaTolerances, DerivativeOptions, SecantMode};
use statcalc_core::tabular::{self, TabularFunction};
use statcalc_core::{
    antiderivative_grid, convergence_study, derivative_at, ftc_evaluate, function_mean, integral,
    parse, verify_da_pair, Error, FunctionHandle, Interval, SamplePlan, Sampling, StudyStrategy,
};

/// Environment variable consulted for the seed when `--seed` is absent.
pub const SEED_ENV: &str = "STATCALC_SEED";
pub const DEFAULT_SEED: u64 = 2014;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_EVAL: i32 = 2;
pub const EXIT_VERDICT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Uniform,
    Random,
    Convenience,
}

#[derive(Debug, Parser)]
#[command(
    name = "statcalc",
    version,
    about = "Integrals, antiderivatives and derivatives from arithmetic and graphic means"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

/// Numeric flag: any constant expression, so `pi/2` and `-e` are accepted.
fn number(text: &str) -> Result<f64, String> {
    let expr = parse(text).map_err(|e| e.to_string())?;
    if expr.contains_var() {
        return Err(format!("`{text}` must be a constant (it mentions x)"));
    }
    expr.evaluate(0.0).map_err(|e| e.to_string())
}

// Newtypes so clap treats a comma-separated list as a single value.
#[derive(Debug, Clone, PartialEq)]
struct Points(Vec<f64>);
#[derive(Debug, Clone, PartialEq)]
struct Sizes(Vec<usize>);
#[derive(Debug, Clone, PartialEq)]
struct Strategies(Vec<StudyStrategy>);

fn number_list(text: &str) -> Result<Points, String> {
    text.split(',').map(|s| number(s.trim())).collect::<Result<_, _>>().map(Points)
}

fn size_list(text: &str) -> Result<Sizes, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim().replace('_', "");
            s.parse::<usize>().or_else(|_| {
                // Allow 1e6 style sizes.
                let v = number(&s)?;
                if v >= 1.0 && v.fract() == 0.0 && v <= usize::MAX as f64 {
                    Ok(v as usize)
                } else {
                    Err(format!("`{s}` is not a positive integer"))
                }
            })
        })
        .collect::<Result<_, _>>()
        .map(Sizes)
}

fn strategy_list(text: &str) -> Result<Strategies, String> {
    text.split(',')
        .map(|s| match s.trim() {
            "uniform" => Ok(StudyStrategy::Uniform),
            "random" => Ok(StudyStrategy::Random),
            other => Err(format!("unknown strategy `{other}` (expected uniform or random)")),
        })
        .collect::<Result<_, _>>()
        .map(Strategies)
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Left endpoint.
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Right endpoint.
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Uniform)]
    strategy: StrategyArg,
    /// Sample count (uniform and random).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Seed for random sampling; defaults to $STATCALC_SEED, then 2014.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated sample points (convenience).
    #[arg(long, value_parser = number_list, allow_hyphen_values = true)]
    points: Option<Points>,
    /// Spacing-weighted mean for convenience samples.
    #[arg(long)]
    weighted: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mean of a function over an interval, or of a data file's second column.
    Mean {
        #[arg(long = "fn", conflicts_with = "data", required_unless_present = "data")]
        function: Option<String>,
        /// Two-column CSV file, or `-` for standard input.
        #[arg(long)]
        data: Option<String>,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Mean-based integral I[f, a, b] = (b - a) * mean.
    Integrate {
        #[arg(long = "fn")]
        function: String,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Antiderivative F(x) = I[f, a, x] on a grid, as two-column data.
    Antiderivative {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        a: f64,
        #[arg(long = "x-max", value_parser = number, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Uniform)]
        strategy: StrategyArg,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// I[f, c, d] = F(d) - F(c) from an antiderivative expression.
    Ftc {
        #[arg(long = "F")]
        antiderivative: String,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        d: f64,
    },
    /// Derivative at a point as the limit of graphic means.
    Derivative {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, value_parser = number, default_value = "0.1")]
        h0: f64,
        #[arg(long, value_parser = number, default_value = "0.5")]
        ratio: f64,
        #[arg(long, value_parser = number, default_value = "1e-8")]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 40)]
        max_iter: usize,
        /// Use symmetric secants around the point.
        #[arg(long)]
        central: bool,
    },
    /// Check a claimed derivative/antiderivative pair in both directions.
    Dapair {
        #[arg(long = "f")]
        derivative: String,
        #[arg(long = "F")]
        antiderivative: String,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 25)]
        grid: usize,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long = "deriv-tol", value_parser = number, default_value = "1e-4")]
        deriv_tol: f64,
        #[arg(long = "int-tol", value_parser = number, default_value = "2e-3")]
        int_tol: f64,
    },
    /// Convergence of the sample mean with growing sample size.
    Converge {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, value_parser = size_list, default_value = "10,100,1000,10000,100000,1000000")]
        sizes: Sizes,
        #[arg(long, value_parser = strategy_list, default_value = "uniform,random")]
        strategies: Strategies,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Known true mean, recorded in the report.
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        reference: Option<f64>,
    },
    /// Mean or integral of a two-column data file.
    Table {
        #[arg(value_enum)]
        action: TableAction,
        /// CSV file, or `-` for standard input.
        file: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableAction {
    Mean,
    Integrate,
}

/// Failure of a command, with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    tag: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            tag: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, tag) = if e.is_evaluation() {
            (EXIT_EVAL, "eval")
        } else {
            match e {
                Error::Parse(_) => (EXIT_USAGE, "parse"),
                Error::OutOfRange { .. } => (EXIT_EVAL, "domain"),
                Error::Csv { .. } | Error::DuplicateAbscissa { .. } => (EXIT_USAGE, "data"),
                _ => (EXIT_USAGE, "invalid"),
            }
        };
        Failure {
            code,
            tag,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            tag: "io",
            message: e.to_string(),
        }
    }
}

fn function(text: &str) -> Result<FunctionHandle, Failure> {
    FunctionHandle::parse(text).map_err(|e| Failure {
        code: EXIT_USAGE,
        tag: "parse",
        message: format!("`{text}`: {e}"),
    })
}

fn default_seed() -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn resolve_seed(seed: Option<u64>) -> Result<u64, Failure> {
    seed.map_or_else(default_seed, Ok)
}

fn sampling(strategy: StrategyArg, n: usize, seed: Option<u64>, points: Option<Points>, weighted: bool) -> Result<Sampling, Failure> {
    Ok(match strategy {
        StrategyArg::Uniform => Sampling::Uniform { n },
        StrategyArg::Random => Sampling::Random {
            n,
            seed: resolve_seed(seed)?,
        },
        StrategyArg::Convenience => Sampling::Convenience {
            points: points
                .ok_or_else(|| Failure::usage("--strategy convenience needs --points"))?
                .0,
            weighted,
        },
    })
}

fn plan(args: PlanArgs) -> Result<SamplePlan, Failure> {
    let (a, b) = match (args.a, args.b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Failure::usage("--a and --b are required")),
    };
    let iv = Interval::new(a, b)?;
    let sampling = sampling(args.strategy, args.n, args.seed, args.points, args.weighted)?;
    Ok(SamplePlan::new(iv, sampling)?)
}

fn load_table(path: &str, stdin: &mut dyn Read) -> Result<TabularFunction, Failure> {
    if path == "-" {
        let mut text = String::new();
        stdin.read_to_string(&mut text)?;
        Ok(tabular::load_csv(text.as_bytes(), "<stdin>")?)
    } else {
        let file = File::open(path).map_err(|e| Failure {
            code: EXIT_USAGE,
            tag: "io",
            message: format!("{path}: {e}"),
        })?;
        Ok(tabular::load_csv(file, path)?)
    }
}

fn execute(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32, Failure> {
    let fmt = cli.format;
    match cli.command {
        Command::Mean { function: f, data, plan: p } => {
            let m = match (f, data) {
                (_, Some(path)) => tabular::tabular_mean(&load_table(&path, stdin)?),
                (Some(text), None) => function_mean(&function(&text)?, &plan(p)?)?,
                (None, None) => return Err(Failure::usage("either --fn or --data is required")),
            };
            render::mean(out, fmt, &m)?;
        }
        Command::Integrate { function: f, plan: p } => {
            let r = integral(&function(&f)?, &plan(p)?)?;
            render::integral(out, fmt, &r)?;
        }
        Command::Antiderivative {
            function: f,
            a,
            x_max,
            grid,
            n,
            strategy,
            seed,
        } => {
            if strategy == StrategyArg::Convenience {
                return Err(Failure::usage("antiderivative supports uniform or random sampling"));
            }
            let template = sampling(strategy, n, seed, None, false)?;
            let g = antiderivative_grid(&function(&f)?, a, x_max, grid, &template)?;
            render::grid(out, fmt, &g)?;
        }
        Command::Ftc { antiderivative, c, d } => {
            let big_f = parse(&antiderivative).map_err(|e| Failure {
                code: EXIT_USAGE,
                tag: "parse",
                message: format!("`{antiderivative}`: {e}"),
            })?;
            let value = ftc_evaluate(&big_f, c, d)?;
            render::ftc(out, fmt, &big_f.to_string(), c, d, value)?;
        }
        Command::Derivative {
            function: f,
            at,
            h0,
            ratio,
            tol,
            max_iter,
            central,
        } => {
            let options = DerivativeOptions {
                h0,
                ratio,
                tol,
                max_iter,
                mode: if central { SecantMode::Central } else { SecantMode::Forward },
            };
            let est = derivative_at(&function(&f)?, at, &options)?;
            render::derivative(out, fmt, &est)?;
        }
        Command::Dapair {
            derivative,
            antiderivative,
            a,
            b,
            grid,
            n,
            deriv_tol,
            int_tol,
        } => {
            let report = verify_da_pair(
                &function(&derivative)?,
                &function(&antiderivative)?,
                Interval::new(a, b)?,
                grid,
                DaTolerances {
                    derivative: deriv_tol,
                    integral: int_tol,
                },
                &Sampling::Uniform { n },
            )?;
            render::da_pair(out, fmt, &report)?;
            if !report.passed() {
                return Ok(EXIT_VERDICT);
            }
        }
        Command::Converge {
            function: f,
            a,
            b,
            sizes,
            strategies,
            trials,
            seed,
            reference,
        } => {
            let mut report = convergence_study(
                &function(&f)?,
                Interval::new(a, b)?,
                &sizes.0,
                &strategies.0,
                trials,
                resolve_seed(seed)?,
            )?;
            if let Some(r) = reference {
                report = report.with_reference(r);
            }
            render::convergence(out, fmt, &report)?;
        }
        Command::Table { action, file } => {
            let table = load_table(&file, stdin)?;
            match action {
                TableAction::Mean => render::mean(out, fmt, &tabular::tabular_mean(&table))?,
                TableAction::Integrate => {
                    render::integral(out, fmt, &tabular::tabular_integral(&table)?)?
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let first = first.strip_prefix("error: ").unwrap_or(first);
                    let _ = writeln!(err, "statcalc: error[usage]: {first}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, stdin, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "statcalc: error[{}]: {}", f.tag, f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_flags_accept_constants() {
        assert_eq!(number("pi").unwrap(), std::f64::consts::PI);
        assert_eq!(number("-2.5").unwrap(), -2.5);
        assert!(number("x+1").is_err());
        assert!(number("1/0").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(size_list("10, 100,1e3,1_000_000").unwrap().0, vec![10, 100, 1000, 1_000_000]);
        assert!(size_list("10,0.5").is_err());
        assert_eq!(
            strategy_list("uniform,random").unwrap().0,
            vec![StudyStrategy::Uniform, StudyStrategy::Random]
        );
        assert!(strategy_list("uniform,stratified").is_err());
        assert_eq!(number_list("0.5, pi").unwrap().0, vec![0.5, std::f64::consts::PI]);
    }
}
