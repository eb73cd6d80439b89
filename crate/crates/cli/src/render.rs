//! Text, JSON and CSV renderings of each command's result.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use statcalc_core::derivative::{DaPairReport, DerivativeEstimate};
use statcalc_core::{AntiderivativeGrid, ConvergenceReport, IntegralResult, MeanEstimate};

use crate::OutputFormat;

/// JSON shape of the `ftc` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtcOutput {
    pub antiderivative: String,
    pub c: f64,
    pub d: f64,
    pub value: f64,
}

fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    writeln!(out, "{text}")
}

pub fn mean(out: &mut dyn Write, fmt: OutputFormat, m: &MeanEstimate) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(out, m),
        OutputFormat::Csv => {
            writeln!(out, "mean,n,sample_stddev,stderr")?;
            writeln!(out, "{},{},{},{}", m.mean, m.n, m.sample_stddev, m.stderr)
        }
        OutputFormat::Text => {
            writeln!(out, "mean          {}", m.mean)?;
            writeln!(out, "n             {}", m.n)?;
            writeln!(out, "sample stddev {}", m.sample_stddev)?;
            writeln!(out, "stderr        {}", m.stderr)
        }
    }
}

pub fn integral(out: &mut dyn Write, fmt: OutputFormat, r: &IntegralResult) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(out, r),
        OutputFormat::Csv => {
            writeln!(out, "a,b,value,mean,n,error_bar")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.interval.a(),
                r.interval.b(),
                r.value,
                r.mean.mean,
                r.mean.n,
                r.error_bar
            )
        }
        OutputFormat::Text => {
            writeln!(out, "integral  {}", r.value)?;
            writeln!(out, "interval  [{}, {}]", r.interval.a(), r.interval.b())?;
            writeln!(out, "mean      {}", r.mean.mean)?;
            writeln!(out, "n         {}", r.mean.n)?;
            writeln!(out, "error bar {}", r.error_bar)
        }
    }
}

pub fn grid(out: &mut dyn Write, fmt: OutputFormat, g: &AntiderivativeGrid) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(out, g),
        OutputFormat::Csv => {
            writeln!(out, "x,F")?;
            for (x, v) in g.nodes() {
                writeln!(out, "{x},{v}")?;
            }
            Ok(())
        }
        OutputFormat::Text => {
            writeln!(out, "# x F(x)")?;
            for (x, v) in g.nodes() {
                writeln!(out, "{x} {v}")?;
            }
            Ok(())
        }
    }
}

pub fn ftc(out: &mut dyn Write, fmt: OutputFormat, big_f: &str, c: f64, d: f64, value: f64) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(
            out,
            &FtcOutput {
                antiderivative: big_f.to_string(),
                c,
                d,
                value,
            },
        ),
        OutputFormat::Csv => {
            writeln!(out, "c,d,value")?;
            writeln!(out, "{c},{d},{value}")
        }
        OutputFormat::Text => writeln!(out, "F(d) - F(c) = {value}"),
    }
}

pub fn derivative(out: &mut dyn Write, fmt: OutputFormat, e: &DerivativeEstimate) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(out, e),
        OutputFormat::Csv => {
            writeln!(out, "k,h,slope")?;
            for (k, it) in e.iterates.iter().enumerate() {
                writeln!(out, "{k},{},{}", it.h, it.slope)?;
            }
            Ok(())
        }
        OutputFormat::Text => {
            writeln!(out, "derivative at {} = {}", e.t1, e.value)?;
            let delta = e.achieved_delta.map_or("-".to_string(), |d| format!("{d:e}"));
            writeln!(out, "converged {}  last change {delta}", e.converged)?;
            writeln!(out, "{:>3}  {:>24}  {:>24}", "k", "h", "slope")?;
            for (k, it) in e.iterates.iter().enumerate() {
                writeln!(out, "{k:>3}  {:>24e}  {:>24}", it.h, it.slope)?;
            }
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn da_pair(out: &mut dyn Write, fmt: OutputFormat, r: &DaPairReport) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(out, r),
        OutputFormat::Csv => {
            writeln!(out, "direction,max_error,worst_x,tolerance,verdict")?;
            writeln!(
                out,
                "derivative,{},{},{},{}",
                r.max_derivative_error,
                r.worst_derivative_x,
                r.deriv_tol,
                verdict(r.derivative_ok)
            )?;
            writeln!(
                out,
                "integral,{},{},{},{}",
                r.max_integral_error,
                r.worst_integral_x,
                r.int_tol,
                verdict(r.integral_ok)
            )
        }
        OutputFormat::Text => {
            writeln!(out, "f = {}", r.derivative)?;
            writeln!(out, "F = {}", r.antiderivative)?;
            writeln!(
                out,
                "on [{}, {}], {} nodes, {} samples per integral",
                r.interval.a(),
                r.interval.b(),
                r.grid_count,
                r.samples_per_node
            )?;
            writeln!(out, "{:<10}  {:>12}  {:>12}  {:>10}  verdict", "direction", "max error", "worst x", "tolerance")?;
            writeln!(
                out,
                "{:<10}  {:>12.4e}  {:>12.6}  {:>10.1e}  {}",
                "derivative",
                r.max_derivative_error,
                r.worst_derivative_x,
                r.deriv_tol,
                verdict(r.derivative_ok)
            )?;
            writeln!(
                out,
                "{:<10}  {:>12.4e}  {:>12.6}  {:>10.1e}  {}",
                "integral",
                r.max_integral_error,
                r.worst_integral_x,
                r.int_tol,
                verdict(r.integral_ok)
            )?;
            writeln!(out, "overall: {}", verdict(r.passed()))
        }
    }
}

pub fn convergence(out: &mut dyn Write, fmt: OutputFormat, r: &ConvergenceReport) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(out, r),
        OutputFormat::Csv => write!(out, "{}", r.to_csv()),
        OutputFormat::Text => {
            let head = "Sample Size n";
            let label_width = r
                .rows
                .iter()
                .map(|row| row.label.len())
                .chain([head.len()])
                .max()
                .unwrap_or(0);
            let widths: Vec<usize> = r
                .sizes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    r.rows
                        .iter()
                        .filter_map(|row| row.cells.get(i).map(|c| c.display.len()))
                        .chain([n.to_string().len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            writeln!(out, "{} on [{}, {}]", r.function, r.interval.a(), r.interval.b())?;
            write!(out, "{head:<label_width$}")?;
            for (n, w) in r.sizes.iter().zip(&widths) {
                write!(out, "  {n:>w$}")?;
            }
            writeln!(out)?;
            for row in &r.rows {
                write!(out, "{:<label_width$}", row.label)?;
                for (cell, w) in row.cells.iter().zip(&widths) {
                    write!(out, "  {:>w$}", cell.display)?;
                }
                writeln!(out)?;
            }
            if let Some(reference) = r.reference {
                writeln!(out, "reference {reference}")?;
            }
            Ok(())
        }
    }
}
