//! Sample-size convergence study of a function mean.
//!
//! The report has one row per strategy/trial and one column per sample
//! size. The uniform row is deterministic. Each random trial `t` (1-based)
//! at size index `j` uses seed `derive_seed(base_seed, t, j)` (see
//! [`crate::sampling::derive_seed`]); an `Average` row holds the mean of
//! the trial means per column.
//!
//! Display values are rounded to 4 decimals, half away from zero, after
//! first reducing the value to 15 significant digits. The reduction keeps
//! binary representation noise from deciding ties: the uniform mean of `x^2`
//! at `n = 100` is `0.33835` and displays as `0.3384`.

use serde::{Deserialize, Serialize};

use super::{arithmetic_mean, function_mean};
use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::sampling::{derive_seed, Interval, SamplePlan, Sampling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyStrategy {
    Uniform,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "trial")]
pub enum RowKind {
    Uniform,
    Trial(usize),
    Average,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCell {
    pub n: usize,
    pub mean: f64,
    /// Standard error of the mean; absent on the average row.
    pub stderr: Option<f64>,
    pub seed: Option<u64>,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub label: String,
    pub kind: RowKind,
    pub cells: Vec<ConvergenceCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub function: String,
    pub interval: Interval,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub rows: Vec<ConvergenceRow>,
    /// True mean, when the caller knows it.
    pub reference: Option<f64>,
}

impl ConvergenceReport {
    pub fn with_reference(mut self, reference: f64) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn row(&self, kind: RowKind) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.kind == kind)
    }

    /// Table layout: one header line of sample sizes, then for each row a
    /// line of display values followed by a `[full]` line with full
    /// precision means.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Sample Size n");
        for n in &self.sizes {
            out.push_str(&format!(",{n}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.label);
            for cell in &row.cells {
                out.push(',');
                out.push_str(&cell.display);
            }
            out.push('\n');
            out.push_str(&format!("{} [full]", row.label));
            for cell in &row.cells {
                out.push_str(&format!(",{:?}", cell.mean));
            }
            out.push('\n');
        }
        out
    }
}

/// Rounds half away from zero to `decimals` places after reducing `value`
/// to 15 significant digits, and formats the result with exactly
/// `decimals` places.
pub fn round_display(value: f64, decimals: u32) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    // `{:.14e}` gives the decimal digits d.dddddddddddddd and exponent.
    let sci = format!("{:.14e}", value.abs());
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let digits: u64 = mantissa.replace('.', "").parse().expect("digits");
    let exponent: i32 = exponent.parse().expect("exponent");
    // |value| = digits * 10^(exponent - 14); scale by 10^decimals.
    let shift = exponent - 14 + decimals as i32;
    let scaled: u128 = if shift >= 0 {
        match 10u128.checked_pow(shift as u32).and_then(|p| p.checked_mul(digits as u128)) {
            Some(v) => v,
            None => return format!("{:.*}", decimals as usize, value),
        }
    } else if -shift > 38 {
        0
    } else {
        let divisor = 10u128.pow((-shift) as u32);
        let q = digits as u128 / divisor;
        let r = digits as u128 % divisor;
        if 2 * r >= divisor {
            q + 1
        } else {
            q
        }
    };
    let unit = 10u128.pow(decimals);
    let sign = if value < 0.0 && scaled != 0 { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{scaled}")
    } else {
        format!(
            "{sign}{}.{:0width$}",
            scaled / unit,
            scaled % unit,
            width = decimals as usize
        )
    }
}

fn display(value: f64) -> String {
    round_display(value, 4)
}

pub fn convergence_study(
    f: &FunctionHandle,
    iv: Interval,
    sizes: &[usize],
    strategies: &[StudyStrategy],
    trials: usize,
    base_seed: u64,
) -> Result<ConvergenceReport> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("no sample sizes given".into()));
    }
    if sizes.contains(&0) {
        return Err(Error::ZeroSamples);
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "sample sizes must be strictly ascending".into(),
        ));
    }
    if strategies.is_empty() {
        return Err(Error::InvalidArgument("no strategies given".into()));
    }
    if trials == 0 && strategies.contains(&StudyStrategy::Random) {
        return Err(Error::InvalidArgument("trials must be at least 1 for random sampling".into()));
    }

    let mut rows = Vec::new();
    if strategies.contains(&StudyStrategy::Uniform) {
        let cells = sizes
            .iter()
            .map(|&n| {
                let m = function_mean(f, &SamplePlan::new(iv, Sampling::Uniform { n })?)?;
                Ok(ConvergenceCell {
                    n,
                    mean: m.mean,
                    stderr: Some(m.stderr),
                    seed: None,
                    display: display(m.mean),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(ConvergenceRow {
            label: "Uniform Sampling".into(),
            kind: RowKind::Uniform,
            cells,
        });
    }

    if strategies.contains(&StudyStrategy::Random) {
        let mut trial_rows = Vec::with_capacity(trials);
        for trial in 1..=trials {
            let cells = sizes
                .iter()
                .enumerate()
                .map(|(j, &n)| {
                    let seed = derive_seed(base_seed, trial, j);
                    let m = function_mean(f, &SamplePlan::new(iv, Sampling::Random { n, seed })?)?;
                    Ok(ConvergenceCell {
                        n,
                        mean: m.mean,
                        stderr: Some(m.stderr),
                        seed: Some(seed),
                        display: display(m.mean),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            trial_rows.push(ConvergenceRow {
                label: format!("Trial {trial}"),
                kind: RowKind::Trial(trial),
                cells,
            });
        }
        let averages = sizes
            .iter()
            .enumerate()
            .map(|(j, &n)| {
                let means: Vec<f64> = trial_rows.iter().map(|r| r.cells[j].mean).collect();
                let m = arithmetic_mean(&means)?;
                Ok(ConvergenceCell {
                    n,
                    mean: m.mean,
                    stderr: None,
                    seed: None,
                    display: display(m.mean),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(trial_rows);
        rows.push(ConvergenceRow {
            label: "Average".into(),
            kind: RowKind::Average,
            cells: averages,
        });
    }

    Ok(ConvergenceReport {
        function: f.to_string(),
        interval: iv,
        sizes: sizes.to_vec(),
        trials,
        base_seed,
        rows,
        reference: None,
    })
}
