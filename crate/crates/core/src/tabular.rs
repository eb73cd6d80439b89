//! Data-defined functions: a table of `(x_i, f_i)` pairs.
//!
//! Between nodes the function is piecewise linear; outside the data span it
//! is undefined. Means and integrals over a table use the plain arithmetic
//! mean of the ordinates, even when the abscissae are unevenly spaced.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mean_integral::{arithmetic_mean, IntegralResult, MeanEstimate};
use crate::sampling::Interval;

const FREDERICKSBURG_CSV: &str = include_str!("../data/fredericksburg_sat.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabularFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    x_label: Option<String>,
    y_label: Option<String>,
    source: String,
}

impl TabularFunction {
    /// Builds a table from `(x, f)` pairs, sorting by `x`.
    pub fn from_pairs(pairs: &[(f64, f64)], source: impl Into<String>) -> Result<Self> {
        let rows: Vec<(f64, f64, u64)> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (x, y, i as u64 + 1))
            .collect();
        Self::from_rows(rows, None, None, source.into())
    }

    fn from_rows(
        mut rows: Vec<(f64, f64, u64)>,
        x_label: Option<String>,
        y_label: Option<String>,
        source: String,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&(x, y, line)) = rows.iter().find(|r| !r.0.is_finite() || !r.1.is_finite()) {
            return Err(Error::Csv {
                line,
                message: format!("non-finite value in row ({x}, {y})"),
            });
        }
        rows.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.2.cmp(&q.2)));
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateAbscissa {
                x: w[1].0,
                line: w[0].2.max(w[1].2),
            });
        }
        let (xs, ys) = rows.into_iter().map(|(x, y, _)| (x, y)).unzip();
        Ok(TabularFunction {
            xs,
            ys,
            x_label,
            y_label,
            source,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn labels(&self) -> (Option<&str>, Option<&str>) {
        (self.x_label.as_deref(), self.y_label.as_deref())
    }

    /// Data span `[min x, max x]`; needs at least two rows.
    pub fn span(&self) -> Result<Interval> {
        if self.len() < 2 {
            return Err(Error::InvalidArgument(
                "a table needs at least two rows to span an interval".into(),
            ));
        }
        Interval::new(self.xs[0], self.xs[self.len() - 1])
    }

    /// Writes the table back out as CSV. Values use the shortest decimal
    /// form that parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let (Some(x), Some(y)) = self.labels() {
            out.push_str(&format!("{x},{y}\n"));
        }
        for (x, y) in self.xs.iter().zip(&self.ys) {
            out.push_str(&format!("{x:?},{y:?}\n"));
        }
        out
    }
}

fn parse_field(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok()
}

/// Reads a two-column numeric CSV. A first row that is not numeric is taken
/// as the header.
pub fn load_csv<R: Read>(reader: R, source: impl Into<String>) -> Result<TabularFunction> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    let mut labels = (None, None);
    for (i, record) in csv.records().enumerate() {
        let record = record.map_err(|e| Error::Csv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Csv {
                line,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        match (parse_field(&record[0]), parse_field(&record[1])) {
            (Some(x), Some(y)) => rows.push((x, y, line)),
            _ if i == 0 => {
                labels = (Some(record[0].to_string()), Some(record[1].to_string()));
            }
            _ => {
                return Err(Error::Csv {
                    line,
                    message: format!("non-numeric row `{},{}`", &record[0], &record[1]),
                })
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Csv {
            line: 0,
            message: "no data rows".into(),
        });
    }
    TabularFunction::from_rows(rows, labels.0, labels.1, source.into())
}

/// Annual mean surface air temperature (deg C) at Fredericksburg, Virginia,
/// 1951-2010, from the U.S. Historical Climatology Network.
pub fn fredericksburg_sat() -> TabularFunction {
    load_csv(FREDERICKSBURG_CSV.as_bytes(), "fredericksburg_sat.csv")
        .expect("bundled fixture is valid")
}

/// The bundled fixture as raw CSV text.
pub fn fredericksburg_sat_csv() -> &'static str {
    FREDERICKSBURG_CSV
}

pub fn tabular_mean(tf: &TabularFunction) -> MeanEstimate {
    arithmetic_mean(&tf.ys).expect("table invariants guarantee finite, non-empty ordinates")
}

pub(crate) fn interpolate_nodes(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if xs.len() < 2 || !(xs[0] <= x && x <= xs[xs.len() - 1]) {
        return None;
    }
    match xs.binary_search_by(|probe| probe.total_cmp(&x)) {
        Ok(i) => Some(ys[i]),
        Err(i) => {
            let (x0, x1) = (xs[i - 1], xs[i]);
            let (y0, y1) = (ys[i - 1], ys[i]);
            Some(y0 + (y1 - y0) * ((x - x0) / (x1 - x0)))
        }
    }
}

/// Piecewise-linear interpolation; exact at nodes, no extrapolation.
pub fn interpolate(tf: &TabularFunction, x: f64) -> Result<f64> {
    if tf.len() < 2 {
        return Err(Error::InvalidArgument(
            "interpolation needs at least two rows".into(),
        ));
    }
    interpolate_nodes(&tf.xs, &tf.ys, x).ok_or(Error::OutOfRange {
        value: x,
        lo: tf.xs[0],
        hi: tf.xs[tf.len() - 1],
    })
}

/// `(max x - min x)` times the mean of the ordinates.
pub fn tabular_integral(tf: &TabularFunction) -> Result<IntegralResult> {
    let span = tf.span()?;
    Ok(IntegralResult::from_mean(span, tabular_mean(tf)))
}
