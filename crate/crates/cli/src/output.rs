//! CSV and JSON artifacts. Every CSV starts with a `#` line naming the
//! artifact version and the column units, followed by a plain header row.
//! Floats are written in scientific notation with 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use squeeze_core::coefficients::CoefficientPath;
use squeeze_core::dynamics::VarianceSeries;

use crate::error::RunError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn spectrum_file_name(s: f64) -> String {
    format!("spectrum_s{s}.csv")
}

pub fn wigner_file_name(t: f64) -> String {
    format!("wigner_t{t:.4}.csv")
}

struct CsvFile<'a> {
    path: &'a Path,
    out: BufWriter<File>,
}

impl<'a> CsvFile<'a> {
    fn create(path: &'a Path, units: &str, columns: &[&str]) -> Result<Self, RunError> {
        let file = File::create(path).map_err(|e| RunError::io(path, e))?;
        let mut csv = Self {
            path,
            out: BufWriter::new(file),
        };
        csv.line(&format!("# squeeze {VERSION}; columns: {units}"))?;
        csv.line(&columns.join(","))?;
        Ok(csv)
    }

    fn line(&mut self, text: &str) -> Result<(), RunError> {
        writeln!(self.out, "{text}").map_err(|e| RunError::io(self.path, e))
    }

    fn row(&mut self, values: &[f64]) -> Result<(), RunError> {
        let text = values
            .iter()
            .map(|&v| fmt_float(v))
            .collect::<Vec<_>>()
            .join(",");
        self.line(&text)
    }

    fn finish(mut self) -> Result<(), RunError> {
        self.out.flush().map_err(|e| RunError::io(self.path, e))
    }
}

pub fn write_coefficients(path: &Path, coeffs: &CoefficientPath) -> Result<(), RunError> {
    let mut csv = CsvFile::create(
        path,
        "t [1/omega0], delta [omega0], gamma [omega0], big_gamma [1], delta_big_gamma [1]",
        &["t", "delta", "gamma", "big_gamma", "delta_big_gamma"],
    )?;
    for i in 0..coeffs.len() {
        csv.row(&[
            coeffs.grid.time(i),
            coeffs.delta[i],
            coeffs.gamma[i],
            coeffs.big_gamma[i],
            coeffs.delta_big_gamma[i],
        ])?;
    }
    csv.finish()
}

pub fn write_variances(path: &Path, vs: &VarianceSeries) -> Result<(), RunError> {
    let mut csv = CsvFile::create(
        path,
        "t [1/omega0], var_x [1], var_y [1], uncertainty [1], squeezed [0|1, var_x < 0.5]",
        &["t", "var_x", "var_y", "uncertainty", "squeezed"],
    )?;
    for i in 0..vs.var_x.len() {
        let text = format!(
            "{},{},{},{},{}",
            fmt_float(vs.grid.time(i)),
            fmt_float(vs.var_x[i]),
            fmt_float(vs.var_y[i]),
            fmt_float(vs.uncertainty[i]),
            u8::from(vs.squeezed[i])
        );
        csv.line(&text)?;
    }
    csv.finish()
}

pub fn write_spectrum(path: &Path, series: &[(f64, f64)]) -> Result<(), RunError> {
    let mut csv = CsvFile::create(
        path,
        "omega_bar [omega0], I_bar [I/(g^2 k_B T)]",
        &["omega_bar", "I_bar"],
    )?;
    for &(w, i) in series {
        csv.row(&[w, i])?;
    }
    csv.finish()
}

pub fn write_wigner(path: &Path, samples: &[(f64, f64, f64)]) -> Result<(), RunError> {
    let mut csv = CsvFile::create(
        path,
        "alpha_x [1], alpha_y [1], W [1]",
        &["alpha_x", "alpha_y", "W"],
    )?;
    for &(x, y, w) in samples {
        csv.row(&[x, y, w])?;
    }
    csv.finish()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(value).expect("summary serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| RunError::io(path, e))
}
