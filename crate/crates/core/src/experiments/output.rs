//! CSV emission and the run-metadata sidecar.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;
use crate::optimize::{BfgsConfig, RestartSpec};

use super::{ConvergenceRow, SizeConsistencyRow, VarianceRow};

pub const CONVERGENCE_HEADER: [&str; 9] = [
    "layer",
    "energy",
    "error_vs_exact",
    "per_site_energy",
    "n_params",
    "n_two_qubit",
    "asap_depth",
    "iterations",
    "wall_time_s",
];
pub const VARIANCE_HEADER: [&str; 7] =
    ["kind", "n_qubits", "layers", "parameter_id", "mode", "sample_count", "variance"];
pub const SIZE_CONSISTENCY_HEADER: [&str; 6] =
    ["kind", "L", "e_sub", "e_composite", "infidelity_sub", "infidelity_composite"];

/// `x` with 12 significant digits, shortest form (like C's `%.12g`).
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows<R: Read, T: DeserializeOwned>(input: R) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| Ok(row?)).collect()
}

pub fn write_convergence_csv<W: Write>(out: W, rows: &[ConvergenceRow]) -> Result<()> {
    write_rows(
        out,
        &CONVERGENCE_HEADER,
        rows.iter().map(|r| {
            vec![
                r.layer.to_string(),
                format_float(r.energy),
                format_float(r.error_vs_exact),
                r.per_site_energy.map(format_float).unwrap_or_default(),
                r.n_params.to_string(),
                r.n_two_qubit.to_string(),
                r.asap_depth.to_string(),
                r.iterations.to_string(),
                format_float(r.wall_time_s),
            ]
        }),
    )
}

pub fn read_convergence_csv<R: Read>(input: R) -> Result<Vec<ConvergenceRow>> {
    read_rows(input)
}

pub fn write_variance_csv<W: Write>(out: W, rows: &[VarianceRow]) -> Result<()> {
    write_rows(
        out,
        &VARIANCE_HEADER,
        rows.iter().map(|r| {
            vec![
                r.kind.to_string(),
                r.n_qubits.to_string(),
                r.layers.to_string(),
                r.parameter_id.to_string(),
                r.mode.to_string(),
                r.sample_count.to_string(),
                format_float(r.variance),
            ]
        }),
    )
}

pub fn read_variance_csv<R: Read>(input: R) -> Result<Vec<VarianceRow>> {
    read_rows(input)
}

pub fn write_size_consistency_csv<W: Write>(out: W, rows: &[SizeConsistencyRow]) -> Result<()> {
    write_rows(
        out,
        &SIZE_CONSISTENCY_HEADER,
        rows.iter().map(|r| {
            vec![
                r.kind.to_string(),
                r.layers.to_string(),
                format_float(r.e_sub),
                format_float(r.e_composite),
                format_float(r.infidelity_sub),
                format_float(r.infidelity_composite),
            ]
        }),
    )
}

pub fn read_size_consistency_csv<R: Read>(input: R) -> Result<Vec<SizeConsistencyRow>> {
    read_rows(input)
}

/// Sidecar written next to every CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub restarts: Option<RestartSpec>,
    pub bfgs: Option<BfgsConfig>,
    #[serde(default)]
    pub extra: Map<String, Value>,
}

impl RunMetadata {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            seed: None,
            restarts: None,
            bfgs: None,
            extra: Map::new(),
        }
    }

    pub fn with_optimizer(mut self, bfgs: &BfgsConfig, restarts: &RestartSpec) -> Self {
        self.seed = Some(restarts.seed);
        self.restarts = Some(restarts.clone());
        self.bfgs = Some(*bfgs);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Value>) {
        self.extra.insert(key.to_string(), value.into());
    }
}

/// `<output>.meta.json`.
pub fn metadata_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_metadata(output: &Path, meta: &RunMetadata) -> Result<PathBuf> {
    let path = metadata_path(output);
    let mut f = File::create(&path)?;
    serde_json::to_writer_pretty(&mut f, meta)?;
    f.write_all(b"\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.5), "1.5");
        assert_eq!(format_float(-0.830540123456789), "-0.830540123457");
        assert_eq!(format_float(1234567.890123456), "1234567.89012");
        assert_eq!(format_float(1.0e-7), "1e-7");
        assert_eq!(format_float(2.5e-12), "2.5e-12");
        assert_eq!(format_float(9.9999999999999), "10");
        assert_eq!(format_float(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_float(-1.99615032551880), "-1.99615032552");
    }

    #[test]
    fn metadata_path_appends_suffix() {
        assert_eq!(metadata_path(Path::new("out/conv.csv")), PathBuf::from("out/conv.csv.meta.json"));
    }
}
