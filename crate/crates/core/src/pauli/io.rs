//! JSON Hamiltonian files.
//!
//! ```json
//! {"format_version": 1, "n_qubits": 2,
//!  "terms": [{"pauli": "ZI", "coeff": 0.5}],
//!  "metadata": {"reference_bitstring": "10"}}
//! ```
//!
//! Coefficients must be real; complex coefficients are rejected since every
//! supported Hamiltonian is Hermitian with real Pauli weights.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{PauliString, PauliSum, MAX_PAULI_QUBITS};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianFile {
    pub format_version: u64,
    pub hamiltonian: PauliSum,
    pub metadata: Map<String, Value>,
}

impl HamiltonianFile {
    pub fn new(hamiltonian: PauliSum) -> Self {
        Self { format_version: FORMAT_VERSION, hamiltonian, metadata: Map::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    pub fn reference_bitstring(&self) -> Option<&str> {
        self.metadata.get("reference_bitstring").and_then(Value::as_str)
    }

    pub fn e_fci(&self) -> Option<f64> {
        self.metadata.get("e_fci").and_then(Value::as_f64)
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Term {
            pauli: String,
            coeff: f64,
        }
        #[derive(Serialize)]
        struct Raw<'a> {
            format_version: u64,
            n_qubits: usize,
            terms: Vec<Term>,
            metadata: &'a Map<String, Value>,
        }
        let raw = Raw {
            format_version: self.format_version,
            n_qubits: self.n_qubits(),
            terms: self
                .hamiltonian
                .terms()
                .iter()
                .map(|(c, p)| Term { pauli: p.to_string(), coeff: *c })
                .collect(),
            metadata: &self.metadata,
        };
        let mut s = serde_json::to_string_pretty(&raw)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}"), None))?;
        let obj = value.as_object().ok_or_else(|| parse_err("top level must be an object", None))?;

        let format_version = obj
            .get("format_version")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("missing integer `format_version`", None))?;
        if format_version != FORMAT_VERSION {
            return Err(parse_err(format!("unsupported format_version {format_version}"), None));
        }
        let n_qubits = obj
            .get("n_qubits")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 1 && n as usize <= MAX_PAULI_QUBITS)
            .ok_or_else(|| parse_err(format!("`n_qubits` must be an integer in 1..={MAX_PAULI_QUBITS}"), None))?
            as usize;
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("missing array `terms`", None))?;

        let mut hamiltonian = PauliSum::new(n_qubits);
        for (i, term) in terms.iter().enumerate() {
            let pauli = term
                .get("pauli")
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err("term needs a string `pauli`", Some(i)))?;
            if pauli.chars().count() != n_qubits {
                return Err(parse_err(
                    format!("pauli `{pauli}` has length {}, expected {n_qubits}", pauli.chars().count()),
                    Some(i),
                ));
            }
            let string = PauliString::parse(pauli).map_err(|e| parse_err(e.to_string(), Some(i)))?;
            let coeff = match term.get("coeff") {
                Some(Value::Number(n)) => n.as_f64().filter(|c| c.is_finite()),
                Some(Value::Array(_)) | Some(Value::Object(_)) => {
                    return Err(parse_err("complex coefficients are not supported; Hamiltonians must be Hermitian with real weights", Some(i)));
                }
                _ => None,
            }
            .ok_or_else(|| parse_err("term needs a finite real `coeff`", Some(i)))?;
            hamiltonian.push(coeff, string)?;
        }

        let metadata = match obj.get("metadata") {
            None | Some(Value::Null) => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(parse_err("`metadata` must be an object", None)),
        };
        Ok(Self { format_version, hamiltonian, metadata })
    }
}

fn parse_err(message: impl Into<String>, term: Option<usize>) -> Error {
    let message = message.into();
    let message = match term {
        Some(i) => format!("term {i}: {message}"),
        None => message,
    };
    Error::Parse { message, term }
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<HamiltonianFile> {
    HamiltonianFile::from_json(&fs::read_to_string(path)?)
}

pub fn save_hamiltonian(file: &HamiltonianFile, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, file.to_json()?)?;
    Ok(())
}
