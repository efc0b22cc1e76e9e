//! Parameterized circuits for the six hardware-efficient ansatz families.
//!
//! Every family is a stack of identical repeating layers applied to a
//! reference state. The XYZ families use a mirrored staircase of two-qubit
//! blocks `U2(theta, phi) = [I (x) Ry(phi/2)] fSim(theta, phi) [I (x) Ry(-phi/2)]`;
//! the mirrored half reuses the parameters of the first half with negated
//! angles, so a layer with all parameters zero is exactly the identity.

mod builders;
mod circuit;
mod compile;
mod embed;
mod product;
mod resources;

pub use builders::build_ansatz;
pub use circuit::{Circuit, GateOp, ParamExpr, ParamLabel, ParamRole};
pub use compile::{bond_assignment, compile_pauli_rotation, BondGate};
pub use embed::{compose_subsystem_params, embed_subsystem_params};
pub use product::{prepare_product_state, QubitState};
pub use resources::{resource_counts, table_counts, ResourceCounts};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::Statevector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AnsatzKind {
    #[serde(rename = "ry-linear")]
    RyLinear,
    #[serde(rename = "ry-full")]
    RyFull,
    #[serde(rename = "ryrz-full")]
    RyRzFull,
    #[serde(rename = "aswap")]
    Aswap,
    #[serde(rename = "xyz1f")]
    Xyz1F,
    #[serde(rename = "xyz2f")]
    Xyz2F,
}

impl AnsatzKind {
    pub const ALL: [AnsatzKind; 6] = [
        AnsatzKind::RyLinear,
        AnsatzKind::RyFull,
        AnsatzKind::RyRzFull,
        AnsatzKind::Aswap,
        AnsatzKind::Xyz1F,
        AnsatzKind::Xyz2F,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::RyLinear => "ry-linear",
            AnsatzKind::RyFull => "ry-full",
            AnsatzKind::RyRzFull => "ryrz-full",
            AnsatzKind::Aswap => "aswap",
            AnsatzKind::Xyz1F => "xyz1f",
            AnsatzKind::Xyz2F => "xyz2f",
        }
    }

    /// Whether one layer can be set to the identity (so energies are
    /// monotone under layerwise growth).
    pub fn has_identity_layer(self) -> bool {
        matches!(self, AnsatzKind::Xyz1F | AnsatzKind::Xyz2F)
    }

    pub fn is_xyz(self) -> bool {
        self.has_identity_layer()
    }

    /// Parameters in one repeating layer.
    pub fn params_per_layer(self, n_qubits: usize) -> usize {
        let n = n_qubits;
        match self {
            AnsatzKind::RyLinear | AnsatzKind::RyFull => n,
            AnsatzKind::RyRzFull => 2 * n,
            AnsatzKind::Aswap => 2 * n.saturating_sub(1),
            AnsatzKind::Xyz1F => 4 * n - 1,
            AnsatzKind::Xyz2F => 5 * n - 2,
        }
    }

    /// Parameters in the initial rotation column (Ry families only).
    pub fn initial_params(self, n_qubits: usize) -> usize {
        match self {
            AnsatzKind::RyLinear | AnsatzKind::RyFull => n_qubits,
            AnsatzKind::RyRzFull => 2 * n_qubits,
            _ => 0,
        }
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnsatzKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        AnsatzKind::ALL
            .into_iter()
            .find(|k| k.name().replace('-', "") == key)
            .ok_or_else(|| Error::Input(format!("unknown ansatz `{s}`")))
    }
}

/// `U(params) |reference>` for a built circuit.
pub fn run(circuit: &Circuit, params: &[f64], reference: &Statevector) -> Result<Statevector> {
    circuit.run(params, reference)
}

/// Néel bitstring `1010...` used as the antiferromagnetic reference.
pub fn neel_bitstring(n_qubits: usize) -> String {
    (0..n_qubits).map(|q| if q % 2 == 0 { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in AnsatzKind::ALL {
            assert_eq!(k.name().parse::<AnsatzKind>().unwrap(), k);
        }
        assert_eq!("XYZ2F".parse::<AnsatzKind>().unwrap(), AnsatzKind::Xyz2F);
        assert_eq!("RyRz_Full".parse::<AnsatzKind>().unwrap(), AnsatzKind::RyRzFull);
        assert!("uccsd".parse::<AnsatzKind>().is_err());
    }

    #[test]
    fn neel() {
        assert_eq!(neel_bitstring(5), "10101");
    }
}
