//! Parameter assignments that make one XYZ layer equal `exp(i theta P)`.
//!
//! The opening single-qubit pair rotates each non-Z letter onto Z, the
//! two-qubit staircase gathers the Z-parity of the support onto one carrying
//! qubit (CNOT to absorb a support qubit, iSWAP to move the parity across a
//! qubit outside the support, identity elsewhere), the central `Rz` on the
//! carrying qubit applies the phase, and the mirrored half undoes the rest.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{input, Result};
use crate::pauli::PauliString;

use super::{build_ansatz, AnsatzKind, ParamRole};

/// Two-qubit block setting on one bond of the staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BondGate {
    Identity,
    Cnot,
    ISwap,
}

impl BondGate {
    /// `(theta, phi)` of `U2` realizing the gate.
    pub fn angles(self) -> (f64, f64) {
        match self {
            BondGate::Identity => (0.0, 0.0),
            BondGate::Cnot => (0.0, PI),
            BondGate::ISwap => (-FRAC_PI_2, 0.0),
        }
    }
}

impl fmt::Display for BondGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BondGate::Identity => "I",
            BondGate::Cnot => "CNOT",
            BondGate::ISwap => "iSWAP",
        })
    }
}

/// Staircase gates for `p`, bond `k` acting on qubits `(k, k+1)`, together
/// with the qubit that ends up carrying the parity.
pub fn bond_assignment(p: &PauliString, kind: AnsatzKind) -> Result<(Vec<BondGate>, usize)> {
    if !kind.is_xyz() {
        return input(format!("Pauli rotations compile only onto XYZ ansaetze, not {kind}"));
    }
    let support = p.support();
    let (Some(&first), Some(&last)) = (support.first(), support.last()) else {
        return input("cannot compile the identity string");
    };
    let n = p.n_qubits();
    let carrier = if kind == AnsatzKind::Xyz1F { n - 1 } else { last };
    let in_support = |q: usize| p.letter(q) != 'I';
    let bonds = (0..n.saturating_sub(1))
        .map(|k| {
            if k < first || k >= carrier {
                BondGate::Identity
            } else if k < last && in_support(k + 1) {
                BondGate::Cnot
            } else {
                BondGate::ISwap
            }
        })
        .collect();
    Ok((bonds, carrier))
}

/// One layer's parameters realizing `exp(i theta p)` up to a global phase.
pub fn compile_pauli_rotation(p: &PauliString, theta: f64, kind: AnsatzKind) -> Result<Vec<f64>> {
    let (bonds, carrier) = bond_assignment(p, kind)?;
    let layer = build_ansatz(kind, p.n_qubits(), 1)?;
    // Rz(gamma) = exp(-i gamma Z / 2)
    let gamma = -2.0 * theta;
    let params = layer
        .labels()
        .iter()
        .map(|label| match label.role {
            ParamRole::Alpha if p.letter(label.site) == 'Y' => FRAC_PI_2,
            ParamRole::Beta if p.letter(label.site) == 'X' => -FRAC_PI_2,
            ParamRole::Theta => bonds[label.site].angles().0,
            ParamRole::Phi => bonds[label.site].angles().1,
            ParamRole::Gamma if label.site == carrier => gamma,
            _ => 0.0,
        })
        .collect();
    Ok(params)
}
